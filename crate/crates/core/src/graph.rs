//! Side-information graphs on three receivers.
//!
//! A side-information graph is a digraph on the vertex set {1, 2, 3}. An arc
//! `i>j` records that receiver `i` already holds the message requested by
//! receiver `j`. Graphs are value objects stored as 6-bit arc masks, so the
//! full space of 64 labeled graphs can be swept cheaply. A fixed catalog of
//! 16 representatives, one per isomorphism class, drives classification.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

/// Arc slots in mask-bit order; bit `k` of a graph mask is the arc `ARCS[k]`.
pub const ARCS: [(u8, u8); 6] = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)];

/// Number of isomorphism classes of three-vertex side-information graphs.
pub const CLASS_COUNT: u8 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid arc `{0}`: expected `i>j` with distinct i, j in 1..=3")]
    BadArc(String),
    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(u8),
    #[error("vertex {0} out of range 1..=3")]
    BadVertex(u8),
    #[error("receiver {0} cannot hold its own message as side information")]
    OwnMessage(u8),
    #[error("vertex subset must be a nonempty subset of {{1,2,3}}")]
    BadSubset,
    #[error("induced subgraph on {0:?} is cyclic; no decode order exists")]
    CyclicSubset(Vec<u8>),
}

fn arc_bit(from: u8, to: u8) -> Result<u8, GraphError> {
    if from == to {
        return Err(GraphError::SelfLoop(from));
    }
    ARCS.iter()
        .position(|&(i, j)| (i, j) == (from, to))
        .map(|p| p as u8)
        .ok_or(GraphError::BadVertex(if (1..=3).contains(&from) { to } else { from }))
}

const fn vertex_bit(v: u8) -> u8 {
    1 << (v - 1)
}

/// A side-information configuration: which receiver knows whose message.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideInfoGraph {
    mask: u8,
}

impl SideInfoGraph {
    /// The graph with no side information at all.
    pub const fn empty() -> Self {
        SideInfoGraph { mask: 0 }
    }

    /// The graph where every receiver knows both foreign messages.
    pub const fn complete() -> Self {
        SideInfoGraph { mask: 0b11_1111 }
    }

    /// Builds a graph directly from its 6-bit arc mask.
    pub fn from_mask(mask: u8) -> Self {
        assert!(mask < 64, "arc mask must use only the low 6 bits");
        SideInfoGraph { mask }
    }

    pub fn from_arcs(arcs: &[(u8, u8)]) -> Result<Self, GraphError> {
        let mut mask = 0u8;
        for &(i, j) in arcs {
            mask |= 1 << arc_bit(i, j)?;
        }
        Ok(SideInfoGraph { mask })
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    /// True when receiver `from` knows the message requested by `to`.
    pub fn has_arc(&self, from: u8, to: u8) -> bool {
        match arc_bit(from, to) {
            Ok(bit) => self.mask & (1 << bit) != 0,
            Err(_) => false,
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        ARCS.iter()
            .enumerate()
            .filter(move |(k, _)| self.mask & (1 << k) != 0)
            .map(|(_, &arc)| arc)
    }

    pub fn arc_count(&self) -> u32 {
        self.mask.count_ones()
    }

    /// The set of receivers whose messages vertex `v` knows a priori.
    pub fn out_neighbors(&self, v: u8) -> Vec<u8> {
        (1..=3).filter(|&w| self.has_arc(v, w)).collect()
    }

    /// Per-receiver known-message sets, indexed by receiver 1..=3.
    pub fn knowledge_sets(&self) -> [Vec<u8>; 3] {
        [self.out_neighbors(1), self.out_neighbors(2), self.out_neighbors(3)]
    }

    /// True when every arc of `self` is also an arc of `other`.
    pub fn is_arc_subset_of(&self, other: &SideInfoGraph) -> bool {
        self.mask & !other.mask == 0
    }

    /// Applies a vertex relabeling: arc (i, j) becomes (p(i), p(j)).
    pub fn relabel(&self, p: Permutation) -> SideInfoGraph {
        let mut mask = 0u8;
        for (i, j) in self.arcs() {
            mask |= 1 << arc_bit(p.apply(i), p.apply(j)).expect("relabeled arc is valid");
        }
        SideInfoGraph { mask }
    }

    pub fn is_acyclic(&self) -> bool {
        induced_is_acyclic(*self, 0b111)
    }
}

impl fmt::Display for SideInfoGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j) in self.arcs() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}>{j}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for SideInfoGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SideInfoGraph(\"{self}\")")
    }
}

impl FromStr for SideInfoGraph {
    type Err = GraphError;

    /// Parses the text encoding: arcs `i>j` joined by commas, empty string
    /// for the empty graph.
    fn from_str(s: &str) -> Result<Self, GraphError> {
        if s.trim().is_empty() {
            return Ok(SideInfoGraph::empty());
        }
        let mut arcs = Vec::new();
        for token in s.split(',') {
            let token = token.trim();
            let bytes: Vec<char> = token.chars().collect();
            if bytes.len() != 3 || bytes[1] != '>' {
                return Err(GraphError::BadArc(token.to_string()));
            }
            let (from, to) = (digit_vertex(bytes[0], token)?, digit_vertex(bytes[2], token)?);
            if from == to {
                return Err(GraphError::SelfLoop(from));
            }
            arcs.push((from, to));
        }
        SideInfoGraph::from_arcs(&arcs)
    }
}

fn digit_vertex(c: char, token: &str) -> Result<u8, GraphError> {
    match c {
        '1' => Ok(1),
        '2' => Ok(2),
        '3' => Ok(3),
        _ => Err(GraphError::BadArc(token.to_string())),
    }
}

/// A bijection on {1, 2, 3} used to relabel receivers.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: [u8; 3],
}

impl Permutation {
    pub const IDENTITY: Permutation = Permutation { image: [1, 2, 3] };

    /// All six bijections in lexicographic order of their image tuples.
    pub const ALL: [Permutation; 6] = [
        Permutation { image: [1, 2, 3] },
        Permutation { image: [1, 3, 2] },
        Permutation { image: [2, 1, 3] },
        Permutation { image: [2, 3, 1] },
        Permutation { image: [3, 1, 2] },
        Permutation { image: [3, 2, 1] },
    ];

    pub fn apply(&self, v: u8) -> u8 {
        self.image[(v - 1) as usize]
    }

    pub fn image(&self) -> [u8; 3] {
        self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = [0u8; 3];
        for v in 1..=3u8 {
            image[(self.apply(v) - 1) as usize] = v;
        }
        Permutation { image }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "1->{},2->{},3->{}",
            self.image[0], self.image[1], self.image[2]
        )
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// The isomorphism class of a graph: catalog index plus one relabeling that
/// carries the graph onto the catalog representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoClass {
    /// Catalog index in 1..=16.
    pub index: u8,
    /// Lexicographically smallest permutation mapping the input onto the
    /// representative of `index`.
    pub relabeling: Permutation,
}

/// A nonempty subset of the vertex set {1, 2, 3}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSubset {
    mask: u8,
}

impl VertexSubset {
    pub fn from_members(members: &[u8]) -> Result<Self, GraphError> {
        let mut mask = 0u8;
        for &v in members {
            if !(1..=3).contains(&v) {
                return Err(GraphError::BadVertex(v));
            }
            mask |= vertex_bit(v);
        }
        if mask == 0 {
            return Err(GraphError::BadSubset);
        }
        Ok(VertexSubset { mask })
    }

    pub fn full() -> Self {
        VertexSubset { mask: 0b111 }
    }

    pub fn singleton(v: u8) -> Self {
        assert!((1..=3).contains(&v));
        VertexSubset { mask: vertex_bit(v) }
    }

    /// The seven nonempty subsets in ascending mask order.
    pub fn all_nonempty() -> [VertexSubset; 7] {
        let mut out = [VertexSubset { mask: 1 }; 7];
        for (k, slot) in out.iter_mut().enumerate() {
            slot.mask = k as u8 + 1;
        }
        out
    }

    pub fn contains(&self, v: u8) -> bool {
        (1..=3).contains(&v) && self.mask & vertex_bit(v) != 0
    }

    pub fn members(&self) -> Vec<u8> {
        (1..=3).filter(|&v| self.contains(v)).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_subset_of(&self, other: &VertexSubset) -> bool {
        self.mask & !other.mask == 0
    }
}

impl fmt::Display for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.members().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for VertexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSubset({self})")
    }
}

/// Builds the graph from per-receiver known-message sets. `k[i]` lists the
/// message indices receiver `i + 1` holds a priori.
pub fn build_graph(k1: &[u8], k2: &[u8], k3: &[u8]) -> Result<SideInfoGraph, GraphError> {
    let mut arcs = Vec::new();
    for (receiver, known) in [(1u8, k1), (2, k2), (3, k3)] {
        for &m in known {
            if !(1..=3).contains(&m) {
                return Err(GraphError::BadVertex(m));
            }
            if m == receiver {
                return Err(GraphError::OwnMessage(receiver));
            }
            arcs.push((receiver, m));
        }
    }
    SideInfoGraph::from_arcs(&arcs)
}

/// All 64 labeled graphs, in ascending mask order.
pub fn all_labeled_graphs() -> impl Iterator<Item = SideInfoGraph> {
    (0u8..64).map(SideInfoGraph::from_mask)
}

fn induced_is_acyclic(g: SideInfoGraph, subset_mask: u8) -> bool {
    let mut remaining = subset_mask;
    loop {
        if remaining == 0 {
            return true;
        }
        let mut progressed = false;
        for v in 1..=3u8 {
            if remaining & vertex_bit(v) == 0 {
                continue;
            }
            let has_out = (1..=3u8)
                .any(|w| w != v && remaining & vertex_bit(w) != 0 && g.has_arc(v, w));
            if !has_out {
                remaining &= !vertex_bit(v);
                progressed = true;
            }
        }
        if !progressed {
            return false;
        }
    }
}

/// Every nonempty vertex subset whose induced subgraph has no directed cycle.
/// Singletons are always included.
pub fn acyclic_vertex_subsets(g: SideInfoGraph) -> Vec<VertexSubset> {
    VertexSubset::all_nonempty()
        .into_iter()
        .filter(|s| induced_is_acyclic(g, s.mask))
        .collect()
}

/// Keeps exactly the arcs that lie on some directed cycle (a 2-cycle or the
/// 3-cycle through the arc). Idempotent.
pub fn strip_non_cycle_arcs(g: SideInfoGraph) -> SideInfoGraph {
    let mut kept = Vec::new();
    for (i, j) in g.arcs() {
        let k = 6 - i - j;
        if g.has_arc(j, i) || (g.has_arc(j, k) && g.has_arc(k, i)) {
            kept.push((i, j));
        }
    }
    SideInfoGraph::from_arcs(&kept).expect("kept arcs are valid")
}

/// An ordering of `q` along which each vertex's known messages inside `q`
/// belong to vertices placed earlier: vertices of induced out-degree zero
/// peel off first. Fails when the induced subgraph is cyclic.
pub fn decode_order(g: SideInfoGraph, q: VertexSubset) -> Result<Vec<u8>, GraphError> {
    let mut remaining = q.mask;
    let mut order = Vec::with_capacity(q.len());
    while remaining != 0 {
        let next = (1..=3u8).find(|&v| {
            remaining & vertex_bit(v) != 0
                && !(1..=3u8).any(|w| w != v && remaining & vertex_bit(w) != 0 && g.has_arc(v, w))
        });
        match next {
            Some(v) => {
                order.push(v);
                remaining &= !vertex_bit(v);
            }
            None => return Err(GraphError::CyclicSubset(q.members())),
        }
    }
    Ok(order)
}

// Catalog representatives, one per isomorphism class. Classes 1..=6 are the
// acyclic graphs; class 7 is the directed 3-cycle; class 8 is the lone
// 2-cycle; class 16 is the complete graph.
const CATALOG_ARCS: [&[(u8, u8)]; 16] = [
    &[],
    &[(1, 2)],
    &[(1, 2), (1, 3)],
    &[(2, 1), (3, 1)],
    &[(1, 2), (2, 3)],
    &[(1, 2), (1, 3), (2, 3)],
    &[(1, 2), (2, 3), (3, 1)],
    &[(2, 3), (3, 2)],
    &[(1, 2), (2, 3), (3, 2)],
    &[(1, 2), (1, 3), (2, 3), (3, 2)],
    &[(2, 1), (2, 3), (3, 2)],
    &[(1, 2), (2, 3), (3, 2), (3, 1)],
    &[(2, 1), (3, 1), (2, 3), (3, 2)],
    &[(1, 2), (2, 1), (2, 3), (3, 2)],
    &[(1, 2), (2, 1), (2, 3), (3, 2), (1, 3)],
    &[(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)],
];

/// The 16 catalog representatives, indexed by class − 1.
pub fn catalog() -> &'static [SideInfoGraph; 16] {
    static CATALOG: OnceLock<[SideInfoGraph; 16]> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut out = [SideInfoGraph::empty(); 16];
        for (k, arcs) in CATALOG_ARCS.iter().enumerate() {
            out[k] = SideInfoGraph::from_arcs(arcs).expect("catalog arcs are valid");
        }
        out
    })
}

/// Representative graph of a catalog class (1-based index).
pub fn catalog_graph(class: u8) -> SideInfoGraph {
    assert!((1..=CLASS_COUNT).contains(&class), "class must be in 1..=16");
    catalog()[(class - 1) as usize]
}

/// Finds the unique catalog class isomorphic to `g`, together with the
/// lexicographically smallest relabeling realizing the isomorphism.
pub fn canonicalize(g: SideInfoGraph) -> IsoClass {
    for (k, rep) in catalog().iter().enumerate() {
        for perm in Permutation::ALL {
            if g.relabel(perm) == *rep {
                return IsoClass {
                    index: k as u8 + 1,
                    relabeling: perm,
                };
            }
        }
    }
    unreachable!("every three-vertex digraph matches exactly one catalog class")
}
