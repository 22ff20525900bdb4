//! Exact polyhedral descriptions of achievable degrees-of-freedom triples.
//!
//! Regions live in 3-space: a list of inequalities `a·d <= b` with 0/1
//! coefficient triples and rational bounds, on top of the implicit `d >= 0`.
//! Everything in this module is exact rational arithmetic; no floating point
//! or tolerance appears anywhere.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{acyclic_vertex_subsets, SideInfoGraph, VertexSubset};

pub type Rat = Ratio<i64>;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Ratio::from_integer(n)
}

/// Shorthand for the exact fraction `n / d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegionError {
    #[error("region is unbounded in coordinate d{0}")]
    Unbounded(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid region data: {0}")]
    Invalid(String),
}

/// Antenna counts at the transmitter and the three receivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntennaConfig {
    /// Transmit antennas.
    pub tx: u32,
    /// Receive antennas, indexed by receiver − 1.
    pub rx: [u32; 3],
}

impl AntennaConfig {
    pub fn new(tx: u32, rx1: u32, rx2: u32, rx3: u32) -> Result<Self, RegionError> {
        if tx == 0 || rx1 == 0 || rx2 == 0 || rx3 == 0 {
            return Err(RegionError::Invalid(
                "antenna counts must all be positive".to_string(),
            ));
        }
        Ok(AntennaConfig { tx, rx: [rx1, rx2, rx3] })
    }

    /// Receive antennas at vertex `v` in 1..=3.
    pub fn rx(&self, v: u8) -> u32 {
        self.rx[(v - 1) as usize]
    }

    pub fn rx_total(&self) -> u32 {
        self.rx.iter().sum()
    }

    pub fn as_array(&self) -> [u32; 4] {
        [self.tx, self.rx[0], self.rx[1], self.rx[2]]
    }
}

impl FromStr for AntennaConfig {
    type Err = RegionError;

    /// Parses `"N0,N1,N2,N3"`.
    fn from_str(s: &str) -> Result<Self, RegionError> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(RegionError::Parse(format!(
                "expected 4 comma-separated antenna counts, got `{s}`"
            )));
        }
        let mut values = [0u32; 4];
        for (slot, part) in values.iter_mut().zip(&parts) {
            *slot = part
                .parse::<u32>()
                .map_err(|_| RegionError::Parse(format!("bad antenna count `{part}`")))?;
        }
        AntennaConfig::new(values[0], values[1], values[2], values[3])
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.tx, self.rx[0], self.rx[1], self.rx[2])
    }
}

/// One inequality `a1·d1 + a2·d2 + a3·d3 <= b` with `a` in {0,1}^3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearConstraint {
    pub coeffs: [u8; 3],
    pub bound: Rat,
}

impl LinearConstraint {
    pub fn new(coeffs: [u8; 3], bound: Rat) -> Self {
        let c = LinearConstraint { coeffs, bound };
        c.validate().expect("constraint must be well formed");
        c
    }

    pub fn from_subset(subset: VertexSubset, bound: Rat) -> Self {
        let mut coeffs = [0u8; 3];
        for v in subset.members() {
            coeffs[(v - 1) as usize] = 1;
        }
        LinearConstraint::new(coeffs, bound)
    }

    fn validate(&self) -> Result<(), RegionError> {
        if self.coeffs.iter().all(|&a| a == 0) {
            return Err(RegionError::Invalid("constraint with zero coefficients".into()));
        }
        if self.coeffs.iter().any(|&a| a > 1) {
            return Err(RegionError::Invalid("coefficients must be 0 or 1".into()));
        }
        if self.bound.is_negative() {
            return Err(RegionError::Invalid("constraint bound must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn evaluate(&self, p: &RationalPoint) -> Rat {
        let mut acc = Rat::zero();
        for (a, d) in self.coeffs.iter().zip(&p.coords) {
            if *a == 1 {
                acc += *d;
            }
        }
        acc
    }

    pub fn admits(&self, p: &RationalPoint) -> bool {
        self.evaluate(p) <= self.bound
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if *a == 1 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "d{}", k + 1)?;
                first = false;
            }
        }
        write!(f, " <= {}", self.bound)
    }
}

impl Serialize for LinearConstraint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            a: [u8; 3],
            b: RatJson,
        }
        Repr { a: self.coeffs, b: self.bound.into() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearConstraint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            a: [u8; 3],
            b: RatJson,
        }
        let repr = Repr::deserialize(deserializer)?;
        let bound: Rat = repr.b.try_into().map_err(D::Error::custom)?;
        let c = LinearConstraint { coeffs: repr.a, bound };
        c.validate().map_err(D::Error::custom)?;
        Ok(c)
    }
}

/// Exact rational pair used on the wire: `{"num": .., "den": ..}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RatJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rat> for RatJson {
    fn from(r: Rat) -> Self {
        RatJson { num: *r.numer(), den: *r.denom() }
    }
}

impl TryFrom<RatJson> for Rat {
    type Error = RegionError;

    fn try_from(r: RatJson) -> Result<Self, RegionError> {
        if r.den == 0 {
            return Err(RegionError::Invalid("rational with zero denominator".into()));
        }
        Ok(Ratio::new(r.num, r.den))
    }
}

/// A point of the region, held exactly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub coords: [Rat; 3],
}

impl RationalPoint {
    pub fn new(d1: Rat, d2: Rat, d3: Rat) -> Self {
        RationalPoint { coords: [d1, d2, d3] }
    }

    pub fn from_integers(d: [u32; 3]) -> Self {
        RationalPoint { coords: [rat(d[0] as i64), rat(d[1] as i64), rat(d[2] as i64)] }
    }

    pub fn origin() -> Self {
        RationalPoint { coords: [Rat::zero(); 3] }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn as_integer_triple(&self) -> Option<[u32; 3]> {
        if !self.is_integral() {
            return None;
        }
        let mut out = [0u32; 3];
        for (slot, c) in out.iter_mut().zip(&self.coords) {
            *slot = u32::try_from(c.to_integer()).ok()?;
        }
        Some(out)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoint{self}")
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr: [RatJson; 3] = [
            self.coords[0].into(),
            self.coords[1].into(),
            self.coords[2].into(),
        ];
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = <[RatJson; 3]>::deserialize(deserializer)?;
        let mut coords = [Rat::zero(); 3];
        for (slot, r) in coords.iter_mut().zip(repr) {
            *slot = r.try_into().map_err(D::Error::custom)?;
        }
        Ok(RationalPoint { coords })
    }
}

/// A bounded convex polytope in the nonnegative octant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub constraints: Vec<LinearConstraint>,
}

impl Region {
    pub fn new(constraints: Vec<LinearConstraint>) -> Self {
        Region { constraints }
    }

    /// Exact membership: `p >= 0` and every inequality holds.
    pub fn contains(&self, p: &RationalPoint) -> bool {
        p.is_nonnegative() && self.constraints.iter().all(|c| c.admits(p))
    }

    /// All extreme points, sorted lexicographically. Solves every triple of
    /// constraint/floor planes with independent normals by rational
    /// elimination and keeps the feasible solutions.
    pub fn vertices(&self) -> Result<Vec<RationalPoint>, RegionError> {
        for i in 0..3 {
            if !self.constraints.iter().any(|c| c.coeffs[i] == 1) {
                return Err(RegionError::Unbounded(i + 1));
            }
        }
        let mut planes: Vec<([i64; 3], Rat)> = self
            .constraints
            .iter()
            .map(|c| ([c.coeffs[0] as i64, c.coeffs[1] as i64, c.coeffs[2] as i64], c.bound))
            .collect();
        for i in 0..3 {
            let mut normal = [0i64; 3];
            normal[i] = 1;
            planes.push((normal, Rat::zero()));
        }

        let mut out = Vec::new();
        for a in 0..planes.len() {
            for b in (a + 1)..planes.len() {
                for c in (b + 1)..planes.len() {
                    let normals = [planes[a].0, planes[b].0, planes[c].0];
                    let rhs = [planes[a].1, planes[b].1, planes[c].1];
                    if let Some(coords) = solve3(&normals, &rhs) {
                        let p = RationalPoint { coords };
                        if self.contains(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Vertices with at least one non-integer coordinate.
    pub fn fractional_vertices(&self) -> Result<Vec<RationalPoint>, RegionError> {
        Ok(self.vertices()?.into_iter().filter(|v| !v.is_integral()).collect())
    }

    /// Inclusion test via vertex enumeration, valid for convex polytopes.
    ///
    /// Panics if `self` is unbounded; build regions through the public
    /// constructors to guarantee boundedness.
    pub fn is_subset_of(&self, other: &Region) -> bool {
        self.try_is_subset_of(other).expect("region must be bounded for inclusion tests")
    }

    fn try_is_subset_of(&self, other: &Region) -> Result<bool, RegionError> {
        Ok(self.vertices()?.iter().all(|v| other.contains(v)))
    }

    /// Set equality of the two polytopes (mutual inclusion).
    pub fn equals(&self, other: &Region) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Every bound multiplied by `factor`; vertices scale accordingly.
    pub fn scale(&self, factor: Rat) -> Region {
        assert!(factor.is_positive(), "scale factor must be positive");
        Region {
            constraints: self
                .constraints
                .iter()
                .map(|c| LinearConstraint { coeffs: c.coeffs, bound: c.bound * factor })
                .collect(),
        }
    }

    /// Drops constraints whose removal leaves the point set unchanged.
    /// For display only; the full list is kept everywhere else.
    pub fn simplify(&self) -> Region {
        let mut kept = self.constraints.clone();
        let mut idx = 0;
        while idx < kept.len() {
            let mut trial = kept.clone();
            trial.remove(idx);
            let trimmed = Region { constraints: trial };
            let same = trimmed
                .try_is_subset_of(self)
                .unwrap_or(false)
                && self.try_is_subset_of(&trimmed).unwrap_or(false);
            if same {
                kept.remove(idx);
            } else {
                idx += 1;
            }
        }
        Region { constraints: kept }
    }

    /// All integer points of the region.
    pub fn integer_points(&self) -> Result<Vec<[u32; 3]>, RegionError> {
        let mut bounds = [0i64; 3];
        for i in 0..3 {
            let cap = self
                .constraints
                .iter()
                .filter(|c| c.coeffs[i] == 1)
                .map(|c| c.bound.floor().to_integer())
                .min()
                .ok_or(RegionError::Unbounded(i + 1))?;
            bounds[i] = cap.max(0);
        }
        let mut out = Vec::new();
        for d1 in 0..=bounds[0] {
            for d2 in 0..=bounds[1] {
                for d3 in 0..=bounds[2] {
                    let p = RationalPoint::new(rat(d1), rat(d2), rat(d3));
                    if self.contains(&p) {
                        out.push([d1 as u32, d2 as u32, d3 as u32]);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn det2(a: i64, b: i64, c: i64, d: i64) -> i64 {
    a * d - b * c
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2])
        - m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2])
        + m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1])
}

/// Cramer solve of `normals · x = rhs`; `None` when the normals are dependent.
fn solve3(normals: &[[i64; 3]; 3], rhs: &[Rat; 3]) -> Option<[Rat; 3]> {
    let det = det3(normals);
    if det == 0 {
        return None;
    }
    let det = rat(det);
    let mut out = [Rat::zero(); 3];
    for (k, slot) in out.iter_mut().enumerate() {
        // Expand the determinant along the column replaced by `rhs`.
        let mut numer = Rat::zero();
        for i in 0..3 {
            let mut minor = [[0i64; 2]; 2];
            let mut mi = 0;
            for r in 0..3 {
                if r == i {
                    continue;
                }
                let mut mj = 0;
                for c in 0..3 {
                    if c == k {
                        continue;
                    }
                    minor[mi][mj] = normals[r][c];
                    mj += 1;
                }
                mi += 1;
            }
            let cof = det2(minor[0][0], minor[0][1], minor[1][0], minor[1][1]);
            let signed = if (i + k) % 2 == 0 { cof } else { -cof };
            numer += rhs[i] * rat(signed);
        }
        *slot = numer / det;
    }
    Some(out)
}

/// Outer bound from acyclic induced subgraphs: one inequality
/// `sum_{k in S} d_k <= min(N0, sum_{k in S} N_k)` per acyclic subset `S`.
pub fn acyclic_outer_bound(g: SideInfoGraph, n: &AntennaConfig) -> Region {
    let constraints = acyclic_vertex_subsets(g)
        .into_iter()
        .map(|s| {
            let rx_sum: u32 = s.members().iter().map(|&v| n.rx(v)).sum();
            LinearConstraint::from_subset(s, rat(n.tx.min(rx_sum) as i64))
        })
        .collect();
    Region::new(constraints)
}

/// The splitting of a graph that carries exactly one 2-cycle whose members
/// send no arc to the remaining vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoCycleSplit {
    /// The vertex outside the 2-cycle.
    pub outside: u8,
    /// The 2-cycle pair, ascending.
    pub cycle: (u8, u8),
}

/// Detects the configuration whose region needs the extra three-way sum
/// bound: exactly one 2-cycle, and neither cycle member knows the outside
/// vertex's message.
pub fn isolated_two_cycle(g: SideInfoGraph) -> Option<TwoCycleSplit> {
    let pairs = [(1u8, 2u8), (1, 3), (2, 3)];
    let cycles: Vec<(u8, u8)> = pairs
        .into_iter()
        .filter(|&(i, j)| g.has_arc(i, j) && g.has_arc(j, i))
        .collect();
    if cycles.len() != 1 {
        return None;
    }
    let (b, c) = cycles[0];
    let outside = 6 - b - c;
    if g.has_arc(b, outside) || g.has_arc(c, outside) {
        return None;
    }
    Some(TwoCycleSplit { outside, cycle: (b, c) })
}

/// The full degrees-of-freedom region of the channel with side-information
/// graph `g`: the acyclic-subset bounds, plus — for a lone 2-cycle whose
/// members do not know the outside receiver's message — the sum bound
/// `d1 + d2 + d3 <= max(N0, N_b + N_c)` over the cycle pair `{b, c}`.
pub fn dof_region(g: SideInfoGraph, n: &AntennaConfig) -> Region {
    let mut region = acyclic_outer_bound(g, n);
    if let Some(split) = isolated_two_cycle(g) {
        let (b, c) = split.cycle;
        let bound = n.tx.max(n.rx(b) + n.rx(c));
        region
            .constraints
            .push(LinearConstraint::new([1, 1, 1], rat(bound as i64)));
    }
    region
}

/// The rate region of the three-receiver index-coding problem with side
/// information graph `g`: `sum_{k in S} R_k <= 1` per acyclic subset `S`.
pub fn index_coding_region(g: SideInfoGraph) -> Region {
    let constraints = acyclic_vertex_subsets(g)
        .into_iter()
        .map(|s| LinearConstraint::from_subset(s, Rat::one()))
        .collect();
    Region::new(constraints)
}

/// Wire format of a region together with its enumerated vertices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionDocument {
    pub constraints: Vec<LinearConstraint>,
    pub vertices: Vec<RationalPoint>,
}

impl RegionDocument {
    pub fn from_region(region: &Region) -> Result<Self, RegionError> {
        Ok(RegionDocument {
            constraints: region.constraints.clone(),
            vertices: region.vertices()?,
        })
    }

    pub fn region(&self) -> Region {
        Region::new(self.constraints.clone())
    }
}

/// CSV export of vertices: header `d1,d2,d3`, one row per vertex, each
/// coordinate as an exact `num/den` string.
pub fn vertices_csv(vertices: &[RationalPoint]) -> String {
    let mut out = String::from("d1,d2,d3\n");
    for v in vertices {
        let cells: Vec<String> = v
            .coords
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{catalog_graph, SideInfoGraph};

    fn cfg(tx: u32, r1: u32, r2: u32, r3: u32) -> AntennaConfig {
        AntennaConfig::new(tx, r1, r2, r3).unwrap()
    }

    fn point(d1: i64, d2: i64, d3: i64) -> RationalPoint {
        RationalPoint::new(rat(d1), rat(d2), rat(d3))
    }

    #[test]
    fn empty_graph_region_matches_sum_bound_form() {
        let n = cfg(9, 7, 8, 5);
        let built = dof_region(SideInfoGraph::empty(), &n);
        let literal = Region::new(vec![
            LinearConstraint::new([1, 1, 1], rat(9)),
            LinearConstraint::new([1, 0, 0], rat(7)),
            LinearConstraint::new([0, 1, 0], rat(8)),
            LinearConstraint::new([0, 0, 1], rat(5)),
        ]);
        assert!(built.equals(&literal));
    }

    #[test]
    fn lone_two_cycle_gets_extra_sum_bound() {
        let n = cfg(3, 2, 2, 2);
        let built = dof_region(catalog_graph(8), &n);
        let literal = Region::new(vec![
            LinearConstraint::new([1, 1, 0], rat(3)),
            LinearConstraint::new([1, 0, 1], rat(3)),
            LinearConstraint::new([1, 1, 1], rat(4)),
            LinearConstraint::new([1, 0, 0], rat(2)),
            LinearConstraint::new([0, 1, 0], rat(2)),
            LinearConstraint::new([0, 0, 1], rat(2)),
        ]);
        assert!(built.equals(&literal));
        assert!(isolated_two_cycle(catalog_graph(8)).is_some());
        assert_eq!(
            isolated_two_cycle(catalog_graph(8)).unwrap(),
            TwoCycleSplit { outside: 1, cycle: (2, 3) }
        );
    }

    #[test]
    fn complete_graph_region_is_the_per_link_box() {
        let n = cfg(2, 3, 1, 2);
        let built = dof_region(SideInfoGraph::complete(), &n);
        let literal = Region::new(vec![
            LinearConstraint::new([1, 0, 0], rat(2)),
            LinearConstraint::new([0, 1, 0], rat(1)),
            LinearConstraint::new([0, 0, 1], rat(2)),
        ]);
        assert!(built.equals(&literal));
    }

    #[test]
    fn outer_bound_omits_the_extra_sum_constraint() {
        let n = cfg(3, 2, 2, 2);
        let outer = acyclic_outer_bound(catalog_graph(8), &n);
        assert!(outer.contains(&point(1, 2, 2)));
        let full = dof_region(catalog_graph(8), &n);
        assert!(!full.contains(&point(1, 2, 2)));
        assert!(full.is_subset_of(&outer));
    }

    #[test]
    fn three_cycle_vertex_enumeration_at_9785() {
        let n = cfg(9, 7, 8, 5);
        let region = dof_region(catalog_graph(7), &n);
        let vertices = region.vertices().unwrap();
        assert_eq!(vertices.len(), 14);
        let half = ratio(9, 2);
        assert!(vertices.contains(&RationalPoint::new(half, half, half)));
        let fractional = region.fractional_vertices().unwrap();
        assert_eq!(fractional, vec![RationalPoint::new(half, half, half)]);
    }

    #[test]
    fn no_side_info_vertex_count_at_9785() {
        let n = cfg(9, 7, 8, 5);
        let region = dof_region(SideInfoGraph::empty(), &n);
        assert_eq!(region.vertices().unwrap().len(), 10);
        assert!(region.fractional_vertices().unwrap().is_empty());
    }

    #[test]
    fn two_cycle_three_plane_intersection_is_integral() {
        let n = cfg(3, 2, 2, 2);
        let region = dof_region(catalog_graph(8), &n);
        let vertices = region.vertices().unwrap();
        assert!(vertices.contains(&point(2, 1, 1)));
    }

    #[test]
    fn even_tx_three_cycle_region_has_no_fractional_vertex() {
        let region = dof_region(catalog_graph(7), &cfg(4, 3, 3, 3));
        assert!(region.fractional_vertices().unwrap().is_empty());
    }

    #[test]
    fn containment_examples() {
        let n = cfg(3, 2, 2, 2);
        assert!(!dof_region(catalog_graph(8), &n).contains(&point(1, 2, 2)));
        assert!(dof_region(catalog_graph(11), &n).contains(&point(1, 2, 2)));
        assert!(dof_region(catalog_graph(8), &n).contains(&RationalPoint::origin()));
    }

    #[test]
    fn strict_inclusion_of_two_cycle_region_in_class_11() {
        let n = cfg(3, 2, 2, 2);
        let r8 = dof_region(catalog_graph(8), &n);
        let r11 = dof_region(catalog_graph(11), &n);
        assert!(r8.is_subset_of(&r11));
        assert!(!r11.is_subset_of(&r8));
    }

    #[test]
    fn classes_8_9_10_share_one_region() {
        for n in [cfg(3, 2, 2, 2), cfg(9, 7, 8, 5), cfg(2, 1, 3, 1)] {
            let r8 = dof_region(catalog_graph(8), &n);
            assert!(r8.equals(&dof_region(catalog_graph(9), &n)));
            assert!(r8.equals(&dof_region(catalog_graph(10), &n)));
        }
    }

    #[test]
    fn index_coding_examples() {
        let empty = index_coding_region(SideInfoGraph::empty());
        let literal = Region::new(vec![LinearConstraint::new([1, 1, 1], Rat::one())]);
        assert!(empty.equals(&literal));

        let cycle = index_coding_region(catalog_graph(7));
        let half = ratio(1, 2);
        assert!(cycle
            .vertices()
            .unwrap()
            .contains(&RationalPoint::new(half, half, half)));

        let complete = index_coding_region(SideInfoGraph::complete());
        let cube = Region::new(vec![
            LinearConstraint::new([1, 0, 0], Rat::one()),
            LinearConstraint::new([0, 1, 0], Rat::one()),
            LinearConstraint::new([0, 0, 1], Rat::one()),
        ]);
        assert!(complete.equals(&cube));
    }

    #[test]
    fn scaling_matches_equal_antenna_regions() {
        for class in 1..=16u8 {
            let g = catalog_graph(class);
            for n in 1..=4u32 {
                let equal = cfg(n, n, n, n);
                let scaled = index_coding_region(g).scale(rat(n as i64));
                assert!(dof_region(g, &equal).equals(&scaled), "class {class}, N {n}");
            }
        }
    }

    #[test]
    fn scale_round_trip() {
        let region = dof_region(catalog_graph(7), &cfg(9, 7, 8, 5));
        let f = ratio(7, 3);
        assert_eq!(region.scale(f).scale(f.recip()), region);
        assert_eq!(region.scale(Rat::one()), region);
    }

    #[test]
    fn unbounded_region_is_rejected() {
        let open = Region::new(vec![LinearConstraint::new([1, 0, 0], rat(2))]);
        assert_eq!(open.vertices(), Err(RegionError::Unbounded(2)));
    }

    #[test]
    fn simplify_drops_dominated_constraints() {
        let n = cfg(9, 7, 8, 5);
        let mut region = dof_region(SideInfoGraph::empty(), &n);
        region.constraints.push(LinearConstraint::new([1, 1, 1], rat(100)));
        let slim = region.simplify();
        assert!(slim.constraints.len() < region.constraints.len());
        assert!(slim.equals(&region));
    }

    #[test]
    fn integer_point_enumeration_matches_membership() {
        let n = cfg(3, 2, 2, 2);
        let region = dof_region(catalog_graph(8), &n);
        let points = region.integer_points().unwrap();
        assert!(points.contains(&[2, 1, 1]));
        assert!(!points.contains(&[1, 2, 2]));
        for p in &points {
            assert!(region.contains(&RationalPoint::from_integers(*p)));
        }
    }

    #[test]
    fn document_round_trip() {
        let n = cfg(9, 7, 8, 5);
        let region = dof_region(catalog_graph(7), &n);
        let doc = RegionDocument::from_region(&region).unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: RegionDocument = serde_json::from_str(&json).unwrap();
        assert!(parsed.region().equals(&region));
        assert_eq!(parsed.vertices, doc.vertices);
    }

    #[test]
    fn csv_export_shape() {
        let vertices = vec![point(0, 0, 0), RationalPoint::new(ratio(9, 2), rat(1), rat(0))];
        let csv = vertices_csv(&vertices);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "d1,d2,d3");
        assert_eq!(lines[1], "0/1,0/1,0/1");
        assert_eq!(lines[2], "9/2,1/1,0/1");
    }

    #[test]
    fn every_vertex_has_three_independent_active_planes() {
        let n = cfg(9, 7, 8, 5);
        for class in [1u8, 7, 8, 11, 14, 16] {
            let region = dof_region(catalog_graph(class), &n);
            for v in region.vertices().unwrap() {
                let mut active: Vec<[i64; 3]> = region
                    .constraints
                    .iter()
                    .filter(|c| c.evaluate(&v) == c.bound)
                    .map(|c| [c.coeffs[0] as i64, c.coeffs[1] as i64, c.coeffs[2] as i64])
                    .collect();
                for i in 0..3 {
                    if v.coords[i].is_zero() {
                        let mut normal = [0i64; 3];
                        normal[i] = 1;
                        active.push(normal);
                    }
                }
                let independent = active.len() >= 3
                    && combinations3(&active).any(|m| det3(&m) != 0);
                assert!(independent, "vertex {v} of class {class}");
            }
        }
    }

    fn combinations3(rows: &[[i64; 3]]) -> impl Iterator<Item = [[i64; 3]; 3]> + '_ {
        let n = rows.len();
        (0..n).flat_map(move |a| {
            (a + 1..n).flat_map(move |b| {
                (b + 1..n).map(move |c| [rows[a], rows[b], rows[c]])
            })
        })
    }
}
