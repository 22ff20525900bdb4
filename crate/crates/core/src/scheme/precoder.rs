//! Per-class precoder recipes and the integer-point feasibility oracle.
//!
//! Classes 7..=16 follow fixed column recipes: zero-forcing columns drawn
//! from null-space bases first, then isotropic random columns. Classes 1..=6
//! share one no-side-information construction that searches for a
//! zero-forcing column split covering the requested point.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use super::linalg::{
    derive_rng, hstack, null_space_basis, random_unit_columns, vstack, CMat, DOMAIN_NULL,
    DOMAIN_PRECODER,
};
use super::{ChannelSet, NullBases, PrecoderSet, SchemeError, ToleranceConfig};
use crate::region::AntennaConfig;

fn pos(a: i64) -> i64 {
    a.max(0)
}

/// Null-space dimensions available for zero forcing: per-receiver
/// `(N0 - N_i)^+` and the joint `(N0 - N_2 - N_3)^+`.
pub fn zero_forcing_dims(n: &AntennaConfig) -> ([i64; 3], i64) {
    let n0 = n.tx as i64;
    let r = [
        pos(n0 - n.rx(1) as i64),
        pos(n0 - n.rx(2) as i64),
        pos(n0 - n.rx(3) as i64),
    ];
    let r23 = pos(n0 - n.rx(2) as i64 - n.rx(3) as i64);
    (r, r23)
}

fn mixed_basis(basis: CMat, rng: &mut impl Rng) -> CMat {
    if basis.ncols() == 0 {
        return basis;
    }
    let mixing = super::linalg::random_cmatrix(basis.ncols(), basis.ncols(), rng);
    let mut out = basis * mixing;
    super::linalg::normalize_columns(&mut out);
    out
}

/// Random unit-norm bases of the per-receiver null spaces and of the joint
/// null space of receivers 2 and 3. Deterministic given the channel seed.
pub fn null_bases(c: &ChannelSet) -> NullBases {
    let tol = ToleranceConfig::default().rank_tol_factor;
    let mut rng = derive_rng(c.rng_seed, DOMAIN_NULL);
    let per_receiver = [
        mixed_basis(null_space_basis(c.channel(1), tol), &mut rng),
        mixed_basis(null_space_basis(c.channel(2), tol), &mut rng),
        mixed_basis(null_space_basis(c.channel(3), tol), &mut rng),
    ];
    let joint23 = mixed_basis(
        null_space_basis(&vstack(&[c.channel(2), c.channel(3)]), tol),
        &mut rng,
    );
    NullBases { per_receiver, joint23 }
}

/// Sufficient conditions for the class scheme to deliver the integer point
/// `d`. For the one-2-cycle classes this decides the existence of a valid
/// split of the first precoder's columns by direct search.
pub fn check_integer_feasibility(class: u8, n: &AntennaConfig, d: [u32; 3]) -> bool {
    assert!((1..=16).contains(&class), "class must be in 1..=16");
    let n0 = n.tx as i64;
    let nr = [n.rx(1) as i64, n.rx(2) as i64, n.rx(3) as i64];
    let (r, r23) = zero_forcing_dims(n);
    let (d1, d2, d3) = (d[0] as i64, d[1] as i64, d[2] as i64);
    let cap = |v: i64| n0.min(v);
    match class {
        1..=6 => d1 <= nr[0] && d2 <= nr[1] && d3 <= nr[2] && d1 + d2 + d3 <= n0,
        7 => {
            d1 + pos(d3 - r[0]) <= cap(nr[0])
                && d2 + pos(d1 - r[1]) <= cap(nr[1])
                && d3 + pos(d2 - r[2]) <= cap(nr[2])
        }
        8..=10 => {
            if d1 + pos(d2.max(d3) - r[0]) > cap(nr[0]) {
                return false;
            }
            let rem = pos(d1 - r23);
            for rp2 in 0..=(r[1] - r23) {
                for rp3 in 0..=(r[2] - r23) {
                    if rp2 + rp3 <= rem
                        && d2 + rem - rp2 <= cap(nr[1])
                        && d3 + rem - rp3 <= cap(nr[2])
                    {
                        return true;
                    }
                }
            }
            false
        }
        11 => {
            d1 + pos(d2.max(d3) - r[0]) <= cap(nr[0])
                && d2 <= cap(nr[1])
                && d3 + pos(d1 - r[2]) <= cap(nr[2])
        }
        12 => {
            d1 + pos(d3 - r[0]) <= cap(nr[0])
                && d2 + pos(d1 - r[1]) <= cap(nr[1])
                && d3 <= cap(nr[2])
        }
        13 => {
            d1 + pos(d2.max(d3) - r[0]) <= cap(nr[0]) && d2 <= cap(nr[1]) && d3 <= cap(nr[2])
        }
        14 | 15 => {
            d1 + pos(d3 - r[0]) <= cap(nr[0])
                && d2 <= cap(nr[1])
                && d3 + pos(d1 - r[2]) <= cap(nr[2])
        }
        _ => d1 <= cap(nr[0]) && d2 <= cap(nr[1]) && d3 <= cap(nr[2]),
    }
}

fn take_cols(basis: &CMat, start: i64, count: i64) -> CMat {
    basis.columns(start as usize, count as usize).into_owned()
}

/// Isotropic random unit-norm precoders for the requested stream counts.
pub fn random_precoders(n: &AntennaConfig, d: [u32; 3], c: &ChannelSet) -> PrecoderSet {
    let mut rng = derive_rng(c.rng_seed, DOMAIN_PRECODER);
    let tx = n.tx as usize;
    PrecoderSet {
        v: [
            random_unit_columns(tx, d[0] as usize, &mut rng),
            random_unit_columns(tx, d[1] as usize, &mut rng),
            random_unit_columns(tx, d[2] as usize, &mut rng),
        ],
    }
}

/// The paired beams of the one-2-cycle recipe: the larger of the two cycle
/// streams zero-forces at receiver 1, the smaller reuses its leading columns.
/// Ties pick receiver 2 as the larger.
fn shared_cycle_beams(
    d2: i64,
    d3: i64,
    s1: &CMat,
    tx: usize,
    rng: &mut impl Rng,
) -> (CMat, CMat) {
    let max_is_2 = d2 >= d3;
    let (dmax, dmin) = if max_is_2 { (d2, d3) } else { (d3, d2) };
    let zf = (s1.ncols() as i64).min(dmax);
    let vmax = hstack(&[
        &take_cols(s1, 0, zf),
        &random_unit_columns(tx, pos(dmax - zf) as usize, rng),
    ]);
    let vmin = vmax.columns(0, dmin as usize).into_owned();
    if max_is_2 {
        (vmax, vmin)
    } else {
        (vmin, vmax)
    }
}

/// The one-2-cycle recipe with its default column split: message 1
/// zero-forces jointly at receivers 2 and 3 first, then singly at each with
/// the minimal counts their receive spaces require, clamped to the
/// available null columns; messages 2 and 3 share beams that zero-force at
/// receiver 1.
///
/// `build_precoders` uses this for classes 8..=10 after the feasibility
/// gate. The recipe is a family over the single-receiver split; see
/// [`two_cycle_recipe_with_split`] for an explicit choice.
pub fn two_cycle_recipe_precoders(
    n: &AntennaConfig,
    d: [u32; 3],
    c: &ChannelSet,
    nb: &NullBases,
) -> PrecoderSet {
    let mut rng = derive_rng(c.rng_seed, DOMAIN_PRECODER);
    PrecoderSet {
        v: two_cycle_recipe(n, [d[0] as i64, d[1] as i64, d[2] as i64], nb, &mut rng, None),
    }
}

/// The one-2-cycle recipe with an explicit split of message 1's
/// single-receiver zero-forcing columns: `split.0` columns vanish at
/// receiver 2 and `split.1` at receiver 3, both clamped to the available
/// null columns. Richer-side-information classes are covered by some member
/// of this family.
pub fn two_cycle_recipe_with_split(
    n: &AntennaConfig,
    d: [u32; 3],
    c: &ChannelSet,
    nb: &NullBases,
    split: (u32, u32),
) -> PrecoderSet {
    let mut rng = derive_rng(c.rng_seed, DOMAIN_PRECODER);
    PrecoderSet {
        v: two_cycle_recipe(
            n,
            [d[0] as i64, d[1] as i64, d[2] as i64],
            nb,
            &mut rng,
            Some((split.0 as i64, split.1 as i64)),
        ),
    }
}

fn two_cycle_recipe(
    n: &AntennaConfig,
    d: [i64; 3],
    nb: &NullBases,
    rng: &mut ChaCha12Rng,
    split: Option<(i64, i64)>,
) -> [CMat; 3] {
    let n0 = n.tx as i64;
    let tx = n.tx as usize;
    let r2 = nb.per_receiver[1].ncols() as i64;
    let r3 = nb.per_receiver[2].ncols() as i64;
    let r23 = nb.joint23.ncols() as i64;

    let take23 = r23.min(d[0]);
    let rem = pos(d[0] - r23);
    // Default to the minimal single-receiver needs; clamp any choice to
    // what the bases can supply.
    let (mut rp2, mut rp3) = split.unwrap_or((
        pos(d[1] + rem - n0.min(n.rx(2) as i64)),
        pos(d[2] + rem - n0.min(n.rx(3) as i64)),
    ));
    rp2 = rp2.max(0).min(r2 - r23).min(rem);
    rp3 = rp3.max(0).min(r3 - r23).min(rem - rp2);
    let random1 = rem - rp2 - rp3;

    let v1 = hstack(&[
        &take_cols(&nb.joint23, 0, take23),
        &take_cols(&nb.per_receiver[1], 0, rp2),
        &take_cols(&nb.per_receiver[2], 0, rp3),
        &random_unit_columns(tx, random1 as usize, rng),
    ]);
    let (v2, v3) = shared_cycle_beams(d[1], d[2], &nb.per_receiver[0], tx, rng);
    [v1, v2, v3]
}

/// Rotation recipe: message `i` zero-forces at receiver `(i mod 3) + 1`.
fn rotation_recipe(
    n: &AntennaConfig,
    d: [i64; 3],
    nb: &NullBases,
    rng: &mut ChaCha12Rng,
) -> [CMat; 3] {
    let tx = n.tx as usize;
    let mut out = [CMat::zeros(tx, 0), CMat::zeros(tx, 0), CMat::zeros(tx, 0)];
    for i in 1..=3usize {
        let q = (i % 3) + 1;
        let basis = &nb.per_receiver[q - 1];
        let zf = (basis.ncols() as i64).min(d[i - 1]);
        out[i - 1] = hstack(&[
            &take_cols(basis, 0, zf),
            &random_unit_columns(tx, pos(d[i - 1] - zf) as usize, rng),
        ]);
    }
    out
}

/// How the columns of one no-side-information precoder split across the
/// zero-forcing bases: `pair` columns invisible at both other receivers,
/// `kill[t]` columns invisible at the t-th other receiver (ascending).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct ColumnSplit {
    pair: i64,
    kill: [i64; 2],
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Searches for a zero-forcing column split that leaves every receiver
/// enough dimensions for its own streams, preferring splits that cancel the
/// most interference. Counting uses the generic-position dimensions of the
/// null spaces involved.
fn no_side_info_split(n: &AntennaConfig, d: [i64; 3]) -> Option<[ColumnSplit; 3]> {
    let n0 = n.tx as i64;
    let nr = [n.rx(1) as i64, n.rx(2) as i64, n.rx(3) as i64];
    let r = [pos(n0 - nr[0]), pos(n0 - nr[1]), pos(n0 - nr[2])];
    let r_all = pos(n0 - nr[0] - nr[1] - nr[2]);
    let pair_dim = |i: usize| {
        let (j, k) = others(i);
        pos(n0 - nr[j] - nr[k])
    };

    // Columns killed at both other receivers are never worse than any other
    // column, so take as many as the joint null space offers.
    let pair: [i64; 3] = [
        pair_dim(0).min(d[0]),
        pair_dim(1).min(d[1]),
        pair_dim(2).min(d[2]),
    ];

    let mut candidates: [Vec<ColumnSplit>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for i in 0..3 {
        let (j, k) = others(i);
        let m = d[i] - pair[i];
        let union_cap = n0.min(r[j] + r[k] - pair_dim(i)) - pair[i];
        for x in 0..=m.min(r[j] - pair[i]) {
            for y in 0..=(m - x).min(r[k] - pair[i]) {
                if x + y <= union_cap {
                    candidates[i].push(ColumnSplit { pair: pair[i], kill: [x, y] });
                }
            }
        }
        // Most interference cancelled first.
        candidates[i].sort_by(|a, b| {
            let ka = a.kill[0] + a.kill[1];
            let kb = b.kill[0] + b.kill[1];
            kb.cmp(&ka).then(b.kill.cmp(&a.kill))
        });
        if candidates[i].is_empty() {
            return None;
        }
    }

    // Columns of transmitter `t` drawn from receiver `x`'s null basis.
    fn single_kills(s: &[ColumnSplit; 3], t: usize, x: usize) -> i64 {
        let (j, k) = others(t);
        if x == j {
            s[t].kill[0]
        } else if x == k {
            s[t].kill[1]
        } else {
            0
        }
    }

    let feasible = |s: &[ColumnSplit; 3]| -> bool {
        // Shared bases must supply disjoint columns to their consumers.
        for x in 0..3 {
            let drawn: i64 = (0..3).filter(|&t| t != x).map(|t| single_kills(s, t, x)).sum();
            if drawn > r[x] {
                return false;
            }
        }
        for v in 0..3 {
            let (u, w) = others(v);
            // Pair columns of the other transmitters always vanish here.
            let vis_u = d[u] - s[u].pair - single_kills(s, u, v);
            let vis_w = d[w] - s[w].pair - single_kills(s, w, v);
            // Every visible vector must fit in the receive space.
            if d[v] + vis_u + vis_w > nr[v].min(n0) {
                return false;
            }
            // Per-null-space caps: vectors confined to a common null space
            // must not exceed its image dimension at this receiver.
            if s[v].pair > pair_dim(v) - r_all {
                return false;
            }
            let image_u = r[u] - pos(n0 - nr[v] - nr[u]);
            if s[v].pair + single_kills(s, v, u) + single_kills(s, w, u) > image_u {
                return false;
            }
            let image_w = r[w] - pos(n0 - nr[v] - nr[w]);
            if s[v].pair + single_kills(s, v, w) + single_kills(s, u, w) > image_w {
                return false;
            }
            let union_dim = n0.min(r[u] + r[w] - pair_dim(v));
            let union_meet = (pos(n0 - nr[v] - nr[u]) + pos(n0 - nr[v] - nr[w]) - r_all)
                .max(union_dim + r[v] - n0)
                .max(0);
            let in_union = s[v].pair
                + single_kills(s, v, u)
                + single_kills(s, v, w)
                + single_kills(s, u, w)
                + single_kills(s, w, u);
            if in_union > union_dim - union_meet {
                return false;
            }
        }
        true
    };

    for a in &candidates[0] {
        for b in &candidates[1] {
            for c in &candidates[2] {
                let s = [*a, *b, *c];
                if feasible(&s) {
                    return Some(s);
                }
            }
        }
    }
    None
}

/// No-side-information construction shared by classes 1..=6.
fn no_side_info_precoders(
    n: &AntennaConfig,
    d: [i64; 3],
    c: &ChannelSet,
    nb: &NullBases,
    rng: &mut ChaCha12Rng,
) -> Result<[CMat; 3], SchemeError> {
    let point = [d[0] as u32, d[1] as u32, d[2] as u32];
    let splits = no_side_info_split(n, d).ok_or(SchemeError::NoColumnSplit { point })?;
    let tx = n.tx as usize;
    let tol = ToleranceConfig::default().rank_tol_factor;

    // Joint-pair bases, built in transmitter order for determinism. The
    // (2,3) pair reuses the shared basis.
    let mut pair_bases: [Option<CMat>; 3] = [None, None, None];
    for i in 0..3 {
        if splits[i].pair > 0 {
            let (j, k) = others(i);
            let basis = if (j, k) == (1, 2) {
                nb.joint23.clone()
            } else {
                let stacked = vstack(&[c.channel(j as u8 + 1), c.channel(k as u8 + 1)]);
                mixed_basis(null_space_basis(&stacked, tol), rng)
            };
            pair_bases[i] = Some(basis);
        }
    }

    let mut offsets = [0i64; 3];
    let mut out = [CMat::zeros(tx, 0), CMat::zeros(tx, 0), CMat::zeros(tx, 0)];
    for i in 0..3 {
        let (j, k) = others(i);
        let split = splits[i];
        let mut parts: Vec<CMat> = Vec::new();
        if split.pair > 0 {
            parts.push(take_cols(pair_bases[i].as_ref().unwrap(), 0, split.pair));
        }
        for (t, x) in [(j, split.kill[0]), (k, split.kill[1])] {
            if x > 0 {
                parts.push(take_cols(&nb.per_receiver[t], offsets[t], x));
                offsets[t] += x;
            }
        }
        let random = d[i] - split.pair - split.kill[0] - split.kill[1];
        parts.push(random_unit_columns(tx, random as usize, rng));
        let refs: Vec<&CMat> = parts.iter().collect();
        out[i] = hstack(&refs);
    }
    Ok(out)
}

/// Assembles the class recipe for a feasible integer point: zero-forcing
/// columns first, then isotropic random columns, all unit norm. Rejects
/// points outside the class's feasible set.
pub fn build_precoders(
    class: u8,
    n: &AntennaConfig,
    d: [u32; 3],
    c: &ChannelSet,
    nb: &NullBases,
) -> Result<PrecoderSet, SchemeError> {
    assert!((1..=16).contains(&class), "class must be in 1..=16");
    if !check_integer_feasibility(class, n, d) {
        return Err(SchemeError::InfeasiblePoint { class, point: d });
    }
    let mut rng = derive_rng(c.rng_seed, DOMAIN_PRECODER);
    let tx = n.tx as usize;
    let di = [d[0] as i64, d[1] as i64, d[2] as i64];
    let v = match class {
        1..=6 => no_side_info_precoders(n, di, c, nb, &mut rng)?,
        7 => rotation_recipe(n, di, nb, &mut rng),
        8..=10 => two_cycle_recipe(n, di, nb, &mut rng, None),
        11 => {
            let zf = (nb.per_receiver[2].ncols() as i64).min(di[0]);
            let v1 = hstack(&[
                &take_cols(&nb.per_receiver[2], 0, zf),
                &random_unit_columns(tx, pos(di[0] - zf) as usize, &mut rng),
            ]);
            let (v2, v3) = shared_cycle_beams(di[1], di[2], &nb.per_receiver[0], tx, &mut rng);
            [v1, v2, v3]
        }
        12 => {
            let zf1 = (nb.per_receiver[1].ncols() as i64).min(di[0]);
            let v1 = hstack(&[
                &take_cols(&nb.per_receiver[1], 0, zf1),
                &random_unit_columns(tx, pos(di[0] - zf1) as usize, &mut rng),
            ]);
            let v2 = random_unit_columns(tx, di[1] as usize, &mut rng);
            let zf3 = (nb.per_receiver[0].ncols() as i64).min(di[2]);
            let v3 = hstack(&[
                &take_cols(&nb.per_receiver[0], 0, zf3),
                &random_unit_columns(tx, pos(di[2] - zf3) as usize, &mut rng),
            ]);
            [v1, v2, v3]
        }
        13 => {
            let v1 = random_unit_columns(tx, di[0] as usize, &mut rng);
            let (v2, v3) = shared_cycle_beams(di[1], di[2], &nb.per_receiver[0], tx, &mut rng);
            [v1, v2, v3]
        }
        14 | 15 => {
            let zf1 = (nb.per_receiver[2].ncols() as i64).min(di[0]);
            let v1 = hstack(&[
                &take_cols(&nb.per_receiver[2], 0, zf1),
                &random_unit_columns(tx, pos(di[0] - zf1) as usize, &mut rng),
            ]);
            let v2 = random_unit_columns(tx, di[1] as usize, &mut rng);
            let zf3 = (nb.per_receiver[0].ncols() as i64).min(di[2]);
            let v3 = hstack(&[
                &take_cols(&nb.per_receiver[0], 0, zf3),
                &random_unit_columns(tx, pos(di[2] - zf3) as usize, &mut rng),
            ]);
            [v1, v2, v3]
        }
        _ => [
            random_unit_columns(tx, di[0] as usize, &mut rng),
            random_unit_columns(tx, di[1] as usize, &mut rng),
            random_unit_columns(tx, di[2] as usize, &mut rng),
        ],
    };
    debug_assert_eq!(
        [v[0].ncols(), v[1].ncols(), v[2].ncols()],
        [d[0] as usize, d[1] as usize, d[2] as usize]
    );
    Ok(PrecoderSet { v })
}
