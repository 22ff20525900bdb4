//! Interference-free-dimension counting, receive filters, the two-symbol
//! extension, rate-slope estimation, and seeded Monte Carlo verification.

use nalgebra::{Cholesky, Complex};
use serde::{Deserialize, Serialize};

use super::linalg::{
    block_diag_pair, derive_rng, drop_column, null_space_basis, random_unit_columns, tdot, CMat,
    CVec, DOMAIN_EXTENSION,
};
use super::precoder::{build_precoders, null_bases};
use super::{
    numerical_rank, sample_channels, ChannelSet, ExtensionSet, NullBases, PrecoderSet,
    ReceiveFilterSet, SchemeError, ToleranceConfig,
};
use crate::graph::{canonicalize, catalog_graph, SideInfoGraph};
use crate::region::{dof_region, AntennaConfig, RationalPoint};

/// Visible columns at one receiver: the receiver's own beams plus every
/// interfering beam whose message it does not know, projected through its
/// channel. Interference columns that the transmitter already zero-forced
/// (norm at the rank threshold) are left out.
struct ReceiverStack {
    f: CMat,
    own: Vec<usize>,
}

fn receiver_stack(h: &CMat, sources: &[(&CMat, bool)], drop_tol: f64) -> ReceiverStack {
    let mut cols: Vec<CVec> = Vec::new();
    let mut own = Vec::new();
    for (beams, is_own) in sources {
        for j in 0..beams.ncols() {
            let col = h * beams.column(j);
            if *is_own {
                own.push(cols.len());
                cols.push(col);
            } else if col.norm() > drop_tol {
                cols.push(col);
            }
        }
    }
    let f = if cols.is_empty() {
        CMat::zeros(h.nrows(), 0)
    } else {
        CMat::from_columns(&cols)
    };
    ReceiverStack { f, own }
}

fn visible_sources(g: SideInfoGraph, receiver: u8, p: &PrecoderSet) -> Vec<(&CMat, bool)> {
    (1..=3u8)
        .filter(|&t| t == receiver || !g.has_arc(receiver, t))
        .map(|t| (p.beams(t), t == receiver))
        .collect()
}

fn stacks_for_graph(
    g: SideInfoGraph,
    c: &ChannelSet,
    p: &PrecoderSet,
    tol: &ToleranceConfig,
) -> [ReceiverStack; 3] {
    [1u8, 2, 3].map(|v| {
        let h = c.channel(v);
        receiver_stack(h, &visible_sources(g, v, p), tol.rank_tol_factor * h.norm())
    })
}

fn count_free(stack: &ReceiverStack, tol: &ToleranceConfig) -> usize {
    if stack.own.is_empty() {
        return 0;
    }
    let t = stack.f.ncols();
    let full = numerical_rank(&stack.f, tol.rank_tol_factor);
    if full == t {
        // Every visible column is independent, so each own beam keeps a
        // dimension of its own.
        return stack.own.len();
    }
    stack
        .own
        .iter()
        .filter(|&&col| {
            let others = drop_column(&stack.f, col);
            numerical_rank(&others, tol.rank_tol_factor) < full
        })
        .count()
}

/// Per-receiver count of own streams whose channel image stays outside the
/// span of everything else the receiver cannot cancel.
pub fn interference_free_dimensions(
    g: SideInfoGraph,
    c: &ChannelSet,
    p: &PrecoderSet,
    tol: &ToleranceConfig,
) -> [usize; 3] {
    let stacks = stacks_for_graph(g, c, p, tol);
    [
        count_free(&stacks[0], tol),
        count_free(&stacks[1], tol),
        count_free(&stacks[2], tol),
    ]
}

fn filters_for_stack(
    stack: &ReceiverStack,
    tol: &ToleranceConfig,
    lenient: bool,
    receiver: u8,
) -> Result<Vec<CVec>, SchemeError> {
    if stack.own.is_empty() {
        return Ok(Vec::new());
    }
    let t = stack.f.ncols();
    let full_rank = numerical_rank(&stack.f, tol.rank_tol_factor) == t;
    // Dual-basis route when the stack has full column rank: one Gram solve
    // yields, for each beam, the direction orthogonal to all other columns.
    let gram_chol = if full_rank && t <= stack.f.nrows() {
        Cholesky::new(stack.f.adjoint() * &stack.f)
    } else {
        None
    };

    let mut out = Vec::with_capacity(stack.own.len());
    for (stream, &col) in stack.own.iter().enumerate() {
        let w = stack.f.column(col).into_owned();
        let (margin, direction) = if let Some(chol) = &gram_chol {
            let mut e = CVec::zeros(t);
            e[col] = Complex::new(1.0, 0.0);
            let phi_raw = &stack.f * chol.solve(&e);
            let raw_norm = phi_raw.norm();
            (1.0 / raw_norm, phi_raw.unscale(raw_norm))
        } else {
            let others = drop_column(&stack.f, col);
            if others.ncols() == 0 {
                let norm = w.norm();
                (norm, w.unscale(norm))
            } else {
                let svd = others.clone().svd(true, false);
                let rank = numerical_rank(&others, tol.rank_tol_factor);
                let u = svd.u.expect("requested left singular vectors");
                let basis = u.columns(0, rank);
                let residual = &w - basis * (basis.adjoint() * &w);
                let norm = residual.norm();
                (norm, residual.unscale(norm.max(f64::MIN_POSITIVE)))
            }
        };
        // NaN margins (degenerate Gram solves) must also take this branch.
        if margin.is_nan() || margin < tol.signal_floor {
            if lenient {
                // Fall back to a matched filter; the stream stays
                // interference-limited and its rate saturates.
                out.push(w.conjugate().unscale(w.norm()));
                continue;
            }
            return Err(SchemeError::FilterFloor { receiver, stream, norm: margin });
        }
        out.push(direction.conjugate());
    }
    Ok(out)
}

/// One unit filter per accepted stream, each orthogonal (in the transpose
/// convention) to every other visible column at its receiver. Fails when a
/// stream's projection onto the free subspace drops below the signal floor.
pub fn build_receive_filters(
    g: SideInfoGraph,
    c: &ChannelSet,
    p: &PrecoderSet,
    tol: &ToleranceConfig,
) -> Result<ReceiveFilterSet, SchemeError> {
    let stacks = stacks_for_graph(g, c, p, tol);
    let mut filters: [Vec<CVec>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for v in 1..=3u8 {
        filters[(v - 1) as usize] =
            filters_for_stack(&stacks[(v - 1) as usize], tol, false, v)?;
    }
    Ok(ReceiveFilterSet { filters })
}

/// Like `build_receive_filters`, but streams below the signal floor get a
/// matched filter instead of an error. Intended for negative controls.
pub fn build_receive_filters_lenient(
    g: SideInfoGraph,
    c: &ChannelSet,
    p: &PrecoderSet,
    tol: &ToleranceConfig,
) -> ReceiveFilterSet {
    let stacks = stacks_for_graph(g, c, p, tol);
    let mut filters: [Vec<CVec>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for v in 1..=3u8 {
        filters[(v - 1) as usize] =
            filters_for_stack(&stacks[(v - 1) as usize], tol, true, v)
                .expect("lenient filter construction cannot fail");
    }
    ReceiveFilterSet { filters }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FilterDiagnostics {
    /// Smallest filtered desired-signal amplitude over all streams.
    pub min_signal: Option<f64>,
    /// Largest filtered interference amplitude relative to the interferer's
    /// norm, over all (stream, interferer) pairs.
    pub max_leak: Option<f64>,
}

impl FilterDiagnostics {
    fn fold(&mut self, other: FilterDiagnostics) {
        self.min_signal = match (self.min_signal, other.min_signal) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max_leak = match (self.max_leak, other.max_leak) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

fn diagnostics_for_stack(stack: &ReceiverStack, filters: &[CVec]) -> FilterDiagnostics {
    let mut diag = FilterDiagnostics::default();
    for (stream, phi) in filters.iter().enumerate() {
        let own_col = stack.own[stream];
        for j in 0..stack.f.ncols() {
            let col = stack.f.column(j).into_owned();
            let response = tdot(phi, &col).norm();
            if j == own_col {
                diag.fold(FilterDiagnostics { min_signal: Some(response), max_leak: None });
            } else {
                let norm = col.norm();
                if norm > 0.0 {
                    diag.fold(FilterDiagnostics {
                        min_signal: None,
                        max_leak: Some(response / norm),
                    });
                }
            }
        }
    }
    diag
}

/// Signal and leakage extremes of a filter set against the visible columns.
pub fn filter_diagnostics(
    g: SideInfoGraph,
    c: &ChannelSet,
    p: &PrecoderSet,
    filters: &ReceiveFilterSet,
    tol: &ToleranceConfig,
) -> FilterDiagnostics {
    let stacks = stacks_for_graph(g, c, p, tol);
    let mut diag = FilterDiagnostics::default();
    for v in 0..3 {
        diag.fold(diagnostics_for_stack(&stacks[v], &filters.filters[v]));
    }
    diag
}

/// Rate difference per decade of power between `p_low` and `p_high`, per
/// receiver, with the total power split equally over all streams and unit
/// noise after the filter. Approaches the stream count when the filters
/// isolate their streams.
pub fn estimate_rate_slope(
    g: SideInfoGraph,
    d: [u32; 3],
    c: &ChannelSet,
    p: &PrecoderSet,
    filters: &ReceiveFilterSet,
    p_low: f64,
    p_high: f64,
) -> [f64; 3] {
    assert!(p_high > p_low && p_low > 0.0, "need p_high > p_low > 0");
    let total: u32 = d.iter().sum();
    if total == 0 {
        return [0.0; 3];
    }
    // Keep every visible column: residual interference must show up in the
    // denominator, however small.
    let zero_drop = ToleranceConfig { rank_tol_factor: 0.0, ..ToleranceConfig::default() };
    let stacks = stacks_for_graph(g, c, p, &zero_drop);
    let mut slopes = [0.0f64; 3];
    for v in 0..3 {
        let stack = &stacks[v];
        let rate = |power: f64| -> f64 {
            let per_stream = power / total as f64;
            let mut sum = 0.0;
            for (stream, phi) in filters.filters[v].iter().enumerate() {
                let own_col = stack.own[stream];
                let mut signal = 0.0;
                let mut interference = 0.0;
                for j in 0..stack.f.ncols() {
                    let gain = tdot(phi, &stack.f.column(j).into_owned()).norm_sqr();
                    if j == own_col {
                        signal = per_stream * gain;
                    } else {
                        interference += per_stream * gain;
                    }
                }
                sum += (1.0 + signal / (interference + 1.0)).log2();
            }
            sum
        };
        slopes[v] = (rate(p_high) - rate(p_low)) / (p_high.log2() - p_low.log2());
    }
    slopes
}

fn extension_supported(n: &AntennaConfig) -> Result<(), SchemeError> {
    if n.tx % 2 == 0 {
        return Err(SchemeError::ExtensionEvenTx(n.tx));
    }
    for v in 1..=3u8 {
        if n.tx > 2 * n.rx(v) {
            return Err(SchemeError::ExtensionRxTooSmall(v));
        }
    }
    Ok(())
}

/// Doubles the signaling space over two channel uses and builds the rotated
/// null-space precoders that realize the half-integer corner of the
/// 3-cycle class. Requires an odd transmit count no larger than twice any
/// receive count.
pub fn two_symbol_precoders(
    n: &AntennaConfig,
    c: &ChannelSet,
) -> Result<ExtensionSet, SchemeError> {
    extension_supported(n)?;
    let tol = ToleranceConfig::default().rank_tol_factor;
    let mut rng = derive_rng(c.rng_seed, DOMAIN_EXTENSION);
    let extended_channels = [
        block_diag_pair(c.channel(1)),
        block_diag_pair(c.channel(2)),
        block_diag_pair(c.channel(3)),
    ];
    let mut extension_null_bases = [CMat::zeros(0, 0), CMat::zeros(0, 0), CMat::zeros(0, 0)];
    for i in 0..3 {
        let basis = null_space_basis(&extended_channels[i], tol);
        extension_null_bases[i] = if basis.ncols() == 0 {
            basis
        } else {
            let mixing =
                super::linalg::random_cmatrix(basis.ncols(), basis.ncols(), &mut rng);
            let mut mixed = basis * mixing;
            super::linalg::normalize_columns(&mut mixed);
            mixed
        };
    }
    let n0 = n.tx as usize;
    let mut extended_precoders = [CMat::zeros(0, 0), CMat::zeros(0, 0), CMat::zeros(0, 0)];
    for i in 1..=3usize {
        let q = (i % 3) + 1;
        let basis = &extension_null_bases[q - 1];
        let take = basis.ncols().min(n0);
        let zf = basis.columns(0, take).into_owned();
        let random = random_unit_columns(2 * n0, n0 - take, &mut rng);
        extended_precoders[i - 1] = super::linalg::hstack(&[&zf, &random]);
    }
    Ok(ExtensionSet { extended_channels, extension_null_bases, extended_precoders })
}

fn extension_stacks(ext: &ExtensionSet, tol: &ToleranceConfig) -> [ReceiverStack; 3] {
    [1usize, 2, 3].map(|i| {
        // Over two symbols, receiver i knows the message rotated one step
        // ahead, so only one interfering precoder stays visible.
        let visible_other = ((i + 1) % 3) + 1;
        let theta = &ext.extended_channels[i - 1];
        let sources = [
            (&ext.extended_precoders[i - 1], true),
            (&ext.extended_precoders[visible_other - 1], false),
        ];
        receiver_stack(theta, &sources, tol.rank_tol_factor * theta.norm())
    })
}

/// Interference-free dimensions per receiver over the doubled signal space;
/// the target is the transmit antenna count at every receiver.
pub fn verify_two_symbol(ext: &ExtensionSet, tol: &ToleranceConfig) -> [usize; 3] {
    let stacks = extension_stacks(ext, tol);
    [
        count_free(&stacks[0], tol),
        count_free(&stacks[1], tol),
        count_free(&stacks[2], tol),
    ]
}

fn extension_filters_and_diag(
    ext: &ExtensionSet,
    tol: &ToleranceConfig,
) -> Result<FilterDiagnostics, SchemeError> {
    let stacks = extension_stacks(ext, tol);
    let mut diag = FilterDiagnostics::default();
    for (i, stack) in stacks.iter().enumerate() {
        let filters = filters_for_stack(stack, tol, false, i as u8 + 1)?;
        diag.fold(diagnostics_for_stack(stack, &filters));
    }
    Ok(diag)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Integer,
    TwoSymbolExtension,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointReport {
    pub point: RationalPoint,
    pub mode: VerifyMode,
    pub trials: u32,
    pub successes: u32,
    pub min_signal_margin: Option<f64>,
    pub max_interference_leak: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McReport {
    pub class: u8,
    pub graph: String,
    pub antennas: [u32; 4],
    pub trials: u32,
    pub base_seed: u64,
    pub points: Vec<PointReport>,
    pub all_achieved: bool,
}

struct PointAccumulator {
    point: RationalPoint,
    mode: VerifyMode,
    successes: u32,
    diag: FilterDiagnostics,
    target: Target,
}

enum Target {
    Integer([u32; 3]),
    Extension,
}

fn verify_integer_point(
    g: SideInfoGraph,
    class: u8,
    n: &AntennaConfig,
    d: [u32; 3],
    c: &ChannelSet,
    nb: &NullBases,
    tol: &ToleranceConfig,
) -> Option<FilterDiagnostics> {
    let p = build_precoders(class, n, d, c, nb).ok()?;
    let counts = interference_free_dimensions(g, c, &p, tol);
    if counts != [d[0] as usize, d[1] as usize, d[2] as usize] {
        return None;
    }
    let filters = build_receive_filters(g, c, &p, tol).ok()?;
    Some(filter_diagnostics(g, c, &p, &filters, tol))
}

/// Runs the full pipeline (build, count, filter) on every corner point of
/// the class's region, over `trials` independently seeded channels; the
/// half-integer corner, when present, verifies through the two-symbol
/// extension. Trial `t` uses seed `base_seed + t`.
pub fn monte_carlo_verify(
    class: u8,
    n: &AntennaConfig,
    trials: u32,
    base_seed: u64,
    tol: &ToleranceConfig,
) -> McReport {
    let g = catalog_graph(class);
    let region = dof_region(g, n);
    let vertices = region.vertices().expect("constructed regions are bounded");

    let mut accumulators: Vec<PointAccumulator> = vertices
        .into_iter()
        .map(|point| {
            let target = match point.as_integer_triple() {
                Some(d) => Target::Integer(d),
                None => Target::Extension,
            };
            let mode = match target {
                Target::Integer(_) => VerifyMode::Integer,
                Target::Extension => VerifyMode::TwoSymbolExtension,
            };
            PointAccumulator {
                point,
                mode,
                successes: 0,
                diag: FilterDiagnostics::default(),
                target,
            }
        })
        .collect();

    for t in 0..trials {
        let c = sample_channels(n, base_seed.wrapping_add(t as u64));
        let nb = null_bases(&c);
        let mut extension: Option<Option<(ExtensionSet, bool)>> = None;
        for acc in accumulators.iter_mut() {
            match acc.target {
                Target::Integer(d) => {
                    if let Some(diag) = verify_integer_point(g, class, n, d, &c, &nb, tol) {
                        acc.successes += 1;
                        acc.diag.fold(diag);
                    }
                }
                Target::Extension => {
                    if extension.is_none() {
                        extension = Some(two_symbol_precoders(n, &c).ok().map(|ext| {
                            let ok = verify_two_symbol(&ext, tol) == [n.tx as usize; 3];
                            (ext, ok)
                        }));
                    }
                    if let Some(Some((ext, true))) = extension.as_ref() {
                        if let Ok(diag) = extension_filters_and_diag(ext, tol) {
                            acc.successes += 1;
                            acc.diag.fold(diag);
                        }
                    }
                }
            }
        }
    }

    let points: Vec<PointReport> = accumulators
        .into_iter()
        .map(|acc| PointReport {
            point: acc.point,
            mode: acc.mode,
            trials,
            successes: acc.successes,
            min_signal_margin: acc.diag.min_signal,
            max_interference_leak: acc.diag.max_leak,
        })
        .collect();
    let all_achieved = points.iter().all(|p| p.successes == trials);
    McReport {
        class,
        graph: g.to_string(),
        antennas: n.as_array(),
        trials,
        base_seed,
        points,
        all_achieved,
    }
}

/// Monte Carlo verification for an arbitrary labeled graph: classify it,
/// run the catalog scheme in representative coordinates, and map the
/// reported points back to the caller's labeling.
pub fn monte_carlo_verify_graph(
    g: SideInfoGraph,
    n: &AntennaConfig,
    trials: u32,
    base_seed: u64,
    tol: &ToleranceConfig,
) -> McReport {
    let class = canonicalize(g);
    let relabel = class.relabeling;
    let mut rep_rx = [0u32; 3];
    for v in 1..=3u8 {
        rep_rx[(relabel.apply(v) - 1) as usize] = n.rx(v);
    }
    let rep_n = AntennaConfig { tx: n.tx, rx: rep_rx };
    let mut report = monte_carlo_verify(class.index, &rep_n, trials, base_seed, tol);
    for point in report.points.iter_mut() {
        let mut coords = point.point.coords;
        for v in 1..=3u8 {
            coords[(v - 1) as usize] = point.point.coords[(relabel.apply(v) - 1) as usize];
        }
        point.point = RationalPoint { coords };
    }
    report.points.sort_by_key(|p| p.point);
    report.graph = g.to_string();
    report.antennas = n.as_array();
    report
}
