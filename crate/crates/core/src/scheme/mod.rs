//! Constructive precoding schemes verified on randomly sampled channels.
//!
//! This module realizes the achievability side numerically: null-space
//! precoders per catalog class, interference-free-dimension counting,
//! receive filters, the two-symbol extension for the half-integer corner,
//! rate-slope estimation, and seeded Monte Carlo verification.

mod linalg;
mod precoder;
mod verify;

pub use linalg::{null_space_basis, numerical_rank, CMat, CVec};
pub use precoder::{
    build_precoders, check_integer_feasibility, null_bases, random_precoders,
    two_cycle_recipe_precoders, two_cycle_recipe_with_split, zero_forcing_dims,
};
pub use verify::{
    build_receive_filters, build_receive_filters_lenient, estimate_rate_slope,
    filter_diagnostics, interference_free_dimensions, monte_carlo_verify,
    monte_carlo_verify_graph, two_symbol_precoders, verify_two_symbol, FilterDiagnostics,
    McReport, PointReport, VerifyMode,
};

use linalg::{derive_rng, random_cmatrix, DOMAIN_CHANNEL};
use thiserror::Error;

use crate::region::AntennaConfig;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("point ({},{},{}) is not achievable by the class-{class} scheme at this antenna configuration", point[0], point[1], point[2])]
    InfeasiblePoint { class: u8, point: [u32; 3] },
    #[error("no zero-forcing column split covers point ({},{},{}) at this antenna configuration", point[0], point[1], point[2])]
    NoColumnSplit { point: [u32; 3] },
    #[error("receive filter for receiver {receiver}, stream {stream}: projection norm {norm:.3e} is below the signal floor")]
    FilterFloor { receiver: u8, stream: usize, norm: f64 },
    #[error("two-symbol extension needs an odd transmit antenna count, got {0}")]
    ExtensionEvenTx(u32),
    #[error("two-symbol extension needs tx <= 2*rx at every receiver; receiver {0} is too small")]
    ExtensionRxTooSmall(u8),
}

/// Numerical thresholds for the scheme pipeline.
#[derive(Clone, Copy, Debug)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff for numerical rank decisions.
    pub rank_tol_factor: f64,
    /// Minimum acceptable filtered-signal amplitude.
    pub signal_floor: f64,
    /// Lower power of the rate-slope window.
    pub slope_power_low: f64,
    /// Upper power of the rate-slope window.
    pub slope_power_high: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_tol_factor: 1e-10,
            signal_floor: 1e-8,
            slope_power_low: 1e4,
            slope_power_high: 1e8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            self.rank_tol_factor,
            self.signal_floor,
            self.slope_power_low,
            self.slope_power_high,
        ];
        if fields.iter().any(|&f| f.is_nan() || f <= 0.0) {
            return Err("tolerances and powers must be positive".into());
        }
        Ok(())
    }
}

/// One sampled channel realization: `matrices[i]` is the `rx[i] x tx`
/// channel of receiver `i + 1`.
#[derive(Clone, Debug)]
pub struct ChannelSet {
    pub antennas: AntennaConfig,
    pub matrices: [CMat; 3],
    pub rng_seed: u64,
}

impl ChannelSet {
    pub fn channel(&self, v: u8) -> &CMat {
        &self.matrices[(v - 1) as usize]
    }

    /// The three channels stacked vertically.
    pub fn stacked(&self) -> CMat {
        linalg::vstack(&[&self.matrices[0], &self.matrices[1], &self.matrices[2]])
    }
}

/// Draws all channel entries i.i.d. circularly symmetric complex Gaussian;
/// deterministic for a given seed.
pub fn sample_channels(n: &AntennaConfig, seed: u64) -> ChannelSet {
    let mut rng = derive_rng(seed, DOMAIN_CHANNEL);
    let matrices = [
        random_cmatrix(n.rx(1) as usize, n.tx as usize, &mut rng),
        random_cmatrix(n.rx(2) as usize, n.tx as usize, &mut rng),
        random_cmatrix(n.rx(3) as usize, n.tx as usize, &mut rng),
    ];
    ChannelSet { antennas: *n, matrices, rng_seed: seed }
}

/// Unit-norm null-space bases available to the precoder recipes:
/// `per_receiver[i]` spans the null space of receiver `i + 1`'s channel,
/// `joint23` the intersection of the null spaces of receivers 2 and 3.
#[derive(Clone, Debug)]
pub struct NullBases {
    pub per_receiver: [CMat; 3],
    pub joint23: CMat,
}

/// Transmit precoders: `v[i]` is the `tx x d_{i+1}` beam matrix for message
/// `i + 1`, unit-norm columns, possibly empty.
#[derive(Clone, Debug)]
pub struct PrecoderSet {
    pub v: [CMat; 3],
}

impl PrecoderSet {
    pub fn beams(&self, v: u8) -> &CMat {
        &self.v[(v - 1) as usize]
    }

    pub fn stream_counts(&self) -> [usize; 3] {
        [self.v[0].ncols(), self.v[1].ncols(), self.v[2].ncols()]
    }
}

/// Per-receiver, per-stream receive filters, stored in the transpose-apply
/// convention: the filter output for an observation `y` is `sum_k f_k y_k`.
#[derive(Clone, Debug)]
pub struct ReceiveFilterSet {
    pub filters: [Vec<CVec>; 3],
}

impl ReceiveFilterSet {
    pub fn for_receiver(&self, v: u8) -> &[CVec] {
        &self.filters[(v - 1) as usize]
    }
}

/// Two-symbol extension data: doubled channels, their null bases, and the
/// extended precoders carrying `tx` streams each.
#[derive(Clone, Debug)]
pub struct ExtensionSet {
    /// Block-diagonal doubled channel of receiver `i + 1` (`2 rx x 2 tx`).
    pub extended_channels: [CMat; 3],
    /// Null bases of the doubled channels, indexed by receiver − 1.
    pub extension_null_bases: [CMat; 3],
    /// Extended precoders, `2 tx x tx`, unit-norm columns.
    pub extended_precoders: [CMat; 3],
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(tx: u32, r1: u32, r2: u32, r3: u32) -> AntennaConfig {
        AntennaConfig::new(tx, r1, r2, r3).unwrap()
    }

    #[test]
    fn channels_are_full_rank() {
        let c = sample_channels(&cfg(2, 2, 2, 2), 7);
        for v in 1..=3 {
            assert_eq!(numerical_rank(c.channel(v), 1e-10), 2);
        }
    }

    #[test]
    fn stacked_channel_rank_saturates_at_tx() {
        for seed in [0u64, 1, 99] {
            let c = sample_channels(&cfg(9, 7, 8, 5), seed);
            assert_eq!(numerical_rank(&c.stacked(), 1e-10), 9);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_channels(&cfg(3, 2, 2, 2), 42);
        let b = sample_channels(&cfg(3, 2, 2, 2), 42);
        for v in 1..=3 {
            assert_eq!(a.channel(v), b.channel(v));
        }
        let c = sample_channels(&cfg(3, 2, 2, 2), 43);
        assert_ne!(a.channel(1), c.channel(1));
    }
}
