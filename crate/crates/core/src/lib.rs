//! Degrees-of-freedom regions of the three-receiver Gaussian MIMO broadcast
//! channel with receiver message side information.
//!
//! The crate has three layers:
//!
//! - [`graph`]: side-information graphs on three receivers, their 16
//!   isomorphism classes, acyclic induced subgraphs, and decode orders.
//! - [`region`]: exact rational polytopes — the degrees-of-freedom region of
//!   every class, its acyclic outer bound, the index-coding rate region,
//!   vertex enumeration, and region comparisons.
//! - [`scheme`]: numerical achievability — seeded channel sampling,
//!   null-space precoders per class, interference-free-dimension counting,
//!   receive filters, the two-symbol extension for the half-integer corner,
//!   rate-slope estimation, and Monte Carlo verification.
//!
//! [`sweep`] bundles exhaustive cross-checks of the region layer over small
//! antenna grids.

pub mod graph;
pub mod region;
pub mod scheme;
pub mod sweep;

pub use graph::{
    acyclic_vertex_subsets, all_labeled_graphs, build_graph, canonicalize, catalog,
    catalog_graph, decode_order, strip_non_cycle_arcs, GraphError, IsoClass, Permutation,
    SideInfoGraph, VertexSubset, CLASS_COUNT,
};
pub use region::{
    acyclic_outer_bound, dof_region, index_coding_region, AntennaConfig, LinearConstraint, Rat,
    Region, RegionDocument, RegionError, RationalPoint,
};
pub use scheme::{
    build_precoders, check_integer_feasibility, estimate_rate_slope,
    interference_free_dimensions, monte_carlo_verify, monte_carlo_verify_graph, null_bases,
    sample_channels, two_symbol_precoders, verify_two_symbol, ChannelSet, ExtensionSet, McReport,
    NullBases, PrecoderSet, ReceiveFilterSet, SchemeError, ToleranceConfig,
};
