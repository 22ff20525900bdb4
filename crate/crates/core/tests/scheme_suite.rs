//! Scheme-level invariants on sampled channels: zero-forcing residuals,
//! filter correctness at feasible corner points, the reach of the shared
//! one-2-cycle recipe, and the negative control.

use dof_atlas::graph::{catalog_graph, SideInfoGraph};
use dof_atlas::region::{dof_region, AntennaConfig};
use dof_atlas::scheme::{
    build_precoders, build_receive_filters, build_receive_filters_lenient,
    estimate_rate_slope, filter_diagnostics, interference_free_dimensions, null_bases,
    sample_channels, two_cycle_recipe_with_split, ToleranceConfig,
};

fn cfg(tx: u32, r1: u32, r2: u32, r3: u32) -> AntennaConfig {
    AntennaConfig::new(tx, r1, r2, r3).unwrap()
}

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn grid(max: u32) -> Vec<AntennaConfig> {
    let mut out = Vec::new();
    for tx in 1..=max {
        for r1 in 1..=max {
            for r2 in 1..=max {
                for r3 in 1..=max {
                    out.push(AntennaConfig::new(tx, r1, r2, r3).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn zero_forcing_residuals_stay_below_threshold() {
    for (n, seed) in [(cfg(9, 7, 8, 5), 3u64), (cfg(6, 2, 2, 2), 4), (cfg(3, 2, 2, 2), 5)] {
        let c = sample_channels(&n, seed);
        let nb = null_bases(&c);
        for v in 1..=3u8 {
            let h = c.channel(v);
            let s = &nb.per_receiver[(v - 1) as usize];
            if s.ncols() > 0 {
                assert!((h * s).norm() <= tol().rank_tol_factor * h.norm());
            }
        }
    }
}

/// Every integer corner point of every class builds, counts, and filters
/// cleanly on a sampled channel, with zero-forcing-level leakage.
#[test]
fn corner_points_filter_cleanly() {
    for n in [cfg(3, 2, 2, 2), cfg(9, 7, 8, 5)] {
        let c = sample_channels(&n, 17);
        let nb = null_bases(&c);
        for class in 1..=16u8 {
            let g = catalog_graph(class);
            let region = dof_region(g, &n);
            for v in region.vertices().unwrap() {
                let Some(d) = v.as_integer_triple() else { continue };
                let p = build_precoders(class, &n, d, &c, &nb).unwrap();
                let counts = interference_free_dimensions(g, &c, &p, &tol());
                assert_eq!(
                    counts,
                    [d[0] as usize, d[1] as usize, d[2] as usize],
                    "class {class} at {n}, point {v}"
                );
                let filters = build_receive_filters(g, &c, &p, &tol()).unwrap();
                let diag = filter_diagnostics(g, &c, &p, &filters, &tol());
                if let Some(signal) = diag.min_signal {
                    assert!(signal >= tol().signal_floor);
                }
                if let Some(leak) = diag.max_leak {
                    assert!(leak <= tol().rank_tol_factor, "class {class} point {v}: leak {leak}");
                }
            }
        }
    }
}

/// The one-2-cycle construction family also reaches every integer corner of
/// the richer-side-information classes, under their own knowledge sets:
/// some split of message 1's single-receiver zero-forcing columns works.
#[test]
fn two_cycle_recipe_family_covers_richer_classes() {
    for n in grid(4) {
        let c = sample_channels(&n, 23);
        let nb = null_bases(&c);
        let (r, r23) = dof_atlas::scheme::zero_forcing_dims(&n);
        for class in 11..=16u8 {
            let g = catalog_graph(class);
            let region = dof_region(g, &n);
            for v in region.vertices().unwrap() {
                let Some(d) = v.as_integer_triple() else { continue };
                let want = [d[0] as usize, d[1] as usize, d[2] as usize];
                let rem = (d[0] as i64 - r23).max(0);
                let mut covered = false;
                'split: for rp2 in 0..=(r[1] - r23).min(rem) {
                    for rp3 in 0..=(r[2] - r23).min(rem - rp2) {
                        let p = two_cycle_recipe_with_split(
                            &n,
                            d,
                            &c,
                            &nb,
                            (rp2 as u32, rp3 as u32),
                        );
                        if interference_free_dimensions(g, &c, &p, &tol()) == want {
                            covered = true;
                            break 'split;
                        }
                    }
                }
                assert!(covered, "class {class} at {n}, point {v}");
            }
        }
    }
}

/// For the fixed-recipe classes, every feasible integer point — not only
/// the corners — reaches its requested dimensions.
#[test]
fn feasible_interior_points_count_correctly() {
    let n = cfg(3, 2, 2, 2);
    let c = sample_channels(&n, 19);
    let nb = null_bases(&c);
    for class in 7..=16u8 {
        let g = catalog_graph(class);
        let region = dof_region(g, &n);
        for d in region.integer_points().unwrap() {
            assert!(dof_atlas::scheme::check_integer_feasibility(class, &n, d));
            let p = build_precoders(class, &n, d, &c, &nb).unwrap();
            let counts = interference_free_dimensions(g, &c, &p, &tol());
            assert_eq!(
                counts,
                [d[0] as usize, d[1] as usize, d[2] as usize],
                "class {class}, point {d:?}"
            );
        }
    }
}

/// With side information ignored at equal antenna counts, no point beyond
/// the sum bound ever verifies.
#[test]
fn oversized_points_never_verify_without_side_information() {
    for count in [2u32, 3] {
        let n = cfg(count, count, count, count);
        for seed in [31u64, 32] {
            let c = sample_channels(&n, seed);
            for d1 in 0..=count {
                for d2 in 0..=count {
                    for d3 in 0..=count {
                        if d1 + d2 + d3 <= count {
                            continue;
                        }
                        let p = dof_atlas::scheme::random_precoders(&n, [d1, d2, d3], &c);
                        let counts = interference_free_dimensions(
                            SideInfoGraph::empty(),
                            &c,
                            &p,
                            &tol(),
                        );
                        assert_ne!(
                            counts,
                            [d1 as usize, d2 as usize, d3 as usize],
                            "({d1},{d2},{d3}) at {n} seed {seed}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn point_to_point_slopes_track_stream_counts() {
    let n = cfg(2, 2, 2, 2);
    let c = sample_channels(&n, 40);
    let nb = null_bases(&c);
    let g = catalog_graph(16);
    let d = [2u32, 2, 2];
    let p = build_precoders(16, &n, d, &c, &nb).unwrap();
    let filters = build_receive_filters(g, &c, &p, &tol()).unwrap();
    let slopes = estimate_rate_slope(g, d, &c, &p, &filters, 1e4, 1e8);
    for s in slopes {
        assert!((s - 2.0).abs() <= 0.1, "slope {s}");
    }
}

#[test]
fn zero_streams_give_zero_slope() {
    let n = cfg(2, 2, 2, 2);
    let c = sample_channels(&n, 41);
    let p = dof_atlas::scheme::random_precoders(&n, [0, 0, 0], &c);
    let g = SideInfoGraph::empty();
    let filters = build_receive_filters_lenient(g, &c, &p, &tol());
    let slopes = estimate_rate_slope(g, [0, 0, 0], &c, &p, &filters, 1e4, 1e8);
    assert_eq!(slopes, [0.0; 3]);
}
