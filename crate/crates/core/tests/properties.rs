//! Cross-checks of the region layer: the catalog self-test against the
//! closed-form per-class regions, collapse and monotonicity laws, and
//! round-trip properties of the wire formats.

use proptest::prelude::*;

use dof_atlas::graph::{all_labeled_graphs, catalog_graph, SideInfoGraph};
use dof_atlas::region::{
    dof_region, index_coding_region, rat, AntennaConfig, LinearConstraint, Rat, Region,
    RegionDocument, RationalPoint,
};
use dof_atlas::sweep::{run_property_checks, PropertyCheck};

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

fn caps(n: &AntennaConfig) -> Vec<LinearConstraint> {
    vec![
        LinearConstraint::new([1, 0, 0], rat(n.rx(1) as i64)),
        LinearConstraint::new([0, 1, 0], rat(n.rx(2) as i64)),
        LinearConstraint::new([0, 0, 1], rat(n.rx(3) as i64)),
    ]
}

/// The closed-form region of each catalog class, written out literally.
fn literal_region(class: u8, n: &AntennaConfig) -> Region {
    let n0 = rat(n.tx as i64);
    let mut constraints = match class {
        1..=6 => vec![LinearConstraint::new([1, 1, 1], n0)],
        7 => vec![
            LinearConstraint::new([1, 1, 0], n0),
            LinearConstraint::new([1, 0, 1], n0),
            LinearConstraint::new([0, 1, 1], n0),
        ],
        8..=10 => vec![
            LinearConstraint::new([1, 1, 0], n0),
            LinearConstraint::new([1, 0, 1], n0),
            LinearConstraint::new(
                [1, 1, 1],
                rat(n.tx.max(n.rx(2) + n.rx(3)) as i64),
            ),
        ],
        11..=13 => vec![
            LinearConstraint::new([1, 1, 0], n0),
            LinearConstraint::new([1, 0, 1], n0),
        ],
        14 | 15 => vec![
            LinearConstraint::new([1, 0, 1], n0),
            LinearConstraint::new([0, 1, 0], n0),
        ],
        16 => {
            return Region::new(vec![
                LinearConstraint::new([1, 0, 0], rat(n.tx.min(n.rx(1)) as i64)),
                LinearConstraint::new([0, 1, 0], rat(n.tx.min(n.rx(2)) as i64)),
                LinearConstraint::new([0, 0, 1], rat(n.tx.min(n.rx(3)) as i64)),
            ])
        }
        _ => unreachable!(),
    };
    constraints.extend(caps(n));
    Region::new(constraints)
}

/// Guards the catalog reconstruction: the region built from each
/// representative's acyclic subsets must coincide with the closed form of
/// its class, over the whole antenna grid.
#[test]
fn catalog_representatives_match_their_closed_form_regions() {
    for n in grid(4) {
        for class in 1..=16u8 {
            let built = dof_region(catalog_graph(class), &n);
            let literal = literal_region(class, &n);
            assert!(built.equals(&literal), "class {class} at {n}");
        }
    }
}

/// With enough transmit antennas for full zero forcing, side information
/// stops mattering: every region collapses to the per-receiver box.
#[test]
fn regions_collapse_when_tx_covers_all_receivers() {
    let configs = [
        AntennaConfig::new(6, 2, 2, 2).unwrap(),
        AntennaConfig::new(12, 2, 3, 4).unwrap(),
        AntennaConfig::new(4, 1, 1, 2).unwrap(),
        AntennaConfig::new(3, 1, 1, 1).unwrap(),
    ];
    for n in configs {
        assert!(n.tx >= n.rx_total());
        let boxed = Region::new(caps(&n));
        for g in all_labeled_graphs() {
            assert!(dof_region(g, &n).equals(&boxed), "{g} at {n}");
        }
    }
}

#[test]
fn property_sweep_over_the_full_grid_passes() {
    let reports = run_property_checks(4, &PropertyCheck::ALL);
    for report in &reports {
        assert!(
            report.passed(),
            "{} failed {} of {} cases: {:?}",
            report.property,
            report.failures.len(),
            report.cases,
            report.failures.iter().take(5).collect::<Vec<_>>()
        );
    }
}

#[test]
fn index_coding_region_of_three_cycle_has_the_half_point() {
    let region = index_coding_region(catalog_graph(7));
    let half = dof_atlas::region::ratio(1, 2);
    let vertices = region.vertices().unwrap();
    assert!(vertices.contains(&RationalPoint::new(half, half, half)));
}

prop_compose! {
    fn arb_graph()(mask in 0u8..64) -> SideInfoGraph {
        SideInfoGraph::from_mask(mask)
    }
}

prop_compose! {
    fn arb_config()(tx in 1u32..=4, r1 in 1u32..=4, r2 in 1u32..=4, r3 in 1u32..=4) -> AntennaConfig {
        AntennaConfig::new(tx, r1, r2, r3).unwrap()
    }
}

proptest! {
    #[test]
    fn region_documents_round_trip(g in arb_graph(), n in arb_config()) {
        let region = dof_region(g, &n);
        let doc = RegionDocument::from_region(&region).unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let parsed: RegionDocument = serde_json::from_str(&json).unwrap();
        prop_assert!(parsed.region().equals(&region));
        prop_assert_eq!(parsed.vertices, doc.vertices);
    }

    #[test]
    fn scaling_round_trips(g in arb_graph(), n in arb_config(), num in 1i64..=9, den in 1i64..=9) {
        let region = dof_region(g, &n);
        let factor = Rat::new(num, den);
        prop_assert_eq!(region.scale(factor).scale(factor.recip()), region);
    }

    #[test]
    fn enumerated_vertices_lie_in_the_region(g in arb_graph(), n in arb_config()) {
        let region = dof_region(g, &n);
        for v in region.vertices().unwrap() {
            prop_assert!(region.contains(&v));
        }
    }

    #[test]
    fn outer_bound_always_contains_the_region(g in arb_graph(), n in arb_config()) {
        let region = dof_region(g, &n);
        let outer = dof_atlas::region::acyclic_outer_bound(g, &n);
        prop_assert!(region.is_subset_of(&outer));
    }
}
