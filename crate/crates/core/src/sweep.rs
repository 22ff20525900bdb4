//! Exhaustive property sweeps over the antenna grid and all graph classes.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::graph::{all_labeled_graphs, catalog_graph, strip_non_cycle_arcs, SideInfoGraph};
use crate::region::{
    acyclic_outer_bound, dof_region, index_coding_region, isolated_two_cycle, rat, AntennaConfig,
    RationalPoint,
};
use crate::scheme::check_integer_feasibility;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyCheck {
    /// Corner points are integral everywhere except the 3-cycle class, whose
    /// lone fractional corner follows the odd-transmit-count criterion.
    Integrality,
    /// Regions grow with extra side information and with extra antennas.
    Monotonicity,
    /// The extra sum bound of the lone-2-cycle classes is redundant exactly
    /// when a cycle member matches the transmitter or zero forcing covers
    /// all receivers.
    Redundancy,
    /// At equal antenna counts the region is the index-coding region scaled
    /// by the antenna count.
    IndexCoding,
    /// Removing non-cycle arcs keeps the region unchanged at equal antenna
    /// counts; counterexamples at unequal counts are collected as notes.
    ArcRemoval,
    /// Integer points of each region coincide with the points the class
    /// scheme accepts.
    Oracle,
}

impl PropertyCheck {
    pub const ALL: [PropertyCheck; 6] = [
        PropertyCheck::Integrality,
        PropertyCheck::Monotonicity,
        PropertyCheck::Redundancy,
        PropertyCheck::IndexCoding,
        PropertyCheck::ArcRemoval,
        PropertyCheck::Oracle,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PropertyCheck::Integrality => "integrality",
            PropertyCheck::Monotonicity => "monotonicity",
            PropertyCheck::Redundancy => "redundancy",
            PropertyCheck::IndexCoding => "index-coding",
            PropertyCheck::ArcRemoval => "arc-removal",
            PropertyCheck::Oracle => "oracle",
        }
    }
}

impl FromStr for PropertyCheck {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        PropertyCheck::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    pub cases: u64,
    pub failures: Vec<String>,
    /// Informational findings that are not failures (e.g. expected
    /// counterexamples at unequal antenna counts).
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn grid(max_antenna: u32) -> Vec<AntennaConfig> {
    let mut out = Vec::new();
    for tx in 1..=max_antenna {
        for r1 in 1..=max_antenna {
            for r2 in 1..=max_antenna {
                for r3 in 1..=max_antenna {
                    out.push(AntennaConfig::new(tx, r1, r2, r3).unwrap());
                }
            }
        }
    }
    out
}

fn check_integrality(max_antenna: u32) -> PropertyReport {
    let mut report = PropertyReport {
        property: PropertyCheck::Integrality.name().into(),
        cases: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for n in grid(max_antenna) {
        for class in 1..=16u8 {
            report.cases += 1;
            let region = dof_region(catalog_graph(class), &n);
            let fractional = region.vertices().unwrap().into_iter().filter(|v| !v.is_integral());
            let fractional: Vec<RationalPoint> = fractional.collect();
            if class != 7 {
                if !fractional.is_empty() {
                    report
                        .failures
                        .push(format!("class {class} at {n}: fractional corners {fractional:?}"));
                }
                continue;
            }
            let min_rx = *n.rx.iter().min().unwrap();
            let expected = n.tx % 2 == 1 && n.tx <= 2 * min_rx;
            if expected {
                let half = crate::region::ratio(n.tx as i64, 2);
                let want = RationalPoint::new(half, half, half);
                if fractional != vec![want] {
                    report.failures.push(format!(
                        "class 7 at {n}: expected lone fractional corner {want}, got {fractional:?}"
                    ));
                }
            } else if !fractional.is_empty() {
                report
                    .failures
                    .push(format!("class 7 at {n}: unexpected fractional corners {fractional:?}"));
            }
        }
    }
    report
}

fn check_monotonicity(max_antenna: u32) -> PropertyReport {
    let mut report = PropertyReport {
        property: PropertyCheck::Monotonicity.name().into(),
        cases: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for n in grid(max_antenna) {
        // More side information never shrinks the region.
        let graphs: Vec<SideInfoGraph> = all_labeled_graphs().collect();
        let regions: Vec<_> = graphs.iter().map(|&g| dof_region(g, &n)).collect();
        let vertex_sets: Vec<_> = regions.iter().map(|r| r.vertices().unwrap()).collect();
        for (a, &ga) in graphs.iter().enumerate() {
            for (b, &gb) in graphs.iter().enumerate() {
                if a == b || !ga.is_arc_subset_of(&gb) {
                    continue;
                }
                report.cases += 1;
                if !vertex_sets[a].iter().all(|v| regions[b].contains(v)) {
                    report.failures.push(format!("{n}: region of {ga} not within {gb}"));
                }
            }
        }
        // More antennas never shrink the region.
        for class in 1..=16u8 {
            let g = catalog_graph(class);
            let base = dof_region(g, &n);
            for bump in 0..4usize {
                let mut grown = n.as_array();
                grown[bump] += 1;
                if grown.iter().any(|&x| x > max_antenna) {
                    continue;
                }
                report.cases += 1;
                let bigger = AntennaConfig::new(grown[0], grown[1], grown[2], grown[3]).unwrap();
                if !base.is_subset_of(&dof_region(g, &bigger)) {
                    report
                        .failures
                        .push(format!("class {class}: growing {n} to {bigger} shrank the region"));
                }
            }
        }
    }
    report
}

fn check_redundancy(max_antenna: u32) -> PropertyReport {
    let mut report = PropertyReport {
        property: PropertyCheck::Redundancy.name().into(),
        cases: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for n in grid(max_antenna) {
        for g in all_labeled_graphs() {
            report.cases += 1;
            let full = dof_region(g, &n);
            let outer = acyclic_outer_bound(g, &n);
            let equal = full.equals(&outer);
            match isolated_two_cycle(g) {
                Some(split) => {
                    let (b, c) = split.cycle;
                    let expected = n.rx(b) >= n.tx || n.rx(c) >= n.tx || n.tx >= n.rx_total();
                    if equal != expected {
                        report.failures.push(format!(
                            "{g} at {n}: sum bound redundancy {equal}, criterion says {expected}"
                        ));
                    }
                }
                None => {
                    if !equal {
                        report
                            .failures
                            .push(format!("{g} at {n}: region differs from its outer bound"));
                    }
                }
            }
        }
    }
    report
}

fn check_index_coding(max_antenna: u32) -> PropertyReport {
    let mut report = PropertyReport {
        property: PropertyCheck::IndexCoding.name().into(),
        cases: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for count in 1..=max_antenna {
        let n = AntennaConfig::new(count, count, count, count).unwrap();
        for g in all_labeled_graphs() {
            report.cases += 1;
            let scaled = index_coding_region(g).scale(rat(count as i64));
            if !dof_region(g, &n).equals(&scaled) {
                report.failures.push(format!(
                    "{g} at equal count {count}: region differs from scaled index-coding region"
                ));
            }
        }
    }
    report
}

fn check_arc_removal(max_antenna: u32) -> PropertyReport {
    let mut report = PropertyReport {
        property: PropertyCheck::ArcRemoval.name().into(),
        cases: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for count in 1..=max_antenna {
        let n = AntennaConfig::new(count, count, count, count).unwrap();
        for g in all_labeled_graphs() {
            report.cases += 1;
            let stripped = strip_non_cycle_arcs(g);
            if !dof_region(g, &n).equals(&dof_region(stripped, &n)) {
                report.failures.push(format!(
                    "{g} at equal count {count}: stripping non-cycle arcs changed the region"
                ));
            }
        }
    }
    // At unequal antenna counts the invariance can break; list where, per
    // catalog class.
    for n in grid(max_antenna) {
        if n.rx.iter().all(|&r| r == n.tx) {
            continue;
        }
        for class in 1..=16u8 {
            let g = catalog_graph(class);
            let stripped = strip_non_cycle_arcs(g);
            if stripped == g {
                continue;
            }
            if !dof_region(g, &n).equals(&dof_region(stripped, &n)) {
                report.notes.push(format!(
                    "class {class} ({g}) -> {stripped} changes the region at {n}"
                ));
            }
        }
    }
    report
}

fn check_oracle(max_antenna: u32) -> PropertyReport {
    let mut report = PropertyReport {
        property: PropertyCheck::Oracle.name().into(),
        cases: 0,
        failures: Vec::new(),
        notes: Vec::new(),
    };
    for n in grid(max_antenna) {
        for class in 1..=16u8 {
            report.cases += 1;
            let region = dof_region(catalog_graph(class), &n);
            let from_region = region.integer_points().unwrap();
            let cap = n.tx.max(*n.rx.iter().max().unwrap());
            let mut from_scheme = Vec::new();
            for d1 in 0..=cap {
                for d2 in 0..=cap {
                    for d3 in 0..=cap {
                        if check_integer_feasibility(class, &n, [d1, d2, d3]) {
                            from_scheme.push([d1, d2, d3]);
                        }
                    }
                }
            }
            if from_region != from_scheme {
                report.failures.push(format!(
                    "class {class} at {n}: region integer points and scheme acceptance differ"
                ));
            }
        }
    }
    report
}

/// Runs the requested property checks over the antenna grid
/// `1..=max_antenna` in every coordinate.
pub fn run_property_checks(max_antenna: u32, checks: &[PropertyCheck]) -> Vec<PropertyReport> {
    checks
        .iter()
        .map(|check| match check {
            PropertyCheck::Integrality => check_integrality(max_antenna),
            PropertyCheck::Monotonicity => check_monotonicity(max_antenna),
            PropertyCheck::Redundancy => check_redundancy(max_antenna),
            PropertyCheck::IndexCoding => check_index_coding(max_antenna),
            PropertyCheck::ArcRemoval => check_arc_removal(max_antenna),
            PropertyCheck::Oracle => check_oracle(max_antenna),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_checks_pass() {
        let reports = run_property_checks(2, &PropertyCheck::ALL);
        for report in &reports {
            assert!(report.passed(), "{}: {:?}", report.property, report.failures);
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn arc_removal_notes_list_the_known_counterexample() {
        let report = check_arc_removal(3);
        assert!(report.passed());
        assert!(
            report.notes.iter().any(|note| note.contains("class 11") && note.contains("3,2,2,2")),
            "notes: {:?}",
            report.notes
        );
    }

    #[test]
    fn check_names_round_trip() {
        for check in PropertyCheck::ALL {
            assert_eq!(check.name().parse::<PropertyCheck>().unwrap(), check);
        }
        assert!("bogus".parse::<PropertyCheck>().is_err());
    }
}
