//! Reference constants for max-cut on large-girth regular graphs.
//!
//! Values are `C` in the cut fraction `1/2 + C / sqrt(D)`.

use std::f64::consts::{E, FRAC_1_SQRT_2, PI};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantRow {
    pub label: &'static str,
    pub value: f64,
    pub provenance: &'static str,
}

impl ConstantRow {
    /// Cut fraction at degree `d`.
    pub fn cut_fraction(&self, d: usize) -> f64 {
        0.5 + self.value / (d as f64).sqrt()
    }
}

pub fn constants() -> Vec<ConstantRow> {
    vec![
        ConstantRow {
            label: "k-local Gaussian wave algorithm",
            value: 2.0 / PI,
            provenance: "2/pi, limit of the wave algorithm as k and D grow",
        },
        ConstantRow {
            label: "one-local upper bound",
            value: FRAC_1_SQRT_2,
            provenance: "1/sqrt(2), bound on every one-local cut",
        },
        ConstantRow {
            label: "random-graph optimum P*",
            value: 0.7632,
            provenance: "Parisi constant P*, large-degree random regular graphs",
        },
        ConstantRow {
            label: "Hirvonen et al. one-local",
            value: 0.28125,
            provenance: "9/32, randomized one-round algorithm",
        },
        ConstantRow {
            label: "QAOA_1",
            value: 1.0 / (2.0 * E.sqrt()),
            provenance: "1/(2 sqrt(e)), large-girth limit at p = 1",
        },
        ConstantRow {
            label: "QAOA_2 upper evidence",
            value: 0.41,
            provenance: "numerical evidence, large-girth limit at p = 2",
        },
        ConstantRow {
            label: "two-local classical evidence",
            value: 0.42,
            provenance: "numerical evidence for two-local threshold algorithms",
        },
        ConstantRow {
            label: "tree-broadcast heuristic point",
            value: 0.5,
            provenance: "heuristic value of broadcasting signs down a tree",
        },
    ]
}
