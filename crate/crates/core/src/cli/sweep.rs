use std::fmt::Write as _;

use crate::error::Result;
use crate::linalg::{identity, real, CMatrix};
use crate::qec::epsilon_from_gram;
use crate::quantum_ops::trace_distance;
use crate::vbs::{closed_correlation, closed_detection, eta, BondInsertion, VbsCode};

pub const SWEEP_HEADER: &str = "d,N,chi,eta,max_detect_closedform_residual,max_corr_closedform_residual,\
edge_fixedpoint_distance,epsilon,erasure_bound";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub n: usize,
    pub chi: f64,
    pub eta: f64,
    pub max_detect_residual: f64,
    pub max_corr_residual: f64,
    /// max_α of the trace distance between E^N(|α⟩⟨α|) and 1/d.
    pub edge_fixedpoint_distance: f64,
    pub epsilon: f64,
    pub erasure_bound: f64,
}

impl SweepRow {
    fn floats(&self) -> [(&'static str, f64); 7] {
        [
            ("chi", self.chi),
            ("eta", self.eta),
            ("max_detect_closedform_residual", self.max_detect_residual),
            ("max_corr_closedform_residual", self.max_corr_residual),
            ("edge_fixedpoint_distance", self.edge_fixedpoint_distance),
            ("epsilon", self.epsilon),
            ("erasure_bound", self.erasure_bound),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}", self.d, self.n);
        for (_, v) in self.floats() {
            write!(out, ",{v:.11e}").expect("writing to a String");
        }
        out
    }

    /// Key-value lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("d = {}\nN = {}\n", self.d, self.n);
        for (k, v) in self.floats() {
            writeln!(out, "{k} = {v:.11e}").expect("writing to a String");
        }
        out
    }
}

fn max_entry_gap(a: &CMatrix, f: impl Fn(usize, usize) -> crate::linalg::C64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - f(i, j)).norm());
        }
    }
    worst
}

/// Transfer contraction against closed forms, edge relaxation, and ε of the
/// all-bonds error model with total probability `p`.
pub fn sweep_row(d: usize, n: usize, p: f64) -> Result<SweepRow> {
    let code = VbsCode::new(d, n)?;
    let basis = code.basis();
    let q = code.site_dim();
    let mut max_detect: f64 = 0.0;
    for a in 0..q {
        for bond in 1..=n {
            let m = code.contract(&[BondInsertion { bond, operator: basis.generator(a).clone() }])?;
            max_detect = max_detect.max(max_entry_gap(&m, |x, y| closed_detection(basis, x, y, a, bond)));
        }
    }
    let mut max_corr: f64 = 0.0;
    for a in 0..q {
        for b in 0..q {
            for m in 1..n {
                for k in m + 1..=n {
                    let c = code.correlation_matrix(a, b, m, k)?;
                    max_corr = max_corr.max(max_entry_gap(&c, |x, y| closed_correlation(basis, x, y, a, b, m, k)));
                }
            }
        }
    }
    let mixed = identity(d) * real(1.0 / d as f64);
    let mut edge: f64 = 0.0;
    for alpha in 0..d {
        edge = edge.max(trace_distance(&code.edge_state(alpha, n)?.iterated, &mixed)?);
    }
    Ok(SweepRow {
        d,
        n,
        chi: code.chi(),
        eta: eta(d, n)?,
        max_detect_residual: max_detect,
        max_corr_residual: max_corr,
        edge_fixedpoint_distance: edge,
        epsilon: epsilon_from_gram(&code.bond_error_gram(p, &[])?),
        erasure_bound: code.erasure_bound(),
    })
}
