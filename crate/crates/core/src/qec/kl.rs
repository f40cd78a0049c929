//! Knill-Laflamme analysis: detection, the canonical trace/traceless split of
//! the compressed error products, and the correctability measure ε.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{QxError, Result};
use crate::linalg::{eigh, identity, op_norm, trace, trace_norm, CMatrix, C64, ZERO};

use super::code::CodeIsometry;
use super::physical_op::PhysicalOp;
use super::recovery::{logical_channel_from_gram, recovery_error, RecoveryChannel};

/// Relative cutoff for retaining eigenvalues of the error matrix a.
pub const EIGEN_CUTOFF: f64 = 1e-12;

/// Residual of V†ΣE†EV − 1 below which an error set counts as a channel.
pub const TP_TOL: f64 = 1e-8;

/// E_i V for every error, computed in parallel.
pub fn encoded_errors(code: &CodeIsometry, errors: &[PhysicalOp]) -> Result<Vec<CMatrix>> {
    errors.par_iter().map(|e| e.apply(code.v())).collect()
}

/// Blocks M_ij = (E_iV)†(E_jV), stored row-major over (i, j).
#[derive(Clone, Debug)]
pub struct ErrorGram {
    pub d_l: usize,
    pub n: usize,
    blocks: Vec<CMatrix>,
}

impl ErrorGram {
    pub fn from_encoded(encoded: &[CMatrix]) -> Result<Self> {
        let first = encoded.first().ok_or_else(|| QxError::InvalidParameter("empty error list".into()))?;
        let (rows, d_l) = first.shape();
        let n = encoded.len();
        let mut stacked = CMatrix::zeros(rows, n * d_l);
        for (i, ev) in encoded.iter().enumerate() {
            if ev.shape() != (rows, d_l) {
                return Err(QxError::DimensionMismatch("encoded errors differ in shape".into()));
            }
            stacked.columns_mut(i * d_l, d_l).copy_from(ev);
        }
        let full = stacked.adjoint() * &stacked;
        let blocks =
            (0..n * n).map(|ij| full.view(((ij / n) * d_l, (ij % n) * d_l), (d_l, d_l)).into_owned()).collect();
        Ok(Self { d_l, n, blocks })
    }

    /// From precomputed blocks M_ij, row-major over (i, j).
    pub fn from_blocks(d_l: usize, n: usize, blocks: Vec<CMatrix>) -> Result<Self> {
        if n == 0 || blocks.len() != n * n || blocks.iter().any(|b| b.shape() != (d_l, d_l)) {
            return Err(QxError::DimensionMismatch(format!(
                "{} blocks for {n} errors of logical dim {d_l}",
                blocks.len()
            )));
        }
        Ok(Self { d_l, n, blocks })
    }

    pub fn new(code: &CodeIsometry, errors: &[PhysicalOp]) -> Result<Self> {
        Self::from_encoded(&encoded_errors(code, errors)?)
    }

    pub fn block(&self, i: usize, j: usize) -> &CMatrix {
        &self.blocks[i * self.n + j]
    }

    /// a_ij = tr(M_ij)/d_L.
    pub fn a(&self) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |i, j| trace(self.block(i, j)) / self.d_l as f64)
    }

    /// B̂_ij = M_ij − a_ij·1.
    pub fn residual(&self, i: usize, j: usize) -> CMatrix {
        let m = self.block(i, j);
        m - identity(self.d_l) * (trace(m) / self.d_l as f64)
    }

    /// Gram blocks of F_ℓ = Σ_i y_ℓi E_i: M'_lm = Σ_ij conj(y_li) y_mj M_ij.
    pub fn transform(&self, upsilon: &CMatrix) -> Result<Self> {
        if upsilon.ncols() != self.n || upsilon.nrows() == 0 {
            return Err(QxError::DimensionMismatch(format!(
                "{}x{} transform for {} errors",
                upsilon.nrows(),
                upsilon.ncols(),
                self.n
            )));
        }
        let m = upsilon.nrows();
        let mut blocks = Vec::with_capacity(m * m);
        for l in 0..m {
            for k in 0..m {
                let mut acc = CMatrix::zeros(self.d_l, self.d_l);
                for i in 0..self.n {
                    let yl = upsilon[(l, i)].conj();
                    if yl == ZERO {
                        continue;
                    }
                    for j in 0..self.n {
                        let w = yl * upsilon[(k, j)];
                        if w != ZERO {
                            acc += self.block(i, j) * w;
                        }
                    }
                }
                blocks.push(acc);
            }
        }
        Self::from_blocks(self.d_l, m, blocks)
    }

    /// ‖Σ_i M_ii − 1‖.
    pub fn tp_residual(&self) -> f64 {
        let mut total = -identity(self.d_l);
        for i in 0..self.n {
            total += self.block(i, i);
        }
        op_norm(&total)
    }
}

/// (e_i, residual_i) with e_i = tr(V†E_iV)/d_L and residual ‖V†E_iV − e_i‖.
pub fn detect_condition(code: &CodeIsometry, errors: &[PhysicalOp]) -> Result<Vec<(C64, f64)>> {
    errors
        .par_iter()
        .map(|e| {
            let m = code.compress(e)?;
            let ev = trace(&m) / code.d_l() as f64;
            Ok((ev, op_norm(&(m - identity(code.d_l()) * ev))))
        })
        .collect()
}

/// Eigen-decomposition of a with the rotated residuals.
#[derive(Clone, Debug)]
pub struct KlDecomposition {
    pub a: CMatrix,
    /// Eigenvalues d_k, descending.
    pub eigenvalues: Vec<f64>,
    /// u_kj with F_k = Σ_j u_kj E_j.
    pub rotation: CMatrix,
    pub retained: usize,
    /// B̂_kl stored row-major over (k, l).
    pub rotated_residuals: Vec<CMatrix>,
    pub beta: Vec<Vec<f64>>,
    pub d_t_first_order: f64,
}

pub fn decompose(gram: &ErrorGram) -> Result<KlDecomposition> {
    let n = gram.n;
    let a = gram.a();
    let (values, vectors) = eigh(&a);
    let order: Vec<usize> = (0..n).rev().collect();
    let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let max = eigenvalues.first().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return Err(QxError::DegenerateNoise);
    }
    let retained = eigenvalues.iter().take_while(|&&dk| dk > EIGEN_CUTOFF * max).count();
    // Row k of u is the transposed k-th eigenvector.
    let rotation = CMatrix::from_fn(n, n, |k, j| vectors[(j, order[k])]);

    let residuals: Vec<CMatrix> = (0..n * n).map(|ij| gram.residual(ij / n, ij % n)).collect();
    let rotated_residuals: Vec<CMatrix> = (0..n * n)
        .into_par_iter()
        .map(|kl| {
            let (k, l) = (kl / n, kl % n);
            let mut acc = CMatrix::zeros(gram.d_l, gram.d_l);
            for i in 0..n {
                let ui = rotation[(k, i)].conj();
                if ui == ZERO {
                    continue;
                }
                for j in 0..n {
                    let w = ui * rotation[(l, j)];
                    if w != ZERO {
                        acc += &residuals[i * n + j] * w;
                    }
                }
            }
            acc
        })
        .collect();
    let beta: Vec<Vec<f64>> =
        (0..n).map(|k| (0..n).map(|l| rotated_residuals[k * n + l].norm_squared()).collect()).collect();
    let d_t_first_order =
        (0..retained).map(|k| beta[k].iter().sum::<f64>() / eigenvalues[k]).sum::<f64>() / (2.0 * gram.d_l as f64);
    Ok(KlDecomposition { a, eigenvalues, rotation, retained, rotated_residuals, beta, d_t_first_order })
}

/// ε: trace distance between the Choi matrices of ρ ↦ Σ_ij tr(ρM_ij)|j⟩⟨i|
/// and ρ ↦ Σ_ij a_ij tr(ρ)|j⟩⟨i|.
pub fn epsilon_from_gram(gram: &ErrorGram) -> f64 {
    let (n, d) = (gram.n, gram.d_l);
    let mut diff = CMatrix::zeros(n * d, n * d);
    for i in 0..n {
        for j in 0..n {
            let b = gram.residual(i, j);
            for r in 0..d {
                for s in 0..d {
                    diff[(j * d + r, i * d + s)] = b[(s, r)] / d as f64;
                }
            }
        }
    }
    0.5 * trace_norm(&crate::linalg::hermitian_part(&diff))
}

pub fn correctability_epsilon(code: &CodeIsometry, errors: &[PhysicalOp]) -> Result<f64> {
    if errors.is_empty() {
        return Err(QxError::InvalidParameter("empty error list".into()));
    }
    let gram = ErrorGram::new(code, errors)?;
    decompose(&gram)?;
    Ok(epsilon_from_gram(&gram))
}

/// F_ℓ = Σ_i y_ℓi E_i.
pub fn span_transform(errors: &[PhysicalOp], upsilon: &CMatrix) -> Result<Vec<PhysicalOp>> {
    if upsilon.ncols() != errors.len() {
        return Err(QxError::DimensionMismatch(format!(
            "{}x{} transform for {} errors",
            upsilon.nrows(),
            upsilon.ncols(),
            errors.len()
        )));
    }
    Ok((0..upsilon.nrows())
        .map(|l| {
            PhysicalOp::Sum(
                errors
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| upsilon[(l, i)] != ZERO)
                    .map(|(i, e)| e.clone().scaled(upsilon[(l, i)]))
                    .collect(),
            )
        })
        .collect())
}

fn ser_cmatrix<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    rows.serialize(s)
}

fn ser_cmatrices<S: Serializer>(ms: &[CMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
    let all: Vec<Vec<Vec<[f64; 2]>>> = ms
        .iter()
        .map(|m| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
        .collect();
    all.serialize(s)
}

/// Full Knill-Laflamme report for a code and an error set. Complex matrices
/// serialize as nested arrays of `[re, im]` pairs; `rotated_residuals` lists
/// B̂_kl row-major over (k, l).
#[derive(Clone, Debug, Serialize)]
pub struct KLReport {
    pub error_count: usize,
    pub d_l: usize,
    pub d_e: usize,
    pub cutoff: f64,
    pub tp_residual: f64,
    pub max_beta: f64,
    pub d_t_first_order: f64,
    /// Present when the error set is trace preserving on the code.
    pub d_t_exact: Option<f64>,
    pub diamond_bracket: Option<[f64; 2]>,
    pub entanglement_fidelity: Option<f64>,
    pub bures_distance: Option<f64>,
    pub epsilon: f64,
    pub eigenvalues: Vec<f64>,
    #[serde(serialize_with = "ser_cmatrix")]
    pub a: CMatrix,
    #[serde(serialize_with = "ser_cmatrix")]
    pub rotation: CMatrix,
    pub beta: Vec<Vec<f64>>,
    #[serde(serialize_with = "ser_cmatrices")]
    pub rotated_residuals: Vec<CMatrix>,
}

impl KLReport {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| QxError::NumericalFailure(format!("report serialization: {e}")))
    }
}

/// Runs the whole analysis. When the errors form a channel on the code they
/// are also used as the noise for the canonical recovery, filling in the
/// exact recovery error and the diamond-norm bracket.
pub fn kl_decompose(code: &CodeIsometry, errors: &[PhysicalOp]) -> Result<KLReport> {
    if errors.is_empty() {
        return Err(QxError::InvalidParameter("empty error list".into()));
    }
    kl_report_from_gram(&ErrorGram::new(code, errors)?)
}

/// The report computed from the Gram blocks alone.
pub fn kl_report_from_gram(gram: &ErrorGram) -> Result<KLReport> {
    let dec = decompose(gram)?;
    let epsilon = epsilon_from_gram(gram);
    let tp_residual = gram.tp_residual();
    let mut report = KLReport {
        error_count: gram.n,
        d_l: gram.d_l,
        d_e: dec.retained,
        cutoff: EIGEN_CUTOFF,
        tp_residual,
        max_beta: dec.beta.iter().flatten().copied().fold(0.0, f64::max),
        d_t_first_order: dec.d_t_first_order,
        d_t_exact: None,
        diamond_bracket: None,
        entanglement_fidelity: None,
        bures_distance: None,
        epsilon,
        eigenvalues: dec.eigenvalues.clone(),
        a: dec.a.clone(),
        rotation: dec.rotation.clone(),
        beta: dec.beta.clone(),
        rotated_residuals: dec.rotated_residuals.clone(),
    };
    if tp_residual < TP_TOL {
        let q = logical_channel_from_gram(gram, &dec)?;
        let err = recovery_error(&q)?;
        report.d_t_exact = Some(err.d_t_exact);
        report.diamond_bracket = Some([err.diamond_bracket.0, err.diamond_bracket.1]);
        report.entanglement_fidelity = Some(err.fidelity);
        report.bures_distance = Some(err.bures_distance);
    }
    Ok(report)
}

/// Builds the recovery for `errors` from a finished report.
pub fn recovery_from_kl(code: &CodeIsometry, errors: &[PhysicalOp], report: &KLReport) -> Result<RecoveryChannel> {
    if report.error_count != errors.len() {
        return Err(QxError::DimensionMismatch(format!(
            "report covers {} errors, {} given",
            report.error_count,
            errors.len()
        )));
    }
    let encoded = encoded_errors(code, errors)?;
    let dec = KlDecomposition {
        a: report.a.clone(),
        eigenvalues: report.eigenvalues.clone(),
        rotation: report.rotation.clone(),
        retained: report.d_e,
        rotated_residuals: Vec::new(),
        beta: Vec::new(),
        d_t_first_order: report.d_t_first_order,
    };
    RecoveryChannel::from_encoded(code, &encoded, &dec)
}
