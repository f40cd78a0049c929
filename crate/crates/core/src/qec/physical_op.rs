//! Structured operators on tensor-product physical spaces.
//!
//! Physical spaces of VBS codes are far too large for dense d_Q×d_Q
//! matrices, so operators are kept as expression trees and only ever applied
//! to thin column blocks (typically the d_L columns of an encoding isometry).

use crate::error::{QxError, Result};
use crate::linalg::{hermiticity_residual, identity, CMatrix, C64, ONE, ZERO};

#[derive(Clone, Debug)]
pub enum PhysicalOp {
    Identity(usize),
    Dense(CMatrix),
    /// `matrix` acting on factor `site` of a space with factor dimensions `dims`.
    Local {
        dims: Vec<usize>,
        site: usize,
        matrix: CMatrix,
    },
    Scaled(C64, Box<PhysicalOp>),
    Sum(Vec<PhysicalOp>),
    /// Operator product in written order: the last factor acts first.
    Product(Vec<PhysicalOp>),
}

impl PhysicalOp {
    pub fn local(dims: &[usize], site: usize, matrix: CMatrix) -> Result<Self> {
        let d = *dims
            .get(site)
            .ok_or_else(|| QxError::IndexOutOfRange(format!("site {site} of {} factors", dims.len())))?;
        if matrix.shape() != (d, d) {
            return Err(QxError::DimensionMismatch(format!(
                "{}x{} operator on a factor of dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(PhysicalOp::Local { dims: dims.to_vec(), site, matrix })
    }

    /// Tensor product of single-factor operators; `None` entries are identities.
    pub fn product_of_locals(dims: &[usize], factors: &[(usize, CMatrix)]) -> Result<Self> {
        let ops =
            factors.iter().map(|(site, m)| PhysicalOp::local(dims, *site, m.clone())).collect::<Result<Vec<_>>>()?;
        Ok(PhysicalOp::Product(ops))
    }

    pub fn scaled(self, factor: C64) -> Self {
        PhysicalOp::Scaled(factor, Box::new(self))
    }

    /// Total dimension, when it can be inferred.
    pub fn dim(&self) -> Option<usize> {
        match self {
            PhysicalOp::Identity(n) => Some(*n),
            PhysicalOp::Dense(m) => Some(m.nrows()),
            PhysicalOp::Local { dims, .. } => Some(dims.iter().product()),
            PhysicalOp::Scaled(_, op) => op.dim(),
            PhysicalOp::Sum(ops) | PhysicalOp::Product(ops) => ops.iter().find_map(|op| op.dim()),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            PhysicalOp::Identity(n) => PhysicalOp::Identity(*n),
            PhysicalOp::Dense(m) => PhysicalOp::Dense(m.adjoint()),
            PhysicalOp::Local { dims, site, matrix } => {
                PhysicalOp::Local { dims: dims.clone(), site: *site, matrix: matrix.adjoint() }
            }
            PhysicalOp::Scaled(z, op) => PhysicalOp::Scaled(z.conj(), Box::new(op.adjoint())),
            PhysicalOp::Sum(ops) => PhysicalOp::Sum(ops.iter().map(|o| o.adjoint()).collect()),
            PhysicalOp::Product(ops) => PhysicalOp::Product(ops.iter().rev().map(|o| o.adjoint()).collect()),
        }
    }

    /// Applies the operator to every column of `columns`.
    pub fn apply(&self, columns: &CMatrix) -> Result<CMatrix> {
        let rows = columns.nrows();
        if let Some(n) = self.dim() {
            if n != rows {
                return Err(QxError::DimensionMismatch(format!("operator of dimension {n} on {rows} rows")));
            }
        }
        match self {
            PhysicalOp::Identity(_) => Ok(columns.clone()),
            PhysicalOp::Dense(m) => Ok(m * columns),
            PhysicalOp::Local { dims, site, matrix } => Ok(apply_local(dims, *site, matrix, columns)),
            PhysicalOp::Scaled(z, op) => Ok(op.apply(columns)? * *z),
            PhysicalOp::Sum(ops) => {
                let mut acc = CMatrix::zeros(rows, columns.ncols());
                for op in ops {
                    acc += op.apply(columns)?;
                }
                Ok(acc)
            }
            PhysicalOp::Product(ops) => {
                let mut acc = columns.clone();
                for op in ops.iter().rev() {
                    acc = op.apply(&acc)?;
                }
                Ok(acc)
            }
        }
    }

    /// Dense matrix; only sensible for small spaces.
    pub fn to_dense(&self) -> Result<CMatrix> {
        let n = self.dim().ok_or_else(|| QxError::InvalidParameter("operator dimension cannot be inferred".into()))?;
        self.apply(&identity(n))
    }

    /// Local factors of a transversal operator: `(site, matrix)` pairs, or
    /// `None` when the operator is not a product of single-site factors.
    pub fn local_factors(&self) -> Option<Vec<(usize, &CMatrix)>> {
        match self {
            PhysicalOp::Local { site, matrix, .. } => Some(vec![(*site, matrix)]),
            PhysicalOp::Product(ops) => {
                let mut out = Vec::new();
                for op in ops {
                    out.extend(op.local_factors()?);
                }
                Some(out)
            }
            PhysicalOp::Identity(_) => Some(Vec::new()),
            _ => None,
        }
    }

    pub fn is_hermitian_local(&self, tol: f64) -> bool {
        match self {
            PhysicalOp::Local { matrix, .. } => hermiticity_residual(matrix) < tol,
            _ => false,
        }
    }
}

fn apply_local(dims: &[usize], site: usize, matrix: &CMatrix, columns: &CMatrix) -> CMatrix {
    let left: usize = dims[..site].iter().product();
    let mid = dims[site];
    let right: usize = dims[site + 1..].iter().product();
    let mut out = CMatrix::zeros(columns.nrows(), columns.ncols());
    let entries: Vec<(usize, usize, C64)> = (0..mid)
        .flat_map(|m| (0..mid).map(move |k| (m, k)))
        .map(|(m, k)| (m, k, matrix[(m, k)]))
        .filter(|&(_, _, z)| z != ZERO)
        .collect();
    for c in 0..columns.ncols() {
        let src = columns.column(c);
        let mut dst = out.column_mut(c);
        for l in 0..left {
            let base = l * mid * right;
            for &(m, k, z) in &entries {
                let to = base + m * right;
                let from = base + k * right;
                if z == ONE {
                    for r in 0..right {
                        dst[to + r] += src[from + r];
                    }
                } else {
                    for r in 0..right {
                        dst[to + r] += z * src[from + r];
                    }
                }
            }
        }
    }
    out
}

/// Qubit Pauli matrices I, X, Y, Z.
pub fn pauli(label: char) -> Result<CMatrix> {
    let z = ZERO;
    let o = ONE;
    let i = crate::linalg::I;
    Ok(match label {
        'I' => identity(2),
        'X' => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        other => return Err(QxError::Parse(format!("unknown Pauli label {other:?}"))),
    })
}

/// Pauli string such as "XZZXI" as a product of single-qubit factors.
pub fn pauli_string(labels: &str) -> Result<PhysicalOp> {
    let dims = vec![2; labels.chars().count()];
    let factors = labels
        .chars()
        .enumerate()
        .filter(|&(_, l)| l != 'I')
        .map(|(site, l)| Ok((site, pauli(l)?)))
        .collect::<Result<Vec<_>>>()?;
    if factors.is_empty() {
        return Ok(PhysicalOp::Identity(1 << dims.len()));
    }
    PhysicalOp::product_of_locals(&dims, &factors)
}

/// All 3n weight-one Paulis on n qubits, ordered by qubit then X, Y, Z.
pub fn weight_one_paulis(n: usize) -> Vec<PhysicalOp> {
    let dims = vec![2; n];
    (0..n)
        .flat_map(|q| ['X', 'Y', 'Z'].into_iter().map(move |l| (q, l)))
        .map(|(q, l)| PhysicalOp::Local { dims: dims.clone(), site: q, matrix: pauli(l).expect("valid label") })
        .collect()
}

/// Single-qubit depolarizing noise on every qubit with total error
/// probability p: {√(1−p)·1} ∪ {√(p/3n)·σ}.
pub fn depolarizing_pauli_noise(n: usize, p: f64) -> Vec<PhysicalOp> {
    let mut out = vec![PhysicalOp::Identity(1 << n).scaled(C64::new((1.0 - p).sqrt(), 0.0))];
    let w = C64::new((p / (3 * n) as f64).sqrt(), 0.0);
    out.extend(weight_one_paulis(n).into_iter().map(|e| e.scaled(w)));
    out
}
