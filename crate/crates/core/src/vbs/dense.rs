//! Brute-force dense encoding of the VBS code, used as an oracle.

use crate::error::{QxError, Result};
use crate::linalg::{basis_vector, CMatrix, CVector, ZERO};
use crate::qec::CodeIsometry;

use super::VbsCode;

/// Largest number of amplitudes a dense state may hold.
pub const DENSE_CAP: usize = 2_000_000;

/// (d²−1)^N·d, or an error when it exceeds the cap.
pub fn dense_len(code: &VbsCode) -> Result<usize> {
    let mut len = code.d();
    for _ in 0..code.n() {
        len = len.saturating_mul(code.site_dim());
        if len > DENSE_CAP {
            return Err(QxError::DenseCapExceeded { needed: len, cap: DENSE_CAP });
        }
    }
    Ok(len)
}

pub fn within_cap(code: &VbsCode) -> bool {
    dense_len(code).is_ok()
}

/// Σ A^{i_N}⋯A^{i_1}|α⟩ |i_1⟩⋯|i_N⟩ with site 1 most significant and the
/// edge factor last.
pub fn encode_dense(code: &VbsCode, alpha: usize) -> Result<CVector> {
    let d = code.d();
    if alpha >= d {
        return Err(QxError::IndexOutOfRange(format!("logical index {alpha} for d = {d}")));
    }
    dense_len(code)?;
    let q = code.site_dim();
    let mut state = basis_vector(d, alpha);
    for _ in 0..code.n() {
        let prefixes = state.len() / d;
        let mut next = CVector::zeros(state.len() * q);
        for p in 0..prefixes {
            let edge = state.rows(p * d, d);
            for (i, a) in code.kraus().iter().enumerate() {
                let out = a * edge;
                let base = (p * q + i) * d;
                for e in 0..d {
                    if out[e] != ZERO {
                        next[base + e] = out[e];
                    }
                }
            }
        }
        state = next;
    }
    Ok(state)
}

/// V with columns encode_dense(|α⟩).
pub fn dense_isometry(code: &VbsCode) -> Result<CodeIsometry> {
    let len = dense_len(code)?;
    let mut v = CMatrix::zeros(len, code.d());
    for alpha in 0..code.d() {
        v.set_column(alpha, &encode_dense(code, alpha)?);
    }
    CodeIsometry::new(v, code.physical_dims())
}
