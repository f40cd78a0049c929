//! Canonical recovery built from the diagonalized error matrix, and the
//! composed logical channel V†RNV.
//!
//! The recovery operators are the polar-normalized versions of P F_k†/√d_k:
//! with Y = [F_1V/√d_1, …, F_rV/√d_r] and G = Y†Y, block k of G^{-1/2}Y†
//! followed by V. For an exact code G = 1 and this is P F_k†/√d_k itself.
//! Outside range(Y) the channel re-prepares the maximally mixed code state,
//! which makes the map trace preserving for every code.

use crate::error::{QxError, Result};
use crate::linalg::{eigh, identity, real, CMatrix};
use crate::quantum_ops::{choi_matrix, entanglement_fidelity, replace_channel_kraus, trace_distance, KrausChannel};

use super::code::CodeIsometry;
use super::kl::{encoded_errors, ErrorGram, KlDecomposition};
use super::physical_op::PhysicalOp;

/// Largest physical dimension for which dense d_Q×d_Q recovery operators are built.
pub const DENSE_RECOVERY_CAP: usize = 1024;

const KRAUS_DROP: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct RecoveryChannel {
    v: CMatrix,
    y: CMatrix,
    g_inv_sqrt: CMatrix,
    g_pinv: CMatrix,
    retained: usize,
}

impl RecoveryChannel {
    pub fn from_encoded(code: &CodeIsometry, encoded: &[CMatrix], dec: &KlDecomposition) -> Result<Self> {
        let d_l = code.d_l();
        let r = dec.retained;
        if r == 0 {
            return Err(QxError::DegenerateNoise);
        }
        let mut y = CMatrix::zeros(code.d_q(), r * d_l);
        for k in 0..r {
            let mut block = CMatrix::zeros(code.d_q(), d_l);
            for (j, ev) in encoded.iter().enumerate() {
                let u = dec.rotation[(k, j)];
                if u.norm() > 0.0 {
                    block += ev * u;
                }
            }
            block /= real(dec.eigenvalues[k].sqrt());
            y.columns_mut(k * d_l, d_l).copy_from(&block);
        }
        let (g_inv_sqrt, g_pinv) = inverse_roots(&(y.adjoint() * &y))?;
        Ok(Self { v: code.v().clone(), y, g_inv_sqrt, g_pinv, retained: r })
    }

    pub fn retained(&self) -> usize {
        self.retained
    }

    pub fn d_l(&self) -> usize {
        self.v.ncols()
    }

    /// The recovery as a dense channel on the physical space.
    pub fn kraus_dense(&self) -> Result<KrausChannel> {
        let d_q = self.v.nrows();
        if d_q > DENSE_RECOVERY_CAP {
            return Err(QxError::DenseCapExceeded { needed: d_q * d_q, cap: DENSE_RECOVERY_CAP * DENSE_RECOVERY_CAP });
        }
        let d_l = self.d_l();
        let left = &self.g_inv_sqrt * self.y.adjoint();
        let mut kraus: Vec<CMatrix> = (0..self.retained).map(|k| &self.v * left.rows(k * d_l, d_l)).collect();
        let complement = identity(d_q) - &self.y * &self.g_pinv * self.y.adjoint();
        let (values, vectors) = eigh(&complement);
        let scale = real(1.0 / (d_l as f64).sqrt());
        for (mu, &lambda) in values.iter().enumerate() {
            if lambda < 0.5 {
                continue;
            }
            let bra = vectors.column(mu).adjoint();
            for alpha in 0..d_l {
                kraus.push(self.v.column(alpha) * &bra * scale);
            }
        }
        KrausChannel::with_dims(d_q, d_q, kraus)
    }

    /// Logical Kraus operators of V†RNV given the encoded noise N_jV.
    pub fn logical_channel(&self, noise_encoded: &[CMatrix]) -> Result<KrausChannel> {
        let d_l = self.d_l();
        let mut kraus = Vec::new();
        let mut leftover = CMatrix::zeros(d_l, d_l);
        for nv in noise_encoded {
            if nv.shape() != self.v.shape() {
                return Err(QxError::DimensionMismatch(format!(
                    "encoded noise {:?} vs code {:?}",
                    nv.shape(),
                    self.v.shape()
                )));
            }
            let x = self.y.adjoint() * nv;
            let z = &self.g_inv_sqrt * &x;
            for k in 0..self.retained {
                let block = z.rows(k * d_l, d_l).into_owned();
                if block.norm() > KRAUS_DROP {
                    kraus.push(block);
                }
            }
            leftover += nv.adjoint() * nv - x.adjoint() * &self.g_pinv * &x;
        }
        kraus.extend(replace_channel_kraus(&crate::linalg::hermitian_part(&leftover)));
        KrausChannel::with_dims(d_l, d_l, kraus)
    }
}

/// G^{-1/2} and G^+ on the support of G (relative cutoff as for a).
fn inverse_roots(g: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let (values, vectors) = eigh(g);
    let max = values.last().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return Err(QxError::DegenerateNoise);
    }
    let cut = super::kl::EIGEN_CUTOFF * max;
    let spectral = |f: &dyn Fn(f64) -> f64| {
        let mut scaled = vectors.clone();
        for (k, &lambda) in values.iter().enumerate() {
            let w = if lambda > cut { f(lambda) } else { 0.0 };
            let mut col = scaled.column_mut(k);
            col *= real(w);
        }
        scaled * vectors.adjoint()
    };
    Ok((spectral(&|x| 1.0 / x.sqrt()), spectral(&|x| 1.0 / x)))
}

/// V†RNV with the errors themselves as the noise, computed from the Gram
/// blocks alone. Agrees with [`RecoveryChannel::logical_channel`].
pub fn logical_channel_from_gram(gram: &ErrorGram, dec: &KlDecomposition) -> Result<KrausChannel> {
    let (n, d_l, r) = (gram.n, gram.d_l, dec.retained);
    if r == 0 {
        return Err(QxError::DegenerateNoise);
    }
    // X_j = Y†E_jV, block k = Σ_i conj(u_ki) M_ij / √d_k.
    let xs: Vec<CMatrix> = (0..n)
        .map(|j| {
            let mut x = CMatrix::zeros(r * d_l, d_l);
            for k in 0..r {
                let mut block = CMatrix::zeros(d_l, d_l);
                for i in 0..n {
                    let u = dec.rotation[(k, i)].conj();
                    if u.norm() > 0.0 {
                        block += gram.block(i, j) * u;
                    }
                }
                x.rows_mut(k * d_l, d_l).copy_from(&(block / real(dec.eigenvalues[k].sqrt())));
            }
            x
        })
        .collect();
    // G = Y†Y, block (k, l) = Σ_j X_j-style contraction with u_lj.
    let mut g = CMatrix::zeros(r * d_l, r * d_l);
    for l in 0..r {
        let mut col = CMatrix::zeros(r * d_l, d_l);
        for (j, x) in xs.iter().enumerate() {
            let u = dec.rotation[(l, j)];
            if u.norm() > 0.0 {
                col += x * u;
            }
        }
        g.columns_mut(l * d_l, d_l).copy_from(&(col / real(dec.eigenvalues[l].sqrt())));
    }
    let (g_inv_sqrt, g_pinv) = inverse_roots(&crate::linalg::hermitian_part(&g))?;
    let mut kraus = Vec::new();
    let mut leftover = CMatrix::zeros(d_l, d_l);
    for (j, x) in xs.iter().enumerate() {
        let z = &g_inv_sqrt * x;
        for k in 0..r {
            let block = z.rows(k * d_l, d_l).into_owned();
            if block.norm() > KRAUS_DROP {
                kraus.push(block);
            }
        }
        leftover += gram.block(j, j) - x.adjoint() * &g_pinv * x;
    }
    kraus.extend(replace_channel_kraus(&crate::linalg::hermitian_part(&leftover)));
    KrausChannel::with_dims(d_l, d_l, kraus)
}

/// Q = V†RNV for noise given as physical operators.
pub fn recovered_logical_channel(
    code: &CodeIsometry,
    noise: &[PhysicalOp],
    recovery: &RecoveryChannel,
) -> Result<KrausChannel> {
    if code.v().shape() != recovery.v.shape() {
        return Err(QxError::DimensionMismatch("recovery built for a different code".into()));
    }
    recovery.logical_channel(&encoded_errors(code, noise)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecoveryError {
    pub d_t_exact: f64,
    pub diamond_bracket: (f64, f64),
    pub fidelity: f64,
    pub bures_distance: f64,
}

/// Choi trace distance to the identity, the diamond-norm bracket it implies,
/// and the entanglement fidelity.
pub fn recovery_error(q: &KrausChannel) -> Result<RecoveryError> {
    let choi = choi_matrix(q)?;
    let d_t = trace_distance(choi.matrix(), &choi.reference())?;
    let (fidelity, bures_distance) = entanglement_fidelity(q)?;
    let d_l = q.in_dim() as f64;
    Ok(RecoveryError { d_t_exact: d_t, diamond_bracket: (2.0 * d_t, 2.0 * d_l * d_t), fidelity, bures_distance })
}
