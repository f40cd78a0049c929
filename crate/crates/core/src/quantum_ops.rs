//! Dense states, Kraus channels, Choi matrices and distance measures.
//!
//! Channels are stored as Kraus lists. Superoperator matrices are built on
//! demand. Choi matrices are ordered (output ⊗ reference).

use crate::error::{QxError, Result};
use crate::linalg::{eigvalsh, identity, op_norm, real, trace, CMatrix, C64, ZERO};

/// A dense operator with an optional tensor-factor layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    matrix: CMatrix,
    dims: Option<Vec<usize>>,
}

impl DenseOperator {
    pub fn new(matrix: CMatrix) -> Self {
        Self { matrix, dims: None }
    }

    /// Attaches subsystem dimensions; their product must equal both sides.
    pub fn with_dims(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != matrix.nrows() || total != matrix.ncols() {
            return Err(QxError::DimensionMismatch(format!(
                "subsystem dims {dims:?} multiply to {total}, matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix, dims: Some(dims) })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> Option<&[usize]> {
        self.dims.as_deref()
    }
}

/// A completely positive map given by Kraus operators of shape out_dim × in_dim.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| QxError::InvalidParameter("empty Kraus list needs explicit dimensions".into()))?;
        let (out_dim, in_dim) = first.shape();
        Self::with_dims(in_dim, out_dim, kraus)
    }

    pub fn with_dims(in_dim: usize, out_dim: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        if let Some(k) = kraus.iter().find(|k| k.shape() != (out_dim, in_dim)) {
            return Err(QxError::DimensionMismatch(format!(
                "Kraus operator {}x{} in a {out_dim}x{in_dim} channel",
                k.nrows(),
                k.ncols()
            )));
        }
        Ok(Self { in_dim, out_dim, kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self { in_dim: d, out_dim: d, kraus: vec![identity(d)] }
    }

    pub fn unitary(u: CMatrix) -> Self {
        let d = u.nrows();
        Self { in_dim: u.ncols(), out_dim: d, kraus: vec![u] }
    }

    /// ρ ↦ tr(ρ)·1/d with Kraus set {|i⟩⟨j|/√d}.
    pub fn completely_depolarizing(d: usize) -> Self {
        let s = 1.0 / (d as f64).sqrt();
        let kraus = (0..d * d)
            .map(|k| {
                let mut m = CMatrix::zeros(d, d);
                m[(k / d, k % d)] = real(s);
                m
            })
            .collect();
        Self { in_dim: d, out_dim: d, kraus }
    }

    pub fn amplitude_damping(gamma: f64) -> Self {
        let k0 = CMatrix::from_row_slice(2, 2, &[real(1.0), ZERO, ZERO, real((1.0 - gamma).sqrt())]);
        let k1 = CMatrix::from_row_slice(2, 2, &[ZERO, real(gamma.sqrt()), ZERO, ZERO]);
        Self { in_dim: 2, out_dim: 2, kraus: vec![k0, k1] }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        apply_channel(self, rho)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &KrausChannel) -> Result<KrausChannel> {
        if after.in_dim != self.out_dim {
            return Err(QxError::DimensionMismatch(format!("compose {} -> {}", self.out_dim, after.in_dim)));
        }
        let kraus = after.kraus.iter().flat_map(|a| self.kraus.iter().map(move |k| a * k)).collect();
        KrausChannel::with_dims(self.in_dim, after.out_dim, kraus)
    }

    /// Superoperator S with vec(E(ρ)) = S vec(ρ), row-major vectorization.
    pub fn superoperator(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.out_dim * self.out_dim, self.in_dim * self.in_dim);
        for k in &self.kraus {
            s += k.kronecker(&k.map(|z| z.conj()));
        }
        s
    }
}

pub fn apply_channel(ch: &KrausChannel, rho: &CMatrix) -> Result<CMatrix> {
    if rho.nrows() != ch.in_dim || rho.ncols() != ch.in_dim {
        return Err(QxError::DimensionMismatch(format!(
            "state {}x{} into channel with input dim {}",
            rho.nrows(),
            rho.ncols(),
            ch.in_dim
        )));
    }
    let mut out = CMatrix::zeros(ch.out_dim, ch.out_dim);
    for k in &ch.kraus {
        out += k * rho * k.adjoint();
    }
    Ok(out)
}

/// Operator norms of Σ K†K − 1 and Σ K K† − 1.
pub fn cptp_residuals(ch: &KrausChannel) -> (f64, f64) {
    let mut tp = -identity(ch.in_dim);
    for k in &ch.kraus {
        tp += k.adjoint() * k;
    }
    let unital = if ch.in_dim == ch.out_dim {
        let mut u = -identity(ch.out_dim);
        for k in &ch.kraus {
            u += k * k.adjoint();
        }
        op_norm(&u)
    } else {
        f64::INFINITY
    };
    (op_norm(&tp), unital)
}

/// Stinespring isometry W = Σ_i |i⟩_env ⊗ K_i, laid out environment-major:
/// rows `i·out_dim .. (i+1)·out_dim` hold K_i.
pub fn dilation_isometry(ch: &KrausChannel) -> Result<CMatrix> {
    let (tp, _) = cptp_residuals(ch);
    if tp > 1e-10 {
        return Err(QxError::NotTracePreserving(tp));
    }
    let mut w = CMatrix::zeros(ch.out_dim * ch.kraus.len(), ch.in_dim);
    for (i, k) in ch.kraus.iter().enumerate() {
        w.view_mut((i * ch.out_dim, 0), (ch.out_dim, ch.in_dim)).copy_from(k);
    }
    Ok(w)
}

/// Choi state (Q ⊗ id)(ω) of a square channel together with its reference
/// maximally entangled state ω.
#[derive(Clone, Debug)]
pub struct ChoiState {
    d_l: usize,
    matrix: CMatrix,
}

impl ChoiState {
    pub fn dim(&self) -> usize {
        self.d_l
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// ω = |ω⟩⟨ω|, |ω⟩ = Σ_i |ii⟩/√d.
    pub fn reference(&self) -> CMatrix {
        maximally_entangled(self.d_l)
    }

    /// Recovers ch(ρ) = d · tr_ref[(1 ⊗ ρᵀ) C].
    pub fn act(&self, rho: &CMatrix) -> CMatrix {
        let d = self.d_l;
        CMatrix::from_fn(d, d, |o, p| {
            let mut acc = ZERO;
            for r in 0..d {
                for s in 0..d {
                    acc += self.matrix[(o * d + r, p * d + s)] * rho[(s, r)];
                }
            }
            acc * d as f64
        })
    }
}

pub fn maximally_entangled(d: usize) -> CMatrix {
    let mut w = CMatrix::zeros(d * d, d * d);
    let v = 1.0 / d as f64;
    for i in 0..d {
        for j in 0..d {
            w[(i * d + i, j * d + j)] = real(v);
        }
    }
    w
}

/// Choi matrix from bare Kraus operators (all d×d).
pub fn choi_from_kraus(d: usize, kraus: &[CMatrix]) -> CMatrix {
    let mut c = CMatrix::zeros(d * d, d * d);
    let scale = 1.0 / d as f64;
    for k in kraus {
        // Column vector Σ_r K|r⟩ ⊗ |r⟩.
        let v = nalgebra::DVector::from_fn(d * d, |idx, _| k[(idx / d, idx % d)]);
        c += (&v * v.adjoint()) * real(scale);
    }
    c
}

pub fn choi_matrix(ch: &KrausChannel) -> Result<ChoiState> {
    if ch.in_dim != ch.out_dim {
        return Err(QxError::DimensionMismatch(format!("Choi matrix of a {}->{} channel", ch.in_dim, ch.out_dim)));
    }
    Ok(ChoiState { d_l: ch.in_dim, matrix: choi_from_kraus(ch.in_dim, &ch.kraus) })
}

/// (1/2)‖ρ − σ‖₁ from the spectrum of the Hermitian difference.
pub fn trace_distance(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    if rho.shape() != sigma.shape() || !rho.is_square() {
        return Err(QxError::DimensionMismatch(format!("{:?} vs {:?}", rho.shape(), sigma.shape())));
    }
    Ok(0.5 * eigvalsh(&(rho - sigma)).iter().map(|x| x.abs()).sum::<f64>())
}

/// Entanglement fidelity F = ⟨ω|C|ω⟩ and Bures distance √(1 − F).
pub fn entanglement_fidelity(ch: &KrausChannel) -> Result<(f64, f64)> {
    if ch.in_dim != ch.out_dim {
        return Err(QxError::DimensionMismatch(format!("fidelity of a {}->{} channel", ch.in_dim, ch.out_dim)));
    }
    let d = ch.in_dim as f64;
    let f: f64 = ch.kraus.iter().map(|k| trace(k).norm_sqr()).sum::<f64>() / (d * d);
    Ok((f, (1.0 - f).max(0.0).sqrt()))
}

/// Partial trace keeping the listed subsystems (in their original order).
pub fn partial_trace(op: &DenseOperator, keep: &[usize]) -> Result<DenseOperator> {
    let dims =
        op.dims().ok_or_else(|| QxError::InvalidParameter("partial trace needs subsystem dimensions".into()))?.to_vec();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&k| k >= dims.len()) {
        return Err(QxError::IndexOutOfRange(format!("keep set {keep:?} for {} subsystems", dims.len())));
    }
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let total: usize = dims.iter().product();
    let m = op.matrix();

    let split = |mut idx: usize| -> Vec<usize> {
        let mut digits = vec![0; dims.len()];
        for s in (0..dims.len()).rev() {
            digits[s] = idx % dims[s];
            idx /= dims[s];
        }
        digits
    };
    let kept_index = |digits: &[usize]| keep_sorted.iter().fold(0, |acc, &s| acc * dims[s] + digits[s]);

    let digits: Vec<Vec<usize>> = (0..total).map(split).collect();
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep_sorted.contains(s)).collect();
    let traced_index: Vec<usize> =
        digits.iter().map(|dg| traced.iter().fold(0, |acc, &s| acc * dims[s] + dg[s])).collect();
    let kept: Vec<usize> = digits.iter().map(|dg| kept_index(dg)).collect();

    let mut out = CMatrix::zeros(kept_total, kept_total);
    for i in 0..total {
        for j in 0..total {
            if traced_index[i] == traced_index[j] {
                out[(kept[i], kept[j])] += m[(i, j)];
            }
        }
    }
    DenseOperator::with_dims(out, kept_dims)
}

/// Channel that maps every input to tr(M ρ)·1/d, written with d·rank(M) Kraus
/// operators √(m_μ/d)|α⟩⟨μ|. Used to close recovery maps onto the code.
pub fn replace_channel_kraus(m: &CMatrix) -> Vec<CMatrix> {
    let d = m.nrows();
    let (values, vectors) = crate::linalg::eigh(m);
    let mut out = Vec::new();
    for (mu, &lambda) in values.iter().enumerate() {
        if lambda <= 1e-15 {
            continue;
        }
        let w = (lambda / d as f64).sqrt();
        let bra = vectors.column(mu).adjoint();
        for alpha in 0..d {
            let mut k = CMatrix::zeros(d, d);
            k.row_mut(alpha).copy_from(&(bra.clone() * C64::new(w, 0.0)));
            out.push(k);
        }
    }
    out
}
