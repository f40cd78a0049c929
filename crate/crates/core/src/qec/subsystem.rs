//! Subsystem codes C = T ⊗ J: gauge-aware KL checks and gate factorization.

use crate::error::{QxError, Result};
use crate::linalg::{identity, op_norm, polar_unitary, real, CMatrix, CVector};
use crate::quantum_ops::{partial_trace, DenseOperator};

use super::checks::logical_operator_check;
use super::code::CodeIsometry;
use super::kl::{encoded_errors, ErrorGram};
use super::physical_op::PhysicalOp;

/// Splits the logical space of a code as T ⊗ J; logical column t·d_J + j
/// holds |t⟩_T ⊗ |j⟩_J.
#[derive(Clone, Debug)]
pub struct SubsystemSplit {
    code: CodeIsometry,
    d_t: usize,
    d_j: usize,
}

impl SubsystemSplit {
    pub fn new(code: CodeIsometry, d_t: usize) -> Result<Self> {
        if d_t == 0 || !code.d_l().is_multiple_of(d_t) {
            return Err(QxError::InvalidDimension(format!("d_T = {d_t} does not divide d_L = {}", code.d_l())));
        }
        let d_j = code.d_l() / d_t;
        Ok(Self { code, d_t, d_j })
    }

    pub fn code(&self) -> &CodeIsometry {
        &self.code
    }

    pub fn d_t(&self) -> usize {
        self.d_t
    }

    pub fn d_j(&self) -> usize {
        self.d_j
    }

    /// P = VV†.
    pub fn projector(&self) -> CMatrix {
        self.code.projector()
    }

    /// V(1_T ⊗ |g⟩): the code obtained by fixing the gauge to `g`.
    pub fn gauge_fixed(&self, gauge: &CVector) -> Result<CMatrix> {
        if gauge.len() != self.d_j {
            return Err(QxError::DimensionMismatch(format!(
                "gauge state of length {} for d_J = {}",
                gauge.len(),
                self.d_j
            )));
        }
        let mut g = gauge.clone();
        let norm = g.norm();
        if norm == 0.0 {
            return Err(QxError::InvalidParameter("zero gauge state".into()));
        }
        g /= real(norm);
        let embed = identity(self.d_t).kronecker(&CMatrix::from_column_slice(self.d_j, 1, g.as_slice()));
        Ok(self.code.v() * embed)
    }

    /// P_T for a fixed gauge state.
    pub fn logical_projector(&self, gauge: &CVector) -> Result<CMatrix> {
        let w = self.gauge_fixed(gauge)?;
        Ok(&w * w.adjoint())
    }

    /// Partial trace over T of a d_L×d_L operator.
    fn trace_t(&self, m: &CMatrix) -> Result<CMatrix> {
        let op = DenseOperator::with_dims(m.clone(), vec![self.d_t, self.d_j])?;
        Ok(partial_trace(&op, &[1])?.into_matrix())
    }

    fn trace_j(&self, m: &CMatrix) -> Result<CMatrix> {
        let op = DenseOperator::with_dims(m.clone(), vec![self.d_t, self.d_j])?;
        Ok(partial_trace(&op, &[0])?.into_matrix())
    }
}

#[derive(Clone, Debug)]
pub struct SubsystemKl {
    /// J_ij = tr_T(V†E_i†E_jV)/d_T, row-major over (i, j).
    pub j: Vec<CMatrix>,
    /// max_ij ‖V†E_i†E_jV − 1_T ⊗ J_ij‖.
    pub residual: f64,
    /// max over errors and gauge-state pairs of the non-scalar part of
    /// W_g†E_i†E_jW_h on T.
    pub gauge_residual: f64,
}

pub fn subsystem_kl_check(
    split: &SubsystemSplit,
    errors: &[PhysicalOp],
    gauge_states: &[CVector],
) -> Result<SubsystemKl> {
    let encoded = encoded_errors(split.code(), errors)?;
    let gram = ErrorGram::from_encoded(&encoded)?;
    let n = errors.len();
    let mut j_blocks = Vec::with_capacity(n * n);
    let mut residual: f64 = 0.0;
    for i in 0..n {
        for k in 0..n {
            let m = gram.block(i, k);
            let jb = split.trace_t(m)? / real(split.d_t as f64);
            residual = residual.max(op_norm(&(m - identity(split.d_t).kronecker(&jb))));
            j_blocks.push(jb);
        }
    }

    let fixed = gauge_states.iter().map(|g| split.gauge_fixed(g)).collect::<Result<Vec<_>>>()?;
    let mut gauge_residual: f64 = 0.0;
    let applied: Vec<Vec<CMatrix>> =
        fixed.iter().map(|w| errors.iter().map(|e| e.apply(w)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    for gi in 0..fixed.len() {
        for hi in 0..fixed.len() {
            for i in 0..n {
                for k in 0..n {
                    let m = applied[gi][i].adjoint() * &applied[hi][k];
                    let scalar = m.trace() / real(split.d_t as f64);
                    gauge_residual = gauge_residual.max(op_norm(&(m - identity(split.d_t) * scalar)));
                }
            }
        }
    }
    Ok(SubsystemKl { j: j_blocks, residual, gauge_residual })
}

/// Extracts U_T from a logical gate as the polar factor of tr_J(V†UV)/d_J and
/// reports ‖V†UV − U_T ⊗ 1_J‖.
pub fn subsystem_gate_factorization(u: &PhysicalOp, split: &SubsystemSplit) -> Result<(CMatrix, f64)> {
    let check = logical_operator_check(u, split.code())?;
    let compressed = check.logical.ok_or(QxError::NotLogical(check.deviation))?;
    let reduced = split.trace_j(&compressed)? / real(split.d_j as f64);
    let u_t = polar_unitary(&reduced);
    let deviation = op_norm(&(compressed - u_t.kronecker(&identity(split.d_j))));
    Ok((u_t, deviation))
}
