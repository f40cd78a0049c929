//! Logical-operator and transversal-collapse checks.

use crate::error::{QxError, Result};
use crate::linalg::{expm_i_hermitian, identity, isometry_residual, op_norm, real, trace, CMatrix, C64};

use super::code::CodeIsometry;
use super::physical_op::PhysicalOp;

/// Unitarity tolerance for gates handed to the checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// Deviation below which a gate counts as logical.
pub const LOGICAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct LogicalCheck {
    /// ‖UP − PUP‖.
    pub deviation: f64,
    /// V†UV when the deviation is below [`LOGICAL_TOL`].
    pub logical: Option<CMatrix>,
}

/// Checks UP = PUP. Structured gates are checked for unitarity on the code
/// (UV must be an isometry); dense gates are checked in full.
pub fn logical_operator_check(u: &PhysicalOp, code: &CodeIsometry) -> Result<LogicalCheck> {
    if let PhysicalOp::Dense(m) = u {
        let res = crate::linalg::unitarity_residual(m);
        if res > UNITARY_TOL {
            return Err(QxError::NotUnitary(res));
        }
    }
    let uv = u.apply(code.v())?;
    let res = isometry_residual(&uv);
    if res > UNITARY_TOL {
        return Err(QxError::NotUnitary(res));
    }
    let compressed = code.v().adjoint() * &uv;
    // UP − PUP = (1 − P)UV V†, whose norm is that of (1 − P)UV.
    let deviation = op_norm(&(&uv - code.v() * &compressed));
    let logical = (deviation < LOGICAL_TOL).then_some(compressed);
    Ok(LogicalCheck { deviation, logical })
}

#[derive(Clone, Debug)]
pub struct CollapseCheck {
    /// h = tr(V†DV)/d_L.
    pub h: f64,
    /// B̂ = V†DV − h·1.
    pub pbp: CMatrix,
    pub collapse_deviation: f64,
    /// ‖V†e^{iξD}V − e^{iξh}e^{iξB̂}‖.
    pub factorization_deviation: f64,
}

/// Transversal generator D = Σ_j α_j H_j with every H_j a Hermitian operator
/// on its own subsystem.
pub fn transversal_collapse_check(
    code: &CodeIsometry,
    site_hamiltonians: &[PhysicalOp],
    alphas: &[f64],
    xi: f64,
) -> Result<CollapseCheck> {
    if site_hamiltonians.len() != alphas.len() {
        return Err(QxError::DimensionMismatch(format!(
            "{} Hamiltonians, {} coefficients",
            site_hamiltonians.len(),
            alphas.len()
        )));
    }
    let mut seen = vec![false; code.dims().len()];
    let mut terms = Vec::with_capacity(alphas.len());
    let mut exps = Vec::with_capacity(alphas.len());
    for (h, &alpha) in site_hamiltonians.iter().zip(alphas) {
        let PhysicalOp::Local { dims, site, matrix } = h else {
            return Err(QxError::InvalidParameter("transversal terms must act on a single subsystem".into()));
        };
        if dims.as_slice() != code.dims() {
            return Err(QxError::DimensionMismatch(format!("term factors {dims:?} vs code {:?}", code.dims())));
        }
        let herm = crate::linalg::hermiticity_residual(matrix);
        if herm > UNITARY_TOL {
            return Err(QxError::NotHermitian(herm));
        }
        if std::mem::replace(&mut seen[*site], true) {
            return Err(QxError::OverlappingSupport(*site));
        }
        terms.push(h.clone().scaled(real(alpha)));
        exps.push(PhysicalOp::local(dims, *site, expm_i_hermitian(matrix, xi * alpha))?);
    }
    let d_l = code.d_l();
    let compressed = code.compress(&PhysicalOp::Sum(terms))?;
    let h = trace(&compressed).re / d_l as f64;
    let pbp = compressed - identity(d_l) * real(h);
    let collapse_deviation = op_norm(&pbp);

    let gate = code.compress(&PhysicalOp::Product(exps))?;
    let predicted = expm_i_hermitian(&pbp, xi) * C64::from_polar(1.0, xi * h);
    let factorization_deviation = op_norm(&(gate - predicted));
    Ok(CollapseCheck { h, pbp, collapse_deviation, factorization_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs};
    use crate::qec::physical_op::{pauli, pauli_string};

    #[test]
    fn identity_is_logical() {
        let code = CodeIsometry::five_one_three();
        let out = logical_operator_check(&PhysicalOp::Identity(32), &code).unwrap();
        assert!(out.deviation < 1e-14);
        assert!(max_abs(&(out.logical.unwrap() - identity(2))) < 1e-14);
    }

    #[test]
    fn transversal_x_is_logical_and_single_qubit_rotation_is_not() {
        let code = CodeIsometry::five_one_three();
        let xl = logical_operator_check(&pauli_string("XXXXX").unwrap(), &code).unwrap();
        let m = xl.logical.unwrap();
        assert!(max_abs(&(m - pauli('X').unwrap())) < 1e-12);

        let h = CMatrix::from_row_slice(2, 2, &[real(0.3), c(0.4, -0.2), c(0.4, 0.2), real(-0.5)]);
        let u = PhysicalOp::local(&[2; 5], 2, expm_i_hermitian(&h, 2.0)).unwrap();
        let out = logical_operator_check(&u, &code).unwrap();
        assert!(out.deviation > 0.1 && out.logical.is_none());
    }

    #[test]
    fn non_unitary_gate_is_rejected() {
        let code = CodeIsometry::trivial(2);
        let gate = PhysicalOp::Dense(identity(2) * real(2.0));
        assert!(matches!(logical_operator_check(&gate, &code), Err(QxError::NotUnitary(_))));
    }

    #[test]
    fn five_qubit_transversal_generators_collapse() {
        let code = CodeIsometry::five_one_three();
        let dims = [2; 5];
        let hams: Vec<PhysicalOp> = (0..5)
            .map(|q| {
                let m = pauli('X').unwrap() * real(0.2 * q as f64) + pauli('Z').unwrap() * real(1.0 - 0.1 * q as f64);
                PhysicalOp::local(&dims, q, m).unwrap()
            })
            .collect();
        let out = transversal_collapse_check(&code, &hams, &[1.0, -0.5, 0.3, 2.0, 0.7], 0.4).unwrap();
        assert!(out.collapse_deviation < 1e-12);
        assert!(out.h.abs() < 1e-12);
        let zero = transversal_collapse_check(&code, &hams, &[1.0, -0.5, 0.3, 2.0, 0.7], 0.0).unwrap();
        assert!(zero.factorization_deviation < 1e-14);
    }

    #[test]
    fn overlapping_and_non_hermitian_terms_are_rejected() {
        let code = CodeIsometry::five_one_three();
        let dims = [2; 5];
        let z0 = PhysicalOp::local(&dims, 0, pauli('Z').unwrap()).unwrap();
        let x0 = PhysicalOp::local(&dims, 0, pauli('X').unwrap()).unwrap();
        assert!(matches!(
            transversal_collapse_check(&code, &[z0.clone(), x0], &[1.0, 1.0], 0.1),
            Err(QxError::OverlappingSupport(0))
        ));
        let bad = PhysicalOp::local(&dims, 1, pauli('X').unwrap() * c(0.0, 1.0)).unwrap();
        assert!(matches!(transversal_collapse_check(&code, &[bad], &[1.0], 0.1), Err(QxError::NotHermitian(_))));
        assert!(transversal_collapse_check(&code, &[z0], &[1.0, 2.0], 0.1).is_err());
    }
}
