//! Effective logical noise of bond errors and the per-gate error scale η.

use crate::error::{QxError, Result};
use crate::linalg::{expm_i_hermitian, real, CMatrix};
use crate::quantum_ops::{choi_matrix, trace_distance, KrausChannel};

use super::VbsCode;

/// η = (χ/N)(1 − χ^N)/(1 − χ), the mean of χⁿ over bonds n = 1..N.
pub fn eta(d: usize, n: usize) -> Result<f64> {
    if d < 2 {
        return Err(QxError::InvalidDimension(format!("d = {d} must be at least 2")));
    }
    if n < 1 {
        return Err(QxError::InvalidParameter("N must be at least 1".into()));
    }
    let chi = -1.0 / (d * d - 1) as f64;
    Ok(chi / n as f64 * (1.0 - chi.powi(n as i32)) / (1.0 - chi))
}

#[derive(Clone, Debug)]
pub struct EffectiveNoise {
    /// (1/|B|) Σ_{n∈B} E_n σ E_n† with E_n = exp(iχⁿ Σ_k ε_k t^k).
    pub mixture: KrausChannel,
    /// exp(iη̄ Σ_k ε_k t^k) with η̄ the mean of χⁿ over the bonds; η̄ = η for
    /// the default bonds 1..N.
    pub unitary_approx: CMatrix,
    /// Choi trace distance between the mixture and the unitary channel.
    pub discrepancy: f64,
}

/// `bonds` empty means the default 1..=N.
pub fn effective_noise_channel(code: &VbsCode, eps: &[f64], bonds: &[usize]) -> Result<EffectiveNoise> {
    if eps.len() != code.site_dim() {
        return Err(QxError::DimensionMismatch(format!("{} exponents for {} generators", eps.len(), code.site_dim())));
    }
    let bonds: Vec<usize> = if bonds.is_empty() { (1..=code.n()).collect() } else { bonds.to_vec() };
    if let Some(&b) = bonds.iter().find(|&&b| b > code.n()) {
        return Err(QxError::IndexOutOfRange(format!("bond {b} beyond N = {}", code.n())));
    }
    let generator = code.basis().combine(eps);
    let weight = real(1.0 / (bonds.len() as f64).sqrt());
    let kraus = bonds.iter().map(|&n| expm_i_hermitian(&generator, code.chi().powi(n as i32)) * weight).collect();
    let mixture = KrausChannel::new(kraus)?;
    let mean = bonds.iter().map(|&n| code.chi().powi(n as i32)).sum::<f64>() / bonds.len() as f64;
    let unitary_approx = expm_i_hermitian(&generator, mean);
    let a = choi_matrix(&mixture)?;
    let b = choi_matrix(&KrausChannel::unitary(unitary_approx.clone()))?;
    let discrepancy = trace_distance(a.matrix(), b.matrix())?;
    Ok(EffectiveNoise { mixture, unitary_approx, discrepancy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs};

    #[test]
    fn eta_examples() {
        assert_eq!(eta(2, 1).unwrap(), -1.0 / 3.0);
        assert!((eta(2, 4).unwrap() + 5.0 / 81.0).abs() < 1e-17);
        assert_eq!(eta(3, 1).unwrap(), -1.0 / 8.0);
        assert!(eta(1, 4).is_err() && eta(2, 0).is_err());
    }

    #[test]
    fn zero_exponents_give_identity() {
        let code = VbsCode::new(2, 4).unwrap();
        let out = effective_noise_channel(&code, &[0.0; 3], &[]).unwrap();
        assert!(out.discrepancy < 1e-15);
        assert!(max_abs(&(out.unitary_approx - identity(2))) < 1e-15);
    }

    #[test]
    fn discrepancy_shrinks_with_n_and_d() {
        let eps = [0.0, 0.0, 1.0];
        let d6 = effective_noise_channel(&VbsCode::new(2, 6).unwrap(), &eps, &[]).unwrap().discrepancy;
        let d3 = effective_noise_channel(&VbsCode::new(2, 3).unwrap(), &eps, &[]).unwrap().discrepancy;
        assert!(d6 < d3);
        let mut eps8 = [0.0; 8];
        eps8[2] = 1.0;
        let su3 = effective_noise_channel(&VbsCode::new(3, 4).unwrap(), &eps8, &[]).unwrap().discrepancy;
        let su2 = effective_noise_channel(&VbsCode::new(2, 4).unwrap(), &eps, &[]).unwrap().discrepancy;
        assert!(su3 < su2);
    }
}
