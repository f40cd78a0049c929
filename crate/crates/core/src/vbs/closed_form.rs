//! Closed-form expectation values of the VBS code, evaluated directly from
//! the structure constants and χ.

use crate::linalg::{identity, real, CMatrix, C64, ZERO};
use crate::su_algebra::SuBasis;

fn chi_of(d: usize) -> f64 {
    -1.0 / (d * d - 1) as f64
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// ⟨ψ_α| t^a at bond n |ψ_β⟩ = χⁿ t^a_{αβ}.
pub fn detection(basis: &SuBasis, alpha: usize, beta: usize, a: usize, n: usize) -> C64 {
    basis.generator(a)[(alpha, beta)] * chi_of(basis.dim()).powi(n as i32)
}

/// Bond insertions t^a at m and t^b at n > m:
/// χ^{n−m} δ_ab δ_αβ/(2d) + χⁿ h_bac t^c_{αβ}/2.
pub fn correlation(basis: &SuBasis, alpha: usize, beta: usize, a: usize, b: usize, m: usize, n: usize) -> C64 {
    let d = basis.dim();
    let chi = chi_of(d);
    let mut value = real(chi.powi((n - m) as i32) * delta(a, b) * delta(alpha, beta) / (2 * d) as f64);
    let mut sum = ZERO;
    for c in 0..basis.len() {
        sum += basis.h(b, a, c) * basis.generator(c)[(alpha, beta)];
    }
    value += sum * (chi.powi(n as i32) / 2.0);
    value
}

/// ⟨T_n^a⟩ = d²χ^{n−1}/(d²−1) t^a_{αβ}.
pub fn site_single(basis: &SuBasis, alpha: usize, beta: usize, a: usize, n: usize) -> C64 {
    let d2 = (basis.dim() * basis.dim()) as f64;
    basis.generator(a)[(alpha, beta)] * (d2 * chi_of(basis.dim()).powi(n as i32 - 1) / (d2 - 1.0))
}

/// ⟨T_n^a t_{N+1}^b⟩ = −dχ^{N−n}/(2(d²−1)) δ_αβ δ_ab.
pub fn site_edge(basis: &SuBasis, alpha: usize, beta: usize, a: usize, b: usize, n: usize, big_n: usize) -> C64 {
    let d = basis.dim() as f64;
    real(-d * chi_of(basis.dim()).powi((big_n - n) as i32) / (2.0 * (d * d - 1.0)) * delta(alpha, beta) * delta(a, b))
}

/// ⟨T_m^a T_n^b⟩ = −d³χ^{n−m−1}/(2(d²−1)²) δ_αβ δ_ab for m < n.
pub fn site_pair(basis: &SuBasis, alpha: usize, beta: usize, a: usize, b: usize, m: usize, n: usize) -> C64 {
    let d = basis.dim() as f64;
    let q = d * d - 1.0;
    real(-d.powi(3) * chi_of(basis.dim()).powi((n - m - 1) as i32) / (2.0 * q * q) * delta(alpha, beta) * delta(a, b))
}

/// Eⁿ(|α⟩⟨α|) = 1/d + 2χⁿ Σ_a t^a t^a_{αα}.
pub fn edge_state(basis: &SuBasis, alpha: usize, n: usize) -> CMatrix {
    let d = basis.dim();
    let scale = 2.0 * chi_of(d).powi(n as i32);
    let mut out = identity(d) * real(1.0 / d as f64);
    for t in basis.generators() {
        out += t * (t[(alpha, alpha)] * scale);
    }
    out
}
