//! Small dense complex linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Matrix unit |row⟩⟨col| of size n×n.
pub fn unit(n: usize, row: usize, col: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(row, col)] = ONE;
    m
}

pub fn basis_vector(n: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[k] = ONE;
    v
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// tr(A B) without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * real(0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    eigh(m).0
}

/// Applies a real function to the spectrum of the Hermitian part of `m`.
pub fn hermitian_fn(m: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let (values, vectors) = eigh(m);
    let mut scaled = vectors.clone();
    for (k, &lambda) in values.iter().enumerate() {
        let factor = f(lambda);
        let mut col = scaled.column_mut(k);
        col *= factor;
    }
    scaled * vectors.adjoint()
}

/// exp(i t H) for Hermitian H.
pub fn expm_i_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    hermitian_fn(h, |lambda| C64::from_polar(1.0, t * lambda))
}

/// Square root of a positive semidefinite matrix; negative eigenvalues are clipped.
pub fn sqrt_psd(m: &CMatrix) -> CMatrix {
    hermitian_fn(m, |lambda| real(lambda.max(0.0).sqrt()))
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().singular_values().iter().copied().collect()
}

/// Operator (spectral) norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    // Tall or wide matrices go through the smaller Gram matrix.
    if m.nrows() > 2 * m.ncols() {
        let gram = m.adjoint() * m;
        return eigvalsh(&gram).last().copied().unwrap_or(0.0).max(0.0).sqrt();
    }
    if m.ncols() > 2 * m.nrows() {
        let gram = m * m.adjoint();
        return eigvalsh(&gram).last().copied().unwrap_or(0.0).max(0.0).sqrt();
    }
    singular_values(m).into_iter().fold(0.0, f64::max)
}

pub fn trace_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}

/// Frobenius inner product tr(A† B).
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// ‖U†U − 1‖ in operator norm; infinite for non-square input.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    op_norm(&(u.adjoint() * u - identity(u.ncols())))
}

/// ‖V†V − 1‖ in operator norm.
pub fn isometry_residual(v: &CMatrix) -> f64 {
    op_norm(&(v.adjoint() * v - identity(v.ncols())))
}

/// Nearest unitary in any unitarily invariant norm (the polar factor).
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    u * v_t
}

/// Eigenvalues of a normal matrix.
///
/// The Hermitian and anti-Hermitian parts commute, so the eigenvectors of a
/// generic real mix H + cK diagonalize `m`. A few mixing ratios are tried to
/// dodge accidental degeneracies; the most diagonal result is kept. Complex
/// Schur iteration can stall on near-scalar input, which this avoids.
pub fn normal_eigenvalues(m: &CMatrix) -> Vec<C64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let h = (m + m.adjoint()) * real(0.5);
    let k = (m - m.adjoint()) * C64::new(0.0, -0.5);
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let mut best: Option<(f64, Vec<C64>)> = None;
    for c in [0.618_033_988_749_895, -1.324_717_957_244_746, 2.236_067_977_499_79] {
        let (_, vectors) = eigh(&(&h + &k * real(c)));
        let diag = vectors.adjoint() * m * &vectors;
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| diag[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        let values: Vec<C64> = diag.diagonal().iter().copied().collect();
        if off <= 1e-12 * scale {
            return values;
        }
        if best.as_ref().is_none_or(|(b, _)| off < *b) {
            best = Some((off, values));
        }
    }
    best.map(|(_, v)| v).unwrap_or_default()
}

pub fn determinant(m: &CMatrix) -> C64 {
    m.clone().determinant()
}

/// Row-major flattening of a square matrix.
pub fn vec_row_major(m: &CMatrix) -> CVector {
    let cols = m.ncols();
    CVector::from_fn(m.nrows() * cols, |k, _| m[(k / cols, k % cols)])
}

pub fn unvec_row_major(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| v[i * cols + j])
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}
