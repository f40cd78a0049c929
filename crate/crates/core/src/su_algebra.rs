//! Generalized Gell-Mann basis of su(d), structure constants and adjoint
//! representations.
//!
//! Generator order (0-based index `a`):
//! 1. symmetric pairs `(E_jk + E_kj)/2` for `j < k`, lexicographic in `(j, k)`;
//! 2. antisymmetric pairs `(-i E_jk + i E_kj)/2`, same order;
//! 3. diagonal generators `diag(1, …, 1, -l, 0, …)/sqrt(2 l (l + 1))` for
//!    `l = 1, …, d-1`.
//!
//! Every generator satisfies `tr(t^a t^b) = δ_ab / 2`. For d = 2 the order
//! reproduces `σ_x/2, σ_y/2, σ_z/2`.

use nalgebra::DMatrix;

use crate::error::{QxError, Result};
use crate::linalg::{c, identity, max_abs, real, trace, trace_product, unitarity_residual, CMatrix, C64, I, ZERO};

/// Tolerance used when checking that structure constants come out real.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SuBasis {
    d: usize,
    generators: Vec<CMatrix>,
    f: Vec<f64>,
    d_sym: Vec<f64>,
}

impl SuBasis {
    /// Builds the basis and its structure constants.
    pub fn new(d: usize) -> Result<Self> {
        let generators = gell_mann_generators(d)?;
        let (f, d_sym) = structure_constants(&generators)?;
        Ok(Self { d, generators, f, d_sym })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of generators, d² − 1.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, a: usize) -> &CMatrix {
        &self.generators[a]
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.len();
        (a * n + b) * n + c
    }

    /// Antisymmetric structure constant f_abc.
    pub fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        self.f[self.idx(a, b, c)]
    }

    /// Symmetric structure constant d_abc.
    pub fn d_sym(&self, a: usize, b: usize, c: usize) -> f64 {
        self.d_sym[self.idx(a, b, c)]
    }

    /// h_abc = d_abc + i f_abc, so that t^a t^b = δ_ab/(2d) + h_abc t^c / 2.
    pub fn h(&self, a: usize, b: usize, c: usize) -> C64 {
        C64::new(self.d_sym(a, b, c), self.f(a, b, c))
    }

    /// Quadratic Casimir of the fundamental representation, (d² − 1)/(2d).
    pub fn casimir(&self) -> f64 {
        (self.d * self.d - 1) as f64 / (2 * self.d) as f64
    }

    /// Expands a Hermitian matrix in the basis: x_a = 2 tr(t^a m).
    pub fn coordinates(&self, m: &CMatrix) -> Vec<C64> {
        self.generators.iter().map(|t| trace_product(t, m) * 2.0).collect()
    }

    /// Σ_a x_a t^a.
    pub fn combine(&self, coefficients: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.d, self.d);
        for (t, &x) in self.generators.iter().zip(coefficients) {
            out += t * real(x);
        }
        out
    }
}

/// The generalized Gell-Mann basis with structure constants.
pub fn gell_mann_basis(d: usize) -> Result<SuBasis> {
    SuBasis::new(d)
}

fn gell_mann_generators(d: usize) -> Result<Vec<CMatrix>> {
    if d < 2 {
        return Err(QxError::InvalidDimension(format!("su(d) needs d >= 2, got {d}")));
    }
    let mut out = Vec::with_capacity(d * d - 1);
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = real(0.5);
        m[(k, j)] = real(0.5);
        out.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = c(0.0, -0.5);
        m[(k, j)] = c(0.0, 0.5);
        out.push(m);
    }
    for l in 1..d {
        let norm = 1.0 / ((2 * l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = real(norm);
        }
        m[(l, l)] = real(-(l as f64) * norm);
        out.push(m);
    }
    Ok(out)
}

/// f_abc = −2i tr([t^a, t^b] t^c) and d_abc = 2 tr({t^a, t^b} t^c), stored
/// densely with index `(a·n + b)·n + c`.
pub fn structure_constants(generators: &[CMatrix]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = generators.len();
    let products: Vec<CMatrix> = (0..n * n).map(|k| &generators[k / n] * &generators[k % n]).collect();
    let mut f = vec![0.0; n * n * n];
    let mut d_sym = vec![0.0; n * n * n];
    let mut worst_imag: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let comm = &products[a * n + b] - &products[b * n + a];
            let anti = &products[a * n + b] + &products[b * n + a];
            for (cc, t) in generators.iter().enumerate() {
                let fv = -I * 2.0 * trace_product(&comm, t);
                let dv = trace_product(&anti, t) * 2.0;
                worst_imag = worst_imag.max(fv.im.abs()).max(dv.im.abs());
                f[(a * n + b) * n + cc] = fv.re;
                d_sym[(a * n + b) * n + cc] = dv.re;
            }
        }
    }
    if worst_imag > STRUCTURE_TOL {
        return Err(QxError::InconsistentBasis(worst_imag));
    }
    Ok((f, d_sym))
}

/// Adjoint representative of generator `a`: (T^a)_bc = −i f_abc.
///
/// The matrix is purely imaginary and antisymmetric, hence Hermitian with a
/// real spectrum. Acting on a bulk site it reproduces the commutator rule
/// `T^a Σ_i A^i |i⟩ = Σ_i [A^i, t^a] |i⟩`.
pub fn adjoint_generator(basis: &SuBasis, a: usize) -> Result<CMatrix> {
    let n = basis.len();
    if a >= n {
        return Err(QxError::IndexOutOfRange(format!("generator {a} of {n}")));
    }
    Ok(CMatrix::from_fn(n, n, |b, cc| c(0.0, -basis.f(a, b, cc))))
}

/// Real orthogonal adjoint matrix R(u) with `u t^j u† = Σ_i R_ij t^i`.
///
/// R is a homomorphism, R(u₁u₂) = R(u₁)R(u₂), and is the matrix that acts on
/// a bulk site in the covariance relation of the VBS code. The symmetry
/// coefficients u_ij of `Σ_j u_ij t^j = u t^i u†` are the entries of its
/// transpose.
pub fn adjoint_group_element(basis: &SuBasis, u: &CMatrix) -> Result<DMatrix<f64>> {
    let d = basis.dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(QxError::DimensionMismatch(format!("expected {d}x{d} unitary, got {}x{}", u.nrows(), u.ncols())));
    }
    let residual = unitarity_residual(u);
    if residual > 1e-10 {
        return Err(QxError::NotUnitary(residual));
    }
    let n = basis.len();
    let rotated: Vec<CMatrix> = basis.generators().iter().map(|t| u * t * u.adjoint()).collect();
    Ok(DMatrix::from_fn(n, n, |i, j| 2.0 * trace_product(basis.generator(i), &rotated[j]).re))
}

/// Maximum residuals of every basis invariant.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InvariantResiduals {
    pub hermiticity: f64,
    pub tracelessness: f64,
    pub orthonormality: f64,
    pub commutator: f64,
    pub anticommutator: f64,
    pub casimir: f64,
    pub f_antisymmetry: f64,
    pub d_symmetry: f64,
    pub jacobi: f64,
    pub fierz: f64,
}

impl InvariantResiduals {
    pub fn named(&self) -> [(&'static str, f64); 10] {
        [
            ("hermiticity", self.hermiticity),
            ("tracelessness", self.tracelessness),
            ("orthonormality", self.orthonormality),
            ("commutator", self.commutator),
            ("anticommutator", self.anticommutator),
            ("casimir", self.casimir),
            ("f_antisymmetry", self.f_antisymmetry),
            ("d_symmetry", self.d_symmetry),
            ("jacobi", self.jacobi),
            ("fierz", self.fierz),
        ]
    }

    pub fn max(&self) -> f64 {
        self.named().iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }
}

pub fn check_invariants(basis: &SuBasis) -> InvariantResiduals {
    let d = basis.dim();
    let n = basis.len();
    let gens = basis.generators();
    let mut r = InvariantResiduals::default();

    for t in gens {
        r.hermiticity = r.hermiticity.max(max_abs(&(t - t.adjoint())));
        r.tracelessness = r.tracelessness.max(trace(t).norm());
    }

    let products: Vec<CMatrix> = (0..n * n).map(|k| &gens[k / n] * &gens[k % n]).collect();
    let id = identity(d);
    for a in 0..n {
        for b in 0..n {
            let delta = if a == b { 1.0 } else { 0.0 };
            r.orthonormality = r.orthonormality.max((trace(&products[a * n + b]) - real(delta / 2.0)).norm());
            let mut comm = &products[a * n + b] - &products[b * n + a];
            let mut anti = &products[a * n + b] + &products[b * n + a] - &id * real(delta / d as f64);
            for (cc, t) in gens.iter().enumerate() {
                comm -= t * (I * basis.f(a, b, cc));
                anti -= t * real(basis.d_sym(a, b, cc));
            }
            r.commutator = r.commutator.max(max_abs(&comm));
            r.anticommutator = r.anticommutator.max(max_abs(&anti));
        }
    }

    let mut casimir = -&id * real(basis.casimir());
    for a in 0..n {
        casimir += &products[a * n + a];
    }
    r.casimir = max_abs(&casimir);

    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let f = basis.f(a, b, cc);
                let dv = basis.d_sym(a, b, cc);
                for (fp, dp) in [
                    (basis.f(b, a, cc), basis.d_sym(b, a, cc)),
                    (basis.f(a, cc, b), basis.d_sym(a, cc, b)),
                    (basis.f(cc, b, a), basis.d_sym(cc, b, a)),
                ] {
                    r.f_antisymmetry = r.f_antisymmetry.max((f + fp).abs());
                    r.d_symmetry = r.d_symmetry.max((dv - dp).abs());
                }
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for dd in 0..n {
                    let mut s = 0.0;
                    for e in 0..n {
                        s += basis.f(a, b, e) * basis.f(e, cc, dd)
                            + basis.f(cc, b, e) * basis.f(a, e, dd)
                            + basis.f(dd, b, e) * basis.f(a, cc, e);
                    }
                    r.jacobi = r.jacobi.max(s.abs());
                }
            }
        }
    }

    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let lhs: C64 = gens.iter().map(|t| t[(i, j)] * t[(k, l)]).fold(ZERO, |acc, z| acc + z);
                    let dl = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
                    let rhs = 0.5 * (dl(i, l) * dl(j, k) - dl(i, j) * dl(k, l) / d as f64);
                    r.fierz = r.fierz.max((lhs - real(rhs)).norm());
                }
            }
        }
    }
    r
}
