//! SU(d)-covariant valence-bond-solid codes.
//!
//! Bulk sites carry the adjoint representation (dimension d²−1) and the edge
//! carries the fundamental one. The code state for logical |α⟩ is
//! Σ A^{i_N}⋯A^{i_1}|α⟩ ⊗ |i_1⟩⋯|i_N⟩ with A^i = √(2d/(d²−1))·t^i.
//!
//! Expectation values are contracted with the transfer channel
//! E(X) = Σ_i A^i X A^i. An operator "inserted at bond n" sits after n
//! Kraus operators in the ket string; bond 0 is the logical ket itself and
//! bond N is the edge. Physical bulk generators act through the commutator
//! rule T^a Σ_i A^i|i⟩ = Σ_i [A^i, t^a]|i⟩, so T_n^a expands into bond
//! insertions at n−1 and n.

mod closed_form;
mod dense;
mod noise;

use nalgebra::DMatrix;

use crate::error::{QxError, Result};
use crate::linalg::{
    eigvalsh, identity, max_abs, real, singular_values, unit, unvec_row_major, vec_row_major, CMatrix, C64,
};
use crate::qec::{ErrorGram, PhysicalOp};
use crate::quantum_ops::KrausChannel;
use crate::su_algebra::{adjoint_generator, adjoint_group_element, SuBasis};

pub use closed_form::{
    correlation as closed_correlation, detection as closed_detection, edge_state as closed_edge_state,
    site_edge as closed_site_edge, site_pair as closed_site_pair, site_single as closed_site_single,
};
pub use dense::{dense_isometry, dense_len, encode_dense, within_cap, DENSE_CAP};
pub use noise::{effective_noise_channel, eta, EffectiveNoise};

/// Tolerance for the identities checked when a code is built.
pub const BUILD_TOL: f64 = 1e-12;

/// Default total error probability of the bond error model.
pub const DEFAULT_BOND_ERROR_P: f64 = 0.1;

/// An operator inserted at a bond of the virtual chain.
#[derive(Clone, Debug)]
pub struct BondInsertion {
    pub bond: usize,
    pub operator: CMatrix,
}

/// A physical single-site generator: `site` in 1..=N is a bulk site carrying
/// T^a, `site` = N+1 is the edge carrying t^a.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiteFactor {
    pub site: usize,
    pub a: usize,
}

#[derive(Clone, Debug)]
pub struct EdgeState {
    pub iterated: CMatrix,
    pub closed_form: CMatrix,
}

/// Transfer-matrix value and closed form of each site correlator.
#[derive(Clone, Copy, Debug)]
pub struct SiteOverlaps {
    pub single: (C64, C64),
    pub with_edge: (C64, C64),
    pub pair: (C64, C64),
}

#[derive(Clone, Debug)]
pub struct CovariantGate {
    /// Real orthogonal factor applied on every bulk site.
    pub site_factor: DMatrix<f64>,
    /// Factor on the edge, equal to g.
    pub edge_factor: CMatrix,
    /// Overlaps ⟨ψ_α|U|ψ_β⟩ of the transversal gate.
    pub overlap: CMatrix,
    /// max_α 1 − |⟨ψ_{gα}|U|ψ_α⟩|.
    pub residual: f64,
    /// ‖(1 − P)UV‖ from the smallest singular value of the overlap matrix.
    pub logical_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct VbsCode {
    d: usize,
    n: usize,
    basis: SuBasis,
    kraus: Vec<CMatrix>,
    adjoint: Vec<CMatrix>,
    chi: f64,
    /// Powers S^k, k = 0..=N, of the Heisenberg superoperator X ↦ Σ A†XA
    /// in row-major vectorization.
    powers: Vec<CMatrix>,
}

impl VbsCode {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(QxError::InvalidDimension(format!("edge dimension d = {d} must be at least 2")));
        }
        if n < 1 {
            return Err(QxError::InvalidParameter("bulk length N must be at least 1".into()));
        }
        let basis = SuBasis::new(d)?;
        let q = d * d - 1;
        let scale = real((2.0 * d as f64 / q as f64).sqrt());
        let kraus: Vec<CMatrix> = basis.generators().iter().map(|t| t * scale).collect();
        let adjoint = (0..q).map(|a| adjoint_generator(&basis, a)).collect::<Result<Vec<_>>>()?;
        let chi = -1.0 / q as f64;

        let channel = KrausChannel::new(kraus.clone())?;
        let (tp, unital) = crate::quantum_ops::cptp_residuals(&channel);
        if tp > BUILD_TOL || unital > BUILD_TOL {
            return Err(QxError::NumericalFailure(format!("Kraus set residuals {tp:e}, {unital:e}")));
        }
        for t in basis.generators() {
            let dev = max_abs(&(channel.apply(t)? - t * real(chi)));
            if dev > BUILD_TOL {
                return Err(QxError::NumericalFailure(format!("generator is not a χ-eigenvector ({dev:e})")));
            }
        }
        let mut heisenberg = CMatrix::zeros(d * d, d * d);
        for a in &kraus {
            heisenberg += a.adjoint().kronecker(&a.transpose());
        }
        let self_dual = max_abs(&(&heisenberg - channel.superoperator()));
        if self_dual > BUILD_TOL {
            return Err(QxError::NumericalFailure(format!("transfer channel is not self-dual ({self_dual:e})")));
        }
        let mut powers = Vec::with_capacity(n + 1);
        powers.push(identity(d * d));
        for k in 0..n {
            let next = &heisenberg * &powers[k];
            powers.push(next);
        }
        Ok(Self { d, n, basis, kraus, adjoint, chi, powers })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// d² − 1.
    pub fn site_dim(&self) -> usize {
        self.d * self.d - 1
    }

    pub fn basis(&self) -> &SuBasis {
        &self.basis
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Adjoint generator T^a acting on a bulk site.
    pub fn adjoint_generator(&self, a: usize) -> &CMatrix {
        &self.adjoint[a]
    }

    pub fn channel(&self) -> KrausChannel {
        KrausChannel::new(self.kraus.clone()).expect("uniform Kraus shapes")
    }

    /// Physical factor dimensions: N bulk sites then the edge.
    pub fn physical_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.site_dim(); self.n];
        dims.push(self.d);
        dims
    }

    fn check_generator(&self, a: usize) -> Result<()> {
        if a >= self.site_dim() {
            return Err(QxError::IndexOutOfRange(format!("generator {a} of {}", self.site_dim())));
        }
        Ok(())
    }

    fn check_logical(&self, alpha: usize) -> Result<()> {
        if alpha >= self.d {
            return Err(QxError::IndexOutOfRange(format!("logical index {alpha} for d = {}", self.d)));
        }
        Ok(())
    }

    /// k applications of the Heisenberg transfer map.
    pub fn evolve(&self, m: &CMatrix, k: usize) -> CMatrix {
        let v = vec_row_major(m);
        let mut remaining = k;
        let mut out = v;
        while remaining > 0 {
            let step = remaining.min(self.n);
            out = &self.powers[step] * out;
            remaining -= step;
        }
        unvec_row_major(&out, self.d, self.d)
    }

    /// Contracts a list of bond insertions given in application order and
    /// returns the d×d matrix of ⟨ψ_α|…|ψ_β⟩. At a shared bond the later
    /// insertion multiplies from the left.
    pub fn contract(&self, insertions: &[BondInsertion]) -> Result<CMatrix> {
        for ins in insertions {
            if ins.bond > self.n {
                return Err(QxError::IndexOutOfRange(format!("bond {} beyond N = {}", ins.bond, self.n)));
            }
            if ins.operator.shape() != (self.d, self.d) {
                return Err(QxError::DimensionMismatch(format!("insertion of shape {:?}", ins.operator.shape())));
            }
        }
        let mut bonds: Vec<usize> = insertions.iter().map(|i| i.bond).collect();
        bonds.sort_unstable_by(|a, b| b.cmp(a));
        bonds.dedup();
        let mut m = identity(self.d);
        let mut current = self.n;
        for b in bonds {
            m = self.evolve(&m, current - b);
            let mut y = identity(self.d);
            for ins in insertions.iter().filter(|i| i.bond == b) {
                y = &ins.operator * y;
            }
            m *= y;
            current = b;
        }
        Ok(self.evolve(&m, current))
    }

    fn insertion(&self, bond: usize, a: usize) -> BondInsertion {
        BondInsertion { bond, operator: self.basis.generator(a).clone() }
    }

    /// Matrix of ⟨ψ_α| Π factors |ψ_β⟩ for physical generators on distinct
    /// sites, expanded into bond insertions by the commutator rule.
    pub fn site_expectation(&self, factors: &[SiteFactor]) -> Result<CMatrix> {
        let mut sorted = factors.to_vec();
        sorted.sort_by_key(|f| f.site);
        for w in sorted.windows(2) {
            if w[0].site == w[1].site {
                return Err(QxError::InvalidParameter(format!("two generators on site {}", w[0].site)));
            }
        }
        for f in &sorted {
            self.check_generator(f.a)?;
            if f.site == 0 || f.site > self.n + 1 {
                return Err(QxError::IndexOutOfRange(format!("site {} outside 1..={}", f.site, self.n + 1)));
            }
        }
        let expansions: Vec<Vec<(usize, f64)>> = sorted
            .iter()
            .map(|f| if f.site == self.n + 1 { vec![(self.n, 1.0)] } else { vec![(f.site - 1, 1.0), (f.site, -1.0)] })
            .collect();
        let mut total = CMatrix::zeros(self.d, self.d);
        let combos: usize = expansions.iter().map(|e| e.len()).product();
        for mut idx in 0..combos {
            let mut sign = 1.0;
            let mut list = Vec::with_capacity(sorted.len());
            for (f, exp) in sorted.iter().zip(&expansions) {
                let (bond, s) = exp[idx % exp.len()];
                idx /= exp.len();
                sign *= s;
                list.push(self.insertion(bond, f.a));
            }
            total += self.contract(&list)? * real(sign);
        }
        Ok(total)
    }

    /// ⟨ψ_α| t^a at bond n |ψ_β⟩.
    pub fn detection_overlap(&self, alpha: usize, beta: usize, a: usize, n: usize) -> Result<C64> {
        self.check_logical(alpha)?;
        self.check_logical(beta)?;
        self.check_generator(a)?;
        Ok(self.contract(&[self.insertion(n, a)])?[(alpha, beta)])
    }

    /// Full matrix of bond-pair correlations: t^a at bond m, t^b at bond n > m.
    pub fn correlation_matrix(&self, a: usize, b: usize, m: usize, n: usize) -> Result<CMatrix> {
        if m >= n {
            return Err(QxError::InvalidParameter(format!("correlation needs m < n, got m = {m}, n = {n}")));
        }
        self.check_generator(a)?;
        self.check_generator(b)?;
        self.contract(&[self.insertion(m, a), self.insertion(n, b)])
    }

    pub fn correlation(&self, alpha: usize, beta: usize, a: usize, b: usize, m: usize, n: usize) -> Result<C64> {
        self.check_logical(alpha)?;
        self.check_logical(beta)?;
        Ok(self.correlation_matrix(a, b, m, n)?[(alpha, beta)])
    }

    /// ⟨T_n^a⟩, ⟨T_n^a t_{N+1}^b⟩ and ⟨T_m^a T_n^b⟩, each by transfer
    /// contraction and by closed form.
    pub fn site_operator_overlaps(
        &self,
        alpha: usize,
        beta: usize,
        a: usize,
        b: usize,
        m: usize,
        n: usize,
    ) -> Result<SiteOverlaps> {
        self.check_logical(alpha)?;
        self.check_logical(beta)?;
        if !(1 <= m && m < n && n <= self.n) {
            return Err(QxError::IndexOutOfRange(format!("sites need 1 ≤ m < n ≤ {}, got m = {m}, n = {n}", self.n)));
        }
        let edge = self.n + 1;
        let single = self.site_expectation(&[SiteFactor { site: n, a }])?[(alpha, beta)];
        let with_edge =
            self.site_expectation(&[SiteFactor { site: n, a }, SiteFactor { site: edge, a: b }])?[(alpha, beta)];
        let pair = self.site_expectation(&[SiteFactor { site: m, a }, SiteFactor { site: n, a: b }])?[(alpha, beta)];
        let basis = &self.basis;
        Ok(SiteOverlaps {
            single: (single, closed_site_single(basis, alpha, beta, a, n)),
            with_edge: (with_edge, closed_site_edge(basis, alpha, beta, a, b, n, self.n)),
            pair: (pair, closed_site_pair(basis, alpha, beta, a, b, m, n)),
        })
    }

    /// |t^a_{αβ} − (⟨t^a_{N+1}⟩ + Σ_n ⟨T_n^a⟩)|.
    pub fn sum_rule_check(&self, a: usize, alpha: usize, beta: usize) -> Result<f64> {
        self.check_logical(alpha)?;
        self.check_logical(beta)?;
        self.check_generator(a)?;
        let mut total = self.site_expectation(&[SiteFactor { site: self.n + 1, a }])?;
        for n in 1..=self.n {
            total += self.site_expectation(&[SiteFactor { site: n, a }])?;
        }
        Ok((self.basis.generator(a)[(alpha, beta)] - total[(alpha, beta)]).norm())
    }

    /// Eⁿ(|α⟩⟨α|) by iterating the channel, with the closed form.
    pub fn edge_state(&self, alpha: usize, n: usize) -> Result<EdgeState> {
        self.check_logical(alpha)?;
        let channel = self.channel();
        let mut sigma = unit(self.d, alpha, alpha);
        for _ in 0..n {
            sigma = channel.apply(&sigma)?;
        }
        Ok(EdgeState { iterated: sigma, closed_form: closed_edge_state(&self.basis, alpha, n) })
    }

    /// Reduced state of bulk site n: Σ_ij tr[σ_n A^j A^i]|i⟩⟨j| with
    /// σ_n = E^{n−1}(|α⟩⟨α|).
    pub fn bulk_state(&self, alpha: usize, n: usize) -> Result<CMatrix> {
        if n == 0 || n > self.n {
            return Err(QxError::IndexOutOfRange(format!("site {n} outside 1..={}", self.n)));
        }
        let sigma = self.edge_state(alpha, n - 1)?.iterated;
        let q = self.site_dim();
        Ok(CMatrix::from_fn(q, q, |i, j| crate::linalg::trace(&(&sigma * &self.kraus[j] * &self.kraus[i]))))
    }

    /// Transversal gate U(g)^⊗N ⊗ g and its action on the code, contracted
    /// with the transfer recursion M ↦ Σ_ij R_ji A^j M A^i from M = g.
    pub fn covariant_gate(&self, g: &CMatrix) -> Result<CovariantGate> {
        let r = adjoint_group_element(&self.basis, g)?;
        let q = self.site_dim();
        let rotated: Vec<CMatrix> = (0..q)
            .map(|j| {
                let mut acc = CMatrix::zeros(self.d, self.d);
                for i in 0..q {
                    acc += &self.kraus[i] * real(r[(j, i)]);
                }
                acc
            })
            .collect();
        let mut m = g.clone();
        for _ in 0..self.n {
            let mut next = CMatrix::zeros(self.d, self.d);
            for j in 0..q {
                next += self.kraus[j].adjoint() * &m * &rotated[j];
            }
            m = next;
        }
        let projected = g.adjoint() * &m;
        let residual = (0..self.d).map(|alpha| 1.0 - projected[(alpha, alpha)].norm()).fold(0.0, f64::max);
        let smin = singular_values(&m).into_iter().fold(f64::INFINITY, f64::min);
        let logical_deviation = (1.0 - smin * smin).max(0.0).sqrt();
        Ok(CovariantGate { site_factor: r, edge_factor: g.clone(), overlap: m, residual, logical_deviation })
    }

    /// The transversal gate as a structured physical operator.
    pub fn covariant_physical_op(&self, g: &CMatrix) -> Result<PhysicalOp> {
        let r = adjoint_group_element(&self.basis, g)?.map(real);
        let dims = self.physical_dims();
        let mut factors: Vec<(usize, CMatrix)> = (0..self.n).map(|k| (k, r.clone())).collect();
        factors.push((self.n, g.clone()));
        PhysicalOp::product_of_locals(&dims, &factors)
    }

    /// 1/(N·ΔT) with ΔT the largest spectral range of an adjoint generator.
    pub fn erasure_bound(&self) -> f64 {
        let spread = self
            .adjoint
            .iter()
            .map(|t| {
                let ev = eigvalsh(t);
                ev.last().copied().unwrap_or(0.0) - ev.first().copied().unwrap_or(0.0)
            })
            .fold(0.0, f64::max);
        1.0 / (self.n as f64 * spread)
    }

    /// T^a on bulk site k (1-based).
    pub fn site_operator(&self, a: usize, k: usize) -> Result<PhysicalOp> {
        self.check_generator(a)?;
        if k == 0 || k > self.n {
            return Err(QxError::IndexOutOfRange(format!("site {k} outside 1..={}", self.n)));
        }
        PhysicalOp::local(&self.physical_dims(), k - 1, self.adjoint[a].clone())
    }

    /// t^a on the edge.
    pub fn edge_operator(&self, a: usize) -> Result<PhysicalOp> {
        self.check_generator(a)?;
        PhysicalOp::local(&self.physical_dims(), self.n, self.basis.generator(a).clone())
    }

    /// Physical operator acting on the code as t^a inserted at bond n:
    /// t^a on the edge plus T^a on every site beyond n.
    pub fn bond_operator(&self, a: usize, n: usize) -> Result<PhysicalOp> {
        if n > self.n {
            return Err(QxError::IndexOutOfRange(format!("bond {n} beyond N = {}", self.n)));
        }
        let mut terms = vec![self.edge_operator(a)?];
        for k in n + 1..=self.n {
            terms.push(self.site_operator(a, k)?);
        }
        Ok(PhysicalOp::Sum(terms))
    }

    fn bond_error_setup(&self, p: f64, bonds: &[usize]) -> Result<(f64, f64, Vec<usize>)> {
        if !(0.0..=1.0).contains(&p) {
            return Err(QxError::InvalidParameter(format!("error probability {p} outside [0, 1]")));
        }
        let bonds: Vec<usize> = if bonds.is_empty() { (1..=self.n).collect() } else { bonds.to_vec() };
        if let Some(&b) = bonds.iter().find(|&&b| b == 0 || b > self.n) {
            return Err(QxError::IndexOutOfRange(format!("bond {b} outside 1..={}", self.n)));
        }
        let q = self.site_dim() as f64;
        let w = (p / bonds.len() as f64 * 2.0 * self.d as f64 / q).sqrt();
        Ok(((1.0 - p).sqrt(), w, bonds))
    }

    /// Bond error model {√(1−p)·1} ∪ {√(p/|B|)·√(2d/(d²−1))·t^a at bond n}
    /// for n in B, ordered by bond then generator; `bonds` empty means
    /// B = 1..N. Trace preserving on the code.
    pub fn bond_error_model(&self, p: f64, bonds: &[usize]) -> Result<Vec<PhysicalOp>> {
        let (w0, w, bonds) = self.bond_error_setup(p, bonds)?;
        let mut out = vec![PhysicalOp::Identity(self.physical_dims().iter().product()).scaled(real(w0))];
        for n in bonds {
            for a in 0..self.site_dim() {
                out.push(self.bond_operator(a, n)?.scaled(real(w)));
            }
        }
        Ok(out)
    }

    /// Gram blocks of [`bond_error_model`](Self::bond_error_model) on the
    /// code, by transfer contraction. Applying the bond-m operator after a
    /// bond-n insertion with n > m yields both insertions plus
    /// [t^a, t^b] at bond n.
    pub fn bond_error_gram(&self, p: f64, bonds: &[usize]) -> Result<ErrorGram> {
        let (w0, w, bonds) = self.bond_error_setup(p, bonds)?;
        let q = self.site_dim();
        let labels: Vec<Option<(usize, usize)>> =
            std::iter::once(None).chain(bonds.iter().flat_map(|&n| (0..q).map(move |a| Some((n, a))))).collect();
        let weight = |l: &Option<(usize, usize)>| if l.is_some() { w } else { w0 };
        let count = labels.len();
        let mut blocks = Vec::with_capacity(count * count);
        for li in &labels {
            for lj in &labels {
                let mut list = Vec::with_capacity(2);
                if let Some((n, a)) = lj {
                    list.push(self.insertion(*n, *a));
                }
                if let Some((n, a)) = li {
                    list.push(self.insertion(*n, *a));
                }
                let mut block = self.contract(&list)?;
                // The outer operator telescopes through a deeper insertion and
                // leaves its commutator behind at that bond.
                if let (Some((ni, ai)), Some((nj, aj))) = (li, lj) {
                    if ni < nj {
                        let (ti, tj) = (self.basis.generator(*ai), self.basis.generator(*aj));
                        block += self.contract(&[BondInsertion { bond: *nj, operator: ti * tj - tj * ti }])?;
                    }
                }
                blocks.push(block * real(weight(li) * weight(lj)));
            }
        }
        ErrorGram::from_blocks(self.d, count, blocks)
    }
}

pub fn build(d: usize, n: usize) -> Result<VbsCode> {
    VbsCode::new(d, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, trace};

    #[test]
    fn build_examples() {
        let code = build(2, 3).unwrap();
        assert!((code.chi() + 1.0 / 3.0).abs() < 1e-15);
        let sx = CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)]);
        assert!(max_abs(&(&code.kraus()[0] - sx / real(3f64.sqrt()))) < 1e-15);
        let code3 = build(3, 2).unwrap();
        assert_eq!(code3.kraus().len(), 8);
        assert!((code3.chi() + 0.125).abs() < 1e-15);
        assert!(build(1, 3).is_err());
        assert!(build(2, 0).is_err());
    }

    #[test]
    fn channel_acts_on_fixed_point_and_generators() {
        let code = build(2, 1).unwrap();
        let ch = code.channel();
        let half = identity(2) * real(0.5);
        assert!(max_abs(&(ch.apply(&half).unwrap() - &half)) < 1e-15);
        let t3 = code.basis().generator(2);
        assert!(max_abs(&(ch.apply(t3).unwrap() + t3 / real(3.0))) < 1e-15);
        let w = crate::quantum_ops::dilation_isometry(&ch).unwrap();
        assert_eq!(w.shape(), (6, 2));
    }

    #[test]
    fn detection_examples() {
        let code = build(2, 3).unwrap();
        assert!((code.detection_overlap(0, 0, 2, 0).unwrap() - real(0.5)).norm() < 1e-15);
        assert!((code.detection_overlap(0, 0, 2, 1).unwrap() + real(1.0 / 6.0)).norm() < 1e-15);
        let edge = code.detection_overlap(0, 1, 0, 3).unwrap();
        assert!((edge - real(0.5 * (-1.0f64 / 3.0).powi(3))).norm() < 1e-15);
        assert!(code.detection_overlap(0, 0, 2, 4).is_err());
        assert!(code.detection_overlap(2, 0, 2, 1).is_err());
    }

    #[test]
    fn correlation_examples() {
        let code = build(3, 3).unwrap();
        let v = code.correlation(0, 0, 0, 0, 1, 2).unwrap();
        assert!((v - real(-5.0 / 256.0)).norm() < 1e-15);
        assert!(code.correlation(0, 0, 0, 0, 2, 2).is_err());
        let code2 = build(2, 5).unwrap();
        for a in 0..3 {
            let same = code2.correlation(0, 0, a, a, 1, 4).unwrap();
            assert!((same - real((-1.0f64 / 3.0).powi(3) / 4.0)).norm() < 1e-15);
            assert!(code2.correlation(0, 1, a, a, 1, 4).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn site_overlap_examples() {
        let code = build(2, 4).unwrap();
        let out = code.site_operator_overlaps(0, 0, 2, 2, 1, 2).unwrap();
        let single_n1 = code.site_expectation(&[SiteFactor { site: 1, a: 2 }]).unwrap()[(0, 0)];
        assert!((single_n1 - real(2.0 / 3.0)).norm() < 1e-15);
        for (t, cf) in [out.single, out.with_edge, out.pair] {
            assert!((t - cf).norm() < 1e-14);
        }
        let off = code.site_operator_overlaps(0, 1, 1, 1, 1, 3).unwrap();
        assert!(off.pair.0.norm() < 1e-15 && off.with_edge.0.norm() < 1e-15);
        assert!(code.site_operator_overlaps(0, 0, 0, 0, 2, 2).is_err());
    }

    #[test]
    fn sum_rule_examples() {
        assert!(build(2, 10).unwrap().sum_rule_check(2, 0, 0).unwrap() < 1e-12);
        assert!(build(3, 5).unwrap().sum_rule_check(4, 0, 2).unwrap() < 1e-12);
        assert!(build(2, 1).unwrap().sum_rule_check(0, 1, 0).unwrap() < 1e-12);
    }

    #[test]
    fn edge_state_examples() {
        let code = build(2, 3).unwrap();
        let s0 = code.edge_state(1, 0).unwrap();
        assert!(max_abs(&(s0.iterated - unit(2, 1, 1))) == 0.0);
        let s1 = code.edge_state(0, 1).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[real(1.0 / 3.0), real(0.0), real(0.0), real(2.0 / 3.0)]);
        assert!(max_abs(&(&s1.iterated - &expect)) < 1e-15);
        assert!(max_abs(&(&s1.closed_form - &expect)) < 1e-15);
        let far = code.edge_state(0, 30).unwrap();
        assert!(max_abs(&(far.iterated - identity(2) * real(0.5))) < 1e-12);
    }

    #[test]
    fn bulk_state_is_a_density_matrix() {
        let code = build(3, 6).unwrap();
        for n in 1..=6 {
            let rho = code.bulk_state(1, n).unwrap();
            assert!((trace(&rho) - real(1.0)).norm() < 1e-12);
            assert!(eigvalsh(&rho)[0] > -1e-12);
        }
        let far = build(2, 40).unwrap().bulk_state(0, 40).unwrap();
        assert!(max_abs(&(far - identity(3) * real(1.0 / 3.0))) < 1e-12);
    }

    #[test]
    fn covariance_of_identity_and_rotation() {
        let code = build(2, 12).unwrap();
        assert!(code.covariant_gate(&identity(2)).unwrap().residual < 1e-14);
        let g = crate::linalg::expm_i_hermitian(
            &CMatrix::from_row_slice(2, 2, &[real(0.3), c(0.2, -0.7), c(0.2, 0.7), real(-0.3)]),
            1.0,
        );
        let out = code.covariant_gate(&g).unwrap();
        assert!(out.residual < 1e-10);
        assert!(out.logical_deviation < 1e-6);
        assert!(code.covariant_gate(&(identity(2) * real(2.0))).is_err());
    }

    #[test]
    fn erasure_bound_values() {
        assert!((build(2, 5).unwrap().erasure_bound() - 0.1).abs() < 1e-12);
        let b3 = build(3, 4).unwrap().erasure_bound();
        assert!((build(3, 8).unwrap().erasure_bound() * 2.0 - b3).abs() < 1e-15);
    }

    #[test]
    fn bond_error_gram_is_trace_preserving() {
        let code = build(3, 3).unwrap();
        let gram = code.bond_error_gram(0.2, &[]).unwrap();
        assert!(gram.tp_residual() < 1e-12);
        assert!(code.bond_error_gram(0.2, &[3]).unwrap().tp_residual() < 1e-12);
        assert!(code.bond_error_model(1.5, &[]).is_err());
        assert!(code.bond_error_model(0.1, &[0]).is_err());
        assert!(code.bond_error_model(0.1, &[4]).is_err());
    }

    #[test]
    fn bond_error_gram_matches_dense_contraction() {
        for (d, n, bonds) in [(2, 2, vec![]), (2, 4, vec![]), (2, 4, vec![3, 1]), (3, 2, vec![]), (3, 3, vec![2])] {
            let code = build(d, n).unwrap();
            let transfer = code.bond_error_gram(0.1, &bonds).unwrap();
            let dense =
                ErrorGram::new(&dense_isometry(&code).unwrap(), &code.bond_error_model(0.1, &bonds).unwrap()).unwrap();
            for i in 0..transfer.n {
                for j in 0..transfer.n {
                    assert!(max_abs(&(transfer.block(i, j) - dense.block(i, j))) < 1e-12, "d={d} N={n} ({i},{j})");
                }
            }
        }
    }
}
