//! Gate-cell bookkeeping, the gate-count budget, and Monte-Carlo simulation
//! of noisy logical circuits ∏ E_ℓ U_ℓ.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{QxError, Result};
use crate::linalg::{expm_i_hermitian, identity, normal_eigenvalues, unitarity_residual, CMatrix};
use crate::sampling::{random_su, rng, stable_hash};
use crate::su_algebra::SuBasis;
use crate::vbs::eta;

/// Unitarity tolerance for inputs.
pub const UNITARY_TOL: f64 = 1e-10;

/// Distances closer than this count as ties in cell assignment.
pub const TIE_TOL: f64 = 1e-12;

fn check_unitary(u: &CMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(QxError::DimensionMismatch(format!("non-square matrix {:?}", u.shape())));
    }
    let r = unitarity_residual(u);
    if r > UNITARY_TOL {
        return Err(QxError::NotUnitary(r));
    }
    Ok(())
}

/// min_φ ‖u − e^{iφ}v‖ in operator norm.
///
/// With eigenphases θ_k of u†v, the norm is max_k |e^{iθ_k} − e^{iφ}|. The
/// optimal φ bisects the shortest arc holding every θ_k, so the result is
/// 2 sin(w/2) with w half that arc's length.
pub fn unitary_distance(u: &CMatrix, v: &CMatrix) -> Result<f64> {
    if u.shape() != v.shape() {
        return Err(QxError::DimensionMismatch(format!("{:?} vs {:?}", u.shape(), v.shape())));
    }
    check_unitary(u)?;
    check_unitary(v)?;
    let mut phases: Vec<f64> = normal_eigenvalues(&(u.adjoint() * v)).iter().map(|z| z.arg()).collect();
    if phases.len() < 2 {
        return Ok(0.0);
    }
    phases.sort_by(f64::total_cmp);
    let mut max_gap = phases[0] + 2.0 * PI - phases[phases.len() - 1];
    for w in phases.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    let half_arc = ((2.0 * PI - max_gap) / 2.0).max(0.0);
    Ok(2.0 * (half_arc / 2.0).sin())
}

/// A fixed partition of SU(d_L) into cells around representatives that are
/// pairwise more than η apart.
#[derive(Clone, Debug)]
pub struct GateCellTable {
    d_l: usize,
    eta: f64,
    representatives: Vec<CMatrix>,
}

impl GateCellTable {
    /// Validates a given list of representatives.
    pub fn new(d_l: usize, eta: f64, representatives: Vec<CMatrix>) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(QxError::InvalidParameter(format!("accuracy {eta} must be positive")));
        }
        for (i, u) in representatives.iter().enumerate() {
            if u.nrows() != d_l {
                return Err(QxError::DimensionMismatch(format!("representative {i} has dimension {}", u.nrows())));
            }
            for (j, v) in representatives[..i].iter().enumerate() {
                let dist = unitary_distance(u, v)?;
                if dist <= eta {
                    return Err(QxError::InvalidParameter(format!(
                        "representatives {j} and {i} are {dist:e} apart, within η = {eta}"
                    )));
                }
            }
        }
        Ok(Self { d_l, eta, representatives })
    }

    /// Greedy η-net: keeps each sample farther than η from all kept ones.
    pub fn greedy(d_l: usize, eta: f64, samples: impl IntoIterator<Item = CMatrix>) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(QxError::InvalidParameter(format!("accuracy {eta} must be positive")));
        }
        let mut representatives: Vec<CMatrix> = Vec::new();
        for u in samples {
            if u.nrows() != d_l {
                return Err(QxError::DimensionMismatch(format!("sample of dimension {} for d_L = {d_l}", u.nrows())));
            }
            let mut keep = true;
            for v in &representatives {
                if unitary_distance(&u, v)? <= eta {
                    keep = false;
                    break;
                }
            }
            if keep {
                representatives.push(u);
            }
        }
        Ok(Self { d_l, eta, representatives })
    }

    /// Greedy η-net over `count` seeded Haar-like samples of SU(d_L).
    pub fn random(d_l: usize, eta: f64, count: usize, seed: u64) -> Result<Self> {
        let basis = SuBasis::new(d_l)?;
        let mut r = rng(seed);
        let samples: Vec<CMatrix> = (0..count).map(|_| random_su(&basis, &mut r)).collect();
        Self::greedy(d_l, eta, samples)
    }

    pub fn d_l(&self) -> usize {
        self.d_l
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn representatives(&self) -> &[CMatrix] {
        &self.representatives
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Index of the nearest representative; ties within [`TIE_TOL`] go to the
/// lowest index.
pub fn cell_assign(table: &GateCellTable, u: &CMatrix) -> Result<usize> {
    if table.is_empty() {
        return Err(QxError::InvalidParameter("empty gate-cell table".into()));
    }
    let mut best = (0, f64::INFINITY);
    for (i, v) in table.representatives.iter().enumerate() {
        let dist = unitary_distance(u, v)?;
        if dist < best.1 - TIE_TOL {
            best = (i, dist);
        }
    }
    Ok(best.0)
}

/// floor((ϖ − ϖ₀)/η): how many gates of accuracy η fit a total budget ϖ
/// after synthesis error ϖ₀.
pub fn max_gate_count(target: f64, eta: f64, synthesis: f64) -> Result<u64> {
    if !(eta > 0.0) {
        return Err(QxError::InvalidParameter(format!("accuracy {eta} must be positive")));
    }
    if !(synthesis >= 0.0) {
        return Err(QxError::InvalidParameter(format!("synthesis error {synthesis} must be non-negative")));
    }
    if !(target >= synthesis) {
        return Err(QxError::InvalidParameter(format!("target {target} below synthesis error {synthesis}")));
    }
    Ok(((target - synthesis) / eta).floor() as u64)
}

/// Subadditive bound Σ d_ℓ on the distance of a product of gates each
/// within d_ℓ of its ideal.
pub fn compose_error_bound(gate_distances: &[f64]) -> f64 {
    gate_distances.iter().sum()
}

#[derive(Clone, Debug)]
pub enum GateSource {
    /// One gate per step.
    Explicit(Vec<CMatrix>),
    /// Random SU(d) gates from a stream seeded by the trajectory seed.
    Random,
}

#[derive(Clone, Debug)]
pub struct SimParams {
    pub d: usize,
    pub n: usize,
    pub length: usize,
    pub seed: u64,
    /// Replaces eta(d, N) when set.
    pub eta_override: Option<f64>,
    pub gates: GateSource,
}

impl SimParams {
    pub fn new(d: usize, n: usize, length: usize, seed: u64) -> Self {
        Self { d, n, length, seed, eta_override: None, gates: GateSource::Random }
    }
}

#[derive(Clone, Debug)]
pub struct SimTrajectory {
    pub seed: u64,
    pub eta: f64,
    pub gates: Vec<CMatrix>,
    /// ε_k per step.
    pub exponents: Vec<Vec<f64>>,
    /// unitary_distance(E_ℓ, 1) per step.
    pub error_distances: Vec<f64>,
    /// Distance between the noisy and ideal products after each step.
    pub distances: Vec<f64>,
    /// Running compose_error_bound of the error distances.
    pub envelope: Vec<f64>,
}

impl SimTrajectory {
    pub fn length(&self) -> usize {
        self.distances.len()
    }

    pub fn final_distance(&self) -> f64 {
        self.distances.last().copied().unwrap_or(0.0)
    }

    pub fn final_envelope(&self) -> f64 {
        self.envelope.last().copied().unwrap_or(0.0)
    }

    /// Columns step, ideal_vs_noisy_distance, envelope.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,ideal_vs_noisy_distance,envelope\n");
        for (l, (dist, env)) in self.distances.iter().zip(&self.envelope).enumerate() {
            writeln!(out, "{},{:.11e},{:.11e}", l + 1, dist, env).expect("writing to a String");
        }
        out
    }
}

/// Applies U_ℓ then E_ℓ = exp(iη Σ_k ε_k t^k) with ε_k uniform on [−1, 1].
/// Gates and exponents come from separate streams derived from the seed, so
/// runs that differ only in η see identical draws.
pub fn simulate_computation(params: &SimParams) -> Result<SimTrajectory> {
    if params.length < 1 {
        return Err(QxError::InvalidParameter("trajectory length must be at least 1".into()));
    }
    let basis = SuBasis::new(params.d)?;
    let eta = match params.eta_override {
        Some(e) => e,
        None => eta(params.d, params.n)?,
    };
    let gates: Vec<CMatrix> = match &params.gates {
        GateSource::Explicit(list) => {
            if list.len() != params.length {
                return Err(QxError::InvalidParameter(format!(
                    "{} explicit gates for length {}",
                    list.len(),
                    params.length
                )));
            }
            for u in list {
                if u.nrows() != params.d {
                    return Err(QxError::DimensionMismatch(format!(
                        "gate of dimension {} for d = {}",
                        u.nrows(),
                        params.d
                    )));
                }
                check_unitary(u)?;
            }
            list.clone()
        }
        GateSource::Random => {
            let mut r = rng(stable_hash(params.seed, 0));
            (0..params.length).map(|_| random_su(&basis, &mut r)).collect()
        }
    };
    let mut noise_rng = rng(stable_hash(params.seed, 1));
    let mut ideal = identity(params.d);
    let mut noisy = identity(params.d);
    let mut exponents = Vec::with_capacity(params.length);
    let mut error_distances = Vec::with_capacity(params.length);
    let mut distances = Vec::with_capacity(params.length);
    let mut envelope = Vec::with_capacity(params.length);
    let mut bound = 0.0;
    let unit = identity(params.d);
    for u in &gates {
        let eps: Vec<f64> = (0..basis.len()).map(|_| noise_rng.random_range(-1.0..=1.0)).collect();
        let error = expm_i_hermitian(&basis.combine(&eps), eta);
        ideal = u * ideal;
        noisy = &error * (u * noisy);
        let step_error = unitary_distance(&error, &unit)?;
        bound += step_error;
        error_distances.push(step_error);
        distances.push(unitary_distance(&noisy, &ideal)?);
        envelope.push(bound);
        exponents.push(eps);
    }
    Ok(SimTrajectory { seed: params.seed, eta, gates, exponents, error_distances, distances, envelope })
}
