//! Encoding isometries, the exact-code fixtures, and the plain-text isometry format.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{QxError, Result};
use crate::linalg::{c, identity, isometry_residual, CMatrix, CVector};

use super::physical_op::{pauli_string, PhysicalOp};

pub const ISOMETRY_TOL: f64 = 1e-10;

/// An encoding isometry V: H_L → H with V†V = 1. The physical space carries a
/// list of tensor-factor dimensions.
#[derive(Clone, Debug)]
pub struct CodeIsometry {
    v: CMatrix,
    dims: Vec<usize>,
}

impl CodeIsometry {
    pub fn new(v: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != v.nrows() {
            return Err(QxError::DimensionMismatch(format!(
                "factor dims {dims:?} multiply to {total}, isometry has {} rows",
                v.nrows()
            )));
        }
        if v.ncols() == 0 || v.ncols() > v.nrows() {
            return Err(QxError::InvalidDimension(format!("{}x{} is not an isometry shape", v.nrows(), v.ncols())));
        }
        let res = isometry_residual(&v);
        if res > ISOMETRY_TOL {
            return Err(QxError::NumericalFailure(format!("V†V deviates from identity by {res:e}")));
        }
        Ok(Self { v, dims })
    }

    /// V = 1 on a single d-dimensional factor.
    pub fn trivial(d: usize) -> Self {
        Self { v: identity(d), dims: vec![d] }
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn d_l(&self) -> usize {
        self.v.ncols()
    }

    pub fn d_q(&self) -> usize {
        self.v.nrows()
    }

    /// Dense projector P = VV†.
    pub fn projector(&self) -> CMatrix {
        &self.v * self.v.adjoint()
    }

    /// V† O V.
    pub fn compress(&self, op: &PhysicalOp) -> Result<CMatrix> {
        Ok(self.v.adjoint() * op.apply(&self.v)?)
    }

    /// Tensor product with an idle factor of dimension `extra` appended last.
    pub fn tensor_idle(&self, extra: usize) -> Self {
        let mut dims = self.dims.clone();
        dims.push(extra);
        Self { v: self.v.kronecker(&identity(extra)), dims }
    }

    /// The five-qubit [[5,1,3]] code: stabilizers are the cyclic shifts of
    /// XZZXI, |0̄⟩ ∝ P|00000⟩ and |1̄⟩ = X^⊗5|0̄⟩.
    pub fn five_one_three() -> Self {
        let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"];
        let mut proj = identity(32);
        for g in gens {
            let s = pauli_string(g).and_then(|p| p.to_dense()).expect("valid stabilizer");
            proj = (&identity(32) + s) * c(0.5, 0.0) * proj;
        }
        let mut zero = proj.column(0).into_owned();
        zero /= c(zero.norm(), 0.0);
        let xs = pauli_string("XXXXX").and_then(|p| p.to_dense()).expect("valid logical");
        let one = &xs * &zero;
        let mut v = CMatrix::zeros(32, 2);
        v.set_column(0, &zero);
        v.set_column(1, &one);
        Self { v, dims: vec![2; 5] }
    }

    /// The [[4,2,2]] code with logical basis (|0000⟩+|1111⟩)/√2,
    /// (|0011⟩+|1100⟩)/√2, (|0101⟩+|1010⟩)/√2, (|0110⟩+|1001⟩)/√2.
    pub fn four_two_two() -> Self {
        let pairs = [(0b0000, 0b1111), (0b0011, 0b1100), (0b0101, 0b1010), (0b0110, 0b1001)];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CMatrix::zeros(16, 4);
        for (col, &(a, b)) in pairs.iter().enumerate() {
            v[(a, col)] = c(s, 0.0);
            v[(b, col)] = c(s, 0.0);
        }
        Self { v, dims: vec![2; 4] }
    }

    /// Parses the isometry text format: a header line `rows cols` followed by
    /// rows·cols whitespace-separated `re im` pairs in row-major order. Lines
    /// starting with `#` are ignored. Qubit factor dimensions are assumed when
    /// rows is a power of two, otherwise a single factor.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.lines().filter(|l| !l.trim_start().starts_with('#')).flat_map(|l| l.split_whitespace());
        let mut next_usize = |what: &str| -> Result<usize> {
            let tok = tokens.next().ok_or_else(|| QxError::Parse(format!("missing {what}")))?;
            tok.parse().map_err(|_| QxError::Parse(format!("bad {what}: {tok:?}")))
        };
        let rows = next_usize("row count")?;
        let cols = next_usize("column count")?;
        let mut values = Vec::with_capacity(2 * rows * cols);
        for tok in tokens {
            values.push(tok.parse::<f64>().map_err(|_| QxError::Parse(format!("bad number {tok:?}")))?);
        }
        if values.len() != 2 * rows * cols {
            return Err(QxError::Parse(format!(
                "expected {} numbers for a {rows}x{cols} complex matrix, found {}",
                2 * rows * cols,
                values.len()
            )));
        }
        let v = CMatrix::from_fn(rows, cols, |i, j| {
            let k = 2 * (i * cols + j);
            c(values[k], values[k + 1])
        });
        let dims = if crate::linalg::is_power_of_two(rows) && rows > 1 {
            vec![2; rows.trailing_zeros() as usize]
        } else {
            vec![rows]
        };
        Self::new(v, dims)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.v.nrows(), self.v.ncols());
        for i in 0..self.v.nrows() {
            let row: Vec<String> =
                (0..self.v.ncols()).map(|j| format!("{:e} {:e}", self.v[(i, j)].re, self.v[(i, j)].im)).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Logical basis vector |α⟩ encoded.
    pub fn encoded(&self, alpha: usize) -> CVector {
        self.v.column(alpha).into_owned()
    }
}
