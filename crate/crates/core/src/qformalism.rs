//! Kets and density operators over labeled qubit registers.
//!
//! Tensor order is register order: the qubit at register position 0 is the
//! most significant bit of a computational-basis index. Every subsystem
//! operation addresses qubits by label, never by raw index.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};

/// Dense matrices only; 8 qubits is a 256x256 operator.
pub const MAX_QUBITS: usize = 8;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_FLOOR, 0)` count as numerical drift.
pub const EIGEN_FLOOR: f64 = 1e-10;
pub const KET_NORM_TOL: f64 = 1e-12;
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitLabel(String);

impl QubitLabel {
    pub fn new(name: impl Into<String>) -> Self {
        QubitLabel(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for QubitLabel {
    fn from(s: &str) -> Self {
        QubitLabel::new(s)
    }
}

/// Parses `"x,y"` or `"xy"` style label lists used by tests and the CLI.
pub fn labels(names: &[&str]) -> Vec<QubitLabel> {
    names.iter().map(|s| QubitLabel::new(*s)).collect()
}

/// Ordered list of unique qubit labels. A label's position is its tensor slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<QubitLabel>", into = "Vec<QubitLabel>")]
pub struct Register {
    labels: Vec<QubitLabel>,
}

impl TryFrom<Vec<QubitLabel>> for Register {
    type Error = Error;
    fn try_from(v: Vec<QubitLabel>) -> Result<Self> {
        Register::new(v)
    }
}

impl From<Register> for Vec<QubitLabel> {
    fn from(r: Register) -> Self {
        r.labels
    }
}

impl Register {
    pub fn new(labels: Vec<QubitLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptySubset);
        }
        if labels.len() > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(labels.len()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        Ok(Register { labels })
    }

    pub fn from_names(names: &[&str]) -> Result<Self> {
        Register::new(labels(names))
    }

    /// `x, y, z, w` for up to four qubits, `x1 .. xn` beyond that.
    pub fn canonical(n: usize) -> Self {
        let labels = if n <= 4 {
            ["x", "y", "z", "w"][..n].iter().map(|s| QubitLabel::new(*s)).collect()
        } else {
            (1..=n).map(|i| QubitLabel::new(format!("x{i}"))).collect()
        };
        Register::new(labels).expect("canonical register is valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn position(&self, label: &QubitLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn positions(&self, subset: &[QubitLabel]) -> Result<Vec<usize>> {
        subset
            .iter()
            .map(|l| self.position(l).ok_or_else(|| Error::UnknownLabel(l.to_string())))
            .collect()
    }

    /// Bitmask over register positions; bit `i` is position `i`.
    pub fn mask(&self, subset: &[QubitLabel]) -> Result<u32> {
        let mut mask = 0u32;
        for p in self.positions(subset)? {
            if mask & (1 << p) != 0 {
                return Err(Error::DuplicateLabel(self.labels[p].to_string()));
            }
            mask |= 1 << p;
        }
        Ok(mask)
    }

    /// Labels selected by `mask`, in register order.
    pub fn labels_of_mask(&self, mask: u32) -> Vec<QubitLabel> {
        (0..self.len())
            .filter(|p| mask & (1 << p) != 0)
            .map(|p| self.labels[p].clone())
            .collect()
    }

    /// Sorts `subset` into register order.
    pub fn in_register_order(&self, subset: &[QubitLabel]) -> Result<Vec<QubitLabel>> {
        Ok(self.labels_of_mask(self.mask(subset)?))
    }

    pub fn full_mask(&self) -> u32 {
        (1u32 << self.len()) - 1
    }

    pub fn concat(&self, other: &Register) -> Result<Register> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Register::new(labels)
    }
}

/// Normalized pure state.
#[derive(Clone, Debug)]
pub struct Ket {
    amplitudes: CVector,
    register: Register,
}

impl Ket {
    pub fn new(amplitudes: CVector, register: Register) -> Result<Self> {
        if amplitudes.len() != register.dim() {
            return Err(Error::DimensionMismatch { expected: register.dim(), got: amplitudes.len() });
        }
        let norm2 = amplitudes.norm_squared();
        if (norm2 - 1.0).abs() > KET_NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Ket { amplitudes, register })
    }

    /// Rescales to unit norm before constructing.
    pub fn normalized(amplitudes: CVector, register: Register) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ket::new(amplitudes / C64::new(norm, 0.0), register)
    }

    /// Product ket from a string over `0 1 + -`, one symbol per qubit.
    pub fn from_symbols(symbols: &str, register: Register) -> Result<Self> {
        let mut v = CVector::from_element(1, linalg::ONE);
        for ch in symbols.chars() {
            let q = single_qubit(ch)?;
            v = v.kronecker(&q);
        }
        Ket::new(v, register)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn register(&self) -> &Register {
        &self.register
    }
}

pub(crate) fn single_qubit(ch: char) -> Result<CVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = match ch {
        '0' => (1.0, 0.0),
        '1' => (0.0, 1.0),
        '+' => (h, h),
        '-' => (h, -h),
        other => return Err(Error::Parse(format!("unknown ket symbol `{other}`"))),
    };
    Ok(CVector::from_vec(vec![C64::new(a, 0.0), C64::new(b, 0.0)]))
}

/// Hermiticity, trace and positivity diagnostics for a candidate density operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e} ({})",
            self.hermiticity_defect,
            self.trace_defect,
            self.min_eigenvalue,
            if self.passed { "pass" } else { "fail" }
        )
    }
}

/// Checks a raw matrix against the density-operator invariants.
pub fn validate_matrix(m: &CMatrix) -> ValidationReport {
    let hermiticity_defect = linalg::hermiticity_defect(m);
    let tr = linalg::trace(m);
    let trace_defect = ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt();
    // Eigenvalues of the Hermitian part; a non-Hermitian input already fails above.
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut min_eigenvalue = linalg::hermitian_eigenvalues(&herm).first().copied().unwrap_or(0.0);
    if (-EIGEN_FLOOR..0.0).contains(&min_eigenvalue) {
        min_eigenvalue = 0.0;
    }
    let passed = hermiticity_defect <= HERMITICITY_TOL
        && trace_defect <= TRACE_TOL
        && min_eigenvalue >= -EIGEN_FLOOR;
    ValidationReport { hermiticity_defect, trace_defect, min_eigenvalue, passed }
}

/// Hermitian, unit-trace, positive semidefinite operator on a labeled register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    register: Register,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix, register: Register) -> Result<Self> {
        if matrix.nrows() != register.dim() || matrix.ncols() != register.dim() {
            return Err(Error::DimensionMismatch { expected: register.dim(), got: matrix.nrows() });
        }
        let report = validate_matrix(&matrix);
        if !report.passed {
            return Err(Error::InvalidState(report));
        }
        Ok(DensityOperator { matrix, register })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_parts(matrix: CMatrix, register: Register) -> Self {
        debug_assert_eq!(matrix.nrows(), register.dim());
        DensityOperator { matrix, register }
    }

    /// `|k><k|`.
    pub fn from_pure(k: &Ket) -> Self {
        let a = k.amplitudes();
        DensityOperator::from_parts(a * a.adjoint(), k.register().clone())
    }

    pub fn maximally_mixed(register: Register) -> Self {
        let d = register.dim();
        DensityOperator::from_parts(CMatrix::identity(d, d) / C64::new(d as f64, 0.0), register)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn n_qubits(&self) -> usize {
        self.register.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_matrix(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Kronecker product; the register is the concatenation.
    pub fn tensor_product(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let register = self.register.concat(&other.register)?;
        Ok(DensityOperator::from_parts(linalg::kron(&self.matrix, &other.matrix), register))
    }

    /// Reduced state on `keep`, whose labels end up in register order.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<DensityOperator> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mask = self.register.mask(keep)?;
        let kept = self.register.labels_of_mask(mask);
        let positions = self.register.positions(&kept)?;
        let m = self.reduced_matrix(&positions);
        Ok(DensityOperator::from_parts(m, Register::new(kept)?))
    }

    /// Reduced matrix on the listed register positions, with the tensor
    /// factors in exactly the listed order.
    pub(crate) fn reduced_matrix(&self, positions: &[usize]) -> CMatrix {
        reduce(&self.matrix, self.n_qubits(), positions)
    }

    /// Reorders tensor factors so the register reads `order`; each label
    /// keeps its qubit.
    pub fn permuted(&self, order: &[QubitLabel]) -> Result<DensityOperator> {
        if order.len() != self.n_qubits() {
            return Err(Error::RegisterMismatch("permutation must list every label".into()));
        }
        let positions = self.register.positions(order)?;
        let register = Register::new(order.to_vec())?;
        Ok(DensityOperator::from_parts(self.reduced_matrix(&positions), register))
    }

    /// Same matrix, new labels.
    pub fn relabeled(&self, register: Register) -> Result<DensityOperator> {
        if register.len() != self.n_qubits() {
            return Err(Error::RegisterMismatch(format!(
                "expected {} labels, got {}",
                self.n_qubits(),
                register.len()
            )));
        }
        Ok(DensityOperator::from_parts(self.matrix.clone(), register))
    }

    /// `U rho U^dagger` for a full-register unitary.
    pub fn conjugated(&self, u: &CMatrix) -> Result<DensityOperator> {
        if u.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.nrows() });
        }
        Ok(DensityOperator::from_parts(u * &self.matrix * u.adjoint(), self.register.clone()))
    }

    /// Applies a 2x2 unitary to one qubit.
    pub fn apply_local_unitary(&self, target: &QubitLabel, u: &CMatrix) -> Result<DensityOperator> {
        let full = embed_single(u, self.register.position(target).ok_or_else(|| {
            Error::UnknownLabel(target.to_string())
        })?, self.n_qubits());
        self.conjugated(&full)
    }

    pub fn to_json(&self) -> StateJson {
        let d = self.dim();
        let mut re = vec![vec![0.0; d]; d];
        let mut im = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                re[i][j] = self.matrix[(i, j)].re;
                im[i][j] = self.matrix[(i, j)].im;
            }
        }
        StateJson {
            register: self.register.labels().iter().map(|l| l.to_string()).collect(),
            matrix_re: re,
            matrix_im: im,
        }
    }

    pub fn from_json(doc: &StateJson) -> Result<DensityOperator> {
        let (m, register) = doc.parts()?;
        DensityOperator::new(m, register)
    }
}

/// Convex combination of states on identical registers.
pub fn mix(weights: &[f64], states: &[DensityOperator]) -> Result<DensityOperator> {
    if weights.len() != states.len() || states.is_empty() {
        return Err(Error::DimensionMismatch { expected: states.len(), got: weights.len() });
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| *w < 0.0 || !w.is_finite()) || (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidWeights(sum));
    }
    let register = states[0].register.clone();
    let d = register.dim();
    let mut m = CMatrix::zeros(d, d);
    for (w, s) in weights.iter().zip(states) {
        if s.register != register {
            return Err(Error::RegisterMismatch(format!(
                "{:?} vs {:?}",
                register.labels(),
                s.register.labels()
            )));
        }
        m += &s.matrix * C64::new(*w, 0.0);
    }
    Ok(DensityOperator::from_parts(m, register))
}

/// On-disk JSON form of a density operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub register: Vec<String>,
    pub matrix_re: Vec<Vec<f64>>,
    pub matrix_im: Vec<Vec<f64>>,
}

impl StateJson {
    fn parts(&self) -> Result<(CMatrix, Register)> {
        let register = Register::new(self.register.iter().map(|s| QubitLabel::new(s.as_str())).collect())?;
        let d = register.dim();
        for rows in [&self.matrix_re, &self.matrix_im] {
            if rows.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: rows.len() });
            }
            if let Some(r) = rows.iter().find(|r| r.len() != d) {
                return Err(Error::DimensionMismatch { expected: d, got: r.len() });
            }
        }
        Ok((CMatrix::from_fn(d, d, |i, j| C64::new(self.matrix_re[i][j], self.matrix_im[i][j])), register))
    }

    /// Diagnostics for the stored matrix, without requiring it to pass.
    pub fn validate(&self) -> Result<ValidationReport> {
        Ok(validate_matrix(&self.parts()?.0))
    }
}

/// Reduced matrix of an `n`-qubit operator on `positions`, factors in listed order.
pub(crate) fn reduce(m: &CMatrix, n: usize, positions: &[usize]) -> CMatrix {
    let k = positions.len();
    let mut kept_mask = 0usize;
    for &p in positions {
        kept_mask |= 1 << (n - 1 - p);
    }
    let keep_offsets: Vec<usize> = (0..1usize << k)
        .map(|a| {
            let mut idx = 0;
            for (slot, &p) in positions.iter().enumerate() {
                if a & (1 << (k - 1 - slot)) != 0 {
                    idx |= 1 << (n - 1 - p);
                }
            }
            idx
        })
        .collect();
    let traced_bits: Vec<usize> = (0..n).map(|b| 1 << b).filter(|bit| kept_mask & bit == 0).collect();
    let trace_offsets: Vec<usize> = (0..1usize << traced_bits.len())
        .map(|t| {
            traced_bits
                .iter()
                .enumerate()
                .filter(|(i, _)| t & (1 << i) != 0)
                .fold(0, |acc, (_, bit)| acc | bit)
        })
        .collect();
    let dk = 1 << k;
    let mut out = CMatrix::from_element(dk, dk, ZERO);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = ZERO;
            for &t in &trace_offsets {
                acc += m[(keep_offsets[a] | t, keep_offsets[b] | t)];
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// `I (x) .. (x) u (x) .. (x) I` with `u` on `position` of an `n`-qubit register.
pub fn embed_single(u: &CMatrix, position: usize, n: usize) -> CMatrix {
    let left = linalg::identity(1 << position);
    let right = linalg::identity(1 << (n - 1 - position));
    linalg::kron(&linalg::kron(&left, u), &right)
}
