//! Single-qubit channels in Kraus form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ONE, ZERO};
use crate::qformalism::{embed_single, DensityOperator, QubitLabel};

/// Completeness and unitality tolerance.
pub const KRAUS_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<CMatrix>,
}

impl KrausChannel {
    /// Checks `sum E_i^dagger E_i = I`.
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::IncompleteKraus(1.0));
        }
        if let Some(bad) = operators.iter().find(|e| e.nrows() != 2 || e.ncols() != 2) {
            return Err(Error::DimensionMismatch { expected: 2, got: bad.nrows() });
        }
        let sum = operators.iter().fold(CMatrix::zeros(2, 2), |acc, e| acc + e.adjoint() * e);
        let defect = linalg::max_abs_diff(&sum, &linalg::identity(2));
        if defect > KRAUS_TOL {
            return Err(Error::IncompleteKraus(defect));
        }
        Ok(KrausChannel { operators })
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn identity() -> Self {
        KrausChannel { operators: vec![linalg::identity(2)] }
    }

    /// `{sqrt(1-q) I, sqrt(q) Z}`.
    pub fn phase_flip(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::ParamOutOfRange { name: "q".into(), reason: "must lie in [0, 1]".into() });
        }
        let a = C64::new((1.0 - q).sqrt(), 0.0);
        let b = C64::new(q.sqrt(), 0.0);
        Ok(KrausChannel {
            operators: vec![
                CMatrix::from_row_slice(2, 2, &[a, ZERO, ZERO, a]),
                CMatrix::from_row_slice(2, 2, &[b, ZERO, ZERO, -b]),
            ],
        })
    }

    /// `{|0><0|, |n><1|}` with `|n> = (|0> + n|1>)/sqrt(1 + n^2)`.
    pub fn nonunital(n: f64) -> Result<Self> {
        if !n.is_finite() {
            return Err(Error::ParamOutOfRange { name: "n".into(), reason: "must be finite".into() });
        }
        let norm = (1.0 + n * n).sqrt();
        let (a, b) = (C64::new(1.0 / norm, 0.0), C64::new(n / norm, 0.0));
        Ok(KrausChannel {
            operators: vec![
                CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]),
                CMatrix::from_row_slice(2, 2, &[ZERO, a, ZERO, b]),
            ],
        })
    }

    /// Whether `sum E_i E_i^dagger = I`, with the entrywise defect.
    pub fn is_unital(&self) -> (bool, f64) {
        let sum = self.operators.iter().fold(CMatrix::zeros(2, 2), |acc, e| acc + e * e.adjoint());
        let defect = linalg::max_abs_diff(&sum, &linalg::identity(2));
        (defect <= KRAUS_TOL, defect)
    }

    pub fn to_json(&self) -> ChannelJson {
        let part = |e: &CMatrix, f: fn(&C64) -> f64| -> [[f64; 2]; 2] {
            [[f(&e[(0, 0)]), f(&e[(0, 1)])], [f(&e[(1, 0)]), f(&e[(1, 1)])]]
        };
        ChannelJson {
            operators: self
                .operators
                .iter()
                .map(|e| KrausJson { re: part(e, |z| z.re), im: part(e, |z| z.im) })
                .collect(),
        }
    }

    pub fn from_json(doc: &ChannelJson) -> Result<Self> {
        let ops = doc
            .operators
            .iter()
            .map(|k| CMatrix::from_fn(2, 2, |i, j| C64::new(k.re[i][j], k.im[i][j])))
            .collect();
        KrausChannel::new(ops)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausJson {
    pub re: [[f64; 2]; 2],
    pub im: [[f64; 2]; 2],
}

/// JSON form: a list of 2x2 complex matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub operators: Vec<KrausJson>,
}

/// `sum_i (I (x) E_i (x) I) r (I (x) E_i (x) I)^dagger` on `target`.
pub fn apply_local(r: &DensityOperator, target: &QubitLabel, ch: &KrausChannel) -> Result<DensityOperator> {
    let pos = r.register().position(target).ok_or_else(|| Error::UnknownLabel(target.to_string()))?;
    let n = r.n_qubits();
    let d = r.dim();
    let mut out = CMatrix::zeros(d, d);
    for e in &ch.operators {
        let full = embed_single(e, pos, n);
        out += &full * r.matrix() * full.adjoint();
    }
    DensityOperator::new(out, r.register().clone())
}
