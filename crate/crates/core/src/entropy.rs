//! Von Neumann and relative entropies, in bits.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qformalism::{DensityOperator, QubitLabel};

/// Eigenvalues at or below this are exact zeros for entropy sums and support tests.
pub const ZERO_EIGENVALUE: f64 = 1e-12;
/// Minimum squared projection of a support vector onto the reference support.
pub const SUPPORT_TOL: f64 = 1e-9;

/// `-sum p log2 p` over a spectrum, with `0 log 0 = 0`.
pub fn shannon_bits<I: IntoIterator<Item = f64>>(spectrum: I) -> f64 {
    spectrum
        .into_iter()
        .filter(|p| *p > ZERO_EIGENVALUE)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Entropy of a Hermitian PSD matrix (trace assumed 1).
pub(crate) fn matrix_entropy(m: &CMatrix) -> f64 {
    shannon_bits(linalg::hermitian_eigenvalues(m))
}

pub fn von_neumann(r: &DensityOperator) -> f64 {
    matrix_entropy(r.matrix())
}

/// `S(subset) = S(tr_rest r)`.
pub fn subsystem_entropy(r: &DensityOperator, subset: &[QubitLabel]) -> Result<f64> {
    if subset.is_empty() {
        return Ok(0.0);
    }
    Ok(von_neumann(&r.partial_trace(subset)?))
}

/// Entropy of the subsystem selected by a register bitmask; the empty mask is 0.
pub(crate) fn mask_entropy(r: &DensityOperator, mask: u32) -> f64 {
    if mask == 0 {
        return 0.0;
    }
    let positions: Vec<usize> = (0..r.n_qubits()).filter(|p| mask & (1 << p) != 0).collect();
    matrix_entropy(&r.reduced_matrix(&positions))
}

/// `S(r||s) = tr r (log2 r - log2 s)`; `+inf` when `supp r` is not inside `supp s`.
pub fn relative_entropy(r: &DensityOperator, s: &DensityOperator) -> Result<f64> {
    if r.register() != s.register() {
        return Err(Error::RegisterMismatch(format!(
            "{:?} vs {:?}",
            r.register().labels(),
            s.register().labels()
        )));
    }
    let (rv, rvec) = linalg::hermitian_eigen(r.matrix());
    let (sv, svec) = linalg::hermitian_eigen(s.matrix());
    let mut value = 0.0;
    for (i, &lambda) in rv.iter().enumerate() {
        if lambda <= ZERO_EIGENVALUE {
            continue;
        }
        let ri = rvec.column(i);
        let mut in_support = 0.0;
        let mut cross = 0.0;
        for (j, &mu) in sv.iter().enumerate() {
            if mu <= ZERO_EIGENVALUE {
                continue;
            }
            let overlap = ri.dotc(&svec.column(j)).norm_sqr();
            in_support += overlap;
            cross += overlap * mu.log2();
        }
        if in_support < 1.0 - SUPPORT_TOL {
            return Ok(f64::INFINITY);
        }
        value += lambda * (lambda.log2() - cross);
    }
    Ok(value)
}
