//! Rank-one projective measurements on qubit subsets.
//!
//! A basis on `m` qubits is a set of `2^m` orthonormal vectors; each vector
//! `v` defines the projector `|v><v|`. For optimization a basis is generated
//! from real parameters: two Bloch angles for one qubit, and the `4^m` real
//! entries of a Hermitian generator `H` (with `U = exp(iH)`) for `m >= 2`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::entropy;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ZERO};
use crate::qformalism::{reduce, DensityOperator, QubitLabel, Register};

/// Completeness and orthogonality tolerance for a basis.
pub const BASIS_TOL: f64 = 1e-10;
/// Outcomes less likely than this are dropped from an ensemble.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveBasis {
    subset: Vec<QubitLabel>,
    vectors: Vec<CVector>,
}

impl ProjectiveBasis {
    /// Builds a basis from explicit vectors, checking orthonormality.
    pub fn new(subset: Vec<QubitLabel>, vectors: Vec<CVector>) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let d = 1usize << subset.len();
        if vectors.len() != d || vectors.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: vectors.len() });
        }
        let b = ProjectiveBasis { subset, vectors };
        let defect = b.invariant_defect();
        if defect > BASIS_TOL {
            return Err(Error::Parse(format!("basis vectors are not orthonormal (defect {defect:e})")));
        }
        Ok(b)
    }

    pub fn computational(subset: Vec<QubitLabel>) -> Self {
        let d = 1usize << subset.len();
        let vectors = (0..d)
            .map(|i| {
                let mut v = CVector::from_element(d, ZERO);
                v[i] = linalg::ONE;
                v
            })
            .collect();
        ProjectiveBasis { subset, vectors }
    }

    /// Product of single-qubit `{|+>, |->}` bases.
    pub fn hadamard(subset: Vec<QubitLabel>) -> Self {
        let m = subset.len();
        basis_from_params(&subset, &BasisParams::hadamard(m)).expect("hadamard parameters have the right length")
    }

    pub fn subset(&self) -> &[QubitLabel] {
        &self.subset
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn projectors(&self) -> Vec<CMatrix> {
        self.vectors.iter().map(|v| v * v.adjoint()).collect()
    }

    /// Worst deviation from `sum P_i = I`, `P_i P_j = delta_ij P_i` and `tr P_i = 1`.
    pub fn invariant_defect(&self) -> f64 {
        let d = self.vectors.len();
        let projs = self.projectors();
        let mut sum = CMatrix::zeros(d, d);
        let mut worst = 0.0f64;
        for (i, p) in projs.iter().enumerate() {
            sum += p;
            worst = worst.max((linalg::trace(p) - linalg::ONE).norm());
            for (j, q) in projs.iter().enumerate() {
                let prod = p * q;
                let target = if i == j { p.clone() } else { CMatrix::zeros(d, d) };
                worst = worst.max(linalg::max_abs_diff(&prod, &target));
            }
        }
        worst.max(linalg::max_abs_diff(&sum, &linalg::identity(d)))
    }
}

/// Real optimization coordinates for a basis on `m` qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BasisParams(pub Vec<f64>);

impl BasisParams {
    /// Parameter count for an `m`-qubit basis.
    pub fn len_for(m: usize) -> usize {
        if m == 1 {
            2
        } else {
            1 << (2 * m)
        }
    }

    /// The all-zero point: the computational basis for every `m`.
    pub fn zeros(m: usize) -> Self {
        BasisParams(vec![0.0; Self::len_for(m)])
    }

    /// Coordinates of the product Hadamard basis.
    ///
    /// For `m >= 2` the generator is `(pi/2)(I - H^{(x)m})`, whose exponential
    /// is `H^{(x)m}` itself since that operator squares to the identity.
    pub fn hadamard(m: usize) -> Self {
        if m == 1 {
            return BasisParams(vec![PI / 2.0, 0.0]);
        }
        let h1 = CMatrix::from_row_slice(
            2,
            2,
            &[linalg::ONE, linalg::ONE, linalg::ONE, -linalg::ONE],
        ) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut hm = h1.clone();
        for _ in 1..m {
            hm = linalg::kron(&hm, &h1);
        }
        let d = hm.nrows();
        let g = (linalg::identity(d) - hm) * C64::new(PI / 2.0, 0.0);
        BasisParams(generator_to_params(&g))
    }

    /// Box for random starts and grid search: `theta in [0, pi]`,
    /// `phi in [0, 2pi)`, generator entries in `[-pi, pi]`.
    pub fn bounds(m: usize) -> Vec<(f64, f64)> {
        if m == 1 {
            vec![(0.0, PI), (0.0, 2.0 * PI)]
        } else {
            vec![(-PI, PI); Self::len_for(m)]
        }
    }
}

/// Which bases a multi-qubit conditioning subset may use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisFamily {
    /// Any orthonormal basis of the subset, entangled ones included.
    #[default]
    Joint,
    /// Tensor products of single-qubit bases, two angles per qubit.
    Product,
}

impl BasisFamily {
    pub fn param_len(self, m: usize) -> usize {
        match self {
            BasisFamily::Joint => BasisParams::len_for(m),
            BasisFamily::Product => 2 * m,
        }
    }

    pub fn hadamard(self, m: usize) -> BasisParams {
        match self {
            BasisFamily::Joint => BasisParams::hadamard(m),
            BasisFamily::Product => BasisParams([PI / 2.0, 0.0].repeat(m)),
        }
    }

    pub fn bounds(self, m: usize) -> Vec<(f64, f64)> {
        match self {
            BasisFamily::Joint => BasisParams::bounds(m),
            BasisFamily::Product => BasisParams::bounds(1).repeat(m),
        }
    }
}

/// Packs a Hermitian matrix as `[diag..., (re, im) of the strict upper triangle row by row]`.
fn generator_to_params(g: &CMatrix) -> Vec<f64> {
    let d = g.nrows();
    let mut p = Vec::with_capacity(d * d);
    for i in 0..d {
        p.push(g[(i, i)].re);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            p.push(g[(i, j)].re);
            p.push(g[(i, j)].im);
        }
    }
    p
}

fn params_to_generator(p: &[f64], d: usize) -> CMatrix {
    let mut h = CMatrix::from_element(d, d, ZERO);
    let mut k = 0;
    for i in 0..d {
        h[(i, i)] = C64::new(p[k], 0.0);
        k += 1;
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let z = C64::new(p[k], p[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

/// Basis vectors generated by `params` for an `m`-qubit subset. A vector of
/// `2m` entries (for `m >= 2`) is read as one angle pair per qubit.
pub(crate) fn basis_vectors(m: usize, params: &[f64]) -> Vec<CVector> {
    if m > 1 && params.len() == 2 * m {
        let mut out = vec![CVector::from_element(1, linalg::ONE)];
        for q in 0..m {
            let single = basis_vectors(1, &params[2 * q..2 * q + 2]);
            out = out.iter().flat_map(|v| single.iter().map(move |s| v.kronecker(s))).collect();
        }
        return out;
    }
    if m == 1 {
        let (theta, phi) = (params[0], params[1]);
        let (s, c) = (0.5 * theta).sin_cos();
        let e = C64::from_polar(1.0, phi);
        let a = CVector::from_vec(vec![C64::new(c, 0.0), e * s]);
        let b = CVector::from_vec(vec![-e.conj() * s, C64::new(c, 0.0)]);
        return vec![a, b];
    }
    let d = 1usize << m;
    let u = linalg::unitary_exp(&params_to_generator(params, d));
    (0..d).map(|j| u.column(j).into_owned()).collect()
}

pub fn basis_from_params(subset: &[QubitLabel], params: &BasisParams) -> Result<ProjectiveBasis> {
    let m = subset.len();
    if m == 0 {
        return Err(Error::EmptySubset);
    }
    let expected = BasisParams::len_for(m);
    if params.0.len() != expected && params.0.len() != BasisFamily::Product.param_len(m) {
        return Err(Error::ParamLength { qubits: m, expected, got: params.0.len() });
    }
    Ok(ProjectiveBasis { subset: subset.to_vec(), vectors: basis_vectors(m, &params.0) })
}

/// One basis per conditioning subset.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MeasurementAssignment {
    entries: BTreeMap<BTreeSet<QubitLabel>, ProjectiveBasis>,
}

impl MeasurementAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a basis keyed by its own subset, replacing any previous one.
    pub fn insert(&mut self, basis: ProjectiveBasis) {
        let key: BTreeSet<QubitLabel> = basis.subset().iter().cloned().collect();
        self.entries.insert(key, basis);
    }

    pub fn get(&self, subset: &[QubitLabel]) -> Option<&ProjectiveBasis> {
        let key: BTreeSet<QubitLabel> = subset.iter().cloned().collect();
        self.entries.get(&key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProjectiveBasis> {
        self.entries.values()
    }

    /// Computational bases on every listed subset.
    pub fn computational<'a>(subsets: impl IntoIterator<Item = &'a Vec<QubitLabel>>) -> Self {
        let mut a = Self::new();
        for s in subsets {
            a.insert(ProjectiveBasis::computational(s.clone()));
        }
        a
    }

    pub fn hadamard<'a>(subsets: impl IntoIterator<Item = &'a Vec<QubitLabel>>) -> Self {
        let mut a = Self::new();
        for s in subsets {
            a.insert(ProjectiveBasis::hadamard(s.clone()));
        }
        a
    }
}

/// Reduced state of `cond ++ target` arranged for repeated conditioning on
/// different bases of `cond`.
#[derive(Clone, Debug)]
pub(crate) struct ConditionalKernel {
    dc: usize,
    dt: usize,
    joint: CMatrix,
}

impl ConditionalKernel {
    /// `cond` and `target` are register positions; `cond` must follow the
    /// basis' qubit order.
    pub(crate) fn new(r: &DensityOperator, cond: &[usize], target: &[usize]) -> Self {
        let mut order = cond.to_vec();
        order.extend_from_slice(target);
        ConditionalKernel {
            dc: 1 << cond.len(),
            dt: 1 << target.len(),
            joint: reduce(r.matrix(), r.n_qubits(), &order),
        }
    }

    /// Unnormalized conditional block `(<v| (x) I) joint (|v> (x) I)`.
    fn block(&self, v: &CVector) -> CMatrix {
        let (dc, dt) = (self.dc, self.dt);
        let mut out = CMatrix::from_element(dt, dt, ZERO);
        for i in 0..dc {
            let vi = v[i].conj();
            if vi == ZERO {
                continue;
            }
            for j in 0..dc {
                let w = vi * v[j];
                if w == ZERO {
                    continue;
                }
                for a in 0..dt {
                    for b in 0..dt {
                        out[(a, b)] += w * self.joint[(i * dt + a, j * dt + b)];
                    }
                }
            }
        }
        out
    }

    pub(crate) fn ensemble(&self, vectors: &[CVector]) -> Vec<(f64, CMatrix)> {
        vectors
            .iter()
            .filter_map(|v| {
                let blk = self.block(v);
                let p = linalg::trace(&blk).re;
                (p >= MIN_OUTCOME_PROBABILITY).then(|| (p, blk / C64::new(p, 0.0)))
            })
            .collect()
    }

    /// `sum_i p_i S(rho_{target|i})`.
    pub(crate) fn entropy(&self, vectors: &[CVector]) -> f64 {
        vectors
            .iter()
            .map(|v| {
                let blk = self.block(v);
                let p = linalg::trace(&blk).re;
                if p < MIN_OUTCOME_PROBABILITY {
                    return 0.0;
                }
                // p * S(blk / p) = -sum l log l + p log p over the eigenvalues of blk.
                let mut acc = 0.0;
                for l in linalg::hermitian_eigenvalues(&blk) {
                    let q = l / p;
                    if q > entropy::ZERO_EIGENVALUE {
                        acc -= l * q.log2();
                    }
                }
                acc.max(0.0)
            })
            .sum()
    }
}

fn disjoint(a: &[QubitLabel], b: &[QubitLabel]) -> Result<()> {
    if let Some(x) = a.iter().find(|x| b.contains(x)) {
        return Err(Error::Overlap(x.to_string()));
    }
    Ok(())
}

/// Post-measurement ensemble `{(p_i, rho_{rest|i})}` for measuring `b` on its subset.
pub fn conditional_ensemble(r: &DensityOperator, b: &ProjectiveBasis) -> Result<Vec<(f64, DensityOperator)>> {
    let reg = r.register();
    let cond = reg.positions(b.subset())?;
    let cond_mask = reg.mask(b.subset())?;
    if cond_mask == reg.full_mask() {
        return Err(Error::MeasureWholeRegister);
    }
    let rest = reg.labels_of_mask(reg.full_mask() & !cond_mask);
    let target = reg.positions(&rest)?;
    let kernel = ConditionalKernel::new(r, &cond, &target);
    let rest_reg = Register::new(rest)?;
    Ok(kernel
        .ensemble(b.vectors())
        .into_iter()
        .map(|(p, m)| (p, DensityOperator::from_parts(m, rest_reg.clone())))
        .collect())
}

/// `S(target|cond) = sum_i p_i S(rho_{target|pi_i})` after tracing out the
/// rest of the register.
pub fn measured_conditional_entropy(
    r: &DensityOperator,
    target: &[QubitLabel],
    cond: &[QubitLabel],
    b: &ProjectiveBasis,
) -> Result<f64> {
    if target.is_empty() || cond.is_empty() {
        return Err(Error::EmptySubset);
    }
    disjoint(target, cond)?;
    let reg = r.register();
    if reg.mask(cond)? != reg.mask(b.subset())? {
        return Err(Error::RegisterMismatch("basis subset differs from the conditioning subset".into()));
    }
    let target = reg.in_register_order(target)?;
    let kernel = ConditionalKernel::new(r, &reg.positions(b.subset())?, &reg.positions(&target)?);
    Ok(kernel.entropy(b.vectors()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qformalism::{labels, mix, Ket};
    use approx::assert_abs_diff_eq;

    fn reg(n: &[&str]) -> Register {
        Register::from_names(n).unwrap()
    }

    fn ghz3() -> DensityOperator {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CVector::from_element(8, ZERO);
        v[0] = C64::new(h, 0.0);
        v[7] = C64::new(h, 0.0);
        DensityOperator::from_pure(&Ket::new(v, reg(&["x", "y", "z"])).unwrap())
    }

    #[test]
    fn single_qubit_params() {
        let z = labels(&["z"]);
        let comp = basis_from_params(&z, &BasisParams(vec![0.0, 0.0])).unwrap();
        let p = comp.projectors();
        assert_abs_diff_eq!(p[0][(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1][(1, 1)].re, 1.0, epsilon = 1e-15);
        let had = basis_from_params(&z, &BasisParams(vec![PI / 2.0, 0.0])).unwrap();
        let p = had.projectors();
        for e in p[0].iter() {
            assert_abs_diff_eq!(e.re, 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(p[1][(0, 1)].re, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn two_qubit_zero_params_is_computational() {
        let b = basis_from_params(&labels(&["y", "z"]), &BasisParams::zeros(2)).unwrap();
        for (i, v) in b.vectors().iter().enumerate() {
            for (k, z) in v.iter().enumerate() {
                assert_abs_diff_eq!(z.norm(), if i == k { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn hadamard_generator_reproduces_product_basis() {
        let b = ProjectiveBasis::hadamard(labels(&["y", "z"]));
        assert!(b.invariant_defect() < 1e-12);
        // |++> is one of the vectors up to phase.
        let found = b
            .vectors()
            .iter()
            .any(|v| v.iter().all(|z| (z.norm() - 0.5).abs() < 1e-12) && (v[0] - v[3]).norm() < 1e-12 && (v[0] - v[1]).norm() < 1e-12);
        assert!(found);
    }

    #[test]
    fn product_family_matches_hadamard_basis() {
        let subset = labels(&["y", "z"]);
        let b = basis_from_params(&subset, &BasisFamily::Product.hadamard(2)).unwrap();
        assert!(b.invariant_defect() < 1e-12);
        let joint = ProjectiveBasis::hadamard(subset);
        for v in b.vectors() {
            let hits = joint.vectors().iter().filter(|u| (u.dotc(v).norm() - 1.0).abs() < 1e-12).count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn wrong_param_length() {
        let err = basis_from_params(&labels(&["x"]), &BasisParams(vec![0.0; 3])).unwrap_err();
        assert!(matches!(err, Error::ParamLength { expected: 2, got: 3, .. }));
    }

    #[test]
    fn ghz_computational_conditioning() {
        let g = ghz3();
        let ens = conditional_ensemble(&g, &ProjectiveBasis::computational(labels(&["z"]))).unwrap();
        assert_eq!(ens.len(), 2);
        assert_abs_diff_eq!(ens[0].0, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ens[0].1.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ens[1].1.matrix()[(3, 3)].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn ghz_hadamard_conditioning_gives_bell_states() {
        let g = ghz3();
        let ens = conditional_ensemble(&g, &ProjectiveBasis::hadamard(labels(&["z"]))).unwrap();
        assert_eq!(ens.len(), 2);
        for (p, s) in &ens {
            assert_abs_diff_eq!(*p, 0.5, epsilon = 1e-14);
            assert_abs_diff_eq!(s.purity(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(s.matrix()[(0, 3)].norm(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn measuring_everything_is_rejected() {
        let g = ghz3();
        let b = ProjectiveBasis::computational(labels(&["x", "y", "z"]));
        assert!(matches!(conditional_ensemble(&g, &b), Err(Error::MeasureWholeRegister)));
    }

    #[test]
    fn product_state_conditionals_ignore_basis() {
        let s = DensityOperator::from_pure(&Ket::from_symbols("0+", reg(&["x", "y"])).unwrap());
        let b = basis_from_params(&labels(&["y"]), &BasisParams(vec![1.1, 0.4])).unwrap();
        for (_, c) in conditional_ensemble(&s, &b).unwrap() {
            assert_abs_diff_eq!(c.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ghz_measured_conditional_entropies() {
        let g = ghz3();
        let z = labels(&["z"]);
        let comp = ProjectiveBasis::computational(z.clone());
        let had = ProjectiveBasis::hadamard(z.clone());
        let x = labels(&["x"]);
        let xy = labels(&["x", "y"]);
        assert_abs_diff_eq!(measured_conditional_entropy(&g, &x, &z, &comp).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(measured_conditional_entropy(&g, &x, &z, &had).unwrap(), 1.0, epsilon = 1e-12);
        for b in [&comp, &had] {
            assert_abs_diff_eq!(measured_conditional_entropy(&g, &xy, &z, b).unwrap(), 0.0, epsilon = 1e-12);
        }
        let rnd = basis_from_params(&z, &BasisParams(vec![0.7, 2.2])).unwrap();
        assert_abs_diff_eq!(measured_conditional_entropy(&g, &xy, &z, &rnd).unwrap(), 0.0, epsilon = 1e-12);
        assert!(matches!(
            measured_conditional_entropy(&g, &xy, &labels(&["y"]), &ProjectiveBasis::computational(labels(&["y"]))),
            Err(Error::Overlap(_))
        ));
    }

    #[test]
    fn classical_mixture_reconstructs_marginal() {
        let s = mix(
            &[0.3, 0.7],
            &[
                DensityOperator::from_pure(&Ket::from_symbols("+0", reg(&["x", "y"])).unwrap()),
                DensityOperator::from_pure(&Ket::from_symbols("01", reg(&["x", "y"])).unwrap()),
            ],
        )
        .unwrap();
        let b = basis_from_params(&labels(&["y"]), &BasisParams(vec![0.9, 1.3])).unwrap();
        let ens = conditional_ensemble(&s, &b).unwrap();
        let total: f64 = ens.iter().map(|(p, _)| p).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        let mut avg = CMatrix::zeros(2, 2);
        for (p, c) in &ens {
            avg += c.matrix() * C64::new(*p, 0.0);
        }
        let marginal = s.partial_trace(&labels(&["x"])).unwrap();
        assert!(linalg::max_abs_diff(&avg, marginal.matrix()) < 1e-12);
    }
}
