//! Random states and bases shared by the property suites.
#![allow(dead_code)]

use dissension_core::measurement::basis_from_params;
use dissension_core::states::{ginibre_mixed, haar_pure, random_unitary2};
use dissension_core::{BasisParams, DensityOperator, MeasurementAssignment, QubitLabel, Register};
use proptest::test_runner::Config;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 200;

pub fn config() -> Config {
    Config { cases: CASES, ..Config::default() }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every third seed gives a pure state, the rest Hilbert-Schmidt mixed ones.
pub fn random_state(n: usize, seed: u64) -> DensityOperator {
    let mut g = rng(seed);
    if seed.is_multiple_of(3) {
        haar_pure(n, &mut g)
    } else {
        ginibre_mixed(n, &mut g)
    }
}

pub fn random_params<R: Rng>(m: usize, g: &mut R) -> BasisParams {
    BasisParams(BasisParams::bounds(m).into_iter().map(|(lo, hi)| g.random_range(lo..hi)).collect())
}

pub fn random_assignment<R: Rng>(subsets: &[Vec<QubitLabel>], g: &mut R) -> MeasurementAssignment {
    let mut a = MeasurementAssignment::new();
    for s in subsets {
        a.insert(basis_from_params(s, &random_params(s.len(), g)).expect("params match the subset size"));
    }
    a
}

/// Moves every qubit one step along the register: the qubit called `x`
/// becomes `y`, ..., and the last one becomes `x`.
pub fn cycled(r: &DensityOperator) -> DensityOperator {
    let canonical = Register::canonical(r.n_qubits());
    let mut shifted = canonical.labels()[1..].to_vec();
    shifted.push(canonical.labels()[0].clone());
    r.relabeled(Register::new(shifted).unwrap()).unwrap().permuted(canonical.labels()).unwrap()
}

/// Label that `cycled` gives to `label`.
pub fn cycled_label(label: &str, n: usize) -> String {
    let canonical = Register::canonical(n);
    let i = canonical.labels().iter().position(|l| l.name() == label).unwrap();
    canonical.labels()[(i + 1) % n].to_string()
}

pub fn random_local_unitaries(r: &DensityOperator, seed: u64) -> DensityOperator {
    let mut g = rng(seed);
    let mut out = r.clone();
    for l in r.register().labels().to_vec() {
        out = out.apply_local_unitary(&l, &random_unitary2(&mut g)).unwrap();
    }
    out
}
