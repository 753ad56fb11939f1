//! Bipartite and multivariate quantum mutual informations.
//!
//! Parts of a [`Partition`] may hold several qubits; each part is treated
//! as one composite variable in every subset sum.

use std::collections::HashMap;

use crate::entropy::mask_entropy;
use crate::error::{Error, Result};
use crate::measurement::{measured_conditional_entropy, ProjectiveBasis};
use crate::qformalism::{DensityOperator, QubitLabel, Register};

/// Ordered list of disjoint, nonempty parts covering a register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<Vec<QubitLabel>>,
    masks: Vec<u32>,
}

impl Partition {
    pub fn new(register: &Register, parts: Vec<Vec<QubitLabel>>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidPartition("at least two parts are required".into()));
        }
        let mut seen = 0u32;
        let mut masks = Vec::with_capacity(parts.len());
        for part in &parts {
            if part.is_empty() {
                return Err(Error::InvalidPartition("empty part".into()));
            }
            let m = register.mask(part)?;
            if seen & m != 0 {
                let dup = register.labels_of_mask(seen & m);
                return Err(Error::Overlap(dup[0].to_string()));
            }
            seen |= m;
            masks.push(m);
        }
        if seen != register.full_mask() {
            let missing = register.labels_of_mask(register.full_mask() & !seen);
            return Err(Error::InvalidPartition(format!("parts do not cover {:?}", missing)));
        }
        Ok(Partition { parts, masks })
    }

    /// One part per qubit, in register order.
    pub fn singletons(register: &Register) -> Self {
        let parts: Vec<Vec<QubitLabel>> = register.labels().iter().map(|l| vec![l.clone()]).collect();
        Partition::new(register, parts).expect("a register of two or more qubits splits into singletons")
    }

    pub fn parts(&self) -> &[Vec<QubitLabel>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Register mask of the union of the parts selected by `selector` (bit `i` = part `i`).
    fn union_mask(&self, selector: usize) -> u32 {
        self.masks
            .iter()
            .enumerate()
            .filter(|(i, _)| selector & (1 << i) != 0)
            .fold(0, |acc, (_, m)| acc | m)
    }
}

/// Joint entropies memoized by register mask for the duration of one evaluation.
pub(crate) struct JointEntropies<'a> {
    state: &'a DensityOperator,
    cache: HashMap<u32, f64>,
}

impl<'a> JointEntropies<'a> {
    pub(crate) fn new(state: &'a DensityOperator) -> Self {
        JointEntropies { state, cache: HashMap::new() }
    }

    pub(crate) fn get(&mut self, mask: u32) -> f64 {
        let state = self.state;
        *self.cache.entry(mask).or_insert_with(|| mask_entropy(state, mask))
    }
}

/// Nonempty selectors over `k` parts, grouped by size then lexicographic.
fn selectors_by_size(k: usize) -> Vec<Vec<usize>> {
    let mut by_size = vec![Vec::new(); k + 1];
    for s in 1..(1usize << k) {
        by_size[s.count_ones() as usize].push(s);
    }
    for group in by_size.iter_mut() {
        group.sort_by_key(|s| (0..k).map(|i| if s & (1 << i) != 0 { 0 } else { 1 }).collect::<Vec<_>>());
    }
    by_size
}

fn check_bipartition(r: &DensityOperator, a: &[QubitLabel], b: &[QubitLabel]) -> Result<Partition> {
    Partition::new(r.register(), vec![a.to_vec(), b.to_vec()])
}

/// `I(a:b) = S(a) + S(b) - S(ab)`.
pub fn bipartite_mi(r: &DensityOperator, a: &[QubitLabel], b: &[QubitLabel]) -> Result<f64> {
    let p = check_bipartition(r, a, b)?;
    let mut s = JointEntropies::new(r);
    Ok(s.get(p.masks[0]) + s.get(p.masks[1]) - s.get(p.masks[0] | p.masks[1]))
}

/// Which side(s) of a bipartite measured mutual information are measured.
#[derive(Clone, Copy, Debug)]
pub enum MeasuredSide<'a> {
    /// `I_Y = S(a) - S(a|b)`, basis on `b`.
    OnB(&'a ProjectiveBasis),
    /// `I_X = S(b) - S(b|a)`, basis on `a`.
    OnA(&'a ProjectiveBasis),
    /// `I_a = S(ab) - S(a|b) - S(b|a)`, bases on `a` and `b`.
    Both { on_a: &'a ProjectiveBasis, on_b: &'a ProjectiveBasis },
}

pub fn measured_bipartite_mi(
    r: &DensityOperator,
    a: &[QubitLabel],
    b: &[QubitLabel],
    side: MeasuredSide<'_>,
) -> Result<f64> {
    let p = check_bipartition(r, a, b)?;
    let mut s = JointEntropies::new(r);
    Ok(match side {
        MeasuredSide::OnB(basis) => s.get(p.masks[0]) - measured_conditional_entropy(r, a, b, basis)?,
        MeasuredSide::OnA(basis) => s.get(p.masks[1]) - measured_conditional_entropy(r, b, a, basis)?,
        MeasuredSide::Both { on_a, on_b } => {
            s.get(p.masks[0] | p.masks[1])
                - measured_conditional_entropy(r, a, b, on_b)?
                - measured_conditional_entropy(r, b, a, on_a)?
        }
    })
}

/// Alternating sum of joint entropies over all nonempty part subsets.
pub fn interaction_information(r: &DensityOperator, parts: &Partition) -> f64 {
    let mut s = JointEntropies::new(r);
    interaction_information_with(&mut s, parts)
}

pub(crate) fn interaction_information_with(s: &mut JointEntropies<'_>, parts: &Partition) -> f64 {
    let mut total = 0.0;
    for (size, group) in selectors_by_size(parts.len()).iter().enumerate().skip(1) {
        let sign = if size % 2 == 1 { 1.0 } else { -1.0 };
        for &sel in group {
            total += sign * s.get(parts.union_mask(sel));
        }
    }
    total
}

/// `sum_i S(part_i) - S(all)`.
pub fn total_correlation(r: &DensityOperator, parts: &Partition) -> f64 {
    let mut s = JointEntropies::new(r);
    let singles: f64 = parts.masks.iter().map(|m| s.get(*m)).sum();
    singles - s.get(parts.union_mask((1 << parts.len()) - 1))
}

/// `sum_i S(all but part_i) - (n-1) S(all)`.
pub fn binding_information(r: &DensityOperator, parts: &Partition) -> f64 {
    let mut s = JointEntropies::new(r);
    let all = parts.union_mask((1 << parts.len()) - 1);
    let leave_one_out: f64 = parts.masks.iter().map(|m| s.get(all & !m)).sum();
    leave_one_out - (parts.len() as f64 - 1.0) * s.get(all)
}

/// `I(a:b|c) = S(a|c) + S(b|c) - S(ab|c)` with a measurement on `c`.
pub fn measured_conditional_mi(
    r: &DensityOperator,
    a: &[QubitLabel],
    b: &[QubitLabel],
    c: &[QubitLabel],
    basis: &ProjectiveBasis,
) -> Result<f64> {
    Partition::new(r.register(), vec![a.to_vec(), b.to_vec(), c.to_vec()])?;
    let mut ab = a.to_vec();
    ab.extend_from_slice(b);
    Ok(measured_conditional_entropy(r, a, c, basis)? + measured_conditional_entropy(r, b, c, basis)?
        - measured_conditional_entropy(r, &ab, c, basis)?)
}
