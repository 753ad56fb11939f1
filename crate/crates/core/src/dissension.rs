//! Conditioned mutual informations, dissension functions and their optima.
//!
//! For a party order `o = (x_1, ..., x_n)` and `m` measured parties, the
//! Track-I expression is
//!
//! ```text
//! sum_{k<m} (-1)^{k-1} sum_{|A|=k} S(A)
//!   + (-1)^{m-1} sum_{|B|=m, x_1 in B} S(B)
//!   + sum_{p>m} (-1)^{p-1} sum_{|P|=p} S(first p-m of P | last m of P)
//! ```
//!
//! with subsets read in `o` order. Track-II replaces each `S(B)` of the middle
//! sum by `S(B c) - S(c|B)`. For `m = 1`, `c` is the party following the last
//! member of `B` in `o` (or, when `B` holds `x_n`, the earliest party after
//! `x_1` missing from `B`); for `m >= 2` it is every party outside `B`. The dissension function is `(-1)^n (I_0 - I_m^t)`, minimized over one
//! projective basis per distinct conditioning subset.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::entropy::mask_entropy;
use crate::error::{Error, Result};
use crate::measurement::{
    basis_from_params, basis_vectors, measured_conditional_entropy, BasisFamily, BasisParams, ConditionalKernel,
    MeasurementAssignment,
};
use crate::mutualinfo::{interaction_information_with, JointEntropies, Partition};
use crate::optim::{minimize, OptimizerConfig};
use crate::qformalism::{DensityOperator, QubitLabel, Register};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Track {
    One,
    Two,
}

impl TryFrom<u8> for Track {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Track::One),
            2 => Ok(Track::Two),
            _ => Err(Error::Parse(format!("track must be 1 or 2, got {v}"))),
        }
    }
}

impl From<Track> for u8 {
    fn from(t: Track) -> u8 {
        match t {
            Track::One => 1,
            Track::Two => 2,
        }
    }
}

impl fmt::Display for Track {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

/// Which dissension to compute: measured-party count, track and anchor party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DissensionSpec {
    register: Register,
    m: usize,
    track: Track,
    anchor: Option<QubitLabel>,
    family: BasisFamily,
}

impl DissensionSpec {
    /// `anchor` must be `None` exactly for the symmetric Track-II `m = n - 1` case.
    pub fn new(register: Register, m: usize, track: Track, anchor: Option<QubitLabel>) -> Result<Self> {
        let n = register.len();
        if n < 2 {
            return Err(Error::Unsupported("at least two parties are required".into()));
        }
        if m == 0 || m >= n {
            return Err(Error::Unsupported(format!("m = {m} is outside 1..{n}")));
        }
        let symmetric = is_symmetric(n, m, track);
        match &anchor {
            Some(a) if symmetric => {
                return Err(Error::Unsupported(format!("Track-II with m = n - 1 has no anchor (got `{a}`)")))
            }
            Some(a) if register.position(a).is_none() => return Err(Error::UnknownLabel(a.to_string())),
            None if !symmetric => return Err(Error::Unsupported("an anchor party is required".into())),
            _ => {}
        }
        Ok(DissensionSpec { register, m, track, anchor, family: BasisFamily::Joint })
    }

    /// Restricts multi-qubit conditioning subsets to the given basis family.
    pub fn with_family(mut self, family: BasisFamily) -> Self {
        self.family = family;
        self
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn n(&self) -> usize {
        self.register.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn track(&self) -> Track {
        self.track
    }

    pub fn anchor(&self) -> Option<&QubitLabel> {
        self.anchor.as_ref()
    }

    /// Party order the expression is built from.
    ///
    /// The anchor goes last when `m = 1` and first otherwise; the remaining
    /// parties follow cyclically in register order.
    pub fn party_order(&self) -> Vec<QubitLabel> {
        let labels = self.register.labels();
        let n = labels.len();
        let start = match &self.anchor {
            None => 0,
            Some(a) => {
                let pos = self.register.position(a).expect("anchor checked at construction");
                if self.m == 1 {
                    (pos + 1) % n
                } else {
                    pos
                }
            }
        };
        (0..n).map(|i| labels[(start + i) % n].clone()).collect()
    }

    /// Specs for every entry of the vector `(m, track)` on `register`.
    pub fn vector(register: &Register, m: usize, track: Track) -> Result<Vec<DissensionSpec>> {
        if is_symmetric(register.len(), m, track) {
            return Ok(vec![DissensionSpec::new(register.clone(), m, track, None)?]);
        }
        register
            .labels()
            .iter()
            .map(|a| DissensionSpec::new(register.clone(), m, track, Some(a.clone())))
            .collect()
    }
}

fn is_symmetric(n: usize, m: usize, track: Track) -> bool {
    track == Track::Two && m + 1 == n
}

/// `coefficient * S(target | cond)`; `cond` is empty for a plain joint entropy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: i32,
    pub target: Vec<QubitLabel>,
    pub cond: Vec<QubitLabel>,
}

/// Integer combination of joint and measured conditional entropies.
/// Labels inside each term are in register order; duplicates are merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionedExpression {
    register: Register,
    unconditioned: Vec<Term>,
    conditioned: Vec<Term>,
}

impl ConditionedExpression {
    pub fn unconditioned_terms(&self) -> &[Term] {
        &self.unconditioned
    }

    pub fn conditioned_terms(&self) -> &[Term] {
        &self.conditioned
    }

    /// Distinct conditioning subsets in order of first appearance.
    pub fn conditioning_subsets(&self) -> Vec<Vec<QubitLabel>> {
        let mut out: Vec<Vec<QubitLabel>> = Vec::new();
        for t in &self.conditioned {
            if !out.contains(&t.cond) {
                out.push(t.cond.clone());
            }
        }
        out
    }

    pub fn register(&self) -> &Register {
        &self.register
    }
}

impl fmt::Display for ConditionedExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ls: &[QubitLabel]| ls.iter().map(|l| l.name()).collect::<Vec<_>>().join("");
        let mut first = true;
        for t in self.unconditioned.iter().chain(&self.conditioned) {
            let sign = if t.coefficient < 0 { "-" } else { "+" };
            if first {
                if t.coefficient < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if t.coefficient.abs() != 1 {
                write!(f, "{}", t.coefficient.abs())?;
            }
            if t.cond.is_empty() {
                write!(f, "S({})", join(&t.target))?;
            } else {
                write!(f, "S({}|{})", join(&t.target), join(&t.cond))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Index subsets of `0..n` of size `k`, lexicographic.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn sign(k: usize) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Accumulates terms keyed by (target mask, cond mask), keeping first-seen order.
struct TermBuilder<'a> {
    register: &'a Register,
    order: Vec<(u32, u32)>,
    coeffs: HashMap<(u32, u32), i32>,
}

impl<'a> TermBuilder<'a> {
    fn new(register: &'a Register) -> Self {
        TermBuilder { register, order: Vec::new(), coeffs: HashMap::new() }
    }

    fn add(&mut self, coefficient: i32, target: u32, cond: u32) {
        let key = (target, cond);
        if !self.coeffs.contains_key(&key) {
            self.order.push(key);
        }
        *self.coeffs.entry(key).or_insert(0) += coefficient;
    }

    fn finish(self) -> ConditionedExpression {
        let mut unconditioned = Vec::new();
        let mut conditioned = Vec::new();
        for key in &self.order {
            let c = self.coeffs[key];
            if c == 0 {
                continue;
            }
            let term = Term {
                coefficient: c,
                target: self.register.labels_of_mask(key.0),
                cond: self.register.labels_of_mask(key.1),
            };
            if key.1 == 0 {
                unconditioned.push(term);
            } else {
                conditioned.push(term);
            }
        }
        ConditionedExpression { register: self.register.clone(), unconditioned, conditioned }
    }
}

/// The conditioned mutual information `I_m^t` selected by `spec`.
pub fn build_expression(spec: &DissensionSpec) -> ConditionedExpression {
    let reg = &spec.register;
    let n = spec.n();
    let m = spec.m;
    let order = spec.party_order();
    let bit: Vec<u32> = order.iter().map(|l| 1u32 << reg.position(l).expect("order is a permutation")).collect();
    let mask_of = |idx: &[usize]| idx.iter().fold(0u32, |acc, &i| acc | bit[i]);
    let mut b = TermBuilder::new(reg);

    for k in 1..m {
        for s in combinations(n, k) {
            b.add(sign(k - 1), mask_of(&s), 0);
        }
    }
    for s in combinations(n, m).into_iter().filter(|s| s[0] == 0) {
        match spec.track {
            Track::One => b.add(sign(m - 1), mask_of(&s), 0),
            Track::Two => {
                let c = mask_of(&appended(&s, n, m));
                b.add(sign(m - 1), mask_of(&s) | c, 0);
                b.add(-sign(m - 1), c, mask_of(&s));
            }
        }
    }
    for p in m + 1..=n {
        for s in combinations(n, p) {
            b.add(sign(p - 1), mask_of(&s[..p - m]), mask_of(&s[p - m..]));
        }
    }
    b.finish()
}

/// Parties Track-II appends to the `m`-subset `s` (sorted order indices,
/// holding 0): a single successor when `m = 1`, every remaining party otherwise.
fn appended(s: &[usize], n: usize, m: usize) -> Vec<usize> {
    if m > 1 {
        return (0..n).filter(|i| !s.contains(i)).collect();
    }
    let last = *s.last().expect("nonempty subset");
    if last + 1 < n {
        vec![last + 1]
    } else {
        vec![(1..n).find(|i| !s.contains(i)).expect("m < n leaves a party outside the subset")]
    }
}

/// Signed sum of the expression's entropies, measuring each conditioning subset
/// with the basis `a` assigns to it.
pub fn evaluate_expression(r: &DensityOperator, e: &ConditionedExpression, a: &MeasurementAssignment) -> Result<f64> {
    check_register(r, &e.register)?;
    let mut s = JointEntropies::new(r);
    let reg = r.register();
    let mut total = 0.0;
    for t in &e.unconditioned {
        total += t.coefficient as f64 * s.get(reg.mask(&t.target)?);
    }
    for t in &e.conditioned {
        let basis = a
            .get(&t.cond)
            .ok_or_else(|| Error::MissingBasis(t.cond.iter().map(|l| l.to_string()).collect()))?;
        total += t.coefficient as f64 * measured_conditional_entropy(r, &t.target, &t.cond, basis)?;
    }
    Ok(total)
}

fn check_register(r: &DensityOperator, reg: &Register) -> Result<()> {
    if r.register() != reg {
        return Err(Error::RegisterMismatch(format!(
            "state is on {:?}, expression on {:?}",
            r.register().labels(),
            reg.labels()
        )));
    }
    Ok(())
}

fn parity(n: usize) -> f64 {
    sign(n) as f64
}

/// Interaction information over single-qubit parts.
fn unmeasured_information(r: &DensityOperator) -> f64 {
    let mut s = JointEntropies::new(r);
    interaction_information_with(&mut s, &Partition::singletons(r.register()))
}

/// `D_m^t = (-1)^n (I_0 - I_m^t)` at a fixed assignment.
pub fn dissension_function(r: &DensityOperator, spec: &DissensionSpec, a: &MeasurementAssignment) -> Result<f64> {
    let e = build_expression(spec);
    let i_m = evaluate_expression(r, &e, a)?;
    Ok(parity(spec.n()) * (unmeasured_information(r) - i_m))
}

/// One optimization block: a conditioning subset and the kernels that read its basis.
struct Slot {
    m: usize,
    offset: usize,
    len: usize,
    kernels: Vec<(f64, ConditionalKernel)>,
}

/// The dissension function as a map from concatenated basis parameters to bits.
///
/// Joint entropies are folded into a constant and each conditional term keeps
/// a pre-reduced kernel, so an evaluation only builds bases and small blocks.
pub struct Objective {
    subsets: Vec<Vec<QubitLabel>>,
    constant: f64,
    slots: Vec<Slot>,
    dim: usize,
    family: BasisFamily,
}

impl Objective {
    pub fn new(r: &DensityOperator, spec: &DissensionSpec) -> Result<Self> {
        let e = build_expression(spec);
        check_register(r, &e.register)?;
        let reg = r.register();
        let sgn = parity(spec.n());
        let mut s = JointEntropies::new(r);
        let mut constant = interaction_information_with(&mut s, &Partition::singletons(reg));
        for t in &e.unconditioned {
            constant -= t.coefficient as f64 * s.get(reg.mask(&t.target)?);
        }
        constant *= sgn;

        let subsets = e.conditioning_subsets();
        let mut slots = Vec::with_capacity(subsets.len());
        let mut offset = 0;
        for cond in &subsets {
            let cond_pos = reg.positions(cond)?;
            let kernels = e
                .conditioned
                .iter()
                .filter(|t| &t.cond == cond)
                .map(|t| Ok((-sgn * t.coefficient as f64, ConditionalKernel::new(r, &cond_pos, &reg.positions(&t.target)?))))
                .collect::<Result<Vec<_>>>()?;
            let len = spec.family.param_len(cond.len());
            slots.push(Slot { m: cond.len(), offset, len, kernels });
            offset += len;
        }
        Ok(Objective { subsets, constant, slots, dim: offset, family: spec.family })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subsets(&self) -> &[Vec<QubitLabel>] {
        &self.subsets
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let mut v = self.constant;
        for (i, slot) in self.slots.iter().enumerate() {
            v += self.slot_value(i, &x[slot.offset..slot.offset + slot.len]);
        }
        v
    }

    /// Part of the value that depends on the basis of subset `i`.
    ///
    /// The objective is the constant plus one such term per subset, so it can
    /// be minimized subset by subset.
    pub fn slot_value(&self, i: usize, p: &[f64]) -> f64 {
        let slot = &self.slots[i];
        let vectors = basis_vectors(slot.m, p);
        slot.kernels.iter().map(|(c, k)| c * k.entropy(&vectors)).sum()
    }

    /// Value with no measured terms.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.slots.iter().flat_map(|s| self.family.bounds(s.m)).collect()
    }

    /// Computational bases everywhere.
    pub fn zero_point(&self) -> Vec<f64> {
        vec![0.0; self.dim]
    }

    /// Product Hadamard bases everywhere.
    pub fn hadamard_point(&self) -> Vec<f64> {
        self.slots.iter().flat_map(|s| self.family.hadamard(s.m).0).collect()
    }

    /// Splits a parameter vector into per-subset blocks.
    pub fn split(&self, x: &[f64]) -> Vec<SubsetParams> {
        self.subsets
            .iter()
            .zip(&self.slots)
            .map(|(subset, slot)| SubsetParams {
                subset: subset.iter().map(|l| l.to_string()).collect(),
                params: BasisParams(x[slot.offset..slot.offset + slot.len].to_vec()),
            })
            .collect()
    }

    pub fn assignment(&self, x: &[f64]) -> MeasurementAssignment {
        let mut a = MeasurementAssignment::new();
        for (subset, slot) in self.subsets.iter().zip(&self.slots) {
            let p = BasisParams(x[slot.offset..slot.offset + slot.len].to_vec());
            a.insert(basis_from_params(subset, &p).expect("slot length matches subset"));
        }
        a
    }
}

/// Basis parameters for one conditioning subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetParams {
    pub subset: Vec<String>,
    pub params: BasisParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissensionResult {
    pub value: f64,
    pub anchor: Option<String>,
    pub m: usize,
    pub track: Track,
    pub argmin: Vec<SubsetParams>,
    pub converged: bool,
    pub restarts_used: usize,
    pub best_objective_history: Vec<f64>,
}

impl DissensionResult {
    /// Rebuilds the optimal bases.
    pub fn assignment(&self) -> Result<MeasurementAssignment> {
        let mut a = MeasurementAssignment::new();
        for sp in &self.argmin {
            let subset: Vec<QubitLabel> = sp.subset.iter().map(|s| QubitLabel::new(s.as_str())).collect();
            a.insert(basis_from_params(&subset, &sp.params)?);
        }
        Ok(a)
    }
}

/// Infimum of the dissension function over bases.
///
/// Each conditioning subset is optimized on its own, starting from
/// computational and Hadamard bases before the random restarts, so the result
/// never exceeds either.
pub fn dissension(r: &DensityOperator, spec: &DissensionSpec, cfg: &OptimizerConfig) -> Result<DissensionResult> {
    let obj = Objective::new(r, spec)?;
    let base = DissensionResult {
        value: obj.constant,
        anchor: spec.anchor.as_ref().map(|a| a.to_string()),
        m: spec.m,
        track: spec.track,
        argmin: Vec::new(),
        converged: true,
        restarts_used: 0,
        best_objective_history: Vec::new(),
    };
    if obj.dim == 0 {
        return Ok(base);
    }
    let mut value = obj.constant;
    let mut argmin = Vec::with_capacity(obj.dim);
    let mut converged = true;
    let mut history = vec![obj.constant; cfg.restarts];
    for (i, slot) in obj.slots.iter().enumerate() {
        let starts = [vec![0.0; slot.len], spec.family.hadamard(slot.m).0];
        let bounds = spec.family.bounds(slot.m);
        let found = minimize(|p: &[f64]| obj.slot_value(i, p), &bounds, &starts, cfg)?;
        value += found.value;
        argmin.extend(found.argmin);
        converged &= found.diagnostics.converged;
        for (h, v) in history.iter_mut().zip(&found.diagnostics.history) {
            *h += v;
        }
    }
    Ok(DissensionResult {
        value,
        argmin: obj.split(&argmin),
        converged,
        restarts_used: cfg.restarts,
        best_objective_history: history,
        ..base
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissensionVector {
    pub m: usize,
    pub track: Track,
    /// One entry per anchor in register order, or a single symmetric entry.
    pub entries: Vec<DissensionResult>,
}

impl DissensionVector {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn converged(&self) -> bool {
        self.entries.iter().all(|e| e.converged)
    }

    pub fn get(&self, anchor: &str) -> Option<&DissensionResult> {
        self.entries.iter().find(|e| e.anchor.as_deref() == Some(anchor))
    }
}

pub fn dissension_vector(
    r: &DensityOperator,
    m: usize,
    track: Track,
    family: BasisFamily,
    cfg: &OptimizerConfig,
) -> Result<DissensionVector> {
    let specs = DissensionSpec::vector(r.register(), m, track)?;
    let entries = specs
        .iter()
        .map(|s| dissension(r, &s.clone().with_family(family), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(DissensionVector { m, track, entries })
}

/// Arithmetic mean of the entries.
pub fn average_dissension(v: &DissensionVector) -> f64 {
    if v.entries.is_empty() {
        return 0.0;
    }
    v.values().iter().sum::<f64>() / v.entries.len() as f64
}

/// Two-qubit discords measured on each side plus the doubly measured one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscordVector {
    pub delta_x: DissensionResult,
    pub delta_y: DissensionResult,
    pub delta_a: DissensionResult,
}

pub fn discord_vector(r: &DensityOperator, cfg: &OptimizerConfig) -> Result<DiscordVector> {
    if r.n_qubits() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: r.n_qubits() });
    }
    let reg = r.register();
    let side = |l: &QubitLabel| dissension(r, &DissensionSpec::new(reg.clone(), 1, Track::One, Some(l.clone()))?, cfg);
    Ok(DiscordVector {
        delta_x: side(&reg.labels()[0])?,
        delta_y: side(&reg.labels()[1])?,
        delta_a: dissension(r, &DissensionSpec::new(reg.clone(), 1, Track::Two, None)?, cfg)?,
    })
}

/// `D(a:b) = S(b) - S(ab) + S(a|b)` with `b` measured in `a`'s basis for `b`.
fn bipartite_discord(r: &DensityOperator, a: &[QubitLabel], b: &[QubitLabel], bases: &MeasurementAssignment) -> Result<f64> {
    let reg = r.register();
    let basis = bases
        .get(b)
        .ok_or_else(|| Error::MissingBasis(b.iter().map(|l| l.to_string()).collect()))?;
    let ab = reg.mask(a)? | reg.mask(b)?;
    Ok(mask_entropy(r, reg.mask(b)?) - mask_entropy(r, ab) + measured_conditional_entropy(r, a, b, basis)?)
}

/// Dissension function and its expansion into bipartite discord functions,
/// both at assignment `a`.
pub fn discord_decomposition(r: &DensityOperator, spec: &DissensionSpec, a: &MeasurementAssignment) -> Result<(f64, f64)> {
    let lhs = dissension_function(r, spec, a)?;
    let n = spec.n();
    let m = spec.m;
    let order = spec.party_order();
    let pick = |idx: &[usize]| idx.iter().map(|&i| order[i].clone()).collect::<Vec<_>>();
    let mut rhs = 0.0;
    for p in m + 1..=n {
        let sgn = parity(n + p);
        for s in combinations(n, p) {
            rhs += sgn * bipartite_discord(r, &pick(&s[..p - m]), &pick(&s[p - m..]), a)?;
        }
    }
    if spec.track == Track::Two {
        let sgn = parity(n) * parity(m - 1);
        for s in combinations(n, m).into_iter().filter(|s| s[0] == 0) {
            rhs += sgn * bipartite_discord(r, &pick(&appended(&s, n, m)), &pick(&s), a)?;
        }
    }
    Ok((lhs, rhs))
}
