//! Named states with parameters, and random-state samplers.
//!
//! Every recipe builds on the canonical register (`x, y, z, w` up to four
//! qubits). Kets written with `psi+` mean `(|00> + |11>)/sqrt2` and `phi+`
//! mean `(|01> + |10>)/sqrt2` in the three-qubit biseparable families.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_local, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64, ZERO};
use crate::qformalism::{mix, single_qubit, DensityOperator, Ket, QubitLabel, Register};

/// A catalog name plus numeric parameters; missing parameters take their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecipe {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl StateRecipe {
    pub fn new(name: impl Into<String>) -> Self {
        StateRecipe { name: name.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub default: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub qubits: usize,
    pub params: Vec<ParamSpec>,
    pub description: String,
}

fn param(name: &str, default: f64, min: f64, max: f64) -> ParamSpec {
    ParamSpec { name: name.into(), default, min, max }
}

fn mixing() -> Vec<ParamSpec> {
    vec![param("p", 0.5, 0.0, 1.0)]
}

const LABELS3: [&str; 3] = ["x", "y", "z"];
const LABELS4: [&str; 4] = ["x", "y", "z", "w"];

/// All c/q strings of length `n`, `c` before `q` lexicographically.
fn patterns(n: usize) -> Vec<String> {
    (0..1usize << n)
        .map(|bits| (0..n).map(|i| if bits & (1 << (n - 1 - i)) != 0 { 'q' } else { 'c' }).collect())
        .collect()
}

/// Stable listing of every recipe.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let mut add = |name: String, qubits: usize, params: Vec<ParamSpec>, description: &str| {
        out.push(CatalogEntry { name, qubits, params, description: description.to_string() });
    };
    add("product2".into(), 2, vec![], "|++>");
    add("classical2".into(), 2, vec![], "(|00><00| + |11><11|)/2");
    add("cq".into(), 2, vec![], "(|++><++| + |-0><-0|)/2");
    add("qc".into(), 2, vec![], "(|++><++| + |0-><0-|)/2");
    add("qq".into(), 2, vec![], "(|00><00| + |++><++|)/2");
    add("bell".into(), 2, vec![], "(|00> + |11>)/sqrt2");
    add("werner2".into(), 2, mixing(), "(1-p) I/4 + p bell");
    add(
        "gen_werner".into(),
        2,
        vec![
            param("p", 0.5, 0.0, 1.0),
            param("l", 1.0, -1e6, 1e6),
            param("l_im", 0.0, -1e6, 1e6),
            param("k", 1.0, -1e6, 1e6),
        ],
        "(1-p) I/4 + p |psi_lk><psi_lk|, psi_lk = (|phi phi> + k |phi' phi'>)/sqrt(1+k^2)",
    );

    add("product3".into(), 3, vec![], "|000>");
    add("ghz3".into(), 3, vec![], "(|000> + |111>)/sqrt2");
    add("w3".into(), 3, vec![], "(|100> + |010> + |001>)/sqrt3");
    add("wc".into(), 3, vec![], "(|011> + |101> + |110>)/sqrt3");
    for p in patterns(3) {
        add(format!("sep_{p}"), 3, vec![], "two-term separable mixture; q slots use |+>/|0>, c slots |0>/|1>");
    }
    for a in LABELS3 {
        add(format!("bisep_{a}"), 3, vec![], "|0> on the named qubit, bell on the other two");
    }
    for a in LABELS3 {
        add(format!("bisep_c_{a}"), 3, vec![], "(|0 psi+><..| + |1 phi+><..|)/2, first factor on the named qubit");
    }
    for a in LABELS3 {
        add(format!("bisep_q_{a}"), 3, vec![], "(|+ psi+><..| + |0 phi+><..|)/2, first factor on the named qubit");
    }
    add("mixed_m".into(), 3, vec![], "(|+ psi+><..| + |phi+ 0><..|)/2");
    add("wg3".into(), 3, mixing(), "(1-p) w3 + p ghz3");
    add("wwc".into(), 3, mixing(), "(1-p) wc + p w3");
    add("werner3".into(), 3, mixing(), "(1-p) I/8 + p ghz3");

    add("product4".into(), 4, vec![], "|0000>");
    add("ghz4".into(), 4, vec![], "(|0000> + |1111>)/sqrt2");
    add("w4".into(), 4, vec![], "(|1000> + |0100> + |0010> + |0001>)/2");
    add("omega".into(), 4, vec![], "(|0 psi+ 0> + |1 psi- 1>)/sqrt2, psi+- = (|00> +- |11>)/sqrt2");
    add("cl".into(), 4, vec![], "(|0000><0000| + |1111><1111|)/2");
    for p in patterns(4) {
        add(format!("sep_{p}"), 4, vec![], "two-term separable mixture; q slots use |+>/|0>, c slots |0>/|1>");
    }
    for a in LABELS4 {
        add(format!("bisep4_{a}"), 4, vec![], "|0> on the named qubit, ghz3 on the rest");
    }
    for a in LABELS4 {
        add(format!("bisep4_c_{a}"), 4, vec![], "(|0 ghz3><..| + |1 ghz3><..|)/2, first factor on the named qubit");
    }
    for a in LABELS4 {
        add(format!("bisep4_q_{a}"), 4, vec![], "(|0 ghz3><..| + |+ ghz3><..|)/2, first factor on the named qubit");
    }
    add("werner4".into(), 4, mixing(), "(1-p) I/16 + p ghz4");
    add("wg4".into(), 4, mixing(), "(1-p) w4 + p ghz4");
    add("omega_white".into(), 4, mixing(), "(1-p) I/16 + p omega");
    add("omega_colored".into(), 4, mixing(), "(1-p) |0000><0000| + p omega");
    add(
        "cl_nonunital".into(),
        4,
        vec![param("n", 1.0, -1e6, 1e6)],
        "cl after the channel {|0><0|, |n><1|} on x",
    );
    out
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// Resolves parameters against the catalog schema, rejecting unknown or out-of-range ones.
fn resolve(entry: &CatalogEntry, recipe: &StateRecipe) -> Result<BTreeMap<String, f64>> {
    for key in recipe.params.keys() {
        if !entry.params.iter().any(|p| &p.name == key) {
            return Err(Error::ParamOutOfRange { name: key.clone(), reason: format!("`{}` takes no such parameter", entry.name) });
        }
    }
    let mut out = BTreeMap::new();
    for spec in &entry.params {
        let v = recipe.params.get(&spec.name).copied().unwrap_or(spec.default);
        if !v.is_finite() || v < spec.min || v > spec.max {
            return Err(Error::ParamOutOfRange {
                name: spec.name.clone(),
                reason: format!("{v} is outside [{}, {}]", spec.min, spec.max),
            });
        }
        out.insert(spec.name.clone(), v);
    }
    Ok(out)
}

/// Normalized sum of `coefficient * |symbols>` over `0 1 + -` product kets.
fn superposition(terms: &[(f64, &str)]) -> CVector {
    let n = terms[0].1.len();
    let mut v = CVector::from_element(1 << n, ZERO);
    for (c, symbols) in terms {
        let mut k = CVector::from_element(1, C64::new(1.0, 0.0));
        for ch in symbols.chars() {
            k = k.kronecker(&single_qubit(ch).expect("catalog symbols are valid"));
        }
        v += k * C64::new(*c, 0.0);
    }
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

fn pure_on(v: CVector, register: Register) -> DensityOperator {
    DensityOperator::from_pure(&Ket::new(v, register).expect("catalog kets are normalized"))
}

fn pure(terms: &[(f64, &str)]) -> DensityOperator {
    let n = terms[0].1.len();
    pure_on(superposition(terms), Register::canonical(n))
}

fn even_mix(a: &DensityOperator, b: &DensityOperator) -> DensityOperator {
    mix(&[0.5, 0.5], &[a.clone(), b.clone()]).expect("same register")
}

fn blend(p: f64, a: &DensityOperator, b: &DensityOperator) -> DensityOperator {
    mix(&[1.0 - p, p], &[a.clone(), b.clone()]).expect("p checked against the schema")
}

fn ghz(n: usize) -> DensityOperator {
    pure(&[(1.0, &"0".repeat(n)), (1.0, &"1".repeat(n))])
}

fn w(n: usize) -> DensityOperator {
    let kets: Vec<String> = (0..n).map(|i| (0..n).map(|j| if i == j { '1' } else { '0' }).collect()).collect();
    let terms: Vec<(f64, &str)> = kets.iter().map(|k| (1.0, k.as_str())).collect();
    pure(&terms)
}

fn white(n: usize) -> DensityOperator {
    DensityOperator::maximally_mixed(Register::canonical(n))
}

/// Two-term pattern mixture: slot `q` contributes `|+>` then `|0>`, slot `c` `|0>` then `|1>`.
fn pattern_state(pattern: &str) -> DensityOperator {
    let first: String = pattern.chars().map(|c| if c == 'q' { '+' } else { '0' }).collect();
    let second: String = pattern.chars().map(|c| if c == 'q' { '0' } else { '1' }).collect();
    even_mix(&pure(&[(1.0, &first)]), &pure(&[(1.0, &second)]))
}

/// Builds `state` with its first factor on `anchor` and the rest in canonical
/// order, then reorders into the canonical register.
fn anchored(state: DensityOperator, anchor: &str) -> Result<DensityOperator> {
    let canonical = Register::canonical(state.n_qubits());
    let anchor = QubitLabel::from(anchor);
    let mut order = vec![anchor.clone()];
    order.extend(canonical.labels().iter().filter(|l| **l != anchor).cloned());
    state.relabeled(Register::new(order)?)?.permuted(canonical.labels())
}

fn gen_werner(p: f64, l: C64, k: f64) -> DensityOperator {
    let norm = C64::new((1.0 + l.norm_sqr()).sqrt(), 0.0);
    let phi = CVector::from_vec(vec![C64::new(1.0, 0.0), l]) / norm;
    let perp = CVector::from_vec(vec![-l.conj(), C64::new(1.0, 0.0)]) / norm;
    let psi = (phi.kronecker(&phi) + perp.kronecker(&perp) * C64::new(k, 0.0)) / C64::new((1.0 + k * k).sqrt(), 0.0);
    blend(p, &white(2), &pure_on(psi, Register::canonical(2)))
}

/// Separability bound of `gen_werner` in `p` for superposition weight `k`.
pub fn gen_werner_separable_bound(k: f64) -> f64 {
    (1.0 + k * k) / (1.0 + 4.0 * k + k * k)
}

fn omega() -> DensityOperator {
    pure(&[(1.0, "0000"), (1.0, "0110"), (1.0, "1001"), (-1.0, "1111")])
}

pub fn build(recipe: &StateRecipe) -> Result<DensityOperator> {
    let entry = lookup(&recipe.name).ok_or_else(|| Error::UnknownState(recipe.name.clone()))?;
    let params = resolve(&entry, recipe)?;
    let p = || params["p"];
    let name = recipe.name.as_str();
    if let Some(pattern) = name.strip_prefix("sep_") {
        return Ok(pattern_state(pattern));
    }
    if let Some(a) = name.strip_prefix("bisep4_c_") {
        let s = even_mix(&pure(&[(1.0, "0000"), (1.0, "0111")]), &pure(&[(1.0, "1000"), (1.0, "1111")]));
        return anchored(s, a);
    }
    if let Some(a) = name.strip_prefix("bisep4_q_") {
        let s = even_mix(&pure(&[(1.0, "0000"), (1.0, "0111")]), &pure(&[(1.0, "+000"), (1.0, "+111")]));
        return anchored(s, a);
    }
    if let Some(a) = name.strip_prefix("bisep4_") {
        return anchored(pure(&[(1.0, "0000"), (1.0, "0111")]), a);
    }
    if let Some(a) = name.strip_prefix("bisep_c_") {
        let s = even_mix(&pure(&[(1.0, "000"), (1.0, "011")]), &pure(&[(1.0, "101"), (1.0, "110")]));
        return anchored(s, a);
    }
    if let Some(a) = name.strip_prefix("bisep_q_") {
        let s = even_mix(&pure(&[(1.0, "+00"), (1.0, "+11")]), &pure(&[(1.0, "001"), (1.0, "010")]));
        return anchored(s, a);
    }
    if let Some(a) = name.strip_prefix("bisep_") {
        return anchored(pure(&[(1.0, "000"), (1.0, "011")]), a);
    }
    Ok(match name {
        "product2" => pure(&[(1.0, "++")]),
        "classical2" => even_mix(&pure(&[(1.0, "00")]), &pure(&[(1.0, "11")])),
        "cq" => even_mix(&pure(&[(1.0, "++")]), &pure(&[(1.0, "-0")])),
        "qc" => even_mix(&pure(&[(1.0, "++")]), &pure(&[(1.0, "0-")])),
        "qq" => even_mix(&pure(&[(1.0, "00")]), &pure(&[(1.0, "++")])),
        "bell" => ghz(2),
        "werner2" => blend(p(), &white(2), &ghz(2)),
        "gen_werner" => gen_werner(p(), C64::new(params["l"], params["l_im"]), params["k"]),
        "product3" => pure(&[(1.0, "000")]),
        "ghz3" => ghz(3),
        "w3" => w(3),
        "wc" => pure(&[(1.0, "011"), (1.0, "101"), (1.0, "110")]),
        "mixed_m" => even_mix(&pure(&[(1.0, "+00"), (1.0, "+11")]), &pure(&[(1.0, "010"), (1.0, "100")])),
        "wg3" => blend(p(), &w(3), &ghz(3)),
        "wwc" => blend(p(), &pure(&[(1.0, "011"), (1.0, "101"), (1.0, "110")]), &w(3)),
        "werner3" => blend(p(), &white(3), &ghz(3)),
        "product4" => pure(&[(1.0, "0000")]),
        "ghz4" => ghz(4),
        "w4" => w(4),
        "omega" => omega(),
        "cl" => pattern_state("cccc"),
        "werner4" => blend(p(), &white(4), &ghz(4)),
        "wg4" => blend(p(), &w(4), &ghz(4)),
        "omega_white" => blend(p(), &white(4), &omega()),
        "omega_colored" => blend(p(), &pure(&[(1.0, "0000")]), &omega()),
        "cl_nonunital" => {
            apply_local(&pattern_state("cccc"), &QubitLabel::from("x"), &KrausChannel::nonunital(params["n"])?)?
        }
        other => return Err(Error::UnknownState(other.to_string())),
    })
}

/// Convenience for parameterless recipes.
pub fn named(name: &str) -> Result<DensityOperator> {
    build(&StateRecipe::new(name))
}

/// Uniformly random pure state on `n` qubits.
pub fn haar_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    let d = 1 << n;
    let v = CVector::from_fn(d, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let norm = v.norm();
    pure_on(v / C64::new(norm, 0.0), Register::canonical(n))
}

/// Hilbert–Schmidt random mixed state `G G^dagger / tr`.
pub fn ginibre_mixed<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    let d = 1 << n;
    let g = CMatrix::from_fn(d, d, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let m = &g * g.adjoint();
    let tr = m.trace();
    let m = m / tr;
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityOperator::new(m, Register::canonical(n)).expect("G G^dagger is a valid state after normalization")
}

/// Haar-random 2x2 unitary.
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(2, 2, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_fn(2, 2, |i, j| if i == j { r[(i, i)] / C64::new(r[(i, i)].norm(), 0.0) } else { ZERO });
    q * phases
}
