//! Brute-force reference semantics, independent of the encoder and both
//! engines. Works directly on parsed statements by enumerating all 2^n rows.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt::Write;

use configforge_core::{DepsModel, Formula, Lit, OptionId, Statement};

/// Does the total valuation `bits` satisfy every statement of `model`?
pub fn satisfies(model: &DepsModel, bits: &[bool]) -> bool {
    model.statements().iter().all(|s| match s {
        Statement::Dep { head, body } => !bits[head.index()] || body.iter().all(|b| bits[b.index()]),
        Statement::Iface { iface, impls, .. } => {
            let on = impls.iter().filter(|i| bits[i.index()]).count();
            if bits[iface.index()] {
                on == 1
            } else {
                on == 0
            }
        }
        Statement::Prop { .. } => true,
    })
}

/// Row `k` of the truth table, most significant bit = first option, so
/// increasing `k` is lexicographic order with false < true.
pub fn row(n: usize, k: u64) -> Vec<bool> {
    (0..n).map(|i| (k >> (n - 1 - i)) & 1 == 1).collect()
}

fn extends(bits: &[bool], fixed: &[(usize, bool)]) -> bool {
    fixed.iter().all(|&(i, v)| bits[i] == v)
}

/// Every correct configuration extending `fixed`, in lexicographic order.
pub fn all_models(model: &DepsModel, fixed: &[(usize, bool)]) -> Vec<Vec<bool>> {
    let n = model.len();
    assert!(n <= 24, "oracle is exponential");
    (0..1u64 << n)
        .map(|k| row(n, k))
        .filter(|bits| extends(bits, fixed) && satisfies(model, bits))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forced {
    pub implied_true: BTreeSet<usize>,
    pub implied_false: BTreeSet<usize>,
}

/// Unset options that take the same value in every model; `None` when no
/// model extends `fixed`.
pub fn forced(model: &DepsModel, fixed: &[(usize, bool)]) -> Option<Forced> {
    let n = model.len();
    let mut seen = vec![[false; 2]; n];
    let mut any = false;
    for k in 0..1u64 << n {
        let bits = row(n, k);
        if !extends(&bits, fixed) || !satisfies(model, &bits) {
            continue;
        }
        any = true;
        for (i, b) in bits.iter().enumerate() {
            seen[i][*b as usize] = true;
        }
    }
    if !any {
        return None;
    }
    let enforced: BTreeSet<usize> = fixed.iter().map(|f| f.0).collect();
    let mut out = Forced {
        implied_true: BTreeSet::new(),
        implied_false: BTreeSet::new(),
    };
    for (i, s) in seen.iter().enumerate() {
        if enforced.contains(&i) {
            continue;
        }
        match s {
            [false, true] => {
                out.implied_true.insert(i);
            }
            [true, false] => {
                out.implied_false.insert(i);
            }
            _ => {}
        }
    }
    Some(out)
}

/// Truth table of a formula over `n` variables.
pub fn truth_table(f: &Formula, n: usize) -> Vec<bool> {
    (0..1u64 << n).map(|k| eval(f, &row(n, k))).collect()
}

/// Reference evaluator, kept separate from `Formula::eval`.
pub fn eval(f: &Formula, bits: &[bool]) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Lit(Lit { var, positive }) => bits[var.index()] == *positive,
        Formula::And(cs) => cs.iter().all(|c| eval(c, bits)),
        Formula::Or(cs) => cs.iter().any(|c| eval(c, bits)),
    }
}

pub fn names(model: &DepsModel, set: &BTreeSet<usize>) -> Vec<String> {
    set.iter()
        .map(|&i| model.name(OptionId::new(i)).to_string())
        .collect()
}

pub fn index_set(ids: impl IntoIterator<Item = OptionId>) -> BTreeSet<usize> {
    ids.into_iter().map(|i| i.index()).collect()
}

/// Raw material for a random model; [`RawModel::render`] repairs it into a
/// well-formed `deps` source over options `o0..o{n-1}`.
#[derive(Clone, Debug)]
pub struct RawModel {
    pub deps: Vec<(usize, Vec<usize>)>,
    pub ifaces: Vec<(usize, Vec<usize>)>,
}

impl RawModel {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut declared = BTreeSet::new();
        let mut members = BTreeSet::new();
        for (iface, impls) in &self.ifaces {
            if declared.contains(iface) {
                continue;
            }
            let mut kept = Vec::new();
            for i in impls {
                if i != iface && !members.contains(i) && !kept.contains(i) {
                    kept.push(*i);
                }
            }
            if kept.is_empty() {
                continue;
            }
            declared.insert(*iface);
            members.extend(kept.iter().copied());
            let list: Vec<String> = kept.iter().map(|i| format!("o{}", i)).collect();
            let _ = writeln!(out, "o{} : {}", iface, list.join(" | "));
        }
        for (head, body) in &self.deps {
            let mut kept: Vec<usize> = Vec::new();
            for b in body {
                if b != head && !kept.contains(b) {
                    kept.push(*b);
                }
            }
            if kept.is_empty() {
                continue;
            }
            let list: Vec<String> = kept.iter().map(|b| format!("o{}", b)).collect();
            let _ = writeln!(out, "o{} -> {}", head, list.join(" & "));
        }
        out
    }

    /// Builds a raw model from a source of bounded random numbers
    /// (`pick(k)` returns a value in `0..k`).
    pub fn random(pick: &mut dyn FnMut(usize) -> usize, n: usize) -> RawModel {
        let list = |pick: &mut dyn FnMut(usize) -> usize| {
            let len = 1 + pick(3);
            (0..len).map(|_| pick(n)).collect::<Vec<_>>()
        };
        let n_ifaces = pick(5);
        let ifaces = (0..n_ifaces).map(|_| (pick(n), list(pick))).collect();
        let n_deps = pick(8);
        let deps = (0..n_deps).map(|_| (pick(n), list(pick))).collect();
        RawModel { deps, ifaces }
    }
}

/// A random, deliberately unnormalized formula: raw `And`/`Or` nodes with
/// constants, duplicates and nesting left in place.
pub fn random_formula(pick: &mut dyn FnMut(usize) -> usize, vars: usize, depth: usize) -> Formula {
    if depth == 0 || pick(4) == 0 {
        return match pick(12) {
            0 => Formula::Const(pick(2) == 1),
            _ => {
                let var = OptionId::new(pick(vars));
                if pick(2) == 0 {
                    Formula::pos(var)
                } else {
                    Formula::neg(var)
                }
            }
        };
    }
    let width = 2 + pick(3);
    let children = (0..width)
        .map(|_| random_formula(pick, vars, depth - 1))
        .collect();
    if pick(2) == 0 {
        Formula::And(children)
    } else {
        Formula::Or(children)
    }
}

/// A random partial assignment over the model's options.
pub fn random_fixed(pick: &mut dyn FnMut(usize) -> usize, n: usize) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    for i in 0..n {
        match pick(6) {
            0 => out.push((i, true)),
            1 => out.push((i, false)),
            _ => {}
        }
    }
    out
}

/// Replays a fixed sequence of numbers as a `pick` source, so proptest can
/// drive (and shrink) the random builders above. Runs of the tape past its
/// end yield zeros.
pub struct Tape {
    values: Vec<usize>,
    pos: usize,
}

impl Tape {
    pub fn new(values: Vec<usize>) -> Self {
        Tape { values, pos: 0 }
    }

    pub fn pick(&mut self, bound: usize) -> usize {
        let v = self.values.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        v % bound
    }
}
