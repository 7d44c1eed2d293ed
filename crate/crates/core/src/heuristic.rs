//! The rewriting inference engine.
//!
//! The formula `f & A` is simplified with eight local rules, distributed into
//! CNF, and every unit clause is read off as a forced literal. Units are then
//! substituted back and the cycle repeats until no new unit appears.
//!
//! The rules, applied to fixpoint inside every `&`/`|` node:
//!
//! ```text
//! x & 1 = x      x & 0 = 0      x & f(x, ..) = x & f(1, ..)     !x & f(x, ..) = !x & f(0, ..)
//! x | 1 = 1      x | 0 = x      x | f(x, ..) = x | f(0, ..)     !x | f(x, ..) = !x | f(1, ..)
//! ```
//!
//! The engine is sound but incomplete. It cannot see that `c` holds in
//! `(a | b) & (!a | !b) & (!a | c) & (!b | c)`, since no unit clause
//! appears in that form.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::encode::apply_assignment;
use crate::formula::{Assignment, Formula, Lit};
use crate::inference::{InferenceResult, ResourceLimitExceeded, Verdict};
use crate::model::OptionId;

pub const DEFAULT_CLAUSE_CAP: usize = 1_000_000;

/// Rewrites `f` to a fixpoint of the simplification rules. The result is
/// logically equivalent to `f`.
///
/// Within a node, literal children are collected left to right and then
/// substituted into every compound sibling that mentions them.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::And(cs) => simplify_junction(true, cs.clone()),
        Formula::Or(cs) => simplify_junction(false, cs.clone()),
        _ => f.clone(),
    }
}

fn simplify_junction(conj: bool, children: Vec<Formula>) -> Formula {
    // (child, needs simplification)
    let mut pending: Vec<(Formula, bool)> = children.into_iter().map(|c| (c, true)).collect();
    loop {
        let mut flat = Vec::with_capacity(pending.len());
        for (child, dirty) in pending {
            let child = if dirty { simplify(&child) } else { child };
            match child {
                Formula::Const(b) if b == conj => {}
                Formula::Const(b) => return Formula::Const(b),
                Formula::And(grand) if conj => flat.extend(grand),
                Formula::Or(grand) if !conj => flat.extend(grand),
                other => flat.push(other),
            }
        }

        // A literal child fixes its variable for the siblings: it holds inside
        // a conjunction and fails inside a disjunction.
        let mut fixed = BTreeMap::new();
        let mut kept = Vec::with_capacity(flat.len());
        for child in flat {
            if let Formula::Lit(l) = child {
                let value = l.positive == conj;
                match fixed.get(&l.var) {
                    None => {
                        fixed.insert(l.var, value);
                        kept.push(child);
                    }
                    Some(&v) if v == value => {}
                    Some(_) => return Formula::Const(!conj),
                }
            } else {
                kept.push(child);
            }
        }

        let mut changed = false;
        pending = kept
            .into_iter()
            .map(|child| match child {
                Formula::Lit(_) => (child, false),
                other => {
                    if fixed.keys().any(|v| other.mentions(*v)) {
                        changed = true;
                        (other.substitute(&fixed), true)
                    } else {
                        (other, false)
                    }
                }
            })
            .collect();

        if !changed {
            let children = pending.into_iter().map(|(c, _)| c);
            return if conj {
                Formula::and(children)
            } else {
                Formula::or(children)
            };
        }
    }
}

/// A disjunction of literals, sorted and free of duplicates and of
/// complementary pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Option<Clause> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0].var == w[1].var) {
            return None;
        }
        Some(Clause(lits))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn unit(&self) -> Option<Lit> {
        match self.0.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }

    /// Disjunction of two clauses, or `None` when it is a tautology.
    fn merge(&self, other: &Clause) -> Option<Clause> {
        Clause::new(self.0.iter().chain(other.0.iter()).copied())
    }
}

/// A conjunction of clauses. No clauses means `1`; a single empty clause
/// means `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfForm {
    clauses: Vec<Clause>,
}

impl CnfForm {
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_true(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_false(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    pub fn units(&self) -> impl Iterator<Item = Lit> + '_ {
        self.clauses.iter().filter_map(Clause::unit)
    }

    pub fn eval_bits(&self, bits: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.0.iter().any(|l| l.eval(bits[l.var.index()])))
    }
}

#[derive(Default)]
struct ClauseSet {
    order: Vec<Clause>,
    seen: BTreeSet<Clause>,
}

impl ClauseSet {
    fn insert(&mut self, clause: Clause, cap: usize) -> Result<(), ResourceLimitExceeded> {
        if self.seen.insert(clause.clone()) {
            self.order.push(clause);
            if self.order.len() > cap {
                return Err(ResourceLimitExceeded { limit: cap as u64 });
            }
        }
        Ok(())
    }
}

/// CNF by recursive distribution of `|` over `&`, capped at
/// [`DEFAULT_CLAUSE_CAP`] clauses.
pub fn to_cnf(f: &Formula) -> Result<CnfForm, ResourceLimitExceeded> {
    to_cnf_capped(f, DEFAULT_CLAUSE_CAP)
}

pub fn to_cnf_capped(f: &Formula, cap: usize) -> Result<CnfForm, ResourceLimitExceeded> {
    let clauses = distribute(f, cap)?;
    if clauses.iter().any(Clause::is_empty) {
        return Ok(CnfForm {
            clauses: alloc::vec![Clause(Vec::new())],
        });
    }
    Ok(CnfForm { clauses })
}

fn distribute(f: &Formula, cap: usize) -> Result<Vec<Clause>, ResourceLimitExceeded> {
    match f {
        Formula::Const(true) => Ok(Vec::new()),
        Formula::Const(false) => Ok(alloc::vec![Clause(Vec::new())]),
        Formula::Lit(l) => Ok(alloc::vec![Clause(alloc::vec![*l])]),
        Formula::And(cs) => {
            let mut set = ClauseSet::default();
            for c in cs {
                for clause in distribute(c, cap)? {
                    set.insert(clause, cap)?;
                }
            }
            Ok(set.order)
        }
        Formula::Or(cs) => {
            let mut acc = alloc::vec![Clause(Vec::new())];
            for c in cs {
                let rhs = distribute(c, cap)?;
                if rhs.is_empty() {
                    return Ok(Vec::new());
                }
                let mut next = ClauseSet::default();
                for a in &acc {
                    for b in &rhs {
                        if let Some(m) = a.merge(b) {
                            next.insert(m, cap)?;
                        }
                    }
                }
                if next.order.is_empty() {
                    return Ok(Vec::new());
                }
                acc = next.order;
            }
            Ok(acc)
        }
    }
}

/// Intermediate state of [`HeuristicEngine::infer_traced`]: the derived units
/// after each round.
#[derive(Clone, Debug, Default)]
pub struct HeuristicTrace {
    pub rounds: Vec<BTreeMap<OptionId, bool>>,
}

#[derive(Clone, Debug)]
pub struct HeuristicEngine {
    pub clause_cap: usize,
}

impl Default for HeuristicEngine {
    fn default() -> Self {
        HeuristicEngine {
            clause_cap: DEFAULT_CLAUSE_CAP,
        }
    }
}

impl HeuristicEngine {
    pub fn infer(&self, f: &Formula, assignment: &Assignment) -> InferenceResult {
        self.infer_traced(f, assignment).0
    }

    pub fn infer_traced(
        &self,
        f: &Formula,
        assignment: &Assignment,
    ) -> (InferenceResult, HeuristicTrace) {
        let mut trace = HeuristicTrace::default();
        let mut units: BTreeMap<OptionId, bool> = BTreeMap::new();
        let mut current = apply_assignment(f, assignment);
        let mut limit_hit = false;

        loop {
            let simplified = simplify(&current);
            if simplified == Formula::Const(false) {
                return (InferenceResult::new(Verdict::Unsatisfiable), trace);
            }
            let cnf = match to_cnf_capped(&simplified, self.clause_cap) {
                Ok(cnf) => cnf,
                Err(_) => {
                    limit_hit = true;
                    break;
                }
            };
            if cnf.is_false() {
                return (InferenceResult::new(Verdict::Unsatisfiable), trace);
            }

            let mut fresh = BTreeMap::new();
            for unit in cnf.units() {
                if assignment.get(unit.var).is_some() || units.contains_key(&unit.var) {
                    continue;
                }
                match fresh.insert(unit.var, unit.positive) {
                    Some(previous) if previous != unit.positive => {
                        return (InferenceResult::new(Verdict::Unsatisfiable), trace);
                    }
                    _ => {}
                }
            }
            if fresh.is_empty() {
                break;
            }
            units.extend(fresh.iter().map(|(k, v)| (*k, *v)));
            trace.rounds.push(units.clone());
            current = simplified.substitute(&fresh);
        }

        let mut result = InferenceResult::new(Verdict::Unknown);
        result.limit_hit = limit_hit;
        for (var, value) in units {
            if value {
                result.implied_true.insert(var);
            } else {
                result.implied_false.insert(var);
            }
        }
        (result, trace)
    }
}

/// [`HeuristicEngine::infer`] with the default clause cap.
pub fn infer_heuristic(f: &Formula, assignment: &Assignment) -> InferenceResult {
    HeuristicEngine::default().infer(f, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode_model;
    use crate::parser::parse_deps;
    use alloc::string::ToString;
    use alloc::vec;

    fn v(i: usize) -> OptionId {
        OptionId::new(i)
    }

    fn clause_set(cnf: &CnfForm) -> BTreeSet<Vec<Lit>> {
        cnf.clauses().iter().map(|c| c.lits().to_vec()).collect()
    }

    #[test]
    fn unit_propagates_into_sibling() {
        // a & (!a | b)
        let f = Formula::And(vec![
            Formula::pos(v(0)),
            Formula::Or(vec![Formula::neg(v(0)), Formula::pos(v(1))]),
        ]);
        assert_eq!(
            simplify(&f),
            Formula::And(vec![Formula::pos(v(0)), Formula::pos(v(1))])
        );
    }

    #[test]
    fn constants_are_identities() {
        let f = Formula::And(vec![Formula::Const(true), Formula::pos(v(0))]);
        assert_eq!(simplify(&f), Formula::pos(v(0)));
        let f = Formula::Or(vec![Formula::Const(false), Formula::pos(v(0))]);
        assert_eq!(simplify(&f), Formula::pos(v(0)));
        let f = Formula::Or(vec![Formula::Const(true), Formula::pos(v(0))]);
        assert_eq!(simplify(&f), Formula::Const(true));
        let f = Formula::And(vec![Formula::Const(false), Formula::pos(v(0))]);
        assert_eq!(simplify(&f), Formula::Const(false));
    }

    #[test]
    fn disjunction_rules() {
        // x | (x & y) = x | (0 & y) = x
        let f = Formula::Or(vec![
            Formula::pos(v(0)),
            Formula::And(vec![Formula::pos(v(0)), Formula::pos(v(1))]),
        ]);
        assert_eq!(simplify(&f), Formula::pos(v(0)));
        // !x | (x & y) = !x | y
        let f = Formula::Or(vec![
            Formula::neg(v(0)),
            Formula::And(vec![Formula::pos(v(0)), Formula::pos(v(1))]),
        ]);
        assert_eq!(
            simplify(&f),
            Formula::Or(vec![Formula::neg(v(0)), Formula::pos(v(1))])
        );
        // x | !x = 1
        let f = Formula::Or(vec![Formula::pos(v(0)), Formula::neg(v(0))]);
        assert_eq!(simplify(&f), Formula::Const(true));
    }

    #[test]
    fn platform_interface_under_arm() {
        let m = parse_deps(include_str!("../../../corpus/kernel.deps")).unwrap();
        let arm = m.lookup("arm").unwrap();
        let f = Formula::and([encode_model(&m), Formula::pos(arm)]);
        let s = simplify(&f);
        let Formula::And(children) = &s else {
            panic!("expected conjunction, got {}", s.display(&m));
        };
        for (name, positive) in [("plateform", true), ("powerpc", false), ("s12xe", false)] {
            let lit = Formula::Lit(Lit {
                var: m.lookup(name).unwrap(),
                positive,
            });
            assert!(children.contains(&lit), "missing unit {}", name);
        }
    }

    #[test]
    fn distribution() {
        // (a & b) | c
        let f = Formula::Or(vec![
            Formula::And(vec![Formula::pos(v(0)), Formula::pos(v(1))]),
            Formula::pos(v(2)),
        ]);
        let cnf = to_cnf(&f).unwrap();
        let expected: BTreeSet<Vec<Lit>> = [
            vec![Lit::pos(v(0)), Lit::pos(v(2))],
            vec![Lit::pos(v(1)), Lit::pos(v(2))],
        ]
        .into_iter()
        .collect();
        assert_eq!(clause_set(&cnf), expected);
    }

    #[test]
    fn tautology_clause_dropped() {
        let f = Formula::Or(vec![Formula::pos(v(0)), Formula::neg(v(0))]);
        assert!(to_cnf(&f).unwrap().is_true());
        assert!(to_cnf(&Formula::Const(false)).unwrap().is_false());
    }

    #[test]
    fn clause_cap_is_enforced() {
        // (a0 & b0) | (a1 & b1) | ... distributes to 2^n clauses.
        let f = Formula::Or(
            (0..12)
                .map(|i| Formula::And(vec![Formula::pos(v(2 * i)), Formula::pos(v(2 * i + 1))]))
                .collect(),
        );
        assert_eq!(to_cnf_capped(&f, 4096).unwrap().clauses().len(), 4096);
        assert!(to_cnf_capped(&f, 4095).is_err());

        let engine = HeuristicEngine { clause_cap: 100 };
        let r = engine.infer(&f, &Assignment::new());
        assert!(r.limit_hit);
        assert_eq!(r.verdict, Verdict::Unknown);
    }

    #[test]
    fn empty_model_infers_nothing() {
        let r = infer_heuristic(&Formula::Const(true), &Assignment::new());
        assert!(r.implied_true.is_empty() && r.implied_false.is_empty());
        assert_eq!(r.verdict, Verdict::Unknown);
    }

    #[test]
    fn xor_merge_is_not_detected() {
        // (a xor b) & (a -> c) & (b -> c): c is forced but never a unit clause.
        let (a, b, c) = (v(0), v(1), v(2));
        let f = Formula::and([
            Formula::or([Formula::pos(a), Formula::pos(b)]),
            Formula::or([Formula::neg(a), Formula::neg(b)]),
            Formula::or([Formula::neg(a), Formula::pos(c)]),
            Formula::or([Formula::neg(b), Formula::pos(c)]),
        ]);
        let r = infer_heuristic(&f, &Assignment::new());
        assert!(!r.implied_true.contains(&c));
        assert_eq!(f.to_string(), "(x0 | x1) & (!x0 | !x1) & (!x0 | x2) & (!x1 | x2)");
    }

    #[test]
    fn contradiction_collapses() {
        let f = Formula::And(vec![Formula::pos(v(0)), Formula::neg(v(0))]);
        let r = infer_heuristic(&f, &Assignment::new());
        assert_eq!(r.verdict, Verdict::Unsatisfiable);
    }
}
