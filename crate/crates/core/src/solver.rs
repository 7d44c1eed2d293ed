//! Exact inference: satisfiability, forced sets and enumeration.
//!
//! The formula is clausified with one auxiliary variable per compound
//! subformula. Because formulas carry negation only on literals, each
//! auxiliary variable only needs to imply its subformula, so every model of
//! the clauses restricted to the options is a model of the formula and every
//! model of the formula extends to one of the clauses.
//!
//! Search is a DPLL loop that branches on options only, in declaration order
//! and false first, with unit propagation over all clauses. Once every option
//! has a value the formula is evaluated directly, so auxiliary variables never
//! need a decision.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::encode::{encode_model, encode_statement};
use crate::formula::{Assignment, Formula, Lit, Valuation};
use crate::inference::{InferenceResult, ResourceLimitExceeded, Verdict};
use crate::model::{DepsModel, OptionId};

pub const DEFAULT_DECISION_BUDGET: u64 = 10_000_000;

/// Literal over solver variables: `2 * var + negated`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SatLit(u32);

impl SatLit {
    fn new(var: usize, positive: bool) -> Self {
        SatLit((var as u32) << 1 | (!positive) as u32)
    }

    fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    fn positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn negate(self) -> Self {
        SatLit(self.0 ^ 1)
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<Lit> for SatLit {
    fn from(l: Lit) -> Self {
        SatLit::new(l.var.index(), l.positive)
    }
}

struct Clausifier {
    clauses: Vec<Vec<SatLit>>,
    num_vars: usize,
}

impl Clausifier {
    fn fresh(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    fn assert(&mut self, f: &Formula) {
        match f {
            Formula::Const(true) => {}
            Formula::Const(false) => self.clauses.push(Vec::new()),
            Formula::Lit(l) => self.clauses.push(vec![(*l).into()]),
            Formula::And(cs) => cs.iter().for_each(|c| self.assert(c)),
            Formula::Or(cs) => {
                let clause = cs.iter().map(|c| self.define(c)).collect();
                self.clauses.push(clause);
            }
        }
    }

    /// A literal that implies `f`.
    fn define(&mut self, f: &Formula) -> SatLit {
        match f {
            Formula::Lit(l) => (*l).into(),
            Formula::Const(b) => {
                let t = SatLit::new(self.fresh(), true);
                self.clauses.push(vec![if *b { t } else { t.negate() }]);
                t
            }
            Formula::And(cs) => {
                let t = SatLit::new(self.fresh(), true);
                for c in cs {
                    let d = self.define(c);
                    self.clauses.push(vec![t.negate(), d]);
                }
                t
            }
            Formula::Or(cs) => {
                let t = SatLit::new(self.fresh(), true);
                let mut clause = vec![t.negate()];
                clause.extend(cs.iter().map(|c| self.define(c)));
                self.clauses.push(clause);
                t
            }
        }
    }
}

const UNASSIGNED: u8 = 2;

struct Search<'a> {
    solver: &'a CompleteSolver,
    values: Vec<u8>,
    trail: Vec<SatLit>,
    propagated: usize,
    /// (trail length at decision, decided option, flipped to true already)
    levels: Vec<(usize, usize, bool)>,
    decisions: u64,
}

impl<'a> Search<'a> {
    fn value(&self, l: SatLit) -> u8 {
        match self.values[l.var()] {
            UNASSIGNED => UNASSIGNED,
            v => (v == 1) as u8 ^ (!l.positive()) as u8,
        }
    }

    fn assign(&mut self, l: SatLit) {
        self.values[l.var()] = l.positive() as u8;
        self.trail.push(l);
    }

    /// Returns false on conflict.
    fn enqueue(&mut self, l: SatLit) -> bool {
        match self.value(l) {
            1 => true,
            0 => false,
            _ => {
                self.assign(l);
                true
            }
        }
    }

    fn propagate(&mut self) -> bool {
        while self.propagated < self.trail.len() {
            let falsified = self.trail[self.propagated].negate();
            self.propagated += 1;
            let solver = self.solver;
            for &ci in &solver.occurs[falsified.index()] {
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for &l in &solver.clauses[ci] {
                    match self.value(l) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {}
                        _ => {
                            open_count += 1;
                            open = Some(l);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => return false,
                    (1, Some(l)) => self.assign(l),
                    _ => {}
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().unwrap();
            self.values[l.var()] = UNASSIGNED;
        }
        self.propagated = len;
    }

    /// Chronological backtracking: flips the deepest unflipped decision.
    /// Returns false when the search space is exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some((start, var, flipped)) = self.levels.pop() {
            self.undo_to(start);
            if flipped {
                continue;
            }
            self.levels.push((start, var, true));
            self.assign(SatLit::new(var, true));
            if self.propagate() {
                return true;
            }
        }
        false
    }

    fn next_unassigned(&self) -> Option<usize> {
        (0..self.solver.num_options).find(|&v| self.values[v] == UNASSIGNED)
    }

    /// Visits models in lexicographic order (false < true, declaration order)
    /// until `visit` returns false.
    fn run(
        mut self,
        assumptions: &Assignment,
        mut visit: impl FnMut(Valuation) -> bool,
    ) -> Result<(), ResourceLimitExceeded> {
        let solver = self.solver;
        for clause in &solver.clauses {
            match clause.as_slice() {
                [] => return Ok(()),
                [l] if !self.enqueue(*l) => return Ok(()),
                _ => {}
            }
        }
        for (id, v) in assumptions.iter() {
            if !self.enqueue(SatLit::new(id.index(), v)) {
                return Ok(());
            }
        }
        if !self.propagate() {
            return Ok(());
        }
        loop {
            match self.next_unassigned() {
                Some(var) => {
                    self.decisions += 1;
                    if self.decisions > self.solver.budget {
                        return Err(ResourceLimitExceeded {
                            limit: self.solver.budget,
                        });
                    }
                    self.levels.push((self.trail.len(), var, false));
                    self.assign(SatLit::new(var, false));
                    if !self.propagate() && !self.backtrack() {
                        return Ok(());
                    }
                }
                None => {
                    let bits: Vec<bool> = self.values[..self.solver.num_options]
                        .iter()
                        .map(|v| *v == 1)
                        .collect();
                    if self.solver.formula.eval_bits(&bits) && !visit(Valuation(bits)) {
                        return Ok(());
                    }
                    if !self.backtrack() {
                        return Ok(());
                    }
                }
            }
        }
    }
}

/// Exact engine over a fixed formula. Queries take the user assignment as
/// assumptions; the clause database is built once.
#[derive(Clone, Debug)]
pub struct CompleteSolver {
    formula: Formula,
    num_options: usize,
    clauses: Vec<Vec<SatLit>>,
    occurs: Vec<Vec<usize>>,
    num_vars: usize,
    budget: u64,
}

impl CompleteSolver {
    /// `num_options` is the number of option variables; it is raised to
    /// cover every variable the formula mentions.
    pub fn new(formula: Formula, num_options: usize) -> Self {
        let num_options = formula
            .vars()
            .last()
            .map_or(num_options, |v| num_options.max(v.index() + 1));
        let mut c = Clausifier {
            clauses: Vec::new(),
            num_vars: num_options,
        };
        c.assert(&formula);
        let mut occurs = vec![Vec::new(); 2 * c.num_vars];
        for (ci, clause) in c.clauses.iter().enumerate() {
            for l in clause {
                occurs[l.index()].push(ci);
            }
        }
        CompleteSolver {
            formula,
            num_options,
            clauses: c.clauses,
            occurs,
            num_vars: c.num_vars,
            budget: DEFAULT_DECISION_BUDGET,
        }
    }

    pub fn for_model(model: &DepsModel) -> Self {
        Self::new(encode_model(model), model.len())
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn num_options(&self) -> usize {
        self.num_options
    }

    fn search(&self) -> Search<'_> {
        Search {
            solver: self,
            values: vec![UNASSIGNED; self.num_vars],
            trail: Vec::new(),
            propagated: 0,
            levels: Vec::new(),
            decisions: 0,
        }
    }

    fn assignment_in_range(&self, assignment: &Assignment) -> bool {
        assignment.iter().all(|(id, _)| id.index() < self.num_options)
    }

    /// Decides `f & A`; returns the lexicographically smallest model.
    pub fn is_satisfiable(
        &self,
        assignment: &Assignment,
    ) -> Result<Option<Valuation>, ResourceLimitExceeded> {
        assert!(self.assignment_in_range(assignment), "assignment mentions an unknown option");
        let mut witness = None;
        self.search().run(assignment, |v| {
            witness = Some(v);
            false
        })?;
        Ok(witness)
    }

    /// The maximal sets of unset options that hold (resp. fail) in every
    /// model of `f & A`.
    pub fn forced_sets(
        &self,
        assignment: &Assignment,
    ) -> Result<InferenceResult, ResourceLimitExceeded> {
        let Some(first) = self.is_satisfiable(assignment)? else {
            return Ok(InferenceResult::new(Verdict::Unsatisfiable));
        };
        let n = self.num_options;
        let mut seen_true = vec![false; n];
        let mut seen_false = vec![false; n];
        let record = |w: &Valuation, st: &mut Vec<bool>, sf: &mut Vec<bool>| {
            for (i, b) in w.bits().iter().enumerate() {
                if *b {
                    st[i] = true;
                } else {
                    sf[i] = true;
                }
            }
        };
        record(&first, &mut seen_true, &mut seen_false);

        let mut result = InferenceResult::new(Verdict::Satisfiable);
        let mut query = assignment.clone();
        for var in (0..n).map(OptionId::new) {
            if assignment.get(var).is_some() {
                continue;
            }
            if !seen_false[var.index()] {
                query.set(var, Some(false));
                match self.is_satisfiable(&query)? {
                    Some(w) => record(&w, &mut seen_true, &mut seen_false),
                    None => {
                        result.implied_true.insert(var);
                    }
                }
            }
            if !seen_true[var.index()] {
                query.set(var, Some(true));
                match self.is_satisfiable(&query)? {
                    Some(w) => record(&w, &mut seen_true, &mut seen_false),
                    None => {
                        result.implied_false.insert(var);
                    }
                }
            }
            query.set(var, None);
        }
        Ok(result)
    }

    /// Up to `limit` models of `f & A` in lexicographic order of the option
    /// bits (declaration order, false before true).
    pub fn enumerate(
        &self,
        assignment: &Assignment,
        limit: usize,
    ) -> Result<Vec<Valuation>, ResourceLimitExceeded> {
        assert!(self.assignment_in_range(assignment), "assignment mentions an unknown option");
        let mut out = Vec::new();
        if limit == 0 {
            return Ok(out);
        }
        self.search().run(assignment, |v| {
            out.push(v);
            out.len() < limit
        })?;
        Ok(out)
    }
}

/// Satisfiability of `f & A` with the default budget.
pub fn is_satisfiable(
    f: &Formula,
    num_options: usize,
    assignment: &Assignment,
) -> Result<Option<Valuation>, ResourceLimitExceeded> {
    CompleteSolver::new(f.clone(), num_options).is_satisfiable(assignment)
}

pub fn forced_sets(
    f: &Formula,
    num_options: usize,
    assignment: &Assignment,
) -> Result<InferenceResult, ResourceLimitExceeded> {
    CompleteSolver::new(f.clone(), num_options).forced_sets(assignment)
}

pub fn enumerate_configurations(
    f: &Formula,
    num_options: usize,
    assignment: &Assignment,
    limit: usize,
) -> Result<Vec<Valuation>, ResourceLimitExceeded> {
    CompleteSolver::new(f.clone(), num_options).enumerate(assignment, limit)
}

/// A minimal set of statements and enforced values that cannot hold
/// together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    /// Indices into [`DepsModel::statements`].
    pub statements: Vec<usize>,
    pub enforced: Vec<(OptionId, bool)>,
}

/// Explains why `model & A` is unsatisfiable by deletion-based
/// minimization. Returns `None` when it is satisfiable.
pub fn explain_conflict(
    model: &DepsModel,
    assignment: &Assignment,
) -> Result<Option<Conflict>, ResourceLimitExceeded> {
    let logical: Vec<usize> = model
        .statements()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_logical())
        .map(|(i, _)| i)
        .collect();
    let unsat = |stmts: &BTreeSet<usize>, enforced: &Assignment| {
        let f = Formula::and(stmts.iter().map(|&i| encode_statement(&model.statements()[i])));
        CompleteSolver::new(f, model.len())
            .is_satisfiable(enforced)
            .map(|w| w.is_none())
    };

    let mut stmts: BTreeSet<usize> = logical.into_iter().collect();
    let mut enforced = assignment.clone();
    if !unsat(&stmts, &enforced)? {
        return Ok(None);
    }
    for i in stmts.clone() {
        stmts.remove(&i);
        if !unsat(&stmts, &enforced)? {
            stmts.insert(i);
        }
    }
    for (id, v) in assignment.iter() {
        enforced.set(id, None);
        if !unsat(&stmts, &enforced)? {
            enforced.set(id, Some(v));
        }
    }
    Ok(Some(Conflict {
        statements: stmts.into_iter().collect(),
        enforced: enforced.iter().collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_deps;

    fn v(i: usize) -> OptionId {
        OptionId::new(i)
    }

    #[test]
    fn contradiction_is_unsat() {
        let f = Formula::And(vec![Formula::pos(v(0)), Formula::neg(v(0))]);
        assert_eq!(is_satisfiable(&f, 1, &Assignment::new()).unwrap(), None);
        assert_eq!(
            forced_sets(&f, 1, &Assignment::new()).unwrap().verdict,
            Verdict::Unsatisfiable
        );
    }

    #[test]
    fn constants() {
        assert_eq!(
            is_satisfiable(&Formula::Const(false), 0, &Assignment::new()).unwrap(),
            None
        );
        let w = is_satisfiable(&Formula::Const(true), 2, &Assignment::new()).unwrap();
        assert_eq!(w, Some(Valuation(vec![false, false])));
        // constants nested below a disjunction
        let f = Formula::Or(vec![Formula::Const(false), Formula::pos(v(0))]);
        assert_eq!(
            is_satisfiable(&f, 1, &Assignment::new()).unwrap(),
            Some(Valuation(vec![true]))
        );
    }

    #[test]
    fn witness_respects_assignment() {
        let m = parse_deps("a : b | c").unwrap();
        let s = CompleteSolver::for_model(&m);
        let a = Assignment::from_pairs([(m.lookup("a").unwrap(), true)]);
        let w = s.is_satisfiable(&a).unwrap().unwrap();
        assert_eq!(w, Valuation(vec![true, false, true]));
    }

    #[test]
    fn enumeration_order_and_limit() {
        let m = parse_deps("a : b | c").unwrap();
        let s = CompleteSolver::for_model(&m);
        let a = Assignment::from_pairs([(v(0), true)]);
        assert_eq!(
            s.enumerate(&a, 10).unwrap(),
            [Valuation(vec![true, false, true]), Valuation(vec![true, true, false])]
        );
        assert_eq!(s.enumerate(&a, 1).unwrap().len(), 1);
        let all = s.enumerate(&Assignment::new(), usize::MAX).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_model_has_one_configuration() {
        let m = DepsModel::default();
        let s = CompleteSolver::for_model(&m);
        assert_eq!(s.enumerate(&Assignment::new(), 5).unwrap(), [Valuation(vec![])]);
    }

    #[test]
    fn fully_enforced_assignment_has_no_forced_options() {
        let m = parse_deps("a -> b").unwrap();
        let s = CompleteSolver::for_model(&m);
        let a = Assignment::from_pairs([(v(0), true), (v(1), true)]);
        let r = s.forced_sets(&a).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfiable);
        assert!(r.implied_true.is_empty() && r.implied_false.is_empty());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let m = parse_deps("a -> b\nc -> d\ne -> f").unwrap();
        let s = CompleteSolver::for_model(&m).with_budget(2);
        assert!(s.enumerate(&Assignment::new(), usize::MAX).is_err());
    }

    #[test]
    fn conflict_explanation_is_minimal() {
        let m = parse_deps("x : y | z\nx -> y\nx -> z\nq -> x\nr -> s").unwrap();
        let q = m.lookup("q").unwrap();
        let a = Assignment::from_pairs([(q, true), (m.lookup("r").unwrap(), true)]);
        let c = explain_conflict(&m, &a).unwrap().unwrap();
        assert_eq!(c.statements, [0, 1, 2, 3]);
        assert_eq!(c.enforced, [(q, true)]);
        assert_eq!(explain_conflict(&m, &Assignment::new()).unwrap(), None);
    }
}
