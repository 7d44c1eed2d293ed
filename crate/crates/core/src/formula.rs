//! Propositional formulas over configuration options.
//!
//! Negation only exists on literals; the tree has no `Not` node, so every
//! formula is in negation normal form by construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Not;

use crate::model::{DepsModel, OptionId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: OptionId,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: OptionId) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: OptionId) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    /// Value of the literal when its variable takes `value`.
    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Lit(Lit),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn pos(var: OptionId) -> Self {
        Formula::Lit(Lit::pos(var))
    }

    pub fn neg(var: OptionId) -> Self {
        Formula::Lit(Lit::neg(var))
    }

    /// N-ary conjunction. Nested conjunctions are flattened, `1` operands are
    /// dropped, a `0` operand absorbs the whole node, and zero or one
    /// remaining operands collapse to `1` or the operand itself.
    pub fn and(children: impl IntoIterator<Item = Formula>) -> Self {
        Self::junction(true, children)
    }

    /// N-ary disjunction; the dual of [`Formula::and`].
    pub fn or(children: impl IntoIterator<Item = Formula>) -> Self {
        Self::junction(false, children)
    }

    fn junction(conj: bool, children: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = Vec::new();
        for child in children {
            match child {
                Formula::Const(b) if b == conj => {}
                Formula::Const(b) => return Formula::Const(b),
                Formula::And(grand) if conj => out.extend(grand),
                Formula::Or(grand) if !conj => out.extend(grand),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::Const(conj),
            1 => out.pop().unwrap(),
            _ if conj => Formula::And(out),
            _ => Formula::Or(out),
        }
    }

    /// Evaluates the formula; `value` gives the truth value of each option.
    pub fn eval(&self, value: &impl Fn(OptionId) -> bool) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Lit(l) => l.eval(value(l.var)),
            Formula::And(cs) => cs.iter().all(|c| c.eval(value)),
            Formula::Or(cs) => cs.iter().any(|c| c.eval(value)),
        }
    }

    pub fn eval_bits(&self, bits: &[bool]) -> bool {
        self.eval(&|id: OptionId| bits[id.index()])
    }

    pub fn mentions(&self, var: OptionId) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Lit(l) => l.var == var,
            Formula::And(cs) | Formula::Or(cs) => cs.iter().any(|c| c.mentions(var)),
        }
    }

    pub fn vars(&self) -> BTreeSet<OptionId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<OptionId>) {
        match self {
            Formula::Const(_) => {}
            Formula::Lit(l) => {
                out.insert(l.var);
            }
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Replaces every literal over a variable in `values` by the constant it
    /// evaluates to. No other rewriting happens.
    pub fn substitute(&self, values: &BTreeMap<OptionId, bool>) -> Formula {
        match self {
            Formula::Const(_) => self.clone(),
            Formula::Lit(l) => match values.get(&l.var) {
                Some(&v) => Formula::Const(l.eval(v)),
                None => self.clone(),
            },
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.substitute(values)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.substitute(values)).collect()),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Lit(_) => 1,
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Infix rendering using option names.
    pub fn display<'a>(&'a self, model: &'a DepsModel) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            model: Some(model),
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    model: Option<&'a DepsModel>,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula, nested: bool) -> fmt::Result {
        match node {
            Formula::Const(b) => f.write_str(if *b { "1" } else { "0" }),
            Formula::Lit(l) => {
                if !l.positive {
                    f.write_str("!")?;
                }
                match self.model {
                    Some(m) if l.var.index() < m.len() => f.write_str(m.name(l.var)),
                    _ => write!(f, "x{}", l.var.index()),
                }
            }
            Formula::And(cs) | Formula::Or(cs) => {
                let op = if matches!(node, Formula::And(_)) { " & " } else { " | " };
                if nested {
                    f.write_str("(")?;
                }
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    self.write(f, c, true)?;
                }
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, false)
    }
}

/// Renders variables as `x<index>`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        FormulaDisplay {
            formula: self,
            model: None,
        }
        .fmt(f)
    }
}

/// Partial truth assignment made by the user: options enforced true or false.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<OptionId, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (OptionId, bool)>) -> Self {
        let mut a = Self::new();
        for (id, v) in pairs {
            a.set(id, Some(v));
        }
        a
    }

    pub fn get(&self, id: OptionId) -> Option<bool> {
        self.values.get(&id).copied()
    }

    /// Enforces `id` to a value, or clears it with `None`.
    pub fn set(&mut self, id: OptionId, value: Option<bool>) {
        match value {
            Some(v) => {
                self.values.insert(id, v);
            }
            None => {
                self.values.remove(&id);
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (OptionId, bool)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    pub fn forced_true(&self) -> impl Iterator<Item = OptionId> + '_ {
        self.iter().filter(|(_, v)| *v).map(|(k, _)| k)
    }

    pub fn forced_false(&self) -> impl Iterator<Item = OptionId> + '_ {
        self.iter().filter(|(_, v)| !*v).map(|(k, _)| k)
    }

    pub fn as_map(&self) -> &BTreeMap<OptionId, bool> {
        &self.values
    }
}

/// A total truth assignment over every option of a model, indexed by
/// declaration order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Valuation(pub Vec<bool>);

impl Valuation {
    pub fn get(&self, id: OptionId) -> bool {
        self.0[id.index()]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn true_options(&self) -> impl Iterator<Item = OptionId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| OptionId::new(i))
    }
}
