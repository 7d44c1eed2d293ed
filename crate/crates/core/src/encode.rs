//! Translation of a [`DepsModel`] into a propositional [`Formula`].

use alloc::vec::Vec;

use crate::formula::{Assignment, Formula, Valuation};
use crate::model::{DepsModel, OptionId, Statement};

/// `head -> b1 & ... & bn` as `!head | (b1 & ... & bn)`.
pub fn encode_dep(head: OptionId, body: &[OptionId]) -> Formula {
    Formula::or([
        Formula::neg(head),
        Formula::and(body.iter().map(|&b| Formula::pos(b))),
    ])
}

/// `iface : i1 | ... | in`: either everything is false, or the interface is
/// true together with exactly one implementation.
///
/// `(!a & !i1 & ... & !in) | (a & OR_k (ik & AND_{l != k} !il))`
pub fn encode_iface(iface: OptionId, impls: &[OptionId]) -> Formula {
    let all_off = Formula::and(
        core::iter::once(Formula::neg(iface)).chain(impls.iter().map(|&i| Formula::neg(i))),
    );
    let exactly_one = Formula::or(impls.iter().enumerate().map(|(k, &ik)| {
        Formula::and(
            core::iter::once(Formula::pos(ik)).chain(
                impls
                    .iter()
                    .enumerate()
                    .filter(|(l, _)| *l != k)
                    .map(|(_, &il)| Formula::neg(il)),
            ),
        )
    }));
    Formula::or([all_off, Formula::and([Formula::pos(iface), exactly_one])])
}

/// Encoding of one statement; property lines constrain nothing.
pub fn encode_statement(statement: &Statement) -> Formula {
    match statement {
        Statement::Dep { head, body } => encode_dep(*head, body),
        Statement::Iface { iface, impls, .. } => encode_iface(*iface, impls),
        Statement::Prop { .. } => Formula::Const(true),
    }
}

/// Conjunction of every dependency and interface statement, in statement
/// order.
pub fn encode_model(model: &DepsModel) -> Formula {
    Formula::and(
        model
            .statements()
            .iter()
            .filter(|s| s.is_logical())
            .map(encode_statement),
    )
}

/// `f & A`: conjoins the enforced literals, in option order.
pub fn apply_assignment(f: &Formula, assignment: &Assignment) -> Formula {
    Formula::and(
        core::iter::once(f.clone()).chain(assignment.iter().map(|(id, v)| {
            if v {
                Formula::pos(id)
            } else {
                Formula::neg(id)
            }
        })),
    )
}

/// Indices of the statements a valuation violates.
pub fn violated_statements(model: &DepsModel, valuation: &Valuation) -> Vec<usize> {
    model
        .statements()
        .iter()
        .enumerate()
        .filter(|(_, s)| !encode_statement(s).eval_bits(valuation.bits()))
        .map(|(i, _)| i)
        .collect()
}

/// Whether a total valuation satisfies every statement of the model.
pub fn is_correct(model: &DepsModel, valuation: &Valuation) -> bool {
    valuation.len() == model.len() && encode_model(model).eval_bits(valuation.bits())
}
