//! Parsed representation of a `deps` file.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Interned configuration option. The index is the option's position in
/// declaration order, which is also the variable index used by formulas and
/// valuations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OptionId(pub(crate) u32);

impl OptionId {
    pub fn new(index: usize) -> Self {
        OptionId(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One logical line of a `deps` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    /// `head -> a & b & ...`
    Dep { head: OptionId, body: Vec<OptionId> },
    /// `iface : a | b | ...`. `auto` marks the yes/no interfaces generated for
    /// question-mark options.
    Iface {
        iface: OptionId,
        impls: Vec<OptionId>,
        auto: bool,
    },
    /// `owner.key = v1 v2 ...`
    Prop {
        owner: OptionId,
        key: String,
        values: Vec<String>,
    },
}

impl Statement {
    pub fn is_logical(&self) -> bool {
        !matches!(self, Statement::Prop { .. })
    }

    /// Renders the statement in `deps` syntax. Auto-generated interfaces are
    /// rendered as `# (auto)` comments, which the parser regenerates.
    pub fn display<'a>(&'a self, model: &'a DepsModel) -> StatementDisplay<'a> {
        StatementDisplay {
            statement: self,
            model,
        }
    }
}

pub struct StatementDisplay<'a> {
    statement: &'a Statement,
    model: &'a DepsModel,
}

impl fmt::Display for StatementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |id: &OptionId| self.model.name(*id);
        match self.statement {
            Statement::Dep { head, body } => {
                write!(f, "{} ->", name(head))?;
                for (i, b) in body.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" &")?;
                    }
                    write!(f, " {}", name(b))?;
                }
                Ok(())
            }
            Statement::Iface { iface, impls, auto } => {
                if *auto {
                    f.write_str("# (auto) ")?;
                }
                write!(f, "{} :", name(iface))?;
                for (i, b) in impls.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" |")?;
                    }
                    write!(f, " {}", name(b))?;
                }
                Ok(())
            }
            Statement::Prop { owner, key, values } => {
                write!(f, "{}.{} =", name(owner), key)?;
                for v in values {
                    write!(f, " {}", v)?;
                }
                Ok(())
            }
        }
    }
}

/// A validated `deps` model: the options in declaration order and the
/// statements whose conjunction constrains them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DepsModel {
    pub(crate) names: Vec<String>,
    pub(crate) index: BTreeMap<String, OptionId>,
    pub(crate) statements: Vec<Statement>,
    pub(crate) interface_of: BTreeMap<OptionId, OptionId>,
}

impl DepsModel {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: OptionId) -> &str {
        &self.names[id.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<OptionId> {
        self.index.get(name).copied()
    }

    /// All options in declaration order.
    pub fn options(&self) -> impl ExactSizeIterator<Item = OptionId> + '_ {
        (0..self.names.len()).map(OptionId::new)
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    /// The interface this option implements, if any.
    pub fn interface_of(&self, id: OptionId) -> Option<OptionId> {
        self.interface_of.get(&id).copied()
    }

    pub fn interfaces(&self) -> impl Iterator<Item = (OptionId, &[OptionId])> + '_ {
        self.statements.iter().filter_map(|s| match s {
            Statement::Iface { iface, impls, .. } => Some((*iface, impls.as_slice())),
            _ => None,
        })
    }

    pub fn is_interface(&self, id: OptionId) -> bool {
        self.interfaces().any(|(iface, _)| iface == id)
    }

    /// Number of `->` and `:` statements.
    pub fn logical_statement_count(&self) -> usize {
        self.statements.iter().filter(|s| s.is_logical()).count()
    }

    /// Property values attached to `owner` under `key`.
    pub fn property(&self, owner: OptionId, key: &str) -> Option<&[String]> {
        self.statements.iter().find_map(|s| match s {
            Statement::Prop {
                owner: o,
                key: k,
                values,
            } if *o == owner && k == key => Some(values.as_slice()),
            _ => None,
        })
    }

    pub(crate) fn intern(&mut self, name: &str) -> OptionId {
        if let Some(id) = self.index.get(name) {
            return *id;
        }
        let id = OptionId::new(self.names.len());
        self.names.push(String::from(name));
        self.index.insert(String::from(name), id);
        id
    }
}

/// Pretty-prints the model in `deps` syntax, one statement per line.
impl fmt::Display for DepsModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.display(self))?;
        }
        Ok(())
    }
}

/// Strips the question-mark suffix, e.g. `date_overflows?` -> `date_overflows`.
pub fn question_base(name: &str) -> Option<&str> {
    name.strip_suffix('?')
}
