//! `config.h` and `config.mk` generation from a complete configuration.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::formula::Valuation;
use crate::model::{question_base, DepsModel, OptionId, Statement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenerateError {
    /// The valuation does not cover exactly the model's options.
    IncompleteValuation { expected: usize, found: usize },
}

impl fmt::Display for GenerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerateError::IncompleteValuation { expected, found } => write!(
                f,
                "configuration assigns {} options but the model declares {}",
                found, expected
            ),
        }
    }
}

impl core::error::Error for GenerateError {}

/// A `CONFIG_*` preprocessor macro name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MacroName(String);

impl MacroName {
    fn from_base(base: &str) -> Self {
        let mut s = String::from("CONFIG_");
        s.extend(base.chars().map(|c| c.to_ascii_uppercase()));
        MacroName(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MacroName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The macro an option defines when true. Question-mark interfaces and their
/// `_no` implementations define nothing; `foo_yes` defines `CONFIG_FOO`.
pub fn macro_name(model: &DepsModel, id: OptionId) -> Option<MacroName> {
    let name = model.name(id);
    if question_base(name).is_some() {
        return None;
    }
    if let Some(iface) = model.interface_of(id) {
        if let Some(base) = question_base(model.name(iface)) {
            return match name.strip_prefix(base) {
                Some("_yes") => Some(MacroName::from_base(base)),
                _ => None,
            };
        }
    }
    Some(MacroName::from_base(name))
}

fn check(model: &DepsModel, v: &Valuation) -> Result<(), GenerateError> {
    if v.len() != model.len() {
        return Err(GenerateError::IncompleteValuation {
            expected: model.len(),
            found: v.len(),
        });
    }
    Ok(())
}

/// One `#define` per true option in declaration order, inside an include
/// guard.
pub fn generate_config_h(model: &DepsModel, v: &Valuation) -> Result<String, GenerateError> {
    check(model, v)?;
    let mut out = String::from("#ifndef CONFIG_H\n#define CONFIG_H\n");
    for id in v.true_options() {
        if let Some(m) = macro_name(model, id) {
            let _ = writeln!(out, "#define {}", m);
        }
    }
    out.push_str("#endif\n");
    Ok(out)
}

/// One `all_<key> = ...` line per property key (sorted), collecting the
/// values of true owners in the order the properties were declared.
pub fn generate_config_mk(model: &DepsModel, v: &Valuation) -> Result<String, GenerateError> {
    check(model, v)?;
    let mut keys: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for s in model.statements() {
        if let Statement::Prop { owner, key, values } = s {
            let entry = keys.entry(key.as_str()).or_default();
            if v.get(*owner) {
                entry.extend(values.iter().map(String::as_str));
            }
        }
    }
    let mut out = String::new();
    for (key, values) in keys {
        let _ = write!(out, "all_{} =", key);
        for value in values {
            let _ = write!(out, " {}", value);
        }
        out.push('\n');
    }
    Ok(out)
}
