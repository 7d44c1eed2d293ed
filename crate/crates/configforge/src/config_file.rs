//! Saved configurations: one `name=0` or `name=1` line per option, in
//! declaration order.

use std::fmt::{self, Write};

use configforge_core::{DepsModel, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigFileError {
    Syntax { line: usize, text: String },
    UnknownOption { line: usize, name: String },
    DuplicateOption { line: usize, name: String },
    /// Not every option is assigned.
    IncompleteValuation { missing: Vec<String> },
}

impl fmt::Display for ConfigFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigFileError::Syntax { line, text } => {
                write!(f, "line {}: expected `name=0` or `name=1`, found `{}`", line, text)
            }
            ConfigFileError::UnknownOption { line, name } => {
                write!(f, "line {}: unknown option `{}`", line, name)
            }
            ConfigFileError::DuplicateOption { line, name } => {
                write!(f, "line {}: `{}` assigned twice", line, name)
            }
            ConfigFileError::IncompleteValuation { missing } => {
                write!(f, "incomplete configuration, missing: {}", missing.join(" "))
            }
        }
    }
}

impl std::error::Error for ConfigFileError {}

pub fn write_config(model: &DepsModel, v: &Valuation) -> String {
    let mut out = String::new();
    for id in model.options() {
        let _ = writeln!(out, "{}={}", model.name(id), v.get(id) as u8);
    }
    out
}

/// Parses a saved configuration. Blank lines and `#` comments are ignored;
/// lines may come in any order but every option must appear exactly once.
pub fn parse_config(model: &DepsModel, text: &str) -> Result<Valuation, ConfigFileError> {
    let mut values: Vec<Option<bool>> = vec![None; model.len()];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = || ConfigFileError::Syntax {
            line,
            text: content.to_string(),
        };
        let (name, bit) = content.split_once('=').ok_or_else(syntax)?;
        let (name, bit) = (name.trim(), bit.trim());
        let value = match bit {
            "0" => false,
            "1" => true,
            _ => return Err(syntax()),
        };
        let id = model.lookup(name).ok_or_else(|| ConfigFileError::UnknownOption {
            line,
            name: name.to_string(),
        })?;
        if values[id.index()].replace(value).is_some() {
            return Err(ConfigFileError::DuplicateOption {
                line,
                name: name.to_string(),
            });
        }
    }
    let missing: Vec<String> = model
        .options()
        .filter(|id| values[id.index()].is_none())
        .map(|id| model.name(id).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ConfigFileError::IncompleteValuation { missing });
    }
    Ok(Valuation(values.into_iter().map(|v| v.unwrap()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use configforge_core::parse_deps;

    #[test]
    fn round_trip() {
        let m = parse_deps("a -> b?").unwrap();
        let v = Valuation(vec![true, true, true, false]);
        let text = write_config(&m, &v);
        assert_eq!(text, "a=1\nb?=1\nb_yes=1\nb_no=0\n");
        assert_eq!(parse_config(&m, &text).unwrap(), v);
    }

    #[test]
    fn errors() {
        let m = parse_deps("a -> b").unwrap();
        assert_eq!(
            parse_config(&m, "a=1\n"),
            Err(ConfigFileError::IncompleteValuation {
                missing: vec!["b".into()]
            })
        );
        assert!(matches!(
            parse_config(&m, "a=1\nb=2\n"),
            Err(ConfigFileError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_config(&m, "a=1\nc=0\n"),
            Err(ConfigFileError::UnknownOption { line: 2, .. })
        ));
        assert!(matches!(
            parse_config(&m, "a=1\na=0\nb=1\n"),
            Err(ConfigFileError::DuplicateOption { line: 2, .. })
        ));
        assert_eq!(
            parse_config(&m, "# saved\n\nb=1\na=0 # note\n").unwrap(),
            Valuation(vec![false, true])
        );
    }
}
