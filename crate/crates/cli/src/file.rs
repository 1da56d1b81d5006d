//! Curve-file format: flat key = value sections.
//!
//! ```text
//! [curve]
//! name = cusp
//! f = y^2 - x^3
//! precision = 16
//! expected.invariants.mu = 2
//!
//! [branch]
//! x = t^2
//! y = t^3
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. Expressions use the
//! series input grammar; branch expressions are in `t` and may be seeds that
//! the loader refines onto the curve by Newton iteration.

use std::collections::BTreeMap;
use std::path::Path;

use saito_core::series::expr::{parse_expr, var_set, Expr};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct CurveFile {
    pub name: String,
    pub f: Option<Expr>,
    pub precision: Option<usize>,
    pub expected: BTreeMap<String, String>,
    /// `(x(t), y(t))` expression pairs, one per `[branch]` section.
    pub branches: Vec<(Expr, Expr)>,
}

pub fn load_curve(path: &Path) -> Result<CurveFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    let fallback = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".to_string());
    parse_curve(&text, &fallback)
}

pub fn parse_curve(text: &str, fallback_name: &str) -> Result<CurveFile, CliError> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Curve,
        Branch,
    }

    let syntax = |line: usize, msg: String| CliError::Syntax {
        location: format!("line {}", line),
        msg,
    };

    let mut section = Section::None;
    let mut name = fallback_name.to_string();
    let mut f_text: Option<(usize, String)> = None;
    let mut precision: Option<usize> = None;
    let mut expected = BTreeMap::new();
    let mut branch_texts: Vec<(Option<(usize, String)>, Option<(usize, String)>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            "[curve]" => {
                section = Section::Curve;
                continue;
            }
            "[branch]" => {
                section = Section::Branch;
                branch_texts.push((None, None));
                continue;
            }
            _ if line.starts_with('[') => {
                return Err(syntax(lineno, format!("unknown section '{}'", line)));
            }
            _ => {}
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| syntax(lineno, "expected 'key = value'".into()))?;
        if value.is_empty() {
            return Err(syntax(lineno, format!("empty value for '{}'", key)));
        }
        match section {
            Section::None => {
                return Err(syntax(lineno, "key outside of any section".into()));
            }
            Section::Curve => match key {
                "name" => name = value.to_string(),
                "f" => f_text = Some((lineno, value.to_string())),
                "precision" => {
                    precision = Some(value.parse().map_err(|_| {
                        syntax(lineno, format!("precision '{}' is not a positive integer", value))
                    })?);
                    if precision == Some(0) {
                        return Err(syntax(lineno, "precision must be positive".into()));
                    }
                }
                k if k.starts_with("expected.") => {
                    expected.insert(k["expected.".len()..].to_string(), value.to_string());
                }
                k => return Err(syntax(lineno, format!("unknown [curve] key '{}'", k))),
            },
            Section::Branch => {
                let slot = branch_texts.last_mut().unwrap();
                match key {
                    "x" => slot.0 = Some((lineno, value.to_string())),
                    "y" => slot.1 = Some((lineno, value.to_string())),
                    k => return Err(syntax(lineno, format!("unknown [branch] key '{}'", k))),
                }
            }
        }
    }

    let xy = var_set(&["x", "y"]);
    let tv = var_set(&["t"]);
    let parse = |vars: &std::collections::BTreeSet<String>, lineno: usize, s: &str| {
        parse_expr(s, vars).map_err(|e| CliError::Syntax {
            location: format!("line {}", lineno),
            msg: e.to_string(),
        })
    };

    let f = match f_text {
        Some((lineno, s)) => Some(parse(&xy, lineno, &s)?),
        None => None,
    };
    let mut branches = Vec::new();
    for (i, (xs, ys)) in branch_texts.into_iter().enumerate() {
        let (xl, xs) = xs.ok_or_else(|| CliError::Syntax {
            location: format!("[branch] {}", i + 1),
            msg: "missing x".into(),
        })?;
        let (yl, ys) = ys.ok_or_else(|| CliError::Syntax {
            location: format!("[branch] {}", i + 1),
            msg: "missing y".into(),
        })?;
        branches.push((parse(&tv, xl, &xs)?, parse(&tv, yl, &ys)?));
    }
    if f.is_none() && branches.is_empty() {
        return Err(CliError::MissingCurve);
    }
    Ok(CurveFile { name, f, precision, expected, branches })
}
