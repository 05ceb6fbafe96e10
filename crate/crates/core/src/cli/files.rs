//! Input files for the command line: graphs, polynomials and grid sets.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{make_context, CyclotomicContext};
use crate::graphenc::Digraph;
use crate::polyring::{parse_constant, parse_polynomial, GridSpec, Polynomial, VariableSpace, ROOT_SYMBOL};

pub(crate) fn read(path: &Path) -> std::result::Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub(crate) fn read_graph(path: &Path) -> std::result::Result<Digraph, String> {
    Digraph::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// A polynomial file: optional `order N` and `vars a b c` header lines, then
/// the expression (possibly over several lines). `#` starts a comment line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub order: u32,
    pub vars: Vec<String>,
    pub expr: String,
}

impl PolyFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut order = 1;
        let mut vars = None;
        let mut expr = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("order ") {
                order = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(k + 1, format!("invalid order `{}`", rest.trim())))?;
            } else if let Some(rest) = line.strip_prefix("vars ") {
                vars = Some(rest.split_whitespace().map(String::from).collect());
            } else {
                expr.push(line);
            }
        }
        let expr = expr.join(" ");
        if expr.is_empty() {
            return Err(Error::parse(
                text.lines().count().max(1),
                "missing polynomial expression",
            ));
        }
        let vars = vars.unwrap_or_else(|| infer_vars(&expr));
        Ok(PolyFile { order, vars, expr })
    }

    pub fn context(&self) -> Result<CyclotomicContext> {
        make_context(self.order)
    }

    pub fn polynomial(&self) -> Result<Polynomial> {
        let space = VariableSpace::unbounded(self.vars.iter().cloned())?;
        parse_polynomial(&self.expr, &space, &self.context()?)
    }
}

/// Identifiers other than the root symbol, sorted.
fn infer_vars(expr: &str) -> Vec<String> {
    let mut names: Vec<String> = expr
        .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|t| t.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') && *t != ROOT_SYMBOL)
        .map(String::from)
        .collect();
    names.sort();
    names.dedup();
    names
}

/// One node set per line, entries separated by commas or whitespace.
pub fn parse_sets(text: &str, ctx: &CyclotomicContext) -> Result<GridSpec> {
    let mut sets = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let items: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
        } else {
            line.split_whitespace().collect()
        };
        let set = items
            .iter()
            .map(|item| parse_constant(item, ctx).map_err(|e| Error::parse(k + 1, format!("`{item}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        sets.push(set);
    }
    GridSpec::full(sets)
}
