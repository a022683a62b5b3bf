//! Text formats for networks and CNF formulas.
//!
//! Network files are line oriented:
//!
//! ```text
//! # two-node example
//! vars 2
//! cpt 0 0.6
//! parents 1 0
//! cpt 1 0.2 0.9
//! ```
//!
//! `parents <child> <p1> .. <pk>` may be omitted for roots. `cpt <child>`
//! lists `P(child=1 | row)` for every parent row, first parent most
//! significant. Formulas use DIMACS, where variable `k` is `VariableId(k-1)`.
//! A comment line consisting of `c query`, `c evidence`, `c extracted` or
//! `c derived` sets the provenance of the clauses that follow.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{BeliefNetwork, Clause, CnfFormula, Cpt, Literal, Provenance, VariableId};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{tok}`")))
}

pub fn parse_network(text: &str) -> Result<BeliefNetwork> {
    let mut n: Option<usize> = None;
    let mut parents: Vec<Option<Vec<VariableId>>> = Vec::new();
    let mut tables: Vec<Option<(usize, Vec<f64>)>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut toks = content.split_whitespace();
        let Some(directive) = toks.next() else { continue };
        if directive == "vars" {
            if n.is_some() {
                return Err(parse_err(line, "duplicate `vars`"));
            }
            let count: usize = number(
                toks.next().ok_or_else(|| parse_err(line, "`vars` needs a count"))?,
                line,
                "a count",
            )?;
            if toks.next().is_some() {
                return Err(parse_err(line, "trailing tokens after `vars`"));
            }
            n = Some(count);
            parents = vec![None; count];
            tables = vec![None; count];
            continue;
        }
        let count = n.ok_or_else(|| parse_err(line, "missing vars"))?;
        let child: usize = number(
            toks.next()
                .ok_or_else(|| parse_err(line, format!("`{directive}` needs a variable")))?,
            line,
            "a variable index",
        )?;
        if child >= count {
            return Err(parse_err(line, format!("variable {child} out of range (vars {count})")));
        }
        match directive {
            "parents" => {
                if parents[child].is_some() {
                    return Err(parse_err(line, format!("duplicate parents for {child}")));
                }
                let ps = toks
                    .map(|t| {
                        let p: usize = number(t, line, "a variable index")?;
                        if p >= count {
                            return Err(parse_err(line, format!("variable {p} out of range (vars {count})")));
                        }
                        Ok(VariableId(p))
                    })
                    .collect::<Result<Vec<_>>>()?;
                parents[child] = Some(ps);
            }
            "cpt" => {
                if tables[child].is_some() {
                    return Err(parse_err(line, format!("duplicate cpt for {child}")));
                }
                let vals = toks
                    .map(|t| number(t, line, "a probability"))
                    .collect::<Result<Vec<f64>>>()?;
                tables[child] = Some((line, vals));
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
    }

    let n = n.ok_or_else(|| parse_err(0, "missing vars"))?;
    let mut cpts = Vec::with_capacity(n);
    for (v, table) in tables.into_iter().enumerate() {
        let Some((line, table)) = table else {
            return Err(Error::MissingCpt(VariableId(v)));
        };
        let ps = parents[v].take().unwrap_or_default();
        let cpt = Cpt::new(v, ps, table).map_err(|e| parse_err(line, e.to_string()))?;
        cpts.push(cpt);
    }
    BeliefNetwork::new(n, cpts)
}

pub fn read_network(path: impl AsRef<Path>) -> Result<BeliefNetwork> {
    parse_network(&std::fs::read_to_string(path)?)
}

pub fn serialize_network(net: &BeliefNetwork) -> String {
    serialize_network_with(net, &[])
}

/// Like [`serialize_network`] with leading `#` comment lines.
pub fn serialize_network_with(net: &BeliefNetwork, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "vars {}", net.len());
    for cpt in net.cpts() {
        if !cpt.parents().is_empty() {
            let _ = write!(out, "parents {}", cpt.child());
            for p in cpt.parents() {
                let _ = write!(out, " {p}");
            }
            out.push('\n');
        }
        let _ = write!(out, "cpt {}", cpt.child());
        for v in cpt.table() {
            // `{}` on f64 prints the shortest string that parses back exactly.
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// A parsed DIMACS file plus the header it declared.
#[derive(Clone, Debug, PartialEq)]
pub struct DimacsFile {
    pub formula: CnfFormula,
    pub declared_vars: usize,
    pub declared_clauses: usize,
    pub warnings: Vec<String>,
}

fn marker(line: &str) -> Option<Provenance> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some("c") {
        return None;
    }
    let p = match toks.next()? {
        "query" => Provenance::Query,
        "evidence" => Provenance::Evidence,
        "extracted" => Provenance::Extracted,
        "derived" => Provenance::Derived,
        _ => return None,
    };
    toks.next().is_none().then_some(p)
}

pub fn parse_dimacs_file(text: &str) -> Result<DimacsFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut provenance = Provenance::Query;
    let mut formula = CnfFormula::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut read = 0usize;

    'lines: for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "c" || trimmed.starts_with("c ") || trimmed.starts_with("c\t") {
            if let Some(p) = marker(trimmed) {
                provenance = p;
            }
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(line, "duplicate header"));
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(parse_err(line, format!("malformed header `{trimmed}`")));
            }
            header = Some((
                number(toks[2], line, "a variable count")?,
                number(toks[3], line, "a clause count")?,
            ));
            continue;
        }
        let (nvars, _) = header.ok_or_else(|| parse_err(line, "clause before `p cnf` header"))?;
        for tok in trimmed.split_whitespace() {
            if tok == "%" {
                break 'lines;
            }
            let k: i64 = number(tok, line, "a literal")?;
            if k == 0 {
                read += 1;
                // Tautologies are satisfied by every assignment and dropped.
                formula.add(pending.drain(..), provenance);
                continue;
            }
            let idx = k.unsigned_abs() as usize;
            if idx > nvars {
                return Err(parse_err(line, format!("variable {idx} out of range (p cnf {nvars})")));
            }
            pending.push(Literal::new(idx - 1, k > 0));
        }
    }

    let (declared_vars, declared_clauses) = header.ok_or_else(|| parse_err(0, "missing `p cnf` header"))?;
    let mut warnings = Vec::new();
    if !pending.is_empty() {
        read += 1;
        formula.add(pending.drain(..), provenance);
        warnings.push("last clause is not terminated by 0".to_string());
    }
    if read != declared_clauses {
        warnings.push(format!("header declares {declared_clauses} clauses, found {read}"));
    }
    Ok(DimacsFile {
        formula,
        declared_vars,
        declared_clauses,
        warnings,
    })
}

/// Parses DIMACS text. Count mismatches are tolerated; see
/// [`parse_dimacs_file`] for the warnings.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    parse_dimacs_file(text).map(|f| f.formula)
}

pub fn read_dimacs(path: impl AsRef<Path>) -> Result<DimacsFile> {
    parse_dimacs_file(&std::fs::read_to_string(path)?)
}

pub fn serialize_cnf(formula: &CnfFormula) -> String {
    serialize_cnf_with(formula, 0, &[])
}

/// DIMACS with at least `vars` declared variables and leading comments. A
/// provenance marker precedes each run of clauses with the same provenance.
pub fn serialize_cnf_with(formula: &CnfFormula, vars: usize, comments: &[String]) -> String {
    let n = formula.max_variable().map_or(0, |v| v.0 + 1).max(vars);
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p cnf {n} {}", formula.len());
    let mut current: Option<Provenance> = None;
    for (clause, prov) in formula.entries() {
        if current != Some(*prov) {
            let _ = writeln!(out, "c {}", prov.name());
            current = Some(*prov);
        }
        out.push_str(&dimacs_clause(clause));
        out.push('\n');
    }
    out
}

fn dimacs_clause(c: &Clause) -> String {
    let mut s = String::new();
    for l in c.literals() {
        let k = l.var.0 as i64 + 1;
        let _ = write!(s, "{} ", if l.positive { k } else { -k });
    }
    s.push('0');
    s
}

/// Formats a probability with 12 significant digits, keeping trailing
/// zeros, as C's `%#.12g` does: `0.68` prints as `0.680000000000`.
pub fn format_probability(p: f64) -> String {
    const DIGITS: i32 = 12;
    if !p.is_finite() {
        return p.to_string();
    }
    if p == 0.0 {
        return format!("{:.*}", (DIGITS - 1) as usize, 0.0);
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, p);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        format!("{:.*}", (DIGITS - 1 - exp) as usize, p)
    }
}
