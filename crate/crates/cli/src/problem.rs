//! Line-oriented problem files.
//!
//! ```text
//! vertex 1 2
//! arrow x : 1 -> 2
//! arrow y : 2 -> 1
//! order x < y
//! param t
//! unknown lam mu
//! rule x*y -> 0
//! deform x*y -> lam*e1
//! set trunc 4
//! set budget 100000
//! ```
//! `#` starts a comment. Declarations may appear in any order; rules and
//! deformations are read after all of them.

use std::collections::BTreeSet;
use std::sync::Arc;

use pathdef::text::{parse_element, Symbols};
use pathdef::{AdmissibleOrder, DeformationCochain, Element, Error, Path, Quiver, ReductionSystem, Result, Role};

/// Truncation setting from a file or flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trunc {
    Order(u32),
    Unbounded,
}

impl std::str::FromStr for Trunc {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" | "inf" => Ok(Trunc::Unbounded),
            _ => s.parse().map(Trunc::Order).map_err(|_| format!("`{s}` is not a truncation order")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub quiver: Arc<Quiver>,
    pub order: AdmissibleOrder,
    pub symbols: Symbols,
    pub system: ReductionSystem,
    /// `(s, φ̃_s)` with the line each came from.
    pub deform: Vec<(Path, Element)>,
    pub trunc: Option<Trunc>,
    pub budget: Option<u64>,
    pub cond: Option<String>,
}

/// A located error: `line L, column C: message`.
pub fn at(line: usize, col: usize, msg: impl std::fmt::Display) -> Error {
    Error::usage(format!("line {line}, column {col}: {msg}"))
}

/// Shifts the `column N:` prefix of an expression error to file columns.
fn relocate(err: Error, line: usize, start: usize) -> Error {
    match err {
        Error::Usage(msg) => {
            if let Some(rest) = msg.strip_prefix("column ") {
                if let Some((n, tail)) = rest.split_once(": ") {
                    if let Ok(n) = n.parse::<usize>() {
                        return at(line, start + n - 1, tail);
                    }
                }
            }
            at(line, start, msg)
        }
        other => other,
    }
}

/// One non-empty line with the column of each word.
pub struct Line<'a> {
    pub no: usize,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    pub fn words(&self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in self.text.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((col_of(self.text, s), &self.text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((col_of(self.text, s), &self.text[s..]));
        }
        out
    }

    /// The text after the first `n` words, with its column.
    pub fn rest_after(&self, n: usize) -> (usize, &'a str) {
        let words = self.words();
        if words.len() <= n {
            return (self.text.chars().count() + 1, "");
        }
        let byte = byte_of(self.text, words[n].0);
        (words[n].0, self.text[byte..].trim_end())
    }

    pub fn err(&self, col: usize, msg: impl std::fmt::Display) -> Error {
        at(self.no, col, msg)
    }
}

fn col_of(s: &str, byte: usize) -> usize {
    s[..byte].chars().count() + 1
}

fn byte_of(s: &str, col: usize) -> usize {
    s.char_indices().nth(col - 1).map_or(s.len(), |(b, _)| b)
}

pub fn lines(src: &str) -> impl Iterator<Item = Line<'_>> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.split('#').next().unwrap_or("");
        (!text.trim().is_empty()).then_some(Line { no: i + 1, text })
    })
}

/// Splits `lhs -> rhs`, returning both sides with their columns.
pub fn arrow_split<'a>(line: &Line<'a>, col: usize, s: &'a str) -> Result<((usize, &'a str), (usize, &'a str))> {
    let Some(pos) = s.find("->").or_else(|| s.find('→')) else {
        return Err(line.err(col, "expected `->`"));
    };
    let width = if s[pos..].starts_with("->") { 2 } else { '→'.len_utf8() };
    let lhs = s[..pos].trim();
    let rhs_raw = &s[pos + width..];
    let rhs = rhs_raw.trim();
    let lhs_col = col + s[..pos].chars().take_while(|c| c.is_whitespace()).count();
    let rhs_col = col + s[..pos + width].chars().count() + rhs_raw.chars().take_while(|c| c.is_whitespace()).count();
    if lhs.is_empty() {
        return Err(line.err(col, "missing left side"));
    }
    if rhs.is_empty() {
        return Err(line.err(rhs_col, "missing right side"));
    }
    Ok(((lhs_col, lhs), (rhs_col, rhs)))
}

pub fn parse_path_at(q: &Quiver, line: &Line<'_>, col: usize, s: &str) -> Result<Path> {
    q.parse_path(s).map_err(|e| relocate(e, line.no, col))
}

pub fn parse_element_at(q: &Arc<Quiver>, symbols: &Symbols, line: &Line<'_>, col: usize, s: &str) -> Result<Element> {
    parse_element(q, s, symbols).map_err(|e| relocate(e, line.no, col))
}

/// Declares `param`/`unknown` lines from `src` into `symbols`.
pub fn declare_symbols(src: &str, symbols: &mut Symbols) -> Result<()> {
    for line in lines(src) {
        let words = line.words();
        let role = match words[0].1 {
            "param" => Role::Param,
            "unknown" => Role::Unknown,
            _ => continue,
        };
        if words.len() < 2 {
            return Err(line.err(words[0].0, "expected at least one symbol"));
        }
        for (col, w) in &words[1..] {
            symbols.declare(w, role).map_err(|e| relocate(e, line.no, *col))?;
        }
    }
    Ok(())
}

impl Problem {
    pub fn parse(src: &str) -> Result<Problem> {
        let mut vertices: Vec<String> = Vec::new();
        let mut arrows: Vec<(String, String, String)> = Vec::new();
        let mut order_lines = Vec::new();
        let mut trunc = None;
        let mut budget = None;
        let mut cond = None;
        let mut symbols = Symbols::new();
        declare_symbols(src, &mut symbols)?;
        for line in lines(src) {
            let words = line.words();
            let (kcol, key) = words[0];
            match key {
                "vertex" => {
                    if words.len() < 2 {
                        return Err(line.err(kcol, "expected at least one vertex"));
                    }
                    for (col, w) in &words[1..] {
                        if vertices.iter().any(|v| v == w) {
                            return Err(line.err(*col, format!("vertex `{w}` declared twice")));
                        }
                        vertices.push(w.to_string());
                    }
                }
                "arrow" => {
                    let (col, rest) = line.rest_after(1);
                    let Some((name, ends)) = rest.split_once(':') else {
                        return Err(line.err(col, "expected `arrow <name> : <source> -> <target>`"));
                    };
                    let ends_col = col + name.chars().count() + 1;
                    let ((_, s), (_, t)) = arrow_split(&line, ends_col, ends)?;
                    let name = name.trim();
                    if name.is_empty() {
                        return Err(line.err(col, "missing arrow name"));
                    }
                    arrows.push((name.to_string(), s.to_string(), t.to_string()));
                }
                "order" => order_lines.push(line),
                "param" | "unknown" | "rule" | "deform" => {}
                "set" => {
                    if words.len() != 3 {
                        return Err(line.err(kcol, "expected `set <key> <value>`"));
                    }
                    let (vcol, v) = words[2];
                    match words[1].1 {
                        "trunc" => trunc = Some(v.parse::<Trunc>().map_err(|m| line.err(vcol, m))?),
                        "budget" => {
                            budget = Some(v.parse::<u64>().map_err(|_| line.err(vcol, format!("`{v}` is not a budget")))?)
                        }
                        "cond" => cond = Some(v.to_string()),
                        other => return Err(line.err(words[1].0, format!("unknown setting `{other}`"))),
                    }
                }
                other => return Err(line.err(kcol, format!("unknown keyword `{other}`"))),
            }
        }
        let arrow_refs: Vec<(&str, &str, &str)> =
            arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
        let quiver = Arc::new(Quiver::new(&vertices, &arrow_refs)?);

        let order = if order_lines.is_empty() {
            AdmissibleOrder::declaration(&quiver)
        } else {
            let mut names = Vec::new();
            for line in &order_lines {
                let (col, rest) = line.rest_after(1);
                for part in rest.split(['<', '≺']) {
                    let name = part.trim();
                    if name.is_empty() {
                        return Err(line.err(col, "empty name in order"));
                    }
                    names.push(name.to_string());
                }
            }
            let mut seen = BTreeSet::new();
            for n in &names {
                if !seen.insert(n) {
                    return Err(order_lines[0].err(1, format!("arrow `{n}` appears twice in the order")));
                }
            }
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            AdmissibleOrder::from_names(&quiver, &refs).map_err(|e| relocate(e, order_lines[0].no, 1))?
        };

        let mut rules = Vec::new();
        let mut deform: Vec<(Path, Element)> = Vec::new();
        for line in lines(src) {
            let (_, key) = line.words()[0];
            if key != "rule" && key != "deform" {
                continue;
            }
            let (col, rest) = line.rest_after(1);
            let ((lc, lhs), (rc, rhs)) = arrow_split(&line, col, rest)?;
            let s = parse_path_at(&quiver, &line, lc, lhs)?;
            let v = parse_element_at(&quiver, &symbols, &line, rc, rhs)?;
            let target = if key == "rule" { &mut rules } else { &mut deform };
            if target.iter().any(|(p, _)| *p == s) {
                return Err(line.err(lc, format!("`{lhs}` appears twice")));
            }
            target.push((s, v));
        }
        let system = ReductionSystem::from_pairs(&quiver, rules)?;
        Ok(Problem { quiver, order, symbols, system, deform, trunc, budget, cond })
    }

    /// Flag value, then file value, then order 4 when the deformation
    /// involves a formal parameter, unbounded otherwise.
    pub fn truncation(&self, flag: Option<Trunc>) -> Option<u32> {
        match flag.or(self.trunc) {
            Some(Trunc::Order(n)) => Some(n),
            Some(Trunc::Unbounded) => None,
            None => {
                let formal = self.deform.iter().any(|(_, v)| v.coefficients().any(|c| c.max_param_degree().is_some_and(|d| d > 0)));
                formal.then_some(4)
            }
        }
    }

    pub fn cochain(&self, trunc: Option<u32>) -> Result<DeformationCochain> {
        DeformationCochain::new(&self.system, self.deform.clone(), trunc)
    }
}

/// A transformation file for `gauge`: `map <arrow> -> <element>` lines for
/// `ψ`, `deform` lines for the source cochain, and extra `param`/`unknown`
/// declarations.
pub struct GaugeFile {
    pub psi: Vec<(u32, Element)>,
    pub source: Vec<(Path, Element)>,
}

impl GaugeFile {
    pub fn parse(src: &str, p: &mut Problem) -> Result<GaugeFile> {
        declare_symbols(src, &mut p.symbols)?;
        let mut psi = Vec::new();
        let mut source = Vec::new();
        for line in lines(src) {
            let (kcol, key) = line.words()[0];
            match key {
                "param" | "unknown" => {}
                "map" | "deform" => {
                    let (col, rest) = line.rest_after(1);
                    let ((lc, lhs), (rc, rhs)) = arrow_split(&line, col, rest)?;
                    let v = parse_element_at(&p.quiver, &p.symbols, &line, rc, rhs)?;
                    if key == "map" {
                        let a = p.quiver.arrow(lhs).map_err(|e| relocate(e, line.no, lc))?;
                        psi.push((a as u32, v));
                    } else {
                        source.push((parse_path_at(&p.quiver, &line, lc, lhs)?, v));
                    }
                }
                other => return Err(line.err(kcol, format!("unknown keyword `{other}`"))),
            }
        }
        Ok(GaugeFile { psi, source })
    }
}

/// `relation <element>` lines for `complete`.
pub fn parse_relations(src: &str, p: &mut Problem) -> Result<Vec<Element>> {
    declare_symbols(src, &mut p.symbols)?;
    let mut out = Vec::new();
    for line in lines(src) {
        let (kcol, key) = line.words()[0];
        match key {
            "param" | "unknown" => {}
            "relation" => {
                let (col, rest) = line.rest_after(1);
                if rest.is_empty() {
                    return Err(line.err(col, "missing relation"));
                }
                out.push(parse_element_at(&p.quiver, &p.symbols, &line, col, rest)?);
            }
            other => return Err(line.err(kcol, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(out)
}
