//! Line-oriented text formats. `#` starts a comment everywhere.
//!
//! Gluing matrix:
//!
//! ```text
//! vertices s t u
//! edge s t 3
//! order 2
//! column s t : 1 3
//! ```
//!
//! Presentation: `gen <name>` lines, then `rel <name>^<e> ...` lines.
//!
//! Weyl data: `weyl order <q>`, `vertices`, `edge` lines, then one
//! `residue <a> <b>` header per edge followed by its `suite:` lines, where the
//! suite labels are the vertex names `a` and `b`.

use std::fmt::Write as _;

use singer_core::polygon::{Gallery, Label};
use singer_core::presentation::{GroupPresentation, Word};
use singer_core::weyl::{CoxeterMatrix, GluedEdge, GluingMatrix, WeylGraphData, WeylResidue};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Domain(#[from] singer_core::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number<T: std::str::FromStr>(line: usize, word: &str) -> Result<T, FormatError> {
    word.parse().map_err(|_| syntax(line, format!("expected a number, found `{word}`")))
}

/// Parses `0,1,3` (spaces allowed around commas).
pub fn parse_list(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|w| w.trim().parse::<u32>().map_err(|_| format!("`{}` is not a nonnegative integer", w.trim())))
        .collect()
}

pub fn parse_gluing(text: &str) -> Result<GluingMatrix, FormatError> {
    let mut coxeter: Option<CoxeterMatrix> = None;
    let mut q = None;
    let mut columns = Vec::new();
    for (n, words) in lines(text) {
        match words[0] {
            "vertices" => {
                if coxeter.is_some() {
                    return Err(syntax(n, "vertices declared twice"));
                }
                coxeter = Some(CoxeterMatrix::new(words[1..].iter().copied())?);
            }
            "edge" => {
                let c = coxeter.as_mut().ok_or_else(|| syntax(n, "edge before vertices"))?;
                let [_, a, b, m] = words[..] else {
                    return Err(syntax(n, "expected `edge <a> <b> <m>`"));
                };
                c.add_edge(a, b, number(n, m)?)?;
            }
            "order" => {
                let [_, value] = words[..] else {
                    return Err(syntax(n, "expected `order <q>`"));
                };
                if q.replace(number(n, value)?).is_some() {
                    return Err(syntax(n, "order declared twice"));
                }
            }
            "column" => {
                if words.len() < 4 || words[3] != ":" {
                    return Err(syntax(n, "expected `column <a> <b> : <values>`"));
                }
                let column = words[4..].iter().map(|w| number(n, w)).collect::<Result<_, _>>()?;
                columns.push(GluedEdge { from: words[1].into(), to: words[2].into(), column });
            }
            other => return Err(syntax(n, format!("unknown keyword `{other}`"))),
        }
    }
    let coxeter = coxeter.ok_or_else(|| syntax(0, "missing `vertices` line"))?;
    let q = q.ok_or_else(|| syntax(0, "missing `order` line"))?;
    Ok(GluingMatrix { coxeter, q, columns })
}

fn write_graph(out: &mut String, c: &CoxeterMatrix) {
    writeln!(out, "vertices {}", c.vertices().join(" ")).unwrap();
    for (a, b, m) in c.edges() {
        writeln!(out, "edge {a} {b} {m}").unwrap();
    }
}

pub fn write_gluing(g: &GluingMatrix) -> String {
    let mut out = String::new();
    write_graph(&mut out, &g.coxeter);
    writeln!(out, "order {}", g.q).unwrap();
    for c in &g.columns {
        let values: Vec<String> = c.column.iter().map(u32::to_string).collect();
        writeln!(out, "column {} {} : {}", c.from, c.to, values.join(" ")).unwrap();
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<GroupPresentation, FormatError> {
    let mut generators: Vec<String> = Vec::new();
    let mut relators = Vec::new();
    for (n, words) in lines(text) {
        match words[0] {
            "gen" => {
                let [_, name] = words[..] else {
                    return Err(syntax(n, "expected `gen <name>`"));
                };
                if !relators.is_empty() {
                    return Err(syntax(n, "generators must precede relators"));
                }
                generators.push(name.into());
            }
            "rel" => {
                let syllables = words[1..]
                    .iter()
                    .map(|w| {
                        let (name, e) = match w.split_once('^') {
                            Some((name, e)) => (name, number::<i64>(n, e)?),
                            None => (*w, 1),
                        };
                        let g = generators
                            .iter()
                            .position(|x| x == name)
                            .ok_or_else(|| syntax(n, format!("undeclared generator `{name}`")))?;
                        Ok((g, e))
                    })
                    .collect::<Result<Vec<_>, FormatError>>()?;
                relators.push(Word::new(syllables));
            }
            other => return Err(syntax(n, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(GroupPresentation::new(generators, relators)?)
}

pub fn write_weyl(w: &WeylGraphData) -> String {
    let mut out = format!("weyl order {}\n", w.q);
    write_graph(&mut out, &w.coxeter);
    for r in &w.residues {
        writeln!(out, "residue {} {}", r.from, r.to).unwrap();
        for s in &r.suites {
            write!(out, "suite: {}", s.start()).unwrap();
            for &(label, c) in s.steps() {
                let name = if label == Label::S { &r.from } else { &r.to };
                write!(out, " {name} {c}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

pub fn parse_weyl(text: &str) -> Result<WeylGraphData, FormatError> {
    let mut q = None;
    let mut coxeter: Option<CoxeterMatrix> = None;
    let mut residues: Vec<WeylResidue> = Vec::new();
    for (n, words) in lines(text) {
        match words[0] {
            "weyl" => {
                let ["weyl", "order", value] = words[..] else {
                    return Err(syntax(n, "expected `weyl order <q>`"));
                };
                q = Some(number(n, value)?);
            }
            "vertices" => coxeter = Some(CoxeterMatrix::new(words[1..].iter().copied())?),
            "edge" => {
                let c = coxeter.as_mut().ok_or_else(|| syntax(n, "edge before vertices"))?;
                let [_, a, b, m] = words[..] else {
                    return Err(syntax(n, "expected `edge <a> <b> <m>`"));
                };
                c.add_edge(a, b, number(n, m)?)?;
            }
            "residue" => {
                let c = coxeter.as_ref().ok_or_else(|| syntax(n, "residue before vertices"))?;
                let [_, a, b] = words[..] else {
                    return Err(syntax(n, "expected `residue <a> <b>`"));
                };
                let m = c
                    .m(a, b)
                    .filter(|&m| m >= 2)
                    .ok_or_else(|| syntax(n, format!("{a} {b} is not an edge")))?;
                residues.push(WeylResidue { from: a.into(), to: b.into(), m, omega: None, suites: Vec::new() });
            }
            "suite:" => {
                let r = residues.last_mut().ok_or_else(|| syntax(n, "suite before any residue"))?;
                if words.len() % 2 != 0 {
                    return Err(syntax(n, "a suite alternates chambers and labels"));
                }
                let start = number(n, words[1])?;
                let steps = words[2..]
                    .chunks(2)
                    .map(|pair| {
                        let label = if pair[0] == r.from {
                            Label::S
                        } else if pair[0] == r.to {
                            Label::T
                        } else {
                            return Err(syntax(n, format!("label `{}` is not {} or {}", pair[0], r.from, r.to)));
                        };
                        Ok((label, number(n, pair[1])?))
                    })
                    .collect::<Result<_, _>>()?;
                r.suites.push(Gallery::new(start, steps));
            }
            other => return Err(syntax(n, format!("unknown keyword `{other}`"))),
        }
    }
    let q = q.ok_or_else(|| syntax(0, "missing `weyl order` line"))?;
    let coxeter = coxeter.ok_or_else(|| syntax(0, "missing `vertices` line"))?;
    Ok(WeylGraphData { q, coxeter, residues })
}
