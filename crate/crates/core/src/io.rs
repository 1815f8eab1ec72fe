//! Plain-text problem files.
//!
//! ```text
//! c free-form comment
//! p ot <M> <N> <A>
//! d <i> <demand>
//! s <j> <supply>
//! a <i> <j> <cost>
//! ```
//!
//! Indices are 1-based. Costs follow the negative maximization convention;
//! numbers are written in shortest round-trip form, so writing and reading
//! back gives identical values.

use std::fmt::Write as _;

use thiserror::Error;

use crate::transport::{Arc, ProblemError, TransportProblem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Negate every cost after reading, for positive-cost minimization data.
    pub negate_costs: bool,
}

fn field<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::Line {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| ParseError::Line {
        line,
        message: format!("bad {what} {tok:?}"),
    })
}

fn index(tok: Option<&str>, line: usize, what: &str, bound: usize) -> Result<usize, ParseError> {
    let k: usize = field(tok, line, what)?;
    if k == 0 || k > bound {
        return Err(ParseError::Line {
            line,
            message: format!("{what} {k} out of range 1..={bound}"),
        });
    }
    Ok(k - 1)
}

pub fn parse_problem(text: &str, options: ParseOptions) -> Result<TransportProblem, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut demands: Vec<Option<f64>> = Vec::new();
    let mut supplies: Vec<Option<f64>> = Vec::new();
    let mut arcs = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        if kind == "c" {
            continue;
        }
        let needs_header = |h: Option<(usize, usize, usize)>| {
            h.ok_or_else(|| ParseError::Line {
                line,
                message: "data before the `p ot` header".into(),
            })
        };
        match kind {
            "p" => {
                if header.is_some() {
                    return Err(ParseError::Line {
                        line,
                        message: "second header".into(),
                    });
                }
                if toks.next() != Some("ot") {
                    return Err(ParseError::Line {
                        line,
                        message: "header must start with `p ot`".into(),
                    });
                }
                let m = field(toks.next(), line, "sink count")?;
                let n = field(toks.next(), line, "source count")?;
                let a = field(toks.next(), line, "arc count")?;
                header = Some((m, n, a));
                demands = vec![None; m];
                supplies = vec![None; n];
            }
            "d" => {
                let (m, _, _) = needs_header(header)?;
                let i = index(toks.next(), line, "sink", m)?;
                let w: f64 = field(toks.next(), line, "demand")?;
                if demands[i].replace(w).is_some() {
                    return Err(ParseError::Line {
                        line,
                        message: format!("second demand for sink {}", i + 1),
                    });
                }
            }
            "s" => {
                let (_, n, _) = needs_header(header)?;
                let j = index(toks.next(), line, "source", n)?;
                let w: f64 = field(toks.next(), line, "supply")?;
                if supplies[j].replace(w).is_some() {
                    return Err(ParseError::Line {
                        line,
                        message: format!("second supply for source {}", j + 1),
                    });
                }
            }
            "a" => {
                let (m, n, _) = needs_header(header)?;
                let i = index(toks.next(), line, "sink", m)?;
                let j = index(toks.next(), line, "source", n)?;
                let c: f64 = field(toks.next(), line, "cost")?;
                arcs.push(Arc::new(i, j, if options.negate_costs { -c } else { c }));
            }
            other => {
                return Err(ParseError::Line {
                    line,
                    message: format!("unknown line type {other:?}"),
                });
            }
        }
        if let Some(extra) = toks.next() {
            return Err(ParseError::Line {
                line,
                message: format!("unexpected token {extra:?}"),
            });
        }
    }
    let (_, _, a) = header.ok_or_else(|| ParseError::Structure("missing `p ot` header".into()))?;
    if arcs.len() != a {
        return Err(ParseError::Structure(format!(
            "header declares {a} arcs but {} found",
            arcs.len()
        )));
    }
    let collect = |v: Vec<Option<f64>>, what: &str| {
        v.into_iter()
            .enumerate()
            .map(|(k, w)| {
                w.ok_or_else(|| {
                    ParseError::Structure(format!("no {what} line for index {}", k + 1))
                })
            })
            .collect::<Result<Vec<f64>, _>>()
    };
    let demands = collect(demands, "demand")?;
    let supplies = collect(supplies, "supply")?;
    Ok(TransportProblem::new(demands, supplies, arcs)?)
}

/// Serializes a problem; each comment becomes a `c` line before the header.
pub fn write_problem(problem: &TransportProblem, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(
        out,
        "p ot {} {} {}",
        problem.num_sinks(),
        problem.num_sources(),
        problem.num_arcs()
    );
    for (i, d) in problem.demands().iter().enumerate() {
        let _ = writeln!(out, "d {} {}", i + 1, d);
    }
    for (j, s) in problem.supplies().iter().enumerate() {
        let _ = writeln!(out, "s {} {}", j + 1, s);
    }
    for a in problem.arcs() {
        let _ = writeln!(out, "a {} {} {}", a.sink + 1, a.source + 1, a.cost);
    }
    out
}
