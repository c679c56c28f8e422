//! Line-oriented group description format.
//!
//! ```text
//! # comment
//! p=5 n=2 rank=2
//! gen:
//! 1 5
//! 0 1
//! gen:
//! 2 0
//! 0 3
//! ```
//!
//! The header may carry the bare word `symplectic`, in which case every
//! generator must be a similitude of the standard form.

use std::fmt;

use hloc_core::symplectic::{similitude_multiplier, SymplecticSpace};
use hloc_core::{Mat, ModuleSpec};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescription {
    pub p: u64,
    pub n: u32,
    pub rank: usize,
    pub symplectic: bool,
    /// Entries reduced into `[0, p^n)`.
    pub generators: Vec<Vec<Vec<u64>>>,
}

impl GroupDescription {
    pub fn spec(&self) -> ModuleSpec {
        ModuleSpec::new(self.p, self.n, self.rank).expect("validated on parse")
    }

    pub fn matrices(&self) -> Vec<Mat> {
        let r = self.rank;
        self.generators
            .iter()
            .map(|g| Mat::from_fn(r, r, |i, j| g[i][j]))
            .collect()
    }
}

/// The line with any `#` comment removed.
fn content(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_header(lineno: usize, toks: &[(usize, &str)]) -> Result<(u64, u32, usize, bool), ParseError> {
    let (mut p, mut n, mut rank, mut symplectic) = (None, None, None, false);
    for &(col, t) in toks {
        if t == "symplectic" {
            symplectic = true;
            continue;
        }
        let Some((key, value)) = t.split_once('=') else {
            return Err(err(lineno, col, format!("malformed header field '{t}'")));
        };
        let v: u64 = value
            .parse()
            .map_err(|_| err(lineno, col + key.len() + 1, format!("'{value}' is not a nonnegative integer")))?;
        let slot = match key {
            "p" => &mut p,
            "n" => &mut n,
            "rank" => &mut rank,
            _ => return Err(err(lineno, col, format!("unknown header field '{key}'"))),
        };
        if slot.replace(v).is_some() {
            return Err(err(lineno, col, format!("duplicate header field '{key}'")));
        }
    }
    let missing = |name: &str| err(lineno, 1, format!("malformed header: missing '{name}'"));
    let p = p.ok_or_else(|| missing("p"))?;
    let n = n.ok_or_else(|| missing("n"))?;
    let rank = rank.ok_or_else(|| missing("rank"))?;
    let n = u32::try_from(n).map_err(|_| err(lineno, 1, "n is too large"))?;
    ModuleSpec::new(p, n, rank as usize).map_err(|e| err(lineno, 1, format!("malformed header: {e}")))?;
    Ok((p, n, rank as usize, symplectic))
}

pub fn parse_group(text: &str) -> Result<GroupDescription, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, content(l)))
        .filter(|(_, l)| !l.trim().is_empty());

    let (hline, header) = lines.next().ok_or_else(|| err(1, 1, "empty input: expected header"))?;
    let (p, n, rank, symplectic) = parse_header(hline, &tokens(header))?;
    let spec = ModuleSpec::new(p, n, rank).expect("checked");
    let ring = spec.ring();

    let mut generators: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut gen_lines: Vec<usize> = Vec::new();
    let mut current: Option<Vec<Vec<u64>>> = None;
    let close = |m: Option<Vec<Vec<u64>>>, at: usize, gens: &mut Vec<Vec<Vec<u64>>>| -> Result<(), ParseError> {
        if let Some(m) = m {
            if m.len() != rank {
                return Err(err(at, 1, format!("generator {} has {} rows, expected {rank}", gens.len() + 1, m.len())));
            }
            gens.push(m);
        }
        Ok(())
    };
    let mut last = hline;
    for (lineno, line) in lines {
        last = lineno;
        let toks = tokens(line);
        if toks.len() == 1 && toks[0].1 == "gen:" {
            close(current.take(), lineno, &mut generators)?;
            gen_lines.push(lineno);
            current = Some(Vec::new());
            continue;
        }
        let Some(m) = current.as_mut() else {
            return Err(err(lineno, toks[0].0, "expected 'gen:' before matrix rows"));
        };
        if m.len() == rank {
            return Err(err(lineno, toks[0].0, format!("generator {} has more than {rank} rows", generators.len() + 1)));
        }
        if toks.len() != rank {
            return Err(err(
                lineno,
                toks.get(rank).map_or(1, |t| t.0),
                format!("row has {} entries, expected {rank}", toks.len()),
            ));
        }
        let row = toks
            .iter()
            .map(|&(col, t)| {
                t.parse::<i64>()
                    .map(|v| ring.reduce(v))
                    .map_err(|_| err(lineno, col, format!("'{t}' is not an integer")))
            })
            .collect::<Result<Vec<u64>, _>>()?;
        m.push(row);
    }
    close(current.take(), last + 1, &mut generators)?;

    let desc = GroupDescription {
        p,
        n,
        rank,
        symplectic,
        generators,
    };
    let space = if symplectic {
        Some(SymplecticSpace::new(spec).map_err(|e| err(hline, 1, format!("malformed header: {e}")))?)
    } else {
        None
    };
    for (k, m) in desc.matrices().iter().enumerate() {
        if !m.is_invertible(&ring) {
            return Err(err(gen_lines[k], 1, format!("generator {} not invertible", k + 1)));
        }
        if let Some(space) = &space {
            if similitude_multiplier(m, space).is_none() {
                return Err(err(gen_lines[k], 1, format!("generator {} is not a symplectic similitude", k + 1)));
            }
        }
    }
    Ok(desc)
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} n={} rank={}", self.p, self.n, self.rank)?;
        if self.symplectic {
            write!(f, " symplectic")?;
        }
        writeln!(f)?;
        for g in &self.generators {
            writeln!(f, "gen:")?;
            for row in g {
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                writeln!(f, "{}", cells.join(" "))?;
            }
        }
        Ok(())
    }
}
