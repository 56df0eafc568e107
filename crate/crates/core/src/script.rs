//! Op-script text format: one operation per line.
//!
//! ```text
//! # comment
//! U <width> <height> <x>    drop a rectangle with its left border at x
//! Q <width> <height>        ask where a rectangle should go
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::rdds::{GreedyMove, Rdds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Update { width: i64, height: i64, x: i64 },
    Query { width: i64, height: i64 },
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Op::Update { width, height, x } => write!(f, "U {width} {height} {x}"),
            Op::Query { width, height } => write!(f, "Q {width} {height}"),
        }
    }
}

/// Result of applying one [`Op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Update { resulting_max: i64 },
    Query(GreedyMove),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Update { resulting_max } => write!(f, "{resulting_max}"),
            Outcome::Query(m) => write!(f, "{} {} {}", m.x, m.landing, m.resulting_max),
        }
    }
}

impl Op {
    pub fn apply(&self, rdds: &mut Rdds) -> Result<Outcome> {
        match *self {
            Op::Update { width, height, x } => Ok(Outcome::Update {
                resulting_max: rdds.update(width, height, x)?,
            }),
            Op::Query { width, height } => Ok(Outcome::Query(rdds.query(width, height)?)),
        }
    }
}

/// Parse a script into `(line number, op)` pairs. Line numbers start at 1.
pub fn parse_script(text: &str) -> Result<Vec<(usize, Op)>> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let mut fields = body.split_whitespace();
        let kind = fields.next().unwrap();
        let nums = fields
            .map(|f| {
                f.parse::<i64>()
                    .map_err(|_| err(format!("expected an integer, found {f:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let op = match (kind, nums.as_slice()) {
            ("U", &[width, height, x]) => Op::Update { width, height, x },
            ("Q", &[width, height]) => Op::Query { width, height },
            ("U", _) => return Err(err("expected `U <width> <height> <x>`".into())),
            ("Q", _) => return Err(err("expected `Q <width> <height>`".into())),
            (other, _) => return Err(err(format!("unknown operation {other:?}"))),
        };
        ops.push((line, op));
    }
    Ok(ops)
}

pub fn format_script(ops: &[Op]) -> String {
    let mut out = String::new();
    for op in ops {
        out.push_str(&op.to_string());
        out.push('\n');
    }
    out
}
