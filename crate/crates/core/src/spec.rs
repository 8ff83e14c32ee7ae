//! Diagram spec files.
//!
//! ```text
//! # watermelon
//! loops = 3
//! externals = 0
//! order = 8
//! line: p1 ; power = 1
//! line: p2 ; power = 1
//! line: p3 ; power = 1
//! line: p1 + p2 + p3 ; power = 1
//! ```
//!
//! Line momenta are integer combinations of `p1..pL` and `k1..kE` with
//! optional multipliers (`2*p1 - k1`); powers are positive rationals or a
//! symbol `a<k>`.

use std::str::FromStr;

use thiserror::Error;

use crate::algebra::{rational::parse_rational, Rational, Var};
use crate::diagram::{Diagram, DiagramError, Line, LinePower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("{line}:{column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("invalid diagram: {0}")]
    Validation(#[from] DiagramError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dimension {
    Symbolic,
    Numeric(Rational),
}

impl FromStr for Dimension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "D" {
            return Ok(Dimension::Symbolic);
        }
        match parse_rational(s) {
            Some(r) if r > Rational::from_integer(0.into()) => Ok(Dimension::Numeric(r)),
            Some(_) => Err(format!("dimension must be positive, got '{s}'")),
            None => Err(format!("expected an integer, a rational or 'D', got '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Format::Plain),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (plain, latex, json)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verify {
    None,
    Psi,
    Laguerre,
}

impl FromStr for Verify {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Verify::None),
            "psi" => Ok(Verify::Psi),
            "laguerre" => Ok(Verify::Laguerre),
            _ => Err(format!("unknown verification '{s}' (psi, laguerre)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub order: u32,
    pub dimension: Dimension,
    pub format: Format,
    pub verify: Verify,
    pub kappa_probe: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 8,
            dimension: Dimension::Symbolic,
            format: Format::Plain,
            verify: Verify::None,
            kappa_probe: 0.1,
        }
    }
}

pub const MAX_ORDER: u32 = 16;

impl RunConfig {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.order > MAX_ORDER {
            return Err(SpecError::Config(format!(
                "order {} outside [0, {MAX_ORDER}]",
                self.order
            )));
        }
        if !(0.0..=0.3).contains(&self.kappa_probe) {
            return Err(SpecError::Config(format!(
                "kappa probe {} outside [0, 0.3]",
                self.kappa_probe
            )));
        }
        Ok(())
    }
}

/// Parses and validates a spec file.
pub fn parse_spec(text: &str) -> Result<(Diagram, RunConfig), SpecError> {
    let mut loops: Option<usize> = None;
    let mut externals: Option<usize> = None;
    let mut config = RunConfig::default();
    let mut raw_lines: Vec<(usize, usize, &str, LinePower)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let err = |col: usize, msg: String| SpecError::Parse {
            line: lineno,
            column: col,
            msg,
        };
        let col_of = |s: &str| s.as_ptr() as usize - raw.as_ptr() as usize + 1;

        if let Some(rest) = content.trim_start().strip_prefix("line:") {
            let (expr, power) = rest.split_once(';').ok_or_else(|| {
                err(col_of(rest) + rest.len(), "expected '; power = ...'".into())
            })?;
            let (key, value) = power
                .split_once('=')
                .ok_or_else(|| err(col_of(power), "expected 'power = ...'".into()))?;
            if key.trim() != "power" {
                return Err(err(col_of(key.trim_start()), format!("expected 'power', found '{}'", key.trim())));
            }
            let power = parse_power(value.trim())
                .ok_or_else(|| err(col_of(value.trim_start()), format!("bad power '{}'", value.trim())))?;
            raw_lines.push((lineno, col_of(expr), expr, power));
            continue;
        }

        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(col_of(content.trim_start()), "expected 'key = value' or 'line: ...'".into()))?;
        let value_col = col_of(value.trim_start());
        let value = value.trim();
        let int = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| err(value_col, format!("expected a non-negative integer, found '{v}'")))
        };
        match key.trim() {
            "loops" => loops = Some(int(value)?),
            "externals" => externals = Some(int(value)?),
            "order" => config.order = int(value)? as u32,
            "dimension" => config.dimension = value.parse().map_err(|m| err(value_col, m))?,
            other => return Err(err(col_of(key.trim_start()), format!("unknown key '{other}'"))),
        }
    }

    let loops = loops.ok_or_else(|| SpecError::Parse {
        line: 1,
        column: 1,
        msg: "missing 'loops = <int>'".into(),
    })?;
    let externals = externals.unwrap_or(0);
    let lines = raw_lines
        .into_iter()
        .map(|(lineno, col, expr, power)| {
            let routing = parse_momentum(expr, loops, externals).map_err(|(off, msg)| {
                SpecError::Parse {
                    line: lineno,
                    column: col + off,
                    msg,
                }
            })?;
            Ok(Line { routing, power })
        })
        .collect::<Result<Vec<_>, SpecError>>()?;
    let diagram = Diagram::new(loops, externals, lines)?;
    config.validate()?;
    Ok((diagram, config))
}

fn parse_power(s: &str) -> Option<LinePower> {
    if let Some(idx) = s.strip_prefix('a') {
        let k: u16 = idx.parse().ok()?;
        return Some(LinePower::Symbolic(k.checked_sub(1)?));
    }
    parse_rational(s).map(LinePower::Numeric)
}

/// Integer combination of `p1..pL, k1..kE`; errors carry a byte offset into `expr`.
fn parse_momentum(expr: &str, loops: usize, externals: usize) -> Result<Vec<i64>, (usize, String)> {
    let mut routing = vec![0i64; loops + externals];
    let bytes = expr.as_bytes();
    let mut pos = 0;
    let skip = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let digits = |pos: &mut usize| -> Option<i64> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        expr[start..*pos].parse().ok()
    };
    let mut first = true;
    loop {
        skip(&mut pos);
        if pos == bytes.len() {
            if first {
                return Err((pos, "empty momentum".into()));
            }
            break;
        }
        let mut sign = 1;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                sign = -1;
                pos += 1;
            }
            _ if first => {}
            c => return Err((pos, format!("expected '+' or '-', found '{}'", c as char))),
        }
        first = false;
        skip(&mut pos);
        let mut mult = 1;
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            mult = digits(&mut pos).ok_or((pos, "bad multiplier".to_string()))?;
            skip(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip(&mut pos);
            }
        }
        let start = pos;
        let (kind, limit, offset) = match bytes.get(pos) {
            Some(b'p') => ("p", loops, 0),
            Some(b'k') => ("k", externals, loops),
            _ => return Err((pos, "expected a momentum p<i> or k<j>".into())),
        };
        pos += 1;
        let index = digits(&mut pos).ok_or((pos, format!("expected an index after '{kind}'")))?;
        if index < 1 || index as usize > limit {
            return Err((start, format!("{kind}{index} out of range (1..={limit})")));
        }
        routing[offset + index as usize - 1] += sign * mult;
    }
    Ok(routing)
}

/// Parses `sI_J=VALUE` items into a symmetric `e × e` matrix; unset entries are 0.
pub fn parse_invariants<S: AsRef<str>>(items: &[S], e: usize) -> Result<Vec<Vec<f64>>, String> {
    let mut s = vec![vec![0.0; e]; e];
    for item in items {
        let item = item.as_ref();
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| format!("invariant '{item}' must look like s1_1=0.25"))?;
        let var = Var::parse(name.trim());
        let Some(Var::S(i, j)) = var else {
            return Err(format!("'{name}' is not an invariant s<i>_<j>"));
        };
        let (i, j) = (i as usize, j as usize);
        if j >= e {
            return Err(format!("'{name}' out of range for {e} external momenta"));
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("bad invariant value '{value}'"))?;
        s[i][j] = v;
        s[j][i] = v;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::frac;

    const WATERMELON: &str = "\
# watermelon
loops = 3
externals = 0
line: p1 ; power = 1
line: p2 ; power = 1
line: p3 ; power = 1
line: p1 + p2 + p3 ; power = 1
";

    #[test]
    fn watermelon_spec() {
        let (d, cfg) = parse_spec(WATERMELON).unwrap();
        assert_eq!(d, Diagram::watermelon());
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn multipliers_and_rational_power() {
        let text = "loops = 1\nexternals = 1\nline: 2*p1 - k1 ; power = 3/2\n";
        let (d, _) = parse_spec(text).unwrap();
        assert_eq!(d.lines()[0].routing, vec![2, -1]);
        assert_eq!(d.lines()[0].power, LinePower::Numeric(frac(3, 2)));
    }

    #[test]
    fn zero_power_is_a_validation_error() {
        let text = "loops = 1\nline: p1 ; power = 0\n";
        assert_eq!(
            parse_spec(text),
            Err(SpecError::Validation(DiagramError::NonPositivePower { line: 1 }))
        );
    }

    #[test]
    fn symbolic_power_and_options() {
        let text = "loops = 1\norder = 5\ndimension = 3/2 # comment\nline: -p1 ; power = a1\n";
        let (d, cfg) = parse_spec(text).unwrap();
        assert_eq!(d.lines()[0].power, LinePower::Symbolic(0));
        assert_eq!(d.lines()[0].routing, vec![-1]);
        assert_eq!(cfg.order, 5);
        assert_eq!(cfg.dimension, Dimension::Numeric(frac(3, 2)));
    }

    #[test]
    fn error_positions() {
        let text = "loops = 2\nline: p1 + q2 ; power = 1\n";
        match parse_spec(text) {
            Err(SpecError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 12)),
            other => panic!("{other:?}"),
        }
        let text = "loops = 1\nline: p3 ; power = 1\n";
        assert!(matches!(
            parse_spec(text),
            Err(SpecError::Parse { line: 2, column: 7, .. })
        ));
        let text = "loops = x\n";
        assert!(matches!(
            parse_spec(text),
            Err(SpecError::Parse { line: 1, column: 9, .. })
        ));
        assert!(matches!(
            parse_spec("loops = 1\norder = 17\nline: p1 ; power = 1\n"),
            Err(SpecError::Config(_))
        ));
        assert!(matches!(parse_spec("colour = red\n"), Err(SpecError::Parse { .. })));
    }

    #[test]
    fn invariants() {
        let s = parse_invariants(&["s1_2 = 0.5", "s2_2=1"], 2).unwrap();
        assert_eq!(s, vec![vec![0.0, 0.5], vec![0.5, 1.0]]);
        assert!(parse_invariants(&["s1_3=1"], 2).is_err());
        assert!(parse_invariants(&["a1=1"], 1).is_err());
    }
}
