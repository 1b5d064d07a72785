//! Parsing `--choices`, e.g. `c=1,b:=1-a` or `c0_2_2=3/2,c1_0_1:=2*c1_0_0-1`.
//!
//! On P^1 the three coefficients may be called `a`, `b`, `c` for
//! `a x0^2 + b x0 x1 + c x1^2`; in general `c<i>_<j>_<k>` names `c_i(j,k)`.
//! `=` and `:=` are interchangeable; right-hand sides are affine.

use projdyn_core::constructor::{CoefficientExpression, CoefficientId};
use projdyn_core::rational::{parse_rational, Rational};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("bad choice {input:?}: {reason}")]
pub struct ChoiceError {
    pub input: String,
    pub reason: String,
}

fn err(input: &str, reason: impl Into<String>) -> ChoiceError {
    ChoiceError { input: input.to_string(), reason: reason.into() }
}

pub fn parse_name(name: &str, dimension: usize) -> Result<CoefficientId, ChoiceError> {
    let id = match name {
        "a" if dimension == 1 => CoefficientId::new(0, 0, 0),
        "b" if dimension == 1 => CoefficientId::new(0, 0, 1),
        "c" if dimension == 1 => CoefficientId::new(0, 1, 1),
        _ => {
            let parts: Vec<&str> = name.strip_prefix('c').unwrap_or("").split('_').collect();
            let nums: Vec<usize> = parts.iter().filter_map(|p| p.parse().ok()).collect();
            if parts.len() != 3 || nums.len() != 3 {
                return Err(err(name, "expected a, b, c or c<i>_<j>_<k>"));
            }
            CoefficientId::new(nums[0], nums[1], nums[2])
        }
    };
    if id.coordinate >= dimension || id.k > dimension {
        return Err(err(name, format!("out of range on P^{}", dimension)));
    }
    Ok(id)
}

fn parse_term(term: &str, dimension: usize) -> Result<(Rational, Option<CoefficientId>), ChoiceError> {
    let term = term.trim();
    if term.is_empty() {
        return Err(err(term, "empty term"));
    }
    let (coef, name) = match term.split_once('*') {
        Some((c, n)) => (Some(c.trim()), Some(n.trim())),
        None if term.starts_with(|ch: char| ch.is_ascii_alphabetic()) => (None, Some(term)),
        None => (Some(term), None),
    };
    let value = match coef {
        Some(c) => parse_rational(c).map_err(|e| err(term, e.to_string()))?,
        None => Rational::from_integer(1.into()),
    };
    let id = name.map(|n| parse_name(n, dimension)).transpose()?;
    Ok((value, id))
}

pub fn parse_expression(text: &str, dimension: usize) -> Result<CoefficientExpression, ChoiceError> {
    if text.trim().is_empty() {
        return Err(err(text, "empty value"));
    }
    let mut expr = CoefficientExpression::default();
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut pieces = Vec::new();
    for (i, &ch) in bytes.iter().enumerate() {
        // A sign splits terms unless it starts the text or follows '/' or '*'.
        if (ch == b'+' || ch == b'-') && i > 0 && !matches!(bytes[i - 1], b'/' | b'*') {
            pieces.push(&text[start..i]);
            start = i;
        }
    }
    pieces.push(&text[start..]);
    for piece in pieces.into_iter().filter(|p| !p.trim().is_empty()) {
        let piece = piece.trim();
        let (negative, body) = match piece.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, piece.strip_prefix('+').unwrap_or(piece)),
        };
        let (mut value, id) = parse_term(body, dimension)?;
        if negative {
            value = -value;
        }
        let term = match id {
            Some(id) => CoefficientExpression::variable(id),
            None => CoefficientExpression::constant(Rational::from_integer(1.into())),
        };
        expr.add_scaled(&term, &value);
    }
    Ok(expr)
}

pub fn parse_choices(text: &str, dimension: usize) -> Result<Vec<(CoefficientId, CoefficientExpression)>, ChoiceError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (lhs, rhs) = item
                .split_once(":=")
                .or_else(|| item.split_once('='))
                .ok_or_else(|| err(item, "expected name=value"))?;
            Ok((parse_name(lhs.trim(), dimension)?, parse_expression(rhs, dimension)?))
        })
        .collect()
}
