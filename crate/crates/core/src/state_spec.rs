//! Text format for naming a state on the command line.
//!
//! ```text
//! schmidt3:l0,l1,l2,l3,l4[,phi]
//! wclass:a,b,c
//! haar:d1xd2x...:seed
//! ```
//!
//! Whitespace is ignored anywhere. Numeric arguments accept decimal
//! literals and small expressions such as `sqrt(6)/6` or `1/sqrt(3)`
//! built from `+ - * /`, parentheses, `sqrt(..)` and `pi`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::states::{self, PureState, StateError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecParseError {
    #[error("unknown state family '{0}' (expected schmidt3, wclass or haar)")]
    UnknownFamily(String),
    #[error("{family} takes {expected} arguments, got {actual}")]
    Arity {
        family: &'static str,
        expected: &'static str,
        actual: usize,
    },
    #[error("bad number '{0}'")]
    Number(String),
    #[error("bad dimension list '{0}'")]
    Dims(String),
    #[error("bad seed '{0}'")]
    Seed(String),
    #[error("missing ':' after the state family")]
    MissingColon,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Schmidt3 { lambdas: [f64; 5], phi: f64 },
    WClass { a: f64, b: f64, c: f64 },
    Haar { dims: Vec<usize>, seed: u64 },
}

impl StateSpec {
    pub fn build(&self) -> Result<PureState, StateError> {
        match self {
            StateSpec::Schmidt3 { lambdas, phi } => states::schmidt3_state(*lambdas, *phi),
            StateSpec::WClass { a, b, c } => states::w_class_state(*a, *b, *c),
            StateSpec::Haar { dims, seed } => states::haar_random_pure(dims, *seed),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Schmidt3 { lambdas, phi } => {
                let l: Vec<String> = lambdas.iter().map(|x| x.to_string()).collect();
                write!(f, "schmidt3:{},{}", l.join(","), phi)
            }
            StateSpec::WClass { a, b, c } => write!(f, "wclass:{a},{b},{c}"),
            StateSpec::Haar { dims, seed } => {
                let d: Vec<String> = dims.iter().map(|x| x.to_string()).collect();
                write!(f, "haar:{}:{}", d.join("x"), seed)
            }
        }
    }
}

impl FromStr for StateSpec {
    type Err = SpecParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (family, rest) = compact
            .split_once(':')
            .ok_or(SpecParseError::MissingColon)?;
        match family.to_ascii_lowercase().as_str() {
            "schmidt3" => {
                let args = parse_args(rest)?;
                if args.len() != 5 && args.len() != 6 {
                    return Err(SpecParseError::Arity {
                        family: "schmidt3",
                        expected: "5 or 6",
                        actual: args.len(),
                    });
                }
                let mut lambdas = [0.0; 5];
                lambdas.copy_from_slice(&args[..5]);
                let phi = args.get(5).copied().unwrap_or(0.0);
                Ok(StateSpec::Schmidt3 { lambdas, phi })
            }
            "wclass" => {
                let args = parse_args(rest)?;
                if args.len() != 3 {
                    return Err(SpecParseError::Arity {
                        family: "wclass",
                        expected: "3",
                        actual: args.len(),
                    });
                }
                Ok(StateSpec::WClass {
                    a: args[0],
                    b: args[1],
                    c: args[2],
                })
            }
            "haar" => {
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 2 {
                    return Err(SpecParseError::Arity {
                        family: "haar",
                        expected: "2 (dims and seed)",
                        actual: parts.len(),
                    });
                }
                let dims = parts[0]
                    .split(['x', 'X'])
                    .map(|d| d.parse::<usize>().ok().filter(|&d| d > 0))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| SpecParseError::Dims(parts[0].to_string()))?;
                let seed = parts[1]
                    .parse::<u64>()
                    .map_err(|_| SpecParseError::Seed(parts[1].to_string()))?;
                Ok(StateSpec::Haar { dims, seed })
            }
            other => Err(SpecParseError::UnknownFamily(other.to_string())),
        }
    }
}

/// Splits on commas outside parentheses and evaluates each piece.
fn parse_args(s: &str) -> Result<Vec<f64>, SpecParseError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_number(&s[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(parse_number(&s[start..])?);
    Ok(out)
}

/// Evaluates a numeric literal or a small arithmetic expression.
pub fn parse_number(s: &str) -> Result<f64, SpecParseError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parser = ExprParser {
        src: compact.as_bytes(),
        pos: 0,
    };
    let value = parser.expr();
    match value {
        Some(v) if parser.pos == parser.src.len() && v.is_finite() => Ok(v),
        _ => Err(SpecParseError::Number(s.to_string())),
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Option<f64> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= self.term()?;
            } else {
                return Some(acc);
            }
        }
    }

    fn term(&mut self) -> Option<f64> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc *= self.factor()?;
            } else if self.eat(b'/') {
                acc /= self.factor()?;
            } else {
                return Some(acc);
            }
        }
    }

    fn factor(&mut self) -> Option<f64> {
        if self.eat(b'-') {
            return self.factor().map(|v| -v);
        }
        if self.eat(b'+') {
            return self.factor();
        }
        if self.eat(b'(') {
            let v = self.expr()?;
            return self.eat(b')').then_some(v);
        }
        let rest = &self.src[self.pos..];
        if rest.starts_with(b"sqrt(") {
            self.pos += 5;
            let v = self.expr()?;
            return self.eat(b')').then_some(v.sqrt());
        }
        if rest.starts_with(b"pi") {
            self.pos += 2;
            return Some(std::f64::consts::PI);
        }
        self.literal()
    }

    fn literal(&mut self) -> Option<f64> {
        let start = self.pos;
        while let Some(b) = self.peek() {
            let exponent_sign = (b == b'-' || b == b'+')
                && self.pos > start
                && matches!(self.src[self.pos - 1], b'e' | b'E');
            if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || exponent_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_expressions() {
        assert_eq!(parse_number("0.5").unwrap(), 0.5);
        assert_eq!(parse_number(" 1e-3 ").unwrap(), 1e-3);
        assert_eq!(parse_number("2.5E+2").unwrap(), 250.0);
        assert_eq!(parse_number("sqrt(6)/6").unwrap(), 6f64.sqrt() / 6.0);
        assert_eq!(parse_number("1/sqrt(3)").unwrap(), 1.0 / 3f64.sqrt());
        assert_eq!(parse_number("-(1+2)*3").unwrap(), -9.0);
        assert_eq!(parse_number("pi/4").unwrap(), std::f64::consts::FRAC_PI_4);
        for bad in ["", "abc", "1..2", "sqrt(2", "1/0", "1e"] {
            assert!(parse_number(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parses_families() {
        let spec: StateSpec = "schmidt3: 0.5, sqrt(6)/6, sqrt(6)/6, 0.5, sqrt(6)/6"
            .parse()
            .unwrap();
        let s = 6f64.sqrt() / 6.0;
        assert_eq!(
            spec,
            StateSpec::Schmidt3 {
                lambdas: [0.5, s, s, 0.5, s],
                phi: 0.0
            }
        );
        let spec: StateSpec = "schmidt3:1,0,0,0,0,pi/2".parse().unwrap();
        assert!(
            matches!(spec, StateSpec::Schmidt3 { phi, .. } if phi == std::f64::consts::FRAC_PI_2)
        );
        let spec: StateSpec = "wclass:0.5,0.5,0.70710678".parse().unwrap();
        assert!(spec.build().is_ok());
        let spec: StateSpec = "haar:2x2x2:7".parse().unwrap();
        assert_eq!(
            spec,
            StateSpec::Haar {
                dims: vec![2, 2, 2],
                seed: 7
            }
        );
        assert_eq!(spec.to_string(), "haar:2x2x2:7");
    }

    #[test]
    fn strict_on_arity() {
        assert!(matches!(
            "schmidt3:1,0,0,0".parse::<StateSpec>(),
            Err(SpecParseError::Arity { actual: 4, .. })
        ));
        assert!(matches!(
            "wclass:1,0".parse::<StateSpec>(),
            Err(SpecParseError::Arity { actual: 2, .. })
        ));
        assert!(matches!(
            "haar:2x2".parse::<StateSpec>(),
            Err(SpecParseError::Arity { .. })
        ));
        assert!(matches!(
            "haar:2x0:1".parse::<StateSpec>(),
            Err(SpecParseError::Dims(_))
        ));
        assert!(matches!(
            "haar:2x2:-1".parse::<StateSpec>(),
            Err(SpecParseError::Seed(_))
        ));
        assert!(matches!(
            "ghz:1".parse::<StateSpec>(),
            Err(SpecParseError::UnknownFamily(_))
        ));
        assert!(matches!(
            "wclass".parse::<StateSpec>(),
            Err(SpecParseError::MissingColon)
        ));
    }
}
