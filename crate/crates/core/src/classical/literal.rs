//! Text form of phase-space polynomials.
//!
//! Grammar (whitespace is ignored everywhere):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' integer]
//! atom   := number | 'x'i | 'k'i | 'L'i | '(' expr ')'
//! ```
//!
//! Variable indices are 1-based. `L1..L3` expand to the components of `x × k`
//! and are only available when `n_c = 3`. Numbers accept scientific notation.

use std::fmt;

use super::polynomial::{angular_momentum, PhasePolynomial};
use crate::error::{Error, Result};

/// Parses a polynomial literal over `n_c` classical dimensions.
pub fn parse_polynomial(input: &str, n_c: usize) -> Result<PhasePolynomial> {
    if n_c == 0 {
        return Err(Error::InvalidDimension("n_c must be at least 1".into()));
    }
    let chars: Vec<(usize, char)> = input.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut p = Parser {
        input,
        chars,
        pos: 0,
        n_c,
    };
    if p.chars.is_empty() {
        return Err(p.error("empty polynomial"));
    }
    let out = p.expr()?;
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    n_c: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self, message: &str) -> Error {
        let position = self
            .chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.input.len());
        Error::Parse {
            input: self.input.to_string(),
            position,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<PhasePolynomial> {
        let mut sign = 1.0;
        match self.peek() {
            Some('+') => self.pos += 1,
            Some('-') => {
                sign = -1.0;
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?.scale(sign);
        while let Some(c) = self.peek() {
            let s = match c {
                '+' => 1.0,
                '-' => -1.0,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            acc = acc.add_scaled(&t, s);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PhasePolynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(c) if c.is_ascii_digit() || c == '.' || c == '(' || "xkL".contains(c) => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<PhasePolynomial> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let mut out = PhasePolynomial::one(2 * self.n_c);
            for _ in 0..e {
                out = &out * &base;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<usize> {
        let start = self.pos;
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.pos += 1;
        }
        if s.is_empty() {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        s.parse().map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<PhasePolynomial> {
        let nv = 2 * self.n_c;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c @ ('x' | 'k' | 'L')) => {
                self.pos += 1;
                let idx = self.integer()?;
                if idx == 0 {
                    return Err(self.error("variable indices start at 1"));
                }
                match c {
                    'x' | 'k' if idx > self.n_c => Err(self.error("variable index exceeds n_c")),
                    'x' => Ok(PhasePolynomial::x(self.n_c, idx - 1)),
                    'k' => Ok(PhasePolynomial::k(self.n_c, idx - 1)),
                    _ if self.n_c != 3 => Err(self.error("L components need n_c = 3")),
                    _ if idx > 3 => Err(self.error("L has three components")),
                    _ => Ok(angular_momentum()[idx - 1].clone()),
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let v = self.number()?;
                Ok(PhasePolynomial::constant(nv, v))
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit() || *c == '.') {
            s.push(c);
            self.pos += 1;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            let mut exp = String::from("e");
            self.pos += 1;
            if let Some(sign @ ('+' | '-')) = self.peek() {
                exp.push(sign);
                self.pos += 1;
            }
            let mut digits = false;
            while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
                exp.push(c);
                digits = true;
                self.pos += 1;
            }
            if digits {
                s.push_str(&exp);
            } else {
                self.pos = save;
            }
        }
        s.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.error("malformed number")
        })
    }
}

/// Literal form that [`parse_polynomial`] reads back exactly.
pub struct Literal<'a>(pub &'a PhasePolynomial);

impl fmt::Display for Literal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        if p.is_zero() {
            return write!(f, "0");
        }
        let n_c = p.n_c();
        // Highest degree first reads more naturally.
        let mut terms: Vec<_> = p.terms().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().map(|&e| e as u32).sum();
            let db: u32 = b.0.iter().map(|&e| e as u32).sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, &c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{mag:?}")?;
            for (v, &pow) in e.iter().enumerate() {
                if pow == 0 {
                    continue;
                }
                let name = if v < n_c {
                    format!("x{}", v + 1)
                } else {
                    format!("k{}", v - n_c + 1)
                };
                if pow == 1 {
                    write!(f, "*{name}")?;
                } else {
                    write!(f, "*{name}^{pow}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for PhasePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Literal(self).fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products_and_powers() {
        let p = parse_polynomial("2 * x1^2 k1 - 3.5e-1*k2 + 4", 2).unwrap();
        let x1 = PhasePolynomial::x(2, 0);
        let k1 = PhasePolynomial::k(2, 0);
        let k2 = PhasePolynomial::k(2, 1);
        let expected = &(&(&(&x1 * &x1) * &k1).scale(2.0) - &k2.scale(0.35))
            + &PhasePolynomial::constant(4, 4.0);
        assert_eq!(p, expected);
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_polynomial("x1*k1+2", 1).unwrap();
        let b = parse_polynomial(" x 1 * k 1 +  2 ", 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn angular_momentum_symbols() {
        let p = parse_polynomial("L1^2 + L2^2 + L3^2", 3).unwrap();
        let l = angular_momentum();
        let expected = &(&(&l[0] * &l[0]) + &(&l[1] * &l[1])) + &(&l[2] * &l[2]);
        assert_eq!(p, expected);
        assert!(parse_polynomial("L1", 2).is_err());
    }

    #[test]
    fn parentheses_and_unary_minus() {
        let p = parse_polynomial("-(x1 + 1)^2", 1).unwrap();
        let q = parse_polynomial("-x1^2 - 2 x1 - 1", 1).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn errors_carry_position() {
        match parse_polynomial("x1 + y2", 2) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("x3", 2).is_err());
        assert!(parse_polynomial("", 1).is_err());
        assert!(parse_polynomial("x1 +", 1).is_err());
    }

    #[test]
    fn display_reads_back() {
        let p = parse_polynomial("0.1 x1 k2^3 - 1e-7 + 3 k1", 2).unwrap();
        let text = p.to_string();
        assert_eq!(parse_polynomial(&text, 2).unwrap(), p);
        assert_eq!(PhasePolynomial::zero(2).to_string(), "0");
    }
}
