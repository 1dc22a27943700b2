//! Text syntax for stable class functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := rational | 'z' | 'Ind(' phi ')' ('^(' int ')')?
//!         | 'a[' int ',' int ']' | 'sInd{' (phi ':[' ints ']') ';'... '}'
//!         | '(' expr ')'
//! phi    := 'phi' int | int | character name
//! ```
//! `z` is the primitive root of unity of order equal to the group's exponent.
//! A plain `^k` raises to the k-th power; `^(k)` on `Ind` is the power twist.

use super::stable::{Monomial, StableFunction};
use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Rational};
use crate::groups::FiniteGroup;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    g: &'a FiniteGroup,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn starts_with(&mut self, kw: &str) -> bool {
        self.skip_ws();
        self.s[self.pos..].starts_with(kw.as_bytes())
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii").parse().or_else(|_| self.err("number too large"))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn phi(&mut self) -> Result<usize> {
        let name = self.ident();
        let count = self.g.irreducible_count();
        let idx = if let Ok(k) = name.parse::<usize>() {
            Some(k)
        } else if let Some(k) = name.strip_prefix("phi").and_then(|r| r.parse::<usize>().ok()) {
            Some(k)
        } else {
            self.g.characters()?.names.iter().position(|n| *n == name)
        };
        match idx {
            Some(k) if k < count => Ok(k),
            _ => self.err(format!("unknown character '{name}'")),
        }
    }

    fn expr(&mut self) -> Result<StableFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?, self.g)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?, self.g)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<StableFunction> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?, self.g)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<StableFunction> {
        if self.eat(b'-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') && self.s.get(self.pos + 1) != Some(&b'(') {
            self.pos += 1;
            let k = self.uint()?;
            let mut acc = StableFunction::constant(Cyclo::one());
            for _ in 0..k {
                acc = acc.mul(&base, self.g)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<StableFunction> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()? as i64;
                let den = if self.eat(b'/') { self.uint()? as i64 } else { 1 };
                if den == 0 {
                    return self.err("zero denominator");
                }
                Ok(StableFunction::constant(Cyclo::from_rational(Rational::new(num.into(), den.into()))))
            }
            _ if self.starts_with("sInd{") => {
                self.pos += 5;
                let mut parts = Vec::new();
                if !self.eat(b'}') {
                    loop {
                        let phi = self.phi()?;
                        self.expect(b':')?;
                        self.expect(b'[')?;
                        loop {
                            let k = self.uint()?;
                            if k == 0 {
                                return self.err("parts must be positive");
                            }
                            parts.push((k as u32, phi));
                            if !self.eat(b',') {
                                break;
                            }
                        }
                        self.expect(b']')?;
                        if !self.eat(b';') {
                            break;
                        }
                    }
                    self.expect(b'}')?;
                }
                Ok(StableFunction::sind(Monomial::new(parts)))
            }
            _ if self.starts_with("Ind(") => {
                self.pos += 4;
                let phi = self.phi()?;
                self.expect(b')')?;
                let mut k = 1;
                if self.starts_with("^(") {
                    self.pos += 2;
                    k = self.uint()?;
                    self.expect(b')')?;
                    if k == 0 {
                        return self.err("power twist must be positive");
                    }
                }
                Ok(StableFunction::ind_power(phi, k as u32))
            }
            _ if self.starts_with("a[") => {
                self.pos += 2;
                let t = self.uint()?;
                self.expect(b',')?;
                let c = self.uint()? as usize;
                self.expect(b']')?;
                if t == 0 || c >= self.g.class_count() {
                    return self.err(format!("no generator a[{t},{c}]"));
                }
                Ok(StableFunction::a(t as u32, c))
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(StableFunction::constant(Cyclo::zeta(self.g.conductor)))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
        }
    }
}

impl StableFunction {
    pub fn parse(text: &str, group: &FiniteGroup) -> Result<StableFunction> {
        let mut p = Parser { s: text.as_bytes(), pos: 0, g: group };
        let f = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(f)
    }
}

/// Parses a bare multi-partition such as `phi0:[2,1]; phi1:[1]` or `[2,1]`
/// (the latter labels every part by the trivial character).
pub fn parse_multipartition(text: &str, group: &FiniteGroup) -> Result<Monomial> {
    let t = text.trim();
    let body = t.strip_prefix("sInd{").and_then(|r| r.strip_suffix('}')).unwrap_or(t);
    let wrapped = if body.trim_start().starts_with('[') { format!("sInd{{phi0:{body}}}") } else { format!("sInd{{{body}}}") };
    let f = StableFunction::parse(&wrapped, group)?;
    Ok(f.terms().keys().next().cloned().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::stable::Basis;

    #[test]
    fn parses_mixed_expressions() {
        let g = FiniteGroup::sym3();
        let f = StableFunction::parse("Ind(std)^(2) - 2*Ind(phi0) + 1/2", &g).unwrap();
        assert_eq!(f.terms().len(), 3);
        assert_eq!(f.constant_term(), Cyclo::from_frac(1, 2));
        let h = StableFunction::parse("sInd{phi0:[2,1]; sgn:[1]}", &g).unwrap();
        assert_eq!(h, StableFunction::sind(Monomial::new(vec![(2, 0), (1, 0), (1, 1)])));
        let a = StableFunction::parse("a[2,1]*a[1,0]", &g).unwrap();
        assert_eq!(a.basis(), Basis::A);
        assert!(StableFunction::parse("Ind(phi7)", &g).is_err());
        assert!(StableFunction::parse("Ind(phi0", &g).is_err());
    }

    #[test]
    fn display_round_trip() {
        let g = FiniteGroup::cyclic(3);
        let f = StableFunction::parse("(1/2 + 3*z)*Ind(phi1)^(2)*Ind(phi2) - z^2 + a[1,1]", &g).unwrap();
        let text = f.display(&g).to_string();
        assert_eq!(StableFunction::parse(&text, &g).unwrap(), f, "{text}");
    }

    #[test]
    fn bare_multipartitions() {
        let g = FiniteGroup::cyclic(2);
        assert_eq!(parse_multipartition("[2,1]", &g).unwrap(), Monomial::new(vec![(2, 0), (1, 0)]));
        assert_eq!(parse_multipartition("phi1:[1]; phi0:[3]", &g).unwrap(), Monomial::new(vec![(3, 0), (1, 1)]));
    }
}
