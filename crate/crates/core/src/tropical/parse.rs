use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Coefficient, LaurentPolynomial};
use crate::error::{Error, Result};
use crate::lattice::{Int, IntVector, Rat};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Naming {
    Letters,
    Indexed,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    naming: Option<Naming>,
}

type RawTerm = (BTreeMap<usize, Int>, Coefficient);

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.pos, msg)
    }

    fn digits(&mut self) -> Option<Int> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            std::str::from_utf8(&self.src[start..self.pos])
                .expect("ascii digits")
                .parse()
                .expect("digits form an integer")
        })
    }

    fn exponent(&mut self) -> Result<Int> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        self.skip_ws();
        let v = self
            .digits()
            .ok_or_else(|| self.err("expected an integer exponent"))?;
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(if neg { -v } else { v })
    }

    fn variable(&mut self) -> Result<Option<usize>> {
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let start = self.pos;
        let (naming, index) = match c {
            b'x' => {
                self.pos += 1;
                match self.digits() {
                    Some(k) => {
                        let k: usize = k
                            .try_into()
                            .map_err(|_| self.err("variable index too large"))?;
                        if k == 0 {
                            return Err(self.err("variables are numbered from x1"));
                        }
                        (Naming::Indexed, k - 1)
                    }
                    None => (Naming::Letters, 0),
                }
            }
            b'y' => {
                self.pos += 1;
                (Naming::Letters, 1)
            }
            b'z' => {
                self.pos += 1;
                (Naming::Letters, 2)
            }
            _ => return Ok(None),
        };
        match self.naming {
            Some(m) if m != naming => Err(Error::parse(
                start,
                "cannot mix x, y, z with indexed variables x1, x2, …",
            )),
            _ => {
                self.naming = Some(naming);
                Ok(Some(index))
            }
        }
    }

    fn coefficient(&mut self) -> Result<Option<Coefficient>> {
        match self.peek() {
            Some(b'g') => {
                self.pos += 1;
                Ok(Some(Coefficient::Generic))
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.digits().expect("digit present");
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let q = self
                        .digits()
                        .ok_or_else(|| self.err("expected a denominator"))?;
                    if q.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Some(Coefficient::Rational(Rat::new(p, q))))
                } else {
                    Ok(Some(Coefficient::Rational(Rat::from_integer(p))))
                }
            }
            _ => Ok(None),
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let start = self.pos;
        let coef = self.coefficient()?;
        let mut exps: BTreeMap<usize, Int> = BTreeMap::new();
        let mut need_factor = false;
        loop {
            if self.peek() == Some(b'*') {
                if coef.is_none() && exps.is_empty() {
                    return Err(self.err("'*' without a left operand"));
                }
                self.pos += 1;
                need_factor = true;
            }
            match self.variable()? {
                Some(i) => {
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.exponent()?
                    } else {
                        Int::from(1)
                    };
                    *exps.entry(i).or_insert_with(Int::zero) += e;
                    need_factor = false;
                }
                None if need_factor => return Err(self.err("expected a variable after '*'")),
                None => break,
            }
        }
        if coef.is_none() && exps.is_empty() {
            self.pos = self.pos.max(start);
            return Err(self.err("expected a term"));
        }
        Ok((
            exps,
            coef.unwrap_or_else(|| Coefficient::Rational(Rat::from_integer(Int::from(1)))),
        ))
    }

    fn polynomial(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (e, c) = self.term()?;
            terms.push((e, if negate { c.neg() } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return Err(self.err("expected '+', '-' or end of input")),
            }
            self.pos += 1;
        }
        Ok(terms)
    }
}

fn assemble(terms: Vec<RawTerm>, n: usize) -> Result<LaurentPolynomial> {
    let mut map: BTreeMap<IntVector, Coefficient> = BTreeMap::new();
    for (exps, c) in terms {
        let mut v = vec![Int::zero(); n];
        for (i, e) in exps {
            v[i] = e;
        }
        let key = IntVector::new(v);
        let merged = match map.remove(&key) {
            Some(prev) => prev.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            map.insert(key, merged);
        }
    }
    LaurentPolynomial::new(n, map)
}

fn parse_raw(text: &str) -> Result<(Vec<RawTerm>, usize)> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        naming: None,
    };
    if p.peek().is_none() {
        return Err(p.err("empty input"));
    }
    let terms = p.polynomial()?;
    let used = terms
        .iter()
        .flat_map(|(e, _)| e.keys().copied())
        .max()
        .map_or(0, |m| m + 1);
    Ok((terms, used))
}

/// Parses a Laurent polynomial, inferring the number of variables from the
/// largest variable that occurs.
pub fn parse_laurent(text: &str) -> Result<LaurentPolynomial> {
    let (terms, used) = parse_raw(text)?;
    assemble(terms, used)
}

/// Parses a Laurent polynomial in exactly `n` variables.
pub fn parse_laurent_in(text: &str, n: usize) -> Result<LaurentPolynomial> {
    let (terms, used) = parse_raw(text)?;
    if used > n {
        return Err(Error::parse(
            0,
            format!("polynomial uses {used} variables but only {n} are available"),
        ));
    }
    assemble(terms, n)
}
