//! Recursive-descent parser for polynomial expressions over `A[x_1..x_m]`.
//!
//! Grammar (whitespace is free everywhere):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power ('*' power)*
//! power  := atom ['^' integer]
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! The base variable (if any) lands in the coefficient; every other
//! identifier must be one of the graded variables.

use std::collections::BTreeMap;

use crate::base_ring::{BaseRing, RingElem};
use crate::error::{Error, Result};

/// Sparse polynomial: exponent vector over the graded variables -> coefficient in `A`.
pub type PolyMap = BTreeMap<Vec<u32>, RingElem>;

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_polynomial(ring: &BaseRing, vars: &[&str], text: &str) -> Result<PolyMap> {
    let mut parser = Parser {
        ring,
        vars,
        text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    ring: &'a BaseRing,
    vars: &'a [&'a str],
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            input: self.text.to_string(),
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<PolyMap> {
        let mut negate = false;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { self.neg(first) } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.add(acc, t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    let t = self.neg(t);
                    acc = self.add(acc, t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyMap> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = self.mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<PolyMap> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            let mut acc = self.one();
            for _ in 0..e {
                acc = self.mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut value: u64 = 0;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((self.bytes[self.pos] - b'0') as u64))
                .ok_or_else(|| self.error("integer literal too large"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        Ok(value)
    }

    fn atom(&mut self) -> Result<PolyMap> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let c = (n % self.ring.modulus() as u64) as u32;
                Ok(self.constant(RingElem::from_raw(&[c])))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                if Some(name) == self.ring.variable() {
                    return Ok(self.constant(RingElem::from_raw(&[0, 1])));
                }
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => {
                        let mut exps = vec![0u32; self.vars.len()];
                        exps[i] = 1;
                        let mut m = PolyMap::new();
                        m.insert(exps, RingElem::one());
                        Ok(m)
                    }
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable {name:?}")))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn one(&self) -> PolyMap {
        self.constant(RingElem::one())
    }

    fn constant(&self, c: RingElem) -> PolyMap {
        let mut m = PolyMap::new();
        if !c.is_zero() {
            m.insert(vec![0; self.vars.len()], c);
        }
        m
    }

    fn neg(&self, a: PolyMap) -> PolyMap {
        a.into_iter().map(|(k, v)| (k, self.ring.neg(&v))).collect()
    }

    fn add(&self, mut a: PolyMap, b: PolyMap) -> PolyMap {
        for (k, v) in b {
            let sum = match a.get(&k) {
                Some(x) => self.ring.add(x, &v),
                None => v,
            };
            if sum.is_zero() {
                a.remove(&k);
            } else {
                a.insert(k, sum);
            }
        }
        a
    }

    fn mul(&self, a: &PolyMap, b: &PolyMap) -> PolyMap {
        let mut out = PolyMap::new();
        for (ka, va) in a {
            for (kb, vb) in b {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                let prod = self.ring.mul(va, vb);
                let sum = match out.get(&k) {
                    Some(x) => self.ring.add(x, &prod),
                    None => prod,
                };
                if sum.is_zero() {
                    out.remove(&k);
                } else {
                    out.insert(k, sum);
                }
            }
        }
        out
    }
}
