//! Exact arithmetic in the coefficient ring `A`, either `F_p` or `F_p[u]`.
//!
//! Both kinds share one element representation: a dense coefficient vector,
//! lowest degree first, with no trailing zeros. Elements of `F_p` are simply
//! the constants. All arithmetic goes through [`BaseRing`], which carries the
//! modulus and the variable name; elements themselves are plain data.

mod factor;
mod ideal;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::expr;

pub use factor::Factorization;
pub use ideal::{IdealA, NormalizedIdeal, PrimeIdealA};

/// Largest admissible modulus. Products of two residues must fit in a `u64`.
pub const MAX_MODULUS: u32 = 1 << 16;

/// Default seed for the randomized equal-degree splitting step.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingKind {
    PrimeField,
    UnivariatePoly,
}

/// The coefficient ring `A`.
///
/// Equality ignores the splitting seed: two rings with the same kind, modulus
/// and variable are the same ring.
#[derive(Clone, Debug)]
pub struct BaseRing {
    kind: RingKind,
    p: u32,
    var: Option<Arc<str>>,
    seed: u64,
}

impl PartialEq for BaseRing {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.p == other.p && self.var == other.var
    }
}

impl Eq for BaseRing {}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_modulus(p: u32) -> Result<()> {
    if p > MAX_MODULUS {
        return Err(Error::InvalidArgument(format!(
            "modulus {p} exceeds {MAX_MODULUS}"
        )));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

/// An element of `A`: coefficients mod p, lowest degree first, no trailing zeros.
#[derive(Debug, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    coeffs: SmallVec<[u32; 4]>,
}

impl Clone for RingElem {
    fn clone(&self) -> Self {
        RingElem {
            coeffs: SmallVec::from_slice(&self.coeffs),
        }
    }
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem::default()
    }

    /// `n` zeros.
    pub fn zeros(n: usize) -> Vec<Self> {
        std::iter::repeat_with(RingElem::zero).take(n).collect()
    }

    pub fn one() -> Self {
        RingElem::from_raw(&[1])
    }

    /// Builds an element from residues that are already reduced mod p.
    pub fn from_raw(coeffs: &[u32]) -> Self {
        let mut e = RingElem {
            coeffs: SmallVec::from_slice(coeffs),
        };
        e.trim();
        e
    }

    fn from_vec(coeffs: SmallVec<[u32; 4]>) -> Self {
        let mut e = RingElem { coeffs };
        e.trim();
        e
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.as_slice() == [1]
    }

    /// Canonical order: by degree, then lexicographically by ascending coefficients.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.as_slice().cmp(other.coeffs.as_slice()))
    }
}

impl BaseRing {
    pub fn prime_field(p: u32) -> Result<Self> {
        check_modulus(p)?;
        Ok(BaseRing {
            kind: RingKind::PrimeField,
            p,
            var: None,
            seed: DEFAULT_SEED,
        })
    }

    pub fn univariate(p: u32, var: &str) -> Result<Self> {
        check_modulus(p)?;
        if !expr::is_identifier(var) {
            return Err(Error::InvalidArgument(format!(
                "{var:?} is not a valid variable name"
            )));
        }
        Ok(BaseRing {
            kind: RingKind::UnivariatePoly,
            p,
            var: Some(Arc::from(var)),
            seed: DEFAULT_SEED,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn variable(&self) -> Option<&str> {
        self.var.as_deref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_field(&self) -> bool {
        self.kind == RingKind::PrimeField
    }

    /// Krull dimension of `A`.
    pub fn dimension(&self) -> usize {
        match self.kind {
            RingKind::PrimeField => 0,
            RingKind::UnivariatePoly => 1,
        }
    }

    // ---- scalar arithmetic mod p ----

    #[inline]
    fn sadd(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    fn ssub(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        ((a as u64 + p - b as u64) % p) as u32
    }

    #[inline]
    fn smul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn sinv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let mut base = a as u64;
        let mut e = self.p as u64 - 2;
        let m = self.p as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as u32
    }

    /// Reduces an arbitrary signed integer into `F_p`.
    pub fn residue(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn constant(&self, c: i64) -> RingElem {
        RingElem::from_raw(&[self.residue(c)])
    }

    /// The variable `u`; an error over a prime field.
    pub fn var_elem(&self) -> Result<RingElem> {
        match self.kind {
            RingKind::UnivariatePoly => Ok(RingElem::from_raw(&[0, 1])),
            RingKind::PrimeField => Err(Error::InvalidArgument(
                "prime field has no variable".into(),
            )),
        }
    }

    /// Builds an element from signed coefficients, lowest degree first.
    pub fn elem(&self, coeffs: &[i64]) -> RingElem {
        RingElem::from_vec(coeffs.iter().map(|&c| self.residue(c)).collect())
    }

    // ---- ring operations ----

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out: SmallVec<[u32; 4]> = SmallVec::with_capacity(n);
        for i in 0..n {
            let x = a.coeffs.get(i).copied().unwrap_or(0);
            let y = b.coeffs.get(i).copied().unwrap_or(0);
            out.push(self.sadd(x, y));
        }
        RingElem::from_vec(out)
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut out: SmallVec<[u32; 4]> = SmallVec::with_capacity(n);
        for i in 0..n {
            let x = a.coeffs.get(i).copied().unwrap_or(0);
            let y = b.coeffs.get(i).copied().unwrap_or(0);
            out.push(self.ssub(x, y));
        }
        RingElem::from_vec(out)
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem::from_vec(a.coeffs.iter().map(|&c| self.ssub(0, c)).collect())
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        if a.is_zero() || b.is_zero() {
            return RingElem::zero();
        }
        let mut out: SmallVec<[u32; 4]> = SmallVec::from_elem(0, a.coeffs.len() + b.coeffs.len() - 1);
        let p = self.p as u64;
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        RingElem::from_vec(out)
    }

    pub fn scale(&self, a: &RingElem, c: u32) -> RingElem {
        let c = c % self.p;
        if c == 0 {
            return RingElem::zero();
        }
        RingElem::from_vec(a.coeffs.iter().map(|&x| self.smul(x, c)).collect())
    }

    /// `a + c*b`, the workhorse of row and column operations.
    pub fn add_mul(&self, a: &RingElem, c: &RingElem, b: &RingElem) -> RingElem {
        if c.is_zero() || b.is_zero() {
            return a.clone();
        }
        self.add(a, &self.mul(c, b))
    }

    pub fn pow(&self, a: &RingElem, mut e: u64) -> RingElem {
        let mut base = a.clone();
        let mut acc = RingElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Division with remainder: `a = q*b + r`, `deg r < deg b`.
    pub fn div_rem(&self, a: &RingElem, b: &RingElem) -> Result<(RingElem, RingElem)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = b.coeffs.len() - 1;
        if a.coeffs.len() < b.coeffs.len() {
            return Ok((RingElem::zero(), a.clone()));
        }
        let inv_lc = self.sinv(b.leading());
        let mut rem: SmallVec<[u32; 4]> = a.coeffs.clone();
        let mut quot: SmallVec<[u32; 4]> = SmallVec::from_elem(0, a.coeffs.len() - db);
        for k in (0..quot.len()).rev() {
            let c = self.smul(rem[k + db], inv_lc);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[k + j] = self.ssub(rem[k + j], self.smul(c, bj));
            }
        }
        rem.truncate(db);
        Ok((RingElem::from_vec(quot), RingElem::from_vec(rem)))
    }

    pub fn rem(&self, a: &RingElem, b: &RingElem) -> Result<RingElem> {
        Ok(self.div_rem(a, b)?.1)
    }

    /// `a / b` when the division is exact, `None` otherwise.
    pub fn exact_div(&self, a: &RingElem, b: &RingElem) -> Option<RingElem> {
        match self.div_rem(a, b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Does `a` divide `b`? Zero divides only zero.
    pub fn divides(&self, a: &RingElem, b: &RingElem) -> bool {
        if a.is_zero() {
            return b.is_zero();
        }
        self.rem(b, a).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        a.coeffs.len() == 1
    }

    pub fn unit_inverse(&self, a: &RingElem) -> Result<RingElem> {
        if !self.is_unit(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(RingElem::from_raw(&[self.sinv(a.coeffs[0])]))
    }

    /// Splits `a` into its leading coefficient and monic part. Zero stays zero.
    pub fn monic_parts(&self, a: &RingElem) -> (u32, RingElem) {
        if a.is_zero() {
            return (0, RingElem::zero());
        }
        let lc = a.leading();
        (lc, self.scale(a, self.sinv(lc)))
    }

    pub fn monic(&self, a: &RingElem) -> RingElem {
        self.monic_parts(a).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &RingElem, b: &RingElem) -> RingElem {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `g = s a + t b` the monic gcd; `xgcd(0, 0) = (0, 0, 0)`.
    pub fn xgcd(&self, a: &RingElem, b: &RingElem) -> (RingElem, RingElem, RingElem) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (RingElem::one(), RingElem::zero());
        let (mut t0, mut t1) = (RingElem::zero(), RingElem::one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1).expect("nonzero divisor");
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        if r0.is_zero() {
            return (RingElem::zero(), RingElem::zero(), RingElem::zero());
        }
        let inv = self.unit_inverse(&RingElem::from_raw(&[r0.leading()])).expect("unit");
        (self.mul(&r0, &inv), self.mul(&s0, &inv), self.mul(&t0, &inv))
    }

    /// Formal derivative.
    pub fn derivative(&self, a: &RingElem) -> RingElem {
        if a.coeffs.len() <= 1 {
            return RingElem::zero();
        }
        RingElem::from_vec(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.smul(c, (i as u64 % self.p as u64) as u32))
                .collect(),
        )
    }

    /// `a^e mod m`.
    pub fn pow_mod(&self, a: &RingElem, mut e: u64, m: &RingElem) -> Result<RingElem> {
        let mut base = self.rem(a, m)?;
        let mut acc = self.rem(&RingElem::one(), m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.rem(&self.mul(&base, &base), m)?;
            }
        }
        Ok(acc)
    }

    pub fn belongs(&self, a: &RingElem) -> bool {
        a.coeffs.iter().all(|&c| c < self.p) && (self.kind == RingKind::UnivariatePoly || a.is_constant())
    }

    // ---- text form ----

    /// Renders with explicit ascending terms, e.g. `1 + 2*u + u^3`.
    pub fn render(&self, a: &RingElem) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let var = self.var.as_deref().unwrap_or("u");
        let mut terms = Vec::new();
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => var.to_string(),
                (1, c) => format!("{c}*{var}"),
                (i, 1) => format!("{var}^{i}"),
                (i, c) => format!("{c}*{var}^{i}"),
            };
            terms.push(t);
        }
        terms.join(" + ")
    }

    /// Parses the rendering grammar (and general `+ - * ^ ( )` expressions).
    pub fn parse(&self, text: &str) -> Result<RingElem> {
        let poly = expr::parse_polynomial(self, &[], text)?;
        Ok(poly.into_iter().next().map(|(_, c)| c).unwrap_or_default())
    }

    pub fn display<'a>(&'a self, a: &'a RingElem) -> impl fmt::Display + 'a {
        struct D<'a>(&'a BaseRing, &'a RingElem);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render(self.1))
            }
        }
        D(self, a)
    }
}
