//! Factorization over `F_p[u]`: square-free decomposition, distinct-degree
//! factorization and randomized equal-degree splitting (Cantor–Zassenhaus,
//! with the trace map in characteristic 2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use super::{BaseRing, RingElem, RingKind};
use crate::error::{Error, Result};

/// `f = unit * prod(factor^multiplicity)`, factors monic irreducible and
/// sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(RingElem, u32)>,
}

impl Factorization {
    pub fn expand(&self, ring: &BaseRing) -> RingElem {
        self.factors.iter().fold(
            RingElem::from_raw(&[self.unit]),
            |acc, (f, m)| ring.mul(&acc, &ring.pow(f, *m as u64)),
        )
    }
}

impl BaseRing {
    fn require_poly(&self) -> Result<()> {
        if self.kind != RingKind::UnivariatePoly {
            return Err(Error::InvalidArgument(
                "factorization requires a polynomial base ring".into(),
            ));
        }
        Ok(())
    }

    pub fn factor(&self, f: &RingElem) -> Result<Factorization> {
        self.factor_with_seed(f, self.seed)
    }

    pub fn factor_with_seed(&self, f: &RingElem, seed: u64) -> Result<Factorization> {
        self.require_poly()?;
        if f.is_zero() {
            return Err(Error::InvalidArgument("cannot factor zero".into()));
        }
        let (unit, monic) = self.monic_parts(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut factors = Vec::new();
        for (sqf, mult) in self.squarefree_decomposition(&monic) {
            for (block, d) in self.distinct_degree(&sqf) {
                let mut pieces = Vec::new();
                self.equal_degree(&block, d, &mut rng, &mut pieces);
                factors.extend(pieces.into_iter().map(|g| (g, mult)));
            }
        }
        factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        debug_assert!(factors.iter().all(|(g, _)| self.is_irreducible(g).unwrap_or(false)));
        Ok(Factorization { unit, factors })
    }

    /// Square-free parts with multiplicities of a monic polynomial.
    fn squarefree_decomposition(&self, f: &RingElem) -> Vec<(RingElem, u32)> {
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let df = self.derivative(f);
        if df.is_zero() {
            // f is a p-th power; F_p is perfect so the root just drops exponents.
            let root = self.pth_root(f);
            for (g, m) in self.squarefree_decomposition(&root) {
                out.push((g, m * self.p));
            }
            return out;
        }
        let mut c = self.gcd(f, &df);
        let mut w = self.exact_div(f, &c).expect("gcd divides");
        let mut i = 1u32;
        while !w.is_one() {
            let y = self.gcd(&w, &c);
            let fac = self.exact_div(&w, &y).expect("gcd divides");
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = self.exact_div(&c, &w).expect("gcd divides");
            i += 1;
        }
        if !c.is_one() {
            let root = self.pth_root(&c);
            for (g, m) in self.squarefree_decomposition(&root) {
                out.push((g, m * self.p));
            }
        }
        out
    }

    fn pth_root(&self, f: &RingElem) -> RingElem {
        let p = self.p as usize;
        let coeffs: SmallVec<[u32; 4]> = f.coeffs().iter().step_by(p).copied().collect();
        RingElem::from_vec(coeffs)
    }

    /// Groups the irreducible factors of a square-free monic `f` by degree.
    fn distinct_degree(&self, f: &RingElem) -> Vec<(RingElem, usize)> {
        let x = RingElem::from_raw(&[0, 1]);
        let mut out = Vec::new();
        let mut rest = f.clone();
        let mut frob = x.clone();
        let mut d = 1usize;
        while rest.degree().unwrap_or(0) >= 2 * d {
            frob = self.pow_mod(&frob, self.p as u64, &rest).expect("nonzero modulus");
            let g = self.gcd(&rest, &self.sub(&frob, &x));
            if !g.is_one() {
                rest = self.exact_div(&rest, &g).expect("gcd divides");
                frob = self.rem(&frob, &rest).expect("nonzero modulus");
                out.push((g, d));
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) > 0 {
            let deg = rest.degree().unwrap();
            out.push((rest, deg));
        }
        out
    }

    /// Splits a product of distinct irreducibles of degree `d`.
    fn equal_degree(&self, f: &RingElem, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<RingElem>) {
        let n = f.degree().unwrap_or(0);
        if n == 0 {
            return;
        }
        if n == d {
            out.push(f.clone());
            return;
        }
        loop {
            let a: SmallVec<[u32; 4]> = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
            let a = RingElem::from_vec(a);
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if self.p == 2 {
                // Trace map a + a^2 + ... + a^(2^(d-1)).
                let mut acc = a.clone();
                let mut sq = a.clone();
                for _ in 1..d {
                    sq = self.rem(&self.mul(&sq, &sq), f).expect("nonzero modulus");
                    acc = self.add(&acc, &sq);
                }
                acc
            } else {
                // a^((p^d - 1)/2) = prod_i (a^((p-1)/2))^(p^i).
                let c = self.pow_mod(&a, (self.p as u64 - 1) / 2, f).expect("nonzero modulus");
                let mut acc = c.clone();
                let mut frob = c;
                for _ in 1..d {
                    frob = self.pow_mod(&frob, self.p as u64, f).expect("nonzero modulus");
                    acc = self.rem(&self.mul(&acc, &frob), f).expect("nonzero modulus");
                }
                self.sub(&acc, &RingElem::one())
            };
            let g = self.gcd(f, &b);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.exact_div(f, &g).expect("gcd divides");
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&h, d, rng, out);
                return;
            }
        }
    }

    /// Ben-Or test: `f` has no factor of degree `<= deg f / 2`.
    pub fn is_irreducible(&self, f: &RingElem) -> Result<bool> {
        self.require_poly()?;
        let n = match f.degree() {
            None | Some(0) => return Ok(false),
            Some(n) => n,
        };
        let x = RingElem::from_raw(&[0, 1]);
        let mut frob = x.clone();
        for _ in 1..=n / 2 {
            frob = self.pow_mod(&frob, self.p as u64, f)?;
            if !self.gcd(f, &self.sub(&frob, &x)).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor_strs(ring: &BaseRing, s: &str) -> Vec<(String, u32)> {
        let f = ring.parse(s).unwrap();
        ring.factor(&f)
            .unwrap()
            .factors
            .iter()
            .map(|(g, m)| (ring.render(g), *m))
            .collect()
    }

    #[test]
    fn small_examples() {
        let f2 = BaseRing::univariate(2, "u").unwrap();
        assert_eq!(factor_strs(&f2, "u^2 + u"), vec![("u".into(), 1), ("1 + u".into(), 1)]);
        assert_eq!(factor_strs(&f2, "u^2 + 1"), vec![("1 + u".into(), 2)]);
        let f3 = BaseRing::univariate(3, "u").unwrap();
        assert_eq!(factor_strs(&f3, "u^2 + 1"), vec![("1 + u^2".into(), 1)]);
    }

    #[test]
    fn u_squared_plus_one_has_no_root_mod_3() {
        let f3 = BaseRing::univariate(3, "u").unwrap();
        let f = f3.parse("u^2 + 1").unwrap();
        // Evaluate at 0, 1, 2 by hand: 1, 2, 5 = 2 mod 3.
        for x in 0..3u64 {
            assert_ne!((x * x + 1) % 3, 0);
        }
        assert!(f3.is_irreducible(&f).unwrap());
    }

    #[test]
    fn pth_powers_and_units() {
        let f3 = BaseRing::univariate(3, "u").unwrap();
        let f = f3.parse("2*u^6 + 2").unwrap(); // 2 (u^2 + 1)^3
        let fac = f3.factor(&f).unwrap();
        assert_eq!(fac.unit, 2);
        assert_eq!(fac.factors, vec![(f3.parse("u^2 + 1").unwrap(), 3)]);
        assert_eq!(fac.expand(&f3), f);
        assert!(f3.factor(&RingElem::zero()).is_err());
        assert!(BaseRing::prime_field(3).unwrap().factor(&RingElem::one()).is_err());
    }

    #[test]
    fn splits_equal_degree_products() {
        // Over F_2 the two irreducible cubics multiply to a degree 6 polynomial.
        let f2 = BaseRing::univariate(2, "u").unwrap();
        let a = f2.parse("u^3 + u + 1").unwrap();
        let b = f2.parse("u^3 + u^2 + 1").unwrap();
        let fac = f2.factor(&f2.mul(&a, &b)).unwrap();
        // Canonical order compares coefficients from the constant term up.
        assert_eq!(fac.factors, vec![(b, 1), (a, 1)]);
        let f5 = BaseRing::univariate(5, "u").unwrap();
        let g = f5.parse("(u^2 + 2)*(u^2 + 3)*(u + 4)^2").unwrap();
        let fac = f5.factor(&g).unwrap();
        assert_eq!(fac.expand(&f5), g);
        assert_eq!(fac.factors.len(), 3);
    }

    #[test]
    fn seed_does_not_change_output() {
        let f7 = BaseRing::univariate(7, "u").unwrap();
        let g = f7.parse("(u^2 + 1)*(u^2 + 2)*(u^2 + 4)*(u^3 + 3*u + 2)").unwrap();
        let a = f7.factor_with_seed(&g, 1).unwrap();
        let b = f7.factor_with_seed(&g, 99).unwrap();
        assert_eq!(a, b);
    }
}
