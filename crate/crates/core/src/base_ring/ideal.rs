use std::cmp::Ordering;

use super::{BaseRing, RingElem};
use crate::error::{Error, Result};

/// An ideal of `A` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealA {
    generators: Vec<RingElem>,
    normalized: NormalizedIdeal,
}

/// Canonical form of an ideal of a principal ideal domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormalizedIdeal {
    Zero,
    Unit,
    /// Monic generator of positive degree.
    Principal(RingElem),
}

impl IdealA {
    pub fn new(ring: &BaseRing, generators: Vec<RingElem>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument(
                "an ideal needs at least one generator".into(),
            ));
        }
        if let Some(g) = generators.iter().find(|g| !ring.belongs(g)) {
            return Err(Error::RingMismatch(format!(
                "{} is not an element of the base ring",
                ring.render(g)
            )));
        }
        let normalized = ring.normalize_ideal(&generators);
        Ok(IdealA {
            generators,
            normalized,
        })
    }

    pub fn principal(ring: &BaseRing, g: RingElem) -> Result<Self> {
        IdealA::new(ring, vec![g])
    }

    pub fn generators(&self) -> &[RingElem] {
        &self.generators
    }

    pub fn normalized(&self) -> &NormalizedIdeal {
        &self.normalized
    }

    /// The single generator of the normalized ideal (zero, one, or monic).
    pub fn generator(&self) -> RingElem {
        match &self.normalized {
            NormalizedIdeal::Zero => RingElem::zero(),
            NormalizedIdeal::Unit => RingElem::one(),
            NormalizedIdeal::Principal(g) => g.clone(),
        }
    }

    pub fn render(&self, ring: &BaseRing) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| ring.render(g)).collect();
        format!("({})", gens.join(", "))
    }
}

impl BaseRing {
    /// Over `F_p[u]` the monic gcd of the generators; over `F_p` zero or unit.
    pub fn normalize_ideal(&self, generators: &[RingElem]) -> NormalizedIdeal {
        let g = generators
            .iter()
            .fold(RingElem::zero(), |acc, x| self.gcd(&acc, x));
        if g.is_zero() {
            NormalizedIdeal::Zero
        } else if self.is_unit(&g) {
            NormalizedIdeal::Unit
        } else {
            NormalizedIdeal::Principal(g)
        }
    }
}

/// A prime ideal of `A`: the zero ideal or one generated by a monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimeIdealA {
    Zero,
    Principal(RingElem),
}

impl PrimeIdealA {
    /// Checks monicity and irreducibility of the generator.
    pub fn principal(ring: &BaseRing, g: RingElem) -> Result<Self> {
        if ring.is_field() {
            return Err(Error::InvalidArgument(
                "a prime field has no nonzero prime ideals".into(),
            ));
        }
        if g.leading() != 1 || !ring.is_irreducible(&g)? {
            return Err(Error::InvalidArgument(format!(
                "{} is not monic irreducible",
                ring.render(&g)
            )));
        }
        Ok(PrimeIdealA::Principal(g))
    }

    pub fn render(&self, ring: &BaseRing) -> String {
        match self {
            PrimeIdealA::Zero => "(0)".to_string(),
            PrimeIdealA::Principal(g) => format!("({})", ring.render(g)),
        }
    }
}

impl Ord for PrimeIdealA {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PrimeIdealA::Zero, PrimeIdealA::Zero) => Ordering::Equal,
            (PrimeIdealA::Zero, _) => Ordering::Less,
            (_, PrimeIdealA::Zero) => Ordering::Greater,
            (PrimeIdealA::Principal(a), PrimeIdealA::Principal(b)) => a.canonical_cmp(b),
        }
    }
}

impl PartialOrd for PrimeIdealA {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        let a = BaseRing::univariate(2, "u").unwrap();
        let p = |s: &str| a.parse(s).unwrap();
        assert_eq!(
            a.normalize_ideal(&[p("u^2"), p("u^3 + u^2")]),
            NormalizedIdeal::Principal(p("u^2"))
        );
        assert_eq!(a.normalize_ideal(&[p("0")]), NormalizedIdeal::Zero);
        assert_eq!(a.normalize_ideal(&[p("u"), p("u + 1")]), NormalizedIdeal::Unit);
    }

    #[test]
    fn field_ideals_are_zero_or_unit() {
        let a = BaseRing::prime_field(7).unwrap();
        assert_eq!(a.normalize_ideal(&[a.constant(3)]), NormalizedIdeal::Unit);
        assert_eq!(a.normalize_ideal(&[a.constant(0)]), NormalizedIdeal::Zero);
    }

    #[test]
    fn prime_order_and_render() {
        let a = BaseRing::univariate(2, "u").unwrap();
        let u = PrimeIdealA::principal(&a, a.parse("u").unwrap()).unwrap();
        let u1 = PrimeIdealA::principal(&a, a.parse("u + 1").unwrap()).unwrap();
        let q = PrimeIdealA::principal(&a, a.parse("u^2 + u + 1").unwrap()).unwrap();
        let mut v = vec![q.clone(), u1.clone(), PrimeIdealA::Zero, u.clone()];
        v.sort();
        assert_eq!(v, vec![PrimeIdealA::Zero, u, u1, q]);
        assert_eq!(PrimeIdealA::Zero.render(&a), "(0)");
        assert!(PrimeIdealA::principal(&a, a.parse("u^2 + 1").unwrap()).is_err());
    }
}
