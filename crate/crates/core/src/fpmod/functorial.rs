//! Hom, tensor, Tor and Ext over a hereditary base.
//!
//! Each construction is realized inside (or as a quotient of) a direct power
//! `M^k` of its covariant argument, so a map `g: M -> M'` acts on the ambient
//! by `I_k ⊗ g` and induces the functorial map on the realized modules.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::base_ring::IdealA;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::{FPMap, FPModule, Quotient, Realization};

/// A functor value realized in `M^copies` (or a free module of the same rank).
#[derive(Clone, Debug)]
pub struct Realized {
    pub copies: usize,
    pub realization: Realization,
}

impl Realized {
    pub fn module(&self) -> &FPModule {
        self.realization.module()
    }

    /// The map `self -> other` induced by `g` on the covariant argument.
    pub fn induced_by(&self, other: &Realized, g: &FPMap) -> Result<FPMap> {
        if self.copies != other.copies {
            return Err(Error::Invariant("realizations with different ambient powers".into()));
        }
        let t = Matrix::identity(self.copies).kron(g.ring(), g.matrix());
        self.realization.induced(&other.realization, &t)
    }

    fn zero(m: &FPModule) -> Realized {
        Realized {
            copies: 0,
            realization: Realization::Quot(Quotient::of(&FPModule::zero(m.ring()), &Matrix::zeros(0, 0))),
        }
    }
}

/// `T ⊗ I` as a map `M^{T.cols} -> M^{T.rows}`.
fn power_map(t: &Matrix, m: &FPModule) -> FPMap {
    let ring = m.ring();
    FPMap::from_parts(
        m.power(t.cols()),
        m.power(t.rows()),
        t.kron(ring, &Matrix::identity(m.num_generators())),
    )
}

/// Length-one free resolution `0 -> A^k -> A^g -> U -> 0` of a pruned copy of `u`.
fn resolution(u: &FPModule) -> Matrix {
    u.prune().module.presentation().clone()
}

pub fn hom_realized(u: &FPModule, m: &FPModule) -> Realized {
    let pt = u.presentation().transpose();
    Realized {
        copies: u.num_generators(),
        realization: Realization::Sub(power_map(&pt, m).kernel()),
    }
}

pub fn tensor_realized(u: &FPModule, m: &FPModule) -> Realized {
    let ring = m.ring();
    let gu = u.num_generators();
    let gm = m.num_generators();
    let left = u.presentation().kron(ring, &Matrix::identity(gm));
    let right = Matrix::identity(gu).kron(ring, m.presentation());
    let rels = Matrix::hstack(gu * gm, &[&left, &right]);
    Realized {
        copies: gu,
        realization: Realization::Quot(Quotient::of(&FPModule::free(ring, gu * gm), &rels)),
    }
}

pub fn tor_realized(i: usize, u: &FPModule, m: &FPModule) -> Realized {
    let d = resolution(u);
    match i {
        0 => Realized {
            copies: d.rows(),
            realization: Realization::Quot(power_map(&d, m).cokernel()),
        },
        1 => Realized {
            copies: d.cols(),
            realization: Realization::Sub(power_map(&d, m).kernel()),
        },
        _ => Realized::zero(m),
    }
}

pub fn ext_realized(i: usize, u: &FPModule, m: &FPModule) -> Realized {
    let dt = resolution(u).transpose();
    match i {
        0 => Realized {
            copies: dt.cols(),
            realization: Realization::Sub(power_map(&dt, m).kernel()),
        },
        1 => Realized {
            copies: dt.rows(),
            realization: Realization::Quot(power_map(&dt, m).cokernel()),
        },
        _ => Realized::zero(m),
    }
}

pub fn hom(u: &FPModule, m: &FPModule) -> FPModule {
    hom_realized(u, m).module().clone()
}

/// Presents `U ⊗ M` by `[P_U ⊗ I | I ⊗ P_M]` on generators `e_i ⊗ f_k`.
pub fn tensor(u: &FPModule, m: &FPModule) -> FPModule {
    let ring = m.ring();
    let gu = u.num_generators();
    let gm = m.num_generators();
    let left = u.presentation().kron(ring, &Matrix::identity(gm));
    let right = Matrix::identity(gu).kron(ring, m.presentation());
    FPModule::from_parts(ring.clone(), Matrix::hstack(gu * gm, &[&left, &right]))
}

pub fn tor(i: usize, u: &FPModule, m: &FPModule) -> FPModule {
    tor_realized(i, u, m).module().clone()
}

pub fn ext(i: usize, u: &FPModule, m: &FPModule) -> FPModule {
    ext_realized(i, u, m).module().clone()
}

/// `Hom(U, g): Hom(U, M) -> Hom(U, M')`.
pub fn hom_covariant(u: &FPModule, g: &FPMap) -> Result<FPMap> {
    hom_realized(u, g.source()).induced_by(&hom_realized(u, g.target()), g)
}

/// `Hom(f, M): Hom(U, M) -> Hom(V, M)` for `f: V -> U`.
pub fn hom_contravariant(f: &FPMap, m: &FPModule) -> Result<FPMap> {
    let ring = m.ring();
    let src = hom_realized(f.target(), m);
    let dst = hom_realized(f.source(), m);
    let t = f.matrix().transpose().kron(ring, &Matrix::identity(m.num_generators()));
    src.realization.induced(&dst.realization, &t)
}

/// `U ⊗ g: U ⊗ M -> U ⊗ M'`.
pub fn tensor_map(u: &FPModule, g: &FPMap) -> Result<FPMap> {
    let src = tensor(u, g.source());
    let dst = tensor(u, g.target());
    let t = Matrix::identity(u.num_generators()).kron(g.ring(), g.matrix());
    Ok(FPMap::from_parts(src, dst, t))
}

/// `f ⊗ M: V ⊗ M -> U ⊗ M` for `f: V -> U`.
pub fn tensor_map_left(f: &FPMap, m: &FPModule) -> Result<FPMap> {
    let src = tensor(f.source(), m);
    let dst = tensor(f.target(), m);
    let t = f.matrix().kron(m.ring(), &Matrix::identity(m.num_generators()));
    Ok(FPMap::from_parts(src, dst, t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grade {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::Finite(n) => write!(f, "{n}"),
            Grade::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Grade::Finite(n) => s.serialize_u32(*n),
            Grade::Infinite => s.serialize_str("inf"),
        }
    }
}

fn residue_module(j: &IdealA, m: &FPModule) -> FPModule {
    FPModule::cyclic(m.ring(), j.generator())
}

/// `inf` iff `M = JM`; otherwise 0 if `Hom(A/J, M) != 0`, else 1.
pub fn grade(j: &IdealA, m: &FPModule) -> Grade {
    let aj = residue_module(j, m);
    if tensor(&aj, m).is_zero() {
        Grade::Infinite
    } else if !hom(&aj, m).is_zero() {
        Grade::Finite(0)
    } else {
        Grade::Finite(1)
    }
}

/// Least `i` with `Ext^i(A/J, M) != 0`.
pub fn grade_ext_scan(j: &IdealA, m: &FPModule) -> Result<Grade> {
    let aj = residue_module(j, m);
    for i in 0..=1u32 {
        if !ext(i as usize, &aj, m).is_zero() {
            return Ok(Grade::Finite(i));
        }
    }
    if tensor(&aj, m).is_zero() {
        Ok(Grade::Infinite)
    } else {
        Err(Error::Invariant(
            "Ext^0 and Ext^1 vanish but M/JM does not".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::BaseRing;

    fn ring() -> BaseRing {
        BaseRing::univariate(2, "u").unwrap()
    }

    fn cyc(a: &BaseRing, s: &str) -> FPModule {
        FPModule::cyclic(a, a.parse(s).unwrap())
    }

    #[test]
    fn hom_examples() {
        let a = ring();
        assert_eq!(hom(&cyc(&a, "u"), &cyc(&a, "u^2")).render(), "A/(u)");
        let m = FPModule::direct_sum(&a, &[&cyc(&a, "u^3"), &FPModule::free(&a, 1)]);
        assert!(hom(&FPModule::free(&a, 1), &m).is_isomorphic(&m));
        assert!(hom(&cyc(&a, "u"), &cyc(&a, "u + 1")).is_zero());
    }

    #[test]
    fn tensor_examples() {
        let a = ring();
        assert_eq!(tensor(&cyc(&a, "u"), &cyc(&a, "u^2")).render(), "A/(u)");
        assert_eq!(tensor(&FPModule::free(&a, 2), &cyc(&a, "u")).render(), "A/(u) ⊕ A/(u)");
        assert!(tensor(&cyc(&a, "u"), &cyc(&a, "u + 1")).is_zero());
    }

    #[test]
    fn tor_ext_examples() {
        let a = ring();
        let k = cyc(&a, "u");
        assert_eq!(tor(1, &k, &k).render(), "A/(u)");
        assert_eq!(ext(1, &k, &FPModule::free(&a, 1)).render(), "A/(u)");
        assert!(tor(2, &k, &k).is_zero());
        assert!(ext(3, &k, &k).is_zero());
        let m = FPModule::direct_sum(&a, &[&cyc(&a, "u^2"), &FPModule::free(&a, 1)]);
        assert!(tor(0, &k, &m).is_isomorphic(&tensor(&k, &m)));
        assert!(ext(0, &k, &m).is_isomorphic(&hom(&k, &m)));
    }

    #[test]
    fn grade_examples() {
        let a = ring();
        let j = IdealA::principal(&a, a.parse("u").unwrap()).unwrap();
        assert_eq!(grade(&j, &cyc(&a, "u")), Grade::Finite(0));
        assert_eq!(grade(&j, &FPModule::free(&a, 1)), Grade::Finite(1));
        assert_eq!(grade(&j, &cyc(&a, "u + 1")), Grade::Infinite);
        assert_eq!(grade(&j, &FPModule::zero(&a)), Grade::Infinite);
        for m in [cyc(&a, "u"), FPModule::free(&a, 1), cyc(&a, "u + 1")] {
            assert_eq!(grade_ext_scan(&j, &m).unwrap(), grade(&j, &m));
        }
    }

    #[test]
    fn functorial_maps() {
        let a = ring();
        let free = FPModule::free(&a, 1);
        let mul_u = FPMap::scalar(&free, &a.parse("u").unwrap());
        let k = cyc(&a, "u");
        assert!(tensor_map(&k, &mul_u).unwrap().is_zero());
        let e = ext_realized(1, &k, &free);
        assert!(e.induced_by(&e, &mul_u).unwrap().is_zero());
        let h = hom_covariant(&free, &mul_u).unwrap();
        assert!(!h.is_zero());
        assert_eq!(h.cokernel().module.render(), "A/(u)");
    }
}
