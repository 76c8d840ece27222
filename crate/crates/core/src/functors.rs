//! Coherent functors on finitely presented `A`-modules and their degreewise
//! application to families.

use rayon::prelude::*;

use crate::base_ring::BaseRing;
use crate::error::{Error, Result};
use crate::fpmod::{
    ext_realized, hom_contravariant, hom_realized, tensor_realized, tor_realized, FPMap,
    FPModule, Quotient, Realized,
};
use crate::graded::{DegreewiseFamily, Provenance};
use crate::linalg::Matrix;

#[derive(Clone, Debug)]
pub enum CoherentFunctor {
    /// `f: V -> U`; the value at `M` is `coker(Hom(U, M) -> Hom(V, M))`.
    Presentation(FPMap),
    HomFrom(FPModule),
    TensorWith(FPModule),
    Tor(usize, FPModule),
    Ext(usize, FPModule),
}

/// A functor value together with what is needed to push maps through it.
enum Value {
    Builtin(Realized),
    Presented { hv: Realized, quotient: Quotient },
}

impl Value {
    fn module(&self) -> &FPModule {
        match self {
            Value::Builtin(r) => r.module(),
            Value::Presented { quotient, .. } => &quotient.module,
        }
    }
}

impl CoherentFunctor {
    /// `U ⊗ -` as a presentation functor: with `0 -> A^k -D-> A^g -> U -> 0`,
    /// `f = D^T: A^g -> A^k` so that `Hom(f, M) = D ⊗ M`.
    pub fn tensor_as_presentation(u: &FPModule) -> CoherentFunctor {
        let d = u.prune().module.presentation().clone();
        let ring = u.ring();
        let f = FPMap::from_parts(
            FPModule::free(ring, d.rows()),
            FPModule::free(ring, d.cols()),
            d.transpose(),
        );
        CoherentFunctor::Presentation(f)
    }

    pub fn describe(&self) -> String {
        match self {
            CoherentFunctor::Presentation(f) => format!(
                "presentation({} -> {})",
                f.source().render(),
                f.target().render()
            ),
            CoherentFunctor::HomFrom(u) => format!("hom({}, -)", u.render()),
            CoherentFunctor::TensorWith(u) => format!("{} ⊗ -", u.render()),
            CoherentFunctor::Tor(i, u) => format!("tor_{i}({}, -)", u.render()),
            CoherentFunctor::Ext(i, u) => format!("ext^{i}({}, -)", u.render()),
        }
    }

    fn value(&self, m: &FPModule) -> Result<Value> {
        let base = match self {
            CoherentFunctor::Presentation(f) => f.ring(),
            CoherentFunctor::HomFrom(u)
            | CoherentFunctor::TensorWith(u)
            | CoherentFunctor::Tor(_, u)
            | CoherentFunctor::Ext(_, u) => u.ring(),
        };
        if base != m.ring() {
            return Err(Error::RingMismatch("functor and module over different rings".into()));
        }
        Ok(match self {
            CoherentFunctor::Presentation(f) => {
                let theta = hom_contravariant(f, m)?;
                let hv = hom_realized(f.source(), m);
                let quotient = theta.cokernel();
                Value::Presented { hv, quotient }
            }
            CoherentFunctor::HomFrom(u) => Value::Builtin(hom_realized(u, m)),
            CoherentFunctor::TensorWith(u) => Value::Builtin(tensor_realized(u, m)),
            CoherentFunctor::Tor(i, u) => Value::Builtin(tor_realized(*i, u, m)),
            CoherentFunctor::Ext(i, u) => Value::Builtin(ext_realized(*i, u, m)),
        })
    }

    fn map_between(a: &Value, b: &Value, g: &FPMap) -> Result<FPMap> {
        match (a, b) {
            (Value::Builtin(x), Value::Builtin(y)) => x.induced_by(y, g),
            (
                Value::Presented { hv: ha, quotient: qa },
                Value::Presented { hv: hb, quotient: qb },
            ) => {
                let h = ha.induced_by(hb, g)?;
                let ring = g.ring();
                let m = qb.to.mul(ring, &h.matrix().mul(ring, &qa.from));
                Ok(FPMap::from_parts(qa.module.clone(), qb.module.clone(), m))
            }
            _ => Err(Error::Invariant("functor values of different kinds".into())),
        }
    }

    pub fn apply(&self, m: &FPModule) -> Result<FPModule> {
        Ok(self.value(m)?.module().clone())
    }

    pub fn apply_map(&self, g: &FPMap) -> Result<FPMap> {
        let a = self.value(g.source())?;
        let b = self.value(g.target())?;
        CoherentFunctor::map_between(&a, &b, g)
    }

    /// `n -> F(X_n)` with `F` applied to the multiplication maps.
    pub fn apply_family(&self, x: &DegreewiseFamily) -> Result<DegreewiseFamily> {
        let values = (x.start()..=x.end())
            .into_par_iter()
            .map(|n| self.value(&x.component(n)?))
            .collect::<Vec<Result<Value>>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let mults = (x.start()..x.end())
            .into_par_iter()
            .map(|n| {
                let k = (n - x.start()) as usize;
                (0..x.num_vars())
                    .map(|v| CoherentFunctor::map_between(&values[k], &values[k + 1], &x.mult_map(n, v)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Vec<Result<Vec<FPMap>>>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let components = values.iter().map(|v| v.module().clone()).collect();
        DegreewiseFamily::new(
            Provenance::FunctorImage,
            x.ring().clone(),
            x.start(),
            components,
            mults,
        )
    }
}

/// The map `A^cols -> A^rows` given by `matrix`.
pub fn free_map(ring: &BaseRing, matrix: Matrix) -> FPMap {
    FPMap::from_parts(
        FPModule::free(ring, matrix.cols()),
        FPModule::free(ring, matrix.rows()),
        matrix,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_ring::BaseRing;
    use crate::fpmod::tensor;

    fn ring() -> BaseRing {
        BaseRing::univariate(2, "u").unwrap()
    }

    fn cyc(a: &BaseRing, s: &str) -> FPModule {
        FPModule::cyclic(a, a.parse(s).unwrap())
    }

    #[test]
    fn apply_examples() {
        let a = ring();
        let k = cyc(&a, "u");
        let hom = CoherentFunctor::HomFrom(k.clone());
        assert_eq!(hom.apply(&cyc(&a, "u^2")).unwrap().render(), "A/(u)");
        let t = CoherentFunctor::TensorWith(k.clone());
        assert_eq!(t.apply(&FPModule::free(&a, 1)).unwrap().render(), "A/(u)");
        let id = CoherentFunctor::Presentation(FPMap::identity(&FPModule::free(&a, 1)));
        for m in [k.clone(), FPModule::free(&a, 2), cyc(&a, "u^2 + u")] {
            assert!(id.apply(&m).unwrap().is_zero());
        }
    }

    #[test]
    fn apply_map_examples() {
        let a = ring();
        let k = cyc(&a, "u");
        let free = FPModule::free(&a, 1);
        let mul_u = FPMap::scalar(&free, &a.parse("u").unwrap());
        let t = CoherentFunctor::TensorWith(k.clone());
        assert!(t.apply_map(&mul_u).unwrap().is_zero());
        let e = CoherentFunctor::Ext(1, k.clone());
        let m = e.apply_map(&mul_u).unwrap();
        assert_eq!(m.source().render(), "A/(u)");
        assert!(m.is_zero());
        let h = CoherentFunctor::HomFrom(free.clone());
        let g = FPMap::scalar(&free, &a.parse("u + 1").unwrap());
        let hg = h.apply_map(&g).unwrap();
        assert_eq!(hg.cokernel().module.render(), "A/(1 + u)");
    }

    #[test]
    fn tensor_presentation_agrees() {
        let a = ring();
        let k = cyc(&a, "u");
        let f = CoherentFunctor::tensor_as_presentation(&k);
        match &f {
            CoherentFunctor::Presentation(m) => assert_eq!(m.matrix().render(&a), "[[\"u\"]]"),
            _ => unreachable!(),
        }
        assert_eq!(f.apply(&FPModule::free(&a, 1)).unwrap().render(), "A/(u)");
        let u = FPModule::direct_sum(&a, &[&k, &FPModule::free(&a, 1)]);
        let m = cyc(&a, "u^2");
        let p = CoherentFunctor::tensor_as_presentation(&u).apply(&m).unwrap();
        assert_eq!(p.render(), "A/(u) ⊕ A/(u^2)");
        assert!(p.is_isomorphic(&tensor(&u, &m)));
        let one = CoherentFunctor::tensor_as_presentation(&FPModule::free(&a, 1));
        assert!(one.apply(&m).unwrap().is_isomorphic(&m));
    }
}
