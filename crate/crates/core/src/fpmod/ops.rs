use std::sync::OnceLock;

use crate::base_ring::{BaseRing, RingElem};
use crate::error::{Error, Result};
use crate::linalg::{column_echelon, smith_normal_form, span_echelon, ColumnEchelon, Matrix};

use super::{FPMap, FPModule};

/// Smith-prunes `coker(q)`: returns the diagonal presentation and the
/// coordinate changes `to` (old -> new) and `from` (new -> old).
fn prune_presentation(ring: &BaseRing, q: &Matrix) -> (Matrix, Matrix, Matrix) {
    let g = q.rows();
    let s = smith_normal_form(ring, q);
    let mut kept = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..g {
        if i < s.rank {
            if !ring.is_unit(&s.diag[i]) {
                kept.push(i);
                torsion.push(s.diag[i].clone());
            }
        } else {
            kept.push(i);
        }
    }
    let pres = Matrix::diagonal(kept.len(), &torsion);
    (pres, s.u.select_rows(&kept), s.u_inv.select_columns(&kept))
}

/// A submodule of `ambient` given by generators, with its own (pruned) presentation.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub module: FPModule,
    /// Generators of `module` in ambient coordinates, one per column.
    pub generators: Matrix,
    ambient: FPModule,
    spanning: Matrix,
    to_pruned: Matrix,
    solver: OnceLock<ColumnEchelon>,
}

impl Submodule {
    /// The submodule of `ambient` generated by the columns of `gens`.
    pub fn generated_by(ambient: &FPModule, gens: &Matrix) -> Submodule {
        assert_eq!(gens.rows(), ambient.num_generators(), "generator length mismatch");
        let ring = ambient.ring();
        let spanning = span_echelon(ring, gens).span_basis();
        let k = spanning.cols();
        let joint = Matrix::hstack(spanning.rows(), &[&spanning, ambient.presentation()]);
        let solver = column_echelon(ring, &joint);
        let relations = solver.kernel().row_range(0, k);
        let (pres, to, from) = prune_presentation(ring, &relations);
        let generators = spanning.mul(ring, &from);
        let cell = OnceLock::new();
        let _ = cell.set(solver);
        Submodule {
            module: FPModule::from_parts(ring.clone(), pres),
            generators,
            ambient: ambient.clone(),
            spanning,
            to_pruned: to,
            solver: cell,
        }
    }

    pub fn ambient(&self) -> &FPModule {
        &self.ambient
    }

    fn solver(&self) -> &ColumnEchelon {
        self.solver.get_or_init(|| {
            let joint = Matrix::hstack(
                self.spanning.rows(),
                &[&self.spanning, self.ambient.presentation()],
            );
            column_echelon(self.ambient.ring(), &joint)
        })
    }

    /// Coordinates of an ambient vector in terms of `module`'s generators.
    pub fn lift(&self, v: &[RingElem]) -> Option<Vec<RingElem>> {
        let ring = self.ambient.ring();
        let x = self.solver().solve(ring, v)?;
        let k = self.spanning.cols();
        Some(self.to_pruned.mul_vec(ring, &x[..k]))
    }

    pub fn contains(&self, v: &[RingElem]) -> bool {
        self.solver().contains(self.ambient.ring(), v)
    }

    /// Does this submodule contain every generator of `other`?
    pub fn contains_submodule(&self, other: &Submodule) -> bool {
        (0..other.generators.cols()).all(|j| self.contains(&other.generators.column(j)))
    }

    pub fn inclusion(&self) -> FPMap {
        FPMap::from_parts(
            self.module.clone(),
            self.ambient.clone(),
            self.generators.clone(),
        )
    }

    /// Lifts every column of `m` (ambient coordinates).
    pub fn lift_columns(&self, m: &Matrix) -> Result<Matrix> {
        let cols = (0..m.cols())
            .map(|j| {
                self.lift(&m.column(j)).ok_or_else(|| {
                    Error::Containment(format!("column {j} does not lie in the submodule"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.module.num_generators(), &cols))
    }
}

/// `ambient / <extra relations>`, pruned.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: FPModule,
    ambient: FPModule,
    /// Ambient coordinates -> quotient coordinates.
    pub to: Matrix,
    /// Quotient coordinates -> ambient coordinates (a section on generators).
    pub from: Matrix,
}

impl Quotient {
    pub fn of(ambient: &FPModule, extra: &Matrix) -> Quotient {
        let ring = ambient.ring();
        let g = ambient.num_generators();
        let joint = Matrix::hstack(g, &[ambient.presentation(), extra]);
        let (pres, to, from) = prune_presentation(ring, &joint);
        Quotient {
            module: FPModule::from_parts(ring.clone(), pres),
            ambient: ambient.clone(),
            to,
            from,
        }
    }

    pub fn ambient(&self) -> &FPModule {
        &self.ambient
    }

    pub fn projection(&self) -> FPMap {
        FPMap::from_parts(self.ambient.clone(), self.module.clone(), self.to.clone())
    }
}

/// A module realized inside or as a quotient of an ambient module, so that
/// maps between ambients induce maps between the realized modules.
#[derive(Clone, Debug)]
pub enum Realization {
    Sub(Submodule),
    Quot(Quotient),
}

impl Realization {
    pub fn module(&self) -> &FPModule {
        match self {
            Realization::Sub(s) => &s.module,
            Realization::Quot(q) => &q.module,
        }
    }

    pub fn ambient(&self) -> &FPModule {
        match self {
            Realization::Sub(s) => s.ambient(),
            Realization::Quot(q) => q.ambient(),
        }
    }

    /// The map `self.module -> other.module` induced by the ambient matrix `t`.
    pub fn induced(&self, other: &Realization, t: &Matrix) -> Result<FPMap> {
        let ring = self.module().ring();
        let matrix = match (self, other) {
            (Realization::Sub(a), Realization::Sub(b)) => {
                b.lift_columns(&t.mul(ring, &a.generators))?
            }
            (Realization::Quot(a), Realization::Quot(b)) => b.to.mul(ring, &t.mul(ring, &a.from)),
            _ => {
                return Err(Error::Invariant(
                    "induced map between realizations of different kinds".into(),
                ))
            }
        };
        Ok(FPMap::from_parts(
            self.module().clone(),
            other.module().clone(),
            matrix,
        ))
    }
}

impl FPModule {
    /// Pruned isomorphic copy with coordinate changes.
    pub fn prune(&self) -> Quotient {
        Quotient::of(self, &Matrix::zeros(self.num_generators(), 0))
    }

    pub fn submodule(&self, gens: &Matrix) -> Submodule {
        Submodule::generated_by(self, gens)
    }

    /// `top / bottom`, both given by generators; `bottom ⊆ top` is verified.
    pub fn subquotient(&self, top: &Matrix, bottom: &Matrix) -> Result<Subquotient> {
        let top = Submodule::generated_by(self, top);
        let lifts = top.lift_columns(bottom).map_err(|_| {
            Error::Containment("bottom generators are not contained in the top submodule".into())
        })?;
        let quotient = Quotient::of(&top.module, &lifts);
        Ok(Subquotient { top, quotient })
    }
}

/// `top / bottom` inside an ambient module.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub top: Submodule,
    pub quotient: Quotient,
}

impl Subquotient {
    pub fn module(&self) -> &FPModule {
        &self.quotient.module
    }
}

impl FPMap {
    pub fn kernel(&self) -> Submodule {
        let ring = self.ring();
        let g = self.source().num_generators();
        let joint = Matrix::hstack(
            self.target().num_generators(),
            &[self.matrix(), self.target().presentation()],
        );
        let ker = column_echelon(ring, &joint).kernel().row_range(0, g);
        Submodule::generated_by(self.source(), &ker)
    }

    pub fn cokernel(&self) -> Quotient {
        Quotient::of(self.target(), self.matrix())
    }

    pub fn image(&self) -> Submodule {
        Submodule::generated_by(self.target(), self.matrix())
    }
}

/// `Z ⊔_Y V` for `i: Y -> Z`, `pi: Y -> V`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub module: FPModule,
    pub from_first: FPMap,
    pub from_second: FPMap,
}

pub fn pushout(i: &FPMap, pi: &FPMap) -> Result<Pushout> {
    if i.source() != pi.source() {
        return Err(Error::NotWellDefined("pushout legs need a common source".into()));
    }
    let ring = i.ring().clone();
    let z = i.target();
    let v = pi.target();
    let sum = FPModule::direct_sum(&ring, &[z, v]);
    let neg = pi.matrix().scale(&ring, &ring.constant(-1));
    let rel = Matrix::vstack(i.source().num_generators(), &[i.matrix(), &neg]);
    let q = Quotient::of(&sum, &rel);
    let gz = z.num_generators();
    let gv = v.num_generators();
    let inj_z = Matrix::vstack(gz, &[&Matrix::identity(gz), &Matrix::zeros(gv, gz)]);
    let inj_v = Matrix::vstack(gv, &[&Matrix::zeros(gz, gv), &Matrix::identity(gv)]);
    Ok(Pushout {
        from_first: FPMap::from_parts(z.clone(), q.module.clone(), q.to.mul(&ring, &inj_z)),
        from_second: FPMap::from_parts(v.clone(), q.module.clone(), q.to.mul(&ring, &inj_v)),
        module: q.module,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (BaseRing, impl Fn(&str) -> RingElem) {
        let a = BaseRing::univariate(2, "u").unwrap();
        let b = a.clone();
        (a, move |s: &str| b.parse(s).unwrap())
    }

    #[test]
    fn kernel_cokernel_image() {
        let (a, p) = setup();
        let free = FPModule::free(&a, 1);
        let mul_u = FPMap::new(free.clone(), free.clone(), Matrix::from_rows(vec![vec![p("u")]], 1)).unwrap();
        assert!(mul_u.kernel().module.is_zero());
        assert_eq!(mul_u.cokernel().module.render(), "A/(u)");
        let f = FPMap::new(
            FPModule::free(&a, 2),
            free.clone(),
            Matrix::from_rows(vec![vec![p("u"), p("u + 1")]], 2),
        )
        .unwrap();
        assert_eq!(f.image().module.render(), "A");
        assert!(f.is_surjective());
        assert_eq!(f.kernel().module.render(), "A");
    }

    #[test]
    fn submodule_lifting() {
        let (a, p) = setup();
        let m = FPModule::cyclic(&a, p("u^3"));
        let sub = m.submodule(&Matrix::from_rows(vec![vec![p("u")]], 1));
        assert_eq!(sub.module.render(), "A/(u^2)");
        assert!(sub.contains(&[p("u^2")]));
        assert!(!sub.contains(&[p("1")]));
        // u^3 is zero in the ambient, so it lifts to zero.
        let l = sub.lift(&[p("u^3")]).unwrap();
        assert!(sub.module.is_zero_element(&l));
    }

    #[test]
    fn subquotient_checks_containment() {
        let (a, p) = setup();
        let m = FPModule::cyclic(&a, p("u^4"));
        let row = |s: &str| Matrix::from_rows(vec![vec![p(s)]], 1);
        let sq = m.subquotient(&row("u"), &row("u^3")).unwrap();
        assert_eq!(sq.module().render(), "A/(u^2)");
        assert!(m.subquotient(&row("u^2"), &row("u")).is_err());
    }

    #[test]
    fn pushout_of_multiplication() {
        let (a, p) = setup();
        let free = FPModule::free(&a, 1);
        let mul_u = FPMap::new(free.clone(), free.clone(), Matrix::from_rows(vec![vec![p("u")]], 1)).unwrap();
        let zero = FPMap::zero(&free, &FPModule::zero(&a));
        let po = pushout(&mul_u, &zero).unwrap();
        assert_eq!(po.module.render(), "A/(u)");
    }
}
