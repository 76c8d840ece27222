//! Finitely presented `A`-modules and `A`-linear maps.
//!
//! A module is the cokernel of its presentation matrix `A^c -> A^g` (columns
//! are relations). Maps are `target_gens x source_gens` matrices acting on
//! generator coordinates. Over a principal ideal domain every module has a
//! normal form `A^r ⊕ A/(d_1) ⊕ ... ⊕ A/(d_k)` read off the Smith form of
//! the presentation; isomorphism testing compares normal forms.

mod functorial;
mod ops;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::base_ring::{BaseRing, PrimeIdealA, RingElem, RingKind};
use crate::error::{Error, Result};
use crate::linalg::{column_echelon, invariant_factors, smith_normal_form, ColumnEchelon, Matrix, Smith};

pub use functorial::{ext, grade, grade_ext_scan, hom, tensor, tor, Grade, Realized};
pub use functorial::{ext_realized, hom_realized, tensor_realized, tor_realized};
pub use functorial::{hom_covariant, hom_contravariant, tensor_map, tensor_map_left};
pub use ops::{pushout, Pushout, Quotient, Realization, Submodule, Subquotient};

#[derive(Default, Debug)]
struct ModuleCache {
    echelon: OnceLock<ColumnEchelon>,
    smith: OnceLock<Smith>,
    normal: OnceLock<NormalForm>,
}

/// A finitely presented `A`-module `coker(A^c -> A^g)`.
#[derive(Clone)]
pub struct FPModule {
    ring: BaseRing,
    pres: Matrix,
    cache: Arc<ModuleCache>,
}

impl PartialEq for FPModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.pres == other.pres
    }
}

impl Eq for FPModule {}

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FPModule({} gens, {} rels, {})",
            self.pres.rows(),
            self.pres.cols(),
            self.render()
        )
    }
}

/// Free rank plus invariant factors (monic nonunits, each dividing the next).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub free_rank: usize,
    pub invariant_factors: Vec<RingElem>,
}

/// Primary decomposition `A^r ⊕ ⊕ A/(p^e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub free_rank: usize,
    /// `(p, e)` with `p` monic irreducible, sorted canonically.
    pub torsion: Vec<(RingElem, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Length {
    Finite(u64),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<u64> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Length::Finite(n) => s.serialize_u64(*n),
            Length::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Associated primes, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AssSet {
    pub primes: BTreeSet<PrimeIdealA>,
}

impl AssSet {
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_subset(&self, other: &AssSet) -> bool {
        self.primes.is_subset(&other.primes)
    }

    pub fn union(&self, other: &AssSet) -> AssSet {
        AssSet {
            primes: self.primes.union(&other.primes).cloned().collect(),
        }
    }

    pub fn contains(&self, p: &PrimeIdealA) -> bool {
        self.primes.contains(p)
    }

    pub fn render(&self, ring: &BaseRing) -> String {
        let parts: Vec<String> = self.primes.iter().map(|p| p.render(ring)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn rendered(&self, ring: &BaseRing) -> Vec<String> {
        self.primes.iter().map(|p| p.render(ring)).collect()
    }
}

impl FromIterator<PrimeIdealA> for AssSet {
    fn from_iter<I: IntoIterator<Item = PrimeIdealA>>(iter: I) -> Self {
        AssSet {
            primes: iter.into_iter().collect(),
        }
    }
}

impl FPModule {
    /// `coker(pres)`; entries must belong to `ring`.
    pub fn new(ring: BaseRing, pres: Matrix) -> Result<Self> {
        for i in 0..pres.rows() {
            if let Some(e) = pres.row(i).iter().find(|e| !ring.belongs(e)) {
                return Err(Error::RingMismatch(format!(
                    "presentation entry {} not in base ring",
                    ring.render(e)
                )));
            }
        }
        Ok(FPModule::from_parts(ring, pres))
    }

    pub(crate) fn from_parts(ring: BaseRing, pres: Matrix) -> Self {
        FPModule {
            ring,
            pres,
            cache: Arc::default(),
        }
    }

    pub fn zero(ring: &BaseRing) -> Self {
        FPModule::from_parts(ring.clone(), Matrix::zeros(0, 0))
    }

    pub fn free(ring: &BaseRing, rank: usize) -> Self {
        FPModule::from_parts(ring.clone(), Matrix::zeros(rank, 0))
    }

    /// `A/(d)`.
    pub fn cyclic(ring: &BaseRing, d: RingElem) -> Self {
        FPModule::from_parts(ring.clone(), Matrix::from_rows(vec![vec![d]], 1))
    }

    /// `A/(d_1) ⊕ ... ⊕ A/(d_k) ⊕ A^free_rank`.
    pub fn from_normal_form(ring: &BaseRing, nf: &NormalForm) -> Self {
        let g = nf.invariant_factors.len() + nf.free_rank;
        FPModule::from_parts(ring.clone(), Matrix::diagonal(g, &nf.invariant_factors))
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn presentation(&self) -> &Matrix {
        &self.pres
    }

    pub fn num_generators(&self) -> usize {
        self.pres.rows()
    }

    pub fn num_relations(&self) -> usize {
        self.pres.cols()
    }

    pub(crate) fn echelon(&self) -> &ColumnEchelon {
        self.cache
            .echelon
            .get_or_init(|| column_echelon(&self.ring, &self.pres))
    }

    pub fn smith(&self) -> &Smith {
        self.cache
            .smith
            .get_or_init(|| smith_normal_form(&self.ring, &self.pres))
    }

    pub fn normal_form(&self) -> &NormalForm {
        self.cache.normal.get_or_init(|| {
            let diag = match self.cache.smith.get() {
                Some(s) => s.diag[..s.rank].to_vec(),
                None => invariant_factors(&self.ring, &self.pres),
            };
            let rank = diag.len();
            let invariant_factors = diag.into_iter().filter(|d| !self.ring.is_unit(d)).collect();
            NormalForm {
                free_rank: self.num_generators() - rank,
                invariant_factors,
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        let nf = self.normal_form();
        nf.free_rank == 0 && nf.invariant_factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.normal_form().free_rank
    }

    pub fn is_isomorphic(&self, other: &FPModule) -> bool {
        self.ring == other.ring && self.normal_form() == other.normal_form()
    }

    /// Is the coordinate vector zero in the module, i.e. a combination of relations?
    pub fn is_zero_element(&self, v: &[RingElem]) -> bool {
        if v.iter().all(RingElem::is_zero) {
            return true;
        }
        self.echelon().contains(&self.ring, v)
    }

    pub fn structure(&self) -> Structure {
        let nf = self.normal_form();
        let mut torsion = Vec::new();
        if self.ring.kind() == RingKind::UnivariatePoly {
            for d in &nf.invariant_factors {
                let fac = self.ring.factor(d).expect("nonzero invariant factor");
                torsion.extend(fac.factors);
            }
        }
        torsion.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
        Structure {
            free_rank: nf.free_rank,
            torsion,
        }
    }

    pub fn ass(&self) -> AssSet {
        if self.ring.is_field() {
            return if self.is_zero() {
                AssSet::default()
            } else {
                std::iter::once(PrimeIdealA::Zero).collect()
            };
        }
        let s = self.structure();
        let mut primes: BTreeSet<PrimeIdealA> = s
            .torsion
            .into_iter()
            .map(|(p, _)| PrimeIdealA::Principal(p))
            .collect();
        if s.free_rank > 0 {
            primes.insert(PrimeIdealA::Zero);
        }
        AssSet { primes }
    }

    /// Over `F_p` the dimension; over `F_p[u]` the number of composition factors.
    pub fn length(&self) -> Length {
        if self.ring.is_field() {
            return Length::Finite(self.free_rank() as u64);
        }
        if self.free_rank() > 0 {
            return Length::Infinite;
        }
        let total = self
            .normal_form()
            .invariant_factors
            .iter()
            .map(|d| {
                self.ring
                    .factor(d)
                    .expect("nonzero invariant factor")
                    .factors
                    .iter()
                    .map(|(_, e)| *e as u64)
                    .sum::<u64>()
            })
            .sum();
        Length::Finite(total)
    }

    /// Renders the primary decomposition, e.g. `A^2 ⊕ A/(u^2)`.
    pub fn render(&self) -> String {
        let s = self.structure();
        let mut parts = Vec::new();
        match s.free_rank {
            0 => {}
            1 => parts.push("A".to_string()),
            r => parts.push(format!("A^{r}")),
        }
        for (p, e) in &s.torsion {
            let base = self.ring.render(p);
            let wrapped = if p.coeffs().iter().filter(|&&c| c != 0).count() > 1 && *e > 1 {
                format!("({base})")
            } else {
                base
            };
            if *e == 1 {
                parts.push(format!("A/({wrapped})"));
            } else {
                parts.push(format!("A/({wrapped}^{e})"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ⊕ ")
        }
    }

    pub fn direct_sum(ring: &BaseRing, parts: &[&FPModule]) -> FPModule {
        let blocks: Vec<&Matrix> = parts.iter().map(|m| &m.pres).collect();
        FPModule::from_parts(ring.clone(), Matrix::block_diagonal(&blocks))
    }

    /// `M^k`.
    pub fn power(&self, k: usize) -> FPModule {
        let blocks: Vec<&Matrix> = (0..k).map(|_| &self.pres).collect();
        FPModule::from_parts(self.ring.clone(), Matrix::block_diagonal(&blocks))
    }

    pub fn same_ring(&self, other: &FPModule) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("modules over different base rings".into()));
        }
        Ok(())
    }
}

/// An `A`-linear map between finitely presented modules.
#[derive(Clone, PartialEq, Eq)]
pub struct FPMap {
    source: FPModule,
    target: FPModule,
    matrix: Matrix,
}

impl fmt::Debug for FPMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FPMap({:?} -> {:?}, {})",
            self.source,
            self.target,
            self.matrix.render(self.source.ring())
        )
    }
}

impl FPMap {
    /// Checks that relations of the source land in the relations of the target.
    pub fn new(source: FPModule, target: FPModule, matrix: Matrix) -> Result<Self> {
        source.same_ring(&target)?;
        if matrix.rows() != target.num_generators() || matrix.cols() != source.num_generators() {
            return Err(Error::NotWellDefined(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.num_generators(),
                source.num_generators()
            )));
        }
        let ring = source.ring().clone();
        let images = matrix.mul(&ring, source.presentation());
        for j in 0..images.cols() {
            if !target.is_zero_element(&images.column(j)) {
                return Err(Error::NotWellDefined(format!(
                    "relation {j} of the source does not map to zero"
                )));
            }
        }
        Ok(FPMap {
            source,
            target,
            matrix,
        })
    }

    /// For maps that are well defined by construction.
    pub(crate) fn from_parts(source: FPModule, target: FPModule, matrix: Matrix) -> Self {
        debug_assert_eq!(matrix.rows(), target.num_generators());
        debug_assert_eq!(matrix.cols(), source.num_generators());
        FPMap {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(m: &FPModule) -> Self {
        FPMap::from_parts(m.clone(), m.clone(), Matrix::identity(m.num_generators()))
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Self {
        FPMap::from_parts(
            source.clone(),
            target.clone(),
            Matrix::zeros(target.num_generators(), source.num_generators()),
        )
    }

    /// Multiplication by a scalar of `A` on `m`.
    pub fn scalar(m: &FPModule, c: &RingElem) -> Self {
        let g = m.num_generators();
        FPMap::from_parts(m.clone(), m.clone(), Matrix::identity(g).scale(m.ring(), c))
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ring(&self) -> &BaseRing {
        self.source.ring()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FPMap) -> Result<FPMap> {
        if self.target != other.source {
            return Err(Error::NotWellDefined("composition of incompatible maps".into()));
        }
        Ok(FPMap::from_parts(
            self.source.clone(),
            other.target.clone(),
            other.matrix.mul(self.ring(), &self.matrix),
        ))
    }

    pub fn add(&self, other: &FPMap) -> Result<FPMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::NotWellDefined("sum of maps with different endpoints".into()));
        }
        Ok(FPMap::from_parts(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(self.ring(), &other.matrix),
        ))
    }

    pub fn sub(&self, other: &FPMap) -> Result<FPMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::NotWellDefined(
                "difference of maps with different endpoints".into(),
            ));
        }
        Ok(FPMap::from_parts(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(self.ring(), &other.matrix),
        ))
    }

    /// Does every generator map to zero in the target?
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    /// Equality as maps (matrices may differ by relations of the target).
    pub fn equals(&self, other: &FPMap) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    pub fn apply(&self, v: &[RingElem]) -> Vec<RingElem> {
        self.matrix.mul_vec(self.ring(), v)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().module.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().module.is_zero()
    }

    /// `(f_1, ..., f_k): M -> N_1 ⊕ ... ⊕ N_k` for maps sharing a source.
    pub fn joint(maps: &[&FPMap]) -> Result<FPMap> {
        let first = maps
            .first()
            .ok_or_else(|| Error::InvalidArgument("joint map of no maps".into()))?;
        let ring = first.ring().clone();
        if maps.iter().any(|m| m.source != first.source) {
            return Err(Error::NotWellDefined("joint map needs a common source".into()));
        }
        let targets: Vec<&FPModule> = maps.iter().map(|m| &m.target).collect();
        let target = FPModule::direct_sum(&ring, &targets);
        let blocks: Vec<&Matrix> = maps.iter().map(|m| &m.matrix).collect();
        let matrix = Matrix::vstack(first.source.num_generators(), &blocks);
        Ok(FPMap::from_parts(first.source.clone(), target, matrix))
    }

    /// `f_1 ⊕ ... ⊕ f_k`.
    pub fn direct_sum(maps: &[&FPMap]) -> Result<FPMap> {
        let first = maps
            .first()
            .ok_or_else(|| Error::InvalidArgument("direct sum of no maps".into()))?;
        let ring = first.ring().clone();
        let sources: Vec<&FPModule> = maps.iter().map(|m| &m.source).collect();
        let targets: Vec<&FPModule> = maps.iter().map(|m| &m.target).collect();
        let blocks: Vec<&Matrix> = maps.iter().map(|m| &m.matrix).collect();
        Ok(FPMap::from_parts(
            FPModule::direct_sum(&ring, &sources),
            FPModule::direct_sum(&ring, &targets),
            Matrix::block_diagonal(&blocks),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2u() -> BaseRing {
        BaseRing::univariate(2, "u").unwrap()
    }

    fn cyc(a: &BaseRing, s: &str) -> FPModule {
        FPModule::cyclic(a, a.parse(s).unwrap())
    }

    #[test]
    fn structure_examples() {
        let a = f2u();
        let s = cyc(&a, "u^2 + u").structure();
        assert_eq!(s.free_rank, 0);
        assert_eq!(
            s.torsion,
            vec![(a.parse("u").unwrap(), 1), (a.parse("u + 1").unwrap(), 1)]
        );
        let free = FPModule::new(a.clone(), Matrix::zeros(2, 1)).unwrap();
        assert_eq!(free.structure(), Structure { free_rank: 2, torsion: vec![] });
        let m = FPModule::new(a.clone(), Matrix::diagonal(2, &[a.parse("u").unwrap(), a.parse("u").unwrap()])).unwrap();
        assert_eq!(m.structure().torsion, vec![(a.parse("u").unwrap(), 1); 2]);
    }

    #[test]
    fn ass_examples() {
        let a = f2u();
        let m = FPModule::direct_sum(&a, &[&cyc(&a, "u"), &FPModule::free(&a, 1)]);
        assert_eq!(m.ass().render(&a), "{(0), (u)}");
        assert!(FPModule::zero(&a).ass().is_empty());
        let f3 = BaseRing::univariate(3, "u").unwrap();
        assert_eq!(cyc(&f3, "u^2 + 1").ass().render(&f3), "{(1 + u^2)}");
    }

    #[test]
    fn length_examples() {
        let a = f2u();
        assert_eq!(cyc(&a, "u^3").length(), Length::Finite(3));
        assert_eq!(cyc(&a, "u^2 + u").length(), Length::Finite(2));
        assert_eq!(FPModule::free(&a, 1).length(), Length::Infinite);
        let f3 = BaseRing::prime_field(3).unwrap();
        assert_eq!(FPModule::free(&f3, 4).length(), Length::Finite(4));
    }

    #[test]
    fn render_normal_form() {
        let a = f2u();
        let m = FPModule::direct_sum(
            &a,
            &[&FPModule::free(&a, 2), &cyc(&a, "u^2"), &cyc(&a, "u^2 + 1")],
        );
        assert_eq!(m.render(), "A^2 ⊕ A/(u^2) ⊕ A/((1 + u)^2)");
        assert_eq!(FPModule::zero(&a).render(), "0");
    }

    #[test]
    fn map_well_definedness() {
        let a = f2u();
        let m = cyc(&a, "u");
        let n = cyc(&a, "u^2");
        // A/(u) -> A/(u^2), 1 -> u is well defined; 1 -> 1 is not.
        assert!(FPMap::new(m.clone(), n.clone(), Matrix::from_rows(vec![vec![a.parse("u").unwrap()]], 1)).is_ok());
        assert!(FPMap::new(m, n, Matrix::identity(1)).is_err());
    }
}
