//! Filtration oracle for pairs `M ⊆ N`: normalization to degree-0 generation,
//! the graded trivial extension `R ⋉ M(-1)`, the subquotients `L*_{ij}` of
//! `N_{j-1}` and the length and Ass identities they satisfy.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{fit_polynomial, HilbertFit};
use crate::base_ring::{BaseRing, RingElem};
use crate::error::{Error, Result};
use crate::fpmod::{AssSet, FPMap, FPModule, Length, Quotient};
use crate::graded::{monomials, ComponentBasis, GradedMap, GradedModule};
use crate::linalg::{span_echelon, ColumnEchelon, Matrix};

/// Multiplication by `mono` from the degree-`n` basis to degree `n + deg(mono)`,
/// applied to the columns of `m`.
fn apply_monomial(src: &ComponentBasis, dst: &ComponentBasis, mono: &[u32], m: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(dst.len(), m.cols());
    for (k, (g, lambda)) in src.entries().iter().enumerate() {
        let prod: Vec<u32> = lambda.iter().zip(mono).map(|(a, b)| a + b).collect();
        let row = dst.position(*g, &prod).expect("product monomial in basis");
        for c in 0..m.cols() {
            let e = m.get(k, c);
            if !e.is_zero() {
                out.set(row, c, e.clone());
            }
        }
    }
    out
}

/// Matrix of multiplication by `mono` from the degree-`n` basis to degree `n + deg(mono)`.
fn monomial_action(src: &ComponentBasis, dst: &ComponentBasis, mono: &[u32]) -> Matrix {
    apply_monomial(src, dst, mono, &Matrix::identity(src.len()))
}

fn reduce_span(ring: &BaseRing, m: &Matrix) -> Matrix {
    if m.cols() == 0 {
        return m.clone();
    }
    span_echelon(ring, m).span_basis()
}

/// Whether the variables carry degree `n` onto degree `n + 1`.
fn generated_at(x: &GradedModule, n: i64) -> bool {
    let target = x.component(n + 1);
    if target.num_generators() == 0 {
        return true;
    }
    let blocks: Vec<Matrix> = (0..x.ring().num_vars()).map(|v| x.mult_matrix(n, v)).collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let joint = Matrix::hstack(target.num_generators(), &refs);
    let ring = x.ring().base();
    FPMap::from_parts(FPModule::free(ring, joint.cols()), target, joint).is_surjective()
}

/// First degree in `[0, end)` where `x` fails to be generated by lower degrees.
fn first_generation_failure(x: &GradedModule, end: i64) -> Option<i64> {
    (0..end).into_par_iter().filter(|&n| !generated_at(x, n)).min()
}

/// Both modules generated in degree 0 on `[0, window_end]` after shifting by `shift`.
#[derive(Clone, Debug)]
pub struct NormalizedPair {
    pub shift: i64,
    pub window_end: i64,
    pub sub: GradedModule,
    pub ambient: GradedModule,
    pub inclusion: GradedMap,
    pushed: Arc<Mutex<HashMap<i64, Vec<Matrix>>>>,
}

/// Smallest shift `r < end` such that `M_{>=r}` and `N_{>=r}` are generated
/// in degree 0 on the window `[0, end - r]`.
pub fn normalize(iota: &GradedMap, end: i64) -> Result<NormalizedPair> {
    let start = iota.source().lower_bound().min(iota.target().lower_bound());
    let mut diagnostics = Vec::new();
    for r in start..end {
        let shifted = iota.truncate_and_shift(r);
        let local_end = end - r;
        let m_fail = first_generation_failure(shifted.source(), local_end);
        let n_fail = first_generation_failure(shifted.target(), local_end);
        match (m_fail, n_fail) {
            (None, None) => {
                if let Some(n) = (0..=local_end)
                    .into_par_iter()
                    .filter(|&n| match shifted.component(n) {
                        Ok(f) => !f.is_injective(),
                        Err(_) => true,
                    })
                    .min()
                {
                    return Err(Error::NotInclusion { degree: n + r });
                }
                return Ok(NormalizedPair {
                    shift: r,
                    window_end: local_end,
                    sub: shifted.source().clone(),
                    ambient: shifted.target().clone(),
                    inclusion: shifted,
                    pushed: Arc::default(),
                });
            }
            (m, n) => {
                let mut parts = Vec::new();
                if let Some(d) = m {
                    parts.push(format!("M not generated at degree {}", d + 1 + r));
                }
                if let Some(d) = n {
                    parts.push(format!("N not generated at degree {}", d + 1 + r));
                }
                diagnostics.push(format!("r = {r}: {}", parts.join(", ")));
            }
        }
    }
    Err(Error::NoNormalizingShift {
        window_end: end,
        diagnostics: diagnostics.join("; "),
    })
}

/// Echelon basis of the span of `gens` together with `rels`.
fn span_with(base: &BaseRing, gens: &Matrix, rels: &Matrix) -> ColumnEchelon {
    if rels.cols() == 0 {
        return span_echelon(base, gens);
    }
    span_echelon(base, &Matrix::hstack(gens.rows(), &[gens, rels]))
}

/// `top / bottom` for spans in a common free module; `None` unless `bottom ⊆ top`.
fn relative_quotient(base: &BaseRing, top: &ColumnEchelon, bottom: &ColumnEchelon) -> Option<FPModule> {
    let cols = (0..bottom.rank())
        .map(|c| top.span_coordinates(base, &bottom.h.column(c)))
        .collect::<Option<Vec<_>>>()?;
    Some(FPModule::from_parts(base.clone(), Matrix::from_columns(top.rank(), &cols)))
}

impl NormalizedPair {
    fn base(&self) -> &BaseRing {
        self.ambient.ring().base()
    }

    fn check_j(&self, j: i64) -> Result<()> {
        if j < 1 || j - 1 > self.window_end {
            return Err(Error::OutOfWindow {
                degree: j,
                lo: 1,
                hi: self.window_end + 1,
            });
        }
        Ok(())
    }

    fn relations(&self, degree: i64) -> Matrix {
        self.ambient.component(degree).presentation().clone()
    }

    /// Generators of `R_i N_{j-i-1} + S_{j-i} M_{i-1}` in the free cover of `N_{j-1}`.
    fn layer_generators(&self, i: i64, j: i64) -> Matrix {
        let deg = j - 1;
        let basis = self.ambient.basis(deg);
        let rows = basis.len();
        let k = j - i - 1;
        let r_vars = self.inclusion.inclusion().embedding();
        let twists = self.ambient.twists();
        let units: Vec<usize> = basis
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, (g, mono))| {
                let r_part: i64 = r_vars.iter().map(|&v| mono[v] as i64).sum();
                twists[*g] <= k && r_part >= i
            })
            .map(|(pos, _)| pos)
            .collect();
        let mut from_ring = Matrix::zeros(rows, units.len());
        for (c, &pos) in units.iter().enumerate() {
            from_ring.set(pos, c, RingElem::one());
        }
        let span = self.pushed_span(i - 1, deg);
        Matrix::hstack(rows, &[&from_ring, &span])
    }

    /// Reduced generators of `S_{to-from} M_{from}` inside `N_{to}`.
    fn pushed_span(&self, from: i64, to: i64) -> Matrix {
        let base = self.base();
        let mut cache = self.pushed.lock().expect("span cache poisoned");
        let spans = cache
            .entry(from)
            .or_insert_with(|| vec![reduce_span(base, &self.inclusion.component_matrix(from))]);
        while (spans.len() as i64) <= to - from {
            let d = from + spans.len() as i64 - 1;
            let span = spans.last().expect("nonempty");
            let rows_next = self.ambient.basis(d + 1).len();
            let next = if span.cols() == 0 {
                Matrix::zeros(rows_next, 0)
            } else {
                let blocks: Vec<Matrix> = (0..self.ambient.ring().num_vars())
                    .map(|v| self.ambient.mult_matrix(d, v).mul(base, span))
                    .collect();
                let refs: Vec<&Matrix> = blocks.iter().collect();
                reduce_span(base, &Matrix::hstack(rows_next, &refs))
            };
            spans.push(next);
        }
        spans[(to - from) as usize].clone()
    }

    /// Generators of `C_i = R_{j-i} N_{i-1} + S_i M_{j-i-1}`, built from explicit
    /// monomial products.
    fn chain_generators(&self, i: i64, j: i64) -> Matrix {
        let inc = self.inclusion.inclusion();
        let target = self.ambient.basis(j - 1);
        let rows = target.len();
        let mut hit = vec![false; rows];
        let r_monos: Vec<Vec<u32>> = monomials(inc.small().num_vars(), j - i)
            .iter()
            .map(|rho| inc.embed_monomial(rho))
            .collect();
        for (g, lambda) in self.ambient.basis(i - 1).entries() {
            for rho in &r_monos {
                let prod: Vec<u32> = lambda.iter().zip(rho).map(|(a, b)| a + b).collect();
                hit[target.position(*g, &prod).expect("product monomial in basis")] = true;
            }
        }
        let units: Vec<usize> = (0..rows).filter(|&r| hit[r]).collect();
        let mut cols: Vec<Vec<RingElem>> = units
            .iter()
            .map(|&r| {
                let mut e = RingElem::zeros(rows);
                e[r] = RingElem::one();
                e
            })
            .collect();
        let m_deg = j - i - 1;
        let image = self.inclusion.component_matrix(m_deg);
        let n_src = self.ambient.basis(m_deg);
        let mut seen = HashSet::new();
        for (k, (g, mu)) in self.sub.basis(m_deg).entries().iter().enumerate() {
            let mu = inc.embed_monomial(mu);
            for sigma in monomials(inc.big().num_vars(), i) {
                let key: Vec<u32> = mu.iter().zip(&sigma).map(|(a, b)| a + b).collect();
                if !seen.insert((*g, key)) {
                    continue;
                }
                let mut col = RingElem::zeros(rows);
                for (r, (h, lambda)) in n_src.entries().iter().enumerate() {
                    let e = image.get(r, k);
                    if e.is_zero() {
                        continue;
                    }
                    let prod: Vec<u32> = lambda.iter().zip(&sigma).map(|(a, b)| a + b).collect();
                    col[target.position(*h, &prod).expect("product monomial in basis")] = e.clone();
                }
                cols.push(col);
            }
        }
        Matrix::from_columns(rows, &cols)
    }

    /// `L*_{0j}, ..., L*_{j-1,j}` from the layers `T_0 ⊇ ... ⊇ T_j` of `N_{j-1}`.
    fn lstar_column(&self, j: i64) -> Result<Vec<FPModule>> {
        let base = self.base();
        let rels = self.relations(j - 1);
        let layers: Vec<ColumnEchelon> = (0..=j)
            .into_par_iter()
            .map(|i| span_with(base, &self.layer_generators(i, j), &rels))
            .collect();
        let lstar = (0..j as usize)
            .into_par_iter()
            .map(|i| {
                relative_quotient(base, &layers[i], &layers[i + 1]).ok_or_else(|| {
                    Error::Containment(format!("j = {j}: layer {} not inside layer {i}", i + 1))
                })
            })
            .collect::<Vec<Result<FPModule>>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(lstar)
    }

    /// `L*_{ij}`, the `i`-th subquotient of `N_{j-1}`.
    pub fn lstar_component(&self, i: i64, j: i64) -> Result<FPModule> {
        self.check_j(j)?;
        if i < 0 || i > j - 1 {
            return Err(Error::InvalidArgument(format!(
                "index i = {i} outside [0, {}]",
                j - 1
            )));
        }
        let base = self.base();
        let rels = self.relations(j - 1);
        let top = span_with(base, &self.layer_generators(i, j), &rels);
        let bottom = span_with(base, &self.layer_generators(i + 1, j), &rels);
        relative_quotient(base, &top, &bottom)
            .ok_or_else(|| Error::Containment(format!("j = {j}: layer {} not inside layer {i}", i + 1)))
    }

    /// `N_{j-1} / M_{j-1}`.
    pub fn quotient_component(&self, j: i64) -> Result<FPModule> {
        self.check_j(j)?;
        let image = self.inclusion.component_matrix(j - 1);
        Ok(Quotient::of(&self.ambient.component(j - 1), &image).module)
    }

    fn filtration_from(&self, j: i64, lstar: &[FPModule]) -> Result<FiltrationCheck> {
        let base = self.base();
        let rels = self.relations(j - 1);
        let chain: Vec<ColumnEchelon> = (0..=j)
            .into_par_iter()
            .map(|i| span_with(base, &self.chain_generators(i, j), &rels))
            .collect();
        let steps = (0..j)
            .into_par_iter()
            .map(|i| {
                let k = i as usize;
                let sub = relative_quotient(base, &chain[k + 1], &chain[k]).ok_or_else(|| {
                    Error::Containment(format!("j = {j}: step C_{i} ⊄ C_{}", i + 1))
                })?;
                let lstar = &lstar[(j - i - 1) as usize];
                Ok(FiltrationStep {
                    step: i,
                    contained: true,
                    subquotient: sub.render(),
                    matches_lstar: sub.is_isomorphic(lstar),
                })
            })
            .collect::<Vec<Result<FiltrationStep>>>()
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(FiltrationCheck { j, steps })
    }

    /// The chain `M_{j-1} = C_0 ⊆ C_1 ⊆ ... ⊆ C_j = N_{j-1}` with
    /// `C_i = R_{j-i} N_{i-1} + S_i M_{j-i-1}`, compared with the `L*_{ij}`.
    pub fn filtration_check(&self, j: i64) -> Result<FiltrationCheck> {
        self.check_j(j)?;
        self.filtration_from(j, &self.lstar_column(j)?)
    }

    fn amao_from(&self, j: i64, lstar: &[FPModule]) -> Result<AmaoRow> {
        let base = self.base();
        let quotient = self.quotient_component(j)?;
        let lengths: Vec<Length> = lstar.iter().map(FPModule::length).collect();
        let length_sum = lengths.iter().try_fold(0u64, |acc, l| l.finite().map(|v| acc + v));
        let length_sum = length_sum.map_or(Length::Infinite, Length::Finite);
        let quotient_length = quotient.length();
        let union: AssSet = lstar.iter().fold(AssSet::default(), |acc, m| acc.union(&m.ass()));
        let quotient_ass = quotient.ass();
        Ok(AmaoRow {
            j,
            lstar: lstar.iter().map(FPModule::render).collect(),
            lstar_lengths: lengths,
            length_sum,
            quotient: quotient.render(),
            quotient_length,
            identity_holds: length_sum == quotient_length,
            quotient_ass: quotient_ass.rendered(base),
            lstar_ass_union: union.rendered(base),
            ass_contained: quotient_ass.is_subset(&union),
            quotient_ass_set: quotient_ass,
        })
    }

    pub fn amao_row(&self, j: i64) -> Result<AmaoRow> {
        self.check_j(j)?;
        self.amao_from(j, &self.lstar_column(j)?)
    }

    fn assemble(&self, rows: Vec<AmaoRow>, holdout: usize) -> AmaoReport {
        let base = self.base();
        let ass_union = rows
            .iter()
            .fold(AssSet::default(), |acc, r| acc.union(&r.quotient_ass_set));
        let finite_tail: Vec<i128> = rows
            .iter()
            .rev()
            .map_while(|r| r.quotient_length.finite().map(|v| v as i128))
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .collect();
        let j_hi = rows.last().map_or(0, |r| r.j);
        let first = j_hi - finite_tail.len() as i64 + 1;
        let fit = fit_polynomial(&finite_tail, first - 1 + self.shift, holdout);
        let bound = self.degree_bound();
        let within_bound = fit
            .as_ref()
            .map(|f| f.degree.map_or(true, |d| d <= bound))
            .unwrap_or(true);
        AmaoReport {
            shift: self.shift,
            identity_holds: rows.iter().all(|r| r.identity_holds),
            ass_contained: rows.iter().all(|r| r.ass_contained),
            ass_union: ass_union.rendered(base),
            fit,
            degree_bound: bound,
            within_bound,
            rows,
            ass_union_set: ass_union,
        }
    }

    /// Length and Ass identities for `j` in `[j_lo, j_hi]`, plus the degree bound
    /// on the polynomial fitted to `ℓ(N_n / M_n)`.
    pub fn amao_crosscheck(&self, j_lo: i64, j_hi: i64, holdout: usize) -> Result<AmaoReport> {
        self.check_j(j_lo)?;
        self.check_j(j_hi)?;
        let rows = (j_lo..=j_hi)
            .map(|j| self.amao_row(j))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.assemble(rows, holdout))
    }

    /// [`Self::amao_crosscheck`] together with the filtration check of every `j`.
    pub fn full_check(
        &self,
        j_lo: i64,
        j_hi: i64,
        holdout: usize,
    ) -> Result<(AmaoReport, Vec<FiltrationCheck>)> {
        self.check_j(j_lo)?;
        self.check_j(j_hi)?;
        let mut rows = Vec::new();
        let mut chains = Vec::new();
        for j in j_lo..=j_hi {
            let lstar = self.lstar_column(j)?;
            rows.push(self.amao_from(j, &lstar)?);
            chains.push(self.filtration_from(j, &lstar)?);
        }
        Ok((self.assemble(rows, holdout), chains))
    }

    /// `(number of S-variables) + dim A - 1`.
    pub fn degree_bound(&self) -> usize {
        self.ambient.ring().dimension().saturating_sub(1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationStep {
    pub step: i64,
    pub contained: bool,
    pub subquotient: String,
    pub matches_lstar: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationCheck {
    pub j: i64,
    pub steps: Vec<FiltrationStep>,
}

impl FiltrationCheck {
    pub fn verified(&self) -> bool {
        self.steps.iter().all(|s| s.contained && s.matches_lstar)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AmaoRow {
    pub j: i64,
    pub lstar: Vec<String>,
    pub lstar_lengths: Vec<Length>,
    pub length_sum: Length,
    pub quotient: String,
    pub quotient_length: Length,
    pub identity_holds: bool,
    pub quotient_ass: Vec<String>,
    pub lstar_ass_union: Vec<String>,
    pub ass_contained: bool,
    #[serde(skip)]
    pub quotient_ass_set: AssSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmaoReport {
    pub shift: i64,
    pub identity_holds: bool,
    pub ass_contained: bool,
    /// Union of `Ass(N_{j-1} / M_{j-1})` over the window.
    pub ass_union: Vec<String>,
    /// Fitted to `ℓ(N_n / M_n)` in original degrees.
    pub fit: Option<HilbertFit>,
    pub degree_bound: usize,
    pub within_bound: bool,
    pub rows: Vec<AmaoRow>,
    #[serde(skip)]
    pub ass_union_set: AssSet,
}

impl AmaoReport {
    pub fn verified(&self) -> bool {
        self.identity_holds && self.ass_contained && self.within_bound
    }

    pub fn covers(&self, stable: &AssSet) -> bool {
        stable.is_subset(&self.ass_union_set)
    }
}

/// Element of degree `d` of `R ⋉ M(-1)`: a form of `R_d` and an element of `M_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialElement {
    pub degree: i64,
    /// Coordinates on `monomials(#vars, degree)`.
    pub ring_part: Vec<RingElem>,
    /// Coordinates on the free cover of `M_{degree-1}`.
    pub module_part: Vec<RingElem>,
}

/// Degreewise view of `R ⋉ M(-1)` with components `(R_n, M_{n-1})`.
#[derive(Clone, Debug)]
pub struct TrivialExtensionView {
    module: GradedModule,
    end: i64,
}

impl TrivialExtensionView {
    /// Verifies `R̃_1 · R̃_n = R̃_{n+1}` for `n` in `[0, end)`.
    pub fn new(module: &GradedModule, end: i64) -> Result<Self> {
        let view = TrivialExtensionView {
            module: module.clone(),
            end,
        };
        if let Some(n) = (0..end).into_par_iter().filter(|&n| !view.standard_at(n)).min() {
            return Err(Error::Malformed {
                degree: n,
                message: "R̃_1 · R̃_n → R̃_{n+1} is not surjective".into(),
            });
        }
        Ok(view)
    }

    pub fn end(&self) -> i64 {
        self.end
    }

    /// `(rank R_n, M_{n-1})`.
    pub fn component(&self, n: i64) -> (usize, FPModule) {
        (
            monomials(self.module.ring().num_vars(), n).len(),
            self.module.component(n - 1),
        )
    }

    fn standard_at(&self, n: i64) -> bool {
        let ring = self.module.ring();
        let base = ring.base();
        let nv = ring.num_vars();
        let ring_basis = |d: i64| ComponentBasis::new(nv, &[0], d);
        let (r1, rn, rn1) = (ring_basis(1), ring_basis(n), ring_basis(n + 1));
        let ring_blocks: Vec<Matrix> = r1
            .entries()
            .iter()
            .map(|(_, v)| monomial_action(&rn, &rn1, v))
            .collect();
        let refs: Vec<&Matrix> = ring_blocks.iter().collect();
        let ring_map = Matrix::hstack(rn1.len(), &refs);
        let ring_ok = FPMap::from_parts(
            FPModule::free(base, ring_map.cols()),
            FPModule::free(base, rn1.len()),
            ring_map,
        )
        .is_surjective();

        let target = self.module.component(n);
        let (m0, mn1, mn) = (self.module.basis(0), self.module.basis(n - 1), self.module.basis(n));
        let mut blocks: Vec<Matrix> = (0..nv)
            .map(|v| monomial_action(&mn1, &mn, &r1.entries()[v].1))
            .collect();
        for (_, mono) in rn.entries() {
            blocks.push(monomial_action(&m0, &mn, mono));
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let joint = Matrix::hstack(mn.len(), &refs);
        let module_ok =
            FPMap::from_parts(FPModule::free(base, joint.cols()), target, joint).is_surjective();
        ring_ok && module_ok
    }

    /// `(r, m)(r', m') = (rr', rm' + r'm)`.
    pub fn multiply(&self, a: &TrivialElement, b: &TrivialElement) -> TrivialElement {
        let ring = self.module.ring();
        let base = ring.base();
        let nv = ring.num_vars();
        let degree = a.degree + b.degree;
        let ring_basis = |d: i64| ComponentBasis::new(nv, &[0], d);
        let (ra, rb, rab) = (ring_basis(a.degree), ring_basis(b.degree), ring_basis(degree));
        let mut ring_part = RingElem::zeros(rab.len());
        for (x, (_, mx)) in a.ring_part.iter().zip(ra.entries()) {
            for (y, (_, my)) in b.ring_part.iter().zip(rb.entries()) {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let prod: Vec<u32> = mx.iter().zip(my).map(|(p, q)| p + q).collect();
                let k = rab.position(0, &prod).expect("product monomial");
                ring_part[k] = base.add_mul(&ring_part[k], x, y);
            }
        }
        let out_basis = self.module.basis(degree - 1);
        let mut module_part = RingElem::zeros(out_basis.len());
        let mut act = |coeffs: &[RingElem], rbasis: &ComponentBasis, m: &[RingElem], d: i64| {
            let mbasis = self.module.basis(d - 1);
            for (c, (_, mono)) in coeffs.iter().zip(rbasis.entries()) {
                if c.is_zero() {
                    continue;
                }
                let action = monomial_action(&mbasis, &out_basis, mono);
                let v = action.mul_vec(base, m);
                for (o, x) in module_part.iter_mut().zip(v) {
                    *o = base.add_mul(o, c, &x);
                }
            }
        };
        act(&a.ring_part, &ra, &b.module_part, b.degree);
        act(&b.ring_part, &rb, &a.module_part, a.degree);
        TrivialElement {
            degree,
            ring_part,
            module_part,
        }
    }
}
