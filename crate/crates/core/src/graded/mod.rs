//! Standard graded polynomial rings over `A`, graded modules given by
//! homogeneous presentations, and their degreewise components.
//!
//! Component bases are `(generator, monomial)` pairs, generators in order and
//! monomials in descending lexicographic order of exponent vectors.

mod family;

use std::collections::HashMap;
use std::fmt;

use crate::base_ring::{BaseRing, RingElem};
use crate::error::{Error, Result};
use crate::expr::{is_identifier, parse_polynomial, PolyMap};
use crate::fpmod::{FPMap, FPModule};
use crate::linalg::Matrix;

pub use family::{DegreewiseFamily, ExtensionDegree, H0Component, Provenance};

/// `A[x_1, ..., x_m]` with every variable in degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    base: BaseRing,
    vars: Vec<String>,
}

impl GradedRing {
    pub fn new(base: BaseRing, vars: &[&str]) -> Result<Self> {
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::InvalidArgument(format!("{v:?} is not a variable name")));
            }
            if Some(*v) == base.variable() {
                return Err(Error::InvalidArgument(format!(
                    "variable {v} clashes with the base ring variable"
                )));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("variable {v} listed twice")));
            }
        }
        Ok(GradedRing {
            base,
            vars: vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Krull dimension: number of variables plus that of `A`.
    pub fn dimension(&self) -> usize {
        self.vars.len() + self.base.dimension()
    }

    pub fn parse_poly(&self, text: &str) -> Result<PolyMap> {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        parse_polynomial(&self.base, &vars, text)
    }

    /// Terms in descending monomial order, coefficients parenthesized when needed.
    pub fn render_poly(&self, p: &PolyMap) -> String {
        if p.is_empty() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (mono, c) in p.iter().rev() {
            let mut factors = Vec::new();
            for (v, &e) in self.vars.iter().zip(mono) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            let coeff = self.base.render(c);
            let term = if factors.is_empty() {
                if c.coeffs().iter().filter(|&&x| x != 0).count() > 1 {
                    format!("({coeff})")
                } else {
                    coeff
                }
            } else if c.is_one() {
                factors.join("*")
            } else if c.coeffs().iter().filter(|&&x| x != 0).count() > 1 {
                format!("({coeff})*{}", factors.join("*"))
            } else {
                format!("{coeff}*{}", factors.join("*"))
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

/// Degree-preserving inclusion `R ⊆ S` sending each variable of `R` to the
/// variable of `S` with the same name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingInclusion {
    small: GradedRing,
    big: GradedRing,
    embedding: Vec<usize>,
}

impl RingInclusion {
    pub fn new(small: GradedRing, big: GradedRing) -> Result<Self> {
        if small.base != big.base {
            return Err(Error::RingMismatch("R and S have different base rings".into()));
        }
        let embedding = small
            .vars
            .iter()
            .map(|v| {
                big.var_index(v)
                    .ok_or_else(|| Error::InvalidArgument(format!("R-variable {v} not in S")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RingInclusion {
            small,
            big,
            embedding,
        })
    }

    pub fn identity(ring: GradedRing) -> Self {
        let embedding = (0..ring.num_vars()).collect();
        RingInclusion {
            small: ring.clone(),
            big: ring,
            embedding,
        }
    }

    pub fn small(&self) -> &GradedRing {
        &self.small
    }

    pub fn big(&self) -> &GradedRing {
        &self.big
    }

    /// Index in `S` of each variable of `R`.
    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    pub fn embed_monomial(&self, mono: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.big.num_vars()];
        for (i, &e) in mono.iter().enumerate() {
            out[self.embedding[i]] = e;
        }
        out
    }
}

/// Monomials of the given degree in `nvars` variables, descending lex order.
pub fn monomials(nvars: usize, degree: i64) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(nvars, degree - e, prefix, out);
            prefix.pop();
        }
    }
    if degree < 0 {
        return Vec::new();
    }
    if nvars == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(nvars, degree as u32, &mut Vec::with_capacity(nvars), &mut out);
    out
}

fn mono_degree(m: &[u32]) -> i64 {
    m.iter().map(|&e| e as i64).sum()
}

fn mono_mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Splits a monomial into its lex-largest divisor of degree `d` and the cofactor.
fn split_monomial(m: &[u32], d: u32) -> (Vec<u32>, Vec<u32>) {
    let mut head = vec![0; m.len()];
    let mut need = d;
    for (h, &e) in head.iter_mut().zip(m) {
        let take = e.min(need);
        *h = take;
        need -= take;
    }
    let tail = m.iter().zip(&head).map(|(x, y)| x - y).collect();
    (head, tail)
}

/// Basis `(generator, monomial)` of a free graded module in one degree.
#[derive(Clone, Debug)]
pub struct ComponentBasis {
    entries: Vec<(usize, Vec<u32>)>,
    index: HashMap<(usize, Vec<u32>), usize>,
}

impl ComponentBasis {
    pub fn new(nvars: usize, twists: &[i64], degree: i64) -> Self {
        let mut entries = Vec::new();
        for (i, &a) in twists.iter().enumerate() {
            for m in monomials(nvars, degree - a) {
                entries.push((i, m));
            }
        }
        let index = entries
            .iter()
            .enumerate()
            .map(|(k, e)| (e.clone(), k))
            .collect();
        ComponentBasis { entries, index }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Vec<u32>)] {
        &self.entries
    }

    pub fn position(&self, generator: usize, mono: &[u32]) -> Option<usize> {
        self.index.get(&(generator, mono.to_vec())).copied()
    }
}

/// A homogeneous vector `sum_i p_i e_i` expanded in a component basis.
fn expand(
    ring: &BaseRing,
    basis: &ComponentBasis,
    polys: &[(usize, &PolyMap)],
    shift: &[u32],
) -> Vec<RingElem> {
    let mut col = RingElem::zeros(basis.len());
    for &(i, p) in polys {
        for (mono, c) in p {
            let k = basis
                .position(i, &mono_mul(mono, shift))
                .expect("homogeneous term lands in the component basis");
            col[k] = ring.add(&col[k], c);
        }
    }
    col
}

/// Cokernel of a homogeneous map `⊕ S(-b_j) -> ⊕ S(-a_i)`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedModule {
    ring: GradedRing,
    twists: Vec<i64>,
    relation_twists: Vec<i64>,
    /// Row-major, `twists.len() x relation_twists.len()`.
    entries: Vec<PolyMap>,
}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GradedModule(twists {:?}, relation twists {:?}, {:?})",
            self.twists,
            self.relation_twists,
            self.rendered_matrix()
        )
    }
}

fn poly_degree(p: &PolyMap) -> Option<i64> {
    let mut degs = p.keys().map(|m| mono_degree(m));
    let d = degs.next()?;
    if degs.all(|e| e == d) {
        Some(d)
    } else {
        None
    }
}

fn check_homogeneous(p: &PolyMap, expected: i64, row: usize, col: usize) -> Result<()> {
    if p.is_empty() {
        return Ok(());
    }
    match poly_degree(p) {
        Some(d) if d == expected => Ok(()),
        _ => Err(Error::InvalidArgument(format!(
            "entry ({row}, {col}) is not homogeneous of degree {expected}"
        ))),
    }
}

impl GradedModule {
    pub fn new(
        ring: GradedRing,
        twists: Vec<i64>,
        relation_twists: Vec<i64>,
        entries: Vec<Vec<PolyMap>>,
    ) -> Result<Self> {
        if entries.len() != twists.len()
            || entries.iter().any(|r| r.len() != relation_twists.len())
        {
            return Err(Error::InvalidArgument(format!(
                "presentation must be {}x{}",
                twists.len(),
                relation_twists.len()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                check_homogeneous(p, relation_twists[j] - twists[i], i, j)?;
            }
        }
        Ok(GradedModule {
            ring,
            twists,
            relation_twists,
            entries: entries.into_iter().flatten().collect(),
        })
    }

    pub fn parse(
        ring: GradedRing,
        twists: Vec<i64>,
        relation_twists: Vec<i64>,
        entries: &[Vec<String>],
    ) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|row| row.iter().map(|s| ring.parse_poly(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        GradedModule::new(ring, twists, relation_twists, parsed)
    }

    pub fn free(ring: GradedRing, twists: Vec<i64>) -> Self {
        GradedModule {
            ring,
            twists,
            relation_twists: Vec::new(),
            entries: Vec::new(),
        }
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn relation_twists(&self) -> &[i64] {
        &self.relation_twists
    }

    pub fn entry(&self, i: usize, j: usize) -> &PolyMap {
        &self.entries[i * self.relation_twists.len() + j]
    }

    pub fn rendered_matrix(&self) -> Vec<Vec<String>> {
        (0..self.twists.len())
            .map(|i| {
                (0..self.relation_twists.len())
                    .map(|j| self.ring.render_poly(self.entry(i, j)))
                    .collect()
            })
            .collect()
    }

    /// Every component vanishes below this degree.
    pub fn lower_bound(&self) -> i64 {
        self.twists.iter().copied().min().unwrap_or(0)
    }

    pub fn basis(&self, n: i64) -> ComponentBasis {
        ComponentBasis::new(self.ring.num_vars(), &self.twists, n)
    }

    /// Relation columns of the degree-`n` component in the given basis.
    fn relation_columns(&self, basis: &ComponentBasis, n: i64) -> Matrix {
        let nv = self.ring.num_vars();
        let mut cols = Vec::new();
        for (j, &b) in self.relation_twists.iter().enumerate() {
            let polys: Vec<(usize, &PolyMap)> = (0..self.twists.len())
                .map(|i| (i, self.entry(i, j)))
                .filter(|(_, p)| !p.is_empty())
                .collect();
            if polys.is_empty() {
                continue;
            }
            for nu in monomials(nv, n - b) {
                cols.push(expand(self.ring.base(), basis, &polys, &nu));
            }
        }
        Matrix::from_columns(basis.len(), &cols)
    }

    pub fn component(&self, n: i64) -> FPModule {
        let basis = self.basis(n);
        let rels = self.relation_columns(&basis, n);
        FPModule::new(self.ring.base().clone(), rels).expect("entries lie in the base ring")
    }

    /// Matrix of multiplication by a variable from the degree-`n` basis to degree `n+1`.
    pub fn mult_matrix(&self, n: i64, var: usize) -> Matrix {
        let src = self.basis(n);
        let dst = self.basis(n + 1);
        monomial_shift_matrix(&src, &dst, var)
    }

    pub fn mult_map(&self, n: i64, var: usize) -> FPMap {
        FPMap::new(self.component(n), self.component(n + 1), self.mult_matrix(n, var))
            .expect("multiplication by a variable is well defined")
    }

    /// `X_{>= r}` regraded so that degree `r` becomes 0.
    pub fn truncate_and_shift(&self, r: i64) -> GradedModule {
        Truncation::new(self, r).module
    }
}

fn monomial_shift_matrix(src: &ComponentBasis, dst: &ComponentBasis, var: usize) -> Matrix {
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (k, (i, mono)) in src.entries().iter().enumerate() {
        let mut shifted = mono.clone();
        shifted[var] += 1;
        let row = dst.position(*i, &shifted).expect("shifted monomial in basis");
        m.set(row, k, RingElem::one());
    }
    m
}

/// Rewrites elements of degree `>= r` of a graded module in the generators of
/// its truncation.
enum Spread {
    Multiples(HashMap<Vec<u32>, usize>),
    Single(usize),
}

pub(crate) struct Truncation {
    pub module: GradedModule,
    r: i64,
    /// For each original generator: the new generator indices of its degree-`r`
    /// monomial multiples, or the single new index if its twist exceeds `r`.
    spread: Vec<Spread>,
    original_twists: Vec<i64>,
}

impl Truncation {
    pub fn new(x: &GradedModule, r: i64) -> Self {
        let ring = x.ring.clone();
        let base = ring.base().clone();
        let nv = ring.num_vars();
        let mut twists = Vec::new();
        let mut spread = Vec::new();
        for &a in &x.twists {
            if a <= r {
                let mut map = HashMap::new();
                for m in monomials(nv, r - a) {
                    map.insert(m, twists.len());
                    twists.push(0);
                }
                spread.push(Spread::Multiples(map));
            } else {
                spread.push(Spread::Single(twists.len()));
                twists.push(a - r);
            }
        }
        let g = twists.len();
        let mut t = Truncation {
            module: GradedModule::free(ring.clone(), twists),
            r,
            spread,
            original_twists: x.twists.clone(),
        };
        let mut rel_twists = Vec::new();
        let mut columns: Vec<Vec<PolyMap>> = Vec::new();
        // Linear syzygies among the monomial multiples of each generator.
        for (i, &a) in x.twists.iter().enumerate() {
            if a > r {
                continue;
            }
            for nu in monomials(nv, r - a + 1) {
                let nz: Vec<usize> = (0..nv).filter(|&k| nu[k] > 0).collect();
                let Some((&k0, rest)) = nz.split_first() else { continue };
                for &l in rest {
                    let mut col = vec![PolyMap::new(); g];
                    let mut m0 = nu.clone();
                    m0[k0] -= 1;
                    let mut m1 = nu.clone();
                    m1[l] -= 1;
                    let Spread::Multiples(idx) = &t.spread[i] else { unreachable!() };
                    col[idx[&m0]].insert(unit_mono(nv, k0), RingElem::one());
                    col[idx[&m1]].insert(unit_mono(nv, l), base.neg(&RingElem::one()));
                    columns.push(col);
                    rel_twists.push(1);
                }
            }
        }
        // Original relations, multiplied up to degree r when they live below it.
        for (j, &b) in x.relation_twists.iter().enumerate() {
            let polys: Vec<(usize, PolyMap)> = (0..x.twists.len())
                .map(|i| (i, x.entry(i, j).clone()))
                .filter(|(_, p)| !p.is_empty())
                .collect();
            if polys.is_empty() {
                continue;
            }
            if b <= r {
                for nu in monomials(nv, r - b) {
                    let shifted: Vec<(usize, PolyMap)> = polys
                        .iter()
                        .map(|(i, p)| (*i, p.iter().map(|(m, c)| (mono_mul(m, &nu), c.clone())).collect()))
                        .collect();
                    columns.push(t.express(&base, &shifted));
                    rel_twists.push(0);
                }
            } else {
                columns.push(t.express(&base, &polys));
                rel_twists.push(b - r);
            }
        }
        let mut entries = vec![PolyMap::new(); g * columns.len()];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, p) in col.into_iter().enumerate() {
                entries[i * rel_twists.len() + j] = p;
            }
        }
        t.module.relation_twists = rel_twists;
        t.module.entries = entries;
        t
    }

    /// Expresses `sum_i p_i e_i`, homogeneous of degree `>= r`, in the new generators.
    pub fn express(&self, base: &BaseRing, polys: &[(usize, PolyMap)]) -> Vec<PolyMap> {
        let mut out = vec![PolyMap::new(); self.module.twists.len()];
        for (i, p) in polys {
            for (mono, c) in p {
                let (target, cofactor) = match &self.spread[*i] {
                    Spread::Multiples(map) => {
                        let need = (self.r - self.original_twists[*i]) as u32;
                        let (head, tail) = split_monomial(mono, need);
                        (map[&head], tail)
                    }
                    Spread::Single(k) => (*k, mono.clone()),
                };
                let slot = &mut out[target];
                let sum = match slot.get(&cofactor) {
                    Some(x) => base.add(x, c),
                    None => c.clone(),
                };
                if sum.is_zero() {
                    slot.remove(&cofactor);
                } else {
                    slot.insert(cofactor, sum);
                }
            }
        }
        out
    }

}

fn unit_mono(nv: usize, k: usize) -> Vec<u32> {
    let mut m = vec![0; nv];
    m[k] = 1;
    m
}

/// A degree-0 homogeneous map `M -> N` from an `R`-module to an `S`-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedModule,
    target: GradedModule,
    inclusion: RingInclusion,
    /// Row-major, target generators x source generators, over `S`.
    entries: Vec<PolyMap>,
}

impl GradedMap {
    pub fn new(
        source: GradedModule,
        target: GradedModule,
        inclusion: RingInclusion,
        entries: Vec<Vec<PolyMap>>,
    ) -> Result<Self> {
        if source.ring != *inclusion.small() || target.ring != *inclusion.big() {
            return Err(Error::RingMismatch(
                "map endpoints do not match the ring inclusion".into(),
            ));
        }
        let (g_src, g_tgt) = (source.twists.len(), target.twists.len());
        if entries.len() != g_tgt || entries.iter().any(|r| r.len() != g_src) {
            return Err(Error::InvalidArgument(format!(
                "map matrix must be {g_tgt}x{g_src}"
            )));
        }
        for (k, row) in entries.iter().enumerate() {
            for (i, p) in row.iter().enumerate() {
                check_homogeneous(p, source.twists[i] - target.twists[k], k, i)?;
            }
        }
        Ok(GradedMap {
            source,
            target,
            inclusion,
            entries: entries.into_iter().flatten().collect(),
        })
    }

    pub fn parse(
        source: GradedModule,
        target: GradedModule,
        inclusion: RingInclusion,
        entries: &[Vec<String>],
    ) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| inclusion.big().parse_poly(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GradedMap::new(source, target, inclusion, parsed)
    }

    /// The identity of a module over `R = S`.
    pub fn identity(m: &GradedModule) -> Self {
        let g = m.twists.len();
        let nv = m.ring.num_vars();
        let mut entries = vec![PolyMap::new(); g * g];
        for i in 0..g {
            entries[i * g + i].insert(vec![0; nv], RingElem::one());
        }
        GradedMap {
            source: m.clone(),
            target: m.clone(),
            inclusion: RingInclusion::identity(m.ring.clone()),
            entries,
        }
    }

    pub fn source(&self) -> &GradedModule {
        &self.source
    }

    pub fn target(&self) -> &GradedModule {
        &self.target
    }

    pub fn inclusion(&self) -> &RingInclusion {
        &self.inclusion
    }

    pub fn entry(&self, k: usize, i: usize) -> &PolyMap {
        &self.entries[k * self.source.twists.len() + i]
    }

    pub fn rendered_matrix(&self) -> Vec<Vec<String>> {
        (0..self.target.twists.len())
            .map(|k| {
                (0..self.source.twists.len())
                    .map(|i| self.inclusion.big().render_poly(self.entry(k, i)))
                    .collect()
            })
            .collect()
    }

    /// Matrix of the degree-`n` component in the standard component bases.
    pub fn component_matrix(&self, n: i64) -> Matrix {
        let src = self.source.basis(n);
        let dst = self.target.basis(n);
        let base = self.source.ring.base();
        let cols: Vec<Vec<RingElem>> = src
            .entries()
            .iter()
            .map(|(i, mono)| {
                let shift = self.inclusion.embed_monomial(mono);
                let polys: Vec<(usize, &PolyMap)> = (0..self.target.twists.len())
                    .map(|k| (k, self.entry(k, *i)))
                    .filter(|(_, p)| !p.is_empty())
                    .collect();
                expand(base, &dst, &polys, &shift)
            })
            .collect();
        Matrix::from_columns(dst.len(), &cols)
    }

    /// The degree-`n` component, checked for well-definedness.
    pub fn component(&self, n: i64) -> Result<FPMap> {
        FPMap::new(
            self.source.component(n),
            self.target.component(n),
            self.component_matrix(n),
        )
        .map_err(|e| Error::Malformed {
            degree: n,
            message: e.to_string(),
        })
    }

    /// Truncates both ends at `r` and shifts; `self` must be defined on generators.
    pub fn truncate_and_shift(&self, r: i64) -> GradedMap {
        let ts = Truncation::new(&self.source, r);
        let tt = Truncation::new(&self.target, r);
        let base = self.source.ring.base().clone();
        let nv_big = self.inclusion.big().num_vars();
        let g_new_src = ts.module.twists.len();
        let g_new_tgt = tt.module.twists.len();
        let mut entries = vec![PolyMap::new(); g_new_tgt * g_new_src];
        // Each new source generator is a monomial multiple (or copy) of an old one.
        for (i, spread) in ts.spread.iter().enumerate() {
            let gens: Vec<(usize, Vec<u32>)> = match spread {
                Spread::Multiples(map) => map.iter().map(|(m, &k)| (k, m.clone())).collect(),
                Spread::Single(k) => vec![(*k, vec![0; self.inclusion.small().num_vars()])],
            };
            for (new_i, mono) in gens {
                let shift = self.inclusion.embed_monomial(&mono);
                let polys: Vec<(usize, PolyMap)> = (0..self.target.twists.len())
                    .map(|k| {
                        let p: PolyMap = self
                            .entry(k, i)
                            .iter()
                            .map(|(m, c)| (mono_mul(m, &shift), c.clone()))
                            .collect();
                        (k, p)
                    })
                    .filter(|(_, p)| !p.is_empty())
                    .collect();
                let col = tt.express(&base, &polys);
                for (k, p) in col.into_iter().enumerate() {
                    entries[k * g_new_src + new_i] = p;
                }
            }
        }
        debug_assert!(entries
            .iter()
            .all(|p| p.keys().all(|m| m.len() == nv_big)));
        GradedMap {
            source: ts.module,
            target: tt.module,
            inclusion: self.inclusion.clone(),
            entries,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2u() -> BaseRing {
        BaseRing::univariate(2, "u").unwrap()
    }

    fn ring(vars: &[&str]) -> GradedRing {
        GradedRing::new(f2u(), vars).unwrap()
    }

    fn strings(rows: &[&[&str]]) -> Vec<Vec<String>> {
        rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn monomial_order() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(0, 0), vec![Vec::<u32>::new()]);
        assert!(monomials(3, -1).is_empty());
        assert_eq!(monomials(3, 2).len(), 6);
    }

    #[test]
    fn component_examples() {
        let s = ring(&["x", "y"]);
        assert_eq!(GradedModule::free(s, vec![0]).component(2).render(), "A^3");
        let r = ring(&["x"]);
        assert!(GradedModule::free(r.clone(), vec![1]).component(0).is_zero());
        let q = GradedModule::parse(r, vec![0], vec![1], &strings(&[&["x"]])).unwrap();
        assert!(q.component(3).is_zero());
        assert_eq!(q.component(0).render(), "A");
    }

    #[test]
    fn mult_map_examples() {
        let r = ring(&["x"]);
        let free = GradedModule::free(r.clone(), vec![0]);
        let f = free.mult_map(2, 0);
        assert!(f.is_injective() && f.is_surjective());
        let q = GradedModule::parse(r, vec![0], vec![2], &strings(&[&["x^2"]])).unwrap();
        assert!(q.mult_map(1, 0).is_zero());
        let s = ring(&["x", "y"]);
        let m = GradedModule::free(s, vec![0]).mult_map(1, 0);
        assert_eq!((m.source().num_generators(), m.target().num_generators()), (2, 3));
        assert!(m.is_injective());
    }

    #[test]
    fn homogeneity_is_checked() {
        let r = ring(&["x", "y"]);
        let err = GradedModule::parse(r, vec![0], vec![1], &strings(&[&["x + y^2"]]));
        assert!(matches!(err, Err(Error::InvalidArgument(msg)) if msg.contains("(0, 0)")));
    }

    #[test]
    fn truncation_examples() {
        let r = ring(&["x"]);
        let t = GradedModule::free(r.clone(), vec![2]).truncate_and_shift(2);
        assert_eq!(t.twists(), &[0]);
        assert!(t.component(0).render() == "A" && t.component(3).render() == "A");
        let q = GradedModule::parse(r.clone(), vec![0], vec![2], &strings(&[&["x^2"]])).unwrap();
        let t = q.truncate_and_shift(5);
        for n in 0..4 {
            assert!(t.component(n).is_zero());
        }
        // The ideal (u*x) is R(-1); truncating at 1 gives a free module in degree 0.
        let t = GradedModule::free(r, vec![1]).truncate_and_shift(1);
        assert_eq!(t.twists(), &[0]);
        assert_eq!(t.relation_twists().len(), 0);
    }

    #[test]
    fn truncation_matches_components() {
        let s = ring(&["x", "y"]);
        let m = GradedModule::parse(
            s,
            vec![0, 1],
            vec![2, 2],
            &strings(&[&["u*x^2", "y^2"], &["x", "0"]]),
        )
        .unwrap();
        for r in 0..4 {
            let t = m.truncate_and_shift(r);
            for n in 0..5 {
                assert!(
                    t.component(n).is_isomorphic(&m.component(n + r)),
                    "r = {r}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn poly_render_round_trip() {
        let s = ring(&["x", "y"]);
        for text in ["u*x^2 + (1 + u)*x*y + y^2", "0", "(1 + u)", "x"] {
            let p = s.parse_poly(text).unwrap();
            let back = s.parse_poly(&s.render_poly(&p)).unwrap();
            assert_eq!(p, back);
        }
        assert_eq!(s.render_poly(&s.parse_poly("y^2 + x").unwrap()), "x + y^2");
    }
}
