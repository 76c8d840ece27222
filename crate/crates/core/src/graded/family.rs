use rayon::prelude::*;
use serde::Serialize;

use super::{monomials, GradedMap, GradedModule, GradedRing};
use crate::error::{Error, Result};
use crate::fpmod::{pushout, FPMap, FPModule, Quotient, Realization, Submodule};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Provenance {
    #[serde(rename = "fg")]
    FG,
    #[serde(rename = "quotient")]
    Quotient,
    #[serde(rename = "extension")]
    Extension,
    #[serde(rename = "functor_image")]
    FunctorImage,
    #[serde(rename = "derived")]
    Derived,
}

/// `n -> X_n` on a finite window `[start, end]` together with the maps
/// `X_n -> X_{n+1}` given by the variables of `R`. Components below `start`
/// are zero.
#[derive(Clone, Debug)]
pub struct DegreewiseFamily {
    provenance: Provenance,
    ring: GradedRing,
    start: i64,
    components: Vec<FPModule>,
    /// `mults[k][v]`: multiplication by variable `v` from degree `start + k`.
    mults: Vec<Vec<FPMap>>,
}

/// Per-degree data of an extension `0 -> X_n -> Y_n -> D_n -> 0`.
#[derive(Clone, Debug)]
pub struct ExtensionDegree {
    pub middle: FPModule,
    pub inclusion: FPMap,
    pub projection: FPMap,
    /// `Y_n -> Y_{n+1}` per variable; ignored in the last degree of the window.
    pub mults: Vec<FPMap>,
}

/// Elements of `X_n` killed by `R_+^K`.
#[derive(Clone, Debug)]
pub struct H0Component {
    pub submodule: Submodule,
    /// The kernel did not grow between `K - 1` and `K`.
    pub certified: bool,
}

fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

impl DegreewiseFamily {
    /// Assembles a family, checking that the maps connect consecutive components.
    pub fn new(
        provenance: Provenance,
        ring: GradedRing,
        start: i64,
        components: Vec<FPModule>,
        mults: Vec<Vec<FPMap>>,
    ) -> Result<Self> {
        if mults.len() + 1 != components.len().max(1) {
            return Err(Error::Invariant(format!(
                "{} components need {} multiplication steps, got {}",
                components.len(),
                components.len().saturating_sub(1),
                mults.len()
            )));
        }
        for (k, step) in mults.iter().enumerate() {
            if step.len() != ring.num_vars() {
                return Err(Error::Invariant(format!(
                    "degree {}: expected {} multiplication maps",
                    start + k as i64,
                    ring.num_vars()
                )));
            }
            for f in step {
                if f.source() != &components[k] || f.target() != &components[k + 1] {
                    return Err(Error::Invariant(format!(
                        "degree {}: multiplication map does not connect the components",
                        start + k as i64
                    )));
                }
            }
        }
        Ok(DegreewiseFamily {
            provenance,
            ring,
            start,
            components,
            mults,
        })
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn num_vars(&self) -> usize {
        self.ring.num_vars()
    }

    /// Below this degree every component is zero.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last degree of the window.
    pub fn end(&self) -> i64 {
        self.start + self.components.len() as i64 - 1
    }

    pub fn check_range(&self, lo: i64, hi: i64) -> Result<()> {
        if hi > self.end() || lo > hi {
            let bad = if lo > hi { lo } else { hi };
            return Err(Error::OutOfWindow {
                degree: bad,
                lo: self.start,
                hi: self.end(),
            });
        }
        Ok(())
    }

    pub fn component(&self, n: i64) -> Result<FPModule> {
        if n < self.start {
            return Ok(FPModule::zero(self.ring.base()));
        }
        self.components
            .get((n - self.start) as usize)
            .cloned()
            .ok_or(Error::OutOfWindow {
                degree: n,
                lo: self.start,
                hi: self.end(),
            })
    }

    /// Multiplication by variable `var` of `R`: `X_n -> X_{n+1}`.
    pub fn mult_map(&self, n: i64, var: usize) -> Result<FPMap> {
        if var >= self.num_vars() {
            return Err(Error::InvalidArgument(format!("no variable with index {var}")));
        }
        if n + 1 < self.start {
            let z = FPModule::zero(self.ring.base());
            return Ok(FPMap::zero(&z, &z));
        }
        if n < self.start {
            return Ok(FPMap::zero(
                &FPModule::zero(self.ring.base()),
                &self.component(n + 1)?,
            ));
        }
        self.mults
            .get((n - self.start) as usize)
            .map(|step| step[var].clone())
            .ok_or(Error::OutOfWindow {
                degree: n + 1,
                lo: self.start,
                hi: self.end(),
            })
    }

    /// `X_n -> X_{n+1}^s`, `z -> (x_1 z, ..., x_s z)`.
    pub fn joint_mult(&self, n: i64) -> Result<FPMap> {
        let maps = (0..self.num_vars())
            .map(|v| self.mult_map(n, v))
            .collect::<Result<Vec<_>>>()?;
        if maps.is_empty() {
            let src = self.component(n)?;
            return Ok(FPMap::zero(&src, &FPModule::zero(self.ring.base())));
        }
        let refs: Vec<&FPMap> = maps.iter().collect();
        FPMap::joint(&refs)
    }

    /// Components and multiplication maps of a finitely generated graded `R`-module.
    pub fn from_graded(x: &GradedModule, end: i64) -> Result<Self> {
        let start = x.lower_bound().min(end);
        let ring = x.ring().clone();
        let components: Vec<FPModule> = (start..=end)
            .into_par_iter()
            .map(|n| x.component(n))
            .collect();
        let mults: Vec<Vec<FPMap>> = (start..end)
            .into_par_iter()
            .map(|n| {
                let k = (n - start) as usize;
                (0..ring.num_vars())
                    .map(|v| {
                        FPMap::from_parts(
                            components[k].clone(),
                            components[k + 1].clone(),
                            x.mult_matrix(n, v),
                        )
                    })
                    .collect()
            })
            .collect();
        DegreewiseFamily::new(Provenance::FG, ring, start, components, mults)
    }

    /// `N / ι(M)` for a graded `R`-module `M` included in a graded `S`-module `N`.
    pub fn quotient_family(iota: &GradedMap, end: i64) -> Result<Self> {
        let n_mod = iota.target();
        let inclusion = iota.inclusion();
        let ring = inclusion.small().clone();
        let start = n_mod.lower_bound().min(end);
        let quotients = first_error(
            (start..=end)
                .into_par_iter()
                .map(|n| {
                    let f = iota.component(n)?;
                    if !f.is_injective() {
                        return Err(Error::NotInclusion { degree: n });
                    }
                    Ok(f.cokernel())
                })
                .collect(),
        )?;
        let embedding = inclusion.embedding().to_vec();
        let mults = first_error(
            (start..end)
                .into_par_iter()
                .map(|n| {
                    let k = (n - start) as usize;
                    let a = Realization::Quot(quotients[k].clone());
                    let b = Realization::Quot(quotients[k + 1].clone());
                    embedding
                        .iter()
                        .map(|&s| a.induced(&b, &n_mod.mult_matrix(n, s)))
                        .collect::<Result<Vec<_>>>()
                })
                .collect(),
        )?;
        let components = quotients.into_iter().map(|q| q.module).collect();
        DegreewiseFamily::new(Provenance::Quotient, ring, start, components, mults)
    }

    /// Checks `x_v x_w = x_w x_v` on every pair of variables across the window.
    pub fn verify_commuting(&self) -> Result<()> {
        let s = self.num_vars();
        for n in self.start..self.end() - 1 {
            for v in 0..s {
                for w in v + 1..s {
                    let a = self.mult_map(n, v)?.then(&self.mult_map(n + 1, w)?)?;
                    let b = self.mult_map(n, w)?.then(&self.mult_map(n + 1, v)?)?;
                    if !a.equals(&b) {
                        return Err(Error::Malformed {
                            degree: n,
                            message: format!("multiplication by variables {v} and {w} do not commute"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `X / D` for a finitely generated `D` mapped into `X` by `maps[n - start]`.
    pub fn quotient_by_fg(&self, d: &GradedModule, maps: &[FPMap]) -> Result<Self> {
        if maps.len() != self.components.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} degreewise maps, got {}",
                self.components.len(),
                maps.len()
            )));
        }
        if d.ring() != &self.ring {
            return Err(Error::RingMismatch("D must be a module over R".into()));
        }
        for (k, j) in maps.iter().enumerate() {
            let n = self.start + k as i64;
            if j.source() != &d.component(n) || j.target() != &self.components[k] {
                return Err(Error::Malformed {
                    degree: n,
                    message: "map does not connect D_n and X_n".into(),
                });
            }
            if !j.is_injective() {
                return Err(Error::Malformed {
                    degree: n,
                    message: "map D_n -> X_n is not injective".into(),
                });
            }
        }
        for k in 0..self.mults.len() {
            let n = self.start + k as i64;
            for v in 0..self.num_vars() {
                let d_mult = FPMap::from_parts(
                    maps[k].source().clone(),
                    maps[k + 1].source().clone(),
                    d.mult_matrix(n, v),
                );
                let lhs = d_mult.then(&maps[k + 1])?;
                let rhs = maps[k].then(&self.mults[k][v])?;
                if !lhs.equals(&rhs) {
                    return Err(Error::Malformed {
                        degree: n,
                        message: format!(
                            "map is not compatible with multiplication by {}",
                            self.ring.variables()[v]
                        ),
                    });
                }
            }
        }
        let quotients: Vec<Quotient> = maps.iter().map(FPMap::cokernel).collect();
        self.induced_quotient(Provenance::Quotient, quotients)
    }

    /// Family of the given quotients of the components, with induced maps.
    fn induced_quotient(&self, provenance: Provenance, quotients: Vec<Quotient>) -> Result<Self> {
        let mults = first_error(
            (0..quotients.len().saturating_sub(1))
                .into_par_iter()
                .map(|k| {
                    let a = Realization::Quot(quotients[k].clone());
                    let b = Realization::Quot(quotients[k + 1].clone());
                    self.mults[k]
                        .iter()
                        .map(|f| a.induced(&b, f.matrix()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect(),
        )?;
        let components = quotients.into_iter().map(|q| q.module).collect();
        DegreewiseFamily::new(provenance, self.ring.clone(), self.start, components, mults)
    }

    /// `Y` with `0 -> X -> Y -> D -> 0`, from explicit per-degree data.
    pub fn extend_family(&self, d: &DegreewiseFamily, data: Vec<ExtensionDegree>) -> Result<Self> {
        if d.ring != self.ring || d.end() < self.end() {
            return Err(Error::InvalidArgument(
                "D must be a family over R covering the window of X".into(),
            ));
        }
        if data.len() != self.components.len() {
            return Err(Error::InvalidArgument(format!(
                "expected extension data for {} degrees, got {}",
                self.components.len(),
                data.len()
            )));
        }
        let bad = |n: i64, message: &str| Error::Malformed {
            degree: n,
            message: message.to_string(),
        };
        for (k, e) in data.iter().enumerate() {
            let n = self.start + k as i64;
            let dn = d.component(n)?;
            if e.inclusion.source() != &self.components[k]
                || e.inclusion.target() != &e.middle
                || e.projection.source() != &e.middle
                || e.projection.target() != &dn
            {
                return Err(bad(n, "extension maps do not connect X_n, Y_n and D_n"));
            }
            if !e.inclusion.is_injective() {
                return Err(bad(n, "X_n -> Y_n is not injective"));
            }
            if !e.projection.is_surjective() {
                return Err(bad(n, "Y_n -> D_n is not surjective"));
            }
            if !e.inclusion.then(&e.projection)?.is_zero() {
                return Err(bad(n, "composite X_n -> D_n is not zero"));
            }
            if !e.inclusion.image().contains_submodule(&e.projection.kernel()) {
                return Err(bad(n, "sequence is not exact at Y_n"));
            }
        }
        for k in 0..self.mults.len() {
            let n = self.start + k as i64;
            if data[k].mults.len() != self.num_vars() {
                return Err(bad(n, "missing multiplication maps on Y_n"));
            }
            for v in 0..self.num_vars() {
                let y = &data[k].mults[v];
                if y.source() != &data[k].middle || y.target() != &data[k + 1].middle {
                    return Err(bad(n, "multiplication map on Y does not connect components"));
                }
                let left = data[k].inclusion.then(y)?;
                let right = self.mults[k][v].then(&data[k + 1].inclusion)?;
                if !left.equals(&right) {
                    return Err(bad(n, "multiplication does not commute with X -> Y"));
                }
                let left = y.then(&data[k + 1].projection)?;
                let right = data[k].projection.then(&d.mult_map(n, v)?)?;
                if !left.equals(&right) {
                    return Err(bad(n, "multiplication does not commute with Y -> D"));
                }
            }
        }
        let mults = data[..data.len().saturating_sub(1)]
            .iter()
            .map(|e| e.mults.clone())
            .collect();
        let components = data.into_iter().map(|e| e.middle).collect();
        DegreewiseFamily::new(
            Provenance::Extension,
            self.ring.clone(),
            self.start,
            components,
            mults,
        )
    }

    /// The split extension `X ⊕ D`.
    pub fn split_extension(&self, d: &DegreewiseFamily) -> Result<Self> {
        let base = self.ring.base().clone();
        let mut data = Vec::with_capacity(self.components.len());
        for (k, x) in self.components.iter().enumerate() {
            let n = self.start + k as i64;
            let dn = d.component(n)?;
            let (gx, gd) = (x.num_generators(), dn.num_generators());
            let middle = FPModule::direct_sum(&base, &[x, &dn]);
            let inclusion = FPMap::from_parts(
                x.clone(),
                middle.clone(),
                Matrix::vstack(gx, &[&Matrix::identity(gx), &Matrix::zeros(gd, gx)]),
            );
            let projection = FPMap::from_parts(
                middle.clone(),
                dn.clone(),
                Matrix::hstack(gd, &[&Matrix::zeros(gd, gx), &Matrix::identity(gd)]),
            );
            let mults = if k < self.mults.len() {
                (0..self.num_vars())
                    .map(|v| FPMap::direct_sum(&[&self.mults[k][v], &d.mult_map(n, v)?]))
                    .collect::<Result<Vec<_>>>()?
            } else {
                Vec::new()
            };
            data.push(ExtensionDegree {
                middle,
                inclusion,
                projection,
                mults,
            });
        }
        self.extend_family(d, data)
    }

    /// Degreewise pushout of `Z <- X -> V` along families of maps.
    pub fn pushout_family(
        &self,
        z: &DegreewiseFamily,
        v: &DegreewiseFamily,
        to_z: &[FPMap],
        to_v: &[FPMap],
    ) -> Result<Self> {
        if to_z.len() != self.components.len() || to_v.len() != self.components.len() {
            return Err(Error::InvalidArgument("one map per degree is required".into()));
        }
        let base = self.ring.base().clone();
        let mut quotients = Vec::new();
        for k in 0..self.components.len() {
            let n = self.start + k as i64;
            let sum = FPModule::direct_sum(&base, &[&z.component(n)?, &v.component(n)?]);
            let neg = to_v[k].matrix().scale(&base, &base.constant(-1));
            let rel = Matrix::vstack(self.components[k].num_generators(), &[to_z[k].matrix(), &neg]);
            // Validates the legs.
            pushout(&to_z[k], &to_v[k])?;
            quotients.push(Quotient::of(&sum, &rel));
        }
        let mut mults = Vec::new();
        for k in 0..quotients.len().saturating_sub(1) {
            let n = self.start + k as i64;
            let a = Realization::Quot(quotients[k].clone());
            let b = Realization::Quot(quotients[k + 1].clone());
            let step = (0..self.num_vars())
                .map(|var| {
                    let m = FPMap::direct_sum(&[&z.mult_map(n, var)?, &v.mult_map(n, var)?])?;
                    a.induced(&b, m.matrix())
                })
                .collect::<Result<Vec<_>>>()?;
            mults.push(step);
        }
        let components = quotients.into_iter().map(|q| q.module).collect();
        DegreewiseFamily::new(Provenance::Extension, self.ring.clone(), self.start, components, mults)
    }

    /// Matrices `X_n -> X_{n+k}` of every degree-`k` monomial of `R`, in order.
    fn monomial_maps(&self, n: i64, k: i64) -> Result<Vec<Matrix>> {
        let s = self.num_vars();
        let mut level: Vec<(Vec<u32>, Matrix)> = vec![(
            vec![0; s],
            Matrix::identity(self.component(n)?.num_generators()),
        )];
        let base = self.ring.base();
        for step in 1..=k {
            let mut next = Vec::new();
            for mono in monomials(s, step) {
                let v = mono.iter().position(|&e| e > 0).expect("positive degree");
                let mut prev = mono.clone();
                prev[v] -= 1;
                let (_, p) = level
                    .iter()
                    .find(|(m, _)| *m == prev)
                    .expect("previous level holds every monomial");
                let m = self.mult_map(n + step - 1, v)?.matrix().mul(base, p);
                next.push((mono, m));
            }
            level = next;
        }
        Ok(level.into_iter().map(|(_, m)| m).collect())
    }

    fn killed_by_power(&self, n: i64, k: i64) -> Result<Submodule> {
        let x = self.component(n)?;
        let maps = self.monomial_maps(n, k)?;
        let target = self.component(n + k)?;
        let refs: Vec<&FPModule> = maps.iter().map(|_| &target).collect();
        let sum = FPModule::direct_sum(self.ring.base(), &refs);
        let blocks: Vec<&Matrix> = maps.iter().collect();
        let joint = FPMap::from_parts(x.clone(), sum, Matrix::vstack(x.num_generators(), &blocks));
        Ok(joint.kernel())
    }

    /// Elements of `X_n` killed by `R_+^K`, computed through `X_{n+K}`.
    pub fn h0_component(&self, n: i64, saturation: usize) -> Result<H0Component> {
        if saturation == 0 {
            return Err(Error::InvalidArgument("saturation bound must be at least 1".into()));
        }
        let k = saturation as i64;
        self.check_range(n, n + k)?;
        let full = self.killed_by_power(n, k)?;
        let before = self.killed_by_power(n, k - 1)?;
        let certified = before.contains_submodule(&full);
        Ok(H0Component {
            submodule: full,
            certified,
        })
    }

    /// `X / H^0(X)` on `[start, end - K]`.
    pub fn quotient_by_h0(&self, saturation: usize) -> Result<Self> {
        let last = self.end() - saturation as i64;
        if last < self.start {
            return Err(Error::InsufficientWindow(format!(
                "window [{}, {}] is shorter than the saturation bound {saturation}",
                self.start,
                self.end()
            )));
        }
        let quotients = first_error(
            (self.start..=last)
                .into_par_iter()
                .map(|n| {
                    let h = self.h0_component(n, saturation)?;
                    Ok(Quotient::of(&self.component(n)?, &h.submodule.generators))
                })
                .collect(),
        )?;
        let mut truncated = self.clone();
        let keep = quotients.len();
        truncated.components.truncate(keep);
        truncated.mults.truncate(keep.saturating_sub(1));
        truncated.induced_quotient(Provenance::Derived, quotients)
    }
}
