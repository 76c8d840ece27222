//! Window-relative analysis of a family: stabilization of associated primes,
//! exact Hilbert polynomial fitting, grade stabilization and quasi-finiteness.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::base_ring::{BaseRing, IdealA};
use crate::error::{Error, Result};
use crate::fpmod::{grade, AssSet, FPModule, Grade, Length};
use crate::functors::CoherentFunctor;
use crate::graded::DegreewiseFamily;

pub type Rational = Ratio<i128>;

pub const DEFAULT_CONFIRM: usize = 4;
pub const DEFAULT_SATURATION: usize = 4;
pub const DEFAULT_HOLDOUT: usize = 4;

pub fn ass_profile(x: &DegreewiseFamily, lo: i64, hi: i64) -> Result<Vec<AssSet>> {
    x.check_range(lo, hi)?;
    (lo..=hi)
        .into_par_iter()
        .map(|n| Ok(x.component(n)?.ass()))
        .collect::<Vec<Result<AssSet>>>()
        .into_iter()
        .collect()
}

/// Smallest `n_0` such that the profile is constant on `[n_0, hi]` with
/// `hi - n_0 >= width`; the profile starts at degree `lo`.
pub fn detect_stabilization<T: PartialEq>(profile: &[T], lo: i64, width: usize) -> Option<i64> {
    let last = profile.last()?;
    let mut t = profile.len() - 1;
    while t > 0 && profile[t - 1] == *last {
        t -= 1;
    }
    if profile.len() - 1 - t >= width {
        Some(lo + t as i64)
    } else {
        None
    }
}

/// Polynomial in `n` with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, n: i64) -> Rational {
        let x = Rational::from_integer(n as i128);
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `sum_k c_k * binom(n - a, k)`.
    pub fn from_newton(newton: &[i128], a: i64) -> Self {
        let mut out = vec![Rational::zero(); newton.len().max(1)];
        let mut basis = vec![Rational::one()];
        for (k, &c) in newton.iter().enumerate() {
            if k > 0 {
                // basis *= (n - a - (k - 1)) / k
                let shift = Rational::from_integer(-(a as i128) - (k as i128 - 1));
                let kk = Rational::from_integer(k as i128);
                let mut next = vec![Rational::zero(); basis.len() + 1];
                for (i, b) in basis.iter().enumerate() {
                    next[i + 1] += b / kk;
                    next[i] += b * shift / kk;
                }
                basis = next;
            }
            for (i, b) in basis.iter().enumerate() {
                out[i] += b * Rational::from_integer(c);
            }
        }
        RationalPoly::new(out)
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::zero();
            let a = if neg { -c } else { *c };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{k}"),
            };
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for RationalPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertFit {
    pub polynomial: RationalPoly,
    /// Degree of the polynomial; `None` for the zero polynomial.
    pub degree: Option<usize>,
    /// First degree from which the polynomial matches.
    pub valid_from: i64,
    pub holdout: usize,
}

fn kth_difference(values: &[i128], at: usize, k: usize) -> i128 {
    let mut row: Vec<i128> = values[at..=at + k].to_vec();
    for _ in 0..k {
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    row[0]
}

/// Least-degree polynomial matching a tail of `values[..len - holdout]` and
/// predicting the last `holdout` values exactly.
pub fn fit_polynomial(values: &[i128], lo: i64, holdout: usize) -> Option<HilbertFit> {
    let len = values.len();
    if len < holdout + 2 {
        return None;
    }
    let fit = &values[..len - holdout];
    let mut diffs = fit.to_vec();
    let mut d = 0usize;
    while diffs.len() >= 2 {
        let last = diffs[diffs.len() - 1];
        let mut t = diffs.len() - 1;
        while t > 0 && diffs[t - 1] == last {
            t -= 1;
        }
        if diffs.len() - t >= 2 {
            let newton: Vec<i128> = (0..=d).map(|k| kth_difference(fit, t, k)).collect();
            let poly = RationalPoly::from_newton(&newton, lo + t as i64);
            let matches = values
                .iter()
                .enumerate()
                .skip(t)
                .all(|(i, &v)| poly.eval(lo + i as i64) == Rational::from_integer(v));
            if matches {
                return Some(HilbertFit {
                    degree: poly.degree(),
                    polynomial: poly,
                    valid_from: lo + t as i64,
                    holdout,
                });
            }
        }
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        d += 1;
    }
    None
}

/// Fits lengths over `[lo, lo + len)`; an infinite length is an error.
pub fn hilbert_fit(lengths: &[Length], lo: i64, holdout: usize) -> Result<Option<HilbertFit>> {
    let values = lengths
        .iter()
        .enumerate()
        .map(|(i, l)| {
            l.finite().map(|v| v as i128).ok_or(Error::NotFiniteLength {
                degree: lo + i as i64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fit_polynomial(&values, lo, holdout))
}

#[derive(Clone, Debug, Serialize)]
pub struct GradeProfile {
    pub ideal: String,
    pub grades: Vec<Grade>,
    pub stable_from: Option<i64>,
    pub stable_value: Option<Grade>,
    /// Per-degree grade read off vanishing of `X ⊗ A/J`, `Ext^0(A/J, X)`, `Ext^1(A/J, X)`.
    pub functor_route: Vec<Grade>,
    /// Stable value from the stabilized Ass sets of those three families.
    pub functor_route_stable: Option<Grade>,
    /// Both routes agree at every degree from `stable_from` on, and on the stable value.
    pub agree: bool,
}

fn stable_value_from_ass(
    tensor: &[AssSet],
    ext0: &[AssSet],
    ext1: &[AssSet],
    lo: i64,
    width: usize,
) -> Option<Grade> {
    detect_stabilization(tensor, lo, width)?;
    detect_stabilization(ext0, lo, width)?;
    detect_stabilization(ext1, lo, width)?;
    let (t, e0, e1) = (tensor.last()?, ext0.last()?, ext1.last()?);
    if t.is_empty() {
        Some(Grade::Infinite)
    } else if !e0.is_empty() {
        Some(Grade::Finite(0))
    } else if !e1.is_empty() {
        Some(Grade::Finite(1))
    } else {
        None
    }
}

pub fn grade_profile(
    j: &IdealA,
    x: &DegreewiseFamily,
    lo: i64,
    hi: i64,
    width: usize,
) -> Result<GradeProfile> {
    x.check_range(lo, hi)?;
    let base = x.ring().base();
    let grades = (lo..=hi)
        .into_par_iter()
        .map(|n| Ok(grade(j, &x.component(n)?)))
        .collect::<Vec<Result<Grade>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let stable_from = detect_stabilization(&grades, lo, width);
    let stable_value = stable_from.map(|_| *grades.last().expect("nonempty window"));

    let residue = FPModule::cyclic(base, j.generator());
    let tensor = CoherentFunctor::TensorWith(residue.clone()).apply_family(x)?;
    let ext0 = CoherentFunctor::Ext(0, residue.clone()).apply_family(x)?;
    let ext1 = CoherentFunctor::Ext(1, residue).apply_family(x)?;
    let mut functor_route = Vec::with_capacity(grades.len());
    for n in lo..=hi {
        let g = if tensor.component(n)?.is_zero() {
            Grade::Infinite
        } else if !ext0.component(n)?.is_zero() {
            Grade::Finite(0)
        } else if !ext1.component(n)?.is_zero() {
            Grade::Finite(1)
        } else {
            return Err(Error::Invariant(format!(
                "degree {n}: Ext^0 and Ext^1 vanish but X_n/J X_n does not"
            )));
        };
        functor_route.push(g);
    }
    let functor_route_stable = stable_value_from_ass(
        &ass_profile(&tensor, lo, hi)?,
        &ass_profile(&ext0, lo, hi)?,
        &ass_profile(&ext1, lo, hi)?,
        lo,
        width,
    );
    let agree = match stable_from {
        Some(c) => {
            let from = (c - lo) as usize;
            grades[from..] == functor_route[from..] && stable_value == functor_route_stable
        }
        None => false,
    };
    Ok(GradeProfile {
        ideal: j.render(base),
        grades,
        stable_from,
        stable_value,
        functor_route,
        functor_route_stable,
        agree,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiFiniteRow {
    pub degree: i64,
    pub h0_zero: bool,
    pub h0_certified: bool,
    pub joint_injective: bool,
    pub ass_contained: bool,
    /// Joint map injective but `Ass X_n ⊄ Ass X_{n+1}`: impossible, so a bug.
    pub violation: bool,
}

/// Needs the family through degree `hi + K`.
pub fn quasi_finite_check(
    x: &DegreewiseFamily,
    lo: i64,
    hi: i64,
    saturation: usize,
) -> Result<Vec<QuasiFiniteRow>> {
    x.check_range(lo, hi + saturation.max(1) as i64)?;
    (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let h = x.h0_component(n, saturation)?;
            let joint_injective = x.joint_mult(n)?.is_injective();
            let ass_contained = x.component(n)?.ass().is_subset(&x.component(n + 1)?.ass());
            Ok(QuasiFiniteRow {
                degree: n,
                h0_zero: h.submodule.module.is_zero(),
                h0_certified: h.certified,
                joint_injective,
                ass_contained,
                violation: joint_injective && !ass_contained,
            })
        })
        .collect::<Vec<Result<QuasiFiniteRow>>>()
        .into_iter()
        .collect()
}

/// First degree from which every row has certified vanishing `H^0`.
pub fn h0_vanishing_from(rows: &[QuasiFiniteRow]) -> Option<i64> {
    let mut start = None;
    for r in rows.iter().rev() {
        if r.h0_zero && r.h0_certified {
            start = Some(r.degree);
        } else {
            break;
        }
    }
    start
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certification {
    #[serde(rename = "window_certified")]
    WindowCertified,
    #[serde(rename = "heuristic")]
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FittedQuantity {
    #[serde(rename = "length")]
    Length,
    #[serde(rename = "rank")]
    Rank,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolynomialReport {
    pub quantity: FittedQuantity,
    pub fit: Option<HilbertFit>,
    /// Why lengths could not be fitted directly, if they could not.
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeRow {
    pub degree: i64,
    pub module: String,
    pub length: Length,
    pub free_rank: usize,
    pub ass: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub window: [i64; 2],
    pub confirm: usize,
    pub rows: Vec<DegreeRow>,
    pub stable_from: Option<i64>,
    pub stable_ass: Option<Vec<String>>,
    #[serde(skip)]
    pub stable_ass_set: Option<AssSet>,
    pub polynomial: PolynomialReport,
    pub grades: Vec<GradeProfile>,
    pub quasi_finite: Option<Vec<QuasiFiniteRow>>,
    pub certification: Certification,
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub lo: i64,
    pub hi: i64,
    pub confirm: usize,
    pub saturation: usize,
    pub holdout: usize,
    /// Compute the quasi-finiteness table (needs the family through `hi + saturation`).
    pub quasi_finite: bool,
}

impl AnalysisOptions {
    pub fn window(lo: i64, hi: i64) -> Self {
        AnalysisOptions {
            lo,
            hi,
            confirm: DEFAULT_CONFIRM,
            saturation: DEFAULT_SATURATION,
            holdout: DEFAULT_HOLDOUT,
            quasi_finite: false,
        }
    }
}

/// Fits lengths on the longest finite tail; falls back to free ranks when the
/// tail is too short to fit.
pub fn polynomial_report(rows: &[DegreeRow], lo: i64, holdout: usize) -> PolynomialReport {
    let finite_tail = rows.iter().rev().take_while(|r| r.length.finite().is_some()).count();
    let first_finite = rows.len() - finite_tail;
    let note = if first_finite > 0 {
        Some(format!(
            "not finite length at degree {}",
            rows[first_finite - 1].degree
        ))
    } else {
        None
    };
    if finite_tail >= holdout + 2 {
        let values: Vec<i128> = rows[first_finite..]
            .iter()
            .map(|r| r.length.finite().expect("finite tail") as i128)
            .collect();
        if let Some(fit) = fit_polynomial(&values, lo + first_finite as i64, holdout) {
            return PolynomialReport {
                quantity: FittedQuantity::Length,
                fit: Some(fit),
                note,
            };
        }
        if note.is_none() {
            return PolynomialReport {
                quantity: FittedQuantity::Length,
                fit: None,
                note: Some("no polynomial tail within the window".into()),
            };
        }
    }
    let ranks: Vec<i128> = rows.iter().map(|r| r.free_rank as i128).collect();
    PolynomialReport {
        quantity: FittedQuantity::Rank,
        fit: fit_polynomial(&ranks, lo, holdout),
        note,
    }
}

pub fn full_report(
    x: &DegreewiseFamily,
    ideals: &[IdealA],
    opts: &AnalysisOptions,
) -> Result<StabilityReport> {
    let (lo, hi) = (opts.lo, opts.hi);
    x.check_range(lo, hi)?;
    let base: &BaseRing = x.ring().base();
    let rows = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let m = x.component(n)?;
            Ok(DegreeRow {
                degree: n,
                module: m.render(),
                length: m.length(),
                free_rank: m.free_rank(),
                ass: m.ass().rendered(base),
            })
        })
        .collect::<Vec<Result<DegreeRow>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let ass: Vec<&Vec<String>> = rows.iter().map(|r| &r.ass).collect();
    let stable_from = detect_stabilization(&ass, lo, opts.confirm);
    let stable_ass = stable_from.map(|_| rows.last().expect("nonempty window").ass.clone());
    let stable_ass_set = match stable_from {
        Some(_) => Some(x.component(hi)?.ass()),
        None => None,
    };
    let polynomial = polynomial_report(&rows, lo, opts.holdout);
    let grades = ideals
        .iter()
        .map(|j| grade_profile(j, x, lo, hi, opts.confirm))
        .collect::<Result<Vec<_>>>()?;
    let quasi_finite = if opts.quasi_finite {
        Some(quasi_finite_check(x, lo, hi, opts.saturation)?)
    } else {
        None
    };
    let certified = stable_from.is_some()
        && polynomial.fit.is_some()
        && grades.iter().all(|g| g.stable_from.is_some() && g.agree)
        && quasi_finite
            .as_ref()
            .map_or(true, |rows| rows.iter().all(|r| r.h0_certified && !r.violation));
    Ok(StabilityReport {
        window: [lo, hi],
        confirm: opts.confirm,
        rows,
        stable_from,
        stable_ass,
        stable_ass_set,
        polynomial,
        grades,
        quasi_finite,
        certification: if certified {
            Certification::WindowCertified
        } else {
            Certification::Heuristic
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn stabilization_examples() {
        let p = vec!["0", "u", "u", "u"];
        assert_eq!(detect_stabilization(&p, 0, 2), Some(1));
        let alt = vec!["a", "b", "a", "b", "a", "b"];
        assert_eq!(detect_stabilization(&alt, 0, 2), None);
        let c = vec![1; 4];
        assert_eq!(detect_stabilization(&c, 3, 3), Some(3));
        assert_eq!(detect_stabilization(&c, 3, 4), None);
        assert_eq!(detect_stabilization::<u8>(&[], 0, 1), None);
    }

    #[test]
    fn fit_examples() {
        let f = fit_polynomial(&[1, 2, 3, 4, 5, 6], 0, 0).unwrap();
        assert_eq!(f.polynomial.to_string(), "n + 1");
        let f = fit_polynomial(&[5, 1, 1, 1, 1], 0, 0).unwrap();
        assert_eq!(f.polynomial.to_string(), "1");
        assert_eq!(f.valid_from, 1);
        let counts: Vec<i128> = (0..21).collect();
        let f = fit_polynomial(&counts, 0, 4).unwrap();
        assert_eq!(f.polynomial.to_string(), "n");
        assert_eq!(f.degree, Some(1));
        let tri: Vec<i128> = (0..12).map(|n| n * (n + 1) / 2).collect();
        let f = fit_polynomial(&tri, 0, 3).unwrap();
        assert_eq!(f.polynomial.coefficients(), &[r(0, 1), r(1, 2), r(1, 2)]);
        assert_eq!(f.polynomial.to_string(), "1/2*n^2 + 1/2*n");
    }

    #[test]
    fn holdout_rejects_wrong_tail() {
        // Constant in the fitting part, but the holdout breaks the pattern.
        assert!(fit_polynomial(&[1, 1, 1, 1, 7], 0, 1).is_none());
        assert!(fit_polynomial(&[1, 2], 0, 1).is_none());
    }

    #[test]
    fn newton_conversion() {
        // binom(n - 2, 2) = (n - 2)(n - 3)/2
        let p = RationalPoly::from_newton(&[0, 0, 1], 2);
        assert_eq!(p.coefficients(), &[r(3, 1), r(-5, 2), r(1, 2)]);
        assert_eq!(p.to_string(), "1/2*n^2 - 5/2*n + 3");
        assert_eq!(RationalPoly::new(vec![]).to_string(), "0");
    }

    #[test]
    fn infinite_length_is_reported() {
        let l = [Length::Finite(1), Length::Infinite, Length::Finite(1)];
        assert!(matches!(
            hilbert_fit(&l, 5, 0),
            Err(Error::NotFiniteLength { degree: 6 })
        ));
    }
}
