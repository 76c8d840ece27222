use asymprimes::base_ring::{BaseRing, PrimeIdealA, RingElem};
use asymprimes::fpmod::{hom, tensor, FPMap, FPModule, Length};
use asymprimes::functors::CoherentFunctor;
use asymprimes::linalg::{smith_normal_form, span_echelon, Matrix};
use proptest::prelude::*;

fn coeffs(p: u32, max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0..p as i64, 0..=max_deg + 1)
}

fn nonzero_coeffs(p: u32, max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    coeffs(p, max_deg).prop_filter("nonzero", move |c| c.iter().any(|&x| x % p as i64 != 0))
}

fn matrix(p: u32, max_dim: usize, max_deg: usize) -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        (
            Just(r),
            Just(c),
            prop::collection::vec(coeffs(p, max_deg), r * c),
        )
    })
}

fn build(ring: &BaseRing, (rows, cols, entries): &(usize, usize, Vec<Vec<i64>>)) -> Matrix {
    let data = entries
        .chunks(*cols)
        .map(|row| row.iter().map(|c| ring.elem(c)).collect())
        .collect();
    let m = Matrix::from_rows(data, *cols);
    assert_eq!(m.rows(), *rows);
    m
}

fn module(ring: &BaseRing, spec: &(usize, usize, Vec<Vec<i64>>)) -> FPModule {
    FPModule::new(ring.clone(), build(ring, spec)).unwrap()
}

/// All monic polynomials of exactly the given degree.
fn monic_of_degree(ring: &BaseRing, d: usize) -> Vec<RingElem> {
    let p = ring.modulus() as usize;
    (0..p.pow(d as u32))
        .map(|mut k| {
            let mut c: Vec<i64> = (0..d)
                .map(|_| {
                    let digit = (k % p) as i64;
                    k /= p;
                    digit
                })
                .collect();
            c.push(1);
            ring.elem(&c)
        })
        .collect()
}

fn brute_force_irreducible(ring: &BaseRing, f: &RingElem) -> bool {
    let n = f.degree().unwrap();
    if n == 0 {
        return false;
    }
    (1..=n / 2).all(|d| monic_of_degree(ring, d).iter().all(|g| !ring.divides(g, f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn smith_certificate_f2(spec in matrix(2, 6, 4)) {
        let ring = BaseRing::univariate(2, "u").unwrap();
        let m = build(&ring, &spec);
        prop_assert!(smith_normal_form(&ring, &m).verify(&ring, &m));
    }

    #[test]
    fn smith_certificate_f5(spec in matrix(5, 6, 4)) {
        let ring = BaseRing::univariate(5, "u").unwrap();
        let m = build(&ring, &spec);
        prop_assert!(smith_normal_form(&ring, &m).verify(&ring, &m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factor_round_trip(p in prop::sample::select(vec![2u32, 3, 5]), c in nonzero_coeffs(5, 8)) {
        let ring = BaseRing::univariate(p, "u").unwrap();
        let f = ring.elem(&c);
        prop_assume!(!f.is_zero());
        let fac = ring.factor(&f).unwrap();
        prop_assert_eq!(fac.expand(&ring), f);
        for (g, m) in &fac.factors {
            prop_assert!(*m >= 1);
            prop_assert_eq!(g.leading(), 1);
            prop_assert!(brute_force_irreducible(&ring, g));
        }
        let sorted = fac.factors.windows(2).all(|w| w[0].0.canonical_cmp(&w[1].0).is_lt());
        prop_assert!(sorted);
    }

    #[test]
    fn irreducibility_matches_trial_division(c in nonzero_coeffs(2, 4)) {
        let ring = BaseRing::univariate(2, "u").unwrap();
        let f = ring.monic(&ring.elem(&c));
        prop_assume!(f.degree().unwrap() >= 1);
        prop_assert_eq!(ring.is_irreducible(&f).unwrap(), brute_force_irreducible(&ring, &f));
    }

    #[test]
    fn gcd_divides_and_cofactors_coprime(a in nonzero_coeffs(3, 6), b in nonzero_coeffs(3, 6), c in nonzero_coeffs(3, 3)) {
        let ring = BaseRing::univariate(3, "u").unwrap();
        let c = ring.elem(&c);
        let a = ring.mul(&ring.elem(&a), &c);
        let b = ring.mul(&ring.elem(&b), &c);
        let g = ring.gcd(&a, &b);
        prop_assert_eq!(g.leading(), 1);
        prop_assert!(ring.divides(&g, &a) && ring.divides(&g, &b));
        prop_assert!(ring.divides(&ring.monic(&c), &g));
        let ca = ring.exact_div(&a, &g).unwrap();
        let cb = ring.exact_div(&b, &g).unwrap();
        prop_assert!(ring.gcd(&ca, &cb).is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn length_is_additive(x in matrix(2, 3, 2), y in matrix(2, 3, 2)) {
        let ring = BaseRing::univariate(2, "u").unwrap();
        let (m, n) = (module(&ring, &x), module(&ring, &y));
        let sum = FPModule::direct_sum(&ring, &[&m, &n]);
        let expected = match (m.length(), n.length()) {
            (Length::Finite(a), Length::Finite(b)) => Length::Finite(a + b),
            _ => Length::Infinite,
        };
        prop_assert_eq!(sum.length(), expected);
        prop_assert_eq!(sum.free_rank(), m.free_rank() + n.free_rank());
    }

    #[test]
    fn ass_of_direct_sum_is_union(x in matrix(2, 3, 2), y in matrix(2, 3, 2)) {
        let ring = BaseRing::univariate(2, "u").unwrap();
        let (m, n) = (module(&ring, &x), module(&ring, &y));
        let sum = FPModule::direct_sum(&ring, &[&m, &n]);
        prop_assert_eq!(sum.ass(), m.ass().union(&n.ass()));
    }

    #[test]
    fn hom_and_tensor_of_cyclics(f in nonzero_coeffs(2, 4), g in nonzero_coeffs(2, 4), x in matrix(2, 3, 2)) {
        let ring = BaseRing::univariate(2, "u").unwrap();
        let (f, g) = (ring.elem(&f), ring.elem(&g));
        let d = FPModule::cyclic(&ring, ring.gcd(&f, &g));
        let (cf, cg) = (FPModule::cyclic(&ring, f), FPModule::cyclic(&ring, g));
        prop_assert!(tensor(&cf, &cg).is_isomorphic(&d));
        prop_assert!(hom(&cf, &cg).is_isomorphic(&d));
        let m = module(&ring, &x);
        let a = FPModule::free(&ring, 1);
        prop_assert!(hom(&a, &m).is_isomorphic(&m));
        prop_assert!(tensor(&a, &m).is_isomorphic(&m));
        prop_assert!(tensor(&m, &a).is_isomorphic(&m));
    }

    /// Ass against direct search over all primes of degree at most 3: a nonzero
    /// prime `(p)` is associated exactly when multiplication by `p` has a kernel,
    /// and `(0)` exactly when the presentation has deficient rank.
    #[test]
    fn ass_matches_brute_force(x in matrix(2, 3, 1)) {
        let ring = BaseRing::univariate(2, "u").unwrap();
        let m = module(&ring, &x);
        let ass = m.ass();
        let candidates: Vec<RingElem> = (1..=3)
            .flat_map(|d| monic_of_degree(&ring, d))
            .filter(|f| brute_force_irreducible(&ring, f))
            .collect();
        let mut found = 0;
        for p in &candidates {
            let torsion = !FPMap::scalar(&m, p).is_injective();
            prop_assert_eq!(ass.contains(&PrimeIdealA::Principal(p.clone())), torsion);
            found += usize::from(torsion);
        }
        let rank = span_echelon(&ring, m.presentation()).rank();
        let has_free = rank < m.num_generators();
        prop_assert_eq!(ass.contains(&PrimeIdealA::Zero), has_free);
        prop_assert_eq!(ass.len(), found + usize::from(has_free));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn tensor_as_presentation_agrees(u in matrix(2, 3, 2), x in matrix(2, 3, 2)) {
        let ring = BaseRing::univariate(2, "u").unwrap();
        let (u, m) = (module(&ring, &u), module(&ring, &x));
        let f = CoherentFunctor::tensor_as_presentation(&u);
        prop_assert!(f.apply(&m).unwrap().is_isomorphic(&tensor(&u, &m)));
    }
}
