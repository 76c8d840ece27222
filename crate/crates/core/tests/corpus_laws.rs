use std::path::PathBuf;

use asymprimes::base_ring::BaseRing;
use asymprimes::fpmod::{grade, grade_ext_scan, FPMap, FPModule};
use asymprimes::functors::CoherentFunctor;
use asymprimes::graded::DegreewiseFamily;
use asymprimes::problem::{Instance, Problem, ProblemDescription};
use asymprimes::rees::{normalize, TrivialExtensionView};

const END: i64 = 8;

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    assert!(files.len() >= 12, "corpus missing at {}", dir.display());
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect()
}

fn family(problem: &Problem) -> DegreewiseFamily {
    match &problem.instance {
        Instance::Pair(iota) => DegreewiseFamily::quotient_family(iota, END).unwrap(),
        Instance::Module(x) => DegreewiseFamily::from_graded(x, END).unwrap(),
    }
}

fn functors(base: &BaseRing) -> Vec<CoherentFunctor> {
    let u = match base.var_elem() {
        Ok(v) => FPModule::cyclic(base, v),
        Err(_) => FPModule::free(base, 1),
    };
    vec![
        CoherentFunctor::HomFrom(u.clone()),
        CoherentFunctor::TensorWith(u.clone()),
        CoherentFunctor::Tor(1, u.clone()),
        CoherentFunctor::Ext(1, u.clone()),
        CoherentFunctor::tensor_as_presentation(&u),
    ]
}

#[test]
fn descriptions_round_trip() {
    for (name, text) in corpus() {
        let d = ProblemDescription::parse(&text).unwrap();
        let again = ProblemDescription::parse(&d.render()).unwrap();
        assert_eq!(d, again, "{name}");
    }
}

#[test]
fn multiplication_maps_commute() {
    for (name, text) in corpus() {
        let problem = Problem::parse(&text).unwrap();
        family(&problem)
            .verify_commuting()
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn functor_laws_on_multiplication_maps() {
    for (name, text) in corpus() {
        let problem = Problem::parse(&text).unwrap();
        let x = family(&problem);
        for f in functors(&problem.base) {
            for n in x.start()..x.end() - 1 {
                let xn = x.component(n).unwrap();
                let id = f.apply_map(&FPMap::identity(&xn)).unwrap();
                assert!(
                    id.equals(&FPMap::identity(&f.apply(&xn).unwrap())),
                    "{name}: {} fails identity at {n}",
                    f.describe()
                );
                for v in 0..x.num_vars() {
                    for w in 0..x.num_vars() {
                        let g = x.mult_map(n, v).unwrap();
                        let h = x.mult_map(n + 1, w).unwrap();
                        let whole = f.apply_map(&g.then(&h).unwrap()).unwrap();
                        let parts = f
                            .apply_map(&g)
                            .unwrap()
                            .then(&f.apply_map(&h).unwrap())
                            .unwrap();
                        assert!(
                            whole.equals(&parts),
                            "{name}: {} fails composition at {n}, vars {v} {w}",
                            f.describe()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn functor_families_match_pointwise_values() {
    for (name, text) in corpus() {
        let problem = Problem::parse(&text).unwrap();
        let x = family(&problem);
        for f in functors(&problem.base) {
            let fx = f.apply_family(&x).unwrap();
            fx.verify_commuting().unwrap_or_else(|e| panic!("{name}: {e}"));
            for n in x.start()..=x.end() {
                let direct = f.apply(&x.component(n).unwrap()).unwrap();
                assert!(direct.is_isomorphic(&fx.component(n).unwrap()), "{name} at {n}");
            }
        }
    }
}

#[test]
fn grade_decision_agrees_with_ext_scan() {
    for (name, text) in corpus() {
        let problem = Problem::parse(&text).unwrap();
        let x = family(&problem);
        for j in &problem.ideals {
            for n in x.start()..=x.end() {
                let m = x.component(n).unwrap();
                assert_eq!(
                    grade(j, &m),
                    grade_ext_scan(j, &m).unwrap(),
                    "{name} at degree {n}"
                );
            }
        }
    }
}

#[test]
fn normalized_pairs_are_standard() {
    for (name, text) in corpus() {
        let problem = Problem::parse(&text).unwrap();
        let Instance::Pair(iota) = &problem.instance else {
            continue;
        };
        let pair = normalize(iota, END).unwrap_or_else(|e| panic!("{name}: {e}"));
        TrivialExtensionView::new(&pair.sub, pair.window_end)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        for j in 1..=pair.window_end + 1 {
            let row = pair.amao_row(j).unwrap();
            assert!(row.identity_holds, "{name}: length identity fails at j = {j}");
            assert!(row.ass_contained, "{name}: Ass containment fails at j = {j}");
            assert!(pair.filtration_check(j).unwrap().verified(), "{name}: filtration at j = {j}");
        }
    }
}
