use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;

use asymprimes::base_ring::{BaseRing, PrimeIdealA, RingElem};
use asymprimes::fpmod::{FPMap, FPModule};
use asymprimes::linalg::{smith_normal_form, span_echelon, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Run {
    name: String,
    bytes: Vec<u8>,
    report: Value,
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<_> = std::fs::read_dir(root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

fn run_cli(path: &Path) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_asymprimes"))
        .arg(path)
        .output()
        .unwrap();
    let name = path.file_stem().unwrap().to_string_lossy().into_owned();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{name}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = serde_json::from_slice(&out.stdout).unwrap();
    Run { name, bytes: out.stdout, report }
}

fn find<'a>(runs: &'a [Run], name: &str) -> &'a Value {
    &runs.iter().find(|r| r.name == name).unwrap().report
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array()
        .map(|a| a.iter().filter_map(Value::as_str).collect())
        .unwrap_or_default()
}

type Outcome = Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn stabilization_on_ux(runs: &[Run]) -> Outcome {
    let a = &find(runs, "ux_line")["analysis"];
    check(a["window"] == serde_json::json!([0, 20]), || format!("window {}", a["window"]))?;
    check(a["confirm"] == 4, || format!("confirm {}", a["confirm"]))?;
    check(a["stable_from"] == 1, || format!("stable_from {}", a["stable_from"]))?;
    check(strings(&a["stable_ass"]) == ["(u)"], || format!("stable Ass {}", a["stable_ass"]))
}

fn line_in_plane_polynomial(runs: &[Run]) -> Outcome {
    let r = find(runs, "f3_line_plane");
    let fit = &r["analysis"]["polynomial"]["fit"];
    check(fit["polynomial"] == "n" && fit["degree"] == 1, || format!("analysis fit {fit}"))?;
    let amao = &r["rees_oracle"]["amao"];
    check(amao["fit"]["polynomial"] == "n", || format!("oracle fit {}", amao["fit"]))?;
    check(amao["degree_bound"] == 1 && amao["fit"]["degree"] == amao["degree_bound"], || {
        format!("degree {} vs bound {}", amao["fit"]["degree"], amao["degree_bound"])
    })
}

fn length_identity(runs: &[Run]) -> Outcome {
    let mut finite = 0;
    for run in runs {
        let oracle = &run.report["rees_oracle"];
        if oracle.is_null() {
            continue;
        }
        let rows = oracle["amao"]["rows"].as_array().unwrap();
        let in_range: Vec<_> = rows
            .iter()
            .filter(|r| (1..=15).contains(&r["j"].as_i64().unwrap()))
            .collect();
        if in_range.len() != 15 || in_range.iter().any(|r| !r["quotient_length"].is_u64()) {
            continue;
        }
        finite += 1;
        for row in in_range {
            check(row["identity_holds"] == true, || format!("{}: identity at j = {}", run.name, row["j"]))?;
            check(row["ass_contained"] == true, || format!("{}: Ass at j = {}", run.name, row["j"]))?;
        }
        check(oracle["filtration_verified"] == true, || format!("{}: filtration", run.name))?;
    }
    check(finite >= 10, || format!("only {finite} finite-length instances"))
}

fn functor_stability(runs: &[Run]) -> Outcome {
    for run in runs {
        let functors = run.report["functors"].as_array().unwrap();
        check(functors.len() == 4, || format!("{}: {} functors", run.name, functors.len()))?;
        for f in functors {
            let rep = &f["report"];
            let label = format!("{} / {}", run.name, f["functor"]);
            check(rep["window"] == serde_json::json!([0, 20]) && rep["confirm"] == 4, || {
                format!("{label}: window {}", rep["window"])
            })?;
            check(rep["stable_from"].is_i64(), || format!("{label}: no stabilization"))?;
            let poly = &rep["polynomial"];
            if poly["quantity"] == "length" {
                check(poly["fit"]["holdout"].as_u64() >= Some(4), || format!("{label}: fit {poly}"))?;
            }
        }
    }
    Ok(())
}

fn grade_routes(runs: &[Run]) -> Outcome {
    for run in runs {
        for g in run.report["analysis"]["grades"].as_array().unwrap() {
            let label = format!("{} / {}", run.name, g["ideal"]);
            check(g["stable_from"].is_i64(), || format!("{label}: no stable grade"))?;
            check(g["agree"] == true, || format!("{label}: routes disagree"))?;
            check(g["grades"] == g["functor_route"], || format!("{label}: degreewise mismatch"))?;
        }
    }
    Ok(())
}

fn quasi_finiteness(runs: &[Run]) -> Outcome {
    for run in runs {
        let a = &run.report["analysis"];
        let from = a["stable_from"].as_i64().ok_or(format!("{}: no stabilization", run.name))?;
        let rows = a["quasi_finite"].as_array().ok_or(format!("{}: no rows", run.name))?;
        for row in rows.iter().filter(|r| r["degree"].as_i64().unwrap() >= from) {
            check(row["violation"] == false, || format!("{}: violation at {}", run.name, row["degree"]))?;
        }
    }
    Ok(())
}

fn random_elem(rng: &mut ChaCha8Rng, ring: &BaseRing, max_deg: usize) -> RingElem {
    let p = ring.modulus() as i64;
    let c: Vec<i64> = (0..=max_deg).map(|_| rng.gen_range(0..p)).collect();
    ring.elem(&c)
}

fn random_matrix(rng: &mut ChaCha8Rng, ring: &BaseRing, max_dim: usize, max_deg: usize) -> Matrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| random_elem(rng, ring, max_deg)).collect())
        .collect();
    Matrix::from_rows(data, cols)
}

fn irreducible_by_search(ring: &BaseRing, f: &RingElem) -> bool {
    let n = f.degree().unwrap();
    n > 0 && (1..=n / 2).all(|d| monic_of_degree(ring, d).iter().all(|g| !ring.divides(g, f)))
}

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

fn substrate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [2, 5] {
        let ring = BaseRing::univariate(p, "u").unwrap();
        for case in 0..250 {
            let m = random_matrix(&mut rng, &ring, 6, 4);
            check(smith_normal_form(&ring, &m).verify(&ring, &m), || {
                format!("Smith certificate over F_{p}[u], case {case}")
            })?;
        }
    }
    for case in 0..200 {
        let p = [2, 3, 5][case % 3];
        let ring = BaseRing::univariate(p, "u").unwrap();
        let f = loop {
            let deg = rng.gen_range(1..=8);
            let f = random_elem(&mut rng, &ring, deg);
            if !f.is_zero() {
                break f;
            }
        };
        let fac = ring.factor(&f).map_err(|e| e.to_string())?;
        check(fac.expand(&ring) == f, || format!("factor round trip, case {case}"))?;
        for (g, _) in &fac.factors {
            check(irreducible_by_search(&ring, g), || format!("reducible factor, case {case}"))?;
        }
    }
    let ring = BaseRing::univariate(2, "u").unwrap();
    let candidates: Vec<RingElem> = (1..=3)
        .flat_map(|d| monic_of_degree(&ring, d))
        .filter(|f| irreducible_by_search(&ring, f))
        .collect();
    for case in 0..100 {
        let m = FPModule::new(ring.clone(), random_matrix(&mut rng, &ring, 3, 1)).unwrap();
        let ass = m.ass();
        let mut found = 0;
        for q in &candidates {
            let torsion = !FPMap::scalar(&m, q).is_injective();
            check(ass.contains(&PrimeIdealA::Principal(q.clone())) == torsion, || {
                format!("Ass brute force, case {case}")
            })?;
            found += usize::from(torsion);
        }
        let has_free = span_echelon(&ring, m.presentation()).rank() < m.num_generators();
        check(ass.contains(&PrimeIdealA::Zero) == has_free, || format!("Ass (0), case {case}"))?;
        check(ass.len() == found + usize::from(has_free), || format!("Ass size, case {case}"))?;
    }
    Ok(())
}

fn determinism(first: &[Run], second: &[Run]) -> Outcome {
    for (a, b) in first.iter().zip(second) {
        check(a.bytes == b.bytes, || format!("{}: reports differ between runs", a.name))?;
        let expected = root()
            .join("crates/cli/tests/expected")
            .join(format!("{}.json", a.name));
        let recorded = std::fs::read(&expected).map_err(|e| format!("{}: {e}", expected.display()))?;
        check(a.bytes == recorded, || format!("{}: differs from recorded report", a.name))?;
    }
    Ok(())
}

#[test]
fn acceptance() {
    let files = corpus_files();
    assert!(files.len() >= 12);
    let first: Vec<Run> = files.iter().map(|f| run_cli(f)).collect();
    let second: Vec<Run> = files.iter().map(|f| run_cli(f)).collect();

    let outcomes = [
        ("stabilization of the u*x instance", stabilization_on_ux(&first)),
        ("linear Hilbert polynomial of the F_3 pair", line_in_plane_polynomial(&first)),
        ("length identity and Ass containment", length_identity(&first)),
        ("functor stability", functor_stability(&first)),
        ("grade two-route agreement", grade_routes(&first)),
        ("quasi-finiteness", quasi_finiteness(&first)),
        ("substrate certificates", substrate()),
        ("determinism", determinism(&first, &second)),
    ];
    let mut failed = 0;
    let mut out = std::io::stderr().lock();
    for (i, (label, outcome)) in outcomes.iter().enumerate() {
        match outcome {
            Ok(()) => writeln!(out, "PASS criterion {}: {label}", i + 1).unwrap(),
            Err(why) => {
                failed += 1;
                writeln!(out, "FAIL criterion {}: {label}: {why}", i + 1).unwrap();
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
