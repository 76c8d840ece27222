//! Problem descriptions (JSON), task dispatch and report documents.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::asymptotics::{full_report, AnalysisOptions, Certification, StabilityReport};
use crate::base_ring::{BaseRing, IdealA};
use crate::error::{Error, Result, ValidationIssue};
use crate::expr::PolyMap;
use crate::fpmod::{FPMap, FPModule};
use crate::functors::CoherentFunctor;
use crate::graded::{DegreewiseFamily, GradedMap, GradedModule, GradedRing, Provenance, RingInclusion};
use crate::linalg::Matrix;
use crate::rees::{normalize, AmaoReport, FiltrationCheck, TrivialExtensionView};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    PrimeField,
    Univariate,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub kind: BaseKind,
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
}

/// Twists of the generators, twists of the relations, and the relation
/// matrix with one row per generator.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GradedModuleSpec {
    pub twists: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relation_twists: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    /// An `R`-module `sub` included in an `S`-module `ambient`.
    Pair {
        sub: GradedModuleSpec,
        ambient: GradedModuleSpec,
        inclusion: Vec<Vec<String>>,
    },
    /// A single finitely generated `R`-module.
    Module { module: GradedModuleSpec },
}

/// A finitely presented `A`-module: one relation row per generator.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub generators: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctorSpec {
    Hom { module: ModuleSpec },
    Tensor { module: ModuleSpec },
    Tor { index: usize, module: ModuleSpec },
    Ext { index: usize, module: ModuleSpec },
    Presentation {
        source: ModuleSpec,
        target: ModuleSpec,
        matrix: Vec<Vec<String>>,
    },
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    AssStability,
    Hilbert,
    Grade,
    FunctorStability,
    AmaoCheck,
    QuasiFinite,
    All,
}

impl Task {
    pub fn parse(name: &str) -> Option<Task> {
        serde_json::from_value(serde_json::Value::String(name.to_string())).ok()
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(default, deny_unknown_fields)]
pub struct OptionsSpec {
    pub window: [i64; 2],
    pub confirm: usize,
    pub saturation: usize,
    pub holdout: usize,
    pub seed: u64,
}

impl Default for OptionsSpec {
    fn default() -> Self {
        OptionsSpec {
            window: [0, 20],
            confirm: crate::asymptotics::DEFAULT_CONFIRM,
            saturation: crate::asymptotics::DEFAULT_SATURATION,
            holdout: crate::asymptotics::DEFAULT_HOLDOUT,
            seed: 0,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ProblemDescription {
    pub base: BaseSpec,
    pub r_vars: Vec<String>,
    /// Defaults to `r_vars`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_vars: Option<Vec<String>>,
    pub instance: InstanceSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functors: Vec<FunctorSpec>,
    /// Each ideal of `A` as a list of generators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideals: Vec<Vec<String>>,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub options: OptionsSpec,
}

/// Command-line overrides of the description's options.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub window: Option<[i64; 2]>,
    pub confirm: Option<usize>,
    pub saturation: Option<usize>,
    pub holdout: Option<usize>,
    pub seed: Option<u64>,
    pub tasks: Option<Vec<Task>>,
}

impl ProblemDescription {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Validation(vec![ValidationIssue {
                pointer: String::new(),
                message: format!("line {} column {}: {e}", e.line(), e.column()),
            }])
        })
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptions serialize")
    }

    pub fn apply(&mut self, o: &Overrides) {
        let opts = &mut self.options;
        opts.window = o.window.unwrap_or(opts.window);
        opts.confirm = o.confirm.unwrap_or(opts.confirm);
        opts.saturation = o.saturation.unwrap_or(opts.saturation);
        opts.holdout = o.holdout.unwrap_or(opts.holdout);
        opts.seed = o.seed.unwrap_or(opts.seed);
        if let Some(t) = &o.tasks {
            self.tasks = t.clone();
        }
    }
}

#[derive(Clone, Debug)]
pub enum Instance {
    Pair(GradedMap),
    Module(GradedModule),
}

/// A validated description with its algebraic objects built.
#[derive(Clone, Debug)]
pub struct Problem {
    pub description: ProblemDescription,
    pub base: BaseRing,
    pub instance: Instance,
    pub functors: Vec<CoherentFunctor>,
    pub ideals: Vec<IdealA>,
    pub tasks: BTreeSet<Task>,
}

#[derive(Default)]
struct Issues(Vec<ValidationIssue>);

impl Issues {
    fn push(&mut self, pointer: impl Into<String>, message: impl ToString) {
        self.0.push(ValidationIssue {
            pointer: pointer.into(),
            message: message.to_string(),
        });
    }

    fn check<T>(&mut self, pointer: &str, r: Result<T>) -> Option<T> {
        r.map_err(|e| self.push(pointer, e)).ok()
    }
}

fn build_base(spec: &BaseSpec, seed: u64, issues: &mut Issues) -> Option<BaseRing> {
    let ring = match (spec.kind, &spec.variable) {
        (BaseKind::PrimeField, None) => BaseRing::prime_field(spec.p),
        (BaseKind::PrimeField, Some(_)) => {
            issues.push("/base/variable", "a prime field takes no variable");
            return None;
        }
        (BaseKind::Univariate, Some(v)) => BaseRing::univariate(spec.p, v),
        (BaseKind::Univariate, None) => {
            issues.push("/base/variable", "a polynomial base needs a variable name");
            return None;
        }
    };
    issues.check("/base", ring).map(|r| r.with_seed(seed))
}

fn parse_base_matrix(
    base: &BaseRing,
    rows: &[Vec<String>],
    shape: (usize, usize),
    at: &str,
    issues: &mut Issues,
) -> Option<Matrix> {
    let (nr, nc) = shape;
    if rows.len() != nr {
        issues.push(at, format!("expected {nr} rows, found {}", rows.len()));
        return None;
    }
    let mut ok = true;
    let mut parsed = Vec::with_capacity(nr);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != nc {
            issues.push(format!("{at}/{i}"), format!("expected {nc} entries, found {}", row.len()));
            ok = false;
            continue;
        }
        let mut out = Vec::with_capacity(nc);
        for (j, s) in row.iter().enumerate() {
            match base.parse(s) {
                Ok(e) => out.push(e),
                Err(e) => {
                    issues.push(format!("{at}/{i}/{j}"), e);
                    ok = false;
                }
            }
        }
        parsed.push(out);
    }
    ok.then(|| Matrix::from_rows(parsed, nc))
}

fn build_fp_module(base: &BaseRing, spec: &ModuleSpec, at: &str, issues: &mut Issues) -> Option<FPModule> {
    let g = spec.generators;
    let rows = if spec.relations.is_empty() {
        vec![Vec::new(); g]
    } else {
        spec.relations.clone()
    };
    let cols = rows.first().map_or(0, Vec::len);
    let pointer = format!("{at}/relations");
    let pres = parse_base_matrix(base, &rows, (g, cols), &pointer, issues)?;
    issues.check(&pointer, FPModule::new(base.clone(), pres))
}

fn parse_poly_rows(
    ring: &GradedRing,
    rows: &[Vec<String>],
    shape: (usize, usize),
    at: &str,
    issues: &mut Issues,
) -> Option<Vec<Vec<PolyMap>>> {
    let (nr, nc) = shape;
    if rows.len() != nr {
        issues.push(at, format!("expected {nr} rows, found {}", rows.len()));
        return None;
    }
    let mut ok = true;
    let mut out = Vec::with_capacity(nr);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != nc {
            issues.push(format!("{at}/{i}"), format!("expected {nc} entries, found {}", row.len()));
            ok = false;
            continue;
        }
        let mut parsed = Vec::with_capacity(nc);
        for (j, s) in row.iter().enumerate() {
            match ring.parse_poly(s) {
                Ok(p) => parsed.push(p),
                Err(e) => {
                    issues.push(format!("{at}/{i}/{j}"), e);
                    ok = false;
                }
            }
        }
        out.push(parsed);
    }
    ok.then_some(out)
}

fn build_graded_module(
    ring: &GradedRing,
    spec: &GradedModuleSpec,
    at: &str,
    issues: &mut Issues,
) -> Option<GradedModule> {
    let g = spec.twists.len();
    let k = spec.relation_twists.len();
    let rows = if spec.relations.is_empty() && k == 0 {
        vec![Vec::new(); g]
    } else {
        spec.relations.clone()
    };
    let entries = parse_poly_rows(ring, &rows, (g, k), &format!("{at}/relations"), issues)?;
    issues.check(
        &format!("{at}/relations"),
        GradedModule::new(ring.clone(), spec.twists.clone(), spec.relation_twists.clone(), entries),
    )
}

fn build_functor(base: &BaseRing, spec: &FunctorSpec, at: &str, issues: &mut Issues) -> Option<CoherentFunctor> {
    let module = |m: &ModuleSpec, issues: &mut Issues| build_fp_module(base, m, &format!("{at}/module"), issues);
    Some(match spec {
        FunctorSpec::Hom { module: m } => CoherentFunctor::HomFrom(module(m, issues)?),
        FunctorSpec::Tensor { module: m } => CoherentFunctor::TensorWith(module(m, issues)?),
        FunctorSpec::Tor { index, module: m } => CoherentFunctor::Tor(*index, module(m, issues)?),
        FunctorSpec::Ext { index, module: m } => CoherentFunctor::Ext(*index, module(m, issues)?),
        FunctorSpec::Presentation { source, target, matrix } => {
            let src = build_fp_module(base, source, &format!("{at}/source"), issues);
            let tgt = build_fp_module(base, target, &format!("{at}/target"), issues);
            let (src, tgt) = (src?, tgt?);
            let shape = (tgt.num_generators(), src.num_generators());
            let m = parse_base_matrix(base, matrix, shape, &format!("{at}/matrix"), issues)?;
            let f = FPMap::new(src, tgt, m);
            CoherentFunctor::Presentation(issues.check(&format!("{at}/matrix"), f)?)
        }
    })
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem> {
        Problem::compile(ProblemDescription::parse(text)?)
    }

    /// Validates a description, reporting every error found.
    pub fn compile(description: ProblemDescription) -> Result<Problem> {
        let mut issues = Issues::default();
        let d = &description;
        let base = build_base(&d.base, d.options.seed, &mut issues);
        let [lo, hi] = d.options.window;
        if lo > hi {
            issues.push("/options/window", format!("empty window [{lo}, {hi}]"));
        }
        if d.options.confirm == 0 {
            issues.push("/options/confirm", "confirmation width must be positive");
        }
        if d.tasks.is_empty() {
            issues.push("/tasks", "no tasks requested");
        }
        let Some(base) = base else {
            return Err(Error::Validation(issues.0));
        };
        let s_names = d.s_vars.clone().unwrap_or_else(|| d.r_vars.clone());
        fn names(v: &[String]) -> Vec<&str> {
            v.iter().map(String::as_str).collect()
        }
        let r = issues.check("/r_vars", GradedRing::new(base.clone(), &names(&d.r_vars)));
        let s = issues.check("/s_vars", GradedRing::new(base.clone(), &names(&s_names)));

        let instance = match (&d.instance, r, s) {
            (InstanceSpec::Module { module }, Some(r), _) => {
                build_graded_module(&r, module, "/instance/module", &mut issues).map(Instance::Module)
            }
            (InstanceSpec::Pair { sub, ambient, inclusion }, Some(r), Some(s)) => {
                let inc = issues.check("/r_vars", RingInclusion::new(r.clone(), s.clone()));
                let m = build_graded_module(&r, sub, "/instance/sub", &mut issues);
                let n = build_graded_module(&s, ambient, "/instance/ambient", &mut issues);
                match (inc, m, n) {
                    (Some(inc), Some(m), Some(n)) => {
                        let shape = (n.twists().len(), m.twists().len());
                        parse_poly_rows(&s, inclusion, shape, "/instance/inclusion", &mut issues)
                            .and_then(|e| {
                                issues.check("/instance/inclusion", GradedMap::new(m, n, inc, e))
                            })
                            .map(Instance::Pair)
                    }
                    _ => None,
                }
            }
            _ => None,
        };
        let functors: Vec<Option<CoherentFunctor>> = d
            .functors
            .iter()
            .enumerate()
            .map(|(k, f)| build_functor(&base, f, &format!("/functors/{k}"), &mut issues))
            .collect();
        let ideals: Vec<Option<IdealA>> = d
            .ideals
            .iter()
            .enumerate()
            .map(|(k, gens)| {
                let parsed: Vec<_> = gens
                    .iter()
                    .enumerate()
                    .map(|(i, g)| issues.check(&format!("/ideals/{k}/{i}"), base.parse(g)))
                    .collect();
                let parsed: Option<Vec<_>> = parsed.into_iter().collect();
                parsed.and_then(|p| issues.check(&format!("/ideals/{k}"), IdealA::new(&base, p)))
            })
            .collect();

        let is_pair = matches!(d.instance, InstanceSpec::Pair { .. });
        let mut tasks = BTreeSet::new();
        for t in &d.tasks {
            match t {
                Task::All => {
                    tasks.extend([
                        Task::AssStability,
                        Task::Hilbert,
                        Task::Grade,
                        Task::FunctorStability,
                        Task::QuasiFinite,
                    ]);
                    if is_pair {
                        tasks.insert(Task::AmaoCheck);
                    }
                }
                Task::AmaoCheck if !is_pair => {
                    issues.push("/tasks", "amao_check requires M ⊆ N instance");
                }
                t => {
                    tasks.insert(*t);
                }
            }
        }
        if tasks.contains(&Task::Grade) && d.ideals.is_empty() {
            issues.push("/ideals", "grade requires at least one ideal");
        }
        if !issues.0.is_empty() {
            return Err(Error::Validation(issues.0));
        }
        Ok(Problem {
            base,
            instance: instance.expect("no issues"),
            functors: functors.into_iter().map(|f| f.expect("no issues")).collect(),
            ideals: ideals.into_iter().map(|i| i.expect("no issues")).collect(),
            tasks,
            description,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySummary {
    pub provenance: Provenance,
    pub start: i64,
    pub end: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorStability {
    pub functor: String,
    pub report: StabilityReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub shift: i64,
    pub window_end: i64,
    pub trivial_extension_standard: bool,
    pub filtration_verified: bool,
    pub amao: AmaoReport,
    pub filtrations: Vec<FiltrationCheck>,
    /// The oracle's Ass union contains the analyzer's stable Ass set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covers_analyzer: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationFlags {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Certification>,
    pub window_sufficient: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_verified: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub problem: ProblemDescription,
    pub family: FamilySummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<StabilityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functors: Option<Vec<FunctorStability>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rees_oracle: Option<OracleReport>,
    pub certification: CertificationFlags,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn exit_code(&self) -> i32 {
        if self.certification.oracle_verified == Some(false) {
            EXIT_INVARIANT
        } else if !self.certification.window_sufficient {
            EXIT_WINDOW
        } else {
            EXIT_OK
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_)
        | Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::RingMismatch(_)
        | Error::NotWellDefined(_)
        | Error::NotInclusion { .. }
        | Error::Malformed { .. } => EXIT_VALIDATION,
        Error::OutOfWindow { .. } | Error::NoNormalizingShift { .. } | Error::InsufficientWindow(_) => {
            EXIT_WINDOW
        }
        Error::DivisionByZero
        | Error::Containment(_)
        | Error::NotFiniteLength { .. }
        | Error::Invariant(_) => EXIT_INVARIANT,
    }
}

fn build_family(problem: &Problem, end: i64) -> Result<DegreewiseFamily> {
    match &problem.instance {
        Instance::Pair(iota) => DegreewiseFamily::quotient_family(iota, end),
        Instance::Module(x) => DegreewiseFamily::from_graded(x, end),
    }
}

fn default_functors(base: &BaseRing) -> Vec<CoherentFunctor> {
    let residue = match base.var_elem() {
        Ok(u) => FPModule::cyclic(base, u),
        Err(_) => FPModule::free(base, 1),
    };
    vec![
        CoherentFunctor::HomFrom(residue.clone()),
        CoherentFunctor::TensorWith(residue.clone()),
        CoherentFunctor::Tor(1, residue.clone()),
        CoherentFunctor::Ext(1, residue),
    ]
}

/// Family construction, functor application, analysis, then the oracle.
pub fn run(problem: &Problem) -> Result<Report> {
    let opts = &problem.description.options;
    let [lo, hi] = opts.window;
    let tasks = &problem.tasks;
    let quasi = tasks.contains(&Task::QuasiFinite);
    let end = if quasi { hi + opts.saturation.max(1) as i64 } else { hi };
    let family = build_family(problem, end)?;
    let analysis_opts = AnalysisOptions {
        lo,
        hi,
        confirm: opts.confirm,
        saturation: opts.saturation,
        holdout: opts.holdout,
        quasi_finite: quasi,
    };

    let functors = if tasks.contains(&Task::FunctorStability) {
        let list = if problem.functors.is_empty() {
            default_functors(&problem.base)
        } else {
            problem.functors.clone()
        };
        let plain = AnalysisOptions {
            quasi_finite: false,
            ..analysis_opts.clone()
        };
        Some(
            list.iter()
                .map(|f| {
                    let image = f.apply_family(&family)?;
                    Ok(FunctorStability {
                        functor: f.describe(),
                        report: full_report(&image, &[], &plain)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let wants_analysis = [Task::AssStability, Task::Hilbert, Task::Grade, Task::QuasiFinite]
        .iter()
        .any(|t| tasks.contains(t));
    let analysis = if wants_analysis {
        let ideals: &[IdealA] = if tasks.contains(&Task::Grade) { &problem.ideals } else { &[] };
        Some(full_report(&family, ideals, &analysis_opts)?)
    } else {
        None
    };

    let rees_oracle = match (&problem.instance, tasks.contains(&Task::AmaoCheck)) {
        (Instance::Pair(iota), true) => {
            let pair = normalize(iota, hi)?;
            let (amao, filtrations) = pair.full_check(1, pair.window_end + 1, opts.holdout)?;
            let trivial_extension_standard = TrivialExtensionView::new(&pair.sub, pair.window_end).is_ok();
            let covers_analyzer = analysis
                .as_ref()
                .and_then(|a| a.stable_ass_set.as_ref())
                .map(|s| amao.covers(s));
            Some(OracleReport {
                shift: pair.shift,
                window_end: pair.window_end + pair.shift,
                trivial_extension_standard,
                filtration_verified: filtrations.iter().all(FiltrationCheck::verified),
                amao,
                filtrations,
                covers_analyzer,
            })
        }
        _ => None,
    };

    let mut sufficient = true;
    if let Some(a) = &analysis {
        if tasks.contains(&Task::AssStability) && a.stable_from.is_none() {
            sufficient = false;
        }
        if tasks.contains(&Task::Hilbert) && a.polynomial.fit.is_none() {
            sufficient = false;
        }
        if a.grades.iter().any(|g| g.stable_from.is_none()) {
            sufficient = false;
        }
    }
    if let Some(fs) = &functors {
        if fs.iter().any(|f| f.report.stable_from.is_none()) {
            sufficient = false;
        }
    }
    let oracle_verified = rees_oracle.as_ref().map(|o| {
        o.amao.identity_holds
            && o.amao.ass_contained
            && o.amao.within_bound
            && o.filtration_verified
            && o.trivial_extension_standard
            && o.covers_analyzer != Some(false)
    });
    Ok(Report {
        version: env!("CARGO_PKG_VERSION"),
        problem: problem.description.clone(),
        family: FamilySummary {
            provenance: family.provenance(),
            start: family.start(),
            end: family.end(),
        },
        certification: CertificationFlags {
            analysis: analysis.as_ref().map(|a| a.certification),
            window_sufficient: sufficient,
            oracle_verified,
        },
        analysis,
        functors,
        rees_oracle,
        timing_ms: None,
    })
}

fn option_text<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "not detected".to_string(), ToString::to_string)
}

fn write_stability(out: &mut String, s: &StabilityReport, indent: &str) {
    let _ = writeln!(out, "{indent}{:>6}  {:>6}  {:>4}  {:<24}  module", "degree", "length", "rank", "ass");
    for r in &s.rows {
        let _ = writeln!(
            out,
            "{indent}{:>6}  {:>6}  {:>4}  {:<24}  {}",
            r.degree,
            r.length.to_string(),
            r.free_rank,
            format!("{{{}}}", r.ass.join(", ")),
            r.module
        );
    }
    let _ = writeln!(out, "{indent}stable from: {}", option_text(&s.stable_from));
    if let Some(ass) = &s.stable_ass {
        let _ = writeln!(out, "{indent}stable Ass: {{{}}}", ass.join(", "));
    }
    let p = &s.polynomial;
    let quantity = match p.quantity {
        crate::asymptotics::FittedQuantity::Length => "length",
        crate::asymptotics::FittedQuantity::Rank => "rank",
    };
    match &p.fit {
        Some(f) => {
            let _ = writeln!(
                out,
                "{indent}polynomial ({quantity}): {} from degree {}",
                f.polynomial, f.valid_from
            );
        }
        None => {
            let _ = writeln!(out, "{indent}polynomial ({quantity}): not detected");
        }
    }
    if let Some(note) = &p.note {
        let _ = writeln!(out, "{indent}note: {note}");
    }
    for g in &s.grades {
        let _ = writeln!(
            out,
            "{indent}grade {}: stable from {}, value {}, routes {}",
            g.ideal,
            option_text(&g.stable_from),
            option_text(&g.stable_value),
            if g.agree { "agree" } else { "disagree" }
        );
    }
    if let Some(rows) = &s.quasi_finite {
        let from = crate::asymptotics::h0_vanishing_from(rows);
        let violations = rows.iter().filter(|r| r.violation).count();
        let _ = writeln!(
            out,
            "{indent}H^0 vanishes from: {}, violations: {violations}",
            option_text(&from)
        );
    }
    let _ = writeln!(out, "{indent}certification: {:?}", s.certification);
}

/// Plain-text rendering of a report.
pub fn render_human(report: &Report) -> String {
    let mut out = String::new();
    let w = report.problem.options.window;
    let _ = writeln!(out, "asymprimes {}", report.version);
    let _ = writeln!(
        out,
        "family: {:?} on [{}, {}], window [{}, {}]",
        report.family.provenance, report.family.start, report.family.end, w[0], w[1]
    );
    if let Some(a) = &report.analysis {
        let _ = writeln!(out, "\nanalysis");
        write_stability(&mut out, a, "  ");
    }
    if let Some(fs) = &report.functors {
        for f in fs {
            let _ = writeln!(out, "\nfunctor {}", f.functor);
            write_stability(&mut out, &f.report, "  ");
        }
    }
    if let Some(o) = &report.rees_oracle {
        let _ = writeln!(out, "\nrees oracle (shift {})", o.shift);
        let _ = writeln!(out, "  {:>3}  {:>6}  {:>6}  subquotients", "j", "sum", "length");
        for r in &o.amao.rows {
            let _ = writeln!(
                out,
                "  {:>3}  {:>6}  {:>6}  {}",
                r.j,
                r.length_sum.to_string(),
                r.quotient_length.to_string(),
                r.lstar.join(" | ")
            );
        }
        let _ = writeln!(out, "  length identity: {}", o.amao.identity_holds);
        let _ = writeln!(out, "  Ass containment: {}", o.amao.ass_contained);
        let _ = writeln!(out, "  Ass union: {{{}}}", o.amao.ass_union.join(", "));
        let _ = writeln!(
            out,
            "  degree bound {}: {}",
            o.amao.degree_bound, o.amao.within_bound
        );
        let _ = writeln!(out, "  filtration: {}", o.filtration_verified);
        let _ = writeln!(out, "  trivial extension standard graded: {}", o.trivial_extension_standard);
        if let Some(c) = o.covers_analyzer {
            let _ = writeln!(out, "  covers analyzer: {c}");
        }
    }
    let c = &report.certification;
    let _ = writeln!(out, "\nwindow sufficient: {}", c.window_sufficient);
    if let Some(v) = c.oracle_verified {
        let _ = writeln!(out, "oracle verified: {v}");
    }
    if let Some(t) = report.timing_ms {
        let _ = writeln!(out, "time: {t} ms");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const UX: &str = r#"{
        "base": {"kind": "univariate", "p": 2, "variable": "u"},
        "r_vars": ["x"],
        "instance": {
            "kind": "pair",
            "sub": {"twists": [1]},
            "ambient": {"twists": [0]},
            "inclusion": [["u*x"]]
        },
        "ideals": [["u"]],
        "tasks": ["all"],
        "options": {"window": [0, 12], "confirm": 4, "holdout": 3}
    }"#;

    fn issues(e: Error) -> Vec<ValidationIssue> {
        match e {
            Error::Validation(v) => v,
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn minimal_description_parses() {
        let text = r#"{
            "base": {"kind": "prime_field", "p": 3},
            "r_vars": ["x"],
            "instance": {"kind": "module", "module": {"twists": [0]}},
            "tasks": ["ass_stability"]
        }"#;
        let p = Problem::parse(text).unwrap();
        assert_eq!(p.description.options, OptionsSpec::default());
        assert_eq!(p.tasks, BTreeSet::from([Task::AssStability]));
    }

    #[test]
    fn round_trip() {
        let d = ProblemDescription::parse(UX).unwrap();
        assert_eq!(ProblemDescription::parse(&d.render()).unwrap(), d);
    }

    #[test]
    fn validation_messages() {
        let bad_var = UX.replace(r#""r_vars": ["x"]"#, r#""r_vars": ["x"], "s_vars": ["y"]"#);
        let v = issues(Problem::parse(&bad_var).unwrap_err());
        assert!(v.iter().any(|i| i.pointer == "/r_vars" && i.message.contains("R-variable x not in S")));

        let inhomogeneous = UX.replace("u*x", "u*x + 1");
        let v = issues(Problem::parse(&inhomogeneous).unwrap_err());
        assert!(v.iter().any(|i| i.pointer == "/instance/inclusion" && i.message.contains("(0, 0)")));

        let module = r#"{
            "base": {"kind": "univariate", "p": 2, "variable": "u"},
            "r_vars": ["x"],
            "instance": {"kind": "module", "module": {"twists": [0]}},
            "tasks": ["amao_check"]
        }"#;
        let v = issues(Problem::parse(module).unwrap_err());
        assert_eq!(v[0].message, "amao_check requires M ⊆ N instance");

        let several = UX.replace(r#""p": 2"#, r#""p": 4"#).replace(r#"[0, 12]"#, "[5, 1]");
        assert_eq!(issues(Problem::parse(&several).unwrap_err()).len(), 2);
    }

    #[test]
    fn ux_report() {
        let p = Problem::parse(UX).unwrap();
        let r = run(&p).unwrap();
        let a = r.analysis.as_ref().unwrap();
        assert_eq!(a.stable_from, Some(1));
        assert_eq!(a.stable_ass.as_deref(), Some(&["(u)".to_string()][..]));
        assert_eq!(a.polynomial.fit.as_ref().unwrap().polynomial.to_string(), "1");
        assert_eq!(a.grades[0].stable_from, Some(1));
        assert_eq!(a.grades[0].stable_value, Some(crate::fpmod::Grade::Finite(0)));
        assert_eq!(r.certification.oracle_verified, Some(true));
        assert_eq!(r.exit_code(), EXIT_OK);
        assert_eq!(r.to_json(), run(&p).unwrap().to_json());
        assert!(render_human(&r).contains("stable Ass: {(u)}"));
    }
}
