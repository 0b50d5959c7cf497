//! Command-line front end: loads a problem file, runs one command, prints a report.

pub mod grammar;
pub mod problem;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dgcalc_core::classify::{
    cohomology_dims, compare_dualizing, is_cm, is_dualizing, is_gorenstein, is_perfect, is_tilting, ConditionStatus, DualizingCertificate,
    DualizingOutcome, GorensteinVerdict, PerfectOutcome, TiltingFailure,
};
use dgcalc_core::derived::{cech, check_chain_quasi_iso, pieces};
use dgcalc_core::linalg::Scalar;
use dgcalc_core::module::{cohomology, DgModule, Module, QisVerdict};
use dgcalc_core::resolve::{degree_zero_is_local, minimize, reduce, semifree_resolution, verify_resolution};
use dgcalc_core::ring::{connected_components, DgRing};
use dgcalc_core::squaring::{enveloping, required_cutoff, rigidity_consistency, square, RigidityOutcome};

use problem::Problem;
use report::{dims, text, Report, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<dgcalc_core::Error> for CliError {
    fn from(e: dgcalc_core::Error) -> CliError {
        use dgcalc_core::Error as E;
        match e {
            E::InvalidInput(_) | E::Parse(_) => CliError::Input(e.to_string()),
            E::Precondition(_) | E::Verification(_) | E::WindowUnderflow(_) | E::Unsupported(_) => CliError::Precondition(e.to_string()),
            E::DimensionMismatch(_) | E::Resource(_) => CliError::Internal(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i64 = a.trim().parse().map_err(|_| format!("bad bound `{a}`"))?;
    let hi: i64 = b.trim().parse().map_err(|_| format!("bad bound `{b}`"))?;
    if lo > hi {
        return Err("lo must not exceed hi".into());
    }
    Ok((lo, hi))
}

/// Exact computations with commutative nonpositive DG rings and their DG modules.
#[derive(Parser, Debug)]
#[command(name = "dgcalc", version)]
pub struct Cli {
    /// Problem file (TOML).
    pub file: PathBuf,
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Seed for randomized searches.
    #[arg(long, env = "DGCALC_SEED", global = true)]
    pub seed: Option<u64>,
    /// Degree window `lo:hi` in which results are computed and certified.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true, global = true)]
    pub window: Option<(i64, i64)>,
    /// Resolution cutoff degree; defaults to four below the window.
    #[arg(long, allow_hyphen_values = true, global = true)]
    pub cutoff: Option<i64>,
    /// Number of random candidates tried by searches.
    #[arg(long, default_value_t = 16, global = true)]
    pub budget: usize,
    /// Append the elapsed time to the report (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Verify the problem file and summarize it.
    Check,
    /// Cohomology dimensions of an object.
    #[command(name = "H")]
    H { object: String },
    /// Semi-free resolution with Betti numbers.
    Resolve { object: String },
    /// Reduction to `H⁰(A)`.
    Reduce { object: String },
    Perfect { object: String },
    Tilting { object: String },
    Dualizing { object: String },
    /// Gorenstein test for a ring (the primary ring by default).
    Gorenstein { ring: Option<String> },
    Cm {
        object: String,
        #[arg(long)]
        against: String,
    },
    /// Čech complex for a comma-separated cover of `A⁰` elements.
    Cech {
        object: String,
        #[arg(long, allow_hyphen_values = true)]
        cover: String,
    },
    /// Connected components of a ring (the primary ring by default).
    Components { ring: Option<String> },
    Square { object: String },
    Rigidity { object: String },
    CompareDualizing { first: String, second: String },
}

impl Command {
    fn echo(&self) -> String {
        match self {
            Command::Check => "check".into(),
            Command::H { object } => format!("H {object}"),
            Command::Resolve { object } => format!("resolve {object}"),
            Command::Reduce { object } => format!("reduce {object}"),
            Command::Perfect { object } => format!("perfect {object}"),
            Command::Tilting { object } => format!("tilting {object}"),
            Command::Dualizing { object } => format!("dualizing {object}"),
            Command::Gorenstein { ring } => format!("gorenstein {}", ring.as_deref().unwrap_or("")).trim_end().to_string(),
            Command::Cm { object, against } => format!("cm {object} --against {against}"),
            Command::Cech { object, cover } => format!("cech {object} --cover {cover}"),
            Command::Components { ring } => format!("components {}", ring.as_deref().unwrap_or("")).trim_end().to_string(),
            Command::Square { object } => format!("square {object}"),
            Command::Rigidity { object } => format!("rigidity {object}"),
            Command::CompareDualizing { first, second } => format!("compare-dualizing {first} {second}"),
        }
    }
}

/// Settings shared by all commands.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub window: (i64, i64),
    pub cutoff: i64,
    pub seed: u64,
    pub budget: usize,
}

impl Settings {
    pub fn from_cli(cli: &Cli) -> Settings {
        let window = cli.window.unwrap_or((-8, 8));
        Settings { window, cutoff: cli.cutoff.unwrap_or(window.0 - 4), seed: cli.seed.unwrap_or(0), budget: cli.budget }
    }
}

fn qis(v: &QisVerdict) -> Value {
    let mut e = vec![("holds".to_string(), Value::Bool(v.holds))];
    if let (Some(a), Some(b)) = (v.checked.first(), v.checked.last()) {
        e.push(("checked".into(), Value::Ints(vec![*a, *b])));
    }
    e.push(("complete".into(), Value::Bool(v.complete)));
    if let Some(f) = v.failing {
        e.push(("failing_degree".into(), Value::Int(f)));
    }
    Value::Group(e)
}

fn condition(c: &ConditionStatus) -> Value {
    match c {
        ConditionStatus::Holds => text("holds"),
        ConditionStatus::Fails(why) => text(format!("fails: {why}")),
        ConditionStatus::Inconclusive(why) => text(format!("inconclusive: {why}")),
    }
}

fn a0_text(ring: &DgRing, v: &[Scalar]) -> String {
    ring.format_element(&ring.from_a0(v))
}

fn dualizing_entries(r: &mut Report, c: &DualizingCertificate) {
    r.push("finiteness", dims(&c.finiteness));
    let probes = c
        .probes
        .iter()
        .map(|p| {
            let mut e = vec![("component".to_string(), Value::Int(p.component as i64)), ("residue_dim".into(), Value::Int(p.residue_dim as i64))];
            e.push(("dims".into(), dims(&p.dims)));
            if let Some((a, b)) = p.concentration {
                e.push(("concentration".into(), Value::Ints(vec![a, b])));
            }
            Value::Group(e)
        })
        .collect();
    r.push("probes", Value::List(probes));
    r.push("injective_dimension", condition(&c.injective));
    r.push("unit", qis(&c.unit));
    r.push("homothety", condition(&c.homothety));
    r.push("qualification", text(DualizingCertificate::QUALIFICATION));
}

fn dualizing_verdict(o: &DualizingOutcome) -> &'static str {
    match o {
        DualizingOutcome::DualizingInWindow => "DualizingInWindow",
        DualizingOutcome::NotDualizing => "NotDualizing",
        DualizingOutcome::Inconclusive => "Inconclusive",
    }
}

fn degrees(p: &dgcalc_core::module::SemiFreeModule) -> Vec<i64> {
    p.basis().iter().map(|b| b.degree).collect()
}

/// Runs one command against a loaded problem.
pub fn run(problem: &Problem, command: &Command, s: Settings) -> Result<Report, CliError> {
    let (lo, hi) = s.window;
    let echo = command.echo();
    let report = match command {
        Command::Check => {
            let mut r = Report::new(echo, "verified");
            r.push("field", text(problem.field.to_string()));
            r.push("primary_ring", text(&problem.primary));
            let rings = problem
                .rings
                .iter()
                .map(|(name, a)| {
                    let mut e = vec![("name".to_string(), text(name)), ("degree_zero".into(), Value::Lines(a.degree_zero().symbols().to_vec()))];
                    let gens = a
                        .generators()
                        .iter()
                        .enumerate()
                        .map(|(g, x)| format!("{} (degree {}): d = {}", x.name, x.degree, a.format_element(a.differential_of(g))))
                        .collect();
                    e.push(("generators".into(), Value::Lines(gens)));
                    Value::Group(e)
                })
                .collect();
            r.push("rings", Value::List(rings));
            let modules = problem
                .modules
                .iter()
                .map(|(name, m)| {
                    let kind = match m {
                        Module::SemiFree(p) => format!("semi-free, basis degrees {:?}", degrees(p)),
                        Module::Windowed(w) => format!("windowed on {}:{}", w.lo(), w.hi()),
                        Module::Coinduced(c) => c.describe(),
                        Module::Lazy(_) => "derived".into(),
                    };
                    format!("{name}: {kind}")
                })
                .collect();
            r.push("modules", Value::Lines(modules));
            r.push("homs", Value::Lines(problem.homs.keys().cloned().collect()));
            r
        }
        Command::H { object } => {
            let m = problem.object(object)?;
            let mut r = Report::new(echo, "computed").window(lo, hi);
            r.push("dims", dims(&cohomology_dims(&m, lo, hi)?));
            r
        }
        Command::Resolve { object } => {
            let m = problem.object(object)?;
            let mut cert = semifree_resolution(&m, s.cutoff)?;
            verify_resolution(&cert)?;
            let local = degree_zero_is_local(m.ring());
            if local {
                cert = minimize(&cert)?;
            }
            let mut r = Report::new(echo, if cert.is_exact() { "exact" } else { "truncated" });
            r.push("cutoff", Value::Int(s.cutoff));
            if let Some(c) = cert.certified_from() {
                r.push("certified_from", Value::Int(c));
            }
            r.push("minimal", Value::Bool(local));
            r.push("betti", dims(&cert.betti()));
            r
        }
        Command::Reduce { object } => {
            let m = problem.object(object)?;
            let red = reduce(&m, s.cutoff)?;
            let w = &red.window;
            let table = cohomology(w);
            let h: Vec<(i64, usize)> = table.trusted_degrees().into_iter().filter_map(|i| table.dim(i).map(|d| (i, d))).collect();
            let mut r = Report::new(echo, "computed").window(w.lo(), w.hi());
            r.push("reduction_ring_dim", Value::Int(red.ring.degree_zero().dim() as i64));
            r.push("dims", dims(&h));
            r.push("betti", dims(&red.certificate.betti()));
            r
        }
        Command::Perfect { object } => {
            let m = problem.object(object)?;
            let v = is_perfect(&m, s.cutoff)?;
            let mut r = Report::new(echo, match v.outcome {
                PerfectOutcome::Perfect => "Perfect",
                PerfectOutcome::Inconclusive => "Inconclusive",
            });
            r.push("cutoff", Value::Int(v.cutoff));
            let comps = v
                .components
                .iter()
                .map(|c| {
                    let rep = &c.replacement;
                    let mut e = vec![("index".to_string(), Value::Int(c.index as i64)), ("finite".into(), Value::Bool(rep.finite))];
                    if rep.finite {
                        e.push(("witness_degrees".into(), Value::Ints(degrees(&rep.p))));
                    }
                    if let Some(c) = rep.certified_from {
                        e.push(("certified_from".into(), Value::Int(c)));
                    }
                    if !rep.betti.is_empty() {
                        e.push(("betti".into(), dims(&rep.betti)));
                    }
                    if let Some(w) = &c.witness_check {
                        e.push(("witness_check".into(), qis(w)));
                    }
                    Value::Group(e)
                })
                .collect();
            r.push("components", Value::List(comps));
            if let Some(w) = v.global_witness() {
                r.push("witness_degrees", Value::Ints(degrees(w)));
            }
            r
        }
        Command::Tilting { object } => {
            let p = problem.object(object)?;
            let c = is_tilting(&p, lo, hi, s.cutoff)?;
            let mut r = Report::new(echo, if c.tilting { "Tilting" } else { "NotTilting" }).window(c.window.0, c.window.1);
            if let Some(f) = &c.failure {
                r.push("failure", text(match f {
                    TiltingFailure::NotPerfect => "not perfect".to_string(),
                    TiltingFailure::AdjunctionFails(d) => format!("A → RHom(P, P) is not a quasi-isomorphism{}", d.map_or(String::new(), |d| format!(" (degree {d})"))),
                    TiltingFailure::NotRankOne { component, generators } => format!("component {component} has {generators} minimal generators"),
                    TiltingFailure::RoundTripFails { component } => format!("round trip fails on component {component}"),
                }));
            }
            if let Some(u) = &c.unit {
                r.push("unit", qis(u));
            }
            r.push("shifts", Value::Ints(c.shifts.clone()));
            r.push("reduction_shifts", Value::Ints(c.reduction_shifts.clone()));
            if let Some(q) = &c.quasi_inverse {
                r.push("quasi_inverse_dims", dims(&q.cohomology_dims(lo, hi)?));
            }
            r.push("round_trip", Value::List(c.round_trip.iter().map(qis).collect()));
            r
        }
        Command::Dualizing { object } => {
            let m = problem.object(object)?;
            let c = is_dualizing(&m, lo, hi)?;
            let mut r = Report::new(echo, dualizing_verdict(&c.outcome)).window(c.window.0, c.window.1);
            dualizing_entries(&mut r, &c);
            r
        }
        Command::Gorenstein { ring } => {
            let a = problem.ring(ring.as_deref())?;
            match is_gorenstein(a, lo, hi)? {
                GorensteinVerdict::CohomologyUnbounded { degree } => {
                    let mut r = Report::new(echo, "NotGorenstein").window(lo, hi);
                    r.push("reason", text(format!("H(A) is nonzero at degree {degree}, the bottom of the window")));
                    r
                }
                GorensteinVerdict::Checked(c) => {
                    let verdict = match c.outcome {
                        DualizingOutcome::DualizingInWindow => "GorensteinInWindow",
                        DualizingOutcome::NotDualizing => "NotGorenstein",
                        DualizingOutcome::Inconclusive => "Inconclusive",
                    };
                    let mut r = Report::new(echo, verdict).window(c.window.0, c.window.1);
                    dualizing_entries(&mut r, &c);
                    r
                }
            }
        }
        Command::Cm { object, against } => {
            let (m, rr) = (problem.object(object)?, problem.object(against)?);
            let v = is_cm(&m, &rr, lo, hi)?;
            let mut r = Report::new(echo, if v.cm { "CohenMacaulay" } else { "NotCohenMacaulay" }).window(v.window.0, v.window.1);
            r.push("dual_dims", dims(&v.dims));
            r.push("dual_dim", Value::Int(v.dual_dim as i64));
            r
        }
        Command::Cech { object, cover } => {
            let m = problem.object(object)?;
            let ring = m.ring().clone();
            let cover = cover
                .split(',')
                .map(|c| grammar::a0_element(&ring, c).map_err(|e| CliError::Input(format!("--cover: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let c = cech(&m, &cover, lo, hi)?;
            let v = check_chain_quasi_iso(&c.augmentation, lo, hi);
            let mut r = Report::new(echo, if v.holds { "AugmentationQuasiIso" } else { "AugmentationFails" }).window(lo, hi);
            r.push("cover", Value::Lines(c.cover.iter().map(|x| a0_text(&ring, x)).collect()));
            r.push(
                "localized_dims",
                Value::Lines(c.localized_dims.iter().map(|(t, d)| format!("{t:?}: {d}")).collect()),
            );
            let module = Module::Windowed(c.module.clone());
            r.push("dims", dims(&cohomology_dims(&module, c.module.lo(), c.module.hi())?));
            r.push("augmentation", qis(&v));
            r
        }
        Command::Components { ring } => {
            let a = problem.ring(ring.as_deref())?;
            let (cover, comps) = connected_components(a);
            let mut r = Report::new(echo, format!("{} component(s)", comps.len())).window(lo, hi);
            r.push("idempotents", Value::Lines(cover.representatives.iter().map(|e| a0_text(a, e)).collect()));
            r.push("orthogonal", Value::Bool(cover.orthogonal));
            r.push("sums_to_one", Value::Bool(cover.sums_to_one));
            r.push("certified_local", Value::Bool(cover.complete));
            let parts = pieces(a)
                .iter()
                .map(|p| {
                    let m = Module::semifree(dgcalc_core::module::SemiFreeModule::ring_module(p.ring.clone()));
                    Ok(Value::Group(vec![
                        ("degree_zero_dim".to_string(), Value::Int(p.ring.degree_zero().dim() as i64)),
                        ("dims".into(), dims(&cohomology_dims(&m, lo, hi.min(0))?)),
                    ]))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            r.push("components", Value::List(parts));
            r
        }
        Command::Square { object } => {
            let m = problem.object(object)?;
            let env = enveloping(m.ring(), required_cutoff(&m, hi)?)?;
            let sq = square(&env, &m, lo, hi)?;
            let mut r = Report::new(echo, if sq.dims_match() { "DimsMatch" } else { "DimsDiffer" }).window(sq.window.0, sq.window.1);
            r.push("cutoff", Value::Int(sq.cutoff));
            r.push("square_dims", dims(&sq.dims));
            r.push("dims", dims(&sq.m_dims));
            r
        }
        Command::Rigidity { object } => {
            let m = problem.object(object)?;
            let env = enveloping(m.ring(), required_cutoff(&m, hi)?)?;
            let rep = rigidity_consistency(&env, &m, lo, hi, s.seed, s.budget)?;
            let verdict = match &rep.outcome {
                RigidityOutcome::Found { .. } => "RigidityWitnessFound",
                RigidityOutcome::DimsMatchNoWitnessFound { .. } => "Inconclusive",
                RigidityOutcome::DimsMismatch => "NotRigid",
            };
            let mut r = Report::new(echo, verdict).window(rep.square.window.0, rep.square.window.1).seed(rep.seed);
            r.push("budget", Value::Int(rep.budget as i64));
            match &rep.outcome {
                RigidityOutcome::Found { verdict, tried, .. } => {
                    r.push("tried", Value::Int(*tried as i64));
                    r.push("witness", qis(verdict));
                }
                RigidityOutcome::DimsMatchNoWitnessFound { tried } => r.push("tried", Value::Int(*tried as i64)),
                RigidityOutcome::DimsMismatch => {}
            }
            r.push("square_dims", dims(&rep.square.dims));
            r.push("dims", dims(&rep.square.m_dims));
            r
        }
        Command::CompareDualizing { first, second } => {
            let (a, b) = (problem.object(first)?, problem.object(second)?);
            let c = compare_dualizing(&a, &b, lo, hi, s.cutoff)?;
            let mut r = Report::new(echo, if c.matches { "Equivalent" } else { "NotEquivalent" }).window(lo, hi);
            r.push("tilting", Value::Bool(c.tilting.tilting));
            r.push("shifts", Value::Ints(c.tilting.shifts.clone()));
            r.push("tensor_dims", dims(&c.tensor_dims));
            r.push("target_dims", dims(&c.target_dims));
            r
        }
    };
    Ok(report)
}

/// Parses the file, runs the command and renders the report.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let start = Instant::now();
    let problem = Problem::load(&cli.file)?;
    let mut report = run(&problem, &cli.command, Settings::from_cli(cli))?;
    if cli.timing {
        report.push("elapsed_ms", Value::Int(start.elapsed().as_millis() as i64));
    }
    Ok(match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    })
}

/// Loads a problem from text; used by tests and embedding callers.
pub fn run_text(problem: &str, command: &Command, s: Settings) -> Result<Report, CliError> {
    run(&Problem::parse(problem)?, command, s)
}
