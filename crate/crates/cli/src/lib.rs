//! Command-line front end for `licorm`.
//!
//! Every command writes one JSON report (to `--out` or stdout). Exit codes:
//! 0 success, 1 property violations found by `check`, 2 parse or validation
//! errors, 3 numeric failure. On error the report is an error object and
//! stderr carries a one-line human message.

pub mod error;
pub mod input;
pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use licorm::dualsolver::{duality_gap_report, Status};
use licorm::riskmeasures::{cvar, cvar_target_measure, higher_moment, higher_moment_dual_cert, kusuoka_to_measure};
use licorm::transport::{chi_generators, chi_single, comonotone_coupling, HullMode, HullPolicy};
use licorm::verify::{check_axioms, check_bounds, random_generator_set, random_measure, random_pairs, AxiomReport, SplitMix64};
use licorm::{Measure, Options, Order, Plan, Report, Spec};

use error::{CliError, CliResult};
use report::{finite, real, SCHEMA_VERSION};
use spec::{reals, spec_to_value};

/// Longest sample vector drawn by `check`.
pub const CHECK_MAX_LEN: usize = 50;

#[derive(Debug, Parser)]
#[command(name = "licorm", version, about = "Law-invariant coherent risk measures via optimal transport")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report path; written atomically. Defaults to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a risk measure on a sample file.
    Eval {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Solve the primal/dual pair for a finitely generated target set.
    Dual {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Use the seeded random instance with this index instead of --input/--spec.
        #[arg(long, value_name = "N", conflicts_with_all = ["input", "spec", "spec_json"])]
        instance: Option<u64>,
    },
    /// Run the axiom and bound checks on seeded random samples.
    Check {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Violation tolerance; defaults to 1e-6 for convex-hull specs and 1e-9 otherwise.
        #[arg(long, value_name = "X")]
        tol: Option<f64>,
        /// Number of random sample pairs.
        #[arg(long, value_name = "N", default_value_t = 1000)]
        instances: usize,
    },
    /// Print the step function and image measure of a CV@R mixture.
    Kusuoka {
        #[command(flatten)]
        spec: SpecArgs,
    },
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Sample CSV: value per line, optional weight column, optional header.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Merge sample positions that agree within 1e-12.
    #[arg(long)]
    pub snap_atoms: bool,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Spec JSON file.
    #[arg(long, value_name = "PATH", conflicts_with = "spec_json")]
    pub spec: Option<PathBuf>,
    /// Inline spec JSON.
    #[arg(long, value_name = "STRING")]
    pub spec_json: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Seed for restarts and random instances.
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Subgradient iteration budget.
    #[arg(long, value_name = "N")]
    pub max_iters: Option<usize>,
    /// Relative duality-gap target.
    #[arg(long, value_name = "X")]
    pub target_gap: Option<f64>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Dual { .. } => "dual",
            Command::Check { .. } => "check",
            Command::Kusuoka { .. } => "kusuoka",
        }
    }
}

impl SpecArgs {
    fn load(&self) -> CliResult<Spec> {
        let text = match (&self.spec, &self.spec_json) {
            (Some(path), _) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?,
            (None, Some(text)) => text.clone(),
            (None, None) => return Err(CliError::parse("a spec is required (--spec or --spec-json)")),
        };
        spec::parse_spec(&text)
    }
}

impl DataArgs {
    fn load(&self) -> CliResult<Measure> {
        let path = self.input.as_ref().ok_or_else(|| CliError::parse("--input is required"))?;
        input::read_samples(path)?.to_measure(self.snap_atoms)
    }
}

impl SolverArgs {
    fn options(&self) -> CliResult<Options> {
        let defaults = Options::default();
        let opts = Options {
            max_iters: self.max_iters.unwrap_or(defaults.max_iters),
            target_gap: self.target_gap.unwrap_or(defaults.target_gap),
            seed: self.seed,
            ..defaults
        };
        opts.validate()?;
        Ok(opts)
    }
}

/// Parses `args`, runs the command, writes the report and returns the exit code.
pub fn main_with<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = run(&cli.command).and_then(|(doc, code)| report::emit(&doc, cli.out.as_deref()).map(|_| code));
    match outcome {
        Ok(code) => code,
        Err(err) => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": cli.command.name(),
                "error": { "kind": err.kind(), "message": err.to_string() },
            });
            eprintln!("licorm {}: {err}", cli.command.name());
            let _ = report::emit(&doc, cli.out.as_deref());
            err.exit_code()
        }
    }
}

/// Runs one command and returns its report with the success exit code.
pub fn run(command: &Command) -> CliResult<(Value, i32)> {
    let mut doc = match command {
        Command::Eval { data, spec, solver } => cmd_eval(&data.load()?, &spec.load()?, &solver.options()?)?,
        Command::Dual {
            data,
            spec,
            solver,
            instance,
        } => {
            let opts = solver.options()?;
            match instance {
                Some(index) => {
                    let (m, spec) = random_instance(solver.seed, *index);
                    let mut doc = cmd_dual(&m, &spec, &opts)?;
                    doc["instance"] = json!({ "seed": solver.seed, "index": index });
                    doc
                }
                None => cmd_dual(&data.load()?, &spec.load()?, &opts)?,
            }
        }
        Command::Check {
            spec,
            solver,
            tol,
            instances,
        } => cmd_check(&spec.load()?, &solver.options()?, *tol, *instances)?,
        Command::Kusuoka { spec } => cmd_kusuoka(&spec.load()?)?,
    };
    let code = if doc.get("passed") == Some(&Value::Bool(false)) { 1 } else { 0 };
    let body = std::mem::take(doc.as_object_mut().expect("reports are objects"));
    let mut out = serde_json::Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command.name()));
    out.extend(body);
    Ok((Value::Object(out), code))
}

/// Seeded instance with `n ≤ 200`, `K ≤ 8`, `V ≤ 6` and a convex-hull target set.
pub fn random_instance(seed: u64, index: u64) -> (Measure, Spec) {
    let mut rng = SplitMix64::for_instance(seed, index);
    let n = rng.range_inclusive(1, 200);
    let k = rng.range_inclusive(1, 8);
    let v = rng.range_inclusive(1, 6);
    let m = random_measure(&mut rng, n);
    let set = random_generator_set(&mut rng, k, v, HullMode::ConvexHull);
    (m, Spec::Explicit { set, p: Order::Finite(1.0) })
}

pub fn cmd_eval(m: &Measure, spec: &Spec, opts: &Options) -> CliResult<Value> {
    let mut doc = json!({ "spec": spec_to_value(spec), "measure": summary(m)? });
    let (value, plan) = match spec {
        Spec::CVaR { beta } => (cvar(m, *beta)?, Some(comonotone_coupling(m, &cvar_target_measure(*beta)?))),
        Spec::HigherMoment { p, c } => {
            let primal = higher_moment(m, *p, *c)?;
            let cert = higher_moment_dual_cert(m, *p, *c)?;
            doc["t_star"] = finite("t_star", primal.t_star)?;
            doc["certificate"] = json!({
                "t_bar": finite("t_bar", cert.t_bar)?,
                "u_bar": finite("u_bar", cert.u_bar)?,
                "dual_value": finite("dual_value", cert.dual_value)?,
            });
            (primal.value, None)
        }
        Spec::KusuokaMixture { atoms } => {
            let image = kusuoka_to_measure(atoms)?;
            (chi_single(m, image.image_measure()), Some(comonotone_coupling(m, image.image_measure())))
        }
        Spec::Explicit { set, .. } => match set.mode() {
            HullMode::FiniteSet => {
                let best = chi_generators(m, set, HullPolicy::Reject)?;
                doc["vertex"] = json!(best.vertex);
                (best.value, Some(comonotone_coupling(m, &set.vertex_measure(best.vertex))))
            }
            HullMode::ConvexHull => {
                let r = duality_gap_report(m, set, opts)?;
                doc["gap_report"] = gap_summary(&r)?;
                if let Some(w) = warning(&r) {
                    doc["warning"] = json!(w);
                }
                (r.primal_lower, Some(r.coupling))
            }
        },
    };
    doc["value"] = finite("value", value)?;
    if let Some(plan) = plan {
        doc["coupling"] = coupling(&plan)?;
    }
    Ok(doc)
}

pub fn cmd_dual(m: &Measure, spec: &Spec, opts: &Options) -> CliResult<Value> {
    let set = spec.generator_set()?.ok_or_else(|| {
        licorm::Error::InvalidParams("dual needs a finitely generated spec (cvar, kusuoka_mixture or explicit)".into())
    })?;
    let r = duality_gap_report(m, &set, opts)?;
    let mut doc = json!({
        "spec": spec_to_value(spec),
        "measure": summary(m)?,
        "support": reals(set.support()),
    });
    for (key, value) in gap_summary(&r)?.as_object().expect("object").clone() {
        doc[key] = value;
    }
    if let Some(w) = warning(&r) {
        doc["warning"] = json!(w);
    }
    doc["coupling"] = coupling(&r.coupling)?;
    Ok(doc)
}

pub fn cmd_check(spec: &Spec, opts: &Options, tol: Option<f64>, instances: usize) -> CliResult<Value> {
    if instances == 0 {
        return Err(CliError::parse("--instances must be positive"));
    }
    let iterative = matches!(spec, Spec::Explicit { set, .. } if set.mode() == HullMode::ConvexHull);
    let tol = tol.unwrap_or(if iterative { 1e-6 } else { 1e-9 });
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::parse("--tol must be a nonnegative number"));
    }
    let pairs = random_pairs(opts.seed, instances, CHECK_MAX_LEN);
    let axioms = check_axioms(spec, &pairs, tol, opts.seed, opts)?;
    let bounds = check_bounds(spec, &pairs, tol, opts)?;
    let checks: Vec<Value> = [("axioms", &axioms), ("bounds", &bounds)]
        .into_iter()
        .flat_map(|(group, rep): (&str, &AxiomReport<f64>)| {
            rep.checks.iter().map(move |c| {
                json!({
                    "group": group,
                    "name": c.name,
                    "max_violation": real(c.max_violation),
                    "failures": c.failures,
                    "witness": c.witness,
                })
            })
        })
        .collect();
    Ok(json!({
        "spec": spec_to_value(spec),
        "seed": opts.seed,
        "instances": instances,
        "tol": real(tol),
        "passed": axioms.passed() && bounds.passed(),
        "checks": checks,
    }))
}

pub fn cmd_kusuoka(spec: &Spec) -> CliResult<Value> {
    let atoms = match spec {
        Spec::KusuokaMixture { atoms } => atoms.clone(),
        Spec::CVaR { beta } => vec![(*beta, 1.0)],
        _ => {
            return Err(licorm::Error::InvalidMixture("kusuoka needs a kusuoka_mixture or cvar spec".into()).into());
        }
    };
    let image = kusuoka_to_measure(&atoms)?;
    let r = image.image_measure();
    Ok(json!({
        "spec": spec_to_value(spec),
        "psi_breaks": image.psi_breaks().iter().map(|&(t, v)| json!([real(t), real(v)])).collect::<Vec<_>>(),
        "image": r.atoms().map(|(y, w)| json!([real(y), real(w)])).collect::<Vec<_>>(),
        "image_mean": real(r.expectation()),
    }))
}

fn summary(m: &Measure) -> CliResult<Value> {
    Ok(json!({
        "atoms": m.len(),
        "mean": real(m.expectation()),
        "min": real(m.min()),
        "max": real(m.max()),
        "moment_1": real(m.moment(Order::Finite(1.0))?),
        "moment_2": real(m.moment(Order::Finite(2.0))?),
        "moment_inf": real(m.moment(Order::Infinity)?),
    }))
}

fn coupling(plan: &Plan) -> CliResult<Value> {
    Ok(json!({
        "objective": finite("coupling objective", plan.objective())?,
        "atoms": plan.atoms().len(),
        "plan": plan.atoms().iter().map(|&(x, y, w)| json!([real(x), real(y), real(w)])).collect::<Vec<_>>(),
    }))
}

fn gap_summary(r: &Report) -> CliResult<Value> {
    Ok(json!({
        "primal_lower": finite("primal_lower", r.primal_lower)?,
        "dual_upper": finite("dual_upper", r.dual_upper)?,
        "gap": finite("gap", r.gap)?,
        "relative_gap": real(r.gap / (1.0 + r.primal_lower.abs())),
        "status": status(r.status),
        "lambda": reals(&r.lambda),
        "g": reals(r.dual_witness.values()),
        "vertex_lower": real(r.vertex_lower),
        "fw_iterations": r.fw_iterations,
        "dual_iterations": r.dual_iterations,
    }))
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Converged => "converged",
        Status::IterLimit => "iter_limit",
    }
}

fn warning(r: &Report) -> Option<String> {
    (r.status == Status::IterLimit).then(|| {
        format!(
            "iteration limit reached before the gap target; gap {:.3e} brackets the value",
            r.gap
        )
    })
}
