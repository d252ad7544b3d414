//! Command-line front end. `run_command` parses arguments, dispatches to the
//! library and writes a text or JSON report.
//!
//! Exit codes: 0 when the command completed (searches that find witnesses
//! included), 1 for usage and parse errors, 2 when an invariant that must
//! hold on the chosen backend fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::expr::{parse_element, parse_group_element, parse_group_set};
use crate::group::{Backend, GroupElement, Subgroup};
use crate::report::{schema_version, SCHEMA_VERSION};
use crate::ring::{gradation_diagnostics, Grading, RingElement, RingModel};
use crate::search::{
    hierarchy_suite, resolve_model, resolve_window, verify_identity, SearchError, SearchKind, SearchTask, WindowSpec,
};
use crate::structure::{coarsen, delta_probe, is_central, prime_witness, support_subgroup, QuotientGrading};
use crate::up::{find_non_up_square_set, unique_products, UpError};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (report schema ", schema_version!(), ")");

#[derive(Debug, Parser)]
#[command(name = "gradlab", version = VERSION, about = "Exact computations in group rings and graded rings")]
struct Cli {
    /// Emit a JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Worker thread cap for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// groupring, quaternion (alias twisted) or weyl.
    #[arg(long, default_value = "groupring")]
    model: String,
    /// Group backend: z, z2, z3, f1..f4, heisenberg, klein, promislow, c<n>, v4.
    #[arg(long)]
    group: Option<String>,
    /// Coefficients: a prime p, Z or Q.
    #[arg(long, default_value = "2")]
    field: String,
}

impl ModelArgs {
    fn resolve(&self) -> Result<Arc<RingModel>, CliError> {
        Ok(resolve_model(&self.model, self.group.as_deref(), &self.field)?)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Unique products of A*B.
    UpCheck {
        #[arg(long)]
        group: String,
        #[arg(long)]
        set_a: String,
        #[arg(long)]
        set_b: String,
    },
    /// Random search for a set S with no unique product in S*S.
    FindNonUp {
        #[arg(long)]
        group: String,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        attempts: u64,
    },
    /// Bounded-support search for units, zero-divisors, idempotents or nilpotents.
    Search(SearchArgs),
    /// Recompute xy (and yx) and check the identity for the given kind.
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        kind: SearchKind,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: Option<String>,
    },
    /// Conjugacy probe: does g have finitely many conjugates.
    Delta {
        #[arg(long)]
        group: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Centrality of x, its support subgroup and probes of its support.
    Central {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Split x into components graded by G/N.
    Coarsen {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        x: String,
        /// center, whole, trivial, klein-a, translations, cyclic:<word>,
        /// generated:<words> or lattice:(2,0),(0,3).
        #[arg(long)]
        subgroup: String,
    },
    /// Find g with x u_g y != 0.
    PrimeWitness {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Sample homogeneous products and check the grading.
    Diagnostics {
        #[command(flatten)]
        model: ModelArgs,
        /// Use the trivial grading instead of the canonical one.
        #[arg(long)]
        trivial_grading: bool,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Read the task from a TOML job file instead of flags.
    #[arg(long, conflicts_with_all = ["group", "kind", "window"])]
    job: Option<PathBuf>,
    #[arg(long, default_value = "groupring")]
    model: String,
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value = "2")]
    field: String,
    #[arg(long, required_unless_present_any = ["job", "hierarchy"])]
    kind: Option<SearchKind>,
    /// `ball:<r>` or a comma-separated list of group elements.
    #[arg(long, required_unless_present = "job")]
    window: Option<String>,
    #[arg(long)]
    partner_window: Option<String>,
    /// Report only non-homogeneous units.
    #[arg(long)]
    non_homogeneous: bool,
    #[arg(long)]
    central_only: bool,
    /// Over Q, coefficients range over +-1..=+-bound.
    #[arg(long)]
    coefficient_bound: Option<u32>,
    #[arg(long)]
    time_budget_ms: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// auto, generic or bitset.
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    window_cap: Option<usize>,
    /// Run all four searches and check the implication chain between them.
    #[arg(long)]
    hierarchy: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invariant(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invariant(m) => m,
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::UnsoundWitness(_) | SearchError::HierarchyViolation(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<UpError> for CliError {
    fn from(e: UpError) -> Self {
        match e {
            UpError::TheoremViolation { .. } => CliError::Invariant(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// A finished command: its JSON result, its text rendering and an alarm
/// that turns into exit code 2 after the report is written.
struct Outcome {
    result: Value,
    text: String,
    alarm: Option<String>,
}

impl Outcome {
    fn new(result: impl Serialize, text: String) -> Self {
        Outcome { result: serde_json::to_value(result).expect("reports serialize"), text, alarm: None }
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let start = Instant::now();
    let name = command_name(&cli.command);
    match dispatch(&cli) {
        Ok(outcome) => {
            let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            if cli.json {
                let mut doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "result": outcome.result,
                });
                if cli.timing {
                    doc["elapsed_ms"] = json!(elapsed_ms);
                }
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                let _ = write!(out, "{}", outcome.text);
                if cli.timing {
                    let _ = writeln!(out, "elapsed: {elapsed_ms:.1} ms");
                }
            }
            match outcome.alarm {
                Some(a) => {
                    let _ = writeln!(err, "invariant violation: {a}");
                    2
                }
                None => 0,
            }
        }
        Err(e) => {
            let prefix = if e.code() == 2 { "invariant violation" } else { "error" };
            let _ = writeln!(err, "{prefix}: {}", e.message());
            e.code()
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::UpCheck { .. } => "up-check",
        Command::FindNonUp { .. } => "find-non-up",
        Command::Search(a) if a.hierarchy => "hierarchy",
        Command::Search(_) => "search",
        Command::Verify { .. } => "verify",
        Command::Delta { .. } => "delta",
        Command::Central { .. } => "central",
        Command::Coarsen { .. } => "coarsen",
        Command::PrimeWitness { .. } => "prime-witness",
        Command::Diagnostics { .. } => "diagnostics",
    }
}

fn backend(name: &str) -> Result<Backend, CliError> {
    name.parse().map_err(usage)
}

fn element(src: &str, model: &Arc<RingModel>) -> Result<RingElement, CliError> {
    parse_element(src, model).map_err(|e| usage(format!("in `{src}`: {e}")))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::UpCheck { group, set_a, set_b } => up_check(backend(group)?, set_a, set_b),
        Command::FindNonUp { group, size, radius, seed, attempts } => {
            let b = backend(group)?;
            let run = || find_non_up_square_set(b, *size, *radius, *seed, *attempts);
            let r = match cli.jobs {
                Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().map_err(usage)?.install(run),
                None => run(),
            }?;
            let text = match &r.witness {
                Some(s) => format!("found at attempt {}: {}\n", r.found_at.unwrap(), join(s)),
                None => format!("not found after {} attempts\n", r.attempts),
            };
            Ok(Outcome::new(&r, text))
        }
        Command::Search(args) => search_command(args, cli.jobs),
        Command::Verify { model, kind, x, y } => {
            let m = model.resolve()?;
            let x = element(x, &m)?;
            let y = y.as_deref().map(|y| element(y, &m)).transpose()?;
            let v = verify_identity(&x, y.as_ref(), *kind)?;
            let mut text = format!("{}: {}\nproduct: {}\n", kind, v.holds, v.product);
            if let Some(r) = &v.reverse_product {
                let _ = writeln!(text, "reverse product: {r}");
            }
            Ok(Outcome::new(&v, text))
        }
        Command::Delta { group, element, radius } => {
            let b = backend(group)?;
            let g = parse_group_element(element, b).map_err(usage)?;
            let v = delta_probe(&g, *radius);
            let text = format!(
                "{}: {} ({} distinct conjugates over ball({}))\n",
                v.element,
                serde_json::to_value(v.verdict).unwrap().as_str().unwrap(),
                v.conjugates,
                v.radius
            );
            Ok(Outcome::new(&v, text))
        }
        Command::Central { model, x, radius } => central(&model.resolve()?, x, *radius),
        Command::Coarsen { model, x, subgroup } => {
            let m = model.resolve()?;
            let b = m.backend().ok_or_else(|| usage("coarsen needs a group-graded model"))?;
            let x = element(x, &m)?;
            let q = QuotientGrading::new(parse_subgroup(subgroup, b)?).map_err(usage)?;
            let parts = coarsen(&x, &q).map_err(usage)?;
            let mut text = String::new();
            for p in &parts {
                let _ = writeln!(text, "{:?} [{}]: {}", p.coordinates, p.coset, p.part);
            }
            Ok(Outcome::new(json!({ "element": x.to_string(), "subgroup": subgroup, "parts": parts }), text))
        }
        Command::PrimeWitness { model, x, y, radius } => {
            let m = model.resolve()?;
            let x = element(x, &m)?;
            let y = element(y, &m)?;
            let w = prime_witness(&x, &y, *radius).map_err(usage)?;
            let text = match &w.witness {
                Some(g) => format!("x*{g}*y != 0 (checked {} elements)\n", w.checked),
                None => format!("x*g*y = 0 for all g in ball({})\n", w.radius),
            };
            let mut o = Outcome::new(&w, text);
            let b = m.grading_backend();
            if w.witness.is_none() && b.is_torsion_free() && m.grading() == Grading::Canonical {
                o.alarm = Some(format!("no primeness witness on torsion-free {b} within ball({radius})"));
            }
            Ok(o)
        }
        Command::Diagnostics { model, trivial_grading, samples, radius, seed } => {
            let mut m = model.resolve()?;
            if *trivial_grading {
                m = m.with_trivial_grading();
            }
            let r = gradation_diagnostics(&m, *samples, *radius, *seed);
            let text = format!(
                "{}: {} samples, {} zero products, {} multiplicativity failures, {} nondegeneracy alarms\n",
                r.model,
                r.samples,
                r.zero_products.len(),
                r.multiplicativity_failures.len(),
                r.nondegeneracy_alarms.len()
            );
            let mut o = Outcome::new(&r, text);
            if m.grading() == Grading::Canonical && !r.is_clean() {
                o.alarm = Some("canonical grading failed its diagnostics".into());
            }
            Ok(o)
        }
    }
}

fn join(set: &[GroupElement]) -> String {
    set.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
}

fn up_check(b: Backend, set_a: &str, set_b: &str) -> Result<Outcome, CliError> {
    let a = parse_group_set(set_a, b).map_err(usage)?;
    let bb = parse_group_set(set_b, b).map_err(usage)?;
    let r = unique_products(&a, &bb)?;
    let mut text = format!("{} unique products of {} products; two_up = {}\n", r.unique.len(), r.total_products, r.two_up);
    for u in &r.unique {
        let _ = writeln!(text, "  {} = {} * {}", u.product, u.left, u.right);
    }
    let mut o = Outcome::new(&r, text);
    if b.is_unique_product() && !r.two_up {
        o.alarm = Some(format!("fewer than two unique products on {b}"));
    }
    Ok(o)
}

fn central(m: &Arc<RingModel>, src: &str, radius: usize) -> Result<Outcome, CliError> {
    let x = element(src, m)?;
    let c = is_central(&x);
    let (sub, probes) = match m.backend() {
        Some(_) => {
            let sub = support_subgroup(&x).map_err(usage)?;
            let probes: Vec<_> = x.group_support().iter().map(|g| delta_probe(g, radius)).collect();
            (Some(sub), probes)
        }
        None => (None, Vec::new()),
    };
    let mut text = format!("{x}: central = {c}\n");
    if let Some(s) = &sub {
        let _ = writeln!(text, "support generates <{}>", join(&s.generators));
        if let (Some(basis), Some(rank)) = (&s.lattice_basis, s.rank) {
            let _ = writeln!(text, "lattice basis {basis:?}, rank {rank}");
        }
    }
    for p in &probes {
        let _ = writeln!(text, "  {}: {}", p.element, serde_json::to_value(p.verdict).unwrap().as_str().unwrap());
    }
    let mut o = Outcome::new(json!({ "element": x.to_string(), "central": c, "support_subgroup": sub, "support_probes": probes }), text);
    // central elements of a group ring are supported on finite conjugacy classes
    if c && m.grading() == Grading::Canonical {
        if let Some(p) = probes.iter().find(|p| p.verdict == crate::structure::Membership::NonMember) {
            o.alarm = Some(format!("central element has {} in its support, which has infinitely many conjugates", p.element));
        }
    }
    Ok(o)
}

/// Parses `center`, `whole`, `trivial`, `klein-a`, `translations`,
/// `cyclic:<word>`, `generated:<words>` or `lattice:(2,0),(0,3)`.
fn parse_subgroup(spec: &str, b: Backend) -> Result<Subgroup, CliError> {
    let spec = spec.trim();
    let (head, tail) = spec.split_once(':').unwrap_or((spec, ""));
    match head {
        "center" => Ok(Subgroup::center(b)),
        "whole" => Ok(Subgroup::whole(b)),
        "trivial" => Ok(Subgroup::trivial(b)),
        "klein-a" if b == Backend::Klein => Ok(Subgroup::klein_fiber()),
        "translations" if b == Backend::Promislow => Ok(Subgroup::promislow_translations()),
        "cyclic" => Ok(Subgroup::cyclic(parse_group_element(tail, b).map_err(usage)?)),
        "generated" => Subgroup::generated(b, &parse_group_set(tail, b).map_err(usage)?).map_err(usage),
        "lattice" => {
            let vs: Vec<Vec<i64>> = parse_group_set(tail, b)
                .map_err(usage)?
                .iter()
                .map(|g| g.as_vector().ok_or_else(|| usage("lattice subgroups need a z^n backend")))
                .collect::<Result<_, _>>()?;
            Subgroup::lattice(b, &vs).map_err(usage)
        }
        _ => Err(usage(format!("unknown subgroup `{spec}` for {b}"))),
    }
}

fn search_command(args: &SearchArgs, jobs: Option<usize>) -> Result<Outcome, CliError> {
    let mut task = match &args.job {
        Some(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            toml::from_str::<SearchTask>(&src).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => SearchTask {
            model: args.model.clone(),
            group: args.group.clone(),
            field: args.field.clone(),
            kind: args.kind.unwrap_or(SearchKind::Unit),
            window: WindowSpec::Text(args.window.clone().unwrap_or_default()),
            partner_window: args.partner_window.clone().map(WindowSpec::Text),
            central_only: args.central_only,
            require_non_homogeneous: args.non_homogeneous,
            coefficient_bound: args.coefficient_bound,
            time_budget_ms: args.time_budget_ms,
            seed: args.seed,
            jobs: None,
            engine: args.engine.as_deref().map(str::parse).transpose().map_err(usage)?,
            window_cap: args.window_cap,
        },
    };
    if jobs.is_some() {
        task.jobs = jobs;
    }
    if args.hierarchy {
        let model = task.model()?;
        let b = model.backend().ok_or(SearchError::UnsupportedModel(model.kind_name()))?;
        let window = resolve_window(&task.window, b)?;
        let opts = task.options();
        let run = || hierarchy_suite(&model, &window, &opts);
        let r = match task.jobs {
            Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().map_err(usage)?.install(run),
            None => run(),
        }?;
        let mut text = format!("{} over {} window elements\n", r.model, r.window.len());
        for s in &r.searches {
            let _ = writeln!(text, "  {}: {} witnesses, exhausted = {}", s.kind, s.witness_count, s.exhausted);
        }
        let _ = writeln!(text, "consistent: {}", r.consistent);
        if let Some(f) = &r.flag {
            let _ = writeln!(text, "{f}");
        }
        return Ok(Outcome::new(&r, text));
    }
    let r = task.run()?;
    let mut text = format!(
        "{} {} search over {} window elements, {} partner elements\n",
        r.task.model,
        r.task.kind,
        r.task.window.len(),
        r.task.partner_window.len()
    );
    for w in &r.witnesses {
        match &w.y {
            Some(y) => {
                let _ = writeln!(text, "  x = {}, y = {}", w.x, y);
            }
            None => {
                let _ = writeln!(text, "  x = {}", w.x);
            }
        }
    }
    if r.witness_count > r.witnesses.len() as u64 {
        let _ = writeln!(text, "  ({} more not listed)", r.witness_count - r.witnesses.len() as u64);
    }
    let _ = writeln!(
        text,
        "{} witnesses; {}",
        r.witness_count,
        if r.exhausted { "window exhausted" } else { "window not exhausted (time budget)" }
    );
    Ok(Outcome::new(&r, text))
}
