//! `bandcoh`: generate bands, compute cohomology dimensions, run the
//! verification suites and cobound cyclic cocycles.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on usage
//! or input errors. All output is JSON; reports are written atomically.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use bandcoh_core::band::{make_free_band, make_free_semilattice, make_rectangular};
use bandcoh_core::cohomology::{budget_from_env, hc_dim, hh_dim, reduced_exactness, BUDGET_ENV};
use bandcoh_core::io::{read_cochain, to_pretty_json, BandSpec, DecompositionSummary, WitnessFile};
use bandcoh_core::normalize::cobound_cyclic;
use bandcoh_core::verify::{run_suite, Status, Suite, SuiteReport, VerifyConfig};
use bandcoh_core::{Band, BandAlgebra, Rat};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bandcoh", version, about = "Hochschild and cyclic cohomology of finite band algebras")]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on sparse matrix entries; overrides the BANDCOH_BUDGET variable.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<u128>,
    /// Include wall-clock timings in reports (makes them run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a band spec for a generated band.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Compute Hochschild and cyclic cohomology dimensions.
    Analyze {
        #[arg(long)]
        band: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Variant::Both)]
        variant: Variant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        band: PathBuf,
        /// Random cases per check when a space is too large to enumerate.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a cyclic cocycle as a trace cocycle plus a coboundary.
    Cobound {
        #[arg(long)]
        band: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Family {
    FreeBand(FamilyArgs),
    Rectangular(RectArgs),
    FreeSemilattice(FamilyArgs),
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RectArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Simplicial,
    Cyclic,
    Both,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: bandcoh_core::Error| e.to_string())
}

fn parse_budget(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(b) => Ok(b),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Input(anyhow::Error),
    Verification(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let budget = cli.budget.unwrap_or_else(budget_from_env);
    match &cli.command {
        Command::Gen { family } => gen(family),
        Command::Analyze { band, max_degree, variant, out } => {
            let (band, alg) = load_band(band)?;
            let report = analyze(&band, &alg, *max_degree, *variant, budget, cli.timings);
            emit(out.as_deref(), &to_pretty_json(&report))?;
            Ok(())
        }
        Command::Verify { suite, band, samples, max_degree, out } => {
            let (_, alg) = load_band(band)?;
            let cfg = VerifyConfig { samples: *samples, max_degree: *max_degree, budget, ..VerifyConfig::default() };
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let start = Instant::now();
            let report = run_suite(*suite, &alg, &cfg, &mut rng);
            let elapsed = start.elapsed().as_millis();
            for c in &report.checks {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail if c.required => "FAIL",
                    Status::Fail => "fail (informational)",
                    Status::Skipped => "skipped",
                };
                eprintln!("{:<60} {status} ({} cases)", c.name, c.cases);
            }
            let wrapped = VerifyReport { seed: cli.seed, report: &report, timings_ms: cli.timings.then_some(elapsed) };
            emit(out.as_deref(), &to_pretty_json(&wrapped))?;
            if report.passed() {
                Ok(())
            } else {
                let failed: Vec<_> =
                    report.checks.iter().filter(|c| c.required && c.status == Status::Fail).map(|c| c.name).collect();
                Err(Failure::Verification(failed.join(", ")))
            }
        }
        Command::Cobound { band, cocycle, out } => {
            let (_, alg) = load_band(band)?;
            let text = read(cocycle)?;
            let psi = read_cochain(&text, &alg).with_context(|| format!("reading {}", cocycle.display()))?;
            let witness = cobound_cyclic(&psi, &alg).context("input is not a cobounded cyclic cocycle")?;
            let file = WitnessFile::new(&psi, &witness, &alg).map_err(|e| Failure::Verification(e.to_string()))?;
            emit(out.as_deref(), &to_pretty_json(&file))?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    seed: u64,
    #[serde(flatten)]
    report: &'a SuiteReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<u128>,
}

fn gen(family: &Family) -> Result<(), Failure> {
    let (band, out) = match family {
        Family::FreeBand(a) => (make_free_band(a.k), &a.out),
        Family::FreeSemilattice(a) => (make_free_semilattice(a.k), &a.out),
        Family::Rectangular(a) => (make_rectangular(a.p, a.q), &a.out),
    };
    let band = band.map_err(anyhow::Error::from)?;
    let alg = BandAlgebra::new(band.clone()).map_err(anyhow::Error::from)?;
    emit(out.as_deref(), &to_pretty_json(&BandSpec::from_band(&band, alg.decomposition())))?;
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_band(path: &Path) -> anyhow::Result<(Band, BandAlgebra)> {
    let text = read(path)?;
    let band = BandSpec::parse(&text)
        .and_then(|spec| spec.to_band())
        .with_context(|| format!("invalid band spec {}", path.display()))?;
    let alg = BandAlgebra::new(band.clone()).with_context(|| format!("cannot decompose {}", path.display()))?;
    Ok((band, alg))
}

/// Writes to `path` via a sibling temporary file and a rename, or to stdout.
fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    let Some(path) = path else {
        print!("{text}");
        return Ok(());
    };
    let name = path.file_name().ok_or_else(|| anyhow!("{} is not a file path", path.display()))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, text).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot move {} into place", tmp.display()))?;
    Ok(())
}

#[derive(Serialize)]
#[serde(untagged)]
enum Entry<T> {
    Value(T),
    Skipped { skipped: String },
}

#[derive(Serialize, Clone, Copy)]
struct ExactnessEntry {
    zr: usize,
    br: usize,
}

#[derive(Serialize)]
struct BandSummary {
    size: usize,
    component_sizes: Vec<usize>,
    decomposition: DecompositionSummary,
}

#[derive(Serialize)]
struct AnalyzeReport {
    band: BandSummary,
    #[serde(rename = "L_size")]
    l_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    hh: Option<BTreeMap<usize, Entry<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hc: Option<BTreeMap<usize, Entry<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exactness: Option<BTreeMap<usize, Entry<ExactnessEntry>>>,
    /// Budget settings the dimensions were computed under.
    budget: String,
    budget_env: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings_ms: Option<BTreeMap<String, u128>>,
}

#[derive(Clone, Copy)]
enum Job {
    Hh(usize),
    Hc(usize),
    Exactness(usize),
}

enum Outcome {
    Dim(usize),
    Exact(ExactnessEntry),
}

impl Job {
    fn key(self) -> String {
        match self {
            Job::Hh(n) => format!("hh.{n}"),
            Job::Hc(n) => format!("hc.{n}"),
            Job::Exactness(n) => format!("exactness.{n}"),
        }
    }

    fn run(self, alg: &BandAlgebra, budget: u128) -> bandcoh_core::Result<Outcome> {
        Ok(match self {
            Job::Hh(n) => Outcome::Dim(hh_dim::<Rat>(alg, n, budget)?),
            Job::Hc(n) => Outcome::Dim(hc_dim::<Rat>(alg, n, budget)?),
            Job::Exactness(n) => {
                let d = reduced_exactness::<Rat>(alg, n, budget)?;
                Outcome::Exact(ExactnessEntry { zr: d.zr, br: d.br })
            }
        })
    }
}

fn analyze(band: &Band, alg: &BandAlgebra, max_degree: usize, variant: Variant, budget: u128, timings: bool) -> AnalyzeReport {
    let simplicial = variant != Variant::Cyclic;
    let cyclic = variant != Variant::Simplicial;
    let mut jobs = Vec::new();
    for n in 0..=max_degree {
        if cyclic {
            jobs.push(Job::Hc(n));
        }
        if simplicial && n >= 1 {
            jobs.push(Job::Hh(n));
            jobs.push(Job::Exactness(n));
        }
    }
    // independent jobs; results are gathered in job order
    let results: Vec<(Job, bandcoh_core::Result<Outcome>, u128)> = jobs
        .par_iter()
        .map(|&job| {
            let start = Instant::now();
            let r = job.run(alg, budget);
            (job, r, start.elapsed().as_millis())
        })
        .collect();

    let mut hh = BTreeMap::new();
    let mut hc = BTreeMap::new();
    let mut exactness = BTreeMap::new();
    let mut times = BTreeMap::new();
    for (job, result, ms) in results {
        times.insert(job.key(), ms);
        match (job, result) {
            (Job::Hh(n), Ok(Outcome::Dim(d))) => {
                hh.insert(n, Entry::Value(d));
            }
            (Job::Hc(n), Ok(Outcome::Dim(d))) => {
                hc.insert(n, Entry::Value(d));
            }
            (Job::Exactness(n), Ok(Outcome::Exact(e))) => {
                exactness.insert(n, Entry::Value(e));
            }
            (job, Ok(_)) => unreachable!("job {} produced the wrong outcome kind", job.key()),
            (job, Err(e)) => {
                let skipped = Entry::Skipped { skipped: e.to_string() };
                match job {
                    Job::Hh(n) => hh.insert(n, skipped),
                    Job::Hc(n) => hc.insert(n, skipped),
                    Job::Exactness(n) => {
                        exactness.insert(n, Entry::Skipped { skipped: e.to_string() });
                        None
                    }
                };
            }
        }
    }
    let dec = alg.decomposition();
    AnalyzeReport {
        band: BandSummary {
            size: band.size(),
            component_sizes: dec.components().iter().map(Vec::len).collect(),
            decomposition: DecompositionSummary::new(dec),
        },
        l_size: alg.semilattice_size(),
        hh: simplicial.then_some(hh),
        hc: cyclic.then_some(hc),
        exactness: simplicial.then_some(exactness),
        budget: budget.to_string(),
        budget_env: BUDGET_ENV,
        timings_ms: timings.then_some(times),
    }
}
