//! Command-line front end. `run` returns the process exit code:
//! 0 on success, 1 for usage or parse errors, 2 for numerical or domain errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::citest::{empirical_covariance, fisher_z_from_covariance, fisher_z_test, DEFAULT_ALPHA};
use crate::config::{load_dag, load_sem, load_sweep, SweepPlan};
use crate::dataset::{format_value, read_covariance_csv, write_covariance_csv, Dataset};
use crate::dependence::{cimd_lim, enumerate_tests, DEFAULT_CUTOFF};
use crate::error::{Error, Result};
use crate::faithfulness::audit;
use crate::fscid::{
    run_fs_cid, FsCidReport, ReplicateSource, Resampling, DEFAULT_REPLICATES,
    DEFAULT_SUBSAMPLE_SIZE, DEFAULT_SYNTHETIC_SIZE,
};
use crate::gaussian::{CiTest, LabeledCovariance};
use crate::mle::ci_projection_via_mle;
use crate::projection::project_ci;
use crate::sem::{three_node_preset, LinearSem};
use crate::sweep::{run_grid, run_pair_matrix, PairInput, PairMeasure, FIG1_STEPS, SURFACE_STEPS};

#[derive(Parser, Debug)]
#[command(name = "cimd", version, about = "Meta-dependence between conditional-independence tests")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Exactly one source distribution.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Covariance CSV (header row of labels, then the matrix).
    #[arg(long)]
    covariance: Option<PathBuf>,
    /// SEM configuration file.
    #[arg(long)]
    sem: Option<PathBuf>,
    /// Standardized three-node model `alpha1,alpha2,beta`.
    #[arg(long, value_name = "A1,A2,B", allow_hyphen_values = true)]
    preset: Option<String>,
    /// Data CSV; its empirical covariance stands in for the distribution.
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a dataset from an SEM.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fisher-Z test of one conditional independence.
    Citest {
        #[command(flatten)]
        input: InputArgs,
        /// `A,B|C1,C2`.
        #[arg(long)]
        test: CiTest,
        /// Sample size when the input is a covariance or a model.
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Information projection onto one conditional independence.
    Project {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        test: CiTest,
        /// With `--data`, compose per-variable maximum-likelihood fits instead.
        #[arg(long)]
        mle: bool,
        /// Projected covariance CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CIMD of `t1` given a projection onto `t2`.
    Cimd {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        t1: CiTest,
        #[arg(long)]
        t2: CiTest,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: f64,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-sample CI dependence from replicated Fisher-Z tests.
    Fscid {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        t1: CiTest,
        #[arg(long)]
        t2: CiTest,
        #[arg(long, default_value_t = DEFAULT_REPLICATES)]
        replicates: usize,
        /// Replicate size (default 20 for models, 50 for data).
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bootstrap with replacement when subsampling data.
        #[arg(long)]
        with_replacement: bool,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter-grid sweep over the three-node model.
    Sweep {
        /// Sweep specification file.
        #[arg(long, conflicts_with = "bundle")]
        spec: Option<PathBuf>,
        #[arg(long, value_enum)]
        bundle: Option<Bundle>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cutoff: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Measure over all ordered pairs of enumerated tests.
    Pairs {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = PairKind::Cimd)]
        measure: PairKind,
        #[arg(long, default_value_t = 1)]
        max_cond: usize,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: f64,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_REPLICATES)]
        replicates: usize,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Long-form CSV (stdout if omitted); a `.meta` sidecar is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// λ-strong faithfulness audit against a DAG.
    Faithfulness {
        #[command(flatten)]
        input: InputArgs,
        /// DAG file with one `parent -> child` per line.
        #[arg(long)]
        dag: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        max_cond: usize,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Bundle {
    Fig1,
    AppendixA,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
pub enum PairKind {
    Cimd,
    CimdLim,
    FsCid,
}

enum Source {
    Covariance(LabeledCovariance),
    Sem(LinearSem),
    Data(Dataset),
}

impl Source {
    fn load(args: &InputArgs) -> Result<Self> {
        if let Some(p) = &args.covariance {
            return Ok(Source::Covariance(read_covariance_csv(File::open(p)?)?));
        }
        if let Some(p) = &args.sem {
            return Ok(Source::Sem(load_sem(p)?));
        }
        if let Some(p) = &args.data {
            return Ok(Source::Data(Dataset::from_csv_path(p)?));
        }
        let text = args.preset.as_deref().unwrap_or_default();
        let v: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidInput(format!("preset `{text}` must be alpha1,alpha2,beta")))?;
        let [a1, a2, b] = v[..] else {
            return Err(Error::InvalidInput(format!("preset `{text}` must be alpha1,alpha2,beta")));
        };
        Ok(Source::Sem(three_node_preset(a1, a2, b)?))
    }

    fn covariance(&self) -> Result<LabeledCovariance> {
        match self {
            Source::Covariance(c) => Ok(c.clone()),
            Source::Sem(s) => Ok(s.covariance()),
            Source::Data(d) => empirical_covariance(d),
        }
    }

    fn replicates(self, size: Option<usize>, count: usize, seed: u64) -> Result<ReplicateSource> {
        match self {
            Source::Sem(s) => ReplicateSource::from_sem(s, size.unwrap_or(DEFAULT_SYNTHETIC_SIZE), count, seed),
            Source::Data(d) => ReplicateSource::from_data(d, size.unwrap_or(DEFAULT_SUBSAMPLE_SIZE), count, seed),
            Source::Covariance(_) => Err(Error::InvalidInput(
                "this measure needs --data or a model, not --covariance".into(),
            )),
        }
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_rows(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_meta(path: &Path, seed: u64, spec_hash: &str, flags: &[String]) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "version = {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(f, "seed = {seed}")?;
    writeln!(f, "spec_sha256 = {spec_hash}")?;
    writeln!(f, "flags = {}", flags.join(" "))?;
    f.flush()?;
    Ok(())
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let flags: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli.command, &flags) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(command: Command, flags: &[String]) -> Result<()> {
    match command {
        Command::Simulate { input, n, seed, out } => match Source::load(&input)? {
            Source::Sem(sem) => sem.sample(n, seed)?.write_csv(sink(out.as_deref())?),
            _ => Err(Error::InvalidInput("simulate needs --sem or --preset".into())),
        },

        Command::Citest { input, test, n, alpha, csv, out } => {
            let outcome = match (Source::load(&input)?, n) {
                (Source::Data(d), None) => fisher_z_test(&d, &test, alpha)?,
                (Source::Data(_), Some(_)) => {
                    return Err(Error::InvalidInput("-n is implied by --data".into()))
                }
                (src, Some(n)) => fisher_z_from_covariance(&src.covariance()?, n, &test, alpha)?,
                (_, None) => return Err(Error::InvalidInput("-n is required without --data".into())),
            };
            let row = vec![
                outcome.test.to_string(),
                format_value(outcome.r),
                format_value(outcome.z_stat),
                outcome.n_effective.to_string(),
                outcome.reject.to_string(),
                format_value(alpha),
            ];
            if csv || out.is_some() {
                write_rows(out.as_deref(), &["test", "r", "z", "n_effective", "reject", "alpha"], &[row])
            } else {
                println!("test         {}", outcome.test);
                println!("r            {:.6}", outcome.r);
                println!("z            {:.6}", outcome.z_stat);
                println!("n_effective  {}", outcome.n_effective);
                println!("reject       {}", outcome.reject);
                Ok(())
            }
        }

        Command::Project { input, test, mle, out } => {
            let src = Source::load(&input)?;
            let projected = match (&src, mle) {
                (Source::Data(d), true) => ci_projection_via_mle(d, &test)?,
                (_, true) => return Err(Error::InvalidInput("--mle needs --data".into())),
                _ => {
                    let r = project_ci(&src.covariance()?, &test)?;
                    eprintln!("divergence {} nats", format_value(r.divergence));
                    r.projected
                }
            };
            write_covariance_csv(&projected, sink(out.as_deref())?)
        }

        Command::Cimd { input, t1, t2, cutoff, csv, out } => {
            let v = cimd_lim(&Source::load(&input)?.covariance()?, &t1, &t2, cutoff)?;
            if csv || out.is_some() {
                let row = vec![
                    v.t1.to_string(),
                    v.t2.to_string(),
                    format_value(v.raw),
                    format_value(v.limited),
                    format_value(v.i_p_t1),
                    format_value(v.i_proj_t1),
                    format_value(v.i_p_t2),
                ];
                write_rows(
                    out.as_deref(),
                    &["t1", "t2", "cimd", "cimd_lim", "i_p_t1", "i_proj_t1", "i_p_t2"],
                    &[row],
                )
            } else {
                println!("I_P(t1)        {:.6}", v.i_p_t1);
                println!("I_P(t2)        {:.6}", v.i_p_t2);
                println!("I_proj(t1)     {:.6}", v.i_proj_t1);
                println!("CIMD           {:.6}", v.raw);
                println!("CIMD-lim       {:.6}", v.limited);
                Ok(())
            }
        }

        Command::Fscid { input, t1, t2, replicates, size, alpha, seed, with_replacement, csv, out } => {
            let mut source = Source::load(&input)?.replicates(size, replicates, seed)?;
            if with_replacement {
                source = source.with_resampling(Resampling::WithReplacement);
            }
            let report = run_fs_cid(&source, &t1, &t2, alpha)?;
            if csv || out.is_some() {
                write_rows(out.as_deref(), &FsCidReport::CSV_HEADER, &[report.csv_record()])
            } else {
                print!("{report}");
                Ok(())
            }
        }

        Command::Sweep { spec, bundle, steps, replicates, seed, cutoff, alpha, out } => {
            let (mut plan, hash) = match (&spec, bundle) {
                (Some(p), _) => {
                    if steps.is_some() {
                        return Err(Error::InvalidInput("--steps applies to --bundle only".into()));
                    }
                    (load_sweep(p)?, sha256_hex(&std::fs::read(p)?))
                }
                (None, Some(b)) => {
                    let plan = match b {
                        Bundle::Fig1 => SweepPlan::fig1(steps.unwrap_or(FIG1_STEPS)),
                        Bundle::AppendixA => SweepPlan::appendix_a(steps.unwrap_or(SURFACE_STEPS)),
                    };
                    let hash = sha256_hex(format!("{plan:?}").as_bytes());
                    (plan, hash)
                }
                (None, None) => return Err(Error::InvalidInput("sweep needs --spec or --bundle".into())),
            };
            for (_, g) in &mut plan.grids {
                if let Some(r) = replicates {
                    g.replication.count = r;
                }
                if let Some(c) = cutoff {
                    g.cutoff = c;
                }
                if let Some(a) = alpha {
                    g.replication.alpha = a;
                }
            }
            if let Some(s) = seed {
                plan.set_seed(s);
            }
            std::fs::create_dir_all(&out)?;
            for (name, g) in &plan.grids {
                let grid = run_grid(g)?;
                let path = out.join(format!("{name}.csv"));
                grid.write_csv(BufWriter::new(File::create(&path)?))?;
                eprintln!("wrote {}", path.display());
            }
            let seed = plan.grids.first().map(|(_, g)| g.replication.seed).unwrap_or(0);
            write_meta(&out.join("sweep.meta"), seed, &hash, flags)
        }

        Command::Pairs { input, measure, max_cond, cutoff, alpha, replicates, size, seed, out } => {
            let src = Source::load(&input)?;
            let labels = match &src {
                Source::Covariance(c) => c.labels().to_vec(),
                Source::Sem(s) => s.variables().to_vec(),
                Source::Data(d) => d.columns().to_vec(),
            };
            let tests = enumerate_tests(&labels, max_cond)?;
            let (input, m) = match measure {
                PairKind::FsCid => (
                    PairInput::Replicates(src.replicates(size, replicates, seed)?),
                    PairMeasure::FsCid { alpha },
                ),
                kind => {
                    let m = if kind == PairKind::Cimd {
                        PairMeasure::Cimd
                    } else {
                        PairMeasure::CimdLim { cutoff }
                    };
                    (PairInput::Covariance(src.covariance()?), m)
                }
            };
            let matrix = run_pair_matrix(&input, &tests, m)?;
            matrix.write_csv(sink(out.as_deref())?)?;
            if let Some(p) = &out {
                let mut meta = p.clone().into_os_string();
                meta.push(".meta");
                let hash = sha256_hex(format!("{input:?}").as_bytes());
                write_meta(Path::new(&meta), seed, &hash, flags)?;
            }
            Ok(())
        }

        Command::Faithfulness { input, dag, lambda, max_cond, csv, out } => {
            let dag = load_dag(&dag)?;
            let violations = audit(&Source::load(&input)?.covariance()?, &dag, lambda, max_cond)?;
            if csv || out.is_some() {
                let rows: Vec<Vec<String>> = violations
                    .iter()
                    .map(|v| vec![v.test.to_string(), format_value(v.partial_correlation)])
                    .collect();
                write_rows(out.as_deref(), &["test", "partial_correlation"], &rows)
            } else {
                if violations.is_empty() {
                    println!("no violations at lambda = {lambda}");
                }
                for v in &violations {
                    println!("{:<16} rho = {:+.6}", v.test.to_string(), v.partial_correlation);
                }
                Ok(())
            }
        }
    }
}
