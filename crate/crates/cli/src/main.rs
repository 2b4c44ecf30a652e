use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmp_spectra::harness::{sweep, sweep_csv, sweep_json, Family, SweepConfig};
use kmp_spectra::hypergraph::{parse_json, Hypergraph};
use kmp_spectra::random::WeightLaw;
use kmp_spectra::verify::{parse_rational_list, spectrum_cmd, verify, RepSpec, Suite, VerifyArgs, DEFAULT_TOL};
use kmp_spectra::weingarten::wg_table;
use kmp_spectra::{Error, Mode, Rational, Result, Scalar};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "kmp-spectra", version, about = "Spectra of hypergraph KMP Laplacians and related operators")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Rational arithmetic instead of f64.
    #[arg(long, global = true)]
    exact: bool,
    /// Float comparison tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Spectrum of one operator on a hypergraph.
    Spectrum {
        /// Hypergraph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// kmp:k | pure:k | codim1-M:k | sym-z:k | unitary-R:k,m | torinv-S:k
        #[arg(long)]
        rep: String,
    },
    /// Run a named verification suite.
    Verify {
        /// mean-field | codim1 | kmp-equiv | sn-containment | weingarten | path-example | conjectures
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Codimension-1 weights c_1,...,c_n.
        #[arg(long)]
        weights: Option<String>,
        /// Mean-field coefficients c_0,...,c_n.
        #[arg(long)]
        coeffs: Option<String>,
    },
    /// Random conjecture sweep.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Edge (or weight) inclusion probability.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// uniform01 | unit | exponential
        #[arg(long, default_value = "uniform01")]
        law: String,
        /// general | codim1
        #[arg(long, default_value = "general")]
        family: String,
    },
    /// Weingarten function table, keyed by cycle type.
    Wg {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
    },
}

fn mode(c: &Common) -> Mode {
    if c.exact {
        Mode::Exact
    } else {
        Mode::Float
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(c: &Common, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &c.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(c: &Common, v: &Value) -> Result<()> {
    if c.format == Format::Csv {
        return Err(Error::arg("this subcommand only writes JSON"));
    }
    emit(c, &serde_json::to_string_pretty(v).expect("JSON values serialize"))
}

fn spectrum_in<S: Scalar>(text: &str, rep: RepSpec) -> Result<Value> {
    let g: Hypergraph<S> = parse_json(text)?;
    let notes = g.validate().notes;
    let mut v = spectrum_cmd(&g, rep)?.to_json();
    if !notes.is_empty() {
        v["notes"] = json!(notes);
    }
    Ok(v)
}

/// Returns whether the command's own checks passed.
fn run(cli: Cli) -> Result<bool> {
    let c = &cli.common;
    if let Some(t) = c.tol {
        if !(t >= 0.0) {
            return Err(Error::arg("--tol must be non-negative"));
        }
    }
    match cli.cmd {
        Cmd::Spectrum { graph, rep } => {
            let rep: RepSpec = rep.parse()?;
            let text = read(&graph)?;
            let v = match mode(c) {
                Mode::Exact => spectrum_in::<Rational>(&text, rep)?,
                Mode::Float => spectrum_in::<f64>(&text, rep)?,
            };
            emit_json(c, &v)?;
            Ok(true)
        }
        Cmd::Verify { suite, n, k, d, k_max, graph, weights, coeffs } => {
            let suite: Suite = suite.parse()?;
            let mut a = VerifyArgs::new(mode(c));
            a.tol = c.tol.unwrap_or(DEFAULT_TOL);
            a.n = n;
            a.k = k;
            a.d = d;
            a.k_max = k_max;
            a.graph = graph.as_deref().map(read).transpose()?;
            a.weights = weights.as_deref().map(parse_rational_list).transpose()?;
            a.coeffs = coeffs.as_deref().map(parse_rational_list).transpose()?;
            let r = verify(suite, &a)?;
            emit_json(c, &r.to_json())?;
            Ok(r.pass)
        }
        Cmd::Sweep { n, k_max, trials, p, law, family } => {
            let mut cfg = SweepConfig::new(n, k_max, trials);
            cfg.seed = c.seed;
            cfg.edge_probability = p;
            cfg.weight_law = law.parse::<WeightLaw>()?;
            cfg.family = family.parse::<Family>()?;
            cfg.mode = mode(c);
            cfg.tolerance = match (c.tol, cfg.mode) {
                (Some(t), _) => t,
                (None, Mode::Exact) => 0.0,
                (None, Mode::Float) => cfg.tolerance,
            };
            let (records, summary) = sweep(&cfg)?;
            match c.format {
                Format::Json => emit(c, &serde_json::to_string_pretty(&sweep_json(&cfg, &records, &summary)).unwrap())?,
                Format::Csv => {
                    emit(c, &sweep_csv(k_max, &records)?)?;
                    eprintln!("{}", serde_json::to_string(&summary).unwrap());
                }
            }
            // Violations are findings, not failures.
            Ok(true)
        }
        Cmd::Wg { k, d } => {
            let t = wg_table(k, d)?;
            let mut m = serde_json::Map::new();
            for (ct, v) in t.classes.iter().zip(&t.values) {
                let key = ct.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                m.insert(key, json!(v.to_string()));
            }
            emit_json(c, &Value::Object(m))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(t) = cli.common.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("global pool is configured once");
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
