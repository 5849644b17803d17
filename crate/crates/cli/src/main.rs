//! `h2v`: evaluate holomorphic Hermite polynomials, run the verification
//! suites, export grids, rules and exact polynomials.

mod literal;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use holoherm::eval::{eval_hermite, Alpha, ComplexPoint, EvalMethod};
use holoherm::exact::{hermite_exact_direct, DegreePair, PolyJson};
use holoherm::kernels::{kernel_closed, KernelArgs};
use holoherm::quadrature::gauss_hermite_rule;
use holoherm::report::{ComplexValue, Tolerance};
use holoherm::verify::output::{write_atomic, write_reports};
use holoherm::verify::{run_suite, Suite, SuiteConfig};

use literal::{parse_complex, parse_pair};

const SEED_ENV: &str = "H2V_SEED";
const DEFAULT_OUT_DIR: &str = "h2v-reports";

#[derive(Debug)]
enum CliError {
    Parse(String),
    Domain(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

impl From<holoherm::Error> for CliError {
    fn from(e: holoherm::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "h2v", version, about = "Holomorphic Hermite polynomials: evaluate, verify, export")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate H_{m,n}(z1, z2) and print it as JSON.
    Eval,
    /// Run verification suites; writes reports.jsonl, summary.csv and timings.csv.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Write plot-ready or exact data.
    Export {
        #[arg(value_enum)]
        what: ExportArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Identities,
    Orthogonality,
    Kernels,
    Bargmann,
    Representation,
    Limits,
    Bounds,
    Quadrature,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Orthogonality => Suite::Orthogonality,
            SuiteArg::Kernels => Suite::Kernels,
            SuiteArg::Bargmann => Suite::Bargmann,
            SuiteArg::Representation => Suite::Representation,
            SuiteArg::Limits => Suite::Limits,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Quadrature => Suite::Quadrature,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ExportArg {
    KernelGrid,
    QuadratureRule,
    Polynomial,
}

/// Flags shared by every subcommand; any of them may also come from
/// `--config` as `key=value` lines (command-line values win).
#[derive(Args, Debug, Default)]
struct Options {
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Second degree; for `export quadrature-rule`, the node count.
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true, value_parser = complex_arg)]
    z1: Option<Complex64>,
    #[arg(long, global = true, value_parser = complex_arg)]
    z2: Option<Complex64>,
    /// direct, recurrence, hermite1d or laguerre_diagonal.
    #[arg(long, global = true)]
    method: Option<String>,
    /// Comma-separated list, each in (0, 1).
    #[arg(long, global = true)]
    alpha: Option<String>,
    #[arg(long = "max-degree", global = true)]
    max_degree: Option<u32>,
    /// Gauss-Hermite nodes per real axis.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Overridden by the H2V_SEED environment variable.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long = "out-dir", global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long = "tolerance-rel", global = true)]
    tolerance_rel: Option<f64>,
    #[arg(long = "tolerance-abs", global = true)]
    tolerance_abs: Option<f64>,
    /// Kernel-grid second argument as `w1,w2`.
    #[arg(long, global = true, value_parser = pair_arg)]
    w: Option<(Complex64, Complex64)>,
    /// Kernel-grid size as `ROWSxCOLS`.
    #[arg(long, global = true, value_parser = grid_arg)]
    grid: Option<(usize, usize)>,
    /// Kernel-grid half-width around the origin.
    #[arg(long, global = true)]
    extent: Option<f64>,
    /// Export target file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// File of `key=value` lines using the flag names above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

fn complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn pair_arg(s: &str) -> Result<(Complex64, Complex64), String> {
    parse_pair(s).map_err(|e| e.to_string())
}

fn grid_arg(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("grid must look like 21x21, got {s:?}");
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let c: usize = c.trim().parse().map_err(|_| bad())?;
    if r == 0 || c == 0 {
        return Err(bad());
    }
    Ok((r, c))
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::Parse(format!("config: invalid value {value:?} for {key}")))
}

impl Options {
    /// Fills unset fields from a `key=value` file. Unknown keys are errors.
    fn merge_config(&mut self, text: &str) -> CliResult<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("config line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim().trim_start_matches("--"), value.trim());
            let err = |e: String| CliError::Parse(format!("config line {}: {e}", lineno + 1));
            match key {
                "m" => fill(&mut self.m, parse_value(key, value)?),
                "n" => fill(&mut self.n, parse_value(key, value)?),
                "z1" => fill(&mut self.z1, complex_arg(value).map_err(err)?),
                "z2" => fill(&mut self.z2, complex_arg(value).map_err(err)?),
                "method" => fill(&mut self.method, value.to_string()),
                "alpha" => fill(&mut self.alpha, value.to_string()),
                "max-degree" | "max_degree" => fill(&mut self.max_degree, parse_value(key, value)?),
                "nodes" => fill(&mut self.nodes, parse_value(key, value)?),
                "seed" => fill(&mut self.seed, parse_value(key, value)?),
                "out-dir" | "out_dir" => fill(&mut self.out_dir, PathBuf::from(value)),
                "tolerance-rel" | "tolerance_rel" => fill(&mut self.tolerance_rel, parse_value(key, value)?),
                "tolerance-abs" | "tolerance_abs" => fill(&mut self.tolerance_abs, parse_value(key, value)?),
                "w" => fill(&mut self.w, pair_arg(value).map_err(err)?),
                "grid" => fill(&mut self.grid, grid_arg(value).map_err(err)?),
                "extent" => fill(&mut self.extent, parse_value(key, value)?),
                "output" => fill(&mut self.output, PathBuf::from(value)),
                _ => return Err(CliError::Parse(format!("config line {}: unknown key {key:?}", lineno + 1))),
            }
        }
        Ok(())
    }

    fn seed(&self) -> CliResult<Option<u64>> {
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| CliError::Parse(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
            Err(_) => Ok(self.seed),
        }
    }

    fn alphas(&self) -> CliResult<Option<Vec<Alpha>>> {
        let Some(list) = &self.alpha else { return Ok(None) };
        let mut out = Vec::new();
        for part in list.split(',') {
            let v: f64 = part
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("invalid alpha {part:?}")))?;
            out.push(Alpha::new(v)?);
        }
        Ok(Some(out))
    }

    fn suite_config(&self) -> CliResult<SuiteConfig> {
        let mut cfg = SuiteConfig::default();
        if let Some(alphas) = self.alphas()? {
            cfg.alphas = alphas;
        }
        if let Some(d) = self.max_degree {
            cfg.max_degree = d;
            cfg.identity_max_degree = Some(d);
        }
        cfg.nodes_per_axis = self
            .nodes
            .unwrap_or_else(|| cfg.nodes_per_axis.max(cfg.max_degree as usize + 1));
        if let Some(seed) = self.seed()? {
            cfg.seed = seed;
        }
        if self.tolerance_abs.is_some() || self.tolerance_rel.is_some() {
            let t = Tolerance::new(self.tolerance_abs.unwrap_or(0.0), self.tolerance_rel.unwrap_or(0.0));
            if !(t.abs >= 0.0 && t.rel >= 0.0) {
                return Err(CliError::Domain("tolerances must be non-negative".into()));
            }
            cfg.tolerance = Some(t);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn fill<T>(slot: &mut Option<T>, value: T) {
    if slot.is_none() {
        *slot = Some(value);
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Parse(format!("--{flag} is required")))
}

#[derive(Serialize)]
struct EvalOutput {
    m: u32,
    n: u32,
    z1: ComplexValue,
    z2: ComplexValue,
    method: &'static str,
    value_re: f64,
    value_im: f64,
}

fn cmd_eval(opts: &Options) -> CliResult<String> {
    let m = require(opts.m, "m")?;
    let n = require(opts.n, "n")?;
    let z1 = require(opts.z1, "z1")?;
    let z2 = require(opts.z2, "z2")?;
    let method: EvalMethod = match &opts.method {
        Some(s) => s.parse().map_err(|e: holoherm::Error| CliError::Parse(e.to_string()))?,
        None => EvalMethod::Recurrence,
    };
    let p = ComplexPoint::new(z1, z2)?;
    let v = eval_hermite(DegreePair::new(m, n), p, method)?;
    let out = EvalOutput {
        m,
        n,
        z1: z1.into(),
        z2: z2.into(),
        method: method.name(),
        value_re: v.re,
        value_im: v.im,
    };
    Ok(serde_json::to_string(&out).expect("eval output serializes") + "\n")
}

#[derive(Serialize)]
struct VerifyOutput {
    suite: &'static str,
    checks: usize,
    passed: usize,
    failed: usize,
    failed_checks: Vec<String>,
    out_dir: String,
}

fn cmd_verify(opts: &Options, suite: Suite) -> CliResult<(String, bool)> {
    let cfg = opts.suite_config()?;
    let reports = run_suite(suite, &cfg)?;
    let dir = opts.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    write_reports(&dir, &reports).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let failed: BTreeSet<String> = reports.iter().filter(|r| !r.passed).map(|r| r.check_id.clone()).collect();
    let failed_count = reports.iter().filter(|r| !r.passed).count();
    let out = VerifyOutput {
        suite: suite.name(),
        checks: reports.len(),
        passed: reports.len() - failed_count,
        failed: failed_count,
        failed_checks: failed.into_iter().collect(),
        out_dir: dir.display().to_string(),
    };
    Ok((serde_json::to_string(&out).expect("verify output serializes") + "\n", failed_count == 0))
}

fn linspace(count: usize, extent: f64) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    (0..count)
        .map(|k| -extent + 2.0 * extent * k as f64 / (count - 1) as f64)
        .collect()
}

/// `K(z; w)` over real `z = (x, y)` on a centred grid.
fn kernel_grid(opts: &Options) -> CliResult<String> {
    let alphas = opts.alphas()?.unwrap_or_else(|| vec![Alpha::new(0.5).expect("valid alpha")]);
    let [a] = alphas[..] else {
        return Err(CliError::Parse("kernel-grid takes a single --alpha".into()));
    };
    let (w1, w2) = opts.w.unwrap_or_default();
    let w = ComplexPoint::new(w1, w2)?;
    let (rows, cols) = opts.grid.unwrap_or((21, 21));
    let extent = opts.extent.unwrap_or(2.0);
    if !(extent.is_finite() && extent >= 0.0) {
        return Err(CliError::Domain("--extent must be finite and non-negative".into()));
    }
    let mut wr = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io(e.to_string());
    wr.write_record(["row", "col", "z1_re", "z2_re", "k_re", "k_im", "k_abs"]).map_err(csv_err)?;
    let ys = linspace(rows, extent);
    let xs = linspace(cols, extent);
    for (i, &y) in ys.iter().enumerate() {
        for (j, &x) in xs.iter().enumerate() {
            let k = kernel_closed(a, KernelArgs::new(ComplexPoint::real(x, y), w));
            wr.write_record([
                i.to_string(),
                j.to_string(),
                format!("{x:?}"),
                format!("{y:?}"),
                format!("{:?}", k.re),
                format!("{:?}", k.im),
                format!("{:?}", k.norm()),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = wr.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct PolynomialOutput {
    m: u32,
    n: u32,
    #[serde(flatten)]
    poly: PolyJson,
}

fn cmd_export(opts: &Options, what: ExportArg) -> CliResult<String> {
    match what {
        ExportArg::KernelGrid => kernel_grid(opts),
        ExportArg::QuadratureRule => {
            let n = require(opts.n.or(opts.nodes.map(|v| v as u32)), "n")?;
            Ok(gauss_hermite_rule(n as usize)?.to_csv())
        }
        ExportArg::Polynomial => {
            let m = require(opts.m, "m")?;
            let n = require(opts.n, "n")?;
            let out = PolynomialOutput {
                m,
                n,
                poly: hermite_exact_direct(DegreePair::new(m, n)).to_json(),
            };
            Ok(serde_json::to_string(&out).expect("polynomial serializes") + "\n")
        }
    }
}

fn emit(body: &str, target: Option<&Path>) -> CliResult<()> {
    match target {
        Some(path) => write_atomic(path, body.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(mut cli: Cli) -> CliResult<bool> {
    if let Some(path) = cli.opts.config.clone() {
        let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        cli.opts.merge_config(&text)?;
    }
    match cli.command {
        Command::Eval => {
            emit(&cmd_eval(&cli.opts)?, None)?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let (body, ok) = cmd_verify(&cli.opts, suite.into())?;
            emit(&body, None)?;
            Ok(ok)
        }
        Command::Export { what } => {
            let body = cmd_export(&cli.opts, what)?;
            emit(&body, cli.opts.output.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("h2v: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_fills_only_unset_fields() {
        let mut o = Options {
            m: Some(3),
            ..Default::default()
        };
        o.merge_config("# comment\nm = 1\nn=2\nz1=1+2i\nalpha=0.25,0.5\n").unwrap();
        assert_eq!(o.m, Some(3));
        assert_eq!(o.n, Some(2));
        assert_eq!(o.z1, Some(Complex64::new(1.0, 2.0)));
        assert_eq!(o.alphas().unwrap().unwrap().len(), 2);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let mut o = Options::default();
        assert_eq!(o.merge_config("colour=blue").unwrap_err().code(), 2);
        assert_eq!(o.merge_config("just words").unwrap_err().code(), 2);
        assert_eq!(o.merge_config("m=-1").unwrap_err().code(), 2);
    }

    #[test]
    fn alpha_domain_is_checked() {
        let o = Options {
            alpha: Some("0.5,1.0".into()),
            ..Default::default()
        };
        assert_eq!(o.alphas().unwrap_err().code(), 3);
    }

    #[test]
    fn grid_literal() {
        assert_eq!(grid_arg("3x4"), Ok((3, 4)));
        assert!(grid_arg("0x4").is_err());
        assert!(grid_arg("3by4").is_err());
    }

    #[test]
    fn linspace_is_centred() {
        assert_eq!(linspace(3, 2.0), vec![-2.0, 0.0, 2.0]);
        assert_eq!(linspace(1, 2.0), vec![0.0]);
    }
}
