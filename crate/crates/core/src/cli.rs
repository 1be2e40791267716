//! Command-line front end: argument parsing into a validated [`RunConfig`]
//! and deterministic CSV / JSON emission.
//!
//! Floats are always written with 17 significant digits (`{:.16e}`), both in
//! CSV rows and inside JSON documents, so identical inputs give
//! byte-identical files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::coin::{classify, random_coin, validate_coin, Coin, CoinFamily};
use crate::error::{QqwError, Result};
use crate::exact::{exact_distribution, xi_bruteforce_coin, xi_closed};
use crate::limit::{limit_compare, LimitDensity};
use crate::profile::peak_report;
use crate::quaternion::Quaternion;
use crate::spectral::{eigen_system, eigenvalues, eigenvector_closed_form, phase_distance};
use crate::walk::{distribution, evolve, Distribution, InitialState, NORMALIZATION_TOL};

#[derive(Parser, Debug)]
#[command(
    name = "qqw",
    version,
    about = "Quaternionic quantum walks on the integer line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CoinArg {
    /// Coin JSON file `{"a":[..4],"b":..,"c":..,"d":..}`
    #[arg(long)]
    coin: PathBuf,
}

#[derive(Args, Debug)]
struct InitArgs {
    /// Left amplitude as a JSON quaternion
    #[arg(long, default_value = "[1,0,0,0]")]
    alpha: String,
    /// Right amplitude as a JSON quaternion
    #[arg(long, default_value = "[0,0,0,0]")]
    beta: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the coin class and unitarity residuals
    Classify(CoinArg),
    /// Distribution of X_n by direct evolution (CSV x,probability)
    Simulate {
        #[command(flatten)]
        coin: CoinArg,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distribution of X_n from the closed form (CSV x,probability)
    Exact {
        #[command(flatten)]
        coin: CoinArg,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Path sum over l left and m right moves (JSON)
    Xi {
        #[command(flatten)]
        coin: CoinArg,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        /// Enumerate every path instead of using the closed form
        #[arg(long)]
        brute: bool,
    },
    /// Eigenvalues and eigenvectors of U(theta) (JSON)
    Spectrum {
        #[command(flatten)]
        coin: CoinArg,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Limit density of X_n / n on a uniform grid over [-1, 1] (CSV y,density)
    Limit {
        #[command(flatten)]
        coin: CoinArg,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kolmogorov distance between the walk at time n and its limit law (JSON)
    Compare {
        #[command(flatten)]
        coin: CoinArg,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long)]
        steps: usize,
    },
    /// Interior peaks of the binned density of X_n / n (JSON)
    Peaks {
        #[command(flatten)]
        coin: CoinArg,
        #[command(flatten)]
        init: InitArgs,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Draw a random valid coin from a seeded ChaCha8 generator (coin JSON)
    RandomCoin {
        /// general, complex, case1, ..., case5
        #[arg(long, default_value = "general")]
        family: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Which computation a [`RunConfig`] runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Task {
    Classify,
    Simulate,
    Exact,
    Xi { l: usize, m: usize, brute: bool },
    Spectrum { theta: f64 },
    Limit,
    Compare,
    Peaks,
    RandomCoin { family: CoinFamily },
}

impl Task {
    pub fn tag(&self) -> &'static str {
        match self {
            Task::Classify => "classify",
            Task::Simulate => "simulate",
            Task::Exact => "exact",
            Task::Xi { .. } => "xi",
            Task::Spectrum { .. } => "spectrum",
            Task::Limit => "limit",
            Task::Compare => "compare",
            Task::Peaks => "peaks",
            Task::RandomCoin { .. } => "random-coin",
        }
    }
}

/// A fully validated invocation. The coin file has been read and checked.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub coin_path: Option<PathBuf>,
    pub coin: Option<Coin>,
    pub init: InitialState,
    pub steps: usize,
    pub grid: usize,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

#[derive(Deserialize)]
struct CoinFile {
    a: Quaternion,
    b: Quaternion,
    c: Quaternion,
    d: Quaternion,
}

/// Reads and validates a coin JSON file.
pub fn load_coin(path: &Path) -> Result<Coin> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => QqwError::FileNotFound(path.display().to_string()),
        _ => QqwError::Io(e),
    })?;
    let raw: CoinFile = serde_json::from_str(&text).map_err(|e| QqwError::MalformedJson {
        line: e.line(),
        msg: e.to_string(),
    })?;
    validate_coin(raw.a, raw.b, raw.c, raw.d)
}

fn parse_quaternion(flag: &str, s: &str) -> Result<Quaternion> {
    serde_json::from_str(s)
        .map_err(|e| QqwError::Usage(format!("{flag}: expected [x0,x1,x2,x3]: {e}")))
}

fn parse_init(args: &InitArgs) -> Result<InitialState> {
    let alpha = parse_quaternion("--alpha", &args.alpha)?;
    let beta = parse_quaternion("--beta", &args.beta)?;
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
        // blame the flag that cannot be completed to a unit pair, else both
        let what = if alpha.norm_sqr() > 1.0 + NORMALIZATION_TOL {
            "--alpha"
        } else if beta.norm_sqr() > 1.0 + NORMALIZATION_TOL {
            "--beta"
        } else if beta.norm_sqr() == 0.0 {
            "--alpha"
        } else if alpha.norm_sqr() == 0.0 {
            "--beta"
        } else {
            "--alpha/--beta"
        };
        return Err(QqwError::NotNormalized {
            what: what.into(),
            norm_sqr,
        });
    }
    InitialState::new(alpha, beta)
}

/// Parses `argv` (including the program name) into a validated config.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| QqwError::Usage(e.render().to_string()))?;
    config_from(cli.command)
}

fn config_from(command: Command) -> Result<RunConfig> {
    let mut cfg = RunConfig {
        task: Task::Classify,
        coin_path: None,
        coin: None,
        init: InitialState::left(),
        steps: 0,
        grid: 3,
        out: None,
        seed: 0,
    };
    let set_coin = |cfg: &mut RunConfig, c: CoinArg| -> Result<()> {
        cfg.coin = Some(load_coin(&c.coin)?);
        cfg.coin_path = Some(c.coin);
        Ok(())
    };
    let is_exact = matches!(command, Command::Exact { .. });
    match command {
        Command::Classify(c) => set_coin(&mut cfg, c)?,
        Command::Simulate {
            coin,
            init,
            steps,
            out,
        }
        | Command::Exact {
            coin,
            init,
            steps,
            out,
        } => {
            cfg.task = if is_exact {
                Task::Exact
            } else {
                Task::Simulate
            };
            set_coin(&mut cfg, coin)?;
            cfg.init = parse_init(&init)?;
            cfg.steps = steps;
            cfg.out = out;
        }
        Command::Xi { coin, l, m, brute } => {
            set_coin(&mut cfg, coin)?;
            cfg.task = Task::Xi { l, m, brute };
            cfg.steps = l + m;
        }
        Command::Spectrum { coin, theta } => {
            if !theta.is_finite() {
                return Err(QqwError::Usage("--theta must be finite".into()));
            }
            set_coin(&mut cfg, coin)?;
            cfg.task = Task::Spectrum { theta };
        }
        Command::Limit {
            coin,
            init,
            grid,
            out,
        } => {
            if grid < 3 {
                return Err(QqwError::Usage(format!(
                    "--grid must be at least 3, got {grid}"
                )));
            }
            set_coin(&mut cfg, coin)?;
            cfg.task = Task::Limit;
            cfg.init = parse_init(&init)?;
            cfg.grid = grid;
            cfg.out = out;
        }
        Command::Compare { coin, init, steps } => {
            set_coin(&mut cfg, coin)?;
            cfg.task = Task::Compare;
            cfg.init = parse_init(&init)?;
            cfg.steps = steps;
        }
        Command::Peaks { coin, init, steps } => {
            set_coin(&mut cfg, coin)?;
            cfg.task = Task::Peaks;
            cfg.init = parse_init(&init)?;
            cfg.steps = steps;
        }
        Command::RandomCoin { family, seed, out } => {
            cfg.task = Task::RandomCoin {
                family: family.parse()?,
            };
            cfg.seed = seed;
            cfg.out = out;
        }
    }
    Ok(cfg)
}

/// Writes `17`-significant-digit floats inside otherwise compact JSON.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes `value` as one line of JSON followed by `\n`.
pub fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| QqwError::Numeric(format!("JSON encoding failed: {e}")))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// `x,probability` CSV over the parity sites of time `n`.
pub fn distribution_csv(dist: &Distribution) -> String {
    let mut s = String::from("x,probability\n");
    for (x, p) in dist.iter() {
        s.push_str(&format!("{x},{p:.16e}\n"));
    }
    s
}

/// `y,density` CSV of `(1 − C y) f(y)` on `grid` equally spaced points.
pub fn density_csv(law: &LimitDensity, grid: usize) -> String {
    let mut s = String::from("y,density\n");
    for k in 0..grid {
        let y = -1.0 + 2.0 * k as f64 / (grid - 1) as f64;
        s.push_str(&format!("{y:.16e},{:.16e}\n", law.weighted(y)));
    }
    s
}

fn c2(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
struct ClassifyReport {
    class: &'static str,
    residuals: crate::coin::UnitarityResiduals,
    max_residual: f64,
    complex: bool,
    real_diagonal: bool,
    simplex_diagonal_perplex_offdiagonal: bool,
    pure_diagonal: bool,
}

#[derive(Serialize)]
struct XiReport {
    l: usize,
    m: usize,
    n: usize,
    x: i64,
    method: &'static str,
    terms: Option<u64>,
    matrix: crate::quaternion::QMat2,
}

#[derive(Serialize)]
struct SpectrumEntry {
    lambda: f64,
    eigenvalue: [f64; 2],
    vector: Option<Vec<[f64; 2]>>,
    residual: Option<f64>,
    /// Distance up to phase between the numerical and the constructed vector.
    constructed_distance: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumReport {
    theta: f64,
    degenerate: bool,
    eigenpairs: Vec<SpectrumEntry>,
}

fn spectrum_report(coin: &Coin, theta: f64) -> Result<SpectrumReport> {
    let u = crate::coin::u_theta(coin, theta).matrix;
    match eigen_system(coin, theta) {
        Ok(pairs) => Ok(SpectrumReport {
            theta,
            degenerate: false,
            eigenpairs: pairs
                .iter()
                .map(|p| SpectrumEntry {
                    lambda: p.lambda,
                    eigenvalue: c2(p.eigenvalue),
                    vector: Some(p.vector.iter().copied().map(c2).collect()),
                    residual: Some(p.residual(&u)),
                    constructed_distance: eigenvector_closed_form(coin, theta, p.lambda)
                        .ok()
                        .map(|v| phase_distance(&v, &p.vector)),
                })
                .collect(),
        }),
        Err(QqwError::Degenerate { .. }) => Ok(SpectrumReport {
            theta,
            degenerate: true,
            eigenpairs: eigenvalues(coin, theta)?
                .into_iter()
                .map(|mu| SpectrumEntry {
                    lambda: crate::spectral::wrap_angle(mu.arg()),
                    eigenvalue: c2(mu),
                    vector: None,
                    residual: None,
                    constructed_distance: None,
                })
                .collect(),
        }),
        Err(e) => Err(e),
    }
}

/// The limit law appropriate for `coin`: the Case-5 density when the diagonal
/// is purely imaginary, otherwise the complex-walk density where it applies.
pub fn limit_law(coin: &Coin, init: &InitialState) -> Result<LimitDensity> {
    if coin.is_case5() {
        LimitDensity::qqw_case5(coin, init)
    } else {
        LimitDensity::complex_walk(coin, init)
    }
}

fn need_coin(cfg: &RunConfig) -> Result<&Coin> {
    cfg.coin
        .as_ref()
        .ok_or_else(|| QqwError::Usage(format!("{} needs --coin", cfg.task.tag())))
}

/// Runs `cfg`, sending file-less output to `stdout`.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let text = match cfg.task {
        Task::Classify => {
            let coin = need_coin(cfg)?;
            let residuals = coin.residuals();
            to_json_line(&ClassifyReport {
                class: classify(coin).tag(),
                max_residual: residuals.max(),
                residuals,
                complex: coin.is_complex(),
                real_diagonal: coin.is_case3(),
                simplex_diagonal_perplex_offdiagonal: coin.is_case4(),
                pure_diagonal: coin.is_case5(),
            })?
        }
        Task::Simulate => distribution_csv(&distribution(&evolve(
            need_coin(cfg)?,
            &cfg.init,
            cfg.steps,
        ))),
        Task::Exact => {
            distribution_csv(&exact_distribution(need_coin(cfg)?, &cfg.init, cfg.steps)?)
        }
        Task::Xi { l, m, brute } => {
            let coin = need_coin(cfg)?;
            let sum = if brute {
                xi_bruteforce_coin(coin, l, m)?
            } else {
                xi_closed(coin, l, m)?
            };
            to_json_line(&XiReport {
                l,
                m,
                n: sum.n,
                x: sum.position(),
                method: if brute { "brute" } else { "closed" },
                terms: sum.terms,
                matrix: sum.matrix,
            })?
        }
        Task::Spectrum { theta } => to_json_line(&spectrum_report(need_coin(cfg)?, theta)?)?,
        Task::Limit => density_csv(&limit_law(need_coin(cfg)?, &cfg.init)?, cfg.grid),
        Task::Compare => to_json_line(&limit_compare(need_coin(cfg)?, &cfg.init, cfg.steps)?)?,
        Task::Peaks => to_json_line(&peak_report(need_coin(cfg)?, &cfg.init, cfg.steps))?,
        Task::RandomCoin { family } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            to_json_line(&random_coin(family, &mut rng))?
        }
    };
    match &cfg.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs `cfg` and maps the outcome to a process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let stdout = io::stdout();
    match execute(cfg, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary: parse, run, return the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match config_from(cli.command) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2 as S;

    fn hadamard_file(dir: &Path) -> PathBuf {
        let p = dir.join("h.json");
        let coin = validate_coin(
            Quaternion::real(S),
            Quaternion::real(S),
            Quaternion::real(S),
            Quaternion::real(-S),
        )
        .unwrap();
        fs::write(&p, to_json_line(&coin).unwrap()).unwrap();
        p
    }

    fn tmp() -> PathBuf {
        let d = std::env::temp_dir().join(format!("qqw-cli-unit-{}", std::process::id()));
        fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn parses_simulate() {
        let dir = tmp();
        let h = hadamard_file(&dir);
        let cfg = parse_args([
            "qqw",
            "simulate",
            "--coin",
            h.to_str().unwrap(),
            "--alpha",
            "[1,0,0,0]",
            "--beta",
            "[0,0,0,0]",
            "--steps",
            "100",
            "--out",
            "d.csv",
        ])
        .unwrap();
        assert_eq!(cfg.task, Task::Simulate);
        assert_eq!(cfg.steps, 100);
        assert_eq!(cfg.init, InitialState::left());
        assert_eq!(cfg.out, Some(PathBuf::from("d.csv")));
    }

    #[test]
    fn usage_errors() {
        let e = parse_args(["qqw", "simulate", "--steps", "3"]).unwrap_err();
        assert!(matches!(e, QqwError::Usage(_)));
        assert_eq!(e.exit_code(), 1);
        let e = parse_args([
            "qqw",
            "simulate",
            "--coin",
            "/nonexistent/c.json",
            "--steps",
            "3",
        ])
        .unwrap_err();
        assert!(matches!(e, QqwError::FileNotFound(_)));
    }

    #[test]
    fn unnormalized_alpha_names_flag() {
        let dir = tmp();
        let h = hadamard_file(&dir);
        let e = parse_args([
            "qqw",
            "simulate",
            "--coin",
            h.to_str().unwrap(),
            "--alpha",
            "[2,0,0,0]",
            "--steps",
            "3",
        ])
        .unwrap_err();
        match e {
            QqwError::NotNormalized { ref what, .. } => assert_eq!(what, "--alpha"),
            other => panic!("{other:?}"),
        }
        assert!(e.to_string().contains("--alpha"));
    }

    #[test]
    fn malformed_json_reports_line() {
        let dir = tmp();
        let p = dir.join("bad.json");
        fs::write(&p, "{\n  \"a\": [1,0,0,0],\n  \"b\": [0,0,0\n}").unwrap();
        match load_coin(&p).unwrap_err() {
            QqwError::MalformedJson { line, .. } => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_floats_have_17_digits() {
        let s = to_json_line(&[0.1, -2.0]).unwrap();
        assert_eq!(s, "[1.0000000000000001e-1,-2.0000000000000000e0]\n");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, -2.0]);
    }
}
