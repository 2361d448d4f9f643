//! `siegel`: command-line access to the siegel-core kernels.
//!
//! Every subcommand emits one deterministic JSON report to stdout (or
//! `--output`). Exit codes: 0 success, 1 failed verification, 2 schema
//! error, 3 domain error or pole, 4 enumeration guard exceeded.

mod commands;
mod input;
mod report;

use clap::{Parser, Subcommand};
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Core(siegel_core::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Core(siegel_core::Error::Guard(_)) => 4,
            CliError::Core(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "siegel", version, about = "Exact and numeric kernels for vector-valued Siegel modular forms", long_about = None)]
struct Cli {
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    output: Option<String>,

    /// Seed for randomized inputs (synthetic families); recorded in the report
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map an orthogonal-group type to its GL highest weight
    KvMap {
        #[arg(long)]
        n: usize,
        /// e.g. "2;+1" (odd n) or "2,0;plus" (even n)
        #[arg(long)]
        lambda: String,
    },
    /// Certify pluriharmonicity of a vector polynomial from a JSON file
    PluriharmonicCheck {
        #[arg(long)]
        n: usize,
        /// JSON file: array of component term lists
        #[arg(long)]
        poly: String,
    },
    /// Construct the highest-weight pluriharmonic generator for a GL weight
    KvGenerator {
        /// comma-separated dominant weight, e.g. "2,1,0"
        #[arg(long)]
        rho: String,
    },
    /// Evaluate one generalized quadratic Gauss sum exactly
    GaussSum {
        #[arg(long)]
        n: usize,
        /// the modulus F
        #[arg(long, short = 'f')]
        modulus: u64,
        /// index into the lexicographic character enumeration mod F
        #[arg(long)]
        chi_index: Option<usize>,
        /// generator exponents of χ, e.g. "1"
        #[arg(long)]
        chi_exponents: Option<String>,
        /// integer matrix rows "a,b;c,d"
        #[arg(long, short = 'x')]
        x: String,
        /// symmetric integer matrix rows
        #[arg(long, short = 'r')]
        r: String,
        /// rational symmetric matrix τ[Q], rows "1,0;0,1"
        #[arg(long)]
        tau_q: String,
    },
    /// Exhaustively sweep the Gauss-sum vanishing claim at one prime
    VanishingCertificate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        /// diagonal positive definite τ, rational rows
        #[arg(long)]
        tau: String,
        /// upper-triangular rational Q
        #[arg(long)]
        q: String,
        /// also sweep even nontrivial characters (outside the claim)
        #[arg(long)]
        include_even: bool,
    },
    /// Compute the level ideals of a theta series
    ThetaLevel {
        #[arg(long)]
        spec: String,
    },
    /// Compute one Fourier coefficient of a theta series
    ThetaCoeffs {
        #[arg(long)]
        spec: String,
        /// symmetric integer matrix rows (semidefinite allowed)
        #[arg(long, short = 'r')]
        r: String,
    },
    /// Certify or refuse cuspidality of a theta series
    ThetaCuspReport {
        #[arg(long)]
        spec: String,
        /// restrict the attached certificates to this prime
        #[arg(long)]
        p: Option<u64>,
    },
    /// List cusp (double-coset) representatives mod a squarefree modulus
    CuspReps {
        #[arg(long)]
        n: usize,
        /// squarefree modulus, e.g. 6 = 2·3
        #[arg(long, short = 'm')]
        m: u64,
        /// also lift to integral matrices (n = 1, prime modulus only)
        #[arg(long)]
        lift: bool,
    },
    /// Evaluate the Gamma factors attached to a weight
    GammaFactors {
        #[arg(long)]
        rho: String,
        /// half-integer h, e.g. "7/2"
        #[arg(long)]
        h: String,
        /// complex s as "re" or "re,im"
        #[arg(long, short = 's')]
        s: String,
    },
    /// Evaluate a Λ-product of Dirichlet L-values with a tail bound
    LambdaValues {
        #[arg(long, short = 'm')]
        m: usize,
        /// half-integer weight κ
        #[arg(long)]
        kappa: String,
        #[arg(long, default_value_t = 1)]
        x_ideal: u64,
        #[arg(long, default_value_t = 1)]
        eta_modulus: u64,
        #[arg(long)]
        eta_index: Option<usize>,
        #[arg(long, short = 's')]
        s: String,
        #[arg(long, default_value_t = 10_000)]
        p_max: u64,
    },
    /// Print one Euler factor of the standard L-function
    EulerFactor {
        #[arg(long, short = 'p')]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, short = 'k')]
        k: String,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value_t = 1)]
        psi_modulus: u64,
        #[arg(long)]
        psi_index: Option<usize>,
        /// per-prime Satake parameters "p:re,im;re,im|q:..."
        #[arg(long)]
        satake: String,
        /// use the degree-n factor at a level prime
        #[arg(long)]
        at_level: bool,
    },
    /// Truncated Euler product of the standard L-function
    StandardL {
        #[arg(long)]
        n: usize,
        #[arg(long, short = 'k')]
        k: String,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value_t = 1)]
        psi_modulus: u64,
        #[arg(long)]
        psi_index: Option<usize>,
        #[arg(long)]
        satake: String,
        #[arg(long, default_value_t = 1)]
        chi_modulus: u64,
        #[arg(long)]
        chi_index: Option<usize>,
        #[arg(long, short = 's')]
        s: String,
        #[arg(long, default_value_t = 100)]
        prime_bound: u64,
    },
    /// Predict the exceptional poles of the completed standard L-function
    PoleReport {
        #[arg(long, short = 'k')]
        k: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        psi_chi_square_trivial: bool,
        #[arg(long)]
        y_trivial: bool,
        #[arg(long)]
        c_ideal: u64,
        #[arg(long)]
        y_ideal: u64,
        #[arg(long, default_value_t = 1)]
        eta_modulus: u64,
        #[arg(long)]
        eta_index: Option<usize>,
    },
    /// Truncated Rankin product of a family against a theta series
    RankinEval {
        #[arg(long)]
        family: String,
        #[arg(long)]
        theta: String,
        #[arg(long, short = 's')]
        s: String,
        #[arg(long, default_value_t = 10)]
        det_bound: i64,
    },
    /// Matched-truncation unfolding identity check
    UnfoldCheck {
        #[arg(long)]
        family: String,
        #[arg(long)]
        theta: String,
        /// real s
        #[arg(long, short = 's')]
        s: f64,
        #[arg(long, default_value_t = 10)]
        det_bound: i64,
    },
    /// Truncated coset Dirichlet series D_τ(s, f, χ)
    DTauSeries {
        #[arg(long)]
        family: String,
        #[arg(long)]
        theta: String,
        #[arg(long, short = 's')]
        s: f64,
        #[arg(long, default_value_t = 5)]
        coset_bound: i64,
    },
    /// Compare the torus-moment quadrature with its closed form
    MaassCheck {
        #[arg(long)]
        n: usize,
        /// comma-separated weakly decreasing λ
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        s_plus_h: f64,
    },
    /// Run the acceptance criteria suite
    VerifyPaper {
        /// gauss, weights, analytic, rankin, quadform, theta, cusps, or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// shrink parameter sweeps without changing the checked identities
        #[arg(long)]
        quick: bool,
    },
}

fn thread_count() -> usize {
    std::env::var("SIEGEL_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t > 0)
        .unwrap_or(1)
}

fn dispatch(cli: &Cli) -> Result<(&'static str, Value, Value, i32), CliError> {
    let seed = cli.seed;
    let (name, input, result, code) = match &cli.command {
        Command::KvMap { n, lambda } => {
            let (i, r) = commands::kv_map(*n, lambda)?;
            ("kv-map", i, r, 0)
        }
        Command::PluriharmonicCheck { n, poly } => {
            let (i, r) = commands::pluriharmonic_check(*n, poly)?;
            ("pluriharmonic-check", i, r, 0)
        }
        Command::KvGenerator { rho } => {
            let (i, r) = commands::kv_generator_cmd(rho)?;
            ("kv-generator", i, r, 0)
        }
        Command::GaussSum {
            n,
            modulus,
            chi_index,
            chi_exponents,
            x,
            r,
            tau_q,
        } => {
            let (i, res) = commands::gauss_sum_cmd(
                *n,
                *modulus,
                *chi_index,
                chi_exponents.as_deref(),
                x,
                r,
                tau_q,
            )?;
            ("gauss-sum", i, res, 0)
        }
        Command::VanishingCertificate {
            n,
            p,
            tau,
            q,
            include_even,
        } => {
            let (i, r) = commands::vanishing_certificate_cmd(*n, *p, tau, q, *include_even)?;
            ("vanishing-certificate", i, r, 0)
        }
        Command::ThetaLevel { spec } => {
            let (i, r) = commands::theta_level(spec)?;
            ("theta-level", i, r, 0)
        }
        Command::ThetaCoeffs { spec, r } => {
            let (i, res) = commands::theta_coeffs(spec, r)?;
            ("theta-coeffs", i, res, 0)
        }
        Command::ThetaCuspReport { spec, p } => {
            let (i, r) = commands::theta_cusp_report(spec, *p)?;
            ("theta-cusp-report", i, r, 0)
        }
        Command::CuspReps { n, m, lift } => {
            let (i, r) = commands::cusp_reps(*n, *m, *lift)?;
            ("cusp-reps", i, r, 0)
        }
        Command::GammaFactors { rho, h, s } => {
            let (i, r) = commands::gamma_factors(rho, h, s)?;
            ("gamma-factors", i, r, 0)
        }
        Command::LambdaValues {
            m,
            kappa,
            x_ideal,
            eta_modulus,
            eta_index,
            s,
            p_max,
        } => {
            let (i, r) =
                commands::lambda_values(*m, kappa, *x_ideal, *eta_modulus, *eta_index, s, *p_max)?;
            ("lambda-values", i, r, 0)
        }
        Command::EulerFactor {
            p,
            n,
            k,
            level,
            psi_modulus,
            psi_index,
            satake,
            at_level,
        } => {
            let (i, r) = commands::euler_factor_cmd(
                *p,
                *n,
                k,
                *level,
                *psi_modulus,
                *psi_index,
                satake,
                *at_level,
            )?;
            ("euler-factor", i, r, 0)
        }
        Command::StandardL {
            n,
            k,
            level,
            psi_modulus,
            psi_index,
            satake,
            chi_modulus,
            chi_index,
            s,
            prime_bound,
        } => {
            let (i, r) = commands::standard_l(
                *n,
                k,
                *level,
                *psi_modulus,
                *psi_index,
                satake,
                *chi_modulus,
                *chi_index,
                s,
                *prime_bound,
            )?;
            ("standard-l", i, r, 0)
        }
        Command::PoleReport {
            k,
            n,
            psi_chi_square_trivial,
            y_trivial,
            c_ideal,
            y_ideal,
            eta_modulus,
            eta_index,
        } => {
            let (i, r) = commands::pole_report_cmd(
                k,
                *n,
                *psi_chi_square_trivial,
                *y_trivial,
                *c_ideal,
                *y_ideal,
                *eta_modulus,
                *eta_index,
            )?;
            ("pole-report", i, r, 0)
        }
        Command::RankinEval {
            family,
            theta,
            s,
            det_bound,
        } => {
            let (i, r) = commands::rankin_eval(family, theta, s, *det_bound, seed)?;
            ("rankin-eval", i, r, 0)
        }
        Command::UnfoldCheck {
            family,
            theta,
            s,
            det_bound,
        } => {
            let (i, r) = commands::unfold_check(family, theta, *s, *det_bound, seed)?;
            ("unfold-check", i, r, 0)
        }
        Command::DTauSeries {
            family,
            theta,
            s,
            coset_bound,
        } => {
            let (i, r) = commands::d_tau_cmd(family, theta, *s, *coset_bound, seed)?;
            ("d-tau-series", i, r, 0)
        }
        Command::MaassCheck { n, lambda, s_plus_h } => {
            let (i, r) = commands::maass_check(*n, lambda, *s_plus_h)?;
            ("maass-check", i, r, 0)
        }
        Command::VerifyPaper { suite, quick } => {
            let (i, r, passed) = commands::verify_paper(suite, *quick)?;
            ("verify-paper", i, r, if passed { 0 } else { 1 })
        }
    };
    Ok((name, input, result, code))
}

fn main() {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((name, input, result, code)) => {
            let report = report::envelope(name, input, cli.seed, thread_count(), result);
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &cli.output {
                None => println!("{text}"),
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("cannot write report to {path}: {e}");
                        std::process::exit(2);
                    }
                }
            }
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
