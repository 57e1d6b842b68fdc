use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frobrel_core::constructions::{
    assemble_from_traces, fermat_relation_system, fermat_verify_kernel, honda_tate_d1, honda_tate_d3,
};
use frobrel_core::curve_zeta::{curve_count, lpolynomial, CurveSpec};
use frobrel_core::distribution::{
    diff_sequence, histogram, ks_compare, mean_variance, mu_g_sample, sign_bias, write_histogram_csv,
};
use frobrel_core::galois::{tuple_certificate, DEFAULT_ELL_BUDGET};
use frobrel_core::relations::{independence_report, DetectOptions, DEFAULT_BITS, DEFAULT_HEIGHT};
use frobrel_core::sieve::{comparison_table, write_table_csv, Method, SieveParams};
use frobrel_core::survey::{aggregate_json, export_string, parse_records, run_survey, Format, SurveyConfig};
use frobrel_core::weil_poly::{certified_roots, is_q_symplectic, rh_check, QSymplecticPoly};
use frobrel_core::CoreError;
use serde_json::json;

#[derive(Parser)]
#[command(name = "frobrel", version, about = "Relations between Frobenius eigenvalues of curves over finite fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// RNG seed [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Working precision for certified roots [default: 256]
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Largest auxiliary prime for Galois certificates [default: 200]
    #[arg(long, global = true)]
    ell_budget: Option<u64>,
    /// Coefficient bound for relation search [default: 50]
    #[arg(long, global = true)]
    height: Option<u64>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CurveArgs {
    /// Coefficients of f, low to high, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long)]
    t: u64,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    e: u32,
}

#[derive(Args)]
struct PolyArgs {
    /// L-polynomial coefficients c_0..c_2g, comma separated; repeat for tuples.
    #[arg(long = "poly", required = true, allow_hyphen_values = true)]
    polys: Vec<String>,
    #[arg(long)]
    q: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Point counts over F_{q^n} for n = 1..=N.
    Count {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// L-polynomial of y^2 = f(x)(x - t).
    Lpoly {
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Functional equation and Riemann hypothesis checks.
    RhCheck {
        #[command(flatten)]
        polys: PolyArgs,
    },
    /// Maximality certificate for the Galois group of one or more L-polynomials.
    Cert {
        #[command(flatten)]
        polys: PolyArgs,
    },
    /// Full independence report.
    Relations {
        #[command(flatten)]
        polys: PolyArgs,
    },
    /// Run a survey from a key = value config file.
    Survey {
        config: PathBuf,
        /// Also write the aggregate JSON here.
        #[arg(long)]
        aggregate: Option<PathBuf>,
    },
    /// Honda-Tate trace systems in Q(i) (d = 1) or Q(sqrt -3) (d = 3).
    HondaTate {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        d: u64,
    },
    /// Fermat relation matrix; with --q also the Gauss-sum check.
    Fermat {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Sample mu_g (histogram CSV), or compare two L-polynomials against it.
    Distribution {
        #[arg(long, default_value_t = 1)]
        g: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        /// Two L-polynomials (same q) to compare; repeat the flag.
        #[arg(long = "poly", allow_hyphen_values = true)]
        polys: Vec<String>,
        #[arg(long)]
        q: Option<u64>,
        /// Sequence length for comparisons.
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
    /// Exceptional-set bound table, or the full constants for one setting.
    SieveBound {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        g: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        k: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "25,49,121,625")]
        q: Vec<u64>,
        /// N,r,delta: print the sieve parameters instead of the table.
        #[arg(long, value_delimiter = ',')]
        constants: Option<Vec<u64>>,
        #[arg(long, default_value = "th2")]
        method: String,
    },
    /// Convert survey records between JSON and CSV.
    Export {
        input: PathBuf,
    },
}

impl Global {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn bits(&self) -> u32 {
        self.bits.unwrap_or(DEFAULT_BITS)
    }

    fn ell_budget(&self) -> u64 {
        self.ell_budget.unwrap_or(DEFAULT_ELL_BUDGET)
    }

    fn height(&self) -> u64 {
        self.height.unwrap_or(DEFAULT_HEIGHT)
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, CoreError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CoreError::InvalidInput(format!("not an integer: '{x}'"))))
        .collect()
}

fn parse_polys(a: &PolyArgs) -> Result<Vec<QSymplecticPoly>, CoreError> {
    a.polys.iter().map(|s| QSymplecticPoly::from_i64(&parse_ints(s)?, a.q)).collect()
}

fn curve(a: &CurveArgs) -> Result<CurveSpec, CoreError> {
    CurveSpec::new(parse_ints(&a.f)?, a.t, a.p, a.e)
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn format_of(g: &Global, default: Format) -> Result<Format, CoreError> {
    g.format.as_deref().map_or(Ok(default), str::parse)
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::CapExceeded(_) | CoreError::TooLarge(_) => 3,
            CoreError::InvariantViolated(_) => 4,
            CoreError::Io(_) => 1,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let g = &cli.global;
    let opts = DetectOptions { bits: g.bits(), height: g.height() };
    let out = match &cli.cmd {
        Cmd::Count { curve: c, n } => {
            let spec = curve(c)?;
            if (spec.q() as u128).checked_pow(*n).is_none_or(|v| v > spec.cap() as u128) {
                return Err(CoreError::TooLarge(format!("q^n = {}^{} exceeds the cap {}", spec.q(), n, spec.cap())).into());
            }
            let counts = (1..=*n).map(|i| curve_count(&spec, i)).collect::<Result<Vec<_>, _>>()?;
            pretty(&json!({ "q": spec.q(), "t": spec.t(), "counts": counts }))
        }
        Cmd::Lpoly { curve: c } => {
            let spec = curve(c)?;
            let p = lpolynomial(&spec)?;
            let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
            pretty(&json!({ "q": p.q(), "g": p.g(), "t": spec.t(), "coeffs": coeffs, "rh": rh_check(&p) }))
        }
        Cmd::RhCheck { polys } => {
            let rows: Vec<_> = parse_polys(polys)?
                .iter()
                .map(|p| {
                    json!({
                        "coeffs": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        "q_symplectic": is_q_symplectic(p.coeffs(), p.q()).unwrap_or(false),
                        "rh": rh_check(p),
                    })
                })
                .collect();
            pretty(&rows)
        }
        Cmd::Cert { polys } => pretty(&tuple_certificate(&parse_polys(polys)?, g.ell_budget())?),
        Cmd::Relations { polys } => {
            let rep = independence_report(&parse_polys(polys)?, g.ell_budget(), opts);
            pretty(&rep)
        }
        Cmd::Survey { config, aggregate } => {
            let mut c = SurveyConfig::load(config)?;
            c.seed = g.seed.unwrap_or(c.seed);
            c.bits = g.bits.unwrap_or(c.bits);
            c.ell_budget = g.ell_budget.unwrap_or(c.ell_budget);
            c.height = g.height.unwrap_or(c.height);
            c.jobs = g.jobs.or(c.jobs);
            let res = run_survey(&c)?;
            for (path, fmt) in [(&c.out_json, Format::Json), (&c.out_csv, Format::Csv)] {
                if let Some(path) = path {
                    fs::write(path, export_string(&res.records, fmt)?).map_err(CoreError::from)?;
                }
            }
            if let Some(path) = aggregate {
                fs::write(path, aggregate_json(&res.aggregate)).map_err(CoreError::from)?;
            }
            eprint!("{}", aggregate_json(&res.aggregate));
            if res.aggregate.contradictions > 0 {
                return Err(Failure {
                    code: 4,
                    msg: format!("{} records contradict the independence theorem", res.aggregate.contradictions),
                });
            }
            export_string(&res.records, format_of(g, Format::Json)?)?
        }
        Cmd::HondaTate { p, d } => {
            let sys = match d {
                1 => honda_tate_d1(*p)?,
                3 => honda_tate_d3(*p)?,
                _ => return Err(CoreError::InvalidInput(format!("d = {d}: only 1 and 3 are supported")).into()),
            };
            let poly = assemble_from_traces(&sys.traces, sys.p)?;
            let coeffs: Vec<String> = poly.coeffs().iter().map(|c| c.to_string()).collect();
            pretty(&json!({ "system": sys, "squarefree_parts": sys.squarefree_parts(), "lpoly": coeffs }))
        }
        Cmd::Fermat { m, q } => match q {
            None => pretty(&fermat_relation_system(*m)?),
            Some(q) => pretty(&fermat_verify_kernel(*m, *q, g.bits.unwrap_or(200))?),
        },
        Cmd::Distribution { g: genus, samples, bins, polys, q, n } => {
            if polys.is_empty() {
                let xs = mu_g_sample(*genus, *samples, g.seed());
                let (mean, var) = mean_variance(&xs);
                eprintln!("mean {mean:.6} variance {var:.6} (expected 0, {})", 4 * genus);
                let lim = 4.0 * *genus as f64;
                let mut buf = Vec::new();
                write_histogram_csv(&histogram(&xs, -lim, lim, *bins), &mut buf)?;
                String::from_utf8(buf).expect("csv is utf-8")
            } else {
                let q = q.ok_or_else(|| CoreError::InvalidInput("--q is required with --poly".into()))?;
                if polys.len() != 2 {
                    return Err(CoreError::InvalidInput("give exactly two --poly values".into()).into());
                }
                let pa = PolyArgs { polys: polys.clone(), q };
                let ps = parse_polys(&pa)?;
                let r1 = certified_roots(&ps[0], 128)?;
                let r2 = certified_roots(&ps[1], 128)?;
                let d = diff_sequence(&r1, &r2, *n)?;
                // the difference of two genus-g systems behaves like mu_g
                let ks = ks_compare(&d, ps[0].g(), *n, g.seed())?;
                let bias = sign_bias(&r1, &r2, *n)?;
                pretty(&json!({ "ks": ks, "sign_bias": bias, "n": n }))
            }
        }
        Cmd::SieveBound { g: gs, k, q, constants, method } => match constants {
            _ if method.parse::<Method>().is_err() => return Err(CoreError::UnknownMethod(method.clone()).into()),
            Some(c) => {
                if c.len() != 3 {
                    return Err(CoreError::InvalidInput("--constants takes N,r,delta".into()).into());
                }
                let method: Method = method.parse()?;
                let params = SieveParams::new(c[0], c[1], c[2], gs[0], k[0], q[0], k[0] as u32, method)?;
                pretty(&params)
            }
            None => {
                let rows = comparison_table(gs, k, q)?;
                let mut buf = Vec::new();
                write_table_csv(&rows, &mut buf)?;
                String::from_utf8(buf).expect("csv is utf-8")
            }
        },
        Cmd::Export { input } => {
            let text = fs::read_to_string(input).map_err(CoreError::from)?;
            let from = if input.extension().is_some_and(|e| e == "csv") { Format::Csv } else { Format::Json };
            let to = format_of(g, if from == Format::Json { Format::Csv } else { Format::Json })?;
            export_string(&parse_records(&text, from)?, to)?
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_path = cli.global.out.clone();
    match run(cli) {
        Ok(text) => {
            let res = match out_path {
                Some(p) => fs::write(&p, text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            match res {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
