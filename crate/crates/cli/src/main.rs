use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fourier_gls::{k_const, make_group, make_measure_pair, opnorm_search, ChainMode, OpnormConfig};
use fourier_gls_cli::tables::{
    fundamental_csv, fundamental_table, scan_csv, scan_table, write_file,
};
use fourier_gls_cli::{parse_exponent, run_suite, CliError, PsiSpec, SuiteConfig};

/// Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 i/o error.
#[derive(Parser)]
#[command(
    name = "fgls",
    version,
    about = "Fourier transform checks on finite abelian groups"
)]
struct Cli {
    /// Overrides the configured seed.
    #[arg(long, global = true, env = "SEED")]
    seed: Option<u64>,
    /// Overrides every tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Chain mode: as-derived or as-written.
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<ChainMode>,
    /// Where to write the JSON report.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the suites described by a TOML config.
    Suite { config: PathBuf },
    /// Witness ratios on Z_N for N in [n_min, n_max].
    Scan {
        p: String,
        q: String,
        #[arg(value_name = "A")]
        mass: f64,
        n_min: usize,
        n_max: usize,
        out: PathBuf,
    },
    /// Tabulate a fundamental function, e.g. `fundamental power:1 phi.csv`.
    Fundamental {
        psi: String,
        out: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.0625,0.125,0.25,0.5,1,2,4,8,16"
        )]
        deltas: Vec<f64>,
        /// Exponent range `s1,s2` (defaults to the support).
        #[arg(long)]
        range: Option<String>,
    },
    /// Estimate the operator norm from L_p(X) to L_q(Y).
    Opnorm {
        /// Invariant factors, comma separated.
        factors: String,
        #[arg(value_name = "A")]
        mass: f64,
        p: String,
        q: String,
    },
}

fn parse_mode(s: &str) -> Result<ChainMode, String> {
    s.parse().map_err(|e: fourier_gls::Error| e.to_string())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|e| CliError::config(format!("bad {what} {t:?}: {e}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Cmd::Suite { config } => {
            let mut cfg = SuiteConfig::load(&config)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            if let Some(tol) = cli.tolerance {
                cfg.override_tolerances(tol);
            }
            if let Some(mode) = cli.mode {
                cfg.mode = mode;
            }
            let report = run_suite(&cfg)?;
            if let Some(path) = &cli.json {
                report.write_json(path)?;
            }
            print!("{}", report.summary_text());
            Ok(report.exit_code())
        }
        Cmd::Scan {
            p,
            q,
            mass,
            n_min,
            n_max,
            out,
        } => {
            let rows = scan_table(parse_exponent(&p)?, parse_exponent(&q)?, mass, n_min, n_max)?;
            write_file(&out, &scan_csv(&rows))?;
            println!("{} rows written to {}", rows.len(), out.display());
            Ok(0)
        }
        Cmd::Fundamental {
            psi,
            out,
            deltas,
            range,
        } => {
            let spec: PsiSpec = psi.parse()?;
            let range = match range {
                Some(r) => match parse_list::<f64>(&r, "range end")?[..] {
                    [a, b] => Some((a, b)),
                    _ => return Err(CliError::config("range needs exactly s1,s2")),
                },
                None => None,
            };
            let rows = fundamental_table(&spec, &deltas, range)?;
            write_file(&out, &fundamental_csv(&rows))?;
            println!("{} rows written to {}", rows.len(), out.display());
            Ok(0)
        }
        Cmd::Opnorm {
            factors,
            mass,
            p,
            q,
        } => {
            let group = make_group(&parse_list::<usize>(&factors, "factor")?)?;
            let pair = make_measure_pair(&group, mass)?;
            let (p, q) = (parse_exponent(&p)?, parse_exponent(&q)?);
            let cfg = OpnormConfig {
                seed: cli.seed.unwrap_or(0),
                ..OpnormConfig::default()
            };
            let res = opnorm_search(&pair, p, q, &cfg)?;
            let k = k_const(p, q, mass)?;
            let tol = cli.tolerance.unwrap_or(1e-9);
            let sound = res.estimate <= k * (1.0 + tol);
            println!(
                "estimate {:.12} K {:.12} ratio {:.12} start {} converged {}",
                res.estimate,
                k,
                res.estimate / k,
                res.start,
                res.converged
            );
            if let Some(path) = &cli.json {
                let doc = serde_json::json!({
                    "schema": 1,
                    "factors": group.factors(),
                    "A": mass,
                    "p": p,
                    "q": q,
                    "estimate": res.estimate,
                    "K": k,
                    "start": res.start,
                    "starts": res.starts,
                    "converged": res.converged,
                    "config": cfg,
                });
                write_file(
                    path,
                    &(serde_json::to_string_pretty(&doc).expect("json") + "\n"),
                )?;
            }
            Ok(if sound { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
