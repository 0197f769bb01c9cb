//! Batch command-line interface: `constants`, `functionals`, `bound`,
//! `oracle {onsager,product,lemma2}` and `appendix {exponential,tf}`,
//! all emitting JSON or CSV. Exit code 0 iff every asserted check passed.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::bounds::{self, dirac_coefficient, TheoremConstants};
use crate::densities::{DensityDescriptor, RadialDensity};
use crate::error::{Error, Result};
use crate::functionals;
use crate::mu_model::{MuDescriptor, TrialMu};
use crate::oracle::{
    self, MCConfig, Orbital, PointConfig, ProductState, Smearing,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "coulomb-bound",
    version,
    about = "Lower bounds on the indirect Coulomb energy from the single-particle density"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Density descriptor: inline JSON or @file
    #[arg(long, global = true)]
    density: Option<String>,
    /// Smearing profile: uniform | power_law:<p> | JSON
    #[arg(long, global = true)]
    mu: Option<String>,
    /// Particle charge
    #[arg(long, global = true)]
    e: Option<f64>,
    /// Fixed bound parameter in (0,1)
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Optimize alpha instead of fixing it
    #[arg(long, global = true)]
    optimize: bool,
    /// Smearing scale
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Fixed smearing radius (oracle onsager)
    #[arg(long, global = true)]
    r0: Option<f64>,
    /// Nuclear-charge sweep limit (appendix tf)
    #[arg(long = "Z", global = true)]
    z_max: Option<f64>,
    /// Total charge / particle count
    #[arg(long = "N", global = true)]
    n: Option<f64>,
    /// RNG seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo sample count
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Resample the input density on a log grid: n,rmin,rmax
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker thread cap (env COULOMB_BOUND_THREADS as fallback)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// JSON config file; explicit flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Point count (oracle onsager)
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Number of seeded random configurations (oracle onsager)
    #[arg(long, global = true)]
    configs: Option<usize>,
    /// Orbital spec: exp:<c> | gaussian:<s>
    #[arg(long, global = true)]
    orbital: Option<String>,
    /// Mass-preserving dilation applied to every density in a sweep
    #[arg(long, global = true)]
    dilate: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound coefficients, both built-in and derived from a smearing profile
    Constants,
    /// L, both K' routes, D(rho,rho) and Q for one density
    Functionals,
    /// The three-term lower bound with comparisons to classical bounds
    Bound,
    /// Brute-force verification suites
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Scaling-law sweeps with fitted exponents
    Appendix {
        #[command(subcommand)]
        which: AppendixCommand,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Smearing inequality margins on seeded random point configurations
    Onsager,
    /// Product-state indirect energy against the bound
    Product,
    /// Monte Carlo check of the smearing error inequality
    Lemma2,
}

#[derive(Debug, Subcommand)]
enum AppendixCommand {
    /// Q(N) sweep over exponential densities, fitting the N^{-1/3} law
    Exponential,
    /// Thomas-Fermi sweep fitting the Z^{5/3}, Z^{4/3}, Z^{-1/3} laws
    Tf,
}

/// Optional config-file counterpart of the flags; explicit flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    density: Option<String>,
    mu: Option<String>,
    e: Option<f64>,
    alpha: Option<f64>,
    optimize: Option<bool>,
    lambda: Option<f64>,
    r0: Option<f64>,
    #[serde(rename = "Z")]
    z_max: Option<f64>,
    #[serde(rename = "N")]
    n: Option<f64>,
    seed: Option<u64>,
    samples: Option<u64>,
    grid: Option<String>,
    format: Option<String>,
    out: Option<PathBuf>,
    threads: Option<usize>,
    points: Option<usize>,
    configs: Option<usize>,
    orbital: Option<String>,
    dilate: Option<f64>,
}

struct Outcome {
    json: Value,
    csv: String,
    ok: bool,
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parse and execute; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = merge_config(&mut cli) {
        eprintln!("error: {e}");
        return 2;
    }
    let threads = cli.threads.or_else(|| {
        std::env::var("COULOMB_BOUND_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let result = match threads {
        Some(n) if n > 0 => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    return 1;
                }
            };
            pool.install(|| execute(&cli))
        }
        _ => execute(&cli),
    };
    match result {
        Ok(outcome) => {
            let format = cli.format.unwrap_or(OutputFormat::Json);
            let body = match format {
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&outcome.json)
                        .expect("reports are serializable");
                    s.push('\n');
                    s
                }
                OutputFormat::Csv => outcome.csv.clone(),
            };
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 1;
                }
            } else {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(body.as_bytes()).is_err() {
                    return 1;
                }
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn merge_config(cli: &mut Cli) -> Result<()> {
    let Some(path) = &cli.config else {
        return Ok(());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidDescriptor(format!("config {}: {e}", path.display())))?;
    let file: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidDescriptor(format!("config {}: {e}", path.display())))?;
    cli.density = cli.density.take().or(file.density);
    cli.mu = cli.mu.take().or(file.mu);
    cli.e = cli.e.or(file.e);
    cli.alpha = cli.alpha.or(file.alpha);
    cli.optimize |= file.optimize.unwrap_or(false);
    cli.lambda = cli.lambda.or(file.lambda);
    cli.r0 = cli.r0.or(file.r0);
    cli.z_max = cli.z_max.or(file.z_max);
    cli.n = cli.n.or(file.n);
    cli.seed = cli.seed.or(file.seed);
    cli.samples = cli.samples.or(file.samples);
    cli.grid = cli.grid.take().or(file.grid);
    cli.out = cli.out.take().or(file.out);
    cli.threads = cli.threads.or(file.threads);
    cli.points = cli.points.or(file.points);
    cli.configs = cli.configs.or(file.configs);
    cli.orbital = cli.orbital.take().or(file.orbital);
    cli.dilate = cli.dilate.or(file.dilate);
    if cli.format.is_none() {
        cli.format = match file.format.as_deref() {
            Some("json") => Some(OutputFormat::Json),
            Some("csv") => Some(OutputFormat::Csv),
            Some(other) => {
                return Err(Error::InvalidDescriptor(format!(
                    "config format must be json or csv, got `{other}`"
                )))
            }
            None => None,
        };
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Constants => cmd_constants(cli),
        Command::Functionals => cmd_functionals(cli),
        Command::Bound => cmd_bound(cli),
        Command::Oracle { which } => match which {
            OracleCommand::Onsager => cmd_oracle_onsager(cli),
            OracleCommand::Product => cmd_oracle_product(cli),
            OracleCommand::Lemma2 => cmd_oracle_lemma2(cli),
        },
        Command::Appendix { which } => match which {
            AppendixCommand::Exponential => cmd_appendix_exponential(cli),
            AppendixCommand::Tf => cmd_appendix_tf(cli),
        },
    }
}

fn parse_density(cli: &Cli) -> Result<RadialDensity> {
    let Some(spec) = &cli.density else {
        return Err(Error::InvalidDescriptor(
            "--density is required for this command".into(),
        ));
    };
    let text = if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidDescriptor(format!("density file {path}: {e}")))?
    } else {
        spec.clone()
    };
    let mut density = DensityDescriptor::parse(&text)?;
    if let Some(grid) = &cli.grid {
        let parts: Vec<&str> = grid.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidDescriptor(
                "grid override must be n,rmin,rmax".into(),
            ));
        }
        let n: usize = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidDescriptor(format!("bad grid size `{}`", parts[0])))?;
        let rmin: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidDescriptor(format!("bad rmin `{}`", parts[1])))?;
        let rmax: f64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::InvalidDescriptor(format!("bad rmax `{}`", parts[2])))?;
        density = density.sample_to_grid(n, rmin, rmax)?;
    }
    if let Some(s) = cli.dilate {
        density = density.dilate(s, true)?;
    }
    Ok(density)
}

fn parse_mu(cli: &Cli) -> Result<TrialMu> {
    match &cli.mu {
        None => Ok(TrialMu::uniform()),
        Some(spec) => MuDescriptor::parse_compact(spec),
    }
}

fn parse_orbital(cli: &Cli) -> Result<Orbital> {
    let spec = cli.orbital.as_deref().unwrap_or("exp:1");
    if let Some(c) = spec.strip_prefix("exp:") {
        let c: f64 = c
            .parse()
            .map_err(|_| Error::InvalidDescriptor(format!("bad orbital decay `{c}`")))?;
        if c <= 0.0 {
            return Err(Error::NonPositive { name: "c", value: c });
        }
        return Ok(Orbital::Exponential { c });
    }
    if let Some(s) = spec.strip_prefix("gaussian:") {
        let s: f64 = s
            .parse()
            .map_err(|_| Error::InvalidDescriptor(format!("bad orbital width `{s}`")))?;
        if s <= 0.0 {
            return Err(Error::NonPositive { name: "s", value: s });
        }
        return Ok(Orbital::Gaussian { s });
    }
    Err(Error::InvalidDescriptor(format!(
        "unknown orbital `{spec}` (expected exp:<c> or gaussian:<s>)"
    )))
}

fn csv_number(v: f64) -> String {
    format!("{v:.17e}")
}

fn cmd_constants(cli: &Cli) -> Result<Outcome> {
    let theorem = TheoremConstants::standard();
    let uniform = TrialMu::uniform();
    let mut rows = vec![
        ("C1", "(9/10)(4pi/3)^(1/3)", theorem.c1),
        ("C2", "(3/(4pi))^(5/6) sqrt(23pi/2310) sqrt(2pi^2)", theorem.c2),
        ("C3", "3pi/8", theorem.c3),
        ("c_D", "(3/4)(3/pi)^(1/3)", dirac_coefficient()),
        ("D_mu_uniform", "3/5", uniform.self_energy()),
        ("M1_uniform", "2pi/5", uniform.m1()),
        ("M2_uniform", "sqrt(23pi/2310)", uniform.m2()),
    ];
    let mut json_rows: Vec<Value> = Vec::new();
    let mut csv = String::from("name,expression,value,rounded_4dp\n");
    let mut mu_section = Value::Null;
    if let Some(spec) = &cli.mu {
        let mu = MuDescriptor::parse_compact(spec)?;
        let alpha = cli.alpha.unwrap_or(0.5);
        let coeffs = bounds::constants_from_mu(&mu.constants(), alpha)?;
        mu_section = json!({
            "mu": spec,
            "alpha": alpha,
            "M1": mu.m1(),
            "M2": mu.m2(),
            "D_mu": mu.self_energy(),
            "objective_d23_m113": mu.objective(),
            "coefficients": coeffs,
        });
        rows.push(("mu_M1", "(2pi/3) int |z|^2 mu", mu.m1()));
        rows.push(("mu_M2", "(int |z|^4 R^2)^(1/2)", mu.m2()));
        rows.push(("mu_D", "D(mu,mu)", mu.self_energy()));
    }
    for (name, expression, value) in &rows {
        json_rows.push(json!({
            "name": name,
            "expression": expression,
            "value": value,
            "rounded_4dp": (value * 1e4).round() / 1e4,
        }));
        csv.push_str(&format!(
            "{name},\"{expression}\",{},{:.4}\n",
            csv_number(*value),
            value
        ));
    }
    let json = json!({
        "schema": "coulomb-bound/constants/v1",
        "constants": json_rows,
        "mu_derived": mu_section,
    });
    Ok(Outcome { json, csv, ok: true })
}

fn cmd_functionals(cli: &Cli) -> Result<Outcome> {
    let density = parse_density(cli)?;
    let report = functionals::report(&density)?;
    let json = json!({
        "schema": "coulomb-bound/functionals/v1",
        "total_charge": density.total_charge(),
        "report": report,
    });
    let mut csv = String::from(
        "L,L_err,K_prime_fourier,K_prime_fourier_err,K_prime_double,K_prime_double_err,D_rho,D_rho_err,Q,Q_err\n",
    );
    let entry = |e: Option<crate::quad::Estimate>| match e {
        Some(e) => format!("{},{}", csv_number(e.value), csv_number(e.error)),
        None => ",".to_string(),
    };
    csv.push_str(&format!(
        "{},{},{},{},{}\n",
        entry(Some(report.l43)),
        entry(report.k_prime_fourier),
        entry(report.k_prime_double),
        entry(Some(report.d_rho)),
        entry(report.q),
    ));
    Ok(Outcome { json, csv, ok: true })
}

fn cmd_bound(cli: &Cli) -> Result<Outcome> {
    let density = parse_density(cli)?;
    let e = cli.e.unwrap_or(1.0);
    let l = functionals::l43(&density)?.value;
    let k_prime = functionals::k_fourier(&density)?.value;
    let breakdown = match (cli.alpha, cli.optimize) {
        (Some(alpha), false) => bounds::theorem_bound(l, k_prime, e, alpha)?,
        (None, _) => bounds::optimize_alpha(l, k_prime, e)?,
        (Some(_), true) => {
            return Err(Error::InvalidDescriptor(
                "--alpha and --optimize are mutually exclusive".into(),
            ))
        }
    };
    let json = json!({
        "schema": "coulomb-bound/bound/v1",
        "alpha_star": breakdown.alpha,
        "alpha_is_limit": breakdown.alpha_is_limit,
        "terms": [breakdown.term1, breakdown.term2, breakdown.term3],
        "total": breakdown.total,
        "comparisons": breakdown.comparisons,
        "inputs": breakdown.inputs,
    });
    let mut csv = String::from(
        "alpha,term1,term2,term3,total,dirac,lieb79,lieb_oxford_168,chan_handy_1636,best_known_lower_1234,L,K_prime,e\n",
    );
    csv.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        csv_number(breakdown.alpha),
        csv_number(breakdown.term1),
        csv_number(breakdown.term2),
        csv_number(breakdown.term3),
        csv_number(breakdown.total),
        csv_number(breakdown.comparisons.dirac),
        csv_number(breakdown.comparisons.lieb79),
        csv_number(breakdown.comparisons.lieb_oxford_168),
        csv_number(breakdown.comparisons.chan_handy_1636),
        csv_number(breakdown.comparisons.best_known_lower_1234),
        csv_number(l),
        csv_number(k_prime),
        csv_number(e),
    ));
    Ok(Outcome { json, csv, ok: true })
}

fn cmd_oracle_onsager(cli: &Cli) -> Result<Outcome> {
    let points = cli.points.unwrap_or(20);
    let seed = cli.seed.unwrap_or(7);
    let config_count = cli.configs.unwrap_or(1);
    let mu = parse_mu(cli)?;
    let smearing = match (cli.r0, cli.lambda) {
        (Some(r0), None) => Smearing::FixedRadius(r0),
        (None, lambda) => Smearing::LambdaRecipe(lambda.unwrap_or(2.0)),
        (Some(_), Some(_)) => {
            return Err(Error::InvalidDescriptor(
                "--r0 and --lambda are mutually exclusive".into(),
            ))
        }
    };
    let density = match &cli.density {
        Some(_) => Some(parse_density(cli)?),
        None => None,
    };
    let budget = 1e-6;
    let mut rows = Vec::new();
    let mut csv = String::from("config,seed,points,margin,coulomb_sum,rhs\n");
    let mut ok = true;
    for c in 0..config_count {
        let config_seed = seed.wrapping_add(c as u64);
        let cfg = PointConfig::random_in_ball(points, 3.0, 1.0, config_seed)?;
        let rho = match &density {
            Some(d) => d.clone(),
            None => RadialDensity::exponential_with_charge(points as f64, 1.0)?,
        };
        let report = oracle::onsager_margin(&cfg, &rho, &mu, smearing)?;
        ok &= report.margin >= -budget;
        csv.push_str(&format!(
            "{c},{config_seed},{points},{},{},{}\n",
            csv_number(report.margin),
            csv_number(report.coulomb_sum),
            csv_number(report.rhs),
        ));
        rows.push(json!({
            "config": c,
            "seed": config_seed,
            "report": report,
        }));
    }
    let json = json!({
        "schema": "coulomb-bound/oracle-onsager/v1",
        "points": points,
        "configs": config_count,
        "budget": budget,
        "all_nonnegative": ok,
        "results": rows,
    });
    Ok(Outcome { json, csv, ok })
}

fn cmd_oracle_product(cli: &Cli) -> Result<Outcome> {
    let n = cli.n.unwrap_or(2.0).round() as usize;
    let e = cli.e.unwrap_or(1.0);
    let orbital = parse_orbital(cli)?;
    let state = ProductState::new(orbital, n)?;
    let check = oracle::check_theorem(&state, e)?;
    let ok = if e > 0.0 && n >= 2 {
        check.margin_bound > 0.0 && check.margin_lieb_oxford > 0.0
    } else {
        check.margin_bound >= 0.0 && check.margin_lieb_oxford >= 0.0
    };
    let json = json!({
        "schema": "coulomb-bound/oracle-product/v1",
        "check": check,
        "margins_positive": ok,
    });
    let mut csv = String::from("n,e,indirect_energy,L,K_prime,bound_total,lieb_oxford,margin_bound,margin_lieb_oxford\n");
    csv.push_str(&format!(
        "{},{},{},{},{},{},{},{},{}\n",
        check.n,
        csv_number(check.e),
        csv_number(check.indirect_energy),
        csv_number(check.l43),
        csv_number(check.k_prime),
        csv_number(check.bound.map(|b| b.total).unwrap_or(0.0)),
        csv_number(check.lieb_oxford),
        csv_number(check.margin_bound),
        csv_number(check.margin_lieb_oxford),
    ));
    Ok(Outcome { json, csv, ok })
}

fn cmd_oracle_lemma2(cli: &Cli) -> Result<Outcome> {
    let lambda = cli.lambda.unwrap_or(4.0);
    let mu = parse_mu(cli)?;
    let density = match &cli.density {
        Some(_) => parse_density(cli)?,
        None => RadialDensity::exponential(1.0, 1.0)?,
    };
    let cfg = MCConfig {
        seed: cli.seed.unwrap_or(1),
        samples: cli.samples.unwrap_or(400_000),
    };
    let report = oracle::check_smearing_bound(&density, lambda, &mu, cfg)?;
    let ok = report.holds;
    let json = json!({
        "schema": "coulomb-bound/oracle-lemma2/v1",
        "report": report,
    });
    let mut csv =
        String::from("lambda,F,F_std_error,samples,seed,rhs,slack,leading_term_ratio,holds\n");
    csv.push_str(&format!(
        "{},{},{},{},{},{},{},{},{}\n",
        csv_number(report.lambda),
        csv_number(report.f_estimate.mean),
        csv_number(report.f_estimate.std_error),
        report.f_estimate.samples,
        report.f_estimate.seed,
        csv_number(report.rhs),
        csv_number(report.slack),
        csv_number(report.leading_term_ratio),
        report.holds,
    ));
    Ok(Outcome { json, csv, ok })
}

/// Least-squares slope of ln(y) against ln(x).
fn fit_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn cmd_appendix_exponential(cli: &Cli) -> Result<Outcome> {
    let tolerance = 1e-3;
    let mut rows = Vec::new();
    let mut csv = String::from("N,L,K_prime,Q\n");
    let mut q_points = Vec::new();
    for k in 1..=6u32 {
        let n = 10f64.powi(k as i32);
        let mut rho = RadialDensity::exponential_with_charge(n, 1.0)?;
        if let Some(s) = cli.dilate {
            rho = rho.dilate(s, true)?;
        }
        let l = functionals::l43(&rho)?.value;
        let k_prime = functionals::k_fourier(&rho)?.value;
        let q = k_prime / l;
        q_points.push((n, q));
        csv.push_str(&format!(
            "{},{},{},{}\n",
            csv_number(n),
            csv_number(l),
            csv_number(k_prime),
            csv_number(q)
        ));
        rows.push(json!({"N": n, "L": l, "K_prime": k_prime, "Q": q}));
    }
    let exponent = fit_log_slope(&q_points);
    let deviation = (exponent - (-1.0 / 3.0)).abs();
    let ok = deviation < tolerance;
    let json = json!({
        "schema": "coulomb-bound/appendix-exponential/v1",
        "sweep": rows,
        "fit": {
            "exponent": exponent,
            "target": -1.0/3.0,
            "deviation": deviation,
            "tolerance": tolerance,
            "within_tolerance": ok,
        },
    });
    Ok(Outcome { json, csv, ok })
}

fn cmd_appendix_tf(cli: &Cli) -> Result<Outcome> {
    let tolerance = 1e-3;
    let z_max = cli.z_max.unwrap_or(50.0).max(2.0).round() as u32;
    let base = match &cli.density {
        Some(_) => parse_density(cli)?,
        None => RadialDensity::exponential(1.0, 1.0)?,
    };
    let mut rows = Vec::new();
    let mut csv = String::from("Z,L,K_prime,Q\n");
    let (mut l_pts, mut k_pts, mut q_pts) = (Vec::new(), Vec::new(), Vec::new());
    for z in 1..=z_max {
        let z = z as f64;
        let rho = base.scale_tf(z)?;
        let l = functionals::l43(&rho)?.value;
        let k_prime = functionals::k_fourier(&rho)?.value;
        let q = k_prime / l;
        l_pts.push((z, l));
        k_pts.push((z, k_prime));
        q_pts.push((z, q));
        csv.push_str(&format!(
            "{},{},{},{}\n",
            csv_number(z),
            csv_number(l),
            csv_number(k_prime),
            csv_number(q)
        ));
        rows.push(json!({"Z": z, "L": l, "K_prime": k_prime, "Q": q}));
    }
    let fits = [
        ("L", fit_log_slope(&l_pts), 5.0 / 3.0),
        ("K_prime", fit_log_slope(&k_pts), 4.0 / 3.0),
        ("Q", fit_log_slope(&q_pts), -1.0 / 3.0),
    ];
    let ok = fits.iter().all(|(_, got, want)| (got - want).abs() < tolerance);
    let json = json!({
        "schema": "coulomb-bound/appendix-tf/v1",
        "sweep": rows,
        "fits": fits.iter().map(|(name, got, want)| json!({
            "quantity": name,
            "exponent": got,
            "target": want,
            "deviation": (got - want).abs(),
            "tolerance": tolerance,
        })).collect::<Vec<_>>(),
        "within_tolerance": ok,
    });
    Ok(Outcome { json, csv, ok })
}
