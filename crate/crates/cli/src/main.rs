mod config;

use anyhow::{anyhow, bail, Context, Result};
use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use config::{BilinearSpec, BoxSpec, ConfigFile, Theta};
use ksieve::approx::{t_value, ApproxTarget};
use ksieve::arith::{kloosterman_sum, weil_bound, Modulus};
use ksieve::bilinear::{
    bilinear_form_direct, bilinear_form_dual, bound_ratio_prop35, dispersion_profile, norm_constants,
    DispersionSequence, WindowedSequence, DIRECT_LIMIT, SPIKE_EPS,
};
use ksieve::fmt::{round_json, sig10};
use ksieve::gpf::{scan, write_scan_csv};
use ksieve::harman::{fig2_boundaries, fig2_grid, harman_report, write_fig2_csv, HarmanConfig, THETA_KIM_SARNAK};
use ksieve::hyperbola::{cg_bound, count_points, Box, DiscreteInterval};
use ksieve::sieve::build_table;
use ksieve::verify;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(name = "ksieve", version, about = "Kloosterman sums, sieve functions and the Harman sieve exponent for n² + 1")]
struct Cli {
    /// Write results to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Run file of `key = value` lines; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// S(m, n; c) with its Weil bound
    Kloosterman {
        #[arg(allow_negative_numbers = true)]
        m: Option<i64>,
        #[arg(allow_negative_numbers = true)]
        n: Option<i64>,
        c: Option<u64>,
    },
    /// T_{M,N}(alpha, beta) and its minimizer
    Tvalue {
        #[arg(value_name = "M")]
        big_m: Option<f64>,
        #[arg(value_name = "N")]
        big_n: Option<f64>,
        #[arg(allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(allow_negative_numbers = true)]
        beta: Option<f64>,
    },
    /// Points on xy = lambda (mod c) in a box `xlo:xhi,ylo:yhi`
    Hyperbola {
        c: Option<u64>,
        #[arg(allow_negative_numbers = true)]
        lambda: Option<i64>,
        #[arg(value_name = "BOX", allow_hyphen_values = true)]
        bx: Option<BoxSpec>,
    },
    /// Bilinear form of e(m alpha), e(n beta) against S(sm, sn; c);
    /// spec `c=101,s=1,alpha=0.25,I=1:20,beta=0.5,J=1:30`
    Bilinear { spec: Option<BilinearSpec> },
    /// Fourier profile of dispersion coefficients
    Dispersion {
        #[arg(value_name = "H")]
        h: Option<f64>,
        #[arg(value_name = "L")]
        l: Option<f64>,
        ell1: Option<u64>,
        ell2: Option<u64>,
        #[arg(allow_negative_numbers = true)]
        a1: Option<f64>,
        #[arg(allow_negative_numbers = true)]
        a2: Option<f64>,
        /// Exponent in the spike radius H^(eps - 1)
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Buchstab omega and linear sieve F, f on a grid
    SieveTable {
        step: Option<f64>,
        umax: Option<f64>,
        /// Keep every k-th grid node
        #[arg(long)]
        stride: Option<usize>,
    },
    /// G1..G6, deficit, budget and omega_bar
    Harman {
        /// Fraction like 7/32 or a decimal
        #[arg(long)]
        theta: Option<Theta>,
        /// Monte Carlo samples for G4
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Type I / Type II boundary curves on [1, 1.4]
    Fig2 {
        #[arg(long)]
        theta: Option<Theta>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Largest prime factors of n² + 1 for lo <= n <= hi
    GpfScan { lo: Option<u64>, hi: Option<u64> },
    /// Run every property suite
    Verify,
}

const GLOBAL_KEYS: [&str; 4] = ["command", "output", "format", "threads"];

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Kloosterman { .. } => "kloosterman",
            Command::Tvalue { .. } => "tvalue",
            Command::Hyperbola { .. } => "hyperbola",
            Command::Bilinear { .. } => "bilinear",
            Command::Dispersion { .. } => "dispersion",
            Command::SieveTable { .. } => "sieve-table",
            Command::Harman { .. } => "harman",
            Command::Fig2 { .. } => "fig2",
            Command::GpfScan { .. } => "gpf-scan",
            Command::Verify => "verify",
        }
    }

    fn keys(&self) -> &'static [&'static str] {
        match self {
            Command::Kloosterman { .. } => &["m", "n", "c"],
            Command::Tvalue { .. } => &["M", "N", "alpha", "beta"],
            Command::Hyperbola { .. } => &["c", "lambda", "box"],
            Command::Bilinear { .. } => &["spec"],
            Command::Dispersion { .. } => &["H", "L", "ell1", "ell2", "a1", "a2", "eps"],
            Command::SieveTable { .. } => &["step", "umax", "stride"],
            Command::Harman { .. } => &["theta", "samples", "seed"],
            Command::Fig2 { .. } => &["theta", "points"],
            Command::GpfScan { .. } => &["lo", "hi"],
            Command::Verify => &[],
        }
    }
}

/// Flag value, else run-file value, else `default`.
fn pick<T: FromStr>(flag: Option<T>, cfg: &ConfigFile, key: &str, default: Option<T>) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Some(v) = cfg.get(key)? {
        return Ok(v);
    }
    default.ok_or_else(|| anyhow!("missing parameter `{key}`"))
}

enum Outcome {
    Done(Vec<u8>),
    VerifyFailed(Vec<u8>),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let command = match cli.command {
        Some(c) => c,
        None => {
            let name = cfg
                .raw("command")
                .ok_or_else(|| anyhow!("no command given (pass one, or set `command` in the config file)"))?;
            match Cli::try_parse_from(["ksieve", name]) {
                Ok(Cli { command: Some(c), .. }) => c,
                _ => bail!("unknown command `{name}` in config file"),
            }
        }
    };
    let known: Vec<&str> = GLOBAL_KEYS.iter().chain(command.keys()).copied().collect();
    if let Some(k) = cfg.unknown(&known).first() {
        bail!("config key `{k}` does not apply to `{}`", command.name());
    }
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => cfg.get::<usize>("threads")?,
    };
    if let Some(t) = threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot size the worker pool")?;
    }
    let format = match cli.format {
        Some(f) => Some(f),
        None => cfg
            .raw("format")
            .map(|v| Format::from_str(v, true).map_err(|_| anyhow!("config key `format` must be csv or json, got `{v}`")))
            .transpose()?,
    };
    let output = cli.output.or_else(|| cfg.raw("output").map(PathBuf::from));

    let outcome = execute(command, &cfg, format)?;
    let (bytes, code) = match outcome {
        Outcome::Done(b) => (b, ExitCode::SUCCESS),
        Outcome::VerifyFailed(b) => (b, ExitCode::from(2)),
    };
    match output {
        Some(p) => std::fs::write(&p, &bytes).with_context(|| format!("cannot write {}", p.display()))?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(code)
}

fn json_bytes(mut v: Value) -> Result<Vec<u8>> {
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => sig10(x),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// One CSV header and row from ordered (key, value) pairs.
fn record_csv(fields: &[(&str, Value)]) -> Vec<u8> {
    let head: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
    let row: Vec<String> = fields.iter().map(|(_, v)| cell(v)).collect();
    format!("{}\n{}\n", head.join(","), row.join(",")).into_bytes()
}

fn record(fields: Vec<(&str, Value)>, format: Option<Format>) -> Result<Vec<u8>> {
    match format.unwrap_or(Format::Json) {
        Format::Csv => Ok(record_csv(&fields)),
        Format::Json => json_bytes(Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())),
    }
}

fn execute(command: Command, cfg: &ConfigFile, format: Option<Format>) -> Result<Outcome> {
    let bytes = match command {
        Command::Kloosterman { m, n, c } => {
            let m = pick(m, cfg, "m", None)?;
            let n = pick(n, cfg, "n", None)?;
            let c = Modulus::new(pick(c, cfg, "c", None)?)?;
            let s = kloosterman_sum(m, n, &c);
            let bound = weil_bound(m, n, &c);
            record(
                vec![
                    ("m", json!(m)),
                    ("n", json!(n)),
                    ("c", json!(c.get())),
                    ("value", json!(s)),
                    ("weil_bound", json!(bound)),
                    ("ratio", json!(if bound > 0.0 { s.abs() / bound } else { 0.0 })),
                ],
                format,
            )?
        }
        Command::Tvalue { big_m, big_n, alpha, beta } => {
            let target = ApproxTarget::new(
                pick(big_m, cfg, "M", None)?,
                pick(big_n, cfg, "N", None)?,
                pick(alpha, cfg, "alpha", None)?,
                pick(beta, cfg, "beta", None)?,
            )?;
            let r = t_value(&target);
            record(
                vec![
                    ("M", json!(target.m)),
                    ("N", json!(target.n)),
                    ("alpha", json!(target.alpha)),
                    ("beta", json!(target.beta)),
                    ("t_star", json!(r.t_star)),
                    ("value", json!(r.value)),
                    ("alpha_dist", json!(r.alpha_dist)),
                    ("beta_dist", json!(r.beta_dist)),
                ],
                format,
            )?
        }
        Command::Hyperbola { c, lambda, bx } => {
            let c = Modulus::new(pick(c, cfg, "c", None)?)?;
            let lambda = pick(lambda, cfg, "lambda", None)?;
            let spec: BoxSpec = pick(bx, cfg, "box", None)?;
            let b = Box::new(
                DiscreteInterval::closed(spec.x.lo, spec.x.hi),
                DiscreteInterval::closed(spec.y.lo, spec.y.hi),
            );
            let count = count_points(&c, lambda, &b);
            let bound = cg_bound(&c, lambda, &b, None).ok();
            record(
                vec![
                    ("c", json!(c.get())),
                    ("lambda", json!(lambda)),
                    ("x_lo", json!(spec.x.lo)),
                    ("x_hi", json!(spec.x.hi)),
                    ("y_lo", json!(spec.y.lo)),
                    ("y_hi", json!(spec.y.hi)),
                    ("count", json!(count)),
                    ("t_term", json!(bound.map(|b| b.t_term))),
                    ("gcd_term", json!(bound.map(|b| b.gcd_term))),
                    ("bound", json!(bound.map(|b| b.total()))),
                ],
                format,
            )?
        }
        Command::Bilinear { spec } => {
            let s: BilinearSpec = pick(spec, cfg, "spec", None)?;
            let c = Modulus::new(s.c)?;
            let i = DiscreteInterval::closed(s.i.lo, s.i.hi);
            let j = DiscreteInterval::closed(s.j.lo, s.j.hi);
            let a = WindowedSequence::phase(s.alpha, i)?;
            let b = WindowedSequence::phase(s.beta, j)?;
            let dual = bilinear_form_dual(&a, &b, s.s, &c)?;
            let direct = (i.len * j.len <= DIRECT_LIMIT)
                .then(|| bilinear_form_direct(&a, &b, s.s, &c))
                .transpose()?;
            let ratio = bound_ratio_prop35((s.alpha, i), (s.beta, j), s.s, &c).ok();
            record(
                vec![
                    ("c", json!(s.c)),
                    ("s", json!(s.s)),
                    ("alpha", json!(s.alpha)),
                    ("beta", json!(s.beta)),
                    ("M", json!(i.len)),
                    ("N", json!(j.len)),
                    ("dual_re", json!(dual.re)),
                    ("dual_im", json!(dual.im)),
                    ("direct_re", json!(direct.map(|d| d.re))),
                    ("direct_im", json!(direct.map(|d| d.im))),
                    ("abs", json!(dual.norm())),
                    ("bound", json!(ratio.map(|r| r.bound))),
                    ("ratio", json!(ratio.map(|r| r.ratio))),
                ],
                format,
            )?
        }
        Command::Dispersion { h, l, ell1, ell2, a1, a2, eps } => {
            let h = pick(h, cfg, "H", None)?;
            let l = pick(l, cfg, "L", None)?;
            let (ell1, ell2) = (pick(ell1, cfg, "ell1", None)?, pick(ell2, cfg, "ell2", None)?);
            let (a1, a2) = (pick(a1, cfg, "a1", None)?, pick(a2, cfg, "a2", None)?);
            let eps = pick(eps, cfg, "eps", Some(SPIKE_EPS))?;
            let w = ksieve::bilinear::default_window();
            let d = DispersionSequence::new(h, l, ell1, ell2, a1, a2, w, w)?;
            let p = dispersion_profile(&d, None, eps)?;
            match format.unwrap_or(Format::Json) {
                Format::Csv => {
                    let r = d.spike_radius(eps);
                    let mut out = String::from("xi,re,im,abs,in_spike\n");
                    for (k, v) in p.values.iter().enumerate() {
                        let xi = p.xi(k);
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            sig10(xi),
                            sig10(v.re),
                            sig10(v.im),
                            sig10(v.norm()),
                            d.in_spike(xi, r)
                        ));
                    }
                    out.into_bytes()
                }
                Format::Json => {
                    let k = norm_constants(&d, eps)?;
                    let (peak_xi, peak_abs) = p.peak();
                    json_bytes(json!({
                        "sequence": d,
                        "eps": eps,
                        "grid_size": p.grid_size,
                        "l1_norm": p.l1_norm,
                        "l2_norm": p.l2_norm,
                        "concentration": p.concentration,
                        "k_l1": k.k_l1,
                        "k_l2": k.k_l2,
                        "peak_xi": peak_xi,
                        "peak_abs": peak_abs,
                    }))?
                }
            }
        }
        Command::SieveTable { step, umax, stride } => {
            let t = build_table(pick(step, cfg, "step", None)?, pick(umax, cfg, "umax", None)?)?;
            let stride = pick(stride, cfg, "stride", Some(1))?;
            if stride == 0 {
                bail!("stride must be at least 1");
            }
            match format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    t.write_csv(&mut buf, stride)?;
                    buf
                }
                Format::Json => {
                    let rows: Vec<Value> = (0..t.len())
                        .step_by(stride)
                        .map(|i| json!({"u": t.node(i), "omega": t.omega[i], "F": t.big_f[i], "f": t.small_f[i]}))
                        .collect();
                    json_bytes(json!({
                        "step": t.step,
                        "u_max": t.u_max,
                        "euler_gamma": t.euler_gamma,
                        "claimed_error": t.claimed_error(),
                        "rows": rows,
                    }))?
                }
            }
        }
        Command::Harman { theta, samples, seed } => {
            let theta = pick(theta, cfg, "theta", Some(Theta::Exact(num_rational::Ratio::new(7, 32))))?;
            let defaults = HarmanConfig::default();
            let hc = HarmanConfig {
                theta: theta.value(),
                samples: pick(samples, cfg, "samples", Some(defaults.samples))?,
                seed: pick(seed, cfg, "seed", Some(defaults.seed))?,
                ..defaults
            };
            let report = harman_report(&hc)?;
            match format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut v = serde_json::to_value(&report)?;
                    v["theta_input"] = json!(theta.to_string());
                    json_bytes(v)?
                }
                Format::Csv => {
                    let mut out = String::from("quantity,value,abs_error\n");
                    for (i, g) in report.g.iter().enumerate() {
                        out.push_str(&format!("G{},{},{}\n", i + 1, sig10(g.value), sig10(g.abs_error)));
                    }
                    for (name, v) in [
                        ("deficit", report.deficit),
                        ("budget", report.budget),
                        ("omega_bar", report.omega_bar),
                    ] {
                        out.push_str(&format!("{name},{},\n", sig10(v)));
                    }
                    out.push_str(&format!("theta,{},\nsamples,{},\nseed,{},\n", theta, hc.samples, hc.seed));
                    out.into_bytes()
                }
            }
        }
        Command::Fig2 { theta, points } => {
            let theta = pick(theta, cfg, "theta", Some(Theta::Decimal(THETA_KIM_SARNAK)))?;
            let points = pick(points, cfg, "points", Some(401))?;
            let rows = fig2_boundaries(theta.value(), &fig2_grid(points))?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_fig2_csv(&rows, &mut buf)?;
                    buf
                }
                Format::Json => json_bytes(json!({"theta": theta.value(), "rows": rows}))?,
            }
        }
        Command::GpfScan { lo, hi } => {
            let lo = pick(lo, cfg, "lo", None)?;
            let hi = pick(hi, cfg, "hi", None)?;
            let fmt = format.unwrap_or(Format::Csv);
            let s = scan(lo, hi, fmt == Format::Csv)?;
            match fmt {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_scan_csv(&s.records, &mut buf)?;
                    buf
                }
                Format::Json => json_bytes(serde_json::to_value(&s)?)?,
            }
        }
        Command::Verify => {
            let checks = verify::run_all();
            let ok = checks.iter().all(|c| c.passed);
            let bytes = match format {
                Some(Format::Json) => json_bytes(serde_json::to_value(&checks)?)?,
                Some(Format::Csv) => {
                    let mut out = String::from("suite,passed,detail\n");
                    for c in &checks {
                        out.push_str(&format!("{},{},\"{}\"\n", c.name, c.passed, c.detail.replace('"', "\"\"")));
                    }
                    out.into_bytes()
                }
                None => checks.iter().map(|c| c.line() + "\n").collect::<String>().into_bytes(),
            };
            return Ok(if ok { Outcome::Done(bytes) } else { Outcome::VerifyFailed(bytes) });
        }
    };
    Ok(Outcome::Done(bytes))
}
