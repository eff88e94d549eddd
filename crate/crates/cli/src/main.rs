//! `satfarey`: batch front-end for generating saturated Farey sets, running
//! the verification sweeps and exporting count and gap reports.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use satfarey::distribution::{convergence_report, monoid_theory_count, rel_error, write_report_csv};
use satfarey::export::fmt_real;
use satfarey::gap::empirical::{enumerate_h_all, lambda_grid, write_cdf_csv, CdfRow, GapTable};
use satfarey::gap::theory::{c_any, gap_cdf_theory, QuadConfig};
use satfarey::monoid::{count_s_q_below, enumerate_s_q, write_matrices_csv};
use satfarey::saturated::{generate_by_filter, generate_by_insertion, insertion_tree, write_tree_csv};
use satfarey::verify::{check_h_minimality, check_mediant_birth, check_nu_dichotomy, verify_all, Sweep};
use satfarey::{h_value, Exec, Fraction};

/// Directory that relative `--out` paths are resolved against.
const OUT_DIR_ENV: &str = "SATFAREY_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "satfarey", version, about = "SL(2,N)-saturated Farey fractions SF_Q and their gap statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Output file; standard output when absent. Relative paths are taken
    /// under $SATFAREY_OUT_DIR when that is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads. Changes run time only, never the output.
    #[arg(long, global = true, default_value_t = default_threads())]
    parallelism: usize,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Filter,
    Insertion,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List SF_Q* = {0/1} ∪ {a/q : h(a/q) <= Q} with h of each element.
    Generate {
        #[arg(long = "Q")]
        q: i64,
        #[arg(long, value_enum, default_value_t = Method::Filter)]
        method: Method,
    },
    /// Mediant-insertion tree: every fraction with h <= Q_max, its birth
    /// h and its two parents.
    Tree {
        #[arg(long = "Q-max")]
        q_max: i64,
    },
    /// Exhaustive checks for every order up to Q_max; exit status 2 on the
    /// first counterexample.
    Verify {
        #[arg(long = "Q-max")]
        q_max: i64,
        /// Also run the minimal-trace, mediant-birth and two-step ν sweeps.
        #[arg(long)]
        extended: bool,
    },
    /// #(SF_Q ∩ [0, β]) against (Q²/2ζ(2)) log(2(1+β)/(2+β)).
    Dist {
        /// Strictly ascending list of orders.
        #[arg(long = "Q", value_delimiter = ',', required = true)]
        q: Vec<i64>,
        /// Exact rationals in [0, 1], e.g. 1/2,3/4,1.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        betas: Vec<Fraction>,
    },
    /// Gap distribution G_Q(λ) of SF_Q, gaps scaled by N(Q), on a λ grid.
    Gaps {
        #[arg(long = "Q")]
        q: i64,
        /// start:stop:step
        #[arg(long, value_parser = parse_grid)]
        lambda: Grid,
        /// Step of the forward difference density (G(λ+s) - G(λ))/s.
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        /// Add the limiting G(λ) column. Costly for λ far above A.
        #[arg(long)]
        theory: bool,
    },
    /// The constants C_r(η) with #H_{Q,r}(η) ~ C_r(η) Q².
    Theory {
        #[arg(long)]
        eta: f64,
        /// Run lengths; every r < η when absent.
        #[arg(long, value_delimiter = ',')]
        r: Vec<u32>,
    },
    /// #H_{Q,r}(η), runs of r Farey steps spanning at most η/Q², against
    /// C_r(η) Q².
    Hcount {
        #[arg(long = "Q")]
        q: i64,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u32>,
        #[arg(long)]
        eta: f64,
    },
    /// The monoid slice S_Q of matrices with trace <= Q, or with --betas the
    /// counts #{M ∈ S_Q : Ψ(M) <= β} against (Q²/2ζ(2)) log(1+β).
    Monoid {
        #[arg(long = "Q")]
        q: i64,
        #[arg(long, value_delimiter = ',')]
        betas: Vec<Fraction>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Grid {
    start: f64,
    stop: f64,
    step: f64,
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, c] = parts[..] else {
        return Err(format!("expected start:stop:step, got {s:?}"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    let g = Grid { start: num(a)?, stop: num(b)?, step: num(c)? };
    if !(g.step > 0.0) || g.stop < g.start {
        return Err(format!("need step > 0 and stop >= start in {s:?}"));
    }
    Ok(g)
}

/// Outcome of a run that did not fail.
enum Outcome {
    Done,
    VerificationFailed,
}

struct UsageError(String);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

impl std::fmt::Debug for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn check_order(q: i64, min: i64, name: &str) -> anyhow::Result<()> {
    if q < min {
        return Err(usage(format!("{name} must be at least {min}, got {q}")));
    }
    Ok(())
}

fn validate(cli: &Cli) -> anyhow::Result<()> {
    if cli.common.parallelism == 0 {
        return Err(usage("--parallelism must be at least 1"));
    }
    let unit = |b: &Fraction| *b <= Fraction::ONE;
    match &cli.command {
        Command::Generate { q, .. } => check_order(*q, 3, "--Q"),
        Command::Tree { q_max } => check_order(*q_max, 4, "--Q-max"),
        Command::Verify { q_max, .. } => check_order(*q_max, 3, "--Q-max"),
        Command::Dist { q, betas } => {
            for &x in q {
                check_order(x, 3, "--Q")?;
            }
            if q.windows(2).any(|w| w[0] >= w[1]) {
                return Err(usage("--Q values must be strictly ascending"));
            }
            if !betas.iter().all(unit) {
                return Err(usage("--betas must lie in [0, 1]"));
            }
            Ok(())
        }
        Command::Gaps { q, step, .. } => {
            check_order(*q, 3, "--Q")?;
            if !(*step > 0.0) {
                return Err(usage("--step must be positive"));
            }
            Ok(())
        }
        Command::Theory { eta, r } => {
            if !eta.is_finite() || *eta < 0.0 {
                return Err(usage("--eta must be a finite non-negative number"));
            }
            if r.contains(&0) {
                return Err(usage("--r values must be at least 1"));
            }
            Ok(())
        }
        Command::Hcount { q, r, eta } => {
            check_order(*q, 4, "--Q")?;
            if !eta.is_finite() || *eta < 0.0 {
                return Err(usage("--eta must be a finite non-negative number"));
            }
            if r.contains(&0) {
                return Err(usage("--r values must be at least 1"));
            }
            Ok(())
        }
        Command::Monoid { q, betas } => {
            check_order(*q, 3, "--Q")?;
            if !betas.iter().all(unit) {
                return Err(usage("--betas must lie in [0, 1]"));
            }
            Ok(())
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    let Some(p) = path else {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    };
    let p = match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
        _ => p.clone(),
    };
    if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
    Ok(Box::new(BufWriter::new(f)))
}

fn write_json<T: Serialize>(value: &T, mut out: impl Write) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn setup_pool(threads: usize) -> Exec {
    #[cfg(feature = "parallel")]
    {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::warn!("thread pool already initialised: {e}");
        }
    }
    if threads == 1 {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    validate(&cli)?;
    let exec = setup_pool(cli.common.parallelism);
    let fmt = cli.common.format;
    let mut out = open_out(&cli.common.out)?;
    let outcome = match cli.command {
        Command::Generate { q, method } => {
            let seq = match method {
                Method::Filter => generate_by_filter(q)?,
                Method::Insertion => generate_by_insertion(q)?,
            };
            match fmt {
                Format::Csv => seq.write_csv(&mut out)?,
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        num: i64,
                        den: i64,
                        h: i64,
                    }
                    let rows: Vec<Row> =
                        seq.elems().iter().map(|&f| Row { num: f.num(), den: f.den(), h: h_value(f).get() }).collect();
                    write_json(&rows, &mut out)?;
                }
            }
            Outcome::Done
        }
        Command::Tree { q_max } => {
            let t = insertion_tree(q_max)?;
            match fmt {
                Format::Csv => write_tree_csv(&t, &mut out)?,
                Format::Json => write_json(&t, &mut out)?,
            }
            Outcome::Done
        }
        Command::Verify { q_max, extended } => {
            let mut sweeps = verify_all(q_max, exec)?;
            if extended {
                sweeps.push(check_h_minimality(q_max, exec)?);
                sweeps.push(check_mediant_birth(q_max, exec)?);
                sweeps.push(check_nu_dichotomy(q_max, exec)?);
            }
            report_sweeps(&sweeps, fmt, &mut out)?
        }
        Command::Dist { q, betas } => {
            let rep = convergence_report(&q, &betas, exec)?;
            match fmt {
                Format::Csv => write_report_csv(&rep.rows, &mut out)?,
                Format::Json => write_json(&rep, &mut out)?,
            }
            Outcome::Done
        }
        Command::Gaps { q, lambda, step, theory } => {
            let rows = gap_rows(q, lambda, step, theory, exec)?;
            match fmt {
                Format::Csv => write_cdf_csv(&rows, &mut out)?,
                Format::Json => write_json(&rows, &mut out)?,
            }
            Outcome::Done
        }
        Command::Theory { eta, r } => {
            let rs: Vec<u32> = if r.is_empty() { (1..).take_while(|&k| (k as f64) < eta).collect() } else { r };
            let cfg = QuadConfig::default().with_exec(exec);
            #[derive(Serialize)]
            struct Row {
                r: u32,
                eta: f64,
                c_r: f64,
            }
            let rows: Vec<Row> = rs.iter().map(|&r| Row { r, eta, c_r: c_any(r, eta, &cfg) }).collect();
            match fmt {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["r", "eta", "c_r"])?;
                    for row in &rows {
                        w.write_record(&[row.r.to_string(), fmt_real(row.eta), fmt_real(row.c_r)])?;
                    }
                    w.flush()?;
                }
                Format::Json => write_json(&rows, &mut out)?,
            }
            Outcome::Done
        }
        Command::Hcount { q, r, eta } => {
            let r_max = *r.iter().max().expect("required");
            let counts = enumerate_h_all(q, r_max, eta, exec)?;
            let cfg = QuadConfig::default().with_exec(exec);
            let qq = (q as f64) * (q as f64);
            #[derive(Serialize)]
            struct Row {
                q: i64,
                r: u32,
                eta: f64,
                count: u64,
                c_r_theory: f64,
                ratio: f64,
            }
            let rows: Vec<Row> = r
                .iter()
                .map(|&r| {
                    let count = if (r as f64) < eta { counts[r as usize - 1] } else { 0 };
                    let c_r_theory = c_any(r, eta, &cfg);
                    let emp = count as f64 / qq;
                    let ratio = if c_r_theory == 0.0 { if emp == 0.0 { 1.0 } else { f64::INFINITY } } else { emp / c_r_theory };
                    Row { q, r, eta, count, c_r_theory, ratio }
                })
                .collect();
            match fmt {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["Q", "r", "eta", "count", "c_r_theory", "ratio"])?;
                    for row in &rows {
                        w.write_record(&[
                            row.q.to_string(),
                            row.r.to_string(),
                            fmt_real(row.eta),
                            row.count.to_string(),
                            fmt_real(row.c_r_theory),
                            fmt_real(row.ratio),
                        ])?;
                    }
                    w.flush()?;
                }
                Format::Json => write_json(&rows, &mut out)?,
            }
            Outcome::Done
        }
        Command::Monoid { q, betas } => {
            if betas.is_empty() {
                let ms = enumerate_s_q(q)?;
                match fmt {
                    Format::Csv => write_matrices_csv(ms, &mut out)?,
                    Format::Json => write_json(&ms.collect::<Vec<_>>(), &mut out)?,
                }
            } else {
                #[derive(Serialize)]
                struct Row {
                    q: i64,
                    beta: String,
                    count: u64,
                    main_term: f64,
                    rel_error: f64,
                }
                let mut rows = Vec::with_capacity(betas.len());
                for beta in betas {
                    let count = count_s_q_below(q, beta, exec)?;
                    let main_term = monoid_theory_count(q, beta.to_f64());
                    rows.push(Row { q, beta: beta.to_string(), count, main_term, rel_error: rel_error(count as f64, main_term) });
                }
                match fmt {
                    Format::Csv => {
                        let mut w = csv::Writer::from_writer(&mut out);
                        w.write_record(["Q", "beta", "count", "main_term", "rel_error"])?;
                        for row in &rows {
                            w.write_record(&[
                                row.q.to_string(),
                                row.beta.clone(),
                                row.count.to_string(),
                                fmt_real(row.main_term),
                                fmt_real(row.rel_error),
                            ])?;
                        }
                        w.flush()?;
                    }
                    Format::Json => write_json(&rows, &mut out)?,
                }
            }
            Outcome::Done
        }
    };
    out.flush().context("flushing output")?;
    Ok(outcome)
}

fn report_sweeps(sweeps: &[Sweep], fmt: Format, out: &mut dyn Write) -> anyhow::Result<Outcome> {
    let failed = sweeps.iter().find_map(|s| s.as_ref().err());
    match fmt {
        Format::Csv => {
            let summary: Vec<String> = sweeps
                .iter()
                .map(|s| match s {
                    Ok(st) => format!("{}: OK", st.check),
                    Err(v) => format!("{}: FAILED", v.check),
                })
                .collect();
            writeln!(out, "{}", summary.join(", "))?;
        }
        Format::Json => write_json(&sweeps, &mut *out)?,
    }
    if let Some(v) = failed {
        eprintln!("{v}");
        return Ok(Outcome::VerificationFailed);
    }
    Ok(Outcome::Done)
}

fn gap_rows(q: i64, g: Grid, step: f64, theory: bool, exec: Exec) -> anyhow::Result<Vec<CdfRow>> {
    let lambdas = lambda_grid(g.start, g.stop, g.step)?;
    if lambdas.len() > 1_000_000 {
        return Err(usage(format!("the λ grid has {} points; use a coarser step", lambdas.len())));
    }
    let table = GapTable::from_sequence(&generate_by_filter(q)?);
    let cfg = QuadConfig::default().with_exec(Exec::Sequential);
    let th: Option<Vec<(f64, f64)>> = theory.then(|| {
        exec.map(&lambdas, |&l| (gap_cdf_theory(l, &cfg), gap_cdf_theory(l + step, &cfg)))
    });
    Ok(lambdas
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let ge = table.cdf(l);
            let t = th.as_ref().map(|v| v[i]);
            CdfRow {
                lambda: l,
                g_empirical: ge,
                g_theory: t.map(|t| t.0),
                density_empirical: (table.cdf(l + step) - ge) / step,
                density_theory: t.map(|t| (t.1 - t.0) / step),
            }
        })
        .collect())
}
