//! Command-line front end: parse distribution specs, run transforms,
//! convolutions, bounds, and Monte Carlo verification, and stream one
//! report record per grid point to stdout as JSON lines or CSV.
//!
//! Exit codes: 0 on success, 2 on an invalid spec or malformed input,
//! 3 when a solver fails to converge.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fenchel::{
    conjugate_flagged, dist_from_json, holder_convolve_flagged, lower_inverse_flagged, make_ratefn,
    profile, spec_from_json, sum_quantile_bound, upper_inverse_flagged, verify_bound,
    DistributionSpec, Error, RateFn, SolverConfig,
};
use report::{csv_header, to_csv_line, to_json_line, Cell, Record};

#[derive(Parser)]
#[command(
    name = "fenchel",
    version,
    about = "Convex conjugates on (0, inf), generalized inverses, Hölder convolutions, and Chernoff-style quantile bounds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Lower,
    Upper,
}

#[derive(Clone, Copy, ValueEnum)]
enum Event {
    Strict,
    Weak,
}

#[derive(Args)]
struct Common {
    /// Solver tolerance (bracket width in log-t units).
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for sampling commands.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample count for verification.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the convex conjugate L*(x) over a grid of x.
    Conjugate {
        /// Inline JSON spec, e.g. '{"dist":"gaussian","mu":0,"sigma":1}'.
        #[arg(long)]
        dist: String,
        /// Grid: comma list "0.5,1,2" or range "start:stop:count".
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a generalized inverse of the conjugate over a grid of u.
    Inverse {
        /// Which inverse: the smallest (lower) or the largest (upper).
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        dist: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the Hölder convolution of several rate functions over a grid of t.
    Convolve {
        /// Path to a JSON array of specs; order defines term order.
        #[arg(long)]
        dists: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[command(flatten)]
        common: Common,
    },
    /// Quantile upper bounds for a sum of random variables over a grid of u.
    Bound {
        #[arg(long)]
        dists: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo check of the sum bound over a grid of u.
    Verify {
        #[arg(long)]
        dists: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Which exceedance event to highlight in the report.
        #[arg(long, value_enum, default_value_t = Event::Strict)]
        event: Event,
        #[command(flatten)]
        common: Common,
    },
    /// Landmarks of the conjugate: domain end, limit levels, domain case.
    Profile {
        #[arg(long)]
        dist: String,
        #[command(flatten)]
        common: Common,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        let code = match e {
            Error::NonConvergence(_) | Error::InconsistentLimit(_) => 3,
            _ => 2,
        };
        std::process::exit(code);
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let (records, format) = match cli.cmd {
        Cmd::Conjugate { dist, x, common } => {
            let cfg = solver_config(&common)?;
            let (rf, echo) = ratefn_from_arg(&dist)?;
            let grid = parse_grid(&x)?;
            let mut recs = Vec::new();
            for &x in &grid {
                let out = conjugate_flagged(&rf, x, &cfg)?;
                recs.push(Record::new(vec![
                    ("op", Cell::Text("conjugate".into())),
                    ("dist", Cell::Json(echo.clone())),
                    ("x", Cell::Num(x)),
                    ("value", Cell::Num(out.value.to_f64())),
                    ("flags", Cell::Flags(out.flags)),
                ]));
            }
            (recs, common.format)
        }
        Cmd::Inverse {
            which,
            dist,
            u,
            common,
        } => {
            let cfg = solver_config(&common)?;
            let (rf, echo) = ratefn_from_arg(&dist)?;
            let grid = parse_grid(&u)?;
            let name = match which {
                Which::Lower => "lower",
                Which::Upper => "upper",
            };
            let mut recs = Vec::new();
            for &u in &grid {
                let out = match which {
                    Which::Lower => lower_inverse_flagged(&rf, u, &cfg)?,
                    Which::Upper => upper_inverse_flagged(&rf, u, &cfg)?,
                };
                recs.push(Record::new(vec![
                    ("op", Cell::Text("inverse".into())),
                    ("which", Cell::Text(name.into())),
                    ("dist", Cell::Json(echo.clone())),
                    ("u", Cell::Num(u)),
                    ("value", Cell::Num(out.value.to_f64())),
                    ("flags", Cell::Flags(out.flags)),
                ]));
            }
            (recs, common.format)
        }
        Cmd::Convolve { dists, t, common } => {
            let cfg = solver_config(&common)?;
            let (parts, echo) = ratefns_from_file(&dists)?;
            let grid = parse_grid(&t)?;
            let mut recs = Vec::new();
            for &t in &grid {
                let out = holder_convolve_flagged(&parts, t, &cfg)?;
                recs.push(Record::new(vec![
                    ("op", Cell::Text("convolve".into())),
                    ("dists", Cell::Json(echo.clone())),
                    ("t", Cell::Num(t)),
                    ("value", Cell::Num(out.value.to_f64())),
                    ("flags", Cell::Flags(out.flags)),
                ]));
            }
            (recs, common.format)
        }
        Cmd::Bound { dists, u, common } => {
            let cfg = solver_config(&common)?;
            let (specs, echo) = dists_from_file(&dists)?;
            let grid = parse_grid(&u)?;
            let mut recs = Vec::new();
            for &u in &grid {
                let r = sum_quantile_bound(&specs, u, &cfg)?;
                recs.push(Record::new(vec![
                    ("op", Cell::Text("bound".into())),
                    ("dists", Cell::Json(echo.clone())),
                    ("u", Cell::Num(u)),
                    (
                        "per_term",
                        Cell::List(r.per_term_quantiles.iter().map(|q| q.to_f64()).collect()),
                    ),
                    ("total", Cell::Num(r.total_quantile.to_f64())),
                    ("cap", Cell::Num(r.probability_cap)),
                    ("strictness", Cell::Text(r.strictness.to_string())),
                    ("flags", Cell::Flags(r.flags)),
                ]));
            }
            (recs, common.format)
        }
        Cmd::Verify {
            dists,
            u,
            event,
            common,
        } => {
            let cfg = solver_config(&common)?;
            let (specs, echo) = dists_from_file(&dists)?;
            let grid = parse_grid(&u)?;
            let event_name = match event {
                Event::Strict => "strict",
                Event::Weak => "weak",
            };
            let mut recs = Vec::new();
            for &u in &grid {
                let bound = sum_quantile_bound(&specs, u, &cfg)?;
                let r = verify_bound(&specs, u, common.samples, common.seed, &cfg)?;
                recs.push(Record::new(vec![
                    ("op", Cell::Text("verify".into())),
                    ("dists", Cell::Json(echo.clone())),
                    ("u", Cell::Num(u)),
                    ("total", Cell::Num(r.total_quantile.to_f64())),
                    ("cap", Cell::Num(r.cap)),
                    ("n_samples", Cell::Int(r.n_samples)),
                    ("n_exceed_strict", Cell::Int(r.n_exceed_strict)),
                    ("n_exceed_weak", Cell::Int(r.n_exceed_weak)),
                    ("empirical_strict", Cell::Num(r.empirical_strict)),
                    ("empirical_weak", Cell::Num(r.empirical_weak)),
                    ("three_sigma", Cell::Num(r.three_sigma)),
                    ("event", Cell::Text(event_name.into())),
                    ("verdict", Cell::Text(r.verdict.to_string())),
                    ("flags", Cell::Flags(bound.flags)),
                ]));
            }
            (recs, common.format)
        }
        Cmd::Profile { dist, common } => {
            let cfg = solver_config(&common)?;
            let (rf, echo) = ratefn_from_arg(&dist)?;
            let p = profile(&rf, &cfg)?;
            let recs = vec![Record::new(vec![
                ("op", Cell::Text("profile".into())),
                ("dist", Cell::Json(echo)),
                ("x_inf", Cell::Num(p.x_inf.to_f64())),
                ("u_inf", Cell::Num(p.u_inf.to_f64())),
                ("u_minus_inf", Cell::Num(p.u_minus_inf.to_f64())),
                ("dom_case", Cell::Text(p.dom_case.to_string())),
                ("flags", Cell::Flags(vec![])),
            ])];
            (recs, common.format)
        }
    };
    emit(&records, format);
    Ok(())
}

fn emit(records: &[Record], format: Format) {
    match format {
        Format::Json => {
            for r in records {
                println!("{}", to_json_line(r));
            }
        }
        Format::Csv => {
            if let Some(first) = records.first() {
                println!("{}", csv_header(first));
            }
            for r in records {
                println!("{}", to_csv_line(r));
            }
        }
    }
}

fn solver_config(common: &Common) -> Result<SolverConfig, Error> {
    let cfg = SolverConfig {
        rel_tol: common.tol,
        ..SolverConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Grids are comma lists ("0.5,1,2") or inclusive ranges ("0:4:21").
fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    let bad = |msg: &str| Error::Spec(format!("grid \"{s}\": {msg}"));
    let parse_one = |tok: &str| -> Result<f64, Error> {
        let v: f64 = tok.trim().parse().map_err(|_| bad("not a number"))?;
        if !v.is_finite() {
            return Err(bad("grid values must be finite"));
        }
        Ok(v)
    };
    let grid = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("ranges take the form start:stop:count"));
        }
        let start = parse_one(parts[0])?;
        let stop = parse_one(parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad("count must be an integer"))?;
        if count < 1 {
            return Err(bad("count must be at least 1"));
        }
        if count == 1 {
            vec![start]
        } else {
            (0..count)
                .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                .collect()
        }
    } else {
        s.split(',')
            .map(parse_one)
            .collect::<Result<Vec<f64>, Error>>()?
    };
    if grid.is_empty() {
        return Err(bad("grid must be nonempty"));
    }
    Ok(grid)
}

fn parse_json(text: &str, what: &str) -> Result<serde_json::Value, Error> {
    serde_json::from_str(text).map_err(|e| Error::Spec(format!("{what}: {e}")))
}

/// An inline spec: any rate function (distribution, power, or tabulated).
fn ratefn_from_arg(arg: &str) -> Result<(RateFn, String), Error> {
    let value = parse_json(arg, "--dist")?;
    let spec = spec_from_json(&value)?;
    let echo = serde_json::to_string(&value).expect("re-serializing parsed JSON");
    Ok((make_ratefn(spec)?, echo))
}

fn read_specs_file(path: &str) -> Result<Vec<serde_json::Value>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Spec(format!("cannot read \"{path}\": {e}")))?;
    let value = parse_json(&text, path)?;
    match value {
        serde_json::Value::Array(items) if !items.is_empty() => Ok(items),
        serde_json::Value::Array(_) => Err(Error::Spec(format!("\"{path}\" holds an empty array"))),
        _ => Err(Error::Spec(format!(
            "\"{path}\" must hold a JSON array of specs"
        ))),
    }
}

fn ratefns_from_file(path: &str) -> Result<(Vec<RateFn>, String), Error> {
    let items = read_specs_file(path)?;
    let echo = serde_json::to_string(&serde_json::Value::Array(items.clone()))
        .expect("re-serializing parsed JSON");
    let parts = items
        .iter()
        .map(|v| make_ratefn(spec_from_json(v)?))
        .collect::<Result<Vec<RateFn>, Error>>()?;
    Ok((parts, echo))
}

fn dists_from_file(path: &str) -> Result<(Vec<DistributionSpec>, String), Error> {
    let items = read_specs_file(path)?;
    let echo = serde_json::to_string(&serde_json::Value::Array(items.clone()))
        .expect("re-serializing parsed JSON");
    let specs = items
        .iter()
        .map(dist_from_json)
        .collect::<Result<Vec<DistributionSpec>, Error>>()?;
    // Reject specs that cannot certify a finite CGF point up front.
    for d in &specs {
        let _ = RateFn::from_dist(d.clone())?;
    }
    Ok((specs, echo))
}
