//! `hllab`: exponent classification, boundary tables, norm certificates, and
//! experiment sweeps with machine-readable output.
//!
//! Output is JSON by default, CSV with `--csv` where a command produces a
//! table. Exponent flags take exact values only: integers, fractions like
//! `4/3`, or `inf`. Exit codes: 0 success, 2 invalid input, 3 when a verify
//! run leaves inconclusive instances. `HLLAB_THREADS` caps worker threads.

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hllab_core::error::Error;
use hllab_core::experiments::{
    ksz_norm_scaling_series, verify_coefficient_norm, witness_sweep_series, SweepSeries,
};
use hllab_core::exponents::{
    blowup_exponent, boundary_b, conj, hl_admissible, hl_admissible_reversed,
    inclusion_exponent, sharp_tuple, region_label, rp_exponent, Rat, XExp,
};
use hllab_core::forms::{form_from_json, WitnessKind};
use hllab_core::optnorm::{estimate_norm, exact_norm_linf, AscentConfig};

#[derive(Parser)]
#[command(name = "hllab", version, about = "Anisotropic summability laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct AscentArgs {
    /// Random restarts of the alternating ascent.
    #[arg(long, default_value_t = 16)]
    multistarts: usize,
    /// Cap on full slot cycles per start.
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    /// Relative improvement threshold declaring convergence.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Seed for every random choice; fixed seed means bit-identical output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl AscentArgs {
    fn config(&self) -> AscentConfig {
        AscentConfig {
            multistarts: self.multistarts,
            max_iters: self.max_iters,
            rel_tol: self.tol,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify an anisotropic exponent pair (a, b) on lp x lq.
    Classify {
        #[arg(long)]
        p: XExp,
        #[arg(long)]
        q: XExp,
        #[arg(long)]
        a: XExp,
        #[arg(long)]
        b: XExp,
        /// Check the reversed summation order instead.
        #[arg(long)]
        reversed: bool,
    },
    /// Blow-up region of a non-admissible pair (r1, r2).
    Region {
        #[arg(long)]
        p: XExp,
        #[arg(long)]
        q: XExp,
        #[arg(long)]
        r1: XExp,
        #[arg(long)]
        r2: XExp,
    },
    /// Region plus the sharp dimension blow-up exponent.
    Blowup {
        #[arg(long)]
        p: XExp,
        #[arg(long)]
        q: XExp,
        #[arg(long)]
        r1: XExp,
        #[arg(long)]
        r2: XExp,
    },
    /// Composite exponent of the k-fold regularity transfer.
    Rp {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p1: XExp,
        #[arg(long)]
        p2: XExp,
    },
    /// Inclusion exponent rsu/(su + mrs - mru) for summing operators.
    Inclusion {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: XExp,
        #[arg(long)]
        s: XExp,
        #[arg(long)]
        u: XExp,
    },
    /// The globally sharp m-tuple at exponent p.
    Tuple {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: XExp,
    },
    /// Table of the smallest admissible b over a range of a.
    Boundary {
        #[arg(long)]
        p: XExp,
        #[arg(long)]
        q: XExp,
        /// Number of sample points from q* to --a-max (>= 2).
        #[arg(long, default_value_t = 9)]
        samples: usize,
        /// Right end of the sampled a range.
        #[arg(long, value_name = "EXP", default_value = "8")]
        a_max: XExp,
        #[arg(long)]
        csv: bool,
    },
    /// Certified norm lower bound of a form read from a tensor JSON file.
    Norm {
        /// Tensor JSON file with a domain_exps field.
        #[arg(long)]
        input: String,
        /// Use exact sign-vertex enumeration (all-inf domains only).
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        ascent: AscentArgs,
    },
    /// Quotient sweep of a witness family at a non-admissible pair.
    Sweep {
        /// Witness family: U, V, KSZ, or GAUSSIAN.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        p: XExp,
        #[arg(long)]
        q: XExp,
        #[arg(long)]
        r1: XExp,
        #[arg(long)]
        r2: XExp,
        /// Dimension range lo..hi (inclusive).
        #[arg(long, value_name = "LO..HI")]
        n_range: String,
        /// Step through the range; with --geometric, the doubling base.
        #[arg(long, default_value_t = 1)]
        n_step: usize,
        /// Double n from lo to hi instead of stepping.
        #[arg(long)]
        geometric: bool,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        ascent: AscentArgs,
    },
    /// Norm scaling of random-sign m-linear forms.
    Ksz {
        #[arg(long)]
        m: usize,
        /// Slot exponent; repeat m times or give once to broadcast.
        #[arg(long = "p", value_name = "EXP")]
        ps: Vec<XExp>,
        #[arg(long, value_name = "LO..HI")]
        n_range: String,
        #[arg(long, default_value_t = 1)]
        n_step: usize,
        #[arg(long)]
        geometric: bool,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        ascent: AscentArgs,
    },
    /// Verified-or-inconclusive check of the coefficient-norm inequality.
    Verify {
        #[arg(long)]
        m: usize,
        /// Common slot exponent, must exceed 2m.
        #[arg(long)]
        p: XExp,
        #[arg(long, value_name = "LO..HI")]
        n_range: String,
        #[arg(long, default_value_t = 1)]
        n_step: usize,
        #[arg(long)]
        geometric: bool,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        ascent: AscentArgs,
    },
}

fn parse_n_range(spec: &str, step: usize, geometric: bool) -> Result<Vec<usize>, Error> {
    let (lo, hi) = spec
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("expected LO..HI, got `{spec}`")))?;
    let lo: usize =
        lo.trim().parse().map_err(|_| Error::Parse(format!("bad range start `{lo}`")))?;
    let hi: usize =
        hi.trim().parse().map_err(|_| Error::Parse(format!("bad range end `{hi}`")))?;
    if lo == 0 || hi < lo {
        return Err(Error::Parse(format!("need 1 <= lo <= hi, got {lo}..{hi}")));
    }
    let mut ns = Vec::new();
    if geometric {
        let mut n = lo;
        while n <= hi {
            ns.push(n);
            n *= 2;
        }
    } else {
        if step == 0 {
            return Err(Error::Parse("step must be positive".into()));
        }
        let mut n = lo;
        while n <= hi {
            ns.push(n);
            n += step;
        }
    }
    Ok(ns)
}

fn parse_kind(s: &str) -> Result<WitnessKind, Error> {
    match s.to_ascii_uppercase().as_str() {
        "U" => Ok(WitnessKind::U),
        "V" => Ok(WitnessKind::V),
        "KSZ" => Ok(WitnessKind::Ksz),
        "GAUSSIAN" => Ok(WitnessKind::Gaussian),
        other => Err(Error::Parse(format!("unknown witness kind `{other}`"))),
    }
}

fn sweep_output(series: &SweepSeries, csv: bool) -> Result<String, Error> {
    if csv {
        Ok(series.to_csv())
    } else {
        let fit = series.fit()?;
        Ok(serde_json::to_string_pretty(&json!({ "rows": series.rows, "fit": fit }))?)
    }
}

/// Runs one command; Ok carries (stdout document, exit code).
fn run(cli: Cli) -> Result<(String, i32), Error> {
    match cli.command {
        Command::Classify { p, q, a, b, reversed } => {
            let cls = if reversed {
                hl_admissible_reversed(p, q, a, b)?
            } else {
                hl_admissible(p, q, a, b)?
            };
            let doc = json!({
                "p": p, "q": q, "a": a, "b": b,
                "order": if reversed { "reversed" } else { "direct" },
                "admissible": cls.admissible,
                "on_boundary": cls.on_boundary,
                "failed_constraints": cls.failed_constraints,
            });
            Ok((serde_json::to_string_pretty(&doc)?, 0))
        }
        Command::Region { p, q, r1, r2 } => {
            let label = region_label(p, q, r1, r2)?;
            let doc = json!({ "p": p, "q": q, "r1": r1, "r2": r2, "region": label });
            Ok((serde_json::to_string_pretty(&doc)?, 0))
        }
        Command::Blowup { p, q, r1, r2 } => {
            let label = region_label(p, q, r1, r2)?;
            let rate = blowup_exponent(p, q, r1, r2)?;
            let doc = json!({
                "p": p, "q": q, "r1": r1, "r2": r2,
                "region": label,
                "exponent": rate,
                "exponent_decimal": rate.to_f64(),
            });
            Ok((serde_json::to_string_pretty(&doc)?, 0))
        }
        Command::Rp { k, p1, p2 } => {
            let e = rp_exponent(k, p1, p2)?;
            let doc = json!({ "k": k, "p1": p1, "p2": p2, "exponent": e });
            Ok((serde_json::to_string_pretty(&doc)?, 0))
        }
        Command::Inclusion { m, r, s, u } => {
            let e = inclusion_exponent(m, r, s, u)?;
            let doc = json!({ "m": m, "r": r, "s": s, "u": u, "exponent": e });
            Ok((serde_json::to_string_pretty(&doc)?, 0))
        }
        Command::Tuple { m, p } => {
            let tuple = sharp_tuple(m, p)?;
            let mut sum = Rat::ZERO;
            for t in &tuple {
                sum = sum.add(t.recip_rat()?)?;
            }
            let doc = json!({
                "m": m, "p": p,
                "exponents": tuple,
                "reciprocal_sum": sum.to_string(),
            });
            Ok((serde_json::to_string_pretty(&doc)?, 0))
        }
        Command::Boundary { p, q, samples, a_max, csv } => {
            if samples < 2 {
                return Err(Error::Domain("need at least 2 samples".into()));
            }
            let a_min = conj(q)?;
            if a_max <= a_min || a_max.is_inf() {
                return Err(Error::Domain(format!(
                    "a-max must be a finite exponent above q* = {a_min}"
                )));
            }
            let lo = a_min.as_rat().ok_or_else(|| {
                Error::Domain("boundary sampling needs a finite q*".into())
            })?;
            let width = a_max.as_rat().expect("finite").sub(lo)?;
            let mut rows = Vec::with_capacity(samples);
            for i in 0..samples {
                let frac = Rat::new(i as i64, samples as i64 - 1)?;
                let a = XExp::from_rat(lo.add(width.mul(frac)?)?)?;
                let b = boundary_b(p, q, a)?;
                rows.push((a, b));
            }
            if csv {
                let mut out = String::from("a,b_min,a_exact,b_min_exact\n");
                for (a, b) in &rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        a.to_f64(),
                        b.to_f64(),
                        a.to_fraction_string(),
                        b.to_fraction_string()
                    ));
                }
                Ok((out, 0))
            } else {
                let doc: Vec<_> = rows
                    .iter()
                    .map(|(a, b)| {
                        json!({
                            "a": a.to_f64(),
                            "b_min": b.to_f64(),
                            "a_exact": a,
                            "b_min_exact": b,
                        })
                    })
                    .collect();
                Ok((serde_json::to_string_pretty(&doc)?, 0))
            }
        }
        Command::Norm { input, exact, ascent } => {
            let text = std::fs::read_to_string(&input)?;
            let form = form_from_json(&text)?;
            let cert =
                if exact { exact_norm_linf(&form)? } else { estimate_norm(&form, &ascent.config()) };
            Ok((serde_json::to_string_pretty(&cert)?, 0))
        }
        Command::Sweep { kind, p, q, r1, r2, n_range, n_step, geometric, trials, csv, ascent } => {
            let kind = parse_kind(&kind)?;
            let ns = parse_n_range(&n_range, n_step, geometric)?;
            let series =
                witness_sweep_series(kind, p, q, r1, r2, &ns, trials, &ascent.config())?;
            Ok((sweep_output(&series, csv)?, 0))
        }
        Command::Ksz { m, ps, n_range, n_step, geometric, trials, csv, ascent } => {
            let ps = match ps.len() {
                1 => vec![ps[0]; m],
                k if k == m => ps,
                k => {
                    return Err(Error::Domain(format!("{k} slot exponents for m = {m}")));
                }
            };
            let ns = parse_n_range(&n_range, n_step, geometric)?;
            let cfg = ascent.config();
            let series = ksz_norm_scaling_series(m, &ps, &ns, trials, cfg.seed, &cfg)?;
            Ok((sweep_output(&series, csv)?, 0))
        }
        Command::Verify { m, p, n_range, n_step, geometric, trials, ascent } => {
            let ns = parse_n_range(&n_range, n_step, geometric)?;
            let cfg = ascent.config();
            let report = verify_coefficient_norm(m, p, &ns, trials, cfg.seed, &cfg)?;
            let code = if report.inconclusive > 0 { 3 } else { 0 };
            Ok((serde_json::to_string_pretty(&report)?, code))
        }
    }
}

fn main() {
    if let Ok(threads) = std::env::var("HLLAB_THREADS") {
        match threads.parse::<usize>() {
            Ok(k) if k >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("error: HLLAB_THREADS must be a positive integer, got `{threads}`");
                std::process::exit(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok((doc, code)) => {
            if doc.ends_with('\n') {
                print!("{doc}");
            } else {
                println!("{doc}");
            }
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
