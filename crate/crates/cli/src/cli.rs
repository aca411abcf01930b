//! Argument parsing and subcommand dispatch.

use std::path::PathBuf;

use betakit_core::cantor::{self, GenerationShape, GenerationTree};
use betakit_core::cylinders::{
    check_length_bounds, cylinder_with_precision, length_bounds, orbit_image, walk_words, Window,
};
use betakit_core::expansion::{classify_zero_growth, digits_with_precision, one_with_precision, Growth, Point};
use betakit_core::recurrence::{maximal_extension, recurrence_time};
use betakit_core::targets::{
    check_lipschitz_piece_bound, check_piece_bound, cover_piece, critical_exponent, dimension_summary,
    partition_sum, plan_cover, CoverReport, DepthEstimate, Rate, Target, TargetSpec, DEFAULT_TOLERANCE,
};
use betakit_core::words::{count_admissible, is_admissible, is_self_admissible, Ceiling};
use betakit_core::{Beta, DigitWord, Interval, Verdict};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::parse;
use crate::report::{self, Format, Report, Table};

#[derive(Debug, Parser)]
#[command(name = "betakit", version, about = "Beta-expansions of one: digits, cylinders, covers and Cantor constructions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = "BETAKIT_PREC_BITS", default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(64..=4096))]
    pub prec_bits: u32,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct BetaArg {
    /// A rational base, e.g. 1.9 or 19/10.
    #[arg(long, value_parser = parse::rational)]
    pub beta: Option<BigRational>,
    /// The root of 1 = Σ dᵢ β⁻ⁱ for these digits.
    #[arg(long, value_parser = parse::word)]
    pub beta_word: Option<DigitWord>,
}

#[derive(Debug, Args)]
#[group(required = false, multiple = false)]
pub struct CeilingArg {
    /// Self-admissible word naming the simple Parry base whose ε* is used.
    #[arg(long, value_parser = parse::word)]
    pub ceiling_word: Option<DigitWord>,
    #[arg(long, value_parser = parse::rational)]
    pub beta: Option<BigRational>,
    #[arg(long, value_parser = parse::word)]
    pub beta_word: Option<DigitWord>,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Constant target x₀ ∈ [0, 1].
    #[arg(long, value_parser = parse::rational, conflicts_with = "target_lipschitz")]
    pub x0: Option<BigRational>,
    /// Affine target "a+b*beta".
    #[arg(long, value_parser = parse::affine_target, allow_hyphen_values = true)]
    pub target_lipschitz: Option<Target>,
    /// "alpha:<α>[,c:<c>]" for ℓₙ = ⌈αn + c⌉.
    #[arg(long, value_parser = parse::rate, conflicts_with = "rate_file")]
    pub rate: Option<Rate>,
    /// One ℓₙ per line.
    #[arg(long)]
    pub rate_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Greedy digits and orbit of x.
    Expand {
        #[command(flatten)]
        beta: BetaArg,
        #[arg(long, value_parser = parse::rational)]
        x: BigRational,
        #[arg(long, default_value_t = 32)]
        depth: usize,
    },
    /// ε(1, β) and ε*(1, β).
    Expand1 {
        #[command(flatten)]
        beta: BetaArg,
        #[arg(long, default_value_t = 32)]
        depth: usize,
    },
    /// Parry's criterion for a word.
    Admissible {
        #[arg(long, value_parser = parse::word)]
        word: DigitWord,
        #[command(flatten)]
        ceiling: CeilingArg,
    },
    SelfAdmissible {
        #[arg(long, value_parser = parse::word)]
        word: DigitWord,
    },
    /// Number of admissible words of length n.
    Count {
        #[command(flatten)]
        ceiling: CeilingArg,
        #[arg(long)]
        n: usize,
    },
    /// Recurrence time of a word.
    Tau {
        #[arg(long, value_parser = parse::word)]
        word: DigitWord,
    },
    /// Largest self-admissible extension to a given length.
    Extend {
        #[arg(long, value_parser = parse::word)]
        word: DigitWord,
        #[arg(long)]
        length: usize,
    },
    /// Endpoints, length bounds and orbit image of a parameter cylinder.
    Cylinder {
        #[arg(long, value_parser = parse::word)]
        word: DigitWord,
    },
    /// Every order-n cylinder meeting a window.
    Walk {
        #[arg(long)]
        depth: usize,
        #[arg(long, value_parser = parse::window)]
        window: Window,
    },
    /// Depth-n cover of the shrinking-target set.
    Cover {
        #[arg(long)]
        depth: usize,
        #[arg(long, value_parser = parse::window)]
        window: Window,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Critical-exponent estimates across depths.
    Dim {
        /// Comma-separated increasing depths.
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 12, 16, 20])]
        depths: Vec<usize>,
        #[arg(long, value_parser = parse::window)]
        window: Window,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Finite-generation Cantor construction.
    Cantor {
        #[arg(long, value_parser = parse::rational, required_unless_present = "beta0_word")]
        beta0: Option<BigRational>,
        #[arg(long, value_parser = parse::word, conflicts_with = "beta0")]
        beta0_word: Option<DigitWord>,
        #[arg(long, value_parser = parse::rational, required_unless_present = "beta1_word")]
        beta1: Option<BigRational>,
        #[arg(long, value_parser = parse::word, conflicts_with = "beta1")]
        beta1_word: Option<DigitWord>,
        #[arg(long, value_parser = parse::rational, default_value = "0")]
        x0: BigRational,
        /// Length N of the free part of each block.
        #[arg(long, default_value_t = 4)]
        free_len: usize,
        #[arg(long, default_value_t = 2)]
        generations: usize,
        #[arg(long, value_parser = parse::rate, default_value = "alpha:1")]
        rate: Rate,
    },
    /// Periodic-prefix word whose orbit of one returns close to 1.
    WitnessX1 {
        #[arg(long, value_parser = parse::word)]
        word: DigitWord,
        #[arg(long)]
        z: usize,
        #[arg(long, default_value_t = 0)]
        suffix: usize,
    },
    /// Zero runs ℓₙ(β) after each position of ε*(1, β).
    Zeros {
        #[command(flatten)]
        beta: BetaArg,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25f64, 0.5, 1.0])]
        alpha_grid: Vec<f64>,
    },
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub prec_bits: u32,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> CliResult<RunConfig> {
        if g.prec_bits < 64 {
            return Err(CliError::usage("--prec-bits must be at least 64"));
        }
        Ok(RunConfig { prec_bits: g.prec_bits, format: g.format, out: g.out.clone(), jobs: g.jobs })
    }

    fn pool(&self) -> CliResult<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| CliError::usage(e.to_string()))
    }
}

fn beta_of(arg: &BetaArg) -> CliResult<Beta> {
    match (&arg.beta, &arg.beta_word) {
        (Some(q), _) => Ok(Beta::rational(q.clone())?),
        (_, Some(w)) => Ok(Beta::from_word(w)?),
        _ => Err(CliError::usage("need --beta or --beta-word")),
    }
}

fn require_depth(depth: usize) -> CliResult<()> {
    if depth == 0 {
        return Err(CliError::usage("depth must be at least 1"));
    }
    Ok(())
}

/// The admissibility ceiling, known to at least `len` digits.
fn ceiling_of(arg: &CeilingArg, len: usize, prec: u32) -> CliResult<Ceiling> {
    if let Some(w) = &arg.ceiling_word {
        return Ok(Ceiling::from_parry_word(w)?);
    }
    let beta = match (&arg.beta, &arg.beta_word) {
        (Some(q), _) => Beta::rational(q.clone())?,
        (_, Some(w)) => Beta::from_word(w)?,
        _ => return Err(CliError::usage("need --ceiling-word, --beta or --beta-word")),
    };
    Ok(one_with_precision(&beta, len.max(1), prec)?.star)
}

fn spec_of(t: &TargetArgs) -> CliResult<TargetSpec> {
    let target = match (&t.x0, &t.target_lipschitz) {
        (Some(x0), None) => Target::constant(x0.clone())?,
        (None, Some(target)) => target.clone(),
        (None, None) => Target::constant(BigRational::zero())?,
        (Some(_), Some(_)) => return Err(CliError::usage("--x0 and --target-lipschitz are exclusive")),
    };
    let rate = match (&t.rate, &t.rate_file) {
        (Some(r), _) => r.clone(),
        (None, Some(path)) => parse::rate_table(&std::fs::read_to_string(path)?).map_err(CliError::usage)?,
        (None, None) => Rate::Affine { alpha: BigRational::one(), c: BigRational::zero() },
    };
    Ok(TargetSpec { target, rate })
}

fn intervals(v: &[Interval]) -> Value {
    Value::Array(v.iter().map(report::interval).collect())
}

fn orbit_table(digits: &[u32], orbit: &[Interval]) -> Table {
    let rows = digits
        .iter()
        .zip(orbit)
        .enumerate()
        .map(|(i, (d, x))| {
            let (lo, hi) = x.decimal_bounds();
            vec![(i + 1).to_string(), d.to_string(), lo, hi]
        })
        .collect();
    Table { headers: vec!["n", "digit", "lo", "hi"], rows }
}

fn target_json(t: &Target) -> Value {
    match t {
        Target::Constant(x0) => json!({ "kind": "constant", "x0": report::rational(x0) }),
        Target::Affine { a, b } => json!({
            "kind": "affine",
            "a": report::rational(a),
            "b": report::rational(b),
            "lipschitz": report::rational(&t.lipschitz()),
        }),
    }
}

fn rate_json(r: &Rate) -> Value {
    match r {
        Rate::Affine { alpha, c } => json!({ "kind": "affine", "alpha": report::rational(alpha), "c": report::rational(c) }),
        Rate::Table(t) => json!({ "kind": "table", "len": t.len() }),
    }
}

fn window_json(w: &Window) -> Value {
    json!({ "lo": report::rational(w.lo()), "hi": report::rational(w.hi()) })
}

/// Pieces of a depth-`n` cover, computed on the pool.
pub fn parallel_cover(
    pool: &rayon::ThreadPool,
    window: &Window,
    spec: &TargetSpec,
    n: usize,
    prec: u32,
) -> betakit_core::Result<CoverReport> {
    let plan = plan_cover(window, spec, n, prec)?;
    let pieces = pool.install(|| {
        plan.words
            .par_iter()
            .map(|w| cover_piece(w, window, &spec.target, &plan.radius, plan.prec))
            .collect::<betakit_core::Result<Vec<_>>>()
    })?;
    Ok(CoverReport {
        window: window.clone(),
        depth: n,
        ell: plan.ell,
        radius: plan.radius,
        cylinders: plan.words.len(),
        pieces: pieces.into_iter().flatten().collect(),
        prec: plan.prec,
    })
}

/// Builds `generations` generations with the default schedule, searching
/// the stems of each generation on the pool.
pub fn parallel_cantor(
    pool: &rayon::ThreadPool,
    params: cantor::ConstructionParams,
    generations: usize,
) -> betakit_core::Result<GenerationTree> {
    let schedule = cantor::default_schedule(&params, generations)?;
    let mut tree = GenerationTree::new(params);
    for shape in schedule {
        let plan = cantor::plan_generation(&tree, shape)?;
        if plan.record.radius_ok != Verdict::Holds {
            return Err(betakit_core::Error::Domain(format!(
                "generation {}: radius {} is not below (1 - x0)/2",
                plan.record.k, plan.record.radius
            )));
        }
        let params = &tree.params;
        let extensions = pool.install(|| {
            plan.stems
                .par_iter()
                .map(|s| cantor::search_extension(params, &plan.record, s))
                .collect::<betakit_core::Result<Vec<_>>>()
        })?;
        cantor::attach_generation(&mut tree, plan, extensions)?;
    }
    Ok(tree)
}

fn shape_json(s: GenerationShape) -> Value {
    json!({ "blocks": s.blocks, "pad": s.pad })
}

pub fn execute(command: &Command, cfg: &RunConfig) -> CliResult<Report> {
    let prec = cfg.prec_bits;
    match command {
        Command::Expand { beta, x, depth } => {
            require_depth(*depth)?;
            let beta = beta_of(beta)?;
            let point = if x.is_one() { Point::One } else { Point::rational(x.clone())? };
            let rec = digits_with_precision(&beta, &point, *depth, prec)?;
            let mut r = Report::new("expand");
            r.set("beta", beta.describe())
                .set("x", report::rational(x))
                .set("digits", report::word(&rec.digits))
                .set("orbit", intervals(&rec.orbit))
                .set("certified_depth", rec.certified_depth)
                .set("zero_at", rec.zero_at)
                .set("simple_parry", if x.is_one() { rec.zero_at } else { None })
                .set("bits", rec.bits);
            r.table = Some(orbit_table(&rec.digits, &rec.orbit));
            Ok(r)
        }
        Command::Expand1 { beta, depth } => {
            require_depth(*depth)?;
            let beta = beta_of(beta)?;
            let e = one_with_precision(&beta, *depth, prec)?;
            let mut r = Report::new("expand1");
            r.set("beta", beta.describe())
                .set("digits", report::word(&e.raw_digits))
                .set("star", report::word(&e.star_prefix(*depth)?))
                .set("simple_parry", e.simple_parry)
                .set("certified_depth", e.raw_digits.len())
                .set("orbit", intervals(&e.orbit))
                .set("bits", e.bits);
            r.table = Some(orbit_table(&e.raw_digits, &e.orbit));
            Ok(r)
        }
        Command::Admissible { word, ceiling } => {
            let c = ceiling_of(ceiling, word.len(), prec)?;
            let mut r = Report::new("admissible");
            r.set("word", report::word(word)).set("admissible", is_admissible(word, &c)?);
            Ok(r)
        }
        Command::SelfAdmissible { word } => {
            let mut r = Report::new("self-admissible");
            r.set("word", report::word(word)).set("self_admissible", is_self_admissible(word));
            Ok(r)
        }
        Command::Count { ceiling, n } => {
            let c = ceiling_of(ceiling, *n, prec)?;
            let count = count_admissible(&c, *n)?;
            let mut r = Report::new("count");
            r.set("n", *n).set("count", count.to_string());
            Ok(r)
        }
        Command::Tau { word } => {
            let info = recurrence_time(word);
            let mut r = Report::new("tau");
            r.set("tau", info.tau).set("full", info.is_full);
            Ok(r)
        }
        Command::Extend { word, length } => {
            let ext = maximal_extension(word, *length)?;
            let mut r = Report::new("extend");
            r.set("word", report::word(word))
                .set("extension", report::word(&ext))
                .set("tau", recurrence_time(word).tau);
            Ok(r)
        }
        Command::Cylinder { word } => cylinder_report(word, prec),
        Command::Walk { depth, window } => {
            require_depth(*depth)?;
            let words = walk_words(*depth, window)?;
            let pool = cfg.pool()?;
            let cylinders = pool.install(|| {
                words
                    .par_iter()
                    .map(|w| {
                        let c = cylinder_with_precision(w, prec)?;
                        let len = c.length(prec)?;
                        Ok((c, len))
                    })
                    .collect::<betakit_core::Result<Vec<_>>>()
            })?;
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for (c, len) in &cylinders {
                let b0 = c.left().enclosure();
                let b1 = c.right().enclosure();
                rows.push(vec![
                    report::word_text(c.word()),
                    c.order().to_string(),
                    c.tau().to_string(),
                    b0.to_string(),
                    b1.to_string(),
                    len.to_string(),
                    c.is_regular().to_string(),
                ]);
                items.push(json!({
                    "word": report::word(c.word()),
                    "tau": c.tau(),
                    "regular": c.is_regular(),
                    "beta0": report::interval(b0),
                    "beta1": report::interval(b1),
                    "length": report::interval(len),
                }));
            }
            let only: Vec<_> = cylinders.into_iter().map(|(c, _)| c).collect();
            let tiling = betakit_core::cylinders::check_tiling(&only, window, prec)?;
            let mut r = Report::new("walk");
            r.set("n", *depth)
                .set("window", window_json(window))
                .set("count", items.len())
                .set("cylinders", Value::Array(items))
                .set("tiling", report::verdict(tiling));
            r.table = Some(Table {
                headers: vec!["word", "n", "tau", "beta0", "beta1", "length", "regular"],
                rows,
            });
            Ok(r)
        }
        Command::Cover { depth, window, target } => {
            require_depth(*depth)?;
            let spec = spec_of(target)?;
            let pool = cfg.pool()?;
            let cover = parallel_cover(&pool, window, &spec, *depth, prec)?;
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for p in &cover.pieces {
                rows.push(vec![
                    report::word_text(&p.word),
                    p.word.len().to_string(),
                    p.left.to_string(),
                    p.right.to_string(),
                    p.length().to_string(),
                ]);
                items.push(json!({
                    "word": report::word(&p.word),
                    "lo": report::interval(&p.left),
                    "hi": report::interval(&p.right),
                    "length": report::interval(&p.length()),
                    "monotone": p.monotone,
                }));
            }
            let s_star = critical_exponent(&cover.pieces, DEFAULT_TOLERANCE);
            let mut r = Report::new("cover");
            r.set("n", *depth)
                .set("window", window_json(window))
                .set("target", target_json(&spec.target))
                .set("rate", rate_json(&spec.rate))
                .set("ell", cover.ell)
                .set("radius", report::rational(&cover.radius))
                .set("cylinders", cover.cylinders)
                .set("pieces", Value::Array(items))
                .set("piece_bound", report::verdict(check_piece_bound(&cover)))
                .set(
                    "lipschitz_piece_bound",
                    check_lipschitz_piece_bound(&cover, &spec.target).map(report::verdict),
                )
                .set("sum_at_1", report::interval(&partition_sum(&cover, 1.0)))
                .set("s_star", s_star_json(s_star, DEFAULT_TOLERANCE))
                .set("bits", cover.prec);
            r.table = Some(Table { headers: vec!["word", "n", "lo", "hi", "length"], rows });
            Ok(r)
        }
        Command::Dim { depths, window, tolerance, target } => {
            if depths.is_empty() || depths.contains(&0) || depths.windows(2).any(|d| d[0] >= d[1]) {
                return Err(CliError::usage("--depths must be increasing positive integers"));
            }
            if !(*tolerance > 0.0 && *tolerance < 1.0) {
                return Err(CliError::usage("--tolerance must lie in (0, 1)"));
            }
            let spec = spec_of(target)?;
            let pool = cfg.pool()?;
            let mut estimates = Vec::new();
            for &n in depths {
                let cover = parallel_cover(&pool, window, &spec, n, prec)?;
                estimates.push(DepthEstimate {
                    depth: n,
                    s_star: critical_exponent(&cover.pieces, *tolerance),
                    pieces: cover.pieces.len(),
                    cylinders: cover.cylinders,
                    empty: cover.pieces.is_empty(),
                });
            }
            let dim = dimension_summary(window, &spec, estimates);
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for e in &dim.estimates {
                rows.push(vec![
                    e.depth.to_string(),
                    format!("{:.6}", e.s_star),
                    e.pieces.to_string(),
                    e.cylinders.to_string(),
                ]);
                items.push(json!({
                    "depth": e.depth,
                    "s_star": s_star_json(e.s_star, *tolerance),
                    "pieces": e.pieces,
                    "cylinders": e.cylinders,
                    "empty": e.empty,
                }));
            }
            let deepest = dim.estimates.last().expect("depths is nonempty");
            let mut r = Report::new("dim");
            r.set("depth", deepest.depth)
                .set("s_star", s_star_json(deepest.s_star, *tolerance))
                .set("window", window_json(window))
                .set("target", target_json(&spec.target))
                .set("rate", rate_json(&spec.rate))
                .set("estimates", Value::Array(items))
                .set("alpha", dim.alpha)
                .set("finite_horizon_alpha", dim.finite_horizon_alpha)
                .set("theory", dim.theory)
                .set("window_bound", dim.window_bound)
                .set("flags", dim.flags.clone());
            r.table = Some(Table { headers: vec!["depth", "s_star", "pieces", "cylinders"], rows });
            Ok(r)
        }
        Command::Cantor { beta0, beta0_word, beta1, beta1_word, x0, free_len, generations, rate } => {
            let pick = |q: &Option<BigRational>, w: &Option<DigitWord>| -> CliResult<Beta> {
                match (q, w) {
                    (Some(q), _) => Ok(Beta::rational(q.clone())?),
                    (_, Some(w)) => Ok(Beta::from_word(w)?),
                    _ => Err(CliError::usage("each base needs a rational or a word")),
                }
            };
            let b0 = pick(beta0, beta0_word)?;
            let b1 = pick(beta1, beta1_word)?;
            let params = cantor::derive_params(&b0, &b1, x0.clone(), *free_len, rate.clone())?;
            let pool = cfg.pool()?;
            let tree = parallel_cantor(&pool, params, *generations)?;
            Ok(cantor_report(&tree))
        }
        Command::WitnessX1 { word, z, suffix } => {
            let w = cantor::periodic_prefix_witness(word, *z, *suffix, prec)?;
            let mut r = Report::new("witness-x1");
            r.set("period", w.period)
                .set("repeats", w.repeats)
                .set("suffix", w.suffix)
                .set("word", report::word(&w.word))
                .set("radius_exponent", w.radius_exponent)
                .set("self_admissible", w.self_admissible)
                .set("agreement", w.agreement)
                .set("hit", report::verdict(w.hit));
            Ok(r)
        }
        Command::Zeros { beta, depth, alpha_grid } => {
            require_depth(*depth)?;
            let beta = beta_of(beta)?;
            let g = classify_zero_growth(&beta, *depth, alpha_grid)?;
            let mut r = Report::new("zeros");
            r.set("beta", beta.describe())
                .set("horizon", g.horizon)
                .set("runs", g.runs.clone())
                .set(
                    "growth",
                    match g.growth {
                        Growth::BoundedSoFar => "bounded-so-far",
                        Growth::UnboundedEvidence => "unbounded-evidence",
                    },
                )
                .set("sup_ratio", g.sup_ratio)
                .set("argmax", g.argmax)
                .set(
                    "level_counts",
                    Value::Array(g.level_counts.iter().map(|(a, c)| json!({ "alpha": a, "count": c })).collect()),
                );
            let rows = g
                .runs
                .iter()
                .enumerate()
                .map(|(i, l)| vec![(i + 1).to_string(), l.to_string(), format!("{:.6}", *l as f64 / (i + 1) as f64)])
                .collect();
            r.table = Some(Table { headers: vec!["n", "run", "ratio"], rows });
            Ok(r)
        }
    }
}

/// `s*` found by bisection: the true crossing lies within `tol/2`.
fn s_star_json(s: f64, tol: f64) -> Value {
    json!({ "lo": (s - tol / 2.0).max(0.0), "hi": (s + tol / 2.0).min(1.0), "tolerance": tol })
}

fn cylinder_report(word: &DigitWord, prec: u32) -> CliResult<Report> {
    let c = cylinder_with_precision(word, prec)?;
    let b = length_bounds(&c, prec)?;
    let img = orbit_image(&c, prec)?;
    let verdict = if c.is_boundary() && c.left().at_boundary() {
        None
    } else {
        Some(report::verdict(check_length_bounds(&c, prec)?))
    };
    let mut r = Report::new("cylinder");
    r.set("word", report::word(word))
        .set("n", c.order())
        .set("tau", c.tau())
        .set("regular", c.is_regular())
        .set("boundary", c.is_boundary())
        .set("beta0", report::interval(c.left().enclosure()))
        .set("beta1", report::interval(c.right().enclosure()))
        .set("beta0_text", c.left().enclosure().to_string())
        .set("beta1_text", c.right().enclosure().to_string())
        .set("length", report::interval(&b.actual))
        .set("length_text", b.actual.to_string())
        .set("upper", report::interval(&b.upper))
        .set("lower", b.lower.as_ref().map(report::interval))
        .set("length_bounds", verdict)
        .set("orbit_sup", report::interval(&img.sup));
    Ok(r)
}

fn cantor_report(tree: &GenerationTree) -> Report {
    let p = &tree.params;
    let mut nodes = Vec::new();
    let mut rows = Vec::new();
    let mut hit_failures = 0;
    let mut certificate_failures = 0;
    for (i, n) in tree.nodes.iter().enumerate() {
        let cert = n.certificate.as_ref().map(|c| {
            let ok = c.self_admissible
                && c.full_recurrence
                && c.hit.holds()
                && c.diameter.holds()
                && c.gamma.holds()
                && c.length_floor.holds();
            if !c.hit.holds() {
                hit_failures += 1;
            }
            if !ok {
                certificate_failures += 1;
            }
            json!({
                "self_admissible": c.self_admissible,
                "full_recurrence": c.full_recurrence,
                "hit": report::verdict(c.hit),
                "diameter": report::verdict(c.diameter),
                "gamma": report::verdict(c.gamma),
                "length_floor": report::verdict(c.length_floor),
                "image": report::interval(&c.image),
                "candidates": c.candidates,
            })
        });
        rows.push(vec![
            i.to_string(),
            n.parent.map_or(String::new(), |p| p.to_string()),
            n.generation.to_string(),
            report::word_text(&n.word),
            n.mu.to_string(),
            n.certificate.as_ref().map_or(String::new(), |c| format!("{:?}", c.hit).to_lowercase()),
        ]);
        nodes.push(json!({
            "id": i,
            "parent": n.parent,
            "generation": n.generation,
            "word": report::word(&n.word),
            "stem_len": n.stem_len,
            "mu": report::rational(&n.mu),
            "certificate": cert,
        }));
    }
    let generations: Vec<Value> = tree
        .generations
        .iter()
        .map(|g| {
            json!({
                "k": g.k,
                "shape": shape_json(g.shape),
                "n": g.stem_len,
                "ell": g.ell,
                "order": g.order,
                "radius": report::interval(&g.radius),
                "radius_ok": report::verdict(g.radius_ok),
                "candidates": g.candidates,
                "diameter_failures": g.diameter_failures,
                "bits": g.prec,
            })
        })
        .collect();
    let mu: Vec<Value> = tree.nodes.iter().map(|n| report::rational(&n.mu)).collect();
    let diameter_failures: usize = tree.generations.iter().map(|g| g.diameter_failures).sum();
    let mut r = Report::new("cantor");
    r.set(
        "params",
        json!({
            "beta0": p.beta0().describe(),
            "beta1": p.beta1().describe(),
            "beta2": report::word(p.beta2().word()),
            "M": p.first_disagreement(),
            "q": p.zero_padding(),
            "N": p.free_len(),
            "ell": p.block_len(),
            "blocks": p.block_count(),
            "x0": report::rational(p.x0()),
            "rate": rate_json(p.rate()),
            "closeness": { "lhs": p.closeness().0, "rhs": p.closeness().1 },
            "exponent_bound": p.exponent_bound(),
        }),
    )
    .set("orders", tree.orders())
    .set("generations", Value::Array(generations))
    .set("nodes", Value::Array(nodes))
    .set("mu", Value::Array(mu))
    .set(
        "certificates",
        json!({
            "leaves": tree.nodes.len() - 1,
            "hit_failures": hit_failures,
            "certificate_failures": certificate_failures,
            "diameter_failures": diameter_failures,
            "mu_additive": tree.measure_is_additive(),
        }),
    );
    r.table = Some(Table { headers: vec!["id", "parent", "generation", "word", "mu", "hit"], rows });
    r
}

/// Parses `args`, runs the subcommand and writes its report. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => crate::error::EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::from_args(&cli.global).and_then(|cfg| {
        let report = execute(&cli.command, &cfg)?;
        report::emit_report(&report, cfg.format, cfg.out.as_deref())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("betakit: {e}");
            e.exit_code()
        }
    }
}
