//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with `cargo test -p betakit --test acceptance`; pass criterion
//! numbers as arguments to run a subset.

#[path = "../../core/tests/support/field.rs"]
mod field;

use std::time::Instant;

use betakit::cli::{parallel_cantor, parallel_cover};
use betakit_core::cantor::{derive_params, periodic_prefix_witness};
use betakit_core::cylinders::{
    check_length_bounds, check_tiling, cylinder_with_precision, derivative_positive, orbit_image, walk_words,
    ParamCylinder, Window,
};
use betakit_core::expansion::{digits_of_one, one_with_precision, zero_runs};
use betakit_core::numeric::{compare_refining, solve_unit_equation};
use betakit_core::recurrence::{branch_full_recurrence, maximal_extension, tau};
use betakit_core::targets::{
    critical_exponent, dimension_summary, ratio, DepthEstimate, Rate, Target, TargetSpec, DEFAULT_DEPTHS,
    DEFAULT_TOLERANCE,
};
use betakit_core::words::{count_admissible, is_self_admissible, self_admissible_words, Ceiling};
use betakit_core::{Beta, DigitWord, Dyadic, Interval, Verdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Outcome of one criterion: pass flag plus a one-line summary.
type Outcome = Result<String, String>;

type Criterion = (usize, &'static str, Box<dyn Fn() -> Outcome>);

fn ensure(ok: bool, pass: String, fail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(pass)
    } else {
        Err(fail())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    ratio(n, d)
}

fn one_to_three() -> Window {
    Window::new(q(1, 1), q(3, 1)).unwrap()
}

fn pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().build().unwrap()
}

fn renyi_bounds() -> Outcome {
    let prec = 256;
    let cases: [(&str, Beta, Ceiling); 4] = [
        ("2", Beta::integer(2).unwrap(), Ceiling::integer_base(2).unwrap()),
        ("golden", Beta::from_word(&[1, 1]).unwrap(), Ceiling::from_parry_word(&[1, 1]).unwrap()),
        ("tribonacci", Beta::from_word(&[1, 1, 1]).unwrap(), Ceiling::from_parry_word(&[1, 1, 1]).unwrap()),
        ("root(2,1)", Beta::from_word(&[2, 1]).unwrap(), Ceiling::from_parry_word(&[2, 1]).unwrap()),
    ];
    let mut checks = 0;
    for (name, beta, ceiling) in &cases {
        let b = beta.enclose(prec).unwrap();
        let one = Interval::from_int(1, prec);
        for n in 1..=16usize {
            let count = count_admissible(ceiling, n).unwrap();
            let c = Interval::from_rational(&BigRational::from_integer(BigInt::from(count)), prec);
            let lower = b.powi(n as u32);
            let upper = b.powi(n as u32 + 1).div(&(&b - &one)).unwrap();
            if !(lower.certainly_le(&c) && c.certainly_le(&upper)) {
                return Err(format!("beta={name} n={n}: count {count} outside [{lower}, {upper}]"));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} (beta, n) pairs"))
}

/// Largest self-admissible word of length `m` extending `w`, by depth-first
/// search over digits in decreasing order.
fn largest_extension(w: &[u32], m: usize) -> Option<Vec<u32>> {
    if !is_self_admissible(w) {
        return None;
    }
    if w.len() == m {
        return Some(w.to_vec());
    }
    let mut v = w.to_vec();
    for d in (0..=w[0]).rev() {
        v.push(d);
        if let Some(found) = largest_extension(&v, m) {
            return Some(found);
        }
        v.pop();
    }
    None
}

fn word_combinatorics() -> Outcome {
    let window = one_to_three();
    let mut violations = Vec::new();
    let mut words_seen = 0;
    for n in 1..=12usize {
        let words = walk_words(n, &window).unwrap();
        words_seen += words.len();
        for w in &words {
            let k = tau(w);
            // prefix gap: a proper suffix of the first period is strictly below the prefix
            for i in 1..k {
                if w[i..k] >= w[..k - i] {
                    violations.push(format!("prefix gap ({w}) i={i}"));
                }
            }
            if branch_full_recurrence(w) && k != n {
                violations.push(format!("branching ({w}) has tau {k}"));
            }
            if n <= 8 {
                for m in n..=12 {
                    let fast = maximal_extension(w, m).unwrap();
                    if largest_extension(w, m).as_deref() != Some(fast.digits()) {
                        violations.push(format!("maximal extension ({w}) to {m}"));
                    }
                }
            }
        }
        for pair in words.windows(2) {
            let (lower, upper) = (&pair[0], &pair[1]);
            let t1 = tau(upper);
            if t1 < n && tau(lower) <= t1 {
                violations.push(format!("tau monotonicity ({lower}) < ({upper})"));
            }
        }
        if words.len() >= n {
            for run in words.windows(n) {
                if !run.iter().any(|w| tau(w) == n) {
                    violations.push(format!("no regular word among {n} from ({})", run[0]));
                }
            }
        }
    }
    ensure(
        violations.is_empty(),
        format!("{words_seen} words, orders 1..=12, 0 violations"),
        || format!("{} violations, first: {}", violations.len(), violations[0]),
    )
}

fn cylinder_geometry() -> Outcome {
    let prec = 256;
    let window = one_to_three();
    let mut checked = 0;
    let mut problems = Vec::new();
    for n in 1..=12usize {
        let cylinders: Vec<ParamCylinder> = walk_words(n, &window)
            .unwrap()
            .iter()
            .map(|w| cylinder_with_precision(w, prec).unwrap())
            .collect();
        for c in cylinders.iter().filter(|c| !c.is_boundary()) {
            match check_length_bounds(c, prec) {
                Ok(Verdict::Holds) => checked += 1,
                other => problems.push(format!("({}) length bounds: {other:?}", c.word())),
            }
        }
        match check_tiling(&cylinders, &window, prec) {
            Ok(Verdict::Holds) => {}
            other => problems.push(format!("order {n} tiling: {other:?}")),
        }
    }
    ensure(
        problems.is_empty(),
        format!("{checked} cylinders with beta0 > 1, tiling at orders 1..=12"),
        || format!("{} violations, first: {}", problems.len(), problems[0]),
    )
}

fn orbit_image_monotone() -> Outcome {
    let prec = 256;
    let window = one_to_three();
    let tol = Dyadic::pow2(-100);
    let mut checked = 0;
    let mut problems = Vec::new();
    for n in 1..=10usize {
        for w in walk_words(n, &window).unwrap() {
            let c = cylinder_with_precision(&w, prec).unwrap();
            let at_left = orbit_image(&c, prec).unwrap().at_left;
            if at_left.abs().hi() > &tol {
                problems.push(format!("({w}) f(beta0) = {at_left}"));
            }
            match derivative_positive(&c, 16, prec) {
                Ok(Verdict::Holds) => {}
                other => problems.push(format!("({w}) derivative: {other:?}")),
            }
            checked += 1;
        }
    }
    ensure(
        problems.is_empty(),
        format!("{checked} cylinders, orders 1..=10, 16 sub-enclosures each"),
        || format!("{} violations, first: {}", problems.len(), problems[0]),
    )
}

/// Word roots whose expansion of one does not terminate within `depth`
/// digits, taken in order from non-self-admissible words over {0, 1, 2}.
fn sampled_infinite_betas(count: usize, depth: usize) -> Vec<Beta> {
    let mut out = Vec::new();
    for len in 3..=7usize {
        let total = 3usize.pow(len as u32 - 1);
        for code in 0..2 * total {
            let mut w = vec![1 + (code / total) as u32];
            let mut rest = code % total;
            for _ in 1..len {
                w.push((rest % 3) as u32);
                rest /= 3;
            }
            if is_self_admissible(&w) || *w.last().unwrap() == 0 {
                continue;
            }
            let beta = Beta::from_word(&w).unwrap();
            if digits_of_one(&beta, depth).map(|e| e.simple_parry.is_none()).unwrap_or(false) {
                out.push(beta);
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    out
}

fn sandwich() -> Outcome {
    let horizon = 200;
    let betas = sampled_infinite_betas(50, 2 * horizon);
    if betas.len() < 50 {
        return Err(format!("only {} sample betas", betas.len()));
    }
    let mut checked = 0;
    for beta in &betas {
        let runs = zero_runs(beta, horizon).unwrap().runs;
        let prec = 1024;
        let orbit = one_with_precision(beta, horizon, prec).unwrap().orbit;
        for n in 1..=horizon {
            let ell = runs[n - 1] as u32 + 1;
            let verdict = compare_refining(prec, false, |p| {
                let b = beta.enclose(p)?;
                let x = one_with_precision(beta, n, p)?.orbit[n - 1].clone();
                Ok((b.powi(ell).recip()?, x))
            })
            .and_then(|lower| {
                let b = beta.enclose(prec)?;
                let one = Interval::from_int(1, prec);
                let bound = (&b + &one).div(&b.powi(ell))?;
                let upper = if orbit[n - 1].certainly_le(&bound) {
                    Verdict::Holds
                } else {
                    compare_refining(prec, false, |p| {
                        let b = beta.enclose(p)?;
                        let one = Interval::from_int(1, p);
                        let x = one_with_precision(beta, n, p)?.orbit[n - 1].clone();
                        Ok((x, (&b + &one).div(&b.powi(ell))?))
                    })?
                };
                Ok(lower.and(upper))
            });
            match verdict {
                Ok(Verdict::Holds) => checked += 1,
                other => return Err(format!("beta={} n={n}: {other:?}", beta.describe())),
            }
        }
    }
    Ok(format!("{} betas x {horizon} orbit points ({checked} certified)", betas.len()))
}

fn dimension(label: &str, target: Target) -> Outcome {
    let window = Window::new(q(19, 10), q(2, 1)).unwrap();
    let spec = TargetSpec { target, rate: Rate::Affine { alpha: q(1, 1), c: BigRational::zero() } };
    let pool = pool();
    let mut estimates = Vec::new();
    for &n in &DEFAULT_DEPTHS {
        let cover = parallel_cover(&pool, &window, &spec, n, 128).map_err(|e| e.to_string())?;
        estimates.push(DepthEstimate {
            depth: n,
            s_star: critical_exponent(&cover.pieces, DEFAULT_TOLERANCE),
            pieces: cover.pieces.len(),
            cylinders: cover.cylinders,
            empty: cover.pieces.is_empty(),
        });
    }
    let report = dimension_summary(&window, &spec, estimates);
    let s: Vec<f64> = report.estimates.iter().map(|e| e.s_star).collect();
    let last = *s.last().unwrap();
    let in_band = (0.35..=0.65).contains(&last);
    let gaps: Vec<f64> = s.iter().map(|v| (v - report.theory).abs()).collect();
    let trending = gaps.windows(2).all(|g| g[1] <= g[0]);
    let text = s.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", ");
    ensure(
        in_band && trending,
        format!("{label}: s* = [{text}] at depths 8,12,16,20; theory {:.3}", report.theory),
        || format!("{label}: s* = [{text}]; in band {in_band}, trending {trending}"),
    )
}

fn cantor_certificates() -> Outcome {
    let pool = pool();
    let mut lines = Vec::new();
    for x0 in [q(0, 1), q(3, 10)] {
        let b0 = Beta::rational(q(19, 10)).unwrap();
        let b1 = Beta::rational(q(39, 20)).unwrap();
        let rate = Rate::Affine { alpha: q(1, 1), c: BigRational::zero() };
        let params = derive_params(&b0, &b1, x0.clone(), 4, rate).map_err(|e| e.to_string())?;
        let tree = parallel_cantor(&pool, params, 2).map_err(|e| format!("x0={x0}: {e}"))?;
        let mut failures = 0;
        let mut leaves = 0;
        for node in &tree.nodes {
            if let Some(c) = &node.certificate {
                leaves += 1;
                let ok = c.self_admissible
                    && c.full_recurrence
                    && c.hit.holds()
                    && c.diameter.holds()
                    && c.gamma.holds()
                    && c.length_floor.holds();
                if !ok {
                    failures += 1;
                }
            }
        }
        let diameter: usize = tree.generations.iter().map(|g| g.diameter_failures).sum();
        let additive = tree.measure_is_additive();
        let deepest = tree.generation(tree.depth()).count();
        if failures > 0 || diameter > 0 || !additive || deepest == 0 {
            return Err(format!(
                "x0={x0}: {failures} failed leaves, {diameter} diameter failures, additive {additive}"
            ));
        }
        lines.push(format!("x0={x0}: {leaves} leaves, {deepest} in generation 2"));
    }
    Ok(lines.join("; "))
}

fn x1_witnesses() -> Outcome {
    let full: Vec<Vec<u32>> = (2..=10usize)
        .flat_map(|n| self_admissible_words(n, 2).filter(move |w| tau(w) == n))
        .map(DigitWord::into_vec)
        .collect();
    let picks: Vec<&Vec<u32>> = (0..20).map(|i| &full[i * (full.len() - 1) / 19]).collect();
    for (i, w) in picks.iter().enumerate() {
        let z = 1 + i % 3;
        let witness = periodic_prefix_witness(w, z, 0, 128).map_err(|e| format!("{w:?}: {e}"))?;
        if !(witness.self_admissible && witness.agreement && witness.hit.holds()) {
            return Err(format!("{w:?} z={z}: hit {:?}", witness.hit));
        }
    }
    Ok(format!("20 words of lengths {}..={}, z in 1..=3", picks[0].len(), picks[19].len()))
}

fn oracles() -> Outcome {
    let mut fields = [
        ("golden", field::golden_field(), Beta::from_word(&[1, 1]).unwrap()),
        ("tribonacci", field::tribonacci_field(), Beta::from_word(&[1, 1, 1]).unwrap()),
    ];
    for (name, f, beta) in fields.iter_mut() {
        let (digits, _) = f.greedy(f.constant(BigRational::one()), 64);
        let e = digits_of_one(beta, 64).map_err(|e| e.to_string())?;
        if e.raw_digits != digits {
            return Err(format!("{name}: digits differ"));
        }
    }
    let root = solve_unit_equation(&[1, 1]).map_err(|e| e.to_string())?;
    let k = 200u32;
    let scale = BigInt::one() << k;
    let s = (BigInt::from(5) * &scale * &scale).sqrt();
    let phi_lo = (BigRational::new(s.clone(), scale.clone()) + q(1, 1)) / q(2, 1);
    let phi_hi = (BigRational::new(s + 1, scale) + q(1, 1)) / q(2, 1);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << 120u32);
    let lo = root.enclosure().lo().to_rational();
    let hi = root.enclosure().hi().to_rational();
    ensure(
        &phi_lo - &lo <= tol && &hi - &phi_hi <= tol && lo <= phi_hi && phi_lo <= hi,
        "golden and tribonacci to depth 64; golden root within 2^-120".into(),
        || "golden root outside 2^-120 of the quadratic formula".into(),
    )
}

fn main() {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: Vec<Criterion> = vec![
        (1, "Renyi bounds", Box::new(renyi_bounds)),
        (2, "word combinatorics", Box::new(word_combinatorics)),
        (3, "cylinder geometry", Box::new(cylinder_geometry)),
        (4, "orbit image", Box::new(orbit_image_monotone)),
        (5, "sandwich inequality", Box::new(sandwich)),
        (6, "dimension x0=0", Box::new(|| dimension("x0=0", Target::constant(q(0, 1)).unwrap()))),
        (
            7,
            "dimension x0=0.5 and beta-1",
            Box::new(|| {
                let a = dimension("x0=1/2", Target::constant(q(1, 2)).unwrap())?;
                let b = dimension("beta-1", Target::Affine { a: q(-1, 1), b: q(1, 1) })?;
                Ok(format!("{a}; {b}"))
            }),
        ),
        (8, "Cantor certificates", Box::new(cantor_certificates)),
        (9, "x0=1 witnesses", Box::new(x1_witnesses)),
        (10, "oracle cross-checks", Box::new(oracles)),
    ];
    let mut failed = 0;
    for (id, name, run) in &criteria {
        if !only.is_empty() && !only.contains(id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {id:>2} {name}: {msg} ({secs:.1} s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {msg} ({secs:.1} s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
