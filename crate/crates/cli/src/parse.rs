//! Parsers for flag values.

use betakit_core::targets::{Rate, Target};
use betakit_core::cylinders::Window;
use betakit_core::DigitWord;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `"19/10"`, `"1.9"`, `"-0.25"` or `"3"`.
pub fn rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(format!("not a number: {s:?}"));
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| format!("not a number: {s:?}"))?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, scale);
    Ok(if neg { -r } else { r })
}

/// `"1,0,1"`.
pub fn word(s: &str) -> Result<DigitWord, String> {
    s.parse::<DigitWord>().map_err(|e| e.to_string())
}

/// `"1.9:2.0"`.
pub fn window(s: &str) -> Result<Window, String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("window must be lo:hi, got {s:?}"))?;
    let lo = rational(lo)?;
    let hi = rational(hi)?;
    if lo <= BigRational::one() {
        return Err("window lower end must exceed 1".into());
    }
    Window::new(lo, hi).map_err(|e| e.to_string())
}

/// `"alpha:1.0"` or `"alpha:1.0,c:0"`.
pub fn rate(s: &str) -> Result<Rate, String> {
    let mut alpha = None;
    let mut c = BigRational::zero();
    for part in s.split(',') {
        let (key, value) = part
            .split_once(':')
            .ok_or_else(|| format!("rate parts must be key:value, got {part:?}"))?;
        match key.trim() {
            "alpha" => alpha = Some(rational(value)?),
            "c" => c = rational(value)?,
            other => return Err(format!("unknown rate key {other:?}")),
        }
    }
    let alpha = alpha.ok_or("rate needs alpha:<value>")?;
    if alpha < BigRational::zero() {
        return Err("alpha must be non-negative".into());
    }
    Ok(Rate::Affine { alpha, c })
}

/// One non-negative integer per line; blank lines and `#` comments are
/// skipped.
pub fn rate_table(text: &str) -> Result<Rate, String> {
    let mut table = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        table.push(line.parse::<u64>().map_err(|_| format!("line {}: not an integer: {line:?}", i + 1))?);
    }
    if table.is_empty() {
        return Err("rate file has no entries".into());
    }
    Ok(Rate::Table(table))
}

/// `"a+b*beta"`, `"a-b*beta"` or `"a+beta"`.
pub fn affine_target(s: &str) -> Result<Target, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact
        .strip_suffix("beta")
        .ok_or_else(|| format!("target must have the form a+b*beta, got {s:?}"))?;
    let body = body.strip_suffix('*').unwrap_or(body);
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last()
        .ok_or_else(|| format!("target must have the form a+b*beta, got {s:?}"))?;
    let a = rational(&body[..split])?;
    let b = match &body[split..] {
        "+" => BigRational::one(),
        "-" => -BigRational::one(),
        coef => rational(coef)?,
    };
    Ok(Target::Affine { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rationals() {
        assert_eq!(rational("1.9").unwrap(), q(19, 10));
        assert_eq!(rational("19/10").unwrap(), q(19, 10));
        assert_eq!(rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(rational("2").unwrap(), q(2, 1));
        assert_eq!(rational(".5").unwrap(), q(1, 2));
        assert!(rational("1.2.3").is_err());
        assert!(rational("x").is_err());
        assert!(rational("1/0").is_err());
    }

    #[test]
    fn windows_and_rates() {
        let w = window("1.9:2.0").unwrap();
        assert_eq!(w.lo(), &q(19, 10));
        assert!(window("1:2").is_err());
        assert!(window("2").is_err());
        assert_eq!(rate("alpha:1.0").unwrap(), Rate::Affine { alpha: q(1, 1), c: q(0, 1) });
        assert_eq!(rate("alpha:0.5,c:2").unwrap(), Rate::Affine { alpha: q(1, 2), c: q(2, 1) });
        assert!(rate("c:2").is_err());
        assert_eq!(rate_table("1\n# x\n2\n\n3").unwrap(), Rate::Table(vec![1, 2, 3]));
    }

    #[test]
    fn affine_targets() {
        assert_eq!(affine_target("-1+1*beta").unwrap(), Target::Affine { a: q(-1, 1), b: q(1, 1) });
        assert_eq!(affine_target("0.5 - 0.25*beta").unwrap(), Target::Affine { a: q(1, 2), b: q(-1, 4) });
        assert_eq!(affine_target("-1+beta").unwrap(), Target::Affine { a: q(-1, 1), b: q(1, 1) });
        assert!(affine_target("beta").is_err());
        assert!(affine_target("1+2*x").is_err());
    }
}
