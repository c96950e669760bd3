//! Axis specifications: `0.5`, `0.1,0.2,0.5`, `lo:hi:count`, `log:lo:hi:count`.

use anyhow::{bail, ensure, Context, Result};

pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    ensure!(!spec.is_empty(), "empty grid");
    if let Some(rest) = spec.strip_prefix("log:") {
        let (lo, hi, n) = parse_range(rest)?;
        ensure!(
            lo > 0.0 && hi > 0.0,
            "log grid needs positive end points, got {spec:?}"
        );
        let (l0, l1) = (lo.ln(), hi.ln());
        return Ok(spaced(n, lo, hi, |f| (l0 + (l1 - l0) * f).exp()));
    }
    if spec.contains(':') {
        let (lo, hi, n) = parse_range(spec)?;
        return Ok(spaced(n, lo, hi, |f| lo + (hi - lo) * f));
    }
    spec.split(',').map(parse_number).collect()
}

/// Reads a value that must be a single number.
pub fn parse_scalar(spec: &str) -> Result<f64> {
    let values = parse_grid(spec)?;
    match values.as_slice() {
        [v] => Ok(*v),
        _ => bail!(
            "expected a single value, got {} from {spec:?}",
            values.len()
        ),
    }
}

pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let v: f64 = s.parse().with_context(|| format!("not a number: {s:?}"))?;
    ensure!(v.is_finite(), "not a finite number: {s:?}");
    Ok(v)
}

fn parse_range(s: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    ensure!(parts.len() == 3, "expected lo:hi:count, got {s:?}");
    let lo = parse_number(parts[0])?;
    let hi = parse_number(parts[1])?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .with_context(|| format!("bad point count in {s:?}"))?;
    ensure!(n >= 1, "grid needs at least one point");
    ensure!(
        n > 1 || lo == hi,
        "a one-point grid needs lo == hi, got {s:?}"
    );
    Ok((lo, hi, n))
}

// End points are reproduced exactly.
fn spaced(n: usize, lo: f64, hi: f64, at: impl Fn(f64) -> f64) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => at(i as f64 / (n - 1) as f64),
        })
        .collect()
}
