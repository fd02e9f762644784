//! Parsers for spectrum and pin arguments.

use anyhow::{anyhow, bail, Context, Result};
use densecode::constructions::ShiftClockPair;
use densecode::{SchmidtSpectrum64, UnitaryMatrix64};
use num_rational::Rational64;

/// One coefficient: a decimal (`0.6`) or an exact fraction (`2/3`).
fn parse_coefficient(raw: &str) -> Result<f64> {
    let raw = raw.trim();
    if let Some((num, den)) = raw.split_once('/') {
        let num: i64 = num.trim().parse().with_context(|| format!("bad numerator in `{raw}`"))?;
        let den: i64 = den.trim().parse().with_context(|| format!("bad denominator in `{raw}`"))?;
        if den == 0 {
            bail!("zero denominator in `{raw}`");
        }
        let r = Rational64::new(num, den);
        Ok(*r.numer() as f64 / *r.denom() as f64)
    } else {
        raw.parse::<f64>().with_context(|| format!("`{raw}` is neither a decimal nor a fraction"))
    }
}

/// Comma-separated coefficients, sorted descending. The flag reports a reorder.
pub fn parse_lambdas(raw: &str, d: usize) -> Result<(SchmidtSpectrum64, bool)> {
    let values = raw.split(',').map(parse_coefficient).collect::<Result<Vec<_>>>().context("--lambdas")?;
    if values.len() != d {
        bail!("--lambdas: {} coefficients given for d = {d}", values.len());
    }
    SchmidtSpectrum64::from_unsorted(values).map_err(|e| anyhow!("--lambdas: {e}"))
}

/// `I`, or `X<k>Z<l>` with either factor optional and a missing exponent meaning 1
/// (`X`, `X2`, `Z`, `XZ2`).
pub fn parse_pin(token: &str, pair: &ShiftClockPair<f64>) -> Result<UnitaryMatrix64> {
    let t = token.trim();
    if t == "I" {
        return Ok(pair.weyl(0, 0));
    }
    let (mut k, mut l) = (0usize, 0usize);
    let mut rest = t;
    let mut seen_any = false;
    for (letter, slot) in [('X', &mut k), ('Z', &mut l)] {
        if let Some(tail) = rest.strip_prefix(letter) {
            let digits: String = tail.chars().take_while(|c| c.is_ascii_digit()).collect();
            *slot = if digits.is_empty() { 1 } else { digits.parse()? };
            rest = &tail[digits.len()..];
            seen_any = true;
        }
    }
    if !seen_any || !rest.is_empty() {
        bail!("--pin: cannot parse `{token}` (expected I, X<k>, Z<l> or X<k>Z<l>)");
    }
    Ok(pair.weyl(k % pair.d, l % pair.d))
}

pub fn parse_pins(raw: &str, d: usize) -> Result<Vec<UnitaryMatrix64>> {
    let pair = ShiftClockPair::new(d).map_err(|e| anyhow!("--pin: {e}"))?;
    raw.split(',').map(|t| parse_pin(t, &pair)).collect()
}
