//! Locale-independent number formatting for tabular output.

/// Significant digits written to CSV.
pub const SIG_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits, positional for moderate magnitudes and
/// scientific otherwise, without trailing zeros.
pub fn sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Parse `a:b:step` into the inclusive arithmetic grid, each value rounded to 12 significant digits.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(format!("range `{s}` is not of the form a:b:step"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` in range `{s}` is not a number"));
    let (a, b, step) = (num(a)?, num(b)?, num(step)?);
    if !(step > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(format!("range `{s}` needs finite ends and a positive step"));
    }
    if b < a {
        return Err(format!("range `{s}` ends below its start"));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    if n >= 10_000_000 {
        return Err(format!("range `{s}` has too many points"));
    }
    Ok((0..=n).map(|i| sig(a + step * i as f64).parse().expect("formatted number parses")).collect())
}
