use quon_core::Complex64;

/// `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Ok(re) = s.parse::<f64>() {
        return Some(Complex64::new(re, 0.0));
    }
    let body = s.strip_suffix('i')?;
    // Split at the last sign that is not the leading one or part of an exponent.
    let split = body
        .char_indices()
        .rev()
        .find(|&(k, ch)| k > 0 && (ch == '+' || ch == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k);
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => t.parse().ok(),
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// `re+imi` with full precision; stable across runs.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{:.15}{sign}{:.15}i", z.re + 0.0, z.im.abs())
}
