//! Stable float formatting for text outputs.
//!
//! All derived CSV/JSON outputs print floats with 6 significant digits so
//! that golden files stay byte-stable across runs and platforms.

/// Format `x` with 6 significant digits, `%g`-style: plain decimal notation
/// within a reasonable exponent range, scientific outside it, trailing
/// zeros trimmed.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }

    // Take the exponent from the rounded scientific form so boundary cases
    // (e.g. 999999.5 -> 1e6) stay consistent with the printed digits.
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("exponent");

    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

/// Round `x` to 6 significant digits. Used before serializing floats into
/// JSON so numeric payloads match the textual outputs.
pub fn sig6_round(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    sig6(x).parse().expect("sig6 output parses back")
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}
