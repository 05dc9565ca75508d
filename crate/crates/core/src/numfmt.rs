//! Numeric text formatting for CSV and JSON output.
//!
//! Every real emitted by a report or CSV writer goes through [`g12`] so that
//! repeated runs are byte-identical and cells parse back losslessly.

/// Formats `x` with 12 significant digits, `printf %g` style: positional
/// notation when the decimal exponent lies in `[-4, 12)`, scientific
/// otherwise, with trailing zeros trimmed.
///
/// ```
/// use cperiod_core::numfmt::g12;
/// assert_eq!(g12(16.0), "16");
/// assert_eq!(g12(0.25), "0.25");
/// assert_eq!(g12(1.0 / 3.0), "0.333333333333");
/// ```
pub fn g12(x: f64) -> String {
    assert!(x.is_finite(), "non-finite value in numeric output");
    if x == 0.0 {
        return "0".to_string();
    }
    // 11 fractional digits in scientific form = 12 significant digits.
    // The exponent is read back after formatting so mantissa carry
    // (9.99...e-1 -> 1e0) is already accounted for.
    let sci = format!("{:.11e}", x);
    let epos = sci.find('e').expect("scientific format");
    let exp: i32 = sci[epos + 1..].parse().expect("exponent");
    if (-4..12).contains(&exp) {
        let prec = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", prec, x))
    } else {
        let mantissa = trim_zeros(sci[..epos].to_string());
        format!("{mantissa}e{exp}")
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
