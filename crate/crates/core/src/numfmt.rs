//! Locale-independent number formatting.

/// Significant digits used for all text output.
pub const SIG_DIGITS: usize = 12;

/// Formats like C's `%.12g`: fixed notation for exponents in `[-4, 12)`,
/// scientific otherwise, trailing zeros removed.
pub fn fmt_g(v: f64) -> String {
    fmt_g_digits(v, SIG_DIGITS)
}

pub fn fmt_g_digits(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_g(21f64.sqrt() / 6.0), "0.763762615826");
        assert_eq!(fmt_g(6f64.sqrt() / 6.0), "0.408248290464");
        assert_eq!(fmt_g(0.5), "0.5");
        assert_eq!(fmt_g(0.75), "0.75");
        assert_eq!(fmt_g(-2.0), "-2");
        assert_eq!(fmt_g(1.5e-7), "1.5e-07");
        assert_eq!(fmt_g(0.0001234), "0.0001234");
        assert_eq!(fmt_g(1e12), "1e+12");
        assert_eq!(fmt_g(123456789012.0), "123456789012");
        assert_eq!(fmt_g(f64::INFINITY), "inf");
        assert_eq!(fmt_g(0.999999999999951), "1");
    }
}
