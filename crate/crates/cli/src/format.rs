//! Locale-free number formatting for CSV and tables.

/// Significant digits written to every CSV field.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting with trailing zeros kept.
///
/// Fixed notation for decimal exponents in `[-5, 12)`, scientific otherwise.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return format!("{:.*}", SIGNIFICANT_DIGITS - 1, 0.0);
    }
    // Exponent after rounding to the target precision.
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0), "1.00000000000");
        assert_eq!(num(0.0), "0.00000000000");
        assert_eq!(num(-0.4375), "-0.437500000000");
        assert_eq!(num(1e4), "10000.0000000");
        assert_eq!(num(1.23456789012345e-7), "1.23456789012e-7");
        assert_eq!(num(9.999999999999e11), "1.00000000000e12");
        assert_eq!(num(2.0f64.sqrt()), "1.41421356237");
        assert_eq!(num(f64::NAN), "NaN");
        for x in [0.029437251522859434, 1.941126, 123.456, 7e-5] {
            let back: f64 = num(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }
}
