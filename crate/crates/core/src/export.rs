//! Locale-free number formatting shared by every CSV writer.

/// Significant digits written for reals.
pub const SIG_DIGITS: usize = 12;

/// `%.12g`: shortest of fixed or scientific notation with 12 significant
/// digits and trailing zeros removed.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIG_DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
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
    fn formats_like_printf_g() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(0.25), "0.25");
        assert_eq!(fmt_real(-2.5), "-2.5");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(0.0128937966596), "0.0128937966596");
        assert_eq!(fmt_real(123456.0), "123456");
        assert_eq!(fmt_real(1e-7), "1e-07");
        assert_eq!(fmt_real(1.5e13), "1.5e+13");
        assert_eq!(fmt_real(0.0001), "0.0001");
        assert_eq!(fmt_real(999999999999.9), "1e+12");
    }
}
