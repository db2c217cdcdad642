//! Fixed CSV number formatting.

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `printf("%.12g")`: shortest of fixed and exponent notation, trailing zeros removed.
pub fn g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::g12;

    #[test]
    fn matches_printf() {
        let cases = [
            (1.0, "1"),
            (0.1, "0.1"),
            (-2.5, "-2.5"),
            (1.0 / 3.0, "0.333333333333"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (1e-5, "1e-05"),
            (0.0001234, "0.0001234"),
            (-0.0, "0"),
            (2.0f64.sqrt() * 1e-10, "1.41421356237e-10"),
            (9.9999999999999e5, "1000000"),
        ];
        for (x, want) in cases {
            assert_eq!(g12(x), want, "{x:e}");
        }
    }
}
