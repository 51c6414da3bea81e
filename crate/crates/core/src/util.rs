//! Small shared helpers.

/// Format `x` with `sig` significant digits, plain decimal notation,
/// trailing zeros trimmed. Used for all CSV output so reruns are
/// byte-identical.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    // Sub-nanoscale values are solver noise in every unit this crate uses.
    if x == 0.0 || x.abs() < 1e-9 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if exp >= 15 {
        return format!("{:.*e}", sig - 1, x);
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        // "-0" after trimming means the value rounded to zero
        if t == "-0" {
            "0".to_string()
        } else {
            t.to_string()
        }
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_sig;

    #[test]
    fn formats_six_significant_digits() {
        assert_eq!(fmt_sig(0.0, 6), "0");
        assert_eq!(fmt_sig(1.0, 6), "1");
        assert_eq!(fmt_sig(123.456789, 6), "123.457");
        assert_eq!(fmt_sig(-0.0012345678, 6), "-0.00123457");
        assert_eq!(fmt_sig(1234567.89, 6), "1234568");
        assert_eq!(fmt_sig(0.5, 6), "0.5");
        assert_eq!(fmt_sig(-1e-12, 6), "0");
    }
}
