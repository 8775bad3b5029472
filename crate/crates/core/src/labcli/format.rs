//! Fixed numeric formatting for CSV output.

/// Nine significant digits; positional for `1e-3 <= |v| < 1e9`, otherwise
/// `d.dddddddde<exp>`.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    // Rounding to nine digits first settles the decade.
    let sci = format!("{v:.8e}");
    let (_, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-3..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

/// One CSV line from already formatted fields.
pub fn csv_line<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = String::new();
    for (i, f) in fields.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(f.as_ref());
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_digits() {
        assert_eq!(format_real(2.0), "2.00000000");
        assert_eq!(format_real(-1.5), "-1.50000000");
        assert_eq!(format_real(1234.5678), "1234.56780");
        assert_eq!(format_real(0.001), "0.00100000000");
        assert_eq!(format_real(0.000999), "9.99000000e-4");
        assert_eq!(format_real(123456789.4), "123456789");
        assert_eq!(format_real(999999999.6), "1.00000000e9");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333");
    }
}
