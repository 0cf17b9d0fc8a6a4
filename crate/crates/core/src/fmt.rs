//! Number formatting shared by every table and report writer.

/// Formats `x` with 10 significant digits.
///
/// Values in [1e-5, 1e10) are printed positionally, the rest in scientific
/// notation. The output depends only on the bits of `x`.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.9e}")
    }
}

/// Rounds to 10 significant digits, for JSON numbers.
pub fn round10(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().expect("formatted float parses")
}

/// Applies [`round10`] to every float inside a JSON value.
pub fn round_json(v: &mut serde_json::Value) {
    use serde_json::Value;
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round10(n.as_f64().expect("f64 number"));
            if let Some(m) = serde_json::Number::from_f64(x) {
                *n = m;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_json),
        Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_digits() {
        assert_eq!(sig10(1.0), "1.000000000");
        assert_eq!(sig10(0.5614594835668851), "0.5614594836");
        assert_eq!(sig10(-2.5), "-2.500000000");
        assert_eq!(sig10(123456.789), "123456.7890");
        assert_eq!(sig10(0.0), "0");
        assert_eq!(sig10(1.5e-9), "1.500000000e-9");
        assert_eq!(round10(1.300084123456789), 1.300084123);
    }
}
