use serde_json::value::RawValue;

/// Scientific notation with 17 significant digits, enough to round-trip any
/// `f64`.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// A JSON number with 17 significant digits; non-finite values become `null`.
pub fn json_number(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() {
        sci(v)
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

/// An optional number, `null` when absent.
pub fn json_optional(v: Option<f64>) -> Box<RawValue> {
    json_number(v.unwrap_or(f64::NAN))
}
