//! Number formatting for SVG output.

/// Two-decimal rendering with trailing zeros trimmed and no negative zero.
pub fn coord(v: f64) -> String {
    let mut s = format!("{v:.2}");
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(t);
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}
