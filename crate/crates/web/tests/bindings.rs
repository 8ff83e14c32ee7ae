use kappa_expand_web::{curve, expand_text, psi_rows};

const WATERMELON: &str = include_str!("../../core/specs/watermelon.spec");
const BUBBLE: &str = include_str!("../../core/specs/bubble.spec");

#[test]
fn expands_watermelon_latex() {
    let out = expand_text(WATERMELON, 8, "2", "latex").unwrap();
    assert!(out.starts_with("\\frac{1}{2^{8}\\pi^{3}}"));
    assert!(out.contains("\\frac{3720699}{512}"));
    assert!(expand_text(WATERMELON, 3, "", "plain").unwrap().contains("D"));
}

#[test]
fn reports_bad_input() {
    assert!(expand_text("loops = 1\nline: q1 ; power = 1\n", 2, "", "plain").is_err());
    assert!(expand_text(WATERMELON, 40, "", "plain").is_err());
    assert!(expand_text(WATERMELON, 2, "", "html").is_err());
    assert!(curve(WATERMELON, 2, "D", 0.1, 4, 8, "").is_err());
    assert!(curve(WATERMELON, 2, "2", 1.5, 4, 8, "").is_err());
    assert!(psi_rows("0", 3).is_err());
}

#[test]
fn curve_tracks_quadrature() {
    let c = curve(BUBBLE, 4, "1", 0.1, 4, 32, "s1_1=0.25").unwrap();
    assert_eq!(c.kappa.len(), 4);
    assert_eq!(c.partial.len(), 5);
    let last = c.partial.last().unwrap();
    for (s, q) in last.iter().zip(&c.quadrature) {
        assert!((s / q - 1.0).abs() < 1e-4, "{s} vs {q}");
    }
    let json = serde_json::to_value(&c).unwrap();
    assert!(json["quadrature_error"].is_array());
}

#[test]
fn psi_agrees() {
    for power in ["a1", "1", "3/2"] {
        let rows = psi_rows(power, 6).unwrap();
        assert_eq!(rows.len(), 7);
        assert!(rows.iter().all(|r| r.agree), "{power}");
    }
}
