//! Plain-text, LaTeX and JSON output for [`KappaSeries`].

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::rational::{format_rational, log2_exact, parse_rational};
use crate::algebra::{latex_rational, Fraction, Monomial, Poly, Rational, Var};
use crate::expansion::{KappaSeries, Prefactor};
use crate::spec::Format;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("malformed series JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed series JSON: {0}")]
    Content(String),
}

pub fn render(series: &KappaSeries, format: Format) -> String {
    match format {
        Format::Plain => render_plain(series),
        Format::Latex => render_latex(series),
        Format::Json => render_json(series),
    }
}

// ---------------------------------------------------------------- prefactor

/// `2^e2 π^eπ` when Δ₀ is a rational power of two.
struct PowerOfTwoForm {
    two: Poly,
    pi: Poly,
}

fn power_of_two_form(p: &Prefactor) -> Option<PowerOfTwoForm> {
    let k = log2_exact(&p.delta0.constant_value()?)?;
    let k = Rational::from_integer(k.into());
    Some(PowerOfTwoForm {
        two: &p.two_pi_exponent + &p.delta0_exponent.scale(&k),
        pi: p.two_pi_exponent.clone(),
    })
}

/// Sign of a linear-in-`D` exponent (`D > 0`), judged by its coefficients.
fn exponent_is_negative(e: &Poly) -> bool {
    e.terms().all(|(_, c)| !c.is_positive()) && !e.is_zero()
}

fn exponent_text(e: &Poly, latex: bool) -> String {
    // "4 D" -> "4D", "3/2 D" -> "3D/2", "3/2" -> "3/2"
    if let Some(c) = e.constant_value() {
        return format_rational(&c);
    }
    if e.len() == 1 {
        let (m, c) = e.terms().next().unwrap();
        if *m == Monomial::var(Var::D) {
            let num = c.numer().to_string();
            let num = if num == "1" { String::new() } else { num };
            return if c.is_integer() {
                format!("{num}D")
            } else {
                format!("{num}D/{}", c.denom())
            };
        }
    }
    if latex {
        e.to_latex()
    } else {
        format!("({e})")
    }
}

fn gaussian_quadratic(p: &Prefactor) -> Option<(Vec<(Fraction, Var)>, bool)> {
    let mut parts = Vec::new();
    for (i, row) in p.gaussian_external.iter().enumerate() {
        for (j, n) in row.iter().enumerate() {
            if j < i || n.is_zero() {
                continue;
            }
            let n = if i == j {
                n.clone()
            } else {
                Fraction::new(n.num().scale(&Rational::from_integer(2.into())), n.den().clone())
            };
            parts.push((n, Var::s(i as u16, j as u16)));
        }
    }
    (!parts.is_empty()).then_some((parts, true))
}

fn prefactor_plain(p: &Prefactor) -> String {
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut put = |base: &str, e: &Poly| {
        if e.is_zero() {
            return;
        }
        if exponent_is_negative(e) {
            let pos = -e;
            if pos.is_one() {
                den.push(base.to_string());
            } else {
                den.push(format!("{base}^{}", paren_if_needed(&exponent_text(&pos, false))));
            }
        } else {
            num.push(format!("{base}^{}", paren_if_needed(&exponent_text(e, false))));
        }
    };
    match power_of_two_form(p) {
        Some(f) => {
            put("2", &f.two);
            put("pi", &f.pi);
        }
        None => {
            put("(2 pi)", &p.two_pi_exponent);
            put(&format!("({})", p.delta0), &p.delta0_exponent);
        }
    }
    let mut text = match (num.is_empty(), den.is_empty()) {
        (true, true) => "1".to_string(),
        (false, true) => num.join(" "),
        (true, false) => format!("1/({})", den.join(" ")),
        (false, false) => format!("{}/({})", num.join(" "), den.join(" ")),
    };
    if let Some((parts, _)) = gaussian_quadratic(p) {
        let inner: Vec<String> = parts
            .iter()
            .map(|(n, v)| match n.as_poly() {
                Some(q) if q.is_one() => v.to_string(),
                Some(q) if q.len() == 1 && q.is_constant() => format!("{q} {v}"),
                _ => format!("({n}) {v}"),
            })
            .collect();
        text.push_str(&format!(" exp(-1/2 ({}))", inner.join(" + ")));
    }
    text
}

fn paren_if_needed(s: &str) -> String {
    if s.chars().all(|c| c.is_ascii_digit()) {
        s.to_string()
    } else {
        format!("({s})")
    }
}

fn prefactor_latex(p: &Prefactor) -> String {
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut put = |base: &str, e: &Poly| {
        if e.is_zero() {
            return;
        }
        if exponent_is_negative(e) {
            let pos = -e;
            if pos.is_one() {
                den.push(base.to_string());
            } else {
                den.push(format!("{base}^{{{}}}", exponent_text(&pos, true)));
            }
        } else {
            num.push(format!("{base}^{{{}}}", exponent_text(e, true)));
        }
    };
    match power_of_two_form(p) {
        Some(f) => {
            put("2", &f.two);
            put("\\pi", &f.pi);
        }
        None => {
            put("(2\\pi)", &p.two_pi_exponent);
            put(&format!("\\left({}\\right)", p.delta0.to_latex()), &p.delta0_exponent);
        }
    }
    let mut text = match (num.is_empty(), den.is_empty()) {
        (true, true) => String::new(),
        (false, true) => num.join(""),
        (n, false) => format!(
            "\\frac{{{}}}{{{}}}",
            if n { "1".to_string() } else { num.join("") },
            den.join("")
        ),
    };
    if let Some((parts, _)) = gaussian_quadratic(p) {
        let inner: Vec<String> = parts
            .iter()
            .map(|(n, v)| {
                if n.as_poly().is_some_and(|q| q.is_one()) {
                    v.latex()
                } else {
                    format!("\\left({}\\right){}", n.to_latex(), v.latex())
                }
            })
            .collect();
        text.push_str(&format!(
            "\\exp\\left[-\\frac{{1}}{{2}}\\left({}\\right)\\right]",
            inner.join(" + ")
        ));
    }
    text
}

// ------------------------------------------------------------------- series

fn kappa_power_plain(j: usize) -> String {
    match j {
        0 => String::new(),
        1 => " kappa".into(),
        _ => format!(" kappa^{j}"),
    }
}

fn kappa_power_latex(j: usize) -> String {
    match j {
        0 => String::new(),
        1 => "\\kappa".into(),
        _ => format!("\\kappa^{{{j}}}"),
    }
}

/// Pulls a leading sign out of constant coefficients so the series reads
/// `1 + 9/4 κ² − 27/8 κ³`.
fn signed_constant(c: &Fraction) -> Option<(bool, Rational)> {
    let v = c.as_poly()?.constant_value()?;
    Some((v.is_negative(), v.abs()))
}

fn render_plain(s: &KappaSeries) -> String {
    let mut out = format!("{} * [", prefactor_plain(&s.prefactor));
    let mut first = true;
    for (j, c) in s.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (neg, body) = match signed_constant(c) {
            Some((neg, v)) => (neg, format_rational(&v)),
            None => (false, format!("({c})")),
        };
        if first {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        first = false;
        out.push_str(&body);
        out.push_str(&kappa_power_plain(j));
    }
    if first {
        out.push('0');
    }
    if s.order > 0 {
        out.push_str(&format!(" + O(kappa^{})", s.order + 1));
    }
    out.push_str("]\n");
    out
}

fn render_latex(s: &KappaSeries) -> String {
    let mut out = prefactor_latex(&s.prefactor);
    out.push_str("\\left[");
    let mut first = true;
    for (j, c) in s.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (neg, body) = match signed_constant(c) {
            Some((neg, v)) if j > 0 && v == Rational::from_integer(1.into()) => (neg, String::new()),
            Some((neg, v)) => (neg, latex_rational(&v)),
            None => match c.as_poly() {
                Some(p) if p.len() > 1 && j > 0 => (false, format!("\\left({}\\right)", p.to_latex())),
                _ => (false, c.to_latex()),
            },
        };
        if first {
            out.push_str(if neg { "-" } else { "" });
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        first = false;
        out.push_str(&body);
        out.push_str(&kappa_power_latex(j));
    }
    if first {
        out.push('0');
    }
    if s.order > 0 {
        out.push_str(&format!(" + \\mathcal{{O}}(\\kappa^{{{}}})", s.order + 1));
    }
    out.push_str("\\right]\n");
    out
}

// --------------------------------------------------------------------- JSON

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct SeriesJson {
    prefactor: PrefactorJson,
    order: u32,
    coefficients: Vec<CoefficientJson>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct PrefactorJson {
    two_pi_exp: String,
    delta0: String,
    #[serde(default = "default_delta0_exp")]
    delta0_exp: String,
    gaussian_external: Vec<Vec<FractionJson>>,
}

fn default_delta0_exp() -> String {
    "-1/2 D".into()
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct FractionJson {
    num: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    den: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct CoefficientJson {
    kappa: u32,
    terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    denominator: Option<Vec<TermJson>>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct TermJson {
    coeff: String,
    monomial: BTreeMap<String, u32>,
}

fn terms_json(p: &Poly) -> Vec<TermJson> {
    p.terms()
        .map(|(m, c)| TermJson {
            coeff: format_rational(c),
            monomial: m
                .factors()
                .iter()
                .map(|(v, e)| (v.to_string(), *e))
                .collect(),
        })
        .collect()
}

fn poly_from_terms(terms: &[TermJson]) -> Result<Poly, RenderError> {
    let mut p = Poly::zero();
    for t in terms {
        let c = parse_rational(&t.coeff)
            .ok_or_else(|| RenderError::Content(format!("bad rational '{}'", t.coeff)))?;
        let factors = t
            .monomial
            .iter()
            .map(|(name, e)| {
                Var::parse(name)
                    .map(|v| (v, *e))
                    .ok_or_else(|| RenderError::Content(format!("unknown variable '{name}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        p.add_term(Monomial::from_factors(factors), c);
    }
    Ok(p)
}

fn parse_poly(s: &str) -> Result<Poly, RenderError> {
    s.parse()
        .map_err(|e: crate::algebra::PolyParseError| RenderError::Content(e.to_string()))
}

fn render_json(s: &KappaSeries) -> String {
    let doc = SeriesJson {
        prefactor: PrefactorJson {
            two_pi_exp: s.prefactor.two_pi_exponent.to_string(),
            delta0: s.prefactor.delta0.to_string(),
            delta0_exp: s.prefactor.delta0_exponent.to_string(),
            gaussian_external: s
                .prefactor
                .gaussian_external
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|f| FractionJson {
                            num: f.num().to_string(),
                            den: (!f.den().is_one()).then(|| f.den().to_string()),
                        })
                        .collect()
                })
                .collect(),
        },
        order: s.order,
        coefficients: s
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| CoefficientJson {
                kappa: j as u32,
                terms: terms_json(c.num()),
                denominator: (!c.den().is_one()).then(|| terms_json(c.den())),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("series serializes");
    text.push('\n');
    text
}

/// Inverse of the JSON renderer.
pub fn parse_json(text: &str) -> Result<KappaSeries, RenderError> {
    let doc: SeriesJson = serde_json::from_str(text)?;
    let mut coeffs = vec![Fraction::default(); doc.order as usize + 1];
    for c in &doc.coefficients {
        let slot = coeffs
            .get_mut(c.kappa as usize)
            .ok_or_else(|| RenderError::Content(format!("kappa power {} beyond order", c.kappa)))?;
        let num = poly_from_terms(&c.terms)?;
        let den = match &c.denominator {
            Some(d) => poly_from_terms(d)?,
            None => Poly::one(),
        };
        if den.is_zero() {
            return Err(RenderError::Content("zero denominator".into()));
        }
        *slot = Fraction::new(num, den);
    }
    let gaussian_external = doc
        .prefactor
        .gaussian_external
        .iter()
        .map(|row| {
            row.iter()
                .map(|f| {
                    let den = match &f.den {
                        Some(d) => parse_poly(d)?,
                        None => Poly::one(),
                    };
                    if den.is_zero() {
                        return Err(RenderError::Content("zero denominator".into()));
                    }
                    Ok(Fraction::new(parse_poly(&f.num)?, den))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KappaSeries {
        prefactor: Prefactor {
            two_pi_exponent: parse_poly(&doc.prefactor.two_pi_exp)?,
            delta0: parse_poly(&doc.prefactor.delta0)?,
            delta0_exponent: parse_poly(&doc.prefactor.delta0_exp)?,
            gaussian_external,
        },
        order: doc.order,
        coeffs,
    })
}
