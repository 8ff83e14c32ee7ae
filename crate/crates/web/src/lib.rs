//! Browser bindings for `kappa-expand`.
//!
//! Three operations are exported to JavaScript: expanding a diagram spec,
//! tabulating partial sums against Gauss–Laguerre quadrature over a κ range,
//! and cross-checking the one-loop series against the asymptotic oracle.
//! Each has a plain Rust counterpart (`*_text`) so it can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use kappa_expand::algebra::Fraction;
use kappa_expand::expansion::{expand, ExpandOptions};
use kappa_expand::oracles::{gauss_laguerre_eval, oneloop_series_via_psi};
use kappa_expand::render::render;
use kappa_expand::spec::{parse_invariants, parse_spec, Dimension, Format, MAX_ORDER};
use kappa_expand::{Diagram, KappaSeries, LinePower, Rational};

const MAX_CURVE_POINTS: usize = 200;

fn load(spec: &str, order: Option<u32>, dimension: &str) -> Result<(Diagram, KappaSeries, Dimension), String> {
    let (diagram, mut config) = parse_spec(spec).map_err(|e| e.to_string())?;
    if let Some(o) = order {
        config.order = o;
    }
    if config.order > MAX_ORDER {
        return Err(format!("order must be in [0, {MAX_ORDER}]"));
    }
    if !dimension.trim().is_empty() {
        config.dimension = dimension.parse()?;
    }
    let series = expand(&diagram, config.order, ExpandOptions::default()).map_err(|e| e.to_string())?;
    let series = match &config.dimension {
        Dimension::Symbolic => series,
        Dimension::Numeric(d) => series.with_dimension(d),
    };
    Ok((diagram, series, config.dimension))
}

/// Expands `spec` and renders it as `plain`, `latex` or `json`.
/// An empty `dimension` keeps the value from the spec text.
pub fn expand_text(spec: &str, order: u32, dimension: &str, format: &str) -> Result<String, String> {
    let format: Format = format.parse()?;
    let (_, series, _) = load(spec, Some(order), dimension)?;
    Ok(render(&series, format))
}

#[derive(Serialize, Debug)]
pub struct Curve {
    pub kappa: Vec<f64>,
    /// `partial[j][i]`: partial sum through κ^j at `kappa[i]`.
    pub partial: Vec<Vec<f64>>,
    pub quadrature: Vec<f64>,
    pub quadrature_error: Vec<f64>,
}

/// Partial sums of every order and the quadrature value on `points` equally
/// spaced κ in `(0, kappa_max]`. Invariants are comma-separated `sI_J=VALUE`.
pub fn curve(
    spec: &str,
    order: u32,
    dimension: &str,
    kappa_max: f64,
    points: usize,
    nodes: usize,
    invariants: &str,
) -> Result<Curve, String> {
    let (diagram, series, dim) = load(spec, Some(order), dimension)?;
    let Dimension::Numeric(dim) = dim else {
        return Err("quadrature needs a numeric dimension".into());
    };
    if !(kappa_max > 0.0 && kappa_max < 1.0) {
        return Err("kappa_max must lie in (0, 1)".into());
    }
    if points == 0 || points > MAX_CURVE_POINTS {
        return Err(format!("points must be in [1, {MAX_CURVE_POINTS}]"));
    }
    let items: Vec<&str> = invariants.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let s = parse_invariants(&items, diagram.externals())?;
    let dim_f = kappa_expand::algebra::rational::to_f64(&dim);
    let kappa: Vec<f64> = (1..=points).map(|i| kappa_max * i as f64 / points as f64).collect();
    let partial = (0..=series.order)
        .map(|j| kappa.iter().map(|&k| series.prefactor.eval(dim_f, &s) * series.bracket_sum(k, dim_f, &s, j)).collect())
        .collect();
    let mut quadrature = Vec::with_capacity(points);
    let mut quadrature_error = Vec::with_capacity(points);
    for &k in &kappa {
        let r = gauss_laguerre_eval(&diagram, &s, k, &dim, nodes).map_err(|e| e.to_string())?;
        quadrature.push(r.value);
        quadrature_error.push(r.error_estimate);
    }
    Ok(Curve { kappa, partial, quadrature, quadrature_error })
}

#[derive(Serialize, Debug)]
pub struct PsiRow {
    pub kappa: u32,
    pub expansion: String,
    pub oracle: String,
    pub agree: bool,
}

/// One-loop series for power `a` (a rational or `a1`) from the expansion
/// engine and from the asymptotic oracle, side by side.
pub fn psi_rows(power: &str, order: u32) -> Result<Vec<PsiRow>, String> {
    let power = power.trim();
    let line_power = if power == "a1" {
        LinePower::Symbolic(0)
    } else {
        let r = kappa_expand::algebra::rational::parse_rational(power).ok_or_else(|| format!("bad power '{power}'"))?;
        if r <= Rational::from_integer(0.into()) {
            return Err("the power must be positive".into());
        }
        LinePower::Numeric(r)
    };
    let diagram = Diagram::one_loop(line_power.clone());
    let series = expand(&diagram, order, ExpandOptions::default()).map_err(|e| e.to_string())?;
    let oracle = oneloop_series_via_psi(&line_power, order).map_err(|e| e.to_string())?;
    Ok(series
        .coeffs
        .iter()
        .zip(&oracle)
        .enumerate()
        .map(|(j, (a, b)): (usize, (&Fraction, &Fraction))| PsiRow {
            kappa: j as u32,
            expansion: a.to_string(),
            oracle: b.to_string(),
            agree: a == b,
        })
        .collect())
}

fn js_err(e: String) -> JsValue {
    JsValue::from_str(&e)
}

#[wasm_bindgen]
pub fn expand_spec(spec: &str, order: u32, dimension: &str, format: &str) -> Result<String, JsValue> {
    expand_text(spec, order, dimension, format).map_err(js_err)
}

/// JSON-encoded [`Curve`].
#[wasm_bindgen]
pub fn kappa_curve(
    spec: &str,
    order: u32,
    dimension: &str,
    kappa_max: f64,
    points: usize,
    nodes: usize,
    invariants: &str,
) -> Result<String, JsValue> {
    let c = curve(spec, order, dimension, kappa_max, points, nodes, invariants).map_err(js_err)?;
    serde_json::to_string(&c).map_err(|e| js_err(e.to_string()))
}

/// JSON-encoded list of [`PsiRow`].
#[wasm_bindgen]
pub fn psi_check(power: &str, order: u32) -> Result<String, JsValue> {
    let rows = psi_rows(power, order).map_err(js_err)?;
    serde_json::to_string(&rows).map_err(|e| js_err(e.to_string()))
}

