use crate::algebra::{rational::to_f64, Rational};
use crate::diagram::Diagram;
use crate::expansion::KappaSeries;

use super::{gauss_laguerre_eval, OracleError};

#[derive(Clone, Debug, PartialEq)]
pub struct KappaDeviation {
    pub kappa: f64,
    pub series: f64,
    pub quadrature: f64,
    pub quadrature_error: f64,
    /// `|series − quadrature| / |quadrature|`.
    pub relative: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub order: u32,
    pub tolerance: f64,
    pub rows: Vec<KappaDeviation>,
    /// Least-squares slope of `ln(relative)` against `ln κ` over κ > 0;
    /// `None` with fewer than two such points.
    pub slope: Option<f64>,
}

impl ComparisonReport {
    pub fn within_tolerance(&self) -> bool {
        self.rows.iter().all(|r| !r.flagged)
    }

    /// Truncation error should scale like `κ^(N+1)`.
    pub fn slope_ok(&self) -> bool {
        self.slope.is_none_or(|s| s >= self.order as f64 + 0.5)
    }

    pub fn passed(&self) -> bool {
        self.within_tolerance() && self.slope_ok()
    }
}

/// Compares prefactor × partial sums against Gauss–Laguerre quadrature on a
/// κ grid in `[0, 0.3]`.
pub fn compare_series(
    series: &KappaSeries,
    d: &Diagram,
    invariants: &[Vec<f64>],
    kappa_grid: &[f64],
    dim: &Rational,
    tol: f64,
    nodes: usize,
) -> Result<ComparisonReport, OracleError> {
    let dim_f = to_f64(dim);
    let mut rows = Vec::with_capacity(kappa_grid.len());
    for &kappa in kappa_grid {
        if !(0.0..=0.3).contains(&kappa) {
            return Err(OracleError::KappaOutOfRange(kappa));
        }
        let quad = gauss_laguerre_eval(d, invariants, kappa, dim, nodes)?;
        let value = series.partial_sum(kappa, dim_f, invariants);
        let relative = ((value - quad.value) / quad.value).abs();
        rows.push(KappaDeviation {
            kappa,
            series: value,
            quadrature: quad.value,
            quadrature_error: quad.error_estimate,
            relative,
            flagged: !(relative <= tol),
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.kappa > 0.0 && r.relative > 0.0)
        .map(|r| (r.kappa.ln(), r.relative.ln()))
        .collect();
    Ok(ComparisonReport {
        order: series.order,
        tolerance: tol,
        rows,
        slope: fit_slope(&points),
    })
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
