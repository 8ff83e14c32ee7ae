//! The κ-expansion engine.
//!
//! For a diagram with quadratic form `M(c)`, the regulated integral is
//!
//! ```text
//! I(κ) = (2π)^(−LD/2) ∏_k ∫dt_k t_k^(a_k−1) e^(−t_k)/Γ(a_k) · det M^(−D/2) · e^(−½ kᵀNk)
//! ```
//!
//! with `c_k = a_k(1−κ) + κ t_k`. Writing `det M = Δ₀(1+P)`, `P = O(κ)`, the
//! binomial series of `(1+P)^(−D/2)` is truncated at the requested order and
//! each `t_k^e` integrates to the Pochhammer symbol `(a_k)_e`.

mod laurent;
mod linalg;

use std::collections::HashMap;
use std::thread;

use num_traits::One;
use thiserror::Error;

use crate::algebra::{binom_half_d, pochhammer, rational, Fraction, Poly, Rational, Var};
use crate::diagram::{Diagram, DiagramError, QuadraticForm};
use laurent::BaseSeries;

pub use linalg::{adjugate, determinant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpandError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("det M vanishes at kappa = 0")]
    SingularAtOrigin,
    #[error("diagram has external momenta; use the external-momentum expansion")]
    ExternalMomenta,
    #[error("diagram has no external momenta")]
    NoExternalMomenta,
}

/// Worker count for the parallel parts of the expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandOptions {
    pub threads: usize,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions { threads: 1 }
    }
}

impl ExpandOptions {
    /// Reads `KAPPA_EXPAND_THREADS` (`0` = one per available core).
    pub fn from_env() -> Self {
        let requested = std::env::var("KAPPA_EXPAND_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .unwrap_or(1);
        let threads = if requested == 0 {
            thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            requested
        };
        ExpandOptions { threads }
    }
}

/// Everything outside the normalized bracket:
/// `(2π)^two_pi_exponent · delta0^delta0_exponent · exp(−½ Σ_ij N₀_ij k_i·k_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Prefactor {
    /// `−L D / 2`, a polynomial in `D` (constant once `D` is fixed).
    pub two_pi_exponent: Poly,
    /// `det M` at κ = 0: a rational for numeric powers, else a polynomial in `a_k`.
    pub delta0: Poly,
    /// `−D/2`.
    pub delta0_exponent: Poly,
    /// Reduced external form `N₀`, E×E; empty for vacuum diagrams.
    pub gaussian_external: Vec<Vec<Fraction>>,
}

impl Prefactor {
    /// Numeric value at dimension `dim` with invariants `s[i][j] = k_i·k_j`.
    /// Only meaningful for numeric powers.
    pub fn eval(&self, dim: f64, s: &[Vec<f64>]) -> f64 {
        let at = |v: Var| match v {
            Var::D => dim,
            _ => f64::NAN,
        };
        let two_pi = (2.0 * std::f64::consts::PI).powf(self.two_pi_exponent.eval_f64(at));
        let delta = self.delta0.eval_f64(at).powf(self.delta0_exponent.eval_f64(at));
        let mut quad = 0.0;
        for (i, row) in self.gaussian_external.iter().enumerate() {
            for (j, n) in row.iter().enumerate() {
                quad += n.eval_f64(at) * s[i][j];
            }
        }
        two_pi * delta * (-0.5 * quad).exp()
    }

    pub fn substitute(&self, bindings: &HashMap<Var, Poly>) -> Prefactor {
        Prefactor {
            two_pi_exponent: self.two_pi_exponent.substitute(bindings),
            delta0: self.delta0.substitute(bindings),
            delta0_exponent: self.delta0_exponent.substitute(bindings),
            gaussian_external: self
                .gaussian_external
                .iter()
                .map(|row| row.iter().map(|f| f.substitute(bindings)).collect())
                .collect(),
        }
    }
}

/// `prefactor × Σ_j coeffs[j] κ^j`, with `coeffs[0] = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaSeries {
    pub prefactor: Prefactor,
    pub order: u32,
    pub coeffs: Vec<Fraction>,
}

impl KappaSeries {
    /// Fixes the dimension `D`.
    pub fn with_dimension(&self, dim: &Rational) -> KappaSeries {
        let b = HashMap::from([(Var::D, Poly::constant(dim.clone()))]);
        self.substitute(&b)
    }

    pub fn substitute(&self, bindings: &HashMap<Var, Poly>) -> KappaSeries {
        KappaSeries {
            prefactor: self.prefactor.substitute(bindings),
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.substitute(bindings)).collect(),
        }
    }

    /// Bracket partial sum `Σ_{j<=upto} coeffs[j] κ^j` at numeric `D` and invariants.
    pub fn bracket_sum(&self, kappa: f64, dim: f64, s: &[Vec<f64>], upto: u32) -> f64 {
        let at = |v: Var| match v {
            Var::D => dim,
            Var::S(i, j) => s[i as usize][j as usize],
            _ => f64::NAN,
        };
        self.coeffs
            .iter()
            .take(upto as usize + 1)
            .enumerate()
            .map(|(j, c)| c.eval_f64(at) * kappa.powi(j as i32))
            .sum()
    }

    /// Prefactor times the full partial sum.
    pub fn partial_sum(&self, kappa: f64, dim: f64, s: &[Vec<f64>]) -> f64 {
        self.prefactor.eval(dim, s) * self.bracket_sum(kappa, dim, s, self.order)
    }
}

/// `c_k → a_k(1−κ) + κ t_k` for every line.
pub fn substitute_c(p: &Poly, d: &Diagram) -> Poly {
    p.substitute(&c_bindings(d))
}

fn c_bindings(d: &Diagram) -> HashMap<Var, Poly> {
    let kappa = Poly::var(Var::Kappa);
    let one_minus_kappa = &Poly::one() - &kappa;
    d.lines()
        .iter()
        .enumerate()
        .map(|(k, line)| {
            let a = line.power.to_poly();
            let t = Poly::var(Var::T(k as u16));
            (Var::C(k as u16), &(&a * &one_minus_kappa) + &(&kappa * &t))
        })
        .collect()
}

fn kappa_zero(p: &Poly) -> Poly {
    p.coeff_of(Var::Kappa, 0)
}

/// `(1+P)^(−D/2)` truncated at κ-order `order`, written as
/// `Σ_m terms[m] / base^m` with `terms[m] = binom(−D/2, m) (fluct/scale)^m`.
#[derive(Clone, Debug)]
pub struct DetPowerSeries {
    /// `det M` at κ = 0.
    pub delta0: Poly,
    /// `delta0 = scale · base`, `base` monic (`1` for numeric powers).
    pub scale: Rational,
    pub base: Poly,
    /// `P · base = (det M − Δ₀)/scale`.
    pub fluct: Poly,
    pub terms: Vec<Poly>,
}

impl DetPowerSeries {
    /// The series as one polynomial; only available when `base = 1`.
    pub fn to_poly(&self) -> Option<Poly> {
        self.base.is_one().then(|| {
            let mut sum = Poly::zero();
            for t in &self.terms {
                sum += t;
            }
            sum
        })
    }

    pub fn to_fraction(&self) -> Fraction {
        let top = self.terms.len().saturating_sub(1);
        let mut num = Poly::zero();
        for (m, t) in self.terms.iter().enumerate() {
            num += t * &self.base.pow((top - m) as u32);
        }
        Fraction::new(num, self.base.pow(top as u32))
    }

    fn as_base_series(&self) -> BaseSeries {
        BaseSeries {
            terms: self.terms.clone(),
        }
    }
}

/// Splits `det M = Δ₀(1+P)` and expands `(1+P)^(−D/2)` to κ-order `order`.
pub fn det_power_series(det: &Poly, order: u32) -> Result<DetPowerSeries, ExpandError> {
    let delta0 = kappa_zero(det);
    let Some((_, lc)) = delta0.leading_term() else {
        return Err(ExpandError::SingularAtOrigin);
    };
    let scale = lc.clone();
    let base = delta0.scale(&scale.recip());
    let fluct = (det - &delta0).scale(&scale.recip()).truncate_kappa(order);
    let mut terms = Vec::with_capacity(order as usize + 1);
    let mut power = Poly::one();
    for m in 0..=order {
        if m > 0 {
            power = power.mul_truncated(&fluct, order);
        }
        terms.push(&binom_half_d(m) * &power);
    }
    Ok(DetPowerSeries {
        delta0,
        scale,
        base,
        fluct,
        terms,
    })
}

/// Replaces every `t_k^e` by `(a_k)_e = Γ(a_k+e)/Γ(a_k)`, the normalized
/// moment of the weight `t^(a_k−1) e^(−t) / Γ(a_k)`.
pub fn integrate_t(p: &Poly, d: &Diagram) -> Poly {
    let mut moments: HashMap<(Var, u32), Poly> = HashMap::new();
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let (ts, rest) = m.split(|v| matches!(v, Var::T(_)));
        let mut term = Poly::term(c.clone(), rest);
        for &(v, e) in ts.factors() {
            let Var::T(k) = v else { unreachable!() };
            let moment = moments
                .entry((v, e))
                .or_insert_with(|| pochhammer(&d.power(k as usize).to_poly(), e));
            term = &term * &*moment;
        }
        out += term;
    }
    out
}

/// Reduced external form `N = M″ − M′ᵀ M⁻¹ M′`, returned as the numerator
/// matrix `M″ det M − M′ᵀ adj(M) M′` and the shared denominator `det M`.
pub fn external_reduction(q: &QuadraticForm) -> (Vec<Vec<Poly>>, Poly) {
    let det = determinant(&q.m);
    let e = q.mpp.len();
    if e == 0 {
        return (Vec::new(), det);
    }
    let l = q.m.len();
    let adj = adjugate(&q.m);
    // adj(M) M′, L×E
    let adj_mp: Vec<Vec<Poly>> = (0..l)
        .map(|i| {
            (0..e)
                .map(|j| {
                    let mut s = Poly::zero();
                    for k in 0..l {
                        s += &adj[i][k] * &q.mp[k][j];
                    }
                    s
                })
                .collect()
        })
        .collect();
    let num = (0..e)
        .map(|i| {
            (0..e)
                .map(|j| {
                    let mut s = &q.mpp[i][j] * &det;
                    for k in 0..l {
                        s -= &(&q.mp[k][i] * &adj_mp[k][j]);
                    }
                    s
                })
                .collect()
        })
        .collect();
    (num, det)
}

fn two_pi_exponent(d: &Diagram) -> Poly {
    Poly::var(Var::D).scale(&rational::frac(-(d.loops() as i64), 2))
}

fn half_d_exponent() -> Poly {
    Poly::var(Var::D).scale(&rational::frac(-1, 2))
}

fn par_map<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                scope.spawn(move || c.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Vacuum diagrams (`E = 0`).
pub fn expand_vacuum(d: &Diagram, order: u32) -> Result<KappaSeries, ExpandError> {
    expand_vacuum_with(d, order, ExpandOptions::default())
}

pub fn expand_vacuum_with(
    d: &Diagram,
    order: u32,
    opts: ExpandOptions,
) -> Result<KappaSeries, ExpandError> {
    d.validate()?;
    if d.externals() > 0 {
        return Err(ExpandError::ExternalMomenta);
    }
    let q = d.assemble_quadratic_form();
    let det = substitute_c(&determinant(&q.m), d);
    let series = det_power_series(&det, order)?;
    // m-terms integrate independently; accumulation below is in ascending m.
    let integrated = BaseSeries {
        terms: par_map(&series.terms, opts.threads, |t| integrate_t(t, d)),
    };
    Ok(finish(d, order, &series, integrated, Vec::new()))
}

fn finish(
    d: &Diagram,
    order: u32,
    series: &DetPowerSeries,
    integrated: BaseSeries,
    gaussian_external: Vec<Vec<Fraction>>,
) -> KappaSeries {
    let coeffs = (0..=order)
        .map(|j| integrated.kappa_coefficient(j, &series.base))
        .collect();
    KappaSeries {
        prefactor: Prefactor {
            two_pi_exponent: two_pi_exponent(d),
            delta0: series.delta0.clone(),
            delta0_exponent: half_d_exponent(),
            gaussian_external,
        },
        order,
        coeffs,
    }
}

/// Diagrams with external momenta (`E >= 1`); coefficients depend on the
/// invariants `s_ij = k_i·k_j`.
pub fn expand_with_externals(d: &Diagram, order: u32) -> Result<KappaSeries, ExpandError> {
    d.validate()?;
    let e = d.externals();
    if e == 0 {
        return Err(ExpandError::NoExternalMomenta);
    }
    let q = d.assemble_quadratic_form();
    let (nnum, det_c) = external_reduction(&q);
    let bindings = c_bindings(d);
    let det = det_c.substitute(&bindings);
    let series = det_power_series(&det, order)?;
    let inv_scale = series.scale.recip();

    // ½ kᵀ N_num k over the c-ring, then c → a(1−κ)+κt.
    let mut half_form = Poly::zero();
    for i in 0..e {
        for j in 0..e {
            let s = Poly::var(Var::s(i as u16, j as u16));
            half_form += (&nnum[i][j] * &s).scale(&rational::frac(1, 2));
        }
    }
    let y = half_form.substitute(&bindings).truncate_kappa(order);
    let y0 = kappa_zero(&y);

    // 1/det = (1/scale)/base · Σ_m (−fluct/base)^m
    let mut inv_det = BaseSeries::zero();
    let neg_fluct = -&series.fluct;
    let mut power = Poly::one();
    for m in 0..=order as usize {
        if m > 0 {
            power = power.mul_truncated(&neg_fluct, order);
        }
        inv_det.add_assign(&BaseSeries::single(power.scale(&inv_scale), m + 1));
    }
    // δX = y/det − y0/Δ₀, which is O(κ)
    let mut delta_x = BaseSeries::single(y.clone(), 0).mul_truncated(&inv_det, order);
    delta_x.add_assign(&BaseSeries::single(y0.scale(&-inv_scale.clone()), 1));

    // exp(−δX) = Σ_r (−δX)^r / r!
    let neg_dx = delta_x.scale(&-Rational::one());
    let mut exp_series = BaseSeries::one();
    let mut term = BaseSeries::one();
    for r in 1..=order {
        term = term
            .mul_truncated(&neg_dx, order)
            .scale(&rational::frac(1, r as i64));
        exp_series.add_assign(&term);
    }

    let total = exp_series.mul_truncated(&series.as_base_series(), order);
    let integrated = total.map(|t| integrate_t(t, d));

    let n0 = nnum
        .iter()
        .map(|row| {
            row.iter()
                .map(|n| {
                    let mut f = Fraction::new(
                        kappa_zero(&n.substitute(&bindings)),
                        series.base.clone(),
                    );
                    f = Fraction::new(f.num().scale(&inv_scale), f.den().clone());
                    f.cancel(&series.base);
                    f
                })
                .collect()
        })
        .collect();
    Ok(finish(d, order, &series, integrated, n0))
}

/// Dispatches on the number of external momenta.
pub fn expand(d: &Diagram, order: u32, opts: ExpandOptions) -> Result<KappaSeries, ExpandError> {
    if d.externals() == 0 {
        expand_vacuum_with(d, order, opts)
    } else {
        expand_with_externals(d, order)
    }
}
