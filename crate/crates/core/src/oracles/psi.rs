use crate::algebra::{pochhammer, rational, Fraction, Poly, Var};
use crate::diagram::LinePower;

use super::OracleError;

/// Bracket coefficients of the one-loop integral `∫ e^(a(κ−1)p²)/(1+κp²)^a`,
/// normalized to `coeffs[0] = 1`, from its confluent-hypergeometric form
/// `(4πκ)^(−D/2) Ψ(D/2, 1+D/2−a; a(1−κ)/κ)`.
///
/// The large-argument series `Ψ(α,γ;z) ~ z^(−α) Σ_m (α)_m (α−γ+1)_m (−z)^(−m)/m!`
/// with `z = a(1−κ)/κ` gives, after pulling out `(4πa)^(−D/2)`,
///
/// ```text
/// Σ_m (D/2)_m (a)_m (−κ/a)^m / m! · (1−κ)^(−D/2−m)
/// ```
///
/// and each `(1−κ)^(−D/2−m) = Σ_j (D/2+m)_j κ^j / j!` is re-expanded.
pub fn oneloop_series_via_psi(a: &LinePower, order: u32) -> Result<Vec<Fraction>, OracleError> {
    if order > 12 {
        return Err(OracleError::OrderTooHigh(order));
    }
    Ok(asymptotic_series(a, order, order))
}

/// Keeps the asymptotic terms `m <= max_m`.
fn asymptotic_series(a: &LinePower, order: u32, max_m: u32) -> Vec<Fraction> {
    let a_poly = a.to_poly();
    let half_d = Poly::var(Var::D).scale(&rational::frac(1, 2));
    let kappa = Poly::var(Var::Kappa);
    // Numerator over the common denominator a^order.
    let mut num = Poly::zero();
    let mut m_fact = rational::int(1);
    for m in 0..=max_m.min(order) {
        if m > 0 {
            m_fact *= rational::int(m as i64);
        }
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let outer = (&pochhammer(&half_d, m) * &pochhammer(&a_poly, m))
            .scale(&(rational::int(sign) / &m_fact))
            * kappa.pow(m)
            * a_poly.pow(order - m);
        let shifted = &half_d + &Poly::int(m as i64);
        let mut binomial = Poly::zero();
        let mut j_fact = rational::int(1);
        for j in 0..=(order - m) {
            if j > 0 {
                j_fact *= rational::int(j as i64);
            }
            binomial += (&pochhammer(&shifted, j) * &kappa.pow(j)).scale(&j_fact.recip());
        }
        num += outer.mul_truncated(&binomial, order);
    }
    let den = a_poly.pow(order);
    (0..=order)
        .map(|n| {
            let mut f = Fraction::new(num.coeff_of(Var::Kappa, n), den.clone());
            f.cancel(&a_poly);
            f
        })
        .collect()
}
