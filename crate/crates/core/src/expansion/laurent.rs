use crate::algebra::{Fraction, Poly, Var};

/// `Σ_p terms[p] / base^p`, truncated in κ.
///
/// With symbolic powers the κ=0 determinant `Δ₀ = scale · base` is a
/// polynomial, so `P = (det − Δ₀)/Δ₀` is not; carrying explicit powers of
/// `base` avoids a rational-function field. With numeric powers `base = 1`.
#[derive(Clone, Debug)]
pub(crate) struct BaseSeries {
    pub terms: Vec<Poly>,
}

impl BaseSeries {
    pub fn zero() -> Self {
        BaseSeries { terms: Vec::new() }
    }

    pub fn one() -> Self {
        BaseSeries::single(Poly::one(), 0)
    }

    pub fn single(p: Poly, power: usize) -> Self {
        let mut terms = vec![Poly::zero(); power + 1];
        terms[power] = p;
        BaseSeries { terms }
    }

    pub fn add_assign(&mut self, other: &BaseSeries) {
        if self.terms.len() < other.terms.len() {
            self.terms.resize(other.terms.len(), Poly::zero());
        }
        for (a, b) in self.terms.iter_mut().zip(&other.terms) {
            *a += b;
        }
    }

    pub fn scale(&self, c: &crate::algebra::Rational) -> BaseSeries {
        BaseSeries {
            terms: self.terms.iter().map(|t| t.scale(c)).collect(),
        }
    }

    pub fn mul_truncated(&self, other: &BaseSeries, order: u32) -> BaseSeries {
        if self.terms.is_empty() || other.terms.is_empty() {
            return BaseSeries::zero();
        }
        let mut terms = vec![Poly::zero(); self.terms.len() + other.terms.len() - 1];
        for (i, a) in self.terms.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.terms.iter().enumerate() {
                if !b.is_zero() {
                    terms[i + j] += a.mul_truncated(b, order);
                }
            }
        }
        BaseSeries { terms }
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly + Sync) -> BaseSeries {
        BaseSeries {
            terms: self.terms.iter().map(f).collect(),
        }
    }

    /// Collects the coefficient of `κ^j` over a common power of `base`,
    /// cancelling `base` where it divides.
    pub fn kappa_coefficient(&self, j: u32, base: &Poly) -> Fraction {
        let parts: Vec<Poly> = self
            .terms
            .iter()
            .map(|t| t.coeff_of(Var::Kappa, j))
            .collect();
        let Some(top) = parts.iter().rposition(|p| !p.is_zero()) else {
            return Fraction::default();
        };
        if base.is_one() {
            let mut num = Poly::zero();
            for p in &parts[..=top] {
                num += p;
            }
            return Fraction::from_poly(num);
        }
        let mut num = Poly::zero();
        let mut lift = Poly::one();
        for p in parts[..=top].iter().rev() {
            if !p.is_zero() {
                num += &(p * &lift);
            }
            lift = &lift * base;
        }
        let mut f = Fraction::new(num, base.pow(top as u32));
        f.cancel(base);
        f
    }
}
