use std::fmt;

use super::monomial::Var;
use super::poly::Poly;
use super::rational::Rational;

/// Quotient of two polynomials.
///
/// Only light normalization happens: constant denominators are folded into the
/// numerator and the denominator is made monic. Equality is
/// cross-multiplication, so unreduced representations still compare equal.
#[derive(Clone, Debug)]
pub struct Fraction {
    num: Poly,
    den: Poly,
}

impl Fraction {
    pub fn new(num: Poly, den: Poly) -> Fraction {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = Fraction { num, den };
        f.normalize();
        f
    }

    pub fn from_poly(p: Poly) -> Fraction {
        Fraction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The numerator when the denominator is `1`.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let lc = self.den.leading_term().unwrap().1.clone();
        if lc != Rational::from_integer(1.into()) {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    /// Cancels `factor` from numerator and denominator as many times as it
    /// divides both exactly.
    pub fn cancel(&mut self, factor: &Poly) {
        if factor.is_constant() {
            return;
        }
        while !self.den.is_one() {
            match (self.num.div_exact(factor), self.den.div_exact(factor)) {
                (Some(n), Some(d)) => {
                    self.num = n;
                    self.den = d;
                }
                _ => break,
            }
        }
        self.normalize();
    }

    pub fn substitute(&self, bindings: &std::collections::HashMap<Var, Poly>) -> Fraction {
        Fraction::new(self.num.substitute(bindings), self.den.substitute(bindings))
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var + Copy) -> Fraction {
        Fraction::new(self.num.map_vars(f), self.den.map_vars(f))
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.num.degree_in(v).saturating_sub(self.den.degree_in(v))
    }

    pub fn eval_f64(&self, value: impl Fn(Var) -> f64 + Copy) -> f64 {
        self.num.eval_f64(value) / self.den.eval_f64(value)
    }

    pub fn to_latex(&self) -> String {
        if self.den.is_one() {
            self.num.to_latex()
        } else {
            format!("\\frac{{{}}}{{{}}}", self.num.to_latex(), self.den.to_latex())
        }
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl From<Poly> for Fraction {
    fn from(p: Poly) -> Self {
        Fraction::from_poly(p)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.len() == 1 {
            write!(f, "{} / ({})", self.num, self.den)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Default for Fraction {
    fn default() -> Self {
        Fraction::from_poly(Poly::zero())
    }
}
