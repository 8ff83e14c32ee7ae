use super::monomial::Var;
use super::poly::Poly;
use super::rational::{frac, int};

/// Rising factorial `(base)_count = base (base+1) ... (base+count-1)`; `1` for `count = 0`.
pub fn pochhammer(base: &Poly, count: u32) -> Poly {
    (0..count).fold(Poly::one(), |acc, r| &acc * &(base + &Poly::int(r as i64)))
}

/// `binomial(-D/2, m)` as a polynomial in `D`: the coefficient of `P^m` in
/// `(1 + P)^(-D/2)`.
pub fn binom_half_d(m: u32) -> Poly {
    let minus_half_d = Poly::var(Var::D).scale(&frac(-1, 2));
    let mut acc = Poly::one();
    for r in 0..m {
        let factor = &minus_half_d - &Poly::int(r as i64);
        acc = (&acc * &factor).scale(&frac(1, r as i64 + 1));
    }
    acc
}

/// `(-1)^m` as a constant polynomial.
pub fn alternating_sign(m: u32) -> Poly {
    Poly::constant(int(if m.is_multiple_of(2) { 1 } else { -1 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn a() -> Poly {
        Poly::var(Var::A(0))
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&a(), 0), Poly::one());
        assert_eq!(pochhammer(&Poly::int(3), 4), Poly::int(360));
        assert_eq!(pochhammer(&a(), 2), &a().pow(2) + &a());
    }

    #[test]
    fn pochhammer_recurrence() {
        for base in [a(), Poly::constant(frac(3, 2)), Poly::int(-2)] {
            for s in 0..=12u32 {
                let lhs = pochhammer(&base, s + 1);
                let rhs = &pochhammer(&base, s) * &(&base + &Poly::int(s as i64));
                assert_eq!(lhs, rhs, "s = {s}");
            }
        }
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_half_d(0), Poly::one());
        assert_eq!(binom_half_d(1), "-1/2 D".parse().unwrap());
        // (-D/2)(-D/2 - 1)/2 = D(D+2)/8
        assert_eq!(binom_half_d(2), "1/4 D + 1/8 D^2".parse().unwrap());
    }

    #[test]
    fn binom_degree_and_recurrence() {
        for m in 1..=16u32 {
            let b = binom_half_d(m);
            assert_eq!(b.degree_in(Var::D), m);
            let factor = &Poly::var(Var::D).scale(&frac(-1, 2)) - &Poly::int(m as i64 - 1);
            let rhs = (&binom_half_d(m - 1) * &factor).scale(&frac(1, m as i64));
            assert_eq!(b, rhs);
        }
    }

    #[test]
    fn binom_numeric_check() {
        // D = 2: binomial(-1, m) = (-1)^m
        for m in 0..10 {
            let v = binom_half_d(m).substitute_var(Var::D, &Poly::int(2));
            assert_eq!(v, alternating_sign(m));
        }
        // D = 1, m = 3: (-1/2)(-3/2)(-5/2)/6 = -5/16
        let v = binom_half_d(3).substitute_var(Var::D, &Poly::int(1));
        assert_eq!(v.constant_value(), Some(Rational::new((-5).into(), 16.into())));
    }
}
