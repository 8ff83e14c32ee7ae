use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::monomial::{Monomial, Var};
use super::rational::{format_rational, parse_rational, to_f64, Rational};

/// Sparse multivariate polynomial over [`Rational`].
///
/// Terms live in a map keyed by [`Monomial`] (graded-lex order); zero
/// coefficients are never stored, so structural equality is polynomial
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse polynomial at byte {pos}: {msg}")]
pub struct PolyParseError {
    pub pos: usize,
    pub msg: String,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(super::rational::int(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k.clone())).collect(),
        }
    }

    /// Product keeping only monomials of κ-degree `<= kappa_order`.
    pub fn mul_truncated(&self, rhs: &Poly, kappa_order: u32) -> Poly {
        self.mul_filtered(rhs, Some(kappa_order))
    }

    fn mul_filtered(&self, rhs: &Poly, kappa_order: Option<u32>) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let limit = kappa_order.unwrap_or(u32::MAX);
        let rhs_terms: Vec<(&Monomial, &Rational, u32)> = rhs
            .terms
            .iter()
            .map(|(m, c)| (m, c, m.degree_in(Var::Kappa)))
            .collect();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m1, c1) in &self.terms {
            let k1 = m1.degree_in(Var::Kappa);
            if k1 > limit {
                continue;
            }
            for &(m2, c2, k2) in &rhs_terms {
                if k1 + k2 > limit {
                    continue;
                }
                let prod = c1 * c2;
                acc.entry(m1.mul(m2))
                    .and_modify(|c| *c += &prod)
                    .or_insert(prod);
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Drops every monomial of κ-degree above `kappa_order`.
    pub fn truncate_kappa(&self, kappa_order: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(Var::Kappa) <= kappa_order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `v^e`, as a polynomial free of `v`.
    pub fn coeff_of(&self, v: Var, e: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in(v) == e)
                .map(|(m, c)| (m.without(v), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        for _ in 0..e {
            result = &result * self;
        }
        result
    }

    pub fn pow_truncated(&self, e: u32, kappa_order: u32) -> Poly {
        let mut result = Poly::one();
        for _ in 0..e {
            result = result.mul_truncated(self, kappa_order);
        }
        result
    }

    /// Simultaneous substitution of the bound variables.
    pub fn substitute(&self, bindings: &HashMap<Var, Poly>) -> Poly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut powers: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (bound, free) = m.split(|v| bindings.contains_key(&v));
            let mut t = Poly::term(c.clone(), free);
            for &(v, e) in bound.factors() {
                let p = powers
                    .entry((v, e))
                    .or_insert_with(|| bindings[&v].pow(e));
                t = &t * &*p;
            }
            out += t;
        }
        out
    }

    pub fn substitute_var(&self, v: Var, value: &Poly) -> Poly {
        self.substitute(&HashMap::from([(v, value.clone())]))
    }

    /// Renames variables through `f`, merging any collisions.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            (
                Monomial::from_factors(m.factors().iter().map(|&(v, e)| (f(v), e))),
                c.clone(),
            )
        }))
    }

    pub fn derivative(&self, v: Var) -> Poly {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.degree_in(v);
            (e > 0).then(|| {
                let rest = m.div(&Monomial::var(v)).unwrap();
                (rest, c * Rational::from_integer(e.into()))
            })
        }))
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder. Uses leading-term reduction in graded-lex order.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            let step = Poly::term(qc.clone(), qm.clone());
            rem -= &(&step * divisor);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn eval_f64(&self, value: impl Fn(Var) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.factors()
                    .iter()
                    .fold(to_f64(c), |acc, &(v, e)| acc * value(v).powi(e as i32))
            })
            .sum()
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// LaTeX rendering in ascending graded-lex order.
    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .factors()
                .iter()
                .map(|(v, e)| {
                    if *e == 1 {
                        v.latex()
                    } else {
                        format!("{}^{{{}}}", v.latex(), e)
                    }
                })
                .collect();
            if !(abs.is_one() && !m.is_one()) {
                out.push_str(&latex_rational(&abs));
            }
            out.push_str(&mono.join(" "));
        }
        out
    }
}

pub fn latex_rational(r: &Rational) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let abs = r.abs();
    if abs.is_integer() {
        format!("{sign}{}", abs.numer())
    } else {
        format!("{sign}\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl SubAssign<Poly> for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_filtered(rhs, None)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Plain text in ascending graded-lex order, e.g. `1/4 D + 1/8 D^2`.
/// [`FromStr`] accepts this form back.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{} {m}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Poly {
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolyParser { src: s, pos: 0 }.parse()
    }
}

struct PolyParser<'a> {
    src: &'a str,
    pos: usize,
}

impl PolyParser<'_> {
    fn err(&self, msg: impl Into<String>) -> PolyParseError {
        PolyParseError {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn parse(mut self) -> Result<Poly, PolyParseError> {
        let mut out = Poly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if !first => break,
                None => return Err(self.err("empty polynomial")),
                Some('+') => {
                    self.pos += 1;
                    Rational::one()
                }
                Some('-') => {
                    self.pos += 1;
                    -Rational::one()
                }
                Some(_) if first => Rational::one(),
                Some(c) => return Err(self.err(format!("expected '+' or '-', found '{c}'"))),
            };
            first = false;
            let (c, m) = self.term()?;
            out.add_term(m, sign * c);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Rational, Monomial), PolyParseError> {
        let mut coeff = Rational::one();
        let mut factors = Vec::new();
        let mut any = false;
        loop {
            match self.peek() {
                Some('*') if any => {
                    self.pos += 1;
                    continue;
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    self.take_while(|c| c.is_ascii_digit() || c == '/');
                    let text = &self.src[start..self.pos];
                    coeff *= parse_rational(text).ok_or_else(|| self.err("bad rational"))?;
                }
                Some(c) if c.is_alphabetic() => {
                    let name = self.take_while(|c| c.is_alphanumeric() || c == '_').to_string();
                    let v = Var::parse(&name)
                        .ok_or_else(|| self.err(format!("unknown variable '{name}'")))?;
                    let mut e = 1;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        self.skip_ws();
                        e = self
                            .take_while(|c| c.is_ascii_digit())
                            .parse()
                            .map_err(|_| self.err("bad exponent"))?;
                    }
                    factors.push((v, e));
                }
                _ => break,
            }
            any = true;
        }
        if !any {
            return Err(self.err("expected a term"));
        }
        Ok((coeff, Monomial::from_factors(factors)))
    }
}
