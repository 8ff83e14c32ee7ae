#![allow(dead_code)]

use std::collections::BTreeMap;

use kappa_expand::algebra::{Poly, Rational, Var};
use kappa_expand::diagram::{Diagram, Line, LinePower};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

pub type TermMap = BTreeMap<Vec<(Var, u32)>, Rational>;

pub fn to_map(p: &Poly) -> TermMap {
    p.terms()
        .map(|(m, c)| (m.factors().to_vec(), c.clone()))
        .collect()
}

fn merge(a: &[(Var, u32)], b: &[(Var, u32)]) -> Vec<(Var, u32)> {
    let mut exps: BTreeMap<Var, u32> = BTreeMap::new();
    for &(v, e) in a.iter().chain(b) {
        *exps.entry(v).or_default() += e;
    }
    exps.into_iter().filter(|&(_, e)| e > 0).collect()
}

/// Term-by-term product, no shared code with `Poly`.
pub fn naive_mul(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *out.entry(merge(ma, mb)).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn naive_add(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = a.clone();
    for (m, c) in b {
        *out.entry(m.clone()).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Poly::zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * &cofactor_det(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn random_power<R: Rng>(rng: &mut R) -> LinePower {
    let den = rng.gen_range(1..=4i64);
    let num = rng.gen_range(1..=3 * den);
    LinePower::Numeric(Rational::new(num.into(), den.into()))
}

/// Random valid vacuum diagram with `L <= max_loops`, `n <= max_lines`.
pub fn random_vacuum_diagram<R: Rng>(rng: &mut R, max_loops: usize, max_lines: usize) -> Diagram {
    loop {
        let loops = rng.gen_range(1..=max_loops);
        let n = rng.gen_range(loops..=max_lines);
        let lines: Vec<Line> = (0..n)
            .map(|_| Line {
                routing: (0..loops).map(|_| rng.gen_range(-1..=1)).collect(),
                power: random_power(rng),
            })
            .collect();
        if let Ok(d) = Diagram::new(loops, 0, lines) {
            return d;
        }
    }
}

/// Product of random elementary integer matrices (determinant ±1).
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<i64>> {
    let mut t: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..rng.gen_range(1..=6) {
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(rng);
                let (i, j) = (idx[0], idx[1]);
                let f = *[-2i64, -1, 1, 2].choose(rng).unwrap();
                for row in t.iter_mut() {
                    row[j] += f * row[i];
                }
            }
            1 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = (i + 1) % n;
                for row in t.iter_mut() {
                    row.swap(i, j);
                }
            }
            _ => {
                let i = rng.gen_range(0..n);
                for row in t.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
    }
    t
}

pub fn random_poly<R: Rng>(rng: &mut R, vars: &[Var], max_terms: usize, max_exp: u32) -> Poly {
    let n = rng.gen_range(0..=max_terms);
    Poly::from_terms((0..n).map(|_| {
        let m = kappa_expand::Monomial::from_factors(
            vars.iter().map(|&v| (v, rng.gen_range(0..=max_exp))),
        );
        let c = Rational::new(rng.gen_range(-9..=9i64).into(), rng.gen_range(1..=5i64).into());
        (m, c)
    }))
}
