//! Diagrams as momentum routings with propagator powers, and the quadratic
//! form `½pᵀMp + pᵀM′k + ½kᵀM″k = Σ c_k q_k²` they induce.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{Poly, Rational, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("a diagram needs at least one loop")]
    NoLoops,
    #[error("{lines} line(s) cannot carry {loops} independent loop momenta")]
    TooFewLines { lines: usize, loops: usize },
    #[error("loop routing has rank {rank}, expected {loops}; some loop momentum is unconstrained")]
    RankDeficient { rank: usize, loops: usize },
    #[error("line {line}: power must be positive")]
    NonPositivePower { line: usize },
    #[error("line {line}: routing has {found} entries, expected {expected}")]
    RoutingLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("rerouting matrix has determinant {det}, expected ±1")]
    NotUnimodular { det: i128 },
    #[error("rerouting matrix must be {loops}×{loops}")]
    BadTransform { loops: usize },
}

/// Propagator power `a_k`: a positive rational, or the symbol `a_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LinePower {
    Numeric(Rational),
    /// Zero-based symbol index; `Symbolic(0)` is `a1`.
    Symbolic(u16),
}

impl LinePower {
    pub fn int(n: i64) -> LinePower {
        LinePower::Numeric(Rational::from_integer(n.into()))
    }

    pub fn to_poly(&self) -> Poly {
        match self {
            LinePower::Numeric(r) => Poly::constant(r.clone()),
            LinePower::Symbolic(j) => Poly::var(Var::A(*j)),
        }
    }

    pub fn numeric(&self) -> Option<&Rational> {
        match self {
            LinePower::Numeric(r) => Some(r),
            LinePower::Symbolic(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    /// Coefficients over `(p_1..p_L, k_1..k_E)`.
    pub routing: Vec<i64>,
    pub power: LinePower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    loops: usize,
    externals: usize,
    lines: Vec<Line>,
}

impl Diagram {
    /// Builds and validates a diagram.
    pub fn new(loops: usize, externals: usize, lines: Vec<Line>) -> Result<Diagram, DiagramError> {
        let d = Diagram {
            loops,
            externals,
            lines,
        };
        d.validate()?;
        Ok(d)
    }

    /// Single propagator `1/(1+p²)^a`.
    pub fn one_loop(power: LinePower) -> Diagram {
        Diagram::new(1, 0, vec![Line { routing: vec![1], power }]).unwrap()
    }

    /// Three-loop watermelon with lines `p1, p2, p3, p1+p2+p3`, unit powers.
    pub fn watermelon() -> Diagram {
        Diagram::watermelon_with(std::array::from_fn(|_| LinePower::int(1)))
    }

    pub fn watermelon_with(powers: [LinePower; 4]) -> Diagram {
        let routings = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];
        let lines = routings
            .iter()
            .zip(powers)
            .map(|(r, power)| Line {
                routing: r.to_vec(),
                power,
            })
            .collect();
        Diagram::new(3, 0, lines).unwrap()
    }

    /// One-loop bubble `q1 = p`, `q2 = p + k`.
    pub fn bubble(a1: LinePower, a2: LinePower) -> Diagram {
        Diagram::new(
            1,
            1,
            vec![
                Line {
                    routing: vec![1, 0],
                    power: a1,
                },
                Line {
                    routing: vec![1, 1],
                    power: a2,
                },
            ],
        )
        .unwrap()
    }

    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn externals(&self) -> usize {
        self.externals
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn power(&self, line: usize) -> &LinePower {
        &self.lines[line].power
    }

    pub fn has_symbolic_powers(&self) -> bool {
        self.lines.iter().any(|l| l.power.numeric().is_none())
    }

    /// Same loop routing with the external columns dropped.
    pub fn without_externals(&self) -> Diagram {
        Diagram {
            loops: self.loops,
            externals: 0,
            lines: self
                .lines
                .iter()
                .map(|l| Line {
                    routing: l.routing[..self.loops].to_vec(),
                    power: l.power.clone(),
                })
                .collect(),
        }
    }

    pub fn with_powers(&self, powers: &[LinePower]) -> Diagram {
        let mut d = self.clone();
        for (l, p) in d.lines.iter_mut().zip(powers) {
            l.power = p.clone();
        }
        d
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        if self.loops == 0 {
            return Err(DiagramError::NoLoops);
        }
        let width = self.loops + self.externals;
        for (i, l) in self.lines.iter().enumerate() {
            if l.routing.len() != width {
                return Err(DiagramError::RoutingLength {
                    line: i + 1,
                    expected: width,
                    found: l.routing.len(),
                });
            }
            if let LinePower::Numeric(r) = &l.power {
                if !r.is_positive() {
                    return Err(DiagramError::NonPositivePower { line: i + 1 });
                }
            }
        }
        if self.lines.len() < self.loops {
            return Err(DiagramError::TooFewLines {
                lines: self.lines.len(),
                loops: self.loops,
            });
        }
        let rank = rank(
            self.lines
                .iter()
                .map(|l| l.routing[..self.loops].to_vec())
                .collect(),
        );
        if rank < self.loops {
            return Err(DiagramError::RankDeficient {
                rank,
                loops: self.loops,
            });
        }
        Ok(())
    }

    /// Changes the loop-momentum basis `p = T p′`: each loop-part routing row
    /// `r` becomes `r T`. `T` must be integral with determinant ±1.
    pub fn reroute(&self, transform: &[Vec<i64>]) -> Result<Diagram, DiagramError> {
        let l = self.loops;
        if transform.len() != l || transform.iter().any(|row| row.len() != l) {
            return Err(DiagramError::BadTransform { loops: l });
        }
        let det = int_determinant(transform);
        if det.abs() != 1 {
            return Err(DiagramError::NotUnimodular { det });
        }
        let lines = self
            .lines
            .iter()
            .map(|line| {
                let mut routing: Vec<i64> = (0..l)
                    .map(|j| (0..l).map(|i| line.routing[i] * transform[i][j]).sum())
                    .collect();
                routing.extend_from_slice(&line.routing[l..]);
                Line {
                    routing,
                    power: line.power.clone(),
                }
            })
            .collect();
        Diagram::new(l, self.externals, lines)
    }

    pub fn assemble_quadratic_form(&self) -> QuadraticForm {
        let (l, e) = (self.loops, self.externals);
        let entry = |i: usize, j: usize| -> Poly {
            let mut p = Poly::zero();
            for (k, line) in self.lines.iter().enumerate() {
                let w = 2 * line.routing[i] * line.routing[j];
                if w != 0 {
                    p += Poly::var(Var::C(k as u16)).scale(&Rational::from_integer(w.into()));
                }
            }
            p
        };
        QuadraticForm {
            m: (0..l).map(|i| (0..l).map(|j| entry(i, j)).collect()).collect(),
            mp: (0..l).map(|i| (0..e).map(|j| entry(i, l + j)).collect()).collect(),
            mpp: (0..e)
                .map(|i| (0..e).map(|j| entry(l + i, l + j)).collect())
                .collect(),
        }
    }
}

/// Blocks of `Σ_k c_k q_k²` over loop (`p`) and external (`k`) momenta,
/// entries linear in the symbols `c_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    /// L×L, symmetric.
    pub m: Vec<Vec<Poly>>,
    /// L×E.
    pub mp: Vec<Vec<Poly>>,
    /// E×E, symmetric.
    pub mpp: Vec<Vec<Poly>>,
}

fn rank(rows: Vec<Vec<i64>>) -> usize {
    let mut a: Vec<Vec<Rational>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| Rational::from_integer(x.into())).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..a.len() {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[rank][col];
            for c in col..cols {
                let delta = &f * &a[rank][c];
                a[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Fraction-free (Bareiss) determinant of a small integer matrix.
pub fn int_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}


#[cfg(test)]
mod tests {
    use super::*;

    fn line(routing: &[i64]) -> Line {
        Line {
            routing: routing.to_vec(),
            power: LinePower::int(1),
        }
    }

    fn c(k: u16) -> Poly {
        Poly::var(Var::C(k))
    }

    #[test]
    fn watermelon_is_valid() {
        assert!(Diagram::watermelon().validate().is_ok());
    }

    #[test]
    fn too_few_lines() {
        assert_eq!(
            Diagram::new(2, 0, vec![line(&[1, 0])]),
            Err(DiagramError::TooFewLines { lines: 1, loops: 2 })
        );
    }

    #[test]
    fn rank_deficient() {
        assert_eq!(
            Diagram::new(2, 0, vec![line(&[1, 0]), line(&[1, 0])]),
            Err(DiagramError::RankDeficient { rank: 1, loops: 2 })
        );
    }

    #[test]
    fn non_positive_power() {
        let bad = Line {
            routing: vec![1],
            power: LinePower::int(0),
        };
        assert_eq!(
            Diagram::new(1, 0, vec![bad]),
            Err(DiagramError::NonPositivePower { line: 1 })
        );
    }

    #[test]
    fn routing_length_checked() {
        assert!(matches!(
            Diagram::new(1, 1, vec![line(&[1])]),
            Err(DiagramError::RoutingLength { .. })
        ));
    }

    #[test]
    fn single_line_form() {
        let q = Diagram::one_loop(LinePower::int(1)).assemble_quadratic_form();
        assert_eq!(q.m, vec![vec![c(0).scale(&Rational::from_integer(2.into()))]]);
        assert!(q.mp[0].is_empty());
        assert!(q.mpp.is_empty());
    }

    #[test]
    fn watermelon_form() {
        let q = Diagram::watermelon().assemble_quadratic_form();
        let two = |p: Poly| p.scale(&Rational::from_integer(2.into()));
        let expected = vec![
            vec![two(&c(0) + &c(3)), two(c(3)), two(c(3))],
            vec![two(c(3)), two(&c(1) + &c(3)), two(c(3))],
            vec![two(c(3)), two(c(3)), two(&c(2) + &c(3))],
        ];
        assert_eq!(q.m, expected);
    }

    #[test]
    fn bubble_form() {
        // c1 p² + c2 (p+k)² = ½·2(c1+c2) p² + p·2c2 k + ½·2c2 k²
        let q = Diagram::bubble(LinePower::int(1), LinePower::int(1)).assemble_quadratic_form();
        let two = |p: Poly| p.scale(&Rational::from_integer(2.into()));
        assert_eq!(q.m, vec![vec![two(&c(0) + &c(1))]]);
        assert_eq!(q.mp, vec![vec![two(c(1))]]);
        assert_eq!(q.mpp, vec![vec![two(c(1))]]);
    }

    #[test]
    fn reroute_identity_and_shift() {
        let d = Diagram::watermelon();
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(d.reroute(&id).unwrap(), d);
        // p3 = p3' - p1'
        let t = vec![vec![1, 0, -1], vec![0, 1, 0], vec![0, 0, 1]];
        let r = d.reroute(&t).unwrap();
        let rows: Vec<_> = r.lines().iter().map(|l| l.routing.clone()).collect();
        assert_eq!(rows, vec![vec![1, 0, -1], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn reroute_rejects_non_unimodular() {
        let d = Diagram::watermelon();
        let t = vec![vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(d.reroute(&t), Err(DiagramError::NotUnimodular { det: 2 }));
    }

    #[test]
    fn integer_determinants() {
        assert_eq!(int_determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(int_determinant(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]), 4);
        assert_eq!(int_determinant(&[vec![1, 2], vec![2, 4]]), 0);
    }
}
