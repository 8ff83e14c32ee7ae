use nalgebra::{DMatrix, SymmetricEigen};

use crate::algebra::{rational::to_f64, Rational};
use crate::diagram::Diagram;

use super::OracleError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericResult {
    pub value: f64,
    /// `|value(nodes) − value(nodes/2)|`.
    pub error_estimate: f64,
    /// Nodes per Schwinger parameter.
    pub nodes_used: usize,
}

/// Generalized Gauss–Laguerre rule for the normalized weight
/// `t^alpha e^(−t) / Γ(alpha+1)` (Golub–Welsch). Weights sum to one.
pub fn gauss_laguerre_rule(nodes: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(nodes, nodes, |i, j| {
        if i == j {
            2.0 * i as f64 + alpha + 1.0
        } else if i.abs_diff(j) == 1 {
            let k = i.max(j) as f64;
            (k * (k + alpha)).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut rule: Vec<(f64, f64)> = (0..nodes)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule.into_iter().unzip()
}

/// Numerical value of the regulated integral at fixed κ and `D`, including
/// the `(2π)^(−LD/2)` factor. `invariants[i][j] = k_i·k_j` (empty for vacuum
/// diagrams).
pub fn gauss_laguerre_eval(
    d: &Diagram,
    invariants: &[Vec<f64>],
    kappa: f64,
    dim: &Rational,
    nodes: usize,
) -> Result<NumericResult, OracleError> {
    if !(8..=128).contains(&nodes) {
        return Err(OracleError::NodesOutOfRange(nodes));
    }
    if !(0.0..1.0).contains(&kappa) {
        return Err(OracleError::KappaOutOfRange(kappa));
    }
    let dim = to_f64(dim);
    if dim <= 0.0 {
        return Err(OracleError::NonPositiveDimension);
    }
    let n = d.lines().len();
    if n > 5 {
        return Err(OracleError::TooManyLines(n));
    }
    let e = d.externals();
    if invariants.len() != e || invariants.iter().any(|r| r.len() != e) {
        return Err(OracleError::BadKinematics(e));
    }
    let powers = d
        .lines()
        .iter()
        .map(|l| l.power.numeric().map(to_f64))
        .collect::<Option<Vec<f64>>>()
        .ok_or(OracleError::SymbolicPowersUnsupported)?;
    let integrand = Integrand::new(d, invariants, kappa, dim, &powers);
    let fine = product_rule(&integrand, &powers, nodes);
    let coarse = product_rule(&integrand, &powers, nodes / 2);
    let norm = (2.0 * std::f64::consts::PI).powf(-(d.loops() as f64) * dim / 2.0);
    Ok(NumericResult {
        value: norm * fine,
        error_estimate: norm * (fine - coarse).abs(),
        nodes_used: nodes,
    })
}

fn product_rule(f: &Integrand, powers: &[f64], nodes: usize) -> f64 {
    let rules: Vec<(Vec<f64>, Vec<f64>)> = powers
        .iter()
        .map(|&a| gauss_laguerre_rule(nodes, a - 1.0))
        .collect();
    let mut t = vec![0.0; powers.len()];
    let mut scratch = Scratch::new(f.loops, f.externals);
    axis_sum(f, &rules, 0, &mut t, &mut scratch)
}

fn axis_sum(
    f: &Integrand,
    rules: &[(Vec<f64>, Vec<f64>)],
    axis: usize,
    t: &mut [f64],
    scratch: &mut Scratch,
) -> f64 {
    if axis == rules.len() {
        return f.eval(t, scratch);
    }
    let (xs, ws) = &rules[axis];
    let mut parts = Vec::with_capacity(xs.len());
    for (x, w) in xs.iter().zip(ws) {
        t[axis] = *x;
        parts.push(w * axis_sum(f, rules, axis + 1, t, scratch));
    }
    pairwise_sum(&parts)
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

struct Integrand {
    loops: usize,
    externals: usize,
    routing: Vec<Vec<f64>>,
    powers: Vec<f64>,
    invariants: Vec<Vec<f64>>,
    kappa: f64,
    half_dim: f64,
}

struct Scratch {
    m: Vec<f64>,
    rhs: Vec<f64>,
}

impl Scratch {
    fn new(loops: usize, externals: usize) -> Scratch {
        Scratch {
            m: vec![0.0; loops * loops],
            rhs: vec![0.0; loops * externals],
        }
    }
}

impl Integrand {
    fn new(d: &Diagram, invariants: &[Vec<f64>], kappa: f64, dim: f64, powers: &[f64]) -> Self {
        Integrand {
            loops: d.loops(),
            externals: d.externals(),
            routing: d
                .lines()
                .iter()
                .map(|l| l.routing.iter().map(|&x| x as f64).collect())
                .collect(),
            powers: powers.to_vec(),
            invariants: invariants.to_vec(),
            kappa,
            half_dim: dim / 2.0,
        }
    }

    /// `det M^(−D/2) exp(−½ kᵀ(M″ − M′ᵀM⁻¹M′)k)` at parameters `t`.
    fn eval(&self, t: &[f64], s: &mut Scratch) -> f64 {
        let (l, e) = (self.loops, self.externals);
        let c: Vec<f64> = self
            .powers
            .iter()
            .zip(t)
            .map(|(a, t)| a * (1.0 - self.kappa) + self.kappa * t)
            .collect();
        let entry = |i: usize, j: usize| -> f64 {
            self.routing
                .iter()
                .zip(&c)
                .map(|(r, ck)| 2.0 * ck * r[i] * r[j])
                .sum()
        };
        for i in 0..l {
            for j in 0..l {
                s.m[i * l + j] = entry(i, j);
            }
            for j in 0..e {
                s.rhs[i * e + j] = entry(i, l + j);
            }
        }
        // Gaussian elimination with partial pivoting on [M | M′].
        let mut det = 1.0;
        for k in 0..l {
            let p = (k..l)
                .max_by(|&x, &y| s.m[x * l + k].abs().total_cmp(&s.m[y * l + k].abs()))
                .unwrap();
            if p != k {
                for j in 0..l {
                    s.m.swap(k * l + j, p * l + j);
                }
                for j in 0..e {
                    s.rhs.swap(k * e + j, p * e + j);
                }
                det = -det;
            }
            let pivot = s.m[k * l + k];
            det *= pivot;
            for i in k + 1..l {
                let f = s.m[i * l + k] / pivot;
                if f == 0.0 {
                    continue;
                }
                for j in k..l {
                    s.m[i * l + j] -= f * s.m[k * l + j];
                }
                for j in 0..e {
                    s.rhs[i * e + j] -= f * s.rhs[k * e + j];
                }
            }
        }
        let mut value = det.powf(-self.half_dim);
        if e > 0 {
            // Back-substitute X = M⁻¹ M′ (stored in rhs).
            for k in (0..l).rev() {
                for j in 0..e {
                    let mut v = s.rhs[k * e + j];
                    for i in k + 1..l {
                        v -= s.m[k * l + i] * s.rhs[i * e + j];
                    }
                    s.rhs[k * e + j] = v / s.m[k * l + k];
                }
            }
            let mut quad = 0.0;
            for i in 0..e {
                for j in 0..e {
                    let mut n_ij = entry(l + i, l + j);
                    for k in 0..l {
                        n_ij -= entry(k, l + i) * s.rhs[k * e + j];
                    }
                    quad += n_ij * self.invariants[i][j];
                }
            }
            value *= (-0.5 * quad).exp();
        }
        value
    }
}
