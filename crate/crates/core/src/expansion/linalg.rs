use crate::algebra::Poly;

/// Determinant by fraction-free Bareiss elimination. Every division is exact
/// in the polynomial ring; rows are swapped only when a pivot vanishes.
pub fn determinant(matrix: &[Vec<Poly>]) -> Poly {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return Poly::one();
    }
    let mut a = matrix.to_vec();
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step divides exactly");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Adjugate `adj(M)` with `M · adj(M) = det(M) · 1`.
pub fn adjugate(matrix: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = matrix.len();
    if n == 1 {
        return vec![vec![Poly::one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // cofactor C_ji
                    let minor: Vec<Vec<Poly>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| {
                            (0..n)
                                .filter(|&c| c != i)
                                .map(|c| matrix[r][c].clone())
                                .collect()
                        })
                        .collect();
                    let d = determinant(&minor);
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect()
}
