//! Dense Gaussian elimination over exact rationals and `f64`.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) fn big(x: num_rational::Rational64) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Solves `a x = b` exactly. Returns `None` when `a` is singular.
pub(crate) fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = BigRational::one() / &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                if !a[col][c].is_zero() {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            if !a[r][c].is_zero() {
                acc -= &a[r][c] * &x[c];
            }
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

/// Solves `a x = b` with partial pivoting and one round of iterative
/// refinement. Returns `None` when `a` is numerically singular.
pub(crate) fn solve_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let lu = Lu::factor(a)?;
    let mut x = lu.solve(b);
    let r: Vec<f64> = residual_vec(a, &x, b);
    let dx = lu.solve(&r);
    for (xi, d) in x.iter_mut().zip(dx) {
        *xi += d;
    }
    Some(x)
}

/// `b - a x`.
fn residual_vec(a: &[Vec<f64>], x: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(row, bi)| bi - row.iter().zip(x).map(|(p, q)| p * q).sum::<f64>())
        .collect()
}

struct Lu {
    m: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &[Vec<f64>]) -> Option<Self> {
        let n = a.len();
        let mut m = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
            if m[pivot][col].abs() < 1e-300 {
                return None;
            }
            m.swap(col, pivot);
            perm.swap(col, pivot);
            for r in col + 1..n {
                let factor = m[r][col] / m[col][col];
                m[r][col] = factor;
                if factor != 0.0 {
                    for c in col + 1..n {
                        m[r][c] -= factor * m[col][c];
                    }
                }
            }
        }
        Some(Self { m, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            for c in 0..r {
                y[r] -= self.m[r][c] * y[c];
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                y[r] -= self.m[r][c] * y[c];
            }
            y[r] /= self.m[r][r];
        }
        y
    }
}

pub(crate) fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_two_by_two() {
        // x + y = 3, x - y = 1
        let a = vec![vec![r(1, 1), r(1, 1)], vec![r(1, 1), r(-1, 1)]];
        let x = solve_exact(a, vec![r(3, 1), r(1, 1)]).unwrap();
        assert_eq!(x, vec![r(2, 1), r(1, 1)]);
    }

    #[test]
    fn exact_needs_pivoting() {
        let a = vec![vec![r(0, 1), r(1, 1)], vec![r(2, 1), r(0, 1)]];
        let x = solve_exact(a, vec![r(5, 1), r(1, 1)]).unwrap();
        assert_eq!(x, vec![r(1, 2), r(5, 1)]);
    }

    #[test]
    fn singular_is_none() {
        let a = vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]];
        assert!(solve_exact(a, vec![r(1, 1), r(2, 1)]).is_none());
        assert!(solve_f64(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn float_matches_exact() {
        let a = [vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]];
        let x = solve_f64(&a, &[1.0, 2.0, 3.0]).unwrap();
        let r = residual_vec(&a, &x, &[1.0, 2.0, 3.0]);
        assert!(r.iter().all(|e| e.abs() < 1e-14));
    }
}
