//! Integral LLL reduction (all-integer Gram–Schmidt bookkeeping).
//!
//! Works on exact integers throughout, so entries may be arbitrarily large.
//! The Lovász parameter is fixed at 99/100.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::ArithError;

const DELTA_NUM: i64 = 99;
const DELTA_DEN: i64 = 100;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rounded division to nearest (ties toward +inf) for a positive divisor.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// LLL-reduce the rows of `basis`. Rows must be linearly independent.
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, ArithError> {
    let n = basis.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut b = basis.to_vec();
    // d[i] = det of Gram matrix of first i vectors (d[0] = 1); lam[i][j] = d[j+1] * mu[i][j]
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::one();
    for i in 0..n {
        for j in 0..=i {
            let mut u = dot(&b[i], &b[j]);
            for k in 0..j {
                u = (&d[k + 1] * &u - &lam[i][k] * &lam[j][k]) / &d[k];
            }
            if j < i {
                lam[i][j] = u;
            } else {
                if u.is_zero() {
                    return Err(ArithError::DependentRows);
                }
                d[i + 1] = u;
            }
        }
    }

    let mut k = 1;
    while k < n {
        reduce(&mut b, &mut lam, &d, k, k - 1);
        // Lovász: d[k+1] d[k-1] >= (delta d[k]^2 - lam^2) ... scaled by DELTA_DEN
        let lhs = &d[k + 1] * &d[k - 1] * DELTA_DEN;
        let rhs = &d[k] * &d[k] * DELTA_NUM - &lam[k][k - 1] * &lam[k][k - 1] * DELTA_DEN;
        if lhs < rhs {
            swap(&mut b, &mut lam, &mut d, k);
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(b)
}

fn reduce(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    if (&lam[k][l] * BigInt::from(2)).abs() <= d[l + 1] {
        return;
    }
    let r = round_div(&lam[k][l], &d[l + 1]);
    let bl = b[l].clone();
    for (x, y) in b[k].iter_mut().zip(&bl) {
        *x -= &r * y;
    }
    for j in 0..l {
        let t = &r * &lam[l][j];
        lam[k][j] -= t;
    }
    let t = &r * &d[l + 1];
    lam[k][l] -= t;
}

fn swap(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize) {
    let n = b.len();
    b.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..n {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = bb;
}

/// Squared Euclidean norm.
pub fn norm2(v: &[BigInt]) -> BigInt {
    dot(v, v)
}
