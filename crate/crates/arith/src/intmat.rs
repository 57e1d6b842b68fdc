//! Dense integer matrices: Hermite normal form, integer kernels, ranks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    ncols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Self { rows, ncols }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), ncols)
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self::new(rows, n)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        Self::new(rows, self.rows.len())
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ncols);
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Row-style Hermite normal form together with a unimodular `U` such that
    /// `U * self` equals the returned form (zero rows kept at the bottom).
    ///
    /// Pivots are positive and entries above each pivot lie in `[0, pivot)`.
    pub fn hnf_with_transform(&self) -> (IntMatrix, IntMatrix) {
        let m = self.rows.len();
        let mut a = self.rows.clone();
        let mut u = IntMatrix::identity(m).rows;
        let mut r = 0;
        for c in 0..self.ncols {
            if r == m {
                break;
            }
            // gcd-combine every row below r into row r at column c
            for i in r + 1..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let (x, y) = (a[r][c].clone(), a[i][c].clone());
                let e = x.extended_gcd(&y);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let (xg, yg) = (&x / &g, &y / &g);
                combine(&mut a, r, i, &s, &t, &yg, &xg);
                combine(&mut u, r, i, &s, &t, &yg, &xg);
            }
            if a[r][c].is_zero() {
                continue;
            }
            if a[r][c].is_negative() {
                negate(&mut a[r]);
                negate(&mut u[r]);
            }
            let piv = a[r][c].clone();
            for i in 0..r {
                let f = a[i][c].div_floor(&piv);
                if !f.is_zero() {
                    sub_mul(&mut a, i, r, &f);
                    sub_mul(&mut u, i, r, &f);
                }
            }
            r += 1;
        }
        (IntMatrix::new(a, self.ncols), IntMatrix::new(u, m))
    }

    /// Hermite normal form with zero rows removed.
    pub fn hnf(&self) -> IntMatrix {
        let (h, _) = self.hnf_with_transform();
        let rows: Vec<_> = h.rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        IntMatrix::new(rows, self.ncols)
    }

    pub fn rank(&self) -> usize {
        self.hnf().nrows()
    }

    /// Z-basis of `{n : self * n = 0}`; empty when the kernel is trivial.
    pub fn integer_kernel(&self) -> Vec<Vec<BigInt>> {
        let (h, u) = self.transpose().hnf_with_transform();
        let basis: Vec<Vec<BigInt>> = h
            .rows
            .iter()
            .zip(u.rows)
            .filter(|(hr, _)| hr.iter().all(|x| x.is_zero()))
            .map(|(_, ur)| ur)
            .collect();
        if basis.len() > 1 {
            if let Ok(reduced) = crate::lll::lll_reduce(&basis) {
                return reduced.into_iter().map(normalise_sign).collect();
            }
        }
        basis.into_iter().map(normalise_sign).collect()
    }

    /// Whether `v` lies in the Z-span of the rows.
    pub fn row_lattice_contains(&self, v: &[BigInt]) -> bool {
        let h = self.hnf();
        let mut v = v.to_vec();
        for row in &h.rows {
            let c = row.iter().position(|x| !x.is_zero()).unwrap();
            let (q, rem) = v[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return false;
            }
            for (vj, rj) in v.iter_mut().zip(row) {
                *vj -= &q * rj;
            }
        }
        v.iter().all(|x| x.is_zero())
    }
}

/// Make the first nonzero entry positive.
fn normalise_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        negate(&mut v);
    }
    v
}

fn negate(r: &mut [BigInt]) {
    for x in r.iter_mut() {
        *x = -&*x;
    }
}

fn sub_mul(a: &mut [Vec<BigInt>], i: usize, r: usize, f: &BigInt) {
    let (lo, hi) = a.split_at_mut(r.max(i));
    let (dst, src) = if i < r { (&mut lo[i], &hi[0]) } else { (&mut hi[0], &lo[r]) };
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= f * s;
    }
}

// rows (r, i) <- (s*r + t*i, -yg*r + xg*i); determinant s*xg + t*yg = 1
fn combine(a: &mut [Vec<BigInt>], r: usize, i: usize, s: &BigInt, t: &BigInt, yg: &BigInt, xg: &BigInt) {
    for k in 0..a[r].len() {
        let (ar, ai) = (a[r][k].clone(), a[i][k].clone());
        a[r][k] = s * &ar + t * &ai;
        a[i][k] = xg * &ai - yg * &ar;
    }
}

/// Convert a small integer vector.
pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
