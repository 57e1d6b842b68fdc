//! Dense polynomials over a prime field `F_l` and their factorisation.
//!
//! Factorisation runs squarefree decomposition, distinct-degree splitting and
//! then randomised equal-degree splitting (Cantor–Zassenhaus) driven by a
//! seeded ChaCha generator, so results are reproducible for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ArithError;
use crate::mod_inv;

/// Polynomial over `F_p`, coefficients low-to-high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Self { p, coeffs: c }
    }

    /// Reduce integer coefficients (low-to-high) modulo `p`.
    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
        Self::new(p, c)
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| ((acc as u128 * x as u128 + c as u128) % p as u128) as u64)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = mod_inv(self.lead(), self.p).expect("nonzero lead is invertible");
        self.scale(inv)
    }

    pub fn scale(&self, s: u64) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs.iter().map(|&c| ((c as u128 * s as u128) % p as u128) as u64).collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let p = self.p;
        Self::new(p, (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let p = self.p;
        Self::new(p, (0..n).map(|i| (self.coeff(i) + p - o.coeff(i)) % p).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut out = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, out.into_iter().map(|c| c as u64).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(p), self.clone());
        }
        let inv = mod_inv(d.lead(), p).unwrap();
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = ((r[i + dd] as u128 * inv as u128) % p as u128) as u64;
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                let sub = ((c as u128 * b as u128) % p as u128) as u64;
                r[i + j] = (r[i + j] + p - sub) % p;
            }
        }
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| ((c as u128 * (i as u128 % p as u128)) % p as u128) as u64)
                .collect(),
        )
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    /// `self^(p^k) mod m`, by `k` successive Frobenius powers.
    fn frobenius_pow(&self, k: usize, m: &Self) -> Self {
        let mut r = self.rem(m);
        for _ in 0..k {
            r = r.pow_mod(self.p as u128, m);
        }
        r
    }

    /// If every exponent is divisible by `p`, the polynomial `g` with `g(x^p) = self`
    /// (coefficients are their own `p`-th roots in a prime field).
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).is_one()
    }

    /// Rabin irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let x = Self::x(self.p);
        if x.frobenius_pow(n, &f) != x.rem(&f) {
            return false;
        }
        for q in prime_divisors(n) {
            let h = x.frobenius_pow(n / q, &f).sub(&x);
            if !f.gcd(&h).is_one() {
                return false;
            }
        }
        true
    }

    /// Squarefree decomposition of a monic polynomial: pairs `(factor, multiplicity)`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let p = self.p as usize;
        let mut out = Vec::new();
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let mut c = f.gcd(&f.derivative());
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_rem(&y).0;
            if fac.degree().unwrap_or(0) > 0 {
                out.push((fac, i));
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        if c.degree().unwrap_or(0) > 0 {
            for (fac, m) in c.pth_root().squarefree_decomposition() {
                out.push((fac, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorisation of a monic squarefree polynomial.
    pub fn distinct_degree(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        let mut f = self.monic();
        let x = Self::x(self.p);
        let mut h = x.rem(&f);
        let mut d = 0;
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.pow_mod(self.p as u128, &f);
            let g = f.gcd(&h.sub(&x));
            if !g.is_one() {
                f = f.div_rem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
        }
        if let Some(df) = f.degree() {
            if df > 0 {
                out.push((f, df));
            }
        }
        out
    }

    /// Equal-degree splitting of a monic squarefree product of degree-`d` irreducibles.
    pub fn equal_degree(&self, d: usize, rng: &mut impl Rng) -> Vec<Self> {
        let n = self.deg();
        if n == d {
            return vec![self.monic()];
        }
        let p = self.p;
        let e = (pow_u128(p, d) - 1) / 2;
        loop {
            let a = Self::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = a.pow_mod(e, self).sub(&Self::one(p));
            let g = self.gcd(&b);
            if let Some(dg) = g.degree() {
                if dg > 0 && dg < n {
                    let mut out = g.equal_degree(d, rng);
                    out.extend(self.div_rem(&g).0.equal_degree(d, rng));
                    return out;
                }
            }
        }
    }

    /// Complete factorisation into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients). Randomness is drawn from `seed`.
    pub fn factor(&self, seed: u64) -> Result<Vec<(Self, usize)>, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroPolynomial);
        }
        if self.p == 2 {
            return Err(ArithError::EvenCharacteristic);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (sf, mult) in self.squarefree_decomposition() {
            for (part, d) in sf.distinct_degree() {
                for fac in part.equal_degree(d, &mut rng) {
                    out.push((fac, mult));
                }
            }
        }
        out.sort_by(|a, b| {
            (a.0.coeffs.len(), a.0.coeffs.iter().rev().collect::<Vec<_>>())
                .cmp(&(b.0.coeffs.len(), b.0.coeffs.iter().rev().collect::<Vec<_>>()))
        });
        Ok(out)
    }
}

fn pow_u128(b: u64, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc * b as u128)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn product(p: u64, fs: &[(ModPoly, usize)]) -> ModPoly {
        fs.iter().fold(ModPoly::one(p), |acc, (f, m)| (0..*m).fold(acc, |a, _| a.mul(f)))
    }

    // Berlekamp: a squarefree f is irreducible iff Q - I has nullity 1.
    fn berlekamp_irreducible(f: &ModPoly) -> bool {
        let p = f.modulus();
        let n = f.degree().unwrap();
        if n == 1 {
            return true;
        }
        if !f.is_squarefree() {
            return false;
        }
        let xp = ModPoly::x(p).pow_mod(p as u128, f);
        let mut rows = Vec::new();
        let mut cur = ModPoly::one(p);
        for i in 0..n {
            let mut row: Vec<u64> = (0..n).map(|j| cur.coeff(j)).collect();
            row[i] = (row[i] + p - 1) % p;
            rows.push(row);
            cur = cur.mul_mod(&xp, f);
        }
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| rows[r][col] != 0) else { continue };
            rows.swap(rank, piv);
            let inv = mod_inv(rows[rank][col], p).unwrap();
            for r in 0..n {
                if r != rank && rows[r][col] != 0 {
                    let c = rows[r][col] * inv % p;
                    for k in 0..n {
                        rows[r][k] = (rows[r][k] + p * p - c * rows[rank][k] % p) % p;
                    }
                }
            }
            rank += 1;
        }
        n - rank == 1
    }

    #[test]
    fn t2_plus_1_mod_5_splits() {
        let f = ModPoly::new(5, vec![1, 0, 1]);
        let fs = f.factor(0).unwrap();
        assert_eq!(fs, vec![(ModPoly::new(5, vec![2, 1]), 1), (ModPoly::new(5, vec![3, 1]), 1)]);
    }

    #[test]
    fn t2_plus_1_mod_3_irreducible() {
        let f = ModPoly::new(3, vec![1, 0, 1]);
        assert_eq!(f.factor(0).unwrap(), vec![(f.clone(), 1)]);
        assert!(f.is_irreducible());
    }

    #[test]
    fn t_squared_mod_3() {
        let f = ModPoly::new(3, vec![0, 0, 1]);
        assert_eq!(f.factor(0).unwrap(), vec![(ModPoly::x(3), 2)]);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(ModPoly::zero(5).factor(1), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn inseparable_powers() {
        // (x^3 + 1)^3 over F_3 = (x + 1)^9
        let f = ModPoly::new(3, vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(f.factor(3).unwrap(), vec![(ModPoly::new(3, vec![1, 1]), 9)]);
    }

    fn odd_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn factorisation_is_complete_and_irreducible(
            p in odd_prime(),
            raw in prop::collection::vec(0u64..1000, 2..10),
            seed in any::<u64>(),
        ) {
            let f = ModPoly::new(p, raw);
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            let fs = f.factor(seed).unwrap();
            prop_assert_eq!(product(p, &fs), f.monic());
            for (g, _) in &fs {
                prop_assert!(berlekamp_irreducible(g));
                prop_assert!(g.is_irreducible());
            }
        }
    }
}
