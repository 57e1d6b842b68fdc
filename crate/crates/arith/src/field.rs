//! Finite fields `F_{p^n}` with a deterministic defining polynomial.
//!
//! Elements are packed integers `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` holding
//! the coefficient vector in the basis `1, x, ..., x^{n-1}`. Small fields get
//! discrete-log tables for multiplication and the quadratic character.

use crate::error::ArithError;
use crate::modpoly::ModPoly;
use crate::{is_prime, mod_pow, DEFAULT_ENUM_CAP};

/// Fields up to this size carry exp/log tables.
const TABLE_CAP: u64 = 1 << 22;

/// Packed field element.
pub type Elem = u64;

#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    modulus: ModPoly,
    generator: Elem,
    tables: Option<LogTables>,
}

#[derive(Clone, Debug)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FieldCtx {
    /// `F_{p^n}` with the default enumeration cap.
    pub fn new(p: u64, n: u32) -> Result<Self, ArithError> {
        Self::with_cap(p, n, DEFAULT_ENUM_CAP)
    }

    pub fn with_cap(p: u64, n: u32, cap: u64) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if p == 2 {
            return Err(ArithError::EvenCharacteristic);
        }
        if n == 0 {
            return Err(ArithError::InvalidArgument("extension degree must be at least 1".into()));
        }
        let q = checked_pow(p, n).filter(|&q| q <= cap).ok_or(ArithError::TooLarge { p, n, cap })?;
        // Smallest monic irreducible when coefficient vectors are read as base-p
        // integers with the constant term least significant.
        let modulus = (0..q)
            .map(|idx| {
                let mut c = unpack(idx, p, n as usize);
                c.push(1);
                ModPoly::new(p, c)
            })
            .find(|f| f.is_irreducible())
            .expect("irreducible polynomials exist in every degree");
        Ok(Self::build(p, n, q, modulus))
    }

    /// Field with a caller-supplied monic irreducible modulus.
    pub fn with_modulus(modulus: ModPoly) -> Result<Self, ArithError> {
        let p = modulus.modulus();
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if p == 2 {
            return Err(ArithError::EvenCharacteristic);
        }
        if modulus.lead() != 1 || !modulus.is_irreducible() {
            return Err(ArithError::InvalidArgument("modulus must be monic irreducible".into()));
        }
        let n = modulus.degree().unwrap() as u32;
        let q = checked_pow(p, n)
            .filter(|&q| q <= DEFAULT_ENUM_CAP)
            .ok_or(ArithError::TooLarge { p, n, cap: DEFAULT_ENUM_CAP })?;
        Ok(Self::build(p, n, q, modulus))
    }

    fn build(p: u64, n: u32, q: u64, modulus: ModPoly) -> Self {
        let mut ctx = Self { p, n, q, modulus, generator: 0, tables: None };
        ctx.generator = ctx.find_generator();
        if q <= TABLE_CAP {
            let mut exp = vec![0u32; (q - 1) as usize];
            let mut log = vec![0u32; q as usize];
            let mut x = 1;
            for (i, slot) in exp.iter_mut().enumerate() {
                *slot = x as u32;
                log[x as usize] = i as u32;
                x = ctx.mul_poly(x, ctx.generator);
            }
            ctx.tables = Some(LogTables { exp, log });
        }
        ctx
    }

    fn find_generator(&self) -> Elem {
        let order = self.q - 1;
        let factors = prime_factors(order);
        (1..self.q)
            .find(|&g| factors.iter().all(|&f| self.pow_poly(g, order / f) != 1))
            .expect("multiplicative group is cyclic")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &ModPoly {
        &self.modulus
    }

    /// Smallest (by packed index) generator of the multiplicative group.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, a: i64) -> Elem {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        unpack(a, self.p, self.n as usize)
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Elem {
        c.iter().rev().fold(0, |acc, &x| acc * self.p + x % self.p)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.n == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.n == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                let s = t.log[a as usize] as u64 + t.log[b as usize] as u64;
                t.exp[(s % (self.q - 1)) as usize] as u64
            }
            None => self.mul_poly(a, b),
        }
    }

    fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        if self.n == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let pa = ModPoly::new(self.p, self.coeffs(a));
        let pb = ModPoly::new(self.p, self.coeffs(b));
        let r = pa.mul_mod(&pb, &self.modulus);
        self.from_coeffs(r.coeffs())
    }

    fn pow_poly(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        match &self.tables {
            Some(t) => {
                let s = (t.log[a as usize] as u128 * e as u128) % (self.q - 1) as u128;
                t.exp[s as usize] as u64
            }
            None => self.pow_poly(a, e),
        }
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.pow(a, self.q - 2))
    }

    /// Discrete logarithm to the base [`generator`](Self::generator).
    pub fn log(&self, a: Elem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[a as usize] as u64),
            None => {
                let mut x = 1;
                for i in 0..self.q - 1 {
                    if x == a {
                        return Some(i);
                    }
                    x = self.mul_poly(x, self.generator);
                }
                None
            }
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut ord = self.q - 1;
        for f in prime_factors(self.q - 1) {
            while ord % f == 0 && self.pow(a, ord / f) == 1 {
                ord /= f;
            }
        }
        Some(ord)
    }

    /// Quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, a: Elem) -> i8 {
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                if t.log[a as usize] % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            None => {
                if self.pow_poly(a, (self.q - 1) / 2) == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Absolute trace `F_q -> F_p`.
    pub fn trace(&self, a: Elem) -> u64 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.n {
            acc = self.add(acc, x);
            x = self.pow(x, self.p);
        }
        debug_assert!(acc < self.p);
        acc
    }

    /// Evaluate a polynomial with field coefficients (low-to-high) by Horner.
    pub fn eval(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Embedding of a subfield `F_{p^m}` (with its own modulus) into this field.
    ///
    /// The map sends the subfield's basis element `x` to the smallest root of
    /// the subfield modulus found by enumeration.
    pub fn embedding_of(&self, sub: &FieldCtx) -> Result<Embedding, ArithError> {
        if sub.p != self.p || self.n % sub.n != 0 {
            return Err(ArithError::InvalidArgument(format!(
                "F_{}^{} is not a subfield of F_{}^{}",
                sub.p, sub.n, self.p, self.n
            )));
        }
        let m: Vec<Elem> = sub.modulus.coeffs().to_vec();
        let root = if sub.n == 1 {
            0
        } else {
            self.elements()
                .find(|&x| self.eval(&m, x) == 0)
                .expect("subfield modulus splits in the extension")
        };
        let mut powers = Vec::with_capacity(sub.n as usize);
        let mut cur = 1;
        for _ in 0..sub.n {
            powers.push(cur);
            cur = self.mul(cur, root);
        }
        Ok(Embedding { sub_p: sub.p, sub_n: sub.n, powers })
    }
}

/// Field embedding `F_{p^m} -> F_{p^n}` determined by the image of `x`.
#[derive(Clone, Debug)]
pub struct Embedding {
    sub_p: u64,
    sub_n: u32,
    powers: Vec<Elem>,
}

impl Embedding {
    pub fn apply(&self, target: &FieldCtx, a: Elem) -> Elem {
        let c = unpack(a, self.sub_p, self.sub_n as usize);
        c.iter()
            .zip(&self.powers)
            .fold(0, |acc, (&ci, &pw)| target.add(acc, target.mul(ci, pw)))
    }
}

fn unpack(mut idx: u64, p: u64, n: usize) -> Vec<u64> {
    let mut c = Vec::with_capacity(n);
    for _ in 0..n {
        c.push(idx % p);
        idx /= p;
    }
    c
}

fn checked_pow(p: u64, n: u32) -> Option<u64> {
    (0..n).try_fold(1u64, |acc, _| acc.checked_mul(p))
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Legendre symbol for a prime modulus, in `{-1, 0, 1}`.
pub fn legendre(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_5() {
        let f = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.modulus(), &ModPoly::new(5, vec![0, 1]));
    }

    #[test]
    fn f25_modulus_is_x2_plus_2() {
        let f = FieldCtx::new(5, 2).unwrap();
        assert_eq!(f.order(), 25);
        assert_eq!(f.modulus(), &ModPoly::new(5, vec![2, 0, 1]));
        // -2 = 3 is a non-square mod 5
        assert_eq!(legendre(3, 5), -1);
    }

    #[test]
    fn rejects_bad_characteristics() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), ArithError::NotPrime(4));
        assert_eq!(FieldCtx::new(2, 3).unwrap_err(), ArithError::EvenCharacteristic);
        assert!(matches!(FieldCtx::with_cap(7, 5, 1000), Err(ArithError::TooLarge { .. })));
    }

    #[test]
    fn quadratic_character_f5() {
        let f = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f.quadratic_character(0), 0);
        assert_eq!(f.quadratic_character(4), 1);
        assert_eq!(f.quadratic_character(2), -1);
    }

    #[test]
    fn quadratic_character_counts() {
        for (p, n) in [(3, 3), (5, 2), (7, 2), (11, 1)] {
            let f = FieldCtx::new(p, n).unwrap();
            let s: i64 = f.elements().map(|x| f.quadratic_character(x) as i64).sum();
            assert_eq!(s, 0);
            for x in f.elements().skip(1) {
                assert_eq!(f.quadratic_character(f.mul(x, x)), 1);
            }
        }
    }

    fn check_axioms(f: &FieldCtx, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let (a, b, c) = (rng.gen_range(0..f.order()), rng.gen_range(0..f.order()), rng.gen_range(0..f.order()));
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
        assert_eq!(f.mult_order(f.generator()), Some(f.order() - 1));
    }

    #[test]
    fn field_axioms_sampled() {
        for (p, n) in [(5, 1), (5, 2), (3, 4), (7, 3), (13, 2)] {
            check_axioms(&FieldCtx::new(p, n).unwrap(), p * 31 + n as u64);
        }
        // the table-free path
        let big = FieldCtx::new(3, 15).unwrap();
        assert!(big.tables.is_none());
        check_axioms(&big, 9);
    }

    #[test]
    fn trace_is_additive_and_onto() {
        let f = FieldCtx::new(3, 3).unwrap();
        let mut hits = [0; 3];
        for x in f.elements() {
            hits[f.trace(x) as usize] += 1;
        }
        assert_eq!(hits, [9, 9, 9]);
    }

    #[test]
    fn subfield_embedding_is_a_homomorphism() {
        let sub = FieldCtx::new(5, 2).unwrap();
        let big = FieldCtx::new(5, 4).unwrap();
        let emb = big.embedding_of(&sub).unwrap();
        for a in sub.elements() {
            for b in sub.elements() {
                assert_eq!(emb.apply(&big, sub.mul(a, b)), big.mul(emb.apply(&big, a), emb.apply(&big, b)));
                assert_eq!(emb.apply(&big, sub.add(a, b)), big.add(emb.apply(&big, a), emb.apply(&big, b)));
            }
        }
        assert!(FieldCtx::new(5, 3).unwrap().embedding_of(&sub).is_err());
    }
}
