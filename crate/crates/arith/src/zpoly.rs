//! Integer polynomials with exact real-root machinery.
//!
//! Sturm sequences are computed over the rationals and scaled back to
//! primitive integer polynomials by positive factors, so every sign is exact.
//! Real roots are isolated in dyadic intervals and refined by a Newton step
//! that is accepted only when the refined interval still brackets a sign change.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer polynomial, coefficients low-to-high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

/// Closed dyadic interval `[lo / 2^k, hi / 2^k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub k: u32,
}

impl DyadicInterval {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        let s = (&self.lo + &self.hi).to_string().parse::<f64>().unwrap_or(f64::NAN);
        s / 2f64.powi(self.k as i32 + 1)
    }

    /// Rescale to a finer denominator `2^k2` (`k2 >= k`), widening outward.
    pub fn at_scale(&self, k2: u32) -> (BigInt, BigInt) {
        assert!(k2 >= self.k);
        let s = k2 - self.k;
        (&self.lo << s, &self.hi << s)
    }
}

impl ZPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut c = coeffs;
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { coeffs: c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the content, keeping the leading coefficient's sign.
    pub fn primitive(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Primitive with positive leading coefficient.
    pub fn normalised(&self) -> Self {
        let p = self.primitive();
        if p.lead().is_negative() {
            p.scale(&BigInt::from(-1))
        } else {
            p
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `2^{k d} * self(m / 2^k)` with `d` the degree: an integer with the sign of the value.
    pub fn eval_dyadic_scaled(&self, m: &BigInt, k: u32) -> BigInt {
        let Some(d) = self.degree() else { return BigInt::zero() };
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * m + (c << (k as usize * (d - i)));
        }
        acc
    }

    pub fn sign_at_dyadic(&self, m: &BigInt, k: u32) -> Ordering {
        self.eval_dyadic_scaled(m, k).sign_cmp()
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Sign of `self(c * sqrt(q))` for integers `c`, `q >= 0`, decided exactly by
    /// writing the value as `A + B sqrt(q)` and comparing `A^2` with `B^2 q`.
    pub fn sign_at_sqrt(&self, c: &BigInt, q: &BigInt) -> Ordering {
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        // (c sqrt q)^i = c^i q^{i/2} or c^i q^{(i-1)/2} sqrt q
        let mut cpow = BigInt::one();
        let mut qpow = BigInt::one();
        for (i, coef) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cpow *= c;
                if i % 2 == 0 {
                    qpow *= q;
                }
            }
            if i % 2 == 0 {
                a += coef * &cpow * &qpow;
            } else {
                b += coef * &cpow * &qpow;
            }
        }
        sign_a_plus_b_sqrt(&a, &b, q)
    }

    /// Remainder of division by `d`, scaled by a positive rational to a primitive integer polynomial.
    fn rem_positive(&self, d: &Self) -> Self {
        // pseudo-remainder with a positive multiplier |lc(d)|^{k}
        let dd = d.degree().expect("nonzero divisor");
        let lc = d.lead();
        let lc_abs = lc.abs();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let rl = r.lead();
            // r <- |lc| r - sign(lc) rl x^{dr-dd} d
            let mut shifted = vec![BigInt::zero(); dr - dd];
            shifted.extend(d.coeffs.iter().map(|c| c * &rl * lc.signum()));
            r = r.scale(&lc_abs).sub(&Self::new(shifted));
        }
        r.primitive()
    }

    /// Exact division; panics unless the quotient exists in Z[x].
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem_q(d);
        assert!(r.iter().all(|x| x.is_zero()), "inexact polynomial division");
        assert!(q.iter().all(|x| x.is_integer()), "non-integral quotient");
        Self::new(q.into_iter().map(|x| x.to_integer()).collect())
    }

    fn div_rem_q(&self, d: &Self) -> (Vec<BigRational>, Vec<BigRational>) {
        let dd = d.degree().expect("nonzero divisor");
        let lc = BigRational::from_integer(d.lead());
        let mut r: Vec<BigRational> = self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let n = self.coeffs.len();
        if n <= dd {
            return (vec![], r);
        }
        let mut q = vec![BigRational::zero(); n - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * BigRational::from_integer(dj.clone());
            }
            q[i] = c;
        }
        (q, r)
    }

    /// Monic-up-to-content gcd over Q, normalised (primitive, positive lead).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.normalised(), o.normalised());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.rem_positive(&b);
            a = b;
            b = r;
        }
        a.normalised()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Yun's squarefree decomposition over Q: `(factor, multiplicity)` pairs of
    /// positive-degree normalised factors.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = self.normalised();
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0);
        let mut c = fp.div_exact(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Sturm sequence of a squarefree polynomial (each term scaled by a positive factor).
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].degree().unwrap_or(0) == 0 {
                break;
            }
            let r = seq[n - 2].rem_positive(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&BigInt::from(-1)));
        }
        seq
    }

    /// Cauchy bound rounded up to a power of two: every root has |x| < 2^s.
    pub fn root_bound_log2(&self) -> u32 {
        let lc = self.lead().abs();
        let m = self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default();
        let ratio: BigInt = (m / lc) + 2;
        ratio.bits() as u32
    }

    /// Isolate every real root of a squarefree polynomial in disjoint dyadic
    /// intervals (exact roots returned as point intervals), sorted ascending.
    pub fn isolate_real_roots(&self) -> Vec<DyadicInterval> {
        let seq = self.sturm_sequence();
        let s = self.root_bound_log2();
        let lo = -(BigInt::one() << s as usize);
        let hi = BigInt::one() << s as usize;
        let mut out = Vec::new();
        let mut stack = vec![(lo, hi, 0u32)];
        while let Some((a, b, k)) = stack.pop() {
            let n = sturm_count(&seq, &a, &b, k);
            match n {
                0 => {}
                1 => out.push(DyadicInterval { lo: a, hi: b, k }),
                _ => {
                    let (a2, b2, k2) = (a << 1u32, b << 1u32, k + 1);
                    let mid: BigInt = (&a2 + &b2) / 2;
                    if self.sign_at_dyadic(&mid, k2) == Ordering::Equal {
                        out.push(DyadicInterval { lo: mid.clone(), hi: mid.clone(), k: k2 });
                        let eps_l = (&mid << 1u32) - 1;
                        let eps_r = (&mid << 1u32) + 1;
                        stack.push(((&a2) << 1u32, eps_l, k2 + 1));
                        stack.push((eps_r, (&b2) << 1u32, k2 + 1));
                    } else {
                        stack.push((a2, mid.clone(), k2));
                        stack.push((mid, b2, k2));
                    }
                }
            }
        }
        out.sort_by(|x, y| {
            let k = x.k.max(y.k);
            x.at_scale(k).0.cmp(&y.at_scale(k).0)
        });
        out
    }

    /// Refine an isolating interval of a simple root until its width is at most `2^-bits`.
    pub fn refine_root(&self, iv: &DyadicInterval, bits: u32) -> DyadicInterval {
        if iv.is_point() {
            let k = bits.max(iv.k);
            let (lo, _) = iv.at_scale(k);
            return DyadicInterval { lo: lo.clone(), hi: lo, k };
        }
        let deriv = self.derivative();
        let mut cur = iv.clone();
        let s_lo = self.sign_at_dyadic(&cur.lo, cur.k);
        loop {
            let width = &cur.hi - &cur.lo;
            if cur.k >= bits && width <= (BigInt::one() << (cur.k - bits)) {
                return cur;
            }
            if let Some(next) = self.newton_step(&deriv, &cur, s_lo, bits) {
                cur = next;
                continue;
            }
            // bisection fallback
            let (lo2, hi2, k2) = (&cur.lo << 1u32, &cur.hi << 1u32, cur.k + 1);
            let mid: BigInt = (&lo2 + &hi2) / 2;
            let sm = self.sign_at_dyadic(&mid, k2);
            cur = if sm == Ordering::Equal {
                DyadicInterval { lo: mid.clone(), hi: mid, k: k2 }
            } else if sm == s_lo {
                DyadicInterval { lo: mid, hi: hi2, k: k2 }
            } else {
                DyadicInterval { lo: lo2, hi: mid, k: k2 }
            };
            if cur.is_point() {
                return self.refine_root(&cur, bits);
            }
        }
    }

    fn newton_step(&self, deriv: &Self, cur: &DyadicInterval, s_lo: Ordering, bits: u32) -> Option<DyadicInterval> {
        // only worth it once the interval is narrow relative to the scale
        let width_bits = (&cur.hi - &cur.lo).bits() as i64;
        let prec = cur.k as i64 - width_bits; // about -log2(width)
        if prec < 16 {
            return None;
        }
        let target = ((2 * prec) as u32).min(bits + 8).max(cur.k + 1);
        let k2 = target + 4;
        let (lo, hi) = cur.at_scale(k2);
        let x0: BigInt = (&lo + &hi) / 2;
        self.degree()?;
        // f(x0) * 2^{k2 d}, f'(x0) * 2^{k2 (d-1)} -> step = f/f' in units of 2^-k2
        let fv = self.eval_dyadic_scaled(&x0, k2);
        let dv = deriv.eval_dyadic_scaled(&x0, k2);
        if dv.is_zero() {
            return None;
        }
        let step = div_round(&fv, &dv);
        let x1 = &x0 - step;
        let margin = BigInt::from(4);
        let a = &x1 - &margin;
        let b = &x1 + &margin;
        if a < lo || b > hi {
            return None;
        }
        let sa = self.sign_at_dyadic(&a, k2);
        let sb = self.sign_at_dyadic(&b, k2);
        if sa == Ordering::Equal {
            return Some(DyadicInterval { lo: a.clone(), hi: a, k: k2 });
        }
        if sb == Ordering::Equal {
            return Some(DyadicInterval { lo: b.clone(), hi: b, k: k2 });
        }
        if sa == s_lo && sb != s_lo {
            Some(DyadicInterval { lo: a, hi: b, k: k2 })
        } else {
            None
        }
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (b, a) = if b.is_negative() { (-b, -a) } else { (b.clone(), a.clone()) };
    (a * BigInt::from(2) + &b).div_floor(&(b * BigInt::from(2)))
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Sign of `a + b sqrt(q)` for integers, `q >= 0`.
pub fn sign_a_plus_b_sqrt(a: &BigInt, b: &BigInt, q: &BigInt) -> Ordering {
    let sa = a.sign_cmp();
    let sb = if q.is_zero() { Ordering::Equal } else { b.sign_cmp() };
    if sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // opposite signs: compare a^2 with b^2 q
    match (a * a).cmp(&(b * b * q)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut v = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Number of distinct roots in `(a/2^k, b/2^k]` for a Sturm sequence.
fn sturm_count(seq: &[ZPoly], a: &BigInt, b: &BigInt, k: u32) -> usize {
    let va = variations(seq.iter().map(|p| p.sign_at_dyadic(a, k)));
    let vb = variations(seq.iter().map(|p| p.sign_at_dyadic(b, k)));
    va.saturating_sub(vb)
}

/// Number of distinct real roots of a squarefree `f` in the closed interval
/// `[-c sqrt(q), c sqrt(q)]`, decided exactly.
pub fn count_roots_in_sqrt_interval(f: &ZPoly, c: &BigInt, q: &BigInt) -> usize {
    let seq = f.sturm_sequence();
    let neg_c = -c;
    let at_lo = f.sign_at_sqrt(&neg_c, q) == Ordering::Equal;
    let at_hi = f.sign_at_sqrt(c, q) == Ordering::Equal;
    if at_lo || at_hi {
        // endpoint roots are rational (q a square); remove them and recount
        let r = q.sqrt();
        debug_assert_eq!(&r * &r, *q);
        let e = c * &r;
        let mut g = f.clone();
        let mut extra = 0;
        if at_lo {
            g = g.div_exact(&ZPoly::new(vec![e.clone(), BigInt::one()]));
            extra += 1;
        }
        if at_hi {
            g = g.div_exact(&ZPoly::new(vec![-e.clone(), BigInt::one()]));
            extra += 1;
        }
        return extra + count_roots_in_sqrt_interval(&g, c, q);
    }
    let va = variations(seq.iter().map(|p| p.sign_at_sqrt(&neg_c, q)));
    let vb = variations(seq.iter().map(|p| p.sign_at_sqrt(c, q)));
    va.saturating_sub(vb)
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "x")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = ZPoly::from_i64(&[-2, 1]); // x - 2
        let b = ZPoly::from_i64(&[1, 1]); // x + 1
        let f = a.pow(3).mul(&b);
        assert_eq!(f.gcd(&f.derivative()), a.pow(2));
        let sq = f.squarefree_decomposition();
        assert_eq!(sq, vec![(b.clone(), 1), (a.clone(), 3)]);
        assert!(!f.is_squarefree());
        assert!(a.mul(&b).is_squarefree());
    }

    #[test]
    fn sign_at_sqrt_matches_float() {
        let f = ZPoly::from_i64(&[-2, -1, 1]); // x^2 - x - 2
        for (c, q) in [(2, 5), (-2, 5), (1, 3), (2, 1)] {
            let x = c as f64 * (q as f64).sqrt();
            let v = x * x - x - 2.0;
            let expected = if v.abs() < 1e-12 { Ordering::Equal } else if v > 0.0 { Ordering::Greater } else { Ordering::Less };
            assert_eq!(f.sign_at_sqrt(&big(c), &big(q)), expected, "c={c} q={q}");
        }
    }

    #[test]
    fn counts_in_weil_interval() {
        let two = big(2);
        // x - 2 with q = 5: 2 <= 2 sqrt 5
        assert_eq!(count_roots_in_sqrt_interval(&ZPoly::from_i64(&[-2, 1]), &two, &big(5)), 1);
        // x - 5 with q = 5: 5 > 4.47
        assert_eq!(count_roots_in_sqrt_interval(&ZPoly::from_i64(&[-5, 1]), &two, &big(5)), 0);
        // endpoint roots with q = 25: (x - 10)(x + 10)
        let f = ZPoly::from_i64(&[-100, 0, 1]);
        assert_eq!(count_roots_in_sqrt_interval(&f, &two, &big(25)), 2);
    }

    #[test]
    fn isolate_and_refine() {
        let f = ZPoly::from_i64(&[-2, 0, 1]); // +-sqrt 2
        let roots = f.isolate_real_roots();
        assert_eq!(roots.len(), 2);
        let r = f.refine_root(&roots[1], 200);
        assert!(r.k >= 200);
        let v = r.midpoint_f64();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
        // interval really brackets: lo^2 <= 2 * 4^k <= hi^2
        let two_scaled = big(2) << (2 * r.k as usize);
        assert!(&r.lo * &r.lo <= two_scaled && two_scaled <= &r.hi * &r.hi);
    }

    #[test]
    fn integer_roots_found_exactly() {
        let f = ZPoly::from_i64(&[0, -1, 0, 1]); // x^3 - x
        let roots = f.isolate_real_roots();
        assert_eq!(roots.len(), 3);
        let mids: Vec<f64> = roots.iter().map(|r| f.refine_root(r, 60).midpoint_f64()).collect();
        assert!((mids[0] + 1.0).abs() < 1e-12 && mids[1].abs() < 1e-12 && (mids[2] - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn isolation_counts_real_roots(roots in prop::collection::btree_set(-20i64..21, 1..6), extra in 1i64..5) {
            // product of (x - r) times an irreducible-over-R factor x^2 + extra
            let mut f = ZPoly::from_i64(&[extra, 0, 1]);
            for r in &roots {
                f = f.mul(&ZPoly::from_i64(&[-r, 1]));
            }
            let iso = f.isolate_real_roots();
            prop_assert_eq!(iso.len(), roots.len());
            for (iv, r) in iso.iter().zip(&roots) {
                let x = f.refine_root(iv, 40).midpoint_f64();
                prop_assert!((x - *r as f64).abs() < 1e-9);
            }
        }
    }
}
