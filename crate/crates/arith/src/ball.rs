//! Fixed-point ball arithmetic.
//!
//! A [`Ball`] is `[mid - rad, mid + rad] * 2^-prec` with integer `mid`, `rad`.
//! Every operation returns a ball containing all results of applying the
//! exact operation to members of the inputs. Operands must share `prec`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn shr_round(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (s - 1);
    (x + half) >> s
}

fn shr_ceil(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let m = (BigInt::one() << s) - 1;
    (x + m) >> s
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (a, b) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    (a * BigInt::from(2) + &b).div_floor(&(b * BigInt::from(2)))
}

impl Ball {
    pub fn exact_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Self { mid: v.into() << prec, rad: BigInt::zero(), prec }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact_int(0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::exact_int(1, prec)
    }

    /// `num / den` rounded, radius one ulp (zero when exact).
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        let scaled = num << prec;
        let (q, r) = scaled.div_rem(den);
        if r.is_zero() {
            return Self { mid: q, rad: BigInt::zero(), prec };
        }
        Self { mid: round_div(&scaled, den), rad: BigInt::one(), prec }
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        Self::from_ratio(x.numer(), x.denom(), prec)
    }

    /// Ball covering the dyadic interval `[lo / 2^k, hi / 2^k]`.
    pub fn from_dyadic_interval(lo: &BigInt, hi: &BigInt, k: u32, prec: u32) -> Self {
        if k <= prec {
            let s = prec - k;
            let (lo, hi) = (lo << s, hi << s);
            let sum = &lo + &hi;
            let mid = sum.div_floor(&BigInt::from(2));
            let rad = (&hi - &mid).max(&mid - &lo);
            return Self { mid, rad, prec };
        }
        let s = k - prec;
        let sum = lo + hi;
        let mid = shr_round(&sum, s + 1);
        let half_width = shr_ceil(&(hi - lo), s + 1);
        Self { mid, rad: half_width + 2, prec }
    }

    pub fn from_f64_exact(x: f64, prec: u32) -> Self {
        assert!(x.is_finite());
        let r = BigRational::from_float(x).expect("finite");
        Self::from_rational(&r, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_raw(&self) -> &BigInt {
        &self.rad
    }

    /// Re-express at another precision (rounding outward when coarsening).
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = prec - self.prec;
                Self { mid: &self.mid << s, rad: &self.rad << s, prec }
            }
            Ordering::Less => {
                let s = self.prec - prec;
                let mid = shr_round(&self.mid, s);
                let rad = shr_ceil(&self.rad, s) + 1;
                Self { mid, rad, prec }
            }
        }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.prec, o.prec, "ball precision mismatch");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Self { mid: &self.mid + &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Self { mid: &self.mid - &o.mid, rad: &self.rad + &o.rad, prec: self.prec }
    }

    pub fn neg(&self) -> Self {
        Self { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let p = self.prec;
        let prod = &self.mid * &o.mid;
        let mid = shr_round(&prod, p);
        let err = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let rounding = if prod == (&mid << p) { BigInt::zero() } else { BigInt::one() };
        let rad = shr_ceil(&err, p) + rounding;
        Self { mid, rad, prec: p }
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self { mid: &self.mid * k, rad: &self.rad * k.abs(), prec: self.prec }
    }

    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero());
        let mid = round_div(&self.mid, k);
        let rad = ceil_div(&self.rad, &k.abs()) + 1;
        Self { mid, rad, prec: self.prec }
    }

    /// Multiply by `2^e` (exact for `e >= 0`).
    pub fn mul_pow2(&self, e: i32) -> Self {
        if e >= 0 {
            return Self { mid: &self.mid << e as u32, rad: &self.rad << e as u32, prec: self.prec };
        }
        let s = (-e) as u32;
        Self { mid: shr_round(&self.mid, s), rad: shr_ceil(&self.rad, s) + 1, prec: self.prec }
    }

    /// `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        self.check(o);
        let p = self.prec;
        let m2a = o.mid.abs();
        if m2a <= o.rad {
            return None;
        }
        let mid = round_div(&(&self.mid << p), &o.mid);
        let num = (self.mid.abs() * &o.rad + &m2a * &self.rad) << p;
        let den = &m2a * (&m2a - &o.rad);
        let rad = ceil_div(&num, &den) + 1;
        Some(Self { mid, rad, prec: p })
    }

    pub fn recip(&self) -> Option<Self> {
        Self::one(self.prec).div(self)
    }

    /// Square root; `None` if the ball is entirely negative.
    pub fn sqrt(&self) -> Option<Self> {
        let p = self.prec;
        let lo = &self.mid - &self.rad;
        let hi = &self.mid + &self.rad;
        if hi.is_negative() {
            return None;
        }
        if !lo.is_positive() {
            // [0, sqrt(hi)]
            let top = (hi << p).sqrt() + 1;
            let mid = &top / 2;
            let rad = &top - &mid + 1;
            return Some(Self { mid, rad, prec: p });
        }
        let mid = (&self.mid << p).sqrt();
        let low_root = (&lo << p).sqrt().max(BigInt::one());
        let rad = ceil_div(&(&self.rad << p), &low_root) + 1;
        Some(Self { mid, rad, prec: p })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        -&self.mid > self.rad
    }

    /// Upper bound on `|x|` in ulps.
    pub fn abs_upper_ulps(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    /// Lower bound on `|x|` in ulps (zero if the ball contains zero).
    pub fn abs_lower_ulps(&self) -> BigInt {
        (self.mid.abs() - &self.rad).max(BigInt::zero())
    }

    /// `log2` of the radius in absolute terms (`-inf` for exact balls).
    pub fn rad_log2(&self) -> f64 {
        if self.rad.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.rad.bits() as f64 - self.prec as f64
    }

    /// Whether the radius is at most `2^-bits`.
    pub fn rad_below_pow2(&self, bits: u32) -> bool {
        if bits >= self.prec {
            return self.rad.is_zero() && bits == self.prec || self.rad.is_zero();
        }
        self.rad <= (BigInt::one() << (self.prec - bits))
    }

    pub fn to_f64(&self) -> f64 {
        bigint_scaled_f64(&self.mid, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        bigint_scaled_f64(&self.rad, self.prec)
    }

    /// Nearest integer to the midpoint.
    pub fn round_to_int(&self) -> BigInt {
        shr_round(&self.mid, self.prec)
    }

    /// The unique integer in the ball, if the ball is narrower than one and contains one.
    pub fn unique_integer(&self) -> Option<BigInt> {
        let n = self.round_to_int();
        let diff = (&self.mid - (&n << self.prec)).abs();
        let one = BigInt::one() << self.prec;
        if diff <= self.rad && (&self.rad * 2) < one {
            Some(n)
        } else {
            None
        }
    }

    /// `pi` to `prec` bits via Machin's formula.
    pub fn pi(prec: u32) -> Self {
        let guard = 32;
        let w = prec + guard;
        let (a, ea) = atan_inv_fixed(5, w);
        let (b, eb) = atan_inv_fixed(239, w);
        let mid = a * 16 - b * 4;
        let rad = ea * 16 + eb * 4;
        Self { mid, rad, prec: w }.with_prec(prec)
    }

    /// Arctangent (any real argument).
    pub fn atan(&self) -> Self {
        let p = self.prec;
        let guard = 24 + 2 * (p as f64).sqrt() as u32;
        let w = p + guard;
        let x = self.with_prec(w);
        let one = Self::one(w);
        // |x| > 1: atan x = sign(x) pi/2 - atan(1/x)
        if x.abs_lower_ulps() > *one.mid_raw() {
            let inv = x.recip().expect("nonzero");
            let half_pi = Self::pi(w).mul_pow2(-1);
            let t = inv.atan_small();
            let r = if x.is_positive() { half_pi.sub(&t) } else { half_pi.neg().sub(&t) };
            return r.with_prec(p);
        }
        x.atan_small().with_prec(p)
    }

    // |x| <= ~1: halve the angle until tiny, then the Taylor series.
    fn atan_small(&self) -> Self {
        let w = self.prec;
        let one = Self::one(w);
        let halvings = ((w as f64).sqrt() / 2.0) as u32 + 2;
        let mut x = self.clone();
        for _ in 0..halvings {
            let s = one.add(&x.sqr()).sqrt().expect("positive");
            x = x.div(&one.add(&s)).expect("positive denominator");
        }
        let x2 = x.sqr();
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut k = 1u64;
        let tiny = BigInt::from(16);
        loop {
            term = term.mul(&x2).neg();
            let t = term.div_int(&BigInt::from(2 * k + 1));
            sum = sum.add(&t);
            k += 1;
            let mag = t.abs_upper_ulps();
            if mag <= tiny {
                // alternating series with shrinking terms: tail bounded by the next term
                sum.rad += mag;
                break;
            }
        }
        sum.mul_pow2(halvings as i32)
    }

    /// `(cos x, sin x)`.
    pub fn cos_sin(&self) -> (Self, Self) {
        let p = self.prec;
        let halvings = ((p as f64).sqrt() / 2.0) as u32 + 4;
        let w = p + 2 * halvings + 32;
        let z = self.with_prec(w).mul_pow2(-(halvings as i32));
        assert!(z.abs_upper_ulps() < (BigInt::one() << (w - 1)), "cos_sin argument too large");
        // Taylor series for cos z, sin z with |z| < 2^-halvings * |x|
        let mut c = Self::one(w);
        let mut s = z.clone();
        let mut term = z.clone();
        let mut n = 1u64;
        let tiny = BigInt::from(16);
        loop {
            term = term.mul(&z).div_int(&BigInt::from(n + 1));
            n += 1;
            let signed = if (n / 2) % 2 == 1 { term.neg() } else { term.clone() };
            if n % 2 == 0 {
                c = c.add(&signed);
            } else {
                s = s.add(&signed);
            }
            let mag = term.abs_upper_ulps();
            if mag <= tiny && n > 4 {
                // |z| < 1/2, so the remaining terms sum to less than 2 |term|
                c.rad += &mag * 2;
                s.rad += &mag * 2;
                break;
            }
        }
        for _ in 0..halvings {
            let c2 = c.sqr().sub(&s.sqr());
            let s2 = c.mul(&s).mul_int(&BigInt::from(2));
            c = c2;
            s = s2;
        }
        (c.with_prec(p), s.with_prec(p))
    }

    /// Whether `self < o` is certain.
    pub fn certainly_lt(&self, o: &Self) -> bool {
        o.sub(self).is_positive()
    }
}

/// `atan(1/k)` in fixed point with `w` fractional bits: (value, error bound) in ulps.
fn atan_inv_fixed(k: u64, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << w;
    let k2 = BigInt::from(k * k);
    let mut pow = &one / BigInt::from(k); // 1/k^{2n+1}
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !pow.is_zero() {
        let t = &pow / BigInt::from(2 * n + 1);
        if n % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        pow = &pow / &k2;
        n += 1;
    }
    // truncation per term plus the neglected tail
    (sum, BigInt::from(2 * n + 2))
}

pub(crate) fn bigint_scaled_f64(x: &BigInt, prec: u32) -> f64 {
    let bits = x.bits() as i64;
    let shift = (bits - 62).max(0);
    let top = (x >> shift as usize).to_i64().unwrap_or(0) as f64;
    let e = shift - prec as i64;
    top * 2f64.powi(e.clamp(-1100, 1100) as i32)
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e} +/- {:.3e}", self.to_f64(), self.rad_f64())
    }
}

/// Complex ball as a pair of real balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> Self {
        assert_eq!(re.prec, im.prec);
        Self { re, im }
    }

    pub fn real(re: Ball) -> Self {
        let p = re.prec;
        Self { re, im: Ball::zero(p) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::real(Ball::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::real(Ball::one(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Self { re, im }
    }

    pub fn sqr(&self) -> Self {
        let re = self.re.sqr().sub(&self.im.sqr());
        let im = self.re.mul(&self.im).mul_int(&BigInt::from(2));
        Self { re, im }
    }

    pub fn scale(&self, s: &Ball) -> Self {
        Self { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self { re: self.re.mul_int(k), im: self.im.mul_int(k) }
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self) -> Ball {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        let n = o.norm_sqr();
        let num = self.mul(&o.conj());
        Some(Self { re: num.re.div(&n)?, im: num.im.div(&n)? })
    }

    pub fn recip(&self) -> Option<Self> {
        Self::one(self.prec()).div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// `e^{i x}` for a real ball `x`.
    pub fn expi(x: &Ball) -> Self {
        let (c, s) = x.cos_sin();
        Self { re: c, im: s }
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Upper bound of `|z|^2` in units of `2^{-2 prec}`.
    pub fn abs_sqr_upper_ulps2(&self) -> BigInt {
        let a = self.re.abs_upper_ulps();
        let b = self.im.abs_upper_ulps();
        &a * &a + &b * &b
    }

    /// Lower bound of `|z|^2` in units of `2^{-2 prec}`.
    pub fn abs_sqr_lower_ulps2(&self) -> BigInt {
        let a = self.re.abs_lower_ulps();
        let b = self.im.abs_lower_ulps();
        &a * &a + &b * &b
    }

    /// Certified `|z| < 2^-e`-style test: is `|z|^2 * scale^2 < 1` for an integer scale.
    pub fn abs_times_below_one(&self, scale: &BigInt) -> bool {
        let lhs = self.abs_sqr_upper_ulps2() * scale * scale;
        let rhs = BigInt::one() << (2 * self.prec());
        lhs < rhs
    }

    /// Certified test of `|z|^2 * s2 < 1` for a non-negative integer `s2`.
    pub fn abs_sqr_times_below_one(&self, s2: &BigInt) -> bool {
        let lhs = self.abs_sqr_upper_ulps2() * s2;
        let rhs = BigInt::one() << (2 * self.prec());
        lhs < rhs
    }

    /// Largest component radius as an `f64` (absolute units).
    pub fn radius_f64(&self) -> f64 {
        self.re.rad_f64().max(self.im.rad_f64())
    }

    pub fn radius_log2(&self) -> f64 {
        self.re.rad_log2().max(self.im.rad_log2())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Argument in `(-pi, pi]`, or `None` when the ball straddles the origin
    /// or the negative real axis ambiguously.
    pub fn arg(&self) -> Option<Ball> {
        let w = self.prec();
        let pi = Ball::pi(w);
        if self.im.is_positive() || self.im.is_negative() {
            // pi/2 * sign(im) - atan(re / im)
            let t = self.re.div(&self.im)?.atan();
            let half_pi = pi.mul_pow2(-1);
            return Some(if self.im.is_positive() { half_pi.sub(&t) } else { half_pi.neg().sub(&t) });
        }
        if self.re.is_positive() {
            return Some(self.im.div(&self.re)?.atan());
        }
        None
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, i) = self.to_f64();
        write!(f, "({r:.17e} {}{:.17e}i) +/- {:.3e}", if i < 0.0 { "-" } else { "+" }, i.abs(), self.radius_f64())
    }
}

impl Ball {
    pub fn sign(&self) -> Option<Sign> {
        if self.is_positive() {
            Some(Sign::Plus)
        } else if self.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn arithmetic_contains_truth() {
        let p = 100;
        let third = Ball::from_ratio(&BigInt::from(1), &BigInt::from(3), p);
        let x = third.mul(&Ball::exact_int(3, p));
        assert!(x.sub(&Ball::one(p)).contains_zero());
        let y = Ball::one(p).div(&third).unwrap();
        assert!(y.sub(&Ball::exact_int(3, p)).contains_zero());
        let s = Ball::exact_int(2, p).sqrt().unwrap();
        assert!(s.sqr().sub(&Ball::exact_int(2, p)).contains_zero());
        assert!(close(s.to_f64(), 2f64.sqrt(), 1e-15));
        assert!(s.rad_log2() < -90.0);
    }

    #[test]
    fn pi_digits() {
        let pi = Ball::pi(300);
        assert!(close(pi.to_f64(), std::f64::consts::PI, 1e-16));
        assert!(pi.rad_log2() < -290.0);
        // compare against a longer evaluation
        let pi2 = Ball::pi(600).with_prec(300);
        assert!(pi.sub(&pi2).contains_zero());
    }

    #[test]
    fn trig_identities() {
        let p = 256;
        let x = Ball::from_ratio(&BigInt::from(7), &BigInt::from(5), p);
        let (c, s) = x.cos_sin();
        assert!(close(c.to_f64(), 1.4f64.cos(), 1e-15));
        assert!(close(s.to_f64(), 1.4f64.sin(), 1e-15));
        assert!(c.sqr().add(&s.sqr()).sub(&Ball::one(p)).contains_zero());
        assert!(c.rad_log2() < -200.0);
        // cos(pi) = -1
        let (cp, sp) = Ball::pi(p).cos_sin();
        assert!(cp.add(&Ball::one(p)).contains_zero());
        assert!(sp.contains_zero());
    }

    #[test]
    fn atan_values() {
        let p = 256;
        let one = Ball::one(p);
        let a = one.atan();
        assert!(a.mul_int(&BigInt::from(4)).sub(&Ball::pi(p)).contains_zero());
        assert!(a.rad_log2() < -200.0);
        let b = Ball::exact_int(3, p).atan();
        assert!(close(b.to_f64(), 3f64.atan(), 1e-15));
        let c = Ball::exact_int(-2, p).atan();
        assert!(close(c.to_f64(), (-2f64).atan(), 1e-15));
    }

    #[test]
    fn complex_arg_and_powers() {
        let p = 200;
        let z = CBall::new(Ball::exact_int(1, p), Ball::exact_int(2, p));
        let arg = z.arg().unwrap();
        assert!(close(arg.to_f64(), 2f64.atan2(1.0), 1e-15));
        let w = z.mul(&z.conj());
        assert!(w.re.sub(&Ball::exact_int(5, p)).contains_zero() && w.im.contains_zero());
        let z5 = z.pow(5); // (1+2i)^5 = 41 - 38i
        assert!(z5.re.sub(&Ball::exact_int(41, p)).contains_zero());
        assert!(z5.im.sub(&Ball::exact_int(-38, p)).contains_zero());
        let neg = CBall::new(Ball::exact_int(-1, p), Ball::exact_int(-1, p));
        assert!(close(neg.arg().unwrap().to_f64(), (-1f64).atan2(-1.0), 1e-15));
    }

    #[test]
    fn dyadic_interval_conversion() {
        let b = Ball::from_dyadic_interval(&BigInt::from(5), &BigInt::from(7), 3, 10);
        assert!(close(b.to_f64(), 0.75, 1e-12));
        let c = Ball::from_dyadic_interval(&BigInt::from(5), &BigInt::from(7), 40, 10);
        assert!(c.sub(&Ball::from_ratio(&BigInt::from(6), &(BigInt::one() << 40), 10)).contains_zero());
    }

    #[test]
    fn unique_integer_detection() {
        let p = 64;
        let x = Ball::from_ratio(&BigInt::from(21), &BigInt::from(3), p);
        assert_eq!(x.unique_integer(), Some(BigInt::from(7)));
        let y = Ball::from_ratio(&BigInt::from(22), &BigInt::from(3), p);
        assert_eq!(y.unique_integer(), None);
    }
}
