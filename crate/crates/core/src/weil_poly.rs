//! q-symplectic polynomials: functional equation, exact RH check, certified roots.
//!
//! A q-symplectic polynomial of degree `2g` factors as `prod (1 - x_j T + q T^2)`;
//! the `x_j` are the roots of the real Weil transform `h`, a monic integer
//! polynomial of degree `g`. All exact questions are answered on `h`.

use std::cmp::Ordering;
use std::fmt;

use frobrel_arith::{Ball, CBall, ZPoly};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CoreError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSymplecticPoly {
    coeffs: Vec<BigInt>,
    q: u64,
}

/// Whether `c_{2g-i} = q^{g-i} c_i` for all `i`. `c` must start with 1.
pub fn is_q_symplectic(c: &[BigInt], q: u64) -> Result<bool> {
    if c.is_empty() || (c.len() - 1) % 2 == 1 {
        return Err(CoreError::OddDegree);
    }
    if !c[0].is_one() {
        return Ok(false);
    }
    let g = (c.len() - 1) / 2;
    let q = BigInt::from(q);
    let mut qpow = BigInt::one();
    for i in (0..=g).rev() {
        // qpow = q^{g-i}
        if c[2 * g - i] != &qpow * &c[i] {
            return Ok(false);
        }
        qpow *= &q;
    }
    Ok(true)
}

impl QSymplecticPoly {
    pub fn new(coeffs: Vec<BigInt>, q: u64) -> Result<Self> {
        if q < 2 {
            return Err(CoreError::InvalidInput(format!("q = {q}")));
        }
        if !is_q_symplectic(&coeffs, q)? {
            return Err(CoreError::NotSymplectic);
        }
        Ok(Self { coeffs, q })
    }

    pub fn from_i64(c: &[i64], q: u64) -> Result<Self> {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect(), q)
    }

    /// Build from the real Weil transform: `T^g h(qT + 1/T)`.
    pub fn from_real_weil(h: &ZPoly, q: u64) -> Result<Self> {
        let g = h.degree().ok_or(CoreError::NotSymplectic)?;
        if !h.lead().is_one() {
            return Err(CoreError::NotSymplectic);
        }
        let base = ZPoly::new(vec![BigInt::one(), BigInt::zero(), BigInt::from(q)]);
        let mut acc = ZPoly::zero();
        let mut pw = ZPoly::one();
        for i in 0..=g {
            let shift = g - i;
            let mut c = vec![BigInt::zero(); shift];
            c.extend(pw.coeffs().iter().map(|x| x * h.coeff(i)));
            acc = acc.add(&ZPoly::new(c));
            pw = pw.mul(&base);
        }
        let mut coeffs = acc.coeffs().to_vec();
        coeffs.resize(2 * g + 1, BigInt::zero());
        Self::new(coeffs, q)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeffs_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn g(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// `c_1`; the inverse roots sum to `-c_1`.
    pub fn c1(&self) -> BigInt {
        self.coeffs.get(1).cloned().unwrap_or_default()
    }

    pub fn to_zpoly(&self) -> ZPoly {
        ZPoly::new(self.coeffs.clone())
    }

    /// `T^{2g} P(1/T) = prod (T - alpha)`, whose roots are the inverse roots.
    pub fn reversed(&self) -> ZPoly {
        ZPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.q != o.q {
            return Err(CoreError::MismatchedField);
        }
        let prod = self.to_zpoly().mul(&o.to_zpoly());
        let mut c = prod.coeffs().to_vec();
        c.resize(self.coeffs.len() + o.coeffs.len() - 1, BigInt::zero());
        Self::new(c, self.q)
    }

    pub fn is_squarefree(&self) -> bool {
        self.to_zpoly().is_squarefree()
    }

    /// Squarefree pieces `(factor, multiplicity)`, each again q-symplectic.
    pub fn deflate(&self) -> Vec<(QSymplecticPoly, usize)> {
        let h = real_weil_transform(self);
        if self.g() == 0 {
            return vec![(self.clone(), 1)];
        }
        h.squarefree_decomposition()
            .into_iter()
            .map(|(f, m)| {
                let f = f.normalised();
                (Self::from_real_weil(&f, self.q).expect("factor of h is monic"), m)
            })
            .collect()
    }
}

impl fmt::Display for QSymplecticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] (q = {})", parts.join(", "), self.q)
    }
}

/// `h(x) = prod (x - x_j)` where `P(T) = prod (1 - x_j T + q T^2)`.
pub fn real_weil_transform(p: &QSymplecticPoly) -> ZPoly {
    let g = p.g();
    let c = &p.coeffs;
    // P(T)/T^g = c_g + sum_i c_{g-i} (q^i T^i + T^-i) and w_i = q^i T^i + T^-i
    // satisfies w_{i+1} = u w_i - q w_{i-1} with u = qT + 1/T, w_0 = 2, w_1 = u.
    let u = ZPoly::from_i64(&[0, 1]);
    let qz = BigInt::from(p.q);
    let mut w_prev = ZPoly::from_i64(&[2]);
    let mut w = u.clone();
    let mut h = ZPoly::new(vec![c[g].clone()]);
    for i in 1..=g {
        h = h.add(&w.scale(&c[g - i]));
        let next = u.mul(&w).sub(&w_prev.scale(&qz));
        w_prev = w;
        w = next;
    }
    h
}

/// Real Weil transform of a raw coefficient vector.
pub fn real_weil_transform_coeffs(c: &[BigInt], q: u64) -> Result<ZPoly> {
    Ok(real_weil_transform(&QSymplecticPoly::new(c.to_vec(), q)?))
}

/// Exact Riemann-hypothesis check: every root of `h` is real and in `[-2 sqrt q, 2 sqrt q]`.
pub fn rh_check(p: &QSymplecticPoly) -> bool {
    if p.g() == 0 {
        return true;
    }
    let h = real_weil_transform(p);
    let q = BigInt::from(p.q);
    let two = BigInt::from(2);
    h.squarefree_decomposition().iter().all(|(f, _)| {
        let d = f.degree().unwrap_or(0);
        d == 0 || frobrel_arith::zpoly::count_roots_in_sqrt_interval(f, &two, &q) == d
    })
}

/// Certified inverse roots with the pairing `alpha <-> q/alpha` and angles.
///
/// `roots[2j]` is the representative with non-negative imaginary part and
/// `roots[2j + 1]` its partner; pairs are sorted by increasing real part.
#[derive(Clone, Debug)]
pub struct RootSystem {
    poly: QSymplecticPoly,
    prec: u32,
    traces: Vec<Ball>,
    roots: Vec<CBall>,
    pairing: Vec<usize>,
    angles: Vec<Ball>,
    multiplicity: Vec<usize>,
}

impl RootSystem {
    pub fn poly(&self) -> &QSymplecticPoly {
        &self.poly
    }

    pub fn q(&self) -> u64 {
        self.poly.q
    }

    /// Number of pairs.
    pub fn g(&self) -> usize {
        self.traces.len()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn roots(&self) -> &[CBall] {
        &self.roots
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// `alpha_j + q/alpha_j` for each pair.
    pub fn traces(&self) -> &[Ball] {
        &self.traces
    }

    /// `theta_j = arg(alpha_j) / 2 pi` in `[0, 1/2]`, one per pair.
    pub fn angles(&self) -> &[Ball] {
        &self.angles
    }

    pub fn angles_f64(&self) -> Vec<f64> {
        self.angles.iter().map(|a| a.to_f64()).collect()
    }

    /// Multiplicity of each pair in the original polynomial (1 unless deflated).
    pub fn multiplicity(&self) -> &[usize] {
        &self.multiplicity
    }

    /// Largest radius over roots and angles, as `log2`.
    pub fn radius_log2(&self) -> f64 {
        let r = self.roots.iter().map(|z| z.radius_log2()).fold(f64::NEG_INFINITY, f64::max);
        self.angles.iter().map(|a| a.rad_log2()).fold(r, f64::max)
    }
}

const GUARD: u32 = 32;
const MAX_ROOT_BITS: u32 = 1 << 22;

/// Certified roots of a q-symplectic polynomial whose real Weil transform is squarefree.
pub fn certified_roots(p: &QSymplecticPoly, bits: u32) -> Result<RootSystem> {
    if bits < 64 {
        return Err(CoreError::InvalidInput(format!("precision {bits} below 64 bits")));
    }
    let h = real_weil_transform(p);
    if p.g() > 0 && !h.is_squarefree() {
        return Err(CoreError::PrecisionExhausted(
            "repeated roots: deflate repeated factors before certifying".into(),
        ));
    }
    if !rh_check(p) {
        return Err(CoreError::InvalidInput("roots are not on the circle |z| = sqrt q".into()));
    }
    let mult = vec![1; p.g()];
    roots_of_squarefree(p, &h, bits, mult)
}

/// Certified roots of the radical, with multiplicities re-attached per pair.
pub fn certified_roots_with_multiplicity(p: &QSymplecticPoly, bits: u32) -> Result<RootSystem> {
    if !rh_check(p) {
        return Err(CoreError::InvalidInput("roots are not on the circle |z| = sqrt q".into()));
    }
    let parts = p.deflate();
    let mut systems = Vec::new();
    for (f, m) in &parts {
        let mut rs = certified_roots(f, bits)?;
        rs.multiplicity = vec![*m; rs.g()];
        systems.push(rs);
    }
    // merge, keeping pairs sorted by trace
    let mut pairs: Vec<(Ball, CBall, CBall, Ball, usize)> = Vec::new();
    for rs in systems {
        for j in 0..rs.g() {
            pairs.push((
                rs.traces[j].clone(),
                rs.roots[2 * j].clone(),
                rs.roots[2 * j + 1].clone(),
                rs.angles[j].clone(),
                rs.multiplicity[j],
            ));
        }
    }
    pairs.sort_by(|a, b| a.0.to_f64().partial_cmp(&b.0.to_f64()).unwrap_or(Ordering::Equal));
    let radical = parts
        .iter()
        .map(|(f, _)| f.clone())
        .reduce(|a, b| a.mul(&b).expect("same q"))
        .unwrap_or_else(|| p.clone());
    let mut rs = RootSystem {
        poly: radical,
        prec: bits,
        traces: vec![],
        roots: vec![],
        pairing: vec![],
        angles: vec![],
        multiplicity: vec![],
    };
    for (j, (t, a, b, th, m)) in pairs.into_iter().enumerate() {
        rs.traces.push(t);
        rs.roots.push(a);
        rs.roots.push(b);
        rs.pairing.push(2 * j + 1);
        rs.pairing.push(2 * j);
        rs.angles.push(th);
        rs.multiplicity.push(m);
    }
    Ok(rs)
}

fn roots_of_squarefree(p: &QSymplecticPoly, h: &ZPoly, bits: u32, multiplicity: Vec<usize>) -> Result<RootSystem> {
    let q = BigInt::from(p.q);
    let mut prec = bits + GUARD;
    loop {
        match try_roots(p, h, &q, prec) {
            Some((traces, roots, angles)) => {
                let g = traces.len();
                let pairing = (0..2 * g).map(|i| i ^ 1).collect();
                return Ok(RootSystem { poly: p.clone(), prec: bits, traces, roots, pairing, angles, multiplicity });
            }
            None if prec < MAX_ROOT_BITS => prec *= 2,
            None => {
                return Err(CoreError::PrecisionExhausted(format!("roots not separated at {prec} bits")));
            }
        }
    }
}

type RootData = (Vec<Ball>, Vec<CBall>, Vec<Ball>);

fn try_roots(p: &QSymplecticPoly, h: &ZPoly, q: &BigInt, prec: u32) -> Option<RootData> {
    let w = prec + GUARD;
    let two = BigInt::from(2);
    let four_q = Ball::exact_int(q * 4, w);
    let two_pi = Ball::pi(w).mul_pow2(1);
    let sqrt_q = q.sqrt();
    let q_square = &sqrt_q * &sqrt_q == *q;

    let mut xs: Vec<(Ball, Option<i8>)> = Vec::new();
    let mut rest = h.clone();
    if q_square {
        // roots at +-2 sqrt q are exact integers
        for s in [-1i8, 1] {
            let c = if s < 0 { -&two } else { two.clone() };
            if rest.degree().unwrap_or(0) > 0 && rest.sign_at_sqrt(&c, q) == Ordering::Equal {
                let e = &c * &sqrt_q;
                rest = rest.div_exact(&ZPoly::new(vec![-e.clone(), BigInt::one()]));
                xs.push((Ball::exact_int(e, w), Some(s)));
            }
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        for iv in rest.isolate_real_roots() {
            let r = rest.refine_root(&iv, w + 8);
            xs.push((Ball::from_dyadic_interval(&r.lo, &r.hi, r.k, w), None));
        }
    }
    xs.sort_by(|a, b| a.0.to_f64().partial_cmp(&b.0.to_f64()).unwrap_or(Ordering::Equal));
    debug_assert_eq!(xs.len(), p.g());

    let mut traces = Vec::new();
    let mut roots = Vec::new();
    let mut angles = Vec::new();
    for (x, endpoint) in xs {
        let half_x = x.mul_pow2(-1);
        let (alpha, theta) = match endpoint {
            Some(s) => {
                let theta = if s > 0 { Ball::zero(w) } else { Ball::one(w).mul_pow2(-1) };
                (CBall::real(half_x), theta)
            }
            None => {
                let disc = four_q.sub(&x.sqr());
                if !disc.is_positive() {
                    return None;
                }
                let y = disc.sqrt()?.mul_pow2(-1);
                let alpha = CBall::new(half_x, y);
                let theta = alpha.arg()?.div(&two_pi)?;
                (alpha, theta)
            }
        };
        traces.push(x.with_prec(prec));
        roots.push(alpha.with_prec(prec));
        roots.push(alpha.conj().with_prec(prec));
        angles.push(theta.with_prec(prec));
    }
    Some((traces, roots, angles))
}

/// Absolute trace `sum alpha` of a root system as a ball (should equal `-c_1`).
pub fn root_sum(rs: &RootSystem) -> CBall {
    rs.roots.iter().fold(CBall::zero(rs.roots.first().map_or(64, |r| r.prec())), |acc, r| acc.add(r))
}

/// Whether the ball contains the integer `n`.
#[cfg(test)]
pub(crate) fn ball_contains_int(b: &Ball, n: &BigInt) -> bool {
    b.sub(&Ball::exact_int(n.clone(), b.prec())).contains_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn symplectic_examples() {
        assert!(is_q_symplectic(&big(&[1, -2, 5]), 5).unwrap());
        assert!(!is_q_symplectic(&big(&[1, 0, 3]), 5).unwrap());
        assert!(is_q_symplectic(&big(&[1, -1, 8, -5, 25]), 5).unwrap());
        assert_eq!(is_q_symplectic(&big(&[1, 2]), 5), Err(CoreError::OddDegree));
    }

    #[test]
    fn real_weil_examples() {
        let p = QSymplecticPoly::from_i64(&[1, -2, 5], 5).unwrap();
        assert_eq!(real_weil_transform(&p), ZPoly::from_i64(&[-2, 1]));
        let p = QSymplecticPoly::from_i64(&[1, -1, 8, -5, 25], 5).unwrap();
        assert_eq!(real_weil_transform(&p), ZPoly::from_i64(&[-2, -1, 1]));
        assert_eq!(real_weil_transform_coeffs(&big(&[1, 0, 3]), 5), Err(CoreError::NotSymplectic));
    }

    #[test]
    fn rh_examples() {
        assert!(rh_check(&QSymplecticPoly::from_i64(&[1, -2, 5], 5).unwrap()));
        assert!(!rh_check(&QSymplecticPoly::from_i64(&[1, -5, 5], 5).unwrap()));
        // boundary: x = 2 sqrt 9 = 6 gives (1 - 3T)^2
        assert!(rh_check(&QSymplecticPoly::from_i64(&[1, -6, 9], 9).unwrap()));
        assert!(!rh_check(&QSymplecticPoly::from_i64(&[1, -7, 9], 9).unwrap()));
        // complex roots of h: x^2 + 1
        let p = QSymplecticPoly::from_real_weil(&ZPoly::from_i64(&[1, 0, 1]), 5).unwrap();
        assert!(!rh_check(&p));
    }

    #[test]
    fn roots_of_elliptic_example() {
        let p = QSymplecticPoly::from_i64(&[1, -2, 5], 5).unwrap();
        let rs = certified_roots(&p, 128).unwrap();
        let (re, im) = rs.roots()[0].to_f64();
        assert!((re - 1.0).abs() < 1e-15 && (im - 2.0).abs() < 1e-15);
        let theta = 2f64.atan2(1.0) / (2.0 * std::f64::consts::PI);
        assert!((rs.angles()[0].to_f64() - theta).abs() < 1e-15);
        assert!((rs.angles()[0].to_f64() - 0.1762082).abs() < 1e-7);
        assert!(rs.angles()[0].rad_log2() < -(128.0 - 32.0));
        let prod = rs.roots()[0].mul(&rs.roots()[1]);
        assert!(ball_contains_int(&prod.re, &BigInt::from(5)) && prod.im.contains_zero());
    }

    #[test]
    fn repeated_roots_rejected_then_deflated() {
        let p = QSymplecticPoly::from_i64(&[1, -2, 5], 5).unwrap();
        let sq = p.mul(&p).unwrap();
        assert!(matches!(certified_roots(&sq, 64), Err(CoreError::PrecisionExhausted(_))));
        let rs = certified_roots_with_multiplicity(&sq, 64).unwrap();
        assert_eq!(rs.g(), 1);
        assert_eq!(rs.multiplicity(), &[2]);
        assert_eq!(sq.deflate(), vec![(p, 2)]);
    }

    #[test]
    fn real_roots_at_the_boundary() {
        // (1 - 3T)^2 (1 + 3T)^2 over q = 9: h = (x - 6)(x + 6)
        let p = QSymplecticPoly::from_real_weil(&ZPoly::from_i64(&[-36, 0, 1]), 9).unwrap();
        let rs = certified_roots(&p, 64).unwrap();
        assert_eq!(rs.angles_f64(), vec![0.5, 0.0]);
        let (re, im) = rs.roots()[0].to_f64();
        assert_eq!((re, im), (-3.0, 0.0));
    }

    fn weil_poly_strategy() -> impl Strategy<Value = QSymplecticPoly> {
        // products of 1 - a T + q T^2 with |a| <= 2 sqrt q
        (prop::sample::select(vec![3u64, 5, 7, 9, 11, 25, 49]), prop::collection::vec(-100i64..100, 1..4)).prop_map(
            |(q, raw)| {
                let bound = (4 * q as i64) as f64;
                let mut p = QSymplecticPoly::from_i64(&[1], q).unwrap();
                for r in raw {
                    let lim = bound.sqrt().floor() as i64;
                    let a = r.rem_euclid(2 * lim + 1) - lim;
                    p = p.mul(&QSymplecticPoly::from_i64(&[1, -a, q as i64], q).unwrap()).unwrap();
                }
                p
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn expansion_round_trip(p in weil_poly_strategy()) {
            let h = real_weil_transform(&p);
            prop_assert_eq!(QSymplecticPoly::from_real_weil(&h, p.q()).unwrap(), p.clone());
            prop_assert!(rh_check(&p));
        }

        #[test]
        fn root_system_invariants(p in weil_poly_strategy()) {
            let rs = certified_roots_with_multiplicity(&p, 96).unwrap();
            let q = BigInt::from(p.q());
            for (i, z) in rs.roots().iter().enumerate() {
                let partner = &rs.roots()[rs.pairing()[i]];
                let prod = z.mul(partner);
                prop_assert!(ball_contains_int(&prod.re, &q) && prod.im.contains_zero());
                prop_assert!(ball_contains_int(&z.norm_sqr(), &q));
            }
            // sum over the radical with multiplicities equals -c_1
            let mut sum = CBall::zero(rs.roots()[0].prec());
            for (j, m) in rs.multiplicity().iter().enumerate() {
                for _ in 0..*m {
                    sum = sum.add(&rs.roots()[2 * j]).add(&rs.roots()[2 * j + 1]);
                }
            }
            prop_assert!(ball_contains_int(&sum.re, &(-p.c1())) && sum.im.contains_zero());
            for a in rs.angles() {
                let v = a.to_f64();
                prop_assert!((0.0..=0.5).contains(&v));
            }
        }
    }
}
