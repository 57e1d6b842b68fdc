//! Explicit systems with planted relations: Honda-Tate traces in
//! `Q(i)` and `Q(sqrt -3)`, and Gauss-sum relations on Fermat curves.

use std::collections::{BTreeMap, HashMap};

use frobrel_arith::{is_prime, prime_power, Ball, CBall, FieldCtx, IntMatrix};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::weil_poly::QSymplecticPoly;

/// Squarefree part of a positive integer.
pub fn squarefree_part(mut n: u64) -> u64 {
    let mut out = 1;
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    out * n
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HondaTateSystem {
    pub p: u64,
    pub d: u64,
    pub traces: Vec<i64>,
    /// `4p - a^2` per trace.
    pub discriminants: Vec<u64>,
}

impl HondaTateSystem {
    fn new(p: u64, d: u64, mut traces: Vec<i64>) -> Self {
        traces.sort_unstable();
        let discriminants = traces.iter().map(|&a| 4 * p - (a * a) as u64).collect();
        Self { p, d, traces, discriminants }
    }

    pub fn squarefree_parts(&self) -> Vec<u64> {
        self.discriminants.iter().map(|&x| squarefree_part(x)).collect()
    }

    pub fn factors(&self) -> Result<Vec<QSymplecticPoly>> {
        assemble_factors(&self.traces, self.p)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(CoreError::InvalidInput(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `4p = a^2 + b^2`: traces `{a, b}` with common field `Q(i)`.
pub fn honda_tate_d1(p: u64) -> Result<HondaTateSystem> {
    check_prime(p)?;
    if p % 4 != 1 {
        return Err(CoreError::NotCongruent { p, d: 1 });
    }
    for x in 1..=isqrt(p) {
        let y2 = p - x * x;
        let y = isqrt(y2);
        if y * y == y2 && y >= x {
            return Ok(HondaTateSystem::new(p, 1, vec![2 * x as i64, 2 * y as i64]));
        }
    }
    unreachable!("Fermat: p = 1 mod 4 is a sum of two squares")
}

/// `4p = a^2 + 3b^2`: traces `{x, y, z}` with `z = x + y`, common field `Q(sqrt -3)`.
pub fn honda_tate_d3(p: u64) -> Result<HondaTateSystem> {
    check_prime(p)?;
    if p % 3 != 1 {
        return Err(CoreError::NotCongruent { p, d: 3 });
    }
    for a in 1..=isqrt(4 * p) {
        let r = 4 * p - a * a;
        if r % 3 != 0 {
            continue;
        }
        let b = isqrt(r / 3);
        if b == 0 || 3 * b * b != r {
            continue;
        }
        let (a, b) = (a as i64, b as i64);
        let sys = HondaTateSystem::new(p, 3, vec![a, (a + 3 * b) / 2, (a - 3 * b).abs() / 2]);
        let t = &sys.traces;
        assert_eq!(t[2], t[0] + t[1], "z = x + y");
        return Ok(sys);
    }
    unreachable!("p = 1 mod 3 is represented by x^2 + 3y^2")
}

/// The factors `1 - a T + p T^2`.
pub fn assemble_factors(traces: &[i64], p: u64) -> Result<Vec<QSymplecticPoly>> {
    traces
        .iter()
        .map(|&a| {
            if (a as i128) * (a as i128) >= 4 * p as i128 {
                return Err(CoreError::WeilBoundViolated { a, q: p });
            }
            QSymplecticPoly::from_i64(&[1, -a, p as i64], p)
        })
        .collect()
}

/// `prod_j (1 - a_j T + p T^2)`.
pub fn assemble_from_traces(traces: &[i64], p: u64) -> Result<QSymplecticPoly> {
    let factors = assemble_factors(traces, p)?;
    let mut acc = QSymplecticPoly::from_i64(&[1], p)?;
    for f in &factors {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatRelationSystem {
    pub m: u64,
    pub a_count: usize,
    /// Triples up to permutation.
    pub triples: Vec<[u64; 3]>,
    /// One representative per class under permutation and inversion.
    pub b_reps: Vec<[u64; 3]>,
    /// Row 0 is `U`; row `j` holds the exponent of `g(chi^j)`.
    pub matrix: Vec<Vec<i64>>,
    pub kernel: Vec<Vec<i64>>,
}

fn sorted3(mut t: [u64; 3]) -> [u64; 3] {
    t.sort_unstable();
    t
}

/// Number of ordered triples of nontrivial exponents mod `m` summing to 0.
pub fn a_m_count(m: u64) -> usize {
    let mut n = 0;
    for a in 1..m {
        for b in 1..m {
            let c = (2 * m - a - b) % m;
            if c != 0 {
                n += 1;
            }
        }
    }
    n
}

/// Relation matrix and integer kernel for the Fermat curve of degree `m`.
pub fn fermat_relation_system(m: u64) -> Result<FermatRelationSystem> {
    if m < 3 {
        return Err(CoreError::TooSmall(m));
    }
    let mut triples = Vec::new();
    for a in 1..m {
        for b in a..m {
            let c = (2 * m - a - b) % m;
            if c >= b {
                triples.push([a, b, c]);
            }
        }
    }
    triples.sort_unstable();
    let mut b_reps: Vec<[u64; 3]> = Vec::new();
    for t in &triples {
        let inv = sorted3([m - t[0], m - t[1], m - t[2]]);
        let rep = (*t).min(inv);
        if !b_reps.contains(&rep) {
            b_reps.push(rep);
        }
    }
    b_reps.sort_unstable();
    let count = |t: &[u64; 3], j: u64| t.iter().filter(|&&x| x == j).count() as i64;
    let mut matrix = vec![vec![1i64; b_reps.len()]];
    for j in 1..m {
        matrix.push(
            b_reps
                .iter()
                .map(|t| if 2 * j == m { count(t, j) } else { count(t, j) - count(t, m - j) })
                .collect(),
        );
    }
    let kernel = IntMatrix::from_i64(&matrix)
        .integer_kernel()
        .into_iter()
        .map(|v| v.iter().map(|x| x.to_i64().expect("small kernel")).collect())
        .collect();
    Ok(FermatRelationSystem { m, a_count: a_m_count(m), triples, b_reps, matrix, kernel })
}

/// Gauss sums `g(chi^j) = sum_x chi^j(x) e(Tr x / p)` over `F_q`, where
/// `chi(gamma) = e(1/m)` for a fixed generator `gamma` of `F_q^*`.
pub struct GaussSums {
    field: FieldCtx,
    m: u64,
    bits: u32,
    gamma: u64,
    /// `Tr(gamma^k)` for `k = 0 .. q-2`.
    traces: Vec<u64>,
    cache: HashMap<u64, CBall>,
}

impl GaussSums {
    /// `generator = None` picks the field's smallest generator.
    pub fn new(m: u64, q: u64, generator: Option<u64>, bits: u32) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| CoreError::InvalidInput(format!("{q} is not a prime power")))?;
        if m == 0 || (q - 1) % m != 0 {
            return Err(CoreError::BadOrder { m, q });
        }
        let field = FieldCtx::new(p, e)?;
        let gamma = generator.unwrap_or_else(|| field.generator());
        if field.mult_order(gamma) != Some(q - 1) {
            return Err(CoreError::InvalidInput(format!("{gamma} does not generate F_{q}^*")));
        }
        let mut traces = Vec::with_capacity((q - 1) as usize);
        let mut x = 1;
        for _ in 0..q - 1 {
            traces.push(field.trace(x));
            x = field.mul(x, gamma);
        }
        Ok(Self { field, m, bits, gamma, traces, cache: HashMap::new() })
    }

    pub fn generator(&self) -> u64 {
        self.gamma
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    /// `e(s / (m p))`.
    fn unit(&mut self, s: u64) -> CBall {
        let n = self.m * self.field.characteristic();
        let bits = self.bits;
        self.cache
            .entry(s % n)
            .or_insert_with(|| {
                let w = bits + 16;
                let x = Ball::pi(w).mul_pow2(1).mul_int(&BigInt::from(s % n)).div_int(&BigInt::from(n));
                CBall::expi(&x)
            })
            .clone()
    }

    pub fn gauss_sum(&mut self, j: u64) -> CBall {
        let p = self.field.characteristic();
        let mut acc = CBall::zero(self.bits + 16);
        for k in 0..self.traces.len() {
            let s = (j % self.m) * (k as u64 % self.m) % self.m * p + self.traces[k] * self.m;
            acc = acc.add(&self.unit(s));
        }
        acc
    }
}

/// One Gauss sum, for a character of order dividing `m`.
pub fn gauss_sum(j: u64, m: u64, q: u64, generator: Option<u64>, bits: u32) -> Result<CBall> {
    Ok(GaussSums::new(m, q, generator, bits)?.gauss_sum(j))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub vector: Vec<i64>,
    /// Exact value of the product: the `chi(-1)` signs left after clearing
    /// conjugates with `g(chi) g(chi-bar) = chi(-1) q`. Always 1 for odd `m`.
    pub expected: i8,
    pub product_re: f64,
    pub product_im: f64,
    /// Certified upper bound on `|product - expected|`.
    pub abs_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermatReport {
    pub m: u64,
    pub q: u64,
    pub bits: u32,
    pub generator: u64,
    pub vacuous: bool,
    pub checks: Vec<KernelCheck>,
}

/// Evaluate each kernel relation on normalised inverse roots
/// `g(chi_0) g(chi_1) g(chi_2) / q^{3/2}`.
pub fn fermat_verify_kernel(m: u64, q: u64, bits: u32) -> Result<FermatReport> {
    fermat_verify_kernel_with(m, q, None, bits)
}

pub fn fermat_verify_kernel_with(m: u64, q: u64, generator: Option<u64>, bits: u32) -> Result<FermatReport> {
    if m < 3 {
        return Err(CoreError::TooSmall(m));
    }
    if q % m != 1 {
        return Err(CoreError::BadCongruence { q, m });
    }
    let sys = fermat_relation_system(m)?;
    let mut gs = GaussSums::new(m, q, generator, bits)?;
    let w = bits + 16;
    let mut sums: BTreeMap<u64, CBall> = BTreeMap::new();
    for t in &sys.b_reps {
        for &j in t {
            if !sums.contains_key(&j) {
                let g = gs.gauss_sum(j);
                sums.insert(j, g);
            }
        }
    }
    let qb = Ball::exact_int(q, w);
    let q32 = qb.mul(&qb.sqrt().expect("q > 0"));
    let roots: Vec<CBall> = sys
        .b_reps
        .iter()
        .map(|t| sums[&t[0]].mul(&sums[&t[1]]).mul(&sums[&t[2]]).scale(&q32.recip().expect("q > 0")))
        .collect();
    // chi^j(-1) = (-1)^{j (q-1)/m}
    let odd_chi = ((q - 1) / m) % 2 == 1;
    let col_sign: Vec<bool> = sys
        .b_reps
        .iter()
        .map(|t| odd_chi && t.iter().filter(|&&j| 2 * j > m).map(|&j| m - j).sum::<u64>() % 2 == 1)
        .collect();
    let mut checks = Vec::new();
    for v in &sys.kernel {
        let neg = v.iter().zip(&col_sign).filter(|(e, &s)| s && *e % 2 != 0).count() % 2 == 1;
        let expected: i8 = if neg { -1 } else { 1 };
        let mut acc = CBall::one(w);
        for (r, &e) in roots.iter().zip(v) {
            let f = if e >= 0 { r.pow(e as u32) } else { r.recip().expect("nonzero root").pow((-e) as u32) };
            acc = acc.mul(&f);
        }
        let (re, im) = acc.to_f64();
        let diff = acc.sub(&CBall::real(Ball::exact_int(expected, w)));
        let (dr, di) = diff.to_f64();
        let abs_error = dr.hypot(di) + diff.radius_f64() * 2.0;
        checks.push(KernelCheck { vector: v.clone(), expected, product_re: re, product_im: im, abs_error });
    }
    Ok(FermatReport { m, q, bits, generator: gs.generator(), vacuous: sys.kernel.is_empty(), checks })
}
