//! Statistics of normalised point counts: deviation sequences built from
//! root angles, the limit law `mu_g` of `Y_g = 2cos(2 pi X_1) + ... + 2cos(2 pi X_2g)`,
//! its characteristic function `J_0(2t)^{2g}`, and KS comparisons.
//!
//! Sampling uses `ChaCha20Rng::seed_from_u64(seed)` with stream `i` for the
//! `i`-th chunk of 65536 draws, so output depends only on `(g, count, seed)`.

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::io::Write;

use frobrel_arith::Ball;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::weil_poly::RootSystem;

const CHUNK: usize = 1 << 16;
const RENORM_EVERY: usize = 64;

/// Unit-normalised roots `alpha / sqrt(q)` as `(re, im)`.
fn unit_roots(rs: &RootSystem) -> Vec<(f64, f64)> {
    rs.roots()
        .iter()
        .map(|z| {
            let (a, b) = z.to_f64();
            let r = a.hypot(b);
            (a / r, b / r)
        })
        .collect()
}

/// `d_n = sum over all 2g roots of Re(u^n)`, i.e. `2 sum_j cos(2 pi n theta_j)`,
/// so that `|C(F_{q^n})| = q^n + 1 - q^{n/2} d_n`.
pub fn deviation_sequence(rs: &RootSystem, n: usize) -> Vec<f64> {
    let units = unit_roots(rs);
    let mut pows = units.clone();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        out.push(pows.iter().map(|p| p.0).sum());
        for (p, u) in pows.iter_mut().zip(&units) {
            *p = (p.0 * u.0 - p.1 * u.1, p.0 * u.1 + p.1 * u.0);
            if i % RENORM_EVERY == 0 {
                let r = p.0.hypot(p.1);
                *p = (p.0 / r, p.1 / r);
            }
        }
    }
    out
}

/// `2 sum_j (cos 2 pi n theta_{2,j} - cos 2 pi n theta_{1,j})` for `n = 1..=n`.
pub fn diff_sequence(rs1: &RootSystem, rs2: &RootSystem, n: usize) -> Result<Vec<f64>> {
    if rs1.q() != rs2.q() {
        return Err(CoreError::MismatchedField);
    }
    let a = deviation_sequence(rs1, n);
    let b = deviation_sequence(rs2, n);
    Ok(b.iter().zip(&a).map(|(y, x)| y - x).collect())
}

/// Fraction of `n <= N` with `diff_sequence(rs1, rs2)[n] < 0`.
pub fn sign_bias(rs1: &RootSystem, rs2: &RootSystem, n: usize) -> Result<f64> {
    let d = diff_sequence(rs1, rs2, n)?;
    if d.is_empty() {
        return Err(CoreError::EmptySequence);
    }
    Ok(d.iter().filter(|&&x| x < 0.0).count() as f64 / d.len() as f64)
}

/// `count` independent draws of `Y_g`.
pub fn mu_g_sample(g: usize, count: usize, seed: u64) -> Vec<f64> {
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len)
                .map(|_| (0..2 * g).map(|_| 2.0 * (TAU * rng.gen::<f64>()).cos()).sum::<f64>())
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// `(mean cos tY, mean sin tY)`.
pub fn empirical_charfn(xs: &[f64], t: f64) -> (f64, f64) {
    let n = xs.len() as f64;
    let (c, s) = xs.iter().fold((0.0, 0.0), |(c, s), &y| (c + (t * y).cos(), s + (t * y).sin()));
    (c / n, s / n)
}

fn j0_series_f64(x: f64) -> f64 {
    let y = -x * x / 4.0;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..60 {
        term *= y / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// Power series in ball arithmetic, with enough bits to absorb the cancellation.
fn j0_series_ball(x: f64) -> f64 {
    let prec = 80 + (2.0 * x.abs()) as u32;
    let xb = Ball::from_f64_exact(x, prec);
    let y = xb.sqr().mul_pow2(-2).neg();
    let mut term = Ball::one(prec);
    let mut sum = Ball::one(prec);
    let mut k = 1u64;
    loop {
        term = term.mul(&y).div_int(&BigInt::from(k * k));
        sum = sum.add(&term);
        // stop once |term| < 2^-60
        if k as f64 > x.abs() && term.abs_upper_ulps().bits() + 60 < prec as u64 {
            break;
        }
        k += 1;
    }
    sum.to_f64()
}

fn j0_asymptotic(x: f64) -> f64 {
    let x = x.abs();
    let (mut p, mut q) = (0.0, 0.0);
    let mut term = 1.0;
    let mut k = 0u32;
    loop {
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        let odd = (2 * k + 1) as f64;
        let next = term * -(odd * odd) / ((k + 1) as f64 * 8.0 * x);
        if next.abs() >= term.abs() || next.abs() < 1e-18 {
            break;
        }
        term = next;
        k += 1;
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Bessel `J_0(x)`, absolute error below `1e-12`.
pub fn bessel_j0(x: f64) -> f64 {
    let a = x.abs();
    if a <= 8.0 {
        j0_series_f64(a)
    } else if a < 30.0 {
        j0_series_ball(a)
    } else {
        j0_asymptotic(a)
    }
}

/// `phi_g(t) = E(e^{itY_g}) = J_0(2t)^{2g}`.
pub fn mu_g_charfn(g: usize, t: f64) -> f64 {
    bessel_j0(2.0 * t).powi(2 * g as i32)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(CoreError::EmptySequence);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Asymptotic two-sided p-value of the Kolmogorov distribution.
pub fn ks_pvalue(d: f64, n: usize, m: usize) -> f64 {
    let ne = (n * m) as f64 / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let s: f64 = (1..=100).map(|k| (if k % 2 == 1 { 2.0 } else { -2.0 }) * (-2.0 * (k * k) as f64 * lambda * lambda).exp()).sum();
    s.clamp(0.0, 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub g: usize,
    pub n: usize,
    pub reference_size: usize,
    pub seed: u64,
    pub statistic: f64,
    pub p_value: f64,
}

impl KsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// KS distance between `sequence` and a fresh `mu_g` reference sample.
pub fn ks_compare(sequence: &[f64], g: usize, reference_size: usize, seed: u64) -> Result<KsReport> {
    let reference = mu_g_sample(g, reference_size, seed);
    let statistic = ks_statistic(sequence, &reference)?;
    Ok(KsReport {
        g,
        n: sequence.len(),
        reference_size,
        seed,
        statistic,
        p_value: ks_pvalue(statistic, sequence.len(), reference_size),
    })
}

/// Reference sample of `mu_g` with its empirical CDF.
#[derive(Clone, Debug)]
pub struct DistributionModel {
    pub g: usize,
    pub seed: u64,
    sorted: Vec<f64>,
}

impl DistributionModel {
    pub fn new(g: usize, size: usize, seed: u64) -> Self {
        let mut sorted = mu_g_sample(g, size, seed);
        sorted.sort_by(f64::total_cmp);
        Self { g, seed, sorted }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&y| y <= x) as f64 / self.sorted.len() as f64
    }

    pub fn sample(&self) -> &[f64] {
        &self.sorted
    }

    pub fn mean(&self) -> f64 {
        0.0
    }

    pub fn variance(&self) -> f64 {
        4.0 * self.g as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: u64,
}

/// Equal-width histogram on `[lo, hi)`; values outside are dropped.
pub fn histogram(xs: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<HistBin> {
    let w = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in xs {
        if x >= lo && x < hi {
            counts[(((x - lo) / w) as usize).min(bins - 1)] += 1;
        } else if x == hi {
            counts[bins - 1] += 1;
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistBin { bin_left: lo + i as f64 * w, bin_right: lo + (i + 1) as f64 * w, count })
        .collect()
}

pub fn write_histogram_csv<W: Write>(bins: &[HistBin], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for b in bins {
        w.serialize(b).map_err(|e| CoreError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil_poly::{certified_roots, QSymplecticPoly};

    fn rs(c: &[i64], q: u64) -> RootSystem {
        certified_roots(&QSymplecticPoly::from_i64(c, q).unwrap(), 128).unwrap()
    }

    #[test]
    fn deviation_examples() {
        let d = deviation_sequence(&rs(&[1, -2, 5], 5), 2);
        assert!((d[0] - 2.0 / 5f64.sqrt()).abs() < 1e-14);
        assert!((d[1] + 1.2).abs() < 1e-14);
    }

    #[test]
    fn deviation_matches_power_sums_far_out() {
        // a_n = alpha^n + beta^n exactly; compare d_n q^{n/2} for n up to 40
        let r = rs(&[1, -3, 7], 7);
        let d = deviation_sequence(&r, 200);
        let (mut s0, mut s1) = (2i128, 3i128);
        for n in 2..=40usize {
            let s2 = 3 * s1 - 7 * s0;
            s0 = s1;
            s1 = s2;
            let expect = s1 as f64 / 7f64.powf(n as f64 / 2.0);
            assert!((d[n - 1] - expect).abs() < 1e-12, "n={n}");
        }
        assert!(d.iter().all(|x| x.abs() <= 2.0 + 1e-12));
    }

    #[test]
    fn diff_examples() {
        let a = rs(&[1, -2, 5], 5);
        let b = rs(&[1, 1, 5], 5);
        let d = diff_sequence(&a, &b, 3).unwrap();
        assert!((d[0] + 3.0 / 5f64.sqrt()).abs() < 1e-14);
        assert!(diff_sequence(&a, &a, 100).unwrap().iter().all(|&x| x == 0.0));
        assert_eq!(sign_bias(&a, &a, 100).unwrap(), 0.0);
        assert_eq!(diff_sequence(&a, &rs(&[1, 1, 7], 7), 3), Err(CoreError::MismatchedField));
        let n = 1000;
        let ties = diff_sequence(&a, &b, n).unwrap().iter().filter(|&&x| x == 0.0).count() as f64 / n as f64;
        let s = sign_bias(&a, &b, n).unwrap() + sign_bias(&b, &a, n).unwrap() + ties;
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn j0_values() {
        let cases = [
            (0.0, 1.0),
            (1.0, 0.7651976865579666),
            (8.0, 0.1716508071375539),
            (10.0, -0.2459357644513483),
            (20.0, 0.1670246643405832),
            (29.9, -0.09781115006606245),
            (30.0, -0.08636798358104021),
            (50.0, 0.05581232766925182),
            (100.0, 0.01998585030422312),
            (1000.0, 0.02478668615242017),
        ];
        for (x, y) in cases {
            assert!((bessel_j0(x) - y).abs() < 1e-13, "J0({x}) = {} vs {y}", bessel_j0(x));
            assert_eq!(bessel_j0(-x), bessel_j0(x));
        }
    }

    #[test]
    fn charfn_zero_and_curvature() {
        // first zero of J_0 by bisection
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..200 {
            let mid = (lo + hi) / 2.0;
            if bessel_j0(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((lo / 2.0 - 1.2024127788478).abs() < 1e-12);
        assert!(mu_g_charfn(1, lo / 2.0).abs() < 1e-10);
        for g in 1..=3 {
            assert_eq!(mu_g_charfn(g, 0.0), 1.0);
            let h = 1e-3;
            let second = (mu_g_charfn(g, h) - 2.0 + mu_g_charfn(g, -h)) / (h * h);
            assert!((-second - 4.0 * g as f64).abs() < 1e-4);
        }
    }

    #[test]
    fn sampler_deterministic_and_bounded() {
        let a = mu_g_sample(1, 100_000, 7);
        assert_eq!(a, mu_g_sample(1, 100_000, 7));
        assert_ne!(a, mu_g_sample(1, 100_000, 8));
        assert!(a.iter().all(|x| x.abs() <= 4.0));
        assert_eq!(mu_g_sample(2, 70_000, 1)[..1000], mu_g_sample(2, 1000, 1)[..]);
    }

    #[test]
    fn ks_examples() {
        let a = mu_g_sample(1, 10_000, 1);
        let b = mu_g_sample(1, 10_000, 2);
        assert!(ks_statistic(&a, &b).unwrap() < 0.03);
        let r = ks_compare(&[0.0; 1000], 1, 10_000, 3).unwrap();
        assert!(r.statistic >= 0.4);
        assert!(r.p_value < 1e-6);
        assert_eq!(ks_compare(&[], 1, 10, 3), Err(CoreError::EmptySequence));
        assert_eq!(ks_statistic(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn histogram_csv() {
        let h = histogram(&[-1.0, 0.0, 0.5, 1.0, 3.0], -1.0, 1.0, 2);
        assert_eq!(h.iter().map(|b| b.count).collect::<Vec<_>>(), vec![1, 3]);
        let mut buf = Vec::new();
        write_histogram_csv(&h, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("bin_left,bin_right,count\n-1.0,0.0,1\n"));
    }

    #[test]
    fn model_cdf() {
        let m = DistributionModel::new(1, 20_000, 5);
        assert!((m.cdf(0.0) - 0.5).abs() < 0.02);
        assert_eq!(m.cdf(-5.0), 0.0);
        assert_eq!(m.cdf(5.0), 1.0);
    }
}
