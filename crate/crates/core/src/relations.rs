//! Additive and multiplicative relations among inverse roots: lattice-based
//! detection, exact certification by a norm bound, and the combined report.
//!
//! Root coordinates follow the concatenation of the inputs: for each input
//! polynomial, `alpha_1, beta_1, alpha_2, beta_2, ..` with `beta = q/alpha` and
//! `Im alpha >= 0`. Angle coordinates are `(theta_1, .., theta_G, 1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use frobrel_arith::lll::lll_reduce;
use frobrel_arith::{Ball, CBall, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::galois::{self, GaloisCertificate, Verdict};
use crate::weil_poly::{certified_roots, QSymplecticPoly, RootSystem};

pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_HEIGHT: u64 = 50;
pub const DEFAULT_CEILING_BITS: u32 = 1 << 22;

/// Certified roots of several polynomials, concatenated.
#[derive(Clone, Debug)]
pub struct RootSet {
    systems: Vec<RootSystem>,
}

impl RootSet {
    pub fn new(polys: &[QSymplecticPoly], bits: u32) -> Result<Self> {
        check_same_q(polys)?;
        let systems = polys.iter().map(|p| certified_roots(p, bits.max(64))).collect::<Result<_>>()?;
        Ok(Self { systems })
    }

    pub fn from_systems(systems: Vec<RootSystem>) -> Self {
        Self { systems }
    }

    pub fn systems(&self) -> &[RootSystem] {
        &self.systems
    }

    /// Number of pairs.
    pub fn pairs(&self) -> usize {
        self.systems.iter().map(|s| s.g()).sum()
    }

    /// `|M|`.
    pub fn len(&self) -> usize {
        2 * self.pairs()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn roots(&self) -> Vec<&CBall> {
        self.systems.iter().flat_map(|s| s.roots()).collect()
    }

    pub fn angles(&self) -> Vec<&Ball> {
        self.systems.iter().flat_map(|s| s.angles()).collect()
    }

    /// Working precision of the stored enclosures.
    pub fn work_prec(&self) -> u32 {
        self.systems.iter().flat_map(|s| s.roots()).map(|r| r.prec()).next().unwrap_or(64)
    }

    /// Partner index of each root (`i ^ 1`).
    pub fn pairing(&self) -> Vec<usize> {
        (0..self.len()).map(|i| i ^ 1).collect()
    }

    /// Index of the input polynomial owning each root.
    pub fn owner(&self) -> Vec<usize> {
        self.systems.iter().enumerate().flat_map(|(f, s)| std::iter::repeat(f).take(2 * s.g())).collect()
    }
}

fn check_same_q(polys: &[QSymplecticPoly]) -> Result<u64> {
    let q = polys.first().map(|p| p.q()).ok_or_else(|| CoreError::InvalidInput("no polynomials".into()))?;
    if polys.iter().any(|p| p.q() != q) {
        return Err(CoreError::MismatchedField);
    }
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactVerdict {
    ProvenTrue,
    ProvenFalse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationKind {
    Additive,
    Multiplicative,
}

/// Outcome of an exact verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub inputs: Vec<Vec<String>>,
    pub kind: RelationKind,
    pub exponents: Vec<i64>,
    pub verdict: ExactVerdict,
    pub precision_used: u32,
    pub bound_b: String,
    pub degree_d: String,
}

/// Exact verifier with root enclosures cached per precision.
pub struct Verifier {
    polys: Vec<QSymplecticPoly>,
    q: u64,
    start_bits: u32,
    ceiling_bits: u32,
    cache: Mutex<BTreeMap<u32, Arc<RootSet>>>,
}

impl Verifier {
    pub fn new(polys: &[QSymplecticPoly]) -> Result<Self> {
        let q = check_same_q(polys)?;
        Ok(Self {
            polys: polys.to_vec(),
            q,
            start_bits: 128,
            ceiling_bits: DEFAULT_CEILING_BITS,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn with_ceiling(mut self, bits: u32) -> Self {
        self.ceiling_bits = bits;
        self
    }

    pub fn with_start(mut self, bits: u32) -> Self {
        self.start_bits = bits.max(64);
        self
    }

    fn roots_at(&self, bits: u32) -> Result<Arc<RootSet>> {
        if let Some(rs) = self.cache.lock().unwrap().get(&bits) {
            return Ok(rs.clone());
        }
        let rs = Arc::new(RootSet::new(&self.polys, bits)?);
        self.cache.lock().unwrap().insert(bits, rs.clone());
        Ok(rs)
    }

    fn dim(&self) -> usize {
        self.polys.iter().map(|p| 2 * p.g()).sum()
    }

    /// `prod 2^{g_i} g_i!` over the inputs touched by `n`.
    fn degree_bound(&self, n: &[i64]) -> BigInt {
        let mut d = BigInt::one();
        let mut off = 0;
        for p in &self.polys {
            let g = p.g();
            if n[off..off + 2 * g].iter().any(|&x| x != 0) {
                d *= BigInt::from(1u64 << g) * (1..=g as u64).product::<u64>();
            }
            off += 2 * g;
        }
        d
    }

    fn report(&self, kind: RelationKind, n: &[i64], verdict: ExactVerdict, prec: u32, b: String, d: &BigInt) -> VerifyReport {
        VerifyReport {
            inputs: self.polys.iter().map(|p| p.coeffs().iter().map(|c| c.to_string()).collect()).collect(),
            kind,
            exponents: n.to_vec(),
            verdict,
            precision_used: prec,
            bound_b: b,
            degree_d: d.to_string(),
        }
    }

    /// Shared escalation loop: `delta(prec)` evaluates the algebraic integer,
    /// `small(delta)` is the certified separation test.
    fn escalate(
        &self,
        need: f64,
        delta: impl Fn(&RootSet, u32) -> CBall,
        small: impl Fn(&CBall) -> bool,
    ) -> Result<(ExactVerdict, u32)> {
        let need = need.ceil() as u64 + 64;
        let mut prec = self.start_bits;
        loop {
            let rs = self.roots_at(prec)?;
            let d = delta(&rs, rs.work_prec());
            if !d.contains_zero() {
                return Ok((ExactVerdict::ProvenFalse, prec));
            }
            if prec as u64 >= need && small(&d) {
                return Ok((ExactVerdict::ProvenTrue, prec));
            }
            let next = prec.saturating_mul(2);
            if next > self.ceiling_bits || need > self.ceiling_bits as u64 {
                return Err(CoreError::PrecisionExhausted(format!(
                    "need about {need} bits, ceiling is {}",
                    self.ceiling_bits
                )));
            }
            prec = next;
        }
    }

    /// Decide `prod (alpha_i / sqrt q)^{n_i} = 1` exactly.
    pub fn multiplicative(&self, n: &[i64]) -> Result<VerifyReport> {
        if n.len() != self.dim() {
            return Err(CoreError::InvalidInput(format!("expected {} exponents, got {}", self.dim(), n.len())));
        }
        // alpha^{-1} = beta / q, so move negative exponents onto partners
        let mut k: Vec<u64> = vec![0; n.len()];
        for (i, &x) in n.iter().enumerate() {
            if x > 0 {
                k[i] += x as u64;
            } else {
                k[i ^ 1] += x.unsigned_abs();
            }
        }
        let total: u64 = k.iter().sum();
        // prod alpha^k = q^{total/2}; square when total is odd
        let (k, t) = if total % 2 == 1 { (k.iter().map(|x| 2 * x).collect(), total) } else { (k, total / 2) };
        let big_k: u64 = k.iter().sum();
        let q = BigInt::from(self.q);
        let qt = q.pow(t as u32);
        let b: BigInt = BigInt::from(2) * q.pow((big_k / 2) as u32) + 1;
        let d = self.degree_bound(n);
        if big_k == 0 {
            return Ok(self.report(RelationKind::Multiplicative, n, ExactVerdict::ProvenTrue, 0, b.to_string(), &d));
        }
        let dm1 = &d - 1u32;
        let scale = b.pow(dm1.to_u32().ok_or_else(|| CoreError::PrecisionExhausted("degree bound too large".into()))?);
        let need = dm1.to_f64().unwrap_or(f64::INFINITY) * big_log2(&b) + big_log2(&qt) + (big_k as f64).log2();
        let (verdict, prec) = self.escalate(
            need,
            |rs, prec| {
                let roots = rs.roots();
                let mut acc = CBall::one(prec);
                for (i, &e) in k.iter().enumerate() {
                    if e > 0 {
                        acc = acc.mul(&roots[i].pow(e as u32));
                    }
                }
                acc.sub(&CBall::real(Ball::exact_int(qt.clone(), prec)))
            },
            |delta| delta.abs_times_below_one(&scale),
        )?;
        Ok(self.report(RelationKind::Multiplicative, n, verdict, prec, b.to_string(), &d))
    }

    /// Decide `sum n_i alpha_i = 0` exactly.
    pub fn additive(&self, n: &[i64]) -> Result<VerifyReport> {
        if n.len() != self.dim() {
            return Err(CoreError::InvalidInput(format!("expected {} coefficients, got {}", self.dim(), n.len())));
        }
        let s: u64 = n.iter().map(|x| x.unsigned_abs()).sum();
        let d = self.degree_bound(n);
        // B = sqrt(q) S, handled through B^2 = q S^2
        let b2 = BigInt::from(self.q) * BigInt::from(s) * BigInt::from(s);
        let b_text = format!("sqrt({b2})");
        if s == 0 {
            return Ok(self.report(RelationKind::Additive, n, ExactVerdict::ProvenTrue, 0, b_text, &d));
        }
        let dm1 = (&d - 1u32).to_u32().ok_or_else(|| CoreError::PrecisionExhausted("degree bound too large".into()))?;
        let s2 = b2.pow(dm1);
        let need = dm1 as f64 * big_log2(&b2) / 2.0 + big_log2(&b2) / 2.0;
        let (verdict, prec) = self.escalate(
            need,
            |rs, prec| {
                let roots = rs.roots();
                let mut acc = CBall::zero(prec);
                for (i, &c) in n.iter().enumerate() {
                    if c != 0 {
                        acc = acc.add(&roots[i].mul_int(&BigInt::from(c)));
                    }
                }
                acc
            },
            |delta| delta.abs_sqr_times_below_one(&s2),
        )?;
        Ok(self.report(RelationKind::Additive, n, verdict, prec, b_text, &d))
    }
}

fn big_log2(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().unwrap_or(f64::INFINITY).abs().log2()
    } else {
        let shift = bits - 64;
        (x >> shift as usize).to_f64().unwrap_or(1.0).abs().log2() + shift as f64
    }
}

pub fn verify_multiplicative_exact(polys: &[QSymplecticPoly], n: &[i64]) -> Result<VerifyReport> {
    Verifier::new(polys)?.multiplicative(n)
}

pub fn verify_additive_exact(polys: &[QSymplecticPoly], n: &[i64]) -> Result<VerifyReport> {
    Verifier::new(polys)?.additive(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    Roots,
    Angles,
}

/// A lattice of integer relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationLattice {
    pub kind: RelationKind,
    pub ambient: Ambient,
    pub dim: usize,
    pub basis: Vec<Vec<i64>>,
    pub trivial_basis: Vec<Vec<i64>>,
    pub nontrivial_rank: usize,
    /// False when some basis vector could not be certified.
    pub verified: bool,
}

impl RelationLattice {
    pub fn empty(kind: RelationKind, ambient: Ambient, dim: usize) -> Self {
        Self { kind, ambient, dim, basis: vec![], trivial_basis: vec![], nontrivial_rank: 0, verified: true }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        IntMatrix::from_i64(&self.basis).row_lattice_contains(&big(v))
    }

    /// For an angle lattice: the same relations written on the roots, where
    /// `(m | m_0)` becomes exponent `m_j` on `alpha_j` and `0` on `beta_j`.
    pub fn lift_to_roots(&self) -> Vec<Vec<i64>> {
        assert_eq!(self.ambient, Ambient::Angles);
        self.basis.iter().map(|m| angle_to_roots(m)).collect()
    }
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// Split a root-coordinate multiplicative lattice into its `Rel_triv` part and
/// the rank of its image in `Rel_mul / Rel_triv`.
pub fn classify_trivial(lat: &RelationLattice, pairing: &[usize]) -> RelationLattice {
    let mut out = lat.clone();
    if lat.ambient == Ambient::Angles {
        // angle coordinates already live in the quotient
        out.trivial_basis = vec![];
        out.nontrivial_rank = if lat.basis.is_empty() { 0 } else { IntMatrix::from_i64(&lat.basis).rank() };
        return out;
    }
    if lat.basis.is_empty() {
        out.trivial_basis = vec![];
        out.nontrivial_rank = 0;
        return out;
    }
    let reps: Vec<usize> = (0..pairing.len()).filter(|&i| i < pairing[i]).collect();
    let image: Vec<Vec<i64>> = lat.basis.iter().map(|b| reps.iter().map(|&i| b[i] - b[pairing[i]]).collect()).collect();
    let image_m = IntMatrix::from_i64(&image);
    out.nontrivial_rank = image_m.rank();
    // combinations of basis rows with zero image
    let combos = image_m.transpose().integer_kernel();
    out.trivial_basis = combos
        .iter()
        .filter_map(|c| {
            let v: Vec<BigInt> = (0..lat.dim)
                .map(|j| c.iter().zip(&lat.basis).map(|(ci, b)| ci * b[j]).sum())
                .collect();
            small(&v)
        })
        .collect();
    out
}

#[derive(Clone, Copy, Debug)]
pub struct DetectOptions {
    pub bits: u32,
    pub height: u64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self { bits: DEFAULT_BITS, height: DEFAULT_HEIGHT }
    }
}

/// `round(x * 2^e)` for a ball with `prec >= e`.
fn scaled_round(b: &Ball, e: u32) -> BigInt {
    let s = b.prec() as i64 - e as i64;
    if s <= 0 {
        return b.mid_raw() << (-s) as usize;
    }
    let s = s as usize;
    (b.mid_raw() + (BigInt::one() << (s - 1))) >> s
}

/// LLL candidates: rows `[I | scaled columns]`, returning the integer parts.
fn lll_candidates(columns: &[Vec<BigInt>], n: usize) -> Result<Vec<Vec<BigInt>>> {
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigInt> = (0..n).map(|j| BigInt::from((i == j) as i64)).collect();
            r.extend(columns.iter().map(|c| c[i].clone()));
            r
        })
        .collect();
    let red = lll_reduce(&rows)?;
    Ok(red.into_iter().map(|r| r[..n].to_vec()).filter(|v| v.iter().any(|x| !x.is_zero())).collect())
}

/// Saturation of the lattice spanned by `rows` in `Z^dim`.
fn saturate(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return vec![];
    }
    let m = IntMatrix::from_i64(rows);
    let perp = m.integer_kernel();
    let sat = if perp.is_empty() {
        IntMatrix::identity(dim).into_rows()
    } else {
        IntMatrix::new(perp, dim).integer_kernel()
    };
    let reduced = lll_reduce(&sat).unwrap_or(sat);
    reduced.iter().filter_map(|v| small(v)).collect()
}

fn normalise_sign(mut v: Vec<i64>) -> Vec<i64> {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Keep candidates the verifier proves, saturate, and re-verify the result.
fn finish(
    kind: RelationKind,
    ambient: Ambient,
    dim: usize,
    candidates: Vec<Vec<i64>>,
    verify: impl Fn(&[i64]) -> Result<ExactVerdict> + Sync,
) -> Result<RelationLattice> {
    let checked: Vec<Result<Option<Vec<i64>>>> = candidates
        .into_par_iter()
        .map(|c| Ok((verify(&c)? == ExactVerdict::ProvenTrue).then_some(c)))
        .collect();
    let mut proven = Vec::new();
    for c in checked {
        if let Some(v) = c? {
            proven.push(v);
        }
    }
    let mut lat = RelationLattice::empty(kind, ambient, dim);
    if proven.is_empty() {
        return Ok(lat);
    }
    let sat = saturate(&proven, dim);
    let sat_ok: Vec<bool> = sat.par_iter().map(|v| matches!(verify(v), Ok(ExactVerdict::ProvenTrue))).collect::<Vec<_>>();
    lat.basis = if sat_ok.iter().all(|&ok| ok) {
        sat
    } else {
        // saturation only adds torsion elements here; fall back to the proven span
        let m = IntMatrix::from_i64(&proven).hnf();
        m.rows().iter().filter(|r| r.iter().any(|x| !x.is_zero())).filter_map(|r| small(r)).collect()
    };
    lat.basis = lat.basis.into_iter().map(normalise_sign).collect();
    Ok(lat)
}

fn within_height(v: &[BigInt], height: u64) -> bool {
    v.iter().all(|x| x.abs() <= BigInt::from(height))
}

/// Additive relations `sum n_i alpha_i = 0` among the roots.
pub fn detect_additive(polys: &[QSymplecticPoly], opts: DetectOptions) -> Result<RelationLattice> {
    let bits = opts.bits.max(64);
    let rs = RootSet::new(polys, bits)?;
    let n = rs.len();
    let e = bits - 32;
    let roots = rs.roots();
    let re: Vec<BigInt> = roots.iter().map(|z| scaled_round(&z.re, e)).collect();
    let im: Vec<BigInt> = roots.iter().map(|z| scaled_round(&z.im, e)).collect();
    let cand = lll_candidates(&[re, im], n)?;
    let threshold = BigInt::one() << (bits / 2) as usize;
    let cand: Vec<Vec<i64>> = cand
        .into_iter()
        .filter(|v| within_height(v, opts.height))
        .filter(|v| {
            let mut acc = CBall::zero(rs.work_prec());
            for (z, c) in roots.iter().zip(v) {
                acc = acc.add(&z.mul_int(c));
            }
            acc.abs_times_below_one(&threshold)
        })
        .filter_map(|v| small(&v))
        .collect();
    let verifier = Verifier::new(polys)?;
    let lat = finish(RelationKind::Additive, Ambient::Roots, n, cand, |v| Ok(verifier.additive(v)?.verdict))?;
    Ok(classify_trace_span(&lat, &trace_span(polys)))
}

/// Additive relations forced by rational traces: `s_j 1_{M_i} - s_i 1_{M_j}`
/// for factors with nonzero traces `s_i, s_j`.
pub fn trace_span(polys: &[QSymplecticPoly]) -> Vec<Vec<i64>> {
    let sizes: Vec<usize> = polys.iter().map(|p| 2 * p.g()).collect();
    let n: usize = sizes.iter().sum();
    let offs: Vec<usize> = sizes.iter().scan(0, |acc, &s| { let o = *acc; *acc += s; Some(o) }).collect();
    let traces: Vec<Option<i64>> = polys.iter().map(|p| (-p.c1()).to_i64().filter(|&s| s != 0)).collect();
    let mut out = Vec::new();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let (Some(si), Some(sj)) = (traces[i], traces[j]) else { continue };
            let d = si.gcd(&sj);
            let mut v = vec![0; n];
            v[offs[i]..offs[i] + sizes[i]].iter_mut().for_each(|x| *x = sj / d);
            v[offs[j]..offs[j] + sizes[j]].iter_mut().for_each(|x| *x = -si / d);
            out.push(v);
        }
    }
    out
}

/// Split an additive lattice into the part inside the span of `span` and the
/// rank of its image in the quotient.
pub fn classify_trace_span(lat: &RelationLattice, span: &[Vec<i64>]) -> RelationLattice {
    let mut out = lat.clone();
    out.trivial_basis = vec![];
    if lat.basis.is_empty() {
        out.nontrivial_rank = 0;
        return out;
    }
    if span.is_empty() {
        out.nontrivial_rank = lat.basis.len();
        return out;
    }
    let span_rank = IntMatrix::from_i64(span).rank();
    let mut all = lat.basis.clone();
    all.extend(span.iter().cloned());
    out.nontrivial_rank = IntMatrix::from_i64(&all).rank() - span_rank;
    let r = lat.basis.len();
    let combos = IntMatrix::from_i64(&all).transpose().integer_kernel();
    let trivial: Vec<Vec<i64>> = combos
        .iter()
        .filter_map(|c| {
            let v: Vec<BigInt> = (0..lat.dim)
                .map(|j| c[..r].iter().zip(&lat.basis).map(|(ci, b)| ci * b[j]).sum())
                .collect();
            small(&v)
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    if !trivial.is_empty() {
        let h = IntMatrix::from_i64(&trivial).hnf();
        out.trivial_basis = h.rows().iter().filter(|r| r.iter().any(|x| !x.is_zero())).filter_map(|r| small(r)).collect();
    }
    out
}

/// Multiplicative relations among normalised roots, as integer relations
/// among `(theta_1, .., theta_G, 1)`.
pub fn detect_multiplicative(polys: &[QSymplecticPoly], opts: DetectOptions) -> Result<RelationLattice> {
    let bits = opts.bits.max(64);
    let rs = RootSet::new(polys, bits)?;
    let g = rs.pairs();
    let e = bits - 32;
    let mut col: Vec<BigInt> = rs.angles().iter().map(|t| scaled_round(t, e)).collect();
    col.push(BigInt::one() << e as usize);
    let cand = lll_candidates(&[col], g + 1)?;
    let angles = rs.angles();
    let cand: Vec<Vec<i64>> = cand
        .into_iter()
        .filter(|v| within_height(v, opts.height))
        .filter(|v| {
            let wp = rs.work_prec();
            let mut acc = Ball::exact_int(v[g].clone(), wp);
            for (t, c) in angles.iter().zip(v) {
                acc = acc.add(&t.mul_int(c));
            }
            (acc.abs_upper_ulps() << (bits / 2) as usize) < (BigInt::one() << wp as usize)
        })
        .filter_map(|v| small(&v))
        .collect();
    let verifier = Verifier::new(polys)?;
    let lat = finish(RelationKind::Multiplicative, Ambient::Angles, g + 1, cand, |m| {
        Ok(verifier.multiplicative(&angle_to_roots(m))?.verdict)
    })?;
    Ok(classify_trivial(&lat, &[]))
}

/// `(m | m_0)` on angles to exponents on roots.
pub fn angle_to_roots(m: &[i64]) -> Vec<i64> {
    let g = m.len() - 1;
    let mut n = vec![0; 2 * g];
    for j in 0..g {
        n[2 * j] = m[j];
    }
    n
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    /// Exponents or coefficients on the roots.
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelVerdict {
    AdditivelyFree,
    MultTrivialOnly,
    HasRelations(Vec<Relation>),
    Undetermined,
}

impl fmt::Display for RelVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelVerdict::AdditivelyFree => f.write_str("AdditivelyFree"),
            RelVerdict::MultTrivialOnly => f.write_str("MultTrivialOnly"),
            RelVerdict::HasRelations(r) => write!(f, "HasRelations({})", r.len()),
            RelVerdict::Undetermined => f.write_str("Undetermined"),
        }
    }
}

pub fn verdicts_string(v: &[RelVerdict]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("+")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub verdicts: Vec<RelVerdict>,
    pub certificate: Option<GaloisCertificate>,
    pub certificate_error: Option<String>,
    pub trace_zero: bool,
    pub additive: Option<RelationLattice>,
    pub multiplicative: Option<RelationLattice>,
    pub notes: Vec<String>,
}

impl IndependenceReport {
    pub fn certified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.verdict == Verdict::Proven)
    }

    pub fn has_relations(&self) -> bool {
        self.verdicts.iter().any(|v| matches!(v, RelVerdict::HasRelations(_)))
    }

    /// Rank of verified multiplicative relations modulo the trivial ones.
    pub fn nontrivial_rank(&self) -> usize {
        self.multiplicative.as_ref().map_or(0, |l| l.nontrivial_rank)
    }

    /// Certified maximal, no zero trace, and yet a verified relation.
    pub fn contradicts_theorem(&self) -> bool {
        self.certified() && !self.trace_zero && self.has_relations()
    }
}

/// Combine the Galois certificate with detection and exact verification.
///
/// A verified relation always wins. Otherwise a maximal Galois group with no
/// vanishing trace means there are no additive relations and only the
/// trivial multiplicative ones.
pub fn independence_report(polys: &[QSymplecticPoly], ell_budget: u64, opts: DetectOptions) -> IndependenceReport {
    independence_report_with(polys, galois::tuple_certificate(polys, ell_budget), opts)
}

/// As [`independence_report`], with the certificate computed by the caller.
pub fn independence_report_with(
    polys: &[QSymplecticPoly],
    certificate: Result<GaloisCertificate>,
    opts: DetectOptions,
) -> IndependenceReport {
    let mut rep = IndependenceReport {
        verdicts: vec![],
        certificate: None,
        certificate_error: None,
        trace_zero: galois::some_trace_is_zero(polys),
        additive: None,
        multiplicative: None,
        notes: vec![],
    };
    match certificate {
        Ok(c) => rep.certificate = Some(c),
        Err(e) => rep.certificate_error = Some(e.to_string()),
    }
    match detect_additive(polys, opts) {
        Ok(l) => rep.additive = Some(l),
        Err(e) => rep.notes.push(format!("additive detection: {e}")),
    }
    match detect_multiplicative(polys, opts) {
        Ok(l) => rep.multiplicative = Some(l),
        Err(e) => rep.notes.push(format!("multiplicative detection: {e}")),
    }
    let mut found = Vec::new();
    if let Some(l) = rep.additive.as_ref().filter(|l| l.nontrivial_rank > 0) {
        let triv = (!l.trivial_basis.is_empty()).then(|| IntMatrix::from_i64(&l.trivial_basis));
        found.extend(
            l.basis
                .iter()
                .filter(|b| triv.as_ref().is_none_or(|t| !t.row_lattice_contains(&big(b))))
                .map(|b| Relation { kind: RelationKind::Additive, exponents: b.clone() }),
        );
    }
    if let Some(l) = &rep.multiplicative {
        found.extend(l.lift_to_roots().into_iter().map(|b| Relation { kind: RelationKind::Multiplicative, exponents: b }));
    }
    rep.verdicts = if !found.is_empty() {
        vec![RelVerdict::HasRelations(found)]
    } else if rep.certified() && !rep.trace_zero {
        vec![RelVerdict::AdditivelyFree, RelVerdict::MultTrivialOnly]
    } else {
        vec![RelVerdict::Undetermined]
    };
    rep
}
