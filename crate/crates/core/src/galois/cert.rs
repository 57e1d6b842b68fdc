//! Frobenius cycle types mod `l` and maximality certificates.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use frobrel_arith::{is_prime, ModPoly, ZPoly};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::group::{class_key_string, CycleSign, SignedCycleType, MAX_LATTICE_RANK};
use super::lattice::SubgroupLattice;
use crate::error::{CoreError, Result};
use crate::weil_poly::QSymplecticPoly;

pub const DEFAULT_ELL_BUDGET: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    DividesQ,
    NotSquarefree,
    DegreeDrop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Proven,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proven => "Proven",
            Verdict::Undetermined => "Undetermined",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub ell: u64,
    pub class: Vec<SignedCycleType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisCertificate {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub rejected: Vec<(u64, RejectReason)>,
    /// Why the verdict is `Undetermined` when not for lack of witnesses.
    pub note: Option<String>,
}

fn reduce(c: &BigInt, ell: u64) -> u64 {
    let m = BigInt::from(ell);
    let r = ((c % &m) + &m) % &m;
    r.to_u64().expect("residue fits")
}

/// The dual of a monic factor: monic `T^d h(q/T)`, whose roots are `q/beta`.
fn dual(h: &ModPoly, q: u64) -> ModPoly {
    let ell = h.modulus();
    let qm = q % ell;
    let d = h.degree().expect("nonzero factor");
    let mut c = vec![0u64; d + 1];
    let mut qp = 1u64;
    for j in 0..=d {
        c[d - j] = (h.coeff(j) as u128 * qp as u128 % ell as u128) as u64;
        qp = (qp as u128 * qm as u128 % ell as u128) as u64;
    }
    ModPoly::new(ell, c).monic()
}

/// Conjugacy class of Frobenius at `ell` in `W_{2g}`, read off from the
/// factorisation of `T^{2g} P(1/T)` (roots `alpha`) modulo `ell`.
pub fn frobenius_cycle_type(p: &QSymplecticPoly, ell: u64) -> Result<std::result::Result<SignedCycleType, RejectReason>> {
    if ell % 2 == 0 || !is_prime(ell) {
        return Err(CoreError::InvalidInput(format!("{ell} is not an odd prime")));
    }
    let q = p.q();
    if q % ell == 0 {
        return Ok(Err(RejectReason::DividesQ));
    }
    let g = p.g();
    let rev: Vec<u64> = p.coeffs().iter().rev().map(|c| reduce(c, ell)).collect();
    let r = ModPoly::new(ell, rev);
    if r.degree() != Some(2 * g) {
        return Ok(Err(RejectReason::DegreeDrop));
    }
    if !r.is_squarefree() {
        return Ok(Err(RejectReason::NotSquarefree));
    }
    let factors: Vec<ModPoly> = r.factor(ell)?.into_iter().map(|(f, _)| f).collect();
    let mut used = vec![false; factors.len()];
    let mut parts = Vec::new();
    for i in 0..factors.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let d = factors[i].degree().unwrap_or(0);
        let dl = dual(&factors[i], q);
        if dl == factors[i] {
            if d % 2 == 1 {
                // a self-dual odd-degree factor forces alpha = q/alpha, impossible when squarefree
                return Ok(Err(RejectReason::NotSquarefree));
            }
            parts.push((d / 2, CycleSign::Neg));
        } else {
            let j = (i + 1..factors.len()).find(|&j| !used[j] && factors[j] == dl);
            match j {
                Some(j) => used[j] = true,
                None => return Ok(Err(RejectReason::NotSquarefree)),
            }
            parts.push((d, CycleSign::Pos));
        }
    }
    Ok(Ok(SignedCycleType::new(parts)?))
}

/// True iff the sum of inverse roots vanishes, i.e. `c_1 = 0`.
pub fn trace_is_zero(p: &QSymplecticPoly) -> bool {
    p.c1().is_zero()
}

/// Per-factor trace test for a product of L-polynomials.
pub fn some_trace_is_zero(ps: &[QSymplecticPoly]) -> bool {
    ps.iter().any(trace_is_zero)
}

/// Certificate that the splitting field of `p` has Galois group `W_{2g}`.
pub fn maximality_certificate(p: &QSymplecticPoly, ell_budget: u64) -> Result<GaloisCertificate> {
    maximality_certificate_cached(p, ell_budget, None)
}

pub fn maximality_certificate_cached(p: &QSymplecticPoly, ell_budget: u64, cache: Option<&Path>) -> Result<GaloisCertificate> {
    tuple_certificate_cached(std::slice::from_ref(p), ell_budget, cache)
}

/// Certificate that the compositum of the splitting fields has group `W_{2g}^k`.
pub fn tuple_certificate(ps: &[QSymplecticPoly], ell_budget: u64) -> Result<GaloisCertificate> {
    tuple_certificate_cached(ps, ell_budget, None)
}

pub fn tuple_certificate_cached(ps: &[QSymplecticPoly], ell_budget: u64, cache: Option<&Path>) -> Result<GaloisCertificate> {
    let Some(first) = ps.first() else {
        return Err(CoreError::InvalidInput("no polynomials".into()));
    };
    let (g, q, k) = (first.g(), first.q(), ps.len());
    if g == 0 {
        return Err(CoreError::InvalidInput("genus must be positive".into()));
    }
    if ps.iter().any(|p| p.g() != g || p.q() != q) {
        return Err(CoreError::InvalidInput("all factors must share g and q".into()));
    }
    if ps.iter().any(|p| !p.is_squarefree()) {
        return Err(CoreError::NotSeparable);
    }
    for i in 0..k {
        for j in i + 1..k {
            if shares_root(&ps[i], &ps[j]) {
                return Err(CoreError::SharedRoots(i, j));
            }
        }
    }
    if k == 1 && g > MAX_LATTICE_RANK {
        return Err(CoreError::TooLarge(format!("no subgroup lattice for g = {g}")));
    }
    if g * k > MAX_LATTICE_RANK {
        return Ok(GaloisCertificate {
            verdict: Verdict::Undetermined,
            witnesses: vec![],
            rejected: vec![],
            note: Some(format!("TooLarge: W_{}^{} lattice not available", 2 * g, k)),
        });
    }
    let lattice = SubgroupLattice::get(g, k, cache)?;
    let mut cert = GaloisCertificate { verdict: Verdict::Undetermined, witnesses: vec![], rejected: vec![], note: None };
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut ell = 3;
    while ell <= ell_budget {
        if is_prime(ell) {
            match tuple_class(ps, ell)? {
                Ok(class) => {
                    if seen.insert(class_key_string(&class)) {
                        cert.witnesses.push(Witness { ell, class });
                        if lattice.excludes_all_proper(&seen) {
                            cert.verdict = Verdict::Proven;
                            break;
                        }
                    }
                }
                Err(reason) => cert.rejected.push((ell, reason)),
            }
        }
        ell += 2;
    }
    Ok(cert)
}

fn tuple_class(ps: &[QSymplecticPoly], ell: u64) -> Result<std::result::Result<Vec<SignedCycleType>, RejectReason>> {
    let mut class = Vec::with_capacity(ps.len());
    for p in ps {
        match frobenius_cycle_type(p, ell)? {
            Ok(t) => class.push(t),
            Err(r) => return Ok(Err(r)),
        }
    }
    Ok(Ok(class))
}

fn shares_root(a: &QSymplecticPoly, b: &QSymplecticPoly) -> bool {
    let g: ZPoly = a.to_zpoly().gcd(&b.to_zpoly());
    g.degree().unwrap_or(0) > 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::group::W2gGroup;
    use crate::galois::lattice::closure;
    use std::collections::HashSet;

    fn poly(c: &[i64], q: u64) -> QSymplecticPoly {
        QSymplecticPoly::from_i64(c, q).unwrap()
    }

    #[test]
    fn cycle_type_examples() {
        let p = poly(&[1, -2, 5], 5);
        assert_eq!(frobenius_cycle_type(&p, 3).unwrap().unwrap().to_string(), "1-");
        assert_eq!(frobenius_cycle_type(&p, 13).unwrap().unwrap().to_string(), "1+");
        assert_eq!(frobenius_cycle_type(&p, 5).unwrap(), Err(RejectReason::DividesQ));
        assert!(frobenius_cycle_type(&p, 9).is_err());
    }

    #[test]
    fn certificate_examples() {
        let c = maximality_certificate(&poly(&[1, -2, 5], 5), DEFAULT_ELL_BUDGET).unwrap();
        assert_eq!(c.verdict, Verdict::Proven);
        assert_eq!(c.witnesses.last().unwrap().ell, 3);

        let prod = poly(&[1, -1, 8, -5, 25], 5);
        let c = maximality_certificate(&prod, 1000).unwrap();
        assert_eq!(c.verdict, Verdict::Undetermined);

        let sq = poly(&[1, -4, 14, -20, 25], 5);
        assert_eq!(maximality_certificate(&sq, 50), Err(CoreError::NotSeparable));
    }

    #[test]
    fn trace_zero() {
        assert!(!trace_is_zero(&poly(&[1, -2, 5], 5)));
        assert!(trace_is_zero(&poly(&[1, 0, 5], 5)));
        let a = poly(&[1, 0, 5], 5);
        let b = poly(&[1, 1, 5], 5);
        // (1+5T^2)(1+T+5T^2) has c_1 = 1 but one factor has zero trace
        assert!(!trace_is_zero(&a.mul(&b).unwrap()));
        assert!(some_trace_is_zero(&[a, b]));
    }

    #[test]
    fn tuple_examples() {
        let a = poly(&[1, -2, 5], 5);
        let b = poly(&[1, 1, 5], 5);
        let c = tuple_certificate(&[a.clone(), b.clone()], DEFAULT_ELL_BUDGET).unwrap();
        assert_eq!(c.verdict, Verdict::Proven);
        assert_eq!(tuple_certificate(&[a.clone(), a.clone()], 50), Err(CoreError::SharedRoots(0, 1)));
        let five: Vec<_> = (-2..=2).map(|a| poly(&[1, a, 5], 5)).collect();
        let c = tuple_certificate(&five, 50).unwrap();
        assert_eq!(c.verdict, Verdict::Undetermined);
        assert!(c.note.unwrap().starts_with("TooLarge"));
    }

    /// Independent check: no subgroup generated by at most three elements
    /// meets all witnessed classes unless it is the whole group.
    fn brute_force_sound(g: usize, witnessed: &[Vec<SignedCycleType>]) -> bool {
        let w = W2gGroup::power(g, 1).unwrap();
        let n = w.order();
        let ids: Vec<usize> = witnessed.iter().map(|c| w.class_id(c).unwrap()).collect();
        let mut tried = HashSet::new();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let h = closure(&w, &[a, b, c]);
                    if h.count() == n || !tried.insert(h.clone()) {
                        continue;
                    }
                    let met: HashSet<usize> = (0..n).filter(|&x| h.get(x)).map(|x| w.class_of(x)).collect();
                    if ids.iter().all(|i| met.contains(i)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn proven_certificates_survive_brute_force() {
        for (c, q) in [(vec![1, -2, 5], 5u64), (vec![1, 1, 8, 5, 25], 5), (vec![1, 1, 3, 8, 21, 49, 343], 7)] {
            let p = poly(&c, q);
            if !p.is_squarefree() {
                continue;
            }
            let cert = maximality_certificate(&p, 400).unwrap();
            if cert.verdict == Verdict::Proven && p.g() <= 3 {
                let classes: Vec<_> = cert.witnesses.iter().map(|w| w.class.clone()).collect();
                assert!(brute_force_sound(p.g(), &classes));
            }
        }
    }
}
