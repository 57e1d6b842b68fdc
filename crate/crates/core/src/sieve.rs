//! Sieve constants and exceptional-set bounds.
//!
//! Every bound carries an unknown implied constant; `Bound` keeps the
//! `x O(1)` tag attached so that printed values are never read as exact.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// `C = 12 N 2^r (3 + r delta)^{N+1}`.
pub fn constant_c(n: u64, r: u64, delta: u64) -> Result<BigInt> {
    if n == 0 || r == 0 || delta == 0 {
        return Err(CoreError::InvalidInput("N, r and delta must be at least 1".into()));
    }
    let base = BigInt::from(3 + r * delta);
    let pow = num_traits::pow(base, (n + 1) as usize);
    Ok(BigInt::from(12 * n) * (BigInt::one() << r as usize) * pow)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Single curve in a one-parameter family.
    Prop1,
    /// `k`-tuples of curves.
    Th2,
    /// Chebotarev route through maximal tori.
    Tori,
}

impl FromStr for Method {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prop1" => Ok(Method::Prop1),
            "th2" => Ok(Method::Th2),
            "tori" => Ok(Method::Tori),
            _ => Err(CoreError::UnknownMethod(s.to_string())),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Prop1 => "prop1",
            Method::Th2 => "th2",
            Method::Tori => "tori",
        })
    }
}

pub fn exponent_gamma(method: Method, g: u64, k: u64) -> Result<u64> {
    if g == 0 || k == 0 {
        return Err(CoreError::InvalidInput("g and k must be at least 1".into()));
    }
    Ok(match method {
        Method::Prop1 => 4 * g * g + 2 * g + 4,
        Method::Th2 => 29 * k * g * g,
        Method::Tori => 2 * (6 * g * g * k + 1),
    })
}

/// Bound on the exponent `A` for `k` copies of `Sp(2g)`.
pub fn exponent_a(g: u64, k: u64) -> u64 {
    29 * k * g * g
}

fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 60;
    (x >> shift as usize).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `L` with `C L^A = q^{1/2}`, i.e. `(q C^{-2})^{1/(2A)}`.
pub fn choose_l(q: f64, c: &BigInt, a: f64) -> f64 {
    ((q.ln() - 2.0 * ln_big(c)) / (2.0 * a)).exp()
}

/// A bound known up to an unspecified multiplicative constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4e} x O(1)", self.value)
    }
}

/// `q^{d - 1/gamma} log q`.
pub fn sieve_bound(q: f64, d: u32, gamma: f64) -> Bound {
    Bound { value: q.powf(d as f64 - 1.0 / gamma) * q.ln() }
}

/// `(q^d + C L^A q^{d-1/2}) / H`.
pub fn large_sieve_bound(q: f64, d: u32, c: &BigInt, a: f64, l: f64, h: f64) -> Bound {
    let qd = q.powf(d as f64);
    let second = (ln_big(c) + a * l.ln() + (d as f64 - 0.5) * q.ln()).exp();
    Bound { value: (qd + second) / h }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveParams {
    pub n: u64,
    pub r: u64,
    pub delta: u64,
    pub g: u64,
    pub k: u64,
    pub q: u64,
    pub d: u32,
    pub c: String,
    pub a: u64,
    pub gamma: u64,
    pub l: f64,
    /// `L < 2`: the sieve gives nothing at this `q`.
    pub sub_threshold: bool,
}

impl SieveParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(n: u64, r: u64, delta: u64, g: u64, k: u64, q: u64, d: u32, method: Method) -> Result<Self> {
        let c = constant_c(n, r, delta)?;
        let a = exponent_a(g, k);
        let gamma = exponent_gamma(method, g, k)?;
        let l = choose_l(q as f64, &c, a as f64);
        Ok(Self { n, r, delta, g, k, q, d, c: c.to_string(), a, gamma, l, sub_threshold: l < 2.0 })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub g: u64,
    pub k: u64,
    pub q: u64,
    pub gamma_th2: u64,
    pub bound_th2: f64,
    pub gamma_tori: u64,
    pub bound_tori: f64,
    pub implied_constant: String,
}

/// Exceptional-set bounds `q^{k - 1/gamma} log q` for both routes.
pub fn comparison_table(gs: &[u64], ks: &[u64], qs: &[u64]) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    for &g in gs {
        for &k in ks {
            let gamma_th2 = exponent_gamma(Method::Th2, g, k)?;
            let gamma_tori = exponent_gamma(Method::Tori, g, k)?;
            for &q in qs {
                rows.push(ComparisonRow {
                    g,
                    k,
                    q,
                    gamma_th2,
                    bound_th2: sieve_bound(q as f64, k as u32, gamma_th2 as f64).value,
                    gamma_tori,
                    bound_tori: sieve_bound(q as f64, k as u32, gamma_tori as f64).value,
                    implied_constant: "O(1)".into(),
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_table_csv<W: Write>(rows: &[ComparisonRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| CoreError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constants() {
        assert_eq!(constant_c(2, 1, 5).unwrap(), BigInt::from(24576));
        assert_eq!(constant_c(1, 1, 1).unwrap(), BigInt::from(384));
        assert!(matches!(constant_c(0, 1, 1), Err(CoreError::InvalidInput(_))));
        assert_eq!(exponent_gamma(Method::Prop1, 1, 1).unwrap(), 10);
        assert_eq!(exponent_gamma(Method::Th2, 2, 1).unwrap(), 116);
        assert_eq!(exponent_gamma(Method::Tori, 2, 1).unwrap(), 50);
        assert!(matches!("chebotarev".parse::<Method>(), Err(CoreError::UnknownMethod(_))));
        assert_eq!("tori".parse::<Method>().unwrap(), Method::Tori);
    }

    #[test]
    fn choose_l_values() {
        assert!((choose_l(25.0, &BigInt::one(), 1.0) - 5.0).abs() < 1e-12);
        let l = choose_l(5f64.powi(8), &BigInt::from(24576), 58.0);
        // (5^8 / 24576^2)^(1/116)
        let direct = (390625.0f64 / 603979776.0).powf(1.0 / 116.0);
        assert!((l - direct).abs() < 1e-12);
        assert!(l < 1.0);
        let p = SieveParams::new(2, 1, 5, 1, 2, 390625, 1, Method::Th2).unwrap();
        assert_eq!(p.a, 58);
        assert!(p.sub_threshold);
        // huge C goes through the log path
        let c = constant_c(200, 3, 7).unwrap();
        assert!(choose_l(1e300, &c, 10.0).is_finite());
    }

    #[test]
    fn sieve_bound_values() {
        let b = sieve_bound(5f64.powi(8), 1, 10.0);
        let direct = 5f64.powf(7.2) * (5f64.powi(8)).ln();
        assert!((b.value - direct).abs() / direct < 1e-12);
        assert!(format!("{b}").ends_with("x O(1)"));
        let lim = sieve_bound(1e6, 1, 1e12).value;
        assert!((lim / (1e6 * 1e6f64.ln()) - 1.0).abs() < 1e-9);
        let big = large_sieve_bound(1e6, 1, &BigInt::from(384), 2.0, 3.0, 1.0).value;
        assert!((big - (1e6 + 384.0 * 9.0 * 1e3)).abs() < 1e-6);
    }

    #[test]
    fn table_csv() {
        let rows = comparison_table(&[1, 2], &[1], &[25, 49]).unwrap();
        assert_eq!(rows.len(), 4);
        let mut buf = Vec::new();
        write_table_csv(&rows, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 5);
        assert!(s.starts_with("g,k,q,gamma_th2,bound_th2,gamma_tori,bound_tori,implied_constant\n"));
    }

    proptest! {
        #[test]
        fn bound_monotone_in_gamma(q in 3.0f64..1e9, d in 1u32..4, g1 in 1.0f64..1e3, dg in 0.0f64..1e3) {
            prop_assert!(sieve_bound(q, d, g1).value <= sieve_bound(q, d, g1 + dg).value * (1.0 + 1e-12));
        }

        #[test]
        fn l_monotone_in_q(q in 2.0f64..1e12, f in 1.0f64..100.0, a in 1.0f64..100.0) {
            let c = BigInt::from(384);
            prop_assert!(choose_l(q, &c, a) <= choose_l(q * f, &c, a) * (1.0 + 1e-12));
        }
    }
}
