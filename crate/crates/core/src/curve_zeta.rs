//! Point counts of `y^2 = f(x)(x - t)` and their L-polynomials.

use frobrel_arith::field::Elem;
use frobrel_arith::{FieldCtx, ModPoly, DEFAULT_ENUM_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::weil_poly::QSymplecticPoly;

/// The curve `y^2 = h(x)` with `h = f(x)(x - t)` over `F_q`, `q = p^e`.
///
/// `f` is a monic integer polynomial of even degree `2g` (low-to-high);
/// `t` is an element of the default model of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    f: Vec<i64>,
    t: Elem,
    p: u64,
    e: u32,
    cap: u64,
}

impl CurveSpec {
    pub fn new(f: Vec<i64>, t: Elem, p: u64, e: u32) -> Result<Self> {
        Self::with_cap(f, t, p, e, DEFAULT_ENUM_CAP)
    }

    pub fn with_cap(f: Vec<i64>, t: Elem, p: u64, e: u32, cap: u64) -> Result<Self> {
        let base = FieldCtx::with_cap(p, e, cap)?;
        if f.last() != Some(&1) {
            return Err(CoreError::InvalidInput("f must be monic".into()));
        }
        if (f.len() - 1) % 2 == 1 {
            return Err(CoreError::InvalidInput("f must have even degree".into()));
        }
        if t >= base.order() {
            return Err(CoreError::InvalidInput(format!("t = {t} is not an element of F_{}", base.order())));
        }
        if !ModPoly::from_i64(p, &f).is_squarefree() {
            return Err(CoreError::SingularCurve(format!("disc(f) vanishes mod {p}")));
        }
        let fc: Vec<Elem> = f.iter().map(|&c| base.from_int(c)).collect();
        if base.eval(&fc, t) == 0 {
            return Err(CoreError::SingularCurve(format!("f(t) = 0 for t = {t}")));
        }
        Ok(Self { f, t, p, e, cap })
    }

    pub fn f(&self) -> &[i64] {
        &self.f
    }

    pub fn t(&self) -> Elem {
        self.t
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn genus(&self) -> usize {
        (self.f.len() - 1) / 2
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn base_field(&self) -> FieldCtx {
        FieldCtx::with_cap(self.p, self.e, self.cap).expect("validated at construction")
    }

    /// Coefficients of `h = f (x - t)` in `target`, which must contain `F_q`.
    fn h_in(&self, target: &FieldCtx) -> Result<Vec<Elem>> {
        let base = self.base_field();
        let t = if target.degree() == self.e && target.modulus() == base.modulus() {
            self.t
        } else {
            target.embedding_of(&base)?.apply(target, self.t)
        };
        let f: Vec<Elem> = self.f.iter().map(|&c| target.from_int(c)).collect();
        // (x - t) f
        let mut h = vec![0; f.len() + 1];
        for (i, &c) in f.iter().enumerate() {
            h[i + 1] = target.add(h[i + 1], c);
            h[i] = target.sub(h[i], target.mul(c, t));
        }
        Ok(h)
    }
}

fn checked_order(spec: &CurveSpec, n: u32) -> Result<u64> {
    let q = spec.q() as u128;
    let qn = q.checked_pow(n).filter(|&v| v <= spec.cap as u128);
    qn.map(|v| v as u64).ok_or_else(|| {
        CoreError::TooLarge(format!("q^n = {}^{} exceeds the cap {}", spec.q(), n, spec.cap))
    })
}

/// `#C(F_{q^n}) = q^n + 1 + sum_x chi_2(h(x))`.
pub fn curve_count(spec: &CurveSpec, n: u32) -> Result<i64> {
    if n == 0 {
        return Err(CoreError::InvalidInput("n must be at least 1".into()));
    }
    checked_order(spec, n)?;
    let field = FieldCtx::with_cap(spec.p, spec.e * n, spec.cap)?;
    curve_count_in(spec, &field)
}

/// Count over a caller-supplied model of `F_{q^n}` (any defining polynomial).
pub fn curve_count_in(spec: &CurveSpec, field: &FieldCtx) -> Result<i64> {
    if field.characteristic() != spec.p || field.degree() % spec.e != 0 {
        return Err(CoreError::InvalidInput("field does not contain F_q".into()));
    }
    let h = spec.h_in(field)?;
    let mut s: i64 = 0;
    for x in field.elements() {
        s += field.quadratic_character(field.eval(&h, x)) as i64;
    }
    Ok(field.order() as i64 + 1 + s)
}

/// Rebuild `P(T) = sum (-1)^i e_i T^i` from power sums `s_1..s_g` and the functional equation.
pub fn newton_reconstruct(s: &[BigRational], q: u64, g: usize) -> Result<Vec<BigInt>> {
    if s.len() < g {
        return Err(CoreError::InvalidInput(format!("need {g} power sums, got {}", s.len())));
    }
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for i in 1..=g {
        let mut acc = BigRational::zero();
        for j in 1..=i {
            let term = &e[i - j] * &s[j - 1];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(i)));
    }
    let mut c = vec![BigInt::zero(); 2 * g + 1];
    for (i, ei) in e.iter().enumerate() {
        if !ei.is_integer() {
            return Err(CoreError::NonIntegralCoefficient(i));
        }
        let v = ei.to_integer();
        c[i] = if i % 2 == 1 { -v } else { v };
    }
    let qb = BigInt::from(q);
    for i in 0..g {
        c[2 * g - i] = qb.pow((g - i) as u32) * &c[i];
    }
    Ok(c)
}

/// Integer power sums convenience wrapper.
pub fn newton_reconstruct_int(s: &[i64], q: u64, g: usize) -> Result<Vec<BigInt>> {
    let s: Vec<BigRational> = s.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
    newton_reconstruct(&s, q, g)
}

/// The L-polynomial from the counts over `F_{q^n}`, `n = 1..g`.
pub fn lpolynomial(spec: &CurveSpec) -> Result<QSymplecticPoly> {
    let g = spec.genus();
    if g > 0 {
        checked_order(spec, g as u32)?;
    }
    let q = spec.q();
    let mut s = Vec::with_capacity(g);
    for n in 1..=g as u32 {
        let count = curve_count(spec, n)?;
        let qn = BigInt::from(q).pow(n);
        s.push(BigRational::from_integer(qn + 1 - count));
    }
    let c = newton_reconstruct(&s, q, g)?;
    QSymplecticPoly::new(c, q)
}

/// Power sums `s_n = sum alpha^n` for `n = 1..=n_max` from the coefficients.
pub fn power_sums(p: &QSymplecticPoly, n_max: usize) -> Vec<BigInt> {
    let c = p.coeffs();
    // e_i = (-1)^i c_i
    let e = |i: usize| -> BigInt {
        let v = c.get(i).cloned().unwrap_or_default();
        if i % 2 == 1 {
            -v
        } else {
            v
        }
    };
    let mut s: Vec<BigInt> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for i in 1..n {
            let term = e(i) * &s[n - i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = e(n) * BigInt::from(n);
        if n % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        s.push(acc);
    }
    s
}

/// Weil interval check `|#C - q^n - 1| <= 2g q^{n/2}`, decided exactly.
pub fn within_weil_bound(count: i64, q: u64, n: u32, g: usize) -> bool {
    let dev: BigInt = BigInt::from(count) - BigInt::from(q).pow(n) - 1;
    let dev = dev.abs();
    // dev^2 <= 4 g^2 q^n
    &dev * &dev <= BigInt::from(4 * g * g) * BigInt::from(q).pow(n)
}
