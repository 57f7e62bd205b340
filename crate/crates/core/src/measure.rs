//! Mahler measures, discriminant bounds and Liouville constants.
//!
//! Conjugates are evaluated in binary fixed point on `BigInt`s. Every basis
//! vector is either real or purely imaginary under the principal embedding,
//! so an element's value splits cleanly into real and imaginary sums.
//! Precision doubles until two successive measures agree.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{BasisParams, FieldElement};
use crate::fields::{BiquadraticField, CyclicQuarticField, QuarticField, Signature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    pub bits: u32,
    pub max_bits: u32,
    pub rel_tol: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { bits: 128, max_bits: 2048, rel_tol: 1e-12 }
    }
}

impl PrecisionContext {
    pub fn with_bits(bits: u32) -> Self {
        Self { bits: bits.max(64), max_bits: bits.max(2048), ..Self::default() }
    }
}

/// Basis values scaled by `2^bits`, with a flag for the imaginary ones.
struct FixedBasis {
    mag: [BigInt; 4],
    imag: [bool; 4],
}

fn isqrt_big(n: &BigInt) -> BigInt {
    n.sqrt()
}

impl FixedBasis {
    fn new(params: BasisParams, bits: u32) -> Self {
        let one = BigInt::one() << bits;
        let root = |v: i64| isqrt_big(&(BigInt::from(v.unsigned_abs()) << (2 * bits)));
        match params {
            BasisParams::Biquadratic { radicands: [r1, r2, r3] } => Self {
                mag: [one, root(r1), root(r2), root(r3)],
                imag: [false, r1 < 0, r2 < 0, r3 < 0],
            },
            BasisParams::Cyclic { a, b, d, .. } => {
                let sd = root(d);
                let dd = BigInt::from(d) << bits;
                let aa = BigInt::from(a.unsigned_abs());
                let rho = isqrt_big(&((&aa * (&dd + &sd * b)) << bits));
                let sigma = isqrt_big(&((&aa * (&dd - &sd * b)) << bits));
                Self { mag: [one, sd, rho, sigma], imag: [false, false, a < 0, a < 0] }
            }
        }
    }

    /// `(re, im)` of the element, scaled by `2^bits`.
    fn value(&self, coords: &[BigRational; 4]) -> (BigInt, BigInt) {
        let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
        for i in 0..4 {
            if coords[i].is_zero() {
                continue;
            }
            let t = (coords[i].numer() * &self.mag[i]).div_floor(coords[i].denom());
            if self.imag[i] {
                im += t;
            } else {
                re += t;
            }
        }
        (re, im)
    }

    fn modulus(&self, coords: &[BigRational; 4]) -> BigInt {
        let (re, im) = self.value(coords);
        isqrt_big(&(&re * &re + &im * &im))
    }
}

fn fixed_to_f64(v: &BigInt, bits: u32) -> f64 {
    let drop = bits.saturating_sub(64);
    let top = (v >> drop).to_f64().unwrap_or(f64::INFINITY);
    top / 2f64.powi((bits - drop) as i32)
}

fn distinct_conjugates(u: &FieldElement) -> Vec<FieldElement> {
    let mut out: Vec<FieldElement> = Vec::new();
    for c in u.conjugates() {
        if !out.iter().any(|o| o.coords() == c.coords()) {
            out.push(c);
        }
    }
    out
}

fn measure_at(u: &FieldElement, leading: &BigInt, bits: u32) -> f64 {
    let fb = FixedBasis::new(u.basis().params(), bits);
    let one = BigInt::one() << bits;
    let mut prod = one.clone();
    for c in distinct_conjugates(u) {
        let m = fb.modulus(c.coords());
        if m > one {
            prod = (prod * m) >> bits;
        }
    }
    fixed_to_f64(&(prod * leading), bits)
}

/// Moduli of the four conjugates `(|α₁|, …, |α₄|)` at the given precision.
pub fn conjugate_moduli(u: &FieldElement, bits: u32) -> [f64; 4] {
    let fb = FixedBasis::new(u.basis().params(), bits);
    u.conjugates().map(|c| fixed_to_f64(&fb.modulus(c.coords()), bits))
}

/// Mahler measure of `u`'s content-1 minimal polynomial, together with the
/// precision at which it stabilized.
pub fn mahler_measure_detailed(u: &FieldElement, ctx: &PrecisionContext) -> Result<(f64, u32)> {
    if u.is_zero() {
        return Err(Error::ZeroElement);
    }
    let poly = u.minimal_polynomial();
    if poly.is_cyclotomic() {
        return Ok((1.0, 0));
    }
    let leading = poly.leading().clone();
    let mut bits = ctx.bits.max(64);
    let mut prev = measure_at(u, &leading, bits);
    while bits < ctx.max_bits {
        bits *= 2;
        let next = measure_at(u, &leading, bits);
        let settled = (next - prev).abs() <= ctx.rel_tol * next.abs();
        prev = next;
        if settled {
            break;
        }
    }
    Ok((prev, bits))
}

pub fn mahler_measure(u: &FieldElement, ctx: &PrecisionContext) -> Result<f64> {
    mahler_measure_detailed(u, ctx).map(|(m, _)| m)
}

/// `M′(u) = M(u) / c(u)`, the measure with the leading coefficient removed.
pub fn m_prime(u: &FieldElement, ctx: &PrecisionContext) -> Result<f64> {
    let m = mahler_measure(u, ctx)?;
    let c = u.minimal_polynomial().leading().to_f64().unwrap_or(f64::INFINITY);
    Ok(m / c)
}

/// `c_K = (2/π)^{r₂} √D_K`.
pub fn c_k(field: &QuarticField) -> f64 {
    let root = (field.disc() as f64).sqrt();
    match field.signature() {
        Signature::TotallyReal => root,
        Signature::TotallyImaginary => (2.0 / PI).powi(2) * root,
    }
}

/// Real quadratic irrational `(p + √d) / q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub p: i64,
    pub d: i64,
    pub q: i64,
}

impl QuadraticSurd {
    pub fn new(p: i64, d: i64, q: i64) -> Result<Self> {
        let r = crate::arith::isqrt(d.max(0) as u64) as i64;
        if d <= 0 || r * r == d || q == 0 {
            return Err(Error::Usage(format!("({p} + √{d})/{q} is not a real quadratic irrational")));
        }
        Ok(Self { p, d, q })
    }

    pub fn value(&self) -> f64 {
        (self.p as f64 + (self.d as f64).sqrt()) / self.q as f64
    }

    pub fn conjugate(&self) -> f64 {
        (self.p as f64 - (self.d as f64).sqrt()) / self.q as f64
    }

    /// `(a₂, a₁, a₀)` of the content-1 minimal polynomial with `a₂ > 0`.
    pub fn minimal_polynomial(&self) -> [BigInt; 3] {
        let (p, d, q) = (BigInt::from(self.p), BigInt::from(self.d), BigInt::from(self.q));
        let c = [&q * &q, BigInt::from(-2) * &p * &q, &p * &p - &d];
        let g = c.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        c.map(|v| v / &g)
    }

    /// Exact test of `|x/y − α| ≥ bound / y²`.
    pub fn separated(&self, x: i64, y: i64, bound: &BigRational) -> bool {
        assert!(y > 0);
        let big = |v: i64| BigRational::from_integer(BigInt::from(v));
        // α − x/y = (√d − w)/q with w = q·x/y − p.
        let w = big(self.q) * big(x) / big(y) - big(self.p);
        let e = bound * big(self.q.abs()) / (big(y) * big(y));
        let d = big(self.d);
        // |√d − w| ≥ e  ⟺  √d ≥ w + e  or  √d ≤ w − e
        let above = &w + &e;
        let below = &w - &e;
        let ge = above <= BigRational::zero() || &above * &above <= d;
        let le = below >= BigRational::zero() && &below * &below >= d;
        ge || le
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleConstant {
    /// `μ = 1 / (a₂ (1 + |α| + |α′|))`.
    pub mu: f64,
    /// A rational number `≤ μ`.
    pub lower: BigRational,
}

pub fn liouville_mu(s: &QuadraticSurd) -> LiouvilleConstant {
    let [a2, _, _] = s.minimal_polynomial();
    let a2f = a2.to_f64().unwrap_or(f64::INFINITY);
    let mu = 1.0 / (a2f * (1.0 + s.value().abs() + s.conjugate().abs()));
    // |α| + |α′| = 2·max(|p|, √d)/|q| ≤ 2·max(|p|, ⌈√d⌉)/|q|
    let r = crate::arith::isqrt(s.d as u64) as i64;
    let ceil_root = if r * r == s.d { r } else { r + 1 };
    let top = s.p.abs().max(ceil_root);
    let q = BigInt::from(s.q.abs());
    let lower = BigRational::new(q.clone(), a2 * (q + BigInt::from(2 * top)));
    LiouvilleConstant { mu, lower }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundTerm {
    pub name: &'static str,
    pub value: f64,
}

/// Lower and upper bounds for `M(𝒪_K)` that apply to one field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSet {
    pub lower_terms: Vec<BoundTerm>,
    pub upper: BoundTerm,
}

impl BoundSet {
    pub fn lower(&self) -> f64 {
        self.lower_terms.iter().map(|t| t.value).fold(0.0, f64::max)
    }

    pub fn best_lower(&self) -> &BoundTerm {
        self.lower_terms
            .iter()
            .max_by(|a, b| a.value.total_cmp(&b.value))
            .expect("at least one lower bound")
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.lower_terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    /// Whether `lower ≤ m ≤ upper` up to a relative slack.
    pub fn admits(&self, m: f64, rel_tol: f64) -> bool {
        m >= self.lower() * (1.0 - rel_tol) && m <= self.upper.value * (1.0 + rel_tol)
    }
}

pub fn theoretical_bounds(field: &QuarticField) -> BoundSet {
    let disc = field.disc() as f64;
    let mut lower = Vec::new();
    let mut push = |name: &'static str, value: f64| lower.push(BoundTerm { name, value });
    match field.signature() {
        Signature::TotallyReal => push("2^(-4/3) D^(1/6)", 2f64.powf(-4.0 / 3.0) * disc.powf(1.0 / 6.0)),
        Signature::TotallyImaginary => push("2^(-12/5) D^(1/5)", 2f64.powf(-12.0 / 5.0) * disc.powf(0.2)),
    }
    match field {
        QuarticField::Biquadratic(f) => biquadratic_terms(f, disc, &mut push),
        QuarticField::Cyclic(f) => cyclic_terms(f, disc, &mut push),
    }
    let upper = if field.signature().is_real() {
        BoundTerm { name: "D^(1/2)", value: disc.sqrt() }
    } else if field.has_torsion() {
        BoundTerm { name: "(2/pi)^2 D^(1/2)", value: c_k(field) }
    } else {
        BoundTerm { name: "D", value: disc }
    };
    BoundSet { lower_terms: lower, upper }
}

fn biquadratic_terms(f: &BiquadraticField, disc: f64, push: &mut impl FnMut(&'static str, f64)) {
    let (l, n) = (f.l as f64, f.n as f64);
    match f.signature {
        Signature::TotallyReal => {
            push("n/48", n / 48.0);
            if f.l == 1 {
                push("D^(1/4)/(96 sqrt2)", disc.powf(0.25) / (96.0 * SQRT_2));
            }
        }
        Signature::TotallyImaginary => {
            push("l n/256", l * n / 256.0);
            if f.l > f.n {
                push("l^2/2304", l * l / 2304.0);
            }
            push("D^(1/4)/(512 sqrt2)", disc.powf(0.25) / (512.0 * SQRT_2));
            push("sqrt(l) D^(1/4)/(512 sqrt2)", l.sqrt() * disc.powf(0.25) / (512.0 * SQRT_2));
            if f.m == 1 {
                push("D^(1/2)/2048", disc.sqrt() / 2048.0);
            }
        }
    }
}

fn cyclic_terms(f: &CyclicQuarticField, disc: f64, push: &mut impl FnMut(&'static str, f64)) {
    let (a, d) = (f.a.unsigned_abs() as f64, f.d as f64);
    match f.signature {
        Signature::TotallyReal => push("A sqrt(D)/48", a * d.sqrt() / 48.0),
        Signature::TotallyImaginary => {
            push("D^(1/3)/128", disc.cbrt() / 128.0);
            push("A^2 D/2304", a * a * d / 2304.0);
            push("|A|^(4/3) D^(1/3)/14630", a.powf(4.0 / 3.0) * disc.cbrt() / 14630.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{canonicalize_biquadratic, classify_cyclic};

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn sqrt2_plus_sqrt3() {
        let f = canonicalize_biquadratic(2, 3).unwrap();
        let u = FieldElement::from_ints(f.basis(), [0, 1, 1, 0]);
        let m = mahler_measure(&u, &ctx()).unwrap();
        assert!((m - (5.0 + 2.0 * 6f64.sqrt())).abs() < 1e-12);
        for c in u.conjugates() {
            assert!((mahler_measure(&c, &ctx()).unwrap() - m).abs() < 1e-12);
            assert!((mahler_measure(&c.neg(), &ctx()).unwrap() - m).abs() < 1e-12);
        }
    }

    #[test]
    fn trivial_measures() {
        let f = canonicalize_biquadratic(2, 3).unwrap();
        let one = FieldElement::from_ints(f.basis(), [1, 0, 0, 0]);
        assert_eq!(mahler_measure(&one, &ctx()).unwrap(), 1.0);
        let zero = FieldElement::from_ints(f.basis(), [0, 0, 0, 0]);
        assert_eq!(mahler_measure(&zero, &ctx()), Err(Error::ZeroElement));
        let half = FieldElement::from_quarters(f.basis(), [0, 2, 0, 0]);
        assert!((mahler_measure(&half, &ctx()).unwrap() - 2.0).abs() < 1e-12);
        assert!((m_prime(&half, &ctx()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeta5_is_cyclotomic() {
        let f = classify_cyclic(-1, 2, 1, 5).unwrap();
        let z = FieldElement::from_quarters(f.basis(), [-1, 1, 1, 1]);
        assert!(z.is_integral().unwrap());
        assert!((z.to_complex() - num_complex::Complex64::from_polar(1.0, 2.0 * PI / 5.0)).norm() < 1e-12);
        assert_eq!(mahler_measure(&z, &ctx()).unwrap(), 1.0);
    }

    #[test]
    fn worked_imaginary_example() {
        let f = canonicalize_biquadratic(-7, -14).unwrap();
        let b = f.basis();
        // basis order follows the canonical radicands
        let idx = |r: i64| 1 + f.radicands().iter().position(|&x| x == r).unwrap();
        let mut xa = [2, 0, 0, 0];
        xa[idx(-7)] = 2;
        xa[idx(-14)] = 2;
        xa[idx(2)] = 2;
        let mut xb = [0; 4];
        xb[idx(-7)] = 2;
        xb[idx(-14)] = 2;
        let alpha = FieldElement::from_quarters(b, xa);
        let beta = FieldElement::from_quarters(b, xb);
        assert!(alpha.is_integral().unwrap());
        assert!(!beta.is_integral().unwrap());
        assert!((m_prime(&alpha, &ctx()).unwrap() - 11.66).abs() < 0.01);
        assert!((m_prime(&beta, &ctx()).unwrap() - 10.20).abs() < 0.01);
    }

    #[test]
    fn c_k_values() {
        let z5: QuarticField = classify_cyclic(-1, 2, 1, 5).unwrap().into();
        assert!((c_k(&z5) - 4.531).abs() < 1e-3);
        let f: QuarticField = canonicalize_biquadratic(2, 3).unwrap().into();
        assert_eq!(c_k(&f), 48.0);
    }

    #[test]
    fn liouville_examples() {
        let s2 = QuadraticSurd::new(0, 2, 1).unwrap();
        let mu = liouville_mu(&s2);
        assert!((mu.mu - 1.0 / (1.0 + 2.0 * SQRT_2)).abs() < 1e-15);
        assert!(mu.lower.to_f64().unwrap() <= mu.mu);
        // √(m/l) = √(ml)/l
        let (m, l) = (7i64, 3i64);
        let s = QuadraticSurd::new(0, m * l, l).unwrap();
        let mu = liouville_mu(&s);
        let exact = 1.0 / (l as f64 + 2.0 * ((m * l) as f64).sqrt());
        assert!((mu.mu - exact).abs() < 1e-15);
        assert!(mu.mu >= 1.0 / (3.0 * ((m * l) as f64).sqrt()));
        // (√D − B)/C with D = B² + C²
        let (b, c) = (2i64, 3i64);
        let d = b * b + c * c;
        let s = QuadraticSurd::new(-b, d, c).unwrap();
        assert!(liouville_mu(&s).mu >= 1.0 / (c as f64 + 2.0 * (d as f64).sqrt()));
        assert!(QuadraticSurd::new(1, 4, 1).is_err());
    }

    #[test]
    fn separation_is_exact() {
        let s = QuadraticSurd::new(0, 2, 1).unwrap();
        let tiny = BigRational::new(1.into(), 10.into());
        assert!(s.separated(3, 2, &tiny));
        // 99/70 approximates √2 to within 7.2e-5 = 0.36/70²
        assert!(!s.separated(99, 70, &BigRational::new(1.into(), 2.into())));
        assert!(s.separated(99, 70, &BigRational::new(1.into(), 3.into())));
    }

    #[test]
    fn bounds_examples() {
        let f: QuarticField = canonicalize_biquadratic(2, 3).unwrap().into();
        let b = theoretical_bounds(&f);
        let expect = (2f64.powf(-4.0 / 3.0) * 2304f64.powf(1.0 / 6.0)).max(3.0 / 48.0);
        assert!((b.lower() - expect).abs() < 1e-12);
        assert_eq!(b.upper.value, 48.0);
        for k in [1i64, 3, 5] {
            let f: QuarticField = classify_cyclic(-k, 1, 1, 2).unwrap().into();
            let b = theoretical_bounds(&f);
            assert!(b.term("A^2 D/2304").unwrap() >= (k * k * 2) as f64 / 2304.0 - 1e-12);
            assert!(b.lower() <= b.upper.value);
        }
        let f: QuarticField = canonicalize_biquadratic(2, 15).unwrap().into();
        assert!(theoretical_bounds(&f).upper.value <= 16.0 * 15.0);
    }

    #[test]
    fn escalation_settles() {
        let f = classify_cyclic(3, 2, 1, 5).unwrap();
        let u = FieldElement::from_quarters(f.basis(), [1, 1, 1, 1]);
        let (m, bits) = mahler_measure_detailed(&u, &ctx()).unwrap();
        assert!(bits >= 256);
        let hi = mahler_measure(&u, &PrecisionContext::with_bits(1024)).unwrap();
        assert!((m - hi).abs() <= 1e-12 * hi);
    }
}
