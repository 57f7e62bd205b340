//! Exact arithmetic in Galois quartic fields.
//!
//! Elements are stored as four rational coordinates over an [`AmbientBasis`]:
//! `(1, √r1, √r2, √r3)` for biquadratic fields and `(1, √D, ρ, σ)` for cyclic
//! ones, where `ρ = √(A(D+B√D))` and `σ = √(A(D−B√D))`. Products come from an
//! integer structure table, Galois conjugation is a signed coordinate
//! permutation, and minimal polynomials are expanded from the conjugates.
//! Nothing here touches floating point except the construction-time sanity
//! check of the structure table against a numeric embedding.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisParams {
    /// Radicands `(r1, r2, r3)` of the basis `(1, √r1, √r2, √r3)`.
    Biquadratic { radicands: [i64; 3] },
    /// `K = Q(√(A(D + B√D)))` with `D = B² + C²`.
    Cyclic { a: i64, b: i64, c: i64, d: i64 },
}

/// A Galois automorphism acting on coordinates: `image[i] = sign[i] * x[perm[i]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: [usize; 4],
    pub sign: [i8; 4],
}

impl SignedPermutation {
    pub const IDENTITY: Self = Self {
        perm: [0, 1, 2, 3],
        sign: [1, 1, 1, 1],
    };

    pub fn apply<T: Clone + std::ops::Neg<Output = T>>(&self, x: &[T; 4]) -> [T; 4] {
        std::array::from_fn(|i| {
            let v = x[self.perm[i]].clone();
            if self.sign[i] < 0 {
                -v
            } else {
                v
            }
        })
    }
}

/// Congruence description of `𝒪_K` inside the quarter lattice `¼ℤ⁴`.
///
/// Integrality of `x/4` depends only on `x mod 4` because the basis vectors
/// themselves are integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegralityRule {
    /// Only the ℤ-span of the basis: every numerator divisible by 4.
    Plain,
    /// All numerators of the same parity and `Σ wᵢxᵢ ≡ 0 (mod 4)`.
    ParitySum([i64; 4]),
    /// All numerators even; for `z = x/2`, each pair is congruent mod 2 and
    /// the listed coordinates are even.
    HalfPairs {
        pairs: Vec<(usize, usize)>,
        even: Vec<usize>,
    },
}

impl IntegralityRule {
    pub fn accepts(&self, x: &[i64; 4]) -> bool {
        let r: [i64; 4] = x.map(|v| v.rem_euclid(4));
        match self {
            IntegralityRule::Plain => r.iter().all(|&v| v == 0),
            IntegralityRule::ParitySum(w) => {
                let p = r[0] % 2;
                r.iter().all(|&v| v % 2 == p)
                    && (0..4).map(|i| w[i] * r[i]).sum::<i64>().rem_euclid(4) == 0
            }
            IntegralityRule::HalfPairs { pairs, even } => {
                if r.iter().any(|&v| v % 2 != 0) {
                    return false;
                }
                let z = r.map(|v| v / 2);
                pairs.iter().all(|&(i, j)| z[i] == z[j]) && even.iter().all(|&i| z[i] == 0)
            }
        }
    }

    /// Table indexed by `Σ (xᵢ mod 4)·4ⁱ`.
    pub fn residue_mask(&self) -> [bool; 256] {
        std::array::from_fn(|idx| {
            let x = [0, 1, 2, 3].map(|i| ((idx >> (2 * i)) & 3) as i64);
            self.accepts(&x)
        })
    }
}

/// Basis data shared by every element of one field.
#[derive(Debug)]
pub struct AmbientBasis {
    params: BasisParams,
    /// Nonzero entries `(i, j, k, c)` of `eᵢ·eⱼ = Σ c·eₖ`.
    table: Vec<(usize, usize, usize, BigInt)>,
    autos: [SignedPermutation; 4],
    rule: Option<IntegralityRule>,
    values: [Complex64; 4],
    eps: i8,
}

impl PartialEq for AmbientBasis {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

fn principal_sqrt(v: f64) -> Complex64 {
    if v >= 0.0 {
        Complex64::new(v.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-v).sqrt())
    }
}

impl AmbientBasis {
    /// Basis `(1, √r1, √r2, √r3)` with `r3` the square-free part of `r1·r2`.
    pub fn biquadratic(r1: i64, r2: i64) -> Result<Self> {
        for r in [r1, r2] {
            if r == 1 || !arith::is_squarefree(r) {
                return Err(Error::InvalidField(format!("radicand {r} is not a square-free non-unit")));
            }
        }
        let prod = r1
            .checked_mul(r2)
            .ok_or_else(|| Error::Overflow(format!("{r1}*{r2}")))?;
        let r3 = arith::squarefree_part(prod);
        if r3 == 1 {
            return Err(Error::InvalidField(format!("Q(√{r1}, √{r2}) is quadratic")));
        }
        let r = [1, r1, r2, r3];
        let values = r.map(|v| principal_sqrt(v as f64));
        let mut table = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if i == 0 || j == 0 {
                    table.push((i, j, i + j, BigInt::one()));
                } else if i == j {
                    table.push((i, j, 0, BigInt::from(r[i])));
                } else {
                    let k = 6 - i - j;
                    let mag = BigInt::from(r[i]) * r[j] / r[k];
                    let mag = mag.abs().sqrt();
                    // √rᵢ√rⱼ picks up a sign only when both factors are imaginary.
                    let sign = if r[i] < 0 && r[j] < 0 { -1 } else { 1 };
                    table.push((i, j, k, mag * sign));
                }
            }
        }
        let autos = [
            SignedPermutation::IDENTITY,
            SignedPermutation { perm: [0, 1, 2, 3], sign: [1, -1, 1, -1] },
            SignedPermutation { perm: [0, 1, 2, 3], sign: [1, 1, -1, -1] },
            SignedPermutation { perm: [0, 1, 2, 3], sign: [1, -1, -1, 1] },
        ];
        let basis = Self {
            params: BasisParams::Biquadratic { radicands: [r1, r2, r3] },
            table,
            autos,
            rule: None,
            values,
            eps: 1,
        };
        basis.validate()?;
        Ok(basis)
    }

    /// Basis `(1, √D, ρ, σ)`. Only the algebraic consistency needed for the
    /// structure table is checked here; field-level conditions live in `fields`.
    pub fn cyclic(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a == 0 || b <= 0 || c <= 0 || d != b * b + c * c {
            return Err(Error::InvalidField(format!("({a},{b},{c},{d}) needs B,C > 0, D = B²+C², A ≠ 0")));
        }
        let sd = (d as f64).sqrt();
        let rho = principal_sqrt(a as f64 * (d as f64 + b as f64 * sd));
        let sigma = principal_sqrt(a as f64 * (d as f64 - b as f64 * sd));
        let values = [Complex64::new(1.0, 0.0), Complex64::new(sd, 0.0), rho, sigma];
        let target = (a as f64) * (c as f64) * sd;
        let eps: i8 = if (rho * sigma - target).norm() <= (rho * sigma + target).norm() { 1 } else { -1 };
        let e = BigInt::from(eps);
        let (a_, b_, c_, d_) = (BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d));
        let mut table = Vec::new();
        for i in 0..4 {
            table.push((0, i, i, BigInt::one()));
            if i > 0 {
                table.push((i, 0, i, BigInt::one()));
            }
        }
        let mut sym = |i: usize, j: usize, k: usize, v: BigInt| {
            if !v.is_zero() {
                table.push((i, j, k, v.clone()));
                if i != j {
                    table.push((j, i, k, v));
                }
            }
        };
        sym(1, 1, 0, d_.clone());
        sym(1, 2, 2, b_.clone());
        sym(1, 2, 3, &e * &c_);
        sym(1, 3, 2, &e * &c_);
        sym(1, 3, 3, -&b_);
        sym(2, 2, 0, &a_ * &d_);
        sym(2, 2, 1, &a_ * &b_);
        sym(3, 3, 0, &a_ * &d_);
        sym(3, 3, 1, -(&a_ * &b_));
        sym(2, 3, 1, &e * &a_ * &c_);
        // g: √D ↦ −√D, ρ ↦ σ, σ ↦ −ρ.
        let g = SignedPermutation { perm: [0, 1, 3, 2], sign: [1, -1, -1, 1] };
        let g2 = SignedPermutation { perm: [0, 1, 2, 3], sign: [1, 1, -1, -1] };
        let g3 = SignedPermutation { perm: [0, 1, 3, 2], sign: [1, -1, 1, -1] };
        let basis = Self {
            params: BasisParams::Cyclic { a, b, c, d },
            table,
            autos: [SignedPermutation::IDENTITY, g, g2, g3],
            rule: None,
            values,
            eps,
        };
        basis.validate()?;
        Ok(basis)
    }

    pub fn with_rule(mut self, rule: IntegralityRule) -> Self {
        self.rule = Some(rule);
        self
    }

    pub fn params(&self) -> BasisParams {
        self.params
    }

    pub fn rule(&self) -> Option<&IntegralityRule> {
        self.rule.as_ref()
    }

    pub fn automorphisms(&self) -> &[SignedPermutation; 4] {
        &self.autos
    }

    /// Values of the basis vectors under the principal embedding.
    pub fn values(&self) -> [Complex64; 4] {
        self.values
    }

    /// Sign `ε` in `ρσ = ε·A·C·√D`; always 1 for biquadratic bases.
    pub fn eps(&self) -> i8 {
        self.eps
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> BigInt {
        self.table
            .iter()
            .filter(|t| t.0 == i && t.1 == j && t.2 == k)
            .map(|t| t.3.clone())
            .sum()
    }

    fn product_ints(&self, u: &[BigInt; 4], v: &[BigInt; 4]) -> [BigInt; 4] {
        let mut w: [BigInt; 4] = Default::default();
        for (i, j, k, c) in &self.table {
            if !u[*i].is_zero() && !v[*j].is_zero() {
                w[*k] += &u[*i] * &v[*j] * c;
            }
        }
        w
    }

    fn validate(&self) -> Result<()> {
        let unit = |i: usize| -> [BigInt; 4] { std::array::from_fn(|k| BigInt::from((k == i) as i64)) };
        for i in 0..4 {
            for j in 0..4 {
                let p = self.product_ints(&unit(i), &unit(j));
                let lhs = self.values[i] * self.values[j];
                let rhs: Complex64 = (0..4)
                    .map(|k| self.values[k] * p[k].to_f64().unwrap_or(f64::NAN))
                    .sum();
                if (lhs - rhs).norm() > 1e-9 * (1.0 + lhs.norm()) {
                    return Err(Error::InvalidField(format!(
                        "structure table disagrees with the embedding at e{i}·e{j}"
                    )));
                }
                for g in &self.autos {
                    let lhs = g.apply(&p);
                    let rhs = self.product_ints(&g.apply(&unit(i)), &g.apply(&unit(j)));
                    if lhs != rhs {
                        return Err(Error::InvalidField("conjugation is not multiplicative".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Element `Σ coordsᵢ·eᵢ` of a quartic field.
#[derive(Clone)]
pub struct FieldElement {
    basis: Arc<AmbientBasis>,
    coords: [BigRational; 4],
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement{:?}", self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = match self.basis.params {
            BasisParams::Biquadratic { radicands: [r1, r2, r3] } => {
                ["1".to_string(), format!("√{r1}"), format!("√{r2}"), format!("√{r3}")]
            }
            BasisParams::Cyclic { d, .. } => ["1".into(), format!("√{d}"), "ρ".into(), "σ".into()],
        };
        if let Some(q) = self.quarter_coords() {
            write!(f, "¼({}, {}, {}, {})·({}, {}, {}, {})", q[0], q[1], q[2], q[3], names[0], names[1], names[2], names[3])
        } else {
            let c: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
            write!(f, "({})·({})", c.join(", "), names.join(", "))
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.basis == *other.basis && self.coords == other.coords
    }
}

impl FieldElement {
    pub fn new(basis: Arc<AmbientBasis>, coords: [BigRational; 4]) -> Self {
        Self { basis, coords }
    }

    /// The element `¼(x₀e₀ + x₁e₁ + x₂e₂ + x₃e₃)`.
    pub fn from_quarters(basis: &Arc<AmbientBasis>, x: [i64; 4]) -> Self {
        let coords = x.map(|v| BigRational::new(BigInt::from(v), BigInt::from(4)));
        Self::new(basis.clone(), coords)
    }

    pub fn from_ints(basis: &Arc<AmbientBasis>, x: [i64; 4]) -> Self {
        Self::new(basis.clone(), x.map(|v| BigRational::from_integer(v.into())))
    }

    pub fn from_rational(basis: &Arc<AmbientBasis>, q: BigRational) -> Self {
        let mut coords: [BigRational; 4] = Default::default();
        coords[0] = q;
        Self::new(basis.clone(), coords)
    }

    pub fn basis(&self) -> &Arc<AmbientBasis> {
        &self.basis
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.coords
    }

    /// Numerators over the common denominator 4, if the element lies in `¼ℤ⁴`.
    pub fn quarter_coords(&self) -> Option<[BigInt; 4]> {
        let four = BigRational::from_integer(BigInt::from(4));
        let mut out: [BigInt; 4] = Default::default();
        for (o, c) in out.iter_mut().zip(&self.coords) {
            let v = c * &four;
            if !v.is_integer() {
                return None;
            }
            *o = v.to_integer();
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis {
            Ok(())
        } else {
            Err(Error::MismatchedBasis)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = std::array::from_fn(|i| &self.coords[i] + &other.coords[i]);
        Ok(Self::new(self.basis.clone(), coords))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = std::array::from_fn(|i| &self.coords[i] - &other.coords[i]);
        Ok(Self::new(self.basis.clone(), coords))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.basis.clone(), self.coords.clone().map(|c| -c))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::new(self.basis.clone(), self.coords.clone().map(|c| c * q))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut w: [BigRational; 4] = Default::default();
        for (i, j, k, c) in &self.basis.table {
            let (a, b) = (&self.coords[*i], &other.coords[*j]);
            if !a.is_zero() && !b.is_zero() {
                w[*k] += a * b * BigRational::from_integer(c.clone());
            }
        }
        Ok(Self::new(self.basis.clone(), w))
    }

    /// Image under the `k`-th automorphism (0 is the identity).
    pub fn apply(&self, k: usize) -> Self {
        Self::new(self.basis.clone(), self.basis.autos[k].apply(&self.coords))
    }

    /// `(α₁, α₂, α₃, α₄)`: biquadratic images under id, τ₁, τ₂, τ₃; cyclic
    /// images under id, g, g², g³.
    pub fn conjugates(&self) -> [Self; 4] {
        std::array::from_fn(|k| self.apply(k))
    }

    fn distinct_conjugates(&self) -> Vec<Self> {
        let mut out: Vec<Self> = Vec::with_capacity(4);
        for c in self.conjugates() {
            if !out.iter().any(|o| o.coords == c.coords) {
                out.push(c);
            }
        }
        out
    }

    pub fn is_primitive(&self) -> bool {
        self.distinct_conjugates().len() == 4
    }

    /// Congruence test against the basis' integrality rule.
    pub fn is_integral(&self) -> Result<bool> {
        let rule = self.basis.rule.as_ref().ok_or(Error::MissingIntegralityRule)?;
        let Some(q) = self.quarter_coords() else {
            return Ok(false);
        };
        let four = BigInt::from(4);
        let r = q.map(|v| v.mod_floor(&four).to_i64().expect("residue fits"));
        Ok(rule.accepts(&r))
    }

    pub fn trace(&self) -> BigRational {
        self.conjugates().iter().map(|c| c.coords[0].clone()).sum()
    }

    pub fn norm(&self) -> BigRational {
        let c = self.conjugates();
        let mut p = c[0].clone();
        for x in &c[1..] {
            p = p.mul(x).expect("same basis");
        }
        debug_assert!(p.is_rational());
        p.coords[0].clone()
    }

    /// Value under the principal embedding, in double precision.
    pub fn to_complex(&self) -> Complex64 {
        (0..4)
            .map(|i| self.basis.values[i] * self.coords[i].to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Content-1 integer minimal polynomial, from the distinct conjugates.
    pub fn minimal_polynomial(&self) -> IntegerPolynomial {
        let conj = self.distinct_conjugates();
        // Coefficients of ∏(x − β), lowest degree first, as field elements.
        let one = FieldElement::from_rational(&self.basis, BigRational::one());
        let zero = FieldElement::from_rational(&self.basis, BigRational::zero());
        let mut poly = vec![one];
        for beta in &conj {
            let mut next = vec![zero.clone(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(c).expect("same basis");
                next[i] = next[i].sub(&c.mul(beta).expect("same basis")).expect("same basis");
            }
            poly = next;
        }
        let rational: Vec<BigRational> = poly
            .into_iter()
            .map(|c| {
                debug_assert!(c.is_rational(), "symmetric function left the base field");
                c.coords[0].clone()
            })
            .collect();
        IntegerPolynomial::from_rationals(&rational)
    }
}

/// Integer polynomial with coefficients listed from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    /// Clears denominators, removes content and makes the leading coefficient positive.
    pub fn from_rationals(c: &[BigRational]) -> Self {
        let lcm = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = c.iter().map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        Self::from_ints(ints)
    }

    pub fn from_ints(mut ints: Vec<BigInt>) -> Self {
        while ints.len() > 1 && ints.last().is_some_and(Zero::is_zero) {
            ints.pop();
        }
        let content = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if !content.is_zero() {
            let sign = if ints.last().is_some_and(|v| v.is_negative()) { -1 } else { 1 };
            let content = content * sign;
            for v in &mut ints {
                *v = &*v / &content;
            }
        }
        Self { coeffs: ints }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_ints(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Keeps the coefficients as given (no content or sign normalization).
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Self { coeffs }
    }

    /// `c·x^e`.
    pub fn monomial(c: i64, e: usize) -> Self {
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::from(c);
        Self::from_coeffs(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// Eisenstein at `p`, allowing a leading coefficient of ±1.
    pub fn is_eisenstein(&self, p: i64) -> bool {
        let p = BigInt::from(p);
        let n = self.degree();
        n >= 1
            && !(self.leading() % &p).is_zero()
            && self.coeffs[..n].iter().all(|c| (c % &p).is_zero())
            && !(&self.coeffs[0] % (&p * &p)).is_zero()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Whether this is one of the cyclotomic polynomials of degree ≤ 4.
    pub fn is_cyclotomic(&self) -> bool {
        const CYCLOTOMIC: [&[i64]; 9] = [
            &[-1, 1],
            &[1, 1],
            &[1, 0, 1],
            &[1, 1, 1],
            &[1, -1, 1],
            &[1, 1, 1, 1, 1],
            &[1, 0, 0, 0, 1],
            &[1, -1, 1, -1, 1],
            &[1, 0, -1, 0, 1],
        ];
        CYCLOTOMIC.iter().any(|c| *self == Self::from_i64(c))
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(i == 0 && first) {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coef = if mag.is_one() && i > 0 { String::new() } else { mag.to_string() };
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn radical_products() {
        let b = Arc::new(AmbientBasis::biquadratic(2, 3).unwrap());
        let s2 = FieldElement::from_ints(&b, [0, 1, 0, 0]);
        let s3 = FieldElement::from_ints(&b, [0, 0, 1, 0]);
        assert_eq!(s2.mul(&s3).unwrap(), FieldElement::from_ints(&b, [0, 0, 0, 1]));
        let one = FieldElement::from_ints(&b, [1, 0, 0, 0]);
        assert_eq!(one.mul(&s3).unwrap(), s3);
    }

    #[test]
    fn rho_sigma_product() {
        let b = Arc::new(AmbientBasis::cyclic(1, 1, 2, 5).unwrap());
        let rho = FieldElement::from_ints(&b, [0, 0, 1, 0]);
        let sigma = FieldElement::from_ints(&b, [0, 0, 0, 1]);
        assert_eq!(rho.mul(&sigma).unwrap(), FieldElement::from_ints(&b, [0, 2, 0, 0]));
        assert_eq!(b.eps(), 1);
    }

    #[test]
    fn imaginary_cyclic_sign() {
        let b = AmbientBasis::cyclic(-3, 1, 2, 5).unwrap();
        assert_eq!(b.eps(), 1);
        assert_eq!(b.structure_constant(2, 3, 1), BigInt::from(-6));
    }

    #[test]
    fn mismatched_bases() {
        let b1 = Arc::new(AmbientBasis::biquadratic(2, 3).unwrap());
        let b2 = Arc::new(AmbientBasis::biquadratic(2, 5).unwrap());
        let u = FieldElement::from_ints(&b1, [1, 1, 0, 0]);
        let v = FieldElement::from_ints(&b2, [1, 1, 0, 0]);
        assert_eq!(u.mul(&v).unwrap_err(), Error::MismatchedBasis);
    }

    #[test]
    fn conjugate_images() {
        let b = Arc::new(AmbientBasis::biquadratic(2, 3).unwrap());
        let u = FieldElement::from_ints(&b, [1, 2, 3, 4]);
        assert_eq!(u.conjugates()[1], FieldElement::from_ints(&b, [1, -2, 3, -4]));
        let r = FieldElement::from_ints(&b, [5, 0, 0, 0]);
        assert!(r.conjugates().iter().all(|c| *c == r));

        let c = Arc::new(AmbientBasis::cyclic(1, 1, 2, 5).unwrap());
        let u = FieldElement::from_ints(&c, [1, 2, 3, 4]);
        let conj = u.conjugates();
        assert_eq!(conj[3], FieldElement::from_ints(&c, [1, -2, 4, -3]));
        assert_eq!(conj[1], FieldElement::from_ints(&c, [1, -2, -4, 3]));
        // g has order exactly 4
        assert_ne!(conj[1].apply(1), u);
        assert_eq!(conj[1].apply(1).apply(1).apply(1), u);
    }

    #[test]
    fn minimal_polynomials() {
        let b = Arc::new(AmbientBasis::biquadratic(2, 3).unwrap());
        let u = FieldElement::from_ints(&b, [0, 1, 1, 0]);
        assert_eq!(u.minimal_polynomial(), IntegerPolynomial::from_i64(&[1, 0, -10, 0, 1]));
        let one = FieldElement::from_ints(&b, [1, 0, 0, 0]);
        assert_eq!(one.minimal_polynomial(), IntegerPolynomial::from_i64(&[-1, 1]));
        let half = FieldElement::new(b.clone(), [q(0, 1), q(1, 2), q(0, 1), q(0, 1)]);
        let p = half.minimal_polynomial();
        assert_eq!(p, IntegerPolynomial::from_i64(&[-1, 0, 2]));
        assert_eq!(p.to_string(), "2x^2 - 1");
    }

    #[test]
    fn primitivity() {
        let b = Arc::new(AmbientBasis::biquadratic(2, 3).unwrap());
        assert!(FieldElement::from_ints(&b, [0, 1, 1, 0]).is_primitive());
        assert!(!FieldElement::from_ints(&b, [5, 7, 0, 0]).is_primitive());
        let c = Arc::new(AmbientBasis::cyclic(1, 1, 2, 5).unwrap());
        assert!(!FieldElement::from_ints(&c, [3, 1, 0, 0]).is_primitive());
        assert!(FieldElement::from_ints(&c, [0, 0, 0, 1]).is_primitive());
    }

    #[test]
    fn integrality_needs_rule() {
        let b = Arc::new(AmbientBasis::biquadratic(2, 3).unwrap());
        let u = FieldElement::from_ints(&b, [0, 1, 1, 0]);
        assert_eq!(u.is_integral(), Err(Error::MissingIntegralityRule));
    }

    #[test]
    fn residue_mask_matches_accepts() {
        let rule = IntegralityRule::HalfPairs { pairs: vec![(1, 3)], even: vec![0, 2] };
        let mask = rule.residue_mask();
        assert!(mask[2 * 4 + 2 * 64]);
        assert_eq!(mask.iter().filter(|&&b| b).count(), 2);
    }

    #[test]
    fn trace_and_norm() {
        let b = Arc::new(AmbientBasis::biquadratic(2, 3).unwrap());
        let u = FieldElement::from_ints(&b, [0, 1, 1, 0]);
        assert_eq!(u.trace(), q(0, 1));
        assert_eq!(u.norm(), q(1, 1));
    }
}
