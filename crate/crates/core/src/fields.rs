//! Galois quartic fields: canonical parameters, discriminants, integral
//! lattices and enumeration by discriminant.
//!
//! Biquadratic fields are `Q(√(ml), √(nl))` with pairwise coprime square-free
//! `l, m, n`; totally imaginary ones store positive `l, m, n` with radicands
//! `−ml, −nl, mn`. Cyclic quartic fields are `Q(√(A(D + B√D)))` with `A` odd
//! square-free, `D = B² + C²` square-free, `B, C > 0` and `gcd(A, D) = 1`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, icbrt, is_squarefree, isqrt, squarefree_part};
use crate::error::{Error, Result};
use crate::exactfield::{AmbientBasis, IntegralityRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Signature {
    TotallyReal,
    TotallyImaginary,
}

impl Signature {
    pub fn is_real(self) -> bool {
        self == Signature::TotallyReal
    }
}

impl std::str::FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" | "totally-real" => Ok(Signature::TotallyReal),
            "imaginary" | "totally-imaginary" => Ok(Signature::TotallyImaginary),
            _ => Err(Error::Usage(format!("unknown signature `{s}` (expected real|imaginary)"))),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_real() { "real" } else { "imaginary" })
    }
}

/// Residues mod 4 of the basis pair `(r1, r2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BiquadraticCase {
    C11,
    C12,
    C23,
    C33,
}

impl BiquadraticCase {
    fn of(r1: i64, r2: i64) -> Option<Self> {
        match (r1.rem_euclid(4), r2.rem_euclid(4)) {
            (1, 1) => Some(Self::C11),
            (1, 2) => Some(Self::C12),
            (2, 3) => Some(Self::C23),
            (3, 3) => Some(Self::C33),
            _ => None,
        }
    }

    pub fn disc_constant(self) -> u128 {
        match self {
            Self::C11 => 1,
            Self::C12 | Self::C33 => 16,
            Self::C23 => 64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BiquadraticField {
    pub l: u64,
    pub m: u64,
    pub n: u64,
    pub signature: Signature,
    pub case: BiquadraticCase,
    pub c: u128,
    pub disc: u128,
    basis: Arc<AmbientBasis>,
    radicands: [i64; 3],
}

impl BiquadraticField {
    /// Radicands `(r1, r2, r3)` in basis order.
    pub fn radicands(&self) -> [i64; 3] {
        self.radicands
    }

    pub fn basis(&self) -> &Arc<AmbientBasis> {
        &self.basis
    }

    /// Whether the field contains `√−1` or `√−3`.
    pub fn has_torsion(&self) -> bool {
        self.radicands.iter().any(|&r| r == -1 || r == -3)
    }

    /// Sorted radicand triple; equal for every presentation of the field.
    pub fn key(&self) -> [i64; 3] {
        let mut k = self.radicands;
        k.sort_unstable();
        k
    }
}

/// Builds `Q(√d1, √d2)` in canonical form.
pub fn canonicalize_biquadratic(d1: i64, d2: i64) -> Result<BiquadraticField> {
    for d in [d1, d2] {
        if d == 0 || !is_squarefree(d) {
            return Err(Error::InvalidField(format!("{d} is not square-free")));
        }
        if d == 1 {
            return Err(Error::InvalidField("radicand 1 gives a quadratic field".into()));
        }
    }
    let prod = d1.checked_mul(d2).ok_or_else(|| Error::Overflow(format!("{d1}*{d2}")))?;
    let d3 = squarefree_part(prod);
    if d1 == d2 || d3 == 1 {
        return Err(Error::InvalidField(format!("Q(√{d1}, √{d2}) is not quartic")));
    }
    let rads = [d1, d2, d3];
    let positives: Vec<i64> = rads.iter().copied().filter(|&r| r > 0).collect();
    let (signature, l, m, n) = if positives.len() == 3 {
        let mut g = [gcd(d1, d2), gcd(d1, d3), gcd(d2, d3)].map(|v| v as u64);
        g.sort_unstable();
        (Signature::TotallyReal, g[0], g[1], g[2])
    } else {
        let neg: Vec<u64> = rads.iter().filter(|&&r| r < 0).map(|r| r.unsigned_abs()).collect();
        let l = neg[0].gcd_u64(neg[1]);
        let (a, b) = (neg[0] / l, neg[1] / l);
        (Signature::TotallyImaginary, l, a.min(b), a.max(b))
    };
    // Pick the ordered pair whose residues fall in the four normalized cases;
    // ties go to the smaller |r1|, then the smaller |r2|.
    let mut best: Option<(u64, u64, i64, i64, BiquadraticCase)> = None;
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            if let Some(case) = BiquadraticCase::of(rads[i], rads[j]) {
                let cand = (rads[i].unsigned_abs(), rads[j].unsigned_abs(), rads[i], rads[j], case);
                if best.as_ref().is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                    best = Some(cand);
                }
            }
        }
    }
    let (_, _, r1, r2, case) = best.expect("every biquadratic field has a normalized pair");
    let basis = AmbientBasis::biquadratic(r1, r2)?;
    let rule = match case {
        BiquadraticCase::C11 => {
            let kappa = basis.structure_constant(1, 2, 3);
            let w3 = if num_integer::Integer::mod_floor(&kappa, &4.into()) == 1.into() { 1 } else { -1 };
            IntegralityRule::ParitySum([1, -1, -1, w3])
        }
        BiquadraticCase::C12 => IntegralityRule::HalfPairs { pairs: vec![(0, 1), (2, 3)], even: vec![] },
        BiquadraticCase::C23 => IntegralityRule::HalfPairs { pairs: vec![(1, 3)], even: vec![0, 2] },
        BiquadraticCase::C33 => IntegralityRule::HalfPairs { pairs: vec![(0, 3), (1, 2)], even: vec![] },
    };
    let radicands = match basis.params() {
        crate::exactfield::BasisParams::Biquadratic { radicands } => radicands,
        _ => unreachable!(),
    };
    let c = case.disc_constant();
    let lmn = l as u128 * m as u128 * n as u128;
    let disc = c
        .checked_mul(lmn.checked_mul(lmn).ok_or_else(|| Error::Overflow("(lmn)^2".into()))?)
        .ok_or_else(|| Error::Overflow("discriminant".into()))?;
    Ok(BiquadraticField {
        l,
        m,
        n,
        signature,
        case,
        c,
        disc,
        basis: Arc::new(basis.with_rule(rule)),
        radicands,
    })
}

trait GcdU64 {
    fn gcd_u64(self, other: u64) -> u64;
}

impl GcdU64 for u64 {
    fn gcd_u64(self, other: u64) -> u64 {
        num_integer::Integer::gcd(&self, &other)
    }
}

/// The five integral-basis cases for cyclic quartic fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CyclicCase {
    /// `D ≡ 0 (mod 2)`.
    DEven,
    /// `D` odd, `B` odd.
    BOdd,
    /// `B` even, `A + B ≡ 3 (mod 4)`.
    BEvenAb3,
    /// `B` even, `A + B ≡ 1 (mod 4)`, `A ≡ C (mod 4)`.
    BEvenAb1Plus,
    /// `B` even, `A + B ≡ 1 (mod 4)`, `A ≡ −C (mod 4)`.
    BEvenAb1Minus,
}

impl CyclicCase {
    pub fn disc_constant(self) -> u128 {
        match self {
            Self::DEven => 256,
            Self::BOdd => 64,
            Self::BEvenAb3 => 16,
            Self::BEvenAb1Plus | Self::BEvenAb1Minus => 1,
        }
    }

    fn rule(self) -> IntegralityRule {
        match self {
            Self::DEven => IntegralityRule::Plain,
            Self::BOdd => IntegralityRule::HalfPairs { pairs: vec![(0, 1)], even: vec![2, 3] },
            Self::BEvenAb3 => IntegralityRule::HalfPairs { pairs: vec![(0, 1), (2, 3)], even: vec![] },
            Self::BEvenAb1Plus => IntegralityRule::ParitySum([1, -1, -1, 1]),
            Self::BEvenAb1Minus => IntegralityRule::ParitySum([1, -1, -1, -1]),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CyclicQuarticField {
    pub a: i64,
    pub b: i64,
    pub c_param: i64,
    pub d: i64,
    pub signature: Signature,
    pub case: CyclicCase,
    pub c: u128,
    pub disc: u128,
    basis: Arc<AmbientBasis>,
}

impl CyclicQuarticField {
    pub fn basis(&self) -> &Arc<AmbientBasis> {
        &self.basis
    }

    /// Only `Q(ζ₅)` among cyclic quartics has roots of unity beyond ±1.
    pub fn has_torsion(&self) -> bool {
        (self.a, self.b, self.c_param, self.d) == (-1, 2, 1, 5)
    }

    pub fn key(&self) -> [i64; 4] {
        [self.a, self.b, self.c_param, self.d]
    }

    pub fn rho(&self) -> f64 {
        (self.a.unsigned_abs() as f64 * (self.d as f64 + self.b as f64 * (self.d as f64).sqrt())).sqrt()
    }

    pub fn sigma(&self) -> f64 {
        (self.a.unsigned_abs() as f64 * (self.d as f64 - self.b as f64 * (self.d as f64).sqrt())).sqrt()
    }
}

/// Validates `(A, B, C, D)` and assigns the basis case. An even `A` is first
/// reduced to `(A/2, C, B, D)`, which presents the same field.
pub fn classify_cyclic(a: i64, b: i64, c: i64, d: i64) -> Result<CyclicQuarticField> {
    let (a, b, c) = if a % 2 == 0 && a != 0 { (a / 2, c, b) } else { (a, b, c) };
    let bad = |why: &str| Err(Error::InvalidField(format!("({a},{b},{c},{d}): {why}")));
    if a == 0 || a % 2 == 0 || !is_squarefree(a) {
        return bad("A must be odd and square-free");
    }
    if b <= 0 || c <= 0 {
        return bad("B and C must be positive");
    }
    if b.checked_mul(b).and_then(|bb| c.checked_mul(c).and_then(|cc| bb.checked_add(cc))) != Some(d) {
        return bad("D must equal B² + C²");
    }
    if !is_squarefree(d) {
        return bad("D must be square-free");
    }
    if gcd(a, d) != 1 {
        return bad("gcd(A, D) must be 1");
    }
    let case = if d % 2 == 0 {
        CyclicCase::DEven
    } else if b % 2 != 0 {
        CyclicCase::BOdd
    } else if (a + b).rem_euclid(4) == 3 {
        CyclicCase::BEvenAb3
    } else if (a - c).rem_euclid(4) == 0 {
        CyclicCase::BEvenAb1Plus
    } else {
        CyclicCase::BEvenAb1Minus
    };
    let cc = case.disc_constant();
    let a2 = (a as i128 * a as i128) as u128;
    let d3 = (d as u128).checked_pow(3).ok_or_else(|| Error::Overflow("D^3".into()))?;
    let disc = cc
        .checked_mul(a2)
        .and_then(|v| v.checked_mul(d3))
        .ok_or_else(|| Error::Overflow("discriminant".into()))?;
    let basis = AmbientBasis::cyclic(a, b, c, d)?.with_rule(case.rule());
    Ok(CyclicQuarticField {
        a,
        b,
        c_param: c,
        d,
        signature: if a > 0 { Signature::TotallyReal } else { Signature::TotallyImaginary },
        case,
        c: cc,
        disc,
        basis: Arc::new(basis),
    })
}

/// Either kind of Galois quartic field.
#[derive(Debug, Clone)]
pub enum QuarticField {
    Biquadratic(BiquadraticField),
    Cyclic(CyclicQuarticField),
}

impl From<BiquadraticField> for QuarticField {
    fn from(f: BiquadraticField) -> Self {
        QuarticField::Biquadratic(f)
    }
}

impl From<CyclicQuarticField> for QuarticField {
    fn from(f: CyclicQuarticField) -> Self {
        QuarticField::Cyclic(f)
    }
}

impl QuarticField {
    pub fn basis(&self) -> &Arc<AmbientBasis> {
        match self {
            QuarticField::Biquadratic(f) => f.basis(),
            QuarticField::Cyclic(f) => f.basis(),
        }
    }

    pub fn disc(&self) -> u128 {
        match self {
            QuarticField::Biquadratic(f) => f.disc,
            QuarticField::Cyclic(f) => f.disc,
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            QuarticField::Biquadratic(f) => f.signature,
            QuarticField::Cyclic(f) => f.signature,
        }
    }

    pub fn disc_constant(&self) -> u128 {
        match self {
            QuarticField::Biquadratic(f) => f.c,
            QuarticField::Cyclic(f) => f.c,
        }
    }

    pub fn has_torsion(&self) -> bool {
        match self {
            QuarticField::Biquadratic(f) => f.has_torsion(),
            QuarticField::Cyclic(f) => f.has_torsion(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            QuarticField::Biquadratic(_) => "biquadratic",
            QuarticField::Cyclic(_) => "cyclic",
        }
    }

    /// Parameters as printed in tables: radicands or `(A,B,C,D)`.
    pub fn params(&self) -> Vec<i64> {
        match self {
            QuarticField::Biquadratic(f) => f.radicands().to_vec(),
            QuarticField::Cyclic(f) => f.key().to_vec(),
        }
    }
}

impl fmt::Display for QuarticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuarticField::Biquadratic(b) => {
                let [r1, r2, _] = b.radicands();
                write!(f, "Q(√{r1}, √{r2})")
            }
            QuarticField::Cyclic(c) => write!(f, "cyclic({}, {}, {}, {})", c.a, c.b, c.c_param, c.d),
        }
    }
}

/// Every cyclic quartic field of the given signature with `D_K ≤ bound`,
/// sorted by `(D_K, (A, B, C, D))`.
pub fn enumerate_cyclic(bound: u128, signature: Signature) -> Vec<CyclicQuarticField> {
    let e = bound.min(u64::MAX as u128) as u64;
    let dmax = icbrt(e) as i64;
    let amax = isqrt(e) as i64;
    let mut shapes = Vec::new();
    for d in 2..=dmax {
        if !is_squarefree(d) {
            continue;
        }
        for b in 1..=isqrt(d as u64) as i64 {
            let cc = d - b * b;
            let c = isqrt(cc.max(0) as u64) as i64;
            if c > 0 && c * c == cc {
                shapes.push((b, c, d));
            }
        }
    }
    let sign = if signature.is_real() { 1 } else { -1 };
    let mut out: Vec<CyclicQuarticField> = (0..(amax + 1) / 2)
        .into_par_iter()
        .flat_map_iter(|h| {
            let a = sign * (2 * h + 1);
            let ok = is_squarefree(a);
            shapes
                .iter()
                .filter(move |_| ok)
                .filter(move |&&(_, _, d)| gcd(a, d) == 1 && (a.unsigned_abs() as u128).pow(2) * (d as u128).pow(3) <= bound)
                .filter_map(move |&(b, c, d)| classify_cyclic(a, b, c, d).ok())
                .filter(move |f| f.disc <= bound)
        })
        .collect();
    out.sort_by_key(|f| (f.disc, f.key()));
    out
}

/// Every biquadratic field of the given signature with `D_K ≤ bound`,
/// sorted by `(D_K, sorted radicands)`.
pub fn enumerate_biquadratic(bound: u128, signature: Signature) -> Vec<BiquadraticField> {
    let lmn_max = isqrt(bound.min(u64::MAX as u128) as u64);
    let sf: Vec<u64> = (1..=lmn_max).filter(|&v| is_squarefree(v as i64)).collect();
    let coprime = |a: u64, b: u64| a.gcd_u64(b) == 1;
    let mut triples = Vec::new();
    for &m in &sf {
        for &n in sf.iter().filter(|&&n| n > m) {
            if m * n > lmn_max || !coprime(m, n) {
                continue;
            }
            for &l in &sf {
                if l * m * n > lmn_max {
                    break;
                }
                if !coprime(l, m) || !coprime(l, n) {
                    continue;
                }
                if signature.is_real() {
                    // l < m < n with l the smallest of three distinct values.
                    if l < m {
                        triples.push((l, m, n));
                    }
                } else {
                    triples.push((l, m, n));
                }
            }
        }
    }
    let mut out: Vec<BiquadraticField> = triples
        .into_par_iter()
        .filter_map(|(l, m, n)| {
            let (d1, d2) = if signature.is_real() {
                ((l * m) as i64, (l * n) as i64)
            } else {
                (-((m * l) as i64), -((n * l) as i64))
            };
            canonicalize_biquadratic(d1, d2).ok()
        })
        .filter(|f| f.disc <= bound)
        .collect();
    out.sort_by_key(|f| (f.disc, f.key()));
    out.dedup_by_key(|f| f.key());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FieldElement;
    use std::collections::BTreeSet;

    #[test]
    fn q_sqrt2_sqrt3() {
        let f = canonicalize_biquadratic(2, 3).unwrap();
        assert_eq!((f.l, f.m, f.n), (1, 2, 3));
        assert_eq!(f.case, BiquadraticCase::C23);
        assert_eq!((f.c, f.disc), (64, 2304));
        assert_eq!(f.radicands(), [2, 3, 6]);
        let u = FieldElement::from_quarters(f.basis(), [0, 2, 0, 2]);
        assert!(u.is_integral().unwrap());
    }

    #[test]
    fn zeta12_field() {
        let f = canonicalize_biquadratic(-1, -3).unwrap();
        assert_eq!(f.signature, Signature::TotallyImaginary);
        assert_eq!(f.disc, 144);
        assert!(f.has_torsion());
    }

    #[test]
    fn representation_invariance() {
        let a = canonicalize_biquadratic(6, 10).unwrap();
        let b = canonicalize_biquadratic(6, 15).unwrap();
        let c = canonicalize_biquadratic(15, 10).unwrap();
        assert_eq!(a.radicands(), b.radicands());
        assert_eq!(a.radicands(), c.radicands());
        assert_eq!((a.l, a.m, a.n), (2, 3, 5));
        let again = canonicalize_biquadratic(a.radicands()[0], a.radicands()[1]).unwrap();
        assert_eq!(again.radicands(), a.radicands());
    }

    #[test]
    fn imaginary_lmn_convention() {
        let f = canonicalize_biquadratic(-7, -14).unwrap();
        assert_eq!((f.l, f.m, f.n), (7, 1, 2));
        assert_eq!(f.disc, 3136);
        assert_eq!(f.case, BiquadraticCase::C12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(canonicalize_biquadratic(2, 8).is_err());
        assert!(canonicalize_biquadratic(3, 3).is_err());
        assert!(canonicalize_biquadratic(1, 3).is_err());
        assert!(canonicalize_biquadratic(12, 3).is_err());
    }

    #[test]
    fn cyclic_classification() {
        let f = classify_cyclic(1, 1, 2, 5).unwrap();
        assert_eq!((f.c, f.disc), (64, 8000));
        for k in [1i64, 3, 5, 7, 11] {
            let f = classify_cyclic(-k, 1, 1, 2).unwrap();
            assert_eq!(f.disc, 2048 * (k * k) as u128);
        }
        let z5 = classify_cyclic(-1, 2, 1, 5).unwrap();
        assert_eq!((z5.c, z5.disc), (1, 125));
        assert!(z5.has_torsion());
        assert!(classify_cyclic(1, 1, 2, 6).is_err());
        assert!(classify_cyclic(5, 1, 2, 5).is_err());
        assert!(classify_cyclic(9, 1, 2, 5).is_err());
        // even A reduces with B and C swapped
        let r = classify_cyclic(-2, 1, 2, 5).unwrap();
        assert_eq!(r.key(), [-1, 2, 1, 5]);
    }

    #[test]
    fn cyclic_enumeration_edges() {
        let at = enumerate_cyclic(125, Signature::TotallyImaginary);
        assert_eq!(at.len(), 1);
        assert_eq!(at[0].key(), [-1, 2, 1, 5]);
        assert!(enumerate_cyclic(124, Signature::TotallyImaginary).is_empty());
        let real = enumerate_cyclic(8000, Signature::TotallyReal);
        assert!(real.iter().any(|f| f.key() == [1, 1, 2, 5]));
        for f in &real {
            let ad = (f.a as i128).pow(2) as u128 * (f.d as u128).pow(3);
            assert!(ad <= f.disc && f.disc <= 256 * ad);
        }
    }

    #[test]
    fn smallest_biquadratics() {
        let r = enumerate_biquadratic(2304, Signature::TotallyReal);
        assert_eq!(r[0].radicands(), [5, 2, 10]);
        assert_eq!(r[0].disc, 1600);
        assert!(r.iter().any(|f| f.key() == [2, 3, 6]));
        let i = enumerate_biquadratic(144, Signature::TotallyImaginary);
        assert_eq!(i.len(), 1);
        assert_eq!(i[0].key(), [-3, -1, 3]);
    }

    /// Independent scan over all radicand pairs, deduplicated by key.
    fn brute_biquadratic(bound: u128) -> BTreeSet<(u128, [i64; 3])> {
        let r = isqrt(bound as u64) as i64;
        let mut out = BTreeSet::new();
        for d1 in -r..=r {
            for d2 in d1 + 1..=r {
                if let Ok(f) = canonicalize_biquadratic(d1, d2) {
                    if f.disc <= bound {
                        out.insert((f.disc, f.key()));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn biquadratic_enumeration_complete() {
        let bound = 10_000;
        let mut got = BTreeSet::new();
        for s in [Signature::TotallyReal, Signature::TotallyImaginary] {
            for f in enumerate_biquadratic(bound, s) {
                assert_eq!(f.signature, s);
                assert!(got.insert((f.disc, f.key())), "duplicate {:?}", f.key());
            }
        }
        assert_eq!(got, brute_biquadratic(bound));
    }

    #[test]
    fn cyclic_enumeration_complete() {
        let bound = 200_000u128;
        let mut brute = BTreeSet::new();
        for a in -500i64..=500 {
            for d in 2..=60i64 {
                for b in 1..8 {
                    for c in 1..8 {
                        if let Ok(f) = classify_cyclic(a, b, c, d) {
                            if f.disc <= bound && f.a == a {
                                brute.insert((f.disc, f.key()));
                            }
                        }
                    }
                }
            }
        }
        let mut got = BTreeSet::new();
        for s in [Signature::TotallyReal, Signature::TotallyImaginary] {
            for f in enumerate_cyclic(bound, s) {
                got.insert((f.disc, f.key()));
            }
        }
        assert_eq!(got, brute);
    }

    #[test]
    fn integrality_rules_match_minimal_polynomials() {
        let mut fields: Vec<QuarticField> = Vec::new();
        for (d1, d2) in [(2, 3), (5, 13), (-1, -3), (-7, -14), (3, 7), (-1, 5), (2, 5), (-5, -13), (-2, 3), (17, 21), (-3, 5)] {
            fields.push(canonicalize_biquadratic(d1, d2).unwrap().into());
        }
        for f in enumerate_biquadratic(40_000, Signature::TotallyReal).into_iter().take(20) {
            fields.push(f.into());
        }
        for f in enumerate_biquadratic(40_000, Signature::TotallyImaginary).into_iter().take(20) {
            fields.push(f.into());
        }
        for t in [(1, 1, 2, 5), (-1, 2, 1, 5), (3, 2, 1, 5), (1, 2, 1, 5), (-3, 2, 1, 5), (5, 1, 1, 2), (1, 2, 3, 13), (-1, 4, 1, 17), (3, 4, 1, 17), (-7, 1, 4, 17)] {
            fields.push(classify_cyclic(t.0, t.1, t.2, t.3).unwrap().into());
        }
        assert!(fields.len() >= 50);
        for f in &fields {
            let basis = f.basis();
            let mask = basis.rule().unwrap().residue_mask();
            for (idx, &expect) in mask.iter().enumerate() {
                let x = [0, 1, 2, 3].map(|i| ((idx >> (2 * i)) & 3) as i64);
                let u = FieldElement::from_quarters(basis, x);
                if u.is_zero() {
                    continue;
                }
                let monic = u.minimal_polynomial().is_monic();
                assert_eq!(monic, expect, "{f} at {x:?}");
            }
        }
    }
}
