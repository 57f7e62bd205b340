//! Exhaustive search for `M(𝒪_K)`.
//!
//! Every integral generator is `¼(x₀e₀ + x₁e₁ + x₂e₂ + x₃e₃)` for integers
//! `xᵢ`. Its four conjugates always split as `s ± u` and `s′ ± u′`, where
//! `s, s′` depend only on an inner coordinate pair `(x₀, x_j)` and `u, u′`
//! only on an outer pair `(x_k, x_l)`. Because
//! `max(1,|s+u|)·max(1,|s−u|) ≥ max(1,|u|)` (real fields) and
//! `≥ max(1,u²)` (CM fields, where `u` is imaginary), each outer pair yields
//! explicit intervals for the inner pair. The scan runs over one
//! representative per orbit under `±Gal(K/Q)` and tightens the bound as
//! better generators turn up.
//!
//! [`min_mahler`] seeds the bound from a small non-negative window, then
//! exhausts the coefficient box for that bound. [`brute_force_min`] is a plain
//! nested loop over a box used as an independent oracle.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, IntegerPolynomial, SignedPermutation};
use crate::fields::QuarticField;
use crate::measure::{mahler_measure, PrecisionContext};

/// Relative slack used for pruning and for treating two measures as equal.
pub const TIE_TOL: f64 = 1e-9;

/// Per-coordinate bounds `|xᵢ| ≤ bounds[i]` for the quarter numerators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub bounds: [i64; 4],
    pub l: f64,
}

impl SearchBox {
    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|&b| (2 * b + 1) as f64).product()
    }
}

#[derive(Debug, Clone)]
pub struct MinimizationResult {
    pub field: QuarticField,
    pub generator: FieldElement,
    /// Canonical quarter numerators of the minimizer.
    pub coords: [i64; 4],
    pub m: f64,
    pub minimal_polynomial: IntegerPolynomial,
    /// Integral generators whose measure was evaluated.
    pub scanned: u64,
    /// Bound that drove the final box.
    pub bound: f64,
}

fn floor_i(x: f64) -> i64 {
    (x + 1e-9 * (1.0 + x.abs())).floor() as i64
}

fn ceil_i(x: f64) -> i64 {
    (x - 1e-9 * (1.0 + x.abs())).ceil() as i64
}

/// Box containing every integral generator of measure at most `l`.
///
/// Each coordinate is a signed sum of the four conjugates divided by the
/// basis value, and every conjugate has modulus `≤ l` (real fields) or
/// `≤ √l` (CM fields, where a conjugate and its complex conjugate both count).
pub fn search_box(field: &QuarticField, l: f64) -> Result<SearchBox> {
    if !(l >= 1.0) {
        return Err(Error::BoundTooSmall(l));
    }
    let r = if field.signature().is_real() { l } else { l.sqrt() };
    let e = field.basis().values().map(|v| v.norm());
    Ok(SearchBox { bounds: e.map(|v| floor_i(4.0 * r / v)), l })
}

/// Orbit of `x` under `±Gal(K/Q)`.
fn orbit(autos: &[SignedPermutation; 4], x: &[i64; 4]) -> [[i64; 4]; 8] {
    let mut out = [[0; 4]; 8];
    for (k, g) in autos.iter().enumerate() {
        let y = g.apply(x);
        out[2 * k] = y;
        out[2 * k + 1] = y.map(|v| -v);
    }
    out
}

/// Lexicographically largest member of the orbit; the leading coordinate is
/// therefore never negative.
pub fn canonical(autos: &[SignedPermutation; 4], x: &[i64; 4]) -> [i64; 4] {
    orbit(autos, x).into_iter().max().expect("nonempty orbit")
}

#[derive(Debug, Clone)]
struct Incumbent {
    best: f64,
    near: Vec<(f64, [i64; 4])>,
    scanned: u64,
}

impl Default for Incumbent {
    fn default() -> Self {
        Self { best: f64::INFINITY, near: Vec::new(), scanned: 0 }
    }
}

impl Incumbent {
    fn offer(&mut self, m: f64, canon: [i64; 4]) {
        if m > self.best * (1.0 + TIE_TOL) {
            return;
        }
        self.near.push((m, canon));
        if m < self.best {
            self.best = m;
            let cut = m * (1.0 + TIE_TOL);
            self.near.retain(|c| c.0 <= cut);
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.scanned += other.scanned;
        for (m, c) in other.near {
            self.offer(m, c);
        }
        self
    }

    /// Smallest canonical tuple among measures tied with the minimum.
    fn winner(&self) -> Option<(f64, [i64; 4])> {
        let cut = self.best * (1.0 + TIE_TOL);
        self.near
            .iter()
            .filter(|c| c.0 <= cut)
            .min_by(|a, b| a.1.cmp(&b.1))
            .copied()
    }
}

struct SharedBound(AtomicU64);

impl SharedBound {
    fn new(v: f64) -> Self {
        Self(AtomicU64::new(v.to_bits()))
    }

    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    fn lower_to(&self, v: f64) {
        let mut cur = self.0.load(Ordering::Relaxed);
        while v < f64::from_bits(cur) {
            match self.0.compare_exchange_weak(cur, v.to_bits(), Ordering::Relaxed, Ordering::Relaxed) {
                Ok(_) => break,
                Err(now) => cur = now,
            }
        }
    }
}

/// Double-precision view of a field tailored to the split `s ± u`, `s′ ± u′`.
struct Evaluator {
    cyclic: bool,
    imag: bool,
    j: usize,
    k: usize,
    l: usize,
    ej: f64,
    a: [f64; 2],
    b: [f64; 2],
    mask: [bool; 256],
    autos: [SignedPermutation; 4],
}

/// Coordinate ranges plus the orbit-representative restriction.
#[derive(Debug, Clone, Copy)]
struct Region {
    lo: [i64; 4],
    hi: [i64; 4],
    domain: bool,
}

impl Evaluator {
    fn new(field: &QuarticField) -> Self {
        let basis = field.basis();
        let e = basis.values().map(|v| v.norm());
        let imag = !field.signature().is_real();
        let (cyclic, j, k, l, a, b) = match field {
            QuarticField::Cyclic(_) => (true, 1, 2, 3, [e[2], e[3]], [e[3], -e[2]]),
            QuarticField::Biquadratic(f) => {
                let j = if imag { 1 + f.radicands().iter().position(|&r| r > 0).expect("one real radicand") } else { 1 };
                let mut rest = (1..4).filter(|&i| i != j);
                let (k, l) = (rest.next().unwrap(), rest.next().unwrap());
                (false, j, k, l, [e[k], e[l]], [e[k], -e[l]])
            }
        };
        Self {
            cyclic,
            imag,
            j,
            k,
            l,
            ej: e[j],
            a,
            b,
            mask: basis.rule().expect("classified field").residue_mask(),
            autos: *basis.automorphisms(),
        }
    }

    fn lb(&self, u: f64) -> f64 {
        if self.imag {
            (u * u).max(1.0)
        } else {
            u.abs().max(1.0)
        }
    }

    fn pair(&self, s: f64, u: f64) -> f64 {
        if self.imag {
            (s * s + u * u).max(1.0)
        } else {
            (s + u).abs().max(1.0) * (s - u).abs().max(1.0)
        }
    }

    fn primitive(&self, xj: i64, xk: i64, xl: i64) -> bool {
        if self.cyclic {
            xk != 0 || xl != 0
        } else {
            (xj != 0) as u8 + (xk != 0) as u8 + (xl != 0) as u8 >= 2
        }
    }

    /// `t` with `|p + q·t| ≤ r`.
    fn solve(p: f64, q: f64, r: f64) -> (f64, f64) {
        let (t1, t2) = ((-r - p) / q, (r - p) / q);
        (t1.min(t2), t1.max(t2))
    }

    fn scan_outer(&self, region: &Region, xk: i64, bound: &SharedBound) -> Incumbent {
        let mut inc = Incumbent::default();
        let (j, k, l) = (self.j, self.k, self.l);
        let xkf = xk as f64;
        let cap = |lim: f64| if self.imag { lim.sqrt() } else { lim };
        let lim = bound.get() * (1.0 + TIE_TOL);
        let (a1, a2) = Self::solve(self.a[0] * xkf, self.a[1], 4.0 * cap(lim));
        let (b1, b2) = Self::solve(self.b[0] * xkf, self.b[1], 4.0 * cap(lim));
        let mut lo_l = region.lo[l].max(ceil_i(a1.max(b1)));
        let hi_l = region.hi[l].min(floor_i(a2.min(b2)));
        if region.domain {
            lo_l = lo_l.max(0);
        }
        for xl in lo_l..=hi_l {
            let lim = bound.get() * (1.0 + TIE_TOL);
            let xlf = xl as f64;
            let u = (self.a[0] * xkf + self.a[1] * xlf) / 4.0;
            let up = (self.b[0] * xkf + self.b[1] * xlf) / 4.0;
            let (lbu, lbup) = (self.lb(u), self.lb(up));
            if lbu * lbup > lim {
                continue;
            }
            let smax = if self.imag { (lim / lbup - u * u).max(0.0).sqrt() } else { lim / lbup - u.abs() };
            let spmax = if self.imag { (lim / lbu - up * up).max(0.0).sqrt() } else { lim / lbu - up.abs() };
            if smax < 0.0 || spmax < 0.0 {
                continue;
            }
            let rj = 2.0 * (smax + spmax) / self.ej;
            let mut lo_j = region.lo[j].max(ceil_i(-rj));
            let hi_j = region.hi[j].min(floor_i(rj));
            if region.domain && !self.cyclic {
                lo_j = lo_j.max(0);
            }
            for xj in lo_j..=hi_j {
                if !self.primitive(xj, xk, xl) {
                    continue;
                }
                let t = xj as f64 * self.ej;
                let lo0 = (-4.0 * smax - t).max(-4.0 * spmax + t);
                let hi0 = (4.0 * smax - t).min(4.0 * spmax + t);
                let mut lo_0 = region.lo[0].max(ceil_i(lo0));
                let hi_0 = region.hi[0].min(floor_i(hi0));
                if region.domain && self.cyclic {
                    lo_0 = lo_0.max(if xj < 0 { 1 } else { 0 });
                }
                if lo_0 > hi_0 {
                    continue;
                }
                let mut x = [0i64; 4];
                x[j] = xj;
                x[k] = xk;
                x[l] = xl;
                let base = (x[1].rem_euclid(4) << 2) | (x[2].rem_euclid(4) << 4) | (x[3].rem_euclid(4) << 6);
                let allowed: [bool; 4] = std::array::from_fn(|r| self.mask[base as usize | r]);
                if !allowed.iter().any(|&v| v) {
                    continue;
                }
                for x0 in lo_0..=hi_0 {
                    if !allowed[x0.rem_euclid(4) as usize] {
                        continue;
                    }
                    let s = (x0 as f64 + t) / 4.0;
                    let sp = (x0 as f64 - t) / 4.0;
                    let m = self.pair(s, u) * self.pair(sp, up);
                    inc.scanned += 1;
                    let lim = bound.get() * (1.0 + TIE_TOL);
                    if m <= lim {
                        x[0] = x0;
                        inc.offer(m, canonical(&self.autos, &x));
                        bound.lower_to(m);
                    }
                }
            }
        }
        inc
    }

    fn run(&self, region: &Region, init: f64) -> Incumbent {
        let bound = SharedBound::new(init);
        let mut lo_k = region.lo[self.k];
        if region.domain {
            lo_k = lo_k.max(if self.cyclic { 1 } else { 0 });
        }
        let hi_k = region.hi[self.k];
        if lo_k > hi_k {
            return Incumbent::default();
        }
        (lo_k..=hi_k)
            .into_par_iter()
            .map(|xk| self.scan_outer(region, xk, &bound))
            .reduce(Incumbent::default, Incumbent::merge)
    }
}

fn finish(
    field: &QuarticField,
    inc: &Incumbent,
    bound: f64,
    ctx: &PrecisionContext,
) -> Result<MinimizationResult> {
    let (_, coords) = inc.winner().ok_or(Error::NoGenerator)?;
    let generator = FieldElement::from_quarters(field.basis(), coords);
    let m = mahler_measure(&generator, ctx)?;
    Ok(MinimizationResult {
        field: field.clone(),
        minimal_polynomial: generator.minimal_polynomial(),
        generator,
        coords,
        m,
        scanned: inc.scanned,
        bound,
    })
}

/// Side length of the non-negative seed window.
pub fn seed_window(field: &QuarticField) -> i64 {
    match field {
        QuarticField::Cyclic(f) => f.a.abs() + f.d,
        QuarticField::Biquadratic(f) => (f.l + f.m + f.n) as i64,
    }
}

/// Smallest measure among integral generators with `0 ≤ xᵢ ≤ w`.
pub fn seed_bound(field: &QuarticField, w: i64) -> Option<f64> {
    let ev = Evaluator::new(field);
    let region = Region { lo: [0; 4], hi: [w; 4], domain: false };
    let inc = ev.run(&region, f64::INFINITY);
    inc.winner().map(|(m, _)| m)
}

/// `M(𝒪_K)` with its canonical minimizer.
pub fn min_mahler(field: &QuarticField, ctx: &PrecisionContext) -> Result<MinimizationResult> {
    let mut w = seed_window(field);
    let seed = loop {
        if let Some(m) = seed_bound(field, w) {
            break m;
        }
        // Every field has integral generators with small non-negative
        // coordinates; widening only guards against degenerate windows.
        if w > 1 << 20 {
            return Err(Error::NoGenerator);
        }
        w *= 2;
    };
    min_mahler_with_bound(field, seed, ctx)
}

/// Exhausts `search_box(field, l)`; `l` must be at least `M(𝒪_K)`.
pub fn min_mahler_with_bound(field: &QuarticField, l: f64, ctx: &PrecisionContext) -> Result<MinimizationResult> {
    let bx = search_box(field, l.max(1.0))?;
    let ev = Evaluator::new(field);
    let region = Region { lo: bx.bounds.map(|b| -b), hi: bx.bounds, domain: true };
    let inc = ev.run(&region, bx.l);
    finish(field, &inc, bx.l, ctx)
}

/// Measure of the element with quarter numerators `x`, from its conjugates in
/// double precision; `None` unless `x` is an integral generator.
pub fn quick_measure(field: &QuarticField, x: &[i64; 4]) -> Option<f64> {
    let basis = field.basis();
    if !basis.rule()?.accepts(x) {
        return None;
    }
    let conj = basis.automorphisms().map(|g| g.apply(x));
    for i in 0..4 {
        for j in 0..i {
            if conj[i] == conj[j] {
                return None;
            }
        }
    }
    let e = basis.values();
    Some(
        conj.iter()
            .map(|c| {
                let v: Complex64 = (0..4).map(|i| e[i] * (c[i] as f64 / 4.0)).sum();
                v.norm().max(1.0)
            })
            .product(),
    )
}

/// Every lattice point of the box, no pruning or symmetry reduction.
pub fn brute_force_min(field: &QuarticField, bx: &SearchBox, ctx: &PrecisionContext) -> Result<MinimizationResult> {
    let autos = *field.basis().automorphisms();
    let [b0, b1, b2, b3] = bx.bounds;
    let inc = (-b0..=b0)
        .into_par_iter()
        .map(|x0| {
            let mut inc = Incumbent::default();
            for x1 in -b1..=b1 {
                for x2 in -b2..=b2 {
                    for x3 in -b3..=b3 {
                        let x = [x0, x1, x2, x3];
                        if let Some(m) = quick_measure(field, &x) {
                            inc.scanned += 1;
                            inc.offer(m, canonical(&autos, &x));
                        }
                    }
                }
            }
            inc
        })
        .reduce(Incumbent::default, Incumbent::merge);
    finish(field, &inc, bx.l, ctx)
}
