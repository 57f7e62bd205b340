//! Liouville constants for real quadratic irrationals, certified exactly
//! against random rationals.
//!
//!     cargo run --example liouville

use num_rational::BigRational;
use quartic_mahler::measure::{liouville_mu, QuadraticSurd};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> quartic_mahler::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, d, q) in [(0, 2, 1), (1, 5, 2), (3, 7, 5), (-2, 13, 3)] {
        let s = QuadraticSurd::new(p, d, q)?;
        let c = liouville_mu(&s);
        let lower: &BigRational = &c.lower;
        let trials = 10_000;
        let held = (0..trials)
            .filter(|_| {
                let y = rng.gen_range(1..=1000i64);
                let x = (s.value() * y as f64).round() as i64 + rng.gen_range(-2..=2);
                s.separated(x, y, lower)
            })
            .count();
        println!("({p} + √{d})/{q} ≈ {:.6}: mu = {:.6}, certificate {lower}, held {held}/{trials}", s.value(), c.mu);
    }
    Ok(())
}
