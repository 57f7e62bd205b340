//! Enumerate Galois quartic fields up to a discriminant bound and tabulate
//! M(O_K) against the normalized growth rates.
//!
//!     cargo run --release --example enumerate_fields -- 100000

use quartic_mahler::fields::{enumerate_biquadratic, enumerate_cyclic, QuarticField, Signature};
use quartic_mahler::measure::PrecisionContext;
use quartic_mahler::search::min_mahler;
use rayon::prelude::*;

fn main() -> quartic_mahler::Result<()> {
    let e: u128 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let ctx = PrecisionContext::default();
    for sig in [Signature::TotallyReal, Signature::TotallyImaginary] {
        let mut fields: Vec<QuarticField> = enumerate_cyclic(e, sig).into_iter().map(Into::into).collect();
        fields.extend(enumerate_biquadratic(e, sig).into_iter().map(QuarticField::from));
        fields.sort_by_key(|f| f.disc());
        let ms: Vec<f64> = fields.par_iter().map(|f| min_mahler(f, &ctx).map(|r| r.m)).collect::<Result<_, _>>()?;

        println!("{sig} fields with D_K <= {e}: {}", fields.len());
        println!("{:>9}  {:<24} {:>12} {:>9} {:>9}", "D_K", "field", "M", "M/D^1/4", "M/D^1/6");
        for (f, m) in fields.iter().zip(&ms).take(25) {
            let d = f.disc() as f64;
            println!("{:>9}  {:<24} {:>12.4} {:>9.4} {:>9.4}", f.disc(), f.to_string(), m, m / d.powf(0.25), m / d.powf(1.0 / 6.0));
        }
        if fields.len() > 25 {
            println!("  ... {} more", fields.len() - 25);
        }
        println!();
    }
    Ok(())
}
