//! M(O_K) for one field, with its minimizer and every bound that applies.
//!
//!     cargo run --example compute_field -- cyclic 1 1 2 5
//!     cargo run --example compute_field -- biquadratic -7 -14

use quartic_mahler::fields::{canonicalize_biquadratic, classify_cyclic, QuarticField};
use quartic_mahler::measure::{theoretical_bounds, PrecisionContext};
use quartic_mahler::search::min_mahler;

fn main() -> quartic_mahler::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let ints: Vec<i64> = args.iter().skip(1).filter_map(|s| s.parse().ok()).collect();
    let field: QuarticField = match (args.first().map(String::as_str), ints.as_slice()) {
        (Some("biquadratic"), &[d1, d2]) => canonicalize_biquadratic(d1, d2)?.into(),
        (Some("cyclic"), &[a, b, c, d]) => classify_cyclic(a, b, c, d)?.into(),
        _ => classify_cyclic(1, 1, 2, 5)?.into(),
    };

    let best = min_mahler(&field, &PrecisionContext::default())?;
    println!("{field}  ({} {}), D_K = {}", field.signature(), field.kind(), field.disc());
    println!("M(O_K) = {:.9}", best.m);
    println!("minimizer {}  with minimal polynomial {}", best.generator, best.minimal_polynomial);
    println!("{} integral generators measured, final bound {:.3}", best.scanned, best.bound);

    let bounds = theoretical_bounds(&field);
    for t in &bounds.lower_terms {
        println!("  {:>10.6} <= M   [{}]", t.value, t.name);
    }
    println!("  M <= {:.6}   [{}]", bounds.upper.value, bounds.upper.name);
    Ok(())
}
