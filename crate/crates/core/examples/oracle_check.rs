//! The pruned two-phase search against a plain scan of the same box.
//!
//!     cargo run --release --example oracle_check -- 10000

use quartic_mahler::cli::oracle_rows;
use quartic_mahler::measure::PrecisionContext;

fn main() -> quartic_mahler::Result<()> {
    let e: u128 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let rows = oracle_rows(e, &PrecisionContext::default())?;
    for r in rows.iter().take(12) {
        println!("{:<26} D_K={:<7} M={:<12.6} {:?} {}", r.field, r.disc, r.m, r.coords, if r.agree { "=" } else { "MISMATCH" });
    }
    let bad = rows.iter().filter(|r| !r.agree).count();
    println!("{} fields, {} disagreements", rows.len(), bad);
    Ok(())
}
