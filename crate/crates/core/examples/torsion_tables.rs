//! Explicit generators below c_K for biquadratic fields containing √-1 or
//! √-3, the two bespoke tables, and a sweep over square-free k.
//!
//!     cargo run --release --example torsion_tables -- 200

use quartic_mahler::measure::PrecisionContext;
use quartic_mahler::rootsofunity::{reproduce_tables, sweep};

fn main() -> quartic_mahler::Result<()> {
    let kmax: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let ctx = PrecisionContext::default();

    for (i, table) in reproduce_tables(&ctx)?.iter().enumerate() {
        println!("table {}", i + 1);
        for r in table {
            println!("  k={:<3} {:<30} M={:>6.2} c_K={:>6.2}  printed {}/{}", r.k, r.alpha, r.m, r.c_k, r.printed.0, r.printed.1);
        }
    }

    let rows = sweep(kmax, &ctx)?;
    let worst = rows.iter().max_by(|a, b| (a.m / a.c_k).total_cmp(&(b.m / b.c_k))).expect("nonempty");
    println!(
        "\nsweep k <= {kmax}: {} generators, {} above c_K; largest M/c_K = {:.4} at k={} {} ({})",
        rows.len(),
        rows.iter().filter(|r| !r.ok()).count(),
        worst.m / worst.c_k,
        worst.k,
        worst.root,
        worst.template
    );
    Ok(())
}
