//! Write the real cyclic figure CSV (D_K, M, M D^-1/4, M D^-1/6, A, B, C, D)
//! and check the envelope 2^(-4/3) D^(1/6) <= M <= D^(1/2) on every row.
//!
//!     cargo run --release --example figure_data -- 100000 cyclic.csv

use quartic_mahler::cli::{figure_csv, measure_fields, range_fields, Kind};
use quartic_mahler::fields::Signature;
use quartic_mahler::measure::PrecisionContext;

fn main() -> quartic_mahler::Result<()> {
    let mut args = std::env::args().skip(1);
    let e: u128 = args.next().and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let out = args.next();

    let fields = range_fields(e, Kind::Cyclic, Some(Signature::TotallyReal));
    let recs = measure_fields(&fields, &PrecisionContext::default(), None, "figure")?;
    let outside = recs
        .iter()
        .filter(|r| {
            let d = r.disc as f64;
            r.m < 2f64.powf(-4.0 / 3.0) * d.powf(1.0 / 6.0) * (1.0 - 1e-9) || r.m > d.sqrt() * (1.0 + 1e-9)
        })
        .count();
    let csv = figure_csv(&recs, Kind::Cyclic);
    match out {
        Some(path) => std::fs::write(&path, &csv).expect("write csv"),
        None => print!("{csv}"),
    }
    eprintln!("{} real cyclic fields, {outside} outside the envelope", recs.len());
    Ok(())
}
