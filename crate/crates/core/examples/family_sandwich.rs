//! Verify a family's constants c1 D^(p/q) <= M(O_K) <= c2 D^(p/q) over a
//! range of k and report the effective "k large enough" threshold.
//!
//!     cargo run --release --example family_sandwich -- IB-1 60
//!     cargo run --release --example family_sandwich -- "RC-[3/10,1/2)" 20 2/5

use quartic_mahler::families::{verify_family_bounds, FamilyId, FamilySpec};
use quartic_mahler::measure::PrecisionContext;

fn main() -> quartic_mahler::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id: FamilyId = args.first().map_or("RC-1/6", String::as_str).parse()?;
    let kmax: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(60);
    let spec = match args.get(2).and_then(|e| e.split_once('/')) {
        Some((p, q)) => FamilySpec::new(id, p.parse().unwrap_or(1), q.parse().unwrap_or(1))?,
        None => FamilySpec::fixed(id)?,
    };
    println!("{id} exponent {}/{}  decomposition {:?}", spec.p, spec.q, spec.decomposition);
    for (name, poly) in &spec.polynomials {
        println!("  {name}(x) = {poly}");
    }

    let report = verify_family_bounds(&spec, 1, kmax, &PrecisionContext::default());
    println!("{:>4} {:>14} {:>12} {:>12} {:>12}  ok", "k", "D_K", "M(cand)", "M(O_K)", "D^(p/q)");
    for r in &report.rows {
        let truth = r.m_true.map_or("-".to_string(), |m| format!("{m:.4}"));
        println!("{:>4} {:>14} {:>12.4} {:>12} {:>12.4}  {}", r.k, r.disc, r.m_candidate, truth, r.scale, r.passes());
    }
    println!(
        "threshold {:?}, observed c1 {:.3e} vs {:?}, observed c2 {:.4} vs {:?}, passed {}",
        report.threshold,
        report.observed_c1,
        report.c1,
        report.observed_c2,
        report.c2,
        report.passed()
    );
    Ok(())
}
