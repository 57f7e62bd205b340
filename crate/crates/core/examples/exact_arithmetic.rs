//! Exact field arithmetic in Q(√-7, √-14): products, minimal polynomials,
//! integrality, and why the smaller M′ of a non-integer does not count.
//!
//!     cargo run --example exact_arithmetic

use quartic_mahler::exactfield::FieldElement;
use quartic_mahler::fields::{canonicalize_biquadratic, QuarticField};
use quartic_mahler::measure::{m_prime, PrecisionContext};

fn main() -> quartic_mahler::Result<()> {
    let field: QuarticField = canonicalize_biquadratic(-7, -14)?.into();
    let basis = field.basis();
    println!("{field}, D_K = {}", field.disc());

    let ctx = PrecisionContext::default();
    // ½(1 + √-7 + √2 + √-14) and ½(√-7 + √-14), in quarter numerators.
    let alpha = FieldElement::from_quarters(basis, [2, 2, 2, 2]);
    let beta = FieldElement::from_quarters(basis, [0, 2, 0, 2]);
    for (name, u) in [("alpha", &alpha), ("beta", &beta)] {
        println!(
            "{name} = {u}\n  minimal polynomial {}\n  integral {}  M' = {:.4}",
            u.minimal_polynomial(),
            u.is_integral()?,
            m_prime(u, &ctx)?
        );
    }

    let sq = alpha.mul(&alpha)?;
    println!("alpha^2 = {sq}");
    println!("trace(alpha) = {}, norm(alpha) = {}", alpha.trace(), alpha.norm());
    for (i, c) in alpha.conjugates().iter().enumerate() {
        println!("  sigma_{i}(alpha) ~ {:.6}", c.to_complex());
    }
    Ok(())
}
