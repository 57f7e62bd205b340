//! Square-free sieves over polynomial values, and the Catalan-coefficient
//! polynomials that make the real cyclic constructions work. The auxiliary
//! degree drops below 3s only when s > t.
//!
//!     cargo run --example squarefree_sieve

use quartic_mahler::exactfield::IntegerPolynomial;
use quartic_mahler::families::{catalan_a_poly, catalan_aux_poly, squarefree_sieve};

fn main() -> quartic_mahler::Result<()> {
    let x = |c: i64, e: usize| IntegerPolynomial::monomial(c, e);
    // k and k^2 + 1 both square-free.
    let factors = vec![x(1, 1), x(1, 2).add(&x(1, 0))];
    let report = squarefree_sieve(&factors, 60)?;
    println!("{:?} square-free for k in {:?}", report.polynomials, report.ks);

    for (s, t) in [(2, 1), (4, 1), (3, 2), (5, 3)] {
        let a = catalan_a_poly(s, t)?;
        let f = catalan_aux_poly(s, t)?;
        println!(
            "(s,t)=({s},{t})  A(x) = {a}  Eisenstein at 2: {}  aux degree {} < 3s = {}",
            a.is_eisenstein(2),
            f.degree(),
            3 * s
        );
    }
    Ok(())
}
