//! Derives F, G and H symbolically and at a few numeric (a, b).

use std::time::Instant;

use pellrank::descent::{derive_coset_poly, derive_f, derive_f_numeric, Coset};
use pellrank::BigInt;

fn main() -> pellrank::Result<()> {
    println!("F(x, m, a, b) = {}", derive_f());
    println!("F_(1,2)(x, m) = {}", derive_f_numeric(&BigInt::from(1), &BigInt::from(2)));

    let t = Instant::now();
    let g = derive_coset_poly(Coset::G, None, None)?;
    println!(
        "\nG: degree {} in x, {} terms, content in x: {}  ({:.1?})",
        g.degree_x,
        g.poly.num_terms(),
        g.content,
        t.elapsed()
    );
    let g1 = derive_coset_poly(Coset::G, Some(&BigInt::from(1)), None)?;
    println!(
        "G at a = 1: (m^2 - 1)^{} divides the cleared form; cofactor degree {} in x",
        g1.m2_minus_1_removed.unwrap_or(0),
        g1.degree_x
    );

    let h = derive_coset_poly(Coset::H, Some(&BigInt::from(3)), Some(&BigInt::from(5)))?;
    println!("H_(3,5): degree {} in x, {} terms", h.degree_x, h.poly.num_terms());
    Ok(())
}
