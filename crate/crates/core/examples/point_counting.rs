//! #E(F_p) and a_p for the m = 3 curve, checked against the Hasse bound.

use pellrank::curve::CurveParams;
use pellrank::poly::modp::primes_up_to;

fn main() -> pellrank::Result<()> {
    let fc = CurveParams::new(1, 2, 3, 5)?.build()?;
    println!("{}  Δ = {}", fc.curve, fc.curve.discriminant());
    for p in primes_up_to(60) {
        let red = fc.curve.reduce_mod_p(p)?;
        if !red.good {
            println!("p = {p:>2}  bad reduction");
            continue;
        }
        let c = red.count_points()?;
        println!("p = {p:>2}  #E = {:>3}  a_p = {:>3}  |a_p| <= 2√p: {}", c.count, c.a_p, (c.a_p * c.a_p) as u64 <= 4 * p);
    }
    Ok(())
}
