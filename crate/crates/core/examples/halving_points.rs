//! Halving: doubles are recognized with an explicit half, other points are not.

use pellrank::curve::CurveParams;
use pellrank::descent::{doubling_x_quartic, is_in_2e};

fn main() -> pellrank::Result<()> {
    let fc = CurveParams::new(1, 2, 3, 5)?.build()?;
    let e = &fc.curve;
    let s = e.add(&fc.p, &fc.r);
    let d = e.double(&s);
    println!("S = P + R = {s}");
    println!("doubling quartic of 2S: {}", doubling_x_quartic(e, &d)?.quartic);
    let t = is_in_2e(e, &d);
    println!("2S in 2E: {}  half = {}", t.in_2e, t.witness.unwrap());

    let t = is_in_2e(e, &s);
    println!("S in 2E: {} (rational roots of its quartic: {})", t.in_2e, t.roots_found.len());
    Ok(())
}
