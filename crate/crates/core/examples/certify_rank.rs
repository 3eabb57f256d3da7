//! Certifies rank >= 3 along the D = 3 ladder and prints one certificate in full.

use pellrank::curve::CurveParams;
use pellrank::descent::certify_rank_at_least_3;

fn main() -> pellrank::Result<()> {
    for (m, n) in [(1, 1), (3, 5), (11, 19), (41, 71), (153, 265), (571, 989), (2131, 3691)] {
        let cert = certify_rank_at_least_3(&CurveParams::new(1, 2, m, n)?)?;
        println!("{:<14} {:?}", cert.params.id(), cert.verdict);
    }
    let cert = certify_rank_at_least_3(&CurveParams::with_auto_n(1, 2, 3)?)?;
    println!("\n{}", serde_json::to_string_pretty(&cert).unwrap());
    Ok(())
}
