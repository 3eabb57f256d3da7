//! Regulator of {P, Q, R} along the D = 3 ladder, next to the descent verdict.

use std::time::Instant;

use pellrank::curve::CurveParams;
use pellrank::descent::certify_rank_at_least_3;
use pellrank::heights::{regulator, DEFAULT_TOLERANCE};

fn main() -> pellrank::Result<()> {
    for (m, n) in [(3, 5), (11, 19), (41, 71), (153, 265), (571, 989), (2131, 3691)] {
        let params = CurveParams::new(1, 2, m, n)?;
        let fc = params.build()?;
        let t = Instant::now();
        let reg = regulator(&fc.curve, &[fc.p.clone(), fc.q.clone(), fc.r.clone()], DEFAULT_TOLERANCE)?;
        let cert = certify_rank_at_least_3(&params)?;
        println!(
            "m={m:5}  det={:.6} ± {:.2e}  independent={}  certified={}  doublings={}  ({:.2?})",
            reg.det,
            reg.det_error,
            reg.independent,
            cert.verdict.is_certified(),
            reg.doublings,
            t.elapsed()
        );
    }
    Ok(())
}
