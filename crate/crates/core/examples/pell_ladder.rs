//! The ladder of solutions to X² − 3Y² = −2 and the curves it produces.

use pellrank::curve::CurveParams;
use pellrank::pell::{fundamental_unit, solution_ladder, solve_pell, PellInstance};

fn main() -> pellrank::Result<()> {
    let inst = PellInstance::new(3, -2)?;
    let eps = fundamental_unit(inst.d())?;
    println!("fundamental unit of Z[√3]: {eps} (norm {})", eps.norm());

    let classes = solve_pell(&inst, 1000);
    println!("solution classes with Y <= 1000: {}", classes.len());
    let base = &classes[0];
    for (k, s) in solution_ladder(base, &inst, 6)?.iter().enumerate() {
        let params = CurveParams::new(1, 2, s.y.clone(), s.x.clone())?;
        let fc = params.build()?;
        println!("k={k}  {:<16}  {}", s.as_quadratic(inst.d()).to_string(), fc.curve);
    }
    Ok(())
}
