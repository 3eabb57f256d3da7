//! Mestre–Nagao sums along the D = 3 ladder and the E₁(t) family.

use pellrank::heuristics::{scan_family, write_csv, Generator, NagaoOptions};

fn main() -> pellrank::Result<()> {
    let opts = NagaoOptions::default();
    let ladder = Generator::Ladder { a: 1.into(), b: 2.into(), n: 1.into(), m: 1.into(), k_max: 6 };
    let scan = scan_family(&ladder, 10_000, None, &opts)?;
    println!("ladder k = 0..6 at N = 10^4, best first:");
    for r in &scan.ranked {
        println!("  {:<22} S = {:.6}", r.curve_id, r.sum);
    }

    let fam = Generator::Parametric { i: 1, t_min: 2, t_max: 20 };
    let scan = scan_family(&fam, 2_000, Some(5), &opts)?;
    println!("\nE1(t), t = 2..20 at N = 2000, top 5 as CSV:");
    write_csv(&scan.ranked, std::io::stdout())?;
    for f in &scan.failures {
        println!("skipped {}: {}", f.label, f.error);
    }
    Ok(())
}
