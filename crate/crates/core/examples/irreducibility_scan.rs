//! Certifies F, G and H irreducible in Q[x, m] for every coprime 1 < a < b <= B.
//!
//! `cargo run --release --example irreducibility_scan -- 50`

use std::time::Instant;

use pellrank::descent::{irreducibility_scan, Obstruction, ScanBudget};
use pellrank::poly::IrreducibilityVerdict;

fn main() {
    let b_max: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let t = Instant::now();
    let rows = irreducibility_scan(b_max, b_max, &Obstruction::ALL, &ScanBudget::default());
    let certified = rows.iter().filter(|r| r.verdict == IrreducibilityVerdict::Irreducible).count();
    let flagged: Vec<_> = rows.iter().filter(|r| r.flagged).collect();
    println!("{} rows, {} irreducible, {} needed a larger budget ({:.1?})", rows.len(), certified, flagged.len(), t.elapsed());
    for r in flagged {
        println!("  {}({}, {}): {:?} after {} escalations", r.which.name(), r.a, r.b, r.verdict, r.escalations);
    }
    for r in rows.iter().filter(|r| r.verdict != IrreducibilityVerdict::Irreducible) {
        println!("  undetermined: {}({}, {}) {:?}", r.which.name(), r.a, r.b, r.error);
    }
}
