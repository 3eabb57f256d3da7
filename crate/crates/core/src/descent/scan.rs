//! Irreducibility of the specialized obstructions over a range of `(a, b)`.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::symbolic::{derive_coset_poly, derive_f_numeric, Coset};
use crate::poly::{certify_irreducible_bivariate, BivariateCertificate, IrreducibilityVerdict, SparsePoly};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Obstruction {
    F,
    G,
    H,
}

impl Obstruction {
    pub const ALL: [Obstruction; 3] = [Obstruction::F, Obstruction::G, Obstruction::H];

    pub fn name(self) -> &'static str {
        match self {
            Obstruction::F => "F",
            Obstruction::G => "G",
            Obstruction::H => "H",
        }
    }
}

impl std::str::FromStr for Obstruction {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" | "f" => Ok(Obstruction::F),
            "G" | "g" => Ok(Obstruction::G),
            "H" | "h" => Ok(Obstruction::H),
            _ => Err(crate::Error::Parse(format!("unknown obstruction {s:?}"))),
        }
    }
}

/// `F`, `G` or `H` at numeric `(a, b)`, primitive in `x` with `m` free.
pub fn obstruction_at(which: Obstruction, a: &BigInt, b: &BigInt) -> Result<SparsePoly> {
    Ok(match which {
        Obstruction::F => derive_f_numeric(a, b),
        Obstruction::G => derive_coset_poly(Coset::G, Some(a), Some(b))?.poly,
        Obstruction::H => derive_coset_poly(Coset::H, Some(a), Some(b))?.poly,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBudget {
    pub prime_budget: usize,
    pub specialization_budget: usize,
    /// Times the budgets are doubled after an undetermined attempt.
    pub max_escalations: u32,
}

impl Default for ScanBudget {
    fn default() -> Self {
        Self { prime_budget: 20, specialization_budget: 4, max_escalations: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityRow {
    #[serde(with = "crate::json::bigint_str")]
    pub a: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub b: BigInt,
    pub which: Obstruction,
    pub degree_x: u32,
    pub verdict: IrreducibilityVerdict,
    /// Budget doublings used; nonzero means the default budget was not enough.
    pub escalations: u32,
    pub flagged: bool,
    pub certificate: Option<BivariateCertificate>,
    pub error: Option<String>,
}

pub fn certify_row(which: Obstruction, a: &BigInt, b: &BigInt, budget: &ScanBudget) -> IrreducibilityRow {
    let mut row = IrreducibilityRow {
        a: a.clone(),
        b: b.clone(),
        which,
        degree_x: 0,
        verdict: IrreducibilityVerdict::Undetermined,
        escalations: 0,
        flagged: false,
        certificate: None,
        error: None,
    };
    let poly = match obstruction_at(which, a, b) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.degree_x = poly.degree_in("x");
    let (mut primes, mut specs) = (budget.prime_budget, budget.specialization_budget);
    loop {
        match certify_irreducible_bivariate(&poly, "x", "m", specs, primes) {
            Ok(c) => {
                row.verdict = c.verdict;
                row.certificate = Some(c);
            }
            Err(e) => {
                row.error = Some(e.to_string());
                return row;
            }
        }
        if row.verdict == IrreducibilityVerdict::Irreducible || row.escalations >= budget.max_escalations {
            return row;
        }
        row.escalations += 1;
        row.flagged = true;
        primes *= 2;
        specs *= 2;
    }
}

/// Coprime pairs `1 < a < b ≤ b_max` with `a ≤ a_max`, lexicographic.
pub fn scan_pairs(a_max: u64, b_max: u64) -> Vec<(u64, u64)> {
    (2..=a_max.min(b_max))
        .flat_map(|a| (a + 1..=b_max).map(move |b| (a, b)))
        .filter(|(a, b)| a.gcd(b) == 1)
        .collect()
}

pub fn irreducibility_scan(
    a_max: u64,
    b_max: u64,
    which: &[Obstruction],
    budget: &ScanBudget,
) -> Vec<IrreducibilityRow> {
    let jobs: Vec<(u64, u64, Obstruction)> = scan_pairs(a_max, b_max)
        .into_iter()
        .flat_map(|(a, b)| which.iter().map(move |w| (a, b, *w)))
        .collect();
    jobs.par_iter()
        .map(|&(a, b, w)| certify_row(w, &BigInt::from(a), &BigInt::from(b), budget))
        .collect()
}
