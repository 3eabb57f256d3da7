//! The one-parameter families `a = 1`, `b = t² − 2`, where `D = t² − 1` and
//! `ε = t + √D` has norm one, so `(n_i, m_i) = (1 + √D)·εⁱ` solves the Pell
//! condition identically in `t`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{certify_rank_at_least_3, RankCertificate};
use crate::curve::CurveParams;
use crate::poly::{int, var, SparsePoly};
use crate::{Error, Result};

/// `(n_i(t), m_i(t))` as polynomials in `t`.
pub fn family_solution(i: u32) -> (SparsePoly, SparsePoly) {
    let t = var("t");
    let (mut n, mut m) = (int(1), int(1));
    let d = &t * &t - int(1);
    for _ in 0..i {
        let n2 = &(&n * &t) + &(&m * &d);
        let m2 = &n + &(&m * &t);
        n = n2;
        m = m2;
    }
    (n, m)
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyMember {
    pub t: i64,
    pub params: Option<CurveParams>,
    pub certified: bool,
    pub certificate: Option<RankCertificate>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: u32,
    pub n: SparsePoly,
    pub m: SparsePoly,
    /// `n² − (t²−1)m² + (t²−2)`, expanded; zero when the identity holds.
    pub identity_residual: SparsePoly,
    pub identity_holds: bool,
    pub members: Vec<FamilyMember>,
}

fn eval_at(p: &SparsePoly, t: i64) -> BigInt {
    p.specialize(&[("t", BigRational::from_integer(t.into()))])
        .constant_value()
        .expect("univariate in t")
        .to_integer()
}

pub fn check_parametric_family(i: u32, t_values: &[i64]) -> Result<FamilyReport> {
    if let Some(t) = t_values.iter().find(|&&t| t < 2) {
        return Err(Error::Domain(format!("t = {t} is below 2")));
    }
    let (n, m) = family_solution(i);
    let t = var("t");
    let t2 = &t * &t;
    let residual = &(&(&n * &n) - &(&(&t2 - &int(1)) * &(&m * &m))) + &(&t2 - &int(2));
    let members = t_values
        .iter()
        .map(|&tv| {
            let b = BigInt::from(tv) * tv - 2;
            let built = CurveParams::new(1, b, eval_at(&m, tv), eval_at(&n, tv))
                .and_then(|p| certify_rank_at_least_3(&p).map(|c| (p, c)));
            match built {
                Ok((p, c)) => FamilyMember {
                    t: tv,
                    params: Some(p),
                    certified: c.verdict.is_certified(),
                    certificate: Some(c),
                    error: None,
                },
                Err(e) => FamilyMember {
                    t: tv,
                    params: None,
                    certified: false,
                    certificate: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(FamilyReport {
        family: i,
        identity_holds: residual.is_zero(),
        n,
        m,
        identity_residual: residual,
        members,
    })
}
