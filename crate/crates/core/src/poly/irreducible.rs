//! One-sided irreducibility certificates.
//!
//! A factorization over ℚ of degree `k` survives reduction mod every prime
//! not dividing the leading coefficient, so `k` must be a sub-multiset sum of
//! every factor pattern. When the only degrees consistent with all collected
//! patterns are `0` and `deg p`, the polynomial is irreducible. Nothing here
//! ever concludes "reducible".

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::modp::{factor_pattern_mod_p, primes_from, FactorPattern};
use super::{IntPoly, SparsePoly};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IrreducibilityVerdict {
    Irreducible,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnivariateCertificate {
    pub verdict: IrreducibilityVerdict,
    pub degree: usize,
    /// Primes whose patterns were intersected, in the order used.
    pub witness_primes: Vec<u64>,
    pub patterns: Vec<FactorPattern>,
    /// Factor degrees still consistent with every pattern.
    pub feasible_degrees: Vec<u32>,
}

pub fn certify_irreducible_q(p: &IntPoly, prime_budget: usize) -> Result<UnivariateCertificate> {
    certify_irreducible_q_with_primes(p, primes_from(2).take(prime_budget))
}

pub fn certify_irreducible_q_with_primes(
    p: &IntPoly,
    primes: impl IntoIterator<Item = u64>,
) -> Result<UnivariateCertificate> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::Domain("irreducibility of a constant polynomial".into()));
    }
    let p = p.primitive();
    let n = p.degree();
    let mut feasible = vec![true; n + 1];
    let mut cert = UnivariateCertificate {
        verdict: IrreducibilityVerdict::Undetermined,
        degree: n,
        witness_primes: Vec::new(),
        patterns: Vec::new(),
        feasible_degrees: Vec::new(),
    };
    let done = |f: &[bool]| f.iter().enumerate().all(|(k, &b)| b == (k == 0 || k == n));
    if !done(&feasible) {
        for prime in primes {
            let pattern = match factor_pattern_mod_p(&p, prime) {
                Ok(pat) => pat,
                Err(Error::RejectedPrime(_)) => continue,
                Err(e) => return Err(e),
            };
            if pattern.squarefree {
                let reach = pattern.achievable_degrees();
                for (f, r) in feasible.iter_mut().zip(reach) {
                    *f &= r;
                }
                cert.witness_primes.push(prime);
            }
            cert.patterns.push(pattern);
            if done(&feasible) {
                break;
            }
        }
    }
    if done(&feasible) {
        cert.verdict = IrreducibilityVerdict::Irreducible;
    }
    cert.feasible_degrees = feasible
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u32)
        .collect();
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BivariateCertificate {
    pub verdict: IrreducibilityVerdict,
    /// The value of the second variable at which the certificate was obtained.
    #[serde(with = "crate::json::opt_bigint_str")]
    pub specialization: Option<BigInt>,
    /// Every specialization value attempted, in order.
    #[serde(serialize_with = "ser_bigints")]
    pub tried: Vec<BigInt>,
    pub univariate: Option<UnivariateCertificate>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for b in v {
        seq.serialize_element(&b.to_string())?;
    }
    seq.end()
}

/// Certifies irreducibility of `p ∈ ℚ[x, m]` via specializations `m = 2, 3, 5, 7, …`.
///
/// `p` must have trivial content with respect to `x`: a factor depending only
/// on `m` is invisible to specialization, so callers strip it first with
/// [`SparsePoly::content_and_primitive`].
pub fn certify_irreducible_bivariate(
    p: &SparsePoly,
    x: &str,
    m: &str,
    specialization_budget: usize,
    prime_budget: usize,
) -> Result<BivariateCertificate> {
    let active = p.active_vars();
    if let Some(v) = active.iter().find(|v| *v != x && *v != m) {
        return Err(Error::Domain(format!("unexpected variable {v}")));
    }
    let deg_x = p.degree_in(x);
    if deg_x == 0 {
        return Err(Error::Domain(format!("polynomial has degree 0 in {x}")));
    }
    let (content, _) = p.content_and_primitive(x)?;
    if !content.is_constant() {
        return Err(Error::Precondition(format!(
            "content {content} with respect to {x} is nontrivial; \
             strip it with content_and_primitive first"
        )));
    }
    let lead = p.leading_coefficient_in(x);
    let mut cert = BivariateCertificate {
        verdict: IrreducibilityVerdict::Undetermined,
        specialization: None,
        tried: Vec::new(),
        univariate: None,
    };
    let has_m = active.iter().any(|v| v == m);
    let values: Vec<u64> = if has_m {
        primes_from(2).take(specialization_budget).collect()
    } else {
        vec![0]
    };
    for m0 in values {
        let m0r = BigRational::from_integer(BigInt::from(m0));
        if has_m && lead.specialize(&[(m, m0r.clone())]).is_zero() {
            continue;
        }
        let spec = p.specialize(&[(m, m0r)]);
        let (_, spec) = spec.integer_primitive();
        let uni = spec.to_int_poly(x)?;
        debug_assert_eq!(uni.degree(), deg_x as usize);
        cert.tried.push(BigInt::from(m0));
        let u = certify_irreducible_q(&uni, prime_budget)?;
        if u.verdict == IrreducibilityVerdict::Irreducible {
            cert.verdict = IrreducibilityVerdict::Irreducible;
            cert.specialization = Some(BigInt::from(m0));
            cert.univariate = Some(u);
            return Ok(cert);
        }
        cert.univariate = Some(u);
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, var};
    use proptest::prelude::*;

    #[test]
    fn univariate_examples() {
        let p = IntPoly::from_i64(&[1, 0, 1]);
        let c = certify_irreducible_q_with_primes(&p, [3, 7]).unwrap();
        assert_eq!(c.verdict, IrreducibilityVerdict::Irreducible);
        assert_eq!(c.witness_primes, vec![3]);

        let q = IntPoly::from_i64(&[-1, 0, 1]);
        let c = certify_irreducible_q(&q, 30).unwrap();
        assert_eq!(c.verdict, IrreducibilityVerdict::Undetermined);
        assert!(!q.rational_roots().unwrap().is_empty());

        let x4 = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
        for budget in [5, 20, 60] {
            let c = certify_irreducible_q(&x4, budget).unwrap();
            assert_eq!(c.verdict, IrreducibilityVerdict::Undetermined);
            assert!(c.feasible_degrees.contains(&2));
        }

        assert!(certify_irreducible_q(&IntPoly::from_i64(&[5]), 10).is_err());
        let lin = certify_irreducible_q(&IntPoly::from_i64(&[3, 2]), 0).unwrap();
        assert_eq!(lin.verdict, IrreducibilityVerdict::Irreducible);
    }

    #[test]
    fn bivariate_examples() {
        let x = var("x");
        let m = var("m");
        let diff = x.pow(2) - m.pow(2);
        let c = certify_irreducible_bivariate(&diff, "x", "m", 6, 30).unwrap();
        assert_eq!(c.verdict, IrreducibilityVerdict::Undetermined);

        let p = x.pow(2) + m.pow(2) - int(1);
        // m₀ = 2 gives x² + 3, which has no root mod 5
        assert!((0..5).all(|v| (v * v + 3) % 5 != 0));
        let c = certify_irreducible_bivariate(&p, "x", "m", 6, 30).unwrap();
        assert_eq!(c.verdict, IrreducibilityVerdict::Irreducible);
        assert_eq!(c.specialization, Some(BigInt::from(2)));

        let with_content = (m.pow(2) - int(1)) * (x.pow(2) + int(1));
        assert!(matches!(
            certify_irreducible_bivariate(&with_content, "x", "m", 6, 30),
            Err(Error::Precondition(_))
        ));
    }

    proptest! {
        #[test]
        fn never_irreducible_with_a_rational_root(
            root in -20i64..20,
            cof in proptest::collection::vec(-9i64..10, 1..5),
        ) {
            let mut c = cof;
            c.push(1);
            // (x − root)·cofactor
            let mut prod = vec![0i64; c.len() + 1];
            for (i, v) in c.iter().enumerate() {
                prod[i] -= root * v;
                prod[i + 1] += v;
            }
            let p = IntPoly::from_i64(&prod);
            let cert = certify_irreducible_q(&p, 40).unwrap();
            prop_assert_eq!(cert.verdict, IrreducibilityVerdict::Undetermined);
        }
    }
}
