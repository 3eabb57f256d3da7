//! Pell-type equations `X² − D·Y² = N` over ℤ[√D].
//!
//! Solutions are found by a bounded search on `Y` and grouped into orbits
//! under the unit group; "nothing found up to the bound" is the strongest
//! negative statement this module makes.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Returns `Some(r)` when `n = r²` with `r ≥ 0`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn check_radicand(d: &BigInt) -> Result<()> {
    if !d.is_positive() {
        return Err(Error::Domain(format!("D must be positive, got {d}")));
    }
    if exact_sqrt(d).is_some() {
        return Err(Error::Domain(format!("D must be nonsquare, got {d}")));
    }
    Ok(())
}

/// The equation `X² − D·Y² = N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellInstance {
    #[serde(with = "crate::json::bigint_str")]
    d: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    n: BigInt,
}

impl PellInstance {
    pub fn new(d: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self> {
        let (d, n) = (d.into(), n.into());
        check_radicand(&d)?;
        if n.is_zero() {
            return Err(Error::Domain("N must be nonzero".into()));
        }
        Ok(Self { d, n })
    }

    /// The instance `X² − (a+b)Y² = −ab` attached to the curve parameters `(a, b)`.
    pub fn for_curve(a: &BigInt, b: &BigInt) -> Result<Self> {
        let d = a + b;
        if !d.is_positive() {
            return Err(Error::Domain(format!(
                "a + b = {d} is not positive; negative-discriminant Pell instances are unsupported"
            )));
        }
        Self::new(d, -(a * b))
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn is_solution(&self, s: &PellSolution) -> bool {
        &s.x * &s.x - &self.d * &s.y * &s.y == self.n
    }
}

/// An element `u + v√D` of ℤ[√D].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticInteger {
    #[serde(with = "crate::json::bigint_str")]
    pub u: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub v: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    d: BigInt,
}

impl QuadraticInteger {
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        Self { u: u.into(), v: v.into(), d: d.into() }
    }

    pub fn one(d: &BigInt) -> Self {
        Self::new(1, 0, d.clone())
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn norm(&self) -> BigInt {
        &self.u * &self.u - &self.d * &self.v * &self.v
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.u.clone(), -&self.v, self.d.clone())
    }

    /// `(u₁u₂ + D·v₁v₂) + (u₁v₂ + u₂v₁)√D`; both operands must share `D`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::Domain(format!(
                "cannot multiply elements of Z[sqrt {}] and Z[sqrt {}]",
                self.d, other.d
            )));
        }
        Ok(Self::new(
            &self.u * &other.u + &self.d * &self.v * &other.v,
            &self.u * &other.v + &other.u * &self.v,
            self.d.clone(),
        ))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.d);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Mul for &QuadraticInteger {
    type Output = QuadraticInteger;

    /// Panics on mismatched `D`; use [`QuadraticInteger::try_mul`] to get an error instead.
    fn mul(self, rhs: Self) -> QuadraticInteger {
        self.try_mul(rhs).expect("mismatched radicands")
    }
}

impl fmt::Display for QuadraticInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.v.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}√{}", self.u, sign, self.v.abs(), self.d)
    }
}

/// A pair `(X, Y)`; in curve terms `X = n` and `Y = m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PellSolution {
    #[serde(with = "crate::json::bigint_str")]
    pub x: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub y: BigInt,
}

impl PellSolution {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self { x: x.into(), y: y.into() }
    }

    pub fn as_quadratic(&self, d: &BigInt) -> QuadraticInteger {
        QuadraticInteger::new(self.x.clone(), self.y.clone(), d.clone())
    }
}

/// `√D = [a0; period…]`, period repeating forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: BigInt,
    pub period: Vec<BigInt>,
}

pub fn continued_fraction_sqrt(d: &BigInt) -> Result<ContinuedFraction> {
    check_radicand(d)?;
    let a0 = d.sqrt();
    let two_a0 = &a0 * 2u32;
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let mut period = Vec::new();
    loop {
        m = &q * &a - &m;
        q = (d - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        period.push(a.clone());
        if a == two_a0 {
            break;
        }
    }
    Ok(ContinuedFraction { a0, period })
}

/// Least `u + v√D` with `u, v > 0` and norm ±1, read off the convergent
/// just before the end of the first period.
pub fn fundamental_unit(d: &BigInt) -> Result<QuadraticInteger> {
    let cf = continued_fraction_sqrt(d)?;
    let (mut p_prev, mut p) = (BigInt::one(), cf.a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for a in &cf.period[..cf.period.len() - 1] {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    let unit = QuadraticInteger::new(p, q, d.clone());
    debug_assert!(unit.norm().abs().is_one());
    Ok(unit)
}

/// The generator of the norm-one units: ε itself, or ε² when `N(ε) = −1`.
pub fn norm_one_unit(d: &BigInt) -> Result<QuadraticInteger> {
    let eps = fundamental_unit(d)?;
    Ok(if eps.norm().is_one() { eps } else { &eps * &eps })
}

fn same_orbit(inst: &PellInstance, s: &PellSolution, t: &PellSolution) -> bool {
    // α ~ β iff α·β̄ / N is integral; that quotient is then a unit.
    let d = &inst.d;
    let n = &inst.n;
    let alpha = s.as_quadratic(d);
    [t.as_quadratic(d), t.as_quadratic(d).conjugate()].iter().any(|beta| {
        let prod = &alpha * &beta.conjugate();
        prod.u.is_multiple_of(n) && prod.v.is_multiple_of(n)
    })
}

/// All solutions with `0 ≤ Y ≤ search_bound`, keeping the smallest-`Y`
/// representative of each orbit under units and sign changes.
/// An empty result only means nothing was found up to the bound.
pub fn solve_pell(inst: &PellInstance, search_bound: u64) -> Vec<PellSolution> {
    let mut classes: Vec<PellSolution> = Vec::new();
    let mut y = BigInt::zero();
    let bound = BigInt::from(search_bound);
    while y <= bound {
        let rhs = &inst.n + &inst.d * &y * &y;
        if let Some(x) = exact_sqrt(&rhs) {
            let sol = PellSolution { x, y: y.clone() };
            if !classes.iter().any(|c| same_orbit(inst, c, &sol)) {
                classes.push(sol);
            }
        }
        y += 1u32;
    }
    classes
}

/// `(n_k, m_k)` from `(n + m√D)·εᵏ` for `k = 0..=k_max`, where ε generates
/// the norm-one units.
pub fn solution_ladder(
    base: &PellSolution,
    inst: &PellInstance,
    k_max: usize,
) -> Result<Vec<PellSolution>> {
    if !inst.is_solution(base) {
        return Err(Error::Contract(format!(
            "({}, {}) does not satisfy X^2 - {}Y^2 = {}",
            base.x, base.y, inst.d, inst.n
        )));
    }
    let unit = norm_one_unit(&inst.d)?;
    let mut current = base.as_quadratic(&inst.d);
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if k > 0 {
            current = &current * &unit;
        }
        out.push(PellSolution { x: current.u.clone(), y: current.v.clone() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Expands √D by floating point; good enough for small D and short prefixes.
    fn float_cf_prefix(d: f64, len: usize) -> Vec<u64> {
        let mut x = d.sqrt();
        let mut out = Vec::new();
        for _ in 0..len {
            let a = x.floor();
            out.push(a as u64);
            x = 1.0 / (x - a);
        }
        out
    }

    fn brute_force_unit(d: i64) -> (i64, i64) {
        for v in 1..10_000i64 {
            for target in [1i64, -1] {
                let u2 = d * v * v + target;
                if u2 > 0 {
                    let u = (u2 as f64).sqrt().round() as i64;
                    if u * u == u2 {
                        return (u, v);
                    }
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn continued_fraction_examples() {
        let cf = continued_fraction_sqrt(&big(3)).unwrap();
        assert_eq!(cf.a0, big(1));
        assert_eq!(cf.period, vec![big(1), big(2)]);
        assert_eq!(float_cf_prefix(3.0, 5), vec![1, 1, 2, 1, 2]);

        let cf = continued_fraction_sqrt(&big(2)).unwrap();
        assert_eq!(cf.period, vec![big(2)]);
        assert_eq!(float_cf_prefix(2.0, 4), vec![1, 2, 2, 2]);

        assert!(matches!(continued_fraction_sqrt(&big(4)), Err(Error::Domain(_))));
        assert!(matches!(continued_fraction_sqrt(&big(0)), Err(Error::Domain(_))));
        assert!(matches!(continued_fraction_sqrt(&big(-3)), Err(Error::Domain(_))));
    }

    #[test]
    fn continued_fraction_matches_float_expansion() {
        for d in [5i64, 6, 7, 10, 13, 19, 23, 31, 46] {
            let cf = continued_fraction_sqrt(&big(d)).unwrap();
            let mut expanded = vec![cf.a0.clone()];
            while expanded.len() < 8 {
                expanded.extend(cf.period.iter().cloned());
            }
            let float = float_cf_prefix(d as f64, 8);
            for (a, b) in expanded.iter().zip(float) {
                assert_eq!(*a, big(b as i64), "D={d}");
            }
            // palindromic apart from the final 2·a0
            let body = &cf.period[..cf.period.len() - 1];
            assert!(body.iter().eq(body.iter().rev()), "D={d}");
        }
    }

    #[test]
    fn fundamental_units() {
        let e3 = fundamental_unit(&big(3)).unwrap();
        assert_eq!((e3.u.clone(), e3.v.clone()), (big(2), big(1)));
        assert_eq!(e3.norm(), big(1));

        let e8 = fundamental_unit(&big(8)).unwrap();
        assert_eq!((e8.u.clone(), e8.v.clone()), (big(3), big(1)));
        assert_eq!(e8.norm(), big(1));

        let e2 = fundamental_unit(&big(2)).unwrap();
        assert_eq!((e2.u.clone(), e2.v.clone()), (big(1), big(1)));
        assert_eq!(e2.norm(), big(-1));

        for d in [5i64, 6, 7, 10, 11, 13, 14, 15, 17, 21, 29, 41, 43, 61] {
            let e = fundamental_unit(&big(d)).unwrap();
            let (u, v) = brute_force_unit(d);
            assert_eq!((e.u, e.v), (big(u), big(v)), "D={d}");
        }
        // D = 61 has the famously large unit; make sure arithmetic stays exact.
        assert_eq!(fundamental_unit(&big(61)).unwrap().u, big(29718));
    }

    #[test]
    fn quadratic_multiplication() {
        let alpha = QuadraticInteger::new(1, 1, 3);
        let eps = QuadraticInteger::new(2, 1, 3);
        let k1 = &alpha * &eps;
        assert_eq!(k1, QuadraticInteger::new(5, 3, 3));
        assert_eq!(&k1 * &eps, QuadraticInteger::new(19, 11, 3));
        assert_eq!(&alpha * &QuadraticInteger::one(&big(3)), alpha);
        assert!(alpha.try_mul(&QuadraticInteger::new(1, 1, 5)).is_err());
        assert_eq!(k1.to_string(), "5+3√3");
    }

    #[test]
    fn solve_examples() {
        let inst = PellInstance::new(3, -2).unwrap();
        let sols = solve_pell(&inst, 10);
        assert_eq!(sols, vec![PellSolution::new(1, 1)]);
        assert!(inst.is_solution(&PellSolution::new(5, 3)));

        let inst5 = PellInstance::new(3, 5).unwrap();
        assert!(solve_pell(&inst5, 50).is_empty());
        // independent oracle: x² = 5 + 3y² has no solution for y ≤ 50
        for y in 0..=50i64 {
            let rhs = 5 + 3 * y * y;
            let r = (rhs as f64).sqrt().round() as i64;
            assert_ne!(r * r, rhs);
        }

        assert!(PellInstance::new(4, 1).is_err());
        assert!(PellInstance::new(3, 0).is_err());
        assert!(PellInstance::for_curve(&big(-3), &big(1)).is_err());
    }

    #[test]
    fn distinct_orbits_are_kept_apart() {
        // x² − 2y² = 7: 3+√2 and 3−√2 are not associate, but sign variants are folded.
        let inst = PellInstance::new(2, 7).unwrap();
        let sols = solve_pell(&inst, 200);
        assert_eq!(sols.len(), 1);
        // x² − 10y² = −6: 2+√10 and 8+... check every found element is a solution
        let inst = PellInstance::new(10, -6).unwrap();
        let sols = solve_pell(&inst, 500);
        assert!(!sols.is_empty());
        for s in &sols {
            assert!(inst.is_solution(s));
        }
        for (i, s) in sols.iter().enumerate() {
            for t in &sols[i + 1..] {
                assert!(!same_orbit(&inst, s, t));
            }
        }
    }

    #[test]
    fn ladder_matches_table() {
        let inst = PellInstance::new(3, -2).unwrap();
        let ladder = solution_ladder(&PellSolution::new(1, 1), &inst, 6).unwrap();
        let ys: Vec<_> = ladder.iter().map(|s| s.y.clone()).collect();
        let xs: Vec<_> = ladder.iter().map(|s| s.x.clone()).collect();
        let want_y = [1, 3, 11, 41, 153, 571, 2131];
        let want_x = [1, 5, 19, 71, 265, 989, 3691];
        assert_eq!(ys, want_y.iter().map(|&v| big(v)).collect::<Vec<_>>());
        assert_eq!(xs, want_x.iter().map(|&v| big(v)).collect::<Vec<_>>());

        let single = solution_ladder(&PellSolution::new(1, 1), &inst, 0).unwrap();
        assert_eq!(single, vec![PellSolution::new(1, 1)]);

        assert!(matches!(
            solution_ladder(&PellSolution::new(2, 1), &inst, 3),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn ladder_with_negative_norm_unit_stays_on_the_equation() {
        // ε = 1+√2 has norm −1; the ladder must use ε² to keep N fixed.
        let inst = PellInstance::new(2, -1).unwrap();
        let ladder = solution_ladder(&PellSolution::new(1, 1), &inst, 4).unwrap();
        for s in &ladder {
            assert!(inst.is_solution(s));
        }
        assert_eq!(ladder[1], PellSolution::new(7, 5));
    }

    #[test]
    fn a_equal_one_is_always_solvable() {
        for b in 2..40i64 {
            let inst = PellInstance::for_curve(&big(1), &big(b));
            let Ok(inst) = inst else { continue };
            assert!(inst.is_solution(&PellSolution::new(1, 1)), "b={b}");
        }
    }
}
