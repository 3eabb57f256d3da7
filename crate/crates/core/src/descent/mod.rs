//! Membership in `2E(ℚ)` and rank-three certificates for the family curves.
//!
//! A point `S` is a double exactly when some rational root `x₀` of the
//! doubling quartic `Φ_S` has `f(x₀)` a rational square and `2(x₀, ±√f(x₀)) = S`.
//! With `E(ℚ)[2] = 0`, the group `E(ℚ)/2E(ℚ)` is an F₂-vector space of
//! dimension `rank E(ℚ)`, so three points none of whose nonempty sums is a
//! double force `rank ≥ 3`.

mod family;
mod scan;
mod symbolic;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::curve::{CurveParams, FamilyCurve, RationalPoint, TwoTorsion, WeierstrassCurve};
use crate::pell::exact_sqrt;
use crate::poly::{IntPoly, RationalRoot, SparsePoly};
use crate::{Error, Result};

pub use family::{check_parametric_family, family_solution, FamilyMember, FamilyReport};
pub use scan::{
    certify_row, irreducibility_scan, obstruction_at, scan_pairs, IrreducibilityRow, Obstruction,
    ScanBudget,
};
pub use symbolic::{
    derive_coset_poly, derive_f, derive_f_numeric, pell_radicand, Coset, CosetPolynomial,
};

/// `Φ_S`, whose roots are the x-coordinates of formal halvings of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingQuartic {
    pub target: RationalPoint,
    pub quartic: SparsePoly,
}

impl DoublingQuartic {
    pub fn int_poly(&self) -> IntPoly {
        self.quartic.to_int_poly("x").expect("integral quartic in x")
    }
}

/// `w·(x⁴ − 2c1x² − 8c0x + c1² − 4c2c0) − u·4f(x)` for `x(S) = u/w`, made primitive.
pub fn doubling_x_quartic(e: &WeierstrassCurve, s: &RationalPoint) -> Result<DoublingQuartic> {
    let Some(xs) = s.x() else {
        return Err(Error::Domain("the doubling quartic of infinity is undefined".into()));
    };
    let (u, w) = (xs.numer().clone(), xs.denom().clone());
    let (c2, c1, c0) = (&e.c2, &e.c1, &e.c0);
    let num: [BigInt; 5] = [c1 * c1 - BigInt::from(4) * c2 * c0, -(c0 * BigInt::from(8)), -(c1 * BigInt::from(2)), BigInt::zero(), BigInt::from(1)];
    let f = [c0.clone(), c1.clone(), c2.clone(), BigInt::from(1), BigInt::zero()];
    let coeffs: Vec<BigInt> = (0..5)
        .map(|i| &w * &num[i] - BigInt::from(4) * &u * &f[i])
        .collect();
    let poly = IntPoly::new(coeffs).primitive();
    Ok(DoublingQuartic {
        target: s.clone(),
        quartic: SparsePoly::from_int_poly("x", &poly),
    })
}

/// Outcome of an exact halving search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalvingTest {
    pub in_2e: bool,
    /// A point `T` with `2T = S`.
    pub witness: Option<RationalPoint>,
    pub quartic: Option<SparsePoly>,
    /// Rational roots of the quartic, admissible or not.
    pub roots_found: Vec<RationalRoot>,
}

/// Square root of a nonnegative rational, if it is a square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    Some(BigRational::new(exact_sqrt(r.numer())?, exact_sqrt(r.denom())?))
}

/// If `x₀` lifts to a point `T` with `2T = S`, returns it.
pub fn halving_at(e: &WeierstrassCurve, s: &RationalPoint, x0: &BigRational) -> Option<RationalPoint> {
    let fx = e.rhs(x0);
    if fx.is_zero() {
        return None;
    }
    let y0 = rational_sqrt(&fx)?;
    [y0.clone(), -y0].into_iter().find_map(|y| {
        let t = RationalPoint::new(x0.clone(), y);
        (e.double(&t) == *s).then_some(t)
    })
}

/// Exact test for `S ∈ 2E(ℚ)` through the rational roots of `Φ_S`.
pub fn is_in_2e(e: &WeierstrassCurve, s: &RationalPoint) -> HalvingTest {
    if s.is_infinity() {
        return HalvingTest {
            in_2e: true,
            witness: Some(RationalPoint::Infinity),
            quartic: None,
            roots_found: Vec::new(),
        };
    }
    let dq = doubling_x_quartic(e, s).expect("affine target");
    let roots = dq.int_poly().rational_roots().expect("nonzero quartic");
    let witness = roots.iter().find_map(|r| halving_at(e, s, &r.value));
    HalvingTest {
        in_2e: witness.is_some(),
        witness,
        quartic: Some(dq.quartic),
        roots_found: roots,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Degenerate,
    TwoTorsion,
    InTwoE,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Failed { kind: FailureKind, reason: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedPoints {
    #[serde(rename = "P")]
    pub p: RationalPoint,
    #[serde(rename = "Q")]
    pub q: RationalPoint,
    #[serde(rename = "R")]
    pub r: RationalPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetCheck {
    pub combo: String,
    pub point: RationalPoint,
    pub quartic: Option<SparsePoly>,
    pub roots_found: Vec<RationalRoot>,
    pub in_2e: bool,
    pub witness: Option<RationalPoint>,
    pub verdict: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub params: CurveParams,
    pub curve: WeierstrassCurve,
    pub points: MarkedPoints,
    pub two_torsion: Option<TwoTorsion>,
    pub checks: Vec<CosetCheck>,
    pub verdict: Verdict,
    pub soundness: &'static str,
}

pub const SOUNDNESS: &str = "E(Q) has no rational 2-torsion, so E(Q)/2E(Q) is an F2-vector space of \
dimension rank E(Q). No nonempty {0,1}-combination of P, Q, R lies in 2E(Q), so their classes are \
linearly independent there and rank E(Q) >= 3. Equivalently, a relation iP + jQ + kR = T with T \
torsion and some coefficient odd would, after absorbing even coefficients and the odd-order torsion \
T (which is itself a double), put a nonempty combination inside 2E(Q).";

const COMBOS: [(&str, [bool; 3]); 7] = [
    ("P", [true, false, false]),
    ("Q", [false, true, false]),
    ("R", [false, false, true]),
    ("P+Q", [true, true, false]),
    ("P+R", [true, false, true]),
    ("Q+R", [false, true, true]),
    ("P+Q+R", [true, true, true]),
];

fn combination(fc: &FamilyCurve, mask: [bool; 3]) -> RationalPoint {
    [&fc.p, &fc.q, &fc.r]
        .iter()
        .zip(mask)
        .filter(|(_, on)| *on)
        .fold(RationalPoint::Infinity, |acc, (pt, _)| fc.curve.add(&acc, pt))
}

fn coincidence(fc: &FamilyCurve) -> Option<String> {
    let e = &fc.curve;
    let pairs = [("P", &fc.p, "Q", &fc.q), ("R", &fc.r, "P", &fc.p), ("R", &fc.r, "Q", &fc.q)];
    for (n1, s, n2, t) in pairs {
        if s == t {
            return Some(format!("{n1} = {n2}"));
        }
        if *s == e.neg(t) {
            return Some(format!("{n1} = -{n2}"));
        }
    }
    None
}

/// Builds the curve for `params` and runs every coset test.
pub fn certify_rank_at_least_3(params: &CurveParams) -> Result<RankCertificate> {
    let fc = params.build()?;
    let mut cert = RankCertificate {
        params: params.clone(),
        curve: fc.curve.clone(),
        points: MarkedPoints { p: fc.p.clone(), q: fc.q.clone(), r: fc.r.clone() },
        two_torsion: None,
        checks: Vec::new(),
        verdict: Verdict::Certified,
        soundness: SOUNDNESS,
    };
    if let Some(reason) = coincidence(&fc) {
        cert.verdict = Verdict::Failed { kind: FailureKind::Degenerate, reason };
        return Ok(cert);
    }
    let torsion = fc.curve.two_torsion();
    let free = torsion.free;
    cert.two_torsion = Some(torsion);
    if !free {
        cert.verdict = Verdict::Failed {
            kind: FailureKind::TwoTorsion,
            reason: "the cubic has a rational root".into(),
        };
        return Ok(cert);
    }
    let points: Vec<(&str, RationalPoint)> = COMBOS
        .iter()
        .map(|(name, mask)| (*name, combination(&fc, *mask)))
        .collect();
    if let Some((name, _)) = points.iter().find(|(_, pt)| pt.is_infinity()) {
        cert.verdict = Verdict::Failed {
            kind: FailureKind::Degenerate,
            reason: format!("{name} is the identity"),
        };
        return Ok(cert);
    }
    let tests: Vec<HalvingTest> = {
        use rayon::prelude::*;
        points.par_iter().map(|(_, pt)| is_in_2e(&fc.curve, pt)).collect()
    };
    for ((name, pt), t) in points.into_iter().zip(tests) {
        if t.in_2e && cert.verdict.is_certified() {
            cert.verdict = Verdict::Failed {
                kind: FailureKind::InTwoE,
                reason: format!("{name} is a double"),
            };
        }
        cert.checks.push(CosetCheck {
            combo: name.to_string(),
            point: pt,
            quartic: t.quartic,
            roots_found: t.roots_found,
            in_2e: t.in_2e,
            witness: t.witness,
            verdict: if t.in_2e { "in 2E" } else { "not in 2E" },
        });
    }
    Ok(cert)
}

/// A good prime `p` with `S mod p ∉ 2E(F_p)`, which proves `S ∉ 2E(ℚ)`
/// independently of the halving quartic. Only primes up to `max_prime` are tried.
pub fn local_obstruction(e: &WeierstrassCurve, s: &RationalPoint, max_prime: u64) -> Option<u64> {
    crate::poly::modp::primes_up_to(max_prime).into_iter().find(|&p| {
        let Ok(red) = e.reduce_mod_p(p) else { return false };
        if !red.good {
            return false;
        }
        let target = red.reduce_point(s);
        !red.points().iter().any(|t| red.add(t, t) == target)
    })
}

/// One obstruction polynomial evaluated at a concrete curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCheck {
    pub polynomial: &'static str,
    pub targets: Vec<String>,
    pub roots: Vec<RationalRoot>,
    /// Roots that lift to an actual halving of one of the targets.
    pub admissible: Vec<RationalPoint>,
    /// Whether the halving oracle agrees with the admissible-root filter.
    pub agrees_with_halving_test: bool,
}

/// Specializes F, G (both orientations) and H at `params` and checks their
/// root sets against [`is_in_2e`] on the corresponding points.
pub fn cross_validate(params: &CurveParams) -> Result<Vec<ObstructionCheck>> {
    let fc = params.build()?;
    let e = &fc.curve;
    let m = BigRational::from_integer(params.m.clone());
    let m2 = &m * &m;
    let pr = e.add(&fc.p, &fc.r);
    let pmr = e.sub(&fc.p, &fc.r);
    let qr = e.add(&fc.q, &fc.r);
    let qmr = e.sub(&fc.q, &fc.r);
    let pq = e.add(&fc.p, &fc.q);
    let pqr = e.add(&pq, &fc.r);
    let pqmr = e.sub(&pq, &fc.r);

    let g_ab = derive_coset_poly(Coset::G, Some(&params.a), Some(&params.b))?.poly;
    let g_ba = derive_coset_poly(Coset::G, Some(&params.b), Some(&params.a))?.poly;
    let h = derive_coset_poly(Coset::H, Some(&params.a), Some(&params.b))?.poly;
    let f = derive_f_numeric(&params.a, &params.b);

    type Case<'a> = (&'static str, SparsePoly, BigRational, Vec<(&'a str, RationalPoint)>);
    let cases: Vec<Case> = vec![
        ("F", f, -m2.clone(), vec![("R", fc.r.clone()), ("-R", e.neg(&fc.r))]),
        ("G", g_ab, BigRational::zero(), vec![("P+R", pr), ("P-R", pmr)]),
        ("G(b,a)", g_ba, BigRational::zero(), vec![("Q+R", qr), ("Q-R", qmr)]),
        ("H", h, BigRational::zero(), vec![("P+Q+R", pqr), ("P+Q-R", pqmr)]),
    ];
    let mut out = Vec::new();
    for (name, poly, shift, targets) in cases {
        let uni = poly.specialize(&[("m", m.clone())]);
        let roots = crate::poly::rational_roots(&uni)?;
        let mut admissible = Vec::new();
        let mut agrees = true;
        for (_, target) in &targets {
            let lifted: Vec<RationalPoint> = roots
                .iter()
                .filter_map(|r| halving_at(e, target, &(&r.value + &shift)))
                .collect();
            agrees &= is_in_2e(e, target).in_2e == !lifted.is_empty();
            admissible.extend(lifted);
        }
        out.push(ObstructionCheck {
            polynomial: name,
            targets: targets.iter().map(|(n, _)| n.to_string()).collect(),
            roots,
            admissible,
            agrees_with_halving_test: agrees,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
