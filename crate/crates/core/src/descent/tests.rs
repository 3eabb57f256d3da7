use super::*;
use crate::poly::{int, var};
use num_bigint::BigInt;
use std::time::Instant;

fn b(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn f_matches_closed_form() {
    let (x, m, a, bb) = (var("x"), var("m"), var("a"), var("b"));
    let expected = x.pow(4)
        + (int(4) * &a * m.pow(2) + int(4) * &bb * m.pow(2) - int(6) * m.pow(4) - int(2) * &a * &bb)
            * x.pow(2)
        + (int(8) * &a * &bb * m.pow(2) - int(8) * &a * m.pow(4) - int(8) * &bb * m.pow(4)) * &x
        + (int(9) * m.pow(8) - int(6) * m.pow(4) * &a * &bb + a.pow(2) * bb.pow(2));
    assert_eq!(derive_f(), expected);
}

#[test]
fn f_is_translated_halving_quartic() {
    let params = CurveParams::new(1, 2, 3, 5).unwrap();
    let fc = params.build().unwrap();
    let phi = doubling_x_quartic(&fc.curve, &fc.r).unwrap().quartic;
    let shifted = phi.substitute(&crate::poly::bindings(&[("x", var("x") - int(9))]));
    let f = derive_f_numeric(&b(1), &b(2)).specialize(&[("m", BigRational::from_integer(b(3)))]);
    assert_eq!(shifted.integer_primitive().1, f);
    assert_eq!(f.coefficient_in("x", 0).constant_value().unwrap(), BigRational::from_integer(b(58081)));
}

#[test]
fn g_structure() {
    let t = Instant::now();
    let g = derive_coset_poly(Coset::G, None, None).unwrap();
    eprintln!("symbolic G: {:?}", t.elapsed());
    assert_eq!(g.degree_x, 8);
    let g1 = derive_coset_poly(Coset::G, Some(&b(1)), None).unwrap();
    assert!(g1.m2_minus_1_removed.unwrap() >= 1);
    let d = var("m").pow(2) - int(1);
    let k = g1.m2_minus_1_removed.unwrap();
    let (cof, _) = g1.cleared.remove_factor(&d);
    assert_eq!(&cof * &d.pow(k), g1.cleared);
    assert_eq!(g1.poly.degree_in("x"), 8);
}

#[test]
fn h_structure() {
    let h = derive_coset_poly(Coset::H, None, None).unwrap();
    assert_eq!(h.degree_x, 8);
    assert!(h.content.is_constant());
}

#[test]
fn symmetric_under_swap() {
    let f = derive_f();
    let swapped = f.substitute(&crate::poly::bindings(&[("a", var("b")), ("b", var("a"))]));
    assert_eq!(f, swapped);
}

#[test]
fn ladder_certified() {
    for &(m, n) in &[(3, 5), (11, 19), (41, 71), (153, 265), (571, 989), (2131, 3691)] {
        let p = CurveParams::new(1, 2, m, n).unwrap();
        let c = certify_rank_at_least_3(&p).unwrap();
        assert!(c.verdict.is_certified(), "m = {m}: {:?}", c.verdict);
        assert_eq!(c.checks.len(), 7);
    }
}

#[test]
fn k0_degenerate() {
    let c = certify_rank_at_least_3(&CurveParams::new(1, 2, 1, 1).unwrap()).unwrap();
    match c.verdict {
        Verdict::Failed { kind: FailureKind::Degenerate, reason } => assert_eq!(reason, "R = P"),
        v => panic!("{v:?}"),
    }
}

#[test]
fn doubles_are_detected() {
    let fc = CurveParams::new(1, 2, 3, 5).unwrap().build().unwrap();
    for s in [&fc.p, &fc.q, &fc.r] {
        let d = fc.curve.double(s);
        let t = is_in_2e(&fc.curve, &d);
        assert!(t.in_2e);
        assert_eq!(fc.curve.double(t.witness.as_ref().unwrap()), d);
    }
}

#[test]
fn infinity_has_no_quartic() {
    let e = WeierstrassCurve::new(0, 0, 3).unwrap();
    assert!(matches!(doubling_x_quartic(&e, &RationalPoint::Infinity), Err(Error::Domain(_))));
}

#[test]
fn obstruction_roots_agree() {
    for &(a, bb, m) in &[(1, 2, 3), (1, 2, 11), (2, 3, 5), (1, 3, 2)] {
        let Ok(p) = CurveParams::with_auto_n(a, bb, m) else { continue };
        for chk in cross_validate(&p).unwrap() {
            assert!(chk.agrees_with_halving_test, "{:?} {}", p, chk.polynomial);
        }
    }
}

#[test]
fn parametric_identities() {
    let (n1, m1) = family_solution(1);
    let t = var("t");
    assert_eq!(n1, &t * &t + &t - int(1));
    assert_eq!(m1, &t + &int(1));
    let (n2, m2) = family_solution(2);
    assert_eq!(n2, int(2) * t.pow(3) + int(2) * t.pow(2) - int(2) * &t - int(1));
    assert_eq!(m2, int(2) * t.pow(2) + int(2) * &t - int(1));
    for i in 0..4 {
        assert!(check_parametric_family(i, &[]).unwrap().identity_holds);
    }
}

#[test]
fn parametric_t2_is_the_m3_curve() {
    let r = check_parametric_family(1, &[2]).unwrap();
    let p = r.members[0].params.clone().unwrap();
    assert_eq!(p, CurveParams::new(1, 2, 3, 5).unwrap());
    assert!(r.members[0].certified);
    assert!(matches!(check_parametric_family(1, &[1]), Err(Error::Domain(_))));
}

#[test]
fn small_scan_is_irreducible() {
    let t = Instant::now();
    let rows = irreducibility_scan(4, 7, &Obstruction::ALL, &ScanBudget::default());
    eprintln!("scan: {} rows in {:?}", rows.len(), t.elapsed());
    assert_eq!(rows.len(), 3 * scan_pairs(4, 7).len());
    for r in &rows {
        assert_eq!(r.verdict, crate::poly::IrreducibilityVerdict::Irreducible, "{r:?}");
    }
    assert!(scan_pairs(2, 2).is_empty());
}

#[test]
fn local_obstructions_agree_with_halving() {
    let fc = CurveParams::new(1, 2, 3, 5).unwrap().build().unwrap();
    let e = &fc.curve;
    for s in [&fc.p, &fc.q, &fc.r] {
        assert!(local_obstruction(e, s, 200).is_some());
        assert!(local_obstruction(e, &e.double(s), 200).is_none());
    }
}

#[test]
fn tiny_budget_escalates() {
    let tiny = ScanBudget { prime_budget: 1, specialization_budget: 1, max_escalations: 6 };
    let rows = irreducibility_scan(5, 9, &Obstruction::ALL, &tiny);
    assert!(rows.iter().any(|r| r.flagged && r.escalations > 0));
    for r in &rows {
        assert_eq!(r.verdict, crate::poly::IrreducibilityVerdict::Irreducible, "{r:?}");
    }
    let none = ScanBudget { prime_budget: 1, specialization_budget: 1, max_escalations: 0 };
    let rows = irreducibility_scan(5, 9, &[Obstruction::H], &none);
    assert!(rows.iter().all(|r| r.escalations == 0));
}
