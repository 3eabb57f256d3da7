//! Canonical heights by iterated doubling, the height pairing, and the
//! regulator of a small set of points, all carried as enclosing intervals.
//!
//! `ĥ(S) = lim ½·h(x(2ᵏS))/4ᵏ`, so `ĥ(2S) = 4ĥ(S)`. The difference
//! `ĥ − ½h(x)` is bounded on the whole curve by [`HeightBound`], which turns
//! the value at `2ᵏS` into an enclosure of width `O(4⁻ᵏ)`.
//!
//! Doubling runs on `x = X/Z` as a pair of coprime integers; the common factor
//! of the new pair always divides the resultant of the two doubling forms, so
//! it is removed with a gcd against that fixed integer instead of the huge
//! coordinates themselves.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{RationalPoint, WeierstrassCurve};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_MAX_DOUBLINGS: u32 = 8;

/// Natural log of `|n|`, for `n ≠ 0`.
pub fn ln_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        let (_, digits) = n.to_u64_digits();
        return digits
            .iter()
            .rev()
            .fold(0.0f64, |acc, &d| acc * 18446744073709551616.0 + d as f64)
            .ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    let (_, d) = top.to_u64_digits();
    (d[0] as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log max(|num|, |den|)` of a reduced rational.
pub fn rational_height(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    if n.is_zero() {
        return 0.0;
    }
    ln_abs(n).max(ln_abs(d))
}

/// `h(x(S))`.
pub fn naive_height(s: &RationalPoint) -> Result<f64> {
    match s.x() {
        Some(x) => Ok(rational_height(x)),
        None => Err(Error::Domain("the point at infinity has no naive height".into())),
    }
}

/// A closed interval with outward rounding on every operation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[allow(clippy::should_implement_trait)]
impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo: lo.min(hi), hi: lo.max(hi) }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    fn widened(lo: f64, hi: f64) -> Self {
        Self { lo: lo.next_down(), hi: hi.next_up() }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn radius(&self) -> f64 {
        (0.5 * (self.hi - self.lo)).next_up()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn add(self, o: Self) -> Self {
        Self::widened(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::widened(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn mul(self, o: Self) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Self::widened(lo, hi)
    }

    pub fn scale(self, c: f64) -> Self {
        self.mul(Self::point(c))
    }

    pub fn intersect_nonneg(self) -> Self {
        Self { lo: self.lo.max(0.0), hi: self.hi.max(0.0) }
    }
}

/// Bounds `−lower ≤ ĥ(T) − ½h(x(T)) ≤ upper` valid for every `T`, from the
/// classical estimate in terms of `h(j)` and `h(Δ)` for integral models.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeightBound {
    pub lower: f64,
    pub upper: f64,
}

impl HeightBound {
    pub fn for_curve(e: &WeierstrassCurve) -> Self {
        let hj = rational_height(&e.j_invariant());
        let hd = ln_abs(&e.discriminant());
        Self {
            lower: hj / 8.0 + hd / 12.0 + 0.973,
            upper: hj / 12.0 + hd / 12.0 + 1.07,
        }
    }

    pub fn max(&self) -> f64 {
        self.lower.max(self.upper)
    }
}

/// Doublings needed before the enclosure width `(lower+upper)/4ᵏ` is below `tol`.
pub fn doublings_for(bound: &HeightBound, tol: f64) -> u32 {
    let w = bound.lower + bound.upper;
    let mut k = 0;
    while w / 4f64.powi(k as i32) > tol && k < 64 {
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightValue {
    pub value: f64,
    pub error_bound: f64,
    pub enclosure: Interval,
    pub doublings: u32,
    pub tolerance_met: bool,
    pub torsion: bool,
}

impl HeightValue {
    fn exact_zero() -> Self {
        Self {
            value: 0.0,
            error_bound: 0.0,
            enclosure: Interval::point(0.0),
            doublings: 0,
            tolerance_met: true,
            torsion: true,
        }
    }

    /// The value rounded to the digits its error bound supports.
    pub fn display(&self) -> String {
        crate::json::decimal_with_error(self.value, self.error_bound)
    }
}

/// Resultant of the numerator and denominator forms of the doubling map.
fn doubling_resultant(e: &WeierstrassCurve) -> BigInt {
    let (c2, c1, c0) = (&e.c2, &e.c1, &e.c0);
    // both forms of degree 4, coefficients from X⁴ down to Z⁴
    let f: [BigInt; 5] = [
        BigInt::one(),
        BigInt::zero(),
        -(c1 * BigInt::from(2)),
        -(c0 * BigInt::from(8)),
        c1 * c1 - BigInt::from(4) * c2 * c0,
    ];
    let g: [BigInt; 5] = [
        BigInt::zero(),
        BigInt::from(4),
        c2 * BigInt::from(4),
        c1 * BigInt::from(4),
        c0 * BigInt::from(4),
    ];
    let mut m = vec![vec![BigInt::zero(); 8]; 8];
    for r in 0..4 {
        for c in 0..5 {
            m[r][r + c] = f[c].clone();
            m[r + 4][r + c] = g[c].clone();
        }
    }
    bareiss_det(m)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Iterated x-only doubling of one point, keeping `x(2ᵏS) = X/Z` reduced.
#[derive(Clone, Debug)]
pub struct DoublingChain {
    c: [BigInt; 3],
    resultant: BigInt,
    bound: HeightBound,
    x: BigInt,
    z: BigInt,
    k: u32,
    reached_infinity: bool,
}

impl DoublingChain {
    pub fn new(e: &WeierstrassCurve, s: &RationalPoint) -> Result<Self> {
        let Some(x) = s.x() else {
            return Err(Error::Domain("cannot start a doubling chain at infinity".into()));
        };
        Ok(Self {
            c: [e.c2.clone(), e.c1.clone(), e.c0.clone()],
            resultant: doubling_resultant(e).abs(),
            bound: HeightBound::for_curve(e),
            x: x.numer().clone(),
            z: x.denom().clone(),
            k: 0,
            reached_infinity: false,
        })
    }

    pub fn doublings(&self) -> u32 {
        self.k
    }

    pub fn step(&mut self) {
        if self.reached_infinity {
            self.k += 1;
            return;
        }
        let [c2, c1, c0] = &self.c;
        let (x, z) = (&self.x, &self.z);
        let x2 = x * x;
        let z2 = z * z;
        let xz = x * z;
        let z3 = &z2 * z;
        let xn = &x2 * &x2 - &x2 * &z2 * c1 * 2u32 - &xz * &z2 * c0 * 8u32
            + &z2 * &z2 * (c1 * c1 - c2 * c0 * 4u32);
        let zn = (&x2 * x + &x2 * z * c2 + &xz * z * c1 + z3 * c0) * z * 4u32;
        self.k += 1;
        if zn.is_zero() {
            self.reached_infinity = true;
            return;
        }
        let g = (&xn % &self.resultant).gcd(&self.resultant);
        let g = (&zn % &g).gcd(&g);
        let (mut xn, mut zn) = if g.is_one() { (xn, zn) } else { (xn / &g, zn / &g) };
        if zn.sign() == Sign::Minus {
            xn = -xn;
            zn = -zn;
        }
        self.x = xn;
        self.z = zn;
    }

    /// Enclosure of `ĥ(S)` from the current doubling.
    pub fn enclosure(&self) -> Interval {
        if self.reached_infinity {
            return Interval::point(0.0);
        }
        let h = if self.x.is_zero() { 0.0 } else { ln_abs(&self.x).max(ln_abs(&self.z)) };
        let half = Interval::widened(0.5 * h * (1.0 - 1e-15), 0.5 * h * (1.0 + 1e-15));
        let scale = 4f64.powi(-(self.k as i32));
        let lo = half.lo - self.bound.upper;
        let hi = half.hi + self.bound.lower;
        Interval::widened(lo * scale, hi * scale).intersect_nonneg()
    }

    pub fn is_torsion(&self) -> bool {
        self.reached_infinity
    }
}

/// Exact torsion test: Nagell–Lutz integrality, then orders up to 12.
pub fn is_torsion(e: &WeierstrassCurve, s: &RationalPoint) -> bool {
    let RationalPoint::Affine { x, y } = s else {
        return true;
    };
    if !x.denom().is_one() || !y.denom().is_one() {
        return false;
    }
    let mut t = s.clone();
    for _ in 1..12 {
        if t.is_infinity() {
            return true;
        }
        match &t {
            RationalPoint::Affine { x, y } if !x.denom().is_one() || !y.denom().is_one() => {
                return false
            }
            _ => {}
        }
        t = e.add(&t, s);
    }
    t.is_infinity()
}

/// `ĥ(S)` to within `tolerance`, doubling at most `max_doublings` times.
pub fn canonical_height_capped(
    e: &WeierstrassCurve,
    s: &RationalPoint,
    tolerance: f64,
    max_doublings: u32,
) -> Result<HeightValue> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::Domain(format!("tolerance {tolerance} must be positive")));
    }
    if !e.contains(s) {
        return Err(Error::Domain(format!("{s} is not on {e}")));
    }
    if is_torsion(e, s) {
        return Ok(HeightValue::exact_zero());
    }
    let mut chain = DoublingChain::new(e, s)?;
    let target = doublings_for(&chain.bound, 2.0 * tolerance).min(max_doublings);
    while chain.doublings() < target {
        chain.step();
    }
    Ok(value_of(&chain, tolerance))
}

fn value_of(chain: &DoublingChain, tolerance: f64) -> HeightValue {
    let iv = chain.enclosure();
    HeightValue {
        value: iv.mid(),
        error_bound: iv.radius(),
        enclosure: iv,
        doublings: chain.doublings(),
        tolerance_met: iv.radius() <= tolerance,
        torsion: chain.is_torsion(),
    }
}

pub fn canonical_height(e: &WeierstrassCurve, s: &RationalPoint, tolerance: f64) -> Result<HeightValue> {
    canonical_height_capped(e, s, tolerance, DEFAULT_MAX_DOUBLINGS)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairingMatrix {
    pub entries: Vec<Vec<Interval>>,
}

impl PairingMatrix {
    pub fn values(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|r| r.iter().map(Interval::mid).collect()).collect()
    }

    pub fn error_bounds(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|r| r.iter().map(Interval::radius).collect()).collect()
    }

    pub fn determinant(&self) -> Interval {
        interval_det(&self.entries)
    }
}

fn interval_det(m: &[Vec<Interval>]) -> Interval {
    let n = m.len();
    match n {
        0 => Interval::point(1.0),
        1 => m[0][0],
        _ => {
            let mut acc = Interval::point(0.0);
            for j in 0..n {
                let minor: Vec<Vec<Interval>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                    .collect();
                let term = m[0][j].mul(interval_det(&minor));
                acc = if j % 2 == 0 { acc.add(term) } else { acc.sub(term) };
            }
            acc
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Regulator {
    pub heights: Vec<HeightValue>,
    pub pairing: PairingMatrix,
    pub determinant: Interval,
    pub det: f64,
    pub det_error: f64,
    pub independent: bool,
    /// A relation `Σ cᵢSᵢ = torsion` found by exact search, when the
    /// determinant does not separate from zero.
    pub relation: Option<Vec<i64>>,
    pub doublings: u32,
}

const RELATION_SEARCH_BOUND: i64 = 3;

fn combos(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|c| *c != 0) && v.iter().find(|c| **c != 0).is_some_and(|c| *c > 0));
    out
}

/// Smallest-coefficient exact relation with `|cᵢ| ≤ bound`, if any.
pub fn find_relation(e: &WeierstrassCurve, points: &[RationalPoint], bound: i64) -> Option<Vec<i64>> {
    let mut cands = combos(points.len(), bound);
    cands.sort_by_key(|v| (v.iter().map(|c| c.abs()).sum::<i64>(), v.clone()));
    cands.into_iter().find(|v| {
        let s = v
            .iter()
            .zip(points)
            .fold(RationalPoint::Infinity, |acc, (c, p)| e.add(&acc, &e.mul(*c, p)));
        is_torsion(e, &s)
    })
}

/// Pairing matrix and determinant of `points`, doubling further until every
/// height meets `tolerance` or `max_doublings` is reached. With
/// `stop_when_separated`, also stops as soon as the determinant excludes zero.
pub fn regulator_capped(
    e: &WeierstrassCurve,
    points: &[RationalPoint],
    tolerance: f64,
    max_doublings: u32,
    stop_when_separated: bool,
) -> Result<Regulator> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::Domain(format!("tolerance {tolerance} must be positive")));
    }
    for s in points {
        if !e.contains(s) {
            return Err(Error::Domain(format!("{s} is not on {e}")));
        }
    }
    let n = points.len();
    // slots: ĥ(Sᵢ) then ĥ(Sᵢ+Sⱼ) for i < j
    let mut pts: Vec<RationalPoint> = points.to_vec();
    let mut pair_index = vec![vec![0usize; n]; n];
    for i in 0..n {
        pair_index[i][i] = i;
        for j in i + 1..n {
            pair_index[i][j] = pts.len();
            pair_index[j][i] = pts.len();
            pts.push(e.add(&points[i], &points[j]));
        }
    }
    let mut chains: Vec<Option<DoublingChain>> = pts
        .par_iter()
        .map(|s| if is_torsion(e, s) { None } else { DoublingChain::new(e, s).ok() })
        .collect();
    let enclosure = |c: &Option<DoublingChain>| c.as_ref().map_or(Interval::point(0.0), |c| c.enclosure());
    let bound = HeightBound::for_curve(e);
    let start = doublings_for(&bound, 1.0).min(max_doublings);
    let mut k = 0;
    loop {
        while k < start {
            chains.par_iter_mut().flatten().for_each(|c| c.step());
            k += 1;
        }
        let hs: Vec<Interval> = chains.iter().map(enclosure).collect();
        let entries: Vec<Vec<Interval>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            hs[i]
                        } else {
                            hs[pair_index[i][j]].sub(hs[i]).sub(hs[j]).scale(0.5)
                        }
                    })
                    .collect()
            })
            .collect();
        let pairing = PairingMatrix { entries };
        let det = pairing.determinant();
        let separated = !det.contains_zero();
        let precise = hs.iter().all(|h| h.radius() <= tolerance);
        if (separated && stop_when_separated) || precise || k >= max_doublings {
            let relation = if separated { None } else { find_relation(e, points, RELATION_SEARCH_BOUND) };
            let heights = chains
                .iter()
                .take(n)
                .map(|c| match c {
                    Some(c) => value_of(c, tolerance),
                    None => HeightValue::exact_zero(),
                })
                .collect();
            return Ok(Regulator {
                heights,
                det: det.mid(),
                det_error: det.radius(),
                determinant: det,
                pairing,
                independent: separated,
                relation,
                doublings: k,
            });
        }
        chains.par_iter_mut().flatten().for_each(|c| c.step());
        k += 1;
    }
}

/// Stops as soon as independence is decided; see [`regulator_capped`].
pub fn regulator(e: &WeierstrassCurve, points: &[RationalPoint], tolerance: f64) -> Result<Regulator> {
    regulator_capped(e, points, tolerance, DEFAULT_MAX_DOUBLINGS + 2, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveParams;

    fn curve_1235() -> crate::curve::FamilyCurve {
        CurveParams::new(1, 2, 3, 5).unwrap().build().unwrap()
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive_height(&RationalPoint::from_ints(-9, 15)).unwrap(), 9f64.ln());
        let q = RationalPoint::new(BigRational::new(3.into(), 4.into()), BigRational::one());
        assert!((naive_height(&q).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(naive_height(&RationalPoint::from_ints(0, 1)).unwrap(), 0.0);
        assert!(naive_height(&RationalPoint::Infinity).is_err());
    }

    #[test]
    fn ln_of_large() {
        let n = BigInt::from(10).pow(400);
        assert!((ln_abs(&n) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_abs(&BigInt::from(-7)) - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn resultant_nonzero() {
        let fc = curve_1235();
        let r = doubling_resultant(&fc.curve);
        assert!(!r.is_zero());
        assert!((&r % fc.curve.cubic_discriminant()).is_zero());
    }

    #[test]
    fn chain_matches_exact_doubling() {
        let fc = curve_1235();
        let mut chain = DoublingChain::new(&fc.curve, &fc.r).unwrap();
        let mut s = fc.r.clone();
        for _ in 0..4 {
            chain.step();
            s = fc.curve.double(&s);
            let x = s.x().unwrap();
            assert_eq!((&chain.x, &chain.z), (x.numer(), x.denom()));
        }
    }

    #[test]
    fn quadratic_in_multiples() {
        let fc = curve_1235();
        let e = &fc.curve;
        let h1 = canonical_height_capped(e, &fc.r, 1e-6, 6).unwrap();
        for k in [2i64, 3] {
            let hk = canonical_height_capped(e, &e.mul(k, &fc.r), 1e-6, 6).unwrap();
            let scaled = h1.enclosure.scale((k * k) as f64);
            assert!(hk.enclosure.lo <= scaled.hi && scaled.lo <= hk.enclosure.hi);
        }
        let hn = canonical_height_capped(e, &e.neg(&fc.r), 1e-6, 6).unwrap();
        assert_eq!(hn.enclosure, h1.enclosure);
        assert!(h1.enclosure.lo > 0.0);
    }

    #[test]
    fn parallelogram() {
        let fc = curve_1235();
        let e = &fc.curve;
        let h = |s: &RationalPoint| canonical_height_capped(e, s, 1e-6, 6).unwrap().enclosure;
        let lhs = h(&e.add(&fc.p, &fc.r)).add(h(&e.sub(&fc.p, &fc.r)));
        let rhs = h(&fc.p).add(h(&fc.r)).scale(2.0);
        assert!(lhs.sub(rhs).contains_zero());
    }

    #[test]
    fn torsion_is_zero() {
        let e = WeierstrassCurve::new(0, 0, 1).unwrap();
        let h = canonical_height(&e, &RationalPoint::from_ints(2, 3), 1e-6).unwrap();
        assert_eq!(h.value, 0.0);
        assert!(h.torsion);
    }

    #[test]
    fn independent_and_dependent_triples() {
        let fc = curve_1235();
        let e = &fc.curve;
        let reg = regulator(e, &[fc.p.clone(), fc.q.clone(), fc.r.clone()], 1e-6).unwrap();
        assert!(reg.independent, "{reg:?}");
        assert!(reg.det > 0.0);
        let twopq = e.add(&e.double(&fc.p), &fc.q);
        for triple in [
            [fc.p.clone(), fc.p.clone(), fc.q.clone()],
            [fc.p.clone(), fc.q.clone(), twopq],
        ] {
            let reg = regulator_capped(e, &triple, 1e-6, 6, false).unwrap();
            assert!(!reg.independent);
            assert!(reg.determinant.contains_zero());
            assert!(reg.relation.is_some());
        }
    }

    #[test]
    fn interval_ops_enclose() {
        let a = Interval::new(1.0, 2.0);
        let b = Interval::new(-3.0, 0.5);
        let p = a.mul(b);
        assert!(p.contains(-6.0) && p.contains(1.0));
        assert!(a.sub(a).contains_zero());
    }
}
