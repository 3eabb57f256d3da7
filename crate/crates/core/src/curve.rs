//! Weierstrass curves `y² = x³ + c2·x² + c1·x + c0` over ℚ and over prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::pell::exact_sqrt;
use crate::poly::modp::is_prime;
use crate::poly::{IntPoly, RationalRoot};
use crate::{Error, Result};

/// The quadruple `(a, b, m, n)` behind `y² = x(x+a)(x+b) + m⁶`, with
/// `n² − (a+b)m² = −ab`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveParams {
    #[serde(with = "crate::json::bigint_str")]
    pub a: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub b: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub m: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub n: BigInt,
}

impl CurveParams {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        m: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self> {
        let p = Self { a: a.into(), b: b.into(), m: m.into(), n: n.into() };
        p.validate()?;
        Ok(p)
    }

    /// Solves the Pell identity for `n ≥ 0`.
    pub fn with_auto_n(a: impl Into<BigInt>, b: impl Into<BigInt>, m: impl Into<BigInt>) -> Result<Self> {
        let (a, b, m) = (a.into(), b.into(), m.into());
        Self::check_ab(&a, &b)?;
        let n2 = (&a + &b) * &m * &m - &a * &b;
        let n = exact_sqrt(&n2).ok_or_else(|| {
            Error::Domain(format!("no integer n with n^2 = (a+b)m^2 - ab = {n2}"))
        })?;
        Self::new(a, b, m, n)
    }

    fn check_ab(a: &BigInt, b: &BigInt) -> Result<()> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::Domain("a and b must be nonzero".into()));
        }
        if a == b {
            return Err(Error::Domain("a and b must be distinct".into()));
        }
        if !a.gcd(b).is_one() {
            return Err(Error::Domain(format!("a = {a} and b = {b} are not coprime")));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        Self::check_ab(&self.a, &self.b)?;
        if !self.m.is_positive() {
            return Err(Error::Domain("m must be positive".into()));
        }
        if self.n.is_negative() {
            return Err(Error::Domain("n must be nonnegative".into()));
        }
        if !self.pell_identity_holds() {
            return Err(Error::Contract(format!(
                "n^2 - (a+b)m^2 = -ab fails for (a, b, m, n) = ({}, {}, {}, {})",
                self.a, self.b, self.m, self.n
            )));
        }
        Ok(())
    }

    pub fn pell_identity_holds(&self) -> bool {
        &self.n * &self.n - (&self.a + &self.b) * &self.m * &self.m == -(&self.a * &self.b)
    }

    /// Same curve family with `a` and `b` exchanged.
    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone(), m: self.m.clone(), n: self.n.clone() }
    }

    /// The three marked points and the curve.
    pub fn build(&self) -> Result<FamilyCurve> {
        self.validate()?;
        let curve = WeierstrassCurve::new(
            &self.a + &self.b,
            &self.a * &self.b,
            num_traits::pow(self.m.clone(), 6),
        )?;
        let m3 = num_traits::pow(self.m.clone(), 3);
        let p = RationalPoint::from_ints(-&self.a, m3.clone());
        let q = RationalPoint::from_ints(-&self.b, m3);
        let r = RationalPoint::from_ints(-(&self.m * &self.m), &self.m * &self.n);
        for (name, pt) in [("P", &p), ("Q", &q), ("R", &r)] {
            if !curve.contains(pt) {
                return Err(Error::Contract(format!("{name} = {pt} is not on {curve}")));
            }
        }
        Ok(FamilyCurve { params: self.clone(), curve, p, q, r })
    }

    pub fn id(&self) -> String {
        format!("E({},{},{})", self.a, self.b, self.m)
    }
}

/// A family member with its points `P = (−a, m³)`, `Q = (−b, m³)`, `R = (−m², mn)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCurve {
    pub params: CurveParams,
    pub curve: WeierstrassCurve,
    pub p: RationalPoint,
    pub q: RationalPoint,
    pub r: RationalPoint,
}

pub fn build_curve(params: &CurveParams) -> Result<FamilyCurve> {
    params.build()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    #[serde(with = "crate::json::bigint_str")]
    pub c2: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub c1: BigInt,
    #[serde(with = "crate::json::bigint_str")]
    pub c0: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl RationalPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self::Affine { x, y }
    }

    pub fn from_ints(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self::Affine {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            Self::Infinity => None,
            Self::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&BigRational> {
        match self {
            Self::Infinity => None,
            Self::Affine { y, .. } => Some(y),
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => write!(f, "O"),
            Self::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AffineJson {
    x: String,
    y: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointJson {
    Infinity(String),
    Affine(AffineJson),
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::json::rational_to_string;
        match self {
            Self::Infinity => s.serialize_str("infinity"),
            Self::Affine { x, y } => AffineJson { x: rational_to_string(x), y: rational_to_string(y) }
                .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::json::parse_rational;
        use serde::de::Error as _;
        match PointJson::deserialize(d)? {
            PointJson::Infinity(s) if s == "infinity" => Ok(Self::Infinity),
            PointJson::Infinity(s) => Err(D::Error::custom(format!("unknown point {s:?}"))),
            PointJson::Affine(a) => Ok(Self::Affine {
                x: parse_rational(&a.x).map_err(D::Error::custom)?,
                y: parse_rational(&a.y).map_err(D::Error::custom)?,
            }),
        }
    }
}

/// Rational roots of the cubic, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoTorsion {
    pub free: bool,
    pub roots: Vec<RationalRoot>,
}

impl WeierstrassCurve {
    pub fn new(c2: impl Into<BigInt>, c1: impl Into<BigInt>, c0: impl Into<BigInt>) -> Result<Self> {
        let e = Self { c2: c2.into(), c1: c1.into(), c0: c0.into() };
        if e.cubic_discriminant().is_zero() {
            return Err(Error::Degenerate(format!("{e} is singular")));
        }
        Ok(e)
    }

    /// Discriminant of `x³ + c2x² + c1x + c0`.
    pub fn cubic_discriminant(&self) -> BigInt {
        let (b, c, d) = (&self.c2, &self.c1, &self.c0);
        BigInt::from(18) * b * c * d - BigInt::from(4) * b * b * b * d + b * b * c * c
            - BigInt::from(4) * c * c * c
            - BigInt::from(27) * d * d
    }

    /// The curve discriminant `Δ = 16·disc(cubic)`.
    pub fn discriminant(&self) -> BigInt {
        self.cubic_discriminant() * 16
    }

    pub fn b2(&self) -> BigInt {
        &self.c2 * 4
    }

    pub fn c4(&self) -> BigInt {
        &self.c2 * &self.c2 * 16 - &self.c1 * 48
    }

    /// `j = c4³ / Δ`.
    pub fn j_invariant(&self) -> BigRational {
        let c4 = self.c4();
        BigRational::new(&c4 * &c4 * &c4, self.discriminant())
    }

    pub fn cubic(&self) -> IntPoly {
        IntPoly::new(vec![self.c0.clone(), self.c1.clone(), self.c2.clone(), BigInt::one()])
    }

    /// `f(x) = x³ + c2x² + c1x + c0`.
    pub fn rhs(&self, x: &BigRational) -> BigRational {
        let c = |v: &BigInt| BigRational::from_integer(v.clone());
        ((x + c(&self.c2)) * x + c(&self.c1)) * x + c(&self.c0)
    }

    pub fn contains(&self, s: &RationalPoint) -> bool {
        match s {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    pub fn neg(&self, s: &RationalPoint) -> RationalPoint {
        match s {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { x, y } => RationalPoint::Affine { x: x.clone(), y: -y },
        }
    }

    pub fn double(&self, s: &RationalPoint) -> RationalPoint {
        let RationalPoint::Affine { x, y } = s else {
            return RationalPoint::Infinity;
        };
        if y.is_zero() {
            return RationalPoint::Infinity;
        }
        let c2 = BigRational::from_integer(self.c2.clone());
        let c1 = BigRational::from_integer(self.c1.clone());
        let three = BigRational::from_integer(3.into());
        let two = BigRational::from_integer(2.into());
        let lambda = (&three * x * x + &two * &c2 * x + c1) / (&two * y);
        let x3 = &lambda * &lambda - c2 - &two * x;
        let y3 = lambda * (x - &x3) - y;
        RationalPoint::Affine { x: x3, y: y3 }
    }

    pub fn add(&self, s: &RationalPoint, t: &RationalPoint) -> RationalPoint {
        let (x1, y1, x2, y2) = match (s, t) {
            (RationalPoint::Infinity, _) => return t.clone(),
            (_, RationalPoint::Infinity) => return s.clone(),
            (RationalPoint::Affine { x: x1, y: y1 }, RationalPoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        if x1 == x2 {
            if y1 == y2 {
                return self.double(s);
            }
            return RationalPoint::Infinity;
        }
        let c2 = BigRational::from_integer(self.c2.clone());
        let lambda = (y2 - y1) / (x2 - x1);
        let x3 = &lambda * &lambda - c2 - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        RationalPoint::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, s: &RationalPoint, t: &RationalPoint) -> RationalPoint {
        self.add(s, &self.neg(t))
    }

    /// `k·S` by double-and-add.
    pub fn mul(&self, k: i64, s: &RationalPoint) -> RationalPoint {
        let base = if k < 0 { self.neg(s) } else { s.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = RationalPoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = self.double(&pow);
            }
        }
        acc
    }

    pub fn two_torsion(&self) -> TwoTorsion {
        let roots = self.cubic().rational_roots().expect("cubic is nonzero");
        TwoTorsion { free: roots.is_empty(), roots }
    }

    pub fn two_torsion_free(&self) -> bool {
        self.two_torsion().free
    }

    pub fn reduce_mod_p(&self, p: u64) -> Result<FiniteFieldCurve> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::Domain(format!("prime {p} exceeds the supported range")));
        }
        let pb = BigInt::from(p);
        let red = |v: &BigInt| v.mod_floor(&pb).to_u64().unwrap();
        Ok(FiniteFieldCurve {
            p,
            c2: red(&self.c2),
            c1: red(&self.c1),
            c0: red(&self.c0),
            good: !self.discriminant().is_multiple_of(&pb),
        })
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3")?;
        for (c, mono) in [(&self.c2, "x^2"), (&self.c1, "x"), (&self.c0, "")] {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            match (c.abs().is_one(), mono.is_empty()) {
                (true, false) => write!(f, " {sign} {mono}")?,
                (_, true) => write!(f, " {sign} {}", c.abs())?,
                _ => write!(f, " {sign} {}{mono}", c.abs())?,
            }
        }
        Ok(())
    }
}

/// A curve reduced modulo a word-size prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteFieldCurve {
    pub p: u64,
    pub c2: u64,
    pub c1: u64,
    pub c0: u64,
    /// False when `p` divides the discriminant.
    pub good: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub count: u64,
    pub a_p: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FpPoint {
    Infinity,
    Affine(u64, u64),
}

impl FiniteFieldCurve {
    fn mulm(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut r, mut e, mut b) = (1u64, self.p - 2, a % self.p);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, b);
            }
            b = self.mulm(b, b);
            e >>= 1;
        }
        r
    }

    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let t = (x + self.c2) % p;
        let t = (self.mulm(t, x) + self.c1) % p;
        (self.mulm(t, x) + self.c0) % p
    }

    /// `#E(F_p) = p + 1 + Σ χ(f(x))` with a table of quadratic residues.
    pub fn count_points(&self) -> Result<PointCount> {
        if !self.good {
            return Err(Error::Domain(format!("bad reduction at {}", self.p)));
        }
        let p = self.p;
        if p == 2 {
            unreachable!("2 always divides 16·disc");
        }
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for x in 1..p {
            chi[(x * x % p) as usize] = 1;
        }
        let mut sum: i64 = 0;
        for x in 0..p {
            sum += chi[self.rhs(x) as usize] as i64;
        }
        let count = (p as i64 + 1 + sum) as u64;
        let a_p = -sum;
        assert!(
            (a_p * a_p) as u64 <= 4 * p,
            "Hasse bound violated: a_{p} = {a_p}"
        );
        Ok(PointCount { count, a_p })
    }

    pub fn contains(&self, s: &FpPoint) -> bool {
        match *s {
            FpPoint::Infinity => true,
            FpPoint::Affine(x, y) => self.mulm(y, y) == self.rhs(x),
        }
    }

    pub fn add(&self, s: &FpPoint, t: &FpPoint) -> FpPoint {
        let p = self.p;
        let (x1, y1, x2, y2) = match (*s, *t) {
            (FpPoint::Infinity, _) => return *t,
            (_, FpPoint::Infinity) => return *s,
            (FpPoint::Affine(a, b), FpPoint::Affine(c, d)) => (a, b, c, d),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return FpPoint::Infinity;
            }
            let num = (3 * self.mulm(x1, x1) + 2 * self.mulm(self.c2, x1) + self.c1) % p;
            self.mulm(num, self.inv(2 * y1 % p))
        } else {
            self.mulm((y2 + p - y1) % p, self.inv((x2 + p - x1) % p))
        };
        let x3 = (self.mulm(lambda, lambda) + 3 * p - self.c2 - x1 - x2) % p;
        let y3 = (self.mulm(lambda, (x1 + p - x3) % p) + p - y1) % p;
        FpPoint::Affine(x3, y3)
    }

    /// Every point of `E(F_p)`, infinity first; intended for small `p`.
    pub fn points(&self) -> Vec<FpPoint> {
        let p = self.p;
        let mut roots: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
        for y in 0..p {
            roots[self.mulm(y, y) as usize].push(y);
        }
        let mut out = vec![FpPoint::Infinity];
        for x in 0..p {
            out.extend(roots[self.rhs(x) as usize].iter().map(|&y| FpPoint::Affine(x, y)));
        }
        out
    }

    /// Image of a rational point; points whose coordinates have `p` in the
    /// denominator reduce to infinity.
    pub fn reduce_point(&self, s: &RationalPoint) -> FpPoint {
        let RationalPoint::Affine { x, y } = s else {
            return FpPoint::Infinity;
        };
        let pb = BigInt::from(self.p);
        if x.denom().is_multiple_of(&pb) || y.denom().is_multiple_of(&pb) {
            return FpPoint::Infinity;
        }
        let red = |r: &BigRational| {
            let n = r.numer().mod_floor(&pb).to_u64().unwrap();
            let d = r.denom().mod_floor(&pb).to_u64().unwrap();
            self.mulm(n, self.inv(d))
        };
        FpPoint::Affine(red(x), red(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn e123() -> FamilyCurve {
        CurveParams::new(1, 2, 3, 5).unwrap().build().unwrap()
    }

    fn brute_count(e: &FiniteFieldCurve) -> u64 {
        let mut count = 1;
        for x in 0..e.p {
            for y in 0..e.p {
                if e.contains(&FpPoint::Affine(x, y)) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn build_examples() {
        let fc = e123();
        assert_eq!(fc.curve, WeierstrassCurve::new(3, 2, 729).unwrap());
        assert_eq!(fc.p, RationalPoint::from_ints(-1, 27));
        assert_eq!(fc.q, RationalPoint::from_ints(-2, 27));
        assert_eq!(fc.r, RationalPoint::from_ints(-9, 15));
        // (−9)(−8)(−7) + 729 = 225
        assert_eq!(-9 * -8 * -7 + 729, 15 * 15);

        let k0 = CurveParams::new(1, 2, 1, 1).unwrap().build().unwrap();
        assert_eq!(k0.p, k0.r);

        assert!(matches!(CurveParams::new(2, 4, 1, 1), Err(Error::Domain(_))));
        assert!(matches!(CurveParams::new(1, 2, 3, 6), Err(Error::Contract(_))));
        assert_eq!(CurveParams::with_auto_n(1, 2, 41).unwrap().n, BigInt::from(71));
        assert!(CurveParams::with_auto_n(1, 2, 2).is_err());
    }

    #[test]
    fn on_curve_examples() {
        let fc = e123();
        assert!(fc.curve.contains(&RationalPoint::from_ints(-1, 27)));
        assert!(!fc.curve.contains(&RationalPoint::from_ints(0, 0)));
        assert!(fc.curve.contains(&RationalPoint::Infinity));
    }

    #[test]
    fn group_law_examples() {
        let e = WeierstrassCurve::new(0, 0, 1).unwrap();
        let s = RationalPoint::from_ints(2, 3);
        // λ = 12/6 = 2, x₃ = 4 − 4 = 0, y₃ = 2·2 − 3 = 1
        assert_eq!(e.double(&s), RationalPoint::from_ints(0, 1));
        assert_eq!(e.add(&s, &RationalPoint::Infinity), s);
        assert_eq!(e.add(&s, &e.neg(&s)), RationalPoint::Infinity);
        // (2,3) has order 6 on y² = x³ + 1
        assert_eq!(e.mul(6, &s), RationalPoint::Infinity);
    }

    #[test]
    fn torsion_examples() {
        assert!(e123().curve.two_torsion_free());
        let t = WeierstrassCurve::new(0, -1, 0).unwrap().two_torsion();
        assert!(!t.free);
        let vals: Vec<_> = t.roots.iter().map(|x| x.value.clone()).collect();
        assert_eq!(vals, vec![r(-1, 1), r(0, 1), r(1, 1)]);
        assert!(WeierstrassCurve::new(3, 2, 1).unwrap().two_torsion_free());
    }

    #[test]
    fn discriminant_matches_b_invariants() {
        for (c2, c1, c0) in [(3, 2, 729), (0, -1, 0), (5, -7, 11), (-2, 9, 4)] {
            let e = WeierstrassCurve { c2: c2.into(), c1: c1.into(), c0: c0.into() };
            let (b2, b4, b6) = (BigInt::from(4 * c2), BigInt::from(2 * c1), BigInt::from(4 * c0));
            let b8 = BigInt::from(4 * c2 * c0 - c1 * c1);
            let delta = -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
            assert_eq!(e.discriminant(), delta);
        }
        assert!(matches!(WeierstrassCurve::new(0, 0, 0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn reduction_examples() {
        let e = e123().curve;
        let r5 = e.reduce_mod_p(5).unwrap();
        assert_eq!((r5.c2, r5.c1, r5.c0), (3, 2, 4));
        // y² = x³ + 3 has cubic discriminant −243, so 3 is bad
        let e3 = WeierstrassCurve::new(0, 0, 3).unwrap();
        let bad = 3;
        assert!(!e3.reduce_mod_p(bad).unwrap().good);
        assert!(e3.reduce_mod_p(5).unwrap().good);
        assert!(!e.reduce_mod_p(2).unwrap().good);
        assert!(matches!(e.reduce_mod_p(4), Err(Error::Domain(_))));
        assert!(e3.reduce_mod_p(bad).unwrap().count_points().is_err());
    }

    #[test]
    fn count_examples() {
        let e = WeierstrassCurve::new(0, 0, 1).unwrap().reduce_mod_p(5).unwrap();
        assert_eq!(brute_count(&e), 6);
        assert_eq!(e.count_points().unwrap(), PointCount { count: 6, a_p: 0 });
        let e = WeierstrassCurve::new(0, 1, 0).unwrap().reduce_mod_p(3).unwrap();
        assert_eq!(brute_count(&e), 4);
        assert_eq!(e.count_points().unwrap(), PointCount { count: 4, a_p: 0 });
    }

    #[test]
    fn count_matches_brute_force_small_primes() {
        let fc = e123();
        for p in crate::poly::modp::primes_up_to(31) {
            let ep = fc.curve.reduce_mod_p(p).unwrap();
            if ep.good {
                assert_eq!(ep.count_points().unwrap().count, brute_count(&ep), "p={p}");
            }
        }
    }

    fn combos(fc: &FamilyCurve, i: i64, j: i64, k: i64) -> RationalPoint {
        let e = &fc.curve;
        let s = e.add(&e.mul(i, &fc.p), &e.mul(j, &fc.q));
        e.add(&s, &e.mul(k, &fc.r))
    }

    #[test]
    fn multiples_cancel() {
        let fc = e123();
        for k in 0..=8 {
            for s in [&fc.p, &fc.q, &fc.r] {
                let a = fc.curve.mul(k, s);
                let b = fc.curve.mul(-k, s);
                assert!(fc.curve.contains(&a));
                assert_eq!(fc.curve.add(&a, &b), RationalPoint::Infinity);
            }
        }
    }

    #[test]
    fn pell_identity_is_membership_of_r() {
        let good = CurveParams::new(1, 2, 11, 19).unwrap();
        assert!(good.build().is_ok());
        let bad = CurveParams { n: &good.n + 1, ..good };
        assert!(matches!(bad.build(), Err(Error::Contract(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn associativity(c in proptest::collection::vec((-2i64..3, -2i64..3, -2i64..3), 3)) {
            let fc = e123();
            let e = &fc.curve;
            let s = combos(&fc, c[0].0, c[0].1, c[0].2);
            let t = combos(&fc, c[1].0, c[1].1, c[1].2);
            let u = combos(&fc, c[2].0, c[2].1, c[2].2);
            prop_assert_eq!(e.add(&e.add(&s, &t), &u), e.add(&s, &e.add(&t, &u)));
        }

        #[test]
        fn reduction_is_a_homomorphism(
            c in proptest::collection::vec((-3i64..4, -3i64..4, -3i64..4), 2),
            idx in 2usize..40,
        ) {
            let fc = e123();
            let e = &fc.curve;
            let p = crate::poly::modp::primes_up_to(200)[idx];
            let ep = e.reduce_mod_p(p).unwrap();
            prop_assume!(ep.good);
            let s = combos(&fc, c[0].0, c[0].1, c[0].2);
            let t = combos(&fc, c[1].0, c[1].1, c[1].2);
            let lhs = ep.reduce_point(&e.add(&s, &t));
            let rhs = ep.add(&ep.reduce_point(&s), &ep.reduce_point(&t));
            prop_assert!(ep.contains(&lhs));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
