//! Symbolic derivation of the obstruction polynomials F, G and H.
//!
//! Coordinates live in `ℚ(m, a, b)(n)` with `n² = (a+b)m² − ab`, written
//! `(u + v·n)/w`. Equating `x(2T)` with the x-coordinate of a target point
//! and clearing denominators gives a polynomial in `x` whose coefficients may
//! still involve `n`; multiplying by the conjugate `n ↦ −n` removes it.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::poly::{bindings, int, var, SparsePoly};
use crate::{Error, Result};

/// `(a+b)m² − ab`, the value of `n²`.
pub fn pell_radicand() -> SparsePoly {
    (var("a") + var("b")) * var("m").pow(2) - var("a") * var("b")
}

/// `(u + v·n)/w`.
#[derive(Clone, Debug)]
pub(crate) struct PellFn {
    u: SparsePoly,
    v: SparsePoly,
    w: SparsePoly,
}

impl PellFn {
    pub(crate) fn poly(p: SparsePoly) -> Self {
        Self { u: p, v: SparsePoly::zero(), w: SparsePoly::one() }
    }

    /// `c·n`
    pub(crate) fn times_n(c: SparsePoly) -> Self {
        Self { u: SparsePoly::zero(), v: c, w: SparsePoly::one() }
    }

    fn normalized(self) -> Self {
        if self.is_zero() {
            return Self::poly(SparsePoly::zero());
        }
        let g = self.u.gcd(&self.v).gcd(&self.w);
        let u = self.u.div_exact(&g).expect("gcd divides");
        let v = self.v.div_exact(&g).expect("gcd divides");
        let w = self.w.div_exact(&g).expect("gcd divides");
        let (c, w) = w.integer_primitive();
        let inv = c.recip();
        Self { u: u.scale(&inv), v: v.scale(&inv), w }
    }

    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn same_as(&self, o: &Self) -> bool {
        &self.u * &o.w == &o.u * &self.w && &self.v * &o.w == &o.v * &self.w
    }

    fn neg(&self) -> Self {
        Self { u: -&self.u, v: -&self.v, w: self.w.clone() }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            u: &self.u * &o.w + &o.u * &self.w,
            v: &self.v * &o.w + &o.v * &self.w,
            w: &self.w * &o.w,
        }
        .normalized()
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        let d = pell_radicand();
        Self {
            u: &self.u * &o.u + &d * &(&self.v * &o.v),
            v: &self.u * &o.v + &self.v * &o.u,
            w: &self.w * &o.w,
        }
        .normalized()
    }

    fn inv(&self) -> Result<Self> {
        // w/(u + vn) = w(u − vn)/(u² − D v²)
        let den = &self.u * &self.u - &pell_radicand() * &(&self.v * &self.v);
        if den.is_zero() {
            return Err(Error::Degenerate("division by zero in Q(m,a,b)(n)".into()));
        }
        Ok(Self { u: &self.w * &self.u, v: -(&self.w * &self.v), w: den }.normalized())
    }

    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }
}

#[derive(Clone, Debug)]
pub(crate) enum SymPoint {
    Infinity,
    Affine { x: PellFn, y: PellFn },
}

/// Chord addition on the generic curve; coincident points are rejected.
pub(crate) fn sym_add(s: &SymPoint, t: &SymPoint) -> Result<SymPoint> {
    let (x1, y1, x2, y2) = match (s, t) {
        (SymPoint::Infinity, _) => return Ok(t.clone()),
        (_, SymPoint::Infinity) => return Ok(s.clone()),
        (SymPoint::Affine { x: x1, y: y1 }, SymPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
    };
    if x1.same_as(x2) {
        if y1.add(y2).is_zero() {
            return Ok(SymPoint::Infinity);
        }
        return Err(Error::Degenerate("symbolic addition of coincident points".into()));
    }
    let lambda = y2.sub(y1).div(&x2.sub(x1))?;
    let x3 = lambda
        .mul(&lambda)
        .sub(&PellFn::poly(var("a") + var("b")))
        .sub(x1)
        .sub(x2);
    let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
    Ok(SymPoint::Affine { x: x3, y: y3 })
}

/// `P = (−a, m³)`, `Q = (−b, m³)`, `R = (−m², m·n)`.
pub(crate) fn generic_points() -> (SymPoint, SymPoint, SymPoint) {
    let m3 = var("m").pow(3);
    let p = SymPoint::Affine { x: PellFn::poly(-var("a")), y: PellFn::poly(m3.clone()) };
    let q = SymPoint::Affine { x: PellFn::poly(-var("b")), y: PellFn::poly(m3) };
    let r = SymPoint::Affine {
        x: PellFn::poly(-var("m").pow(2)),
        y: PellFn::times_n(var("m")),
    };
    (p, q, r)
}

/// Numerator `x⁴ − 2c1x² − 8c0x + c1² − 4c2c0` and cubic `f` of the generic curve.
fn doubling_parts() -> (SparsePoly, SparsePoly) {
    let x = var("x");
    let c2 = var("a") + var("b");
    let c1 = var("a") * var("b");
    let c0 = var("m").pow(6);
    let num = x.pow(4) - int(2) * &c1 * x.pow(2) - int(8) * &c0 * &x + c1.pow(2)
        - int(4) * &c2 * &c0;
    let f = x.pow(3) + &c2 * x.pow(2) + &c1 * &x + c0;
    (num, f)
}

/// Clears `w·num(x) − (u + v·n)·4f(x)` of `n` by taking the norm.
fn eliminate(target_x: &PellFn) -> SparsePoly {
    let (num, f) = doubling_parts();
    let four_f = int(4) * f;
    let base = &target_x.w * &num - &target_x.u * &four_f;
    let p = if target_x.v.is_zero() {
        base
    } else {
        let nv = &target_x.v * &four_f;
        base.pow(2) - pell_radicand() * nv.pow(2)
    };
    p.integer_primitive().1
}

fn with_standard_vars(p: SparsePoly) -> SparsePoly {
    let mut vars: Vec<&str> = vec!["x", "m", "a", "b"];
    vars.retain(|v| p.active_vars().iter().any(|w| w == v));
    p.with_vars(&vars)
}

/// `F_{a,b}(x, m)`: the halving quartic of `R`, translated by `x ↦ x − m²`.
pub fn derive_f() -> SparsePoly {
    let (_, _, r) = generic_points();
    let SymPoint::Affine { x: xr, .. } = r else { unreachable!() };
    let phi = eliminate(&xr);
    let shifted = phi.substitute(&bindings(&[("x", var("x") - var("m").pow(2))]));
    with_standard_vars(shifted.integer_primitive().1)
}

/// `F` at numeric `(a, b)`.
pub fn derive_f_numeric(a: &BigInt, b: &BigInt) -> SparsePoly {
    specialize_ab(&derive_f(), Some(a), Some(b))
}

fn specialize_ab(p: &SparsePoly, a: Option<&BigInt>, b: Option<&BigInt>) -> SparsePoly {
    let mut vals: Vec<(&str, BigRational)> = Vec::new();
    if let Some(a) = a {
        vals.push(("a", BigRational::from_integer(a.clone())));
    }
    if let Some(b) = b {
        vals.push(("b", BigRational::from_integer(b.clone())));
    }
    with_standard_vars(p.specialize(&vals).integer_primitive().1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum Coset {
    G,
    H,
}

impl Coset {
    pub fn target(self) -> &'static str {
        match self {
            Coset::G => "P+R",
            Coset::H => "P+Q+R",
        }
    }
}

/// The obstruction attached to a coset, before and after content removal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetPolynomial {
    pub which: Coset,
    /// Denominator-cleared elimination result.
    pub cleared: SparsePoly,
    /// Content with respect to `x` of `cleared` (after any `m² − 1` removal).
    pub content: SparsePoly,
    /// Primitive part with respect to `x`.
    pub poly: SparsePoly,
    pub degree_x: u32,
    /// For `a = 1` and `G`: how many times `m² − 1` was divided out of `cleared`.
    pub m2_minus_1_removed: Option<u32>,
}

fn symbolic_cleared(which: Coset) -> Result<&'static SparsePoly> {
    static G: OnceLock<std::result::Result<SparsePoly, Error>> = OnceLock::new();
    static H: OnceLock<std::result::Result<SparsePoly, Error>> = OnceLock::new();
    let cell = match which {
        Coset::G => &G,
        Coset::H => &H,
    };
    cell.get_or_init(|| {
        let (p, q, r) = generic_points();
        let target = match which {
            Coset::G => sym_add(&p, &r)?,
            Coset::H => sym_add(&sym_add(&p, &q)?, &r)?,
        };
        let SymPoint::Affine { x, .. } = target else {
            return Err(Error::Degenerate(format!("{} is the identity", which.target())));
        };
        Ok(with_standard_vars(eliminate(&x)))
    })
    .as_ref()
    .map_err(Clone::clone)
}

/// Derives `G` (from `P+R`) or `H` (from `P+Q+R`); `None` leaves `a` or `b` symbolic.
pub fn derive_coset_poly(
    which: Coset,
    a: Option<&BigInt>,
    b: Option<&BigInt>,
) -> Result<CosetPolynomial> {
    let cleared = specialize_ab(symbolic_cleared(which)?, a, b);
    let mut reduced = cleared.clone();
    let mut removed = None;
    if which == Coset::G && a.is_some_and(|a| a == &BigInt::from(1)) {
        let (cof, k) = cleared.remove_factor(&(var("m").pow(2) - int(1)));
        if k == 0 {
            return Err(Error::Contract("G at a = 1 is not divisible by m^2 - 1".into()));
        }
        removed = Some(k);
        reduced = cof;
    }
    let (content, poly) = reduced.content_and_primitive("x")?;
    let poly = with_standard_vars(poly);
    Ok(CosetPolynomial {
        which,
        degree_x: poly.degree_in("x"),
        cleared,
        content: content.compact(),
        poly,
        m2_minus_1_removed: removed,
    })
}
