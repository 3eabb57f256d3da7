//! Dense univariate polynomials over ℤ and exact rational root isolation.
//!
//! Rational roots are found by rescaling to a monic integer polynomial
//! (whose rational roots are integers) and bisecting a Sturm sequence at
//! half-integer points. No divisor enumeration is needed, so large constant
//! terms cost only a logarithmic number of steps.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::SparsePoly;
use crate::{Error, Result};

/// Dense integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.c.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.c.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.c
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(self.c.iter().map(|v| v / &g).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, v)| v * BigInt::from(k))
                .collect(),
        )
    }

    fn to_rat(&self) -> Vec<BigRational> {
        self.c.iter().map(|v| BigRational::from_integer(v.clone())).collect()
    }

    fn from_rat(p: &[BigRational]) -> Self {
        let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Self::new(p.iter().map(|c| c.numer() * (&lcm / c.denom())).collect())
    }

    /// `self / gcd(self, self')`, integral and primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.primitive();
        }
        let p = self.to_rat();
        let g = rat_gcd(&p, &self.derivative().to_rat());
        let (q, _) = rat_divrem(&p, &g);
        Self::from_rat(&q).primitive()
    }

    /// All rational roots with multiplicity, ascending.
    pub fn rational_roots(&self) -> Result<Vec<RationalRoot>> {
        if self.is_zero() {
            return Err(Error::Domain("rational roots of the zero polynomial".into()));
        }
        let sqf = self.squarefree_part();
        if sqf.degree() == 0 {
            return Ok(Vec::new());
        }
        let lead = sqf.leading().unwrap().clone();
        let monic = monic_rescale(&sqf);
        let mut out: Vec<RationalRoot> = integer_roots_monic(&monic)
            .into_iter()
            .map(|y| {
                let value = BigRational::new(y, lead.clone());
                let multiplicity = self.multiplicity_of(&value);
                RationalRoot { value, multiplicity }
            })
            .collect();
        out.sort_by(|a, b| a.value.cmp(&b.value));
        Ok(out)
    }

    fn multiplicity_of(&self, r: &BigRational) -> u32 {
        let lin = vec![-BigRational::from_integer(r.numer().clone()),
            BigRational::from_integer(r.denom().clone())];
        let mut cur = self.to_rat();
        let mut k = 0;
        loop {
            let (q, rem) = rat_divrem(&cur, &lin);
            if !rem.is_empty() {
                return k;
            }
            k += 1;
            cur = q;
        }
    }
}

/// A root and how many times `(den·x − num)` divides the polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalRoot {
    #[serde(with = "crate::json::rational_str")]
    pub value: BigRational,
    pub multiplicity: u32,
}

/// Rational roots of a univariate polynomial with rational (typically integer) coefficients.
pub fn rational_roots(p: &SparsePoly) -> Result<Vec<RationalRoot>> {
    if p.is_zero() {
        return Err(Error::Domain("rational roots of the zero polynomial".into()));
    }
    let var = p.sole_var()?;
    let (_, prim) = p.integer_primitive();
    match var {
        None => Ok(Vec::new()),
        Some(v) => prim.to_int_poly(&v)?.rational_roots(),
    }
}

fn rat_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|v| v.is_zero()) {
        p.pop();
    }
}

fn rat_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    rat_trim(&mut r);
    let mut b = b.to_vec();
    rat_trim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            let t = &coef * bc;
            r[shift + i] -= t;
        }
        q[shift] = coef;
        r.pop();
        rat_trim(&mut r);
    }
    rat_trim(&mut q);
    (q, r)
}

fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    rat_trim(&mut x);
    rat_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = rat_divrem(&x, &y);
        x = std::mem::replace(&mut y, r);
    }
    if let Some(l) = x.last().cloned() {
        for c in &mut x {
            *c /= &l;
        }
    }
    x
}

/// `L^{d−1}·p(y/L)`: monic, and its integer roots are `L` times the rational roots of `p`.
fn monic_rescale(p: &IntPoly) -> IntPoly {
    let d = p.degree();
    let lead = p.leading().unwrap();
    let mut out = Vec::with_capacity(d + 1);
    let mut scale = BigInt::one();
    let mut scales = vec![BigInt::one(); d];
    for i in (0..d).rev() {
        scales[i] = scale.clone();
        scale *= lead;
    }
    for i in 0..d {
        out.push(&p.c[i] * &scales[i]);
    }
    out.push(BigInt::one());
    IntPoly::new(out)
}

struct Sturm {
    chain: Vec<IntPoly>,
}

impl Sturm {
    fn new(p: &IntPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative().primitive()];
        loop {
            let n = chain.len();
            if chain[n - 1].degree() == 0 {
                break;
            }
            let (_, r) = rat_divrem(&chain[n - 2].to_rat(), &chain[n - 1].to_rat());
            if r.is_empty() {
                break;
            }
            let neg: Vec<BigRational> = r.into_iter().map(|c| -c).collect();
            // positive rescaling keeps signs intact
            let lcm = neg.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints = IntPoly::new(neg.iter().map(|c| c.numer() * (&lcm / c.denom())).collect());
            let g = ints.content();
            chain.push(IntPoly::new(ints.c.iter().map(|v| v / &g).collect()));
        }
        Self { chain }
    }

    /// Sign changes at `t/2`.
    fn variations(&self, t: &BigInt) -> usize {
        let two = BigInt::from(2);
        let mut last: Option<Ordering> = None;
        let mut count = 0;
        for p in &self.chain {
            let d = p.degree();
            let mut acc = BigInt::zero();
            let mut pow2 = BigInt::one();
            let mut tpow = BigInt::one();
            // Σ c_i t^i 2^{d−i}
            let mut terms = Vec::with_capacity(d + 1);
            for c in &p.c {
                terms.push(c * &tpow);
                tpow *= t;
            }
            for term in terms.iter().rev() {
                acc += term * &pow2;
                pow2 *= &two;
            }
            let s = acc.sign();
            let ord = match s {
                num_bigint::Sign::Plus => Ordering::Greater,
                num_bigint::Sign::Minus => Ordering::Less,
                num_bigint::Sign::NoSign => continue,
            };
            if let Some(l) = last {
                if l != ord {
                    count += 1;
                }
            }
            last = Some(ord);
        }
        count
    }
}

fn integer_roots_monic(q: &IntPoly) -> Vec<BigInt> {
    let bound = q.c[..q.degree()]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
        + 1u32;
    let sturm = Sturm::new(q);
    let lo = -(&bound * 2u32) - 1u32;
    let hi = &bound * 2u32 + 1u32;
    let vlo = sturm.variations(&lo);
    let vhi = sturm.variations(&hi);
    let mut roots = Vec::new();
    let mut stack = vec![(lo, hi, vlo, vhi)];
    while let Some((lo, hi, vlo, vhi)) = stack.pop() {
        if vlo <= vhi {
            continue;
        }
        if &hi - &lo == BigInt::from(2) {
            let y: BigInt = (&lo + 1u32) / 2u32;
            if q.eval(&y).is_zero() {
                roots.push(y);
            }
            continue;
        }
        let mut mid = (&lo + &hi).div_floor(&BigInt::from(2));
        if mid.is_even() {
            mid += 1u32;
        }
        let vmid = sturm.variations(&mid);
        stack.push((lo, mid.clone(), vlo, vmid));
        stack.push((mid, hi, vmid, vhi));
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn values(p: &IntPoly) -> Vec<BigRational> {
        p.rational_roots().unwrap().into_iter().map(|x| x.value).collect()
    }

    #[test]
    fn root_examples() {
        assert_eq!(values(&IntPoly::from_i64(&[-1, 0, 1])), vec![r(-1, 1), r(1, 1)]);
        assert!(values(&IntPoly::from_i64(&[729, 2, 3, 1])).is_empty());
        assert_eq!(values(&IntPoly::from_i64(&[-3, 2])), vec![r(3, 2)]);
        assert!(IntPoly::new(vec![]).rational_roots().is_err());
    }

    #[test]
    fn divisor_enumeration_oracle_for_torsion_cubic() {
        // every integer root of x³+3x²+2x+729 divides 729
        let p = IntPoly::from_i64(&[729, 2, 3, 1]);
        let divisors: Vec<i64> = (1..=729).filter(|d| 729 % d == 0).collect();
        for d in divisors {
            for s in [d, -d] {
                assert!(!p.eval(&BigInt::from(s)).is_zero());
            }
        }
    }

    #[test]
    fn multiplicities_and_zero_root() {
        // x²(x − 2)³(3x + 1)
        let base = IntPoly::from_i64(&[0, 0, 1]);
        let mut c = base.to_rat();
        for _ in 0..3 {
            c = mul_rat(&c, &[r(-2, 1), r(1, 1)]);
        }
        c = mul_rat(&c, &[r(1, 1), r(3, 1)]);
        let p = IntPoly::from_rat(&c);
        let roots = p.rational_roots().unwrap();
        let got: Vec<(BigRational, u32)> = roots.into_iter().map(|x| (x.value, x.multiplicity)).collect();
        assert_eq!(got, vec![(r(-1, 3), 1), (r(0, 1), 2), (r(2, 1), 3)]);
    }

    #[test]
    fn large_roots() {
        // (x − 10^30)(x + 7/5)(x² + 1)
        let big = BigInt::from(10u32).pow(30);
        let c = mul_rat(
            &mul_rat(&[-BigRational::from_integer(big.clone()), r(1, 1)], &[r(7, 5), r(1, 1)]),
            &[r(1, 1), r(0, 1), r(1, 1)],
        );
        let p = IntPoly::from_rat(&c);
        assert_eq!(values(&p), vec![r(-7, 5), BigRational::from_integer(big)]);
    }

    fn mul_rat(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    proptest! {
        #[test]
        fn roots_are_exact_and_complete(
            roots in proptest::collection::vec((-40i64..40, 1i64..6), 0..4),
            extra in proptest::collection::vec(-9i64..10, 0..3),
        ) {
            let mut c = vec![r(1, 1)];
            for (n, d) in &roots {
                c = mul_rat(&c, &[r(-*n, 1), r(*d, 1)]);
            }
            // an irreducible-ish tail with no rational roots where possible
            let mut tail = vec![r(1, 1), r(0, 1), r(1, 1)];
            for e in &extra { tail.push(r(*e, 1)); }
            c = mul_rat(&c, &tail);
            let p = IntPoly::from_rat(&c);
            let found = p.rational_roots().unwrap();
            for root in &found {
                prop_assert!(p.eval_rational(&root.value).is_zero());
            }
            for (n, d) in &roots {
                let v = r(*n, *d);
                prop_assert!(found.iter().any(|x| x.value == v));
            }
            // brute-force oracle over small candidates
            for num in -45i64..45 {
                for den in 1i64..8 {
                    let v = r(num, den);
                    if p.eval_rational(&v).is_zero() {
                        prop_assert!(found.iter().any(|x| x.value == v));
                    }
                }
            }
        }
    }
}
