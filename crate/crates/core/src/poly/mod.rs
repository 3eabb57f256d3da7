//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`SparsePoly`] carries its own ordered variable list; binary operations
//! merge variable lists by name, so `x + m` and `m·x` combine without any
//! global ring object. Terms are keyed by exponent vectors in that variable
//! order, which makes the `BTreeMap` order the lex monomial order.

mod gcd;
pub mod irreducible;
mod json;
pub mod modp;
pub mod univariate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use irreducible::{
    certify_irreducible_bivariate, certify_irreducible_q, certify_irreducible_q_with_primes,
    BivariateCertificate, IrreducibilityVerdict, UnivariateCertificate,
};
pub use json::PolyJson;
pub use modp::{factor_pattern_mod_p, FactorPattern};
pub use univariate::{rational_roots, IntPoly, RationalRoot};

use crate::{Error, Result};

pub type Monomial = Vec<u32>;

#[derive(Clone, Default)]
pub struct SparsePoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

fn rat(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { vars: Vec::new(), terms }
    }

    pub fn integer(c: impl Into<BigInt>) -> Self {
        Self::constant(rat(c))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], BigRational::one());
        Self { vars: vec![name.to_string()], terms }
    }

    /// Builds from `(exponents, coefficient)` pairs; repeated monomials are summed.
    pub fn from_terms<S: AsRef<str>>(
        vars: &[S],
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Domain(format!("duplicate variable {v}")));
            }
        }
        let mut out = Self { vars, terms: BTreeMap::new() };
        for (e, c) in terms {
            if e.len() != out.vars.len() {
                return Err(Error::Domain(format!(
                    "exponent vector {e:?} does not match {} variables",
                    out.vars.len()
                )));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(BigRational::zero))
    }

    fn add_term(&mut self, e: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Variables that actually occur with positive degree, in stored order.
    pub fn active_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Re-expresses the polynomial over `vars`, which must contain every active variable.
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = Self { vars, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut ne = vec![0; out.vars.len()];
            for (i, &k) in e.iter().enumerate() {
                match map[i] {
                    Some(j) => ne[j] = k,
                    None => assert_eq!(k, 0, "variable {} dropped while active", self.vars[i]),
                }
            }
            out.terms.insert(ne, c.clone());
        }
        out
    }

    fn merged_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.merged_vars(other);
        (self.with_vars(&vars), other.with_vars(&vars))
    }

    /// Drops variables that no longer occur.
    pub fn compact(&self) -> Self {
        let active = self.active_vars();
        if active.len() == self.vars.len() {
            return self.clone();
        }
        self.with_vars(&active)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Lex-leading monomial and coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coefficient_in(&self, var: &str, k: u32) -> Self {
        let Some(i) = self.var_index(var) else {
            return if k == 0 { self.clone() } else { Self::zero() };
        };
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut out = Self { vars, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut ne = e.clone();
                ne.remove(i);
                out.terms.insert(ne, c.clone());
            }
        }
        out
    }

    /// Dense coefficient list in `var`, ascending.
    pub fn coefficients_in(&self, var: &str) -> Vec<Self> {
        let Some(i) = self.var_index(var) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(var) as usize;
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut out: Vec<Self> = (0..=deg)
            .map(|_| Self { vars: vars.clone(), terms: BTreeMap::new() })
            .collect();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne.remove(i) as usize;
            out[k].terms.insert(ne, c.clone());
        }
        out
    }

    /// Inverse of [`SparsePoly::coefficients_in`].
    pub fn from_coefficients_in(var: &str, coeffs: &[Self]) -> Self {
        let x = Self::var(var);
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    pub fn leading_coefficient_in(&self, var: &str) -> Self {
        self.coefficient_in(var, self.degree_in(var))
    }

    /// Replaces variables by polynomials; unbound variables are kept.
    pub fn substitute(&self, bindings: &HashMap<String, SparsePoly>) -> Self {
        if bindings.is_empty() || self.vars.iter().all(|v| !bindings.contains_key(v)) {
            return self.clone();
        }
        let mut power_cache: Vec<Vec<SparsePoly>> = vec![Vec::new(); self.vars.len()];
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut term = Self::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let base = bindings
                    .get(&self.vars[i])
                    .cloned()
                    .unwrap_or_else(|| Self::var(&self.vars[i]));
                let cache = &mut power_cache[i];
                if cache.is_empty() {
                    cache.push(Self::one());
                }
                while cache.len() <= k as usize {
                    let next = cache.last().unwrap() * &base;
                    cache.push(next);
                }
                term = &term * &cache[k as usize];
            }
            out = &out + &term;
        }
        out
    }

    /// Convenience wrapper for rational bindings.
    pub fn specialize(&self, values: &[(&str, BigRational)]) -> Self {
        let bindings: HashMap<String, SparsePoly> = values
            .iter()
            .map(|(v, r)| (v.to_string(), SparsePoly::constant(r.clone())))
            .collect();
        self.substitute(&bindings)
    }

    /// Full evaluation; every active variable must be bound.
    pub fn evaluate(&self, values: &HashMap<String, BigRational>) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = values.get(&self.vars[i]).ok_or_else(|| {
                    Error::Domain(format!("variable {} is unbound", self.vars[i]))
                })?;
                t *= num_traits::pow(v.clone(), k as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: &str) -> Self {
        let Some(i) = self.var_index(var) else {
            return Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        };
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                ne[i] -= 1;
                out.add_term(ne, c * rat(e[i]));
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let (mut rem, d) = self.aligned(divisor);
        let (lead_e, lead_c) = {
            let (e, c) = d.leading_term().unwrap();
            (e.clone(), c.clone())
        };
        let mut quot = Self { vars: rem.vars.clone(), terms: BTreeMap::new() };
        while let Some((e, c)) = rem.leading_term() {
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Monomial = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            let qc = c / &lead_c;
            let mut t = Self { vars: rem.vars.clone(), terms: BTreeMap::new() };
            t.terms.insert(qe.clone(), qc.clone());
            rem = &rem - &(&t * &d);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Divides out `divisor` as many times as it goes; returns the cofactor and the power.
    pub fn remove_factor(&self, divisor: &Self) -> (Self, u32) {
        let mut cur = self.clone();
        let mut k = 0;
        if divisor.is_constant() || self.is_zero() {
            return (cur, 0);
        }
        while let Some(q) = cur.div_exact(divisor) {
            cur = q;
            k += 1;
        }
        (cur, k)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    /// Splits off the rational content: `self = c · p` with `p` integral,
    /// coefficient gcd 1 and positive lex-leading coefficient.
    pub fn integer_primitive(&self) -> (BigRational, Self) {
        if self.is_zero() {
            return (BigRational::zero(), self.clone());
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&lcm / c.denom());
            g = g.gcd(&v);
        }
        if self.leading_term().unwrap().1.is_negative() {
            g = -g;
        }
        let content = BigRational::new(g, lcm);
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// `self = content · primitive` with respect to `main_var`; the content is the
    /// gcd of the coefficients in the other variables.
    pub fn content_and_primitive(&self, main_var: &str) -> Result<(Self, Self)> {
        if self.is_zero() {
            return Err(Error::Domain("content of the zero polynomial".into()));
        }
        let coeffs = self.coefficients_in(main_var);
        let content = gcd::gcd_many(coeffs.iter().filter(|c| !c.is_zero()));
        let primitive = self
            .div_exact(&content)
            .expect("content divides every coefficient");
        let (c, primitive) = primitive.integer_primitive();
        Ok((content.scale(&c), primitive.with_vars(&self.vars)))
    }

    /// Greatest common divisor up to a rational unit, normalized integer-primitive.
    pub fn gcd(&self, other: &Self) -> Self {
        gcd::gcd(self, other)
    }

    /// Dense integer coefficients in `var`, if the polynomial is univariate in it
    /// with integer coefficients.
    pub fn to_int_poly(&self, var: &str) -> Result<IntPoly> {
        let active = self.active_vars();
        if active.iter().any(|v| v != var) {
            return Err(Error::Domain(format!(
                "expected a polynomial in {var} only, found variables {active:?}"
            )));
        }
        let deg = self.degree_in(var) as usize;
        let mut c = vec![BigInt::zero(); deg + 1];
        let i = self.var_index(var);
        for (e, v) in &self.terms {
            if !v.denom().is_one() {
                return Err(Error::Domain("non-integer coefficient".into()));
            }
            let k = i.map(|i| e[i] as usize).unwrap_or(0);
            c[k] = v.numer().clone();
        }
        Ok(IntPoly::new(c))
    }

    pub fn from_int_poly(var: &str, p: &IntPoly) -> Self {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (vec![k as u32], BigRational::from_integer(c.clone())));
        Self::from_terms(&[var], terms).expect("single variable")
    }

    /// The single variable of a univariate polynomial, if it has one.
    pub(crate) fn sole_var(&self) -> Result<Option<String>> {
        let active = self.active_vars();
        match active.len() {
            0 => Ok(None),
            1 => Ok(Some(active[0].clone())),
            _ => Err(Error::Domain(format!("expected a univariate polynomial, found {active:?}"))),
        }
    }
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for SparsePoly {}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let (a, b) = self.aligned(rhs);
        let mut out = SparsePoly { vars: a.vars.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-BigRational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SparsePoly> for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: &SparsePoly) -> SparsePoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<SparsePoly> for &SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Shorthand used throughout the symbolic derivations.
pub fn var(name: &str) -> SparsePoly {
    SparsePoly::var(name)
}

pub fn int(c: i64) -> SparsePoly {
    SparsePoly::integer(c)
}

pub fn bindings(pairs: &[(&str, SparsePoly)]) -> HashMap<String, SparsePoly> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> SparsePoly {
        var("x")
    }
    fn m() -> SparsePoly {
        var("m")
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!((x() + int(1)) * (x() - int(1)), x().pow(2) - int(1));
        let p = x().pow(3) + int(2) * m();
        assert_eq!(&p + &SparsePoly::zero(), p);
        assert_eq!((x() + m()) * (x() - m()), x().pow(2) - m().pow(2));
        assert!((x() - x()).is_zero());
    }

    #[test]
    fn substitution_examples() {
        let p = x().pow(2) + int(1);
        let shifted = p.substitute(&bindings(&[("x", x() - int(1))]));
        assert_eq!(shifted, x().pow(2) - int(2) * x() + int(2));
        assert_eq!(p.substitute(&HashMap::new()), p);
    }

    #[test]
    fn content_examples() {
        let p = (m().pow(2) - int(1)) * x().pow(2) + (m().pow(2) - int(1));
        let (c, pp) = p.content_and_primitive("x").unwrap();
        assert_eq!(c, m().pow(2) - int(1));
        assert_eq!(pp, x().pow(2) + int(1));
        assert_eq!(&c * &pp, p);

        let q = x().pow(2) + m() * x() + int(1);
        let (c, _) = q.content_and_primitive("x").unwrap();
        assert!(c.constant_value().is_some());

        assert!(SparsePoly::zero().content_and_primitive("x").is_err());
    }

    #[test]
    fn exact_division() {
        let a = (x() + m()).pow(3) * (x() - int(2) * m() + int(1));
        let q = a.div_exact(&(x() + m())).unwrap();
        assert_eq!(q, (x() + m()).pow(2) * (x() - int(2) * m() + int(1)));
        assert!(a.div_exact(&(x() + int(7))).is_none());
        let (co, k) = a.remove_factor(&(x() + m()));
        assert_eq!(k, 3);
        assert_eq!(co, x() - int(2) * m() + int(1));
    }

    #[test]
    fn gcd_examples() {
        let g = x().pow(2) * m() - int(3) * m();
        let a = &g * &(x() + m().pow(2));
        let b = &g * &(x() * m() - int(5));
        let h = a.gcd(&b);
        let (_, gn) = g.integer_primitive();
        assert_eq!(h, gn);
        assert!(x().gcd(&m()).constant_value().is_some());
    }

    #[test]
    fn coefficient_views() {
        let p = int(3) * x().pow(2) * m() + x() - m().pow(4);
        let cs = p.coefficients_in("x");
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], int(3) * m());
        assert_eq!(SparsePoly::from_coefficients_in("x", &cs), p);
        assert_eq!(p.degree_in("m"), 4);
        assert_eq!(p.leading_coefficient_in("x"), int(3) * m());
    }

    fn arb_poly() -> impl Strategy<Value = SparsePoly> {
        let names = ["x", "m", "a"];
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..2), -5i64..6), 0..6).prop_map(
            move |ts| {
                SparsePoly::from_terms(
                    &names,
                    ts.into_iter().map(|((i, j, k), c)| (vec![i, j, k], rat(c))),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p + &q, &q + &p);
        }

        #[test]
        fn shift_round_trip(p in arb_poly()) {
            let fwd = p.substitute(&bindings(&[("x", x() - m().pow(2))]));
            let back = fwd.substitute(&bindings(&[("x", x() + m().pow(2))]));
            prop_assert_eq!(back, p);
        }

        #[test]
        fn content_reconstructs(p in arb_poly(), q in arb_poly()) {
            let prod = &p * &(&q + &int(1));
            prop_assume!(!prod.is_zero());
            let (c, pp) = prod.content_and_primitive("x").unwrap();
            prop_assert_eq!(&c * &pp, prod);
        }
    }
}
