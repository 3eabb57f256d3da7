//! Polynomials over small prime fields: squarefree and distinct-degree
//! factorization, reduced to the multiset of irreducible factor degrees.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::IntPoly;
use crate::{Error, Result};

/// Deterministic trial-division primality check; fine for the word-size primes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut i = 5u64;
    while i * i <= n {
        if n.is_multiple_of(i) || n.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| is_prime(n))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u64)
        .collect()
}

/// Degrees of the irreducible factors of a polynomial mod `prime`, with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorPattern {
    pub prime: u64,
    /// Ascending.
    pub degrees: Vec<u32>,
    /// False when the reduction has a repeated factor.
    pub squarefree: bool,
}

impl FactorPattern {
    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().sum()
    }

    /// Which degrees a product of a sub-multiset of the factors can have.
    pub fn achievable_degrees(&self) -> Vec<bool> {
        let n = self.total_degree() as usize;
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for &d in &self.degrees {
            for s in (d as usize..=n).rev() {
                if reach[s - d as usize] {
                    reach[s] = true;
                }
            }
        }
        reach
    }
}

#[derive(Clone, Copy)]
struct Field {
    p: u64,
}

type Poly = Vec<u64>;

impl Field {
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p { s - self.p } else { s }
    }
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.p - b }
    }
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn trim(self, mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn monic(self, a: Poly) -> Poly {
        let a = self.trim(a);
        match a.last() {
            None => a,
            Some(&l) => {
                let li = self.inv(l);
                a.into_iter().map(|c| self.mul(c, li)).collect()
            }
        }
    }

    fn sub_poly(self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(out)
    }

    fn mul_poly(self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.trim(out)
    }

    fn divrem(self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let b = self.trim(b.clone());
        assert!(!b.is_empty());
        let mut r = self.trim(a.clone());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let li = self.inv(*b.last().unwrap());
        let mut q = vec![0u64; r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = self.mul(*r.last().unwrap(), li);
            q[shift] = c;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = self.sub(r[shift + i], self.mul(c, bc));
            }
            r = self.trim(r);
        }
        (self.trim(q), r)
    }

    fn rem(self, a: &Poly, b: &Poly) -> Poly {
        self.divrem(a, b).1
    }

    fn gcd(self, a: &Poly, b: &Poly) -> Poly {
        let mut x = self.trim(a.clone());
        let mut y = self.trim(b.clone());
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = std::mem::replace(&mut y, r);
        }
        self.monic(x)
    }

    fn derivative(self, a: &Poly) -> Poly {
        let out = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| self.mul(c, k as u64 % self.p))
            .collect();
        self.trim(out)
    }

    fn powmod(self, base: &Poly, mut e: u64, m: &Poly) -> Poly {
        let mut result = vec![1u64];
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = self.rem(&self.mul_poly(&result, &b), m);
            }
            b = self.rem(&self.mul_poly(&b, &b), m);
            e >>= 1;
        }
        result
    }

    /// Inverse of the Frobenius on a polynomial whose exponents are all multiples of p.
    fn pth_root(self, a: &Poly) -> Poly {
        let p = self.p as usize;
        (0..a.len()).step_by(p).map(|i| a[i]).collect()
    }

    /// Monic squarefree factors with multiplicities.
    fn squarefree_factorization(self, f: &Poly) -> Vec<(Poly, u32)> {
        let f = self.monic(f.clone());
        let mut out = Vec::new();
        if f.len() <= 1 {
            return out;
        }
        let df = self.derivative(&f);
        let mut c = self.gcd(&f, &df);
        let mut w = self.divrem(&f, &c).0;
        let mut i = 1u32;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let fac = self.divrem(&w, &y).0;
            if fac.len() > 1 {
                out.push((self.monic(fac), i));
            }
            w = y;
            c = self.divrem(&c, &w).0;
            i += 1;
        }
        if c.len() > 1 {
            let root = self.pth_root(&c);
            for (g, j) in self.squarefree_factorization(&root) {
                out.push((g, j * self.p as u32));
            }
        }
        out
    }

    /// Degrees of the irreducible factors of a monic squarefree polynomial.
    fn distinct_degree(self, f: &Poly) -> Vec<u32> {
        let mut f = self.monic(f.clone());
        let mut degrees = Vec::new();
        let x: Poly = vec![0, 1];
        let mut h = x.clone();
        let mut d = 1usize;
        while f.len() > 1 && 2 * d < f.len() {
            h = self.powmod(&h, self.p, &f);
            let g = self.gcd(&self.sub_poly(&h, &x), &f);
            if g.len() > 1 {
                let deg = g.len() - 1;
                degrees.extend(std::iter::repeat_n(d as u32, deg / d));
                f = self.divrem(&f, &g).0;
                h = self.rem(&h, &f);
            }
            d += 1;
        }
        if f.len() > 1 {
            degrees.push((f.len() - 1) as u32);
        }
        degrees
    }
}

fn reduce(p: &IntPoly, prime: u64) -> Poly {
    let pb = BigInt::from(prime);
    p.coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("reduced below prime"))
        .collect()
}

/// Factor-degree multiset of `p mod prime`.
///
/// Rejects primes dividing the leading coefficient, since the reduction would
/// lose degree and the pattern would say nothing about factors over ℚ.
pub fn factor_pattern_mod_p(p: &IntPoly, prime: u64) -> Result<FactorPattern> {
    if !is_prime(prime) {
        return Err(Error::Domain(format!("{prime} is not prime")));
    }
    if p.degree() == 0 {
        return Err(Error::Domain("factor pattern of a constant".into()));
    }
    let lead = p.leading().expect("nonzero");
    if (lead % BigInt::from(prime)).is_zero() {
        return Err(Error::RejectedPrime(prime));
    }
    let field = Field { p: prime };
    let f = reduce(p, prime);
    let sqf = field.squarefree_factorization(&f);
    let squarefree = sqf.iter().all(|(_, mult)| *mult == 1);
    let mut degrees = Vec::new();
    for (g, mult) in sqf {
        for d in field.distinct_degree(&g) {
            degrees.extend(std::iter::repeat_n(d, mult as usize));
        }
    }
    degrees.sort_unstable();
    debug_assert_eq!(degrees.iter().sum::<u32>() as usize, p.degree());
    Ok(FactorPattern { prime, degrees, squarefree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pattern_examples() {
        let p = IntPoly::from_i64(&[1, 0, 1]);
        // x² + 1 has no root mod 3
        assert!((0..3).all(|x| (x * x + 1) % 3 != 0));
        let pat = factor_pattern_mod_p(&p, 3).unwrap();
        assert_eq!(pat.degrees, vec![2]);
        assert!(pat.squarefree);

        let q = IntPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(factor_pattern_mod_p(&q, 5).unwrap().degrees, vec![1, 1]);

        let two = factor_pattern_mod_p(&p, 2).unwrap();
        assert_eq!(two.degrees, vec![1, 1]);
        assert!(!two.squarefree);
    }

    #[test]
    fn rejects_bad_primes() {
        let p = IntPoly::from_i64(&[1, 1, 6]);
        assert_eq!(factor_pattern_mod_p(&p, 3), Err(Error::RejectedPrime(3)));
        assert!(matches!(factor_pattern_mod_p(&p, 9), Err(Error::Domain(_))));
    }

    #[test]
    fn x4_plus_1_splits_everywhere() {
        let p = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
        for prime in primes_up_to(200).into_iter().skip(1) {
            let pat = factor_pattern_mod_p(&p, prime).unwrap();
            assert!(pat.degrees.iter().all(|&d| d <= 2), "p={prime}: {:?}", pat.degrees);
        }
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let s = primes_up_to(1000);
        let t: Vec<u64> = (0..=1000).filter(|&n| is_prime(n)).collect();
        assert_eq!(s, t);
    }

    /// Number of roots in F_p by exhaustive evaluation.
    fn root_count(p: &IntPoly, prime: u64) -> usize {
        let r = reduce(p, prime);
        (0..prime)
            .filter(|&x| {
                let f = Field { p: prime };
                r.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c)) == 0
            })
            .count()
    }

    proptest! {
        #[test]
        fn degrees_sum_and_linear_factors_match_roots(
            coeffs in proptest::collection::vec(-50i64..50, 2..8),
            idx in 1usize..20,
        ) {
            let mut c = coeffs;
            *c.last_mut().unwrap() = 1;
            let p = IntPoly::from_i64(&c);
            let prime = primes_up_to(100)[idx];
            let pat = factor_pattern_mod_p(&p, prime).unwrap();
            prop_assert_eq!(pat.total_degree() as usize, p.degree());
            if pat.squarefree {
                let linear = pat.degrees.iter().filter(|&&d| d == 1).count();
                prop_assert_eq!(linear, root_count(&p, prime));
            }
        }
    }
}
