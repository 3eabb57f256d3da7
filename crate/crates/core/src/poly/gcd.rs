//! Recursive multivariate gcd over ℚ by primitive pseudo-remainder sequences.

use super::SparsePoly;

fn normalized(p: &SparsePoly) -> SparsePoly {
    if p.is_zero() {
        return p.clone();
    }
    p.integer_primitive().1.compact()
}

pub(super) fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a SparsePoly>) -> SparsePoly {
    // Short polynomials first keeps the running gcd small.
    let mut list: Vec<&SparsePoly> = polys.into_iter().collect();
    list.sort_by_key(|p| (p.num_terms(), p.total_degree()));
    let mut acc = SparsePoly::zero();
    for p in list {
        acc = gcd(&acc, p);
        if !acc.is_zero() && acc.is_constant() {
            return SparsePoly::one();
        }
    }
    acc
}

fn content_in(p: &SparsePoly, v: &str) -> SparsePoly {
    let coeffs = p.coefficients_in(v);
    gcd_many(coeffs.iter().filter(|c| !c.is_zero()))
}

fn primitive_part_in(p: &SparsePoly, v: &str) -> SparsePoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_remainder(a: &SparsePoly, b: &SparsePoly, v: &str) -> SparsePoly {
    let db = b.degree_in(v);
    let lb = b.leading_coefficient_in(v);
    let mut r = a.clone();
    let da = a.degree_in(v);
    let mut e = da as i64 - db as i64 + 1;
    let x = SparsePoly::var(v);
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let t = &r.leading_coefficient_in(v) * &x.pow(dr - db);
        r = &(&lb * &r) - &(&t * b);
        e -= 1;
    }
    if e > 0 {
        r = &lb.pow(e as u32) * &r;
    }
    r
}

pub(super) fn gcd(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    if a.is_zero() {
        return normalized(b);
    }
    if b.is_zero() {
        return normalized(a);
    }
    if a.is_constant() || b.is_constant() {
        return SparsePoly::one();
    }
    let mut vars = a.active_vars();
    for w in b.active_vars() {
        if !vars.contains(&w) {
            vars.push(w);
        }
    }
    let v = vars[0].as_str();
    let (da, db) = (a.degree_in(v), b.degree_in(v));
    if da == 0 {
        return gcd(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let g = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let h = loop {
        let r = pseudo_remainder(&p, &q, v);
        if r.is_zero() {
            break primitive_part_in(&q, v);
        }
        if r.degree_in(v) == 0 {
            break SparsePoly::one();
        }
        p = q;
        q = primitive_part_in(&r, v);
    };
    normalized(&(&g * &h))
}
