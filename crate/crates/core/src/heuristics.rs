//! Mestre–Nagao sums over good primes and ranking of curve families by them.
//!
//! Point counts are computed per prime in parallel, collected in ascending
//! order of `p`, and only then summed with compensated summation, so the value
//! does not depend on the number of worker threads.

use std::io::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveParams, WeierstrassCurve};
use crate::descent::family_solution;
use crate::pell::{solution_ladder, PellInstance, PellSolution};
use crate::poly::modp::{is_prime, primes_up_to};
use crate::poly::SparsePoly;
use crate::{Error, Result};

/// Which sum to accumulate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NagaoVariant {
    /// `Σ (2 − a_p)·log p / (p + 1 − a_p)`, i.e. `Σ (1 − (p−1)/#E(F_p))·log p`.
    #[default]
    S1,
    /// `(1/N)·Σ −a_p·log p`.
    S2,
}

impl NagaoVariant {
    fn term(self, p: u64, a_p: i64) -> f64 {
        let lp = (p as f64).ln();
        match self {
            NagaoVariant::S1 => (2 - a_p) as f64 * lp / (p as i64 + 1 - a_p) as f64,
            NagaoVariant::S2 => -(a_p as f64) * lp,
        }
    }

    fn finish(self, raw: f64, prime_bound: u64) -> f64 {
        match self {
            NagaoVariant::S1 => raw,
            NagaoVariant::S2 => raw / prime_bound as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub p: u64,
    pub a_p: i64,
}

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Running sum that can be extended over successive prime ranges.
#[derive(Clone, Debug)]
pub struct NagaoAccumulator {
    curve: WeierstrassCurve,
    variant: NagaoVariant,
    acc: Compensated,
    upto: u64,
    skipped: Vec<u64>,
    trace: Vec<TraceEntry>,
}

impl NagaoAccumulator {
    pub fn new(curve: &WeierstrassCurve, variant: NagaoVariant) -> Self {
        Self {
            curve: curve.clone(),
            variant,
            acc: Compensated::default(),
            upto: 1,
            skipped: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn upto(&self) -> u64 {
        self.upto
    }

    /// Adds every prime in `(upto, bound]`.
    pub fn extend_to(&mut self, bound: u64) -> Result<()> {
        if bound <= self.upto {
            return Ok(());
        }
        let primes: Vec<u64> = primes_up_to(bound).into_iter().filter(|&p| p > self.upto).collect();
        let curve = &self.curve;
        let counts: Vec<Result<Option<i64>>> = {
            use rayon::prelude::*;
            primes
                .par_iter()
                .map(|&p| {
                    let red = curve.reduce_mod_p(p)?;
                    if !red.good {
                        return Ok(None);
                    }
                    Ok(Some(red.count_points()?.a_p))
                })
                .collect()
        };
        for (p, c) in primes.into_iter().zip(counts) {
            match c? {
                None => self.skipped.push(p),
                Some(a_p) => {
                    self.acc.add(self.variant.term(p, a_p));
                    self.trace.push(TraceEntry { p, a_p });
                }
            }
        }
        self.upto = bound;
        Ok(())
    }

    pub fn value(&self) -> f64 {
        self.variant.finish(self.acc.value(), self.upto)
    }
}

/// Recomputes a sum from a retained trace.
pub fn sum_from_trace(trace: &[TraceEntry], variant: NagaoVariant, prime_bound: u64) -> f64 {
    let mut acc = Compensated::default();
    for t in trace {
        acc.add(variant.term(t.p, t.a_p));
    }
    variant.finish(acc.value(), prime_bound)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NagaoOptions {
    pub variant: NagaoVariant,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub keep_trace: bool,
}

impl Default for NagaoOptions {
    fn default() -> Self {
        Self { variant: NagaoVariant::S1, workers: None, keep_trace: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeuristicReport {
    pub curve_id: String,
    pub params: Option<CurveParams>,
    pub curve: WeierstrassCurve,
    pub prime_bound: u64,
    pub variant: NagaoVariant,
    pub sum: f64,
    pub good_primes: usize,
    pub skipped: Vec<u64>,
    pub trace: Option<Vec<TraceEntry>>,
}

pub(crate) fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Domain("worker count must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))
            .map(|pool| pool.install(f)),
    }
}

pub fn nagao_sum(curve: &WeierstrassCurve, prime_bound: u64, opts: &NagaoOptions) -> Result<HeuristicReport> {
    if prime_bound < 5 {
        return Err(Error::Domain(format!("prime bound {prime_bound} is below 5")));
    }
    let mut acc = NagaoAccumulator::new(curve, opts.variant);
    in_pool(opts.workers, || acc.extend_to(prime_bound))??;
    Ok(HeuristicReport {
        curve_id: curve.to_string(),
        params: None,
        curve: curve.clone(),
        prime_bound,
        variant: opts.variant,
        sum: acc.value(),
        good_primes: acc.trace.len(),
        skipped: acc.skipped,
        trace: opts.keep_trace.then_some(acc.trace),
    })
}

pub fn nagao_sum_for(params: &CurveParams, prime_bound: u64, opts: &NagaoOptions) -> Result<HeuristicReport> {
    let fc = params.build()?;
    let mut r = nagao_sum(&fc.curve, prime_bound, opts)?;
    r.curve_id = params.id();
    r.params = Some(params.clone());
    Ok(r)
}

/// Curve families to scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    /// `(n_k, m_k)` for `k = 0..=k_max` on the Pell ladder of `(a, b)` from `(n, m)`.
    Ladder {
        #[serde(with = "crate::json::bigint_str")]
        a: BigInt,
        #[serde(with = "crate::json::bigint_str")]
        b: BigInt,
        #[serde(with = "crate::json::bigint_str")]
        n: BigInt,
        #[serde(with = "crate::json::bigint_str")]
        m: BigInt,
        k_max: usize,
    },
    /// `a = 1`, `b = t² − 2` with the `i`-th family solution, `t ∈ [t_min, t_max]`.
    Parametric { i: u32, t_min: i64, t_max: i64 },
    Explicit { curves: Vec<CurveParams> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanFailure {
    pub label: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub prime_bound: u64,
    pub total: usize,
    pub ranked: Vec<HeuristicReport>,
    pub failures: Vec<ScanFailure>,
}

fn eval_t(p: &SparsePoly, t: i64) -> BigInt {
    p.specialize(&[("t", num_rational::BigRational::from_integer(t.into()))])
        .constant_value()
        .expect("polynomial in t")
        .to_integer()
}

/// Expands a generator into labelled parameter sets; bad items become errors.
pub fn expand(generator: &Generator) -> Result<Vec<(String, Result<CurveParams>)>> {
    Ok(match generator {
        Generator::Ladder { a, b, n, m, k_max } => {
            let inst = PellInstance::for_curve(a, b)?;
            let ladder = solution_ladder(&PellSolution::new(n.clone(), m.clone()), &inst, *k_max)?;
            ladder
                .into_iter()
                .enumerate()
                .map(|(k, s)| (format!("k={k}"), CurveParams::new(a.clone(), b.clone(), s.y, s.x)))
                .collect()
        }
        Generator::Parametric { i, t_min, t_max } => {
            let (np, mp) = family_solution(*i);
            (*t_min..=*t_max)
                .map(|t| {
                    let item = if t < 2 {
                        Err(Error::Domain(format!("t = {t} is below 2")))
                    } else {
                        CurveParams::new(1, BigInt::from(t) * t - 2, eval_t(&mp, t), eval_t(&np, t))
                    };
                    (format!("t={t}"), item)
                })
                .collect()
        }
        Generator::Explicit { curves } => {
            curves.iter().map(|c| (c.id(), Ok(c.clone()))).collect()
        }
    })
}

/// Descending by sum, ties broken by `(a, b, m)`.
pub fn scan_family(
    generator: &Generator,
    prime_bound: u64,
    top_k: Option<usize>,
    opts: &NagaoOptions,
) -> Result<ScanReport> {
    let items = expand(generator)?;
    let total = items.len();
    let mut ranked = Vec::new();
    let mut failures = Vec::new();
    for (label, item) in items {
        match item.and_then(|p| nagao_sum_for(&p, prime_bound, opts)) {
            Ok(r) => ranked.push(r),
            Err(e) => failures.push(ScanFailure { label, error: e.to_string() }),
        }
    }
    ranked.sort_by(|x, y| {
        y.sum.total_cmp(&x.sum).then_with(|| {
            let key = |r: &HeuristicReport| r.params.as_ref().map(|p| (p.a.clone(), p.b.clone(), p.m.clone()));
            key(x).cmp(&key(y))
        })
    });
    if let Some(k) = top_k {
        ranked.truncate(k);
    }
    Ok(ScanReport { prime_bound, total, ranked, failures })
}

pub const CSV_HEADER: [&str; 7] = ["curve_id", "a", "b", "m", "n", "prime_bound", "sum"];

pub fn write_csv<W: Write>(reports: &[HeuristicReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    out.write_record(CSV_HEADER).map_err(io)?;
    for r in reports {
        let (a, b, m, n) = match &r.params {
            Some(p) => (p.a.to_string(), p.b.to_string(), p.m.to_string(), p.n.to_string()),
            None => Default::default(),
        };
        out.write_record([
            r.curve_id.clone(),
            a,
            b,
            m,
            n,
            r.prime_bound.to_string(),
            format!("{:.17e}", r.sum),
        ])
        .map_err(io)?;
    }
    out.flush().map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(())
}

/// Primes that divide `Δ` and are at most `bound`.
pub fn bad_primes_up_to(curve: &WeierstrassCurve, bound: u64) -> Vec<u64> {
    let d = curve.discriminant();
    (2..=bound)
        .filter(|&p| is_prime(p) && (&d % BigInt::from(p)) == BigInt::from(0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: i64, n: i64) -> CurveParams {
        CurveParams::new(1, 2, m, n).unwrap()
    }

    #[test]
    fn chunks_equal_one_shot() {
        let fc = params(3, 5).build().unwrap();
        let mut a = NagaoAccumulator::new(&fc.curve, NagaoVariant::S1);
        a.extend_to(3000).unwrap();
        let mut b = NagaoAccumulator::new(&fc.curve, NagaoVariant::S1);
        b.extend_to(1000).unwrap();
        b.extend_to(3000).unwrap();
        assert_eq!(a.value().to_bits(), b.value().to_bits());
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn trace_recomputes_sum() {
        let opts = NagaoOptions { keep_trace: true, ..Default::default() };
        let r = nagao_sum_for(&params(11, 19), 2000, &opts).unwrap();
        let t = r.trace.as_ref().unwrap();
        assert_eq!(sum_from_trace(t, r.variant, r.prime_bound).to_bits(), r.sum.to_bits());
        for e in t {
            assert!((e.a_p * e.a_p) as u64 <= 4 * e.p);
        }
    }

    #[test]
    fn skipped_are_bad_primes() {
        let fc = params(3, 5).build().unwrap();
        let r = nagao_sum(&fc.curve, 5000, &NagaoOptions::default()).unwrap();
        assert_eq!(r.skipped, bad_primes_up_to(&fc.curve, 5000));
    }

    #[test]
    fn below_first_good_prime() {
        // y^2 = x^3 + 3·5·... has only bad primes up to 5
        let e = WeierstrassCurve::new(0, 0, 15).unwrap();
        let r = nagao_sum(&e, 5, &NagaoOptions::default()).unwrap();
        assert_eq!(r.sum, 0.0);
        assert_eq!(r.skipped, vec![2, 3, 5]);
        assert!(nagao_sum(&e, 4, &NagaoOptions::default()).is_err());
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let mut seen = Vec::new();
        for w in [1, 2, 4] {
            let opts = NagaoOptions { workers: Some(w), ..Default::default() };
            seen.push(nagao_sum_for(&params(41, 71), 3000, &opts).unwrap().sum.to_bits());
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn parametric_scan_counts() {
        let g = Generator::Parametric { i: 1, t_min: 2, t_max: 20 };
        let r = scan_family(&g, 200, None, &NagaoOptions::default()).unwrap();
        assert_eq!(r.ranked.len() + r.failures.len(), 19);
        let empty = Generator::Explicit { curves: vec![] };
        assert!(scan_family(&empty, 200, None, &NagaoOptions::default()).unwrap().ranked.is_empty());
    }

    #[test]
    fn csv_has_header() {
        let r = nagao_sum_for(&params(3, 5), 100, &NagaoOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("curve_id,a,b,m,n,prime_bound,sum\n"));
        assert!(s.contains("\"E(1,2,3)\",1,2,3,5,100,") || s.contains("E(1,2,3),1,2,3,5,100,"));
    }
}
