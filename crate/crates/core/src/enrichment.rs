//! Hypergeometric enrichment P-value for a gene cluster.
//!
//! For a cluster of `n` genes, `k` of which carry a term that annotates `f`
//! of the `g` genes in the genome,
//!
//! ```text
//! P = 1 − Σ_{i=0}^{k} C(f,i)·C(g−f,n−i) / C(g,n)
//! ```
//!
//! i.e. the probability of drawing strictly more than `k` annotated genes.
//!
//! Terms are generated by the ratio
//! `h(i+1)/h(i) = (f−i)(n−i) / ((i+1)(g−f−n+i+1))` walking outward from the
//! mode, so every factor is a ratio of small integers and no binomial
//! coefficient is ever formed. The upper tail is summed directly, which keeps
//! full relative precision even when `P` is far below machine epsilon.
//!
//! When `C(g, n)` is below 2^53 the tail is instead counted exactly in
//! integers, so the single final division makes `P` correctly rounded.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoQuery {
    /// Genes in the cluster.
    pub n: u64,
    /// Cluster genes annotated with the term.
    pub k: u64,
    /// Genes in the genome.
    pub g: u64,
    /// Genome genes annotated with the term.
    pub f: u64,
}

impl GoQuery {
    pub fn new(n: u64, k: u64, g: u64, f: u64) -> Result<Self> {
        let q = GoQuery { n, k, g, f };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let GoQuery { n, k, g, f } = *self;
        let fail = |why: &str| {
            Err(Error::InvalidQuery(format!(
                "{why} (n={n}, k={k}, g={g}, f={f})"
            )))
        };
        if k > n {
            return fail("k > n");
        }
        if n > g {
            return fail("n > g");
        }
        if f > g {
            return fail("f > g");
        }
        if k > f {
            return fail("k > f");
        }
        if n - k > g - f {
            return fail("n - k > g - f");
        }
        Ok(())
    }

    /// Feasible range of the annotated count, inclusive.
    pub fn support(&self) -> (u64, u64) {
        (self.n.saturating_sub(self.g - self.f), self.n.min(self.f))
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Unnormalized terms scaled so the mode term is 1, over the part of the
/// support where they do not underflow. Returns `(start, terms)` where
/// `terms[j]` belongs to `i = start + j`; every other `i` has probability
/// below ~1e-308 relative to the mode.
fn scaled_terms(q: &GoQuery) -> (u64, Vec<f64>) {
    let (lo, hi) = q.support();
    let (n, g, f) = (q.n as f64, q.g as f64, q.f as f64);
    // standard hypergeometric mode, clamped into the support
    let mode =
        (((q.n + 1) as f64 * (q.f + 1) as f64 / (q.g + 2) as f64).floor() as u64).clamp(lo, hi);
    let ratio = |i: u64| {
        let i = i as f64;
        (f - i) * (n - i) / ((i + 1.0) * (g - f - n + i + 1.0))
    };
    let mut below = Vec::new();
    let mut t = 1.0;
    for i in (lo..mode).rev() {
        t /= ratio(i);
        if t == 0.0 {
            break;
        }
        below.push(t);
    }
    let start = mode - below.len() as u64;
    below.reverse();
    let mut terms = below;
    terms.push(1.0);
    t = 1.0;
    for i in mode..hi {
        t *= ratio(i);
        if t == 0.0 {
            break;
        }
        terms.push(t);
    }
    (start, terms)
}

/// Hypergeometric probabilities `h(i)` as `(i, h(i))` pairs, covering the
/// feasible support except for terms that underflow. They sum to 1 up to
/// rounding.
pub fn hypergeometric_pmf(q: &GoQuery) -> Result<Vec<(u64, f64)>> {
    q.validate()?;
    let (start, terms) = scaled_terms(q);
    let mut total = Compensated::default();
    terms.iter().for_each(|&t| total.add(t));
    let total = total.value();
    Ok(terms
        .iter()
        .enumerate()
        .map(|(j, &t)| (start + j as u64, t / total))
        .collect())
}

fn binomial(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut c: u128 = 1;
    for i in 0..r {
        // c·(n − i) is divisible by i + 1 at every step
        c = c.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(c)
}

/// Exact counting, if every count is an exactly representable f64.
fn exact_tail(q: &GoQuery) -> Option<f64> {
    const LIMIT: u128 = 1 << 53;
    let total = binomial(q.g, q.n).filter(|&t| t < LIMIT)?;
    let (_, hi) = q.support();
    let mut upper: u128 = 0;
    for i in q.k + 1..=hi {
        upper += binomial(q.f, i)? * binomial(q.g - q.f, q.n - i)?;
    }
    Some(upper as f64 / total as f64)
}

/// Probability of strictly more than `k` annotated genes in the cluster.
pub fn go_pvalue(q: &GoQuery) -> Result<f64> {
    q.validate()?;
    if let Some(p) = exact_tail(q) {
        return Ok(p);
    }
    let (start, terms) = scaled_terms(q);
    let mut total = Compensated::default();
    let mut upper = Compensated::default();
    for (j, &t) in terms.iter().enumerate() {
        total.add(t);
        if start + j as u64 > q.k {
            upper.add(t);
        }
    }
    Ok((upper.value() / total.value()).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    fn choose(n: u64, r: u64) -> BigUint {
        if r > n {
            return BigUint::zero();
        }
        (0..r).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
    }

    fn exact(q: &GoQuery) -> f64 {
        let denom = choose(q.g, q.n);
        let mut lower = BigUint::zero();
        for i in 0..=q.k {
            if q.n - i <= q.g - q.f {
                lower += choose(q.f, i) * choose(q.g - q.f, q.n - i);
            }
        }
        let p = BigRational::one() - BigRational::new(lower.into(), denom.into());
        p.to_f64().unwrap()
    }

    fn all_queries(max_g: u64) -> impl Iterator<Item = GoQuery> {
        (0..=max_g).flat_map(move |g| {
            (0..=g).flat_map(move |f| {
                (0..=g)
                    .flat_map(move |n| (0..=n).filter_map(move |k| GoQuery::new(n, k, g, f).ok()))
            })
        })
    }

    #[test]
    fn worked_example() {
        let p = go_pvalue(&GoQuery::new(3, 1, 10, 4).unwrap()).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn no_annotated_genes() {
        assert_eq!(go_pvalue(&GoQuery::new(5, 0, 20, 0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn whole_genome_annotated() {
        assert_eq!(
            go_pvalue(&GoQuery::new(7, 7, 30, 30).unwrap()).unwrap(),
            0.0
        );
    }

    #[test]
    fn rejects_violations() {
        for (n, k, g, f) in [
            (3, 4, 10, 5),
            (11, 1, 10, 4),
            (3, 1, 10, 11),
            (3, 2, 10, 1),
            (5, 0, 10, 8),
        ] {
            assert!(
                matches!(GoQuery::new(n, k, g, f), Err(Error::InvalidQuery(_))),
                "{n} {k} {g} {f}"
            );
        }
    }

    #[test]
    fn matches_rational_oracle() {
        let mut count = 0;
        for q in all_queries(12) {
            assert_eq!(go_pvalue(&q).unwrap(), exact(&q), "{q:?}");
            count += 1;
        }
        assert!(count > 1000);
    }

    #[test]
    fn recurrence_agrees_with_counting() {
        for q in all_queries(14).filter(|q| q.g >= 10) {
            let (start, terms) = scaled_terms(&q);
            let total: f64 = terms.iter().sum();
            let upper: f64 = terms
                .iter()
                .enumerate()
                .filter(|(j, _)| start + *j as u64 > q.k)
                .map(|(_, t)| t)
                .sum();
            assert!(
                (upper / total - exact_tail(&q).unwrap()).abs() < 1e-14,
                "{q:?}"
            );
        }
    }

    #[test]
    fn exact_path_hands_over_at_large_genomes() {
        assert!(exact_tail(&GoQuery::new(20, 3, 60, 10).unwrap()).is_some());
        assert!(exact_tail(&GoQuery::new(200, 3, 20_000, 1_500).unwrap()).is_none());
    }

    #[test]
    fn pmf_is_normalized() {
        for (n, k, g, f) in [
            (50, 3, 1000, 120),
            (4000, 10, 100_000, 900),
            (60_000, 0, 100_000, 30_000),
        ] {
            let pmf = hypergeometric_pmf(&GoQuery::new(n, k, g, f).unwrap()).unwrap();
            let s: f64 = pmf.iter().map(|p| p.1).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_in_k() {
        let (n, g, f) = (200, 20_000, 1_500);
        let mut prev = 1.0;
        for k in 0..=n {
            let p = go_pvalue(&GoQuery::new(n, k, g, f).unwrap()).unwrap();
            assert!(p <= prev && (0.0..=1.0).contains(&p));
            prev = p;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn tiny_tail_keeps_relative_precision() {
        // P(X > 9) with n = f = 10 is the single term h(10) = 1/C(g,10);
        // g = 1000 is past the exact-counting range
        let q = GoQuery::new(10, 9, 1000, 10).unwrap();
        assert!(exact_tail(&q).is_none());
        let p = go_pvalue(&q).unwrap();
        let want = BigRational::new(BigUint::one().into(), choose(1000, 10).into())
            .to_f64()
            .unwrap();
        assert!(((p - want) / want).abs() < 1e-13, "{p} vs {want}");
    }
}
