//! Brute-force transcriptions of the validity index definitions, sharing no
//! code with the crate.

use rand::Rng;
use spss_core::rng::stream;
use spss_core::Dataset;

pub struct Instance {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub truth: Vec<usize>,
    pub k: usize,
    pub classes: usize,
}

/// m ≤ 30 points in 1..=4 dimensions; every cluster and class is nonempty.
pub fn instance(seed: u64) -> Instance {
    let mut rng = stream(seed);
    let k = rng.random_range(2..=5);
    let classes = rng.random_range(2..=5);
    let m = rng.random_range(k.max(classes)..=30);
    let n = rng.random_range(1..=4);
    let spread = |rng: &mut _, groups: usize| -> Vec<usize> {
        let mut v: Vec<usize> = (0..m)
            .map(|i| {
                if i < groups {
                    i
                } else {
                    Rng::random_range(rng, 0..groups)
                }
            })
            .collect();
        for i in (1..m).rev() {
            let j = Rng::random_range(rng, 0..=i);
            v.swap(i, j);
        }
        v
    };
    let labels = spread(&mut rng, k);
    let truth = spread(&mut rng, classes);
    let points = (0..m)
        .map(|i| {
            (0..n)
                .map(|_| rng.random_range(-10.0..10.0) + 4.0 * labels[i] as f64)
                .collect()
        })
        .collect();
    Instance {
        points,
        labels,
        truth,
        k,
        classes,
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn dataset(inst: &Instance) -> Dataset {
    let m = inst.points.len();
    let n = inst.points[0].len();
    let flat: Vec<f64> = inst.points.concat();
    Dataset::new(
        "oracle",
        ndarray::Array2::from_shape_vec((m, n), flat).unwrap(),
        None,
    )
    .unwrap()
}

pub fn means(inst: &Instance) -> Vec<Vec<f64>> {
    let n = inst.points[0].len();
    (0..inst.k)
        .map(|c| {
            let members: Vec<&Vec<f64>> = inst
                .points
                .iter()
                .zip(&inst.labels)
                .filter(|(_, &l)| l == c)
                .map(|(p, _)| p)
                .collect();
            (0..n)
                .map(|d| members.iter().map(|p| p[d]).sum::<f64>() / members.len() as f64)
                .collect()
        })
        .collect()
}

pub fn centroid_array(c: &[Vec<f64>]) -> ndarray::Array2<f64> {
    ndarray::Array2::from_shape_vec((c.len(), c[0].len()), c.concat()).unwrap()
}

pub fn oracle_pairs(labels: &[usize], truth: &[usize]) -> (f64, f64, f64, f64) {
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            match (labels[i] == labels[j], truth[i] == truth[j]) {
                (true, true) => a += 1.0,
                (true, false) => b += 1.0,
                (false, true) => c += 1.0,
                (false, false) => d += 1.0,
            }
        }
    }
    (a, b, c, d)
}

pub fn oracle_ari(labels: &[usize], truth: &[usize], k: usize, classes: usize) -> f64 {
    let c2 = |x: f64| x * (x - 1.0) / 2.0;
    let mut table = vec![vec![0.0; classes]; k];
    for (&l, &t) in labels.iter().zip(truth) {
        table[l][t] += 1.0;
    }
    let index: f64 = table.iter().flatten().map(|&x| c2(x)).sum();
    let rows: f64 = table.iter().map(|r| c2(r.iter().sum())).sum();
    let cols: f64 = (0..classes)
        .map(|t| c2(table.iter().map(|r| r[t]).sum()))
        .sum();
    let expected = rows * cols / c2(labels.len() as f64);
    (index - expected) / (0.5 * (rows + cols) - expected)
}

pub fn permutations(items: Vec<usize>) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.clone();
        let head = rest.remove(i);
        for mut p in permutations(rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Best one-to-one mapping by trying every assignment of padded labels.
pub fn oracle_err(labels: &[usize], truth: &[usize], k: usize, classes: usize) -> f64 {
    let size = k.max(classes);
    let best = permutations((0..size).collect())
        .into_iter()
        .map(|p| {
            labels
                .iter()
                .zip(truth)
                .filter(|(&l, &t)| p[l] == t)
                .count()
        })
        .max()
        .unwrap();
    100.0 * (labels.len() - best) as f64 / labels.len() as f64
}

pub fn oracle_silhouette(inst: &Instance) -> f64 {
    let m = inst.points.len();
    let mut total = 0.0;
    for i in 0..m {
        let own = inst.labels[i];
        let size = inst.labels.iter().filter(|&&l| l == own).count();
        if size == 1 {
            continue;
        }
        let mean_to = |c: usize| {
            let ds: Vec<f64> = (0..m)
                .filter(|&j| j != i && inst.labels[j] == c)
                .map(|j| dist(&inst.points[i], &inst.points[j]))
                .collect();
            ds.iter().sum::<f64>() / ds.len() as f64
        };
        let a = mean_to(own);
        let b = (0..inst.k)
            .filter(|&c| c != own)
            .map(mean_to)
            .fold(f64::INFINITY, f64::min);
        if a.max(b) > 0.0 {
            total += (b - a) / a.max(b);
        }
    }
    total / m as f64
}

pub fn oracle_db(inst: &Instance, c: &[Vec<f64>]) -> f64 {
    let s: Vec<f64> = (0..inst.k)
        .map(|j| {
            let d: Vec<f64> = inst
                .points
                .iter()
                .zip(&inst.labels)
                .filter(|(_, &l)| l == j)
                .map(|(p, _)| dist(p, &c[j]))
                .collect();
            d.iter().sum::<f64>() / d.len() as f64
        })
        .collect();
    (0..inst.k)
        .map(|i| {
            (0..inst.k)
                .filter(|&j| j != i)
                .map(|j| (s[i] + s[j]) / dist(&c[i], &c[j]))
                .fold(0.0, f64::max)
        })
        .sum::<f64>()
        / inst.k as f64
}

pub fn oracle_cs(inst: &Instance, c: &[Vec<f64>]) -> f64 {
    let mut num = 0.0;
    for j in 0..inst.k {
        let members: Vec<&Vec<f64>> = inst
            .points
            .iter()
            .zip(&inst.labels)
            .filter(|(_, &l)| l == j)
            .map(|(p, _)| p)
            .collect();
        let mut acc = 0.0;
        for x in &members {
            acc += members.iter().map(|y| dist(x, y)).fold(0.0, f64::max);
        }
        num += acc / members.len() as f64;
    }
    let den: f64 = (0..inst.k)
        .map(|i| {
            (0..inst.k)
                .filter(|&j| j != i)
                .map(|j| dist(&c[i], &c[j]))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    num / den
}

/// Upper-tail P-value by exact enumeration with big rationals.
pub fn exact_pvalue(n: u64, k: u64, g: u64, f: u64) -> f64 {
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    let choose = |n: u64, r: u64| -> BigUint {
        if r > n {
            return BigUint::zero();
        }
        (0..r).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
    };
    let mut lower = BigUint::zero();
    for i in 0..=k {
        if n - i <= g - f {
            lower += choose(f, i) * choose(g - f, n - i);
        }
    }
    (BigRational::one() - BigRational::new(lower.into(), choose(g, n).into()))
        .to_f64()
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::ToPrimitive;
    use spss_core::validity::{
        adjusted_rand, cs_measure, davies_bouldin, error_rate, hubert_index, pair_counts,
        rand_index, silhouette,
    };

    #[test]
    fn fifty_random_instances_agree_with_brute_force() {
        for seed in 0..50 {
            let inst = instance(seed);
            let ds = dataset(&inst);
            let c = means(&inst);
            let ca = centroid_array(&c);
            let pc = pair_counts(&inst.labels, &inst.truth).unwrap();
            let (a, b, cc, d) = oracle_pairs(&inst.labels, &inst.truth);
            let total = a + b + cc + d;
            let close = |x: f64, y: f64, what: &str| {
                assert!((x - y).abs() <= 1e-9, "seed {seed} {what}: {x} vs {y}")
            };

            close(rand_index(&pc), (a + d) / total, "RI");
            close(hubert_index(&pc), (a + d - b - cc) / total, "HI");
            close(
                adjusted_rand(&pc),
                oracle_ari(&inst.labels, &inst.truth, inst.k, inst.classes),
                "ARI",
            );
            close(
                error_rate(&inst.labels, &inst.truth).unwrap(),
                oracle_err(&inst.labels, &inst.truth, inst.k, inst.classes),
                "err",
            );
            close(
                silhouette(&ds, &inst.labels).unwrap(),
                oracle_silhouette(&inst),
                "SIL",
            );
            close(
                davies_bouldin(&ds, &inst.labels, &ca).unwrap(),
                oracle_db(&inst, &c),
                "DB",
            );
            close(
                cs_measure(&ds, &inst.labels, &ca).unwrap(),
                oracle_cs(&inst, &c),
                "CS",
            );
        }
    }

    #[test]
    fn identical_partitions_score_perfectly() {
        for seed in 0..50 {
            let inst = instance(seed);
            let pc = pair_counts(&inst.truth, &inst.truth).unwrap();
            assert_eq!(
                (rand_index(&pc), adjusted_rand(&pc), hubert_index(&pc)),
                (1.0, 1.0, 1.0)
            );
            assert_eq!(error_rate(&inst.truth, &inst.truth).unwrap(), 0.0);
        }
    }

    /// HI and RI are checked as exact rationals built from the pair counts, and
    /// each reported float must be the correctly rounded value of its rational.
    #[test]
    fn hubert_is_twice_rand_minus_one() {
        let mut rng = stream(77);
        for _ in 0..1000 {
            let m = rng.random_range(2..=60);
            let k = rng.random_range(1..=6);
            let c = rng.random_range(1..=6);
            let labels: Vec<usize> = (0..m).map(|_| rng.random_range(0..k)).collect();
            let truth: Vec<usize> = (0..m).map(|_| rng.random_range(0..c)).collect();
            let pc = pair_counts(&labels, &truth).unwrap();
            let n = pc.total() as i64;
            let ri = BigRational::new(((pc.a + pc.d) as i64).into(), n.into());
            let hi = BigRational::new(
                ((pc.a + pc.d) as i64 - (pc.b + pc.c) as i64).into(),
                n.into(),
            );
            let two = BigRational::from_integer(2.into());
            let one = BigRational::from_integer(1.into());
            assert_eq!(hi, two * &ri - one);
            assert_eq!(rand_index(&pc), ri.to_f64().unwrap());
            assert_eq!(hubert_index(&pc), hi.to_f64().unwrap());
        }
    }

    #[test]
    fn random_labelings_have_ari_near_zero() {
        let mut rng = stream(5);
        let m = 600;
        let mut sum = 0.0;
        let trials = 200;
        for _ in 0..trials {
            let labels: Vec<usize> = (0..m).map(|_| rng.random_range(0..4)).collect();
            let truth: Vec<usize> = (0..m).map(|_| rng.random_range(0..3)).collect();
            sum += adjusted_rand(&pair_counts(&labels, &truth).unwrap());
        }
        // independent labelings have expected ARI exactly 0
        assert!((sum / trials as f64).abs() < 0.01);
    }
}
