use crate::{Error, Result};

/// Pair agreement counts between a clustering and a reference partition.
///
/// * `a`: same cluster, same class
/// * `b`: same cluster, different class
/// * `c`: different cluster, same class
/// * `d`: different cluster, different class
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Counts over all unordered pairs via the contingency table.
pub fn pair_counts(labels: &[usize], truth: &[usize]) -> Result<PairCounts> {
    if labels.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: truth.len(),
        });
    }
    if labels.len() < 2 {
        return Err(Error::InvalidParams(
            "pair counts need at least two points".into(),
        ));
    }
    let k = labels.iter().max().map_or(0, |&x| x + 1);
    let c = truth.iter().max().map_or(0, |&x| x + 1);
    let mut table = vec![0u64; k * c];
    let mut rows = vec![0u64; k];
    let mut cols = vec![0u64; c];
    for (&l, &t) in labels.iter().zip(truth) {
        table[l * c + t] += 1;
        rows[l] += 1;
        cols[t] += 1;
    }
    let a: u64 = table.iter().map(|&n| choose2(n)).sum();
    let same_cluster: u64 = rows.iter().map(|&n| choose2(n)).sum();
    let same_class: u64 = cols.iter().map(|&n| choose2(n)).sum();
    let total = choose2(labels.len() as u64);
    let b = same_cluster - a;
    let c = same_class - a;
    Ok(PairCounts {
        a,
        b,
        c,
        d: total - a - b - c,
    })
}

/// `(a + d) / total`.
pub fn rand_index(pc: &PairCounts) -> f64 {
    (pc.a + pc.d) as f64 / pc.total() as f64
}

/// `(a + d − b − c) / total`, i.e. agreements minus disagreements.
pub fn hubert_index(pc: &PairCounts) -> f64 {
    let agree = (pc.a + pc.d) as f64;
    let disagree = (pc.b + pc.c) as f64;
    (agree - disagree) / pc.total() as f64
}

/// Adjusted Rand index under the permutation (hypergeometric) model.
///
/// When the expected and maximum index coincide (both partitions trivial)
/// the value is 1 for identical partitions and 0 otherwise.
pub fn adjusted_rand(pc: &PairCounts) -> f64 {
    let n = pc.total() as f64;
    let index = pc.a as f64;
    let rows = (pc.a + pc.b) as f64;
    let cols = (pc.a + pc.c) as f64;
    let expected = rows * cols / n;
    let max = 0.5 * (rows + cols);
    let denom = max - expected;
    if denom == 0.0 {
        return if pc.b == 0 && pc.c == 0 { 1.0 } else { 0.0 };
    }
    (index - expected) / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_partitions() {
        let pc = pair_counts(&[0, 0, 1, 2, 2], &[0, 0, 1, 2, 2]).unwrap();
        assert_eq!((pc.b, pc.c), (0, 0));
        assert_eq!(rand_index(&pc), 1.0);
        assert_eq!(adjusted_rand(&pc), 1.0);
        assert_eq!(hubert_index(&pc), 1.0);
    }

    #[test]
    fn one_cluster_vs_two_singletons() {
        let pc = pair_counts(&[0, 0], &[0, 1]).unwrap();
        assert_eq!(
            pc,
            PairCounts {
                a: 0,
                b: 1,
                c: 0,
                d: 0
            }
        );
    }

    // Enumerating the 6 pairs: (0,1) b, (0,2) c, (0,3) d, (1,2) d, (1,3) c, (2,3) b.
    #[test]
    fn crossed_halves() {
        let pc = pair_counts(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap();
        assert_eq!(
            pc,
            PairCounts {
                a: 0,
                b: 2,
                c: 2,
                d: 2
            }
        );
        assert!((rand_index(&pc) - 2.0 / 6.0).abs() < 1e-15);
        assert!((hubert_index(&pc) + 2.0 / 6.0).abs() < 1e-15);
        // index 0, expected 2·2/6, max 2  →  (0 − 2/3) / (2 − 2/3)
        assert!((adjusted_rand(&pc) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_ari() {
        let pc = pair_counts(&[0, 0, 0], &[0, 0, 0]).unwrap();
        assert_eq!(adjusted_rand(&pc), 1.0);
        let pc = pair_counts(&[0, 1, 2], &[0, 1, 2]).unwrap();
        assert_eq!(adjusted_rand(&pc), 1.0);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            pair_counts(&[0, 1], &[0]),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        ));
        assert!(pair_counts(&[0], &[0]).is_err());
    }
}
