use crate::{Error, Result};

const MAX_LABELS: usize = 64;

/// Largest number of points on which `labels` and `truth` agree under a
/// one-to-one relabelling of clusters onto classes.
///
/// Unequal label counts are padded with zero-agreement dummies.
pub fn max_agreement(labels: &[usize], truth: &[usize]) -> Result<u64> {
    if labels.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: truth.len(),
        });
    }
    let k = labels.iter().max().map_or(0, |&x| x + 1);
    let c = truth.iter().max().map_or(0, |&x| x + 1);
    let size = k.max(c);
    if size > MAX_LABELS {
        return Err(Error::TooManyLabels(size));
    }
    if size == 0 {
        return Ok(0);
    }
    let mut agree = vec![vec![0i64; size]; size];
    for (&l, &t) in labels.iter().zip(truth) {
        agree[l][t] += 1;
    }
    let cost: Vec<Vec<i64>> = agree
        .iter()
        .map(|row| row.iter().map(|&v| -v).collect())
        .collect();
    let assignment = hungarian(&cost);
    Ok(assignment
        .iter()
        .enumerate()
        .map(|(r, &col)| agree[r][col] as u64)
        .sum())
}

/// `100 · (m − max_agreement) / m`.
pub fn error_rate(labels: &[usize], truth: &[usize]) -> Result<f64> {
    let m = labels.len();
    let hit = max_agreement(labels, truth)?;
    if m == 0 {
        return Ok(0.0);
    }
    Ok(100.0 * (m as u64 - hit) as f64 / m as f64)
}

/// Minimum-cost perfect matching on a square cost matrix (shortest augmenting
/// paths with potentials). Returns the column assigned to each row.
fn hungarian(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    const INF: i64 = i64::MAX / 4;
    // 1-based arrays; column 0 is the virtual source
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if owner[j] > 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_max(labels: &[usize], truth: &[usize]) -> u64 {
        let k = labels.iter().max().map_or(0, |&x| x + 1);
        let c = truth.iter().max().map_or(0, |&x| x + 1);
        let size = k.max(c);
        let mut perm: Vec<usize> = (0..size).collect();
        let mut best = 0;
        permute(&mut perm, 0, &mut |p| {
            let hit = labels
                .iter()
                .zip(truth)
                .filter(|(&l, &t)| p[l] == t)
                .count() as u64;
            best = best.max(hit);
        });
        best
    }

    fn permute(p: &mut Vec<usize>, at: usize, f: &mut dyn FnMut(&[usize])) {
        if at == p.len() {
            f(p);
            return;
        }
        for i in at..p.len() {
            p.swap(at, i);
            permute(p, at + 1, f);
            p.swap(at, i);
        }
    }

    #[test]
    fn identical_and_permuted() {
        assert_eq!(error_rate(&[0, 1, 2, 2], &[0, 1, 2, 2]).unwrap(), 0.0);
        assert_eq!(error_rate(&[2, 0, 1, 1], &[0, 1, 2, 2]).unwrap(), 0.0);
    }

    #[test]
    fn one_of_four_wrong() {
        assert_eq!(error_rate(&[0, 1, 1, 1], &[0, 0, 1, 1]).unwrap(), 25.0);
    }

    #[test]
    fn more_clusters_than_classes() {
        // three clusters over two classes: the dummy class absorbs one cluster
        assert_eq!(max_agreement(&[0, 0, 1, 2], &[0, 0, 1, 1]).unwrap(), 3);
    }

    #[test]
    fn too_many_labels() {
        let l: Vec<usize> = (0..70).collect();
        assert!(matches!(error_rate(&l, &l), Err(Error::TooManyLabels(70))));
    }

    proptest! {
        #[test]
        fn matches_brute_force(pairs in proptest::collection::vec((0usize..5, 0usize..4), 1..40)) {
            let labels: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let truth: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            prop_assert_eq!(max_agreement(&labels, &truth).unwrap(), brute_max(&labels, &truth));
        }

        #[test]
        fn symmetric_and_permutation_invariant(
            pairs in proptest::collection::vec((0usize..4, 0usize..4), 2..40),
            shift in 1usize..4,
        ) {
            let labels: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let truth: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            let e = error_rate(&labels, &truth).unwrap();
            prop_assert_eq!(e, error_rate(&truth, &labels).unwrap());
            let relabelled: Vec<usize> = labels.iter().map(|l| (l + shift) % 4).collect();
            prop_assert_eq!(e, error_rate(&relabelled, &truth).unwrap());
            prop_assert!((0.0..=100.0).contains(&e));
        }
    }
}
