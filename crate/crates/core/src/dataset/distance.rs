use ndarray::{Array2, ArrayView1};

use super::Dataset;
use crate::par;

/// Symmetric m×m matrix of pairwise Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    d: Array2<f64>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.d.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.d.nrows() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[[i, j]]
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.d.row(i)
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.d
    }
}

#[inline]
pub fn squared_euclidean(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let t = x - y;
            t * t
        })
        .sum()
}

#[inline]
pub fn euclidean(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// Pairwise Euclidean distances between all points of `ds`.
///
/// Only the upper triangle is computed; the lower triangle is mirrored so the
/// result is exactly symmetric.
pub fn distance_matrix(ds: &Dataset) -> DistanceMatrix {
    let m = ds.len();
    let x = ds.points();
    let upper: Vec<Vec<f64>> = par::map_range(m, |i| {
        ((i + 1)..m)
            .map(|j| euclidean(x.row(i), x.row(j)))
            .collect()
    });
    let mut d = Array2::<f64>::zeros((m, m));
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            d[[i, j]] = v;
            d[[j, i]] = v;
        }
    }
    DistanceMatrix { d }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    fn ds(points: Array2<f64>) -> Dataset {
        Dataset::new("t", points, None).unwrap()
    }

    #[test]
    fn three_four_five() {
        let d = distance_matrix(&ds(array![[0.0, 0.0], [3.0, 4.0]]));
        assert_eq!(d.get(0, 1), 5.0);
        assert_eq!(d.get(1, 0), 5.0);
    }

    #[test]
    fn single_point() {
        let d = distance_matrix(&ds(array![[1.5, -2.0]]));
        assert_eq!(d.as_array(), &array![[0.0]]);
    }

    #[test]
    fn points_on_a_line() {
        let d = distance_matrix(&ds(array![[0.0], [1.0], [2.0]]));
        assert_eq!(
            d.as_array(),
            &array![[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]
        );
    }

    proptest! {
        #[test]
        fn metric_invariants(
            m in 1usize..12,
            n in 1usize..4,
            seed in proptest::collection::vec(-50.0f64..50.0, 48),
        ) {
            let pts = Array2::from_shape_fn((m, n), |(i, j)| seed[(i * n + j) % seed.len()] + i as f64 * 0.37);
            let d = distance_matrix(&ds(pts));
            for i in 0..m {
                prop_assert_eq!(d.get(i, i), 0.0);
                for j in 0..m {
                    prop_assert!(d.get(i, j).is_finite() && d.get(i, j) >= 0.0);
                    prop_assert_eq!(d.get(i, j), d.get(j, i));
                    for k in 0..m {
                        prop_assert!(d.get(i, k) <= d.get(i, j) + d.get(j, k) + 1e-9);
                    }
                }
            }
        }
    }
}
