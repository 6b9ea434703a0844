//! Vector arithmetic over `f32` or `f64` components, accumulated in `f64`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub trait Component: Copy {
    fn to_f64(self) -> f64;
}

impl Component for f32 {
    #[inline]
    fn to_f64(self) -> f64 {
        f64::from(self)
    }
}

impl Component for f64 {
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

pub fn dot<A: Component, B: Component>(a: &[A], b: &[B]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x.to_f64() * y.to_f64()).sum()
}

pub fn norm<A: Component>(a: &[A]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Cosine similarity. Zero when either vector has zero norm.
pub fn cosine<A: Component, B: Component>(a: &[A], b: &[B]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    let denom = norm(a) * norm(b);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((dot(a, b) / denom).clamp(-1.0, 1.0))
}

/// Running componentwise mean. Rows are summed in the order they arrive.
#[derive(Debug, Clone)]
pub struct MeanAccumulator {
    sum: Vec<f64>,
    count: usize,
}

impl MeanAccumulator {
    pub fn new(dim: usize) -> Self {
        Self { sum: vec![0.0; dim], count: 0 }
    }

    pub fn push<A: Component>(&mut self, row: &[A]) {
        debug_assert_eq!(row.len(), self.sum.len());
        for (s, &x) in self.sum.iter_mut().zip(row) {
            *s += x.to_f64();
        }
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// `None` when nothing was pushed.
    pub fn finish(self) -> Option<Vec<f64>> {
        if self.count == 0 {
            return None;
        }
        let n = self.count as f64;
        Some(self.sum.into_iter().map(|s| s / n).collect())
    }
}

pub fn average<A: Component, V: AsRef<[A]>>(vectors: &[V]) -> Result<Vec<f64>> {
    let first = vectors.first().ok_or(Error::EmptyAverage)?.as_ref();
    let mut acc = MeanAccumulator::new(first.len());
    for v in vectors {
        let v = v.as_ref();
        if v.len() != first.len() {
            return Err(Error::DimensionMismatch { left: first.len(), right: v.len() });
        }
        acc.push(v);
    }
    acc.finish().ok_or(Error::EmptyAverage)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn average_of_constant_list() {
        let v = [0.25f32, -1.5, 3.0];
        assert_eq!(average(&[v, v, v]).unwrap(), vec![0.25, -1.5, 3.0]);
    }

    #[test]
    fn average_is_symmetric() {
        assert_eq!(average(&[[1.0f64, 0.0], [0.0, 1.0]]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn average_errors() {
        let empty: [[f64; 2]; 0] = [];
        assert_eq!(average(&empty), Err(Error::EmptyAverage));
        let ragged: [&[f64]; 2] = [&[1.0, 2.0], &[1.0]];
        assert_eq!(average(&ragged), Err(Error::DimensionMismatch { left: 2, right: 1 }));
    }

    #[test]
    fn average_matches_summation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rows: Vec<Vec<f64>> =
            (0..7).map(|_| (0..5).map(|_| rng.random_range(-10.0..10.0)).collect()).collect();
        let got = average(&rows).unwrap();
        for j in 0..5 {
            let mut s = 0.0;
            for r in &rows {
                s += r[j];
            }
            assert!((got[j] - s / 7.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn cosine_examples() {
        assert!((cosine(&[0.3f32, -2.0], &[0.3f32, -2.0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[1.0f64, 0.0], &[0.0f64, 1.0]).unwrap(), 0.0);
        let expected = 32.0 / (14.0f64 * 77.0).sqrt();
        let got = cosine(&[1.0f64, 2.0, 3.0], &[4.0f64, 5.0, 6.0]).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.974631846).abs() < 1e-9);
    }

    #[test]
    fn cosine_zero_norm_and_mismatch() {
        assert_eq!(cosine(&[0.0f64, 0.0], &[1.0f64, 2.0]).unwrap(), 0.0);
        assert_eq!(
            cosine(&[1.0f64], &[1.0f64, 2.0]),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        );
    }

    fn vec_strategy() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-100.0f64..100.0, 4)
    }

    proptest! {
        #[test]
        fn cosine_is_scale_invariant(a in vec_strategy(), b in vec_strategy(),
                                     alpha in 1e-3f64..1e3, beta in 1e-3f64..1e3) {
            prop_assume!(norm(&a) > 1e-6 && norm(&b) > 1e-6);
            let sa: Vec<f64> = a.iter().map(|x| x * alpha).collect();
            let sb: Vec<f64> = b.iter().map(|x| x * beta).collect();
            let diff = cosine(&sa, &sb).unwrap() - cosine(&a, &b).unwrap();
            prop_assert!(diff.abs() < 1e-9);
        }

        #[test]
        fn average_is_permutation_invariant(rows in proptest::collection::vec(vec_strategy(), 1..8),
                                            seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut shuffled = rows.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let a = average(&rows).unwrap();
            let b = average(&shuffled).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }
    }
}
