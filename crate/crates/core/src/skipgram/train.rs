//! SGD kernel shared by the single-threaded and multi-worker trainers.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::loss::score_gradient;

/// Flat parameter storage addressed by component index.
pub(crate) trait Weights {
    fn get(&self, i: usize) -> f32;
    fn set(&mut self, i: usize, value: f32);
}

impl Weights for Vec<f32> {
    #[inline]
    fn get(&self, i: usize) -> f32 {
        self[i]
    }

    #[inline]
    fn set(&mut self, i: usize, value: f32) {
        self[i] = value;
    }
}

/// Draws word indices from the unigram distribution raised to `power`.
#[derive(Debug, Clone)]
pub(crate) struct NegativeSampler {
    cumulative: Vec<f64>,
}

impl NegativeSampler {
    pub(crate) fn new(counts: &[u64], power: f64) -> Self {
        let mut acc = 0.0;
        let cumulative = counts
            .iter()
            .map(|&c| {
                acc += libm::pow(c as f64, power);
                acc
            })
            .collect();
        Self { cumulative }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("sampler over empty vocabulary");
        let x = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= x).min(self.cumulative.len() - 1)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Schedule {
    pub lr_initial: f64,
    pub lr_floor: f64,
    pub total_steps: u64,
}

impl Schedule {
    fn rate(&self, step: u64) -> f64 {
        if self.total_steps == 0 {
            return self.lr_initial;
        }
        let progress = step as f64 / self.total_steps as f64;
        self.lr_initial - (self.lr_initial - self.lr_floor) * progress
    }
}

pub(crate) struct Trainer<'s, W> {
    pub input: W,
    pub output: W,
    dim: usize,
    negatives: u32,
    sampler: &'s NegativeSampler,
    grad: Vec<f64>,
}

impl<'s, W: Weights> Trainer<'s, W> {
    pub(crate) fn new(input: W, output: W, dim: usize, negatives: u32, sampler: &'s NegativeSampler) -> Self {
        Self { input, output, dim, negatives, sampler, grad: vec![0.0; dim] }
    }

    fn dot_rows(&self, center: usize, target: usize) -> f64 {
        let (v, u) = (center * self.dim, target * self.dim);
        (0..self.dim)
            .map(|j| f64::from(self.input.get(v + j)) * f64::from(self.output.get(u + j)))
            .sum()
    }

    fn update_output(&mut self, center: usize, target: usize, positive: bool, lr: f64) {
        let step = lr * score_gradient(self.dot_rows(center, target), positive);
        let (v, u) = (center * self.dim, target * self.dim);
        for j in 0..self.dim {
            let out = self.output.get(u + j);
            self.grad[j] += step * f64::from(out);
            let delta = step * f64::from(self.input.get(v + j));
            self.output.set(u + j, (f64::from(out) - delta) as f32);
        }
    }

    /// One SGD step on the loss of `(center, context)` plus sampled negatives.
    fn train_pair<R: Rng + ?Sized>(&mut self, center: usize, context: usize, lr: f64, rng: &mut R) {
        self.grad.iter_mut().for_each(|g| *g = 0.0);
        self.update_output(center, context, true, lr);
        for _ in 0..self.negatives {
            let negative = self.sampler.sample(rng);
            if negative == context {
                continue;
            }
            self.update_output(center, negative, false, lr);
        }
        let v = center * self.dim;
        for j in 0..self.dim {
            let x = f64::from(self.input.get(v + j)) - self.grad[j];
            self.input.set(v + j, x as f32);
        }
    }

    /// Runs `epochs` passes over `sentences`. Context windows never cross a
    /// sentence boundary; each position draws its radius from `[1, window]`.
    pub(crate) fn run<R: Rng + ?Sized>(
        &mut self,
        sentences: &[&[u32]],
        epochs: u32,
        window: u32,
        schedule: Schedule,
        rng: &mut R,
    ) {
        let mut step = 0u64;
        for _ in 0..epochs {
            for sentence in sentences {
                for (i, &center) in sentence.iter().enumerate() {
                    let lr = schedule.rate(step);
                    step += 1;
                    let radius = rng.random_range(1..=window) as usize;
                    let lo = i.saturating_sub(radius);
                    let hi = (i + radius).min(sentence.len() - 1);
                    for j in lo..=hi {
                        if j != i {
                            self.train_pair(center as usize, sentence[j] as usize, lr, rng);
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampler_follows_smoothed_unigram() {
        let sampler = NegativeSampler::new(&[16, 1, 0], 0.75);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut hits = [0usize; 3];
        for _ in 0..90_000 {
            hits[sampler.sample(&mut rng)] += 1;
        }
        // 16^0.75 = 8, so word 0 is drawn 8 times as often as word 1.
        let ratio = hits[0] as f64 / hits[1] as f64;
        assert!((ratio - 8.0).abs() < 0.5, "{ratio}");
        assert_eq!(hits[2], 0);
    }

    #[test]
    fn schedule_decays_linearly() {
        let s = Schedule { lr_initial: 0.025, lr_floor: 0.0001, total_steps: 100 };
        assert_eq!(s.rate(0), 0.025);
        assert!((s.rate(50) - 0.01255).abs() < 1e-12);
        assert!((s.rate(100) - 0.0001).abs() < 1e-12);
    }

    #[test]
    fn sgd_step_follows_analytic_gradient() {
        use super::super::loss::pair_gradient;
        const DIM: usize = 3;
        // Only word 1 can be drawn as a negative.
        let sampler = NegativeSampler::new(&[0, 1, 0], 0.75);
        let input: Vec<f32> = vec![0.3, -0.2, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let output: Vec<f32> = vec![0.0, 0.0, 0.0, 0.4, 0.1, -0.3, -0.5, 0.2, 0.6];
        let as64 = |w: &[f32], i: usize| -> Vec<f64> { w[i * DIM..(i + 1) * DIM].iter().map(|&x| f64::from(x)).collect() };
        let (v, pos, neg) = (as64(&input, 0), as64(&output, 2), as64(&output, 1));
        let g = pair_gradient(&v, &pos, &[&neg]);

        let mut t = Trainer::new(input, output, DIM, 1, &sampler);
        let lr = 0.1;
        t.train_pair(0, 2, lr, &mut ChaCha8Rng::seed_from_u64(0));
        let close = |got: Vec<f64>, before: &[f64], grad: &[f64]| {
            for j in 0..DIM {
                assert!((got[j] - (before[j] - lr * grad[j])).abs() < 1e-6, "{got:?}");
            }
        };
        close(as64(&t.input, 0), &v, &g.input);
        close(as64(&t.output, 2), &pos, &g.positive);
        close(as64(&t.output, 1), &neg, &g.negatives[0]);
    }
}
