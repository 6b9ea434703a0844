//! Hogwild-style multi-worker training.
//!
//! Workers share the parameter matrices and update them without locks, so
//! results depend on thread scheduling. Use [`super::train`] whenever
//! reproducibility matters.

use std::sync::atomic::{AtomicU32, Ordering};
use std::thread;
use std::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::train::{NegativeSampler, Schedule, Trainer, Weights};
use super::{prepare, EmbeddingModel, Prepared, TrainConfig, NEGATIVE_POWER};
use crate::error::Result;

#[derive(Clone, Copy)]
struct Shared<'a>(&'a [AtomicU32]);

impl Weights for Shared<'_> {
    #[inline]
    fn get(&self, i: usize) -> f32 {
        f32::from_bits(self.0[i].load(Ordering::Relaxed))
    }

    #[inline]
    fn set(&mut self, i: usize, value: f32) {
        self.0[i].store(value.to_bits(), Ordering::Relaxed);
    }
}

fn atomics(values: impl IntoIterator<Item = f32>) -> Vec<AtomicU32> {
    values.into_iter().map(|x| AtomicU32::new(x.to_bits())).collect()
}

/// Trains with `workers` threads; sentence `i` goes to worker `i % workers`.
/// `workers <= 1` falls back to the deterministic trainer.
pub fn train_parallel<D, S>(document: &[D], config: &TrainConfig, workers: usize) -> Result<EmbeddingModel>
where
    D: AsRef<[S]>,
    S: AsRef<str>,
{
    if workers <= 1 {
        return super::train(document, config);
    }
    let Prepared { vocabulary, sentences, input, .. } = prepare(document, config)?;
    let dim = config.dim as usize;
    let sampler = NegativeSampler::new(vocabulary.counts(), NEGATIVE_POWER);
    let input = atomics(input);
    let output = atomics(std::iter::repeat_n(0.0, input.len()));

    thread::scope(|scope| {
        for worker in 0..workers {
            let shard: Vec<&[u32]> =
                sentences.iter().skip(worker).step_by(workers).map(Vec::as_slice).collect();
            let (input, output, sampler) = (Shared(&input), Shared(&output), &sampler);
            scope.spawn(move || {
                let words: u64 = shard.iter().map(|s| s.len() as u64).sum();
                let schedule = Schedule {
                    lr_initial: config.lr_initial,
                    lr_floor: config.lr_floor,
                    total_steps: words * u64::from(config.epochs),
                };
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (worker as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let mut trainer = Trainer::new(input, output, dim, config.negatives, sampler);
                trainer.run(&shard, config.epochs, config.window, schedule, &mut rng);
            });
        }
    });

    let vectors = input.into_iter().map(|a| f32::from_bits(a.into_inner())).collect();
    EmbeddingModel::from_parts(vocabulary, vectors, *config)
}
