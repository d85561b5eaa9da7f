use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{irreducible_shift, shift_value};
use crate::error::Result;
use crate::IntPoly;

/// Candidates classified per parallel batch while drawing.
const BATCH: usize = 64;

/// A uniformly random permutation of `0..len`, produced one element at a
/// time by a Fisher-Yates shuffle that stores only the displaced slots.
#[derive(Debug, Clone)]
pub struct LazyPermutation {
    len: u64,
    next: u64,
    moved: HashMap<u64, u64>,
    rng: ChaCha8Rng,
}

impl LazyPermutation {
    pub fn new(len: u64, seed: u64) -> Self {
        LazyPermutation { len, next: 0, moved: HashMap::new(), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn slot(&self, i: u64) -> u64 {
        self.moved.get(&i).copied().unwrap_or(i)
    }
}

impl Iterator for LazyPermutation {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.next == self.len {
            return None;
        }
        let i = self.next;
        let j = self.rng.gen_range(i..self.len);
        let (vi, vj) = (self.slot(i), self.slot(j));
        self.moved.insert(j, vi);
        self.moved.remove(&i);
        self.next += 1;
        Some(vj)
    }
}

/// Draw distinct shifts uniformly from `[−T, T]` in seeded order, rejecting
/// reducible ones, until `n_samples` are accepted or the range is used up.
/// Returns the accepted shifts and the number of draws examined.
pub(super) fn draw_irreducible(
    f0: &IntPoly,
    t: u64,
    n_samples: u64,
    seed: u64,
) -> Result<(Vec<i64>, u64)> {
    let mut perm = LazyPermutation::new(2 * t + 1, seed);
    let mut accepted = Vec::new();
    let mut examined = 0u64;
    while (accepted.len() as u64) < n_samples {
        let batch: Vec<i64> = perm.by_ref().take(BATCH).map(|pos| shift_value(t, pos)).collect();
        if batch.is_empty() {
            break;
        }
        let verdicts = batch
            .par_iter()
            .map(|&a| irreducible_shift(f0, a))
            .collect::<Result<Vec<bool>>>()?;
        // accept in draw order so the result is independent of batching
        for (a, irr) in batch.into_iter().zip(verdicts) {
            examined += 1;
            if irr {
                accepted.push(a);
                if accepted.len() as u64 == n_samples {
                    break;
                }
            }
        }
    }
    Ok((accepted, examined))
}
