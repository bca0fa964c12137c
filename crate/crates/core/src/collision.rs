//! Pigeonhole collision search over vectors in `[1, k]^len`.
//!
//! Both search modes key a hash table on the full image value, so a reported
//! collision always has exactly equal images; `HashMap` compares keys by
//! equality after a hash match.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::hash::Hash;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::WitnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStrategy {
    /// Lexicographic sweep of `[1, k]^len`; returns the first vector whose
    /// image was already seen, paired with the earliest vector of that image.
    Exhaustive,
    /// Uniform sampling from a seeded generator; returns the first repeat of
    /// an image by a distinct vector.
    Birthday,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub strategy: SearchStrategy,
    pub seed: u64,
    /// Maximum number of vectors examined, summed over workers.
    pub budget: u64,
    /// Birthday shards; worker `w` samples with seed `seed + w`. Ignored by
    /// exhaustive search.
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            strategy: SearchStrategy::Birthday,
            seed: 0,
            budget: 100_000,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub collision: Option<(T, T)>,
    pub examined: u64,
}

impl<T> SearchOutcome<T> {
    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> SearchOutcome<U> {
        SearchOutcome {
            collision: self.collision.map(|(a, b)| (f(a), f(b))),
            examined: self.examined,
        }
    }
}

/// Searches `[1, k]^len` for two distinct vectors with equal `image`.
pub fn search<K, F>(
    len: usize,
    k: u64,
    config: &SearchConfig,
    image: F,
) -> Result<SearchOutcome<Vec<u64>>, WitnessError>
where
    K: Hash + Eq,
    F: Fn(&[u64]) -> Result<K, WitnessError> + Sync,
{
    if k < 1 {
        return Err(WitnessError::LabelRange { k, min: 1 });
    }
    if config.budget == 0 {
        return Err(WitnessError::ZeroBudget);
    }
    match config.strategy {
        SearchStrategy::Exhaustive => exhaustive(len, k, config.budget, &image),
        SearchStrategy::Birthday => {
            let workers = config.workers.max(1) as u64;
            if workers == 1 {
                return birthday(len, k, config.seed, config.budget, &image);
            }
            let shards: Vec<_> = (0..workers)
                .map(|w| {
                    let share = config.budget / workers + u64::from(w < config.budget % workers);
                    (config.seed.wrapping_add(w), share)
                })
                .collect();
            let results: Vec<_> = thread::scope(|scope| {
                let handles: Vec<_> = shards
                    .iter()
                    .map(|&(seed, share)| {
                        let image = &image;
                        scope.spawn(move || {
                            if share == 0 {
                                Ok(SearchOutcome { collision: None, examined: 0 })
                            } else {
                                birthday(len, k, seed, share, image)
                            }
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("search worker panicked"))
                    .collect()
            });
            // Lowest worker index wins, independent of finishing order.
            let mut merged = SearchOutcome { collision: None, examined: 0 };
            for result in results {
                let outcome = result?;
                merged.examined += outcome.examined;
                if merged.collision.is_none() {
                    merged.collision = outcome.collision;
                }
            }
            Ok(merged)
        }
    }
}

fn exhaustive<K, F>(
    len: usize,
    k: u64,
    budget: u64,
    image: &F,
) -> Result<SearchOutcome<Vec<u64>>, WitnessError>
where
    K: Hash + Eq,
    F: Fn(&[u64]) -> Result<K, WitnessError>,
{
    let mut seen: HashMap<K, Vec<u64>> = HashMap::new();
    let mut current = vec![1u64; len];
    let mut examined = 0;
    while examined < budget {
        examined += 1;
        match seen.entry(image(&current)?) {
            Entry::Occupied(e) => {
                return Ok(SearchOutcome {
                    collision: Some((e.get().clone(), current)),
                    examined,
                });
            }
            Entry::Vacant(e) => {
                e.insert(current.clone());
            }
        }
        if !advance(&mut current, k) {
            break;
        }
    }
    Ok(SearchOutcome { collision: None, examined })
}

/// Steps to the lexicographic successor in `[1, k]^len`; false after the last.
pub(crate) fn advance(values: &mut [u64], k: u64) -> bool {
    for slot in values.iter_mut().rev() {
        if *slot < k {
            *slot += 1;
            return true;
        }
        *slot = 1;
    }
    false
}

fn birthday<K, F>(
    len: usize,
    k: u64,
    seed: u64,
    budget: u64,
    image: &F,
) -> Result<SearchOutcome<Vec<u64>>, WitnessError>
where
    K: Hash + Eq,
    F: Fn(&[u64]) -> Result<K, WitnessError>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashMap<K, Vec<u64>> = HashMap::new();
    let mut examined = 0;
    while examined < budget {
        examined += 1;
        let sample: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=k)).collect();
        match seen.entry(image(&sample)?) {
            Entry::Occupied(e) => {
                if *e.get() != sample {
                    return Ok(SearchOutcome {
                        collision: Some((e.get().clone(), sample)),
                        examined,
                    });
                }
            }
            Entry::Vacant(e) => {
                e.insert(sample);
            }
        }
    }
    Ok(SearchOutcome { collision: None, examined })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(x: &[u64]) -> Result<u64, WitnessError> {
        Ok(x.iter().sum())
    }

    #[test]
    fn advance_walks_lexicographically() {
        let mut v = vec![1, 1];
        let mut seen = vec![v.clone()];
        while advance(&mut v, 3) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 9);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v, vec![1, 1]);
    }

    #[test]
    fn exhaustive_returns_first_collision() {
        let cfg = SearchConfig { strategy: SearchStrategy::Exhaustive, ..Default::default() };
        let out = search(2, 2, &cfg, sum).unwrap();
        assert_eq!(out.collision, Some((vec![1, 2], vec![2, 1])));
        assert_eq!(out.examined, 3);
    }

    #[test]
    fn exhaustive_respects_budget() {
        let cfg = SearchConfig {
            strategy: SearchStrategy::Exhaustive,
            budget: 2,
            ..Default::default()
        };
        let out = search(2, 2, &cfg, sum).unwrap();
        assert_eq!(out, SearchOutcome { collision: None, examined: 2 });
    }

    #[test]
    fn exhaustive_stops_when_space_is_exhausted() {
        let cfg = SearchConfig { strategy: SearchStrategy::Exhaustive, ..Default::default() };
        // Identity image never collides.
        let out = search(3, 2, &cfg, |x: &[u64]| Ok(x.to_vec())).unwrap();
        assert_eq!(out, SearchOutcome { collision: None, examined: 8 });
    }

    #[test]
    fn birthday_is_seed_deterministic() {
        let cfg = SearchConfig { seed: 11, ..Default::default() };
        let a = search(6, 5, &cfg, sum).unwrap();
        let b = search(6, 5, &cfg, sum).unwrap();
        assert_eq!(a, b);
        let (x, y) = a.collision.unwrap();
        assert_ne!(x, y);
        assert_eq!(x.iter().sum::<u64>(), y.iter().sum::<u64>());
    }

    #[test]
    fn birthday_never_pairs_a_vector_with_itself() {
        // With k = 1 every sample is identical, so no collision exists.
        let cfg = SearchConfig { budget: 50, ..Default::default() };
        let out = search(3, 1, &cfg, sum).unwrap();
        assert_eq!(out, SearchOutcome { collision: None, examined: 50 });
    }

    #[test]
    fn sharded_birthday_prefers_lowest_worker() {
        let cfg = SearchConfig { seed: 3, workers: 4, budget: 4000, ..Default::default() };
        let sharded = search(6, 5, &cfg, sum).unwrap();
        let first = search(
            6,
            5,
            &SearchConfig { seed: 3, workers: 1, budget: 1000, ..Default::default() },
            sum,
        )
        .unwrap();
        assert_eq!(sharded.collision, first.collision);
        assert_eq!(sharded, search(6, 5, &cfg, sum).unwrap());
    }

    #[test]
    fn zero_budget_is_an_error() {
        let cfg = SearchConfig { budget: 0, ..Default::default() };
        assert_eq!(search(2, 2, &cfg, sum), Err(WitnessError::ZeroBudget));
    }
}
