//! Seeded generators for covers used by tests and experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cover::{Biclique, CoverSpec, VertexId};

/// `m` independent bicliques on `[1, n]`: each vertex lands on the left, the
/// right, or neither with equal probability, redrawn until both sides are
/// nonempty. Overlapping edges are expected. Requires `n >= 2`.
pub fn random_cover<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> CoverSpec {
    assert!(n >= 2);
    let bicliques = (0..m).map(|_| random_biclique(n, rng)).collect();
    CoverSpec { n, bicliques }
}

fn random_biclique<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Biclique {
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for v in 1..=n {
            match rng.gen_range(0..3) {
                0 => left.push(v),
                1 => right.push(v),
                _ => {}
            }
        }
        if !left.is_empty() && !right.is_empty() {
            return Biclique::new(left, right);
        }
    }
}

/// A uniformly shuffled exact cover with `n - 1` bicliques, built by splitting
/// vertex blocks at random points and recursing into both parts.
pub fn random_partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CoverSpec {
    assert!(n >= 2);
    let mut vertices: Vec<VertexId> = (1..=n).collect();
    vertices.shuffle(rng);
    let mut bicliques = Vec::with_capacity(n - 1);
    let mut stack = vec![vertices];
    while let Some(block) = stack.pop() {
        if block.len() < 2 {
            continue;
        }
        let cut = rng.gen_range(1..block.len());
        let (a, b) = block.split_at(cut);
        bicliques.push(Biclique::new(a.iter().copied(), b.iter().copied()));
        stack.push(a.to_vec());
        stack.push(b.to_vec());
    }
    bicliques.shuffle(rng);
    CoverSpec { n, bicliques }
}

/// An exact partition with one biclique removed: `n - 2` edge-disjoint
/// bicliques that leave some edges uncovered.
pub fn random_partial_partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CoverSpec {
    let mut cover = random_partition(n, rng);
    let drop = rng.gen_range(0..cover.bicliques.len());
    cover.bicliques.remove(drop);
    cover
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cover;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn partitions_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=20 {
            let c = random_partition(n, &mut rng);
            assert_eq!(c.len(), n - 1);
            assert!(verify_cover(&c).unwrap().is_exact_cover);
        }
    }

    #[test]
    fn partial_partitions_are_disjoint_but_incomplete() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 2..=12 {
            let c = random_partial_partition(n, &mut rng);
            assert_eq!(c.len(), n - 2);
            let report = verify_cover(&c).unwrap();
            assert!(report.overcovered.is_empty());
            assert!(!report.uncovered.is_empty());
        }
    }

    #[test]
    fn random_covers_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=9 {
            let c = random_cover(n, n, &mut rng);
            assert_eq!(c.len(), n);
            c.validate().unwrap();
        }
    }
}
