use rand::seq::SliceRandom;
use rand::Rng;

/// Draws `tor_siz` indices uniformly with replacement and returns the one with the
/// lowest fitness. Ties keep the earliest draw.
pub fn tournament_select<R: Rng + ?Sized>(fitness: &[f64], tor_siz: usize, rng: &mut R) -> usize {
    assert!(!fitness.is_empty() && tor_siz >= 1);
    let mut best = rng.random_range(0..fitness.len());
    for _ in 1..tor_siz {
        let i = rng.random_range(0..fitness.len());
        if fitness[i] < fitness[best] {
            best = i;
        }
    }
    best
}

/// Splits `0..pop_siz` into `pop_siz / pop_sub` random disjoint groups of `pop_sub`.
pub fn partition_subpopulations<R: Rng + ?Sized>(pop_siz: usize, pop_sub: usize, rng: &mut R) -> Vec<Vec<usize>> {
    assert!(
        pop_sub >= 1 && pop_siz.is_multiple_of(pop_sub),
        "pop_siz must be a multiple of pop_sub"
    );
    let mut order: Vec<usize> = (0..pop_siz).collect();
    order.shuffle(rng);
    order.chunks(pop_sub).map(<[usize]>::to_vec).collect()
}

/// Indices sorted by fitness, then by index.
pub(crate) fn rank(indices: &mut [usize], fitness: &[f64]) {
    indices.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(a.cmp(&b)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binary_tournament_probability() {
        // P(pick J=1) = 1 - P(both draws hit J=2) = 3/4.
        let oracle = {
            let mut hits = 0;
            for a in 0..2 {
                for b in 0..2 {
                    hits += usize::from(a == 0 || b == 0);
                }
            }
            hits as f64 / 4.0
        };
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 100_000;
        let wins = (0..n)
            .filter(|_| tournament_select(&[1.0, 2.0], 2, &mut rng) == 0)
            .count();
        let freq = wins as f64 / n as f64;
        assert!((freq - oracle).abs() < 0.01, "{freq}");
    }

    #[test]
    fn size_one_tournament_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut counts = [0usize; 4];
        for _ in 0..40_000 {
            counts[tournament_select(&[4.0, 1.0, 3.0, 2.0], 1, &mut rng)] += 1;
        }
        assert!(
            counts.iter().all(|&c| (c as f64 - 10_000.0).abs() < 400.0),
            "{counts:?}"
        );
    }

    #[test]
    fn full_tournament_ties_keep_first_draw() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = [false; 3];
        for _ in 0..1000 {
            seen[tournament_select(&[1.0, 1.0, 1.0], 3, &mut rng)] = true;
        }
        assert_eq!(seen, [true; 3]);
    }

    #[test]
    fn partition_cardinality() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let groups = partition_subpopulations(200, 10, &mut rng);
        assert_eq!(groups.len(), 20);
        assert!(groups.iter().all(|g| g.len() == 10));
        let mut all: Vec<usize> = groups.concat();
        all.sort_unstable();
        assert_eq!(all, (0..200).collect::<Vec<_>>());
        assert_eq!(partition_subpopulations(10, 10, &mut rng).len(), 1);
    }

    #[test]
    fn pair_comembership_frequency() {
        let (pop, sub) = (20, 5);
        let p = (sub - 1) as f64 / (pop - 1) as f64;
        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let together = (0..n)
            .filter(|_| {
                partition_subpopulations(pop, sub, &mut rng)
                    .iter()
                    .any(|g| g.contains(&3) && g.contains(&11))
            })
            .count();
        let sd = (p * (1.0 - p) / n as f64).sqrt();
        let freq = together as f64 / n as f64;
        assert!((freq - p).abs() < 3.0 * sd, "{freq} vs {p}");
    }

    #[test]
    fn rank_breaks_ties_by_index() {
        let mut idx = vec![3, 0, 2, 1];
        rank(&mut idx, &[2.0, 1.0, 2.0, 1.0]);
        assert_eq!(idx, vec![1, 3, 0, 2]);
    }
}
