//! Task-based genotype: a permutation of tasks plus a gene-apportion that cuts it
//! into one segment per robot.

mod apportion;
mod mutation;

pub use apportion::ApportionSampler;
pub use mutation::{
    displace_at, insert_at, invert_at, mutate_displacement, mutate_insertion, mutate_inversion, mutate_swap,
    random_segment, MutationOp, OperatorSet,
};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Chromosome and gene-apportion of one individual.
///
/// `chromosome` holds 0-based task indices. `apportion` holds `n_robots - 1`
/// non-decreasing cut positions in `1..=n_tasks`: robot `k` receives chromosome
/// positions `apportion[k-1]..apportion[k]` (with implicit `0` and `n_tasks`
/// bounds). Equal neighbouring cuts leave a robot without initial tasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Genotype {
    pub chromosome: Vec<usize>,
    pub apportion: Vec<usize>,
}

impl Genotype {
    pub fn new(chromosome: Vec<usize>, apportion: Vec<usize>) -> Self {
        Genotype { chromosome, apportion }
    }

    pub fn n_tasks(&self) -> usize {
        self.chromosome.len()
    }

    pub fn n_robots(&self) -> usize {
        self.apportion.len() + 1
    }

    /// Per-robot slices of the chromosome.
    pub fn segments(&self) -> impl Iterator<Item = &[usize]> + '_ {
        let n = self.chromosome.len();
        let bounds = std::iter::once(0)
            .chain(self.apportion.iter().copied())
            .chain(std::iter::once(n));
        bounds
            .clone()
            .zip(bounds.skip(1))
            .map(move |(a, b)| &self.chromosome[a..b])
    }

    /// Checks that the genotype fits an instance with the given dimensions.
    pub fn validate(&self, n_tasks: usize, n_robots: usize) -> Result<()> {
        if self.chromosome.len() != n_tasks {
            return Err(Error::Invariant(format!(
                "chromosome has {} genes, instance has {n_tasks} tasks",
                self.chromosome.len()
            )));
        }
        let mut seen = vec![false; n_tasks];
        for &g in &self.chromosome {
            if g >= n_tasks || std::mem::replace(&mut seen[g], true) {
                return Err(Error::Invariant("chromosome is not a permutation".into()));
            }
        }
        if self.apportion.len() + 1 != n_robots {
            return Err(Error::Invariant(format!(
                "gene-apportion has {} cuts, {n_robots} robots need {}",
                self.apportion.len(),
                n_robots.saturating_sub(1)
            )));
        }
        if self.apportion.iter().any(|&a| a < 1 || a > n_tasks) || self.apportion.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invariant(
                "gene-apportion must be sorted within 1..=n_tasks".into(),
            ));
        }
        Ok(())
    }
}

/// Uniform random permutation with `n_robots - 1` uniform cuts in `1..=n_tasks`.
pub fn random_genotype<R: Rng + ?Sized>(n_tasks: usize, n_robots: usize, rng: &mut R) -> Genotype {
    assert!(n_tasks >= 1 && n_robots >= 1, "need at least one task and one robot");
    let mut chromosome: Vec<usize> = (0..n_tasks).collect();
    chromosome.shuffle(rng);
    let mut apportion: Vec<usize> = (1..n_robots).map(|_| rng.random_range(1..=n_tasks)).collect();
    apportion.sort_unstable();
    Genotype { chromosome, apportion }
}
