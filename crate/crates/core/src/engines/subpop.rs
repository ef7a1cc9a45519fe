use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::selection::{partition_subpopulations, rank};
use super::{run_loop, GaConfig, Population, RunResult};
use crate::encoding::{ApportionSampler, Genotype};
use crate::error::Result;
use crate::scenario::{Scenario, TravelTimeMatrix};

/// Subpopulation-based GA with elitism and mutation only.
///
/// Every generation the population is split at random into groups of `pop_sub`.
/// Each group passes its `eli_cnt` best on unchanged, and each of its `best_num`
/// best spawns `(pop_sub - eli_cnt) / best_num` offspring, shared evenly among
/// the operators of the configured set.
pub fn run_subpop_ga(config: &GaConfig, scenario: &Scenario, matrix: &TravelTimeMatrix) -> Result<RunResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    run_loop(config, scenario, matrix, &mut rng, |pop, sampler, rng| {
        breed(config, pop, sampler, rng)
    })
}

fn breed<R: Rng>(
    config: &GaConfig,
    pop: &Population,
    sampler: &ApportionSampler,
    rng: &mut R,
) -> Vec<(Genotype, Option<f64>)> {
    let ops = config.operator_set.ops();
    let per_op = config.offspring_per_parent() / ops.len();
    let mut next = Vec::with_capacity(config.pop_siz);
    for mut group in partition_subpopulations(config.pop_siz, config.pop_sub, rng) {
        rank(&mut group, &pop.fitness);
        for &e in &group[..config.eli_cnt] {
            next.push((pop.genotypes[e].clone(), Some(pop.fitness[e])));
        }
        for &p in &group[..config.best_num] {
            let parent = &pop.genotypes[p];
            for &op in ops {
                for _ in 0..per_op {
                    let mut chromosome = parent.chromosome.clone();
                    if rng.random_bool(config.p_m) {
                        op.apply(&mut chromosome, rng);
                    }
                    let apportion = if rng.random_bool(config.p_a) {
                        sampler.sample(rng)
                    } else {
                        parent.apportion.clone()
                    };
                    next.push((Genotype::new(chromosome, apportion), None));
                }
            }
        }
    }
    next
}
