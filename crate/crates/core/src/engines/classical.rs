use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pmx::pmx_crossover;
use super::selection::{rank, tournament_select};
use super::{run_loop, GaConfig, Population, RunResult};
use crate::encoding::{ApportionSampler, Genotype};
use crate::error::Result;
use crate::scenario::{Scenario, TravelTimeMatrix};

/// Classical GA: global elitism, tournament selection, PMX and mutation.
///
/// The `eli_cnt` best of the whole population survive; `pop_siz - eli_cnt`
/// parents are drawn by tournament and paired in draw order. A pair is crossed
/// with probability `p_c`, otherwise copied. Each offspring is then mutated with
/// probability `p_m` (an operator picked uniformly from the set) and receives a
/// fresh gene-apportion with probability `p_a`, otherwise keeping the apportion of
/// the parent whose genes it carries outside the crossover segment.
pub fn run_classical_ga(config: &GaConfig, scenario: &Scenario, matrix: &TravelTimeMatrix) -> Result<RunResult> {
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
    let mut next = Vec::with_capacity(config.pop_siz);
    let mut order: Vec<usize> = (0..pop.genotypes.len()).collect();
    rank(&mut order, &pop.fitness);
    for &e in &order[..config.eli_cnt] {
        next.push((pop.genotypes[e].clone(), Some(pop.fitness[e])));
    }

    let parents: Vec<usize> = (config.eli_cnt..config.pop_siz)
        .map(|_| tournament_select(&pop.fitness, config.tor_siz, rng))
        .collect();
    let ops = config.operator_set.ops();
    let mut finish = |chromosome: Vec<usize>, parent: &Genotype, rng: &mut R| {
        let mut chromosome = chromosome;
        if rng.random_bool(config.p_m) {
            let op = ops[rng.random_range(0..ops.len())];
            op.apply(&mut chromosome, rng);
        }
        let apportion = if rng.random_bool(config.p_a) {
            sampler.sample(rng)
        } else {
            parent.apportion.clone()
        };
        next.push((Genotype::new(chromosome, apportion), None));
    };
    for pair in parents.chunks(2) {
        let a = &pop.genotypes[pair[0]];
        let Some(&pb) = pair.get(1) else {
            finish(a.chromosome.clone(), a, rng);
            continue;
        };
        let b = &pop.genotypes[pb];
        let (ca, cb) = if rng.random_bool(config.p_c) {
            pmx_crossover(&a.chromosome, &b.chromosome, rng)
        } else {
            (a.chromosome.clone(), b.chromosome.clone())
        };
        finish(ca, a, rng);
        finish(cb, b, rng);
    }
    next
}
