//! The subpopulation mutation-only GA and the tournament + PMX baseline.
//!
//! Both engines share the same bookkeeping. The random initial population is
//! evaluated first and is not counted against the budget; each of the `gen_num`
//! generations then produces and evaluates `pop_siz` individuals, so every run
//! reports exactly `pop_siz * gen_num` evaluations. Elites carry their fitness
//! over instead of being decoded again.
//!
//! Breeding uses one seeded stream per run and happens sequentially; only
//! decoding is spread over threads, so results never depend on scheduling.

mod classical;
mod pmx;
mod selection;
mod subpop;

pub use classical::run_classical_ga;
pub use pmx::{pmx_crossover, pmx_with_cuts};
pub use selection::{partition_subpopulations, tournament_select};
pub use subpop::run_subpop_ga;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{decode, Phenotype};
use crate::encoding::{ApportionSampler, Genotype, OperatorSet};
use crate::error::{Error, Result};
use crate::fitness::{completion_time, evaluate, FitnessValue};
use crate::scenario::{Scenario, TravelTimeMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    #[default]
    Subpop,
    Classical,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Subpop => "subpop",
            EngineKind::Classical => "classical",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "subpop" | "subpopulation" => Ok(EngineKind::Subpop),
            "classical" | "cga" => Ok(EngineKind::Classical),
            _ => Err(format!("unknown engine `{s}`; valid engines: subpop, classical")),
        }
    }
}

/// Every tunable of both engines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub engine: EngineKind,
    pub pop_siz: usize,
    pub pop_sub: usize,
    pub eli_cnt: usize,
    pub best_num: usize,
    pub tor_siz: usize,
    pub p_m: f64,
    pub p_c: f64,
    pub p_a: f64,
    pub gen_num: usize,
    pub operator_set: OperatorSet,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig::defaults_for(EngineKind::Subpop)
    }
}

impl GaConfig {
    /// Parameter defaults of each engine, with `gen_num = 2000`.
    pub fn defaults_for(engine: EngineKind) -> Self {
        let common = GaConfig {
            engine,
            pop_siz: 200,
            pop_sub: 10,
            eli_cnt: 2,
            best_num: 1,
            tor_siz: 2,
            p_m: 1.0,
            p_c: 0.9,
            p_a: 0.2,
            gen_num: 2000,
            operator_set: OperatorSet::Inversion,
            seed: 0,
        };
        match engine {
            EngineKind::Subpop => common,
            EngineKind::Classical => GaConfig { p_m: 0.01, ..common },
        }
    }

    pub fn subpopulations(&self) -> usize {
        self.pop_siz / self.pop_sub
    }

    /// Offspring each subpopulation parent produces.
    pub fn offspring_per_parent(&self) -> usize {
        (self.pop_sub - self.eli_cnt) / self.best_num
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.pop_siz == 0 {
            return bad("pop_siz must be at least 1".into());
        }
        for (name, p) in [("p_m", self.p_m), ("p_c", self.p_c), ("p_a", self.p_a)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        match self.engine {
            EngineKind::Subpop => {
                if self.pop_sub == 0 || !self.pop_siz.is_multiple_of(self.pop_sub) {
                    return bad(format!(
                        "pop_siz = {} is not a multiple of pop_sub = {}",
                        self.pop_siz, self.pop_sub
                    ));
                }
                if self.eli_cnt >= self.pop_sub {
                    return bad(format!(
                        "eli_cnt = {} leaves no offspring in subpopulations of {}",
                        self.eli_cnt, self.pop_sub
                    ));
                }
                if self.best_num == 0 || self.best_num > self.pop_sub {
                    return bad(format!("best_num = {} must lie in 1..=pop_sub", self.best_num));
                }
                let spare = self.pop_sub - self.eli_cnt;
                if !spare.is_multiple_of(self.best_num) {
                    return bad(format!(
                        "pop_sub - eli_cnt = {spare} is not divisible by best_num = {}",
                        self.best_num
                    ));
                }
                let n_ops = self.operator_set.ops().len();
                if !(spare / self.best_num).is_multiple_of(n_ops) {
                    return bad(format!(
                        "{} offspring per parent cannot be split evenly over the {n_ops} operators of `{}`",
                        spare / self.best_num,
                        self.operator_set
                    ));
                }
            }
            EngineKind::Classical => {
                if self.eli_cnt > self.pop_siz {
                    return bad(format!("eli_cnt = {} exceeds pop_siz = {}", self.eli_cnt, self.pop_siz));
                }
                if self.tor_siz == 0 {
                    return bad("tor_siz must be at least 1".into());
                }
            }
        }
        Ok(())
    }
}

/// Optional overrides of [`GaConfig`] fields, as found in config files and on the
/// command line. Unset fields fall back to the defaults of the chosen engine.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaOverrides {
    pub engine: Option<EngineKind>,
    pub pop_siz: Option<usize>,
    pub pop_sub: Option<usize>,
    pub eli_cnt: Option<usize>,
    pub best_num: Option<usize>,
    pub tor_siz: Option<usize>,
    pub p_m: Option<f64>,
    pub p_c: Option<f64>,
    pub p_a: Option<f64>,
    pub gen_num: Option<usize>,
    #[serde(alias = "mutation")]
    pub operator_set: Option<OperatorSet>,
    pub seed: Option<u64>,
}

impl GaOverrides {
    /// Fields set in `other` win.
    pub fn merge(self, other: GaOverrides) -> GaOverrides {
        GaOverrides {
            engine: other.engine.or(self.engine),
            pop_siz: other.pop_siz.or(self.pop_siz),
            pop_sub: other.pop_sub.or(self.pop_sub),
            eli_cnt: other.eli_cnt.or(self.eli_cnt),
            best_num: other.best_num.or(self.best_num),
            tor_siz: other.tor_siz.or(self.tor_siz),
            p_m: other.p_m.or(self.p_m),
            p_c: other.p_c.or(self.p_c),
            p_a: other.p_a.or(self.p_a),
            gen_num: other.gen_num.or(self.gen_num),
            operator_set: other.operator_set.or(self.operator_set),
            seed: other.seed.or(self.seed),
        }
    }

    /// Resolves against the engine defaults and validates.
    pub fn resolve(&self) -> Result<GaConfig> {
        let d = GaConfig::defaults_for(self.engine.unwrap_or_default());
        let c = GaConfig {
            engine: d.engine,
            pop_siz: self.pop_siz.unwrap_or(d.pop_siz),
            pop_sub: self.pop_sub.unwrap_or(d.pop_sub),
            eli_cnt: self.eli_cnt.unwrap_or(d.eli_cnt),
            best_num: self.best_num.unwrap_or(d.best_num),
            tor_siz: self.tor_siz.unwrap_or(d.tor_siz),
            p_m: self.p_m.unwrap_or(d.p_m),
            p_c: self.p_c.unwrap_or(d.p_c),
            p_a: self.p_a.unwrap_or(d.p_a),
            gen_num: self.gen_num.unwrap_or(d.gen_num),
            operator_set: self.operator_set.unwrap_or(d.operator_set),
            seed: self.seed.unwrap_or(d.seed),
        };
        c.validate()?;
        Ok(c)
    }
}

/// Outcome of one engine run.
#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub config: GaConfig,
    pub best: Genotype,
    pub best_j: f64,
    pub fitness: FitnessValue,
    pub phenotype: Phenotype,
    /// Best J after the initial population (index 0) and after every generation.
    pub trace: Vec<f64>,
    pub wallclock_s: f64,
    pub generations: usize,
    pub evaluations: u64,
}

/// Runs the engine named in `config`.
pub fn run(config: &GaConfig, scenario: &Scenario, matrix: &TravelTimeMatrix) -> Result<RunResult> {
    match config.engine {
        EngineKind::Subpop => run_subpop_ga(config, scenario, matrix),
        EngineKind::Classical => run_classical_ga(config, scenario, matrix),
    }
}

/// Population with cached fitness.
struct Population {
    genotypes: Vec<Genotype>,
    fitness: Vec<f64>,
}

impl Population {
    fn best(&self) -> usize {
        let mut best = 0;
        for (i, &j) in self.fitness.iter().enumerate() {
            if j < self.fitness[best] {
                best = i;
            }
        }
        best
    }
}

fn evaluate_all(genotypes: &[Genotype], scenario: &Scenario, matrix: &TravelTimeMatrix) -> Result<Vec<f64>> {
    genotypes.par_iter().map(|g| evaluate(g, scenario, matrix)).collect()
}

/// Shared run loop: `breed` turns the current population into the next one,
/// returning the new genotypes together with the fitness already known for the
/// ones carried over unchanged.
fn run_loop<R, F>(
    config: &GaConfig,
    scenario: &Scenario,
    matrix: &TravelTimeMatrix,
    rng: &mut R,
    mut breed: F,
) -> Result<RunResult>
where
    R: rand::Rng,
    F: FnMut(&Population, &ApportionSampler, &mut R) -> Vec<(Genotype, Option<f64>)>,
{
    config.validate()?;
    let (n_tasks, n_robots) = (scenario.n_tasks(), scenario.n_robots());
    if n_tasks == 0 {
        return Err(Error::Config("scenario has no tasks".into()));
    }
    let clock = Instant::now();
    let mut sampler = ApportionSampler::new(n_tasks, n_robots);

    let genotypes: Vec<Genotype> = (0..config.pop_siz)
        .map(|_| crate::encoding::random_genotype(n_tasks, n_robots, rng))
        .collect();
    let fitness = evaluate_all(&genotypes, scenario, matrix)?;
    let mut pop = Population { genotypes, fitness };
    let mut best_idx = pop.best();
    let mut best = (pop.genotypes[best_idx].clone(), pop.fitness[best_idx]);
    sampler.update_mu(&best.0.apportion);
    let mut trace = Vec::with_capacity(config.gen_num + 1);
    trace.push(best.1);
    let mut evaluations = 0u64;

    for _ in 0..config.gen_num {
        let next = breed(&pop, &sampler, rng);
        debug_assert_eq!(next.len(), config.pop_siz);
        let (genotypes, known): (Vec<Genotype>, Vec<Option<f64>>) = next.into_iter().unzip();
        let fresh: Vec<usize> = (0..genotypes.len()).filter(|&i| known[i].is_none()).collect();
        let fresh_fitness: Vec<f64> = fresh
            .par_iter()
            .map(|&i| evaluate(&genotypes[i], scenario, matrix))
            .collect::<Result<_>>()?;
        let mut fitness: Vec<f64> = known.into_iter().map(|k| k.unwrap_or(f64::NAN)).collect();
        for (&i, j) in fresh.iter().zip(fresh_fitness) {
            fitness[i] = j;
        }
        evaluations += genotypes.len() as u64;
        pop = Population { genotypes, fitness };

        best_idx = pop.best();
        sampler.update_mu(&pop.genotypes[best_idx].apportion);
        if pop.fitness[best_idx] < best.1 {
            best = (pop.genotypes[best_idx].clone(), pop.fitness[best_idx]);
        }
        trace.push(best.1);
    }
    let wallclock_s = clock.elapsed().as_secs_f64();

    let phenotype = decode(&best.0, scenario, matrix)?;
    let fitness = completion_time(&phenotype, matrix, scenario);
    Ok(RunResult {
        config: config.clone(),
        best: best.0,
        best_j: best.1,
        fitness,
        phenotype,
        trace,
        wallclock_s,
        generations: config.gen_num,
        evaluations,
    })
}
