//! Fixtures shared by the benchmarks: generated instances at the sizes used in
//! the experiments, plus seeded genotype batches.

use mrta_core::scenario::GeneratorParams;
use mrta_core::{
    build_travel_matrix, generate_scenario, random_genotype, Genotype, Layout, Scenario, TravelTimeMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A scenario together with its travel-time matrix.
pub struct Fixture {
    pub name: &'static str,
    pub scenario: Scenario,
    pub matrix: TravelTimeMatrix,
}

impl Fixture {
    pub fn new(name: &'static str, layout: Layout, n_single: usize, n_coop: usize, n_robots: usize) -> Self {
        let scenario = generate_scenario(&GeneratorParams::new(layout, n_single, n_coop, n_robots, 1))
            .expect("fixture generation failed");
        let matrix = build_travel_matrix(&scenario).expect("fixture is infeasible");
        Fixture { name, scenario, matrix }
    }

    /// `count` random genotypes, the same for every call with the same seed.
    pub fn genotypes(&self, count: usize, seed: u64) -> Vec<Genotype> {
        let mut rng = rng(seed);
        (0..count)
            .map(|_| random_genotype(self.scenario.n_tasks(), self.scenario.n_robots(), &mut rng))
            .collect()
    }
}

/// The four experiment instances: rows and islands, with and without cooperative tasks.
pub fn experiment_fixtures() -> Vec<Fixture> {
    vec![
        Fixture::new("rows_90_0", Layout::Rows, 90, 0, 3),
        Fixture::new("islands_90_0", Layout::Islands, 90, 0, 3),
        Fixture::new("rows_80_5", Layout::Rows, 80, 5, 3),
        Fixture::new("islands_80_5", Layout::Islands, 80, 5, 3),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
