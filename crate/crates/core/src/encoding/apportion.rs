use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Redraws allowed before an out-of-range cut is clamped.
const MAX_REDRAWS: usize = 1000;

/// Draws new gene-apportions around the running mean of past best apportions.
///
/// Each cut is `round(N(mu_j, sigma^2))`, redrawn until it lies in `1..=n_tasks`,
/// with `sigma = 0.03 * n_tasks`. `mu` is the cumulative average of the best
/// individual's apportion over all generations seen so far.
#[derive(Debug, Clone, PartialEq)]
pub struct ApportionSampler {
    n_tasks: usize,
    mu: Vec<f64>,
    sigma: f64,
    generations: u64,
}

impl ApportionSampler {
    pub fn new(n_tasks: usize, n_robots: usize) -> Self {
        Self::with_sigma(n_tasks, n_robots, 0.03 * n_tasks as f64)
    }

    pub fn with_sigma(n_tasks: usize, n_robots: usize, sigma: f64) -> Self {
        assert!(n_tasks >= 1 && n_robots >= 1);
        assert!(
            sigma.is_finite() && sigma >= 0.0,
            "sigma must be finite and non-negative"
        );
        ApportionSampler {
            n_tasks,
            mu: vec![0.0; n_robots - 1],
            sigma,
            generations: 0,
        }
    }

    /// Seeds the running mean directly, as if `generations` bests averaged to `mu`.
    pub fn with_mu(mut self, mu: Vec<f64>, generations: u64) -> Self {
        assert_eq!(mu.len(), self.mu.len());
        self.mu = mu;
        self.generations = generations;
        self
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn generations(&self) -> u64 {
        self.generations
    }

    /// Folds one generation's best apportion into the running mean.
    pub fn update_mu(&mut self, best: &[usize]) {
        assert_eq!(best.len(), self.mu.len(), "apportion length mismatch");
        let g = self.generations as f64;
        for (m, &b) in self.mu.iter_mut().zip(best) {
            *m = (*m * g + b as f64) / (g + 1.0);
        }
        self.generations += 1;
    }

    /// A sorted apportion with every cut in `1..=n_tasks`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let hi = self.n_tasks as f64;
        let mut cuts: Vec<usize> = self
            .mu
            .iter()
            .map(|&m| {
                let normal = Normal::new(m, self.sigma).expect("sigma validated at construction");
                for _ in 0..MAX_REDRAWS {
                    let x = normal.sample(rng).round();
                    if (1.0..=hi).contains(&x) {
                        return x as usize;
                    }
                }
                m.round().clamp(1.0, hi) as usize
            })
            .collect();
        cuts.sort_unstable();
        cuts
    }
}
