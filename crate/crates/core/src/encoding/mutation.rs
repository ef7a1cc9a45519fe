use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// The four permutation mutation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MutationOp {
    Swap,
    Insertion,
    Inversion,
    Displacement,
}

impl MutationOp {
    pub fn apply<T, R: Rng + ?Sized>(self, genes: &mut [T], rng: &mut R) {
        match self {
            MutationOp::Swap => mutate_swap(genes, rng),
            MutationOp::Insertion => mutate_insertion(genes, rng),
            MutationOp::Inversion => mutate_inversion(genes, rng),
            MutationOp::Displacement => mutate_displacement(genes, rng),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MutationOp::Swap => "swap",
            MutationOp::Insertion => "insertion",
            MutationOp::Inversion => "inversion",
            MutationOp::Displacement => "displacement",
        }
    }
}

/// Draws a segment `[a, b]`, uniform over all ordered pairs `a <= b < n`.
pub fn random_segment<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    debug_assert!(n > 0);
    // Segments ending at b: b + 1 of them. Walk the triangular index.
    let mut k = rng.random_range(0..n * (n + 1) / 2);
    let mut b = 0;
    while k > b {
        k -= b + 1;
        b += 1;
    }
    (k, b)
}

/// Exchanges two uniformly drawn positions; the draws may coincide.
pub fn mutate_swap<T, R: Rng + ?Sized>(genes: &mut [T], rng: &mut R) {
    let n = genes.len();
    if n < 2 {
        return;
    }
    let i = rng.random_range(0..n);
    let j = rng.random_range(0..n);
    genes.swap(i, j);
}

/// Moves the gene at `from` so that it ends up at index `to`.
pub fn insert_at<T>(genes: &mut [T], from: usize, to: usize) {
    if from < to {
        genes[from..=to].rotate_left(1);
    } else if to < from {
        genes[to..=from].rotate_right(1);
    }
}

pub fn mutate_insertion<T, R: Rng + ?Sized>(genes: &mut [T], rng: &mut R) {
    let n = genes.len();
    if n < 2 {
        return;
    }
    let from = rng.random_range(0..n);
    let to = rng.random_range(0..n);
    insert_at(genes, from, to);
}

/// Reverses positions `a..=b`.
pub fn invert_at<T>(genes: &mut [T], a: usize, b: usize) {
    genes[a..=b].reverse();
}

pub fn mutate_inversion<T, R: Rng + ?Sized>(genes: &mut [T], rng: &mut R) {
    let n = genes.len();
    if n < 2 {
        return;
    }
    let (a, b) = random_segment(n, rng);
    invert_at(genes, a, b);
}

/// Cuts out `a..=b` and reinserts it so that it starts at index `gap` of the result.
///
/// `gap` ranges over `0..=n - (b - a + 1)`, i.e. the gaps of the remaining genes;
/// `gap == a` leaves the chromosome unchanged. A one-gene segment is exactly
/// [`insert_at`].
pub fn displace_at<T>(genes: &mut [T], a: usize, b: usize, gap: usize) {
    let len = b - a + 1;
    debug_assert!(gap + len <= genes.len());
    if gap < a {
        genes[gap..=b].rotate_right(len);
    } else if gap > a {
        genes[a..gap + len].rotate_left(len);
    }
}

pub fn mutate_displacement<T, R: Rng + ?Sized>(genes: &mut [T], rng: &mut R) {
    let n = genes.len();
    if n < 2 {
        return;
    }
    let (a, b) = random_segment(n, rng);
    let gap = rng.random_range(0..=n - (b - a + 1));
    displace_at(genes, a, b, gap);
}

/// Mutation operator configurations compared in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OperatorSet {
    Swap,
    Insertion,
    #[default]
    Inversion,
    Displacement,
    SwapInversion,
    InsertionInversion,
    DisplacementInversion,
    All,
}

impl OperatorSet {
    pub const ALL_SETS: [OperatorSet; 8] = [
        OperatorSet::Swap,
        OperatorSet::Insertion,
        OperatorSet::Inversion,
        OperatorSet::Displacement,
        OperatorSet::SwapInversion,
        OperatorSet::InsertionInversion,
        OperatorSet::DisplacementInversion,
        OperatorSet::All,
    ];

    pub fn ops(self) -> &'static [MutationOp] {
        use MutationOp::*;
        match self {
            OperatorSet::Swap => &[Swap],
            OperatorSet::Insertion => &[Insertion],
            OperatorSet::Inversion => &[Inversion],
            OperatorSet::Displacement => &[Displacement],
            OperatorSet::SwapInversion => &[Swap, Inversion],
            OperatorSet::InsertionInversion => &[Insertion, Inversion],
            OperatorSet::DisplacementInversion => &[Displacement, Inversion],
            OperatorSet::All => &[Swap, Insertion, Inversion, Displacement],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorSet::Swap => "swap",
            OperatorSet::Insertion => "insertion",
            OperatorSet::Inversion => "inversion",
            OperatorSet::Displacement => "displacement",
            OperatorSet::SwapInversion => "swap+inversion",
            OperatorSet::InsertionInversion => "insertion+inversion",
            OperatorSet::DisplacementInversion => "displacement+inversion",
            OperatorSet::All => "all",
        }
    }

    /// Experiment label GA1..GA8.
    pub fn label(self) -> &'static str {
        match self {
            OperatorSet::Swap => "GA1",
            OperatorSet::Insertion => "GA2",
            OperatorSet::Inversion => "GA3",
            OperatorSet::Displacement => "GA4",
            OperatorSet::SwapInversion => "GA5",
            OperatorSet::InsertionInversion => "GA6",
            OperatorSet::DisplacementInversion => "GA7",
            OperatorSet::All => "GA8",
        }
    }
}

impl fmt::Display for OperatorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        let found = OperatorSet::ALL_SETS
            .into_iter()
            .find(|set| key == set.name() || key == set.label().to_ascii_lowercase());
        match (found, key.as_str()) {
            (Some(set), _) => Ok(set),
            (None, "all-four" | "swap+insertion+inversion+displacement") => Ok(OperatorSet::All),
            _ => {
                let valid: Vec<&str> = OperatorSet::ALL_SETS.iter().map(|s| s.name()).collect();
                Err(format!(
                    "unknown mutation operator set `{s}`; valid sets: {} (or GA1..GA8)",
                    valid.join(", ")
                ))
            }
        }
    }
}

impl Serialize for OperatorSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for OperatorSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
