use rand::Rng;

/// Partially mapped crossover with two distinct uniform cut points.
pub fn pmx_crossover<R: Rng + ?Sized>(parent_a: &[usize], parent_b: &[usize], rng: &mut R) -> (Vec<usize>, Vec<usize>) {
    let n = parent_a.len();
    if n < 2 {
        return (parent_a.to_vec(), parent_b.to_vec());
    }
    let c1 = rng.random_range(0..=n);
    let mut c2 = rng.random_range(0..n);
    if c2 >= c1 {
        c2 += 1;
    }
    let (lo, hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
    pmx_with_cuts(parent_a, parent_b, lo, hi)
}

/// PMX exchanging positions `lo..hi`. Each child keeps its own parent's genes
/// outside the segment, repaired through the segment mapping.
pub fn pmx_with_cuts(parent_a: &[usize], parent_b: &[usize], lo: usize, hi: usize) -> (Vec<usize>, Vec<usize>) {
    assert_eq!(parent_a.len(), parent_b.len());
    assert!(lo <= hi && hi <= parent_a.len());
    (
        pmx_child(parent_a, parent_b, lo, hi),
        pmx_child(parent_b, parent_a, lo, hi),
    )
}

fn pmx_child(base: &[usize], donor: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    let n = base.len();
    // Position of each gene inside the donor segment, if any.
    let mut in_segment = vec![usize::MAX; n];
    for i in lo..hi {
        in_segment[donor[i]] = i;
    }
    let mut child = base.to_vec();
    child[lo..hi].copy_from_slice(&donor[lo..hi]);
    for i in (0..lo).chain(hi..n) {
        let mut g = base[i];
        while in_segment[g] != usize::MAX {
            g = base[in_segment[g]];
        }
        child[i] = g;
    }
    child
}
