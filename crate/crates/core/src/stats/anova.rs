use serde::Serialize;

use super::special::f_survival;
use crate::error::{Error, Result};

/// Significance level used for the verdict.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnovaResult {
    pub f: f64,
    pub p: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub groups: usize,
    pub observations: usize,
    pub significant: bool,
    /// Zero within-group variance with differing group means: F is infinite.
    pub degenerate: bool,
}

/// Plain one-way ANOVA (no Welch correction).
pub fn one_way_anova<G: AsRef<[f64]>>(groups: &[G]) -> Result<AnovaResult> {
    if groups.len() < 2 {
        return Err(Error::Stats(format!(
            "ANOVA needs at least 2 groups, got {}",
            groups.len()
        )));
    }
    let mut n_total = 0usize;
    let mut scale = 0.0f64;
    for (i, g) in groups.iter().enumerate() {
        let g = g.as_ref();
        if g.len() < 2 {
            return Err(Error::Stats(format!(
                "group {} has {} observations; at least 2 are required",
                i + 1,
                g.len()
            )));
        }
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::Stats(format!("group {} contains a non-finite value", i + 1)));
        }
        n_total += g.len();
        scale = g.iter().fold(scale, |m, x| m.max(x.abs()));
    }

    let grand = groups.iter().flat_map(|g| g.as_ref()).sum::<f64>() / n_total as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for g in groups {
        let g = g.as_ref();
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        ssw += g.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
        ssb += g.len() as f64 * (mean - grand).powi(2);
    }
    // Sums of squares below this level are rounding noise of the means.
    let noise = (4.0 * f64::EPSILON * scale).powi(2) * n_total as f64;
    let k = groups.len();
    let (df_b, df_w) = (k - 1, n_total - k);
    let (f, p, degenerate) = if ssw <= noise {
        if ssb <= noise {
            (0.0, 1.0, false)
        } else {
            (f64::INFINITY, 0.0, true)
        }
    } else {
        let f = (ssb / df_b as f64) / (ssw / df_w as f64);
        (f, f_survival(f, df_b as f64, df_w as f64), false)
    };
    Ok(AnovaResult {
        f,
        p,
        df_between: df_b,
        df_within: df_w,
        groups: k,
        observations: n_total,
        significant: p < ALPHA,
        degenerate,
    })
}
