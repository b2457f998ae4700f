//! Rank-based tests: Spearman correlation, Kruskal-Wallis and the Wilcoxon
//! signed-rank test, with large-sample p-values.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub rho: f64,
    pub p: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTestResult {
    /// `H` for Kruskal-Wallis, `Z` for Wilcoxon.
    pub statistic: f64,
    pub p: f64,
    pub medians: Vec<f64>,
}

/// Median of finite values, `None` when empty.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

/// Average ranks (1-based) and the tie-group sizes.
pub fn rank_average(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && values[idx[j]] == values[idx[i]] {
            j += 1;
        }
        let r = 0.5 * ((i + 1) + j) as f64;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

fn tie_sum(ties: &[usize]) -> f64 {
    ties.iter().map(|&t| (t * t * t - t) as f64).sum()
}

fn check_finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::arg(format!("{what} contains non-finite values")))
    }
}

/// Spearman's rho as the Pearson correlation of average ranks; two-sided p
/// from Student's t with `n - 2` degrees of freedom.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    if x.len() != y.len() {
        return Err(Error::arg("spearman inputs differ in length"));
    }
    if x.len() < 3 {
        return Err(Error::arg("spearman needs at least 3 pairs"));
    }
    check_finite(x, "x")?;
    check_finite(y, "y")?;
    let (rx, _) = rank_average(x);
    let (ry, _) = rank_average(y);
    let n = x.len();
    let m = (n + 1) as f64 / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - m) * (b - m);
        sxx += (a - m) * (a - m);
        syy += (b - m) * (b - m);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Degenerate("correlation undefined for constant input".into()));
    }
    let rho = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let p = if rho.abs() >= 1.0 {
        0.0
    } else {
        let t2 = rho * rho * df / (1.0 - rho * rho);
        beta_reg(0.5 * df, 0.5, df / (df + t2))
    };
    Ok(CorrelationResult { rho, p: p.clamp(0.0, 1.0), n })
}

/// Kruskal-Wallis H with tie correction; p from chi-square with `k - 1`
/// degrees of freedom.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<GroupTestResult> {
    if groups.len() < 2 {
        return Err(Error::arg("kruskal-wallis needs at least 2 groups"));
    }
    if groups.iter().any(Vec::is_empty) {
        return Err(Error::EmptyInput("kruskal-wallis group is empty".into()));
    }
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    check_finite(&all, "groups")?;
    let medians = groups.iter().filter_map(|g| median(g)).collect();
    let (ranks, ties) = rank_average(&all);
    let n = all.len() as f64;
    let correction = 1.0 - tie_sum(&ties) / (n * n * n - n);
    if correction <= 0.0 {
        return Ok(GroupTestResult {
            statistic: 0.0,
            p: 1.0,
            medians,
        });
    }
    let mut off = 0;
    let mut s = 0.0;
    for g in groups {
        let r: f64 = ranks[off..off + g.len()].iter().sum();
        s += r * r / g.len() as f64;
        off += g.len();
    }
    let h = ((12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0)) / correction).max(0.0);
    let df = (groups.len() - 1) as f64;
    Ok(GroupTestResult {
        statistic: h,
        p: gamma_q(0.5 * df, 0.5 * h).clamp(0.0, 1.0),
        medians,
    })
}

/// Statistics of a Wilcoxon signed-rank test on paired samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Normal-approximation `Z` (no continuity correction).
    pub z: f64,
    pub p: f64,
    /// Sum of ranks of positive differences.
    pub w_plus: f64,
    /// Pairs with nonzero difference.
    pub n: usize,
    pub medians: Vec<f64>,
}

impl From<WilcoxonResult> for GroupTestResult {
    fn from(w: WilcoxonResult) -> Self {
        GroupTestResult {
            statistic: w.z,
            p: w.p,
            medians: w.medians,
        }
    }
}

/// Wilcoxon signed-rank test of `a - b`. Zero differences are dropped and the
/// variance is corrected for tied absolute differences.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::arg("wilcoxon inputs differ in length"));
    }
    check_finite(a, "a")?;
    check_finite(b, "b")?;
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|v| *v != 0.0).collect();
    if d.is_empty() {
        return Err(Error::Degenerate("all paired differences are zero".into()));
    }
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let (ranks, ties) = rank_average(&abs);
    let w_plus: f64 = ranks.iter().zip(&d).filter(|(_, v)| **v > 0.0).map(|(r, _)| r).sum();
    let n = d.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_sum(&ties) / 48.0;
    let z = if var > 0.0 { (w_plus - mean) / var.sqrt() } else { 0.0 };
    let p = libm::erfc(z.abs() / core::f64::consts::SQRT_2).clamp(0.0, 1.0);
    Ok(WilcoxonResult {
        z,
        p,
        w_plus,
        n: d.len(),
        medians: [median(a), median(b)].into_iter().flatten().collect(),
    })
}

/// Natural log of the gamma function.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn beta_reg(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let ln_front = -x + a * x.ln() - ln_gamma(a);
    if x < a + 1.0 {
        // Series for P(a, x).
        let mut sum = 1.0 / a;
        let mut term = sum;
        let mut ap = a;
        for _ in 0..10_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        1.0 - sum * ln_front.exp()
    } else {
        // Continued fraction for Q(a, x) (modified Lentz).
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        ln_front.exp() * h
    }
}
