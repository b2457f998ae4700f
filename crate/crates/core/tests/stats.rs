use popout_core::stats::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn spearman_examples() {
    let r = spearman(&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.0, 3.0, 2.0, 5.0, 4.0]).unwrap();
    assert_eq!(r.rho, 0.8);
    assert_eq!(r.n, 5);
    assert!((0.0..=1.0).contains(&r.p));
    assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap().rho, -1.0);
    let x = [0.3, 1.7, -2.0, 8.0];
    assert_eq!(spearman(&x, &x).unwrap().rho, 1.0);
}

#[test]
fn spearman_errors() {
    assert!(spearman(&[1.0, 2.0], &[2.0, 1.0]).is_err());
    assert!(spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    assert!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    assert!(spearman(&[1.0, f64::NAN, 3.0], &[1.0, 2.0, 3.0]).is_err());
}

#[test]
fn spearman_monotone_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let x: Vec<f64> = (0..12).map(|_| rng.random_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..12).map(|_| rng.random_range(0.1..5.0)).collect();
        let base = spearman(&x, &y).unwrap();
        let tx: Vec<f64> = x.iter().map(|v| v.exp() * 3.0 + 1.0).collect();
        let ty: Vec<f64> = y.iter().map(|v| -v.ln()).collect();
        let t = spearman(&tx, &ty).unwrap();
        assert!((t.rho + base.rho).abs() < 1e-12);
        assert!((t.p - base.p).abs() < 1e-12);
        assert!(base.rho.abs() <= 1.0);
    }
}

#[test]
fn spearman_ties_use_average_ranks() {
    // Pearson on average ranks, computed by hand: ranks x = [1.5, 1.5, 3, 4].
    let r = spearman(&[1.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
    let rx = [1.5, 1.5, 3.0, 4.0];
    let ry = [1.0, 2.0, 3.0, 4.0];
    let m = 2.5;
    let sxy: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - m) * (b - m)).sum();
    let sxx: f64 = rx.iter().map(|a| (a - m) * (a - m)).sum();
    let syy: f64 = ry.iter().map(|b| (b - m) * (b - m)).sum();
    assert!((r.rho - sxy / (sxx * syy).sqrt()).abs() < 1e-12);
}

#[test]
fn kruskal_wallis_examples() {
    let r = kruskal_wallis(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    assert!((r.statistic - 2.4).abs() < 1e-12);
    assert_eq!(r.medians, vec![1.5, 3.5]);
    assert!((r.p - statrs::function::erf::erfc(1.2f64.sqrt())).abs() < 1e-10);
    let same = kruskal_wallis(&[vec![1.0, 5.0, 9.0], vec![1.0, 5.0, 9.0]]).unwrap();
    assert!(same.statistic.abs() < 1e-12);
    let flat = kruskal_wallis(&[vec![2.0, 2.0], vec![2.0]]).unwrap();
    assert_eq!((flat.statistic, flat.p), (0.0, 1.0));
    assert!(kruskal_wallis(&[vec![1.0]]).is_err());
    assert!(kruskal_wallis(&[vec![1.0], vec![]]).is_err());
}

#[test]
fn kruskal_wallis_symmetry_and_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let groups: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..rng.random_range(2..8)).map(|_| (rng.random_range(0..10) as f64) * 0.5).collect())
            .collect();
        let base = kruskal_wallis(&groups).unwrap();
        let mut rev = groups.clone();
        rev.reverse();
        let r = kruskal_wallis(&rev).unwrap();
        assert!((r.statistic - base.statistic).abs() < 1e-12);
        let t: Vec<Vec<f64>> = groups.iter().map(|g| g.iter().map(|v| (v * 2.0).exp()).collect()).collect();
        let r = kruskal_wallis(&t).unwrap();
        assert!((r.statistic - base.statistic).abs() < 1e-9);
        assert!(base.statistic >= 0.0 && (0.0..=1.0).contains(&base.p));
    }
}

/// Moments of the signed-rank sum over every sign pattern of the given ranks.
fn enumerate_signed_rank(ranks: &[f64]) -> (f64, f64) {
    let n = ranks.len();
    let total = 1usize << n;
    let sums: Vec<f64> = (0..total)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum())
        .collect();
    let mean = sums.iter().sum::<f64>() / total as f64;
    let var = sums.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / total as f64;
    (mean, var)
}

fn hand_ranks(abs: &[f64]) -> Vec<f64> {
    abs.iter()
        .map(|v| {
            let below = abs.iter().filter(|w| *w < v).count() as f64;
            let equal = abs.iter().filter(|w| *w == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

#[test]
fn wilcoxon_matches_sign_pattern_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=8 {
        for _ in 0..10 {
            // Coarse values so ties and zero differences both occur.
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64).collect();
            let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).filter(|v| *v != 0.0).collect();
            let res = wilcoxon_signed_rank(&a, &b);
            if d.is_empty() {
                assert!(res.is_err());
                continue;
            }
            let r = res.unwrap();
            let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
            let ranks = hand_ranks(&abs);
            let w: f64 = ranks.iter().zip(&d).filter(|(_, v)| **v > 0.0).map(|(r, _)| r).sum();
            assert_eq!(r.w_plus, w);
            assert_eq!(r.n, d.len());
            let (mean, var) = enumerate_signed_rank(&ranks);
            let z = if var > 0.0 { (w - mean) / var.sqrt() } else { 0.0 };
            assert!((r.z - z).abs() < 1e-12, "n={n} z={} oracle={z}", r.z);
            assert!((0.0..=1.0).contains(&r.p));
        }
    }
}

#[test]
fn wilcoxon_examples() {
    let a = [1.0, 2.0, 3.0];
    assert!(wilcoxon_signed_rank(&a, &a).is_err());
    assert!(wilcoxon_signed_rank(&a, &[1.0]).is_err());
    let b: Vec<f64> = [0.3, 1.2, 4.0, 2.2, 9.0, 5.5].to_vec();
    let shifted: Vec<f64> = b.iter().map(|v| v + 1.0).collect();
    let r = wilcoxon_signed_rank(&shifted, &b).unwrap();
    assert_eq!(r.w_plus, 21.0);
    let back = wilcoxon_signed_rank(&b, &shifted).unwrap();
    assert_eq!(back.w_plus, 0.0);
    assert!((r.z + back.z).abs() < 1e-12);
    let g: GroupTestResult = r.into();
    assert!(g.statistic > 0.0);
}

#[test]
fn medians() {
    assert_eq!(median(&[]), None);
    assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
    assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
}
