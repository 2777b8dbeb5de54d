//! Small numerical and statistical helpers shared by the estimators and the
//! experiment harness.

/// Pairwise (cascade) summation with a tree shape fixed by index.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / (xs.len() as f64 - 1.0)
}

/// Median; the average of the two central order statistics for even length.
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty(), "median of empty slice");
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// One-sided exact sign test of `H1: P(a > b) > 1/2` on paired samples.
/// Ties are dropped. Returns the p-value `P(Bin(m, 1/2) ≥ wins)`.
pub fn sign_test_greater(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (mut wins, mut m) = (0u64, 0u64);
    for (x, y) in a.iter().zip(b) {
        if x > y {
            wins += 1;
            m += 1;
        } else if x < y {
            m += 1;
        }
    }
    binomial_upper_tail_half(m, wins)
}

/// `P(Bin(m, 1/2) ≥ k)`, summed in log space.
pub fn binomial_upper_tail_half(m: u64, k: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > m {
        return 0.0;
    }
    let ln_half_m = -(m as f64) * std::f64::consts::LN_2;
    let mut ln_c = ln_choose(m, k);
    let mut total = 0.0;
    for j in k..=m {
        total += (ln_c + ln_half_m).exp();
        // C(m, j+1) = C(m, j) (m − j) / (j + 1)
        if j < m {
            ln_c += ((m - j) as f64).ln() - ((j + 1) as f64).ln();
        }
    }
    total.min(1.0)
}

fn ln_choose(m: u64, k: u64) -> f64 {
    let k = k.min(m - k);
    (0..k)
        .map(|j| ((m - j) as f64).ln() - ((j + 1) as f64).ln())
        .sum()
}

/// Two-sided Kolmogorov–Smirnov statistic of a sample against a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
