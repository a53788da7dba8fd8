//! Log-space arithmetic, weighted statistics and small test statistics
//! shared across the crate.

/// log(exp(a) + exp(b)) without overflow.
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// log(sum(exp(vals))) with a max shift.
pub fn logsumexp(vals: &[f64]) -> f64 {
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = vals.iter().map(|v| (v - hi).exp()).sum();
    hi + sum.ln()
}

/// log(mean(exp(vals))).
pub fn logmeanexp(vals: &[f64]) -> f64 {
    logsumexp(vals) - (vals.len() as f64).ln()
}

/// log(1 - exp(x)) for x < 0, stable near both ends.
pub fn log1mexp(x: f64) -> f64 {
    debug_assert!(x <= 0.0);
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance with the n-1 denominator.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

pub fn sample_std(xs: &[f64]) -> f64 {
    sample_variance(xs).sqrt()
}

/// Standard error of a sample standard deviation (normal approximation).
pub fn std_of_std(std: f64, n: usize) -> f64 {
    std / (2.0 * (n as f64 - 1.0)).sqrt()
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-task seed derived by hashing (base, stream, index).
/// `stream` separates independent uses of the same base seed, `index` the
/// task within a stream.
pub fn mix_seed(base: u64, stream: u64, index: u64) -> u64 {
    let a = splitmix64(base);
    let b = splitmix64(a ^ stream.wrapping_mul(GOLDEN));
    splitmix64(b ^ index.wrapping_mul(GOLDEN))
}

/// Weighted quantile with the midpoint convention: values sorted ascending,
/// cumulative weights c_k, value interpolated linearly at c_k - p_k/2.
/// Exact for symmetric pairs; clamps outside the midpoint range.
pub fn weighted_quantile(values: &[f64], weights: &[f64], q: f64) -> f64 {
    assert_eq!(values.len(), weights.len());
    assert!(!values.is_empty());
    assert!(q > 0.0 && q < 1.0);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let total: f64 = weights.iter().sum();
    let mut cum = 0.0;
    let mut prev_mid = f64::NAN;
    let mut prev_val = f64::NAN;
    for (rank, &i) in order.iter().enumerate() {
        let p = weights[i] / total;
        cum += p;
        let mid = cum - 0.5 * p;
        if q <= mid {
            if rank == 0 || prev_mid == mid {
                return values[i];
            }
            let frac = (q - prev_mid) / (mid - prev_mid);
            return prev_val + frac * (values[i] - prev_val);
        }
        prev_mid = mid;
        prev_val = values[i];
    }
    prev_val
}

/// Silverman's rule bandwidth for a weighted sample, using the effective
/// sample size 1/sum(p^2).
pub fn silverman_bandwidth(values: &[f64], weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    let wmean: f64 = values
        .iter()
        .zip(weights)
        .map(|(v, w)| v * w)
        .sum::<f64>()
        / total;
    let wvar: f64 = values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - wmean) * (v - wmean))
        .sum::<f64>()
        / total;
    let n_eff = total * total / weights.iter().map(|w| w * w).sum::<f64>();
    let q1 = weighted_quantile(values, weights, 0.25);
    let q3 = weighted_quantile(values, weights, 0.75);
    let iqr = q3 - q1;
    let mut a = wvar.sqrt();
    if iqr > 0.0 {
        a = a.min(iqr / 1.34);
    }
    0.9 * a * n_eff.powf(-0.2)
}

/// Gaussian-kernel weighted KDE evaluated on `grid`.
pub fn weighted_kde(values: &[f64], weights: &[f64], grid: &[f64], bandwidth: f64) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    let norm = 1.0 / (bandwidth * (2.0 * std::f64::consts::PI).sqrt() * total);
    grid.iter()
        .map(|&x| {
            let mut sum = 0.0;
            for (v, w) in values.iter().zip(weights) {
                let u = (x - v) / bandwidth;
                sum += w * (-0.5 * u * u).exp();
            }
            sum * norm
        })
        .collect()
}

/// Two-sided Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Asymptotic p-value of the two-sided KS statistic `d` at sample size `n`.
pub fn ks_pvalue(n: usize, d: f64) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let t = (-2.0 * (j as f64) * (j as f64) * lambda * lambda).exp();
        sum += sign * t;
        sign = -sign;
        if t < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Wilson score interval for a binomial proportion at normal quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Adaptive Simpson quadrature of `f` over [a, b].
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}
