//! Sample means with standard errors, per-sample or from batch means.

/// Mean and standard error of the mean of i.i.d. samples.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Size-weighted mean of per-batch means and its batch-means standard error.
///
/// NaN standard error with fewer than two batches.
pub fn batch_mean_stderr(batch_means: &[f64], sizes: &[usize]) -> (f64, f64) {
    debug_assert_eq!(batch_means.len(), sizes.len());
    let total: usize = sizes.iter().sum();
    let mean = batch_means.iter().zip(sizes).map(|(m, &n)| m * n as f64).sum::<f64>() / total as f64;
    let b = batch_means.len();
    if b < 2 {
        return (mean, f64::NAN);
    }
    let nbar = total as f64 / b as f64;
    // weighted deviations, so unequal batch sizes are accounted for
    let var = batch_means
        .iter()
        .zip(sizes)
        .map(|(m, &n)| ((m - mean) * n as f64 / nbar).powi(2))
        .sum::<f64>()
        / (b as f64 - 1.0);
    (mean, (var / b as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_batches_match_plain_formula() {
        let m = [1.0, 2.0, 3.0, 4.0];
        let (a, se) = batch_mean_stderr(&m, &[5, 5, 5, 5]);
        let (b, se2) = mean_stderr(&m);
        assert_eq!(a, b);
        assert!((se - se2).abs() < 1e-15);
    }

    #[test]
    fn singletons() {
        assert!(mean_stderr(&[3.0]).1.is_nan());
        let (m, se) = batch_mean_stderr(&[2.0], &[10]);
        assert_eq!(m, 2.0);
        assert!(se.is_nan());
    }
}
