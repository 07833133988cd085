//! Closed-form bounds the experiments are checked against.

use crate::LabError;

/// Failure bound for a random linear code of rate `k/n` against a flat
/// source of entropy `m`: `2^-(n-k-m)`. Meaningful (below 1) only when the
/// syndrome space strictly exceeds the source entropy.
pub fn rand_bound(n: usize, k: usize, m: usize) -> Result<f64, LabError> {
    if k >= n {
        return Err(LabError::Parameter(format!("need k < n, got k={k}, n={n}")));
    }
    if n - k < m {
        return Err(LabError::Parameter(format!(
            "exponent n-k-m = {} is negative",
            n as i64 - k as i64 - m as i64
        )));
    }
    Ok((2f64).powi(-((n - k - m) as i32)))
}

/// Largest rate any code correcting a flat source of entropy `m` with error
/// `eps` can have: `1 - m/n + log2(1/(1-eps))/n`.
pub fn converse_max_rate(n: usize, m: usize, eps: f64) -> Result<f64, LabError> {
    if n == 0 || m > n {
        return Err(LabError::Parameter(format!("need 0 < n and m <= n, got n={n}, m={m}")));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(LabError::Parameter(format!("eps must lie in [0, 1), got {eps}")));
    }
    let nf = n as f64;
    Ok(1.0 - m as f64 / nf + (1.0 / (1.0 - eps)).log2() / nf)
}

/// Converse check with the vacuous cases folded in: error estimates at or
/// above 1 bound nothing, so they pass.
pub fn rate_within_converse(n: usize, k: usize, m: usize, eps_upper: f64) -> bool {
    if eps_upper >= 1.0 {
        return true;
    }
    match converse_max_rate(n, m, eps_upper) {
        // Tiny slack so boundary cases (eps = 0, k = n - m) are not decided
        // by the last float ulp.
        Ok(max_rate) => k as f64 / n as f64 <= max_rate + 1e-12,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rand_bound_matches_arithmetic() {
        assert_eq!(rand_bound(24, 10, 6).unwrap(), 0.00390625);
        assert_eq!(rand_bound(20, 10, 4).unwrap(), 0.015625);
        assert_eq!(rand_bound(16, 10, 6).unwrap(), 1.0);
        assert!(rand_bound(16, 10, 7).is_err());
        assert!(rand_bound(10, 10, 0).is_err());
    }

    #[test]
    fn converse_matches_arithmetic() {
        let r0 = converse_max_rate(24, 6, 0.0).unwrap();
        assert!((r0 - 0.75).abs() < 1e-12);
        let rhalf = converse_max_rate(24, 6, 0.5).unwrap();
        assert!((rhalf - (0.75 + 1.0 / 24.0)).abs() < 1e-12);
        assert!(converse_max_rate(24, 6, 1.0).is_err());
        assert!(converse_max_rate(24, 6, -0.1).is_err());
        assert!(converse_max_rate(24, 30, 0.1).is_err());
    }

    #[test]
    fn converse_check_is_vacuous_at_one() {
        assert!(rate_within_converse(16, 8, 4, 1.0));
        assert!(rate_within_converse(24, 10, 6, 0.01));
        // Rate 1 cannot beat the converse for m > 0 and small eps.
        assert!(!rate_within_converse(16, 16, 4, 0.01));
    }
}
