//! Discount weights of the inter-jump segments.
//!
//! With jumps arriving at total rate `omega` and a continuous discount rate
//! `beta`, the expected discounted length of the segment between the k-th
//! and (k+1)-th jumps has the closed form `(omega/(omega+beta))^k /
//! (omega+beta)`. The weights sum to `1/beta` over all k, which is what the
//! constant-reward identity in the discounted series rests on.

/// Expected discounted length of the k-th inter-jump segment.
pub fn discount_weight(omega: f64, beta: f64, k: usize) -> f64 {
    debug_assert!(omega > 0.0 && beta > 0.0);
    let ratio = omega / (omega + beta);
    powi_checked(ratio, k) / (omega + beta)
}

/// Total weight of all segments beyond index `k_max`:
/// `sum_{k > k_max} = (omega/(omega+beta))^(k_max+1) / beta`.
pub fn discount_weight_tail(omega: f64, beta: f64, k_max: usize) -> f64 {
    let ratio = omega / (omega + beta);
    powi_checked(ratio, k_max + 1) / beta
}

fn powi_checked(base: f64, exp: usize) -> f64 {
    match i32::try_from(exp) {
        Ok(e) => base.powi(e),
        Err(_) => base.powf(exp as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroth_weight_is_inverse_total_rate() {
        assert!((discount_weight(3.0, 1.0, 0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn closed_form_example() {
        // omega = 2, beta = 1, k = 3: (2/3)^3 / 3 = 8/81
        assert!((discount_weight(2.0, 1.0, 3) - 8.0 / 81.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_inverse_discount_rate() {
        let (omega, beta) = (5.0, 0.7);
        let mut sum = 0.0;
        for k in 0..5000 {
            sum += discount_weight(omega, beta, k);
        }
        assert!((sum - 1.0 / beta).abs() < 1e-9, "{sum}");
    }

    #[test]
    fn tail_matches_partial_sums() {
        let (omega, beta) = (2.0, 0.5);
        for k_max in [0, 1, 7, 40] {
            let partial: f64 = (0..=k_max).map(|k| discount_weight(omega, beta, k)).sum();
            let tail = discount_weight_tail(omega, beta, k_max);
            assert!((partial + tail - 1.0 / beta).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_strictly_decreasing() {
        let (omega, beta) = (4.0, 0.3);
        for k in 0..100 {
            assert!(discount_weight(omega, beta, k + 1) < discount_weight(omega, beta, k));
        }
    }
}
