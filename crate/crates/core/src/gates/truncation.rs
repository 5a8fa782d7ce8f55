//! Fock-space truncation policy.

/// Default cutoff for a mode whose coherent amplitudes stay below `amplitude`:
/// `ceil(A² + 8A + 12)`.
pub fn policy_cutoff(amplitude: f64) -> usize {
    let a = amplitude.abs();
    (a * a + 8.0 * a + 12.0).ceil() as usize
}

/// Poisson mass above `cutoff` for the given mean, by direct summation of the
/// series upward from `cutoff + 1`.
pub fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let n0 = cutoff + 1;
    let ln_fact: f64 = (2..=n0).map(|k| (k as f64).ln()).sum();
    let mut term = (-mean + n0 as f64 * mean.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut n = n0;
    loop {
        sum += term;
        n += 1;
        term *= mean / n as f64;
        if (n as f64 > mean && term < sum * 1e-17) || term == 0.0 {
            break;
        }
    }
    sum
}

/// Levels below `cutoff + 1 − margin` are trusted after a displacement by `α`.
pub fn displacement_margin(amplitude: f64) -> usize {
    (4.0 * amplitude.abs()).ceil() as usize
}
