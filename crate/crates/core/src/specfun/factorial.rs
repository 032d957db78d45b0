/// ln(sqrt(pi)).
pub const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const EXACT_LIMIT: u64 = 20;

/// ln(n!), exact integer product up to 20!, Stirling series beyond.
pub fn log_factorial(n: u64) -> f64 {
    if n <= EXACT_LIMIT {
        let mut p: u64 = 1;
        for k in 2..=n {
            p *= k;
        }
        return (p as f64).ln();
    }
    // Stirling series for ln Gamma(x), x = n + 1 >= 22; first omitted term is below 1e-16.
    let x = (n + 1) as f64;
    let x2 = x * x;
    let series =
        (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * x2)) / x2) / x2) / x2) / x;
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

/// ln((2n-1)!!) with (-1)!! = 1.
pub fn log_double_factorial_odd(n: u64) -> f64 {
    if n <= 10 {
        let mut p: u64 = 1;
        for k in 1..=n {
            p *= 2 * k - 1;
        }
        return (p as f64).ln();
    }
    // (2n-1)!! = (2n)! / (2^n n!)
    log_factorial(2 * n) - n as f64 * std::f64::consts::LN_2 - log_factorial(n)
}

/// ln C(n, k); -inf when k > n.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// ln Gamma((j+1)/2) for j >= 0.
pub fn ln_gamma_half(j: u64) -> f64 {
    if j % 2 == 1 {
        log_factorial((j - 1) / 2)
    } else {
        // Gamma(k + 1/2) = (2k-1)!! sqrt(pi) / 2^k
        let k = j / 2;
        log_double_factorial_odd(k) + LN_SQRT_PI - k as f64 * std::f64::consts::LN_2
    }
}
