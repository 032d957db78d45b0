use super::{sum_ratio_series, LogReal};
use crate::{Error, Result};

/// Value of a terminating Gauss series together with its condition number.
#[derive(Debug, Clone, Copy)]
pub struct Terminating2F1 {
    pub value: LogReal,
    pub condition: f64,
}

fn nonpositive_integer(a: f64) -> Option<usize> {
    if a <= 0.0 && (a - a.round()).abs() < 1e-12 {
        Some((-a.round()) as usize)
    } else {
        None
    }
}

/// 2F1(a, b; c; x) for a series that terminates because `a` or `b` is a
/// non-positive integer. `x` is unrestricted since the series is a polynomial.
pub fn gauss2f1_terminating(a: f64, b: f64, c: f64, x: f64) -> Result<Terminating2F1> {
    let len = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(p), Some(q)) => p.min(q),
        (Some(p), None) | (None, Some(p)) => p,
        (None, None) => {
            return Err(Error::invalid(format!(
                "2F1({a}, {b}; {c}; x) does not terminate: neither upper parameter is a non-positive integer"
            )))
        }
    };
    let mut ratios = Vec::with_capacity(len);
    for k in 0..len {
        let kf = k as f64;
        let den = (c + kf) * (kf + 1.0);
        if den == 0.0 {
            return Err(Error::invalid(format!(
                "2F1 lower parameter c = {c} hits a pole before termination"
            )));
        }
        ratios.push((a + kf) * (b + kf) / den * x);
    }
    let (value, condition) = sum_ratio_series(ratios);
    Ok(Terminating2F1 { value, condition })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        assert_eq!(gauss2f1_terminating(0.0, -1.5, 0.5, 3.0).unwrap().value.to_real(), 1.0);
        let (b, c, x) = (-1.5, 2.5, 0.7);
        let v = gauss2f1_terminating(-1.0, b, c, x).unwrap().value.to_real();
        assert!((v - (1.0 - b * x / c)).abs() < 1e-15);
        for &(a, b, c) in &[(-3.0, 0.5, 1.5), (-2.5, -4.0, 0.5), (-7.0, -7.0, -13.5)] {
            assert_eq!(gauss2f1_terminating(a, b, c, 0.0).unwrap().value.to_real(), 1.0);
        }
    }

    #[test]
    fn rejects_nonterminating() {
        assert!(gauss2f1_terminating(-0.5, 1.5, 2.0, 0.1).is_err());
    }

    #[test]
    fn rejects_pole() {
        assert!(gauss2f1_terminating(-3.0, 1.0, -1.0, 0.1).is_err());
    }

    #[test]
    fn legendre_connection() {
        // P_n(x) = 2F1(-n, n+1; 1; (1-x)/2)
        let x = 0.37f64;
        let p3 = 0.5 * (5.0 * x.powi(3) - 3.0 * x);
        let v = gauss2f1_terminating(-3.0, 4.0, 1.0, (1.0 - x) / 2.0)
            .unwrap()
            .value
            .to_real();
        assert!((v - p3).abs() < 1e-14);
    }
}
