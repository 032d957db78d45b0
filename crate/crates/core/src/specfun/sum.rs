use num_complex::Complex64;

/// Neumaier-compensated running sum that also tracks the sum of magnitudes,
/// from which a condition number `sum|x| / |sum x|` follows.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs_sum: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_sum += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    /// `sum|x| / |sum x|`; 1 for a sum of same-signed terms, inf on total cancellation.
    pub fn condition(&self) -> f64 {
        let v = self.value().abs();
        if self.abs_sum == 0.0 {
            1.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            self.abs_sum / v
        }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Componentwise Neumaier sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
    abs_sum: f64,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.abs_sum += z.norm();
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs_sum
    }

    pub fn condition(&self) -> f64 {
        let v = self.value().norm();
        if self.abs_sum == 0.0 {
            1.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            self.abs_sum / v
        }
    }
}

/// ln(sum exp(x_i)); -inf for an empty or all -inf input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let v: Vec<f64> = terms.into_iter().collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    let s: NeumaierSum = v.iter().map(|&x| (x - m).exp()).collect();
    m + s.value().ln()
}

/// Compensated sum of signed log-scaled terms, returned with its condition
/// number `sum|t| / |sum t|`.
pub fn sum_logreal(terms: &[super::LogReal]) -> (super::LogReal, f64) {
    let m = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.logmag())
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return (super::LogReal::ZERO, 1.0);
    }
    let s: NeumaierSum = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| f64::from(t.sign()) * (t.logmag() - m).exp())
        .collect();
    let v = super::LogReal::from_real(s.value());
    let out = if v.is_zero() {
        v
    } else {
        super::LogReal::new(v.sign(), v.logmag() + m)
    };
    (out, s.condition())
}

/// `2^k` built from its bit pattern, exact for normal exponents.
fn pow2(k: i32) -> f64 {
    if k < -1022 {
        0.0
    } else {
        f64::from_bits(((1023 + k) as u64) << 52)
    }
}

/// Sum of `t_0 = 1, t_{k+1} = t_k * ratio_k`, returned with its condition
/// number.
///
/// Terms are formed by plain products with exact power-of-two rescaling, so
/// each carries a relative error of order `k eps` regardless of its size.
pub fn sum_ratio_series<I: IntoIterator<Item = f64>>(ratios: I) -> (super::LogReal, f64) {
    let mut terms: Vec<(f64, i32)> = vec![(1.0, 0)];
    let (mut m, mut e) = (1.0f64, 0i32);
    for q in ratios {
        m *= q;
        if m == 0.0 || !m.is_finite() {
            break;
        }
        let a = m.abs();
        if !(1e-150..=1e150).contains(&a) {
            let k = a.log2().floor() as i32;
            m *= pow2(-k);
            e += k;
        }
        terms.push((m, e));
    }
    let top = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let s: NeumaierSum = terms.iter().map(|&(m, e)| m * pow2(e - top)).collect();
    let v = super::LogReal::from_real(s.value());
    let out = if v.is_zero() {
        v
    } else {
        super::LogReal::new(v.sign(), v.logmag() + top as f64 * std::f64::consts::LN_2)
    };
    (out, s.condition())
}
