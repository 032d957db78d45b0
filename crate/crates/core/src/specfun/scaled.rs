use num_complex::Complex64;

/// Complex number `mant * exp(log_scale)` with `|mant|` kept near one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub mant: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    pub const ZERO: ScaledComplex = ScaledComplex {
        mant: Complex64 { re: 0.0, im: 0.0 },
        log_scale: 0.0,
    };

    /// Normalizes so that `|mant| == 1` (or mant == 0).
    pub fn new(mant: Complex64, log_scale: f64) -> Self {
        let a = mant.norm();
        if a == 0.0 || !a.is_finite() {
            return ScaledComplex {
                mant,
                log_scale: if a == 0.0 { 0.0 } else { log_scale },
            };
        }
        ScaledComplex {
            mant: mant / a,
            log_scale: log_scale + a.ln(),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    /// ln|z|, -inf for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.norm().ln() + self.log_scale
        }
    }

    /// Unit phase `z/|z|` (zero for zero).
    pub fn phase(&self) -> Complex64 {
        let a = self.mant.norm();
        if a == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.mant / a
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return self.mant;
        }
        self.mant * self.log_scale.exp()
    }

    pub fn mul(&self, other: &ScaledComplex) -> ScaledComplex {
        ScaledComplex::new(self.mant * other.mant, self.log_scale + other.log_scale)
    }

    pub fn conj(&self) -> ScaledComplex {
        ScaledComplex {
            mant: self.mant.conj(),
            log_scale: self.log_scale,
        }
    }
}

const RESCALE_HI: f64 = 1e100;
const RESCALE_LO: f64 = 1e-100;

/// Runs `y[k+1] = a_k y[k] + b_k y[k-1]` for k = 1..n_max-1 from `y0`, `y1`,
/// rescaling the running pair so that no intermediate overflows.
pub fn scaled_recurrence<F>(y0: Complex64, y1: Complex64, n_max: usize, mut coef: F) -> Vec<ScaledComplex>
where
    F: FnMut(usize) -> (Complex64, Complex64),
{
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(ScaledComplex::from_complex(y0));
    if n_max == 0 {
        return out;
    }
    out.push(ScaledComplex::from_complex(y1));
    let (mut prev, mut cur, mut scale) = (y0, y1, 0.0f64);
    for k in 1..n_max {
        let (a, b) = coef(k);
        let next = a * cur + b * prev;
        prev = cur;
        cur = next;
        let m = cur.norm().max(prev.norm());
        if m > RESCALE_HI || (m < RESCALE_LO && m > 0.0) {
            prev /= m;
            cur /= m;
            scale += m.ln();
        }
        out.push(ScaledComplex::new(cur, scale));
    }
    out
}
