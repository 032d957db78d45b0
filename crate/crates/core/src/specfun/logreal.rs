use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// `sign == 0` encodes exact zero; `logmag` is then ignored (kept at -inf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogReal {
    sign: i8,
    logmag: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        logmag: f64::NEG_INFINITY,
    };
    pub const ONE: LogReal = LogReal { sign: 1, logmag: 0.0 };

    pub fn new(sign: i8, logmag: f64) -> Self {
        if sign == 0 || logmag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogReal {
                sign: sign.signum(),
                logmag,
            }
        }
    }

    /// Positive number `exp(logmag)`.
    pub fn from_log(logmag: f64) -> Self {
        Self::new(1, logmag)
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogReal {
                sign: if x > 0.0 { 1 } else { -1 },
                logmag: x.abs().ln(),
            }
        }
    }

    pub fn to_real(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logmag.exp(),
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn logmag(self) -> f64 {
        self.logmag
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn is_finite(self) -> bool {
        self.sign == 0 || self.logmag.is_finite()
    }

    pub fn abs(self) -> Self {
        LogReal {
            sign: self.sign.abs(),
            logmag: self.logmag,
        }
    }

    pub fn powi(self, n: i64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return if n > 0 {
                Self::ZERO
            } else {
                LogReal {
                    sign: 1,
                    logmag: f64::INFINITY,
                }
            };
        }
        let sign = if self.sign < 0 && n % 2 != 0 { -1 } else { 1 };
        LogReal {
            sign,
            logmag: self.logmag * n as f64,
        }
    }

    /// Magnitude comparison.
    pub fn cmp_abs(self, other: Self) -> Ordering {
        match (self.sign, other.sign) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Less,
            (_, 0) => Ordering::Greater,
            _ => self.logmag.partial_cmp(&other.logmag).unwrap_or(Ordering::Equal),
        }
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        LogReal {
            sign: self.sign * rhs.sign,
            logmag: self.logmag + rhs.logmag,
        }
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 {
            return Self::ZERO;
        }
        if rhs.sign == 0 {
            return LogReal {
                sign: self.sign,
                logmag: f64::INFINITY,
            };
        }
        LogReal {
            sign: self.sign * rhs.sign,
            logmag: self.logmag - rhs.logmag,
        }
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal {
            sign: -self.sign,
            logmag: self.logmag,
        }
    }
}

impl Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.logmag >= rhs.logmag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = small.logmag - big.logmag;
        if big.sign == small.sign {
            LogReal {
                sign: big.sign,
                logmag: big.logmag + d.exp().ln_1p(),
            }
        } else {
            let r = -d.exp_m1();
            if r <= 0.0 {
                Self::ZERO
            } else {
                // 1 - e^d, computed without cancellation for d near 0
                LogReal {
                    sign: big.sign,
                    logmag: big.logmag + r.ln(),
                }
            }
        }
    }
}

impl Sub for LogReal {
    type Output = LogReal;
    fn sub(self, rhs: LogReal) -> LogReal {
        self + (-rhs)
    }
}
