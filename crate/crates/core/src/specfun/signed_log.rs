use std::ops::{Mul, Neg};

/// A real number stored as `sign * exp(log_magnitude)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    pub sign: i8,
    pub log_magnitude: f64,
}

impl SignedLogValue {
    pub const ZERO: Self = Self { sign: 0, log_magnitude: f64::NEG_INFINITY };
    pub const ONE: Self = Self { sign: 1, log_magnitude: 0.0 };

    pub fn new(sign: i8, log_magnitude: f64) -> Self {
        if sign == 0 || log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: sign.signum(), log_magnitude }
        }
    }

    pub fn from_ln(log_magnitude: f64) -> Self {
        Self::new(1, log_magnitude)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn value(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        Self { sign: self.sign, log_magnitude: -self.log_magnitude }
    }

    pub fn powi(self, e: i32) -> Self {
        if e == 0 {
            return Self::ONE;
        }
        let sign = if e % 2 == 0 { self.sign.abs() } else { self.sign };
        Self::new(sign, self.log_magnitude * f64::from(e))
    }
}

impl Mul for SignedLogValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.sign * rhs.sign, self.log_magnitude + rhs.log_magnitude)
    }
}

impl Neg for SignedLogValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self { sign: -self.sign, log_magnitude: self.log_magnitude }
    }
}

/// Running `ln(sum exp(t_i))` over positive terms.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: 0.0 }
    }
}

impl LogSumExp {
    pub fn add(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.max {
            self.scaled = self.scaled * (self.max - ln_term).exp() + 1.0;
            self.max = ln_term;
        } else {
            self.scaled += (ln_term - self.max).exp();
        }
    }

    pub fn ln(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Accumulates a sum of mixed-sign terms into separate positive and negative
/// pools, combined once at the end.
#[derive(Debug, Clone, Copy, Default)]
pub struct SignedLogSum {
    pos: LogSumExp,
    neg: LogSumExp,
}

impl SignedLogSum {
    pub fn add(&mut self, term: SignedLogValue) {
        match term.sign {
            1 => self.pos.add(term.log_magnitude),
            -1 => self.neg.add(term.log_magnitude),
            _ => {}
        }
    }

    pub fn total(&self) -> SignedLogValue {
        let (p, n) = (self.pos.ln(), self.neg.ln());
        if n == f64::NEG_INFINITY {
            return SignedLogValue::from_ln(p);
        }
        if p == f64::NEG_INFINITY {
            return SignedLogValue::new(-1, n);
        }
        if p == n {
            return SignedLogValue::ZERO;
        }
        let (sign, big, small) = if p > n { (1, p, n) } else { (-1, n, p) };
        SignedLogValue::new(sign, big + (-(small - big).exp()).ln_1p())
    }

    /// `log10(max(pool) / |total|)`; zero without cancellation, infinite when
    /// the pools cancel exactly.
    pub fn condition(&self) -> f64 {
        let big = self.pos.ln().max(self.neg.ln());
        if big == f64::NEG_INFINITY {
            return 0.0;
        }
        let t = self.total();
        if t.is_zero() {
            f64::INFINITY
        } else {
            (big - t.log_magnitude) / std::f64::consts::LN_10
        }
    }
}
