//! Multiprecision evaluation of the alternating incomplete-gamma sums at
//! alpha = 1/2, where every incomplete gamma has an integer first argument.
//!
//! ```text
//! D(n, c) = sum_{s=0}^{n-1} binom(n-1, s) (-1)^s beta^(2s) G(c - 2s; beta)
//! ```
//!
//! The cancellation in `D` grows roughly linearly in `n` (about 60 decimal
//! digits at n = 200), so the working precision is chosen from the measured
//! cancellation and raised until the result keeps a safety margin.

use crate::error::{Error, Result};
use rug::Float;

/// Bits kept beyond the measured cancellation.
const MARGIN_BITS: u32 = 96;
const START_BITS: u32 = 192;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// `G(c; x)` for every integer `c` in `[c_lo, c_hi]`.
pub struct Ladder {
    c_lo: i64,
    values: Vec<Float>,
}

impl Ladder {
    pub fn new(x: f64, c_lo: i64, c_hi: i64, prec: u32) -> Self {
        assert!(x > 0.0 && c_lo <= c_hi);
        let lo = c_lo.min(0);
        let hi = c_hi.max(1);
        let xf = Float::with_val(prec, x);
        let e_neg = Float::with_val(prec, -&xf).exp();
        let mut values = vec![Float::new(prec); (hi - lo + 1) as usize];
        let at = |c: i64| (c - lo) as usize;
        // G(0; x) = E1(x) = -Ei(-x)
        values[at(0)] = -Float::with_val(prec, -&xf).eint();
        values[at(1)] = e_neg.clone();
        let mut pow = xf.clone();
        for c in 1..hi {
            // G(c+1) = c G(c) + x^c e^-x
            let next = Float::with_val(prec, &values[at(c)] * c) + Float::with_val(prec, &pow * &e_neg);
            values[at(c + 1)] = next;
            pow *= &xf;
        }
        let mut pow = Float::with_val(prec, 1.0);
        for c in (lo..0).rev() {
            // G(c) = (G(c+1) - x^c e^-x) / c
            pow /= &xf;
            let t = Float::with_val(prec, &pow * &e_neg);
            values[at(c)] = Float::with_val(prec, &values[at(c + 1)] - &t) / c;
        }
        let skip = (c_lo - lo) as usize;
        let values = values.into_iter().skip(skip).take((c_hi - c_lo + 1) as usize).collect();
        Self { c_lo, values }
    }

    pub fn get(&self, c: i64) -> &Float {
        &self.values[(c - self.c_lo) as usize]
    }

    /// Extra bits lost by the downward recursion from `c = 0` to `c_lo`.
    pub fn guard_bits(x: f64, c_lo: i64) -> u32 {
        let steps = (-c_lo).max(0);
        let bits: f64 = (1..=steps).map(|m| (1.0 + x / m as f64).log2()).sum();
        bits.ceil() as u32 + 8
    }
}

/// Signed sum split into pools, with the cancellation in bits.
pub struct PoolSum {
    pos: Float,
    neg: Float,
}

impl PoolSum {
    pub fn new(prec: u32) -> Self {
        Self { pos: Float::new(prec), neg: Float::new(prec) }
    }

    pub fn add(&mut self, term: Float) {
        if term.is_sign_negative() {
            self.neg -= term;
        } else {
            self.pos += term;
        }
    }

    pub fn value(&self) -> Float {
        Float::with_val(self.pos.prec(), &self.pos - &self.neg)
    }

    /// `log2(max(pool) / |sum|)`.
    pub fn cancellation_bits(&self) -> f64 {
        let big = if self.pos > self.neg { &self.pos } else { &self.neg };
        if big.is_zero() {
            return 0.0;
        }
        let v = self.value();
        if v.is_zero() {
            return f64::INFINITY;
        }
        let ratio = Float::with_val(53, big / v.abs());
        ratio.log2().to_f64().max(0.0)
    }
}

/// `D(n, c)` with its cancellation in bits.
pub fn alternating_d(ladder: &Ladder, beta: f64, n: u32, c: i64, prec: u32) -> (Float, f64) {
    let b2 = Float::with_val(prec, beta * beta);
    let mut binom = Float::with_val(prec, 1);
    let mut bpow = Float::with_val(prec, 1);
    let mut sum = PoolSum::new(prec);
    for s in 0..n {
        let mut t = Float::with_val(prec, &binom * &bpow) * ladder.get(c - 2 * i64::from(s));
        if s % 2 == 1 {
            t = -t;
        }
        sum.add(t);
        binom *= n - 1 - s;
        binom /= s + 1;
        bpow *= &b2;
    }
    let bits = sum.cancellation_bits();
    (sum.value(), bits)
}

/// Runs `f(prec)` and raises the precision until the reported cancellation
/// leaves `MARGIN_BITS` of accuracy. Returns the result and the cancellation
/// as a log10 condition estimate.
pub fn with_adaptive_precision<T>(
    guard_bits: u32,
    max_bits: u32,
    mut f: impl FnMut(u32) -> (T, f64),
) -> Result<(T, f64)> {
    let mut prec = START_BITS + guard_bits;
    loop {
        let (out, bits) = f(prec);
        if bits.is_finite() && f64::from(prec) - bits >= f64::from(MARGIN_BITS + guard_bits) {
            return Ok((out, bits * LOG10_2));
        }
        let wanted = if bits.is_finite() {
            (bits.ceil() as u32).saturating_add(MARGIN_BITS + guard_bits + 64)
        } else {
            prec.saturating_mul(2)
        };
        let next = wanted.max(prec + 64);
        if next > max_bits {
            return Err(Error::PrecisionLoss(format!(
                "cancellation of {:.1} decimal digits needs more than {max_bits} bits",
                bits * LOG10_2
            )));
        }
        prec = next;
    }
}

pub fn ln_f64(x: &Float) -> f64 {
    Float::with_val(x.prec(), x.ln_ref()).to_f64()
}
