//! Small numeric helpers shared by the estimators.

/// Terms with `x - max < -LSE_CUTOFF` weigh less than half an ulp of the
/// leading term and are dropped.
pub const LSE_CUTOFF: f64 = 53.0 * std::f64::consts::LN_2;

const LN2_HI: f64 = 6.931_471_803_691_238_164_90e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_700_02e-10;
/// `1.5·2⁵²`: adding it rounds to the nearest integer in the low mantissa bits.
const ROUND_MAGIC: f64 = 6_755_399_441_055_744.0;

/// `eˣ` for `x ∈ [-LSE_CUTOFF - 1, 0]`, branch-free so the caller's loop
/// vectorizes. Relative error is within a few ulp of `f64::exp`.
#[inline(always)]
pub fn exp_bounded(x: f64) -> f64 {
    let shifted = x * std::f64::consts::LOG2_E + ROUND_MAGIC;
    let k = shifted - ROUND_MAGIC;
    let r = (x - k * LN2_HI) - k * LN2_LO;
    // Taylor series to r¹³ (|r| ≤ ln2/2, truncation error below 1e-17),
    // evaluated with Estrin's scheme for a short dependency chain.
    let r2 = r * r;
    let r4 = r2 * r2;
    let r8 = r4 * r4;
    let q0 = 1.0 + r;
    let q1 = 0.5 + r * (1.0 / 6.0);
    let q2 = 1.0 / 24.0 + r * (1.0 / 120.0);
    let q3 = 1.0 / 720.0 + r * (1.0 / 5_040.0);
    let q4 = 1.0 / 40_320.0 + r * (1.0 / 362_880.0);
    let q5 = 1.0 / 3_628_800.0 + r * (1.0 / 39_916_800.0);
    let q6 = 1.0 / 479_001_600.0 + r * (1.0 / 6_227_020_800.0);
    let lo = (q0 + r2 * q1) + r4 * (q2 + r2 * q3);
    let hi = (q4 + r2 * q5) + r4 * q6;
    let p = lo + r8 * hi;
    let ki = shifted.to_bits().wrapping_sub(ROUND_MAGIC.to_bits());
    let scale = f64::from_bits(ki.wrapping_add(1023) << 52);
    p * scale
}

#[inline(never)]
fn exp_out_of_line(x: f64) -> f64 {
    exp_bounded(x)
}

/// Sum with four interleaved accumulators in a fixed order.
#[inline]
fn sum4(xs: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = xs.chunks_exact(4);
    let tail = chunks.remainder();
    for c in chunks {
        for j in 0..4 {
            acc[j] += c[j];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for &x in tail {
        s += x;
    }
    s
}

#[inline]
fn max4(xs: &[f64]) -> f64 {
    let mut acc = [f64::NEG_INFINITY; 4];
    let chunks = xs.chunks_exact(4);
    let tail = chunks.remainder();
    for c in chunks {
        for j in 0..4 {
            acc[j] = acc[j].max(c[j]);
        }
    }
    let mut m = acc[0].max(acc[1]).max(acc[2].max(acc[3]));
    for &x in tail {
        m = m.max(x);
    }
    m
}

/// `ln(Σ exp(x))` with the maximum exponent subtracted before exponentiation.
///
/// The sum is formed as `m + ln(Σ exp(x - m))` over the terms within
/// [`LSE_CUTOFF`] of the maximum `m`. When no other term is that close the
/// result is exactly `m`. `xs` is overwritten with the shifted exponentials.
#[inline]
pub fn log_sum_exp_in_place(xs: &mut [f64]) -> f64 {
    let m = max4(xs);
    if !m.is_finite() {
        return m;
    }
    let active = xs.iter().filter(|&&x| x - m >= -LSE_CUTOFF).count();
    if active * 4 <= xs.len() {
        // Sparse: only a few terms survive the cutoff.
        for x in xs.iter_mut() {
            let d = *x - m;
            *x = if d >= -LSE_CUTOFF { exp_out_of_line(d) } else { 0.0 };
        }
    } else {
        for x in xs.iter_mut() {
            let d = *x - m;
            let e = exp_bounded(d.max(-LSE_CUTOFF - 1.0));
            *x = if d >= -LSE_CUTOFF { e } else { 0.0 };
        }
    }
    m + sum4(xs).ln()
}

/// Non-destructive form of [`log_sum_exp_in_place`].
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let mut buf = xs.to_vec();
    log_sum_exp_in_place(&mut buf)
}

/// Running first and second moments, merged in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        self.sum / self.count as f64
    }

    /// Unbiased sample variance; zero with fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let mean = self.sum / n;
        ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}
