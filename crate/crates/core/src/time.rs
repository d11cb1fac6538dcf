//! Exact time arithmetic, interval types and the tick projection.
//!
//! Real-valued quantities (seconds, signal samples, predicate constants) are
//! carried as exact rationals parsed from their decimal spelling, so that
//! `0.625 / 0.001` is exactly `625` and rounding decisions are never at the
//! mercy of binary floating point.

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{CheckedMul, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number used for seconds and for real signal values.
pub type Real = Rational64;

/// Tick index on the discrete time line.
pub type Tick = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("`{0}` is not a decimal number")]
    Malformed(String),
    #[error("`{0}` does not fit the exact number range")]
    Overflow(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("tick period must be positive, got {0}")]
    NonPositiveDt(String),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(String),
    #[error("interval upper bound {hi} is below lower bound {lo}")]
    EmptyInterval { lo: String, hi: String },
    #[error("tick index overflow for {0}")]
    Overflow(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantizeError {
    #[error("quantization factor must be positive, got {0}")]
    NonPositiveFactor(i64),
    #[error("{value} scaled by {factor} overflows the scaled-integer range")]
    Overflow { value: String, factor: i64 },
    #[error(transparent)]
    Number(#[from] NumberError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SihError {
    #[error("oversampling factor kappa must be at least 2, got {0}")]
    KappaTooSmall(u32),
    #[error("sampling frequency must be positive, got {0}")]
    NonPositiveFs(f64),
    #[error("signal bandwidth must be non-negative, got {0}")]
    NegativeFm(f64),
}

/// Parses a decimal literal (`12`, `-0.0805`, `1.5e-3`) or a ratio `p/q`
/// into an exact rational.
pub fn parse_real(text: &str) -> Result<Real, NumberError> {
    let s = text.trim();
    let malformed = || NumberError::Malformed(text.to_string());
    let overflow = || NumberError::Overflow(text.to_string());
    if s.is_empty() {
        return Err(malformed());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| malformed())?;
        let d: i64 = den.trim().parse().map_err(|_| malformed())?;
        if d == 0 {
            return Err(malformed());
        }
        return Ok(Real::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| malformed())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(malformed());
    }
    let mut numer: i64 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add(i64::from(b - b'0')))
            .ok_or_else(overflow)?;
    }
    let scale = frac_part.len() as i32 - exponent;
    let value = if scale >= 0 {
        let den = 10i64.checked_pow(scale as u32).ok_or_else(overflow)?;
        Real::new(numer, den)
    } else {
        let mul = 10i64.checked_pow((-scale) as u32).ok_or_else(overflow)?;
        Real::from_integer(numer.checked_mul(mul).ok_or_else(overflow)?)
    };
    Ok(if negative { -value } else { value })
}

/// Converts a float through its shortest round-trip decimal spelling, so
/// `0.0805_f64` becomes exactly `805/10000`.
pub fn real_from_f64(value: f64) -> Result<Real, NumberError> {
    if !value.is_finite() {
        return Err(NumberError::Malformed(value.to_string()));
    }
    parse_real(&value.to_string())
}

/// Formats a rational as an exact decimal when one exists, `p/q` otherwise.
pub fn format_real(value: &Real) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let mut den = *value.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    let scaled = 10i64
        .checked_pow(places)
        .and_then(|p| i64::checked_mul(*value.numer(), p / value.denom()));
    let Some(scaled) = scaled else {
        return format!("{}/{}", value.numer(), value.denom());
    };
    let sign = if scaled < 0 { "-" } else { "" };
    let digits = format!("{:0>width$}", scaled.unsigned_abs(), width = places as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - places as usize);
    format!("{sign}{int}.{frac}")
}

/// Upper end of an interval; `Unbounded` is the distinguished `∞` marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Upper<T> {
    Finite(T),
    Unbounded,
}

impl<T: Copy> Upper<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Upper::Finite(v) => Some(v),
            Upper::Unbounded => None,
        }
    }
}

/// Closed real-time window `[lo, hi]` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RealInterval {
    lo: Real,
    hi: Upper<Real>,
}

impl RealInterval {
    pub fn new(lo: Real, hi: Upper<Real>) -> Result<Self, TimeError> {
        if lo.is_negative() {
            return Err(TimeError::NegativeTime(format_real(&lo)));
        }
        if let Upper::Finite(h) = hi {
            if h < lo {
                return Err(TimeError::EmptyInterval {
                    lo: format_real(&lo),
                    hi: format_real(&h),
                });
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> Real {
        self.lo
    }

    pub fn hi(&self) -> Upper<Real> {
        self.hi
    }

    /// `[0, ∞)`
    pub fn is_untimed(&self) -> bool {
        self.lo.is_zero() && self.hi == Upper::Unbounded
    }
}

/// Closed tick window `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TickInterval {
    lo: Tick,
    hi: Upper<Tick>,
}

impl TickInterval {
    pub fn new(lo: Tick, hi: Upper<Tick>) -> Result<Self, TimeError> {
        if let Upper::Finite(h) = hi {
            if h < lo {
                return Err(TimeError::EmptyInterval {
                    lo: lo.to_string(),
                    hi: h.to_string(),
                });
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn bounded(lo: Tick, hi: Tick) -> Result<Self, TimeError> {
        Self::new(lo, Upper::Finite(hi))
    }

    pub fn lo(&self) -> Tick {
        self.lo
    }

    pub fn hi(&self) -> Upper<Tick> {
        self.hi
    }

    pub fn is_untimed(&self) -> bool {
        self.lo == 0 && self.hi == Upper::Unbounded
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Upper::Finite(h) => write!(f, "[{},{}]", format_real(&self.lo), format_real(&h)),
            Upper::Unbounded => write!(f, "[{},inf]", format_real(&self.lo)),
        }
    }
}

impl fmt::Display for TickInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Upper::Finite(h) => write!(f, "[{},{}]", self.lo, h),
            Upper::Unbounded => write!(f, "[{},inf]", self.lo),
        }
    }
}

/// Projects a real time onto its tick: `⌊t / dt⌋`.
///
/// A time exactly on a boundary `k·dt` maps to `k` (ticks are half-open
/// `[k·dt, (k+1)·dt)`).
pub fn discretize_time(t: Real, dt: Real) -> Result<Tick, TimeError> {
    if dt <= Real::zero() {
        return Err(TimeError::NonPositiveDt(format_real(&dt)));
    }
    if t.is_negative() {
        return Err(TimeError::NegativeTime(format_real(&t)));
    }
    let ratio = t / dt;
    let floor = ratio.numer().div_floor(ratio.denom());
    floor.to_u64().ok_or_else(|| TimeError::Overflow(format_real(&t)))
}

/// Projects a real interval onto ticks bound by bound.
pub fn discretize_interval(interval: &RealInterval, dt: Real) -> Result<TickInterval, TimeError> {
    let lo = discretize_time(interval.lo, dt)?;
    let hi = match interval.hi {
        Upper::Finite(h) => Upper::Finite(discretize_time(h, dt)?),
        Upper::Unbounded => Upper::Unbounded,
    };
    TickInterval::new(lo, hi)
}

/// Default scale applied to real-valued signals and predicate constants.
pub const DEFAULT_QUANTIZATION: i64 = 1000;

/// `round(value × factor)`, rounding half away from zero.
pub fn quantize(value: Real, factor: i64) -> Result<i64, QuantizeError> {
    if factor <= 0 {
        return Err(QuantizeError::NonPositiveFactor(factor));
    }
    let overflow = || QuantizeError::Overflow {
        value: format_real(&value),
        factor,
    };
    let scaled = value
        .checked_mul(&Real::from_integer(factor))
        .ok_or_else(overflow)?;
    // Ratio::round rounds half-way cases away from zero.
    Ok(*scaled.round().numer())
}

/// Quantizes a float via its shortest decimal spelling.
pub fn quantize_f64(value: f64, factor: i64) -> Result<i64, QuantizeError> {
    quantize(real_from_f64(value)?, factor)
}

/// Outcome of the Nyquist-style check backing the signal invariance assumption.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SihReport {
    pub sampling_frequency: f64,
    pub signal_bandwidth: f64,
    pub kappa: u32,
    pub satisfied: bool,
}

/// Checks `fs ≥ κ·fm`. The bandwidth is a declared property of the signal
/// source, not something estimated from samples.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must be rejected too
pub fn check_sih(fs: f64, fm: f64, kappa: u32) -> Result<SihReport, SihError> {
    if kappa < 2 {
        return Err(SihError::KappaTooSmall(kappa));
    }
    if !(fs > 0.0) {
        return Err(SihError::NonPositiveFs(fs));
    }
    if !(fm >= 0.0) {
        return Err(SihError::NegativeFm(fm));
    }
    Ok(SihReport {
        sampling_frequency: fs,
        signal_bandwidth: fm,
        kappa,
        satisfied: fs >= f64::from(kappa) * fm,
    })
}

/// Sampling frequency in Hz for a tick period.
pub fn sampling_frequency(dt: Real) -> f64 {
    dt.recip().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Real {
        parse_real(s).unwrap()
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(r("0.625"), Real::new(5, 8));
        assert_eq!(r("-0.0805"), Real::new(-805, 10000));
        assert_eq!(r("1.5e-3"), Real::new(3, 2000));
        assert_eq!(r("2E2"), Real::from_integer(200));
        assert_eq!(r("7/3"), Real::new(7, 3));
        assert_eq!(r(".5"), Real::new(1, 2));
        assert!(parse_real("abc").is_err());
        assert!(parse_real("1.2.3").is_err());
        assert!(parse_real("").is_err());
        assert!(parse_real("-").is_err());
    }

    #[test]
    fn formats_decimals() {
        assert_eq!(format_real(&r("0.625")), "0.625");
        assert_eq!(format_real(&r("-0.05")), "-0.05");
        assert_eq!(format_real(&r("80")), "80");
        assert_eq!(format_real(&Real::new(1, 3)), "1/3");
        assert_eq!(format_real(&r("0.18")), "0.18");
    }

    #[test]
    fn discretize_time_examples() {
        assert_eq!(discretize_time(r("0.625"), r("0.001")).unwrap(), 625);
        assert_eq!(discretize_time(r("0"), r("0.001")).unwrap(), 0);
        assert_eq!(discretize_time(r("1.25"), r("0.5")).unwrap(), 2);
        assert_eq!(discretize_time(r("0.7"), r("0.1")).unwrap(), 7);
        assert!(matches!(
            discretize_time(r("1"), r("0")),
            Err(TimeError::NonPositiveDt(_))
        ));
        assert!(matches!(
            discretize_time(r("1"), r("-0.5")),
            Err(TimeError::NonPositiveDt(_))
        ));
        assert!(matches!(
            discretize_time(r("-1"), r("0.5")),
            Err(TimeError::NegativeTime(_))
        ));
    }

    #[test]
    fn discretize_interval_floors_both_bounds() {
        let iv = RealInterval::new(r("0.5"), Upper::Finite(r("1.25"))).unwrap();
        assert_eq!(
            discretize_interval(&iv, r("0.5")).unwrap(),
            TickInterval::bounded(1, 2).unwrap()
        );
        let av = RealInterval::new(r("0.180"), Upper::Finite(r("0.240"))).unwrap();
        assert_eq!(
            discretize_interval(&av, r("0.001")).unwrap(),
            TickInterval::bounded(180, 240).unwrap()
        );
        let open = RealInterval::new(r("0"), Upper::Unbounded).unwrap();
        assert!(discretize_interval(&open, r("0.001")).unwrap().is_untimed());
    }

    #[test]
    fn interval_validation() {
        assert!(RealInterval::new(r("2"), Upper::Finite(r("1"))).is_err());
        assert!(RealInterval::new(r("-1"), Upper::Finite(r("1"))).is_err());
        assert!(TickInterval::bounded(5, 4).is_err());
        assert!(TickInterval::bounded(5, 5).is_ok());
    }

    #[test]
    fn quantize_examples() {
        // 0.0805 × 1000 = 80.5 exactly; half away from zero gives 81.
        assert_eq!(quantize(r("0.0805"), 1000).unwrap(), 81);
        assert_eq!(quantize(r("-0.0805"), 1000).unwrap(), -81);
        assert_eq!(quantize(r("0"), 1000).unwrap(), 0);
        assert_eq!(quantize(r("80"), 1000).unwrap(), 80000);
        assert_eq!(quantize_f64(0.0805, 1000).unwrap(), 81);
        assert!(matches!(
            quantize(r("1"), 0),
            Err(QuantizeError::NonPositiveFactor(0))
        ));
        assert!(matches!(
            quantize(Real::from_integer(i64::MAX / 10), 1000),
            Err(QuantizeError::Overflow { .. })
        ));
    }

    #[test]
    fn sih_examples() {
        assert!(check_sih(1000.0, 400.0, 2).unwrap().satisfied);
        assert!(check_sih(1000.0, 0.0, 2).unwrap().satisfied);
        assert!(!check_sih(1000.0, 600.0, 2).unwrap().satisfied);
        assert!(matches!(check_sih(1000.0, 1.0, 1), Err(SihError::KappaTooSmall(1))));
        assert_eq!(sampling_frequency(r("0.001")), 1000.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn floor_is_monotone(a in 0i64..100_000, b in 0i64..100_000, den in 1i64..1000, dt_n in 1i64..50, dt_d in 1i64..50) {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let dt = Real::new(dt_n, dt_d);
                let t1 = discretize_time(Real::new(lo, den), dt).unwrap();
                let t2 = discretize_time(Real::new(hi, den), dt).unwrap();
                prop_assert!(t1 <= t2);
            }

            #[test]
            fn tick_boundaries_map_to_their_index(k in 0i64..1_000_000, dt_n in 1i64..1000, dt_d in 1i64..1000) {
                let dt = Real::new(dt_n, dt_d);
                let t = dt * Real::from_integer(k);
                prop_assert_eq!(discretize_time(t, dt).unwrap(), k as u64);
            }

            #[test]
            fn quantize_is_monotone(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000, den in 1i64..10_000) {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let q1 = quantize(Real::new(lo, den), 1000).unwrap();
                let q2 = quantize(Real::new(hi, den), 1000).unwrap();
                prop_assert!(q1 <= q2);
            }

            #[test]
            fn decimal_print_parse_round_trip(n in -10_000_000i64..10_000_000, places in 0u32..6) {
                let v = Real::new(n, 10i64.pow(places));
                prop_assert_eq!(parse_real(&format_real(&v)).unwrap(), v);
            }
        }
    }
}
