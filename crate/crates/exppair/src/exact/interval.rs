//! Certified interval arithmetic with exact rational endpoints.
//!
//! Field operations on intervals are exact (no rounding at all); only the
//! transcendental evaluations (log, exp, sqrt) widen, by a certified series
//! tail, so every returned interval is a true enclosure.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::{fmt_decimal, rat, Rat};
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertInterval {
    lo: Rat,
    hi: Rat,
}

fn pow2(bits: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2u32).pow(bits))
}

impl CertInterval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::EmptyInterval);
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: Rat) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn join(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat(2, 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        Self { lo, hi }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_negative() {
            Self {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            Self {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    pub fn add_rat(&self, c: &Rat) -> Self {
        Self {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.contains(&Rat::zero()) {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Enclosure of `sqrt(n)` for a non-negative integer, width <= 2^-bits.
    pub fn sqrt_int(n: &BigInt, bits: u32) -> Self {
        debug_assert!(!n.is_negative());
        let shift = BigInt::from(2u32).pow(bits);
        let scaled = n * &shift * &shift;
        let s = scaled.sqrt();
        Self {
            lo: Rat::new(s.clone(), shift.clone()),
            hi: Rat::new(s + 1, shift),
        }
    }

    fn sqrt_rat_down_up(x: &Rat, bits: u32) -> (Rat, Rat) {
        let shift = BigInt::from(2u32).pow(bits);
        // sqrt(n/d) = sqrt(n*d)/d
        let scaled = x.numer() * x.denom() * &shift * &shift;
        let s = scaled.sqrt();
        let den = x.denom() * &shift;
        (Rat::new(s.clone(), den.clone()), Rat::new(s + 1, den))
    }

    pub fn sqrt(&self, bits: u32) -> Result<Self, ExactError> {
        if self.lo.is_negative() {
            return Err(ExactError::NegativeRadicand(self.lo.numer().clone()));
        }
        let (lo, _) = Self::sqrt_rat_down_up(&self.lo, bits);
        let (_, hi) = Self::sqrt_rat_down_up(&self.hi, bits);
        Ok(Self { lo, hi })
    }

    /// Enclosure of ln 2 via 2*atanh(1/3).
    fn ln2(bits: u32) -> Self {
        atanh_small(&rat(1, 3), bits).scale(&rat(2, 1))
    }

    fn ln_point(x: &Rat, bits: u32) -> Result<Self, ExactError> {
        if !x.is_positive() {
            return Err(ExactError::LogDomain);
        }
        // Reduce x = m * 2^e with m in [2/3, 4/3], then
        // ln m = 2 atanh((m-1)/(m+1)) with |z| <= 1/5 < 1/3.
        let work = bits + 16;
        let mut m = x.clone();
        let mut e: i64 = 0;
        let four_thirds = rat(4, 3);
        let two_thirds = rat(2, 3);
        while m > four_thirds {
            m /= rat(2, 1);
            e += 1;
        }
        while m < two_thirds {
            m *= rat(2, 1);
            e -= 1;
        }
        let z = (&m - Rat::one()) / (&m + Rat::one());
        let ln_m = atanh_small(&z, work).scale(&rat(2, 1));
        if e == 0 {
            return Ok(ln_m);
        }
        let ln2 = Self::ln2(work + 64);
        Ok(ln_m.add(&ln2.scale(&Rat::from_integer(BigInt::from(e)))))
    }

    /// Enclosure of the natural log of every point of the interval.
    pub fn log(&self, bits: u32) -> Result<Self, ExactError> {
        if !self.lo.is_positive() {
            return Err(ExactError::LogDomain);
        }
        let lo_enc = Self::ln_point(&self.lo, bits)?;
        let hi_enc = Self::ln_point(&self.hi, bits)?;
        Ok(Self {
            lo: lo_enc.lo,
            hi: hi_enc.hi,
        })
    }

    fn exp_point(x: &Rat, bits: u32) -> Self {
        // exp(x) = exp(x / 2^k)^(2^k) with |x/2^k| <= 1/2.
        let work = bits + 16;
        let mut k: u32 = 0;
        let mut y = x.clone();
        let half = rat(1, 2);
        while y.abs() > half {
            y /= rat(2, 1);
            k += 1;
        }
        let mut enc = exp_small(&y, work + 2 * k);
        for _ in 0..k {
            enc = enc.mul(&enc);
        }
        enc
    }

    pub fn exp(&self, bits: u32) -> Self {
        let lo_enc = Self::exp_point(&self.lo, bits);
        let hi_enc = Self::exp_point(&self.hi, bits);
        Self {
            lo: lo_enc.lo,
            hi: hi_enc.hi,
        }
    }

    /// `x^(a/b)` for positive intervals; half-integer exponents avoid exp/log.
    pub fn pow_rat(&self, exponent: &Rat, bits: u32) -> Result<Self, ExactError> {
        if exponent.is_zero() {
            return Ok(Self::point(Rat::one()));
        }
        if exponent.is_negative() {
            return self.pow_rat(&-exponent.clone(), bits)?.recip();
        }
        if exponent.denom().is_one() {
            let n = exponent
                .numer()
                .to_u32()
                .ok_or(ExactError::ExponentTooLarge)?;
            return Ok(self.pow_u32(n));
        }
        if *exponent.denom() == BigInt::from(2) {
            let n = exponent
                .numer()
                .to_u32()
                .ok_or(ExactError::ExponentTooLarge)?;
            return Ok(self.pow_u32(n).sqrt(bits)?);
        }
        // General rational exponent via exp(e * ln x); requires x > 0.
        let ln = self.log(bits + 16)?;
        Ok(ln.scale(exponent).exp(bits))
    }

    pub fn pow_u32(&self, n: u32) -> Self {
        let mut acc = Self::point(Rat::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Decimal rendering of both endpoints, for reports.
    pub fn describe(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            fmt_decimal(&self.lo, digits),
            fmt_decimal(&self.hi, digits)
        )
    }
}

/// Enclosure of atanh(z) for |z| <= 1/3 by partial sums with a certified tail.
fn atanh_small(z: &Rat, bits: u32) -> CertInterval {
    debug_assert!(z.abs() <= rat(1, 3));
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = Rat::zero();
    let mut k: u64 = 0;
    let eps = pow2(bits + 2);
    loop {
        sum += &term / Rat::from_integer(BigInt::from(2 * k + 1));
        term *= &z2;
        k += 1;
        // Remaining tail is bounded by a geometric series.
        let tail = term.abs() / (Rat::one() - &z2) / Rat::from_integer(BigInt::from(2 * k + 1));
        if tail < eps {
            return if z.is_negative() {
                CertInterval {
                    lo: &sum - &tail,
                    hi: sum,
                }
            } else {
                CertInterval {
                    lo: sum.clone(),
                    hi: sum + tail,
                }
            };
        }
    }
}

/// Enclosure of exp(y) for |y| <= 1/2 by Taylor series with a certified tail.
fn exp_small(y: &Rat, bits: u32) -> CertInterval {
    let mut term = Rat::one();
    let mut sum = Rat::zero();
    let mut k: u64 = 0;
    let eps = pow2(bits + 2);
    loop {
        sum += &term;
        k += 1;
        term = term * y / Rat::from_integer(BigInt::from(k));
        // |remaining tail| <= 2 |term| since |y|/(k+1) <= 1/2.
        let tail = term.abs() * rat(2, 1);
        if tail < eps {
            return CertInterval {
                lo: &sum - &tail,
                hi: sum + tail,
            };
        }
    }
}

/// Enclosure of `e` (for tests that need an independent transcendental value).
pub fn euler_constant_e(bits: u32) -> CertInterval {
    exp_small(&rat(1, 2), bits + 4).pow_u32(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat_int;

    #[test]
    fn log_one_is_tight_around_zero() {
        let x = CertInterval::point(Rat::one());
        let enc = x.log(64).unwrap();
        assert!(enc.contains(&Rat::zero()));
        assert!(enc.width() <= pow2(64));
    }

    #[test]
    fn log_of_e_contains_one() {
        let e = euler_constant_e(96);
        let enc = e.log(64).unwrap();
        assert!(enc.contains(&Rat::one()));
    }

    #[test]
    fn log_three_cross_checked_at_two_precisions() {
        let x = CertInterval::point(rat_int(3));
        let lo_prec = x.log(32).unwrap();
        let hi_prec = x.log(96).unwrap();
        assert!(lo_prec.contains_interval(&hi_prec));
        // ln 3 = 1.0986122886...
        assert!(hi_prec.lo() > &rat(10986122, 10000000));
        assert!(hi_prec.hi() < &rat(10986123, 10000000));
    }

    #[test]
    fn sqrt_enclosure() {
        let x = CertInterval::new(rat(2, 1), rat(3, 1)).unwrap();
        let s = x.sqrt(64).unwrap();
        assert!(s.lo() < &rat(1414214, 1000000));
        assert!(s.hi() > &rat(1732050, 1000000));
        assert!(s.hi() < &rat(1732051, 1000000));
    }

    #[test]
    fn pow_three_halves() {
        let x = CertInterval::point(rat(4, 1));
        let p = x.pow_rat(&rat(3, 2), 64).unwrap();
        assert!(p.contains(&rat(8, 1)));
        assert!(p.width() < rat(1, 1000000));
    }

    #[test]
    fn general_pow_via_exp_log() {
        let x = CertInterval::point(rat(8, 1));
        let p = x.pow_rat(&rat(2, 3), 64).unwrap();
        assert!(p.contains(&rat(4, 1)));
        assert!(p.width() < rat(1, 1000000));
    }

    #[test]
    fn exp_zero() {
        let e = CertInterval::point(Rat::zero()).exp(64);
        assert!(e.contains(&Rat::one()));
    }

    #[test]
    fn division_by_zero_interval_rejected() {
        let x = CertInterval::new(rat(-1, 1), rat(1, 1)).unwrap();
        assert!(x.recip().is_err());
    }
}
