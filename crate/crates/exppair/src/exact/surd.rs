//! Exact arithmetic and sign determination for quadratic surds `p + q*sqrt(r)`.
//!
//! `r` is a non-negative integer radicand. Perfect squares are folded into the
//! rational part at construction, so a nonzero `q` always means the value is
//! irrational. Signs and comparisons are decided by case analysis and integer
//! squaring, never by floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::interval::CertInterval;
use super::rat::{fmt_rat, rat, Rat};
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    p: Rat,
    q: Rat,
    /// Radicand; zero iff the value is rational.
    r: BigInt,
}

impl QuadraticSurd {
    /// Builds `p + q*sqrt(r)`, folding perfect-square radicands into `p`.
    pub fn new(p: Rat, q: Rat, r: BigInt) -> Result<Self, ExactError> {
        if r.is_negative() {
            return Err(ExactError::NegativeRadicand(r));
        }
        if q.is_zero() || r.is_zero() {
            return Ok(Self {
                p,
                q: Rat::zero(),
                r: BigInt::zero(),
            });
        }
        let s = r.sqrt();
        if &s * &s == r {
            return Ok(Self {
                p: p + q * Rat::from_integer(s),
                q: Rat::zero(),
                r: BigInt::zero(),
            });
        }
        Ok(Self { p, q, r })
    }

    pub fn from_rat(p: Rat) -> Self {
        Self {
            p,
            q: Rat::zero(),
            r: BigInt::zero(),
        }
    }

    /// `coef * sqrt(rad)` for a non-negative rational radicand:
    /// `sqrt(n/d) = sqrt(n*d)/d`.
    pub fn sqrt_of_rat(coef: Rat, rad: &Rat) -> Result<Self, ExactError> {
        if rad.is_negative() {
            return Err(ExactError::NegativeRadicand(rad.numer().clone()));
        }
        let d = rad.denom().clone();
        let scaled = rad.numer() * &d;
        Self::new(Rat::zero(), coef / Rat::from_integer(d), scaled)
    }

    pub fn rational_part(&self) -> &Rat {
        &self.p
    }

    pub fn surd_coeff(&self) -> &Rat {
        &self.q
    }

    pub fn radicand(&self) -> &BigInt {
        &self.r
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.p)
        } else {
            None
        }
    }

    /// Exact sign in {-1, 0, +1}.
    ///
    /// For nonzero `q` the value `p + q*sqrt(r)` cannot vanish (r is not a
    /// perfect square), so the sign is decided by comparing `p^2` with `q^2 r`.
    pub fn sign(&self) -> i8 {
        if self.q.is_zero() {
            return match self.p.cmp(&Rat::zero()) {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            };
        }
        let q_pos = self.q.is_positive();
        if q_pos && !self.p.is_negative() {
            return 1;
        }
        if !q_pos && !self.p.is_positive() {
            return -1;
        }
        // p and q have opposite signs: compare p^2 against q^2 r.
        let p2 = &self.p * &self.p;
        let q2r = &self.q * &self.q * Rat::from_integer(self.r.clone());
        match (q2r.cmp(&p2), q_pos) {
            (Ordering::Greater, true) => 1,
            (Ordering::Less, true) => -1,
            (Ordering::Greater, false) => -1,
            (Ordering::Less, false) => 1,
            (Ordering::Equal, _) => unreachable!("non-square radicand"),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: -self.p.clone(),
            q: -self.q.clone(),
            r: self.r.clone(),
        }
    }

    fn compatible(&self, other: &Self) -> Result<BigInt, ExactError> {
        if self.q.is_zero() {
            return Ok(other.r.clone());
        }
        if other.q.is_zero() || self.r == other.r {
            return Ok(self.r.clone());
        }
        Err(ExactError::IncompatibleRadicands(
            self.r.clone(),
            other.r.clone(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        let r = self.compatible(other)?;
        Self::new(&self.p + &other.p, &self.q + &other.q, r)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.add(&other.neg())
    }

    pub fn add_rat(&self, x: &Rat) -> Self {
        Self {
            p: &self.p + x,
            q: self.q.clone(),
            r: self.r.clone(),
        }
    }

    pub fn scale(&self, x: &Rat) -> Self {
        if x.is_zero() {
            return Self::from_rat(Rat::zero());
        }
        Self {
            p: &self.p * x,
            q: &self.q * x,
            r: self.r.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        let r = self.compatible(other)?;
        let rr = Rat::from_integer(r.clone());
        let p = &self.p * &other.p + &self.q * &other.q * rr;
        let q = &self.p * &other.q + &self.q * &other.p;
        Self::new(p, q, r)
    }

    /// Division within the field Q(sqrt(r)), by conjugate.
    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        let r = self.compatible(other)?;
        let norm = &other.p * &other.p
            - &other.q * &other.q * Rat::from_integer(r.clone());
        if norm.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let conj = Self {
            p: other.p.clone(),
            q: -other.q.clone(),
            r: r.clone(),
        };
        let num = self.mul(&conj)?;
        Ok(Self {
            p: num.p / &norm,
            q: num.q / &norm,
            r: if num.r.is_zero() { num.r } else { r },
        })
    }

    pub fn cmp_rat(&self, x: &Rat) -> Ordering {
        let diff = Self {
            p: &self.p - x,
            q: self.q.clone(),
            r: self.r.clone(),
        };
        match diff.sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Value equality across possibly different radicand representations:
    /// `q1*sqrt(r1) = q2*sqrt(r2)` iff the signs agree and `q1^2 r1 = q2^2 r2`.
    pub fn eq_value(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        if self.q.is_zero() || other.q.is_zero() {
            return self.q == other.q;
        }
        if self.q.is_positive() != other.q.is_positive() {
            return false;
        }
        let lhs = &self.q * &self.q * Rat::from_integer(self.r.clone());
        let rhs = &other.q * &other.q * Rat::from_integer(other.r.clone());
        lhs == rhs
    }

    /// Total order on values, across different radicands.
    ///
    /// The difference `a + b*sqrt(r) - d*sqrt(s)` is signed by comparing the
    /// surd part `a + b*sqrt(r)` with `d*sqrt(s)`: opposite signs decide
    /// immediately, matching signs reduce to one more single-surd sign after
    /// squaring both sides.
    pub fn cmp_values(&self, other: &Self) -> Ordering {
        if self.q.is_zero() || other.q.is_zero() || self.r == other.r {
            let diff = Self {
                p: &self.p - &other.p,
                q: &self.q - &other.q,
                r: if self.q.is_zero() {
                    other.r.clone()
                } else {
                    self.r.clone()
                },
            };
            return match diff.sign() {
                -1 => Ordering::Less,
                0 => Ordering::Equal,
                _ => Ordering::Greater,
            };
        }
        // U := (p1 - p2) + q1 sqrt(r1) versus V := q2 sqrt(r2).
        let u = Self {
            p: &self.p - &other.p,
            q: self.q.clone(),
            r: self.r.clone(),
        };
        // Neither side can vanish: both are irrational here.
        let su = u.sign();
        let sv = if other.q.is_positive() { 1i8 } else { -1 };
        if su != sv {
            // Signs differ (neither can be zero on the surd side unless
            // rational, handled above): order by sign.
            return if su < sv { Ordering::Less } else { Ordering::Greater };
        }
        // Same sign: compare squares, which leaves a single surd over r1.
        let u2_p = &u.p * &u.p + &u.q * &u.q * Rat::from_integer(u.r.clone());
        let u2_q = rat(2, 1) * &u.p * &u.q;
        let v2 = &other.q * &other.q * Rat::from_integer(other.r.clone());
        let diff2 = Self::new(u2_p - v2, u2_q, u.r.clone()).expect("radicand non-negative");
        let s2 = diff2.sign();
        let ord = match s2 {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        };
        if su > 0 {
            ord
        } else {
            ord.reverse()
        }
    }

    /// Rational-endpoint enclosure with absolute width about `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> CertInterval {
        if self.q.is_zero() {
            return CertInterval::point(self.p.clone());
        }
        let sqrt_box = CertInterval::sqrt_int(&self.r, bits + 8);
        let q_box = CertInterval::point(self.q.clone());
        let p_box = CertInterval::point(self.p.clone());
        p_box.add(&q_box.mul(&sqrt_box))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", fmt_rat(&self.p))
        } else if self.p.is_zero() {
            write!(f, "{}*sqrt({})", fmt_rat(&self.q), self.r)
        } else {
            write!(f, "{} + {}*sqrt({})", fmt_rat(&self.p), fmt_rat(&self.q), self.r)
        }
    }
}
