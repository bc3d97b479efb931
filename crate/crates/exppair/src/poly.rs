//! Dense univariate polynomials over the rationals, and ratios of them.
//!
//! Just enough symbolic machinery to state and compare the piecewise bounds:
//! arithmetic, exact evaluation (including at quadratic surds), Euclidean gcd
//! for reduced display, and cross-multiplied equality of rational functions.

use num_traits::{One, Signed, Zero};

use crate::exact::{fmt_rat, ExactError, QuadraticSurd, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1 x`
    pub fn affine(c0: Rat, c1: Rat) -> Self {
        Poly::new(vec![c0, c1])
    }

    fn trim(&mut self) {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_surd(&self, x: &QuadraticSurd) -> Result<QuadraticSurd, ExactError> {
        let mut acc = QuadraticSurd::from_rat(Rat::zero());
        for c in self.0.iter().rev() {
            acc = acc.mul(x)?.add_rat(c);
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Euclidean remainder; divisor must be nonzero.
    fn rem(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero());
        let mut r = self.clone();
        let d_lead = divisor.0.last().unwrap().clone();
        while !r.is_zero() && r.degree() >= divisor.degree() {
            let shift = r.degree() - divisor.degree();
            let factor = r.0.last().unwrap() / &d_lead;
            for (i, c) in divisor.0.iter().enumerate() {
                let v = c * &factor;
                r.0[i + shift] -= v;
            }
            r.trim();
        }
        r
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        // Monic normal form.
        let lead = a.0.last().unwrap().clone();
        a.scale(&lead.recip())
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => fmt_rat(c),
                _ => {
                    let pow = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if c.is_one() {
                        pow
                    } else if *c == -Rat::one() {
                        format!("-{pow}")
                    } else {
                        format!("{}*{}", fmt_rat(c), pow)
                    }
                }
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (i, t) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(stripped) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        out
    }
}

/// Ratio of two polynomials; equality is cross-multiplied, so representations
/// need not be reduced.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator polynomial");
        Self { num, den }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(Poly::constant(c), Poly::constant(Rat::one()))
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn eq_func(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&Self::new(other.num.neg(), other.den.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.num.is_zero());
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    /// Reduced form: divide by the polynomial gcd and clear to a canonical
    /// sign/scaling (integer-primitive denominator with positive leading term).
    pub fn reduced(&self) -> Self {
        if self.num.is_zero() {
            return Self::new(Poly::zero(), Poly::constant(Rat::one()));
        }
        let g = self.num.gcd(&self.den);
        let (mut num, mut den) = if g.is_zero() || g.degree() == 0 {
            (self.num.clone(), self.den.clone())
        } else {
            (div_exact(&self.num, &g), div_exact(&self.den, &g))
        };
        // Scale so the denominator has integer coprime coefficients and a
        // positive leading coefficient.
        let mut mult = Rat::one();
        for c in den.coeffs() {
            mult = lcm_rat(&mult, &Rat::from_integer(c.denom().clone()));
        }
        num = num.scale(&mult);
        den = den.scale(&mult);
        let mut content = num_bigint::BigInt::zero();
        for c in den.coeffs().iter().chain(num.coeffs()) {
            content = num_integer::Integer::gcd(&content, c.numer());
        }
        if !content.is_zero() && content != num_bigint::BigInt::one() {
            let inv = Rat::new(num_bigint::BigInt::one(), content);
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.coeffs().last().map(|c| c.is_negative()).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        Self::new(num, den)
    }

    pub fn render(&self, var: &str) -> (String, String) {
        let r = self.reduced();
        (r.num.render(var), r.den.render(var))
    }
}

fn lcm_rat(a: &Rat, b: &Rat) -> Rat {
    // Both are integers here.
    Rat::from_integer(num_integer::Integer::lcm(a.numer(), b.numer()))
}

fn div_exact(num: &Poly, den: &Poly) -> Poly {
    // Exact polynomial division (remainder known to be zero).
    let mut r = num.clone();
    let mut q = vec![Rat::zero(); num.degree() - den.degree() + 1];
    let d_lead = den.coeffs().last().unwrap().clone();
    while !r.is_zero() && r.degree() >= den.degree() {
        let shift = r.degree() - den.degree();
        let factor = r.coeffs().last().unwrap() / &d_lead;
        q[shift] = factor.clone();
        let mut coeffs = r.0;
        for (i, c) in den.coeffs().iter().enumerate() {
            let v = c * &factor;
            coeffs[i + shift] -= v;
        }
        r = Poly::new(coeffs);
    }
    assert!(r.is_zero(), "non-exact polynomial division");
    Poly::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn eval_and_arith() {
        // (1 + 2x)(3 - x) = 3 + 5x - 2x^2
        let p = Poly::affine(rat(1, 1), rat(2, 1));
        let q = Poly::affine(rat(3, 1), rat(-1, 1));
        let prod = p.mul(&q);
        assert_eq!(
            prod,
            Poly::new(vec![rat(3, 1), rat(5, 1), rat(-2, 1)])
        );
        assert_eq!(prod.eval(&rat(2, 1)), rat(5, 1));
    }

    #[test]
    fn ratfunc_equality_cross_multiplied() {
        let a = RatFunc::new(
            Poly::affine(rat(31, 1), rat(-36, 1)),
            Poly::constant(rat(84, 1)),
        );
        let b = RatFunc::new(
            Poly::affine(rat(62, 1), rat(-72, 1)),
            Poly::constant(rat(168, 1)),
        );
        assert!(a.eq_func(&b));
        let c = RatFunc::new(
            Poly::affine(rat(31, 1), rat(-36, 1)),
            Poly::constant(rat(85, 1)),
        );
        assert!(!a.eq_func(&c));
    }

    #[test]
    fn reduction_cancels_common_factor() {
        // (x^2 - 1)/(x - 1) reduces to x + 1.
        let num = Poly::new(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let den = Poly::affine(rat(-1, 1), rat(1, 1));
        let r = RatFunc::new(num, den).reduced();
        assert_eq!(r.num, Poly::affine(rat(1, 1), rat(1, 1)));
        assert_eq!(r.den, Poly::constant(rat(1, 1)));
    }

    #[test]
    fn render_readable() {
        let f = RatFunc::new(
            Poly::affine(rat(31, 1), rat(-36, 1)),
            Poly::constant(rat(84, 1)),
        );
        let (n, d) = f.render("s");
        assert_eq!(n, "31 - 36*s");
        assert_eq!(d, "84");
    }
}
