//! Certified one-dimensional minimization by interval branch-and-bound.

use num_traits::Signed;

use crate::exact::{CertInterval, ExactError, QuadraticSurd, Rat};

/// One-variable expression with rational-exponent powers.
#[derive(Clone, Debug)]
pub enum Expr {
    Var,
    Const(Rat),
    /// Exact irrational constant, boxed on evaluation.
    SurdConst(QuadraticSurd),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rat),
    Log(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn c(x: Rat) -> Expr {
        Expr::Const(x)
    }

    pub fn eval_interval(&self, x: &CertInterval, bits: u32) -> Result<CertInterval, ExactError> {
        Ok(match self {
            Expr::Var => x.clone(),
            Expr::Const(c) => CertInterval::point(c.clone()),
            Expr::SurdConst(s) => s.enclosure(bits),
            Expr::Add(a, b) => a.eval_interval(x, bits)?.add(&b.eval_interval(x, bits)?),
            Expr::Sub(a, b) => a.eval_interval(x, bits)?.sub(&b.eval_interval(x, bits)?),
            Expr::Mul(a, b) => a.eval_interval(x, bits)?.mul(&b.eval_interval(x, bits)?),
            Expr::Div(a, b) => a.eval_interval(x, bits)?.div(&b.eval_interval(x, bits)?)?,
            Expr::Pow(a, e) => a.eval_interval(x, bits)?.pow_rat(e, bits)?,
            Expr::Log(a) => a.eval_interval(x, bits)?.log(bits)?,
            Expr::Exp(a) => a.eval_interval(x, bits)?.exp(bits),
        })
    }
}

#[derive(Clone, Debug)]
pub struct UnivariateMin {
    /// Enclosure of the global minimum value, width at most the tolerance.
    pub value: CertInterval,
    /// Hull of all argument boxes that can still contain a minimizer.
    pub argmin: CertInterval,
    pub boxes_examined: usize,
}

/// Branch-and-bound minimization of `f` on `[lo, hi]`: subdivide, bound each
/// box by interval evaluation, prune boxes whose lower bound exceeds the best
/// certified upper bound, stop when the enclosure is tighter than `tol`.
pub fn minimize_univariate(
    f: &Expr,
    lo: Rat,
    hi: Rat,
    tol: &Rat,
    bits: u32,
) -> Result<UnivariateMin, ExactError> {
    if lo >= hi || !tol.is_positive() {
        return Err(ExactError::EmptyInterval);
    }
    let full = CertInterval::new(lo, hi)?;
    let mut work = vec![full.clone()];
    let mut examined = 0usize;
    // Certified upper bound from point evaluations (None until one works).
    let mut best_hi: Option<CertInterval> =
        f.eval_interval(&CertInterval::point(full.midpoint()), bits).ok();

    for _round in 0..64 {
        // Interval evaluation can fail on wide boxes (a denominator
        // enclosure straddling zero); such boxes are unprunable and are
        // simply split further.
        let mut bounds: Vec<(CertInterval, Option<CertInterval>)> = Vec::with_capacity(work.len());
        for b in &work {
            examined += 1;
            bounds.push((b.clone(), f.eval_interval(b, bits).ok()));
        }
        for (b, _) in &bounds {
            if let Ok(probe) = f.eval_interval(&CertInterval::point(b.midpoint()), bits) {
                if best_hi.as_ref().map(|bh| probe.hi() < bh.hi()).unwrap_or(true) {
                    best_hi = Some(probe);
                }
            }
        }
        let all_bounded = bounds.iter().all(|(_, fb)| fb.is_some());
        if let (true, Some(bh)) = (all_bounded, &best_hi) {
            let global_lo = bounds
                .iter()
                .map(|(_, fb)| fb.as_ref().unwrap().lo().clone())
                .min()
                .expect("nonempty work set");
            let survivors: Vec<CertInterval> = bounds
                .iter()
                .filter(|(_, fb)| fb.as_ref().unwrap().lo() <= bh.hi())
                .map(|(b, _)| b.clone())
                .collect();
            let value_width = bh.hi() - &global_lo;
            if &value_width <= tol {
                let argmin = survivors
                    .iter()
                    .skip(1)
                    .fold(survivors[0].clone(), |acc, b| acc.join(b));
                let value = CertInterval::new(global_lo, bh.hi().clone())?;
                return Ok(UnivariateMin {
                    value,
                    argmin,
                    boxes_examined: examined,
                });
            }
            work = survivors;
        } else {
            work = bounds.into_iter().map(|(b, _)| b).collect();
        }
        work = work
            .into_iter()
            .flat_map(|b| {
                let m = b.midpoint();
                [
                    CertInterval::new(b.lo().clone(), m.clone()).unwrap(),
                    CertInterval::new(m, b.hi().clone()).unwrap(),
                ]
            })
            .collect();
    }
    Err(ExactError::Parse(
        "branch-and-bound failed to converge".into(),
    ))
}
