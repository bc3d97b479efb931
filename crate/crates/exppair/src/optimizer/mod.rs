//! Exact minimization of fractional-linear objectives over a convex polygon
//! under affine constraints.
//!
//! Such an objective is quasilinear on segments wherever its denominator
//! keeps one sign, so the minimum over the (convex) feasible region is
//! attained at one of its extreme points: a polygon vertex, a polygon-edge
//! intersection with a constraint line, or an intersection of two constraint
//! lines inside the polygon. The solver enumerates exactly these candidates
//! and compares exact rationals.

pub mod sweep;
pub mod univariate;

use num_traits::{One, Signed, Zero};
use serde_json::Value as Json;
use thiserror::Error;

use crate::exact::{fmt_rat, parse_rat, rat, ExactError, Rat};
use crate::geometry::{HullPolygon, Point};

#[derive(Debug, Error)]
pub enum OptError {
    #[error("feasible region is empty")]
    Infeasible,
    #[error("objective denominator changes sign over the feasible region: {0}")]
    DenominatorSignChange(String),
    #[error("objective denominator vanishes at feasible point {0}")]
    DenominatorZero(String),
    #[error("strict-boundary infimum has no interior witness")]
    NoInteriorWitness,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("sweep: {0}")]
    Sweep(String),
}

/// `(a k + b l + c) / (d k + e l + f)`.
#[derive(Clone, Debug)]
pub struct FractionalObjective {
    pub num: (Rat, Rat, Rat),
    pub den: (Rat, Rat, Rat),
}

impl FractionalObjective {
    pub fn new(num: (Rat, Rat, Rat), den: (Rat, Rat, Rat)) -> Self {
        Self { num, den }
    }

    /// Affine objective `a k + b l + c` (denominator 1).
    pub fn linear(a: Rat, b: Rat, c: Rat) -> Self {
        Self {
            num: (a, b, c),
            den: (Rat::zero(), Rat::zero(), Rat::one()),
        }
    }

    pub fn num_at(&self, p: &Point) -> Rat {
        &self.num.0 * &p.x + &self.num.1 * &p.y + &self.num.2
    }

    pub fn den_at(&self, p: &Point) -> Rat {
        &self.den.0 * &p.x + &self.den.1 * &p.y + &self.den.2
    }

    pub fn eval(&self, p: &Point) -> Option<Rat> {
        let d = self.den_at(p);
        if d.is_zero() {
            return None;
        }
        Some(self.num_at(p) / d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Rel {
    pub fn parse(s: &str) -> Result<Self, ExactError> {
        Ok(match s {
            ">=" => Rel::Ge,
            ">" => Rel::Gt,
            "<=" => Rel::Le,
            "<" => Rel::Lt,
            "=" | "==" => Rel::Eq,
            _ => return Err(ExactError::Parse(format!("relation {s:?}"))),
        })
    }

    fn is_strict(self) -> bool {
        matches!(self, Rel::Gt | Rel::Lt)
    }
}

/// `g k + h l REL t`.
#[derive(Clone, Debug)]
pub struct AffineConstraint {
    pub g: Rat,
    pub h: Rat,
    pub t: Rat,
    pub rel: Rel,
}

impl AffineConstraint {
    pub fn new(g: Rat, h: Rat, t: Rat, rel: Rel) -> Self {
        assert!(!(g.is_zero() && h.is_zero()), "degenerate constraint");
        Self { g, h, t, rel }
    }

    pub fn lhs_minus_rhs(&self, p: &Point) -> Rat {
        &self.g * &p.x + &self.h * &p.y - &self.t
    }

    /// Satisfaction with strict relations relaxed to their closures.
    pub fn satisfied_closed(&self, p: &Point) -> bool {
        let v = self.lhs_minus_rhs(p);
        match self.rel {
            Rel::Ge | Rel::Gt => !v.is_negative(),
            Rel::Le | Rel::Lt => !v.is_positive(),
            Rel::Eq => v.is_zero(),
        }
    }

    pub fn satisfied(&self, p: &Point) -> bool {
        let v = self.lhs_minus_rhs(p);
        match self.rel {
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
            Rel::Le => !v.is_positive(),
            Rel::Lt => v.is_negative(),
            Rel::Eq => v.is_zero(),
        }
    }

    pub fn describe(&self) -> String {
        let rel = match self.rel {
            Rel::Ge => ">=",
            Rel::Gt => ">",
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
        };
        format!(
            "{}*k + {}*l {} {}",
            fmt_rat(&self.g),
            fmt_rat(&self.h),
            rel,
            fmt_rat(&self.t)
        )
    }
}

/// Where a candidate optimum came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateKind {
    /// Polygon vertex by index.
    Vertex(usize),
    /// Polygon edge (i, i+1) intersected with constraint j.
    EdgeConstraint { edge: usize, constraint: usize },
    /// Intersection of two constraint lines, inside the polygon.
    ConstraintPair(usize, usize),
}

#[derive(Clone, Debug)]
pub struct CandidateEval {
    pub kind: CandidateKind,
    pub point: Point,
    pub value: Rat,
}

/// Outcome for a strict constraint active at the closed-region minimizer:
/// the minimum is an infimum, approached by interior points.
#[derive(Clone, Debug)]
pub struct StrictBoundary {
    pub active_constraints: Vec<usize>,
    pub witness: Point,
    pub witness_value: Rat,
}

#[derive(Clone, Debug)]
pub struct Optimum {
    pub value: Rat,
    pub argmin: Point,
    pub kind: CandidateKind,
    /// Hull edge the argmin lies on, when it is not a vertex.
    pub active_edge: Option<(usize, usize)>,
    pub certificate: Vec<CandidateEval>,
    /// Present when a strict constraint is tight at the argmin; the reported
    /// value is then the infimum over the open region.
    pub strict_boundary: Option<StrictBoundary>,
}

pub(crate) fn edge_line_intersection(
    u: &Point,
    v: &Point,
    g: &Rat,
    h: &Rat,
    t: &Rat,
) -> Option<Point> {
    let du = g * &u.x + h * &u.y;
    let dv = g * &v.x + h * &v.y;
    let denom = &dv - &du;
    if denom.is_zero() {
        return None;
    }
    let s = (t - &du) / &denom;
    if s.is_negative() || s > Rat::one() {
        return None;
    }
    Some(Point::new(
        &u.x + &s * (&v.x - &u.x),
        &u.y + &s * (&v.y - &u.y),
    ))
}

pub(crate) fn line_line_intersection(c1: &AffineConstraint, c2: &AffineConstraint) -> Option<Point> {
    let det = &c1.g * &c2.h - &c2.g * &c1.h;
    if det.is_zero() {
        return None;
    }
    let x = (&c1.t * &c2.h - &c2.t * &c1.h) / &det;
    let y = (&c1.g * &c2.t - &c2.g * &c1.t) / &det;
    Some(Point::new(x, y))
}

fn collect_candidates(
    poly: &HullPolygon,
    constraints: &[AffineConstraint],
) -> Vec<(CandidateKind, Point)> {
    let verts = poly.vertices();
    let n = verts.len();
    let feasible_closed =
        |p: &Point| constraints.iter().all(|c| c.satisfied_closed(p));
    let mut out = Vec::new();
    for (i, v) in verts.iter().enumerate() {
        if feasible_closed(v) {
            out.push((CandidateKind::Vertex(i), v.clone()));
        }
    }
    for (j, c) in constraints.iter().enumerate() {
        for i in 0..n {
            let u = &verts[i];
            let v = &verts[(i + 1) % n];
            if let Some(p) = edge_line_intersection(u, v, &c.g, &c.h, &c.t) {
                if feasible_closed(&p) {
                    out.push((CandidateKind::EdgeConstraint { edge: i, constraint: j }, p));
                }
            }
        }
    }
    for j1 in 0..constraints.len() {
        for j2 in (j1 + 1)..constraints.len() {
            if let Some(p) = line_line_intersection(&constraints[j1], &constraints[j2]) {
                if poly.contains(&p, true) && feasible_closed(&p) {
                    out.push((CandidateKind::ConstraintPair(j1, j2), p));
                }
            }
        }
    }
    out
}

/// Exact global minimum of `obj` over `poly` intersected with `constraints`.
///
/// Strict constraints are solved through their closures; if one is tight at
/// the minimizer, the result value is the infimum over the open region and a
/// strictly feasible witness within `strict_eps` of it is exhibited.
pub fn minimize(
    poly: &HullPolygon,
    obj: &FractionalObjective,
    constraints: &[AffineConstraint],
    strict_eps: Option<Rat>,
) -> Result<Optimum, OptError> {
    let candidates = collect_candidates(poly, constraints);
    if candidates.is_empty() {
        return Err(OptError::Infeasible);
    }

    // Denominator must keep one sign across the feasible region's extreme
    // points (hence, by convexity, across the whole region).
    let mut sign = 0i8;
    for (_, p) in &candidates {
        let d = obj.den_at(p);
        if d.is_zero() {
            return Err(OptError::DenominatorZero(p.describe()));
        }
        let s = if d.is_positive() { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if sign != s {
            return Err(OptError::DenominatorSignChange(p.describe()));
        }
    }

    let mut evals: Vec<CandidateEval> = candidates
        .into_iter()
        .map(|(kind, point)| {
            let value = obj.eval(&point).expect("denominator checked nonzero");
            CandidateEval { kind, point, value }
        })
        .collect();
    evals.sort_by(|a, b| a.value.cmp(&b.value));
    let best = evals[0].clone();

    let active_strict: Vec<usize> = constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.rel.is_strict() && c.lhs_minus_rhs(&best.point).is_zero())
        .map(|(j, _)| j)
        .collect();

    let strict_boundary = if active_strict.is_empty() {
        None
    } else {
        let eps = strict_eps.unwrap_or_else(|| rat(1, 1_000_000));
        Some(strict_witness(&evals, &best, constraints, &eps, obj)?)
    };

    let active_edge = match best.kind {
        CandidateKind::EdgeConstraint { edge, .. } => {
            Some((edge, (edge + 1) % poly.len()))
        }
        _ => None,
    };

    Ok(Optimum {
        value: best.value.clone(),
        argmin: best.point.clone(),
        kind: best.kind.clone(),
        active_edge,
        certificate: evals,
        strict_boundary,
    })
}

/// Walks from the boundary minimizer toward a strictly feasible candidate,
/// halving the (exact rational) step until the value is within `eps` of the
/// infimum.
fn strict_witness(
    evals: &[CandidateEval],
    best: &CandidateEval,
    constraints: &[AffineConstraint],
    eps: &Rat,
    obj: &FractionalObjective,
) -> Result<StrictBoundary, OptError> {
    let strictly_feasible = |p: &Point| constraints.iter().all(|c| c.satisfied(p));
    let target = evals.iter().find(|e| strictly_feasible(&e.point));
    let target = match target {
        Some(t) => t,
        None => return Err(OptError::NoInteriorWitness),
    };
    let mut step = Rat::one();
    loop {
        let p = Point::new(
            &best.point.x + &step * (&target.point.x - &best.point.x),
            &best.point.y + &step * (&target.point.y - &best.point.y),
        );
        if strictly_feasible(&p) {
            if let Some(v) = obj.eval(&p) {
                if &v - &best.value <= *eps {
                    let active = constraints
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| {
                            c.rel.is_strict() && c.lhs_minus_rhs(&best.point).is_zero()
                        })
                        .map(|(j, _)| j)
                        .collect();
                    return Ok(StrictBoundary {
                        active_constraints: active,
                        witness: p,
                        witness_value: v,
                    });
                }
            }
        }
        step /= rat(2, 1);
        if step < rat(1, 1i64 << 62) {
            return Err(OptError::NoInteriorWitness);
        }
    }
}

/// Parses the objective/constraint JSON:
/// `{"num": ["a","b","c"], "den": ["d","e","f"], "constraints": [...]}`.
pub fn objective_from_json(v: &Json) -> Result<(FractionalObjective, Vec<AffineConstraint>), ExactError> {
    let triple = |key: &str| -> Result<(Rat, Rat, Rat), ExactError> {
        let arr = v
            .get(key)
            .and_then(Json::as_array)
            .filter(|a| a.len() == 3)
            .ok_or_else(|| ExactError::Parse(format!("objective: {key} must be a 3-array")))?;
        let mut it = arr.iter().map(|x| parse_rat(x.as_str().unwrap_or_default()));
        Ok((it.next().unwrap()?, it.next().unwrap()?, it.next().unwrap()?))
    };
    let num = triple("num")?;
    let den = if v.get("den").is_some() {
        triple("den")?
    } else {
        (Rat::zero(), Rat::zero(), Rat::one())
    };
    let mut constraints = Vec::new();
    if let Some(arr) = v.get("constraints").and_then(Json::as_array) {
        for c in arr {
            let field = |name: &str| -> Result<Rat, ExactError> {
                parse_rat(
                    c.get(name)
                        .and_then(Json::as_str)
                        .ok_or_else(|| ExactError::Parse(format!("constraint: {name}")))?,
                )
            };
            let rel = Rel::parse(
                c.get("rel")
                    .and_then(Json::as_str)
                    .ok_or_else(|| ExactError::Parse("constraint: rel".into()))?,
            )?;
            constraints.push(AffineConstraint::new(
                field("g")?,
                field("h")?,
                field("t")?,
                rel,
            ));
        }
    }
    Ok((FractionalObjective::new(num, den), constraints))
}
