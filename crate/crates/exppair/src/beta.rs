//! Piecewise bounds `beta(alpha) <= A + B*alpha` on [0, 1/2], the convex
//! region they carve out in the (alpha, beta) plane, and the dual reading of
//! exponent pairs off the upper chain of that region.
//!
//! A chain segment through consecutive upper-hull vertices is the line
//! `beta = k + (l - k) alpha`, which is the bound an exponent pair (k, l)
//! would give; the segment therefore names the pair (intercept, intercept +
//! slope). Pairs are kept only if they satisfy the exponent-pair region
//! constraints, and are additionally flagged when their line fails to
//! dominate the envelope (which can only happen when the envelope's rows
//! disagree at a junction; see `EnvelopeCheck::discontinuities`).

use num_traits::{Signed, Zero};
use serde_json::Value as Json;
use thiserror::Error;

use crate::catalog::{
    enumerate_known_pairs, transform_a, transform_b, CatalogEntry, ExponentPair, Provenance,
};
use crate::exact::{fmt_rat, parse_rat, rat, ExactError, Rat};
use crate::geometry::{convex_hull, upper_hull, GeometryError, HullPolygon, Point};

#[derive(Debug, Error)]
pub enum BetaError {
    #[error("envelope rows do not cover [0, 1/2]: gap after {0}")]
    CoverageGap(String),
    #[error("row range invalid: [{0}, {1}]")]
    BadRange(String, String),
    #[error("vertical chain segment at alpha = {0}")]
    VerticalSegment(String),
    #[error("chain has fewer than 2 vertices")]
    ChainTooShort,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// One row: `beta(alpha) <= a + b*alpha` for `x <= alpha <= y`.
#[derive(Clone, Debug)]
pub struct BetaBound {
    pub a: Rat,
    pub b: Rat,
    pub x: Rat,
    pub y: Rat,
    pub source: String,
}

impl BetaBound {
    pub fn new(a: Rat, b: Rat, x: Rat, y: Rat, source: &str) -> Result<Self, BetaError> {
        if x >= y || x.is_negative() || y > rat(1, 2) || a.is_negative() {
            return Err(BetaError::BadRange(fmt_rat(&x), fmt_rat(&y)));
        }
        Ok(Self {
            a,
            b,
            x,
            y,
            source: source.to_string(),
        })
    }

    pub fn eval(&self, alpha: &Rat) -> Rat {
        &self.a + &self.b * alpha
    }
}

#[derive(Clone, Debug)]
pub struct BetaEnvelope {
    rows: Vec<BetaBound>,
}

/// Junction diagnostics: rows must abut exactly; where the two sides of a
/// junction disagree in value, the junction is reported rather than trusted.
#[derive(Clone, Debug, Default)]
pub struct EnvelopeCheck {
    pub abuts: bool,
    pub covers_half: bool,
    /// (row index i, alpha, value of row i, value of row i+1) where the two
    /// adjacent rows differ at their shared abscissa.
    pub discontinuities: Vec<(usize, Rat, Rat, Rat)>,
}

impl BetaEnvelope {
    pub fn new(mut rows: Vec<BetaBound>) -> Result<Self, BetaError> {
        rows.sort_by(|p, q| p.x.cmp(&q.x));
        for w in rows.windows(2) {
            if w[0].y != w[1].x {
                return Err(BetaError::CoverageGap(fmt_rat(&w[0].y)));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[BetaBound] {
        &self.rows
    }

    pub fn validate(&self) -> EnvelopeCheck {
        let mut check = EnvelopeCheck {
            abuts: true,
            covers_half: !self.rows.is_empty()
                && self.rows[0].x.is_zero()
                && self.rows.last().unwrap().y == rat(1, 2),
            discontinuities: Vec::new(),
        };
        for (i, w) in self.rows.windows(2).enumerate() {
            let left = w[0].eval(&w[0].y);
            let right = w[1].eval(&w[1].x);
            if left != right {
                check
                    .discontinuities
                    .push((i, w[0].y.clone(), left, right));
            }
        }
        check
    }

    /// Pointwise value: the minimum over all rows whose range contains alpha.
    pub fn eval_min(&self, alpha: &Rat) -> Option<Rat> {
        self.rows
            .iter()
            .filter(|r| &r.x <= alpha && alpha <= &r.y)
            .map(|r| r.eval(alpha))
            .min()
    }

    /// Candidate vertices for the upper chain: the outer endpoints and every
    /// junction at which the adjacent rows agree exactly. A disagreeing
    /// junction pins down no point of the boundary and contributes nothing.
    pub fn chain_candidates(&self) -> Vec<Point> {
        let mut pts = Vec::new();
        let first = &self.rows[0];
        pts.push(Point::new(first.x.clone(), first.eval(&first.x)));
        for w in self.rows.windows(2) {
            let left = w[0].eval(&w[0].y);
            let right = w[1].eval(&w[1].x);
            if left == right {
                pts.push(Point::new(w[0].y.clone(), left));
            }
        }
        let last = self.rows.last().unwrap();
        pts.push(Point::new(last.y.clone(), last.eval(&last.y)));
        pts
    }
}

/// The convex region of admissible (alpha, beta) points and its upper chain.
#[derive(Clone, Debug)]
pub struct BetaHull {
    pub polygon: HullPolygon,
    /// Upper chain, left to right.
    pub chain: Vec<Point>,
}

/// Hull of the region under the envelope: candidate boundary points plus the
/// corner anchors (0, 0) and (1/2, 0).
pub fn envelope_hull(env: &BetaEnvelope) -> Result<BetaHull, BetaError> {
    let mut pts = env.chain_candidates();
    let chain = upper_hull(&pts);
    if chain.len() < 2 {
        return Err(BetaError::ChainTooShort);
    }
    pts.push(Point::new(Rat::zero(), Rat::zero()));
    pts.push(Point::new(rat(1, 2), Rat::zero()));
    let polygon = convex_hull(&pts)?;
    Ok(BetaHull { polygon, chain })
}

#[derive(Clone, Debug)]
pub struct DualPair {
    pub k: Rat,
    pub l: Rat,
    pub segment: (Point, Point),
    /// Passes the exponent-pair region constraints.
    pub kept: bool,
    /// Its line lies weakly above every envelope row (checked exactly at
    /// both endpoints of every row).
    pub dominates: bool,
    /// Matching known pair, if the catalog (or a short transform word
    /// applied to it) already contains this point.
    pub catalog_match: Option<String>,
    pub note: String,
}

impl DualPair {
    pub fn is_new(&self) -> bool {
        self.kept && self.dominates && self.catalog_match.is_none()
    }
}

/// Known points: the catalog plus words of length <= 2 in {A, B} applied to
/// its exact entries.
fn known_point_set(family_cap: u32) -> Vec<(Point, String)> {
    let mut out = Vec::new();
    for e in enumerate_known_pairs(true, family_cap, 64) {
        if let CatalogEntry::Exact(p) = e {
            let words: [(&str, ExponentPair); 6] = [
                ("", p.clone()),
                ("A", transform_a(&p)),
                ("B", transform_b(&p)),
                ("AA", transform_a(&transform_a(&p))),
                ("AB", transform_a(&transform_b(&p))),
                ("BA", transform_b(&transform_a(&p))),
            ];
            for (w, q) in words {
                let tag = if w.is_empty() {
                    q.provenance.to_string()
                } else {
                    format!("{w}({})", p.provenance)
                };
                out.push((q.point(), tag));
            }
        }
    }
    out
}

/// Reads one candidate exponent pair off each chain segment.
pub fn dual_pairs(env: &BetaEnvelope, chain: &[Point]) -> Result<Vec<DualPair>, BetaError> {
    if chain.len() < 2 {
        return Err(BetaError::ChainTooShort);
    }
    let known = known_point_set(100);
    let mut out = Vec::new();
    for w in chain.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        if p.x == q.x {
            return Err(BetaError::VerticalSegment(fmt_rat(&p.x)));
        }
        let slope = (&q.y - &p.y) / (&q.x - &p.x);
        let k = &p.y - &slope * &p.x;
        let l = &k + &slope;
        let kept = ExponentPair::new(k.clone(), l.clone(), true, Provenance::BetaDual).is_ok();
        let dominates = env.rows().iter().all(|row| {
            let line_at = |alpha: &Rat| &k + &slope * alpha;
            line_at(&row.x) >= row.eval(&row.x) && line_at(&row.y) >= row.eval(&row.y)
        });
        let pt = Point::new(k.clone(), l.clone());
        let catalog_match = known
            .iter()
            .find(|(kp, _)| kp == &pt)
            .map(|(_, tag)| tag.clone());
        let note = if !kept {
            "violates exponent-pair region constraints".to_string()
        } else if !dominates {
            "line dips below a printed envelope row".to_string()
        } else {
            String::new()
        };
        out.push(DualPair {
            k,
            l,
            segment: (p.clone(), q.clone()),
            kept,
            dominates,
            catalog_match,
            note,
        });
    }
    Ok(out)
}

/// The published table of sharpest bounds per range (twenty rows covering
/// [0, 1/2]).
pub fn table3_envelope() -> BetaEnvelope {
    let rows: [(&str, &str, &str, &str, &str); 20] = [
        ("13/414", "359/414", "0", "2848/12173", "iterated-A"),
        ("13/318", "253/318", "2848/12173", "161/646", "second-spacing"),
        ("11/492", "107/123", "161/646", "19/74", "second-spacing"),
        ("89/2706", "2243/2706", "19/74", "199/716", "second-spacing"),
        ("29/600", "58/75", "199/716", "967/3428", "second-spacing"),
        ("49/1614", "1351/1614", "967/3428", "120/419", "second-spacing"),
        ("1/66", "235/264", "120/419", "1328/4447", "second-spacing"),
        ("13/194", "139/194", "1328/4447", "104/343", "iterated-A"),
        ("13/146", "47/73", "104/343", "87/275", "second-spacing"),
        ("11/244", "191/244", "87/275", "423/1295", "second-spacing"),
        ("89/1282", "454/641", "423/1295", "227/601", "second-spacing"),
        ("29/280", "173/280", "227/601", "12/31", "second-spacing"),
        ("1/32", "103/128", "12/31", "1508/3825", "second-spacing"),
        ("18/199", "521/796", "1508/3825", "62831/155153", "sargos"),
        ("569/2800", "1053/2800", "62831/155153", "143/349", "third-spacing"),
        ("491/5530", "1812/2765", "143/349", "263/638", "third-spacing"),
        ("113/1345", "897/1345", "263/638", "1673/4038", "third-spacing"),
        ("2/9", "1/3", "1673/4038", "5/12", "decoupling"),
        ("1/12", "2/3", "5/12", "3/7", "decoupling"),
        ("13/84", "1/2", "3/7", "1/2", "decoupling"),
    ];
    let rows = rows
        .iter()
        .map(|(a, b, x, y, src)| {
            BetaBound::new(
                parse_rat(a).unwrap(),
                parse_rat(b).unwrap(),
                parse_rat(x).unwrap(),
                parse_rat(y).unwrap(),
                src,
            )
            .expect("table row well-formed")
        })
        .collect();
    BetaEnvelope::new(rows).expect("table rows abut")
}

/// Parses a custom envelope: a JSON array of {"A", "B", "X", "Y"} rationals.
pub fn envelope_from_json(v: &Json) -> Result<BetaEnvelope, BetaError> {
    let arr = v
        .as_array()
        .ok_or_else(|| BetaError::Exact(ExactError::Parse("envelope: expected array".into())))?;
    let mut rows = Vec::with_capacity(arr.len());
    for item in arr {
        let field = |name: &str| -> Result<Rat, BetaError> {
            let s = item
                .get(name)
                .and_then(Json::as_str)
                .ok_or_else(|| BetaError::Exact(ExactError::Parse(format!("envelope: {name}"))))?;
            Ok(parse_rat(s)?)
        };
        rows.push(BetaBound::new(
            field("A")?,
            field("B")?,
            field("X")?,
            field("Y")?,
            "custom",
        )?);
    }
    BetaEnvelope::new(rows)
}

/// The four exponent pairs this construction is expected to add to the
/// catalog (the chain's middle segments).
pub fn expected_new_pairs() -> Vec<(Rat, Rat)> {
    vec![
        (rat(715, 10238), rat(7955, 10238)),
        (rat(2779, 38033), rat(58699, 76066)),
        (rat(18, 199), rat(593, 796)),
        (rat(4742, 38463), rat(35731, 51284)),
    ]
}

/// The eight upper-chain vertices of the region built from the table.
pub fn expected_chain() -> Vec<Point> {
    let v: [(&str, &str); 8] = [
        ("0", "13/414"),
        ("1328/4447", "2499/8894"),
        ("104/343", "195/686"),
        ("227/601", "405/1202"),
        ("1508/3825", "1333/3825"),
        ("62831/155153", "220633/620612"),
        ("3/7", "31/84"),
        ("1/2", "17/42"),
    ];
    v.iter()
        .map(|(x, y)| Point::new(parse_rat(x).unwrap(), parse_rat(y).unwrap()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows_abut_and_cover() {
        let env = table3_envelope();
        let check = env.validate();
        assert!(check.covers_half);
        // Every junction agrees exactly except the first one, where the
        // printed first-row slope is inconsistent with its own source pair.
        assert_eq!(check.discontinuities.len(), 1);
        assert_eq!(check.discontinuities[0].0, 0);
        assert_eq!(check.discontinuities[0].1, rat(2848, 12173));
    }

    #[test]
    fn chain_matches_published_vertices() {
        let env = table3_envelope();
        let hull = envelope_hull(&env).unwrap();
        assert_eq!(hull.chain, expected_chain());
        assert!(hull.polygon.check_strict_convexity());
    }

    #[test]
    fn duals_contain_exactly_the_four_new_pairs() {
        let env = table3_envelope();
        let hull = envelope_hull(&env).unwrap();
        let duals = dual_pairs(&env, &hull.chain).unwrap();
        assert_eq!(duals.len(), 7);
        let new: Vec<(Rat, Rat)> = duals
            .iter()
            .filter(|d| d.is_new())
            .map(|d| (d.k.clone(), d.l.clone()))
            .collect();
        assert_eq!(new, expected_new_pairs());
    }

    #[test]
    fn known_segments_are_recognized() {
        let env = table3_envelope();
        let hull = envelope_hull(&env).unwrap();
        let duals = dual_pairs(&env, &hull.chain).unwrap();
        // Second segment lies on the A-image of the symmetric pair, the last
        // on the symmetric pair itself.
        assert_eq!((&duals[1].k, &duals[1].l), (&rat(13, 194), &rat(76, 97)));
        assert!(duals[1].catalog_match.is_some());
        assert_eq!((&duals[6].k, &duals[6].l), (&rat(13, 84), &rat(55, 84)));
        assert!(duals[6].catalog_match.is_some());
        // The first segment's chord is not the iterated-A line (the printed
        // first row is off); it must be flagged as non-dominating.
        assert!(!duals[0].dominates);
    }

    #[test]
    fn flat_envelope_dual() {
        let env = BetaEnvelope::new(vec![BetaBound::new(
            rat(1, 2),
            Rat::zero(),
            Rat::zero(),
            rat(1, 2),
            "flat",
        )
        .unwrap()])
        .unwrap();
        let hull = envelope_hull(&env).unwrap();
        assert_eq!(hull.chain.len(), 2);
        let duals = dual_pairs(&env, &hull.chain).unwrap();
        assert_eq!(duals.len(), 1);
        assert_eq!((&duals[0].k, &duals[0].l), (&rat(1, 2), &rat(1, 2)));
        assert!(duals[0].kept && duals[0].dominates);
    }

    #[test]
    fn dominated_piece_leaves_no_vertex() {
        // Second piece dominates the first at their junction: junction
        // disagrees, so only outer endpoints remain.
        let env = BetaEnvelope::new(vec![
            BetaBound::new(rat(3, 10), rat(1, 10), Rat::zero(), rat(1, 4), "low").unwrap(),
            BetaBound::new(rat(1, 2), Rat::zero(), rat(1, 4), rat(1, 2), "high").unwrap(),
        ])
        .unwrap();
        let hull = envelope_hull(&env).unwrap();
        assert_eq!(hull.chain.len(), 2);
        assert_eq!(hull.chain[0], Point::new(Rat::zero(), rat(3, 10)));
        assert_eq!(hull.chain[1], Point::new(rat(1, 2), rat(1, 2)));
    }

    #[test]
    fn gap_is_rejected() {
        let rows = vec![
            BetaBound::new(rat(1, 4), Rat::zero(), Rat::zero(), rat(1, 4), "a").unwrap(),
            BetaBound::new(rat(1, 4), Rat::zero(), rat(3, 8), rat(1, 2), "b").unwrap(),
        ];
        assert!(matches!(
            BetaEnvelope::new(rows),
            Err(BetaError::CoverageGap(_))
        ));
    }

    #[test]
    fn grid_dominance_of_new_pairs() {
        let env = table3_envelope();
        let hull = envelope_hull(&env).unwrap();
        let duals = dual_pairs(&env, &hull.chain).unwrap();
        for d in duals.iter().filter(|d| d.is_new()) {
            let slope = &d.l - &d.k;
            for i in 0..=1000u32 {
                let alpha = rat(i as i64, 2000);
                let line = &d.k + &slope * &alpha;
                let beta0 = env.eval_min(&alpha).unwrap();
                assert!(line >= beta0, "pair {} fails at {}", fmt_rat(&d.k), i);
            }
        }
    }
}
