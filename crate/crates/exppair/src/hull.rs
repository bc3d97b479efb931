//! The convex hull H of known exponent pairs: its two-sided vertex
//! recursion, finite truncations H_N, and the verification suite
//! (convexity slopes, closure under the A and C transforms, containment
//! of every cataloged pair).

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::catalog::{
    self, apply_transform, bi_thetas, derivative_test_pairs, hb_family_pair, hb_log_family_box,
    huxley_family_pair, sporadic_pairs, transform_a, transform_b, CatalogEntry, ExponentPair,
    Provenance, TransformOp,
};
use crate::exact::{fmt_rat, parse_rat, rat, rat_int, CertInterval, ExactError, Rat};
use crate::geometry::{HullPolygon, Point};
use crate::report::Report;

/// Lower-left chain vertex `(k_n, l_n)`.
///
/// Indices 0..=4 are the base pairs, 5..=8 their images under A, n >= 9 the
/// tail family `(2/((m-1)^2(m+2)), 1 - (3m-2)/(m(m-1)(m+2)))` with m = n - 4,
/// and negative indices the reflections under B.
pub fn vertex(n: i64) -> ExponentPair {
    if n < 0 {
        let mut p = transform_b(&vertex(-n));
        p.provenance = Provenance::HullVertex(n);
        return p;
    }
    let (k, l) = match n {
        0 => (rat(13, 84), rat(55, 84)),
        1 => (rat(4742, 38463), rat(35731, 51284)),
        2 => (rat(18, 199), rat(593, 796)),
        3 => (rat(2779, 38033), rat(58699, 76066)),
        4 => (rat(715, 10238), rat(7955, 10238)),
        5..=8 => {
            let base = vertex(n - 4);
            let img = transform_a(&base);
            (img.k, img.l)
        }
        _ => {
            let p = hb_family_pair((n - 4) as u32);
            (p.k, p.l)
        }
    };
    ExponentPair::new(k, l, true, Provenance::HullVertex(n)).expect("hull vertex in region")
}

/// Slope of the chain edge from `(k_n, l_n)` to `(k_{n+1}, l_{n+1})`.
pub fn chain_slope(n: i64) -> Rat {
    let p = vertex(n);
    let q = vertex(n + 1);
    (&q.l - &p.l) / (&q.k - &p.k)
}

/// Closed form `-(n-5)(n-4)/(n-3)` for the tail slopes, valid for n >= 9.
pub fn chain_slope_closed_form(n: i64) -> Rat {
    assert!(n >= 9);
    -(rat_int(n - 5) * rat_int(n - 4)) / rat_int(n - 3)
}

/// One polygon edge with denominators cleared: the inner side is
/// `a x + b y >= c` over integers.
struct IntEdge {
    a: num_bigint::BigInt,
    b: num_bigint::BigInt,
    c: num_bigint::BigInt,
}

/// Finite truncation H_N: the convex polygon on
/// `{(k_n, l_n) : |n| <= N}` plus the two anchors (0, 1) and (1/2, 1/2).
pub struct HullH {
    n: u32,
    polygon: HullPolygon,
    /// Integerized edges; membership through these avoids per-query
    /// rational normalization.
    int_edges: Vec<IntEdge>,
}

/// CCW vertex order: (0, 1), then the chain from p_N down to p_-N
/// (k increasing), then (1/2, 1/2).
pub fn build_hull(n: u32) -> HullH {
    assert!(n >= 10, "truncation index too small");
    let n_i = n as i64;
    let mut vertices = Vec::with_capacity(2 * n as usize + 3);
    vertices.push(Point::new(Rat::zero(), Rat::one()));
    for m in (-n_i..=n_i).rev() {
        vertices.push(vertex(m).point());
    }
    vertices.push(Point::new(rat(1, 2), rat(1, 2)));
    HullH::from_polygon(n, HullPolygon::from_ccw_vertices(vertices))
}

impl HullH {
    fn from_polygon(n: u32, polygon: HullPolygon) -> Self {
        let int_edges = polygon
            .edges(false)
            .into_iter()
            .map(|e| {
                let scale = Rat::from_integer(num_integer::Integer::lcm(
                    &num_integer::Integer::lcm(e.a.denom(), e.b.denom()),
                    e.c.denom(),
                ));
                IntEdge {
                    a: (&e.a * &scale).to_integer(),
                    b: (&e.b * &scale).to_integer(),
                    c: (&e.c * &scale).to_integer(),
                }
            })
            .collect();
        Self {
            n,
            polygon,
            int_edges,
        }
    }

    pub fn truncation_index(&self) -> u32 {
        self.n
    }

    pub fn polygon(&self) -> &HullPolygon {
        &self.polygon
    }

    pub fn contains_point(&self, p: &Point, closed: bool) -> bool {
        // a(xn yd) + b(yn xd) >= c(xd yd) over the positive common
        // denominator, entirely in integers.
        let t1 = p.x.numer() * p.y.denom();
        let t2 = p.y.numer() * p.x.denom();
        let t3 = p.x.denom() * p.y.denom();
        self.int_edges.iter().all(|e| {
            let lhs = &e.a * &t1 + &e.b * &t2;
            let rhs = &e.c * &t3;
            if closed {
                lhs >= rhs
            } else {
                lhs > rhs
            }
        })
    }

    pub fn contains_pair(&self, p: &ExponentPair, closed: bool) -> bool {
        self.contains_point(&p.point(), closed)
    }

    /// Membership for a rectangle of uncertainty: each edge constraint is
    /// evaluated at its own worst corner, so a `true` is a certificate for
    /// every point in the box.
    pub fn contains_box(
        &self,
        k: &CertInterval,
        l: &CertInterval,
        skip_top_edge: bool,
        closed: bool,
    ) -> bool {
        use num_traits::Signed as _;
        let last = self.int_edges.len() - 1;
        self.int_edges.iter().enumerate().all(|(i, e)| {
            if skip_top_edge && i == last {
                return true;
            }
            // Worst corner: the coefficient sign picks which endpoint
            // minimizes its term.
            let kx = if e.a.is_negative() { k.hi() } else { k.lo() };
            let lx = if e.b.is_negative() { l.hi() } else { l.lo() };
            let lhs = &e.a * (kx.numer() * lx.denom()) + &e.b * (lx.numer() * kx.denom());
            let rhs = &e.c * (kx.denom() * lx.denom());
            if closed {
                lhs >= rhs
            } else {
                lhs > rhs
            }
        })
    }

    /// Containment of the `log m` family member. The top-edge constraint
    /// `k + l <= 1` holds symbolically: the two log terms share a
    /// denominator, leaving the rational factor (3 - m) <= 0. In particular
    /// the m = 3 member sits exactly on that edge, so strict membership
    /// fails for it by construction. The chain edges use interval boxes.
    pub fn contains_hb_log_member(&self, m: u32, bits: u32, closed: bool) -> bool {
        if m < 3 || (!closed && m == 3) {
            return false;
        }
        let (k, l) = hb_log_family_box(m, bits);
        self.contains_box(&k, &l, true, closed)
    }

    pub fn contains_entry(&self, entry: &CatalogEntry, bits: u32, closed: bool) -> bool {
        match entry {
            CatalogEntry::Exact(p) => self.contains_pair(p, closed),
            CatalogEntry::Boxed { provenance, .. } => match provenance {
                Provenance::HbLogFamily(m) => self.contains_hb_log_member(*m, bits, closed),
                _ => {
                    if let CatalogEntry::Boxed { k, l, .. } = entry {
                        self.contains_box(k, l, false, closed)
                    } else {
                        unreachable!()
                    }
                }
            },
        }
    }

    pub fn to_json(&self) -> Json {
        json!({
            "n": self.n,
            "vertices": self.polygon.vertices().iter()
                .map(|v| json!([fmt_rat(&v.x), fmt_rat(&v.y)]))
                .collect::<Vec<_>>(),
        })
    }
}

/// Reads a polygon back from the `{"n": .., "vertices": [[..]]}` form.
pub fn hull_from_json(v: &Json) -> Result<HullH, ExactError> {
    let n = v
        .get("n")
        .and_then(Json::as_u64)
        .ok_or_else(|| ExactError::Parse("hull json: missing n".into()))? as u32;
    let verts = v
        .get("vertices")
        .and_then(Json::as_array)
        .ok_or_else(|| ExactError::Parse("hull json: missing vertices".into()))?;
    let mut points = Vec::with_capacity(verts.len());
    for pair in verts {
        let arr = pair
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| ExactError::Parse("hull json: vertex shape".into()))?;
        let x = parse_rat(arr[0].as_str().unwrap_or_default())?;
        let y = parse_rat(arr[1].as_str().unwrap_or_default())?;
        points.push(Point::new(x, y));
    }
    Ok(HullH::from_polygon(n, HullPolygon::from_ccw_vertices(points)))
}

/// Convexity of the chain: slopes are negative, strictly decreasing, start
/// at or below -1, and match the closed form on the tail.
pub fn check_convexity_slopes(n_max: i64) -> Report {
    assert!(n_max >= 9);
    let mut report = Report::new(format!("chain slopes up to n = {n_max}"));
    let q0 = chain_slope(0);
    report.check(
        "Q_0 <= -1",
        q0 <= rat_int(-1),
        format!("Q_0 = {}", fmt_rat(&q0)),
    );
    let mut prev = None;
    for n in 0..=n_max {
        let q = chain_slope(n);
        report.check(
            format!("Q_{n} < 0"),
            q.is_negative(),
            format!("Q_{n} = {}", fmt_rat(&q)),
        );
        if let Some(p) = prev {
            report.check(
                format!("Q_{n} < Q_{}", n - 1),
                q < p,
                format!("{} < {}", fmt_rat(&q), fmt_rat(&p)),
            );
        }
        if n >= 9 {
            let cf = chain_slope_closed_form(n);
            report.check(
                format!("closed form at n = {n}"),
                q == cf,
                format!("direct {} vs -(n-5)(n-4)/(n-3) = {}", fmt_rat(&q), fmt_rat(&cf)),
            );
        }
        prev = Some(q);
    }
    report
}

fn in_hull_line(hull: &HullH, tag: &str, p: &Point, report: &mut Report) {
    report.check(
        format!("{tag} in H_{}", hull.truncation_index()),
        hull.contains_point(p, true),
        p.describe(),
    );
}

/// Closure of H under a transform: images of all vertices `|m| < m_bound`
/// must land back inside H_N.
pub fn verify_closure(op: TransformOp, m_bound: i64, n: u32) -> Report {
    assert!(n >= 100);
    let hull = build_hull(n);
    let mut report = Report::new(format!("closure of H_{n} under {op}"));
    let results: Vec<(i64, ExponentPair, bool)> = (-(m_bound - 1)..m_bound)
        .into_par_iter()
        .map(|m| {
            let img = apply_transform(&op, &vertex(m));
            let ok = hull.contains_pair(&img, true);
            (m, img, ok)
        })
        .collect();
    for (m, img, ok) in results {
        report.check(
            format!("{op}(k_{m}, l_{m}) in H_{n}"),
            ok,
            img.describe(),
        );
    }
    report.merge(check_transform_edge_inequality(&op, &[100, 101, 150, 1000]));
    report
}

/// Locates the chain index N with `k_{N+1} < k <= k_N` by bisection on the
/// strictly decreasing k-coordinates.
pub fn bracket_chain_index(k: &Rat, search_bound: i64) -> Option<i64> {
    let (mut lo, mut hi) = (-search_bound, search_bound);
    if *k > vertex(lo).k || *k <= vertex(hi).k {
        return None;
    }
    // Invariant: k_(lo) >= k > k_(hi).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if vertex(mid).k >= *k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Samples of the tail inequality used beyond the computational range of the
/// closure check: the transformed vertex must lie weakly above the chain
/// edge that brackets its k-coordinate, and strictly below k + l = 1.
pub fn check_transform_edge_inequality(op: &TransformOp, sample_ms: &[i64]) -> Report {
    let mut report = Report::new(format!("tail edge inequality under {op}"));
    for &mm in sample_ms {
        for m in [mm, -mm] {
            let img = apply_transform(op, &vertex(m));
            let nn = match bracket_chain_index(&img.k, 4 * mm.abs().max(100) + 100) {
                Some(v) => v,
                None => {
                    report.check(
                        format!("bracket {op}(k_{m}, l_{m})"),
                        false,
                        "no bracketing chain edge found".to_string(),
                    );
                    continue;
                }
            };
            let pn = vertex(nn);
            let pn1 = vertex(nn + 1);
            let lhs = &img.k * (&pn1.l - &pn.l) + &img.l * (&pn.k - &pn1.k);
            let rhs = &pn.k * &pn1.l - &pn.l * &pn1.k;
            report.check(
                format!("{op}(k_{m}, l_{m}) above edge ({nn}, {})", nn + 1),
                lhs >= rhs,
                format!("lhs - rhs = {}", fmt_rat(&(&lhs - &rhs))),
            );
            report.check(
                format!("{op}(k_{m}, l_{m}) below k + l = 1"),
                &img.k + &img.l < Rat::one(),
                format!("k + l = {}", fmt_rat(&(&img.k + &img.l))),
            );
        }
    }
    report
}

/// Containment of the full catalog in H_N, plus the finite samples of the
/// region argument that covers the `log m` family beyond the cap.
///
/// `closed` selects boundary-inclusive membership (the program convention);
/// strict mode checks the open interior, where pairs that are themselves
/// hull vertices fail by construction.
pub fn verify_containment(n: u32, family_cap: u32, bits: u32, closed: bool) -> Report {
    assert!(n >= 300);
    let hull = build_hull(n);
    let mode = if closed { "closed" } else { "strict" };
    let mut report = Report::new(format!("containment of known pairs in H_{n} ({mode})"));
    let entries = catalog::enumerate_known_pairs(true, family_cap, bits);
    let results: Vec<(String, bool, String)> = entries
        .par_iter()
        .map(|e| {
            (
                e.provenance().to_string(),
                hull.contains_entry(e, bits, closed),
                e.describe(),
            )
        })
        .collect();
    for (tag, ok, desc) in results {
        report.check(tag, ok, desc);
    }
    for m in [101u32, 102, 150, 1000] {
        report.merge(region_r_sample(m, bits));
    }
    report
}

/// Finite sample of the tail argument for the `log m` family: after cubing,
/// `a_m^{2/3} + b_m > 1` reduces to `25 m^2 log m > (m - 2)^2`, checked with
/// a certified lower bound for the log.
fn region_r_sample(m: u32, bits: u32) -> Report {
    let mut report = Report::new(String::new());
    let log_m = CertInterval::point(rat_int(m as i64))
        .log(bits)
        .expect("m > 100");
    let lhs_lo = rat_int(25) * rat_int(m as i64) * rat_int(m as i64) * log_m.lo();
    let rhs = rat_int(m as i64 - 2) * rat_int(m as i64 - 2);
    report.check(
        format!("region inequality a_m^(2/3) + b_m > 1 at m = {m}"),
        lhs_lo > rhs,
        format!("25 m^2 log m >= {} > {}", fmt_rat(&lhs_lo), fmt_rat(&rhs)),
    );
    report
}

/// Exact port of the published verification program: containment of the
/// primitive pairs at N = 300 and closure under A and C at N = 1000.
pub fn program1_suite(bits: u32) -> Report {
    let mut report = Report::new("program-1 parity suite");
    let h300 = build_hull(300);

    for theta in [rat(9, 56), rat(89, 560), rat(89, 570), rat(32, 205), rat(13, 84)] {
        let p = Point::new(theta.clone(), &theta + rat(1, 2));
        in_hull_line(&h300, &format!("BI pair theta = {}", fmt_rat(&theta)), &p, &mut report);
    }
    for p in sporadic_pairs() {
        in_hull_line(&h300, &format!("sporadic {}", p.provenance), &p.point(), &mut report);
    }
    for p in derivative_test_pairs() {
        in_hull_line(
            &h300,
            &format!("derivative-test {}", p.provenance),
            &p.point(),
            &mut report,
        );
    }
    // The published program loops this family from m = 0.
    for m in 0..=100u32 {
        let p = huxley_family_pair(m);
        in_hull_line(&h300, &format!("huxley family m = {m}"), &p.point(), &mut report);
    }
    for m in 3..=100u32 {
        report.check(
            format!("log family m = {m} in H_300"),
            h300.contains_hb_log_member(m, bits, true),
            "interval-box membership".to_string(),
        );
    }
    for m in 3..=100u32 {
        let p = hb_family_pair(m);
        in_hull_line(&h300, &format!("mean-value family m = {m}"), &p.point(), &mut report);
    }

    let h1000 = build_hull(1000);
    let closure: Vec<(i64, bool, bool)> = (-99i64..100)
        .into_par_iter()
        .map(|m| {
            let p = vertex(m);
            let a_ok = h1000.contains_pair(&transform_a(&p), true);
            let c_ok = h1000.contains_pair(&catalog::transform_c(&p), true);
            (m, a_ok, c_ok)
        })
        .collect();
    for (m, a_ok, c_ok) in closure {
        report.check(format!("A(k_{m}, l_{m}) in H_1000"), a_ok, String::new());
        report.check(format!("C(k_{m}, l_{m}) in H_1000"), c_ok, String::new());
    }
    report
}

/// All BI thetas are checked in the broader containment suite, including the
/// one the published program omits.
pub fn bi_theta_count() -> usize {
    bi_thetas().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_vertices() {
        let v0 = vertex(0);
        assert_eq!((v0.k, v0.l), (rat(13, 84), rat(55, 84)));
        let v9 = vertex(9);
        assert_eq!((v9.k, v9.l), (rat(1, 56), rat(127, 140)));
        let v10 = vertex(10);
        assert_eq!((v10.k, v10.l), (rat(1, 100), rat(14, 15)));
    }

    #[test]
    fn negative_vertices_reflect() {
        let v = vertex(-1);
        assert_eq!(v.k, rat(35731, 51284) - rat(1, 2));
        assert_eq!(v.l, rat(4742, 38463) + rat(1, 2));
        // Decimal cross-check of the first reflected vertex.
        assert_eq!(fmt_rat(&v.k), "10089/51284");
    }

    #[test]
    fn a_images_fill_indices_5_to_8() {
        let v5 = vertex(5);
        let a1 = transform_a(&vertex(1));
        assert_eq!((v5.k, v5.l), (a1.k, a1.l));
        let v8 = vertex(8);
        assert_eq!((v8.k.clone(), v8.l.clone()), (rat(715, 21906), rat(9454, 10953)));
    }

    #[test]
    fn tail_slopes_match_closed_form() {
        assert_eq!(chain_slope(9), rat(-10, 3));
        assert_eq!(chain_slope_closed_form(9), rat(-10, 3));
        assert_eq!(chain_slope_closed_form(100), rat(-95 * 96, 97));
        assert_eq!(chain_slope(100), rat(-9120, 97));
    }

    #[test]
    fn hull_is_convex_and_contains_its_seed() {
        let h = build_hull(50);
        assert!(h.polygon().check_strict_convexity());
        assert!(h.contains_point(&Point::new(rat(13, 84), rat(55, 84)), true));
        assert!(h.contains_point(&h.polygon().centroid(), false));
    }

    #[test]
    fn monotone_truncations() {
        let h10 = build_hull(10);
        let h100 = build_hull(100);
        for v in h10.polygon().vertices() {
            assert!(h100.contains_point(v, true));
        }
    }

    #[test]
    fn bracketing_by_bisection() {
        // k_9 = 1/56, k_10 = 1/100; anything in between brackets at 9.
        assert_eq!(bracket_chain_index(&rat(1, 60), 200), Some(9));
        assert_eq!(bracket_chain_index(&rat(1, 56), 200), Some(9));
        assert_eq!(bracket_chain_index(&rat(1, 100), 200), Some(10));
    }

    #[test]
    fn slopes_report_small_range() {
        let r = check_convexity_slopes(20);
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn closure_small_sample() {
        let r = check_transform_edge_inequality(&TransformOp::A, &[100]);
        assert!(r.passed(), "{}", r.render_text());
        let r = check_transform_edge_inequality(&TransformOp::C, &[100]);
        assert!(r.passed(), "{}", r.render_text());
    }

    #[test]
    fn hull_json_round_trip() {
        let h = build_hull(12);
        let j = h.to_json();
        let back = hull_from_json(&j).unwrap();
        assert_eq!(back.truncation_index(), 12);
        assert_eq!(back.polygon().vertices(), h.polygon().vertices());
    }

    #[test]
    fn b_symmetry_of_vertices() {
        for n in -40i64..=40 {
            let v = vertex(n);
            let w = vertex(-n);
            assert_eq!(v.k, &w.l - rat(1, 2));
            assert_eq!(v.l, &w.k + rat(1, 2));
        }
    }

    #[test]
    fn tail_k_bound() {
        // k_N < 3/N^3 for N >= 100.
        for n in [100i64, 500, 1000] {
            let v = vertex(n);
            assert!(v.k < rat(3, 1) / (rat_int(n) * rat_int(n) * rat_int(n)));
        }
    }
}
