//! Property suites: randomized invariants for the exact arithmetic, the
//! geometry kernel, the transforms, and the optimizer's vertex optimality.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use exppair::catalog::{
    enumerate_known_pairs, hb_family_pair, transform_a, transform_b, CatalogEntry,
};
use exppair::exact::{rat, rat_int, CertInterval, QuadraticSurd, Rat};
use exppair::geometry::{convex_hull, segment_image_is_segment, Point, ProjectiveMap};
use exppair::hull::{build_hull, vertex};
use exppair::optimizer::{minimize, AffineConstraint, FractionalObjective, Rel};

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-300i64..300, 1i64..100).prop_map(|(n, d)| rat(n, d))
}

fn arb_point() -> impl Strategy<Value = Point> {
    (arb_rat(), arb_rat()).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // Rational arithmetic through the library's parse/format layer stays in
    // lowest terms, and addition/subtraction is exactly invertible.
    #[test]
    fn rational_normalization_and_exact_inverse(a in arb_rat(), b in arb_rat()) {
        let reparsed = exppair::exact::parse_rat(&exppair::exact::fmt_rat(&a)).unwrap();
        prop_assert_eq!(&reparsed, &a);
        prop_assert_eq!((&a + &b) - &b, a);
    }

    #[test]
    fn surd_sign_antisymmetry(p in arb_rat(), q in arb_rat(), r in 2u32..500) {
        prop_assume!(!q.is_zero());
        let s = QuadraticSurd::new(p, q, BigInt::from(r)).unwrap();
        prop_assert_eq!(s.sign(), -s.neg().sign());
    }

    // Hull idempotence and input containment.
    #[test]
    fn hull_idempotent_and_contains_inputs(pts in prop::collection::vec(arb_point(), 3..40)) {
        let hull = match convex_hull(&pts) {
            Ok(h) => h,
            Err(_) => return Ok(()), // collinear: nothing to check
        };
        prop_assert!(hull.check_strict_convexity());
        for p in &pts {
            prop_assert!(hull.contains(p, true));
        }
        let again = convex_hull(hull.vertices()).unwrap();
        prop_assert_eq!(again.vertices(), hull.vertices());
    }

    // Quasilinearity of fractional-linear maps on segments with a
    // sign-constant denominator.
    #[test]
    fn projective_segment_image(
        coeffs in prop::array::uniform9(-6i64..6),
        p1 in arb_point(),
        p2 in arb_point(),
    ) {
        prop_assume!(p1 != p2);
        let c = |i: usize| rat(coeffs[i], 1);
        let map = ProjectiveMap::new([
            [c(0), c(1), c(2)],
            [c(3), c(4), c(5)],
            [c(6), c(7), c(8)],
        ]);
        // Skip maps that are singular on the segment or collapse it to a
        // point; the segment-image statement concerns the generic case.
        let (q1, q2) = match (map.map_point(&p1), map.map_point(&p2)) {
            (Ok(a), Ok(b)) if a != b => (a, b),
            _ => return Ok(()),
        };
        let _ = (q1, q2);
        match segment_image_is_segment(&map, &p1, &p2, 20) {
            Ok(ok) => prop_assert!(ok),
            Err(_) => {} // denominator vanishes strictly inside
        }
    }

    // Interval enclosures contain pointwise results of monotone operations.
    #[test]
    fn interval_containment(lo in 1i64..400, width in 0i64..100, den in 1i64..50, x_sel in 0.0f64..1.0) {
        let lo = rat(lo, den);
        let hi = &lo + rat(width, den);
        let iv = CertInterval::new(lo.clone(), hi.clone()).unwrap();
        // A rational point inside the interval.
        let t = rat((x_sel * 1000.0) as i64, 1000);
        let x = &lo + (&hi - &lo) * t;
        let sq = iv.mul(&iv);
        prop_assert!(sq.contains(&(&x * &x)));
        let lg = iv.log(64).unwrap();
        let xlg = CertInterval::point(x.clone()).log(96).unwrap();
        prop_assert!(lg.lo() <= xlg.hi() && xlg.lo() <= lg.hi());
        let sqrt = iv.sqrt(64).unwrap();
        let xsqrt = CertInterval::point(x).sqrt(96).unwrap();
        prop_assert!(sqrt.lo() <= xsqrt.hi() && xsqrt.lo() <= sqrt.hi());
    }
}

#[test]
fn interval_pointwise_thousand_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let iv = CertInterval::new(rat(1, 3), rat(9, 2)).unwrap();
    for _ in 0..1000 {
        let t = rat(rng.gen_range(0..=1000), 1000);
        let x = iv.lo() + (iv.hi() - iv.lo()) * &t;
        assert!(iv.contains(&x));
        let sum = iv.add(&iv);
        assert!(sum.contains(&(&x + &x)));
        let prod = iv.mul(&iv);
        assert!(prod.contains(&(&x * &x)));
    }
}

#[test]
fn b_involution_and_chain_symmetry() {
    // Reflection symmetry of the vertex chain for |n| <= 1000, and the
    // B transform as an involution on catalog pairs.
    for n in -1000i64..=1000 {
        let v = vertex(n);
        let w = vertex(-n);
        assert_eq!(v.k, &w.l - rat(1, 2), "k at n = {n}");
        assert_eq!(v.l, &w.k + rat(1, 2), "l at n = {n}");
    }
    for e in enumerate_known_pairs(true, 30, 64) {
        if let CatalogEntry::Exact(p) = e {
            let back = transform_b(&transform_b(&p));
            assert_eq!((back.k, back.l), (p.k, p.l));
        }
    }
}

#[test]
fn a_transform_stays_in_region() {
    for e in enumerate_known_pairs(true, 50, 64) {
        if let CatalogEntry::Exact(p) = e {
            let img = transform_a(&p);
            // Re-validating through the constructor checks the region.
            assert!(
                exppair::catalog::ExponentPair::new(
                    img.k.clone(),
                    img.l.clone(),
                    img.eps_qualified,
                    img.provenance.clone()
                )
                .is_ok(),
                "A({}) leaves the region",
                p.describe()
            );
        }
    }
}

#[test]
fn mean_value_family_monotone() {
    let cap = 100u32;
    for m in 3..cap {
        let cur = hb_family_pair(m);
        let next = hb_family_pair(m + 1);
        assert!(next.k < cur.k, "k not decreasing at m = {m}");
        assert!(next.l > cur.l, "l not increasing at m = {m}");
    }
}

/// Direct port of the published membership loop, used as an independent
/// oracle against the polygon-based test.
fn in_hull_direct(p: &Point, n: i64) -> bool {
    let half = rat(1, 2);
    for m in -n..n {
        let a = vertex(m);
        let b = vertex(m + 1);
        if &p.x * (&b.l - &a.l) + &p.y * (&a.k - &b.k) < &a.k * &b.l - &a.l * &b.k {
            return false;
        }
    }
    let top = vertex(n);
    if &p.x * (Rat::one() - &top.l) + &p.y * &top.k < top.k.clone() {
        return false;
    }
    let bot = vertex(-n);
    if &p.x * (&bot.l - &half) + &p.y * (&half - &bot.k) < &half * &bot.l - &half * &bot.k {
        return false;
    }
    &p.x + &p.y <= Rat::one()
}

#[test]
fn membership_matches_direct_port() {
    let n = 50;
    let hull = build_hull(n as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut inside = 0;
    for _ in 0..400 {
        let p = Point::new(
            rat(rng.gen_range(0..=500), 1000),
            rat(rng.gen_range(250..=1000), 1000),
        );
        let direct = in_hull_direct(&p, n);
        assert_eq!(hull.contains_point(&p, true), direct, "at {}", p.describe());
        if direct {
            inside += 1;
        }
    }
    assert!(inside > 40, "sample should straddle the boundary: {inside}");
    // Boundary vertices sit in the closed hull but not the open interior.
    let v = vertex(0).point();
    assert!(hull.contains_point(&v, true));
    assert!(!hull.contains_point(&v, false));
    assert!(hull.contains_point(&hull.polygon().centroid(), false));
}

#[test]
fn limit_anchor_rate() {
    for n in [100i64, 250, 500, 1000] {
        let v = vertex(n);
        let bound = rat(3, 1) / (rat_int(n) * rat_int(n) * rat_int(n));
        assert!(v.k < bound);
        let w = vertex(-n);
        assert!(&w.l - rat(1, 2) < bound);
    }
}

fn random_positive_den_objective(rng: &mut ChaCha8Rng) -> FractionalObjective {
    let r = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| rat(rng.gen_range(lo..=hi), rng.gen_range(1..=9));
    FractionalObjective::new(
        (r(rng, -20, 20), r(rng, -20, 20), r(rng, -20, 20)),
        // Non-negative k/l coefficients and positive constant keep the
        // denominator positive on the whole region.
        (r(rng, 0, 10), r(rng, 0, 10), r(rng, 1, 10)),
    )
}

#[test]
fn optimizer_matches_brute_force_on_random_objectives() {
    let hull = build_hull(100);
    let verts = hull.polygon().vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let obj = random_positive_den_objective(&mut rng);
        let with_constraint = case % 2 == 1;
        let cons: Vec<AffineConstraint> = if with_constraint {
            vec![AffineConstraint::new(
                rat(-1, 1),
                Rat::one(),
                rat(rng.gen_range(40..=70), 100),
                Rel::Ge,
            )]
        } else {
            Vec::new()
        };
        let opt = match minimize(hull.polygon(), &obj, &cons, None) {
            Ok(o) => o,
            Err(e) => panic!("case {case}: {e}"),
        };
        // Independent enumeration: vertices and edge-constraint cuts.
        let mut best: Option<Rat> = None;
        let mut consider = |p: &Point| {
            if cons.iter().all(|c| c.satisfied_closed(p)) {
                let v = obj.eval(p).expect("positive denominator");
                if best.as_ref().map(|b| &v < b).unwrap_or(true) {
                    best = Some(v);
                }
            }
        };
        for v in verts {
            consider(v);
        }
        for c in &cons {
            for i in 0..verts.len() {
                let u = &verts[i];
                let w = &verts[(i + 1) % verts.len()];
                let du = &c.g * &u.x + &c.h * &u.y;
                let dw = &c.g * &w.x + &c.h * &w.y;
                let denom = &dw - &du;
                if denom.is_zero() {
                    continue;
                }
                let s = (&c.t - &du) / &denom;
                if s.is_negative() || s > Rat::one() {
                    continue;
                }
                consider(&Point::new(
                    &u.x + &s * (&w.x - &u.x),
                    &u.y + &s * (&w.y - &u.y),
                ));
            }
        }
        assert_eq!(Some(opt.value.clone()), best, "case {case}");

        // Grid dominance: random convex combinations of feasible vertices.
        for _ in 0..50 {
            let i = rng.gen_range(0..verts.len());
            let j = rng.gen_range(0..verts.len());
            let lam = rat(rng.gen_range(0..=100), 100);
            let p = Point::new(
                &verts[i].x * &lam + &verts[j].x * (Rat::one() - &lam),
                &verts[i].y * &lam + &verts[j].y * (Rat::one() - &lam),
            );
            if cons.iter().all(|c| c.satisfied_closed(&p)) {
                assert!(opt.value <= obj.eval(&p).unwrap(), "case {case}");
            }
        }
    }
}

#[test]
fn surd_cross_radicand_total_order_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let a = QuadraticSurd::new(
            rat(rng.gen_range(-50..=50), rng.gen_range(1..=20)),
            rat(rng.gen_range(-50..=50), rng.gen_range(1..=20)),
            BigInt::from(rng.gen_range(2u32..200)),
        )
        .unwrap();
        let b = QuadraticSurd::new(
            rat(rng.gen_range(-50..=50), rng.gen_range(1..=20)),
            rat(rng.gen_range(-50..=50), rng.gen_range(1..=20)),
            BigInt::from(rng.gen_range(2u32..200)),
        )
        .unwrap();
        let ord = a.cmp_values(&b);
        // Consistency with certified enclosures.
        let (ea, eb) = (a.enclosure(96), b.enclosure(96));
        match ord {
            Ordering::Less => assert!(ea.lo() < eb.hi()),
            Ordering::Greater => assert!(ea.hi() > eb.lo()),
            Ordering::Equal => {
                assert!(ea.intersects(&eb));
            }
        }
        assert_eq!(ord.reverse(), b.cmp_values(&a));
    }
}
