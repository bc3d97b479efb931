//! Zero-density exponents from growth bounds: the five-piece A(sigma) table
//! read off successive hull vertices, its certified crossovers, the uniform
//! (1 - sigma)^(3/2) constant via branch-and-bound, and the interpolated
//! improvement at sigma = 45/47 with its exact surd weight.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::catalog::ExponentPair;
use crate::exact::{
    fmt_decimal, fmt_rat, parse_rat, rat, rat_int, CertInterval, QuadraticSurd, Rat,
};
use crate::hull::{build_hull, vertex};
use crate::optimizer::univariate::{minimize_univariate, Expr};
use crate::poly::{Poly, RatFunc};
use crate::report::Report;

/// `A(sigma) = 2k(3 sigma - 1 - 2 alpha) / ((2 sigma - 1 - alpha)(sigma - alpha))`
/// with `alpha = l - k`: the zero-count exponent produced by an exponent pair.
pub fn a_sigma_func(k: &Rat, l: &Rat) -> RatFunc {
    let alpha = l - k;
    let num = Poly::affine(
        rat_int(2) * k * (-Rat::one() - rat_int(2) * &alpha),
        rat_int(6) * k,
    );
    let d1 = Poly::affine(-Rat::one() - &alpha, rat_int(2));
    let d2 = Poly::affine(-alpha, Rat::one());
    RatFunc::new(num, d1.mul(&d2))
}

/// Pointwise value at a fixed sigma, `None` when a denominator factor
/// vanishes or feasibility fails (`1/2 <= alpha <= 1`, `alpha <= 2 sigma - 1`).
pub fn a_sigma_at(k: &Rat, l: &Rat, sigma: &Rat) -> Option<Rat> {
    let alpha = l - k;
    if alpha < rat(1, 2) || alpha > Rat::one() {
        return None;
    }
    if &alpha > &(rat_int(2) * sigma - Rat::one()) {
        return None;
    }
    a_sigma_func(k, l).eval(sigma)
}

struct PrintedPiece {
    vertex: i64,
    expr: RatFunc,
}

fn printed_pieces() -> (Vec<PrintedPiece>, Vec<Rat>, serde_json::Value) {
    let raw: serde_json::Value =
        serde_json::from_str(include_str!("../../data/zero_density.json"))
            .expect("valid zero-density data");
    let pieces = raw["pieces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            let s = |key: &str| parse_rat(p[key].as_str().unwrap()).unwrap();
            let num = Poly::affine(s("num0"), s("num1")).scale(&s("scale"));
            let den = Poly::affine(s("d1a"), s("d1b")).mul(&Poly::affine(s("d2a"), s("d2b")));
            PrintedPiece {
                vertex: p["vertex"].as_i64().unwrap(),
                expr: RatFunc::new(num, den),
            }
        })
        .collect();
    let crossovers = raw["crossover_decimals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| parse_rat(s.as_str().unwrap()).unwrap())
        .collect();
    (pieces, crossovers, raw)
}

/// Bisection root of `f(sigma) = lhs(sigma) - rhs(sigma)` in `[lo, hi]` given
/// a sign change, to interval width `<= tol`.
fn bisect_crossover(
    lhs: &RatFunc,
    rhs: &RatFunc,
    mut lo: Rat,
    mut hi: Rat,
    tol: &Rat,
) -> Option<CertInterval> {
    let f = |x: &Rat| -> Option<Rat> { Some(lhs.eval(x)? - rhs.eval(x)?) };
    let mut flo = f(&lo)?;
    let fhi = f(&hi)?;
    if flo.is_zero() {
        return CertInterval::new(lo.clone(), lo).ok();
    }
    if (flo.is_positive() && fhi.is_positive()) || (flo.is_negative() && fhi.is_negative()) {
        return None;
    }
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / rat_int(2);
        let fm = f(&mid)?;
        if fm.is_zero() {
            return CertInterval::new(mid.clone(), mid).ok();
        }
        if fm.is_positive() == flo.is_positive() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    CertInterval::new(lo, hi).ok()
}

/// Reproduces the five-piece table, certifies the four crossovers to their
/// printed four decimals, confirms vertex optimality at fifty sample points,
/// bounds the uniform constant, and checks the interpolated example.
pub fn reproduce_zero_density() -> Report {
    let mut report = Report::new("zero-density exponents");
    let (printed, crossover_decimals, raw) = printed_pieces();

    // (i) The displayed rational functions match the vertex formulas.
    for p in &printed {
        let v = vertex(p.vertex);
        let derived = a_sigma_func(&v.k, &v.l);
        report.check(
            format!("formula for chain vertex {}", p.vertex),
            derived.eq_func(&p.expr),
            format!("pair {}", v.describe()),
        );
    }

    // (ii) Crossovers between consecutive pieces, certified by bisection on
    // the exact difference. Each is the root of a cubic; boxes of width
    // 1e-8 pin the printed 4-decimal truncations.
    let tol = rat(1, 100_000_000);
    for (i, want) in crossover_decimals.iter().enumerate() {
        let lo = want - rat(2, 10_000);
        let hi = want + rat(2, 10_000);
        let boxed = bisect_crossover(&printed[i].expr, &printed[i + 1].expr, lo, hi, &tol);
        match boxed {
            Some(b) => {
                let step = rat(1, 10_000);
                let ok = b.width() <= rat(1, 1_000_000)
                    && b.lo() >= want
                    && b.hi() < &(want + &step);
                report.check(
                    format!("crossover {} truncates to {}", i + 1, fmt_rat(want)),
                    ok,
                    b.describe(10),
                );
            }
            None => report.check(
                format!("crossover {} bracketing", i + 1),
                false,
                "no sign change in printed window".to_string(),
            ),
        }
    }

    // (iii) Schedule checks at fifty sigma samples. The crossovers define
    // which of the five scheduled vertices wins among themselves, and that
    // is asserted exactly. The schedule is only near-optimal against the
    // full vertex set (interior chain vertices do better close to 9/10, as
    // the interpolation remark below also demonstrates); the comparison
    // against all hull vertices is reported, not asserted.
    let hull = build_hull(1000);
    let verts = hull.polygon().vertices();
    let crossover_boxes: Vec<CertInterval> = crossover_decimals
        .iter()
        .enumerate()
        .map(|(i, want)| {
            bisect_crossover(
                &printed[i].expr,
                &printed[i + 1].expr,
                want - rat(2, 10_000),
                want + rat(2, 10_000),
                &tol,
            )
            .expect("crossover bracketed above")
        })
        .collect();
    let mut family_ok = true;
    let mut family_note = String::from("all samples");
    let mut global_misses = 0usize;
    let mut first_miss = String::new();
    for i in 1..=50i64 {
        let sigma = rat(9, 10) + rat(i, 510);
        // Scheduled piece: position of sigma relative to the crossover boxes.
        let mut piece = 0usize;
        let mut ambiguous = false;
        for b in &crossover_boxes {
            if &sigma > b.hi() {
                piece += 1;
            } else if &sigma >= b.lo() {
                ambiguous = true;
            }
        }
        if ambiguous {
            continue;
        }
        let scheduled = vertex(printed[piece].vertex);
        let sched_val = match a_sigma_at(&scheduled.k, &scheduled.l, &sigma) {
            Some(v) => v,
            None => {
                family_ok = false;
                family_note = format!("scheduled vertex infeasible at {}", fmt_rat(&sigma));
                break;
            }
        };
        for p in &printed {
            let v = vertex(p.vertex);
            if let Some(val) = a_sigma_at(&v.k, &v.l, &sigma) {
                if val < sched_val {
                    family_ok = false;
                    family_note = format!(
                        "vertex {} beats the schedule at sigma = {}",
                        p.vertex,
                        fmt_rat(&sigma)
                    );
                }
            }
        }
        let beaten = verts.iter().any(|v| {
            a_sigma_at(&v.x, &v.y, &sigma)
                .map(|val| val < sched_val)
                .unwrap_or(false)
        });
        if beaten {
            global_misses += 1;
            if first_miss.is_empty() {
                first_miss = fmt_rat(&sigma);
            }
        }
    }
    report.check(
        "scheduled vertex wins within the schedule at 50 samples",
        family_ok,
        family_note,
    );
    report.check(
        "near-optimality against all vertices (informational)",
        true,
        if global_misses == 0 {
            "optimal at every sample".to_string()
        } else {
            format!(
                "{global_misses}/50 samples have a better interior vertex (first at sigma = {first_miss}); the published schedule is near-optimal"
            )
        },
    );

    // (iv) Uniform constant: minimize k^(3/2)(4k - 6)/((k - 1)(k - 2)) * B
    // over k in [3, 20] by certified branch-and-bound. The factored
    // denominator keeps interval enclosures away from zero.
    let b_surd = QuadraticSurd::sqrt_of_rat(rat(2, 13), &rat_int(10)).unwrap();
    let f = Expr::Mul(
        Box::new(Expr::SurdConst(b_surd)),
        Box::new(Expr::Div(
            Box::new(Expr::Mul(
                Box::new(Expr::Pow(Box::new(Expr::var()), rat(3, 2))),
                Box::new(Expr::Sub(
                    Box::new(Expr::Mul(Box::new(Expr::c(rat_int(4))), Box::new(Expr::var()))),
                    Box::new(Expr::c(rat_int(6))),
                )),
            )),
            Box::new(Expr::Mul(
                Box::new(Expr::Sub(Box::new(Expr::var()), Box::new(Expr::c(rat_int(1))))),
                Box::new(Expr::Sub(Box::new(Expr::var()), Box::new(Expr::c(rat_int(2))))),
            )),
        )),
    );
    let bound = parse_rat(raw["uniform_constant_bound"].as_str().unwrap()).unwrap();
    let argmin_dec = parse_rat(raw["uniform_argmin_decimal"].as_str().unwrap()).unwrap();
    match minimize_univariate(&f, rat_int(3), rat_int(20), &rat(1, 20_000), 96) {
        Ok(m) => {
            report.check(
                format!("uniform constant <= {}", fmt_rat(&bound)),
                m.value.hi() <= &bound,
                format!("minimum in {}", m.value.describe(6)),
            );
            report.check(
                "argmin box contains 4.9284",
                m.argmin.contains(&argmin_dec),
                format!("argmin in {}", m.argmin.describe(5)),
            );
        }
        Err(e) => report.check("branch-and-bound run", false, e.to_string()),
    }

    // (v) Interpolated pair at sigma = 45/47 with the printed surd weight.
    report.merge(check_interpolation_remark(&raw));
    report
}

/// The displayed interpolation weight is a single surd; the interpolated
/// pair's exponent value stays in the same field, so the bound is an exact
/// surd comparison.
fn check_interpolation_remark(raw: &serde_json::Value) -> Report {
    let mut report = Report::new(String::new());
    let ex = &raw["interpolation_example"];
    let s = |key: &str| parse_rat(ex[key].as_str().unwrap()).unwrap();
    let den = s("lambda_den");
    let radicand: BigInt = ex["lambda_radicand"].as_str().unwrap().parse().unwrap();
    let lambda = QuadraticSurd::new(
        s("lambda_num_shift") / &den,
        s("lambda_num_coeff") / &den,
        radicand,
    )
    .expect("non-negative radicand");

    // 0 <= lambda <= 1 by exact sign analysis.
    let in_range = lambda.sign() >= 0
        && lambda.cmp_rat(&Rat::one()) != std::cmp::Ordering::Greater;
    report.check("interpolation weight in [0, 1]", in_range, lambda.to_string());
    let lam_box = lambda.enclosure(64);
    let dec = s("lambda_decimal");
    report.check(
        "weight matches printed decimal to 1e-4",
        lam_box.width() <= rat(1, 10_000)
            && lam_box.lo() >= &dec
            && lam_box.hi() < &(&dec + rat(1, 10_000)),
        lam_box.describe(8),
    );

    let sigma = s("sigma");
    let p4 = vertex(4);
    let p5 = vertex(5);
    let co = lambda.neg().add_rat(&Rat::one());
    let k = lambda.scale(&p4.k).add(&co.scale(&p5.k)).expect("same field");
    let l = lambda.scale(&p4.l).add(&co.scale(&p5.l)).expect("same field");
    let alpha = l.sub(&k).expect("same field");

    // A(sigma) at the interpolated pair, all within Q(sqrt(r)).
    let two_sigma_m1 = rat_int(2) * &sigma - Rat::one();
    let three_sigma_m1 = rat_int(3) * &sigma - Rat::one();
    let num = k
        .mul(&alpha.scale(&rat_int(-2)).add_rat(&three_sigma_m1))
        .expect("same field")
        .scale(&rat_int(2));
    let d1 = alpha.neg().add_rat(&two_sigma_m1);
    let d2 = alpha.neg().add_rat(&sigma);
    let value = num.div(&d1.mul(&d2).expect("same field")).expect("nonzero");

    let bound = s("bound");
    let le_bound = value.cmp_rat(&bound) != std::cmp::Ordering::Greater;
    let above_prev = value.cmp_rat(&(&bound - rat(1, 10_000))) == std::cmp::Ordering::Greater;
    report.check(
        format!("interpolated exponent <= {} at sigma = 45/47", fmt_rat(&bound)),
        le_bound && above_prev,
        format!("value ~ {}", fmt_decimal(value.enclosure(64).hi(), 8)),
    );

    // Near-optimality: the surd weight beats a rational grid of weights.
    let mut grid_ok = true;
    for j in 0..=20 {
        let lam_r = rat(j, 20);
        let kk = &lam_r * &p4.k + (Rat::one() - &lam_r) * &p5.k;
        let ll = &lam_r * &p4.l + (Rat::one() - &lam_r) * &p5.l;
        if let Some(v) = a_sigma_at(&kk, &ll, &sigma) {
            if value.cmp_rat(&v) == std::cmp::Ordering::Greater {
                grid_ok = false;
            }
        }
    }
    report.check(
        "surd weight beats rational weight grid",
        grid_ok,
        String::new(),
    );
    report
}

/// Scheduled pair lookup used by the divisor driver.
pub fn scheduled_vertex(piece: usize) -> ExponentPair {
    let (printed, _, _) = printed_pieces();
    vertex(printed[piece].vertex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_piece_formula_matches() {
        let v = vertex(4);
        let derived = a_sigma_func(&v.k, &v.l);
        let printed = RatFunc::new(
            Poly::affine(rat(-12359, 1), rat(15357, 1)).scale(&rat(715, 1)),
            Poly::affine(rat(-3620, 1), rat(5119, 1))
                .mul(&Poly::affine(rat(-8739, 1), rat(10238, 1))),
        );
        assert!(derived.eq_func(&printed));
    }

    #[test]
    fn feasibility_filter() {
        // Reflected vertices have alpha < 1/2: never feasible.
        let v = vertex(-5);
        assert!(a_sigma_at(&v.k, &v.l, &rat(95, 100)).is_none());
        // Near the corner, alpha close to 1 needs sigma close to 1.
        let v = vertex(400);
        assert!(a_sigma_at(&v.k, &v.l, &rat(95, 100)).is_none());
    }

    #[test]
    fn crossover_bisection_bracket() {
        let (printed, crossovers, _) = printed_pieces();
        let tol = rat(1, 1_000_000);
        let b = bisect_crossover(
            &printed[0].expr,
            &printed[1].expr,
            &crossovers[0] - rat(2, 10_000),
            &crossovers[0] + rat(2, 10_000),
            &tol,
        )
        .unwrap();
        assert!(b.lo() >= &rat(9573, 10_000));
        assert!(b.hi() < &rat(9574, 10_000));
    }
}
