//! Theorem-reproduction drivers: encode each application's objective, run the
//! exact optimizer, and diff the outcome against the published tables.

pub mod divisor;
pub mod moments;
pub mod mu;
pub mod pythagorean;
pub mod zero_density;

use serde_json::{json, Value as Json};

use crate::exact::{fmt_rat, Rat};
use crate::report::Report;

/// A reproduced piecewise table in exportable form: one row per piece with
/// exact endpoint and expression strings plus a rational sample minimizer.
#[derive(Clone, Debug, Default)]
pub struct PieceTable {
    pub parameter: String,
    pub rows: Vec<PieceRow>,
}

#[derive(Clone, Debug)]
pub struct PieceRow {
    pub lo: String,
    pub hi: String,
    pub expr_num: String,
    pub expr_den: String,
    pub argmin_k: String,
    pub argmin_l: String,
}

impl PieceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("piece_lo,piece_hi,expr_num,expr_den,argmin_k,argmin_l\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.lo, r.hi, quote(&r.expr_num), quote(&r.expr_den), r.argmin_k, r.argmin_l
            ));
        }
        out
    }

    pub fn to_json(&self) -> Json {
        json!({
            "parameter": self.parameter,
            "pieces": self.rows.iter().map(|r| json!({
                "lo": r.lo, "hi": r.hi,
                "num": r.expr_num, "den": r.expr_den,
                "argmin_k": r.argmin_k, "argmin_l": r.argmin_l,
            })).collect::<Vec<_>>(),
        })
    }
}

fn quote(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

pub const THEOREM_IDS: [&str; 10] = [
    "2.1", "2.2", "2.3", "2.6", "2.7", "2.8", "2.9", "2.10", "2.11", "2.12",
];

/// Runs one theorem driver by its table identifier.
/// Returns the check report and, for piecewise results, the table.
pub fn reproduce(id: &str) -> Option<(Report, Option<PieceTable>)> {
    match id {
        "2.1" => Some((moments::check_moment_12_delta(10_000), None)),
        "2.2" => {
            let (report, table) = moments::reproduce_moment_table();
            let rows = table
                .pieces
                .iter()
                .map(|p| {
                    let (num, den) = p.expr.render("A");
                    PieceRow {
                        lo: fmt_rat(&p.lo),
                        hi: p.hi.as_ref().map(fmt_rat).unwrap_or_else(|| "inf".into()),
                        expr_num: num,
                        expr_den: den,
                        argmin_k: String::new(),
                        argmin_l: String::new(),
                    }
                })
                .collect();
            Some((
                report,
                Some(PieceTable {
                    parameter: "A".into(),
                    rows,
                }),
            ))
        }
        "2.3" => Some((moments::check_hybrid_moment(), None)),
        "2.6" => {
            let (report, _, pw) = mu::reproduce_mu_table();
            let rows = pw
                .pieces
                .iter()
                .map(|p| {
                    let (num, den) = p.expr.render("sigma");
                    PieceRow {
                        lo: p.lo.describe(),
                        hi: p.hi.describe(),
                        expr_num: num,
                        expr_den: den,
                        argmin_k: fmt_rat(&p.argmin_sample.x),
                        argmin_l: fmt_rat(&p.argmin_sample.y),
                    }
                })
                .collect();
            Some((
                report,
                Some(PieceTable {
                    parameter: "sigma".into(),
                    rows,
                }),
            ))
        }
        "2.7" | "2.8" => Some((mu::check_mu_three_halves(1000), None)),
        "2.9" | "2.10" => Some((zero_density::reproduce_zero_density(), None)),
        "2.11" => {
            let (mu_report, mu_bound, _) = mu::reproduce_mu_table();
            let (mut report, results) = divisor::reproduce_divisor_bounds(&mu_bound);
            let mut pre = Report::new(report.title.clone());
            pre.check(
                "growth-bound table reproduced (input)",
                mu_report.passed(),
                String::new(),
            );
            pre.merge(report);
            report = pre;
            let rows = results
                .iter()
                .map(|r| PieceRow {
                    lo: fmt_rat(r.alpha.lo()),
                    hi: fmt_rat(r.alpha.hi()),
                    expr_num: format!("alpha_{}", r.n),
                    expr_den: "1".into(),
                    argmin_k: fmt_rat(&r.pair.k),
                    argmin_l: fmt_rat(&r.pair.l),
                })
                .collect();
            Some((
                report,
                Some(PieceTable {
                    parameter: "n".into(),
                    rows,
                }),
            ))
        }
        "2.12" => Some((pythagorean::reproduce_pythagorean(), None)),
        _ => None,
    }
}

/// Decimal tolerance used by the spot checks on printed decimal values.
pub fn printed_decimal_step() -> Rat {
    crate::exact::rat(1, 10_000)
}
