//! Pipeline for sequence terms that are concatenations of three
//! repdigits: `q_n = d1-block || d2-block || d3-block` with run lengths
//! `m1, m2, m3 >= 1`.  Three rearrangements isolate each boundary, a
//! Baker-type bound feeds a combined fixed point, and three reductions
//! pin the run lengths before the sweep.

use super::constants as cn;
use super::families;
use super::report::{Discrepancy, ProofReport, StageKind, StageRecord};
use super::thm3::alpha_number;
use super::{check_constant, fmt_dec, fmt_sci, tau_expr, to_int, PipelineError, PipelineOptions};
use crate::cfrac;
use crate::linforms::{
    matveev_coefficient, solve_affine_log_bound, verify_matveev_coefficient, AlgebraicNumber,
    DegreeFactor, MatveevSpec,
};
use crate::realnum::{Expr, Precision, RealError};
use crate::reduction::{self, ReduceOptions, ReductionProblem};
use crate::search;
use crate::sequences::{alpha, log_alpha};
use rug::Integer;

fn log10() -> Expr {
    Expr::int(10).log()
}

/// `n log alpha < t3 + C (1+log(n+2))^3 K'` collapsed from the three
/// case inequalities; returns the certified fixed point.
fn combined_fixed_point(c1: &Expr, c2: &Expr, pol: Precision) -> Result<Integer, RealError> {
    let t1 = Expr::ratio(9991, 1000).log();
    let t2 = Expr::ratio(111, 100).log();
    let t3 = Expr::ratio(21, 10).log();
    let a = Expr::ratio(109, 5) + Expr::int(2) * t1.clone() + Expr::int(4) * t2;
    let b = Expr::int(2) * c1.clone()
        + Expr::int(4) * c2.clone() * (Expr::ratio(399, 25) + Expr::int(2) * t1);
    let c = Expr::int(8) * c1.clone() * c2.clone();
    let k = c2.clone() * (a + b + c);
    solve_affine_log_bound(&log_alpha(), &k, 2, 3, &t3, pol)
}

/// Fixed point for `n` once `m1` is pinned, using the mid and full case
/// inequalities (quadratic in `1 + log n`).
fn mid_fixed_point(c2: &Expr, m1_bound: i64, pol: Precision) -> Result<Integer, RealError> {
    let m1l = Expr::int(m1_bound) * log10();
    let t2 = Expr::ratio(111, 100).log();
    let t3 = Expr::ratio(21, 10).log();
    let a1_mid = Expr::ratio(399, 25) + Expr::int(2) * m1l.clone();
    let base = Expr::ratio(109, 5) + Expr::int(2) * m1l + Expr::int(4) * t2;
    let k = c2.clone() * (base + Expr::int(4) * c2.clone() * a1_mid);
    solve_affine_log_bound(&log_alpha(), &k, 0, 2, &t3, pol)
}

/// Fixed point for `n` once `m1` and `m2` are pinned (linear in
/// `1 + log n`).
fn full_fixed_point(
    c2: &Expr,
    m1_bound: i64,
    m2_bound: i64,
    pol: Precision,
) -> Result<Integer, RealError> {
    let t3 = Expr::ratio(21, 10).log();
    let k = c2.clone()
        * (Expr::ratio(109, 5)
            + Expr::int(2 * m1_bound) * log10()
            + Expr::int(4 * m2_bound) * log10());
    solve_affine_log_bound(&log_alpha(), &k, 0, 1, &t3, pol)
}

fn to_u32(stage: &str, b: &Integer) -> Result<u32, PipelineError> {
    b.to_u32().ok_or(PipelineError::Real {
        stage: stage.to_string(),
        source: RealError::OutOfDomain {
            what: format!("reduced bound {b} does not fit a block length"),
        },
    })
}

pub fn prove_thm4(opts: &PipelineOptions) -> Result<ProofReport, PipelineError> {
    let pol = opts.precision;
    let ropts = ReduceOptions::default();
    let mut report = ProofReport::new("thm4");

    // stage 1: leading-block form.
    let stage = "matveev-leading";
    let real = PipelineError::real(stage);
    let spec1 = MatveevSpec {
        degree: 2,
        degree_factor: DegreeFactor::OnePlusLogD,
        coefficients: vec![Expr::ratio(29, 5), Expr::ratio(9, 10), Expr::ratio(231, 50)],
    };
    let mut coeff_ok = true;
    for d1 in 1..=9i64 {
        coeff_ok &= verify_matveev_coefficient(
            &spec1.coefficients[0],
            &AlgebraicNumber::ratio(9, 2 * d1),
            2,
            pol,
        )
        .map_err(&real)?;
    }
    coeff_ok &= verify_matveev_coefficient(&spec1.coefficients[1], &alpha_number(), 2, pol)
        .map_err(&real)?;
    coeff_ok &= verify_matveev_coefficient(
        &spec1.coefficients[2],
        &AlgebraicNumber::rational(10),
        2,
        pol,
    )
    .map_err(&real)?;
    let c1 = matveev_coefficient(&spec1);
    let chk1 = check_constant(&c1, &cn::c_thm4_leading(), pol).map_err(&real)?;
    report.stages.push(
        StageRecord::new(StageKind::InitialBound, stage)
            .input("form", "|9/(2 d1) alpha^n 10^(-m1-m2-m3) - 1| < 9.991 10^(-m1)")
            .input("coefficients", "A1 = 5.8, A2 = 0.9, A3 = 4.62")
            .input("degreeBound", "D = n + 2")
            .output("certifiedConstant", fmt_sci(chk1.certified))
            .output("coefficientChecks", if coeff_ok { "11/11" } else { "FAILED" })
            .paper("2.3e13")
            .matched(chk1.ratio_ok && coeff_ok)
            .note("the printed constant sits about 1.7 percent below the certified product; it passes the two-sided 5 percent gate and the certified column carries the certified value")
            .note("adopted inequality: m1 log 10 < 2.3e13 (1 + log(n + 2)) + log 9.991"),
    );

    // stage 2 and 3 share the two-coefficient base constant.
    let stage = "matveev-mid";
    let real = PipelineError::real(stage);
    let spec_base = MatveevSpec {
        degree: 2,
        degree_factor: DegreeFactor::OnePlusLogD,
        // still a three-log form; the block-dependent coefficient
        // multiplies in at the combination stages
        coefficients: vec![Expr::ratio(9, 10), Expr::ratio(231, 50), Expr::int(1)],
    };
    let c2 = matveev_coefficient(&spec_base);
    let chk2 = check_constant(&c2, &cn::c_thm4_base(), pol).map_err(&real)?;
    report.stages.push(
        StageRecord::new(StageKind::InitialBound, stage)
            .input(
                "form",
                "|1 - 9/(2 (d1 10^m1 - (d1 - d2))) alpha^n 10^(-m2-m3)| < 1.11 10^(-m2)",
            )
            .input("coefficients", "A1 = 15.96 + 2 m1 log 10, A2 = 0.9, A3 = 4.62")
            .input("degreeBound", "D = n")
            .output("certifiedConstant", fmt_sci(chk2.certified))
            .paper("4e12")
            .matched(chk2.ratio_ok)
            .note("the denominator of the shifted block keeps height at most log(18 10^m1) = 2.9 + m1 log 10, inside the stated 7.98 + m1 log 10 budget")
            .note("adopted inequality: m2 log 10 < 4e12 (1 + log n)(15.96 + 2 m1 log 10) + log 1.11"),
    );

    let stage = "matveev-full";
    report.stages.push(
        StageRecord::new(StageKind::InitialBound, stage)
            .input(
                "form",
                "|1 - 2 (d1 10^(m1+m2) - (d1-d2) 10^m2 - (d2-d3))/9 alpha^(-n) 10^m3| < 2.1 alpha^(-n)",
            )
            .input(
                "coefficients",
                "A1 = 21.8 + 2 (m1 + m2) log 10 + 2 m2 log 10, A2 = 0.9, A3 = 4.62",
            )
            .input("degreeBound", "D = n")
            .output("certifiedConstant", fmt_sci(chk2.certified))
            .paper("4e12")
            .matched(chk2.ratio_ok)
            .note("same base constant as the mid form; the three-block numerator keeps height at most log(18 10^(m1+2 m2)) plus crossing terms, inside the stated budget")
            .note("adopted inequality: n log alpha - log 2.1 < 4e12 (1 + log n)(21.8 + 2 m1 log 10 + 4 m2 log 10)"),
    );

    // stage 4: combined fixed point.
    let stage = "combine-bounds";
    let real = PipelineError::real(stage);
    let m_faithful = to_int(&cn::m_thm4_combined());
    let honest_combined = combined_fixed_point(
        &Expr::rational(cn::c_thm4_leading()),
        &Expr::rational(cn::c_thm4_base()),
        pol,
    )
    .map_err(&real)?;
    let m4_cert = combined_fixed_point(&c1, &c2, pol).map_err(&real)?;
    report.discrepancies.push(Discrepancy {
        what: "combined initial bound".into(),
        printed: "n < 5e27 from the three case inequalities".into(),
        computed: format!(
            "chaining the three stated inequalities gives a fixed point near {}; no derivation reaching 5e27 reproduces",
            fmt_sci(honest_combined.to_f64())
        ),
        note: "the combination step also cites an inequality from the repdigit-difference argument in place of the mid-block one; the printed value is adopted for the faithful column and the certified column carries the honest fixed point".into(),
    });
    report.stages.push(
        StageRecord::new(StageKind::Substitution, stage)
            .input("inputs", "leading, mid, and full case inequalities")
            .output("faithfulBound", "5e27")
            .output("honestBound", fmt_sci(honest_combined.to_f64()))
            .output("certifiedBound", fmt_sci(m4_cert.to_f64()))
            .paper("5e27")
            .note("cubic fixed point in 1 + log(n + 2): the run-length sum triple-compounds the case constants; the printed 5e27 is adopted as stated and recorded as underivable"),
    );

    // stage 5: reduce m1 at the 66th convergent.
    let stage = "reduce-leading";
    let real = PipelineError::real(stage);
    let q66 = cn::tau_den_66();
    let conv66 = cfrac::convergent(&tau_expr(), 66, pol).map_err(&real)?;
    let q66_ok = conv66.q == q66;
    let a_leading = Expr::ratio(863, 10);
    let problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::digit_ratio_family()),
        a: a_leading.clone(),
        b: alpha(),
        m: m_faithful.clone(),
    };
    let eval = reduction::evaluate_family(&problem, &q66, Some(66), pol, ropts).map_err(&real)?;
    let eps_printed = cn::dec(cn::EPS_THM4_LEADING);
    let printed_f = eps_printed.to_f64();
    let closest = eval
        .detail
        .iter()
        .min_by(|a, b| {
            let da = (a.eps.to_f64() - printed_f).abs();
            let db = (b.eps.to_f64() - printed_f).abs();
            da.partial_cmp(&db).expect("finite")
        })
        .map(|c| (c.label.clone(), c.eps.to_f64()));
    let min_str = eval
        .min_positive
        .as_ref()
        .map(|c| format!("{} at {}", fmt_dec(c.eps.to_f64()), c.label))
        .unwrap_or_else(|| "none".into());
    if eval
        .min_positive
        .as_ref()
        .map_or(true, |c| (c.eps.to_f64() - printed_f).abs() > 5e-7 && c.eps.to_f64() < printed_f)
    {
        report.discrepancies.push(Discrepancy {
            what: "leading-reduction epsilon at the printed multiplier".into(),
            printed: format!("epsilon > {} over the nine digit cases", cn::EPS_THM4_LEADING),
            computed: format!(
                "certified family minimum is {}; the closest case to the printed value is {}",
                min_str,
                closest
                    .map(|(l, v)| format!("{l} at {}", fmt_dec(v)))
                    .unwrap_or_else(|| "none".into())
            ),
            note: "the printed threshold is still evaluated with the printed epsilon for the faithful column; a smaller true epsilon would only raise the threshold by about two units of w".into(),
        });
    }
    let wb = reduction::w_bound_from(&a_leading, &alpha(), &q66, &eps_printed, pol)
        .map_err(&real)?;
    let m1_faithful = wb - 1u32;
    let wb10 = reduction::w_bound_from(&a_leading, &Expr::int(10), &q66, &eps_printed, pol)
        .map_err(&real)?;
    let cert_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::digit_ratio_family()),
        a: a_leading.clone(),
        b: Expr::int(10),
        m: m4_cert.clone(),
    };
    let cert = reduction::reduce(&cert_problem, pol, ropts)
        .map_err(PipelineError::reduction(stage))?;
    let m1_cert = Integer::from(&cert.w_bound - 1);
    report.stages.push(
        StageRecord::new(StageKind::Reduction, stage)
            .input(
                "inequality",
                "|(m1+m2+m3) tau - n + log(2 d1/9)/log alpha| < 86.3 B^(-m1)",
            )
            .input("multiplier", q66.to_string())
            .input("boundOnU", "5e27")
            .output("multiplierVerified", if q66_ok { "true" } else { "false" })
            .output("familyNegativeCount", eval.negative_count.to_string())
            .output("minPositiveEpsilon", min_str.clone())
            .output("faithfulBound", m1_faithful.to_string())
            .output("base10Bound", (wb10 - 1u32).to_string())
            .output("certifiedMultiplier", cert.family.multiplier.to_string())
            .output(
                "certifiedConvergentIndex",
                cert.family
                    .convergent_index
                    .map(|k| k.to_string())
                    .unwrap_or_else(|| "explicit".into()),
            )
            .output("certifiedBound", m1_cert.to_string())
            .output("rejectedMultipliers", cert.rejected.len().to_string())
            .paper(format!("m1 <= {}", cn::BOUND_THM4_M1))
            .matched(q66_ok && m1_faithful == cn::BOUND_THM4_M1)
            .note("the reduction is stated with base B = 10, but the printed threshold 83.71 reproduces only with base alpha; base alpha is the weaker sound reading and is adopted for the faithful column, while the true decay 86.3 x 10^(-m1) lets the certified column use base 10")
            .note("the multiplier value is not printed in the reference; it is our computed 66th denominator, so this row checks self-consistency only"),
    );

    // stage 6: substitute m1 back.
    let stage = "substitute-mid";
    let real = PipelineError::real(stage);
    let m5_faithful = to_int(&cn::m_thm4_after_m1());
    let honest_mid = mid_fixed_point(
        &Expr::rational(cn::c_thm4_base()),
        cn::BOUND_THM4_M1,
        pol,
    )
    .map_err(&real)?;
    let m1_cert_i64 = m1_cert.to_i64().unwrap_or(cn::BOUND_THM4_M1);
    let m5_cert = mid_fixed_point(&c2, m1_cert_i64, pol).map_err(&real)?;
    report.discrepancies.push(Discrepancy {
        what: "bound on n after pinning m1".into(),
        printed: "n < 1.2e27".into(),
        computed: format!(
            "the stated inequalities with m1 <= 83 give a fixed point near {}",
            fmt_sci(honest_mid.to_f64())
        ),
        note: "adopted as printed for the faithful column; the certified column substitutes its own m1 bound into certified constants".into(),
    });
    report.stages.push(
        StageRecord::new(StageKind::Substitution, stage)
            .input("pinned", format!("faithful m1 <= 83, certified m1 <= {m1_cert}"))
            .output("faithfulBound", "1.2e27")
            .output("honestBound", fmt_sci(honest_mid.to_f64()))
            .output("certifiedBound", fmt_sci(m5_cert.to_f64()))
            .paper("1.2e27")
            .note("quadratic fixed point in 1 + log n; the printed value is adopted as stated and recorded as underivable"),
    );

    // stage 7: reduce m2 at the 63rd convergent.
    let stage = "reduce-mid";
    let real = PipelineError::real(stage);
    let q63 = cn::tau_den_63();
    let conv63 = cfrac::convergent(&tau_expr(), 63, pol).map_err(&real)?;
    let q63_ok = conv63.q == q63;
    let a_mid = Expr::ratio(3, 2);
    let full_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::mid_block_family(cn::BOUND_THM4_M1 as u32)),
        a: a_mid.clone(),
        b: alpha(),
        m: m5_faithful.clone(),
    };
    let full_eval =
        reduction::evaluate_family(&full_problem, &q63, Some(63), pol, ropts).map_err(&real)?;
    if full_eval.negative_count > 0 {
        report.discrepancies.push(Discrepancy {
            what: "mid-reduction epsilon positivity at the printed multiplier".into(),
            printed: "epsilon > 0 over all shifted-block cases with m1 <= 83 and d1 != d2".into(),
            computed: format!(
                "{} of {} non-collapsed cases have negative epsilon at this multiplier",
                full_eval.negative_count,
                full_eval.total - full_eval.excluded_count
            ),
            note: "the printed threshold instead tracks the nine large-shift limit values; the faithful column reproduces it from that slice, and the certified column advances to a clean multiplier".into(),
        });
    }
    let slice_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::digit_ratio_family()),
        a: a_mid.clone(),
        b: alpha(),
        m: m5_faithful.clone(),
    };
    let slice_eval =
        reduction::evaluate_family(&slice_problem, &q63, Some(63), pol, ropts).map_err(&real)?;
    let slice_positive = slice_eval.all_positive();
    let slice_floor = slice_eval.eps_floor.clone().unwrap_or_default();
    let slice_threshold = |eps: &rug::Rational| -> Result<(Integer, f64), PipelineError> {
        let wb = reduction::w_bound_from(&a_mid, &alpha(), &q63, eps, pol).map_err(&real)?;
        let t = (a_mid.clone() * Expr::int(q63.clone()) / Expr::rational(eps.clone())).log()
            / log_alpha();
        Ok((wb - 1u32, t.enclose(pol).map_err(&real)?.to_f64()))
    };
    // the printed threshold tracks the d = 1 limit epsilon, not the
    // slice minimum; the faithful column follows the printed arithmetic
    let lead_eps = slice_eval
        .detail
        .iter()
        .find(|c| c.label == "d=1")
        .and_then(|c| c.eps.lo().to_rational())
        .filter(|r| *r > 0);
    let (m2_faithful, threshold) = match &lead_eps {
        Some(eps) => slice_threshold(eps)?,
        None => (Integer::from(-1), f64::NAN),
    };
    let (m2_slice_min, min_threshold) = if slice_positive {
        slice_threshold(&slice_floor)?
    } else {
        (Integer::from(-1), f64::NAN)
    };
    let threshold_consistent = (threshold - 75.24).abs() <= 0.011;
    if m2_slice_min != m2_faithful {
        report.discrepancies.push(Discrepancy {
            what: "mid-reduction threshold provenance".into(),
            printed: "threshold 75.24, so m2 <= 75".into(),
            computed: format!(
                "the d=1 limit epsilon {} reproduces the printed threshold ({}); the slice minimum {} gives threshold {} and m2 <= {}",
                fmt_dec(lead_eps.as_ref().map_or(f64::NAN, |r| r.to_f64())),
                fmt_dec(threshold),
                fmt_dec(slice_floor.to_f64()),
                fmt_dec(min_threshold),
                m2_slice_min
            ),
            note: "the printed bound reproduces only from the d=1 case; it is adopted as printed for the faithful column, and the certified column re-reduces every case at its own multiplier".into(),
        });
    }
    let cert_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::mid_block_family_certified(to_u32(stage, &m1_cert)?)),
        a: a_mid.clone(),
        b: Expr::int(10),
        m: m5_cert.clone(),
    };
    let cert = reduction::reduce_per_case(&cert_problem, pol, ropts)
        .map_err(PipelineError::reduction(stage))?;
    // the two inner-value-45 cases have shift exactly tau, so their
    // inequality is |(u+1) tau - v| with u + 1 <= M + 1: homogeneous
    let resonant_ok = families::block_shift_power_of_ten(&Integer::from(45)) == Some(1);
    let homog = reduction::homogeneous_w_bound(
        &tau_expr(),
        &a_mid,
        &Expr::int(10),
        &Integer::from(&m5_cert + 1u32),
        pol,
        ropts,
    )
    .map_err(PipelineError::reduction(stage))?;
    let cert_w = cert.w_bound.clone().max(homog.clone());
    let m2_cert = Integer::from(&cert_w - 1);
    report.stages.push(
        StageRecord::new(StageKind::Reduction, stage)
            .input(
                "inequality",
                "|(m2+m3) tau - n + log(2 (d1 10^m1 - (d1-d2))/9)/log alpha| < 1.5 B^(-m2)",
            )
            .input("multiplier", q63.to_string())
            .input("familySize", full_eval.total.to_string())
            .input("boundOnU", "1.2e27")
            .output("multiplierVerified", if q63_ok { "true" } else { "false" })
            .output("familyNegativeCount", full_eval.negative_count.to_string())
            .output(
                "sliceEpsilons",
                slice_eval
                    .detail
                    .iter()
                    .map(|c| format!("{}: {}", c.label, fmt_dec(c.eps.to_f64())))
                    .collect::<Vec<_>>()
                    .join(", "),
            )
            .output("sliceThreshold", fmt_dec(threshold))
            .output("sliceMinThreshold", fmt_dec(min_threshold))
            .output("sliceMinBound", m2_slice_min.to_string())
            .output("faithfulBound", m2_faithful.to_string())
            .output("certifiedMaxConvergentIndex", cert.max_convergent_index.to_string())
            .output("certifiedAdvancedCases", cert.advanced_count.to_string())
            .output(
                "certifiedWorstCase",
                format!(
                    "{} at convergent {}",
                    cert.worst.label, cert.worst.convergent_index
                ),
            )
            .output("homogeneousCaseBound", Integer::from(&homog - 1).to_string())
            .output("certifiedBound", m2_cert.to_string())
            .paper(format!("m2 <= {}", cn::BOUND_THM4_M2))
            .matched(
                q63_ok
                    && slice_positive
                    && threshold_consistent
                    && m2_faithful == cn::BOUND_THM4_M2
                    && resonant_ok,
            )
            .note("no epsilon value is printed for this reduction; the printed threshold 75.24 reproduces from the d=1 large-shift limit epsilon, again with base alpha in place of the stated base 10")
            .note("for m1 beyond about 29 the shifted-block epsilon is within rounding of its limit value because m1 ||tau q63|| stays below 1e-26")
            .note("the cases d1=4,d2=9 and d1=5,d2=0 at m1=1 have inner value 45 and shift exactly the base constant; they are excluded from the per-case walk and covered by the best-approximation bound with the unknown raised by one"),
    );

    // stage 8: substitute m2 back.
    let stage = "substitute-full";
    let real = PipelineError::real(stage);
    let m6_faithful = to_int(&cn::m_thm4_after_m2());
    let honest_full = full_fixed_point(
        &Expr::rational(cn::c_thm4_base()),
        cn::BOUND_THM4_M1,
        cn::BOUND_THM4_M2,
        pol,
    )
    .map_err(&real)?;
    let m2_cert_i64 = m2_cert.to_i64().unwrap_or(cn::BOUND_THM4_M2);
    let m6_cert = full_fixed_point(&c2, m1_cert_i64, m2_cert_i64, pol).map_err(&real)?;
    report.discrepancies.push(Discrepancy {
        what: "bound on n after pinning m1 and m2".into(),
        printed: "n < 5e15".into(),
        computed: format!(
            "the stated inequalities with m1 <= 83, m2 <= 75 give a fixed point near {}",
            fmt_sci(honest_full.to_f64())
        ),
        note: "adopted as printed for the faithful column; the certified column substitutes its own bounds".into(),
    });
    report.stages.push(
        StageRecord::new(StageKind::Substitution, stage)
            .input(
                "pinned",
                format!(
                    "faithful m1 <= 83, m2 <= 75; certified m1 <= {m1_cert}, m2 <= {m2_cert}"
                ),
            )
            .output("faithfulBound", "5e15")
            .output("honestBound", fmt_sci(honest_full.to_f64()))
            .output("certifiedBound", fmt_sci(m6_cert.to_f64()))
            .paper("5e15")
            .note("linear fixed point in 1 + log n; the printed value is adopted as stated and recorded as underivable"),
    );

    // stage 9: reduce n itself over the full three-block family.
    let stage = "reduce-full";
    let real = PipelineError::real(stage);
    let q40 = cn::tau_den_40();
    let conv40 = cfrac::convergent(&tau_expr(), 40, pol).map_err(&real)?;
    let q40_ok = conv40.q == q40;
    let repdigit_oracle: Vec<String> = search::repdigit_members(cn::SWEEP_THM4)
        .iter()
        .map(|m| m.value.to_string())
        .collect();
    let two_block_oracle: Vec<String> = search::two_block_members(cn::SWEEP_THM4)
        .iter()
        .map(|m| m.value.to_string())
        .collect();
    let oracle_ok = repdigit_oracle == ["1", "1", "3", "7", "99"]
        && two_block_oracle == ["17", "41", "577"];
    let a_full = Expr::ratio(117, 100);
    let full_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::ThreeBlockFamily {
            m1_max: cn::BOUND_THM4_M1 as u32,
            m2_max: cn::BOUND_THM4_M2 as u32,
        }),
        a: a_full.clone(),
        b: alpha(),
        m: m6_faithful.clone(),
    };
    let full_eval =
        reduction::evaluate_family(&full_problem, &q40, Some(40), pol, ropts).map_err(&real)?;
    if full_eval.negative_count > 0 {
        report.discrepancies.push(Discrepancy {
            what: "full-reduction epsilon positivity at the printed multiplier".into(),
            printed:
                "epsilon > 0 except when consecutive block digits coincide (the collapsed patterns)"
                    .into(),
            computed: format!(
                "{} of {} non-collapsed cases have negative epsilon at this multiplier",
                full_eval.negative_count,
                full_eval.total - full_eval.excluded_count
            ),
            note: "the printed threshold tracks the equal-digits diagonal slice, itself one of the collapsed patterns; the faithful column reproduces the threshold from that slice and the certified column advances to a clean multiplier".into(),
        });
    }
    let slice_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::diagonal_slice(
            (cn::BOUND_THM4_M1 + cn::BOUND_THM4_M2) as u32,
        )),
        a: a_full.clone(),
        b: alpha(),
        m: m6_faithful.clone(),
    };
    let slice_eval =
        reduction::evaluate_family(&slice_problem, &q40, Some(40), pol, ropts).map_err(&real)?;
    let slice_min = slice_eval.min_positive.as_ref();
    let (n_faithful, threshold) = match slice_min {
        Some(c) => {
            let eps = c
                .eps
                .lo()
                .to_rational()
                .ok_or(RealError::OutOfDomain {
                    what: "non-finite slice epsilon".into(),
                })
                .map_err(&real)?;
            let wb = reduction::w_bound_from(&a_full, &alpha(), &q40, &eps, pol)
                .map_err(&real)?;
            let t = (a_full.clone() * Expr::int(q40.clone()) / Expr::rational(eps)).log()
                / log_alpha();
            (wb - 1, t.enclose(pol).map_err(&real)?.to_f64())
        }
        None => (Integer::from(-1), f64::NAN),
    };
    let threshold_consistent = (threshold - 46.29).abs() <= 0.011;
    report.discrepancies.push(Discrepancy {
        what: "full-reduction conclusion".into(),
        printed: "n < 46".into(),
        computed: "the printed threshold 46.29 excludes n >= 47, so the certified conclusion is n <= 46".into(),
        note: "immaterial for the theorem: the sweep covers n <= 50".into(),
    });
    let cert_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::ThreeBlockFamily {
            m1_max: to_u32(stage, &m1_cert)?,
            m2_max: to_u32(stage, &m2_cert)?,
        }),
        a: a_full.clone(),
        b: alpha(),
        m: m6_cert.clone(),
    };
    let cert = reduction::reduce_per_case(&cert_problem, pol, ropts)
        .map_err(PipelineError::reduction(stage))?;
    let n_cert = Integer::from(&cert.w_bound - 1);
    report.stages.push(
        StageRecord::new(StageKind::Reduction, stage)
            .input(
                "inequality",
                "|m3 tau - n + log(2 (d1 10^(m1+m2) - (d1-d2) 10^m2 - (d2-d3))/9)/log alpha| < 1.17 alpha^(-n)",
            )
            .input("multiplier", q40.to_string())
            .input("familySize", full_eval.total.to_string())
            .input("boundOnU", "5e15")
            .output("multiplierVerified", if q40_ok { "true" } else { "false" })
            .output("collapsedPatternOracle", if oracle_ok {
                "one-run terms 1, 1, 3, 7, 99 and two-run terms 17, 41, 577, all inside the sweep"
            } else {
                "ORACLE MISMATCH"
            })
            .output("excludedCount", full_eval.excluded_count.to_string())
            .output("familyNegativeCount", full_eval.negative_count.to_string())
            .output(
                "sliceEpsilons",
                slice_eval
                    .detail
                    .iter()
                    .map(|c| format!("{}: {}", c.label, fmt_dec(c.eps.to_f64())))
                    .collect::<Vec<_>>()
                    .join(", "),
            )
            .output("sliceThreshold", fmt_dec(threshold))
            .output("faithfulBound", n_faithful.to_string())
            .output("certifiedMaxConvergentIndex", cert.max_convergent_index.to_string())
            .output("certifiedAdvancedCases", cert.advanced_count.to_string())
            .output(
                "certifiedWorstCase",
                format!(
                    "{} at convergent {}",
                    cert.worst.label, cert.worst.convergent_index
                ),
            )
            .output("certifiedBound", n_cert.to_string())
            .paper("n < 46")
            .matched(q40_ok && oracle_ok && threshold_consistent && n_faithful == cn::BOUND_THM4_N)
            .note("the diagonal slice has negative entries of its own; only its minimum positive entry reproduces the printed threshold, and the collapsed patterns it belongs to are excluded by the membership oracles rather than by epsilon"),
    );

    // stage 10: sweep.
    let cert_n_usize = n_cert.to_usize().unwrap_or(cn::SWEEP_THM4);
    let mut limit = cn::SWEEP_THM4.max(cert_n_usize);
    if let Some(user) = opts.sweep_limit {
        limit = limit.max(user);
    }
    let solutions = search::solve_eq4(limit);
    let values: Vec<String> = solutions.iter().map(|s| s.value.to_string()).collect();
    let sweep_ok = values == ["239", "3363", "8119"];
    report.stages.push(
        StageRecord::new(StageKind::Sweep, "sweep")
            .input("limit", limit.to_string())
            .output("solutionCount", solutions.len().to_string())
            .output("solutions", values.join(" "))
            .paper("239, 3363, 8119")
            .matched(sweep_ok)
            .note("terms whose decimal expansion has exactly three maximal runs; 577 has two runs and is correctly absent"),
    );

    report.final_solutions = serde_json::to_value(&solutions).expect("serializable solutions");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_pipeline_reproduces_printed_bounds() {
        let report = prove_thm4(&PipelineOptions::default()).unwrap();
        assert!(report.all_matched(), "report:\n{}", report.to_text());
        let leading = report.stage("reduce-leading").unwrap();
        assert_eq!(leading.output_of("faithfulBound"), Some("83"));
        let mid = report.stage("reduce-mid").unwrap();
        assert_eq!(mid.output_of("faithfulBound"), Some("75"));
        let full = report.stage("reduce-full").unwrap();
        assert_eq!(full.output_of("faithfulBound"), Some("46"));
        let sweep = report.stage("sweep").unwrap();
        assert_eq!(sweep.output_of("solutionCount"), Some("3"));
    }
}
