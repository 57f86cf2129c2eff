//! Pipeline for sequence terms that are differences of two repdigits:
//! `q_k = d1 (10^n - 1)/9 - d2 (10^m - 1)/9` with `n > m >= 1`.  Equal
//! and adjacent repunit lengths reduce to the repdigit and concatenation
//! sweeps, the remaining gap `n - m >= 2` goes through two linear forms,
//! and two reductions pin first the gap and then the index.

use super::constants as cn;
use super::families;
use super::report::{Discrepancy, ProofReport, StageKind, StageRecord};
use super::thm3::alpha_number;
use super::{
    check_constant, fmt_dec, fmt_sci, inv_tau_expr, tau_expr, to_int, PipelineError,
    PipelineOptions,
};
use crate::cfrac;
use crate::linforms::{
    matveev_coefficient, solve_affine_log_bound, verify_matveev_coefficient, AlgebraicNumber,
    DegreeFactor, MatveevSpec,
};
use crate::realnum::{certify_less, Expr, Precision, RealError};
use crate::reduction::{self, ReduceOptions, ReductionProblem};
use crate::search;
use crate::sequences::{alpha, log_alpha};
use rug::Integer;

fn log10() -> Expr {
    Expr::int(10).log()
}

/// Printed-constant fixed point for `k`, reading the gap inequality with
/// `log alpha` on the left as stated.
fn combined_honest(pol: Precision) -> Result<Integer, RealError> {
    let c1a = Expr::rational(cn::c_thm5_case1_absorbed());
    let c2p = Expr::rational(cn::c_thm5_case2());
    let k = c2p.clone() * (Expr::ratio(399, 25) + Expr::int(2) * c1a * log10() / log_alpha());
    solve_affine_log_bound(&log_alpha(), &k, 5, 2, &Expr::int(3).log(), pol)
}

/// Certified fixed point for `k` from the two certified products, using
/// the true base-10 decay of the gap form.
fn combined_certified(c1: &Expr, c2: &Expr, pol: Precision) -> Result<Integer, RealError> {
    let t1 = Expr::ratio(981, 100).log();
    let k = c2.clone()
        * (Expr::ratio(399, 25) + Expr::int(2) * t1 + Expr::int(2) * c1.clone());
    solve_affine_log_bound(&log_alpha(), &k, 5, 2, &Expr::int(3).log(), pol)
}

/// Fixed point for `k` once the gap `n - m` is pinned.
fn index_fixed_point(c2: &Expr, gap_bound: i64, pol: Precision) -> Result<Integer, RealError> {
    let k = c2.clone() * (Expr::ratio(399, 25) + Expr::int(2 * gap_bound) * log10());
    solve_affine_log_bound(&log_alpha(), &k, 5, 1, &Expr::int(3).log(), pol)
}

pub fn prove_thm5(opts: &PipelineOptions) -> Result<ProofReport, PipelineError> {
    let pol = opts.precision;
    let ropts = ReduceOptions::default();
    let mut report = ProofReport::new("thm5");

    // stage 1: equal repunit lengths give a plain repdigit.
    let repdigit_oracle: Vec<String> = search::repdigit_members(cn::SWEEP_THM5)
        .iter()
        .map(|m| m.value.to_string())
        .collect();
    let equal_ok = repdigit_oracle == ["1", "1", "3", "7", "99"];
    report.stages.push(
        StageRecord::new(StageKind::Sweep, "precondition-equal-length")
            .input("case", "n = m")
            .output("repdigitTerms", repdigit_oracle.join(" "))
            .paper("largest repdigit term is 99")
            .matched(equal_ok)
            .note("with equal lengths the difference is (d1 - d2) repunits, a repdigit; the sweep below covers every such term"),
    );

    // stage 2: adjacent lengths give at most three maximal runs.
    let two_block_oracle: Vec<String> = search::two_block_members(cn::SWEEP_THM5)
        .iter()
        .map(|m| m.value.to_string())
        .collect();
    let three_block: Vec<String> = search::solve_eq4(cn::SWEEP_THM5)
        .iter()
        .map(|s| s.value.to_string())
        .collect();
    let adjacent_ok =
        two_block_oracle == ["17", "41", "577"] && three_block == ["239", "3363", "8119"];
    report.stages.push(
        StageRecord::new(StageKind::Sweep, "precondition-adjacent-length")
            .input("case", "n = m + 1")
            .output("twoRunTerms", two_block_oracle.join(" "))
            .output("threeRunTerms", three_block.join(" "))
            .paper("17, 41, 577 and 239, 3363, 8119")
            .matched(adjacent_ok)
            .note("d1 repunits of length m+1 minus d2 repunits of length m has at most three maximal digit runs, so the concatenation sweeps cover the case"),
    );

    // stage 3: the length window n < k + 5.
    let stage = "precondition-length-window";
    let real = PipelineError::real(stage);
    let window_ok = certify_less(&(alpha() * alpha()), &Expr::int(10), pol).map_err(&real)?;
    report.stages.push(
        StageRecord::new(StageKind::Substitution, stage)
            .input("envelope", "alpha^(k-1) <= 2 q_k < alpha^(k+1)")
            .output("alphaSquaredBelowTen", if window_ok { "true" } else { "false" })
            .paper("n < k + 5")
            .matched(window_ok)
            .note("for n - m >= 2 the difference is at least 10^(n-1)/2, and alpha^2 < 10 gives alpha^(2n)/20 < 10^(n-1)/2 <= q_k < alpha^(k+1)/2, so 2n < k + 1 + log 20/log alpha, well inside the stated n < k + 5"),
    );

    // stage 4: linear form for the gap.
    let stage = "matveev-gap";
    let real = PipelineError::real(stage);
    let spec1 = MatveevSpec {
        degree: 2,
        degree_factor: DegreeFactor::OnePlusLogD,
        coefficients: vec![
            log_alpha(),
            Expr::int(2) * log10(),
            Expr::ratio(509, 50),
        ],
    };
    let mut coeff_ok = true;
    coeff_ok &= verify_matveev_coefficient(&spec1.coefficients[0], &alpha_number(), 2, pol)
        .map_err(&real)?;
    coeff_ok &= verify_matveev_coefficient(
        &spec1.coefficients[1],
        &AlgebraicNumber::rational(10),
        2,
        pol,
    )
    .map_err(&real)?;
    for d1 in 1..=9i64 {
        coeff_ok &= verify_matveev_coefficient(
            &spec1.coefficients[2],
            &AlgebraicNumber::ratio(9, 2 * d1),
            2,
            pol,
        )
        .map_err(&real)?;
    }
    let c1 = matveev_coefficient(&spec1);
    let chk1 = check_constant(&c1, &cn::c_thm5_case1(), pol).map_err(&real)?;
    let absorbed_ok = certify_less(
        &(Expr::rational(cn::c_thm5_case1()) + Expr::ratio(981, 100).log()),
        &Expr::rational(cn::c_thm5_case1_absorbed()),
        pol,
    )
    .map_err(&real)?;
    report.stages.push(
        StageRecord::new(StageKind::InitialBound, stage)
            .input("form", "|9/(2 d1) alpha^k 10^(-n) - 1| < 9.81 10^(-(n-m))")
            .input("coefficients", "A1 = log alpha, A2 = 2 log 10, A3 = 10.18")
            .input("degreeBound", "D = k + 5")
            .output("certifiedConstant", fmt_sci(chk1.certified))
            .output("coefficientChecks", if coeff_ok { "11/11" } else { "FAILED" })
            .output("absorbedConstant", if absorbed_ok { "4.2e13 holds" } else { "FAILED" })
            .paper("4.1e13")
            .matched(chk1.dominated && chk1.ratio_ok && coeff_ok && absorbed_ok)
            .note("adopted inequality: (n - m) log alpha < log 9.81 + 4.1e13 (1 + log(k + 5)) < 4.2e13 (1 + log(k + 5))")
            .note("the statement bounds (n - m) log alpha although the decay is in powers of 10; that only weakens the bound and the faithful combination keeps it as stated"),
    );

    // stage 5: linear form for the index.
    let stage = "matveev-index";
    let real = PipelineError::real(stage);
    let spec2 = MatveevSpec {
        degree: 2,
        degree_factor: DegreeFactor::OnePlusLogD,
        // still a three-log form; the gap-dependent coefficient
        // multiplies in at the combination stage
        coefficients: vec![log_alpha(), Expr::int(2) * log10(), Expr::int(1)],
    };
    let c2 = matveev_coefficient(&spec2);
    let chk2 = check_constant(&c2, &cn::c_thm5_case2(), pol).map_err(&real)?;
    let mut corner_ok = verify_matveev_coefficient(&spec2.coefficients[0], &alpha_number(), 2, pol)
        .map_err(&real)?;
    corner_ok &= verify_matveev_coefficient(
        &spec2.coefficients[1],
        &AlgebraicNumber::rational(10),
        2,
        pol,
    )
    .map_err(&real)?;
    for (d1, d2, j) in [(1i64, 9i64, 2u32), (9, 1, 2), (1, 9, 80), (9, 1, 80)] {
        let p10 = Integer::from(Integer::u_pow_u(10, j));
        let a3 = Expr::ratio(399, 25) + Expr::int(2 * i64::from(j)) * log10();
        let printed_form = AlgebraicNumber::ratio(
            Integer::from(&p10 * d1) - d2,
            Integer::from(&p10 * 18),
        );
        let true_form = AlgebraicNumber::ratio(
            (Integer::from(&p10 * d1) - d2) * 2,
            Integer::from(&p10 * 9),
        );
        corner_ok &= verify_matveev_coefficient(&a3, &printed_form, 2, pol).map_err(&real)?;
        corner_ok &= verify_matveev_coefficient(&a3, &true_form, 2, pol).map_err(&real)?;
    }
    report.stages.push(
        StageRecord::new(StageKind::InitialBound, stage)
            .input("form", "|1 - (d1 - d2 10^(m-n)) 10^n alpha^(-k)/18| < 3 alpha^(-k)")
            .input(
                "coefficients",
                "A1 = log alpha, A2 = 2 log 10, A3 = 15.96 + 2 (n - m) log 10",
            )
            .input("degreeBound", "D = k + 5")
            .output("certifiedConstant", fmt_sci(chk2.certified))
            .output(
                "coefficientChecks",
                if corner_ok { "10/10 (corner cases, both normalizations)" } else { "FAILED" },
            )
            .paper("4e12")
            .matched(chk2.dominated && chk2.ratio_ok && corner_ok)
            .note("adopted inequality: k log alpha - log 3 < 4e12 (1 + log(k + 5))(15.96 + 2 (n - m) log 10)")
            .note("the shifted logarithm keeps height at most log(18 10^(n-m)) = 2.9 + (n - m) log 10 under either normalization, inside the stated 7.98 + (n - m) log 10 budget"),
    );

    // stage 6: combined fixed point.
    let stage = "combine-bounds";
    let real = PipelineError::real(stage);
    let m_faithful = to_int(&cn::m_thm5_combined());
    let honest = combined_honest(pol).map_err(&real)?;
    let m_cert = combined_certified(&c1, &c2, pol).map_err(&real)?;
    report.discrepancies.push(Discrepancy {
        what: "combined initial bound".into(),
        printed: "k < 2e28 from the two linear forms".into(),
        computed: format!(
            "chaining the stated inequalities gives a fixed point near {}; no derivation reaching 2e28 reproduces",
            fmt_sci(honest.to_f64())
        ),
        note: "the printed value is adopted for the faithful column; the certified column carries its own fixed point from certified constants and the true base-10 gap decay".into(),
    });
    report.stages.push(
        StageRecord::new(StageKind::Substitution, stage)
            .input("inputs", "gap and index linear forms")
            .output("faithfulBound", "2e28")
            .output("honestBound", fmt_sci(honest.to_f64()))
            .output("certifiedBound", fmt_sci(m_cert.to_f64()))
            .paper("2e28")
            .note("quadratic fixed point in 1 + log(k + 5); the printed 2e28 is adopted as stated and recorded as underivable"),
    );

    // stage 7: reduce the gap n - m with the inverse expansion.
    let stage = "reduce-gap";
    let real = PipelineError::real(stage);
    let iq68 = cn::inv_den_68();
    let conv68 = cfrac::convergent(&inv_tau_expr(), 68, pol).map_err(&real)?;
    let iq68_ok = conv68.q == iq68;
    let a_gap = Expr::ratio(9, 2);
    let problem = ReductionProblem {
        tau: inv_tau_expr(),
        family: Box::new(families::inverse_digit_family()),
        a: a_gap.clone(),
        b: Expr::int(10),
        m: m_faithful.clone(),
    };
    let eval = reduction::evaluate_family(&problem, &iq68, Some(68), pol, ropts).map_err(&real)?;
    let eps_printed = cn::dec(cn::EPS_THM5_GAP);
    let printed_f = eps_printed.to_f64();
    let d1_case = eval.detail.iter().find(|c| c.label == "d=1");
    let d1_eps = d1_case.map(|c| c.eps.to_f64()).unwrap_or(f64::NAN);
    // the printed value matches only the d = 1 case, and only to five
    // decimal places: certified 0.1967717 against printed 0.1967722
    let d1_ok = (d1_eps - printed_f).abs() <= 1e-5;
    let min_str = eval
        .min_positive
        .as_ref()
        .map(|c| format!("{} at {}", fmt_dec(c.eps.to_f64()), c.label))
        .unwrap_or_else(|| "none".into());
    report.discrepancies.push(Discrepancy {
        what: "gap-reduction epsilon".into(),
        printed: format!("epsilon = {} for the nine digit cases", cn::EPS_THM5_GAP),
        computed: format!(
            "that value is the d1 = 1 case alone, and its certified value {:.7} differs from the printed one in the final digit; the family minimum is {}",
            d1_eps,
            min_str
        ),
        note: "a smaller true epsilon only raises the cutoff by a few units; the faithful column keeps the printed epsilon".into(),
    });
    let t10 = (a_gap.clone() * Expr::int(iq68.clone()) / Expr::rational(eps_printed.clone()))
        .log()
        / log10();
    let t10 = t10.enclose(pol).map_err(&real)?.to_f64();
    let ta = (a_gap.clone() * Expr::int(iq68.clone()) / Expr::rational(eps_printed.clone()))
        .log()
        / log_alpha();
    let ta = ta.enclose(pol).map_err(&real)?.to_f64();
    let wb10 = reduction::w_bound_from(&a_gap, &Expr::int(10), &iq68, &eps_printed, pol)
        .map_err(&real)?;
    let wba = reduction::w_bound_from(&a_gap, &alpha(), &iq68, &eps_printed, pol)
        .map_err(&real)?;
    report.discrepancies.push(Discrepancy {
        what: "gap-reduction cutoff arithmetic".into(),
        printed: format!(
            "log(4.5 q/ {})/log B < {} with B = 10",
            cn::EPS_THM5_GAP,
            cn::THRESHOLD_THM5_GAP
        ),
        computed: format!(
            "base 10 gives {} (so n - m <= {}), base alpha gives {} (so n - m <= {}); neither reproduces the printed cutoff",
            fmt_dec(t10),
            Integer::from(&wb10 - 1),
            fmt_dec(ta),
            Integer::from(&wba - 1)
        ),
        note: "the printed conclusion n - m <= 80 lies between the two sound readings and is adopted for the faithful column; the certified column uses the true base 10".into(),
    });
    let cert_problem = ReductionProblem {
        tau: inv_tau_expr(),
        family: Box::new(families::inverse_digit_family()),
        a: a_gap.clone(),
        b: Expr::int(10),
        m: m_cert.clone(),
    };
    let cert = reduction::reduce(&cert_problem, pol, ropts)
        .map_err(PipelineError::reduction(stage))?;
    let gap_cert = Integer::from(&cert.w_bound - 1);
    report.stages.push(
        StageRecord::new(StageKind::Reduction, stage)
            .input(
                "inequality",
                "|k/tau - n + log(9/(2 d1))/log 10| < 4.5 x 10^(-(n-m))",
            )
            .input("multiplier", iq68.to_string())
            .input("boundOnU", "2e28")
            .output("multiplierVerified", if iq68_ok { "true" } else { "false" })
            .output(
                "familyEpsilons",
                eval.detail
                    .iter()
                    .map(|c| format!("{}: {}", c.label, fmt_dec(c.eps.to_f64())))
                    .collect::<Vec<_>>()
                    .join(", "),
            )
            .output("printedEpsilonCase", format!("d=1: {}", fmt_dec(d1_eps)))
            .output("base10Threshold", fmt_dec(t10))
            .output("baseAlphaThreshold", fmt_dec(ta))
            .output("faithfulBound", cn::BOUND_THM5_GAP.to_string())
            .output("certifiedMultiplier", cert.family.multiplier.to_string())
            .output(
                "certifiedConvergentIndex",
                cert.family
                    .convergent_index
                    .map(|k| k.to_string())
                    .unwrap_or_else(|| "explicit".into()),
            )
            .output("certifiedBound", gap_cert.to_string())
            .output("rejectedMultipliers", cert.rejected.len().to_string())
            .paper(format!(
                "epsilon {} and cutoff {}",
                cn::EPS_THM5_GAP,
                cn::THRESHOLD_THM5_GAP
            ))
            .matched(iq68_ok && d1_ok)
            .note("the multiplier is the 68th denominator of the inverse expansion log 10/log alpha; the reduction runs against the inverse form so the unknown multiplying tau is the index k"),
    );

    // stage 8: substitute the gap bound back.
    let stage = "substitute-index";
    let real = PipelineError::real(stage);
    let m2_faithful = to_int(&cn::m_thm5_after_gap());
    let c2p = Expr::rational(cn::c_thm5_case2());
    let recon = (Expr::int(3).log()
        + c2p.clone()
            * (Expr::int(1) + Expr::int(54).log())
            * (Expr::ratio(399, 25) + Expr::int(160) * log10()))
        / log_alpha();
    let recon = recon.enclose(pol).map_err(&real)?.to_f64();
    let recon_ratio = 8.8e15 / recon;
    let recon_ok = (1.0 / 1.05..=1.05).contains(&recon_ratio);
    let honest = index_fixed_point(&c2p, cn::BOUND_THM5_GAP, pol).map_err(&real)?;
    let gap_cert_i64 = gap_cert.to_i64().unwrap_or(cn::BOUND_THM5_GAP);
    let m2_cert = index_fixed_point(&c2, gap_cert_i64, pol).map_err(&real)?;
    report.discrepancies.push(Discrepancy {
        what: "intermediate bound on k after pinning the gap".into(),
        printed: "k < 8.8e15".into(),
        computed: format!(
            "the inequality at this point gives a fixed point near {}; the printed value reproduces (ratio {:.3}) only by evaluating the log term at the final k <= 49, a forward reference",
            fmt_sci(honest.to_f64()),
            recon_ratio
        ),
        note: "adopted as printed for the faithful column; the certified column re-solves the fixed point with its own gap bound".into(),
    });
    report.stages.push(
        StageRecord::new(StageKind::Substitution, stage)
            .input("pinned", format!("faithful n - m <= 80, certified n - m <= {gap_cert}"))
            .output("faithfulBound", "8.8e15")
            .output("reconstruction", fmt_sci(recon))
            .output("honestBound", fmt_sci(honest.to_f64()))
            .output("certifiedBound", fmt_sci(m2_cert.to_f64()))
            .paper("8.8e15")
            .matched(recon_ok)
            .note("the printed value matches the linear form evaluated at degree 54 = 49 + 5 within one percent; the honest fixed point is larger and drives the certified reduction"),
    );

    // stage 9: reduce the index k itself.
    let stage = "reduce-index";
    let real = PipelineError::real(stage);
    let q42 = cn::tau_den_42();
    let conv42 = cfrac::convergent(&tau_expr(), 42, pol).map_err(&real)?;
    let q42_ok = conv42.q == q42;
    let a_idx = Expr::ratio(18, 5);
    let full_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::repdigit_difference_family(
            2,
            cn::BOUND_THM5_GAP as u32,
        )),
        a: a_idx.clone(),
        b: alpha(),
        m: m2_faithful.clone(),
    };
    let full_eval =
        reduction::evaluate_family(&full_problem, &q42, Some(42), pol, ropts).map_err(&real)?;
    if full_eval.negative_count > 0 {
        report.discrepancies.push(Discrepancy {
            what: "index-reduction epsilon positivity at the printed multiplier".into(),
            printed: format!(
                "epsilon = {} for all digit pairs and gaps up to 80",
                cn::EPS_THM5_INDEX
            ),
            computed: format!(
                "{} of {} cases have negative epsilon at this multiplier",
                full_eval.negative_count, full_eval.total
            ),
            note: "the printed value tracks the large-gap limit of the d1 = 9 case; the certified column advances to a clean multiplier".into(),
        });
    }
    let slice_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::repdigit_difference_limit_slice()),
        a: a_idx.clone(),
        b: alpha(),
        m: m2_faithful.clone(),
    };
    let slice_eval =
        reduction::evaluate_family(&slice_problem, &q42, Some(42), pol, ropts).map_err(&real)?;
    let eps_printed = cn::dec(cn::EPS_THM5_INDEX);
    let printed_f = eps_printed.to_f64();
    let d9_case = slice_eval.detail.iter().find(|c| c.label == "d1=9,limit");
    let d9_eps = d9_case.map(|c| c.eps.to_f64()).unwrap_or(f64::NAN);
    let d9_ok = (d9_eps - printed_f).abs() <= 2e-6;
    let wb = reduction::w_bound_from(&a_idx, &alpha(), &q42, &eps_printed, pol).map_err(&real)?;
    let k_faithful = wb - 1u32;
    let t = (a_idx.clone() * Expr::int(q42.clone()) / Expr::rational(eps_printed)).log()
        / log_alpha();
    let threshold = t.enclose(pol).map_err(&real)?.to_f64();
    let threshold_consistent = (threshold - 49.26).abs() <= 0.011;
    report.discrepancies.push(Discrepancy {
        what: "normalization of the difference form".into(),
        printed: "the shifted logarithm uses (d1 - d2 10^(m-n))/18".into(),
        computed: "dividing the difference identity by alpha^k/2 gives the factor 2/9, so the correct argument is 2 (d1 10^(n-m) - d2)/(9 10^(n-m))".into(),
        note: "the printed epsilon and cutoff reproduce from the as-printed 1/18 family, whose d1 = 9 limit log(1/2)/log alpha matches the corrected limit log 2/log alpha in distance to the nearest integer; the certified column reduces the corrected family".into(),
    });
    let cert_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::repdigit_difference_family_true(
            2,
            gap_cert.to_u32().unwrap_or(cn::BOUND_THM5_GAP as u32),
        )),
        a: a_idx.clone(),
        b: alpha(),
        m: m2_cert.clone(),
    };
    let cert = reduction::reduce_per_case(&cert_problem, pol, ropts)
        .map_err(PipelineError::reduction(stage))?;
    let k_cert = Integer::from(&cert.w_bound - 1);
    report.stages.push(
        StageRecord::new(StageKind::Reduction, stage)
            .input(
                "inequality",
                "|n tau - k + log((d1 - d2 10^(m-n))/18)/log alpha| < 3.6 alpha^(-k)",
            )
            .input("multiplier", q42.to_string())
            .input("familySize", full_eval.total.to_string())
            .input("boundOnU", "8.8e15")
            .output("multiplierVerified", if q42_ok { "true" } else { "false" })
            .output("familyNegativeCount", full_eval.negative_count.to_string())
            .output("printedEpsilonCase", format!("d1=9,limit: {}", fmt_dec(d9_eps)))
            .output(
                "sliceEpsilons",
                slice_eval
                    .detail
                    .iter()
                    .map(|c| format!("{}: {}", c.label, fmt_dec(c.eps.to_f64())))
                    .collect::<Vec<_>>()
                    .join(", "),
            )
            .output("threshold", fmt_dec(threshold))
            .output("faithfulBound", k_faithful.to_string())
            .output("certifiedMaxConvergentIndex", cert.max_convergent_index.to_string())
            .output("certifiedAdvancedCases", cert.advanced_count.to_string())
            .output(
                "certifiedWorstCase",
                format!(
                    "{} at convergent {}",
                    cert.worst.label, cert.worst.convergent_index
                ),
            )
            .output("certifiedBound", k_cert.to_string())
            .paper(format!(
                "epsilon {} and cutoff {}",
                cn::EPS_THM5_INDEX,
                cn::THRESHOLD_THM5_INDEX
            ))
            .matched(
                q42_ok && d9_ok && threshold_consistent && k_faithful == cn::BOUND_THM5_INDEX,
            )
            .note("the unknown multiplying tau is the repunit length n and the decay base is alpha, matching the stated cutoff arithmetic here"),
    );

    // stage 10: sweep.
    let cert_k_usize = k_cert.to_usize().unwrap_or(cn::SWEEP_THM5);
    let mut limit = cn::SWEEP_THM5.max(cert_k_usize);
    if let Some(user) = opts.sweep_limit {
        limit = limit.max(user);
    }
    let result = search::solve_eq5(limit, (limit + 5) as u32);
    let strict: Vec<(usize, u32, u32, u8, u8)> = result
        .solutions
        .iter()
        .map(|s| (s.k, s.n, s.m, s.d1, s.d2))
        .collect();
    let strict_ok = strict
        == vec![
            (2, 2, 1, 1, 8),
            (3, 2, 1, 1, 4),
            (4, 2, 1, 2, 5),
            (5, 2, 1, 4, 3),
        ];
    // equal-length (n = m) representations exist exactly for the
    // single-digit terms: 1 twice over (q0 and q1), 3, and 7
    let count_value = |v: u32| result.degenerate.iter().filter(|s| s.value == v).count();
    let degenerate_ok = result.degenerate.len() == 24
        && count_value(1) == 16
        && count_value(3) == 6
        && count_value(7) == 2;
    report.discrepancies.push(Discrepancy {
        what: "listed difference representations of 1".into(),
        printed: "1 = 9 - 8 = 8 - 7 = ... = 2 - 1 appears among the representations".into(),
        computed: "those have equal repunit lengths n = m = 1, outside the stated constraint n > m; under the constraint the represented terms are 3, 7, 17, 41, and the equal-length representations (sixteen of 1, six of 3, two of 7) are collected separately".into(),
        note: "both q0 and q1 equal 1, which doubles the equal-length count for that value".into(),
    });
    let strict_values: Vec<String> = result
        .solutions
        .iter()
        .map(|s| s.value.to_string())
        .collect();
    report.stages.push(
        StageRecord::new(StageKind::Sweep, "sweep")
            .input("indexLimit", limit.to_string())
            .input("lengthLimit", (limit + 5).to_string())
            .output("solutionCount", result.solutions.len().to_string())
            .output("solutions", strict_values.join(" "))
            .output("degenerateCount", result.degenerate.len().to_string())
            .output(
                "degenerateBreakdown",
                format!(
                    "value 1 x {}, value 3 x {}, value 7 x {}",
                    count_value(1),
                    count_value(3),
                    count_value(7)
                ),
            )
            .paper("1, 3, 7, 17, 41")
            .matched(strict_ok && degenerate_ok)
            .note("strict solutions have n > m; the printed list also counts 1 through its equal-length representations"),
    );

    report.final_solutions = serde_json::to_value(&result).expect("serializable solutions");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_pipeline_reproduces_printed_bounds() {
        let report = prove_thm5(&PipelineOptions::default()).unwrap();
        assert!(report.all_matched(), "report:\n{}", report.to_text());
        let gap = report.stage("reduce-gap").unwrap();
        assert_eq!(gap.output_of("faithfulBound"), Some("80"));
        let index = report.stage("reduce-index").unwrap();
        assert_eq!(index.output_of("faithfulBound"), Some("49"));
        let sweep = report.stage("sweep").unwrap();
        assert_eq!(sweep.output_of("solutionCount"), Some("4"));
        assert_eq!(sweep.output_of("degenerateCount"), Some("24"));
        assert!(report.discrepancies.len() >= 4);
    }
}
