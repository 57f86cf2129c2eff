//! Pipeline for repdigits as differences of two sequence terms:
//! `q_n - q_m = d (10^k - 1)/9` with `n > m >= 0`, `1 <= d <= 9`,
//! `k >= 1`.  Two linear forms (with and without the `q_m` correction),
//! a Baker-type bound on each, two reductions, and a sweep.

use super::constants as cn;
use super::families;
use super::report::{Discrepancy, ProofReport, StageKind, StageRecord};
use super::{check_constant, fmt_dec, fmt_sci, tau_expr, to_int, PipelineError, PipelineOptions};
use crate::cfrac;
use crate::linforms::{
    matveev_coefficient, solve_log_bound, verify_matveev_coefficient, AlgebraicNumber,
    DegreeFactor, MatveevSpec,
};
use crate::realnum::{certify_less, Expr, RealError};
use crate::reduction::{self, ReduceOptions, ReductionProblem};
use crate::search;
use crate::sequences::{alpha, log_alpha};
use rug::Integer;

pub(crate) fn alpha_number() -> AlgebraicNumber {
    AlgebraicNumber::quadratic(1, -2, -1, true).expect("x^2 - 2x - 1 is irreducible")
}

fn bound_as_u32(stage: &str, b: &Integer) -> Result<u32, PipelineError> {
    b.to_u32().ok_or(PipelineError::Real {
        stage: stage.to_string(),
        source: RealError::OutOfDomain {
            what: format!("reduced bound {b} does not fit a block length"),
        },
    })
}

pub fn prove_thm3(opts: &PipelineOptions) -> Result<ProofReport, PipelineError> {
    let pol = opts.precision;
    let ropts = ReduceOptions::default();
    let mut report = ProofReport::new("thm3");

    // stage 1: lower bound for the dominant-block form.
    let stage = "matveev-gap";
    let real = PipelineError::real(stage);
    let spec = MatveevSpec {
        degree: 2,
        degree_factor: DegreeFactor::OnePlusLogD,
        coefficients: vec![
            log_alpha(),
            Expr::int(2) * Expr::int(10).log(),
            Expr::ratio(51, 5),
        ],
    };
    let mut checks = 0;
    let mut coeff_ok = true;
    for (a, gamma) in [
        (&spec.coefficients[0], alpha_number()),
        (&spec.coefficients[1], AlgebraicNumber::rational(10)),
    ] {
        coeff_ok &= verify_matveev_coefficient(a, &gamma, 2, pol).map_err(&real)?;
        checks += 1;
    }
    for d in 1..=9i64 {
        let gamma = AlgebraicNumber::ratio(2 * d, 9);
        coeff_ok &= verify_matveev_coefficient(&spec.coefficients[2], &gamma, 2, pol)
            .map_err(&real)?;
        checks += 1;
    }
    let c1 = matveev_coefficient(&spec);
    let chk1 = check_constant(&c1, &cn::c_thm3_case1(), pol).map_err(&real)?;
    let absorbed_ok = certify_less(
        &(Expr::rational(cn::c_thm3_case1()) + Expr::int(9).log()),
        &Expr::rational(cn::c_thm3_case1_absorbed()),
        pol,
    )
    .map_err(&real)?;
    report.stages.push(
        StageRecord::new(StageKind::InitialBound, stage)
            .input("form", "|1 - alpha^(-n) 10^k (2d/9)| < 9 alpha^(m - n)")
            .input("coefficients", "A1 = log alpha, A2 = 2 log 10, A3 = 10.2")
            .input("degreeBound", "D = n")
            .output("certifiedConstant", fmt_sci(chk1.certified))
            .output("coefficientChecks", format!("{}/{checks}", if coeff_ok { checks } else { 0 }))
            .output("absorbedConstant", "4.2e13")
            .paper("4.1e13")
            .matched(chk1.dominated && chk1.ratio_ok && absorbed_ok && coeff_ok)
            .note("adopted gap inequality: (n - m) log alpha < 4.2e13 (1 + log n)"),
    );

    // stage 2: lower bound for the corrected form, then the fixed point.
    let stage = "matveev-index";
    let real = PipelineError::real(stage);
    let base_spec = MatveevSpec {
        degree: 2,
        degree_factor: DegreeFactor::OnePlusLogD,
        // still a three-log form; the third coefficient is the
        // n-dependent budget and multiplies in below
        coefficients: vec![log_alpha(), Expr::int(2) * Expr::int(10).log(), Expr::int(1)],
    };
    let c2 = matveev_coefficient(&base_spec) * Expr::rational(cn::dec_pow10("4.4", 13));
    let chk2 = check_constant(&c2, &cn::c_thm3_case2(), pol).map_err(&real)?;
    let h_f = Expr::rational(cn::c_thm3_case2_absorbed()) / log_alpha();
    let solved = solve_log_bound(2, &h_f, pol).map_err(&real)?;
    let m_faithful = to_int(&cn::m_thm3());
    let solved_ok = solved <= m_faithful;
    let pairing = (Expr::int(1) + Expr::int(1) / Expr::int(95).log()).pow_int(2);
    let m_cert = solve_log_bound(2, &(h_f.clone() * pairing), pol).map_err(&real)?;
    report.stages.push(
        StageRecord::new(StageKind::InitialBound, stage)
            .input("form", "|1 - alpha^(-n) 10^k (2d / (9 (1 - alpha^(m-n))))| < 5 alpha^(-n)")
            .input(
                "coefficients",
                "A1 = log alpha, A2 = 2 log 10, A3 <= 11.6 + (n - m) log alpha <= 4.4e13 (1 + log n)",
            )
            .output("certifiedConstant", fmt_sci(chk2.certified))
            .output("absorbedConstant", "1.9e26")
            .output("solvedBound", fmt_sci(solved.to_f64()))
            .output("faithfulBound", "3.2e30")
            .output("certifiedBound", fmt_sci(m_cert.to_f64()))
            .paper("1.8e26")
            .matched(chk2.dominated && chk2.ratio_ok && solved_ok)
            .note("inverting n / (1 + log n)^2 < H via L < 2^r H (log H)^r lands at the solved bound, below the stated 3.2e30")
            .note("the certified column first multiplies H by (1 + 1/log 95)^2, which converts (1 + log n) to log n soundly for n > 95; smaller n is inside the sweep"),
    );

    // stage 3: reduce the gap n - m.
    let stage = "reduce-gap";
    let real = PipelineError::real(stage);
    let q68 = cn::tau_den_68();
    let conv68 = cfrac::convergent(&tau_expr(), 68, pol).map_err(&real)?;
    let q68_ok = conv68.q == q68;
    let a_gap = Expr::int(21);
    let a_budget_ok = certify_less(&(Expr::int(18) / log_alpha()), &a_gap, pol).map_err(&real)?;
    let problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::digit_ratio_family()),
        a: a_gap.clone(),
        b: alpha(),
        m: m_faithful.clone(),
    };
    let eval = reduction::evaluate_family(&problem, &q68, Some(68), pol, ropts).map_err(&real)?;
    let eps_gap = cn::dec(cn::EPS_THM3_GAP);
    let wb = reduction::w_bound_from(&a_gap, &alpha(), &q68, &eps_gap, pol).map_err(&real)?;
    let faithful_gap = wb - 1u32;
    let cert_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::digit_ratio_family()),
        a: a_gap.clone(),
        b: alpha(),
        m: m_cert.clone(),
    };
    let cert = reduction::reduce(&cert_problem, pol, ropts)
        .map_err(PipelineError::reduction(stage))?;
    let cert_gap = Integer::from(&cert.w_bound - 1);
    let negative_labels: Vec<String> = eval
        .negatives
        .iter()
        .map(|c| format!("{}: {}", c.label, fmt_dec(c.eps.to_f64())))
        .collect();
    if eval.negative_count > 0 {
        report.discrepancies.push(Discrepancy {
            what: "gap-reduction epsilon at the printed multiplier".into(),
            printed: format!(
                "epsilon = {} with epsilon > 0 for every digit",
                cn::EPS_THM3_GAP
            ),
            computed: format!(
                "{} of 9 digit cases have negative epsilon ({}); the printed value is not attained by any case",
                eval.negative_count,
                negative_labels.join(", ")
            ),
            note: "the stated gap bound still reproduces by direct threshold evaluation with the printed epsilon; the certified column advances to a clean multiplier instead".into(),
        });
    }
    let min_eps = eval
        .min_positive
        .as_ref()
        .map(|c| format!("{} at {}", fmt_dec(c.eps.to_f64()), c.label))
        .unwrap_or_else(|| "none".into());
    report.stages.push(
        StageRecord::new(StageKind::Reduction, stage)
            .input("inequality", "|u tau - n + log(2d/9)/log alpha| < 21 alpha^(-(n-m))")
            .input("multiplier", q68.to_string())
            .input("boundOnU", "3.2e30")
            .output("multiplierVerified", if q68_ok { "true" } else { "false" })
            .output("familyNegativeCount", eval.negative_count.to_string())
            .output("minPositiveEpsilon", min_eps)
            .output("faithfulBound", faithful_gap.to_string())
            .output("certifiedMultiplier", cert.family.multiplier.to_string())
            .output(
                "certifiedConvergentIndex",
                cert.family
                    .convergent_index
                    .map(|k| k.to_string())
                    .unwrap_or_else(|| "explicit".into()),
            )
            .output("certifiedEpsilonFloor", fmt_dec(cert.eps_lower.to_f64()))
            .output("certifiedBound", cert_gap.to_string())
            .output("rejectedMultipliers", cert.rejected.len().to_string())
            .paper("n - m <= 94")
            .matched(q68_ok && a_budget_ok && faithful_gap == cn::BOUND_THM3_GAP)
            .note("the transfer behind the coefficient 21 needs 9 alpha^(m-n) < 1/2, i.e. n - m >= 4; gaps 1..3 are carried inside the index-reduction family"),
    );

    // stage 4: reduce the index n at the printed composite multiplier.
    let stage = "reduce-index";
    let real = PipelineError::real(stage);
    let reported = cn::reported_index_multiplier();
    let q71 = cn::tau_den_71();
    let conv71 = cfrac::convergent(&tau_expr(), 71, pol).map_err(&real)?;
    let conv73 = cfrac::convergent(&tau_expr(), 73, pol).map_err(&real)?;
    let q71_ok = conv71.q == q71;
    let doubled_ok = reported == Integer::from(2) * &q71;
    report.discrepancies.push(Discrepancy {
        what: "index-reduction multiplier".into(),
        printed: format!("{reported} described as the 73rd convergent denominator of tau"),
        computed: format!(
            "the 73rd denominator is {}; the printed value equals exactly 2 times the 71st denominator {}",
            conv73.q, q71
        ),
        note: "the reduction lemma needs only a positive integer with small ||tau q||, and doubling a denominator keeps that property, so the step stays valid with the printed multiplier".into(),
    });
    let fam_bound = bound_as_u32(stage, &Integer::from(cn::BOUND_THM3_GAP))?;
    let problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::gap_corrected_family(fam_bound)),
        a: Expr::int(12),
        b: alpha(),
        m: m_faithful.clone(),
    };
    let eval = reduction::evaluate_family(&problem, &reported, None, pol, ropts).map_err(&real)?;
    let eps_index = cn::dec(cn::EPS_THM3_INDEX);
    let wb = reduction::w_bound_from(&Expr::int(12), &alpha(), &reported, &eps_index, pol)
        .map_err(&real)?;
    let computed_n = wb - 1u32;
    let loosened_ok = computed_n <= cn::BOUND_THM3_INDEX;
    // the sharper transfer certifies the coefficient 12 from n >= 3
    let a_small = Expr::int(5) * alpha().pow_int(-3);
    let factor = -(Expr::int(1) - a_small.clone()).log() / a_small;
    let a_needed = factor * Expr::int(5) / log_alpha();
    let precondition_ok = certify_less(&a_needed, &Expr::int(12), pol).map_err(&real)?;
    let cert_fam = bound_as_u32(stage, &cert_gap)?;
    let cert_problem = ReductionProblem {
        tau: tau_expr(),
        family: Box::new(families::gap_corrected_family_certified(cert_fam)),
        a: Expr::int(12),
        b: alpha(),
        m: m_cert.clone(),
    };
    let cert = reduction::reduce_per_case(&cert_problem, pol, ropts)
        .map_err(PipelineError::reduction(stage))?;
    // d = 9, j = 2 has shift exactly 1, so its inequality is homogeneous
    // and the inhomogeneous lemma cannot touch it at any multiplier
    let resonant_ok = families::gap_shift_alpha_power(9, 2) == Some(1);
    let homog =
        reduction::homogeneous_w_bound(&tau_expr(), &Expr::int(12), &alpha(), &m_cert, pol, ropts)
            .map_err(PipelineError::reduction(stage))?;
    let cert_w = cert.w_bound.clone().max(homog.clone());
    let cert_n = Integer::from(&cert_w - 1);
    let min_eps = eval
        .min_positive
        .as_ref()
        .map(|c| format!("{} at {}", fmt_dec(c.eps.to_f64()), c.label))
        .unwrap_or_else(|| "none".into());
    if eval.negative_count > 0 {
        report.discrepancies.push(Discrepancy {
            what: "index-reduction epsilon at the printed multiplier".into(),
            printed: format!(
                "epsilon = {} for the whole family",
                cn::EPS_THM3_INDEX
            ),
            computed: format!(
                "{} of {} cases have negative epsilon at that multiplier; the case d=9, j=2 has shift exactly 1 (2/(1 - alpha^(-2)) = alpha identically), so its epsilon is negative at every multiplier",
                eval.negative_count, eval.total
            ),
            note: "the resonant case is homogeneous and is excluded by the best-approximation bound instead; the remaining negatives clear at later convergents in the certified column".into(),
        });
    }
    report.stages.push(
        StageRecord::new(StageKind::Reduction, stage)
            .input(
                "inequality",
                "|k tau - n + log(2d / (9 (1 - alpha^(-j))))/log alpha| < 12 alpha^(-n), j = n - m",
            )
            .input("multiplier", reported.to_string())
            .input("familySize", format!("9 x {fam_bound}"))
            .output("multiplierFactored", if doubled_ok && q71_ok { "2 * q71, verified" } else { "MISMATCH" }.to_string())
            .output("familyNegativeCount", eval.negative_count.to_string())
            .output("minPositiveEpsilon", min_eps)
            .output("thresholdBound", computed_n.to_string())
            .output("faithfulBound", cn::BOUND_THM3_INDEX.to_string())
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
            .output("certifiedBound", cert_n.to_string())
            .paper(format!("n <= {}", cn::BOUND_THM3_INDEX))
            .matched(doubled_ok && q71_ok && loosened_ok && precondition_ok && resonant_ok)
            .note("direct threshold evaluation with the printed epsilon excludes n above the threshold bound; the stated n <= 91 is looser by one and adopted as stated")
            .note("the printed transfer precondition n >= 2 leaves 5 alpha^(-2) = 0.86 above 1/2, where the factor-2 transfer fails; from n >= 3 the sharp factor 1.236 certifies the coefficient (7.01 <= 12), and n <= 2 is inside the sweep")
            .note("the certified column reduces case by case: each gap shift keeps its own first accepting convergent, since no single multiplier clears a family of this size")
            .note("the resonant case d=9, j=2 is certified exactly (field arithmetic on 1 - alpha^(-2) = 2/alpha) and bounded homogeneously; the certified bound is the larger of the two columns"),
    );

    // stage 5: exhaustive sweep over the larger of all columns.
    let stage = "sweep";
    let cert_n_usize = cert_n.to_usize().unwrap_or(cn::SWEEP_THM3);
    let mut limit = cn::SWEEP_THM3.max(cert_n_usize);
    if let Some(user) = opts.sweep_limit {
        limit = limit.max(user);
    }
    let solutions = search::solve_eq3(limit);
    let computed: Vec<(usize, usize, u8, u32)> = solutions
        .iter()
        .map(|s| (s.n, s.m, s.d, s.k))
        .collect();
    let printed: Vec<(usize, usize, u8, u32)> = vec![
        (2, 0, 2, 1),
        (2, 1, 2, 1),
        (3, 0, 6, 1),
        (3, 1, 6, 1),
        (3, 2, 4, 1),
        (7, 4, 4, 3),
    ];
    let corrected: Vec<(usize, usize, u8, u32)> = printed
        .iter()
        .map(|&t| if t == (7, 4, 4, 3) { (7, 4, 2, 3) } else { t })
        .collect();
    let sweep_ok = computed == corrected;
    if computed != printed {
        report.discrepancies.push(Discrepancy {
            what: "final solution list, largest entry".into(),
            printed: "(n, m, d, k) = (7, 4, 4, 3)".into(),
            computed: "(n, m, d, k) = (7, 4, 2, 3)".into(),
            note: "q_7 - q_4 = 239 - 17 = 222, the repdigit with digit 2 and length 3; 444 is not a difference of two terms in range".into(),
        });
    }
    report.stages.push(
        StageRecord::new(StageKind::Sweep, stage)
            .input("limit", limit.to_string())
            .output("solutionCount", solutions.len().to_string())
            .output(
                "solutions",
                computed
                    .iter()
                    .map(|t| format!("({},{},{},{})", t.0, t.1, t.2, t.3))
                    .collect::<Vec<_>>()
                    .join(" "),
            )
            .paper("(2,0,2,1) (2,1,2,1) (3,0,6,1) (3,1,6,1) (3,2,4,1) (7,4,4,3)")
            .matched(sweep_ok)
            .note("every listed tuple re-verified by exact integer arithmetic; the digit erratum in the largest entry is recorded as a discrepancy"),
    );

    report.final_solutions = serde_json::to_value(&solutions).expect("serializable solutions");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_pipeline_reproduces_printed_bounds() {
        let report = prove_thm3(&PipelineOptions::default()).unwrap();
        assert!(report.all_matched(), "report:\n{}", report.to_text());
        let gap = report.stage("reduce-gap").unwrap();
        assert_eq!(gap.output_of("faithfulBound"), Some("94"));
        let index = report.stage("reduce-index").unwrap();
        assert_eq!(index.output_of("thresholdBound"), Some("90"));
        assert_eq!(index.output_of("faithfulBound"), Some("91"));
        let sweep = report.stage("sweep").unwrap();
        assert_eq!(sweep.output_of("solutionCount"), Some("6"));
        // both reference errata are on record
        assert!(report.discrepancies.len() >= 2);
    }
}
