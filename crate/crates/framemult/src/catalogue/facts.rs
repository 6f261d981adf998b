//! Helpers the fixture facts are written in terms of. Every helper returns a
//! human-readable failure message so the regression suite can print exactly
//! which stated fact broke.

use super::*;
use crate::convergence::{self, Verdict};
use crate::dense::CMat;
use crate::inversion::{self, CaseOutcome, CertifyOptions, CertifyReport, Rule};
use crate::linop::dense_of;
use crate::multiplier;

pub(super) type FactResult = std::result::Result<(), String>;

pub(super) fn dense_spec(inst: &FixtureInstance, tols: &Tolerances) -> std::result::Result<CMat, String> {
    dense_of(&multiplier::build(&inst.spec), tols).map_err(|e| e.to_string())
}

pub(super) fn single_rule(inst: &FixtureInstance, rule: Rule, tols: &Tolerances) -> CertifyReport {
    let opts = CertifyOptions { order: vec![rule], ..Default::default() };
    inversion::certify(&inst.spec, &opts, tols)
}

pub(super) fn expect_fires(inst: &FixtureInstance, rule: Rule, tols: &Tolerances) -> FactResult {
    let report = single_rule(inst, rule, tols);
    match report.certificate {
        Some(cert) => {
            if cert.verified_residual > 100.0 * tols.tol_inv.max(1e-12) {
                return Err(format!(
                    "rule {rule} fired but the verified residual {} exceeds the tolerance",
                    cert.verified_residual
                ));
            }
            Ok(())
        }
        None => Err(format!(
            "rule {rule} did not fire: {:?}",
            report.nearest_misses.first().map(|m| m.reason.clone())
        )),
    }
}

pub(super) fn expect_refuses(inst: &FixtureInstance, rule: Rule, tols: &Tolerances) -> FactResult {
    let report = single_rule(inst, rule, tols);
    if report.certificate.is_some() {
        return Err(format!("rule {rule} fired but must refuse on this fixture"));
    }
    Ok(())
}

pub(super) fn expect_identity_operator(
    inst: &FixtureInstance,
    tols: &Tolerances,
    tol: f64,
) -> FactResult {
    let m = dense_spec(inst, tols)?;
    let err = m.sub(&CMat::identity(inst.dim)).max_abs();
    if err > tol {
        return Err(format!("operator differs from the identity by {err:.3e} (tol {tol:.1e})"));
    }
    Ok(())
}

pub(super) fn expect_min_sv(
    inst: &FixtureInstance,
    tols: &Tolerances,
    expected: f64,
    tol: f64,
) -> FactResult {
    let got = dense_spec(inst, tols)?.min_singular_value();
    if (got - expected).abs() > tol {
        return Err(format!("min singular value {got:.12e}, expected {expected:.12e}"));
    }
    Ok(())
}

pub(super) fn expect_diag_harmonic(inst: &FixtureInstance, tols: &Tolerances) -> FactResult {
    let m = dense_spec(inst, tols)?;
    for i in 0..inst.dim {
        for j in 0..inst.dim {
            let want = if i == j { 1.0 / (i as f64 + 1.0) } else { 0.0 };
            let got = m.at(i, j);
            if (got - Complex64::new(want, 0.0)).norm() > 1e-12 {
                return Err(format!("entry ({i},{j}) = {got}, expected {want}"));
            }
        }
    }
    Ok(())
}

/// Upper Bessel bound of the difference between the weighted analysis family
/// and the synthesis family.
pub(super) fn weighted_minus_synthesis_bound(
    inst: &FixtureInstance,
    tols: &Tolerances,
) -> std::result::Result<f64, String> {
    let w = crate::frames::weighted(&inst.spec.symbol().conj(), inst.spec.analysis_family());
    let diff = w.sub(inst.spec.synthesis_family()).map_err(|e| e.to_string())?;
    crate::frames::frame_bounds(&diff, crate::linop::SpectralMethod::DenseOracle, tols)
        .map(|b| b.b_upper)
        .map_err(|e| e.to_string())
}

pub(super) fn expect_synthesis_bounds(
    inst: &FixtureInstance,
    tols: &Tolerances,
    a: f64,
    b: f64,
    tol: f64,
) -> FactResult {
    let bounds = crate::frames::frame_bounds(
        inst.spec.synthesis_family(),
        crate::linop::SpectralMethod::DenseOracle,
        tols,
    )
    .map_err(|e| e.to_string())?;
    if (bounds.a_upper - a).abs() > tol || (bounds.b_upper - b).abs() > tol {
        return Err(format!(
            "synthesis bounds [{:.9}, {:.9}], expected [{a:.9}, {b:.9}]",
            bounds.a_upper, bounds.b_upper
        ));
    }
    Ok(())
}

/// Diagnostics verdict across the default sweep, re-instantiating the
/// fixture at each dimension.
pub(super) fn expect_verdict(
    inst: &FixtureInstance,
    expected: Verdict,
    tols: &Tolerances,
) -> FactResult {
    let id = inst.id.clone();
    let params = inst.params.clone();
    let report = convergence::unconditional_necessary(
        |d| spec_at(&id, &params, d),
        &convergence::DEFAULT_SWEEP,
        tols,
    )
    .map_err(|e| e.to_string())?;
    if report.verdict != expected {
        return Err(format!(
            "verdict {:?}, expected {expected:?} ({})",
            report.verdict, report.cited_rule
        ));
    }
    Ok(())
}

pub(super) fn expect_case(
    inst: &FixtureInstance,
    case: &str,
    outcome: CaseOutcome,
) -> FactResult {
    let v = inversion::riesz_case_table(
        inst.spec.synthesis_family().tags(),
        inst.spec.analysis_family().tags(),
        inst.spec.symbol().tags(),
    );
    if v.case != case || v.outcome != outcome {
        return Err(format!(
            "case table returned ({}, {:?}), expected ({case}, {outcome:?})",
            v.case, v.outcome
        ));
    }
    Ok(())
}

/// The weighted analysis family's Bessel trace across the sweep: bounded
/// (well defined) or growing (not well defined).
pub(super) fn expect_weighted_trace(
    inst: &FixtureInstance,
    bounded: bool,
    tols: &Tolerances,
) -> FactResult {
    let id = inst.id.clone();
    let params = inst.params.clone();
    let mut trace = Vec::new();
    for &d in &convergence::DEFAULT_SWEEP {
        let spec = spec_at(&id, &params, d).map_err(|e| e.to_string())?;
        let w = crate::frames::weighted(spec.symbol(), spec.analysis_family());
        let b = crate::frames::bessel_bound_upper(
            &w,
            crate::linop::SpectralMethod::DenseOracle,
            tols,
        )
        .map_err(|e| e.to_string())?;
        trace.push(b);
    }
    let ratio = trace.last().unwrap() / trace.first().unwrap().max(1e-300);
    let grew = ratio >= tols.growth_factor;
    if bounded && grew {
        return Err(format!("weighted Bessel trace grew {ratio:.2}x, expected bounded: {trace:?}"));
    }
    if !bounded && !grew {
        return Err(format!("weighted Bessel trace stayed at {ratio:.2}x, expected growth: {trace:?}"));
    }
    Ok(())
}

/// Certify with the default order and demand asymptotic Riesz-necessity
/// evidence of non-invertibility.
pub(super) fn expect_asymptotic_non_invertible(
    inst: &FixtureInstance,
    tols: &Tolerances,
) -> FactResult {
    let report = inversion::certify(&inst.spec, &CertifyOptions::default(), tols);
    match report.non_invertible {
        Some(ev) if ev.scope == inversion::EvidenceScope::Asymptotic => Ok(()),
        Some(ev) => Err(format!("non-invertibility evidence has scope {:?}", ev.scope)),
        None => Err(format!(
            "expected non-invertibility evidence; certificate: {:?}",
            report.certificate.map(|c| c.rule)
        )),
    }
}
