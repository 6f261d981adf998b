//! Command handlers: build the JSON reports and map results to exit codes.

use std::path::Path;
use std::process::ExitCode;

use serde_json::json;

use framemult::catalogue;
use framemult::convergence::{self, Verdict};
use framemult::frames::{self, SequenceFamily};
use framemult::inversion::{self, CertifyOptions, CertifyReport, InvertCertificate};
use framemult::linop::{dense_of, SpectralMethod};
use framemult::multiplier::{self, MultiplierSpec};

use crate::schema::{
    complex_matrix_json, complex_vec_json, FamilySchema, SchemaError, SpecSchema, VectorsSchema,
};
use crate::{CliError, Job};

pub fn write_json(out: Option<&Path>, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report serialization");
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_spec(job: &Job) -> Result<SpecSchema, CliError> {
    let mut raw = job.raw.clone();
    if let Some(obj) = raw.as_object_mut() {
        obj.remove("config");
    }
    serde_json::from_value(raw)
        .map_err(|e| CliError::Schema(SchemaError { pointer: "/".into(), message: e.to_string() }))
}

/// `bounds` accepts either a bare family or a full spec (bounds of both
/// families are reported).
pub fn bounds(job: &Job) -> Result<ExitCode, CliError> {
    let mut raw = job.raw.clone();
    if let Some(obj) = raw.as_object_mut() {
        obj.remove("config");
    }
    let families: Vec<(&str, FamilySchema)> = if raw.get("kind").is_some() {
        let fam: FamilySchema = serde_json::from_value(raw).map_err(|e| {
            CliError::Schema(SchemaError { pointer: "/".into(), message: e.to_string() })
        })?;
        vec![("family", fam)]
    } else {
        let spec: SpecSchema = parse_spec(job)?;
        vec![("synthesis_family", spec.synthesis_family), ("analysis_family", spec.analysis_family)]
    };

    let mut results = Vec::new();
    for (role, fam) in &families {
        let dims: Vec<usize> = if fam.is_generator() && job.explicit_dims {
            job.dims.clone()
        } else {
            vec![fam.dim()]
        };
        for d in dims {
            let family = fam.realize(&format!("/{role}"), Some(d))?;
            let method = if job.oracle && d <= job.tols.oracle_dim_cap {
                SpectralMethod::DenseOracle
            } else {
                SpectralMethod::PowerIteration
            };
            let b = frames::frame_bounds(&family, method, &job.tols)
                .map_err(|e| CliError::Other(e.to_string()))?;
            results.push(json!({
                "role": role,
                "dim": d,
                "count": family.count(),
                "a_lower": b.a_lower,
                "a_upper": b.a_upper,
                "b_lower": b.b_lower,
                "b_upper": b.b_upper,
                "method": match b.method {
                    SpectralMethod::DenseOracle => "dense_oracle",
                    SpectralMethod::PowerIteration => "power_iteration",
                },
                "spans": b.certifies_frame(&job.tols),
            }));
        }
    }
    write_json(job.out.as_deref(), &json!({"command": "bounds", "results": results}))?;
    Ok(ExitCode::SUCCESS)
}

pub fn diagnose(job: &Job) -> Result<ExitCode, CliError> {
    let spec_schema = parse_spec(job)?;
    let sweep: Vec<usize> = if spec_schema.sweepable() {
        job.dims.clone()
    } else {
        vec![spec_schema.base_dim()]
    };
    let report = convergence::unconditional_necessary(
        |d| {
            spec_schema
                .realize(Some(d))
                .map_err(|e| framemult::Error::Oracle(e.to_string()))
        },
        &sweep,
        &job.tols,
    )
    .map_err(|e| CliError::Other(e.to_string()))?;
    let swap_consistent = convergence::swap_equivalence_check(
        |d| {
            spec_schema
                .realize(Some(d))
                .map_err(|e| framemult::Error::Oracle(e.to_string()))
        },
        &sweep,
        &job.tols,
    )
    .map_err(|e| CliError::Other(e.to_string()))?;

    let verdict = match report.verdict {
        Verdict::NecessaryConditionsHold => "necessary_conditions_hold",
        Verdict::Violated => "violated",
        Verdict::Inconclusive => "inconclusive",
    };
    write_json(
        job.out.as_deref(),
        &json!({
            "command": "diagnose",
            "sweep_dims": report.sweep_dims,
            "mixed_norm_trace": report.mixed_norm_trace,
            "bessel_trace_a": report.bessel_trace_a,
            "bessel_trace_b": report.bessel_trace_b,
            "verdict": verdict,
            "cited_rule": report.cited_rule,
            "swap_consistent": swap_consistent,
        }),
    )?;
    Ok(if report.verdict == Verdict::Violated { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn certificate_json(cert: &InvertCertificate) -> serde_json::Value {
    json!({
        "rule": cert.rule.wire_name(),
        "constants": cert.constants,
        "sandwich": [cert.sandwich_lower, cert.sandwich_upper],
        "terms_used": cert.terms_used,
        "residual": cert.verified_residual,
        "notes": cert.notes,
    })
}

fn report_json(report: &CertifyReport) -> serde_json::Value {
    let nearest: Vec<_> = report
        .nearest_misses
        .iter()
        .map(|m| json!({"rule": m.rule.wire_name(), "reason": m.reason, "constants": m.constants}))
        .collect();
    json!({
        "command": "certify",
        "fired": report.fired(),
        "certificate": report.certificate.as_ref().map(certificate_json),
        "non_invertible": report.non_invertible.as_ref().map(|ev| json!({
            "scope": match ev.scope {
                inversion::EvidenceScope::Truncation => "truncation",
                inversion::EvidenceScope::Asymptotic => "asymptotic",
            },
            "detail": ev.detail,
            "margin": ev.margin,
        })),
        "nearest_misses": nearest,
        "oracle_min_sv": report.oracle_min_sv,
        "pruned_indices": report.pruned_indices,
    })
}

pub fn certify(job: &Job, emit_inverse: bool) -> Result<ExitCode, CliError> {
    let spec_schema = parse_spec(job)?;
    let spec = spec_schema.realize(None)?;
    let opts = CertifyOptions {
        order: job.order.clone(),
        series_tol: job.series_tol,
        advisory_oracle: job.oracle,
    };
    let report = inversion::certify(&spec, &opts, &job.tols);
    let mut payload = report_json(&report);
    if emit_inverse {
        if let Some(cert) = &report.certificate {
            let dense = dense_of(&cert.inverse, &job.tols)
                .map_err(|e| CliError::Other(e.to_string()))?;
            payload["command"] = json!("invert");
            payload["inverse_dense"] = complex_matrix_json(&dense);
        }
    }
    write_json(job.out.as_deref(), &payload)?;
    Ok(if report.fired() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

pub fn apply(job: &Job, vectors: &VectorsSchema) -> Result<ExitCode, CliError> {
    let spec_schema = parse_spec(job)?;
    let spec: MultiplierSpec = spec_schema.realize(None)?;
    let op = multiplier::build(&spec);
    let inputs = vectors.realize(spec.dim())?;
    let outputs: Vec<_> = inputs.iter().map(|v| complex_vec_json(&op.apply(v))).collect();
    write_json(
        job.out.as_deref(),
        &json!({"command": "apply", "dim": spec.dim(), "applied": outputs}),
    )?;
    Ok(ExitCode::SUCCESS)
}

pub fn catalogue_list(out: Option<&Path>) -> Result<ExitCode, CliError> {
    let fixtures: Vec<_> = catalogue::all()
        .iter()
        .map(|f| {
            json!({
                "id": f.id,
                "aliases": f.aliases,
                "summary": f.summary,
                "order_sensitive": f.order_sensitive,
                "params": f.params.iter().map(|p| json!({
                    "name": p.name,
                    "default": p.default,
                    "range": p.range,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    write_json(out, &json!({"command": "catalogue", "fixtures": fixtures}))?;
    Ok(ExitCode::SUCCESS)
}

