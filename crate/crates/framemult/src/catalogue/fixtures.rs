//! The fixture table.

use super::facts::*;
use super::generators::{family, symbol};
use super::*;
use crate::convergence::Verdict;
use crate::inversion::{CaseOutcome, Rule};

fn p1(key: &str, value: f64) -> Params {
    [(key.to_string(), value)].into_iter().collect()
}

fn p2(k1: &str, v1: f64, k2: &str, v2: f64) -> Params {
    [(k1.to_string(), v1), (k2.to_string(), v2)].into_iter().collect()
}

fn ones_spec(phi: SequenceFamily, psi: SequenceFamily) -> Result<MultiplierSpec> {
    let count = phi.count().min(psi.count());
    MultiplierSpec::aligned(Symbol::ones(count), phi, psi)
}

fn fixture(
    id: &'static str,
    aliases: &'static [&'static str],
    summary: &'static str,
    params: &'static [ParamSpec],
    order_sensitive: bool,
    build: impl Fn(&Params, usize) -> Result<MultiplierSpec> + Sync + Send + 'static,
    facts: Vec<FactCheck>,
) -> Fixture {
    Fixture { id, aliases, summary, params, order_sensitive, build: Box::new(build), facts }
}

fn case_fact(case: &'static str, outcome: CaseOutcome) -> FactCheck {
    fact("Riesz-side case table verdict", FactSource::Stated, move |inst, _| {
        expect_case(inst, case, outcome)
    })
}

fn weighted_trace_fact(bounded: bool) -> FactCheck {
    let name = if bounded {
        "weighted analysis Bessel trace stays bounded (well defined)"
    } else {
        "weighted analysis Bessel trace grows (not well defined)"
    };
    fact(name, FactSource::OracleDerived, move |inst, tols| expect_weighted_trace(inst, bounded, tols))
}

fn identity_fact() -> FactCheck {
    fact("operator is the identity", FactSource::Stated, |inst, tols| {
        expect_identity_operator(inst, tols, 1e-12)
    })
}

fn harmonic_diag_fact() -> FactCheck {
    fact(
        "operator is diag(1/n): well defined, margins collapse like 1/d",
        FactSource::OracleDerived,
        |inst, tols| {
            expect_diag_harmonic(inst, tols)?;
            expect_min_sv(inst, tols, 1.0 / inst.dim as f64, 1e-12)
        },
    )
}

pub(super) fn build_fixtures() -> Vec<Fixture> {
    let mut fixtures = vec![
        fixture(
            "ex5.1",
            &[],
            "harmonically damped diagonal: injective at every truncation, margins decay like 1/d",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", -1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("onb", &Params::new(), d)?,
                )
            },
            vec![
                fact("operator equals diag(1/n)", FactSource::Stated, |inst, tols| {
                    expect_diag_harmonic(inst, tols)
                }),
                fact("min singular value is exactly 1/d", FactSource::OracleDerived, |inst, tols| {
                    expect_min_sv(inst, tols, 1.0 / inst.dim as f64, 1e-12)
                }),
            ],
        ),
        fixture(
            "ex5.2",
            &["p1ex"],
            "sharpness of the near-one symbol rule: the deviation supremum sits exactly on the threshold",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", -1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("onb", &Params::new(), d)?,
                )
            },
            vec![
                fact("near-one symbol rule refuses at every truncation", FactSource::Stated, |inst, tols| {
                    expect_refuses(inst, Rule::SymbolNearOne, tols)
                }),
                fact("canonical-dual variant refuses as well", FactSource::Stated, |inst, tols| {
                    expect_refuses(inst, Rule::SymbolNearOneCanonical, tols)
                }),
                fact("min singular value is exactly 1/d", FactSource::OracleDerived, |inst, tols| {
                    expect_min_sv(inst, tols, 1.0 / inst.dim as f64, 1e-12)
                }),
            ],
        ),
        fixture(
            "ex5.3a",
            &["exof-invertible"],
            "two overcomplete frames whose multiplier is the identity",
            no_params(),
            false,
            |_, d| {
                ones_spec(
                    family("repeated_first", &Params::new(), d)?,
                    family("repeated_first_dual", &Params::new(), d)?,
                )
            },
            vec![
                identity_fact(),
                fact("synthesis family is overcomplete (not Riesz)", FactSource::OracleDerived, |inst, tols| {
                    let m = crate::frames::riesz_margin(inst.spec.synthesis_family(), tols);
                    if m.certified {
                        return Err("overcomplete family certified as Riesz".into());
                    }
                    Ok(())
                }),
            ],
        ),
        fixture(
            "ex5.3b",
            &["exof-noninvertible"],
            "two overcomplete frames whose multiplier has an exact kernel",
            no_params(),
            false,
            |_, d| {
                ones_spec(
                    family("doubled", &Params::new(), d)?,
                    family("repeated_first", &Params::new(), d)?,
                )
            },
            vec![fact("operator has an exact kernel", FactSource::OracleDerived, |inst, tols| {
                let sv = dense_spec(inst, tols)?.min_singular_value();
                if sv > 1e-12 {
                    return Err(format!("min singular value {sv:.3e}, expected 0"));
                }
                Ok(())
            })],
        ),
        fixture(
            "ex5.4",
            &["noninvex"],
            "sharpness of the perturbation bound: harmonically decaying analysis family on the basis",
            k_any(),
            false,
            |params, d| {
                ones_spec(
                    family("onb", &Params::new(), d)?,
                    family("harmonic_first_basis", &p1("k", params["k"]), d)?,
                )
            },
            vec![
                fact(
                    "perturbation Bessel bound is max(|k-1|^2, (1-1/d)^2)",
                    FactSource::Stated,
                    |inst, tols| {
                        let k = inst.params["k"];
                        let d = inst.dim as f64;
                        let expected = ((k - 1.0).powi(2)).max((1.0 - 1.0 / d).powi(2));
                        let got = weighted_minus_synthesis_bound(inst, tols)?;
                        if (got - expected).abs() > 1e-10 * expected.max(1.0) {
                            return Err(format!("bound {got:.12}, expected {expected:.12}"));
                        }
                        Ok(())
                    },
                ),
                fact("perturbation rules refuse for |k-1| >= 1", FactSource::Stated, |inst, tols| {
                    if (inst.params["k"] - 1.0).abs() < 1.0 {
                        return Ok(());
                    }
                    expect_refuses(inst, Rule::WeightedNearFrame, tols)?;
                    expect_refuses(inst, Rule::WeightedNearDual, tols)?;
                    expect_refuses(inst, Rule::SignedNearFrame, tols)
                }),
                fact("min singular value is min(|k|, 1/d)", FactSource::OracleDerived, |inst, tols| {
                    let expected = inst.params["k"].abs().min(1.0 / inst.dim as f64);
                    expect_min_sv(inst, tols, expected, 1e-12)
                }),
                fact(
                    "Riesz necessity certifies asymptotic non-invertibility",
                    FactSource::Stated,
                    |inst, tols| expect_asymptotic_non_invertible(inst, tols),
                ),
            ],
        ),
        fixture(
            "ex5.5a",
            &["inv22a"],
            "invertible beyond every perturbation bound: first weight scaled to k",
            k_nonzero(),
            false,
            |params, d| {
                MultiplierSpec::aligned(
                    symbol("affine_first", &p1("k", params["k"]), d)?,
                    family("onb", &Params::new(), d)?,
                    family("onb", &Params::new(), d)?,
                )
            },
            vec![
                fact("perturbation Bessel bound is |k-1|^2", FactSource::Stated, |inst, tols| {
                    let k = inst.params["k"];
                    let expected = (k - 1.0).powi(2);
                    let got = weighted_minus_synthesis_bound(inst, tols)?;
                    if (got - expected).abs() > 1e-10 * expected.max(1.0) {
                        return Err(format!("bound {got:.12}, expected {expected:.12}"));
                    }
                    Ok(())
                }),
                fact(
                    "perturbation rules refuse for |k-1| >= 1, oracle invertible anyway",
                    FactSource::OracleDerived,
                    |inst, tols| {
                        let k = inst.params["k"];
                        if (k - 1.0).abs() >= 1.0 {
                            expect_refuses(inst, Rule::WeightedNearFrame, tols)?;
                            expect_refuses(inst, Rule::WeightedNearDual, tols)?;
                        }
                        let sv = dense_spec(inst, tols)?.min_singular_value();
                        let expected = k.abs().min(1.0);
                        if (sv - expected).abs() > 1e-10 {
                            return Err(format!("min singular value {sv}, expected {expected}"));
                        }
                        Ok(())
                    },
                ),
                fact("default dispatcher still certifies invertibility", FactSource::Stated, |inst, tols| {
                    let report = crate::inversion::certify(
                        &inst.spec,
                        &crate::inversion::CertifyOptions::default(),
                        tols,
                    );
                    if report.certificate.is_none() {
                        return Err("no rule fired on an invertible diagonal spec".into());
                    }
                    Ok(())
                }),
            ],
        ),
        fixture(
            "ex5.5b",
            &["inv22b"],
            "doubled identity: perturbation bound exactly on the threshold, operator trivially invertible",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("constant", &p1("re", 2.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("onb", &Params::new(), d)?,
                )
            },
            vec![
                fact("perturbation Bessel bound is exactly 1", FactSource::Stated, |inst, tols| {
                    let got = weighted_minus_synthesis_bound(inst, tols)?;
                    if (got - 1.0).abs() > 1e-10 {
                        return Err(format!("bound {got:.12}, expected 1"));
                    }
                    Ok(())
                }),
                fact("both weighted-perturbation rules refuse at the boundary", FactSource::Stated, |inst, tols| {
                    expect_refuses(inst, Rule::WeightedNearFrame, tols)?;
                    expect_refuses(inst, Rule::WeightedNearDual, tols)
                }),
                fact("operator is twice the identity", FactSource::Stated, |inst, tols| {
                    let m = dense_spec(inst, tols)?;
                    let twice =
                        crate::dense::CMat::identity(inst.dim).scale(Complex64::new(2.0, 0.0));
                    let err = m.sub(&twice).max_abs();
                    if err > 1e-12 {
                        return Err(format!("differs from 2I by {err:.3e}"));
                    }
                    Ok(())
                }),
            ],
        ),
        fixture(
            "ex5.6",
            &["exdual"],
            "overcomplete frame with the weighted analysis side a uniform (1+k) rescale: frame-centered rule fires, dual-centered refuses",
            k_open_half(),
            false,
            |params, d| {
                let phi = family("repeated_first", &Params::new(), d)?;
                let count = phi.count();
                MultiplierSpec::aligned(
                    symbol("constant", &p1("re", 1.0 + params["k"]), count)?,
                    phi.clone(),
                    phi,
                )
            },
            vec![
                fact("synthesis bounds are [1, 2]", FactSource::Stated, |inst, tols| {
                    expect_synthesis_bounds(inst, tols, 1.0, 2.0, 1e-10)
                }),
                fact("perturbation Bessel bound is 2 k^2", FactSource::Stated, |inst, tols| {
                    let k = inst.params["k"];
                    let got = weighted_minus_synthesis_bound(inst, tols)?;
                    if (got - 2.0 * k * k).abs() > 1e-9 {
                        return Err(format!("bound {got:.12}, expected {}", 2.0 * k * k));
                    }
                    Ok(())
                }),
                fact("frame-centered weighted perturbation fires", FactSource::Stated, |inst, tols| {
                    expect_fires(inst, Rule::WeightedNearFrame, tols)
                }),
                fact("dual-centered weighted perturbation refuses", FactSource::Stated, |inst, tols| {
                    expect_refuses(inst, Rule::WeightedNearDual, tols)
                }),
            ],
        ),
        fixture(
            "ex5.7",
            &["exdual2"],
            "non-canonical dual as analysis family: dual-centered rule fires, frame-centered refuses",
            no_params(),
            false,
            |_, d| {
                ones_spec(
                    family("repeated_first", &Params::new(), d)?,
                    family("offdiag_dual", &Params::new(), d)?,
                )
            },
            vec![
                identity_fact(),
                fact("dual-centered weighted perturbation fires", FactSource::Stated, |inst, tols| {
                    expect_fires(inst, Rule::WeightedNearDual, tols)
                }),
                fact("frame-centered weighted perturbation refuses", FactSource::Stated, |inst, tols| {
                    expect_refuses(inst, Rule::WeightedNearFrame, tols)
                }),
            ],
        ),
        fixture(
            "ex5.8",
            &["exnew"],
            "doubled basis with one halved analysis vector, constant weight 4: signed rule fires, weighted-perturbation refuses",
            no_params(),
            false,
            |_, d| {
                let phi = family("doubled", &Params::new(), d)?;
                let count = phi.count();
                MultiplierSpec::aligned(
                    symbol("constant", &p1("re", 4.0), count)?,
                    phi,
                    family("doubled_halved_second", &Params::new(), d)?,
                )
            },
            vec![
                fact("synthesis bounds are [2, 2]", FactSource::Stated, |inst, tols| {
                    expect_synthesis_bounds(inst, tols, 2.0, 2.0, 1e-10)
                }),
                fact("family difference Bessel bound is 1/4", FactSource::Stated, |inst, tols| {
                    let diff = inst
                        .spec
                        .analysis_family()
                        .sub(inst.spec.synthesis_family())
                        .map_err(|e| e.to_string())?;
                    let b = crate::frames::frame_bounds(
                        &diff,
                        crate::linop::SpectralMethod::DenseOracle,
                        tols,
                    )
                    .map_err(|e| e.to_string())?;
                    if (b.b_upper - 0.25).abs() > 1e-10 {
                        return Err(format!("bound {}, expected 0.25", b.b_upper));
                    }
                    Ok(())
                }),
                fact("operator is diag(6, 8, 8, ...)", FactSource::Stated, |inst, tols| {
                    let m = dense_spec(inst, tols)?;
                    for i in 0..inst.dim {
                        let want = if i == 0 { 6.0 } else { 8.0 };
                        if (m.at(i, i) - Complex64::new(want, 0.0)).norm() > 1e-12 {
                            return Err(format!("diagonal entry {i} is {}", m.at(i, i)));
                        }
                    }
                    Ok(())
                }),
                fact("signed frame perturbation fires", FactSource::Stated, |inst, tols| {
                    expect_fires(inst, Rule::SignedNearFrame, tols)
                }),
                fact(
                    "weighted frame perturbation refuses (bound 18 vs threshold 2)",
                    FactSource::Stated,
                    |inst, tols| {
                        let got = weighted_minus_synthesis_bound(inst, tols)?;
                        if (got - 18.0).abs() > 1e-9 {
                            return Err(format!("bound {got}, expected 18"));
                        }
                        expect_refuses(inst, Rule::WeightedNearFrame, tols)
                    },
                ),
            ],
        ),
        fixture(
            "8yes7no",
            &[],
            "signed symbol cancelling signed analysis scaling: weighted-perturbation fires, signed rule refuses",
            k_open_half(),
            false,
            |params, d| {
                let phi = family("repeated_first", &Params::new(), d)?;
                let psi =
                    family("signed_scaled_repeated_first", &p1("scale", 1.0 + params["k"]), d)?;
                let count = phi.count().min(psi.count());
                MultiplierSpec::aligned(
                    symbol("alternating_first_pair", &Params::new(), count)?,
                    phi,
                    psi,
                )
            },
            vec![
                fact("weighted frame perturbation fires", FactSource::Stated, |inst, tols| {
                    expect_fires(inst, Rule::WeightedNearFrame, tols)
                }),
                fact("signed frame perturbation refuses (mixed signs)", FactSource::Stated, |inst, tols| {
                    expect_refuses(inst, Rule::SignedNearFrame, tols)
                }),
            ],
        ),
        fixture(
            "ex5.9",
            &["9yes7no"],
            "signed symbol against a sign-flipped dual: dual-centered rule fires, signed rule refuses",
            no_params(),
            false,
            |_, d| {
                let phi = family("repeated_first", &Params::new(), d)?;
                let psi = family("offdiag_dual_signed", &Params::new(), d)?;
                let count = phi.count().min(psi.count());
                MultiplierSpec::aligned(
                    symbol("alternating_first_pair", &Params::new(), count)?,
                    phi,
                    psi,
                )
            },
            vec![
                fact("dual-centered weighted perturbation fires", FactSource::Stated, |inst, tols| {
                    expect_fires(inst, Rule::WeightedNearDual, tols)
                }),
                fact("signed frame perturbation refuses (mixed signs)", FactSource::Stated, |inst, tols| {
                    expect_refuses(inst, Rule::SignedNearFrame, tols)
                }),
            ],
        ),
        fixture(
            "ex5.10",
            &["7yes9no"],
            "uniform (1+k) analysis rescale: signed rule fires, dual-centered refuses",
            k_open_half(),
            false,
            |params, d| {
                ones_spec(
                    family("repeated_first", &Params::new(), d)?,
                    family("scaled_repeated_first", &p1("scale", 1.0 + params["k"]), d)?,
                )
            },
            vec![
                fact("signed frame perturbation fires", FactSource::Stated, |inst, tols| {
                    expect_fires(inst, Rule::SignedNearFrame, tols)
                }),
                fact("dual-centered weighted perturbation refuses", FactSource::Stated, |inst, tols| {
                    expect_refuses(inst, Rule::WeightedNearDual, tols)
                }),
            ],
        ),
        fixture(
            "zero",
            &[],
            "interleaved zeros: every index dies in the pruning, the multiplier is the zero operator",
            no_params(),
            false,
            |_, d| {
                ones_spec(
                    family("zero_interleave_a", &Params::new(), d)?,
                    family("zero_interleave_b", &Params::new(), d)?,
                )
            },
            vec![fact(
                "pruning empties the spec and the operator is zero",
                FactSource::Stated,
                |inst, tols| {
                    match inst.spec.pruned() {
                        Err(crate::error::Error::EmptyAfterPrune) => {}
                        other => return Err(format!("pruning returned {other:?}")),
                    }
                    let m = dense_spec(inst, tols)?;
                    if m.max_abs() > 1e-15 {
                        return Err("operator is not zero".into());
                    }
                    Ok(())
                },
            )],
        ),
        fixture(
            "identity",
            &[],
            "stars and zeros interleaved so that pruning leaves the plain basis pair: the identity",
            no_params(),
            false,
            |_, d| {
                let phi = family("identity_triplet_a", &Params::new(), d)?;
                let count = phi.count();
                MultiplierSpec::aligned(
                    symbol("triplet_middle_one", &Params::new(), count)?,
                    phi,
                    family("identity_triplet_b", &Params::new(), d)?,
                )
            },
            vec![
                fact("operator is the identity in both orientations", FactSource::Stated, |inst, tols| {
                    expect_identity_operator(inst, tols, 1e-12)?;
                    let swapped = FixtureInstance { spec: inst.spec.swapped(), ..inst.clone() };
                    expect_identity_operator(&swapped, tols, 1e-12)
                }),
                fact("pruning keeps exactly the plain basis pair", FactSource::Stated, |inst, _| {
                    let (pruned, _) = inst.spec.pruned().map_err(|e| e.to_string())?;
                    if pruned.count() != inst.dim {
                        return Err(format!("pruned count {}", pruned.count()));
                    }
                    for (k, v) in pruned.synthesis_family().vectors().iter().enumerate() {
                        if (v[k] - Complex64::new(1.0, 0.0)).norm() > 1e-15 {
                            return Err(format!("pruned synthesis vector {k} is not e_{k}"));
                        }
                    }
                    Ok(())
                }),
            ],
        ),
        fixture(
            "sec2-nonnbb",
            &[],
            "frame whose vector norms decay geometrically: spanning at every truncation, never norm-bounded below",
            no_params(),
            false,
            |_, d| {
                let phi = family("geometric_interleave", &Params::new(), d)?;
                ones_spec(phi.clone(), phi)
            },
            vec![
                fact(
                    "lower bound is the geometric partial sum, upper bound 1",
                    FactSource::Stated,
                    |inst, tols| {
                        let a: f64 = (1..inst.dim).map(|k| 0.25f64.powi(k as i32)).sum();
                        expect_synthesis_bounds(inst, tols, a, 1.0, 1e-10)
                    },
                ),
                fact(
                    "smallest vector norm decays at least 10x across a 16x sweep",
                    FactSource::OracleDerived,
                    |inst, _| {
                        let id = inst.id.clone();
                        let params = inst.params.clone();
                        let min_norm = |d: usize| -> std::result::Result<f64, String> {
                            let spec = spec_at(&id, &params, d).map_err(|e| e.to_string())?;
                            Ok(spec
                                .synthesis_family()
                                .norms()
                                .into_iter()
                                .fold(f64::INFINITY, f64::min))
                        };
                        let first = min_norm(8)?;
                        let last = min_norm(128)?;
                        if last > first / 10.0 {
                            return Err(format!("norm floor {first} -> {last}, no 10x decay"));
                        }
                        Ok(())
                    },
                ),
            ],
        ),
        fixture(
            "order-sensitive",
            &["sec3-remark"],
            "triple blocks with cancelling signs: finite truncations are the identity; the infinite series converges only conditionally in one orientation",
            no_params(),
            true,
            |_, d| {
                ones_spec(
                    family("triple_repeat", &Params::new(), d)?,
                    family("triple_recycle_signed", &Params::new(), d)?,
                )
            },
            vec![fact(
                "both orientations are the identity at truncation",
                FactSource::Stated,
                |inst, tols| {
                    expect_identity_operator(inst, tols, 1e-12)?;
                    let swapped = FixtureInstance { spec: inst.spec.swapped(), ..inst.clone() };
                    expect_identity_operator(&swapped, tols, 1e-12)
                },
            )],
        ),
        fixture(
            "nbnb",
            &[],
            "two non-Bessel families balanced by a rescaling: every diagnostic trace stays bounded",
            no_params(),
            false,
            |_, d| {
                ones_spec(
                    family("balanced_decay_growth", &Params::new(), d)?,
                    family("balanced_recycle_decay", &Params::new(), d)?,
                )
            },
            vec![
                fact("necessary conditions hold across the sweep", FactSource::Stated, |inst, tols| {
                    expect_verdict(inst, Verdict::NecessaryConditionsHold, tols)
                }),
                fact("operator converges to the identity", FactSource::OracleDerived, |inst, tols| {
                    let m = dense_spec(inst, tols)?;
                    let err = m.sub(&crate::dense::CMat::identity(inst.dim)).max_abs();
                    let bound = 0.5f64.powi(inst.dim as i32 - 1) + 1e-12;
                    if err > bound {
                        return Err(format!("identity gap {err:.3e} exceeds {bound:.3e}"));
                    }
                    Ok(())
                }),
            ],
        ),
        fixture(
            "cex1",
            &[],
            "geometrically damped frame against the recycled basis: bounded traces although the analysis family is non-Bessel",
            no_params(),
            false,
            |_, d| {
                ones_spec(
                    family("geometric_interleave", &Params::new(), d)?,
                    family("first_recycle", &Params::new(), d)?,
                )
            },
            vec![fact("necessary conditions hold across the sweep", FactSource::Stated, |inst, tols| {
                expect_verdict(inst, Verdict::NecessaryConditionsHold, tols)
            })],
        ),
        fixture(
            "recycle",
            &[],
            "recycled first basis vector against a norm-bounded family: the Bessel trace grows linearly, refuting unconditional convergence",
            no_params(),
            false,
            |_, d| {
                ones_spec(
                    family("stretched_pairs", &Params::new(), d)?,
                    family("first_recycle", &Params::new(), d)?,
                )
            },
            vec![fact(
                "diagnostics verdict is violated with monotone growth",
                FactSource::Stated,
                |inst, tols| expect_verdict(inst, Verdict::Violated, tols),
            )],
        ),
    ];

    // The Riesz-side case table rows: one fixture per realizable combination
    // of invertibility and well-definedness.
    fixtures.extend([
        fixture(
            "case-b1-welldefined",
            &[],
            "bounded vanishing symbol damping the recycled vector: weighted family Bessel",
            no_params(),
            false,
            |_, d| {
                let phi = family("onb", &Params::new(), d)?;
                let psi = family("first_recycle", &Params::new(), d)?;
                let count = phi.count().min(psi.count());
                MultiplierSpec::aligned(
                    symbol("geometric_odd_slots", &p1("base", 0.5), count)?,
                    phi,
                    psi,
                )
            },
            vec![case_fact("b1", CaseOutcome::NeverInvertible), weighted_trace_fact(true)],
        ),
        fixture(
            "case-b1-undefined",
            &[],
            "bounded vanishing symbol that fails to damp the recycled vector",
            no_params(),
            false,
            |_, d| {
                let phi = family("onb", &Params::new(), d)?;
                let psi = family("first_recycle", &Params::new(), d)?;
                let count = phi.count().min(psi.count());
                MultiplierSpec::aligned(symbol("harmonic_even_slots", &Params::new(), count)?, phi, psi)
            },
            vec![case_fact("b1", CaseOutcome::NeverInvertible), weighted_trace_fact(false)],
        ),
        fixture(
            "case-b2-welldefined",
            &[],
            "bounded vanishing symbol taming an alternating growth/decay family",
            no_params(),
            false,
            |_, d| {
                let phi = family("onb", &Params::new(), d)?;
                let psi =
                    family("alternating_scale_basis", &p2("odd_exponent", -1.0, "even_exponent", 1.0), d)?;
                MultiplierSpec::aligned(
                    symbol("power_parity", &p2("odd_exponent", 0.0, "even_exponent", -1.0), d)?,
                    phi,
                    psi,
                )
            },
            vec![case_fact("b2", CaseOutcome::NeverInvertible), weighted_trace_fact(true)],
        ),
        fixture(
            "case-b2-undefined",
            &[],
            "bounded vanishing symbol leaving the growth slots unscaled",
            no_params(),
            false,
            |_, d| {
                let phi = family("onb", &Params::new(), d)?;
                let psi =
                    family("alternating_scale_basis", &p2("odd_exponent", -1.0, "even_exponent", 1.0), d)?;
                MultiplierSpec::aligned(
                    symbol("power_parity", &p2("odd_exponent", -1.0, "even_exponent", 0.0), d)?,
                    phi,
                    psi,
                )
            },
            vec![case_fact("b2", CaseOutcome::NeverInvertible), weighted_trace_fact(false)],
        ),
        fixture(
            "case-b3-invertible",
            &[],
            "bounded vanishing symbol exactly cancelling linear growth: the identity",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", -1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("power_basis", &p1("exponent", 1.0), d)?,
                )
            },
            vec![case_fact("b3", CaseOutcome::AllCombinationsPossible), identity_fact()],
        ),
        fixture(
            "case-b3-noninvertible",
            &[],
            "quadratically vanishing symbol on linear growth: well defined, margins collapse",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", -2.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("power_basis", &p1("exponent", 1.0), d)?,
                )
            },
            vec![case_fact("b3", CaseOutcome::AllCombinationsPossible), harmonic_diag_fact()],
        ),
        fixture(
            "case-b3-undefined",
            &[],
            "vanishing symbol too weak for quadratic growth",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", -1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("power_basis", &p1("exponent", 2.0), d)?,
                )
            },
            vec![case_fact("b3", CaseOutcome::AllCombinationsPossible), weighted_trace_fact(false)],
        ),
        fixture(
            "case-c1-undefined",
            &[],
            "unbounded norm-bounded-below symbol on the basis: never well defined",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", 1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("onb", &Params::new(), d)?,
                )
            },
            vec![case_fact("c1", CaseOutcome::NotWellDefined), weighted_trace_fact(false)],
        ),
        fixture(
            "case-c2-invertible",
            &[],
            "unbounded symbol cancelling harmonic decay: the identity",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", 1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("power_basis", &p1("exponent", -1.0), d)?,
                )
            },
            vec![case_fact("c2", CaseOutcome::AllCombinationsPossible), identity_fact()],
        ),
        fixture(
            "case-c2-noninvertible",
            &[],
            "unbounded symbol on quadratic decay: well defined with collapsing margins",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", 1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("power_basis", &p1("exponent", -2.0), d)?,
                )
            },
            vec![case_fact("c2", CaseOutcome::AllCombinationsPossible), harmonic_diag_fact()],
        ),
        fixture(
            "case-c2-undefined",
            &[],
            "quadratically unbounded symbol on harmonic decay",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power", &p1("exponent", 2.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("power_basis", &p1("exponent", -1.0), d)?,
                )
            },
            vec![case_fact("c2", CaseOutcome::AllCombinationsPossible), weighted_trace_fact(false)],
        ),
        fixture(
            "case-c3-welldefined",
            &[],
            "unbounded symbol partially compensating geometric decay on a frame that is not norm-bounded below",
            no_params(),
            false,
            |_, d| {
                let phi = family("onb", &Params::new(), d)?;
                let psi = family("geometric_interleave", &Params::new(), d)?;
                let count = phi.count().min(psi.count());
                MultiplierSpec::aligned(
                    symbol("geometric_odd_slots", &p1("base", std::f64::consts::SQRT_2), count)?,
                    phi,
                    psi,
                )
            },
            vec![case_fact("c3", CaseOutcome::NeverInvertible), weighted_trace_fact(true)],
        ),
        fixture(
            "case-c3-undefined",
            &[],
            "unbounded symbol overcompensating geometric decay",
            no_params(),
            false,
            |_, d| {
                let phi = family("onb", &Params::new(), d)?;
                let psi = family("geometric_interleave", &Params::new(), d)?;
                let count = phi.count().min(psi.count());
                MultiplierSpec::aligned(symbol("geometric_odd_slots", &p1("base", 2.0), count)?, phi, psi)
            },
            vec![case_fact("c3", CaseOutcome::NeverInvertible), weighted_trace_fact(false)],
        ),
        fixture(
            "case-d1-undefined",
            &[],
            "vanishing-and-unbounded symbol on the norm-bounded basis: never well defined",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power_parity", &p2("odd_exponent", -1.0, "even_exponent", 2.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("onb", &Params::new(), d)?,
                )
            },
            vec![case_fact("d1", CaseOutcome::NotWellDefined), weighted_trace_fact(false)],
        ),
        fixture(
            "case-d2-invertible",
            &[],
            "vanishing-and-unbounded symbol exactly inverting an alternating family: the identity",
            no_params(),
            false,
            |_, d| {
                let psi =
                    family("alternating_scale_basis", &p2("odd_exponent", 1.0, "even_exponent", -2.0), d)?;
                MultiplierSpec::aligned(
                    symbol("power_parity", &p2("odd_exponent", -1.0, "even_exponent", 2.0), d)?,
                    family("onb", &Params::new(), d)?,
                    psi,
                )
            },
            vec![case_fact("d2", CaseOutcome::AllCombinationsPossible), identity_fact()],
        ),
        fixture(
            "case-d2-noninvertible",
            &[],
            "vanishing-and-unbounded symbol leaving a harmonic diagonal",
            no_params(),
            false,
            |_, d| {
                let psi =
                    family("alternating_scale_basis", &p2("odd_exponent", 1.0, "even_exponent", -2.0), d)?;
                MultiplierSpec::aligned(
                    symbol("power_parity", &p2("odd_exponent", -2.0, "even_exponent", 1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    psi,
                )
            },
            vec![case_fact("d2", CaseOutcome::AllCombinationsPossible), harmonic_diag_fact()],
        ),
        fixture(
            "case-d2-undefined",
            &[],
            "vanishing-and-unbounded symbol overshooting the decay slots",
            no_params(),
            false,
            |_, d| {
                let psi =
                    family("alternating_scale_basis", &p2("odd_exponent", 1.0, "even_exponent", -2.0), d)?;
                MultiplierSpec::aligned(
                    symbol("power_parity", &p2("odd_exponent", -1.0, "even_exponent", 3.0), d)?,
                    family("onb", &Params::new(), d)?,
                    psi,
                )
            },
            vec![case_fact("d2", CaseOutcome::AllCombinationsPossible), weighted_trace_fact(false)],
        ),
        fixture(
            "case-d3-bessel-welldefined",
            &[],
            "vanishing-and-unbounded symbol kept in check by harmonic decay",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power_parity", &p2("odd_exponent", -1.0, "even_exponent", 1.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("power_basis", &p1("exponent", -1.0), d)?,
                )
            },
            vec![case_fact("d3", CaseOutcome::NeverInvertible), weighted_trace_fact(true)],
        ),
        fixture(
            "case-d3-bessel-undefined",
            &[],
            "vanishing-and-unbounded symbol outgrowing harmonic decay",
            no_params(),
            false,
            |_, d| {
                MultiplierSpec::aligned(
                    symbol("power_parity", &p2("odd_exponent", -1.0, "even_exponent", 2.0), d)?,
                    family("onb", &Params::new(), d)?,
                    family("power_basis", &p1("exponent", -1.0), d)?,
                )
            },
            vec![case_fact("d3", CaseOutcome::NeverInvertible), weighted_trace_fact(false)],
        ),
        fixture(
            "case-d3-nba-welldefined",
            &[],
            "vanishing-and-unbounded symbol balancing a recycled decaying family",
            no_params(),
            false,
            |_, d| {
                let phi = family("onb", &Params::new(), d)?;
                let psi = family("first_recycle_decay", &Params::new(), d)?;
                let count = phi.count().min(psi.count());
                MultiplierSpec::aligned(
                    symbol("geometric_odd_linear_even", &Params::new(), count)?,
                    phi,
                    psi,
                )
            },
            vec![case_fact("d3", CaseOutcome::NeverInvertible), weighted_trace_fact(true)],
        ),
        fixture(
            "case-d3-nba-undefined",
            &[],
            "vanishing-and-unbounded symbol overshooting the recycled decaying family",
            no_params(),
            false,
            |_, d| {
                let phi = family("onb", &Params::new(), d)?;
                let psi = family("first_recycle_decay", &Params::new(), d)?;
                let count = phi.count().min(psi.count());
                MultiplierSpec::aligned(
                    symbol("geometric_odd_square_even", &Params::new(), count)?,
                    phi,
                    psi,
                )
            },
            vec![case_fact("d3", CaseOutcome::NeverInvertible), weighted_trace_fact(false)],
        ),
    ]);

    fixtures
}
