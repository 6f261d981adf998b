//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use framemult::catalogue::{self, Params};
use framemult::convergence::{self, Verdict};
use framemult::dense::CMat;
use framemult::frames::{self, SequenceFamily, Symbol};
use framemult::inversion::{self, CertifyOptions, Rule};
use framemult::linop::{self, dense_of, LinearOp};
use framemult::multiplier::{self, MultiplierSpec};
use framemult::{Error, Tolerances};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn random_family(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> SequenceFamily {
    SequenceFamily::new(dim, (0..count).map(|_| random_vec(rng, dim)).collect()).unwrap()
}

fn pass(criterion: usize, detail: &str) {
    println!("PASS criterion {criterion}: {detail}");
}

/// Criterion 1: the Bessel norm bound dominates the realized operator norm
/// on 200 random bounded specs (d = 32, N <= 64).
#[test]
fn criterion_01_norm_bound() {
    let start = Instant::now();
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let d = 32;
    for trial in 0..200 {
        let n = rng.gen_range(d..=64);
        let phi = random_family(&mut rng, d, n);
        let psi = random_family(&mut rng, d, n);
        let m = Symbol::new(random_vec(&mut rng, n));
        let spec = MultiplierSpec::new(m, phi, psi).unwrap();
        let bound = multiplier::norm_bound(&spec, &tols).unwrap();
        let actual = dense_of(&multiplier::build(&spec), &tols).unwrap().op_norm();
        assert!(
            actual <= bound + 1e-9,
            "trial {trial}: operator norm {actual} exceeds bound {bound}"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "runtime {elapsed:.2}s exceeds 10s");
    pass(1, &format!("200 random specs dominated by the norm bound in {elapsed:.2}s"));
}

/// Criterion 2: the series engine inverts 100 random contractive
/// perturbations to 1e-8 relative accuracy, with all singular values of the
/// exact inverse inside the guaranteed sandwich.
#[test]
fn criterion_02_series_engine() {
    let start = Instant::now();
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let d = 32;
    for trial in 0..100 {
        // F = I + 0.5 R / ||R||: singular values in [1/2, 3/2].
        let r = CMat::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let f_dense = CMat::identity(d).add(&r.scale(c(0.5 / r.op_norm(), 0.0)));
        let f_inv_dense = f_dense.inverse().unwrap();
        let norm_f_inv = f_inv_dense.op_norm();

        // Perturbation sized so that nu * ||F^{-1}|| <= 0.8.
        let target_q = rng.gen_range(0.05..0.8);
        let e = CMat::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let e = e.scale(c(target_q / (norm_f_inv * e.op_norm()), 0.0));
        let g_dense = f_dense.add(&e);
        let nu = e.op_norm() * (1.0 + 1e-12);

        let f_op = LinearOp::from_dense(&f_dense);
        let f_inv_op = LinearOp::from_dense(&f_inv_dense);
        let g_op = LinearOp::from_dense(&g_dense);
        let res = linop::neumann_invert(&f_op, &f_inv_op, &g_op, nu, 1e-10, &tols)
            .unwrap_or_else(|e| panic!("trial {trial}: engine refused: {e}"));

        let series = dense_of(&res.inverse, &tols).unwrap();
        let exact = g_dense.inverse().unwrap();
        let rel = series.sub(&exact).op_norm() / exact.op_norm();
        assert!(rel <= 1e-8, "trial {trial}: relative error {rel:.3e}");
        for sigma in exact.singular_values() {
            assert!(
                sigma >= res.guaranteed_lower - 1e-9 && sigma <= res.guaranteed_upper + 1e-9,
                "trial {trial}: sigma {sigma} outside [{}, {}]",
                res.guaranteed_lower,
                res.guaranteed_upper
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "runtime {elapsed:.2}s exceeds 30s");
    pass(2, &format!("100 contractive perturbations inverted to 1e-8 in {elapsed:.2}s"));
}

/// Criterion 3: sharpness of the near-one symbol rule. The harmonic symbol
/// is refused at every dimension while the oracle pins the shrinking margin
/// exactly at 1/d.
#[test]
fn criterion_03_near_one_sharpness() {
    let tols = Tolerances::default();
    for d in [16usize, 64, 256] {
        let inst = catalogue::instantiate("ex5.2", &Params::new(), d).unwrap();
        let spec = &inst.spec;
        match inversion::invert_dual_perturbed_symbol(
            spec.synthesis_family(),
            spec.analysis_family(),
            spec.symbol(),
            1e-10,
            &tols,
        ) {
            Err(Error::LambdaTooLarge { lambda, threshold }) => {
                assert!((lambda - 1.0).abs() < 1e-12, "d={d}: lambda {lambda}");
                assert!((threshold - 1.0).abs() < 1e-9, "d={d}: threshold {threshold}");
            }
            other => panic!("d={d}: expected LambdaTooLarge, got {other:?}"),
        }
        let min_sv = dense_of(&multiplier::build(spec), &tols).unwrap().min_singular_value();
        assert!(
            (min_sv - 1.0 / d as f64).abs() <= 1e-12,
            "d={d}: min sv {min_sv} differs from 1/d"
        );
    }
    pass(3, "rule refused at deviation 1 for d in {16, 64, 256}; oracle margin exactly 1/d");
}

/// Criterion 4: the signed-perturbation rule on the doubled-basis fixture:
/// exact diagonal, exact constants, singular values of the inverse inside
/// the certified sandwich.
#[test]
fn criterion_04_signed_perturbation_fixture() {
    let start = Instant::now();
    let tols = Tolerances::default();
    let lower_expected = 1.0 / (4.0 * 2.0 + 4.0 * (2.0f64 * 0.25).sqrt());
    let upper_expected = 1.0 / (4.0 * 2.0 - 4.0 * (2.0f64 * 0.25).sqrt());
    for d in [16usize, 32, 64] {
        let inst = catalogue::instantiate("ex5.8", &Params::new(), d).unwrap();
        let spec = &inst.spec;
        let cert = inversion::invert_signed_near_frame(
            spec.synthesis_family(),
            spec.analysis_family(),
            spec.symbol(),
            1e-10,
            &tols,
        )
        .unwrap();
        let m = dense_of(&multiplier::build(spec), &tols).unwrap();
        for i in 0..d {
            for j in 0..d {
                let want = if i != j {
                    0.0
                } else if i == 0 {
                    6.0
                } else {
                    8.0
                };
                assert!(
                    (m.at(i, j) - c(want, 0.0)).norm() <= 1e-12,
                    "d={d}: entry ({i},{j}) = {}",
                    m.at(i, j)
                );
            }
        }
        assert!((cert.sandwich_lower - lower_expected).abs() < 1e-9);
        assert!((cert.sandwich_upper - upper_expected).abs() < 1e-9);
        for sigma in dense_of(&cert.inverse, &tols).unwrap().singular_values() {
            assert!(
                sigma >= cert.sandwich_lower - 1e-9 && sigma <= cert.sandwich_upper + 1e-9,
                "d={d}: sigma {sigma} outside the sandwich"
            );
            let near_sixth = (sigma - 1.0 / 6.0).abs() < 1e-9;
            let near_eighth = (sigma - 1.0 / 8.0).abs() < 1e-9;
            assert!(near_sixth || near_eighth, "d={d}: sigma {sigma} not in {{1/6, 1/8}}");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "runtime {elapsed:.2}s exceeds 5s");
    pass(
        4,
        &format!(
            "certificate fired with sandwich [{lower_expected:.4}, {upper_expected:.4}] in {elapsed:.2}s"
        ),
    );
}

/// Criterion 5: the weighted-perturbation rule on the scaled overcomplete
/// fixture at d = 64: constants, residual, sandwich.
#[test]
fn criterion_05_weighted_perturbation_fixture() {
    let tols = Tolerances::default();
    let params: Params = [("k".to_string(), 0.3)].into_iter().collect();
    let inst = catalogue::instantiate("ex5.6", &params, 64).unwrap();
    let spec = &inst.spec;
    let cert = inversion::invert_weighted_near_frame(
        spec.synthesis_family(),
        spec.analysis_family(),
        spec.symbol(),
        1e-10,
        &tols,
    )
    .unwrap();
    let mu = cert.constants["mu"];
    assert!((mu - 0.18).abs() < 1e-9, "mu = {mu}");
    assert!(mu < cert.constants["threshold"]);
    assert!(cert.verified_residual <= 1e-10, "residual {}", cert.verified_residual);
    let lower = 1.0 / (2.0 + 0.6);
    let upper = 1.0 / (1.0 - 0.6);
    assert!((cert.sandwich_lower - lower).abs() < 1e-9);
    assert!((cert.sandwich_upper - upper).abs() < 1e-9);
    for sigma in dense_of(&cert.inverse, &tols).unwrap().singular_values() {
        assert!(sigma >= lower - 1e-9 && sigma <= upper + 1e-9, "sigma {sigma}");
    }
    pass(5, &format!("mu = {mu:.6} < 0.5, residual {:.2e}, sandwich [{lower:.4}, {upper:.4}]", cert.verified_residual));
}

/// Criterion 6: the applies/does-not-apply independence matrix across the
/// contrasting fixture pairs. Six binary assertions, zero tolerance.
#[test]
fn criterion_06_independence_matrix() {
    let tols = Tolerances::default();
    let fires = |id: &str, rule: Rule| -> bool {
        let inst = catalogue::instantiate(id, &Params::new(), 32).unwrap();
        let opts = CertifyOptions { order: vec![rule], ..Default::default() };
        inversion::certify(&inst.spec, &opts, &tols).fired()
    };
    let matrix = [
        ("ex5.6", Rule::WeightedNearFrame, Rule::WeightedNearDual),
        ("ex5.7", Rule::WeightedNearDual, Rule::WeightedNearFrame),
        ("ex5.8", Rule::SignedNearFrame, Rule::WeightedNearFrame),
        ("8yes7no", Rule::WeightedNearFrame, Rule::SignedNearFrame),
        ("ex5.9", Rule::WeightedNearDual, Rule::SignedNearFrame),
        ("ex5.10", Rule::SignedNearFrame, Rule::WeightedNearDual),
    ];
    for (id, yes, no) in matrix {
        assert!(fires(id, yes), "{id}: rule {yes} must fire");
        assert!(!fires(id, no), "{id}: rule {no} must refuse");
    }
    pass(6, "six fixture pairs reproduce the applies/does-not-apply matrix exactly");
}

/// Criterion 7: the two-sided Riesz criterion at truncation. Random Riesz
/// pairs invert in closed form and agree with the reciprocal-symbol dual
/// route; rank-deficient weighted families are certified non-invertible with
/// a vanishing oracle margin.
#[test]
fn criterion_07_riesz_two_sided() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    let d = 16;

    let mut well_conditioned = |rng: &mut ChaCha8Rng| -> SequenceFamily {
        loop {
            let fam = random_family(rng, d, d);
            let margin = frames::riesz_margin(&fam, &tols);
            if margin.min_sv > 0.25 {
                return fam;
            }
        }
    };

    for trial in 0..100 {
        let phi = well_conditioned(&mut rng);
        let psi = well_conditioned(&mut rng);
        let m_vals: Vec<Complex64> = (0..d)
            .map(|_| Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-3.1..3.1)))
            .collect();
        let m = Symbol::new(m_vals.clone());
        let cert = inversion::invert_riesz(&phi, &psi, &m, &tols)
            .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        let inv = dense_of(&cert.inverse, &tols).unwrap();

        let spec = MultiplierSpec::new(m.clone(), phi.clone(), psi.clone()).unwrap();
        let exact = dense_of(&multiplier::build(&spec), &tols).unwrap().inverse().unwrap();
        let rel = inv.sub(&exact).op_norm() / exact.op_norm();
        assert!(rel <= 1e-9, "trial {trial}: closed form differs from dense inverse by {rel:.3e}");

        // Same operator through the reciprocal-symbol route over the
        // canonical duals of the two families.
        let inv_m = Symbol::new(m_vals.iter().map(|z| 1.0 / z).collect());
        let psi_dual = frames::canonical_dual(&psi, &tols).unwrap();
        let phi_dual = frames::canonical_dual(&phi, &tols).unwrap();
        let alt_spec = MultiplierSpec::new(inv_m, psi_dual, phi_dual).unwrap();
        let alt = dense_of(&multiplier::build(&alt_spec), &tols).unwrap();
        let rel2 = inv.sub(&alt).op_norm() / alt.op_norm();
        assert!(rel2 <= 1e-9, "trial {trial}: dual routes differ by {rel2:.3e}");
    }

    for trial in 0..100 {
        let phi = well_conditioned(&mut rng);
        let mut vectors: Vec<Vec<Complex64>> = (0..d).map(|_| random_vec(&mut rng, d)).collect();
        let mut m_vals = random_vec(&mut rng, d);
        // Duplicate one index exactly: the weighted family is rank deficient.
        let i = rng.gen_range(0..d);
        let j = (i + 1 + rng.gen_range(0..d - 1)) % d;
        vectors[j] = vectors[i].clone();
        m_vals[j] = m_vals[i];
        let psi = SequenceFamily::new(d, vectors).unwrap();
        let m = Symbol::new(m_vals);
        match inversion::invert_riesz(&phi, &psi, &m, &tols) {
            Err(Error::NotRieszWeighted { .. }) => {}
            other => panic!("trial {trial}: expected NotRieszWeighted, got {other:?}"),
        }
        let spec = MultiplierSpec::new(m, phi, psi).unwrap();
        let min_sv = dense_of(&multiplier::build(&spec), &tols).unwrap().min_singular_value();
        assert!(min_sv <= 1e-9, "trial {trial}: oracle margin {min_sv:.3e}");
    }
    pass(7, "100 Riesz pairs inverted through both dual routes; 100 rank-deficient specs refused");
}

/// Criterion 8: whenever a certificate fires and the analysis family has a
/// Bessel bound, the weighted synthesis family satisfies the quantified
/// lower frame inequality.
#[test]
fn criterion_08_lower_frame_necessity() {
    let tols = Tolerances::default();
    let mut inspected = 0usize;
    for fixture in catalogue::all() {
        let inst = match fixture.instantiate(&Params::new(), 32) {
            Ok(inst) => inst,
            Err(_) => continue,
        };
        let report = inversion::certify(&inst.spec, &CertifyOptions::default(), &tols);
        let Some(_cert) = report.certificate else { continue };
        let m_dense = dense_of(&multiplier::build(&inst.spec), &tols).unwrap();
        let m_inv_norm = m_dense.inverse().map(|inv| inv.op_norm()).unwrap_or(f64::INFINITY);
        let (holds, bound) = inversion::necessary_lower_frame(&inst.spec, m_inv_norm, &tols).unwrap();
        // The acceptance slack is 1e-8; the library checks at 1e-9.
        assert!(
            holds,
            "{}: weighted synthesis family misses the lower frame bound {bound:.6e}",
            fixture.id
        );
        inspected += 1;
    }
    assert!(inspected >= 8, "only {inspected} fixtures fired a certificate");
    pass(8, &format!("lower-frame inequality verified on {inspected} fired fixtures"));
}

/// Criterion 9: convergence diagnostics across the sweep: the recycled
/// fixture is violated with monotone growth, the balanced pairs hold, and
/// swap equivalence passes on the whole catalogue.
#[test]
fn criterion_09_diagnostics() {
    let start = Instant::now();
    let tols = Tolerances::default();
    let sweep = convergence::DEFAULT_SWEEP;

    let report = convergence::unconditional_necessary(
        |d| catalogue::spec_at("recycle", &Params::new(), d),
        &sweep,
        &tols,
    )
    .unwrap();
    assert_eq!(report.verdict, Verdict::Violated, "recycle: {report:?}");
    let t = &report.bessel_trace_a;
    assert!(t.windows(2).all(|w| w[1] > w[0]), "recycle trace not monotone: {t:?}");

    for id in ["nbnb", "cex1"] {
        let report = convergence::unconditional_necessary(
            |d| catalogue::spec_at(id, &Params::new(), d),
            &sweep,
            &tols,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::NecessaryConditionsHold, "{id}: {report:?}");
    }

    for fixture in catalogue::all() {
        let id = fixture.id;
        let ok = convergence::swap_equivalence_check(
            |d| catalogue::spec_at(id, &Params::new(), d),
            &[8, 16, 32],
            &tols,
        )
        .unwrap_or_else(|e| panic!("{id}: {e}"));
        assert!(ok, "{id}: swap equivalence failed");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 20.0, "runtime {elapsed:.2}s exceeds 20s");
    pass(9, &format!("violated/hold verdicts and swap equivalence over {} fixtures in {elapsed:.2}s", catalogue::all().len()));
}

/// Criterion 10: the adjoint identity, entrywise at 1e-12, on 50 random
/// specs.
#[test]
fn criterion_10_adjoint_identity() {
    let tols = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let d = 16;
    for trial in 0..50 {
        let n = rng.gen_range(d..=2 * d);
        let phi = random_family(&mut rng, d, n);
        let psi = random_family(&mut rng, d, n);
        let m = Symbol::new(random_vec(&mut rng, n));
        let spec = MultiplierSpec::new(m, phi, psi).unwrap();
        let direct = dense_of(&multiplier::build(&spec), &tols).unwrap().adjoint();
        let swapped = dense_of(&multiplier::build(&multiplier::adjoint_spec(&spec)), &tols).unwrap();
        let err = direct.sub(&swapped).max_abs();
        assert!(err <= 1e-12, "trial {trial}: entrywise gap {err:.3e}");
    }
    pass(10, "adjoint identity entrywise below 1e-12 on 50 random specs");
}
