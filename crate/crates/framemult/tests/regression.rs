//! Fixture regression: every expected fact of every catalogue fixture is
//! re-checked against the dense oracle at several truncations.

use framemult::catalogue::{self, FactSource, Params};
use framemult::Tolerances;

#[test]
fn every_fixture_fact_holds_at_three_truncations() {
    let tols = Tolerances::default();
    let mut checked = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for fixture in catalogue::all() {
        for &dim in &[16usize, 32, 64] {
            let inst = match fixture.instantiate(&Params::new(), dim) {
                Ok(inst) => inst,
                Err(e) => {
                    failures.push(format!("{} @ d={dim}: instantiation failed: {e}", fixture.id));
                    continue;
                }
            };
            for fact in fixture.expected_facts() {
                checked += 1;
                if let Err(msg) = fact.check(&inst, &tols) {
                    failures.push(format!("{} @ d={dim}: `{}`: {msg}", fixture.id, fact.name));
                }
            }
        }
    }
    assert!(checked > 150, "suspiciously few facts checked: {checked}");
    assert!(
        failures.is_empty(),
        "{} fact(s) failed:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn analytic_tags_agree_with_numeric_trends() {
    // No analytic class tag may be contradicted by the oracle: a family
    // tagged norm-bounded-below must not show a collapsing norm floor across
    // the sweep, and one tagged otherwise must.
    use framemult::frames::Tri;
    let sweep = [8usize, 16, 32, 64, 128];
    let mut failures = Vec::new();
    for fixture in catalogue::all() {
        let floors: Vec<(f64, f64)> = sweep
            .iter()
            .filter_map(|&d| {
                let spec = catalogue::spec_at(fixture.id, &Params::new(), d).ok()?;
                let norms = spec.synthesis_family().norms();
                let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = norms.iter().copied().fold(0.0f64, f64::max);
                Some((lo, hi))
            })
            .collect();
        if floors.len() < sweep.len() {
            continue;
        }
        let spec = catalogue::spec_at(fixture.id, &Params::new(), 16).unwrap();
        let tags = *spec.synthesis_family().tags();
        let floor_ratio = floors[0].0 / floors.last().unwrap().0.max(1e-300);
        let ceil_ratio = floors.last().unwrap().1 / floors[0].1.max(1e-300);
        if tags.nbb == Tri::True && floor_ratio >= 10.0 {
            failures.push(format!(
                "{}: tagged norm-bounded-below but the norm floor decayed {floor_ratio:.1}x",
                fixture.id
            ));
        }
        if tags.nbb == Tri::False && floor_ratio < 10.0 {
            failures.push(format!(
                "{}: tagged non-norm-bounded-below but the floor only moved {floor_ratio:.1}x",
                fixture.id
            ));
        }
        if tags.nba == Tri::False && ceil_ratio < 10.0 {
            failures.push(format!(
                "{}: tagged unbounded-above but the ceiling only moved {ceil_ratio:.1}x",
                fixture.id
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn swap_equivalence_holds_on_every_fixture() {
    let tols = Tolerances::default();
    let sweep = [8usize, 16, 32];
    for fixture in catalogue::all() {
        let id = fixture.id;
        let ok = framemult::convergence::swap_equivalence_check(
            |d| catalogue::spec_at(id, &Params::new(), d),
            &sweep,
            &tols,
        )
        .unwrap_or_else(|e| panic!("{id}: {e}"));
        assert!(ok, "{id}: swapped diagnostics verdict differs");
    }
}
