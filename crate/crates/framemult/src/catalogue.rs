//! The reference corpus: parametric generators for the named families and
//! symbols, and fixtures that bundle them with machine-checkable expected
//! facts. The regression suite re-derives every stated fact against the
//! dense oracle across truncations.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::frames::{
    ClassTags, Provenance, SequenceFamily, Symbol, SymbolAsymptotics, SymbolTags, Tri,
};
use crate::multiplier::MultiplierSpec;

pub type Params = BTreeMap<String, f64>;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn basis_vec(dim: usize, index: usize, scale: f64) -> Vec<Complex64> {
    let mut v = vec![C_ZERO; dim];
    v[index] = c(scale);
    v
}

fn tags(bessel: Tri, frame: Tri, riesz: Tri, nbb: Tri, nba: Tri) -> ClassTags {
    ClassTags {
        bessel,
        frame,
        riesz,
        nbb,
        nba,
        norm_sn: Tri::Unknown,
        provenance: Provenance::Analytic,
    }
    .normalized()
}

fn sym_tags(sn: Tri, nbb: Tri, ell: Tri, positive: Tri, negative: Tri) -> SymbolTags {
    SymbolTags { sn, nbb, ell_infty: ell, positive, negative }.normalized()
}

/// Named generators for families and symbols, the vocabulary of the JSON
/// schema and the fixtures.
pub mod generators {
    use super::*;

    pub const FAMILY_NAMES: &[&str] = &[
        "onb",
        "power_basis",
        "repeated_first",
        "repeated_first_dual",
        "scaled_repeated_first",
        "signed_scaled_repeated_first",
        "doubled",
        "doubled_halved_second",
        "geometric_interleave",
        "first_recycle",
        "first_recycle_decay",
        "stretched_pairs",
        "harmonic_first_basis",
        "offdiag_dual",
        "offdiag_dual_signed",
        "alternating_scale_basis",
        "balanced_decay_growth",
        "balanced_recycle_decay",
        "triple_repeat",
        "triple_recycle_signed",
        "zero_interleave_a",
        "zero_interleave_b",
        "identity_triplet_a",
        "identity_triplet_b",
    ];

    pub const SYMBOL_NAMES: &[&str] = &[
        "constant",
        "power",
        "power_parity",
        "affine_first",
        "harmonic_first",
        "alternating_first_pair",
        "geometric_odd_slots",
        "harmonic_even_slots",
        "geometric_odd_linear_even",
        "geometric_odd_square_even",
        "triplet_middle_one",
    ];

    fn get(params: &Params, key: &str, default: f64) -> f64 {
        params.get(key).copied().unwrap_or(default)
    }

    /// Instantiates a named family at dimension `dim`. The count is the
    /// generator's natural truncation length for that dimension.
    pub fn family(name: &str, params: &Params, dim: usize) -> Result<SequenceFamily> {
        if dim == 0 {
            return Err(Error::ParamOutOfRange {
                param: "dim".into(),
                value: 0.0,
                range: "dim >= 1".into(),
            });
        }
        let fam = match name {
            "onb" => SequenceFamily::onb(dim),
            "power_basis" => {
                let p = get(params, "exponent", -1.0);
                let vectors = (0..dim)
                    .map(|k| basis_vec(dim, k, ((k + 1) as f64).powf(p)))
                    .collect();
                let t = if p == 0.0 {
                    *SequenceFamily::onb(dim).tags()
                } else if p > 0.0 {
                    tags(Tri::False, Tri::False, Tri::False, Tri::True, Tri::False)
                } else {
                    tags(Tri::True, Tri::False, Tri::False, Tri::False, Tri::True)
                };
                SequenceFamily::new(dim, vectors)?.with_tags(t).with_label(format!("power_basis({p})"))
            }
            "repeated_first" => {
                let mut vectors = vec![basis_vec(dim, 0, 1.0)];
                vectors.extend((0..dim).map(|k| basis_vec(dim, k, 1.0)));
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label("repeated_first")
            }
            "repeated_first_dual" => {
                let mut vectors = vec![basis_vec(dim, 0, 0.5), basis_vec(dim, 0, 0.5)];
                vectors.extend((1..dim).map(|k| basis_vec(dim, k, 1.0)));
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label("repeated_first_dual")
            }
            "scaled_repeated_first" => {
                let s = get(params, "scale", 1.3);
                let mut vectors = vec![basis_vec(dim, 0, s)];
                vectors.extend((0..dim).map(|k| basis_vec(dim, k, s)));
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label(format!("scaled_repeated_first({s})"))
            }
            "signed_scaled_repeated_first" => {
                let s = get(params, "scale", 1.3);
                let mut vectors = vec![basis_vec(dim, 0, s), basis_vec(dim, 0, -s)];
                vectors.extend((1..dim).map(|k| basis_vec(dim, k, s)));
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label(format!("signed_scaled_repeated_first({s})"))
            }
            "doubled" => {
                let mut vectors = Vec::with_capacity(2 * dim);
                for k in 0..dim {
                    vectors.push(basis_vec(dim, k, 1.0));
                    vectors.push(basis_vec(dim, k, 1.0));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label("doubled")
            }
            "doubled_halved_second" => {
                let mut vectors = Vec::with_capacity(2 * dim);
                for k in 0..dim {
                    vectors.push(basis_vec(dim, k, 1.0));
                    vectors.push(basis_vec(dim, k, if k == 0 { 0.5 } else { 1.0 }));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label("doubled_halved_second")
            }
            "geometric_interleave" => {
                need_dim(dim, 2, name)?;
                let q = get(params, "ratio", 0.5);
                let mut vectors = Vec::with_capacity(2 * (dim - 1));
                for k in 1..dim {
                    vectors.push(basis_vec(dim, 0, q.powi(k as i32)));
                    vectors.push(basis_vec(dim, k, 1.0));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::False, Tri::True))
                    .with_label(format!("geometric_interleave({q})"))
            }
            "first_recycle" => {
                need_dim(dim, 2, name)?;
                let mut vectors = Vec::with_capacity(2 * (dim - 1));
                for k in 1..dim {
                    vectors.push(basis_vec(dim, 0, 1.0));
                    vectors.push(basis_vec(dim, k, 1.0));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::False, Tri::False, Tri::False, Tri::True, Tri::True))
                    .with_label("first_recycle")
            }
            "first_recycle_decay" => {
                need_dim(dim, 2, name)?;
                let mut vectors = Vec::with_capacity(2 * (dim - 1));
                for k in 1..dim {
                    vectors.push(basis_vec(dim, 0, 1.0));
                    vectors.push(basis_vec(dim, k, 1.0 / (k as f64 + 1.0)));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::False, Tri::False, Tri::False, Tri::False, Tri::True))
                    .with_label("first_recycle_decay")
            }
            "stretched_pairs" => {
                need_dim(dim, 2, name)?;
                let mut vectors = Vec::with_capacity(2 * (dim - 1));
                for k in 1..dim {
                    vectors.push(basis_vec(dim, k - 1, 1.0));
                    vectors.push(basis_vec(dim, k, 1.0));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label("stretched_pairs")
            }
            "harmonic_first_basis" => {
                let k0 = get(params, "k", 2.0);
                let vectors = (0..dim)
                    .map(|k| {
                        let scale = if k == 0 { k0 } else { 1.0 / (k as f64 + 1.0) };
                        basis_vec(dim, k, scale)
                    })
                    .collect();
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::False, Tri::False, Tri::False, Tri::True))
                    .with_label(format!("harmonic_first_basis({k0})"))
            }
            "offdiag_dual" => {
                need_dim(dim, 2, name)?;
                let mut vectors = vec![basis_vec(dim, 1, 1.0)];
                let mut second = basis_vec(dim, 0, 1.0);
                second[1] = c(-1.0);
                vectors.push(second);
                vectors.extend((1..dim).map(|k| basis_vec(dim, k, 1.0)));
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label("offdiag_dual")
            }
            "offdiag_dual_signed" => {
                need_dim(dim, 2, name)?;
                let mut vectors = vec![basis_vec(dim, 1, 1.0)];
                let mut second = basis_vec(dim, 1, 1.0);
                second[0] = c(-1.0);
                vectors.push(second);
                vectors.extend((1..dim).map(|k| basis_vec(dim, k, 1.0)));
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label("offdiag_dual_signed")
            }
            "alternating_scale_basis" => {
                let p_odd = get(params, "odd_exponent", -1.0);
                let p_even = get(params, "even_exponent", 1.0);
                let vectors = (0..dim)
                    .map(|k| {
                        let n = (k + 1) as f64;
                        let p = if (k + 1) % 2 == 1 { p_odd } else { p_even };
                        basis_vec(dim, k, n.powf(p))
                    })
                    .collect();
                let nba = if p_odd <= 0.0 && p_even <= 0.0 { Tri::True } else { Tri::False };
                let nbb = if p_odd >= 0.0 && p_even >= 0.0 { Tri::True } else { Tri::False };
                let bessel = if nba == Tri::False { Tri::False } else { Tri::Unknown };
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(bessel, Tri::False, Tri::False, nbb, nba))
                    .with_label(format!("alternating_scale_basis({p_odd},{p_even})"))
            }
            "balanced_decay_growth" => {
                need_dim(dim, 2, name)?;
                let mut vectors = Vec::with_capacity(2 * (dim - 1));
                for k in 1..dim {
                    vectors.push(basis_vec(dim, 0, 0.5f64.powi(k as i32)));
                    vectors.push(basis_vec(dim, k, k as f64 + 1.0));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::False, Tri::False, Tri::False, Tri::False, Tri::False))
                    .with_label("balanced_decay_growth")
            }
            "balanced_recycle_decay" => {
                need_dim(dim, 2, name)?;
                let mut vectors = Vec::with_capacity(2 * (dim - 1));
                for k in 1..dim {
                    vectors.push(basis_vec(dim, 0, 1.0));
                    vectors.push(basis_vec(dim, k, 1.0 / (k as f64 + 1.0)));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::False, Tri::False, Tri::False, Tri::False, Tri::True))
                    .with_label("balanced_recycle_decay")
            }
            "triple_repeat" => {
                let mut vectors = Vec::with_capacity(3 * dim);
                for k in 0..dim {
                    for _ in 0..3 {
                        vectors.push(basis_vec(dim, k, 1.0));
                    }
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::True, Tri::True, Tri::False, Tri::True, Tri::True))
                    .with_label("triple_repeat")
            }
            "triple_recycle_signed" => {
                let mut vectors = Vec::with_capacity(3 * dim);
                for k in 0..dim {
                    vectors.push(basis_vec(dim, k, 1.0));
                    vectors.push(basis_vec(dim, 0, 1.0));
                    vectors.push(basis_vec(dim, 0, -1.0));
                }
                SequenceFamily::new(dim, vectors)?
                    .with_tags(tags(Tri::False, Tri::False, Tri::False, Tri::True, Tri::True))
                    .with_label("triple_recycle_signed")
            }
            "zero_interleave_a" => {
                let mut vectors = Vec::with_capacity(2 * dim);
                for k in 0..dim {
                    vectors.push(basis_vec(dim, k, 1.0));
                    vectors.push(vec![C_ZERO; dim]);
                }
                SequenceFamily::new(dim, vectors)?.with_label("zero_interleave_a")
            }
            "zero_interleave_b" => {
                let mut vectors = Vec::with_capacity(2 * dim);
                for k in 0..dim {
                    vectors.push(vec![C_ZERO; dim]);
                    vectors.push(basis_vec(dim, k, 1.0));
                }
                SequenceFamily::new(dim, vectors)?.with_label("zero_interleave_b")
            }
            "identity_triplet_a" => {
                let mut vectors = Vec::with_capacity(3 * dim);
                for k in 0..dim {
                    vectors.push(basis_vec(dim, k, 1.0));
                    vectors.push(basis_vec(dim, k, 1.0));
                    vectors.push(vec![C_ZERO; dim]);
                }
                SequenceFamily::new(dim, vectors)?.with_label("identity_triplet_a")
            }
            "identity_triplet_b" => {
                let mut vectors = Vec::with_capacity(3 * dim);
                for k in 0..dim {
                    vectors.push(vec![C_ZERO; dim]);
                    vectors.push(basis_vec(dim, k, 1.0));
                    vectors.push(basis_vec(dim, k, 1.0));
                }
                SequenceFamily::new(dim, vectors)?.with_label("identity_triplet_b")
            }
            other => return Err(Error::UnknownFixture(format!("family generator `{other}`"))),
        };
        Ok(fam)
    }

    fn need_dim(dim: usize, min: usize, name: &str) -> Result<()> {
        if dim < min {
            return Err(Error::ParamOutOfRange {
                param: format!("dim for {name}"),
                value: dim as f64,
                range: format!("dim >= {min}"),
            });
        }
        Ok(())
    }

    /// Instantiates a named symbol at `count` entries.
    pub fn symbol(name: &str, params: &Params, count: usize) -> Result<Symbol> {
        let sym = match name {
            "constant" => {
                let v = Complex64::new(get(params, "re", 1.0), get(params, "im", 0.0));
                Symbol::constant(v, count)
            }
            "power" => {
                let p = get(params, "exponent", -1.0);
                let values = (1..=count).map(|n| c((n as f64).powf(p))).collect();
                let (tags, asym) = if p == 0.0 {
                    (
                        sym_tags(Tri::True, Tri::True, Tri::True, Tri::True, Tri::False),
                        SymbolAsymptotics { sup_abs: Some(1.0), inf_abs: 1.0, sup_dev_one: Some(0.0) },
                    )
                } else if p > 0.0 {
                    (
                        sym_tags(Tri::False, Tri::True, Tri::False, Tri::True, Tri::False),
                        SymbolAsymptotics { sup_abs: None, inf_abs: 1.0, sup_dev_one: None },
                    )
                } else {
                    (
                        sym_tags(Tri::False, Tri::False, Tri::True, Tri::True, Tri::False),
                        SymbolAsymptotics { sup_abs: Some(1.0), inf_abs: 0.0, sup_dev_one: Some(1.0) },
                    )
                };
                Symbol::new(values).with_tags(tags).with_asymptotics(asym).with_label(format!("power({p})"))
            }
            "power_parity" => {
                let p_odd = get(params, "odd_exponent", -1.0);
                let p_even = get(params, "even_exponent", 1.0);
                let values = (1..=count)
                    .map(|n| {
                        let p = if n % 2 == 1 { p_odd } else { p_even };
                        c((n as f64).powf(p))
                    })
                    .collect();
                let decays = p_odd < 0.0 || p_even < 0.0;
                let grows = p_odd > 0.0 || p_even > 0.0;
                Symbol::new(values)
                    .with_tags(sym_tags(
                        if decays || grows { Tri::False } else { Tri::True },
                        if decays { Tri::False } else { Tri::True },
                        if grows { Tri::False } else { Tri::True },
                        Tri::True,
                        Tri::False,
                    ))
                    .with_asymptotics(SymbolAsymptotics {
                        sup_abs: if grows { None } else { Some(1.0) },
                        inf_abs: if decays { 0.0 } else { 1.0 },
                        sup_dev_one: if grows { None } else { Some(1.0) },
                    })
                    .with_label(format!("power_parity({p_odd},{p_even})"))
            }
            "affine_first" => {
                let k = get(params, "k", 3.0);
                let mut values = vec![c(1.0); count];
                if count > 0 {
                    values[0] = c(k);
                }
                let lo = k.abs().min(1.0);
                let hi = k.abs().max(1.0);
                Symbol::new(values)
                    .with_tags(sym_tags(
                        if k != 0.0 { Tri::True } else { Tri::False },
                        if k != 0.0 { Tri::True } else { Tri::False },
                        Tri::True,
                        if k > 0.0 { Tri::True } else { Tri::False },
                        Tri::False,
                    ))
                    .with_asymptotics(SymbolAsymptotics {
                        sup_abs: Some(hi),
                        inf_abs: lo,
                        sup_dev_one: Some((k - 1.0).abs()),
                    })
                    .with_label(format!("affine_first({k})"))
            }
            "harmonic_first" => {
                let k = get(params, "k", 2.0);
                let values = (1..=count)
                    .map(|n| if n == 1 { c(k) } else { c(1.0 / n as f64) })
                    .collect();
                Symbol::new(values)
                    .with_tags(sym_tags(
                        Tri::False,
                        Tri::False,
                        Tri::True,
                        if k > 0.0 { Tri::True } else { Tri::False },
                        Tri::False,
                    ))
                    .with_asymptotics(SymbolAsymptotics {
                        sup_abs: Some(k.abs().max(0.5)),
                        inf_abs: 0.0,
                        sup_dev_one: Some((k - 1.0).abs().max(1.0)),
                    })
                    .with_label(format!("harmonic_first({k})"))
            }
            "alternating_first_pair" => {
                let mut values = vec![c(1.0); count];
                if count > 1 {
                    values[1] = c(-1.0);
                }
                Symbol::new(values)
                    .with_tags(sym_tags(Tri::True, Tri::True, Tri::True, Tri::False, Tri::False))
                    .with_asymptotics(SymbolAsymptotics {
                        sup_abs: Some(1.0),
                        inf_abs: 1.0,
                        sup_dev_one: Some(2.0),
                    })
                    .with_label("alternating_first_pair")
            }
            "geometric_odd_slots" => {
                let base = get(params, "base", 0.5);
                let values = (1..=count)
                    .map(|n| if n % 2 == 1 { c(base.powi((n as i32 + 1) / 2)) } else { c(1.0) })
                    .collect();
                let (nbb, ell) = if base.abs() < 1.0 {
                    (Tri::False, Tri::True)
                } else if base.abs() > 1.0 {
                    (Tri::True, Tri::False)
                } else {
                    (Tri::True, Tri::True)
                };
                Symbol::new(values)
                    .with_tags(sym_tags(Tri::False, nbb, ell, Tri::True, Tri::False))
                    .with_asymptotics(SymbolAsymptotics {
                        sup_abs: if base.abs() > 1.0 { None } else { Some(1.0) },
                        inf_abs: if base.abs() < 1.0 { 0.0 } else { 1.0 },
                        sup_dev_one: if base.abs() > 1.0 { None } else { Some(1.0) },
                    })
                    .with_label(format!("geometric_odd_slots({base})"))
            }
            "harmonic_even_slots" => {
                let values = (1..=count)
                    .map(|n| if n % 2 == 0 { c(1.0 / (n as f64 / 2.0 + 1.0)) } else { c(1.0) })
                    .collect();
                Symbol::new(values)
                    .with_tags(sym_tags(Tri::False, Tri::False, Tri::True, Tri::True, Tri::False))
                    .with_asymptotics(SymbolAsymptotics {
                        sup_abs: Some(1.0),
                        inf_abs: 0.0,
                        sup_dev_one: Some(1.0),
                    })
                    .with_label("harmonic_even_slots")
            }
            "geometric_odd_linear_even" => {
                let values = (1..=count)
                    .map(|n| {
                        if n % 2 == 1 {
                            c(0.5f64.powi((n as i32 + 1) / 2))
                        } else {
                            c(n as f64 / 2.0 + 1.0)
                        }
                    })
                    .collect();
                Symbol::new(values)
                    .with_tags(sym_tags(Tri::False, Tri::False, Tri::False, Tri::True, Tri::False))
                    .with_asymptotics(SymbolAsymptotics { sup_abs: None, inf_abs: 0.0, sup_dev_one: None })
                    .with_label("geometric_odd_linear_even")
            }
            "geometric_odd_square_even" => {
                let values = (1..=count)
                    .map(|n| {
                        if n % 2 == 1 {
                            c(0.5f64.powi((n as i32 + 1) / 2))
                        } else {
                            let k = n as f64 / 2.0 + 1.0;
                            c(k * k)
                        }
                    })
                    .collect();
                Symbol::new(values)
                    .with_tags(sym_tags(Tri::False, Tri::False, Tri::False, Tri::True, Tri::False))
                    .with_asymptotics(SymbolAsymptotics { sup_abs: None, inf_abs: 0.0, sup_dev_one: None })
                    .with_label("geometric_odd_square_even")
            }
            "triplet_middle_one" => {
                let values = (0..count)
                    .map(|i| match i % 3 {
                        0 => c(2.0),
                        1 => c(1.0),
                        _ => c(3.0),
                    })
                    .collect();
                Symbol::new(values)
                    .with_tags(sym_tags(Tri::True, Tri::True, Tri::True, Tri::True, Tri::False))
                    .with_label("triplet_middle_one")
            }
            other => return Err(Error::UnknownFixture(format!("symbol generator `{other}`"))),
        };
        Ok(sym)
    }
}

/// Admissible range of a fixture parameter.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub range: &'static str,
    pub admissible: fn(f64) -> bool,
}

/// Where an expected fact comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactSource {
    /// A constant or closed-form value the fixture is constructed to have.
    Stated,
    /// A value the oracle derives at each truncation.
    OracleDerived,
}

/// A machine-checkable assertion about a fixture instance.
pub struct FactCheck {
    pub name: &'static str,
    pub source: FactSource,
    run: Box<dyn Fn(&FixtureInstance, &Tolerances) -> std::result::Result<(), String> + Sync + Send>,
}

impl FactCheck {
    pub fn check(
        &self,
        inst: &FixtureInstance,
        tols: &Tolerances,
    ) -> std::result::Result<(), String> {
        (self.run)(inst, tols)
    }
}

/// Builds a fact from a closure; keeps the fixture table readable.
fn fact(
    name: &'static str,
    source: FactSource,
    run: impl Fn(&FixtureInstance, &Tolerances) -> std::result::Result<(), String> + Sync + Send + 'static,
) -> FactCheck {
    FactCheck { name, source, run: Box::new(run) }
}

/// A concrete fixture at one truncation.
#[derive(Clone, Debug)]
pub struct FixtureInstance {
    pub id: String,
    pub dim: usize,
    pub params: Params,
    pub spec: MultiplierSpec,
}

/// A parametric fixture: named families and symbols plus expected facts.
pub struct Fixture {
    pub id: &'static str,
    pub aliases: &'static [&'static str],
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    /// The infinite object converges only conditionally (order-sensitive);
    /// finite truncations cannot exhibit this, so it is carried as a tag.
    pub order_sensitive: bool,
    build: Box<dyn Fn(&Params, usize) -> Result<MultiplierSpec> + Sync + Send>,
    facts: Vec<FactCheck>,
}

impl Fixture {
    pub fn instantiate(&self, overrides: &Params, dim: usize) -> Result<FixtureInstance> {
        let mut params = Params::new();
        for spec in self.params {
            let value = overrides.get(spec.name).copied().unwrap_or(spec.default);
            if !(spec.admissible)(value) {
                return Err(Error::ParamOutOfRange {
                    param: spec.name.to_string(),
                    value,
                    range: spec.range.to_string(),
                });
            }
            params.insert(spec.name.to_string(), value);
        }
        for key in overrides.keys() {
            if !self.params.iter().any(|p| p.name == key) {
                return Err(Error::ParamOutOfRange {
                    param: key.clone(),
                    value: overrides[key],
                    range: "not a parameter of this fixture".into(),
                });
            }
        }
        let spec = (self.build)(&params, dim)?;
        Ok(FixtureInstance { id: self.id.to_string(), dim, params, spec })
    }

    pub fn expected_facts(&self) -> &[FactCheck] {
        &self.facts
    }
}

/// Looks a fixture up by id or alias.
pub fn find(id: &str) -> Result<&'static Fixture> {
    all()
        .iter()
        .find(|f| f.id == id || f.aliases.contains(&id))
        .ok_or_else(|| Error::UnknownFixture(id.to_string()))
}

pub fn instantiate(id: &str, params: &Params, dim: usize) -> Result<FixtureInstance> {
    find(id)?.instantiate(params, dim)
}

pub fn expected_facts(id: &str) -> Result<&'static [FactCheck]> {
    Ok(find(id)?.expected_facts())
}

/// The spec of a fixture at a truncation, for sweeps.
pub fn spec_at(id: &str, params: &Params, dim: usize) -> Result<MultiplierSpec> {
    Ok(instantiate(id, params, dim)?.spec)
}

fn no_params() -> &'static [ParamSpec] {
    &[]
}

fn k_open_half() -> &'static [ParamSpec] {
    const P: [ParamSpec; 1] = [ParamSpec {
        name: "k",
        default: 0.3,
        range: "0 < k < 1/2",
        admissible: |k| k > 0.0 && k < 0.5,
    }];
    &P
}

fn k_any() -> &'static [ParamSpec] {
    const P: [ParamSpec; 1] = [ParamSpec {
        name: "k",
        default: 2.0,
        range: "any real",
        admissible: |k| k.is_finite(),
    }];
    &P
}

fn k_nonzero() -> &'static [ParamSpec] {
    const P: [ParamSpec; 1] = [ParamSpec {
        name: "k",
        default: 3.0,
        range: "k != 0",
        admissible: |k| k != 0.0 && k.is_finite(),
    }];
    &P
}

static FIXTURES: OnceLock<Vec<Fixture>> = OnceLock::new();

pub fn all() -> &'static [Fixture] {
    FIXTURES.get_or_init(build_fixtures)
}

mod facts;
mod fixtures;

use fixtures::build_fixtures;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::CMat;
    use crate::linop::dense_of;
    use crate::multiplier;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn instantiate_scaled_overcomplete_with_bounds() {
        let params: Params = [("k".to_string(), 0.3)].into_iter().collect();
        let inst = instantiate("ex5.6", &params, 32).unwrap();
        let bounds = crate::frames::frame_bounds(
            inst.spec.synthesis_family(),
            crate::linop::SpectralMethod::DenseOracle,
            &tols(),
        )
        .unwrap();
        assert!((bounds.a_upper - 1.0).abs() < 1e-10);
        assert!((bounds.b_upper - 2.0).abs() < 1e-10);
        // The weighted analysis family is 1.3 times the synthesis family.
        let w = crate::frames::weighted(inst.spec.symbol(), inst.spec.analysis_family());
        for (wv, pv) in w.vectors().iter().zip(inst.spec.synthesis_family().vectors()) {
            for (a, b) in wv.iter().zip(pv) {
                assert!((a - b * 1.3).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_fixture_prunes_to_nothing() {
        let inst = instantiate("zero", &Params::new(), 16).unwrap();
        match inst.spec.pruned() {
            Err(Error::EmptyAfterPrune) => {}
            other => panic!("unexpected: {other:?}"),
        }
        let dense = dense_of(&multiplier::build(&inst.spec), &tols()).unwrap();
        assert!(dense.max_abs() < 1e-15);
    }

    #[test]
    fn identity_fixture_prunes_to_plain_basis() {
        let inst = instantiate("identity", &Params::new(), 8).unwrap();
        let (pruned, _) = inst.spec.pruned().unwrap();
        assert_eq!(pruned.count(), 8);
        for (k, v) in pruned.synthesis_family().vectors().iter().enumerate() {
            assert!((v[k] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        assert!(pruned.symbol().values().iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
        let dense = dense_of(&multiplier::build(&inst.spec), &tols()).unwrap();
        assert!(dense.sub(&CMat::identity(8)).max_abs() < 1e-14);
    }

    #[test]
    fn doubled_perturbation_bound_is_one_quarter() {
        let inst = instantiate("ex5.8", &Params::new(), 32).unwrap();
        let diff = inst
            .spec
            .analysis_family()
            .sub(inst.spec.synthesis_family())
            .unwrap();
        let b = crate::frames::frame_bounds(&diff, crate::linop::SpectralMethod::DenseOracle, &tols())
            .unwrap();
        assert!((b.b_upper - 0.25).abs() < 1e-10);
    }

    #[test]
    fn unknown_fixture_and_bad_params_error() {
        assert!(matches!(find("nope"), Err(Error::UnknownFixture(_))));
        let bad: Params = [("k".to_string(), 0.9)].into_iter().collect();
        assert!(matches!(
            instantiate("ex5.6", &bad, 16),
            Err(Error::ParamOutOfRange { .. })
        ));
        let stray: Params = [("zz".to_string(), 1.0)].into_iter().collect();
        assert!(matches!(
            instantiate("ex5.6", &stray, 16),
            Err(Error::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn aliases_resolve() {
        for (alias, id) in [
            ("exdual", "ex5.6"),
            ("exdual2", "ex5.7"),
            ("exnew", "ex5.8"),
            ("9yes7no", "ex5.9"),
            ("7yes9no", "ex5.10"),
            ("noninvex", "ex5.4"),
        ] {
            assert_eq!(find(alias).unwrap().id, id);
        }
    }

    #[test]
    fn every_fixture_instantiates_at_common_sizes() {
        for fixture in all() {
            for d in [8usize, 16] {
                let inst = fixture.instantiate(&Params::new(), d).unwrap_or_else(|e| {
                    panic!("fixture {} failed at d={d}: {e}", fixture.id)
                });
                assert_eq!(inst.spec.dim(), d);
                assert!(inst.spec.count() > 0);
            }
        }
    }

    #[test]
    fn generator_names_are_exposed_and_instantiable() {
        for name in generators::FAMILY_NAMES {
            let fam = generators::family(name, &Params::new(), 8).unwrap();
            assert_eq!(fam.dim(), 8);
        }
        for name in generators::SYMBOL_NAMES {
            let sym = generators::symbol(name, &Params::new(), 12).unwrap();
            assert_eq!(sym.len(), 12);
        }
    }
}
