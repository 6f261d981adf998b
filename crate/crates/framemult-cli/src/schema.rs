//! The JSON wire schema: families, symbols, multiplier specs, and job
//! configuration. Complex numbers are `[re, im]` pairs; floats round-trip at
//! shortest-decimal precision, so emit-then-load reproduces matrices
//! bit for bit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use framemult::catalogue::generators;
use framemult::frames::{SequenceFamily, Symbol};
use framemult::multiplier::MultiplierSpec;

/// A schema-level error with a JSON-pointer-style location.
#[derive(Debug)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl SchemaError {
    fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self { pointer: pointer.into(), message: message.into() }
    }
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.pointer, self.message)
    }
}

pub type SchemaResult<T> = Result<T, SchemaError>;

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySchema {
    Explicit {
        dim: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        count: Option<usize>,
        vectors: Vec<Vec<[f64; 2]>>,
    },
    Generator {
        dim: usize,
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        count: Option<usize>,
    },
}

impl FamilySchema {
    /// True when the family can be re-instantiated at arbitrary dimensions.
    pub fn is_generator(&self) -> bool {
        matches!(self, FamilySchema::Generator { .. })
    }

    pub fn dim(&self) -> usize {
        match self {
            FamilySchema::Explicit { dim, .. } | FamilySchema::Generator { dim, .. } => *dim,
        }
    }

    /// Realizes the family, overriding the dimension for sweep points when
    /// the family is generator-backed.
    pub fn realize(&self, pointer: &str, dim_override: Option<usize>) -> SchemaResult<SequenceFamily> {
        match self {
            FamilySchema::Explicit { dim, count, vectors } => {
                if let Some(d) = dim_override {
                    if d != *dim {
                        return Err(SchemaError::new(
                            format!("{pointer}/dim"),
                            format!("explicit family has dim {dim}, cannot re-instantiate at {d}"),
                        ));
                    }
                }
                if let Some(n) = count {
                    if *n != vectors.len() {
                        return Err(SchemaError::new(
                            format!("{pointer}/count"),
                            format!("count {n} does not match {} vectors", vectors.len()),
                        ));
                    }
                }
                let mut converted = Vec::with_capacity(vectors.len());
                for (i, v) in vectors.iter().enumerate() {
                    if v.len() != *dim {
                        return Err(SchemaError::new(
                            format!("{pointer}/vectors/{i}"),
                            format!("vector has length {}, expected dim {dim}", v.len()),
                        ));
                    }
                    converted.push(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect());
                }
                SequenceFamily::new(*dim, converted)
                    .map_err(|e| SchemaError::new(pointer.to_string(), e.to_string()))
            }
            FamilySchema::Generator { dim, name, params, count } => {
                let d = dim_override.unwrap_or(*dim);
                let fam = generators::family(name, params, d)
                    .map_err(|e| SchemaError::new(format!("{pointer}/name"), e.to_string()))?;
                Ok(match count {
                    Some(n) => fam.truncated(*n),
                    None => fam,
                })
            }
        }
    }

    /// The explicit form of a family, for lossless emission.
    pub fn explicit(family: &SequenceFamily) -> FamilySchema {
        FamilySchema::Explicit {
            dim: family.dim(),
            count: Some(family.count()),
            vectors: family
                .vectors()
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSchema {
    Explicit {
        values: Vec<[f64; 2]>,
    },
    Generator {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        count: Option<usize>,
    },
}

impl SymbolSchema {
    pub fn is_generator(&self) -> bool {
        matches!(self, SymbolSchema::Generator { .. })
    }

    pub fn realize(&self, pointer: &str, count: usize) -> SchemaResult<Symbol> {
        match self {
            SymbolSchema::Explicit { values } => {
                if values.len() < count {
                    return Err(SchemaError::new(
                        format!("{pointer}/values"),
                        format!("{} values cannot cover count {count}", values.len()),
                    ));
                }
                Ok(Symbol::new(
                    values[..count].iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
                ))
            }
            SymbolSchema::Generator { name, params, count: fixed } => {
                let n = fixed.unwrap_or(count).min(count);
                generators::symbol(name, params, n)
                    .map_err(|e| SchemaError::new(format!("{pointer}/name"), e.to_string()))
            }
        }
    }

    pub fn explicit(symbol: &Symbol) -> SymbolSchema {
        SymbolSchema::Explicit { values: symbol.values().iter().map(|z| [z.re, z.im]).collect() }
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug)]
#[serde(deny_unknown_fields)]
pub struct TruncationSchema {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub count: Option<usize>,
}

/// Tolerance and strategy overrides carried inside an input file. Command
/// line flags take precedence over these, which take precedence over the
/// defaults.
#[derive(Serialize, Deserialize, Clone, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigSchema {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tol_inv: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tol_lin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tol_dual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<bool>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct SpecSchema {
    pub symbol: SymbolSchema,
    pub synthesis_family: FamilySchema,
    pub analysis_family: FamilySchema,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncation: Option<TruncationSchema>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config: Option<ConfigSchema>,
}

impl SpecSchema {
    /// All three pieces generator-backed: the spec supports sweeps.
    pub fn sweepable(&self) -> bool {
        self.synthesis_family.is_generator() && self.analysis_family.is_generator()
    }

    pub fn base_dim(&self) -> usize {
        self.truncation.map(|t| t.dim).unwrap_or_else(|| self.synthesis_family.dim())
    }

    /// Realizes the multiplier spec at a dimension, aligning all three
    /// counts to the shortest.
    pub fn realize(&self, dim_override: Option<usize>) -> SchemaResult<MultiplierSpec> {
        let phi = self.synthesis_family.realize("/synthesis_family", dim_override)?;
        let psi = self.analysis_family.realize("/analysis_family", dim_override)?;
        if phi.dim() != psi.dim() {
            return Err(SchemaError::new(
                "/analysis_family/dim",
                format!("dim {} does not match synthesis dim {}", psi.dim(), phi.dim()),
            ));
        }
        let mut count = phi.count().min(psi.count());
        if let Some(t) = self.truncation {
            if let Some(n) = t.count {
                count = count.min(n);
            }
        }
        let m = self.symbol.realize("/symbol", count)?;
        MultiplierSpec::aligned(m, phi, psi).map_err(|e| SchemaError::new("/", e.to_string()))
    }

    /// The fully explicit form of a realized spec.
    pub fn explicit(spec: &MultiplierSpec) -> SpecSchema {
        SpecSchema {
            symbol: SymbolSchema::explicit(spec.symbol()),
            synthesis_family: FamilySchema::explicit(spec.synthesis_family()),
            analysis_family: FamilySchema::explicit(spec.analysis_family()),
            truncation: Some(TruncationSchema { dim: spec.dim(), count: Some(spec.count()) }),
            config: None,
        }
    }
}

/// Input of the `apply` command: vectors to push through the multiplier.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct VectorsSchema {
    pub vectors: Vec<Vec<[f64; 2]>>,
}

impl VectorsSchema {
    pub fn realize(&self, dim: usize) -> SchemaResult<Vec<Vec<Complex64>>> {
        let mut out = Vec::with_capacity(self.vectors.len());
        for (i, v) in self.vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(SchemaError::new(
                    format!("/vectors/{i}"),
                    format!("vector has length {}, expected {dim}", v.len()),
                ));
            }
            out.push(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect());
        }
        Ok(out)
    }
}

pub fn complex_matrix_json(m: &framemult::dense::CMat) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m.at(i, j).re, m.at(i, j).im]).collect())
        .collect();
    serde_json::json!(rows)
}

pub fn complex_vec_json(v: &[Complex64]) -> serde_json::Value {
    serde_json::json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}
