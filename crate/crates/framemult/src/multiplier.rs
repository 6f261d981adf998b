//! Multiplier construction: analysis, pointwise scaling by the symbol, and
//! resynthesis, together with the adjoint swap and the Bessel norm bound.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::frames::{self, PrunedTriple, SequenceFamily, Symbol, Tri};
use crate::linop::{LinearOp, SpectralMethod};

/// A multiplier specification: symbol `m`, synthesis family `Φ`, analysis
/// family `Ψ`, all sharing one index set.
///
/// The realized operator acts as `f ↦ Σ m_n ⟨f, ψ_n⟩ φ_n`.
#[derive(Clone, Debug)]
pub struct MultiplierSpec {
    symbol: Symbol,
    synthesis: SequenceFamily,
    analysis: SequenceFamily,
}

impl MultiplierSpec {
    /// Strict constructor: dimensions and counts must already agree.
    pub fn new(symbol: Symbol, synthesis: SequenceFamily, analysis: SequenceFamily) -> Result<Self> {
        if analysis.dim() != synthesis.dim() {
            return Err(Error::DimMismatch { expected: synthesis.dim(), got: analysis.dim() });
        }
        if analysis.count() != synthesis.count() {
            return Err(Error::CountMismatch { expected: synthesis.count(), got: analysis.count() });
        }
        if symbol.len() != synthesis.count() {
            return Err(Error::CountMismatch { expected: synthesis.count(), got: symbol.len() });
        }
        Ok(Self { symbol, synthesis, analysis })
    }

    /// Aligns differing counts by truncating all three to the shortest, the
    /// convention for generator-backed inputs of different natural lengths.
    pub fn aligned(symbol: Symbol, synthesis: SequenceFamily, analysis: SequenceFamily) -> Result<Self> {
        let count = symbol.len().min(synthesis.count()).min(analysis.count());
        Self::new(symbol.truncated(count), synthesis.truncated(count), analysis.truncated(count))
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn synthesis_family(&self) -> &SequenceFamily {
        &self.synthesis
    }

    pub fn analysis_family(&self) -> &SequenceFamily {
        &self.analysis
    }

    pub fn dim(&self) -> usize {
        self.synthesis.dim()
    }

    pub fn count(&self) -> usize {
        self.synthesis.count()
    }

    /// The swapped spec `(m, Ψ, Φ)`: same symbol, families exchanged.
    pub fn swapped(&self) -> MultiplierSpec {
        MultiplierSpec {
            symbol: self.symbol.clone(),
            synthesis: self.analysis.clone(),
            analysis: self.synthesis.clone(),
        }
    }

    /// Drops indices at which the symbol or either family vanishes; the
    /// realized operator is unchanged.
    pub fn pruned(&self) -> Result<(MultiplierSpec, Vec<usize>)> {
        let PrunedTriple { symbol, synthesis, analysis, index_map } =
            frames::prune_zeros(&self.symbol, &self.synthesis, &self.analysis)?;
        Ok((MultiplierSpec { symbol, synthesis, analysis }, index_map))
    }
}

/// Realizes the multiplier matrix-free: analysis, scale, synthesis. The
/// dense matrix is never materialized here; each apply costs `O(N d)`.
pub fn build(spec: &MultiplierSpec) -> LinearOp {
    let d = spec.dim();
    let fwd = spec.clone();
    let bwd = adjoint_spec(spec);
    let label = format!(
        "M[{}; {}; {}]",
        spec.symbol.label(),
        spec.synthesis.label(),
        spec.analysis.label()
    );
    LinearOp::new(d, d, label, move |f| apply_spec(&fwd, f)).with_adjoint(move |g| apply_spec(&bwd, g))
}

fn apply_spec(spec: &MultiplierSpec, f: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); spec.dim()];
    for ((w, psi), phi) in spec
        .symbol
        .values()
        .iter()
        .zip(spec.analysis.vectors())
        .zip(spec.synthesis.vectors())
    {
        let coeff: Complex64 = f.iter().zip(psi).map(|(a, b)| a * b.conj()).sum();
        let scaled = w * coeff;
        if scaled == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (o, p) in out.iter_mut().zip(phi) {
            *o += scaled * p;
        }
    }
    out
}

/// The adjoint multiplier spec `(conj m, Ψ, Φ)`; building it realizes the
/// adjoint operator of `build(spec)`.
pub fn adjoint_spec(spec: &MultiplierSpec) -> MultiplierSpec {
    MultiplierSpec {
        symbol: spec.symbol.conj(),
        synthesis: spec.analysis.clone(),
        analysis: spec.synthesis.clone(),
    }
}

/// The Bessel norm bound `sqrt(B_Φ B_Ψ) · sup|m_n|`, guaranteed to dominate
/// the operator norm of the realized multiplier.
///
/// Fails with `UnboundedSymbol` when the symbol is tagged unbounded (no
/// finite asymptotic bound exists, so a truncated supremum would be
/// misleading).
pub fn norm_bound(spec: &MultiplierSpec, tols: &Tolerances) -> Result<f64> {
    if spec.symbol.tags().ell_infty == Tri::False {
        return Err(Error::UnboundedSymbol);
    }
    let sup = spec.symbol.sup_abs().ok_or(Error::UnboundedSymbol)?;
    let method = if spec.dim() <= tols.oracle_dim_cap {
        SpectralMethod::DenseOracle
    } else {
        SpectralMethod::PowerIteration
    };
    let b_phi = frames::frame_bounds(&spec.synthesis, method, tols)?.b_upper;
    let b_psi = frames::frame_bounds(&spec.analysis, method, tols)?.b_upper;
    Ok((b_phi * b_psi).sqrt() * sup)
}
