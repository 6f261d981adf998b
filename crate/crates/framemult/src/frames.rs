//! Sequence families in `C^d`, their class taxonomy, the analysis /
//! synthesis / frame operators, frame bounds, duals, and symbol handling.
//!
//! A family at a finite truncation is always an explicit list of vectors.
//! Claims about the *infinite* object a generator stands for travel as
//! analytic class tags and symbol asymptotics; numeric verdicts are always
//! "at truncation" and the two channels are kept apart on purpose.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::dense::CMat;
use crate::error::{Error, Result};
use crate::linop::{dense_of, spectral_estimates, LinearOp, SpectralMethod};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Three-valued truth for analytic classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn is_true(self) -> bool {
        self == Tri::True
    }

    pub fn is_false(self) -> bool {
        self == Tri::False
    }

    fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }
}

/// Where a tag came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Attached by a catalogue generator that knows the infinite object.
    Analytic,
    /// Inferred from numerics at a finite truncation.
    NumericTruncation,
    /// Supplied by the caller.
    Declared,
}

/// Class tags for a sequence family.
///
/// `bessel ⊇ frame ⊇ riesz` is kept monotone by construction. `nbb` / `nba`
/// are norm-bounded below / above; `norm_sn` means both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassTags {
    pub bessel: Tri,
    pub frame: Tri,
    pub riesz: Tri,
    pub nbb: Tri,
    pub nba: Tri,
    pub norm_sn: Tri,
    pub provenance: Provenance,
}

impl ClassTags {
    pub fn unknown() -> Self {
        Self {
            bessel: Tri::Unknown,
            frame: Tri::Unknown,
            riesz: Tri::Unknown,
            nbb: Tri::Unknown,
            nba: Tri::Unknown,
            norm_sn: Tri::Unknown,
            provenance: Provenance::Declared,
        }
    }

    /// Normalizes the taxonomy: Riesz implies frame implies Bessel, and the
    /// refutations propagate downward.
    pub fn normalized(mut self) -> Self {
        if self.riesz == Tri::True {
            self.frame = Tri::True;
        }
        if self.frame == Tri::True {
            self.bessel = Tri::True;
        }
        if self.bessel == Tri::False {
            self.frame = Tri::False;
        }
        if self.frame == Tri::False {
            self.riesz = Tri::False;
        }
        self.norm_sn = self.norm_sn.and(Tri::True).and(self.norm_sn); // no-op, keep explicit below
        if self.nbb == Tri::True && self.nba == Tri::True {
            self.norm_sn = Tri::True;
        }
        if self.nbb == Tri::False || self.nba == Tri::False {
            self.norm_sn = Tri::False;
        }
        self
    }
}

/// Two-sided brackets on the optimal frame bounds `A ≤ B`.
#[derive(Clone, Copy, Debug)]
pub struct FrameBounds {
    pub a_lower: f64,
    pub a_upper: f64,
    pub b_lower: f64,
    pub b_upper: f64,
    pub method: SpectralMethod,
}

impl FrameBounds {
    /// True when the lower bound is certified strictly positive, i.e. the
    /// family spans at this truncation.
    pub fn certifies_frame(&self, tols: &Tolerances) -> bool {
        self.a_lower > tols.tol_rank
    }
}

/// An indexed family of vectors in `C^d`.
#[derive(Clone, Debug)]
pub struct SequenceFamily {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
    tags: ClassTags,
    label: String,
}

impl SequenceFamily {
    pub fn new(dim: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimMismatch { expected: dim, got: v.len() });
            }
        }
        Ok(Self { dim, vectors, tags: ClassTags::unknown(), label: String::new() })
    }

    pub fn with_tags(mut self, tags: ClassTags) -> Self {
        self.tags = tags.normalized();
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The orthonormal basis `e_1, …, e_d`.
    pub fn onb(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|i| {
                let mut v = vec![C_ZERO; dim];
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self {
            dim,
            vectors,
            tags: ClassTags {
                bessel: Tri::True,
                frame: Tri::True,
                riesz: Tri::True,
                nbb: Tri::True,
                nba: Tri::True,
                norm_sn: Tri::True,
                provenance: Provenance::Analytic,
            },
            label: "onb".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, n: usize) -> &[Complex64] {
        &self.vectors[n]
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn tags(&self) -> &ClassTags {
        &self.tags
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// Keeps only the first `count` vectors.
    pub fn truncated(&self, count: usize) -> Self {
        let mut out = self.clone();
        out.vectors.truncate(count);
        out
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|z| z * s).collect())
            .collect();
        Self { dim: self.dim, vectors, tags: self.tags, label: format!("{}·{}", s, self.label) }
    }

    /// Element-wise difference `(φ_n − ψ_n)`.
    pub fn sub(&self, other: &SequenceFamily) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: other.dim });
        }
        if other.count() != self.count() {
            return Err(Error::CountMismatch { expected: self.count(), got: other.count() });
        }
        let vectors = self
            .vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Ok(Self {
            dim: self.dim,
            vectors,
            tags: ClassTags::unknown(),
            label: format!("{} − {}", self.label, other.label),
        })
    }

    /// The synthesis matrix: column `n` is the `n`-th vector.
    pub fn matrix(&self) -> CMat {
        CMat::from_columns(&self.vectors)
    }
}

/// Analysis operator `f ↦ (⟨f, φ_n⟩)_n : C^d → C^N`.
pub fn analysis(family: &SequenceFamily) -> LinearOp {
    let fam = family.clone();
    let adj_fam = family.clone();
    LinearOp::new(family.dim(), family.count(), format!("analysis({})", family.label()), move |f| {
        fam.vectors
            .iter()
            .map(|phi| f.iter().zip(phi).map(|(a, b)| a * b.conj()).sum())
            .collect()
    })
    .with_adjoint(move |c| synthesis_apply(&adj_fam, c))
}

/// Synthesis operator `(c_n) ↦ Σ c_n φ_n : C^N → C^d`.
pub fn synthesis(family: &SequenceFamily) -> LinearOp {
    let fam = family.clone();
    let adj_fam = family.clone();
    LinearOp::new(family.count(), family.dim(), format!("synthesis({})", family.label()), move |c| {
        synthesis_apply(&fam, c)
    })
    .with_adjoint(move |f| {
        adj_fam
            .vectors
            .iter()
            .map(|phi| f.iter().zip(phi).map(|(a, b)| a * b.conj()).sum())
            .collect()
    })
}

fn synthesis_apply(family: &SequenceFamily, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![C_ZERO; family.dim()];
    for (c, phi) in coeffs.iter().zip(&family.vectors) {
        if *c == C_ZERO {
            continue;
        }
        for (o, p) in out.iter_mut().zip(phi) {
            *o += c * p;
        }
    }
    out
}

/// Frame operator `S = synthesis ∘ analysis`; Hermitian PSD.
pub fn frame_operator(family: &SequenceFamily) -> LinearOp {
    synthesis(family)
        .compose(&analysis(family))
        .expect("analysis/synthesis dimensions always compose")
        .relabel(format!("frame_operator({})", family.label()))
}

/// Brackets on the optimal frame bounds, via the extreme singular values of
/// the synthesis map (`A = σ_min²`, `B = σ_max²` once the family spans).
pub fn frame_bounds(family: &SequenceFamily, method: SpectralMethod, tols: &Tolerances) -> Result<FrameBounds> {
    let est = match method {
        SpectralMethod::DenseOracle => {
            let sv = family.matrix().singular_values();
            let top = sv.first().copied().unwrap_or(0.0);
            let bottom = if family.count() < family.dim() {
                0.0
            } else {
                sv.get(family.dim().saturating_sub(1)).copied().unwrap_or(0.0)
            };
            let slack = 8.0 * f64::EPSILON * ((family.dim() * family.count().max(1)) as f64).sqrt()
                * top.max(1.0);
            (top - slack, top + slack, bottom - slack, bottom + slack)
        }
        SpectralMethod::PowerIteration => {
            let est = spectral_estimates(&synthesis_square_side(family), method, tols)?;
            (est.op_norm_lower, est.op_norm_upper, est.min_sv_lower, est.min_sv_upper)
        }
    };
    let (top_lo, top_hi, bot_lo, bot_hi) = est;
    Ok(FrameBounds {
        a_lower: (bot_lo.max(0.0)).powi(2),
        a_upper: (bot_hi.max(0.0)).powi(2),
        b_lower: (top_lo.max(0.0)).powi(2),
        b_upper: (top_hi.max(0.0)).powi(2),
        method,
    })
}

/// For power iteration, work with the `d × d` side of the spectrum: the
/// nonzero singular values of synthesis and analysis agree, and `d ≤ N` for
/// spanning families.
fn synthesis_square_side(family: &SequenceFamily) -> LinearOp {
    analysis(family)
}

/// Upper estimate of the Bessel bound (`σ_max²` of synthesis). Cheap path
/// for diagnostics sweeps.
pub fn bessel_bound_upper(family: &SequenceFamily, method: SpectralMethod, tols: &Tolerances) -> Result<f64> {
    Ok(frame_bounds(family, method, tols)?.b_upper)
}

/// Canonical dual `(S⁻¹ φ_n)`.
pub fn canonical_dual(family: &SequenceFamily, tols: &Tolerances) -> Result<SequenceFamily> {
    let bounds = frame_bounds(family, SpectralMethod::DenseOracle, tols)?;
    if !bounds.certifies_frame(tols) {
        return Err(Error::NotAFrame { a_lower: bounds.a_lower });
    }
    let s = dense_of(&frame_operator(family), tols)?;
    let lu = s.lu().ok_or(Error::NotAFrame { a_lower: bounds.a_lower })?;
    let vectors = family.vectors.iter().map(|phi| lu.solve(phi)).collect();
    let mut tags = family.tags;
    tags.provenance = Provenance::NumericTruncation;
    Ok(SequenceFamily {
        dim: family.dim,
        vectors,
        tags: tags.normalized(),
        label: format!("dual({})", family.label()),
    })
}

/// Checks the duality identity `synthesis(Φ) ∘ analysis(Φd) = I`; returns the
/// verdict together with the operator-norm residual.
pub fn is_dual_pair(phi: &SequenceFamily, phid: &SequenceFamily, tols: &Tolerances) -> Result<(bool, f64)> {
    if phid.dim() != phi.dim() {
        return Err(Error::DimMismatch { expected: phi.dim(), got: phid.dim() });
    }
    if phid.count() != phi.count() {
        return Err(Error::CountMismatch { expected: phi.count(), got: phid.count() });
    }
    let op = synthesis(phi).compose(&analysis(phid))?;
    let m = dense_of(&op, tols)?;
    let residual = m.sub(&CMat::identity(phi.dim())).op_norm();
    Ok((residual <= tols.tol_dual(phi.dim()), residual))
}

/// Riesz certification at a truncation: exactly `d` vectors whose synthesis
/// map is invertible.
#[derive(Clone, Copy, Debug)]
pub struct RieszMargin {
    pub certified: bool,
    pub min_sv: f64,
}

pub fn riesz_margin(family: &SequenceFamily, tols: &Tolerances) -> RieszMargin {
    if family.count() != family.dim() {
        return RieszMargin { certified: false, min_sv: 0.0 };
    }
    let min_sv = family.matrix().min_singular_value();
    RieszMargin { certified: min_sv > tols.tol_rank, min_sv }
}

/// Asymptotic data a symbol generator knows about the infinite sequence.
/// `None` in a `sup` field means unbounded.
#[derive(Clone, Copy, Debug)]
pub struct SymbolAsymptotics {
    pub sup_abs: Option<f64>,
    pub inf_abs: f64,
    /// `sup_n |m_n − 1|`.
    pub sup_dev_one: Option<f64>,
}

/// Tri-state tags for a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolTags {
    pub sn: Tri,
    pub nbb: Tri,
    pub ell_infty: Tri,
    pub positive: Tri,
    pub negative: Tri,
}

impl SymbolTags {
    pub fn unknown() -> Self {
        Self { sn: Tri::Unknown, nbb: Tri::Unknown, ell_infty: Tri::Unknown, positive: Tri::Unknown, negative: Tri::Unknown }
    }

    /// SN forces NBB and boundedness.
    pub fn normalized(mut self) -> Self {
        if self.sn == Tri::True {
            self.nbb = Tri::True;
            self.ell_infty = Tri::True;
        }
        if self.nbb == Tri::False || self.ell_infty == Tri::False {
            self.sn = Tri::False;
        }
        self
    }
}

/// A complex weight sequence at a truncation.
#[derive(Clone, Debug)]
pub struct Symbol {
    values: Vec<Complex64>,
    tags: SymbolTags,
    asymptotics: Option<SymbolAsymptotics>,
    label: String,
}

impl Symbol {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values, tags: SymbolTags::unknown(), asymptotics: None, label: String::new() }
    }

    pub fn constant(value: Complex64, count: usize) -> Self {
        let dev = (value - Complex64::new(1.0, 0.0)).norm();
        Self {
            values: vec![value; count],
            tags: SymbolTags {
                sn: if value.norm() > 0.0 { Tri::True } else { Tri::False },
                nbb: if value.norm() > 0.0 { Tri::True } else { Tri::False },
                ell_infty: Tri::True,
                positive: if value.im == 0.0 && value.re > 0.0 { Tri::True } else { Tri::False },
                negative: if value.im == 0.0 && value.re < 0.0 { Tri::True } else { Tri::False },
            }
            .normalized(),
            asymptotics: Some(SymbolAsymptotics {
                sup_abs: Some(value.norm()),
                inf_abs: value.norm(),
                sup_dev_one: Some(dev),
            }),
            label: format!("const({value})"),
        }
    }

    pub fn ones(count: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), count)
    }

    pub fn with_tags(mut self, tags: SymbolTags) -> Self {
        self.tags = tags.normalized();
        self
    }

    pub fn with_asymptotics(mut self, a: SymbolAsymptotics) -> Self {
        self.asymptotics = Some(a);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tags(&self) -> &SymbolTags {
        &self.tags
    }

    pub fn asymptotics(&self) -> Option<&SymbolAsymptotics> {
        self.asymptotics.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn conj(&self) -> Symbol {
        let values = self.values.iter().map(|z| z.conj()).collect();
        Symbol {
            values,
            tags: SymbolTags {
                // Conjugation preserves every class in the taxonomy.
                positive: self.tags.positive,
                negative: self.tags.negative,
                ..self.tags
            },
            asymptotics: self.asymptotics,
            label: format!("conj({})", self.label),
        }
    }

    pub fn truncated(&self, count: usize) -> Symbol {
        let mut out = self.clone();
        out.values.truncate(count);
        out
    }

    /// Largest modulus: the analytic supremum when attached, otherwise the
    /// truncated scan.
    pub fn sup_abs(&self) -> Option<f64> {
        match self.asymptotics {
            Some(a) => a.sup_abs,
            None => Some(self.scan_sup_abs()),
        }
    }

    pub fn scan_sup_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest modulus: analytic infimum when attached, else scanned.
    pub fn inf_abs(&self) -> f64 {
        match self.asymptotics {
            Some(a) => a.inf_abs,
            None => self.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min),
        }
    }

    /// `sup_n |m_n − 1|`: analytic when attached, else scanned.
    pub fn sup_dev_one(&self) -> Option<f64> {
        match self.asymptotics {
            Some(a) => a.sup_dev_one,
            None => Some(
                self.values
                    .iter()
                    .map(|z| (z - Complex64::new(1.0, 0.0)).norm())
                    .fold(0.0, f64::max),
            ),
        }
    }

    /// Scans the truncated values for a uniform real sign; returns
    /// `(sign, a, b)` with `0 < a ≤ |m_n| ≤ b`. Analytic tags override a scan
    /// that looks signed but is tagged otherwise.
    pub fn signed_range(&self, tols: &Tolerances) -> Result<(f64, f64, f64)> {
        if self.values.is_empty() {
            return Err(Error::SymbolNotSigned);
        }
        let mut sign = 0.0;
        let mut a = f64::INFINITY;
        let mut b: f64 = 0.0;
        for z in &self.values {
            if z.im.abs() > tols.tol_sign * z.norm().max(1.0) {
                return Err(Error::SymbolNotSigned);
            }
            let s = if z.re > 0.0 { 1.0 } else { -1.0 };
            if z.re == 0.0 {
                return Err(Error::SymbolNotSigned);
            }
            if sign == 0.0 {
                sign = s;
            } else if s != sign {
                return Err(Error::SymbolNotSigned);
            }
            a = a.min(z.norm());
            b = b.max(z.norm());
        }
        if let Some(asym) = self.asymptotics {
            a = a.min(asym.inf_abs);
            match asym.sup_abs {
                Some(s) => b = b.max(s),
                None => return Err(Error::SymbolNotSigned),
            }
        }
        if a <= 0.0 {
            return Err(Error::SymbolNotSigned);
        }
        Ok((sign, a, b))
    }
}

/// The weighted family `(m_n φ_n)`; counts are aligned by truncating to the
/// shorter of the two. Analytic tags propagate along the decidable rules of
/// the weighted-family classification.
pub fn weighted(m: &Symbol, family: &SequenceFamily) -> SequenceFamily {
    let count = m.len().min(family.count());
    let vectors: Vec<Vec<Complex64>> = m.values[..count]
        .iter()
        .zip(&family.vectors[..count])
        .map(|(w, phi)| phi.iter().map(|z| w * z).collect())
        .collect();
    let tags = propagate_weighted_tags(m.tags(), family.tags());
    SequenceFamily {
        dim: family.dim,
        vectors,
        tags,
        label: format!("{}·{}", m.label(), family.label()),
    }
}

fn propagate_weighted_tags(m: &SymbolTags, f: &ClassTags) -> ClassTags {
    let mut out = ClassTags::unknown();
    out.provenance = f.provenance;
    if m.sn == Tri::True {
        // A semi-normalized weight preserves every class with rescaled bounds.
        out = ClassTags { provenance: f.provenance, ..*f };
    } else {
        if m.ell_infty == Tri::True && f.bessel == Tri::True {
            out.bessel = Tri::True;
        }
        if m.nbb == Tri::True && f.bessel == Tri::False {
            // mΦ Bessel would force Φ Bessel via the bounded weight 1/m.
            out.bessel = Tri::False;
        }
        if m.ell_infty == Tri::False && f.nbb == Tri::True {
            // Unbounded weights on norm-bounded-below vectors break the
            // norm bound that Bessel requires.
            out.bessel = Tri::False;
        }
        if f.riesz == Tri::True && m.sn == Tri::False {
            // A weighted Riesz basis needs a semi-normalized weight.
            out.riesz = Tri::False;
        }
        if f.frame == Tri::True && f.riesz == Tri::False {
            // No admissible case turns an overcomplete frame into a Riesz basis.
            out.riesz = Tri::False;
        }
        if m.nbb == Tri::True && f.nbb == Tri::True {
            out.nbb = Tri::True;
        }
        if m.ell_infty == Tri::True && f.nba == Tri::True {
            out.nba = Tri::True;
        }
    }
    out.normalized()
}

/// The admissible cases under which a weighted family can be a Riesz basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedRieszCase {
    /// Riesz family with a semi-normalized weight.
    CaseRieszSn,
    /// Non-NBB Bessel non-frame family with an NBB unbounded weight.
    CaseNonNbbBessel,
    /// Non-NBA non-Bessel family with a nowhere-zero non-NBB weight.
    CaseNonNbaNonBessel,
    /// The tags contradict every admissible case.
    Impossible,
    Unknown,
}

/// Decides which admissible weighted-Riesz case the pair of analytic tags
/// matches. Zero weights must be pruned first.
pub fn classify_weighted_riesz(m: &Symbol, family: &SequenceFamily) -> WeightedRieszCase {
    let mt = m.tags();
    let ft = family.tags();

    let case1 = ft.riesz.and(mt.sn);
    let case2 = tri_all(&[
        tri_not(ft.nbb),
        ft.bessel,
        tri_not(ft.frame),
        mt.nbb,
        tri_not(mt.ell_infty),
    ]);
    let case3 = tri_all(&[tri_not(ft.nba), tri_not(ft.bessel), tri_not(mt.nbb)]);

    match (case1, case2, case3) {
        (Tri::True, _, _) => WeightedRieszCase::CaseRieszSn,
        (_, Tri::True, _) => WeightedRieszCase::CaseNonNbbBessel,
        (_, _, Tri::True) => WeightedRieszCase::CaseNonNbaNonBessel,
        (Tri::False, Tri::False, Tri::False) => WeightedRieszCase::Impossible,
        _ => WeightedRieszCase::Unknown,
    }
}

fn tri_not(t: Tri) -> Tri {
    match t {
        Tri::True => Tri::False,
        Tri::False => Tri::True,
        Tri::Unknown => Tri::Unknown,
    }
}

fn tri_all(ts: &[Tri]) -> Tri {
    ts.iter().copied().fold(Tri::True, Tri::and)
}

/// A zero-pruned multiplier triple together with the surviving indices.
#[derive(Clone, Debug)]
pub struct PrunedTriple {
    pub symbol: Symbol,
    pub synthesis: SequenceFamily,
    pub analysis: SequenceFamily,
    /// `index_map[k]` is the original index of surviving position `k`.
    pub index_map: Vec<usize>,
}

/// Drops every index at which the symbol or either family vanishes; those
/// indices contribute nothing to the multiplier. An empty result means the
/// multiplier is the zero operator.
pub fn prune_zeros(m: &Symbol, phi: &SequenceFamily, psi: &SequenceFamily) -> Result<PrunedTriple> {
    let count = m.len().min(phi.count()).min(psi.count());
    let phi_norms = phi.norms();
    let psi_norms = psi.norms();
    let mut index_map = Vec::new();
    for n in 0..count {
        if m.values()[n] != C_ZERO && phi_norms[n] != 0.0 && psi_norms[n] != 0.0 {
            index_map.push(n);
        }
    }
    if index_map.is_empty() {
        return Err(Error::EmptyAfterPrune);
    }
    let symbol = Symbol {
        values: index_map.iter().map(|&n| m.values()[n]).collect(),
        tags: *m.tags(),
        asymptotics: m.asymptotics,
        label: m.label.clone(),
    };
    let take = |f: &SequenceFamily| SequenceFamily {
        dim: f.dim,
        vectors: index_map.iter().map(|&n| f.vectors[n].clone()).collect(),
        tags: f.tags,
        label: f.label.clone(),
    };
    Ok(PrunedTriple { symbol, synthesis: take(phi), analysis: take(psi), index_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::probe_vector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    /// (e1, e1, e2, e3, …, e_d): overcomplete by one, doubled first vector.
    fn repeated_first(d: usize) -> SequenceFamily {
        let onb = SequenceFamily::onb(d);
        let mut vectors = vec![onb.vector(0).to_vec()];
        vectors.extend(onb.vectors().iter().cloned());
        SequenceFamily::new(d, vectors).unwrap().with_label("repeated_first")
    }

    #[test]
    fn analysis_of_onb_picks_coordinates() {
        let phi = SequenceFamily::onb(4);
        let u = analysis(&phi);
        let mut f = vec![C_ZERO; 4];
        f[0] = c(1.0, 0.0);
        let out = u.apply(&f);
        assert!((out[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(out[1..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn analysis_of_repeated_first() {
        let phi = repeated_first(4);
        let mut f = vec![C_ZERO; 4];
        f[0] = c(1.0, 0.0);
        let out = analysis(&phi).apply(&f);
        assert!((out[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((out[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(out[2..].iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn analysis_matches_gram_computation() {
        let d = 5;
        let vectors: Vec<Vec<Complex64>> = (0..7)
            .map(|n| probe_vector(d, n as u64 + 100))
            .collect();
        let phi = SequenceFamily::new(d, vectors.clone()).unwrap();
        let f = probe_vector(d, 3);
        let out = analysis(&phi).apply(&f);
        for (n, phi_n) in vectors.iter().enumerate() {
            let want: Complex64 = f.iter().zip(phi_n).map(|(a, b)| a * b.conj()).sum();
            assert!((out[n] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn synthesis_is_adjoint_of_analysis() {
        let d = 6;
        let vectors: Vec<Vec<Complex64>> = (0..9).map(|n| probe_vector(d, n as u64)).collect();
        let phi = SequenceFamily::new(d, vectors).unwrap();
        let u = analysis(&phi);
        let t = synthesis(&phi);
        let f = probe_vector(d, 21);
        let cvec = probe_vector(phi.count(), 22);
        let lhs: Complex64 = u.apply(&f).iter().zip(&cvec).map(|(a, b)| a * b.conj()).sum();
        let rhs: Complex64 = f.iter().zip(&t.apply(&cvec)).map(|(a, b)| a * b.conj()).sum();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn synthesis_norm_is_sqrt_upper_bound() {
        let phi = repeated_first(8);
        let est = spectral_estimates(&synthesis(&phi), SpectralMethod::DenseOracle, &tols()).unwrap();
        assert!((est.op_norm_upper - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn frame_operator_of_doubled_family_is_twice_identity() {
        let d = 5;
        let onb = SequenceFamily::onb(d);
        let mut vectors = Vec::new();
        for v in onb.vectors() {
            vectors.push(v.clone());
            vectors.push(v.clone());
        }
        let phi = SequenceFamily::new(d, vectors).unwrap();
        let s = dense_of(&frame_operator(&phi), &tols()).unwrap();
        assert!(s.sub(&CMat::identity(d).scale(c(2.0, 0.0))).max_abs() < 1e-14);
    }

    #[test]
    fn frame_operator_matches_gram_sum() {
        let d = 4;
        let vectors: Vec<Vec<Complex64>> = (0..6).map(|n| probe_vector(d, n as u64 + 40)).collect();
        let phi = SequenceFamily::new(d, vectors.clone()).unwrap();
        let s = dense_of(&frame_operator(&phi), &tols()).unwrap();
        let mut want = CMat::zeros(d, d);
        for v in &vectors {
            for i in 0..d {
                for j in 0..d {
                    let upd = want.at(i, j) + v[i] * v[j].conj();
                    want.set(i, j, upd);
                }
            }
        }
        assert!(s.sub(&want).max_abs() < 1e-12);
    }

    #[test]
    fn frame_operator_is_hermitian_psd() {
        let d = 5;
        let vectors: Vec<Vec<Complex64>> = (0..8).map(|n| probe_vector(d, n as u64 + 7)).collect();
        let phi = SequenceFamily::new(d, vectors).unwrap();
        let s = dense_of(&frame_operator(&phi), &tols()).unwrap();
        assert!(s.sub(&s.adjoint()).max_abs() < 1e-12);
        for seed in 0..5 {
            let f = probe_vector(d, seed + 60);
            let sf = s.matvec(&f);
            let quad: Complex64 = sf.iter().zip(&f).map(|(a, b)| a * b.conj()).sum();
            assert!(quad.re > -1e-10);
            assert!(quad.im.abs() < 1e-10);
        }
    }

    #[test]
    fn frame_bounds_onb() {
        let b = frame_bounds(&SequenceFamily::onb(6), SpectralMethod::DenseOracle, &tols()).unwrap();
        assert!(b.a_lower <= 1.0 && 1.0 <= b.a_upper);
        assert!(b.b_lower <= 1.0 && 1.0 <= b.b_upper);
        assert!((b.a_lower - 1.0).abs() < 1e-10);
        assert!((b.b_upper - 1.0).abs() < 1e-10);
    }

    #[test]
    fn frame_bounds_repeated_first() {
        let b = frame_bounds(&repeated_first(8), SpectralMethod::DenseOracle, &tols()).unwrap();
        assert!((b.a_upper - 1.0).abs() < 1e-10);
        assert!((b.b_upper - 2.0).abs() < 1e-10);
    }

    #[test]
    fn frame_bounds_geometric_interleave_truncation_value() {
        // (q e1, e2, q² e1, e3, …): A at truncation is the geometric partial
        // sum of q², B = 1.
        let d = 9;
        let q = 0.5_f64;
        let onb = SequenceFamily::onb(d);
        let mut vectors = Vec::new();
        for k in 1..d {
            let mut first = vec![C_ZERO; d];
            first[0] = c(q.powi(k as i32), 0.0);
            vectors.push(first);
            vectors.push(onb.vector(k).to_vec());
        }
        let phi = SequenceFamily::new(d, vectors).unwrap();
        let b = frame_bounds(&phi, SpectralMethod::DenseOracle, &tols()).unwrap();
        let a_expected: f64 = (1..d).map(|k| q.powi(2 * k as i32)).sum();
        assert!((b.a_upper - a_expected).abs() < 1e-12, "A = {} want {}", b.a_upper, a_expected);
        assert!((b.b_upper - 1.0).abs() < 1e-10);
        // Trend toward the limit 1/3.
        assert!((a_expected - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn canonical_dual_of_onb_is_onb() {
        let phi = SequenceFamily::onb(4);
        let dual = canonical_dual(&phi, &tols()).unwrap();
        for (a, b) in dual.vectors().iter().zip(phi.vectors()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn canonical_dual_of_repeated_first_halves_the_doubled_vector() {
        let phi = repeated_first(5);
        let dual = canonical_dual(&phi, &tols()).unwrap();
        assert!((dual.vector(0)[0] - c(0.5, 0.0)).norm() < 1e-13);
        assert!((dual.vector(1)[0] - c(0.5, 0.0)).norm() < 1e-13);
        assert!((dual.vector(2)[1] - c(1.0, 0.0)).norm() < 1e-13);
        let (ok, residual) = is_dual_pair(&phi, &dual, &tols()).unwrap();
        assert!(ok, "residual {residual}");
    }

    #[test]
    fn canonical_dual_of_scaled_onb_inverts_the_scale() {
        let phi = SequenceFamily::onb(3).scaled(c(2.0, 0.0));
        let dual = canonical_dual(&phi, &tols()).unwrap();
        assert!((dual.vector(1)[1] - c(0.5, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn canonical_dual_requires_a_frame() {
        let d = 4;
        let phi = SequenceFamily::new(d, vec![SequenceFamily::onb(d).vector(0).to_vec(); 3]).unwrap();
        match canonical_dual(&phi, &tols()) {
            Err(Error::NotAFrame { .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn double_dual_returns_the_family() {
        let phi = repeated_first(6);
        let tt = tols();
        let once = canonical_dual(&phi, &tt).unwrap();
        let twice = canonical_dual(&once, &tt).unwrap();
        for (a, b) in twice.vectors().iter().zip(phi.vectors()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn dual_pair_with_the_shifted_dual() {
        // Duals of (e1, e1, e2, …) are exactly (h, e1 − h, e2, …).
        let d = 6;
        let phi = repeated_first(d);
        let mut h = vec![C_ZERO; d];
        h[0] = c(0.3, 0.0);
        h[1] = c(0.1, 0.0);
        let mut vectors = vec![h.clone()];
        let mut second = vec![C_ZERO; d];
        second[0] = c(1.0, 0.0);
        for (s, hv) in second.iter_mut().zip(&h) {
            *s -= hv;
        }
        vectors.push(second);
        for k in 1..d {
            vectors.push(SequenceFamily::onb(d).vector(k).to_vec());
        }
        let phid = SequenceFamily::new(d, vectors).unwrap();
        let (ok, _) = is_dual_pair(&phi, &phid, &tols()).unwrap();
        assert!(ok);
        // A mismatched scaling is not a dual.
        let (ok2, residual) = is_dual_pair(&SequenceFamily::onb(d), &SequenceFamily::onb(d).scaled(c(2.0, 0.0)), &tols()).unwrap();
        assert!(!ok2);
        assert!((residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn riesz_margin_verdicts() {
        let t = tols();
        let onb = SequenceFamily::onb(5);
        let m = riesz_margin(&onb, &t);
        assert!(m.certified);
        assert!((m.min_sv - 1.0).abs() < 1e-12);

        // N = d with a repeated vector: rank deficient.
        let mut vectors = vec![onb.vector(0).to_vec(), onb.vector(0).to_vec()];
        for k in 1..4 {
            vectors.push(onb.vector(k).to_vec());
        }
        let dep = SequenceFamily::new(5, vectors).unwrap();
        assert!(!riesz_margin(&dep, &t).certified);

        // (n e_n) is invertible with min_sv 1 at every truncation.
        let scaled = SequenceFamily::new(
            5,
            (0..5)
                .map(|k| {
                    let mut v = vec![C_ZERO; 5];
                    v[k] = c((k + 1) as f64, 0.0);
                    v
                })
                .collect(),
        )
        .unwrap();
        let m = riesz_margin(&scaled, &t);
        assert!(m.certified);
        assert!((m.min_sv - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_identity_and_inverse_scaling() {
        let d = 5;
        let ones = Symbol::ones(d);
        let onb = SequenceFamily::onb(d);
        let w = weighted(&ones, &onb);
        for (a, b) in w.vectors().iter().zip(onb.vectors()) {
            assert_eq!(a, b);
        }
        // (1/n) weights on (n e_n) give back the basis.
        let grow = SequenceFamily::new(
            d,
            (0..d)
                .map(|k| {
                    let mut v = vec![C_ZERO; d];
                    v[k] = c((k + 1) as f64, 0.0);
                    v
                })
                .collect(),
        )
        .unwrap();
        let m = Symbol::new((1..=d).map(|n| c(1.0 / n as f64, 0.0)).collect());
        let w = weighted(&m, &grow);
        for (k, v) in w.vectors().iter().enumerate() {
            assert!((v[k] - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn weighted_bounds_match_conjugate_weighted_bounds() {
        let d = 6;
        let vectors: Vec<Vec<Complex64>> = (0..9).map(|n| probe_vector(d, n as u64 + 11)).collect();
        let phi = SequenceFamily::new(d, vectors).unwrap();
        let m = Symbol::new(probe_vector(9, 77));
        let t = tols();
        let b1 = frame_bounds(&weighted(&m, &phi), SpectralMethod::DenseOracle, &t).unwrap();
        let b2 = frame_bounds(&weighted(&m.conj(), &phi), SpectralMethod::DenseOracle, &t).unwrap();
        assert!((b1.a_upper - b2.a_upper).abs() < 1e-10);
        assert!((b1.b_upper - b2.b_upper).abs() < 1e-10);
    }

    #[test]
    fn classify_weighted_riesz_cases() {
        let sn = SymbolTags { sn: Tri::True, nbb: Tri::True, ell_infty: Tri::True, positive: Tri::Unknown, negative: Tri::Unknown };
        let riesz_tags = SequenceFamily::onb(3).tags;

        let m = Symbol::ones(3).with_tags(sn);
        let phi = SequenceFamily::onb(3);
        assert_eq!(classify_weighted_riesz(&m, &phi), WeightedRieszCase::CaseRieszSn);

        // Riesz family with a decaying (non-SN, non-NBB) weight: impossible.
        let decay = Symbol::new((1..=3).map(|n| c(1.0 / n as f64, 0.0)).collect()).with_tags(
            SymbolTags { sn: Tri::False, nbb: Tri::False, ell_infty: Tri::True, positive: Tri::True, negative: Tri::False },
        );
        let phi2 = SequenceFamily::new(3, SequenceFamily::onb(3).vectors().to_vec())
            .unwrap()
            .with_tags(riesz_tags);
        assert_eq!(classify_weighted_riesz(&decay, &phi2), WeightedRieszCase::Impossible);

        // Non-NBB Bessel non-frame with NBB unbounded weight.
        let bess = ClassTags {
            bessel: Tri::True,
            frame: Tri::False,
            riesz: Tri::False,
            nbb: Tri::False,
            nba: Tri::True,
            norm_sn: Tri::False,
            provenance: Provenance::Analytic,
        };
        let grow = Symbol::new((1..=3).map(|n| c(n as f64, 0.0)).collect()).with_tags(SymbolTags {
            sn: Tri::False,
            nbb: Tri::True,
            ell_infty: Tri::False,
            positive: Tri::True,
            negative: Tri::False,
        });
        let psi = SequenceFamily::new(3, SequenceFamily::onb(3).vectors().to_vec())
            .unwrap()
            .with_tags(bess);
        assert_eq!(classify_weighted_riesz(&grow, &psi), WeightedRieszCase::CaseNonNbbBessel);

        // Without tags: unknown.
        let blank = Symbol::new(vec![c(1.0, 0.0); 3]);
        let plain = SequenceFamily::new(3, SequenceFamily::onb(3).vectors().to_vec()).unwrap();
        assert_eq!(classify_weighted_riesz(&blank, &plain), WeightedRieszCase::Unknown);
    }

    #[test]
    fn prune_zeros_interleaved_everything_vanishes() {
        let d = 4;
        let onb = SequenceFamily::onb(d);
        let mut phi_vecs = Vec::new();
        let mut psi_vecs = Vec::new();
        for k in 0..d {
            phi_vecs.push(onb.vector(k).to_vec());
            phi_vecs.push(vec![C_ZERO; d]);
            psi_vecs.push(vec![C_ZERO; d]);
            psi_vecs.push(onb.vector(k).to_vec());
        }
        let phi = SequenceFamily::new(d, phi_vecs).unwrap();
        let psi = SequenceFamily::new(d, psi_vecs).unwrap();
        let m = Symbol::ones(2 * d);
        match prune_zeros(&m, &phi, &psi) {
            Err(Error::EmptyAfterPrune) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn prune_zeros_keeps_the_overlapping_slots() {
        let d = 3;
        let onb = SequenceFamily::onb(d);
        let mut phi_vecs = Vec::new();
        let mut psi_vecs = Vec::new();
        let mut weights = Vec::new();
        for k in 0..d {
            phi_vecs.push(onb.vector(k).to_vec());
            psi_vecs.push(vec![C_ZERO; d]);
            weights.push(c(2.0, 0.0));
            phi_vecs.push(onb.vector(k).to_vec());
            psi_vecs.push(onb.vector(k).to_vec());
            weights.push(c(1.0, 0.0));
            phi_vecs.push(vec![C_ZERO; d]);
            psi_vecs.push(onb.vector(k).to_vec());
            weights.push(c(3.0, 0.0));
        }
        let phi = SequenceFamily::new(d, phi_vecs).unwrap();
        let psi = SequenceFamily::new(d, psi_vecs).unwrap();
        let m = Symbol::new(weights);
        let pruned = prune_zeros(&m, &phi, &psi).unwrap();
        assert_eq!(pruned.index_map, vec![1, 4, 7]);
        assert_eq!(pruned.synthesis.count(), d);
        for (k, v) in pruned.synthesis.vectors().iter().enumerate() {
            assert!((v[k] - c(1.0, 0.0)).norm() < 1e-15);
        }
        assert!(pruned.symbol.values().iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn prune_zeros_without_zeros_is_identity() {
        let d = 3;
        let phi = SequenceFamily::onb(d);
        let psi = SequenceFamily::onb(d);
        let m = Symbol::ones(d);
        let pruned = prune_zeros(&m, &phi, &psi).unwrap();
        assert_eq!(pruned.index_map, vec![0, 1, 2]);
    }

    #[test]
    fn inverse_frame_operator_respects_reciprocal_bounds() {
        let d = 5;
        let phi = repeated_first(d);
        let t = tols();
        let bounds = frame_bounds(&phi, SpectralMethod::DenseOracle, &t).unwrap();
        let s = dense_of(&frame_operator(&phi), &t).unwrap();
        let s_inv = s.inverse().unwrap();
        for seed in 0..5 {
            let f = probe_vector(d, seed + 31);
            let norm_f = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let sf = s_inv.matvec(&f);
            let norm_sf = sf.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(norm_sf >= norm_f / bounds.b_upper - 1e-9);
            assert!(norm_sf <= norm_f / bounds.a_lower + 1e-9);
        }
    }
}
