//! Atomic measures, the Fourier–Plancherel cotransform on `G/H`, the lift
//! `ν ↦ ν̃` from `Ĝ/H^⊥` to `Ĝ`, image measures and the Lebesgue split.
//!
//! Haar conventions: counting measure on `G`, `H` and `G/H`; weight
//! `1/|G/H|` per point on `H^⊥`, which makes the cotransform unitary.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Duality, FiniteAbelianGroup};
use crate::linalg::{C64, ZERO};

/// Point set a measure lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureDomain {
    /// `Ĝ`, points indexed lexicographically.
    Dual,
    /// `Ĝ/H^⊥`, points are coset indices.
    DualQuotient,
    /// `G/H`, points are coset indices.
    Quotient,
}

impl fmt::Display for MeasureDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MeasureDomain::Dual => "dual",
            MeasureDomain::DualQuotient => "dual_quotient",
            MeasureDomain::Quotient => "quotient",
        };
        f.write_str(s)
    }
}

impl MeasureDomain {
    /// Number of points of this domain for the given duality.
    pub fn size(self, d: &Duality) -> usize {
        match self {
            MeasureDomain::Dual => d.group().order(),
            MeasureDomain::DualQuotient => d.dual_quotient().len(),
            MeasureDomain::Quotient => d.quotient().len(),
        }
    }
}

/// Nonnegative weights on a finite point set, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMeasure {
    domain: MeasureDomain,
    weights: Vec<f64>,
}

impl WeightedMeasure {
    pub fn new(domain: MeasureDomain, weights: Vec<f64>) -> Result<Self> {
        if let Some((point, &weight)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeight { point, weight });
        }
        Ok(Self { domain, weights })
    }

    pub fn zero(domain: MeasureDomain, size: usize) -> Self {
        Self {
            domain,
            weights: vec![0.0; size],
        }
    }

    /// Weight 1 on every point of `support`.
    pub fn indicator(domain: MeasureDomain, size: usize, support: &[usize]) -> Self {
        let mut m = Self::zero(domain, size);
        for &p in support {
            m.weights[p] = 1.0;
        }
        m
    }

    pub fn domain(&self) -> MeasureDomain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, point: usize) -> f64 {
        self.weights[point]
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Points with positive weight, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i] > 0.0).collect()
    }

    pub fn in_support(&self, point: usize) -> bool {
        self.weights[point] > 0.0
    }

    /// `supp self ⊆ supp other`.
    pub fn is_absolutely_continuous(&self, other: &WeightedMeasure) -> bool {
        self.domain == other.domain
            && self.len() == other.len()
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(&a, &b)| a == 0.0 || b > 0.0)
    }

    /// Same null sets.
    pub fn is_equivalent(&self, other: &WeightedMeasure) -> bool {
        self.is_absolutely_continuous(other) && other.is_absolutely_continuous(self)
    }

    /// Disjoint supports.
    pub fn is_orthogonal(&self, other: &WeightedMeasure) -> bool {
        self.domain == other.domain
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(&a, &b)| a == 0.0 || b == 0.0)
    }

    /// Radon–Nikodym density `dself/dother` on `supp self`, or `None` when
    /// `self` is not absolutely continuous with respect to `other`. Entries
    /// off the support are 0.
    pub fn density_wrt(&self, other: &WeightedMeasure) -> Option<Vec<f64>> {
        if !self.is_absolutely_continuous(other) {
            return None;
        }
        Some(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(&a, &b)| if a > 0.0 { a / b } else { 0.0 })
                .collect(),
        )
    }

    /// Pointwise product with a nonnegative function.
    pub fn scaled_by(&self, factor: &[f64]) -> Result<Self> {
        if factor.len() != self.len() {
            return Err(Error::MeasureLength {
                expected: self.len(),
                found: factor.len(),
            });
        }
        Self::new(
            self.domain,
            self.weights.iter().zip(factor).map(|(w, f)| w * f).collect(),
        )
    }

    /// Integral of `f` against this measure.
    pub fn integrate(&self, f: &[C64]) -> C64 {
        self.weights.iter().zip(f).map(|(&w, &v)| v * w).sum()
    }

    fn expect(&self, domain: MeasureDomain, size: usize) -> Result<()> {
        if self.domain != domain {
            return Err(Error::DomainMismatch {
                expected: domain.to_string(),
                found: self.domain.to_string(),
            });
        }
        if self.len() != size {
            return Err(Error::MeasureLength {
                expected: size,
                found: self.len(),
            });
        }
        Ok(())
    }

    /// Checks that the measure lives on `domain` of `d`.
    pub fn check_domain(&self, d: &Duality, domain: MeasureDomain) -> Result<()> {
        self.expect(domain, domain.size(d))
    }
}

/// Complex function on the cosets of `G/H`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientFunction {
    values: Vec<C64>,
}

impl QuotientFunction {
    pub fn new(values: Vec<C64>) -> Self {
        Self { values }
    }

    pub fn constant(cosets: usize, value: C64) -> Self {
        Self::new(vec![value; cosets])
    }

    /// Indicator of the coset set `x`.
    pub fn indicator(cosets: usize, x: &[usize]) -> Self {
        let mut values = vec![ZERO; cosets];
        for &c in x {
            values[c] = C64::new(1.0, 0.0);
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check(&self, d: &Duality) -> Result<()> {
        if self.len() != d.quotient_order() {
            return Err(Error::FunctionLength {
                expected: d.quotient_order(),
                found: self.len(),
            });
        }
        Ok(())
    }

    /// `(a·ω)(ġ) = ω(a^{-1}[ġ])`.
    pub fn translate(&self, d: &Duality, a: &crate::group::GroupElement) -> Self {
        let q = d.quotient();
        let minus_a = d.group().neg(a);
        Self::new((0..q.len()).map(|c| self.values[q.act(&minus_a, c)]).collect())
    }

    /// True if every value is real and nonnegative up to `tol`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.values.iter().all(|z| z.im.abs() <= tol && z.re >= -tol)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|z| z.im.abs() <= tol)
    }
}

/// Fixed Haar weights per point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarConventions {
    pub group: f64,
    pub subgroup: f64,
    pub quotient: f64,
    pub annihilator: f64,
}

/// Counting measures on `G`, `H`, `G/H`; `1/|G/H|` on `H^⊥`.
pub fn haar_conventions(d: &Duality) -> HaarConventions {
    HaarConventions {
        group: 1.0,
        subgroup: 1.0,
        quotient: 1.0,
        annihilator: annihilator_weight(d),
    }
}

/// The Haar weight of a single point of `H^⊥`.
pub fn annihilator_weight(d: &Duality) -> f64 {
    1.0 / d.quotient_order() as f64
}

/// `(F̄ω)(y) = Σ_ġ ⟨y, ġ⟩ ω(ġ)`, indexed like `d.annihilator().elements()`.
pub fn fourier_cotransform_quotient(d: &Duality, omega: &QuotientFunction) -> Result<Vec<C64>> {
    omega.check(d)?;
    Ok(cotransform_values(d, omega.values()))
}

pub(crate) fn cotransform_values(d: &Duality, values: &[C64]) -> Vec<C64> {
    (0..d.annihilator().order())
        .map(|y| {
            values
                .iter()
                .enumerate()
                .map(|(c, &w)| d.quotient_phase(y, c) * w)
                .sum()
        })
        .collect()
}

/// Hilbert adjoint of the cotransform:
/// `(F̄*φ)(ġ) = Σ_y conj⟨y, ġ⟩ φ(y) μ_{H^⊥}(pt)`.
pub fn adjoint_cotransform(d: &Duality, phi: &[C64]) -> Result<QuotientFunction> {
    let n = d.annihilator().order();
    if phi.len() != n {
        return Err(Error::FunctionLength {
            expected: n,
            found: phi.len(),
        });
    }
    let w = annihilator_weight(d);
    Ok(QuotientFunction::new(
        (0..d.quotient_order())
            .map(|c| {
                phi.iter()
                    .enumerate()
                    .map(|(y, &v)| d.quotient_phase(y, c).conj() * v)
                    .sum::<C64>()
                    * w
            })
            .collect(),
    ))
}

/// `ν̃({x}) = ν({π(x)}) · μ_{H^⊥}(pt)`.
pub fn lift_measure(d: &Duality, nu: &WeightedMeasure) -> Result<WeightedMeasure> {
    nu.check_domain(d, MeasureDomain::DualQuotient)?;
    let w = annihilator_weight(d);
    let dq = d.dual_quotient();
    WeightedMeasure::new(
        MeasureDomain::Dual,
        (0..d.group().order())
            .map(|x| nu.weight(dq.project_index(x)) * w)
            .collect(),
    )
}

/// `ρ^π(ẋ) = Σ_{x ∈ π^{-1}(ẋ)} ρ(x)`.
pub fn image_measure(d: &Duality, rho: &WeightedMeasure) -> Result<WeightedMeasure> {
    rho.check_domain(d, MeasureDomain::Dual)?;
    let dq = d.dual_quotient();
    let mut weights = vec![0.0; dq.len()];
    for (x, &w) in rho.weights().iter().enumerate() {
        weights[dq.project_index(x)] += w;
    }
    WeightedMeasure::new(MeasureDomain::DualQuotient, weights)
}

/// Splits `ν = ν₁ + ν₂` with `ν₁ = ν` restricted to `supp ρ^π` and `ν₂` the rest.
pub fn decompose_measure(nu: &WeightedMeasure, rho_pi: &WeightedMeasure) -> Result<(WeightedMeasure, WeightedMeasure)> {
    rho_pi.expect(nu.domain(), nu.len())?;
    let mut inside = vec![0.0; nu.len()];
    let mut outside = vec![0.0; nu.len()];
    for (i, &w) in nu.weights().iter().enumerate() {
        if rho_pi.in_support(i) {
            inside[i] = w;
        } else {
            outside[i] = w;
        }
    }
    Ok((
        WeightedMeasure::new(nu.domain(), inside)?,
        WeightedMeasure::new(nu.domain(), outside)?,
    ))
}

/// JSON form `{"domain": "...", "weights": [[point, w], ...]}`, where a point
/// is the coordinate array of a dual character or coset representative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub domain: MeasureDomain,
    pub weights: Vec<(Vec<u64>, f64)>,
}

impl MeasureJson {
    /// Non-zero weights, with points written as coordinates.
    pub fn from_measure(d: &Duality, m: &WeightedMeasure) -> Self {
        let weights = m
            .support()
            .into_iter()
            .map(|p| (point_coords(d, m.domain(), p), m.weight(p)))
            .collect();
        Self {
            domain: m.domain(),
            weights,
        }
    }

    pub fn to_measure(&self, d: &Duality) -> Result<WeightedMeasure> {
        let size = self.domain.size(d);
        let mut weights = vec![0.0; size];
        for (coords, w) in &self.weights {
            let p = point_index(d, self.domain, coords)?;
            weights[p] += *w;
        }
        WeightedMeasure::new(self.domain, weights)
    }
}

fn point_coords(d: &Duality, domain: MeasureDomain, p: usize) -> Vec<u64> {
    match domain {
        MeasureDomain::Dual => d.group().at::<crate::group::DualCharacter>(p).0,
        MeasureDomain::DualQuotient => d.dual_quotient().representative(p).0.clone(),
        MeasureDomain::Quotient => d.quotient().representative(p).0.clone(),
    }
}

fn point_index(d: &Duality, domain: MeasureDomain, coords: &[u64]) -> Result<usize> {
    let g: &FiniteAbelianGroup = d.group();
    match domain {
        MeasureDomain::Dual => Ok(g.index_of(&g.character(coords)?)),
        MeasureDomain::DualQuotient => Ok(d.dual_quotient().project(&g.character(coords)?)),
        MeasureDomain::Quotient => Ok(d.quotient().project(&g.element(coords)?)),
    }
}
