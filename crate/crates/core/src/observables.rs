//! Worked observables and Born-rule plumbing.
//!
//! Functions on the circle are band-limited: `ω(e^{iθ}) = Σ_n c_n e^{inθ}`,
//! so `F̄_𝕋(ω)(n) = (1/2π)∫ e^{inθ} ω dθ = c_{-n}` exactly.
//!
//! The position observable on `ℝ` is replaced by `Z_N` with `H = {0}`; the
//! grid spacing `2π/N` of the dual plays the role of the momentum variable.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{DualCharacter, Duality, FiniteAbelianGroup};
use crate::harmonic::QuotientFunction;
use crate::linalg::{hermiticity_defect, isometry_defect, min_hermitian_eigenvalue, vec_norm, CMatrix, C64, ZERO};
use crate::par::{self, Execution};
use crate::povm::{build_covariant_povm, CovariantPovm, DiagonalRep, IsometryField, SectorSpec, ADMISSION_TOLERANCE};

/// `Σ_n c_n z^n` with finitely many nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TrigPolynomialJson", into = "TrigPolynomialJson")]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i64, C64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TrigPolynomialJson {
    coeffs: Vec<(i64, [f64; 2])>,
}

impl TryFrom<TrigPolynomialJson> for TrigPolynomial {
    type Error = String;

    fn try_from(j: TrigPolynomialJson) -> std::result::Result<Self, String> {
        let mut coeffs = BTreeMap::new();
        for (n, [re, im]) in j.coeffs {
            if !re.is_finite() || !im.is_finite() {
                return Err(format!("non-finite coefficient at frequency {n}"));
            }
            if coeffs.insert(n, C64::new(re, im)).is_some() {
                return Err(format!("frequency {n} given twice"));
            }
        }
        Ok(Self::from_map(coeffs))
    }
}

impl From<TrigPolynomial> for TrigPolynomialJson {
    fn from(p: TrigPolynomial) -> Self {
        Self {
            coeffs: p.coeffs.into_iter().map(|(n, c)| (n, [c.re, c.im])).collect(),
        }
    }
}

impl TrigPolynomial {
    fn from_map(mut coeffs: BTreeMap<i64, C64>) -> Self {
        coeffs.retain(|_, c| *c != ZERO);
        Self { coeffs }
    }

    pub fn new(coeffs: impl IntoIterator<Item = (i64, C64)>) -> Self {
        let mut map = BTreeMap::new();
        for (n, c) in coeffs {
            *map.entry(n).or_insert(ZERO) += c;
        }
        Self::from_map(map)
    }

    /// Rejects coefficients outside `[-degree, degree]`.
    pub fn with_degree(degree: i64, coeffs: impl IntoIterator<Item = (i64, C64)>) -> Result<Self> {
        let p = Self::new(coeffs);
        if let Some((&n, _)) = p.coeffs.iter().find(|(n, _)| n.abs() > degree) {
            return Err(Error::DegreeWindow { frequency: n, degree });
        }
        Ok(p)
    }

    pub fn constant(c: C64) -> Self {
        Self::new([(0, c)])
    }

    /// `cos θ = (z + z⁻¹)/2`.
    pub fn cosine() -> Self {
        Self::new([(1, C64::new(0.5, 0.0)), (-1, C64::new(0.5, 0.0))])
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, n: i64) -> C64 {
        self.coeffs.get(&n).copied().unwrap_or(ZERO)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    /// `F̄_𝕋(ω)(n) = c_{-n}`.
    pub fn cotransform(&self, n: i64) -> C64 {
        self.coefficient(-n)
    }

    pub fn evaluate(&self, theta: f64) -> C64 {
        self.coeffs
            .iter()
            .map(|(&n, &c)| c * C64::from_polar(1.0, n as f64 * theta))
            .sum()
    }

    /// `w ↦ ω(e^{-iθ₀} w)`, i.e. `c_n ↦ c_n e^{-inθ₀}`.
    pub fn rotate(&self, theta0: f64) -> Self {
        Self::from_map(
            self.coeffs
                .iter()
                .map(|(&n, &c)| (n, c * C64::from_polar(1.0, -(n as f64) * theta0)))
                .collect(),
        )
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .all(|(&n, &c)| (self.coefficient(-n) - c.conj()).norm() <= tol)
    }

    /// Minimum of the real part over `points` equispaced angles.
    pub fn min_on_grid(&self, points: usize) -> f64 {
        (0..points)
            .map(|i| self.evaluate(TAU * i as f64 / points as f64).re)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Grid size used to decide `ω ≥ 0`.
pub const POSITIVITY_GRID: usize = 4096;

/// Outcome of checking an assembled finite window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub dim: usize,
    pub omega_min: f64,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub selection_closed: bool,
    /// True when positivity was asserted (ω real and ≥ 0, window closed).
    pub positivity_asserted: bool,
    pub pass: bool,
}

fn window_report(m: &CMatrix, omega: &TrigPolynomial, selection_closed: bool, tolerance: f64) -> WindowReport {
    let omega_min = omega.min_on_grid(POSITIVITY_GRID);
    let herm = hermiticity_defect(m);
    let min_eig = if m.nrows() == 0 {
        0.0
    } else {
        min_hermitian_eigenvalue(m)
    };
    let asserted = selection_closed && omega.is_real(tolerance) && omega_min >= -tolerance;
    WindowReport {
        dim: m.nrows(),
        omega_min,
        hermiticity_defect: herm,
        min_eigenvalue: min_eig,
        selection_closed,
        positivity_asserted: asserted,
        pass: !asserted || (herm <= tolerance && min_eig >= -tolerance),
    }
}

/// Covariant phase observable on `⊕_{k ∈ I} F_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseObservable {
    indices: Vec<i64>,
    isometries: Vec<CMatrix>,
    offsets: Vec<usize>,
}

impl PhaseObservable {
    /// `isometries[p]` is `W_k` for `k = indices[p]`, all with the same row count.
    pub fn new(indices: Vec<i64>, isometries: Vec<CMatrix>) -> Result<Self> {
        if indices.len() != isometries.len() {
            return Err(Error::FieldCount {
                expected: indices.len(),
                found: isometries.len(),
            });
        }
        let mut order: Vec<usize> = (0..indices.len()).collect();
        order.sort_by_key(|&p| indices[p]);
        if order.windows(2).any(|w| indices[w[0]] == indices[w[1]]) {
            return Err(Error::Incompatible("phase indices must be distinct".into()));
        }
        let e_dim = isometries.first().map_or(0, |w| w.nrows());
        let mut sorted_idx = Vec::with_capacity(order.len());
        let mut sorted_w = Vec::with_capacity(order.len());
        for p in order {
            let w = &isometries[p];
            if w.nrows() != e_dim {
                return Err(Error::Incompatible("all isometries must map into the same E".into()));
            }
            if w.ncols() == 0 {
                return Err(Error::ZeroMultiplicity { sector: p });
            }
            let deviation = isometry_defect(w);
            if deviation > ADMISSION_TOLERANCE {
                return Err(Error::NonIsometric {
                    sector: p,
                    point: vec![],
                    deviation,
                });
            }
            sorted_idx.push(indices[p]);
            sorted_w.push(w.clone());
        }
        let mut offsets = vec![0];
        for w in &sorted_w {
            offsets.push(offsets.last().unwrap() + w.ncols());
        }
        Ok(Self {
            indices: sorted_idx,
            isometries: sorted_w,
            offsets,
        })
    }

    /// Ascending index window `I`.
    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn position(&self, k: i64) -> Result<usize> {
        self.indices
            .binary_search(&k)
            .map_err(|_| Error::IndexOutsideWindow(k.to_string()))
    }

    /// `P_j M(ω) P_k = F̄_𝕋(ω)(j-k) W_j* W_k`.
    pub fn matrix_element(&self, omega: &TrigPolynomial, j: i64, k: i64) -> Result<CMatrix> {
        let (pj, pk) = (self.position(j)?, self.position(k)?);
        Ok(self.block(omega, pj, pk))
    }

    fn block(&self, omega: &TrigPolynomial, pj: usize, pk: usize) -> CMatrix {
        let c = omega.cotransform(self.indices[pj] - self.indices[pk]);
        self.isometries[pj].adjoint() * &self.isometries[pk] * c
    }

    /// `M(ω)` on the whole window, sectors in ascending index order.
    pub fn assemble(&self, omega: &TrigPolynomial) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for pj in 0..self.indices.len() {
            for pk in 0..self.indices.len() {
                let b = self.block(omega, pj, pk);
                m.view_mut((self.offsets[pj], self.offsets[pk]), b.shape())
                    .copy_from(&b);
            }
        }
        m
    }

    /// The window is a principal compression of the full observable, so it
    /// never truncates anything that positivity depends on.
    pub fn window_report(&self, omega: &TrigPolynomial, tolerance: f64) -> WindowReport {
        window_report(&self.assemble(omega), omega, true, tolerance)
    }
}

/// Covariant phase-difference observable on `ℓ²(B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDifferenceObservable {
    pairs: Vec<(i64, i64)>,
    vectors: Vec<Vec<C64>>,
}

impl PhaseDifferenceObservable {
    pub fn new(entries: Vec<((i64, i64), Vec<C64>)>) -> Result<Self> {
        let mut entries = entries;
        entries.sort_by_key(|e| e.0);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Incompatible("index pairs must be distinct".into()));
        }
        let e_dim = entries.first().map_or(0, |e| e.1.len());
        for (index, (_, h)) in entries.iter().enumerate() {
            if h.len() != e_dim {
                return Err(Error::Incompatible("all vectors h must have the same length".into()));
            }
            let norm = vec_norm(h);
            if (norm - 1.0).abs() > ADMISSION_TOLERANCE {
                return Err(Error::NonUnitVector { index, norm });
            }
        }
        let (pairs, vectors) = entries.into_iter().unzip();
        Ok(Self { pairs, vectors })
    }

    /// Index pairs in ascending lexicographic order; also the basis order of
    /// [`assemble`](Self::assemble).
    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    fn position(&self, p: (i64, i64)) -> Result<usize> {
        self.pairs
            .binary_search(&p)
            .map_err(|_| Error::IndexOutsideWindow(format!("({}, {})", p.0, p.1)))
    }

    fn entry(&self, omega: &TrigPolynomial, a: usize, b: usize) -> C64 {
        let (i, j) = self.pairs[a];
        let (l, m) = self.pairs[b];
        if l + m != i + j {
            return ZERO;
        }
        // ⟨h_ij, h_lm⟩, linear in the first slot.
        let inner: C64 = self.vectors[a]
            .iter()
            .zip(&self.vectors[b])
            .map(|(x, y)| x * y.conj())
            .sum();
        omega.cotransform(j - m) * inner
    }

    /// `⟨M(ω) e_{i,j}, e_{l,m}⟩`.
    pub fn matrix_element(&self, omega: &TrigPolynomial, ij: (i64, i64), lm: (i64, i64)) -> Result<C64> {
        let (a, b) = (self.position(ij)?, self.position(lm)?);
        Ok(self.entry(omega, a, b))
    }

    /// Entry `(r, c)` is `⟨M(ω) e_c, e_r⟩`.
    pub fn assemble(&self, omega: &TrigPolynomial) -> CMatrix {
        let n = self.pairs.len();
        CMatrix::from_fn(n, n, |r, c| self.entry(omega, c, r))
    }

    /// True when every anti-diagonal `i + j = s` of the bounding box is either
    /// fully inside `B` or disjoint from it.
    pub fn is_selection_closed(&self) -> bool {
        if self.pairs.is_empty() {
            return true;
        }
        let (imin, imax) = (self.pairs[0].0, self.pairs[self.pairs.len() - 1].0);
        let jmin = self.pairs.iter().map(|p| p.1).min().unwrap();
        let jmax = self.pairs.iter().map(|p| p.1).max().unwrap();
        let mut sums: BTreeMap<i64, usize> = BTreeMap::new();
        for &(i, j) in &self.pairs {
            *sums.entry(i + j).or_default() += 1;
        }
        sums.into_iter().all(|(s, count)| {
            let lo = imin.max(s - jmax);
            let hi = imax.min(s - jmin);
            count as i64 == hi - lo + 1
        })
    }

    pub fn window_report(&self, omega: &TrigPolynomial, tolerance: f64) -> WindowReport {
        window_report(&self.assemble(omega), omega, self.is_selection_closed(), tolerance)
    }
}

/// `Z_N`, `H = {0}`, one multiplicity-one sector per character with
/// `W(x) = h_x`.
pub fn position_povm_zn(n: u64, h: &[Vec<C64>]) -> Result<CovariantPovm> {
    let group = FiniteAbelianGroup::cyclic(n)?;
    if h.len() != group.order() {
        return Err(Error::FieldCount {
            expected: group.order(),
            found: h.len(),
        });
    }
    let e_dim = h.first().map_or(0, |v| v.len());
    for (index, v) in h.iter().enumerate() {
        let norm = vec_norm(v);
        if v.len() != e_dim || (norm - 1.0).abs() > ADMISSION_TOLERANCE {
            return Err(Error::NonUnitVector { index, norm });
        }
    }
    let duality = Arc::new(Duality::from_generators(group.clone(), &[])?);
    let sectors = (0..group.order())
        .map(|x| SectorSpec::indicator(&group, &[group.at::<DualCharacter>(x)], 1))
        .collect::<Result<Vec<_>>>()?;
    let rep = DiagonalRep::new(group, sectors)?;
    let fields: Vec<IsometryField> = h
        .iter()
        .enumerate()
        .map(|(k, v)| IsometryField::constant(&rep, k, CMatrix::from_column_slice(v.len(), 1, v)))
        .collect();
    build_covariant_povm(duality, rep, &fields, e_dim)
}

/// Every coset appears in exactly one nonempty block.
pub fn validate_partition(cosets: usize, partition: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; cosets];
    for block in partition {
        if block.is_empty() {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        for &c in block {
            if c >= cosets {
                return Err(Error::InvalidPartition(format!(
                    "coset {c} out of range ({cosets} cosets)"
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidPartition(format!("coset {c} appears twice")));
            }
        }
    }
    if let Some(c) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("coset {c} not covered")));
    }
    Ok(())
}

/// `p_i = ⟨M(X_i) ψ, ψ⟩` with `ψ` in the orthonormal basis of the
/// representation space.
pub fn born_distribution(state: &[C64], povm: &CovariantPovm, partition: &[Vec<usize>]) -> Result<Vec<f64>> {
    let dim = povm.rep().dim();
    if state.len() != dim {
        return Err(Error::StateDimension {
            expected: dim,
            found: state.len(),
        });
    }
    let norm = vec_norm(state);
    if (norm - 1.0).abs() > ADMISSION_TOLERANCE {
        return Err(Error::NonUnitState { norm });
    }
    let n = povm.duality().quotient_order();
    validate_partition(n, partition)?;
    let psi = nalgebra::DVector::from_column_slice(state);
    partition
        .iter()
        .map(|block| {
            let m = povm.operator(&QuotientFunction::indicator(n, block))?;
            Ok(psi.dotc(&(m * &psi)).re)
        })
        .collect()
}

/// Draws per parallel work unit.
const SAMPLE_CHUNK: usize = 4096;

/// Draw `i` uses the 64-bit word at stream position `2i` of a ChaCha8 stream
/// keyed by `seed`, so counts do not depend on how the work is split.
pub fn sample_distribution(probabilities: &[f64], n: usize, seed: u64, mode: Execution) -> Vec<u64> {
    let k = probabilities.len();
    let mut cumulative = Vec::with_capacity(k);
    let mut acc = 0.0;
    for &p in probabilities {
        acc += p.max(0.0);
        cumulative.push(acc);
    }
    if k == 0 || acc <= 0.0 {
        return vec![0; k];
    }
    for c in &mut cumulative {
        *c /= acc;
    }
    let last = probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(k - 1);
    let chunks = n.div_ceil(SAMPLE_CHUNK);
    let partials = par::map_range(mode, chunks, |chunk| {
        let start = chunk * SAMPLE_CHUNK;
        let end = (start + SAMPLE_CHUNK).min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(2 * start as u128);
        let mut counts = vec![0u64; k];
        for _ in start..end {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            let i = cumulative.partition_point(|&c| c <= u).min(last);
            counts[i] += 1;
        }
        counts
    });
    partials.into_iter().fold(vec![0; k], |mut acc, c| {
        acc.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        acc
    })
}

/// Outcome counts for `n` draws from [`born_distribution`].
pub fn sample_outcomes(
    state: &[C64],
    povm: &CovariantPovm,
    partition: &[Vec<usize>],
    n: usize,
    seed: u64,
    mode: Execution,
) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Incompatible("sample count must be at least 1".into()));
    }
    let p = born_distribution(state, povm, partition)?;
    Ok(sample_distribution(&p, n, seed, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::linalg::{identity, max_diff, ONE};

    const GRID: usize = 4096;

    /// `(1/2π)∫ e^{inθ} ω(e^{iθ}) dθ` by the rectangle rule.
    fn quadrature(omega: &TrigPolynomial, n: i64) -> C64 {
        (0..GRID)
            .map(|i| {
                let t = TAU * i as f64 / GRID as f64;
                C64::from_polar(1.0, n as f64 * t) * omega.evaluate(t)
            })
            .sum::<C64>()
            / GRID as f64
    }

    fn unit(e: usize, i: usize) -> Vec<C64> {
        let mut v = vec![ZERO; e];
        v[i] = ONE;
        v
    }

    #[test]
    fn cotransform_matches_quadrature() {
        let p = TrigPolynomial::new([
            (0, C64::new(1.0, 0.0)),
            (2, C64::new(0.3, -0.2)),
            (-3, C64::new(0.0, 0.7)),
        ]);
        for n in -5..=5 {
            assert!((p.cotransform(n) - quadrature(&p, n)).norm() < 1e-12);
        }
        assert_eq!(p.degree(), 3);
        assert!(!p.is_real(1e-12));
        assert!(TrigPolynomial::cosine().is_real(0.0));
        assert!((TrigPolynomial::cosine().min_on_grid(64) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_window() {
        assert!(TrigPolynomial::with_degree(2, [(2, ONE), (-1, ONE)]).is_ok());
        assert_eq!(
            TrigPolynomial::with_degree(1, [(2, ONE)]),
            Err(Error::DegreeWindow {
                frequency: 2,
                degree: 1
            })
        );
    }

    #[test]
    fn json_round_trip() {
        let p: TrigPolynomial = serde_json::from_str(r#"{"coeffs":[[1,[0.5,0]],[-1,[0.5,0]]]}"#).unwrap();
        assert_eq!(p, TrigPolynomial::cosine());
        let back: TrigPolynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<TrigPolynomial>(r#"{"coeffs":[[1,[1,0]],[1,[1,0]]]}"#).is_err());
    }

    fn phase_multiplicity_two() -> PhaseObservable {
        let mut w0 = CMatrix::zeros(4, 2);
        w0[(0, 0)] = ONE;
        w0[(1, 1)] = ONE;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut w1 = CMatrix::zeros(4, 1);
        w1[(0, 0)] = C64::new(s, 0.0);
        w1[(2, 0)] = C64::new(0.0, s);
        let mut w2 = CMatrix::zeros(4, 1);
        w2[(3, 0)] = ONE;
        PhaseObservable::new(vec![1, -1, 0], vec![w1, w2, w0]).unwrap()
    }

    #[test]
    fn phase_examples() {
        let obs = phase_multiplicity_two();
        assert_eq!(obs.indices(), &[-1, 0, 1]);
        let one = TrigPolynomial::constant(ONE);
        assert!(max_diff(&obs.assemble(&one), &identity(obs.dim())) < 1e-15);

        let cos = TrigPolynomial::cosine();
        for &j in obs.indices() {
            for &k in obs.indices() {
                let m = obs.matrix_element(&cos, j, k).unwrap();
                let pj = obs.indices().iter().position(|&i| i == j).unwrap();
                let pk = obs.indices().iter().position(|&i| i == k).unwrap();
                let expected = obs.isometries[pj].adjoint() * &obs.isometries[pk] * quadrature(&cos, j - k);
                assert!(max_diff(&m, &expected) < 1e-12);
                if (j - k).abs() != 1 {
                    assert_eq!(m, CMatrix::zeros(m.nrows(), m.ncols()));
                }
            }
        }
        assert!(matches!(
            obs.matrix_element(&cos, 2, 0),
            Err(Error::IndexOutsideWindow(_))
        ));

        let h = unit(1, 0);
        let w = CMatrix::from_column_slice(1, 1, &h);
        let canonical = PhaseObservable::new(vec![0, 1, 2, 3], vec![w.clone(), w.clone(), w.clone(), w]).unwrap();
        let p = TrigPolynomial::new([(1, C64::new(0.2, 0.1)), (0, ONE), (-2, C64::new(0.0, -0.3))]);
        for j in 0..4 {
            for k in 0..4 {
                let m = canonical.matrix_element(&p, j, k).unwrap();
                assert!((m[(0, 0)] - quadrature(&p, j - k)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn phase_rotation_covariance() {
        let obs = phase_multiplicity_two();
        let p = TrigPolynomial::new([(1, C64::new(0.2, 0.1)), (0, ONE), (-2, C64::new(0.0, -0.3))]);
        for t in 0..64 {
            let theta = TAU * t as f64 / 64.0;
            let rotated = p.rotate(theta);
            for &j in obs.indices() {
                for &k in obs.indices() {
                    let lhs = obs.matrix_element(&rotated, j, k).unwrap();
                    let rhs = obs.matrix_element(&p, j, k).unwrap() * C64::from_polar(1.0, (j - k) as f64 * theta);
                    assert!(max_diff(&lhs, &rhs) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn phase_window_positivity() {
        let obs = phase_multiplicity_two();
        // 1 + cos θ ≥ 0.
        let p = TrigPolynomial::new([(0, ONE), (1, C64::new(0.5, 0.0)), (-1, C64::new(0.5, 0.0))]);
        let r = obs.window_report(&p, 1e-9);
        assert!(r.positivity_asserted && r.pass, "{r:?}");
        let r = obs.window_report(&TrigPolynomial::cosine(), 1e-9);
        assert!(!r.positivity_asserted && r.pass);
    }

    fn difference_observable(pairs: &[(i64, i64)], same: bool) -> PhaseDifferenceObservable {
        let e = pairs.len();
        PhaseDifferenceObservable::new(
            pairs
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, if same { unit(1, 0) } else { unit(e, i) }))
                .collect(),
        )
        .unwrap()
    }

    fn square(n: i64) -> Vec<(i64, i64)> {
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
    }

    #[test]
    fn phase_difference_examples() {
        let obs = difference_observable(&square(3), true);
        let cos = TrigPolynomial::cosine();
        let one = TrigPolynomial::constant(ONE);
        for &a in obs.pairs() {
            assert!((obs.matrix_element(&one, a, a).unwrap() - ONE).norm() < 1e-15);
            for &b in obs.pairs() {
                let v = obs.matrix_element(&cos, a, b).unwrap();
                if a.0 + a.1 != b.0 + b.1 {
                    assert_eq!(v, ZERO);
                } else {
                    let expected = quadrature(&cos, a.1 - b.1);
                    assert!((v - expected).norm() < 1e-12);
                    let half = if (a.1 - b.1).abs() == 1 { 0.5 } else { 0.0 };
                    assert!((v - C64::new(half, 0.0)).norm() < 1e-12);
                }
            }
        }
        assert!(matches!(
            obs.matrix_element(&cos, (5, 5), (0, 0)),
            Err(Error::IndexOutsideWindow(_))
        ));
    }

    #[test]
    fn phase_difference_inner_product_orientation() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h1 = vec![C64::new(s, 0.0), C64::new(0.0, s)];
        let h2 = vec![ONE, ZERO];
        let obs = PhaseDifferenceObservable::new(vec![((0, 1), h1), ((1, 0), h2)]).unwrap();
        let one = TrigPolynomial::new([(0, ONE), (1, ONE)]);
        // ⟨M e_{0,1}, e_{1,0}⟩ = c_{0} ... F̄(1 - 0) = c_{-1} = 0; other way F̄(-1) = c_1 = 1.
        assert_eq!(obs.matrix_element(&one, (0, 1), (1, 0)).unwrap(), ZERO);
        let v = obs.matrix_element(&one, (1, 0), (0, 1)).unwrap();
        // ⟨h_{1,0}, h_{0,1}⟩ = Σ h_{1,0} conj(h_{0,1}) = 1/√2.
        assert!((v - C64::new(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_difference_window_closure() {
        assert!(difference_observable(&square(3), false).is_selection_closed());
        assert!(difference_observable(&[(0, 0), (0, 1), (1, 0)], false).is_selection_closed());
        assert!(!difference_observable(&[(0, 0), (0, 1), (1, 1)], false).is_selection_closed());
        let p = TrigPolynomial::new([(0, ONE), (1, C64::new(0.0, 0.5)), (-1, C64::new(0.0, -0.5))]);
        let r = difference_observable(&square(3), false).window_report(&p, 1e-9);
        assert!(r.positivity_asserted && r.pass, "{r:?}");
    }

    #[test]
    fn position_examples() {
        let n = 5;
        let h = vec![unit(1, 0); n];
        let m = position_povm_zn(n as u64, &h).unwrap();
        let xset = [0usize, 2];
        let e = m.operator(&QuotientFunction::indicator(n, &xset)).unwrap();
        let mut max_dev: f64 = 0.0;
        for x in 0..n {
            for y in 0..n {
                // F̄(1_X)(x - y) / N
                let f: C64 = xset
                    .iter()
                    .map(|&g| crate::linalg::root_of_unity(((x + n - y) * g % n) as u64, n as u64))
                    .sum();
                max_dev = max_dev.max((e[(x, y)] - f / n as f64).norm());
            }
        }
        assert!(max_dev < 1e-12);
        assert!(max_diff(&m.operator(&QuotientFunction::constant(n, ONE)).unwrap(), &identity(n)) < 1e-12);

        let h: Vec<Vec<C64>> = (0..n).map(|i| unit(n, i)).collect();
        let m = position_povm_zn(n as u64, &h).unwrap();
        let omega = QuotientFunction::new((0..n).map(|i| C64::new(i as f64, 1.0)).collect());
        let op = m.operator(&omega).unwrap();
        let mean = omega.values().iter().sum::<C64>() / n as f64;
        assert!(max_diff(&op, &(identity(n) * mean)) < 1e-12);
        let oracle = crate::povm::oracle_compress(&m, &omega).unwrap();
        assert!(m.apply(&omega).unwrap().max_deviation(&oracle) < 1e-9);

        let m = position_povm_zn(1, &[unit(2, 1)]).unwrap();
        let omega = QuotientFunction::new(vec![C64::new(0.3, -2.0)]);
        assert!((m.operator(&omega).unwrap()[(0, 0)] - omega.values()[0]).norm() < 1e-15);

        assert!(matches!(
            position_povm_zn(2, &[unit(1, 0), vec![C64::new(0.5, 0.0)]]),
            Err(Error::NonUnitVector { index: 1, .. })
        ));
    }

    fn scalar_z12() -> CovariantPovm {
        let g = FiniteAbelianGroup::cyclic(12).unwrap();
        let d = Arc::new(Duality::from_generators(g.clone(), &[GroupElement(vec![4])]).unwrap());
        let rep = DiagonalRep::new(
            g.clone(),
            vec![SectorSpec::indicator(&g, &[DualCharacter(vec![0])], 1).unwrap()],
        )
        .unwrap();
        let f = IsometryField::constant(&rep, 0, CMatrix::from_element(1, 1, ONE));
        build_covariant_povm(d, rep, &[f], 1).unwrap()
    }

    #[test]
    fn born_examples() {
        let m = scalar_z12();
        let singletons: Vec<Vec<usize>> = (0..4).map(|c| vec![c]).collect();
        let p = born_distribution(&[ONE], &m, &singletons).unwrap();
        assert!(p.iter().all(|&x| (x - 0.25).abs() < 1e-12));
        assert_eq!(born_distribution(&[ONE], &m, &[vec![0, 1, 2, 3]]).unwrap().len(), 1);
        assert!((born_distribution(&[ONE], &m, &[vec![3, 1, 0, 2]]).unwrap()[0] - 1.0).abs() < 1e-12);
        assert!(matches!(
            born_distribution(&[C64::new(2.0, 0.0)], &m, &singletons),
            Err(Error::NonUnitState { .. })
        ));
        assert!(matches!(
            born_distribution(&[ONE], &m, &[vec![0, 1], vec![1, 2, 3]]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            born_distribution(&[ONE], &m, &[vec![0, 1]]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn sampling() {
        let uniform = [0.25; 4];
        let counts = sample_distribution(&uniform, 10_000, 7, Execution::Parallel);
        assert_eq!(counts.iter().sum::<u64>(), 10_000);
        let sigma = (10_000.0f64 * 0.25 * 0.75).sqrt();
        assert!(counts.iter().all(|&c| (c as f64 - 2500.0).abs() <= 5.0 * sigma));
        assert_eq!(counts, sample_distribution(&uniform, 10_000, 7, Execution::Sequential));
        assert_ne!(counts, sample_distribution(&uniform, 10_000, 8, Execution::Sequential));
        assert_eq!(
            sample_distribution(&[1.0, 0.0, 0.0], 5000, 1, Execution::Parallel),
            vec![5000, 0, 0]
        );
        assert_eq!(
            sample_distribution(&[0.0, 1.0, 0.0], 5000, 1, Execution::Parallel),
            vec![0, 5000, 0]
        );

        let m = scalar_z12();
        let singletons: Vec<Vec<usize>> = (0..4).map(|c| vec![c]).collect();
        assert!(sample_outcomes(&[ONE], &m, &singletons, 0, 1, Execution::Sequential).is_err());
        let a = sample_outcomes(&[ONE], &m, &singletons, 9000, 3, Execution::Parallel).unwrap();
        let b = sample_outcomes(&[ONE], &m, &singletons, 9000, 3, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
