//! Finite model of the induced imprimitivity system `(λ^ν, M₀^ν)` on `H^ν`
//! and its diagonalisation `Σ : H^ν → L²(Ĝ, ν̃; E)`.
//!
//! A vector of `H^ν` is stored by its values `f(g, ẋ) ∈ E` at the coset
//! representatives `g` and at the points `ẋ ∈ supp ν`; values at other group
//! elements follow from `f(g + h, ẋ) = conj⟨ẋ, h⟩ f(g, ẋ)`. Basis order is
//! coset index major, `ẋ` middle, E-coordinate minor.
//!
//! A vector of `L²(Ĝ, ν̃; E)` is stored by its values at the points of
//! `supp ν̃ = π^{-1}(supp ν)`, ascending by character index, E-coordinate minor.
//!
//! Both spaces carry weighted inner products. Operator matrices returned by
//! the `*_matrix` methods are expressed in the orthonormal bases obtained by
//! normalising the point-mass vectors, so adjoints are conjugate transposes.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Coordinates, DualCharacter, Duality, GroupElement};
use crate::harmonic::{self, MeasureDomain, QuotientFunction, WeightedMeasure};
use crate::linalg::{CMatrix, C64, ZERO};

/// Element of `H^ν`, stored at coset representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedVector(pub Vec<C64>);

/// Element of `L²(Ĝ, ν̃; E)`, stored on `supp ν̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector(pub Vec<C64>);

#[derive(Debug, Clone)]
pub struct InducedSpace {
    duality: Arc<Duality>,
    nu: WeightedMeasure,
    nu_tilde: WeightedMeasure,
    support: Vec<usize>,
    support_position: Vec<Option<usize>>,
    e_dim: usize,
    target_points: Vec<usize>,
    target_position: Vec<Option<usize>>,
}

impl InducedSpace {
    /// `ν` lives on `Ĝ/H^⊥`; zero-weight points are dropped.
    pub fn new(duality: Arc<Duality>, nu: WeightedMeasure, e_dim: usize) -> Result<Self> {
        nu.check_domain(&duality, MeasureDomain::DualQuotient)?;
        if e_dim == 0 {
            return Err(Error::Incompatible("E must have dimension at least 1".into()));
        }
        let support = nu.support();
        let mut support_position = vec![None; nu.len()];
        for (s, &c) in support.iter().enumerate() {
            support_position[c] = Some(s);
        }
        let nu_tilde = harmonic::lift_measure(&duality, &nu)?;
        let target_points = nu_tilde.support();
        let mut target_position = vec![None; duality.group().order()];
        for (p, &x) in target_points.iter().enumerate() {
            target_position[x] = Some(p);
        }
        Ok(Self {
            duality,
            nu,
            nu_tilde,
            support,
            support_position,
            e_dim,
            target_points,
            target_position,
        })
    }

    pub fn duality(&self) -> &Duality {
        &self.duality
    }

    pub fn nu(&self) -> &WeightedMeasure {
        &self.nu
    }

    pub fn nu_tilde(&self) -> &WeightedMeasure {
        &self.nu_tilde
    }

    pub fn e_dim(&self) -> usize {
        self.e_dim
    }

    /// Dual cosets carrying the space, ascending.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Characters indexing `L²(Ĝ, ν̃; E)`, ascending.
    pub fn target_points(&self) -> &[usize] {
        &self.target_points
    }

    pub fn target_position(&self, dual_index: usize) -> Option<usize> {
        self.target_position[dual_index]
    }

    /// `|G/H| · |supp ν| · dim E`.
    pub fn dim(&self) -> usize {
        self.duality.quotient_order() * self.support.len() * self.e_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_points.len() * self.e_dim
    }

    pub fn basis_index(&self, coset: usize, support_pos: usize, e: usize) -> usize {
        (coset * self.support.len() + support_pos) * self.e_dim + e
    }

    fn cosets(&self) -> usize {
        self.duality.quotient_order()
    }

    /// Support position of a dual coset, if it carries weight.
    pub fn support_position(&self, dual_coset: usize) -> Option<usize> {
        self.support_position[dual_coset]
    }

    fn dual_rep(&self, s: usize) -> &DualCharacter {
        self.duality.dual_quotient().representative(self.support[s])
    }

    fn check_induced(&self, f: &InducedVector) -> Result<()> {
        if f.0.len() != self.dim() {
            return Err(Error::FunctionLength {
                expected: self.dim(),
                found: f.0.len(),
            });
        }
        Ok(())
    }

    fn check_spectral(&self, phi: &SpectralVector) -> Result<()> {
        if phi.0.len() != self.target_dim() {
            return Err(Error::FunctionLength {
                expected: self.target_dim(),
                found: phi.0.len(),
            });
        }
        Ok(())
    }

    /// `f(g, ẋ)` for any `g ∈ G`, rebuilt from the stored representative value.
    pub fn evaluate(&self, f: &InducedVector, g: &GroupElement, support_pos: usize) -> Vec<C64> {
        let grp = self.duality.group();
        let q = self.duality.quotient();
        let c = q.project(g);
        let h = grp.sub(g, q.representative(c));
        let phase = grp.phase(self.dual_rep(support_pos).coords(), h.coords()).conj();
        (0..self.e_dim)
            .map(|e| phase * f.0[self.basis_index(c, support_pos, e)])
            .collect()
    }

    /// `(λ(a)f)(g, ẋ) = f(g - a, ẋ)`.
    pub fn lambda_act(&self, a: &GroupElement, f: &InducedVector) -> Result<InducedVector> {
        self.check_induced(f)?;
        let grp = self.duality.group();
        let q = self.duality.quotient();
        let mut out = vec![ZERO; self.dim()];
        for c in 0..self.cosets() {
            let shifted = grp.sub(q.representative(c), a);
            for s in 0..self.support.len() {
                for (e, v) in self.evaluate(f, &shifted, s).into_iter().enumerate() {
                    out[self.basis_index(c, s, e)] = v;
                }
            }
        }
        Ok(InducedVector(out))
    }

    /// `(M₀(ω)f)(g, ẋ) = ω(ġ) f(g, ẋ)`.
    pub fn m0_act(&self, omega: &QuotientFunction, f: &InducedVector) -> Result<InducedVector> {
        self.check_induced(f)?;
        omega.check(&self.duality)?;
        let block = self.support.len() * self.e_dim;
        Ok(InducedVector(
            f.0.iter()
                .enumerate()
                .map(|(i, &v)| omega.values()[i / block] * v)
                .collect(),
        ))
    }

    /// `(Σf)(x) = Σ_ġ ⟨x, g⟩ f(g, ẋ)` over the stored representatives.
    pub fn sigma_apply(&self, f: &InducedVector) -> Result<SpectralVector> {
        let reps = self.duality.quotient().representatives().to_vec();
        self.sigma_apply_using(f, &reps)
    }

    /// `Σf` evaluated with an arbitrary choice of one representative per coset.
    pub fn sigma_apply_using(&self, f: &InducedVector, reps: &[GroupElement]) -> Result<SpectralVector> {
        self.check_induced(f)?;
        let q = self.duality.quotient();
        if reps.len() != self.cosets() {
            return Err(Error::Incompatible(format!(
                "{} representatives given for {} cosets",
                reps.len(),
                self.cosets()
            )));
        }
        for (c, g) in reps.iter().enumerate() {
            self.duality.group().check(g)?;
            if q.project(g) != c {
                return Err(Error::Incompatible(format!("{:?} does not lie in coset {c}", g.0)));
            }
        }
        let grp = self.duality.group();
        let dq = self.duality.dual_quotient();
        // Values at the chosen representatives, per support point.
        let values: Vec<Vec<Vec<C64>>> = reps
            .iter()
            .map(|g| (0..self.support.len()).map(|s| self.evaluate(f, g, s)).collect())
            .collect();
        let mut out = vec![ZERO; self.target_dim()];
        for (p, &xi) in self.target_points.iter().enumerate() {
            let x: DualCharacter = grp.at(xi);
            let s = self.support_position[dq.project_index(xi)].expect("target point over support");
            for (c, g) in reps.iter().enumerate() {
                let phase = grp.phase(x.coords(), g.coords());
                for e in 0..self.e_dim {
                    out[p * self.e_dim + e] += phase * values[c][s][e];
                }
            }
        }
        Ok(SpectralVector(out))
    }

    /// `(Σ*φ)(g, ẋ) = Σ_{y ∈ H^⊥} conj⟨x + y, g⟩ φ(x + y) μ_{H^⊥}(pt)` at any `g`.
    pub fn sigma_adjoint_at(&self, phi: &SpectralVector, g: &GroupElement, support_pos: usize) -> Result<Vec<C64>> {
        self.check_spectral(phi)?;
        let grp = self.duality.group();
        let w = harmonic::annihilator_weight(&self.duality);
        let x = self.dual_rep(support_pos);
        let mut out = vec![ZERO; self.e_dim];
        for y in self.duality.annihilator().elements() {
            let xy = grp.add(x, y);
            let p = self.target_position[grp.index_of(&xy)].expect("coset of a support point");
            let phase = grp.phase(xy.coords(), g.coords()).conj() * w;
            for (e, slot) in out.iter_mut().enumerate() {
                *slot += phase * phi.0[p * self.e_dim + e];
            }
        }
        Ok(out)
    }

    pub fn sigma_adjoint_apply(&self, phi: &SpectralVector) -> Result<InducedVector> {
        self.check_spectral(phi)?;
        let q = self.duality.quotient();
        let mut out = vec![ZERO; self.dim()];
        for c in 0..self.cosets() {
            for s in 0..self.support.len() {
                let v = self.sigma_adjoint_at(phi, q.representative(c), s)?;
                for (e, z) in v.into_iter().enumerate() {
                    out[self.basis_index(c, s, e)] = z;
                }
            }
        }
        Ok(InducedVector(out))
    }

    /// `(M̃₀(ω)φ)(x) = Σ_{y ∈ H^⊥} F̄ω(y) φ(x - y) μ_{H^⊥}(pt)`.
    pub fn transported_pvm(&self, omega: &QuotientFunction, phi: &SpectralVector) -> Result<SpectralVector> {
        self.check_spectral(phi)?;
        let fw = harmonic::fourier_cotransform_quotient(&self.duality, omega)?;
        let grp = self.duality.group();
        let w = harmonic::annihilator_weight(&self.duality);
        let ys = self.duality.annihilator().elements();
        let mut out = vec![ZERO; self.target_dim()];
        for (p, &xi) in self.target_points.iter().enumerate() {
            let x: DualCharacter = grp.at(xi);
            for (yi, y) in ys.iter().enumerate() {
                let src = self.target_position[grp.index_of(&grp.sub(&x, y))].expect("same coset");
                let coeff = fw[yi] * w;
                for e in 0..self.e_dim {
                    out[p * self.e_dim + e] += coeff * phi.0[src * self.e_dim + e];
                }
            }
        }
        Ok(SpectralVector(out))
    }

    /// `(Λ(a)φ)(x) = ⟨x, a⟩ φ(x)`.
    pub fn big_lambda_act(&self, a: &GroupElement, phi: &SpectralVector) -> Result<SpectralVector> {
        self.check_spectral(phi)?;
        let grp = self.duality.group();
        let mut out = phi.0.clone();
        for (p, &xi) in self.target_points.iter().enumerate() {
            let phase = grp.phase(grp.at::<DualCharacter>(xi).coords(), a.coords());
            for e in 0..self.e_dim {
                out[p * self.e_dim + e] *= phase;
            }
        }
        Ok(SpectralVector(out))
    }

    /// `⟨f₁, f₂⟩` under `μ_{G/H} ⊗ ν`, linear in the first argument.
    pub fn induced_inner(&self, f1: &InducedVector, f2: &InducedVector) -> C64 {
        f1.0.iter()
            .zip(&f2.0)
            .enumerate()
            .map(|(i, (a, b))| a * b.conj() * self.induced_weight(i))
            .sum()
    }

    /// `⟨φ₁, φ₂⟩` under `ν̃`, linear in the first argument.
    pub fn spectral_inner(&self, p1: &SpectralVector, p2: &SpectralVector) -> C64 {
        p1.0.iter()
            .zip(&p2.0)
            .enumerate()
            .map(|(i, (a, b))| a * b.conj() * self.spectral_weight(i))
            .sum()
    }

    fn induced_weight(&self, index: usize) -> f64 {
        let s = (index / self.e_dim) % self.support.len();
        self.nu.weight(self.support[s])
    }

    fn spectral_weight(&self, index: usize) -> f64 {
        self.nu_tilde.weight(self.target_points[index / self.e_dim])
    }

    /// Induced-space vector from orthonormal coordinates.
    pub fn induced_from_orthonormal(&self, coords: &[C64]) -> InducedVector {
        InducedVector(
            coords
                .iter()
                .enumerate()
                .map(|(i, z)| z / self.induced_weight(i).sqrt())
                .collect(),
        )
    }

    pub fn induced_to_orthonormal(&self, f: &InducedVector) -> Vec<C64> {
        f.0.iter()
            .enumerate()
            .map(|(i, z)| z * self.induced_weight(i).sqrt())
            .collect()
    }

    pub fn spectral_from_orthonormal(&self, coords: &[C64]) -> SpectralVector {
        SpectralVector(
            coords
                .iter()
                .enumerate()
                .map(|(i, z)| z / self.spectral_weight(i).sqrt())
                .collect(),
        )
    }

    pub fn spectral_to_orthonormal(&self, phi: &SpectralVector) -> Vec<C64> {
        phi.0
            .iter()
            .enumerate()
            .map(|(i, z)| z * self.spectral_weight(i).sqrt())
            .collect()
    }

    fn matrix_from_columns(rows: usize, cols: Vec<Vec<C64>>) -> CMatrix {
        let n = cols.len();
        let mut m = CMatrix::zeros(rows, n);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, z) in col.into_iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    fn induced_operator<F>(&self, op: F) -> Result<CMatrix>
    where
        F: Fn(&InducedVector) -> Result<InducedVector>,
    {
        let n = self.dim();
        let cols = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = C64::new(1.0, 0.0);
                Ok(self.induced_to_orthonormal(&op(&self.induced_from_orthonormal(&e))?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::matrix_from_columns(n, cols))
    }

    fn spectral_operator<F>(&self, op: F) -> Result<CMatrix>
    where
        F: Fn(&SpectralVector) -> Result<SpectralVector>,
    {
        let n = self.target_dim();
        let cols = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = C64::new(1.0, 0.0);
                Ok(self.spectral_to_orthonormal(&op(&self.spectral_from_orthonormal(&e))?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::matrix_from_columns(n, cols))
    }

    /// `Σ` in orthonormal coordinates, shape `target_dim × dim`.
    pub fn sigma_matrix(&self) -> Result<CMatrix> {
        let n = self.dim();
        let cols = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = C64::new(1.0, 0.0);
                Ok(self.spectral_to_orthonormal(&self.sigma_apply(&self.induced_from_orthonormal(&e))?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::matrix_from_columns(self.target_dim(), cols))
    }

    /// `Σ*` from its integral formula, shape `dim × target_dim`.
    pub fn sigma_adjoint_matrix(&self) -> Result<CMatrix> {
        let n = self.target_dim();
        let cols = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = C64::new(1.0, 0.0);
                Ok(self.induced_to_orthonormal(&self.sigma_adjoint_apply(&self.spectral_from_orthonormal(&e))?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::matrix_from_columns(self.dim(), cols))
    }

    pub fn lambda_matrix(&self, a: &GroupElement) -> Result<CMatrix> {
        self.induced_operator(|f| self.lambda_act(a, f))
    }

    pub fn m0_matrix(&self, omega: &QuotientFunction) -> Result<CMatrix> {
        omega.check(&self.duality)?;
        self.induced_operator(|f| self.m0_act(omega, f))
    }

    pub fn big_lambda_matrix(&self, a: &GroupElement) -> Result<CMatrix> {
        self.spectral_operator(|p| self.big_lambda_act(a, p))
    }

    pub fn transported_pvm_matrix(&self, omega: &QuotientFunction) -> Result<CMatrix> {
        omega.check(&self.duality)?;
        self.spectral_operator(|p| self.transported_pvm(omega, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::linalg::{identity, max_abs, max_diff};

    fn z12_counting(e_dim: usize) -> InducedSpace {
        let d = Duality::from_generators(FiniteAbelianGroup::cyclic(12).unwrap(), &[GroupElement(vec![4])]).unwrap();
        let nu = WeightedMeasure::new(MeasureDomain::DualQuotient, vec![1.0; 3]).unwrap();
        InducedSpace::new(Arc::new(d), nu, e_dim).unwrap()
    }

    fn pseudo_vector(n: usize, seed: u64) -> Vec<C64> {
        (0..n)
            .map(|i| {
                let t = (i as f64 + 1.0) * (seed as f64 + 0.37);
                C64::new(t.sin(), (1.7 * t).cos())
            })
            .collect()
    }

    #[test]
    fn dimensions_match() {
        let s = z12_counting(1);
        assert_eq!(s.dim(), 12);
        assert_eq!(s.target_dim(), 12);
        let s = z12_counting(2);
        assert_eq!(s.dim(), 24);
    }

    #[test]
    fn sigma_of_zero_is_zero() {
        let s = z12_counting(1);
        let out = s.sigma_apply(&InducedVector(vec![ZERO; 12])).unwrap();
        assert!(out.0.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn sigma_is_unitary_and_adjoint_matches_formula() {
        let s = z12_counting(1);
        let sig = s.sigma_matrix().unwrap();
        let adj = s.sigma_adjoint_matrix().unwrap();
        assert!(max_diff(&(sig.adjoint() * &sig), &identity(12)) < 1e-9);
        assert!(max_diff(&(&sig * sig.adjoint()), &identity(12)) < 1e-9);
        assert!(max_diff(&adj, &sig.adjoint()) < 1e-9);
    }

    #[test]
    fn sigma_does_not_depend_on_representatives() {
        let s = z12_counting(2);
        let f = InducedVector(pseudo_vector(s.dim(), 3));
        let shifted: Vec<GroupElement> = (0..4u64).map(|c| GroupElement(vec![(c + 8) % 12])).collect();
        let a = s.sigma_apply(&f).unwrap();
        let b = s.sigma_apply_using(&f, &shifted).unwrap();
        let dev = a.0.iter().zip(&b.0).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-9);
        assert!(s.sigma_apply_using(&f, &shifted[..3]).is_err());
    }

    #[test]
    fn adjoint_satisfies_covariance_constraint() {
        let s = z12_counting(2);
        let phi = SpectralVector(pseudo_vector(s.target_dim(), 5));
        let grp = s.duality().group().clone();
        for g in grp.elements::<GroupElement>() {
            for h in s.duality().subgroup().elements() {
                for sp in 0..s.support().len() {
                    let at_gh = s.sigma_adjoint_at(&phi, &grp.add(&g, h), sp).unwrap();
                    let at_g = s.sigma_adjoint_at(&phi, &g, sp).unwrap();
                    let x = s.duality().dual_quotient().representative(s.support()[sp]);
                    let phase = grp.phase(x.coords(), h.coords()).conj();
                    for (a, b) in at_gh.iter().zip(&at_g) {
                        assert!((a - phase * b).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn roundtrip_and_norms() {
        let s = z12_counting(1);
        let f = InducedVector(pseudo_vector(12, 1));
        let phi = s.sigma_apply(&f).unwrap();
        let back = s.sigma_adjoint_apply(&phi).unwrap();
        for (a, b) in back.0.iter().zip(&f.0) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!((s.spectral_inner(&phi, &phi) - s.induced_inner(&f, &f)).norm() < 1e-9);
        let psi = SpectralVector(pseudo_vector(12, 2));
        let f2 = s.sigma_adjoint_apply(&psi).unwrap();
        assert!((s.induced_inner(&f2, &f2) - s.spectral_inner(&psi, &psi)).norm() < 1e-9);
    }

    #[test]
    fn lambda_is_a_unitary_representation() {
        let s = z12_counting(1);
        let grp = s.duality().group().clone();
        let f = InducedVector(pseudo_vector(12, 4));
        let zero = grp.zero::<GroupElement>();
        assert_eq!(s.lambda_act(&zero, &f).unwrap(), f);
        for (ai, bi) in [(1u64, 5u64), (7, 11), (4, 8)] {
            let a = GroupElement(vec![ai]);
            let b = GroupElement(vec![bi]);
            let ab = s.lambda_act(&a, &s.lambda_act(&b, &f).unwrap()).unwrap();
            let direct = s.lambda_act(&grp.add(&a, &b), &f).unwrap();
            for (x, y) in ab.0.iter().zip(&direct.0) {
                assert!((x - y).norm() < 1e-9);
            }
            let moved = s.lambda_act(&a, &f).unwrap();
            assert!((s.induced_inner(&moved, &moved) - s.induced_inner(&f, &f)).norm() < 1e-9);
        }
    }

    #[test]
    fn m0_examples() {
        let s = z12_counting(1);
        let ones = QuotientFunction::constant(4, C64::new(1.0, 0.0));
        assert!(max_diff(&s.m0_matrix(&ones).unwrap(), &identity(12)) < 1e-15);
        let p = s.m0_matrix(&QuotientFunction::indicator(4, &[0])).unwrap();
        assert!(max_diff(&(&p * &p), &p) < 1e-12);
        assert!(max_diff(&p, &p.adjoint()) < 1e-12);
        let omega = QuotientFunction::new(pseudo_vector(4, 9));
        let grp = s.duality().group().clone();
        for a in grp.elements::<GroupElement>() {
            let l = s.lambda_matrix(&a).unwrap();
            let lhs = &l * s.m0_matrix(&omega).unwrap() * l.adjoint();
            let rhs = s.m0_matrix(&omega.translate(s.duality(), &a)).unwrap();
            assert!(max_diff(&lhs, &rhs) < 1e-9);
        }
    }

    #[test]
    fn transported_pvm_examples() {
        let s = z12_counting(2);
        let ones = QuotientFunction::constant(4, C64::new(1.0, 0.0));
        assert!(max_diff(&s.transported_pvm_matrix(&ones).unwrap(), &identity(24)) < 1e-12);
        let sig = s.sigma_matrix().unwrap();
        let omega = QuotientFunction::new(pseudo_vector(4, 2));
        let conj = &sig * s.m0_matrix(&omega).unwrap() * sig.adjoint();
        assert!(max_diff(&conj, &s.transported_pvm_matrix(&omega).unwrap()) < 1e-9);
        let real = QuotientFunction::new(vec![C64::new(0.3, 0.0), C64::new(-1.0, 0.0), C64::new(2.0, 0.0), ZERO]);
        let m = s.transported_pvm_matrix(&real).unwrap();
        assert!(max_diff(&m, &m.adjoint()) < 1e-12);
    }

    #[test]
    fn zero_weight_points_are_dropped() {
        let d = Duality::from_generators(FiniteAbelianGroup::cyclic(12).unwrap(), &[GroupElement(vec![4])]).unwrap();
        let nu = WeightedMeasure::new(MeasureDomain::DualQuotient, vec![2.0, 0.0, 0.5]).unwrap();
        let s = InducedSpace::new(Arc::new(d), nu, 1).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.target_dim(), 8);
        let sig = s.sigma_matrix().unwrap();
        assert!(max_diff(&(sig.adjoint() * &sig), &identity(8)) < 1e-9);
        assert!(max_abs(&sig) <= 1.0);
    }
}
