//! Covariant POVMs for a representation acting diagonally on
//! `⊕_k L²(Ĝ, ρ_k; F_k)`.
//!
//! Given isometries `W_k(x) : F_k → E` on `supp ρ_k`, the POVM is
//!
//! ```text
//! (P_j M(ω) P_k φ)(x) = Σ_{y ∈ H^⊥} μ_{H^⊥}(pt) F̄ω(y) √(α_k(x-y)/α_j(x)) W_j(x)* W_k(x-y) φ(x-y)
//! ```
//!
//! with `α_k = dρ_k/dν̃_U`. [`BlockOperator`] stores the kernel of this formula
//! acting on pointwise values `φ_k(x)`. The representation space has the
//! weighted inner product `Σ_x ρ_k(x) ⟨φ(x), ψ(x)⟩`, so the orthonormal basis
//! vectors are `δ_x ⊗ f_a / √ρ_k(x)`; [`BlockOperator::to_orthonormal`]
//! converts. Sectors are ordered as given, each over its support (ascending
//! character index) with the F-coordinate minor.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Coordinates, DualCharacter, Duality, FiniteAbelianGroup, GroupElement};
use crate::harmonic::{self, MeasureDomain, QuotientFunction, WeightedMeasure};
use crate::induction::InducedSpace;
use crate::linalg::{
    hermiticity_defect, identity, isometry_defect, max_diff, min_hermitian_eigenvalue, CMatrix, C64, ZERO,
};
use crate::par::{self, Execution};

/// Admission tolerance for isometries and unitaries.
pub const ADMISSION_TOLERANCE: f64 = 1e-9;

/// Default tolerance for verification checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// One summand `L²(Ĝ, ρ_k; F_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpec {
    pub rho: WeightedMeasure,
    pub f_dim: usize,
}

impl SectorSpec {
    pub fn new(rho: WeightedMeasure, f_dim: usize) -> Self {
        Self { rho, f_dim }
    }

    /// Weight 1 at each listed character.
    pub fn indicator(group: &FiniteAbelianGroup, support: &[DualCharacter], f_dim: usize) -> Result<Self> {
        let mut w = vec![0.0; group.order()];
        for x in support {
            group.check(x)?;
            w[group.index_of(x)] = 1.0;
        }
        Ok(Self::new(WeightedMeasure::new(MeasureDomain::Dual, w)?, f_dim))
    }
}

/// A representation of `G` acting by characters on each sector.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalRep {
    group: FiniteAbelianGroup,
    sectors: Vec<SectorSpec>,
    supports: Vec<Vec<usize>>,
    offsets: Vec<usize>,
}

/// Accepts iff every multiplicity is at least 1 and the sector supports are
/// pairwise disjoint.
pub fn validate_rep(group: &FiniteAbelianGroup, sectors: &[SectorSpec]) -> Result<()> {
    let mut owner: Vec<Option<usize>> = vec![None; group.order()];
    for (k, s) in sectors.iter().enumerate() {
        if s.rho.domain() != MeasureDomain::Dual {
            return Err(Error::DomainMismatch {
                expected: MeasureDomain::Dual.to_string(),
                found: s.rho.domain().to_string(),
            });
        }
        if s.rho.len() != group.order() {
            return Err(Error::MeasureLength {
                expected: group.order(),
                found: s.rho.len(),
            });
        }
        if s.f_dim == 0 {
            return Err(Error::ZeroMultiplicity { sector: k });
        }
        for x in s.rho.support() {
            if let Some(first) = owner[x] {
                return Err(Error::OverlappingSupports {
                    first,
                    second: k,
                    point: group.at::<DualCharacter>(x).0,
                });
            }
            owner[x] = Some(k);
        }
    }
    Ok(())
}

impl DiagonalRep {
    pub fn new(group: FiniteAbelianGroup, sectors: Vec<SectorSpec>) -> Result<Self> {
        validate_rep(&group, &sectors)?;
        let supports: Vec<Vec<usize>> = sectors.iter().map(|s| s.rho.support()).collect();
        let mut offsets = Vec::with_capacity(sectors.len() + 1);
        let mut acc = 0;
        for (s, sup) in sectors.iter().zip(&supports) {
            offsets.push(acc);
            acc += sup.len() * s.f_dim;
        }
        offsets.push(acc);
        Ok(Self {
            group,
            sectors,
            supports,
            offsets,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn sectors(&self) -> &[SectorSpec] {
        &self.sectors
    }

    pub fn sector_count(&self) -> usize {
        self.sectors.len()
    }

    /// Support of sector `k`, ascending character indices.
    pub fn support(&self, k: usize) -> &[usize] {
        &self.supports[k]
    }

    pub fn f_dim(&self, k: usize) -> usize {
        self.sectors[k].f_dim
    }

    /// Dimension of sector `k`.
    pub fn sector_dim(&self, k: usize) -> usize {
        self.offsets[k + 1] - self.offsets[k]
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// `Σ_k |supp ρ_k| · dim F_k`.
    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn max_f_dim(&self) -> usize {
        self.sectors.iter().map(|s| s.f_dim).max().unwrap_or(0)
    }

    pub fn total_f_dim(&self) -> usize {
        self.sectors.iter().map(|s| s.f_dim).sum()
    }

    /// Character of every orthonormal basis vector, in basis order.
    pub fn basis_characters(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, sup) in self.supports.iter().enumerate() {
            for &x in sup {
                out.extend(std::iter::repeat_n(x, self.f_dim(k)));
            }
        }
        out
    }

    /// `ρ_k` weight of every orthonormal basis vector, in basis order.
    pub fn basis_weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for (k, sup) in self.supports.iter().enumerate() {
            for &x in sup {
                out.extend(std::iter::repeat_n(self.sectors[k].rho.weight(x), self.f_dim(k)));
            }
        }
        out
    }

    /// `U(g)` in the orthonormal basis (diagonal).
    pub fn unitary_diagonal(&self, g: &GroupElement) -> Vec<C64> {
        self.basis_characters()
            .into_iter()
            .map(|x| self.group.phase(self.group.at::<DualCharacter>(x).coords(), g.coords()))
            .collect()
    }
}

/// The canonical representative `ρ` of the spectral class, its image and lift.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMeasures {
    pub rho: WeightedMeasure,
    pub nu_u: WeightedMeasure,
    pub nu_u_tilde: WeightedMeasure,
}

/// `ρ = 1` on `∪_k supp ρ_k`, `ν_U = ρ^π`, `ν̃_U` its lift.
pub fn class_measure(d: &Duality, rep: &DiagonalRep) -> Result<ClassMeasures> {
    check_same_group(d, rep)?;
    let n = d.group().order();
    let union: Vec<usize> = rep.supports.iter().flatten().copied().collect();
    let rho = WeightedMeasure::indicator(MeasureDomain::Dual, n, &union);
    let nu_u = harmonic::image_measure(d, &rho)?;
    let nu_u_tilde = harmonic::lift_measure(d, &nu_u)?;
    Ok(ClassMeasures { rho, nu_u, nu_u_tilde })
}

fn check_same_group(d: &Duality, rep: &DiagonalRep) -> Result<()> {
    if d.group() != rep.group() {
        return Err(Error::GroupMismatch {
            left: d.group().factors().to_vec(),
            right: rep.group().factors().to_vec(),
        });
    }
    Ok(())
}

/// Support-inclusion certificate for one sector: `supp ρ_k ⊆ supp ν̃_U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportInclusion {
    pub sector: usize,
    pub support_size: usize,
    pub covered: usize,
    pub contained: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// `α_k(x)` for `x` in `supp ρ_k`, aligned with [`DiagonalRep::support`].
    pub densities: Vec<Vec<f64>>,
    pub certificate: Vec<SupportInclusion>,
}

/// Existence criterion: every `ρ_k` has a density with respect to `ν̃_U`.
/// For atomic measures this always holds; the densities are returned.
pub fn admits_covariant_povm(d: &Duality, rep: &DiagonalRep) -> Result<Admissibility> {
    let class = class_measure(d, rep)?;
    Ok(admissibility_wrt(rep, &class.nu_u_tilde))
}

fn admissibility_wrt(rep: &DiagonalRep, nu_u_tilde: &WeightedMeasure) -> Admissibility {
    let mut densities = Vec::with_capacity(rep.sector_count());
    let mut certificate = Vec::with_capacity(rep.sector_count());
    for (k, s) in rep.sectors.iter().enumerate() {
        let sup = rep.support(k);
        let covered = sup.iter().filter(|&&x| nu_u_tilde.in_support(x)).count();
        certificate.push(SupportInclusion {
            sector: k,
            support_size: sup.len(),
            covered,
            contained: covered == sup.len(),
        });
        densities.push(
            sup.iter()
                .map(|&x| {
                    if nu_u_tilde.in_support(x) {
                        s.rho.weight(x) / nu_u_tilde.weight(x)
                    } else {
                        f64::INFINITY
                    }
                })
                .collect(),
        );
    }
    Admissibility {
        admissible: certificate.iter().all(|c| c.contained),
        densities,
        certificate,
    }
}

/// `x ↦ W_k(x)`, one `dim E × dim F_k` matrix per support point.
/// Matrices at points outside `supp ρ_k` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryField {
    pub sector: usize,
    pub matrices: Vec<(DualCharacter, CMatrix)>,
}

impl IsometryField {
    pub fn new(sector: usize, matrices: Vec<(DualCharacter, CMatrix)>) -> Self {
        Self { sector, matrices }
    }

    /// The same matrix at every support point of sector `k`.
    pub fn constant(rep: &DiagonalRep, sector: usize, matrix: CMatrix) -> Self {
        Self::from_fn(rep, sector, |_| matrix.clone())
    }

    pub fn from_fn<F: FnMut(&DualCharacter) -> CMatrix>(rep: &DiagonalRep, sector: usize, mut f: F) -> Self {
        let g = rep.group();
        let matrices = rep
            .support(sector)
            .iter()
            .map(|&x| {
                let ch: DualCharacter = g.at(x);
                let m = f(&ch);
                (ch, m)
            })
            .collect();
        Self { sector, matrices }
    }
}

/// Resolves one matrix per support point, aligned with `rep.support(k)`.
fn resolve_fields(
    rep: &DiagonalRep,
    fields: &[IsometryField],
    rows_of: impl Fn(usize) -> usize,
) -> Result<Vec<Vec<CMatrix>>> {
    if fields.len() != rep.sector_count() {
        return Err(Error::FieldCount {
            expected: rep.sector_count(),
            found: fields.len(),
        });
    }
    let g = rep.group();
    let mut out: Vec<Vec<Option<CMatrix>>> = (0..rep.sector_count())
        .map(|k| vec![None; rep.support(k).len()])
        .collect();
    for field in fields {
        let k = field.sector;
        if k >= rep.sector_count() {
            return Err(Error::Incompatible(format!("field for unknown sector {k}")));
        }
        for (x, m) in &field.matrices {
            g.check(x)?;
            let xi = g.index_of(x);
            let Ok(pos) = rep.support(k).binary_search(&xi) else {
                continue;
            };
            let (rows, cols) = (rows_of(k), rep.f_dim(k));
            if m.shape() != (rows, cols) {
                return Err(Error::MatrixShape {
                    sector: k,
                    point: x.0.clone(),
                    rows: m.nrows(),
                    cols: m.ncols(),
                    expected_rows: rows,
                    expected_cols: cols,
                });
            }
            out[k][pos] = Some(m.clone());
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(k, v)| {
            v.into_iter()
                .enumerate()
                .map(|(p, m)| {
                    m.ok_or_else(|| Error::MissingMatrix {
                        sector: k,
                        point: g.at::<DualCharacter>(rep.support(k)[p]).0,
                    })
                })
                .collect()
        })
        .collect()
}

/// Operator in pointwise coordinates, split into sector blocks.
/// Block `(j, k)` maps sector `k` to sector `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    sector_dims: Vec<usize>,
    blocks: Vec<CMatrix>,
}

impl BlockOperator {
    pub fn zeros(rep: &DiagonalRep) -> Self {
        let n = rep.sector_count();
        let sector_dims: Vec<usize> = (0..n).map(|k| rep.sector_dim(k)).collect();
        let blocks = (0..n * n)
            .map(|i| CMatrix::zeros(sector_dims[i / n], sector_dims[i % n]))
            .collect();
        Self { sector_dims, blocks }
    }

    pub fn sector_count(&self) -> usize {
        self.sector_dims.len()
    }

    pub fn block(&self, j: usize, k: usize) -> &CMatrix {
        &self.blocks[j * self.sector_count() + k]
    }

    pub fn block_mut(&mut self, j: usize, k: usize) -> &mut CMatrix {
        let n = self.sector_count();
        &mut self.blocks[j * n + k]
    }

    /// Blocks concatenated into one pointwise matrix.
    pub fn assemble_pointwise(&self) -> CMatrix {
        let total: usize = self.sector_dims.iter().sum();
        let mut m = CMatrix::zeros(total, total);
        let mut r0 = 0;
        for j in 0..self.sector_count() {
            let mut c0 = 0;
            for k in 0..self.sector_count() {
                m.view_mut((r0, c0), (self.sector_dims[j], self.sector_dims[k]))
                    .copy_from(self.block(j, k));
                c0 += self.sector_dims[k];
            }
            r0 += self.sector_dims[j];
        }
        m
    }

    /// The same operator in the orthonormal basis of the representation space.
    pub fn to_orthonormal(&self, rep: &DiagonalRep) -> CMatrix {
        let w = rep.basis_weights();
        let mut m = self.assemble_pointwise();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                m[(r, c)] *= (w[r] / w[c]).sqrt();
            }
        }
        m
    }

    /// Inverse of [`to_orthonormal`](Self::to_orthonormal).
    pub fn from_orthonormal(rep: &DiagonalRep, a: &CMatrix) -> Self {
        let w = rep.basis_weights();
        let mut out = Self::zeros(rep);
        let mut r0 = 0;
        for j in 0..rep.sector_count() {
            let mut c0 = 0;
            for k in 0..rep.sector_count() {
                let (rj, ck) = (rep.sector_dim(j), rep.sector_dim(k));
                let b = out.block_mut(j, k);
                for r in 0..rj {
                    for c in 0..ck {
                        b[(r, c)] = a[(r0 + r, c0 + c)] * (w[c0 + c] / w[r0 + r]).sqrt();
                    }
                }
                c0 += ck;
            }
            r0 += rep.sector_dim(j);
        }
        out
    }

    /// Largest entry deviation over all blocks.
    pub fn max_deviation(&self, other: &BlockOperator) -> f64 {
        assert_eq!(self.sector_dims, other.sector_dims, "block layouts differ");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| max_diff(a, b))
            .fold(0.0, f64::max)
    }
}

/// A covariant POVM on `G/H` for a diagonal representation.
#[derive(Debug, Clone)]
pub struct CovariantPovm {
    duality: Arc<Duality>,
    rep: DiagonalRep,
    nu_u: WeightedMeasure,
    nu_u_tilde: WeightedMeasure,
    alpha: Vec<Vec<f64>>,
    fields: Vec<Vec<CMatrix>>,
    e_dim: usize,
}

/// Builds the POVM with the canonical class measure `ν_U = ρ^π`.
pub fn build_covariant_povm(
    duality: Arc<Duality>,
    rep: DiagonalRep,
    fields: &[IsometryField],
    e_dim: usize,
) -> Result<CovariantPovm> {
    let class = class_measure(&duality, &rep)?;
    build_covariant_povm_with_class(duality, rep, fields, e_dim, class.nu_u)
}

/// Builds the POVM with an explicit `ν_U`, which must have the same null sets
/// as `ρ^π`.
pub fn build_covariant_povm_with_class(
    duality: Arc<Duality>,
    rep: DiagonalRep,
    fields: &[IsometryField],
    e_dim: usize,
    nu_u: WeightedMeasure,
) -> Result<CovariantPovm> {
    let class = class_measure(&duality, &rep)?;
    nu_u.check_domain(&duality, MeasureDomain::DualQuotient)?;
    if !nu_u.is_equivalent(&class.nu_u) {
        return Err(Error::ClassMeasure(
            "ν_U must charge exactly the cosets charged by the sector supports".into(),
        ));
    }
    let required = rep.max_f_dim();
    if e_dim < required.max(1) {
        return Err(Error::EDimTooSmall {
            e_dim,
            required: required.max(1),
        });
    }
    let resolved = resolve_fields(&rep, fields, |_| e_dim)?;
    let g = rep.group();
    for (k, mats) in resolved.iter().enumerate() {
        for (p, m) in mats.iter().enumerate() {
            let deviation = isometry_defect(m);
            if deviation > ADMISSION_TOLERANCE {
                return Err(Error::NonIsometric {
                    sector: k,
                    point: g.at::<DualCharacter>(rep.support(k)[p]).0,
                    deviation,
                });
            }
        }
    }
    let nu_u_tilde = harmonic::lift_measure(&duality, &nu_u)?;
    let adm = admissibility_wrt(&rep, &nu_u_tilde);
    debug_assert!(adm.admissible);
    Ok(CovariantPovm {
        duality,
        rep,
        nu_u,
        nu_u_tilde,
        alpha: adm.densities,
        fields: resolved,
        e_dim,
    })
}

impl CovariantPovm {
    pub fn duality(&self) -> &Duality {
        &self.duality
    }

    pub fn duality_arc(&self) -> Arc<Duality> {
        Arc::clone(&self.duality)
    }

    pub fn rep(&self) -> &DiagonalRep {
        &self.rep
    }

    pub fn nu_u(&self) -> &WeightedMeasure {
        &self.nu_u
    }

    pub fn nu_u_tilde(&self) -> &WeightedMeasure {
        &self.nu_u_tilde
    }

    pub fn e_dim(&self) -> usize {
        self.e_dim
    }

    /// `α_k` aligned with `rep().support(k)`.
    pub fn densities(&self, k: usize) -> &[f64] {
        &self.alpha[k]
    }

    /// `W_k` aligned with `rep().support(k)`.
    pub fn field(&self, k: usize) -> &[CMatrix] {
        &self.fields[k]
    }

    /// Evaluates the covariant POVM formula on `ω`.
    pub fn apply(&self, omega: &QuotientFunction) -> Result<BlockOperator> {
        let d = &*self.duality;
        let fw = harmonic::fourier_cotransform_quotient(d, omega)?;
        let mu = harmonic::annihilator_weight(d);
        let g = d.group();
        let rep = &self.rep;
        let mut out = BlockOperator::zeros(rep);
        for j in 0..rep.sector_count() {
            let fj = rep.f_dim(j);
            for k in 0..rep.sector_count() {
                let fk = rep.f_dim(k);
                let block = out.block_mut(j, k);
                for (p, &x) in rep.support(j).iter().enumerate() {
                    let xc: DualCharacter = g.at(x);
                    let wj_adj = self.fields[j][p].adjoint();
                    for (q, &xp) in rep.support(k).iter().enumerate() {
                        let y = g.sub(&xc, &g.at::<DualCharacter>(xp));
                        let Some(yi) = d.annihilator_position(g.index_of(&y)) else {
                            continue;
                        };
                        let coeff = fw[yi] * mu * (self.alpha[k][q] / self.alpha[j][p]).sqrt();
                        if coeff == ZERO {
                            continue;
                        }
                        let kernel = (&wj_adj * &self.fields[k][q]) * coeff;
                        block.view_mut((p * fj, q * fk), (fj, fk)).copy_from(&kernel);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Q(X) = M(1_X)` for a set of cosets.
    pub fn effect(&self, cosets: &[usize]) -> Result<BlockOperator> {
        for &c in cosets {
            self.duality.quotient().check_coset(c)?;
        }
        self.apply(&QuotientFunction::indicator(self.duality.quotient_order(), cosets))
    }

    /// `M(ω)` in the orthonormal basis.
    pub fn operator(&self, omega: &QuotientFunction) -> Result<CMatrix> {
        Ok(self.apply(omega)?.to_orthonormal(&self.rep))
    }

    /// `(Wφ_k)(x) = √α_k(x) W_k(x) φ_k(x)` as a matrix between orthonormal
    /// bases, from the representation space to `L²(Ĝ, ν̃_U; E)`.
    pub fn intertwiner_matrix(&self) -> CMatrix {
        let targets = self.nu_u_tilde.support();
        let mut row_of = vec![usize::MAX; self.duality.group().order()];
        for (p, &x) in targets.iter().enumerate() {
            row_of[x] = p;
        }
        let e = self.e_dim;
        let rep = &self.rep;
        let mut m = CMatrix::zeros(targets.len() * e, rep.dim());
        for k in 0..rep.sector_count() {
            let fk = rep.f_dim(k);
            for (p, &x) in rep.support(k).iter().enumerate() {
                // Unit input φ = δ_x f_a / √ρ_k(x); output weighted by √ν̃(x).
                let scale = (self.alpha[k][p] * self.nu_u_tilde.weight(x) / rep.sectors[k].rho.weight(x)).sqrt();
                let r0 = row_of[x] * e;
                let c0 = rep.offset(k) + p * fk;
                m.view_mut((r0, c0), (e, fk))
                    .copy_from(&(&self.fields[k][p] * C64::new(scale, 0.0)));
            }
        }
        m
    }
}

/// Independent evaluation of the POVM as `W* M̃₀^{ν_U}(ω) W`, with `M̃₀`
/// obtained by conjugating the induced PVM with the explicit `Σ` matrix.
pub struct CompressionOracle<'a> {
    povm: &'a CovariantPovm,
    space: InducedSpace,
    sigma: CMatrix,
    intertwiner: CMatrix,
}

impl<'a> CompressionOracle<'a> {
    pub fn new(povm: &'a CovariantPovm) -> Result<Self> {
        let space = InducedSpace::new(povm.duality_arc(), povm.nu_u.clone(), povm.e_dim)?;
        debug_assert_eq!(space.target_points(), povm.nu_u_tilde.support().as_slice());
        let sigma = space.sigma_matrix()?;
        Ok(Self {
            povm,
            space,
            sigma,
            intertwiner: povm.intertwiner_matrix(),
        })
    }

    pub fn space(&self) -> &InducedSpace {
        &self.space
    }

    /// `W* Σ M₀(ω) Σ* W` in the orthonormal basis.
    pub fn compress_orthonormal(&self, omega: &QuotientFunction) -> Result<CMatrix> {
        let m0 = self.space.m0_matrix(omega)?;
        let transported = &self.sigma * m0 * self.sigma.adjoint();
        Ok(self.intertwiner.adjoint() * transported * &self.intertwiner)
    }

    pub fn compress(&self, omega: &QuotientFunction) -> Result<BlockOperator> {
        Ok(BlockOperator::from_orthonormal(
            &self.povm.rep,
            &self.compress_orthonormal(omega)?,
        ))
    }
}

/// One-shot form of [`CompressionOracle::compress`].
pub fn oracle_compress(povm: &CovariantPovm, omega: &QuotientFunction) -> Result<BlockOperator> {
    CompressionOracle::new(povm)?.compress(omega)
}

/// Anything that assigns operators on a diagonal representation space to
/// functions on `G/H`.
pub trait OperatorFamily: Sync {
    fn duality(&self) -> &Duality;

    /// Character index carried by each orthonormal basis vector.
    fn basis_characters(&self) -> Vec<usize>;

    /// `M(ω)` in the orthonormal basis.
    fn operator(&self, omega: &QuotientFunction) -> Result<CMatrix>;
}

impl OperatorFamily for CovariantPovm {
    fn duality(&self) -> &Duality {
        &self.duality
    }

    fn basis_characters(&self) -> Vec<usize> {
        self.rep.basis_characters()
    }

    fn operator(&self, omega: &QuotientFunction) -> Result<CMatrix> {
        CovariantPovm::operator(self, omega)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub pass: bool,
    pub max_deviation: f64,
}

impl CheckResult {
    pub fn new(check: &str, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            pass: max_deviation <= tolerance,
            max_deviation,
        }
    }

    fn failed(check: &str) -> Self {
        Self {
            check: check.to_string(),
            pass: false,
            max_deviation: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, check: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub random_subsets: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            random_subsets: 30,
            seed: 0x5eed,
            execution: Execution::default(),
        }
    }
}

fn random_subsets(cosets: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..cosets).filter(|_| rng.random_bool(0.5)).collect())
        .collect()
}

/// Positivity of effects on all singletons and random subsets,
/// normalisation `M(1) = I`, and sum over the singleton partition.
pub fn verify_axioms<F: OperatorFamily + ?Sized>(family: &F, opts: &VerifyOptions) -> VerificationReport {
    let d = family.duality();
    let n = d.quotient_order();
    let dim = family.basis_characters().len();
    let tol = opts.tolerance;
    let mut sets: Vec<Vec<usize>> = (0..n).map(|c| vec![c]).collect();
    sets.extend(random_subsets(n, opts.random_subsets, opts.seed));

    let effects = par::map(opts.execution, &sets, |x| {
        family.operator(&QuotientFunction::indicator(n, x))
    });
    let mut checks = Vec::new();
    if effects.iter().any(|e| e.is_err()) {
        checks.push(CheckResult::failed("positivity"));
        checks.push(CheckResult::failed("self_adjointness"));
    } else {
        let effects: Vec<CMatrix> = effects.into_iter().map(|e| e.unwrap()).collect();
        let herm = effects.iter().map(hermiticity_defect).fold(0.0, f64::max);
        let neg = par::map(opts.execution, &effects, |e| (-min_hermitian_eigenvalue(e)).max(0.0))
            .into_iter()
            .fold(0.0, f64::max);
        checks.push(CheckResult::new("positivity", neg, tol));
        checks.push(CheckResult::new("self_adjointness", herm, tol));
        let sum = effects[..n].iter().fold(CMatrix::zeros(dim, dim), |acc, e| acc + e);
        checks.push(CheckResult::new("partition_sum", max_diff(&sum, &identity(dim)), tol));
    }
    match family.operator(&QuotientFunction::constant(n, C64::new(1.0, 0.0))) {
        Ok(m) => checks.push(CheckResult::new("normalization", max_diff(&m, &identity(dim)), tol)),
        Err(_) => checks.push(CheckResult::failed("normalization")),
    }
    VerificationReport { checks }
}

/// `U(g) M(ω) U(g)* = M(g·ω)` for every `g ∈ G` and every coset indicator `ω`.
pub fn verify_covariance<F: OperatorFamily + ?Sized>(family: &F, opts: &VerifyOptions) -> VerificationReport {
    let d = family.duality();
    let grp = d.group();
    let n = d.quotient_order();
    let chars = family.basis_characters();
    let basis: Vec<QuotientFunction> = (0..n).map(|c| QuotientFunction::indicator(n, &[c])).collect();
    let ops: Result<Vec<CMatrix>> = basis.iter().map(|w| family.operator(w)).collect();
    let Ok(ops) = ops else {
        return VerificationReport {
            checks: vec![CheckResult::failed("covariance")],
        };
    };
    let elements: Vec<GroupElement> = grp.elements();
    let deviations = par::map(opts.execution, &elements, |g| {
        let u: Vec<C64> = chars
            .iter()
            .map(|&x| grp.phase(grp.at::<DualCharacter>(x).coords(), g.coords()))
            .collect();
        let mut worst = 0.0f64;
        for (w, m) in basis.iter().zip(&ops) {
            let Ok(moved) = family.operator(&w.translate(d, g)) else {
                return f64::INFINITY;
            };
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    let lhs = u[r] * m[(r, c)] * u[c].conj();
                    worst = worst.max((lhs - moved[(r, c)]).norm());
                }
            }
        }
        worst
    });
    let worst = deviations.into_iter().fold(0.0, f64::max);
    VerificationReport {
        checks: vec![CheckResult::new("covariance", worst, opts.tolerance)],
    }
}

/// Verdict of the equivalence criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub max_deviation: f64,
}

fn resolve_unitaries(rep: &DiagonalRep, s_fields: &[IsometryField]) -> Result<Vec<Vec<CMatrix>>> {
    let resolved = resolve_fields(rep, s_fields, |k| rep.f_dim(k))?;
    let g = rep.group();
    for (k, mats) in resolved.iter().enumerate() {
        for (p, m) in mats.iter().enumerate() {
            let deviation = isometry_defect(m).max(max_diff(&(m * m.adjoint()), &identity(m.nrows())));
            if deviation > ADMISSION_TOLERANCE {
                return Err(Error::NonUnitary {
                    sector: k,
                    point: g.at::<DualCharacter>(rep.support(k)[p]).0,
                    deviation,
                });
            }
        }
    }
    Ok(resolved)
}

/// Block-diagonal `S` acting as `S_k(x)` on each fibre, orthonormal basis.
pub fn assemble_sector_unitary(rep: &DiagonalRep, s_fields: &[IsometryField]) -> Result<CMatrix> {
    let s = resolve_unitaries(rep, s_fields)?;
    let mut m = CMatrix::zeros(rep.dim(), rep.dim());
    for (k, sector) in s.iter().enumerate() {
        let fk = rep.f_dim(k);
        for (p, sk) in sector.iter().enumerate() {
            let o = rep.offset(k) + p * fk;
            m.view_mut((o, o), (fk, fk)).copy_from(sk);
        }
    }
    Ok(m)
}

/// Checks
/// `√α_k(x+y) W_j(x)* W_k(x+y) = √α_k(x+y) S_j(x)* W'_j(x)* W'_k(x+y) S_k(x+y)`
/// for all sectors `j, k`, `x ∈ supp ρ_j`, `y ∈ H^⊥` with `x+y ∈ supp ρ_k`.
pub fn equivalence_check(
    m: &CovariantPovm,
    m2: &CovariantPovm,
    s_fields: &[IsometryField],
    tolerance: f64,
) -> Result<EquivalenceReport> {
    if m.duality() != m2.duality() || m.rep() != m2.rep() {
        return Err(Error::Incompatible(
            "POVMs must share the representation and the subgroup".into(),
        ));
    }
    let rep = m.rep();
    let s = resolve_unitaries(rep, s_fields)?;
    let d = m.duality();
    let g = d.group();
    let mut worst = 0.0f64;
    for j in 0..rep.sector_count() {
        for (p, &x) in rep.support(j).iter().enumerate() {
            let xc: DualCharacter = g.at(x);
            for y in d.annihilator().elements() {
                let xy = g.index_of(&g.add(&xc, y));
                for k in 0..rep.sector_count() {
                    let Ok(q) = rep.support(k).binary_search(&xy) else {
                        continue;
                    };
                    let scale = m.alpha[k][q].sqrt();
                    let lhs = m.fields[j][p].adjoint() * &m.fields[k][q];
                    let rhs = s[j][p].adjoint() * m2.fields[j][p].adjoint() * &m2.fields[k][q] * &s[k][q];
                    worst = worst.max(scale * max_diff(&lhs, &rhs));
                }
            }
        }
    }
    Ok(EquivalenceReport {
        equivalent: worst <= tolerance,
        max_deviation: worst,
    })
}
