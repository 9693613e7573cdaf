#![allow(dead_code)]

use std::sync::Arc;

use covpovm::group::{DualCharacter, Duality, FiniteAbelianGroup, GroupElement};
use covpovm::harmonic::{MeasureDomain, QuotientFunction, WeightedMeasure};
use covpovm::linalg::{CMatrix, C64};
use covpovm::povm::{build_covariant_povm, CovariantPovm, DiagonalRep, IsometryField, SectorSpec};
use rand::Rng;

pub fn random_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| random_c64(rng))
}

/// First `cols` columns of the unitary factor of a random square matrix.
pub fn random_isometry<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let q = random_matrix(rng, rows, rows).qr().q();
    q.columns(0, cols).into_owned()
}

pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    random_isometry(rng, n, n)
}

pub fn random_omega<R: Rng>(rng: &mut R, cosets: usize) -> QuotientFunction {
    QuotientFunction::new((0..cosets).map(|_| random_c64(rng)).collect())
}

/// Unit vector with random complex entries.
pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| random_c64(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// A POVM test case: group, subgroup generators, multiplicities per sector.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: &'static str,
    pub factors: Vec<u64>,
    pub generators: Vec<Vec<u64>>,
    pub f_dims: Vec<usize>,
    pub e_dim: usize,
}

pub fn instances() -> Vec<Instance> {
    vec![
        Instance {
            name: "Z_4 / <2>",
            factors: vec![4],
            generators: vec![vec![2]],
            f_dims: vec![1, 2],
            e_dim: 3,
        },
        Instance {
            name: "Z_8 / <4>",
            factors: vec![8],
            generators: vec![vec![4]],
            f_dims: vec![2, 1, 1],
            e_dim: 2,
        },
        Instance {
            name: "Z_12 / <4>",
            factors: vec![12],
            generators: vec![vec![4]],
            f_dims: vec![1, 2],
            e_dim: 3,
        },
        Instance {
            name: "Z_12 / <6>",
            factors: vec![12],
            generators: vec![vec![6]],
            f_dims: vec![2, 2, 1],
            e_dim: 2,
        },
        Instance {
            name: "Z_2xZ_2 / <(1,1)>",
            factors: vec![2, 2],
            generators: vec![vec![1, 1]],
            f_dims: vec![1, 2],
            e_dim: 2,
        },
        Instance {
            name: "Z_8 / {0}",
            factors: vec![8],
            generators: vec![],
            f_dims: vec![1, 1],
            e_dim: 1,
        },
    ]
}

impl Instance {
    pub fn duality(&self) -> Arc<Duality> {
        let g = FiniteAbelianGroup::new(self.factors.clone()).unwrap();
        let gens: Vec<GroupElement> = self.generators.iter().map(|c| GroupElement(c.clone())).collect();
        Arc::new(Duality::from_generators(g, &gens).unwrap())
    }

    /// Random disjoint sector supports (some characters uncovered), random
    /// positive weights and point-dependent random isometries.
    pub fn build<R: Rng>(&self, rng: &mut R) -> CovariantPovm {
        let d = self.duality();
        let g = d.group().clone();
        let n = g.order();
        let k = self.f_dims.len();
        let mut owner: Vec<Option<usize>> = (0..n).map(|_| None).collect();
        // Each sector gets at least one point; the rest are assigned at random.
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        for (s, &x) in perm.iter().take(k).enumerate() {
            owner[x] = Some(s);
        }
        for &x in perm.iter().skip(k) {
            if rng.random_bool(0.75) {
                owner[x] = Some(rng.random_range(0..k));
            }
        }
        let sectors: Vec<SectorSpec> = (0..k)
            .map(|s| {
                let w: Vec<f64> = (0..n)
                    .map(|x| {
                        if owner[x] == Some(s) {
                            rng.random_range(0.2..3.0)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                SectorSpec::new(WeightedMeasure::new(MeasureDomain::Dual, w).unwrap(), self.f_dims[s])
            })
            .collect();
        let rep = DiagonalRep::new(g, sectors).unwrap();
        let fields: Vec<IsometryField> = (0..k)
            .map(|s| {
                IsometryField::from_fn(&rep, s, |_: &DualCharacter| {
                    random_isometry(rng, self.e_dim, self.f_dims[s])
                })
            })
            .collect();
        build_covariant_povm(d, rep, &fields, self.e_dim).unwrap()
    }
}
