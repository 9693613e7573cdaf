//! JSON schemas and the command implementations behind the `covpovm` binary.
//!
//! Every command returns an [`Output`] (stdout text plus exit code) or a
//! [`CliError`]; the binary only prints and exits.
//!
//! Exit codes: 0 success, 1 verification failed, 2 malformed input or I/O,
//! 3 semantic error, 4 build rejection.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::{DualCharacter, Duality, FiniteAbelianGroup, GroupElement};
use crate::harmonic::{MeasureDomain, MeasureJson, QuotientFunction};
use crate::linalg::{CMatrix, DenseMatrixJson, C64};
use crate::observables::{born_distribution, sample_distribution, validate_partition};
use crate::par::Execution;
use crate::povm::{
    build_covariant_povm, build_covariant_povm_with_class, verify_axioms, verify_covariance, CheckResult,
    CompressionOracle, CovariantPovm, DiagonalRep, IsometryField, SectorSpec, VerificationReport, VerifyOptions,
};

pub const SPEC_VERSION: u32 = 1;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_SEMANTIC: u8 = 3;
pub const EXIT_REJECTED: u8 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    /// Machine-readable body for stdout, if any.
    pub stdout: Option<String>,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
            stdout: None,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_build_rejection() {
            let rejection = Rejection::from_error(&e);
            Self {
                code: EXIT_REJECTED,
                message: format!("build rejected: {e}"),
                stdout: Some(to_json(&rejection)),
            }
        } else {
            Self {
                code: EXIT_SEMANTIC,
                message: e.to_string(),
                stdout: None,
            }
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: EXIT_OK }
    }
}

/// Structured reason emitted on exit code 4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub spec_version: u32,
    pub rejected: bool,
    pub reason: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
}

impl Rejection {
    fn from_error(e: &Error) -> Self {
        let (reason, sector, point, deviation) = match e {
            Error::NonIsometric {
                sector,
                point,
                deviation,
            } => ("non_isometric", Some(*sector), Some(point.clone()), Some(*deviation)),
            Error::EDimTooSmall { .. } => ("e_dim_too_small", None, None, None),
            Error::MissingMatrix { sector, point } => ("missing_matrix", Some(*sector), Some(point.clone()), None),
            Error::MatrixShape { sector, point, .. } => ("matrix_shape", Some(*sector), Some(point.clone()), None),
            Error::FieldCount { .. } => ("field_count", None, None, None),
            Error::OverlappingSupports { second, point, .. } => {
                ("overlapping_supports", Some(*second), Some(point.clone()), None)
            }
            Error::ZeroMultiplicity { sector } => ("zero_multiplicity", Some(*sector), None, None),
            _ => ("other", None, None, None),
        };
        Self {
            spec_version: SPEC_VERSION,
            rejected: true,
            reason: reason.to_string(),
            message: e.to_string(),
            sector,
            point,
            deviation,
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("malformed JSON in {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn check_version(v: u32) -> CliResult<()> {
    if v != SPEC_VERSION {
        return Err(CliError::input(format!(
            "unsupported spec_version {v} (expected {SPEC_VERSION})"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub generators: Vec<Vec<u64>>,
}

/// The part of a scenario needed by `group`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupInput {
    pub spec_version: u32,
    pub group: FiniteAbelianGroup,
    pub subgroup: SubgroupSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorJson {
    pub rho: MeasureJson,
    pub f_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMatrix {
    pub point: Vec<u64>,
    pub matrix: DenseMatrixJson,
}

/// Either per-point matrices, a constant matrix for the whole support, or both
/// (per-point entries win).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldJson {
    pub sector: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<DenseMatrixJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<PointMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub spec_version: u32,
    pub group: FiniteAbelianGroup,
    pub subgroup: SubgroupSpec,
    pub sectors: Vec<SectorJson>,
    pub e_dim: usize,
    pub fields: Vec<FieldJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_u: Option<MeasureJson>,
}

/// `{"values": [[re, im], ...]}` indexed by coset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaJson {
    pub values: Vec<C64>,
}

/// `{"amplitudes": [[re, im], ...]}` in the orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub amplitudes: Vec<C64>,
}

/// `{"blocks": [[coset, ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub blocks: Vec<Vec<usize>>,
}

fn duality_from(group: &FiniteAbelianGroup, sub: &SubgroupSpec) -> CliResult<Duality> {
    let gens = sub
        .generators
        .iter()
        .map(|c| group.element(c))
        .collect::<crate::Result<Vec<GroupElement>>>()?;
    Ok(Duality::from_generators(group.clone(), &gens)?)
}

fn matrix_from(m: &DenseMatrixJson) -> CliResult<CMatrix> {
    m.to_matrix().map_err(CliError::input)
}

/// A scenario resolved into library values.
pub struct Resolved {
    pub duality: Arc<Duality>,
    pub rep: DiagonalRep,
    pub fields: Vec<IsometryField>,
    pub e_dim: usize,
    pub nu_u: Option<crate::harmonic::WeightedMeasure>,
}

impl Scenario {
    pub fn resolve(&self) -> CliResult<Resolved> {
        check_version(self.spec_version)?;
        let duality = Arc::new(duality_from(&self.group, &self.subgroup)?);
        let sectors = self
            .sectors
            .iter()
            .map(|s| {
                let rho = s.rho.to_measure(&duality)?;
                if rho.domain() != MeasureDomain::Dual {
                    return Err(Error::DomainMismatch {
                        expected: MeasureDomain::Dual.to_string(),
                        found: rho.domain().to_string(),
                    });
                }
                Ok(SectorSpec::new(rho, s.f_dim))
            })
            .collect::<crate::Result<Vec<_>>>()?;
        let rep = DiagonalRep::new(self.group.clone(), sectors)?;
        let mut fields = Vec::with_capacity(self.fields.len());
        for f in &self.fields {
            if f.sector >= rep.sector_count() {
                return Err(Error::Incompatible(format!("field for unknown sector {}", f.sector)).into());
            }
            let mut matrices: Vec<(DualCharacter, CMatrix)> = Vec::new();
            if let Some(c) = &f.constant {
                let m = matrix_from(c)?;
                matrices.extend(
                    rep.support(f.sector)
                        .iter()
                        .map(|&x| (self.group.at::<DualCharacter>(x), m.clone())),
                );
            }
            for pm in &f.matrices {
                let x = self.group.character(&pm.point)?;
                let m = matrix_from(&pm.matrix)?;
                matrices.retain(|(y, _)| *y != x);
                matrices.push((x, m));
            }
            fields.push(IsometryField::new(f.sector, matrices));
        }
        let nu_u = self.nu_u.as_ref().map(|m| m.to_measure(&duality)).transpose()?;
        Ok(Resolved {
            duality,
            rep,
            fields,
            e_dim: self.e_dim,
            nu_u,
        })
    }

    pub fn build(&self) -> CliResult<CovariantPovm> {
        let r = self.resolve()?;
        let povm = match r.nu_u {
            Some(nu) => build_covariant_povm_with_class(r.duality, r.rep, &r.fields, r.e_dim, nu)?,
            None => build_covariant_povm(r.duality, r.rep, &r.fields, r.e_dim)?,
        };
        Ok(povm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosetJson {
    pub representative: Vec<u64>,
    pub members: Vec<Vec<u64>>,
}

/// `⟨x, e_i⟩` for every character `x` and canonical generator `e_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingTable {
    pub characters: Vec<Vec<u64>>,
    pub generators: Vec<Vec<u64>>,
    pub values: Vec<Vec<C64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub spec_version: u32,
    pub group: FiniteAbelianGroup,
    pub order: usize,
    pub subgroup: Vec<Vec<u64>>,
    pub cosets: Vec<CosetJson>,
    pub annihilator: Vec<Vec<u64>>,
    pub dual_cosets: Vec<CosetJson>,
    pub pairing_table: PairingTable,
}

pub fn group_report(input: &GroupInput) -> CliResult<GroupReport> {
    check_version(input.spec_version)?;
    let d = duality_from(&input.group, &input.subgroup)?;
    let g = d.group();
    let cosets = (0..d.quotient().len())
        .map(|c| CosetJson {
            representative: d.quotient().representative(c).0.clone(),
            members: d.quotient().members(c).into_iter().map(|m| m.0).collect(),
        })
        .collect();
    let dual_cosets = (0..d.dual_quotient().len())
        .map(|c| CosetJson {
            representative: d.dual_quotient().representative(c).0.clone(),
            members: d.dual_quotient().members(c).into_iter().map(|m| m.0).collect(),
        })
        .collect();
    let characters: Vec<DualCharacter> = g.elements();
    let generators: Vec<GroupElement> = (0..g.rank())
        .map(|i| {
            let mut c = vec![0; g.rank()];
            c[i] = 1 % g.factors()[i];
            GroupElement(c)
        })
        .collect();
    let values = characters
        .iter()
        .map(|x| {
            generators
                .iter()
                .map(|e| crate::group::pairing(g, x, e))
                .collect::<crate::Result<Vec<_>>>()
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(GroupReport {
        spec_version: SPEC_VERSION,
        group: g.clone(),
        order: g.order(),
        subgroup: d.subgroup().elements().iter().map(|h| h.0.clone()).collect(),
        cosets,
        annihilator: d.annihilator().elements().iter().map(|y| y.0.clone()).collect(),
        dual_cosets,
        pairing_table: PairingTable {
            characters: characters.into_iter().map(|x| x.0).collect(),
            generators: generators.into_iter().map(|e| e.0).collect(),
            values,
        },
    })
}

pub fn cmd_group(path: &Path) -> CliResult<Output> {
    let input: GroupInput = read_json(path)?;
    Ok(Output::ok(to_json(&group_report(&input)?)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub sector: usize,
    pub point: Vec<u64>,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub spec_version: u32,
    pub dim: usize,
    pub cosets: usize,
    pub e_dim: usize,
    pub nu_u: MeasureJson,
    pub nu_u_tilde: MeasureJson,
    pub densities: Vec<Density>,
}

pub fn build_report(povm: &CovariantPovm) -> BuildReport {
    let d = povm.duality();
    let rep = povm.rep();
    let mut densities = Vec::new();
    for k in 0..rep.sector_count() {
        for (&x, &alpha) in rep.support(k).iter().zip(povm.densities(k)) {
            densities.push(Density {
                sector: k,
                point: d.group().at::<DualCharacter>(x).0,
                alpha,
            });
        }
    }
    BuildReport {
        spec_version: SPEC_VERSION,
        dim: rep.dim(),
        cosets: d.quotient_order(),
        e_dim: povm.e_dim(),
        nu_u: MeasureJson::from_measure(d, povm.nu_u()),
        nu_u_tilde: MeasureJson::from_measure(d, povm.nu_u_tilde()),
        densities,
    }
}

pub fn cmd_build(path: &Path) -> CliResult<Output> {
    let scenario: Scenario = read_json(path)?;
    let povm = scenario.build()?;
    Ok(Output::ok(to_json(&build_report(&povm))))
}

fn read_omega(path: &Path, cosets: usize) -> CliResult<QuotientFunction> {
    let omega: OmegaJson = read_json(path)?;
    if omega.values.len() != cosets {
        return Err(Error::FunctionLength {
            expected: cosets,
            found: omega.values.len(),
        }
        .into());
    }
    Ok(QuotientFunction::new(omega.values))
}

/// Random test functions for the oracle comparison.
const ORACLE_SAMPLES: usize = 10;

/// Largest deviation between the formula and the compression oracle over the
/// coset indicators, `extra`, and seeded random functions.
pub fn oracle_check(povm: &CovariantPovm, extra: Option<&QuotientFunction>, tolerance: f64) -> CliResult<CheckResult> {
    let oracle = CompressionOracle::new(povm)?;
    let n = povm.duality().quotient_order();
    let mut omegas: Vec<QuotientFunction> = (0..n).map(|c| QuotientFunction::indicator(n, &[c])).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a11ce);
    for _ in 0..ORACLE_SAMPLES {
        omegas.push(QuotientFunction::new(
            (0..n)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        ));
    }
    omegas.extend(extra.cloned());
    let mut worst = 0.0f64;
    for w in &omegas {
        worst = worst.max(povm.apply(w)?.max_deviation(&oracle.compress(w)?));
    }
    Ok(CheckResult::new("oracle", worst, tolerance))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub spec_version: u32,
    pub pass: bool,
    pub tolerance: f64,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyArgs<'a> {
    pub omega: Option<&'a Path>,
    pub dump_matrices: Option<&'a Path>,
    pub tolerance: Option<f64>,
}

/// Runs the axiom, covariance and oracle checks. With `dump_matrices`, writes
/// `effect_<c>.json` per coset, `intertwiner.json`, and `omega.json` when
/// `omega` is given.
pub fn cmd_verify(path: &Path, args: &VerifyArgs<'_>) -> CliResult<Output> {
    let tolerance = args.tolerance.unwrap_or(crate::povm::DEFAULT_TOLERANCE);
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(CliError::input(format!("invalid tolerance {tolerance}")));
    }
    let scenario: Scenario = read_json(path)?;
    let povm = scenario.build()?;
    let n = povm.duality().quotient_order();
    let omega = args.omega.map(|p| read_omega(p, n)).transpose()?;

    let opts = VerifyOptions {
        tolerance,
        ..VerifyOptions::default()
    };
    let mut report: VerificationReport = verify_axioms(&povm, &opts);
    report.extend(verify_covariance(&povm, &opts));
    report.checks.push(oracle_check(&povm, omega.as_ref(), tolerance)?);

    if let Some(dir) = args.dump_matrices {
        fs::create_dir_all(dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
        for c in 0..n {
            let m = povm.operator(&QuotientFunction::indicator(n, &[c]))?;
            write_file(
                &dir.join(format!("effect_{c}.json")),
                &to_json(&DenseMatrixJson::from_matrix(&m)),
            )?;
        }
        write_file(
            &dir.join("intertwiner.json"),
            &to_json(&DenseMatrixJson::from_matrix(&povm.intertwiner_matrix())),
        )?;
        if let Some(w) = &omega {
            write_file(
                &dir.join("omega.json"),
                &to_json(&DenseMatrixJson::from_matrix(&povm.operator(w)?)),
            )?;
        }
    }

    let out = VerifyReport {
        spec_version: SPEC_VERSION,
        pass: report.pass(),
        tolerance,
        checks: report.checks,
    };
    Ok(Output {
        stdout: to_json(&out),
        code: if out.pass { EXIT_OK } else { EXIT_VERIFY_FAILED },
    })
}

/// `M(ω)` in the orthonormal basis; `ω ≡ 1` when no file is given.
pub fn cmd_matrix(path: &Path, omega: Option<&Path>) -> CliResult<Output> {
    let scenario: Scenario = read_json(path)?;
    let povm = scenario.build()?;
    let n = povm.duality().quotient_order();
    let w = match omega {
        Some(p) => read_omega(p, n)?,
        None => QuotientFunction::constant(n, C64::new(1.0, 0.0)),
    };
    Ok(Output::ok(to_json(&DenseMatrixJson::from_matrix(&povm.operator(&w)?))))
}

#[derive(Debug, Clone)]
pub struct SampleArgs<'a> {
    pub state: &'a Path,
    pub partition: Option<&'a Path>,
    pub count: usize,
    pub seed: u64,
    pub execution: Execution,
}

/// CSV `outcome,count`, one row per partition block. `count = 0` prints the
/// header only.
pub fn cmd_sample(path: &Path, args: &SampleArgs<'_>) -> CliResult<Output> {
    let scenario: Scenario = read_json(path)?;
    let state: StateJson = read_json(args.state)?;
    let povm = scenario.build()?;
    let n = povm.duality().quotient_order();
    let blocks = match args.partition {
        Some(p) => read_json::<PartitionJson>(p)?.blocks,
        None => (0..n).map(|c| vec![c]).collect(),
    };
    validate_partition(n, &blocks)?;
    let probabilities = born_distribution(&state.amplitudes, &povm, &blocks)?;
    let mut csv = String::from("outcome,count\n");
    if args.count > 0 {
        let counts = sample_distribution(&probabilities, args.count, args.seed, args.execution);
        for (i, c) in counts.iter().enumerate() {
            csv.push_str(&format!("{i},{c}\n"));
        }
    }
    Ok(Output::ok(csv))
}
