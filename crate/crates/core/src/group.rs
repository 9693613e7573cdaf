//! Finite Abelian groups `Z_{n_1} x ... x Z_{n_r}`, their duals, subgroups,
//! annihilators and quotients.
//!
//! The dual group is presented with the same factors; a character `x` acts on
//! `g` through `exp(2πi Σ_j x_j g_j / n_j)`. Elements are enumerated in
//! lexicographic order (first coordinate most significant), which is also the
//! order of [`FiniteAbelianGroup::index_of`].

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, C64};

/// Coordinate tuples living either in `G` or in its dual.
pub trait Coordinates: Clone + Eq + Ord + Hash + Debug + Send + Sync {
    /// The other side of the duality.
    type Dual: Coordinates<Dual = Self>;

    fn from_coords(coords: Vec<u64>) -> Self;
    fn coords(&self) -> &[u64];
}

/// Element of `G`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

/// Character of `G`, i.e. element of the dual group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualCharacter(pub Vec<u64>);

impl Coordinates for GroupElement {
    type Dual = DualCharacter;
    fn from_coords(coords: Vec<u64>) -> Self {
        GroupElement(coords)
    }
    fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl Coordinates for DualCharacter {
    type Dual = GroupElement;
    fn from_coords(coords: Vec<u64>) -> Self {
        DualCharacter(coords)
    }
    fn coords(&self) -> &[u64] {
        &self.0
    }
}

/// `Z_{n_1} x ... x Z_{n_r}`. The empty product is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpec", into = "GroupSpec")]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: usize,
    exponent: u64,
}

/// JSON form of a group: `{"factors":[12]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub factors: Vec<u64>,
}

impl TryFrom<GroupSpec> for FiniteAbelianGroup {
    type Error = Error;
    fn try_from(spec: GroupSpec) -> Result<Self> {
        FiniteAbelianGroup::new(spec.factors)
    }
}

impl From<FiniteAbelianGroup> for GroupSpec {
    fn from(g: FiniteAbelianGroup) -> Self {
        GroupSpec { factors: g.factors }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&n| n == 0) {
            return Err(Error::InvalidFactor(bad));
        }
        let order = factors.iter().map(|&n| n as usize).product();
        let exponent = factors.iter().fold(1, |l, &n| l / gcd(l, n) * n);
        Ok(Self {
            factors,
            order,
            exponent,
        })
    }

    /// Cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Validates that `coords` lies in the group without reducing.
    pub fn check<T: Coordinates>(&self, t: &T) -> Result<()> {
        let c = t.coords();
        if c.len() != self.rank() {
            return Err(Error::ShapeMismatch {
                expected: self.rank(),
                found: c.len(),
            });
        }
        for (position, (&value, &modulus)) in c.iter().zip(&self.factors).enumerate() {
            if value >= modulus {
                return Err(Error::CoordinateOutOfRange {
                    position,
                    value,
                    modulus,
                });
            }
        }
        Ok(())
    }

    /// Builds a validated element from raw coordinates.
    pub fn element(&self, coords: &[u64]) -> Result<GroupElement> {
        let g = GroupElement(coords.to_vec());
        self.check(&g)?;
        Ok(g)
    }

    /// Builds a validated character from raw coordinates.
    pub fn character(&self, coords: &[u64]) -> Result<DualCharacter> {
        let x = DualCharacter(coords.to_vec());
        self.check(&x)?;
        Ok(x)
    }

    /// Reduces arbitrary signed coordinates modulo the factors.
    pub fn reduce<T: Coordinates>(&self, coords: &[i64]) -> Result<T> {
        if coords.len() != self.rank() {
            return Err(Error::ShapeMismatch {
                expected: self.rank(),
                found: coords.len(),
            });
        }
        Ok(T::from_coords(
            coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn zero<T: Coordinates>(&self) -> T {
        T::from_coords(vec![0; self.rank()])
    }

    pub fn add<T: Coordinates>(&self, a: &T, b: &T) -> T {
        T::from_coords(
            a.coords()
                .iter()
                .zip(b.coords())
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg<T: Coordinates>(&self, a: &T) -> T {
        T::from_coords(
            a.coords()
                .iter()
                .zip(&self.factors)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        )
    }

    pub fn sub<T: Coordinates>(&self, a: &T, b: &T) -> T {
        self.add(a, &self.neg(b))
    }

    /// Position of `t` in the lexicographic enumeration.
    pub fn index_of<T: Coordinates>(&self, t: &T) -> usize {
        t.coords()
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn at<T: Coordinates>(&self, mut index: usize) -> T {
        let mut coords = vec![0u64; self.rank()];
        for (slot, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (index % n as usize) as u64;
            index /= n as usize;
        }
        T::from_coords(coords)
    }

    /// All elements in lexicographic order.
    pub fn elements<T: Coordinates>(&self) -> Vec<T> {
        (0..self.order).map(|i| self.at(i)).collect()
    }

    /// Exponent `k` modulo the group exponent `L` such that the pairing of
    /// `a` and `b` equals `exp(2πi k / L)`.
    pub fn pairing_exponent(&self, a: &[u64], b: &[u64]) -> u64 {
        let l = self.exponent;
        a.iter().zip(b).zip(&self.factors).fold(0u64, |acc, ((&x, &g), &n)| {
            let term = ((x % n) * (g % n)) % n;
            (acc + term * (l / n)) % l
        })
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Unchecked pairing of coordinates on opposite sides of the duality.
    pub(crate) fn phase(&self, a: &[u64], b: &[u64]) -> C64 {
        root_of_unity(self.pairing_exponent(a, b), self.exponent)
    }

    /// True when the pairing of `a` and `b` is exactly 1.
    pub fn pairs_trivially(&self, a: &[u64], b: &[u64]) -> bool {
        self.pairing_exponent(a, b) == 0
    }
}

/// The canonical pairing `⟨x, g⟩ = exp(2πi Σ_j x_j g_j / n_j)`.
pub fn pairing(group: &FiniteAbelianGroup, x: &DualCharacter, g: &GroupElement) -> Result<C64> {
    group.check(x)?;
    group.check(g)?;
    Ok(group.phase(&x.0, &g.0))
}

/// Subgroup of `G` (or of the dual, depending on `T`), stored as the full
/// sorted element list plus a membership table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup<T: Coordinates = GroupElement> {
    parent: FiniteAbelianGroup,
    generators: Vec<T>,
    elements: Vec<T>,
    member: Vec<bool>,
}

pub type DualSubgroup = Subgroup<DualCharacter>;

impl<T: Coordinates> Subgroup<T> {
    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[T] {
        &self.generators
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, t: &T) -> bool {
        self.parent.check(t).is_ok() && self.member[self.parent.index_of(t)]
    }

    /// Membership by element index in the parent enumeration.
    pub fn contains_index(&self, index: usize) -> bool {
        self.member[index]
    }

    fn from_member(parent: FiniteAbelianGroup, generators: Vec<T>, member: Vec<bool>) -> Self {
        let elements = member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| parent.at(i))
            .collect();
        Self {
            parent,
            generators,
            elements,
            member,
        }
    }

    /// Subgroup given by an already closed element set. Generators are picked
    /// greedily so that they generate exactly this set.
    fn from_closed_set(parent: FiniteAbelianGroup, member: Vec<bool>) -> Self {
        let mut generated = vec![false; parent.order()];
        generated[0] = true;
        let mut generators = Vec::new();
        for i in 0..parent.order() {
            if member[i] && !generated[i] {
                let g: T = parent.at(i);
                close_over(&parent, &mut generated, std::slice::from_ref(&g));
                generators.push(g);
            }
        }
        Self::from_member(parent, generators, member)
    }
}

/// Extends the closed set `member` by `gens`, in place.
fn close_over<T: Coordinates>(group: &FiniteAbelianGroup, member: &mut [bool], gens: &[T]) {
    let mut frontier: Vec<usize> = (0..member.len()).filter(|&i| member[i]).collect();
    while let Some(i) = frontier.pop() {
        let e: T = group.at(i);
        for g in gens {
            let j = group.index_of(&group.add(&e, g));
            if !member[j] {
                member[j] = true;
                frontier.push(j);
            }
        }
    }
}

/// Closure of `gens` under the group law.
pub fn subgroup_from_generators<T: Coordinates>(group: &FiniteAbelianGroup, gens: &[T]) -> Result<Subgroup<T>> {
    for g in gens {
        group.check(g)?;
    }
    let mut member = vec![false; group.order()];
    member[0] = true;
    close_over(group, &mut member, gens);
    Ok(Subgroup::from_member(group.clone(), gens.to_vec(), member))
}

/// `{ y : ⟨y, h⟩ = 1 for all h in H }`, living on the other side of the duality.
pub fn annihilator<T: Coordinates>(group: &FiniteAbelianGroup, h: &Subgroup<T>) -> Result<Subgroup<T::Dual>> {
    if h.parent() != group {
        return Err(Error::GroupMismatch {
            left: group.factors().to_vec(),
            right: h.parent().factors().to_vec(),
        });
    }
    // Trivial on the generators iff trivial on the generated subgroup.
    let member = (0..group.order())
        .map(|i| {
            let y: T::Dual = group.at(i);
            h.generators()
                .iter()
                .all(|g| group.pairs_trivially(y.coords(), g.coords()))
        })
        .collect();
    Ok(Subgroup::from_closed_set(group.clone(), member))
}

/// `G/H` with lexicographically smallest coset representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGroup<T: Coordinates = GroupElement> {
    subgroup: Subgroup<T>,
    representatives: Vec<T>,
    projection: Vec<usize>,
}

impl<T: Coordinates> QuotientGroup<T> {
    pub fn parent(&self) -> &FiniteAbelianGroup {
        self.subgroup.parent()
    }

    pub fn subgroup(&self) -> &Subgroup<T> {
        &self.subgroup
    }

    /// Number of cosets.
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representatives(&self) -> &[T] {
        &self.representatives
    }

    pub fn representative(&self, coset: usize) -> &T {
        &self.representatives[coset]
    }

    /// Coset index table over the parent enumeration.
    pub fn projection_table(&self) -> &[usize] {
        &self.projection
    }

    /// Coset of `t`.
    pub fn project(&self, t: &T) -> usize {
        self.projection[self.parent().index_of(t)]
    }

    pub fn project_index(&self, index: usize) -> usize {
        self.projection[index]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let g = self.parent();
        self.project(&g.add(&self.representatives[a], &self.representatives[b]))
    }

    pub fn neg(&self, a: usize) -> usize {
        self.project(&self.parent().neg(&self.representatives[a]))
    }

    /// The action `a[ġ] = (a + g)·`.
    pub fn act(&self, a: &T, coset: usize) -> usize {
        self.project(&self.parent().add(a, &self.representatives[coset]))
    }

    /// Elements of the coset, in lexicographic order.
    pub fn members(&self, coset: usize) -> Vec<T> {
        let g = self.parent();
        self.projection
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == coset)
            .map(|(i, _)| g.at(i))
            .collect()
    }

    pub fn check_coset(&self, coset: usize) -> Result<()> {
        if coset >= self.len() {
            return Err(Error::CosetOutOfRange {
                index: coset,
                count: self.len(),
            });
        }
        Ok(())
    }
}

/// Enumerates the cosets of `H` in `G`.
pub fn quotient<T: Coordinates>(group: &FiniteAbelianGroup, h: &Subgroup<T>) -> Result<QuotientGroup<T>> {
    if h.parent() != group {
        return Err(Error::GroupMismatch {
            left: group.factors().to_vec(),
            right: h.parent().factors().to_vec(),
        });
    }
    let mut projection = vec![usize::MAX; group.order()];
    let mut representatives = Vec::new();
    for i in 0..group.order() {
        if projection[i] != usize::MAX {
            continue;
        }
        let coset = representatives.len();
        let rep: T = group.at(i);
        for e in h.elements() {
            projection[group.index_of(&group.add(&rep, e))] = coset;
        }
        representatives.push(rep);
    }
    Ok(QuotientGroup {
        subgroup: h.clone(),
        representatives,
        projection,
    })
}

/// `⟨y, ġ⟩ := ⟨y, g⟩` for `y` in the annihilator of the subgroup of `q`.
pub fn quotient_pairing(q: &QuotientGroup<GroupElement>, y: &DualCharacter, coset: usize) -> Result<C64> {
    let g = q.parent();
    g.check(y)?;
    q.check_coset(coset)?;
    let trivial = q.subgroup().generators().iter().all(|h| g.pairs_trivially(&y.0, &h.0));
    if !trivial {
        return Err(Error::NotInAnnihilator(y.0.clone()));
    }
    Ok(g.phase(&y.0, &q.representative(coset).0))
}

/// All the group data attached to a pair `H ⊂ G`: the quotient `G/H`, the
/// annihilator `H^⊥ ⊂ Ĝ` and the dual quotient `Ĝ/H^⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Duality {
    group: FiniteAbelianGroup,
    quotient: QuotientGroup<GroupElement>,
    annihilator: DualSubgroup,
    dual_quotient: QuotientGroup<DualCharacter>,
    annihilator_position: Vec<Option<usize>>,
}

impl Duality {
    pub fn new(group: FiniteAbelianGroup, subgroup: Subgroup<GroupElement>) -> Result<Self> {
        let quotient = quotient(&group, &subgroup)?;
        let annihilator = annihilator(&group, &subgroup)?;
        let dual_quotient = self::quotient(&group, &annihilator)?;
        let mut annihilator_position = vec![None; group.order()];
        for (pos, y) in annihilator.elements().iter().enumerate() {
            annihilator_position[group.index_of(y)] = Some(pos);
        }
        Ok(Self {
            group,
            quotient,
            annihilator,
            dual_quotient,
            annihilator_position,
        })
    }

    /// Duality for the subgroup generated by `gens`.
    pub fn from_generators(group: FiniteAbelianGroup, gens: &[GroupElement]) -> Result<Self> {
        let h = subgroup_from_generators(&group, gens)?;
        Self::new(group, h)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup<GroupElement> {
        self.quotient.subgroup()
    }

    pub fn quotient(&self) -> &QuotientGroup<GroupElement> {
        &self.quotient
    }

    pub fn annihilator(&self) -> &DualSubgroup {
        &self.annihilator
    }

    pub fn dual_quotient(&self) -> &QuotientGroup<DualCharacter> {
        &self.dual_quotient
    }

    /// Position of a dual element (by index) inside the annihilator list.
    pub fn annihilator_position(&self, dual_index: usize) -> Option<usize> {
        self.annihilator_position[dual_index]
    }

    /// `|G/H|`.
    pub fn quotient_order(&self) -> usize {
        self.quotient.len()
    }

    /// `⟨y, ġ⟩` with `y` given by its position in the annihilator list.
    pub fn quotient_phase(&self, annihilator_pos: usize, coset: usize) -> C64 {
        self.group.phase(
            &self.annihilator.elements()[annihilator_pos].0,
            &self.quotient.representative(coset).0,
        )
    }

    pub fn quotient_pairing(&self, y: &DualCharacter, coset: usize) -> Result<C64> {
        quotient_pairing(&self.quotient, y, coset)
    }
}
