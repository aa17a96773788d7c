//! Irreducible matrix representations, characters and their symmetric and
//! exterior powers.

mod hom;

pub use hom::{EquivariantContext, HomKey, HomSpaceBasis, Monomials};

use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;
use crate::linalg::CycMatrix;
use crate::numbers::{lcm, rat_int, CycNum, Rat};

/// An irreducible representation given by one matrix per group element.
#[derive(Clone, Debug, PartialEq)]
pub struct Irrep {
    index: usize,
    dim: usize,
    name: String,
    matrices: Vec<CycMatrix>,
}

impl Irrep {
    pub fn from_matrices(index: usize, matrices: Vec<CycMatrix>) -> Result<Self> {
        let dim = matrices.first().map_or(0, CycMatrix::rows);
        if dim == 0 || matrices.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("irrep {index} has inconsistent matrix sizes")));
        }
        Ok(Irrep { index, dim, name: format!("rho_{index}"), matrices })
    }

    /// Extends images of the group generators to every element along the
    /// group's spanning tree. Multiplicativity is not assumed; run
    /// [`verify_irreps`] to check it.
    pub fn from_generator_images(
        group: &FiniteMatrixGroup,
        index: usize,
        dim: usize,
        images: &[CycMatrix],
    ) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::DimensionMismatch(format!(
                "irrep {index}: {} generator images for {} generators",
                images.len(),
                group.generators().len()
            )));
        }
        if dim == 0 || images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!("irrep {index}: images must be {dim}x{dim}")));
        }
        let conductor = images.iter().fold(group.conductor(), |acc, m| lcm(acc, m.conductor()));
        let images: Vec<CycMatrix> = images.iter().map(|m| m.lift(conductor)).collect::<Result<_>>()?;
        let mut mats: Vec<Option<CycMatrix>> = vec![None; group.order()];
        for &x in group.discovery_order() {
            mats[x] = Some(match group.spanning(x) {
                None => CycMatrix::identity(dim).lift(conductor)?,
                Some((p, g)) => mats[p].as_ref().expect("parent precedes child").try_mul(&images[g])?,
            });
        }
        let matrices = mats.into_iter().map(|m| m.expect("every element is reached")).collect();
        Self::from_matrices(index, matrices)
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self, element: usize) -> &CycMatrix {
        &self.matrices[element]
    }

    pub fn matrices(&self) -> &[CycMatrix] {
        &self.matrices
    }

    pub fn character(&self, group: &FiniteMatrixGroup) -> CharacterVec {
        CharacterVec::new(
            (0..group.class_count()).map(|c| self.matrices[group.class_rep(c)].trace()).collect(),
        )
    }
}

/// A class function, one value per conjugacy class in the group's class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterVec {
    values: Vec<CycNum>,
}

impl CharacterVec {
    pub fn new(values: Vec<CycNum>) -> Self {
        CharacterVec { values }
    }

    pub fn trivial(group: &FiniteMatrixGroup) -> Self {
        Self::constant(group, CycNum::one())
    }

    pub fn zero(group: &FiniteMatrixGroup) -> Self {
        Self::constant(group, CycNum::zero())
    }

    fn constant(group: &FiniteMatrixGroup, v: CycNum) -> Self {
        CharacterVec { values: vec![v; group.class_count()] }
    }

    /// Character of the defining matrix representation.
    pub fn defining(group: &FiniteMatrixGroup) -> Self {
        Self::new((0..group.class_count()).map(|c| group.element(group.class_rep(c)).trace()).collect())
    }

    /// Character of the permutation action on the group by left translation.
    pub fn regular(group: &FiniteMatrixGroup) -> Self {
        let mut values = vec![CycNum::zero(); group.class_count()];
        values[0] = CycNum::from_int(group.order() as i64);
        CharacterVec { values }
    }

    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the identity class.
    pub fn degree(&self) -> Result<i64> {
        let v = self.values[0]
            .as_rat()
            .ok_or_else(|| Error::NonIntegral(self.values[0].to_string()))?;
        crate::numbers::rat_to_i64(v)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(CycNum::is_zero)
    }

    pub fn conjugate(&self) -> Self {
        CharacterVec { values: self.values.iter().map(CycNum::conjugate).collect() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CycNum, &CycNum) -> CycNum) -> Self {
        assert_eq!(self.len(), other.len(), "class functions on different groups");
        CharacterVec { values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = rat_int(k);
        CharacterVec { values: self.values.iter().map(|v| v.scale(&k)).collect() }
    }
}

/// `(1/|G|) Σ_g χ1(g) · conj(χ2(g))`.
pub fn character_inner_product(
    group: &FiniteMatrixGroup,
    chi1: &CharacterVec,
    chi2: &CharacterVec,
) -> Result<Rat> {
    let k = group.class_count();
    for chi in [chi1, chi2] {
        if chi.len() != k {
            return Err(Error::GroupMismatch(chi.len(), k));
        }
    }
    let mut acc = CycNum::zero();
    for (c, size) in group.class_sizes().into_iter().enumerate() {
        let term = chi1.values[c].try_mul(&chi2.values[c].conjugate())?;
        acc = acc.try_add(&term.scale(&rat_int(size as i64)))?;
    }
    let acc = acc.scale(&Rat::new(1.into(), (group.order() as i64).into()));
    acc.as_rat()
        .cloned()
        .ok_or_else(|| Error::NonIntegral(format!("inner product {acc} is not rational")))
}

/// Integer multiplicity `⟨χ1, χ2⟩`.
pub fn multiplicity(group: &FiniteMatrixGroup, chi1: &CharacterVec, chi2: &CharacterVec) -> Result<i64> {
    crate::numbers::rat_to_i64(&character_inner_product(group, chi1, chi2)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrepReport {
    pub passed: bool,
    /// First counterexample, or a summary when everything passed.
    pub message: String,
    pub dims: Vec<usize>,
}

/// Checks that `irreps` is a complete list of pairwise non-isomorphic
/// irreducible representations of `group` with `rho_0` trivial.
pub fn verify_irreps(group: &FiniteMatrixGroup, irreps: &[Irrep]) -> IrrepReport {
    let dims: Vec<usize> = irreps.iter().map(Irrep::dim).collect();
    let fail = |message: String| IrrepReport { passed: false, message, dims: dims.clone() };
    let Some(first) = irreps.first() else {
        return fail("no irreducible representations supplied".into());
    };
    if first.dim != 1 || first.matrices.iter().any(|m| !m.get(0, 0).is_one()) {
        return fail("rho_0 is not the trivial representation".into());
    }
    let n = group.order();
    for rho in irreps {
        if rho.matrices.len() != n {
            return fail(format!("{} has {} matrices for {} elements", rho.name, rho.matrices.len(), n));
        }
        if rho.matrices[0] != CycMatrix::identity(rho.dim) {
            return fail(format!("{} does not send the identity to the identity", rho.name));
        }
        for a in 0..n {
            for b in 0..n {
                let prod = match rho.matrices[a].try_mul(&rho.matrices[b]) {
                    Ok(p) => p,
                    Err(e) => return fail(format!("{}: {e}", rho.name)),
                };
                if prod != rho.matrices[group.mul(a, b)] {
                    return fail(format!("{} is not multiplicative at elements ({a}, {b})", rho.name));
                }
            }
        }
    }
    let chars: Vec<CharacterVec> = irreps.iter().map(|r| r.character(group)).collect();
    for i in 0..chars.len() {
        for j in i..chars.len() {
            let ip = match character_inner_product(group, &chars[i], &chars[j]) {
                Ok(v) => v,
                Err(e) => return fail(e.to_string()),
            };
            let expected = rat_int(i64::from(i == j));
            if ip != expected {
                return fail(format!("<chi_{i}, chi_{j}> = {ip}, expected {expected}"));
            }
        }
    }
    let total: usize = dims.iter().map(|d| d * d).sum();
    if total != n {
        return fail(format!("sum of squared dimensions is {total}, group order is {n}"));
    }
    IrrepReport { passed: true, message: format!("{} irreps, sum of squares {total}", irreps.len()), dims }
}

/// `[χ(g^k)]` indexed by class, for `k = 1..=m`.
fn power_values(group: &FiniteMatrixGroup, chi: &CharacterVec, m: usize) -> Vec<Vec<CycNum>> {
    (1..=m as i64)
        .map(|k| (0..group.class_count()).map(|c| chi.values[group.power_class(c, k)].clone()).collect())
        .collect()
}

/// Newton recursion shared by symmetric (`sign = +1`) and exterior
/// (`sign = -1`) powers.
fn newton(group: &FiniteMatrixGroup, chi: &CharacterVec, m: usize, alternating: bool) -> Vec<CharacterVec> {
    let pw = power_values(group, chi, m);
    let mut out = vec![CharacterVec::trivial(group)];
    for j in 1..=m {
        let values = (0..group.class_count())
            .map(|c| {
                let mut acc = CycNum::zero();
                for k in 1..=j {
                    let term = &pw[k - 1][c] * &out[j - k].values[c];
                    if alternating && k % 2 == 0 {
                        acc -= &term;
                    } else {
                        acc += &term;
                    }
                }
                acc.scale(&Rat::new(1.into(), (j as i64).into()))
            })
            .collect();
        out.push(CharacterVec::new(values));
    }
    out
}

/// Characters of `Sym^0 .. Sym^m` of the representation with character `chi`.
pub fn sym_power_characters(group: &FiniteMatrixGroup, chi: &CharacterVec, m: usize) -> Vec<CharacterVec> {
    newton(group, chi, m, false)
}

pub fn sym_power_character(group: &FiniteMatrixGroup, chi: &CharacterVec, m: usize) -> CharacterVec {
    newton(group, chi, m, false).pop().expect("non-empty")
}

pub fn ext_power_character(group: &FiniteMatrixGroup, chi: &CharacterVec, k: usize) -> CharacterVec {
    newton(group, chi, k, true).pop().expect("non-empty")
}

/// `dim (Sym^m V^∨)^G` for the defining representation `V`.
pub fn molien_dimension(group: &FiniteMatrixGroup, m: usize) -> Result<i64> {
    let dual = CharacterVec::defining(group).conjugate();
    multiplicity(group, &sym_power_character(group, &dual, m), &CharacterVec::trivial(group))
}

/// `dim (Sym^m V^∨)^G` for `m = 0..=max_degree`.
pub fn molien_series(group: &FiniteMatrixGroup, max_degree: usize) -> Result<Vec<i64>> {
    let dual = CharacterVec::defining(group).conjugate();
    let triv = CharacterVec::trivial(group);
    sym_power_characters(group, &dual, max_degree)
        .iter()
        .map(|chi| multiplicity(group, chi, &triv))
        .collect()
}
