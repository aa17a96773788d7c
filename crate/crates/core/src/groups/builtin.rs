use num_integer::Integer;

use super::{generate_group, FiniteMatrixGroup, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};
use crate::linalg::CycMatrix;
use crate::numbers::{lcm, CycNum};
use crate::rep::Irrep;

/// Built-in group families that come with a verified table of irreducible
/// matrix representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinGroup {
    /// `⟨diag(ζ_m^{w_1}, …, ζ_m^{w_k})⟩` with its `m` characters `g ↦ ζ_m^j`.
    CyclicDiagonal { m: u64, weights: Vec<i64> },
    /// Binary dihedral group of order `4l` inside `SL_2`, generated by
    /// `diag(ζ_{2l}, ζ_{2l}^{-1})` and `[[0, 1], [-1, 0]]`.
    BinaryDihedral { l: u64 },
}

fn diag(entries: Vec<CycNum>) -> CycMatrix {
    let n = entries.len();
    let mut m = CycMatrix::zeros(n, n);
    for (i, x) in entries.into_iter().enumerate() {
        m.set(i, i, x);
    }
    m
}

fn one_by_one(x: CycNum) -> CycMatrix {
    CycMatrix::scalar(1, x)
}

pub fn builtin_group(kind: &BuiltinGroup) -> Result<(FiniteMatrixGroup, Vec<Irrep>)> {
    match kind {
        BuiltinGroup::CyclicDiagonal { m, weights } => cyclic_diagonal(*m, weights),
        BuiltinGroup::BinaryDihedral { l } => binary_dihedral(*l),
    }
}

fn cyclic_diagonal(m: u64, weights: &[i64]) -> Result<(FiniteMatrixGroup, Vec<Irrep>)> {
    if m == 0 || weights.is_empty() {
        return Err(Error::InvalidParameter("cyclic_diagonal needs m >= 1 and at least one weight".into()));
    }
    let g = weights.iter().fold(m as i64, |acc, &w| acc.gcd(&w));
    if g != 1 {
        return Err(Error::InvalidParameter(format!(
            "weights {weights:?} generate a group of order {} rather than {m}",
            m as i64 / g
        )));
    }
    let generator =
        diag(weights.iter().map(|&w| CycNum::root_of_unity(m, w)).collect::<Result<_>>()?);
    let generators = if m == 1 { Vec::new() } else { vec![generator] };
    let group = generate_group(weights.len(), &generators, DEFAULT_ORDER_CAP)?;
    let irreps = (0..m as usize)
        .map(|j| {
            let images = if m == 1 {
                Vec::new()
            } else {
                vec![one_by_one(CycNum::root_of_unity(m, j as i64)?)]
            };
            Irrep::from_generator_images(&group, j, 1, &images)
        })
        .collect::<Result<_>>()?;
    Ok((group, irreps))
}

fn binary_dihedral(l: u64) -> Result<(FiniteMatrixGroup, Vec<Irrep>)> {
    if l == 0 {
        return Err(Error::InvalidParameter("binary_dihedral needs l >= 1".into()));
    }
    let n2 = 2 * l;
    let conductor = if l % 2 == 0 { n2 } else { lcm(n2, 4) };
    let a = diag(vec![CycNum::root_of_unity(n2, 1)?, CycNum::root_of_unity(n2, -1)?]);
    let b = CycMatrix::from_rows(vec![
        vec![CycNum::zero(), CycNum::one()],
        vec![CycNum::from_int(-1), CycNum::zero()],
    ])?;
    let group = generate_group(2, &[a.lift(conductor)?, b.lift(conductor)?], DEFAULT_ORDER_CAP)?;

    // b ↦ c on the sign characters with a ↦ -1, where c² = (-1)^l.
    let c = if l % 2 == 0 { CycNum::one() } else { CycNum::root_of_unity(4, 1)? };
    let mut images: Vec<(usize, Vec<CycMatrix>)> = vec![
        (1, vec![one_by_one(CycNum::one()), one_by_one(CycNum::one())]),
        (1, vec![one_by_one(CycNum::one()), one_by_one(CycNum::from_int(-1))]),
    ];
    for k in 1..l as i64 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let bk = CycMatrix::from_rows(vec![
            vec![CycNum::zero(), CycNum::one()],
            vec![CycNum::from_int(sign), CycNum::zero()],
        ])?;
        images.push((
            2,
            vec![diag(vec![CycNum::root_of_unity(n2, k)?, CycNum::root_of_unity(n2, -k)?]), bk],
        ));
    }
    images.push((1, vec![one_by_one(CycNum::from_int(-1)), one_by_one(c.clone())]));
    images.push((1, vec![one_by_one(CycNum::from_int(-1)), one_by_one(-c)]));

    let irreps = images
        .into_iter()
        .enumerate()
        .map(|(j, (dim, imgs))| {
            let imgs: Vec<CycMatrix> = imgs.iter().map(|m| m.lift(conductor)).collect::<Result<_>>()?;
            Irrep::from_generator_images(&group, j, dim, &imgs)
        })
        .collect::<Result<_>>()?;
    Ok((group, irreps))
}
