//! Cohomology of equivariant line bundles on `P^n = P(V)` and the equivariant
//! K-group spanned by `O(i)⊗ρ_j`, `0 ≤ i ≤ n`.
//!
//! `H^0(O(m)) = Sym^m V^∨` for `m ≥ 0` and `H^n(O(m)) = Sym^{-m-n-1} V ⊗ Λ^{n+1} V`
//! for `m ≤ -n-1`; everything else vanishes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::numbers::rat_to_i64;
use crate::rep::{
    character_inner_product, ext_power_character, multiplicity, CharacterVec, EquivariantContext,
};

/// `O(twist) ⊗ ρ_irrep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EqLineBundle {
    pub twist: i64,
    pub irrep: usize,
}

impl EqLineBundle {
    pub fn new(twist: i64, irrep: usize) -> Self {
        EqLineBundle { twist, irrep }
    }

    pub fn twisted(self, k: i64) -> Self {
        EqLineBundle { twist: self.twist + k, ..self }
    }
}

impl fmt::Display for EqLineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({})@rho_{}", self.twist, self.irrep)
    }
}

/// Integer coordinates over the basis `[O(i)⊗ρ_j]`, `i = 0..=n`, `j = 0..=r`,
/// stored twist-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KClass {
    twists: usize,
    irreps: usize,
    coeffs: Vec<i64>,
}

impl KClass {
    pub fn zero(ctx: &EquivariantContext) -> Self {
        let (twists, irreps) = (ctx.n() + 1, ctx.irrep_count());
        KClass { twists, irreps, coeffs: vec![0; twists * irreps] }
    }

    pub fn basis(ctx: &EquivariantContext, i: usize, j: usize) -> Self {
        let mut k = Self::zero(ctx);
        k.coeffs[i * k.irreps + j] = 1;
        k
    }

    pub fn from_coeffs(ctx: &EquivariantContext, coeffs: Vec<i64>) -> Result<Self> {
        let z = Self::zero(ctx);
        if coeffs.len() != z.coeffs.len() {
            return Err(Error::DimensionMismatch(format!(
                "K-class with {} coordinates, expected {}",
                coeffs.len(),
                z.coeffs.len()
            )));
        }
        Ok(KClass { coeffs, ..z })
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.coeffs[i * self.irreps + j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &KClass) -> KClass {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        self.combine(other, -1)
    }

    /// `self + k·other`.
    pub fn combine(&self, other: &KClass, k: i64) -> KClass {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "K-classes of different ranks");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + k * b).collect();
        KClass { coeffs, ..*self }
    }

    pub fn scale(&self, k: i64) -> KClass {
        KClass { coeffs: self.coeffs.iter().map(|c| c * k).collect(), ..*self }
    }

    pub fn neg(&self) -> KClass {
        self.scale(-1)
    }
}

/// Character of `H^k(O(m))`.
pub fn ext_character(ctx: &EquivariantContext, m: i64, k: usize) -> CharacterVec {
    let n = ctx.n() as i64;
    if k == 0 && m >= 0 {
        ctx.sym_dual_character(m as usize)
    } else if k as i64 == n && m <= -n - 1 {
        ctx.sym_character((-m - n - 1) as usize).mul(&ctx.det_character())
    } else {
        CharacterVec::zero(ctx.group())
    }
}

/// `dim Ext^k(L1, L2)`.
pub fn ext_dim_equivariant(ctx: &EquivariantContext, l1: EqLineBundle, l2: EqLineBundle, k: usize) -> Result<usize> {
    let chi = ext_character(ctx, l2.twist - l1.twist, k);
    if chi.is_zero() {
        return Ok(0);
    }
    let chi = chi.mul(ctx.irrep_character(l2.irrep));
    Ok(multiplicity(ctx.group(), &chi, ctx.irrep_character(l1.irrep))? as usize)
}

/// All nonzero `dim Ext^k(L1, L2)`.
pub fn ext_table(ctx: &EquivariantContext, l1: EqLineBundle, l2: EqLineBundle) -> Result<BTreeMap<i32, usize>> {
    let mut out = BTreeMap::new();
    for k in [0, ctx.n()] {
        let d = ext_dim_equivariant(ctx, l1, l2, k)?;
        if d > 0 {
            out.insert(k as i32, d);
        }
    }
    Ok(out)
}

/// `χ(L1, L2) = Σ_k (-1)^k dim Ext^k(L1, L2)`.
pub fn euler_characteristic(ctx: &EquivariantContext, l1: EqLineBundle, l2: EqLineBundle) -> Result<i64> {
    Ok(ext_table(ctx, l1, l2)?
        .into_iter()
        .map(|(k, d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum())
}

/// Multiplicities of each irrep in a virtual character; fails if the
/// character is not an integer combination of the irreps.
pub fn decompose(ctx: &EquivariantContext, chi: &CharacterVec) -> Result<Vec<i64>> {
    let mut mults = Vec::with_capacity(ctx.irrep_count());
    let mut rebuilt = CharacterVec::zero(ctx.group());
    for j in 0..ctx.irrep_count() {
        let ip = character_inner_product(ctx.group(), chi, ctx.irrep_character(j))?;
        let m = rat_to_i64(&ip)?;
        rebuilt = rebuilt.add(&ctx.irrep_character(j).scale(m));
        mults.push(m);
    }
    if rebuilt != *chi {
        return Err(Error::NonIntegral("class function is not a virtual character".into()));
    }
    Ok(mults)
}

/// Expresses `[O(m) ⊗ W]`, `W` the (virtual) representation with character
/// `chi`, in the basis `[O(i)⊗ρ_j]`, `0 ≤ i ≤ n`, using the Koszul relation
/// `Σ_{k=0}^{n+1} (-1)^k [Λ^k V^∨ ⊗ O(m-k)] = 0`.
pub fn koszul_reduce(ctx: &EquivariantContext, m: i64, chi: &CharacterVec) -> Result<KClass> {
    let n = ctx.n() as i64;
    let g = ctx.group();
    let dual = ctx.v_character().conjugate();
    let lambda: Vec<CharacterVec> = (0..=n as usize + 1).map(|k| ext_power_character(g, &dual, k)).collect();
    let det = ctx.det_character();
    let mut pending: BTreeMap<i64, CharacterVec> = BTreeMap::new();
    pending.insert(m, chi.clone());
    let push = |pending: &mut BTreeMap<i64, CharacterVec>, t: i64, c: CharacterVec| {
        let slot = pending.entry(t).or_insert_with(|| CharacterVec::zero(g));
        *slot = slot.add(&c);
    };
    // Downward: [O(t)⊗W] = Σ_{k=1}^{n+1} (-1)^{k+1} [O(t-k) ⊗ Λ^k V^∨ ⊗ W].
    while let Some((&t, _)) = pending.iter().next_back().filter(|(&t, _)| t > n) {
        let w = pending.remove(&t).expect("present");
        if w.is_zero() {
            continue;
        }
        for k in 1..=n + 1 {
            let term = lambda[k as usize].mul(&w);
            push(&mut pending, t - k, if k % 2 == 1 { term } else { term.scale(-1) });
        }
    }
    // Upward: with W' = W ⊗ det V, Λ^{n+1} V^∨ ⊗ W' = W and
    // (-1)^{n+1} [O(t)⊗W] = -Σ_{k=0}^{n} (-1)^k [O(t+n+1-k) ⊗ Λ^k V^∨ ⊗ W'].
    while let Some((&t, _)) = pending.iter().next().filter(|(&t, _)| t < 0) {
        let w = pending.remove(&t).expect("present");
        if w.is_zero() {
            continue;
        }
        let w = w.mul(&det);
        for k in 0..=n {
            // Overall sign: -(-1)^k / (-1)^{n+1} = (-1)^{k+n}.
            let term = lambda[k as usize].mul(&w);
            push(&mut pending, t + n + 1 - k, if (k + n) % 2 == 0 { term } else { term.scale(-1) });
        }
    }
    let mut out = KClass::zero(ctx);
    for (t, w) in pending {
        for (j, c) in decompose(ctx, &w)?.into_iter().enumerate() {
            out.coeffs[t as usize * out.irreps + j] += c;
        }
    }
    Ok(out)
}

pub fn line_bundle_class(ctx: &EquivariantContext, l: EqLineBundle) -> Result<KClass> {
    let n = ctx.n() as i64;
    if (0..=n).contains(&l.twist) {
        return Ok(KClass::basis(ctx, l.twist as usize, l.irrep));
    }
    koszul_reduce(ctx, l.twist, ctx.irrep_character(l.irrep))
}

/// `χ([O(i)⊗ρ_j], [O(i')⊗ρ_j'])` over the basis, twist-major.
pub fn basis_euler_matrix(ctx: &EquivariantContext) -> Result<IntMatrix> {
    let (t, r) = (ctx.n() + 1, ctx.irrep_count());
    let basis: Vec<EqLineBundle> =
        (0..t).flat_map(|i| (0..r).map(move |j| EqLineBundle::new(i as i64, j))).collect();
    basis
        .iter()
        .map(|&a| basis.iter().map(|&b| euler_characteristic(ctx, a, b)).collect())
        .collect()
}

/// Bilinear Euler pairing against a precomputed basis matrix.
pub fn euler_pairing_with(gram: &IntMatrix, x: &KClass, y: &KClass) -> i64 {
    let mut acc = 0;
    for (a, &xa) in x.coeffs.iter().enumerate() {
        if xa == 0 {
            continue;
        }
        for (b, &yb) in y.coeffs.iter().enumerate() {
            acc += xa * yb * gram[a][b];
        }
    }
    acc
}

pub fn euler_pairing(ctx: &EquivariantContext, x: &KClass, y: &KClass) -> Result<i64> {
    Ok(euler_pairing_with(&basis_euler_matrix(ctx)?, x, y))
}

/// Sum of `(-1)^k χ_{H^k(O(m))}` over all `k`.
pub fn euler_character(ctx: &EquivariantContext, m: i64) -> CharacterVec {
    let n = ctx.n();
    let mut out = ext_character(ctx, m, 0);
    if n > 0 {
        let top = ext_character(ctx, m, n);
        out = if n % 2 == 0 { out.add(&top) } else { out.sub(&top) };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{builtin_group, generate_group, BuiltinGroup};
    use crate::linalg::is_unitriangular;
    use crate::rep::Irrep;

    fn ctx(kind: BuiltinGroup) -> EquivariantContext {
        let (g, irreps) = builtin_group(&kind).unwrap();
        EquivariantContext::new(g, irreps).unwrap()
    }

    fn trivial(dim: usize) -> EquivariantContext {
        let g = generate_group(dim, &[], 8).unwrap();
        let triv = Irrep::from_generator_images(&g, 0, 1, &[]).unwrap();
        EquivariantContext::new(g, vec![triv]).unwrap()
    }

    fn q8() -> EquivariantContext {
        ctx(BuiltinGroup::BinaryDihedral { l: 2 })
    }

    fn z3() -> EquivariantContext {
        ctx(BuiltinGroup::CyclicDiagonal { m: 3, weights: vec![1, 1, 1] })
    }

    fn lb(t: i64, j: usize) -> EqLineBundle {
        EqLineBundle::new(t, j)
    }

    #[test]
    fn line_cohomology_on_p1() {
        let c = trivial(2);
        assert_eq!(ext_character(&c, 1, 0).degree().unwrap(), 2);
        assert_eq!(ext_character(&c, -2, 1).degree().unwrap(), 1);
        assert!(ext_character(&c, -1, 0).is_zero() && ext_character(&c, -1, 1).is_zero());
        let q = q8();
        assert_eq!(ext_character(&q, -2, 1), CharacterVec::trivial(q.group()));
    }

    #[test]
    fn closed_form_ext_dims() {
        let q = q8();
        assert_eq!(ext_dim_equivariant(&q, lb(0, 2), lb(1, 0), 0).unwrap(), 1);
        for t in -3..3 {
            for j in 0..5 {
                assert_eq!(ext_table(&q, lb(t, j), lb(t, j)).unwrap(), BTreeMap::from([(0, 1)]));
            }
        }
        assert_eq!(ext_dim_equivariant(&z3(), lb(0, 0), lb(2, 2), 0).unwrap(), 6);
    }

    #[test]
    fn koszul_examples() {
        let c = trivial(2);
        let k = koszul_reduce(&c, 2, &CharacterVec::trivial(c.group())).unwrap();
        assert_eq!(k.coeffs(), &[-1, 2]);
        let z = z3();
        for i in 0..=2 {
            for j in 0..3 {
                assert_eq!(line_bundle_class(&z, lb(i, j)).unwrap(), KClass::basis(&z, i as usize, j));
            }
        }
        let k = koszul_reduce(&z, 3, z.irrep_character(0)).unwrap();
        let mut expected = KClass::basis(&z, 0, 0);
        expected = expected.combine(&KClass::basis(&z, 1, 1), -3);
        expected = expected.combine(&KClass::basis(&z, 2, 2), 3);
        assert_eq!(k, expected);
    }

    #[test]
    fn koszul_preserves_pairings() {
        for c in [q8(), z3()] {
            let gram = basis_euler_matrix(&c).unwrap();
            let n = c.n();
            for m in -(2 * n as i64 + 2)..=(2 * n as i64 + 2) {
                for j in 0..c.irrep_count() {
                    let k = line_bundle_class(&c, lb(m, j)).unwrap();
                    for i in 0..=n {
                        for jj in 0..c.irrep_count() {
                            let b = KClass::basis(&c, i, jj);
                            let direct = euler_characteristic(&c, lb(i as i64, jj), lb(m, j)).unwrap();
                            assert_eq!(euler_pairing_with(&gram, &b, &k), direct, "m={m} j={j}");
                            let direct = euler_characteristic(&c, lb(m, j), lb(i as i64, jj)).unwrap();
                            assert_eq!(euler_pairing_with(&gram, &k, &b), direct, "m={m} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn euler_pairing_values() {
        let c = trivial(2);
        let o = KClass::basis(&c, 0, 0);
        for m in -3i64..=3 {
            let om = line_bundle_class(&c, lb(m, 0)).unwrap();
            assert_eq!(euler_pairing(&c, &o, &om).unwrap(), m + 1);
        }
        let q = q8();
        let x = KClass::basis(&q, 0, 2);
        let y = KClass::basis(&q, 1, 0);
        assert_eq!(euler_pairing(&q, &x, &y).unwrap(), 1);
        for g in [q8(), z3()] {
            let m = basis_euler_matrix(&g).unwrap();
            assert!(is_unitriangular(&m));
        }
    }
}
