//! Invariant bases of `Hom(O(a)⊗ρ, O(b)⊗σ) = (Sym^{b-a} V^∨ ⊗ Hom(ρ, σ))^G`.
//!
//! Coordinates `x_1..x_{n+1}` span `V^∨` and `G` acts on polynomials by
//! `(g·f)(v) = f(g⁻¹ v)`, so `g·x_i = Σ_j (g⁻¹)_{ij} x_j`.
//!
//! A Hom element is stored flat: index `mon·(dσ·dρ) + row·dρ + col` holds the
//! coefficient of monomial `mon` in entry `(row, col)` of a `dσ × dρ` matrix.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use super::{
    ext_power_character, multiplicity, sym_power_characters, verify_irreps, CharacterVec, Irrep,
};
use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;
use crate::linalg::{CycMatrix, EchelonSpan};
use crate::numbers::{Rat, CycNum};

/// Monomials of a fixed degree in `nvars` variables, lexicographically
/// decreasing (`x_1` highest).
#[derive(Clone, Debug)]
pub struct Monomials {
    degree: usize,
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl Monomials {
    pub fn new(nvars: usize, degree: usize) -> Self {
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(cur.clone());
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
        }
        let mut exps = Vec::new();
        if nvars > 0 {
            rec(0, degree as u32, &mut vec![0; nvars], &mut exps);
        }
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Monomials { degree, exps, index }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.exps[i]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Human readable form such as `x1^2*x3`.
    pub fn display(&self, i: usize) -> String {
        let parts: Vec<String> = self.exps[i]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| if e == 1 { format!("x{}", v + 1) } else { format!("x{}^{e}", v + 1) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Identifies a Hom space between twisted irreducible line bundles up to an
/// overall twist: `degree = b − a`, `source = ρ`, `target = σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomKey {
    pub degree: i64,
    pub source: usize,
    pub target: usize,
}

/// Echelon basis of invariant tensors for one [`HomKey`].
#[derive(Clone, Debug)]
pub struct HomSpaceBasis {
    key: HomKey,
    source_dim: usize,
    target_dim: usize,
    monomials: Option<Arc<Monomials>>,
    span: EchelonSpan,
}

impl HomSpaceBasis {
    pub fn key(&self) -> HomKey {
        self.key
    }

    pub fn len(&self) -> usize {
        self.span.rank()
    }

    pub fn is_empty(&self) -> bool {
        self.span.rank() == 0
    }

    /// Length of the flat tensor vectors.
    pub fn ambient_dim(&self) -> usize {
        self.span.dim()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn monomials(&self) -> Option<&Monomials> {
        self.monomials.as_deref()
    }

    pub fn vectors(&self) -> &[Vec<CycNum>] {
        self.span.rows()
    }

    /// Flat tensor of the combination with the given coordinates.
    pub fn to_tensor(&self, coords: &[CycNum]) -> Vec<CycNum> {
        let mut out = vec![CycNum::zero(); self.ambient_dim()];
        for (c, row) in coords.iter().zip(self.span.rows()) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        out
    }

    /// Coordinates of an invariant tensor, if it lies in the span.
    pub fn coordinates(&self, tensor: &[CycNum]) -> Option<Vec<CycNum>> {
        self.span.coordinates(tensor)
    }
}

/// Products `basis_g[j] ∘ basis_f[i]` expressed in the target basis.
type CompTable = Vec<Vec<Vec<CycNum>>>;

/// A group with verified irreps plus write-once caches for the Hom-space
/// machinery. Shareable between threads.
#[derive(Debug)]
pub struct EquivariantContext {
    group: FiniteMatrixGroup,
    irreps: Vec<Irrep>,
    chars: Vec<CharacterVec>,
    v_char: CharacterVec,
    inverse_matrices: Vec<CycMatrix>,
    sym_dual: Mutex<Vec<CharacterVec>>,
    monomials: Mutex<HashMap<usize, Arc<Monomials>>>,
    sym_actions: Mutex<HashMap<usize, Arc<Vec<CycMatrix>>>>,
    bases: Mutex<HashMap<HomKey, Arc<HomSpaceBasis>>>,
    tables: Mutex<HashMap<(HomKey, HomKey), Arc<CompTable>>>,
}

impl EquivariantContext {
    pub fn new(group: FiniteMatrixGroup, irreps: Vec<Irrep>) -> Result<Self> {
        let report = verify_irreps(&group, &irreps);
        if !report.passed {
            return Err(Error::IrrepVerificationFailed(report.message));
        }
        let chars = irreps.iter().map(|r| r.character(&group)).collect();
        let v_char = CharacterVec::defining(&group);
        let inverse_matrices =
            (0..group.order()).map(|g| group.element(group.inverse(g)).clone()).collect();
        Ok(EquivariantContext {
            sym_dual: Mutex::new(vec![CharacterVec::trivial(&group)]),
            group,
            irreps,
            chars,
            v_char,
            inverse_matrices,
            monomials: Mutex::default(),
            sym_actions: Mutex::default(),
            bases: Mutex::default(),
            tables: Mutex::default(),
        })
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn irrep_count(&self) -> usize {
        self.irreps.len()
    }

    pub fn irrep_character(&self, j: usize) -> &CharacterVec {
        &self.chars[j]
    }

    /// `n` for `P^n = P(V)`.
    pub fn n(&self) -> usize {
        self.group.dimension() - 1
    }

    pub fn v_character(&self) -> &CharacterVec {
        &self.v_char
    }

    /// `χ_{Λ^{n+1} V}`.
    pub fn det_character(&self) -> CharacterVec {
        ext_power_character(&self.group, &self.v_char, self.group.dimension())
    }

    /// Whether `G ⊂ SL(V)`.
    pub fn in_special_linear(&self) -> bool {
        self.det_character() == CharacterVec::trivial(&self.group)
    }

    /// `χ_{Sym^m V^∨}`, cached.
    pub fn sym_dual_character(&self, m: usize) -> CharacterVec {
        let mut cache = self.sym_dual.lock().expect("cache poisoned");
        if cache.len() <= m {
            *cache = sym_power_characters(&self.group, &self.v_char.conjugate(), m);
        }
        cache[m].clone()
    }

    /// `χ_{Sym^m V}`.
    pub fn sym_character(&self, m: usize) -> CharacterVec {
        self.sym_dual_character(m).conjugate()
    }

    /// `dim Hom(O(a)⊗ρ, O(b)⊗σ)` from characters.
    pub fn hom_multiplicity(&self, key: HomKey) -> Result<i64> {
        if key.degree < 0 {
            return Ok(0);
        }
        let chi = self.sym_dual_character(key.degree as usize).mul(&self.chars[key.target]);
        multiplicity(&self.group, &chi, &self.chars[key.source])
    }

    pub fn monomials(&self, degree: usize) -> Arc<Monomials> {
        let mut cache = self.monomials.lock().expect("cache poisoned");
        cache
            .entry(degree)
            .or_insert_with(|| Arc::new(Monomials::new(self.group.dimension(), degree)))
            .clone()
    }

    /// `S_m(g)` for every element: column `ν` holds the coefficients of `g·x^ν`.
    pub fn sym_action(&self, degree: usize) -> Result<Arc<Vec<CycMatrix>>> {
        if let Some(hit) = self.sym_actions.lock().expect("cache poisoned").get(&degree) {
            return Ok(hit.clone());
        }
        let mons = self.monomials(degree);
        let nv = self.group.dimension();
        let mut mats = Vec::with_capacity(self.group.order());
        for ginv in &self.inverse_matrices {
            let mut m = CycMatrix::zeros(mons.len(), mons.len());
            for col in 0..mons.len() {
                // Expand Π_i (Σ_j ginv[i][j] x_j)^{ν_i} as a sparse polynomial.
                let mut poly: BTreeMap<Vec<u32>, CycNum> = BTreeMap::new();
                poly.insert(vec![0; nv], CycNum::one());
                for (i, &e) in mons.exponents(col).iter().enumerate() {
                    for _ in 0..e {
                        let mut next: BTreeMap<Vec<u32>, CycNum> = BTreeMap::new();
                        for (exps, c) in &poly {
                            for j in 0..nv {
                                let a = ginv.get(i, j);
                                if a.is_zero() {
                                    continue;
                                }
                                let mut ex = exps.clone();
                                ex[j] += 1;
                                let t = c.try_mul(a)?;
                                let slot = next.entry(ex).or_insert_with(CycNum::zero);
                                *slot = slot.try_add(&t)?;
                            }
                        }
                        poly = next;
                    }
                }
                for (exps, c) in poly {
                    let row = mons.index_of(&exps).expect("homogeneous of the right degree");
                    m.set(row, col, c);
                }
            }
            mats.push(m);
        }
        let mats = Arc::new(mats);
        self.sym_actions.lock().expect("cache poisoned").entry(degree).or_insert(mats.clone());
        Ok(mats)
    }

    /// Reynolds projector applied to a flat tensor for `key`.
    pub fn reynolds(&self, key: HomKey, tensor: &[CycNum]) -> Result<Vec<CycNum>> {
        if key.degree < 0 {
            return Err(Error::NegativeDegree(key.degree));
        }
        let s = self.sym_action(key.degree as usize)?;
        let (rho, sigma) = (&self.irreps[key.source], &self.irreps[key.target]);
        let (dr, ds) = (rho.dim(), sigma.dim());
        let nm = s[0].rows();
        let len = nm * ds * dr;
        if tensor.len() != len {
            return Err(Error::DimensionMismatch(format!("tensor of length {} for {key:?}", tensor.len())));
        }
        let mut out = vec![CycNum::zero(); len];
        for g in 0..self.group.order() {
            let sg = &s[g];
            let sig = sigma.matrix(g);
            let rinv = rho.matrix(self.group.inverse(g));
            for (src, t) in tensor.iter().enumerate() {
                if t.is_zero() {
                    continue;
                }
                let (nu, rest) = (src / (ds * dr), src % (ds * dr));
                let (r1, c1) = (rest / dr, rest % dr);
                for mu in 0..nm {
                    let a = sg.get(mu, nu);
                    if a.is_zero() {
                        continue;
                    }
                    let at = a * t;
                    for r in 0..ds {
                        let b = sig.get(r, r1);
                        if b.is_zero() {
                            continue;
                        }
                        let abt = &at * b;
                        for c in 0..dr {
                            let w = rinv.get(c1, c);
                            if w.is_zero() {
                                continue;
                            }
                            out[mu * ds * dr + r * dr + c] += &(&abt * w);
                        }
                    }
                }
            }
        }
        let inv = Rat::new(1.into(), (self.group.order() as i64).into());
        Ok(out.into_iter().map(|x| x.scale(&inv)).collect())
    }

    /// Invariant basis of `Hom(O(a)⊗ρ, O(b)⊗σ)` with `key.degree = b − a`.
    pub fn invariant_hom_basis(&self, key: HomKey) -> Result<Arc<HomSpaceBasis>> {
        if key.degree < 0 {
            return Err(Error::NegativeDegree(key.degree));
        }
        self.hom_basis(key)
    }

    /// As [`Self::invariant_hom_basis`], but negative degrees give an empty basis.
    pub fn hom_basis(&self, key: HomKey) -> Result<Arc<HomSpaceBasis>> {
        if key.source >= self.irreps.len() || key.target >= self.irreps.len() {
            return Err(Error::InvalidParameter(format!("irrep index out of range in {key:?}")));
        }
        if let Some(hit) = self.bases.lock().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let (dr, ds) = (self.irreps[key.source].dim(), self.irreps[key.target].dim());
        let basis = if key.degree < 0 {
            HomSpaceBasis { key, source_dim: dr, target_dim: ds, monomials: None, span: EchelonSpan::new(0) }
        } else {
            let mons = self.monomials(key.degree as usize);
            let len = mons.len() * ds * dr;
            let expected = self.hom_multiplicity(key)? as usize;
            let mut span = EchelonSpan::new(len);
            for i in 0..len {
                if span.rank() == expected {
                    break;
                }
                let mut e = vec![CycNum::zero(); len];
                e[i] = CycNum::one();
                span.insert(self.reynolds(key, &e)?);
            }
            if span.rank() != expected {
                return Err(Error::BasisMismatch(format!(
                    "projector rank {} differs from multiplicity {expected} for {key:?}",
                    span.rank()
                )));
            }
            HomSpaceBasis { key, source_dim: dr, target_dim: ds, monomials: Some(mons), span }
        };
        let basis = Arc::new(basis);
        Ok(self.bases.lock().expect("cache poisoned").entry(key).or_insert(basis).clone())
    }

    /// Flat tensor of `g ∘ f` where `f` has key `kf` and `g` has key `kg`.
    pub fn compose_tensors(&self, kf: HomKey, f: &[CycNum], kg: HomKey, g: &[CycNum]) -> Result<Vec<CycNum>> {
        if kf.target != kg.source {
            return Err(Error::BasisMismatch(format!("cannot compose {kf:?} then {kg:?}")));
        }
        let (m1, m2) = (kf.degree as usize, kg.degree as usize);
        let (ma, mb, mc) = (self.monomials(m1), self.monomials(m2), self.monomials(m1 + m2));
        let da = self.irreps[kf.source].dim();
        let db = self.irreps[kf.target].dim();
        let dc = self.irreps[kg.target].dim();
        let mut out = vec![CycNum::zero(); mc.len() * dc * da];
        let mut sum = vec![0u32; self.group.dimension()];
        for p in 0..ma.len() {
            for q in 0..mb.len() {
                for (s, (x, y)) in sum.iter_mut().zip(ma.exponents(p).iter().zip(mb.exponents(q))) {
                    *s = x + y;
                }
                let mu = mc.index_of(&sum).expect("degree adds");
                for r in 0..dc {
                    for k in 0..db {
                        let qv = &g[q * dc * db + r * db + k];
                        if qv.is_zero() {
                            continue;
                        }
                        for c in 0..da {
                            let pv = &f[p * db * da + k * da + c];
                            if pv.is_zero() {
                                continue;
                            }
                            out[mu * dc * da + r * da + c] += &(qv * pv);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn comp_table(&self, kf: HomKey, kg: HomKey) -> Result<Arc<CompTable>> {
        if let Some(hit) = self.tables.lock().expect("cache poisoned").get(&(kf, kg)) {
            return Ok(hit.clone());
        }
        let (bf, bg) = (self.hom_basis(kf)?, self.hom_basis(kg)?);
        let kh = HomKey { degree: kf.degree + kg.degree, source: kf.source, target: kg.target };
        let bh = self.hom_basis(kh)?;
        let mut table = Vec::with_capacity(bf.len());
        for f in bf.vectors() {
            let mut row = Vec::with_capacity(bg.len());
            for g in bg.vectors() {
                let h = self.compose_tensors(kf, f, kg, g)?;
                row.push(bh.coordinates(&h).ok_or_else(|| {
                    Error::BasisMismatch(format!("composite of {kf:?} and {kg:?} is not invariant"))
                })?);
            }
            table.push(row);
        }
        let table = Arc::new(table);
        Ok(self.tables.lock().expect("cache poisoned").entry((kf, kg)).or_insert(table).clone())
    }

    /// Coordinates of `g ∘ f` in the basis for the composite key.
    pub fn compose_hom(&self, kf: HomKey, f: &[CycNum], kg: HomKey, g: &[CycNum]) -> Result<Vec<CycNum>> {
        if kf.target != kg.source {
            return Err(Error::BasisMismatch(format!("cannot compose {kf:?} then {kg:?}")));
        }
        let kh = HomKey { degree: kf.degree + kg.degree, source: kf.source, target: kg.target };
        let bh = self.hom_basis(kh)?;
        let mut out = vec![CycNum::zero(); bh.len()];
        if f.iter().all(CycNum::is_zero) || g.iter().all(CycNum::is_zero) {
            return Ok(out);
        }
        let (lf, lg) = (self.hom_basis(kf)?.len(), self.hom_basis(kg)?.len());
        if f.len() != lf || g.len() != lg {
            return Err(Error::BasisMismatch(format!(
                "coordinate lengths ({}, {}) do not match bases ({lf}, {lg})",
                f.len(),
                g.len()
            )));
        }
        let table = self.comp_table(kf, kg)?;
        for (i, a) in f.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (o, t) in out.iter_mut().zip(&table[i][j]) {
                    if !t.is_zero() {
                        *o += &(&ab * t);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coordinates of the identity endomorphism in any degree-0 `(ρ, ρ)` basis.
    pub fn identity_coords(&self) -> Vec<CycNum> {
        vec![CycNum::one()]
    }
}
