//! Bounded complexes of sums of equivariant line bundles, their Hom
//! complexes, and mutations of exceptional pairs.
//!
//! A differential block `d^p[t][s]` is the coordinate vector (in the invariant
//! Hom basis) of the component from summand `s` of `C^p` to summand `t` of
//! `C^{p+1}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::cohomology::{ext_dim_equivariant, line_bundle_class, EqLineBundle, KClass};
use crate::error::{Error, Result};
use crate::linalg::{columns_to_rows, nullspace, rank_of, EchelonSpan};
use crate::numbers::CycNum;
use crate::rep::{EquivariantContext, HomKey};

/// `[target][source]` coordinate vectors.
pub type Block = Vec<Vec<Vec<CycNum>>>;

pub fn hom_key(s: EqLineBundle, t: EqLineBundle) -> HomKey {
    HomKey { degree: t.twist - s.twist, source: s.irrep, target: t.irrep }
}

fn zero_block(ctx: &EquivariantContext, src: &[EqLineBundle], tgt: &[EqLineBundle]) -> Result<Block> {
    tgt.iter()
        .map(|&t| {
            src.iter()
                .map(|&s| Ok(vec![CycNum::zero(); ctx.hom_basis(hom_key(s, t))?.len()]))
                .collect()
        })
        .collect()
}

fn is_zero_vec(v: &[CycNum]) -> bool {
    v.iter().all(CycNum::is_zero)
}

fn add_into(acc: &mut [CycNum], v: &[CycNum], negate: bool) {
    for (a, b) in acc.iter_mut().zip(v) {
        if b.is_zero() {
            continue;
        }
        if negate {
            *a -= b;
        } else {
            *a += b;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EqComplex {
    terms: BTreeMap<i32, Vec<EqLineBundle>>,
    diffs: BTreeMap<i32, Block>,
}

impl EqComplex {
    pub fn from_line_bundle(l: EqLineBundle) -> Self {
        EqComplex { terms: BTreeMap::from([(0, vec![l])]), diffs: BTreeMap::new() }
    }

    /// Validates shapes, the twist window and `d∘d = 0`. Missing differentials
    /// between nonempty neighbouring terms are taken to be zero.
    pub fn new(
        ctx: &EquivariantContext,
        terms: BTreeMap<i32, Vec<EqLineBundle>>,
        diffs: BTreeMap<i32, Block>,
    ) -> Result<Self> {
        let terms: BTreeMap<i32, Vec<EqLineBundle>> = terms.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        if terms.is_empty() {
            return Err(Error::InvalidParameter("a complex needs at least one nonzero term".into()));
        }
        for l in terms.values().flatten() {
            if l.irrep >= ctx.irrep_count() {
                return Err(Error::InvalidParameter(format!("{l} names an unknown irrep")));
            }
        }
        let twists: Vec<i64> = terms.values().flatten().map(|l| l.twist).collect();
        let (lo, hi) = (*twists.iter().min().expect("nonempty"), *twists.iter().max().expect("nonempty"));
        if hi - lo > ctx.n() as i64 {
            return Err(Error::WindowViolation(format!("twists {lo}..{hi} span more than n = {}", ctx.n())));
        }
        let mut normalized = BTreeMap::new();
        for (&p, block) in &diffs {
            let (Some(src), Some(tgt)) = (terms.get(&p), terms.get(&(p + 1))) else {
                if block.iter().flatten().all(|v| is_zero_vec(v)) {
                    continue;
                }
                return Err(Error::DimensionMismatch(format!("differential in degree {p} has no source or target")));
            };
            if block.len() != tgt.len() || block.iter().any(|row| row.len() != src.len()) {
                return Err(Error::DimensionMismatch(format!("differential block shape in degree {p}")));
            }
            for (ti, row) in block.iter().enumerate() {
                for (si, v) in row.iter().enumerate() {
                    let len = ctx.hom_basis(hom_key(src[si], tgt[ti]))?.len();
                    if v.len() != len {
                        return Err(Error::DimensionMismatch(format!(
                            "component {} -> {} in degree {p} has {} coordinates, basis has {len}",
                            src[si],
                            tgt[ti],
                            v.len()
                        )));
                    }
                }
            }
            normalized.insert(p, block.clone());
        }
        for (&p, src) in &terms {
            if let Some(tgt) = terms.get(&(p + 1)) {
                if !normalized.contains_key(&p) {
                    normalized.insert(p, zero_block(ctx, src, tgt)?);
                }
            }
        }
        let c = EqComplex { terms, diffs: normalized };
        c.check_square_zero(ctx)?;
        Ok(c)
    }

    fn check_square_zero(&self, ctx: &EquivariantContext) -> Result<()> {
        for (&p, d0) in &self.diffs {
            let Some(d1) = self.diffs.get(&(p + 1)) else { continue };
            let (a, b, c) = (&self.terms[&p], &self.terms[&(p + 1)], &self.terms[&(p + 2)]);
            for (si, &s) in a.iter().enumerate() {
                for (ui, &u) in c.iter().enumerate() {
                    let mut acc = vec![CycNum::zero(); ctx.hom_basis(hom_key(s, u))?.len()];
                    for (ti, &t) in b.iter().enumerate() {
                        let comp = ctx.compose_hom(hom_key(s, t), &d0[ti][si], hom_key(t, u), &d1[ui][ti])?;
                        add_into(&mut acc, &comp, false);
                    }
                    if !is_zero_vec(&acc) {
                        return Err(Error::NotAComplex(p));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<i32, Vec<EqLineBundle>> {
        &self.terms
    }

    pub fn term(&self, p: i32) -> &[EqLineBundle] {
        self.terms.get(&p).map_or(&[], Vec::as_slice)
    }

    /// `d^p[t][s]`, or `None` when a neighbouring term vanishes.
    pub fn differential(&self, p: i32) -> Option<&Block> {
        self.diffs.get(&p)
    }

    pub fn summands(&self) -> impl Iterator<Item = (i32, EqLineBundle)> + '_ {
        self.terms.iter().flat_map(|(&p, v)| v.iter().map(move |&l| (p, l)))
    }

    pub fn as_line_bundle(&self) -> Option<EqLineBundle> {
        match self.terms.get(&0) {
            Some(v) if self.terms.len() == 1 && v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    pub fn twist_range(&self) -> (i64, i64) {
        let it = || self.terms.values().flatten().map(|l| l.twist);
        (it().min().expect("nonempty"), it().max().expect("nonempty"))
    }

    /// `C[s]`: `C[s]^p = C^{p+s}` with differentials multiplied by `(-1)^s`.
    pub fn shift(&self, s: i32) -> EqComplex {
        let sign = s.rem_euclid(2) == 1;
        let terms = self.terms.iter().map(|(&p, v)| (p - s, v.clone())).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&p, b)| {
                let b = if sign {
                    b.iter().map(|row| row.iter().map(|v| v.iter().map(|x| -x).collect()).collect()).collect()
                } else {
                    b.clone()
                };
                (p - s, b)
            })
            .collect();
        EqComplex { terms, diffs }
    }

    /// `C ⊗ O(k)`; Hom bases depend only on twist differences, so the
    /// differentials keep their coordinates.
    pub fn twist(&self, k: i64) -> EqComplex {
        let terms = self.terms.iter().map(|(&p, v)| (p, v.iter().map(|l| l.twisted(k)).collect())).collect();
        EqComplex { terms, diffs: self.diffs.clone() }
    }

    pub fn kclass(&self, ctx: &EquivariantContext) -> Result<KClass> {
        let mut k = KClass::zero(ctx);
        for (p, l) in self.summands() {
            k = k.combine(&line_bundle_class(ctx, l)?, if p % 2 == 0 { 1 } else { -1 });
        }
        Ok(k)
    }
}

impl fmt::Display for EqComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.as_line_bundle() {
            return write!(f, "{l}");
        }
        let mut first = true;
        f.write_str("{")?;
        for (p, v) in &self.terms {
            if !first {
                f.write_str(" -> ")?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            let mut i = 0;
            while i < v.len() {
                let mut j = i;
                while j < v.len() && v[j] == v[i] {
                    j += 1;
                }
                parts.push(if j - i == 1 { v[i].to_string() } else { format!("{}*{}", j - i, v[i]) });
                i = j;
            }
            write!(f, "{p}: {}", parts.join(" + "))?;
        }
        f.write_str("}")
    }
}

/// A degree-0 morphism of complexes given by blocks `f^p[t][s]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub blocks: BTreeMap<i32, Block>,
}

impl ChainMap {
    pub fn component(&self, p: i32, t: usize, s: usize) -> &[CycNum] {
        &self.blocks[&p][t][s]
    }

    /// Checks `d_D ∘ f = f ∘ d_C` exactly.
    pub fn commutes(&self, ctx: &EquivariantContext, c: &EqComplex, d: &EqComplex) -> Result<bool> {
        let degrees: BTreeSet<i32> = c.terms.keys().copied().collect();
        for &p in &degrees {
            let (src, tgt) = (c.term(p), d.term(p + 1));
            for (si, &s) in src.iter().enumerate() {
                for (ti, &t) in tgt.iter().enumerate() {
                    let mut acc = vec![CycNum::zero(); ctx.hom_basis(hom_key(s, t))?.len()];
                    if let Some(dd) = d.differential(p) {
                        for (mi, &m) in d.term(p).iter().enumerate() {
                            let f = self.component(p, mi, si);
                            add_into(&mut acc, &ctx.compose_hom(hom_key(s, m), f, hom_key(m, t), &dd[ti][mi])?, false);
                        }
                    }
                    if let Some(dc) = c.differential(p) {
                        for (mi, &m) in c.term(p + 1).iter().enumerate() {
                            let f = self.component(p + 1, ti, mi);
                            add_into(&mut acc, &ctx.compose_hom(hom_key(s, m), &dc[mi][si], hom_key(m, t), f)?, true);
                        }
                    }
                    if !is_zero_vec(&acc) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// `g ∘ f` for chain maps `f: A → B`, `g: B → C`.
pub fn compose_chain_maps(
    ctx: &EquivariantContext,
    a: &EqComplex,
    b: &EqComplex,
    c: &EqComplex,
    f: &ChainMap,
    g: &ChainMap,
) -> Result<ChainMap> {
    let mut blocks = BTreeMap::new();
    for (&p, src) in &a.terms {
        let tgt = c.term(p);
        if tgt.is_empty() {
            continue;
        }
        let mut block = zero_block(ctx, src, tgt)?;
        for (si, &s) in src.iter().enumerate() {
            for (ti, &t) in tgt.iter().enumerate() {
                for (mi, &m) in b.term(p).iter().enumerate() {
                    let comp = ctx.compose_hom(hom_key(s, m), f.component(p, mi, si), hom_key(m, t), g.component(p, ti, mi))?;
                    add_into(&mut block[ti][si], &comp, false);
                }
            }
        }
        blocks.insert(p, block);
    }
    Ok(ChainMap { blocks })
}

#[derive(Clone, Debug)]
struct Slot {
    p: i32,
    s: usize,
    t: usize,
    offset: usize,
    len: usize,
}

/// The complex `Hom^k = ⊕_p Hom(C^p, D^{p+k})` with
/// `δf = d_D ∘ f − (−1)^k f ∘ d_C`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    slots: BTreeMap<i32, Vec<Slot>>,
    dims: BTreeMap<i32, usize>,
    /// Images of the unit vectors of degree `k`, each of length `dims[k+1]`.
    diffs: BTreeMap<i32, Vec<Vec<CycNum>>>,
}

impl HomComplex {
    pub fn dim(&self, k: i32) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.dims.keys().copied()
    }

    /// Columns of `δ^k`.
    pub fn differential_columns(&self, k: i32) -> &[Vec<CycNum>] {
        self.diffs.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, k: i32) -> usize {
        rank_of(self.dim(k + 1), self.differential_columns(k).iter().cloned())
    }

    /// Nonzero cohomology dimensions.
    pub fn cohomology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for k in self.degrees() {
            let h = self.dim(k) - self.rank(k) - self.rank(k - 1);
            if h > 0 {
                out.insert(k, h);
            }
        }
        out
    }

    /// Image of `δ^{-1}` in degree 0.
    pub fn boundaries(&self) -> EchelonSpan {
        EchelonSpan::from_vectors(self.dim(0), self.differential_columns(-1).iter().cloned())
    }

    /// Degree-0 cycles.
    pub fn cycles(&self) -> Vec<Vec<CycNum>> {
        let n0 = self.dim(0);
        let rows = columns_to_rows(self.differential_columns(0), self.dim(1));
        if rows.is_empty() {
            return (0..n0)
                .map(|i| {
                    let mut v = vec![CycNum::zero(); n0];
                    v[i] = CycNum::one();
                    v
                })
                .collect();
        }
        nullspace(&rows, n0)
    }

    pub fn to_chain_map(&self, ctx: &EquivariantContext, c: &EqComplex, d: &EqComplex, v: &[CycNum]) -> Result<ChainMap> {
        let mut blocks = BTreeMap::new();
        for (&p, src) in &c.terms {
            let tgt = d.term(p);
            if !tgt.is_empty() {
                blocks.insert(p, zero_block(ctx, src, tgt)?);
            }
        }
        for slot in self.slots.get(&0).into_iter().flatten() {
            let block = blocks.get_mut(&slot.p).expect("slot degree has a block");
            block[slot.t][slot.s] = v[slot.offset..slot.offset + slot.len].to_vec();
        }
        Ok(ChainMap { blocks })
    }

    pub fn from_chain_map(&self, f: &ChainMap) -> Vec<CycNum> {
        let mut v = vec![CycNum::zero(); self.dim(0)];
        for slot in self.slots.get(&0).into_iter().flatten() {
            v[slot.offset..slot.offset + slot.len].clone_from_slice(f.component(slot.p, slot.t, slot.s));
        }
        v
    }
}

/// Requires `Ext^{>0}` to vanish between every summand of `C` and every
/// summand of `D`, so that the Hom complex computes `Ext(C, D)`.
pub fn hom_complex(ctx: &EquivariantContext, c: &EqComplex, d: &EqComplex) -> Result<HomComplex> {
    let n = ctx.n();
    if n > 0 {
        for (_, s) in c.summands() {
            for (_, t) in d.summands() {
                if ext_dim_equivariant(ctx, s, t, n)? != 0 {
                    return Err(Error::WindowViolation(format!("Ext^{n}({s}, {t}) is nonzero")));
                }
            }
        }
    }
    let (c_lo, c_hi) = (*c.terms.keys().next().expect("nonempty"), *c.terms.keys().next_back().expect("nonempty"));
    let (d_lo, d_hi) = (*d.terms.keys().next().expect("nonempty"), *d.terms.keys().next_back().expect("nonempty"));
    let mut slots: BTreeMap<i32, Vec<Slot>> = BTreeMap::new();
    let mut dims = BTreeMap::new();
    let mut lookup: HashMap<(i32, i32, usize, usize), usize> = HashMap::new();
    for k in (d_lo - c_hi)..=(d_hi - c_lo) {
        let mut list = Vec::new();
        let mut offset = 0;
        for (&p, src) in &c.terms {
            for (ti, &t) in d.term(p + k).iter().enumerate() {
                for (si, &s) in src.iter().enumerate() {
                    let len = ctx.hom_basis(hom_key(s, t))?.len();
                    if len == 0 {
                        continue;
                    }
                    lookup.insert((k, p, si, ti), offset);
                    list.push(Slot { p, s: si, t: ti, offset, len });
                    offset += len;
                }
            }
        }
        dims.insert(k, offset);
        slots.insert(k, list);
    }
    let mut diffs = BTreeMap::new();
    for (&k, list) in &slots {
        let target_dim = dims.get(&(k + 1)).copied().unwrap_or(0);
        let pre_negate = k % 2 == 0;
        let mut cols = Vec::new();
        for slot in list {
            let s = c.term(slot.p)[slot.s];
            let t = d.term(slot.p + k)[slot.t];
            for i in 0..slot.len {
                let mut e = vec![CycNum::zero(); slot.len];
                e[i] = CycNum::one();
                let mut img = vec![CycNum::zero(); target_dim];
                if let Some(dd) = d.differential(slot.p + k) {
                    for (t2i, &t2) in d.term(slot.p + k + 1).iter().enumerate() {
                        let comp = ctx.compose_hom(hom_key(s, t), &e, hom_key(t, t2), &dd[t2i][slot.t])?;
                        if let Some(&off) = lookup.get(&(k + 1, slot.p, slot.s, t2i)) {
                            add_into(&mut img[off..off + comp.len()], &comp, false);
                        }
                    }
                }
                if let Some(dc) = c.differential(slot.p - 1) {
                    for (s2i, &s2) in c.term(slot.p - 1).iter().enumerate() {
                        let comp = ctx.compose_hom(hom_key(s2, s), &dc[slot.s][s2i], hom_key(s, t), &e)?;
                        if let Some(&off) = lookup.get(&(k + 1, slot.p - 1, s2i, slot.t)) {
                            add_into(&mut img[off..off + comp.len()], &comp, pre_negate);
                        }
                    }
                }
                cols.push(img);
            }
        }
        diffs.insert(k, cols);
    }
    Ok(HomComplex { slots, dims, diffs })
}

/// Nonzero `dim Ext^k(C, D)`.
pub fn ext_dims(ctx: &EquivariantContext, c: &EqComplex, d: &EqComplex) -> Result<BTreeMap<i32, usize>> {
    Ok(hom_complex(ctx, c, d)?.cohomology_dims())
}

/// Chain-map representatives of a basis of `H^0 Hom(C, D)`: degree-0 cycles
/// taken in nullspace order, skipping those already in the span of the
/// boundaries and earlier representatives.
pub fn cohomology_basis(ctx: &EquivariantContext, c: &EqComplex, d: &EqComplex) -> Result<Vec<ChainMap>> {
    let hc = hom_complex(ctx, c, d)?;
    let mut span = hc.boundaries();
    let mut reps = Vec::new();
    for z in hc.cycles() {
        if span.insert(z.clone()) {
            reps.push(hc.to_chain_map(ctx, c, d, &z)?);
        }
    }
    Ok(reps)
}

/// Result of a mutation together with `dim Hom(E, F)`.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub object: EqComplex,
    pub hom_dim: usize,
}

fn concentrated_hom(ctx: &EquivariantContext, e: &EqComplex, f: &EqComplex) -> Result<usize> {
    let dims = ext_dims(ctx, e, f)?;
    if dims.keys().any(|&k| k != 0) {
        return Err(Error::NonConcentratedHom(format!("Ext({e}, {f}) = {dims:?}")));
    }
    Ok(dims.get(&0).copied().unwrap_or(0))
}

/// `R_F E = Cone(E → Hom(E, F)^∨ ⊗ F)[-1]` with `E` kept in its degrees.
/// Returns `E` itself when `Hom•(E, F) = 0`.
pub fn right_mutation(ctx: &EquivariantContext, e: &EqComplex, f: &EqComplex) -> Result<Mutation> {
    let h = concentrated_hom(ctx, e, f)?;
    if h == 0 {
        return Ok(Mutation { object: e.clone(), hom_dim: 0 });
    }
    let maps = cohomology_basis(ctx, e, f)?;
    let degrees: BTreeSet<i32> = e.terms.keys().copied().chain(f.terms.keys().map(|p| p + 1)).collect();
    let mut terms = BTreeMap::new();
    for &p in &degrees {
        let mut v = e.term(p).to_vec();
        for _ in 0..h {
            v.extend_from_slice(f.term(p - 1));
        }
        terms.insert(p, v);
    }
    let mut diffs = BTreeMap::new();
    for &p in &degrees {
        let (Some(src), Some(tgt)) = (terms.get(&p), terms.get(&(p + 1))) else { continue };
        let mut block = zero_block(ctx, src, tgt)?;
        let (ne0, ne1) = (e.term(p).len(), e.term(p + 1).len());
        let (nf0, nf1) = (f.term(p - 1).len(), f.term(p).len());
        if let Some(d) = e.differential(p) {
            for t in 0..ne1 {
                for s in 0..ne0 {
                    block[t][s] = d[t][s].clone();
                }
            }
        }
        for (c, phi) in maps.iter().enumerate() {
            if ne0 > 0 && nf1 > 0 {
                for t in 0..nf1 {
                    for s in 0..ne0 {
                        block[ne1 + c * nf1 + t][s] = phi.component(p, t, s).to_vec();
                    }
                }
            }
            if let Some(d) = f.differential(p - 1) {
                for t in 0..nf1 {
                    for s in 0..nf0 {
                        block[ne1 + c * nf1 + t][ne0 + c * nf0 + s] = d[t][s].iter().map(|x| -x).collect();
                    }
                }
            }
        }
        diffs.insert(p, block);
    }
    Ok(Mutation { object: EqComplex::new(ctx, terms, diffs)?, hom_dim: h })
}

/// `L_E F = Cone(Hom(E, F) ⊗ E → F)` with `F` kept in its degrees.
/// Returns `F` itself when `Hom•(E, F) = 0`.
pub fn left_mutation(ctx: &EquivariantContext, e: &EqComplex, f: &EqComplex) -> Result<Mutation> {
    let h = concentrated_hom(ctx, e, f)?;
    if h == 0 {
        return Ok(Mutation { object: f.clone(), hom_dim: 0 });
    }
    let maps = cohomology_basis(ctx, e, f)?;
    let degrees: BTreeSet<i32> = f.terms.keys().copied().chain(e.terms.keys().map(|p| p - 1)).collect();
    let mut terms = BTreeMap::new();
    for &p in &degrees {
        let mut v = Vec::new();
        for _ in 0..h {
            v.extend_from_slice(e.term(p + 1));
        }
        v.extend_from_slice(f.term(p));
        terms.insert(p, v);
    }
    let mut diffs = BTreeMap::new();
    for &p in &degrees {
        let (Some(src), Some(tgt)) = (terms.get(&p), terms.get(&(p + 1))) else { continue };
        let mut block = zero_block(ctx, src, tgt)?;
        let (ne0, ne1) = (e.term(p + 1).len(), e.term(p + 2).len());
        let (nf0, nf1) = (f.term(p).len(), f.term(p + 1).len());
        for (c, phi) in maps.iter().enumerate() {
            if let Some(d) = e.differential(p + 1) {
                for t in 0..ne1 {
                    for s in 0..ne0 {
                        block[c * ne1 + t][c * ne0 + s] = d[t][s].iter().map(|x| -x).collect();
                    }
                }
            }
            if ne0 > 0 && nf1 > 0 {
                for t in 0..nf1 {
                    for s in 0..ne0 {
                        block[h * ne1 + t][c * ne0 + s] = phi.component(p + 1, t, s).to_vec();
                    }
                }
            }
        }
        if let Some(d) = f.differential(p) {
            for t in 0..nf1 {
                for s in 0..nf0 {
                    block[h * ne1 + t][h * ne0 + s] = d[t][s].clone();
                }
            }
        }
        diffs.insert(p, block);
    }
    Ok(Mutation { object: EqComplex::new(ctx, terms, diffs)?, hom_dim: h })
}
