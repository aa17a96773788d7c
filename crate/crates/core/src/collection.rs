//! Exceptional collections of equivariant complexes: the Beilinson
//! collection, mutation schedules with K-theoretic bookkeeping, Veronese
//! block decompositions, removal of objects and quivers.

use std::collections::BTreeMap;

use crate::cohomology::{basis_euler_matrix, euler_pairing_with, ext_table, EqLineBundle, KClass};
use crate::complex::{
    cohomology_basis, compose_chain_maps, ext_dims, hom_complex, right_mutation, EqComplex,
};
use crate::error::{Error, Result};
use crate::groups::central_scalar_subgroup;
use crate::linalg::{int_det, int_identity, int_mul, int_transpose, is_unitriangular, EchelonSpan, IntMatrix};
use crate::rep::EquivariantContext;

/// Nonzero `dim Ext^k`, keyed by `k`.
pub type ExtTable = BTreeMap<i32, usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct ExcCollection {
    objects: Vec<EqComplex>,
    labels: Vec<String>,
    kclasses: Vec<KClass>,
    /// `ext[i][j] = Ext•(E_i, E_j)`.
    ext: Vec<Vec<ExtTable>>,
    gram: IntMatrix,
    provenance: Vec<String>,
}

fn object_ext(ctx: &EquivariantContext, a: &EqComplex, b: &EqComplex) -> Result<ExtTable> {
    match (a.as_line_bundle(), b.as_line_bundle()) {
        (Some(x), Some(y)) => ext_table(ctx, x, y),
        _ => ext_dims(ctx, a, b),
    }
}

fn gram_of(basis: &IntMatrix, ks: &[KClass]) -> IntMatrix {
    ks.iter().map(|x| ks.iter().map(|y| euler_pairing_with(basis, x, y)).collect()).collect()
}

impl ExcCollection {
    pub fn new(
        ctx: &EquivariantContext,
        objects: Vec<EqComplex>,
        labels: Vec<String>,
        provenance: Vec<String>,
    ) -> Result<Self> {
        if objects.len() != labels.len() {
            return Err(Error::DimensionMismatch(format!("{} objects, {} labels", objects.len(), labels.len())));
        }
        let kclasses = objects.iter().map(|o| o.kclass(ctx)).collect::<Result<Vec<_>>>()?;
        let ext = objects
            .iter()
            .map(|a| objects.iter().map(|b| object_ext(ctx, a, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let gram = gram_of(&basis_euler_matrix(ctx)?, &kclasses);
        Ok(ExcCollection { objects, labels, kclasses, ext, gram, provenance })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[EqComplex] {
        &self.objects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kclasses(&self) -> &[KClass] {
        &self.kclasses
    }

    pub fn ext(&self, i: usize, j: usize) -> &ExtTable {
        &self.ext[i][j]
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// `dim Hom(E_i, E_j)` (degree 0 only).
    pub fn hom_dims(&self) -> Vec<Vec<usize>> {
        self.ext.iter().map(|row| row.iter().map(|t| t.get(&0).copied().unwrap_or(0)).collect()).collect()
    }

    /// Euler pairings recomputed as alternating sums of the Ext tables.
    pub fn ext_euler_matrix(&self) -> IntMatrix {
        self.ext
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| t.iter().map(|(&k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum())
                    .collect()
            })
            .collect()
    }

    /// Sub-collection on `indices`, keeping the computed Ext tables.
    pub fn select(&self, indices: &[usize], note: impl Into<String>) -> ExcCollection {
        fn pick<T: Clone>(v: &[Vec<T>], indices: &[usize]) -> Vec<Vec<T>> {
            indices.iter().map(|&i| indices.iter().map(|&j| v[i][j].clone()).collect()).collect()
        }
        let mut provenance = self.provenance.clone();
        provenance.push(note.into());
        ExcCollection {
            objects: indices.iter().map(|&i| self.objects[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            kclasses: indices.iter().map(|&i| self.kclasses[i].clone()).collect(),
            ext: pick(&self.ext, indices),
            gram: pick(&self.gram, indices),
            provenance,
        }
    }

    /// Drops the first `k` objects.
    pub fn drop_front(&self, k: usize) -> ExcCollection {
        let removed = self.labels[..k.min(self.len())].join(", ");
        let keep: Vec<usize> = (k.min(self.len())..self.len()).collect();
        self.select(&keep, format!("remove [{removed}]"))
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

pub fn line_bundle_label(l: EqLineBundle) -> String {
    l.to_string()
}

/// `O(i)⊗ρ_j` for `i = 0..=n`, `j = 0..=r`, twist-major.
pub fn beilinson_collection(ctx: &EquivariantContext) -> Result<ExcCollection> {
    let mut objects = Vec::new();
    let mut labels = Vec::new();
    for i in 0..=ctx.n() as i64 {
        for j in 0..ctx.irrep_count() {
            let l = EqLineBundle::new(i, j);
            objects.push(EqComplex::from_line_bundle(l));
            labels.push(line_bundle_label(l));
        }
    }
    ExcCollection::new(ctx, objects, labels, vec!["beilinson collection".into()])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub passed: bool,
    pub message: String,
}

impl CheckReport {
    fn pass(message: impl Into<String>) -> Self {
        CheckReport { passed: true, message: message.into() }
    }

    fn fail(message: impl Into<String>) -> Self {
        CheckReport { passed: false, message: message.into() }
    }
}

pub fn check_exceptional(coll: &ExcCollection) -> CheckReport {
    let one = ExtTable::from([(0, 1)]);
    for i in 0..coll.len() {
        if coll.ext[i][i] != one {
            return CheckReport::fail(format!("{} is not exceptional: Ext = {:?}", coll.labels[i], coll.ext[i][i]));
        }
        for j in 0..i {
            if !coll.ext[i][j].is_empty() {
                return CheckReport::fail(format!(
                    "backward Ext from {} to {}: {:?}",
                    coll.labels[i], coll.labels[j], coll.ext[i][j]
                ));
            }
        }
    }
    CheckReport::pass(format!("{} objects, exceptional", coll.len()))
}

pub fn check_strong(coll: &ExcCollection) -> CheckReport {
    let exc = check_exceptional(coll);
    if !exc.passed {
        return exc;
    }
    for i in 0..coll.len() {
        for j in i + 1..coll.len() {
            if let Some((&k, _)) = coll.ext[i][j].iter().find(|(&k, _)| k != 0) {
                return CheckReport::fail(format!(
                    "Ext^{k}({}, {}) is nonzero",
                    coll.labels[i], coll.labels[j]
                ));
            }
        }
    }
    CheckReport::pass(format!("{} objects, strong exceptional", coll.len()))
}

/// One adjacent transposition `(X, T) ↦ (T, R_T X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationStep {
    pub target: String,
    pub passed: String,
    pub result: String,
    /// `χ(X, T)`; zero means the pair was orthogonal and `X` is unchanged.
    pub hom_dim: i64,
    /// `U_stepᵀ · G · U_step` equals the Gram matrix of the new order.
    pub gram_verified: bool,
}

/// Outcome of moving objects to the front by right mutations.
#[derive(Clone, Debug)]
pub struct MoveOutcome {
    pub steps: Vec<MutationStep>,
    /// New K-classes (as columns) in terms of the old ones.
    pub base_change: IntMatrix,
    /// `Uᵀ G_old U = G_new` and `|det U| = 1`.
    pub base_change_verified: bool,
    /// `None` when the complex engine failed and only K-classes were tracked.
    pub fallback_reason: Option<String>,
}

impl MoveOutcome {
    pub fn nontrivial_mutations(&self) -> usize {
        self.steps.iter().filter(|s| s.hom_dim != 0).count()
    }

    pub fn all_verified(&self) -> bool {
        self.base_change_verified && self.steps.iter().all(|s| s.gram_verified)
    }
}

/// Either a genuine collection of complexes, or K-class data alone when the
/// complex engine could not carry out a step.
#[derive(Clone, Debug)]
pub enum CascadeResult {
    Complexes { collection: ExcCollection, outcome: MoveOutcome },
    KClassesOnly { labels: Vec<String>, kclasses: Vec<KClass>, gram: IntMatrix, outcome: MoveOutcome },
}

impl CascadeResult {
    pub fn outcome(&self) -> &MoveOutcome {
        match self {
            CascadeResult::Complexes { outcome, .. } | CascadeResult::KClassesOnly { outcome, .. } => outcome,
        }
    }

    pub fn collection(&self) -> Option<&ExcCollection> {
        match self {
            CascadeResult::Complexes { collection, .. } => Some(collection),
            CascadeResult::KClassesOnly { .. } => None,
        }
    }
}

struct Entry {
    object: Option<EqComplex>,
    label: String,
    kclass: KClass,
}

/// Moves the objects at `targets` (increasing indices) to the front, keeping
/// their order. Every other object that a target passes is replaced by its
/// right mutation through that target, so non-target objects also keep their
/// relative order.
pub fn move_to_front(ctx: &EquivariantContext, coll: &ExcCollection, targets: &[usize]) -> Result<CascadeResult> {
    if targets.windows(2).any(|w| w[0] >= w[1]) || targets.iter().any(|&t| t >= coll.len()) {
        return Err(Error::InvalidParameter(format!("targets {targets:?} must be increasing indices")));
    }
    let basis = basis_euler_matrix(ctx)?;
    let mut entries: Vec<Entry> = (0..coll.len())
        .map(|i| Entry {
            object: Some(coll.objects[i].clone()),
            label: coll.labels[i].clone(),
            kclass: coll.kclasses[i].clone(),
        })
        .collect();
    let n = entries.len();
    let mut u = int_identity(n);
    let mut steps = Vec::new();
    let mut fallback: Option<String> = None;
    let mut provenance = coll.provenance.clone();
    for (placed, &t0) in targets.iter().enumerate() {
        // Earlier targets already sit at 0..placed; the current one is still at t0.
        let mut pos = t0;
        while pos > placed {
            let k = pos - 1;
            let before: Vec<KClass> = entries.iter().map(|e| e.kclass.clone()).collect();
            let g_before = gram_of(&basis, &before);
            let chi = euler_pairing_with(&basis, &entries[k].kclass, &entries[k + 1].kclass);
            let (x, t) = (&entries[k], &entries[k + 1]);
            let mutated = match (&x.object, &t.object, &fallback) {
                (Some(xo), Some(to), None) => match right_mutation(ctx, xo, to) {
                    Ok(m) => {
                        if m.hom_dim as i64 != chi {
                            return Err(Error::BasisMismatch(format!(
                                "Hom({}, {}) has dimension {} but Euler pairing {chi}",
                                x.label, t.label, m.hom_dim
                            )));
                        }
                        Some(m.object)
                    }
                    Err(e @ (Error::NonConcentratedHom(_) | Error::WindowViolation(_))) => {
                        fallback = Some(format!("{e} while mutating {} through {}", x.label, t.label));
                        None
                    }
                    Err(e) => return Err(e),
                },
                _ => None,
            };
            let new_label = if chi == 0 { x.label.clone() } else { format!("R_{{{}}}({})", t.label, x.label) };
            let new_k = x.kclass.combine(&t.kclass, -chi);
            provenance.push(if chi == 0 {
                format!("transpose {} past {} (orthogonal)", x.label, t.label)
            } else {
                format!("right mutation of {} through {} (hom dim {chi})", x.label, t.label)
            });
            let step_target = t.label.clone();
            let step_passed = x.label.clone();
            let x_entry = Entry { object: mutated, label: new_label.clone(), kclass: new_k };
            let t_entry = entries.remove(k + 1);
            entries[k] = x_entry;
            entries.insert(k, t_entry);
            // Column k is T, column k+1 is X − χ·T.
            let mut us = int_identity(n);
            us[k][k] = 0;
            us[k + 1][k] = 1;
            us[k][k + 1] = 1;
            us[k + 1][k + 1] = -chi;
            let after: Vec<KClass> = entries.iter().map(|e| e.kclass.clone()).collect();
            let g_after = gram_of(&basis, &after);
            let gram_verified = int_mul(&int_mul(&int_transpose(&us), &g_before), &us) == g_after;
            u = int_mul(&u, &us);
            steps.push(MutationStep {
                target: step_target,
                passed: step_passed,
                result: new_label,
                hom_dim: chi,
                gram_verified,
            });
            pos -= 1;
        }
    }
    let new_k: Vec<KClass> = entries.iter().map(|e| e.kclass.clone()).collect();
    let g_new = gram_of(&basis, &new_k);
    let base_change_verified =
        int_mul(&int_mul(&int_transpose(&u), &coll.gram), &u) == g_new && int_det(&u).abs() == 1;
    let outcome = MoveOutcome { steps, base_change: u, base_change_verified, fallback_reason: fallback.clone() };
    if let Some(reason) = fallback {
        provenance.push(format!("complexes dropped, K-classes only: {reason}"));
        return Ok(CascadeResult::KClassesOnly {
            labels: entries.iter().map(|e| e.label.clone()).collect(),
            kclasses: new_k,
            gram: g_new,
            outcome,
        });
    }
    let labels = entries.iter().map(|e| e.label.clone()).collect();
    let objects = entries.into_iter().map(|e| e.object.expect("engine succeeded")).collect();
    let collection = ExcCollection::new(ctx, objects, labels, provenance)?;
    Ok(CascadeResult::Complexes { collection, outcome })
}

/// Brings `O(i)⊗ρ_0`, `i = 0..=n`, to the front of the Beilinson collection,
/// right-mutating each `O(i)⊗ρ_j` (`j ≥ 1`) through `O(i+1)⊗ρ_0, …, O(n)⊗ρ_0`.
pub fn cascade_mutation(ctx: &EquivariantContext, coll: &ExcCollection) -> Result<CascadeResult> {
    let targets: Vec<usize> = (0..=ctx.n())
        .map(|i| {
            coll.index_of_label(&line_bundle_label(EqLineBundle::new(i as i64, 0)))
                .ok_or_else(|| Error::InvalidParameter(format!("collection lacks O({i})@rho_0")))
        })
        .collect::<Result<_>>()?;
    move_to_front(ctx, coll, &targets)
}

/// Orthogonal decomposition by the weight of `T_d` on each object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseBlocks {
    pub d: usize,
    pub e: usize,
    /// Exponent `c_j` with `ρ_j(ζ_e·Id) = ζ_e^{c_j}`.
    pub central_exponents: Vec<usize>,
    /// Block index of each object, `(c_j − i) mod e`.
    pub weights: Vec<usize>,
    /// Object indices per block; block 0 contains `O(0)⊗ρ_0`.
    pub blocks: Vec<Vec<usize>>,
}

impl VeroneseBlocks {
    pub fn pullback_block(&self) -> &[usize] {
        &self.blocks[0]
    }
}

/// Splits a collection of line bundles by `T_d`-weight and verifies that all
/// Ext groups between different blocks vanish.
pub fn veronese_blocks(ctx: &EquivariantContext, coll: &ExcCollection, d: usize) -> Result<VeroneseBlocks> {
    let np1 = ctx.n() + 1;
    if d == 0 || np1 % d != 0 {
        return Err(Error::NotADivisor(d, np1));
    }
    let t = central_scalar_subgroup(ctx.group(), d)?;
    let e = t.e;
    let central_exponents = ctx
        .irreps()
        .iter()
        .map(|rho| {
            let m = rho.matrix(t.generator_element);
            let lambda = m.as_scalar().ok_or_else(|| {
                Error::InvalidParameter(format!("{} is not scalar on a central element", rho.name()))
            })?;
            (0..e)
                .find(|&c| t.generator.pow(c as i64).map(|z| z == lambda).unwrap_or(false))
                .ok_or_else(|| Error::InvalidParameter(format!("{} has no T_d weight", rho.name())))
        })
        .collect::<Result<Vec<usize>>>()?;
    let mut weights = Vec::with_capacity(coll.len());
    for (obj, label) in coll.objects.iter().zip(&coll.labels) {
        let mut w = None;
        for (_, l) in obj.summands() {
            let x = (central_exponents[l.irrep] as i64 - l.twist).rem_euclid(e as i64) as usize;
            if w.is_some_and(|w| w != x) {
                return Err(Error::InvalidParameter(format!("{label} mixes T_d weights")));
            }
            w = Some(x);
        }
        weights.push(w.expect("nonempty complex"));
    }
    let mut blocks = vec![Vec::new(); e];
    for (i, &w) in weights.iter().enumerate() {
        blocks[w].push(i);
    }
    for i in 0..coll.len() {
        for j in 0..coll.len() {
            if weights[i] != weights[j] && !coll.ext[i][j].is_empty() {
                return Err(Error::OrthogonalityFailure(format!(
                    "Ext({}, {}) = {:?} across blocks",
                    coll.labels[i], coll.labels[j], coll.ext[i][j]
                )));
            }
        }
    }
    Ok(VeroneseBlocks { d, e, central_exponents, weights, blocks })
}

/// Shifts objects so that every nonzero forward Ext sits in degree 0, when a
/// consistent choice exists. Returns the shifts applied.
pub fn shift_normalize(ctx: &EquivariantContext, coll: &ExcCollection) -> Result<(ExcCollection, Vec<i32>)> {
    let n = coll.len();
    let mut shift: Vec<Option<i32>> = vec![None; n];
    for j in 0..n {
        for i in 0..j {
            let table = &coll.ext[i][j];
            if table.len() != 1 {
                continue;
            }
            let (&k, _) = table.iter().next().expect("one entry");
            let si = *shift[i].get_or_insert(0);
            let want = si + k;
            match shift[j] {
                None => shift[j] = Some(want),
                Some(s) if s == want => {}
                Some(_) => return Ok((coll.clone(), vec![0; n])),
            }
        }
    }
    let shifts: Vec<i32> = shift.into_iter().map(|s| s.unwrap_or(0)).collect();
    if shifts.iter().all(|&s| s == 0) {
        return Ok((coll.clone(), shifts));
    }
    let objects = coll.objects.iter().zip(&shifts).map(|(o, &s)| o.shift(s)).collect();
    let labels = coll
        .labels
        .iter()
        .zip(&shifts)
        .map(|(l, &s)| if s == 0 { l.clone() } else { format!("{l}[{s}]") })
        .collect();
    let mut provenance = coll.provenance.clone();
    provenance.push(format!("shift objects by {shifts:?} to concentrate Homs in degree 0"));
    Ok((ExcCollection::new(ctx, objects, labels, provenance)?, shifts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsingMode {
    CrossedProduct { d: usize },
    InvariantVeronese { d: usize },
}

#[derive(Clone, Debug)]
pub struct DsingResult {
    pub collection: ExcCollection,
    /// Objects removed from the front, by label.
    pub removed: Vec<String>,
    /// Gorenstein parameter of the graded ring.
    pub gorenstein_parameter: usize,
    pub moves: Option<MoveOutcome>,
    pub blocks: Option<VeroneseBlocks>,
    pub shifts: Vec<i32>,
    pub warnings: Vec<String>,
}

pub const FREENESS_WARNING: &str =
    "assumed: G acts freely on the complement of the origin (not checked)";

/// Exceptional collection for the graded singularity category.
pub fn dsing_collection(ctx: &EquivariantContext, mode: DsingMode) -> Result<DsingResult> {
    let np1 = ctx.n() + 1;
    let r1 = ctx.irrep_count();
    let beilinson = beilinson_collection(ctx)?;
    match mode {
        DsingMode::CrossedProduct { d } => {
            if d == 0 || np1 % d != 0 {
                return Err(Error::NotADivisor(d, np1));
            }
            let a = np1 / d;
            let removed = beilinson.labels[..a * r1].to_vec();
            Ok(DsingResult {
                collection: beilinson.drop_front(a * r1),
                removed,
                gorenstein_parameter: a,
                moves: None,
                blocks: None,
                shifts: Vec::new(),
                warnings: Vec::new(),
            })
        }
        DsingMode::InvariantVeronese { d } => {
            if !ctx.in_special_linear() {
                return Err(Error::InvalidParameter("invariant Veronese mode needs G inside SL(V)".into()));
            }
            let blocks = veronese_blocks(ctx, &beilinson, d)?;
            let a = np1 / d;
            let block = beilinson.select(blocks.pullback_block(), format!("pullback block of the d = {d} decomposition"));
            let targets: Vec<usize> = (0..a)
                .map(|i| {
                    let label = line_bundle_label(EqLineBundle::new((d * i) as i64, 0));
                    block
                        .index_of_label(&label)
                        .ok_or_else(|| Error::InvalidParameter(format!("{label} is not in the pullback block")))
                })
                .collect::<Result<_>>()?;
            let moved = move_to_front(ctx, &block, &targets)?;
            let CascadeResult::Complexes { collection, outcome } = moved else {
                let reason = moved.outcome().fallback_reason.clone().unwrap_or_default();
                return Err(Error::NonConcentratedHom(reason));
            };
            let removed = collection.labels[..a].to_vec();
            let mut result = collection.drop_front(a);
            let mut shifts = vec![0; result.len()];
            if !check_strong(&result).passed && check_exceptional(&result).passed {
                (result, shifts) = shift_normalize(ctx, &result)?;
            }
            Ok(DsingResult {
                collection: result,
                removed,
                gorenstein_parameter: a,
                moves: Some(outcome),
                blocks: Some(blocks),
                shifts,
                warnings: vec![FREENESS_WARNING.to_string()],
            })
        }
    }
}

/// Arrow multiplicities of the basic algebra of a strong exceptional collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub labels: Vec<String>,
    pub arrows: Vec<Vec<usize>>,
    /// Connected components of the underlying undirected graph, each sorted,
    /// ordered by smallest node.
    pub components: Vec<Vec<usize>>,
}

impl Quiver {
    pub fn arrow_count(&self) -> usize {
        self.arrows.iter().flatten().sum()
    }

    pub fn component_quiver(&self, c: usize) -> Quiver {
        let nodes = &self.components[c];
        Quiver {
            labels: nodes.iter().map(|&i| self.labels[i].clone()).collect(),
            arrows: nodes.iter().map(|&i| nodes.iter().map(|&j| self.arrows[i][j]).collect()).collect(),
            components: vec![(0..nodes.len()).collect()],
        }
    }
}

fn components(arrows: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = arrows.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if comp[y] == usize::MAX && (arrows[x][y] > 0 || arrows[y][x] > 0) {
                    comp[y] = id;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// `arrows(i→j) = dim Hom(E_i, E_j) − rank(⊕_{i<k<j} Hom(E_k, E_j) ⊗ Hom(E_i, E_k) → Hom(E_i, E_j))`.
pub fn quiver(ctx: &EquivariantContext, coll: &ExcCollection) -> Result<Quiver> {
    let strong = check_strong(coll);
    if !strong.passed {
        return Err(Error::NotStrong(strong.message));
    }
    let n = coll.len();
    let objs = &coll.objects;
    let mut reps: BTreeMap<(usize, usize), Vec<crate::complex::ChainMap>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if coll.ext[i][j].get(&0).copied().unwrap_or(0) > 0 {
                reps.insert((i, j), cohomology_basis(ctx, &objs[i], &objs[j])?);
            }
        }
    }
    let mut arrows = vec![vec![0usize; n]; n];
    for (&(i, j), basis) in &reps {
        let hc = hom_complex(ctx, &objs[i], &objs[j])?;
        let boundaries = hc.boundaries();
        let base_rank = boundaries.rank();
        let mut span: EchelonSpan = boundaries;
        for k in i + 1..j {
            let (Some(fs), Some(gs)) = (reps.get(&(i, k)), reps.get(&(k, j))) else { continue };
            for f in fs {
                for g in gs {
                    let h = compose_chain_maps(ctx, &objs[i], &objs[k], &objs[j], f, g)?;
                    span.insert(hc.from_chain_map(&h));
                }
            }
        }
        arrows[i][j] = basis.len() - (span.rank() - base_rank);
    }
    let components = components(&arrows);
    Ok(Quiver { labels: coll.labels.clone(), arrows, components })
}

/// `E ↦ E ⊗ O(k)` on every object.
pub fn tensor_twist(ctx: &EquivariantContext, coll: &ExcCollection, k: i64) -> Result<ExcCollection> {
    if k == 0 {
        return Ok(coll.clone());
    }
    let objects: Vec<EqComplex> = coll.objects.iter().map(|o| o.twist(k)).collect();
    let labels = objects
        .iter()
        .zip(&coll.labels)
        .map(|(o, l)| match o.as_line_bundle() {
            Some(lb) => line_bundle_label(lb),
            None => format!("({l})(+{k})"),
        })
        .collect();
    let mut provenance = coll.provenance.clone();
    provenance.push(format!("tensor with O({k})"));
    ExcCollection::new(ctx, objects, labels, provenance)
}

/// Gram matrix is unitriangular in the collection order.
pub fn gram_is_unitriangular(coll: &ExcCollection) -> bool {
    is_unitriangular(&coll.gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{builtin_group, generate_group, BuiltinGroup};
    use crate::rep::Irrep;

    fn ctx(kind: BuiltinGroup) -> EquivariantContext {
        let (g, irreps) = builtin_group(&kind).unwrap();
        EquivariantContext::new(g, irreps).unwrap()
    }

    fn q8() -> EquivariantContext {
        ctx(BuiltinGroup::BinaryDihedral { l: 2 })
    }

    fn z3() -> EquivariantContext {
        ctx(BuiltinGroup::CyclicDiagonal { m: 3, weights: vec![1, 1, 1] })
    }

    fn trivial(dim: usize) -> EquivariantContext {
        let g = generate_group(dim, &[], 8).unwrap();
        let triv = Irrep::from_generator_images(&g, 0, 1, &[]).unwrap();
        EquivariantContext::new(g, vec![triv]).unwrap()
    }

    #[test]
    fn beilinson_on_p1() {
        let c = trivial(2);
        let b = beilinson_collection(&c).unwrap();
        assert_eq!(b.hom_dims(), vec![vec![1, 2], vec![0, 1]]);
        assert!(check_strong(&b).passed);
        let rev = b.select(&[1, 0], "reverse");
        let report = check_exceptional(&rev);
        assert!(!report.passed);
        assert!(report.message.contains("backward"), "{}", report.message);
    }

    #[test]
    fn q8_beilinson_homs_are_mckay() {
        let c = q8();
        let b = beilinson_collection(&c).unwrap();
        assert_eq!(b.len(), 10);
        assert!(check_strong(&b).passed);
        let h = b.hom_dims();
        for s in 0..5 {
            for t in 0..5 {
                let expected = usize::from((s == 2) != (t == 2));
                assert_eq!(h[s][5 + t], expected, "O(0)@rho_{s} -> O(1)@rho_{t}");
            }
        }
        assert!(gram_is_unitriangular(&b));
    }

    #[test]
    fn q8_cascade() {
        let c = q8();
        let b = beilinson_collection(&c).unwrap();
        let res = cascade_mutation(&c, &b).unwrap();
        let out = res.outcome();
        assert!(out.all_verified());
        assert_eq!(out.nontrivial_mutations(), 1);
        let coll = res.collection().unwrap();
        assert_eq!(coll.labels()[..2], ["O(0)@rho_0", "O(1)@rho_0"]);
        assert_eq!(coll.labels()[3], "R_{O(1)@rho_0}(O(0)@rho_2)");
        assert!(check_exceptional(coll).passed);
        let dropped = coll.drop_front(2);
        assert!(check_strong(&dropped).passed);
        let q = quiver(&c, &dropped).unwrap();
        assert_eq!(q.components.len(), 2);
        assert_eq!(q.arrow_count(), 6);
    }

    #[test]
    fn q8_veronese_blocks() {
        let c = q8();
        let b = beilinson_collection(&c).unwrap();
        let blocks = veronese_blocks(&c, &b, 2).unwrap();
        assert_eq!(blocks.e, 2);
        let names: Vec<&str> = blocks.pullback_block().iter().map(|&i| b.labels()[i].as_str()).collect();
        assert_eq!(names, ["O(0)@rho_0", "O(0)@rho_1", "O(0)@rho_3", "O(0)@rho_4", "O(1)@rho_2"]);
        assert_eq!(veronese_blocks(&c, &b, 3).unwrap_err(), Error::NotADivisor(3, 2));
        assert_eq!(veronese_blocks(&c, &b, 1).unwrap().blocks.len(), 1);
    }

    #[test]
    fn z3_blocks_and_dsing() {
        let c = z3();
        let b = beilinson_collection(&c).unwrap();
        let blocks = veronese_blocks(&c, &b, 3).unwrap();
        let names: Vec<&str> = blocks.pullback_block().iter().map(|&i| b.labels()[i].as_str()).collect();
        assert_eq!(names, ["O(0)@rho_0", "O(1)@rho_1", "O(2)@rho_2"]);
        let res = dsing_collection(&c, DsingMode::InvariantVeronese { d: 3 }).unwrap();
        assert_eq!(res.collection.len(), 2);
        assert_eq!(res.moves.as_ref().unwrap().nontrivial_mutations(), 0);
        let q = quiver(&c, &res.collection).unwrap();
        assert_eq!(q.arrows[0][1], 3);
        let crossed = dsing_collection(&c, DsingMode::CrossedProduct { d: 3 }).unwrap();
        assert_eq!(crossed.collection.len(), 6);
        assert!(check_strong(&crossed.collection).passed);
        assert!(dsing_collection(&c, DsingMode::CrossedProduct { d: 1 }).unwrap().collection.is_empty());
    }

    #[test]
    fn twisting_keeps_gram() {
        let c = z3();
        let b = beilinson_collection(&c).unwrap();
        let t = tensor_twist(&c, &b, 2).unwrap();
        assert_eq!(t.gram(), b.gram());
        assert_eq!(t.labels()[0], "O(2)@rho_0");
        assert_eq!(tensor_twist(&c, &b, 0).unwrap(), b);
    }
}
