//! Finite subgroups of `GL_{n+1}` over a cyclotomic field.

mod builtin;

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::CycMatrix;
use crate::numbers::{lcm, CycNum};

pub use builtin::{builtin_group, BuiltinGroup};

pub const DEFAULT_ORDER_CAP: usize = 512;

/// A finite matrix group with its multiplication table and conjugacy classes.
///
/// Elements are sorted by (element order, canonical entry key) so the
/// identity is element 0 and lives alone in class 0.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    dimension: usize,
    conductor: u64,
    generators: Vec<CycMatrix>,
    elements: Vec<CycMatrix>,
    mult: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    orders: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// Element indices in an order where each element's `spanning` parent
    /// comes first.
    discovery: Vec<usize>,
    /// `spanning[x] = Some((p, g))` means `elements[x] = elements[p] · generators[g]`.
    spanning: Vec<Option<(usize, usize)>>,
}

/// The subgroup `T_d = { ζ·Id ∈ G | ζ^d = 1 }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSubgroupInfo {
    pub d: usize,
    /// Order of `T_d`.
    pub e: usize,
    /// The scalar `ζ_e`; `generator · Id` generates `T_d`.
    pub generator: CycNum,
    pub generator_element: usize,
    pub elements: Vec<usize>,
}

/// Closure of `generators` inside `GL_dimension`.
pub fn generate_group(
    dimension: usize,
    generators: &[CycMatrix],
    order_cap: usize,
) -> Result<FiniteMatrixGroup> {
    if dimension == 0 {
        return Err(Error::InvalidParameter("matrix dimension must be positive".into()));
    }
    for g in generators {
        if g.rows() != dimension || g.cols() != dimension {
            return Err(Error::DimensionMismatch(format!(
                "generator of size {}x{} in a group of dimension {dimension}",
                g.rows(),
                g.cols()
            )));
        }
    }
    let conductor = generators.iter().fold(1, |acc, g| lcm(acc, g.conductor()));
    let generators: Vec<CycMatrix> =
        generators.iter().map(|g| g.lift(conductor)).collect::<Result<_>>()?;
    for g in &generators {
        g.inverse()?;
    }

    let identity = CycMatrix::identity(dimension).lift(conductor)?;
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<String, usize> = HashMap::from([(identity.key(), 0)]);
    let mut spanning = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (gi, g) in generators.iter().enumerate() {
            let y = elements[x].try_mul(g)?;
            let key = y.key();
            if index.contains_key(&key) {
                continue;
            }
            if elements.len() >= order_cap {
                return Err(Error::OrderCapExceeded(order_cap));
            }
            index.insert(key, elements.len());
            spanning.push(Some((x, gi)));
            queue.push_back(elements.len());
            elements.push(y);
        }
    }

    let n = elements.len();
    let mut mult = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let key = elements[a].try_mul(&elements[b])?.key();
            mult[a][b] = *index.get(&key).ok_or_else(|| {
                Error::InvalidParameter("generated set is not closed under products".into())
            })?;
        }
    }
    let orders: Vec<usize> = (0..n)
        .map(|x| {
            let mut k = 1;
            let mut cur = x;
            while cur != 0 {
                cur = mult[cur][x];
                k += 1;
            }
            k
        })
        .collect();

    // Canonical ordering.
    let keys: Vec<String> = elements.iter().map(CycMatrix::key).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| (orders[a], &keys[a]).cmp(&(orders[b], &keys[b])));
    let mut new_of = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        new_of[old] = new;
    }
    let elements: Vec<CycMatrix> = perm.iter().map(|&o| elements[o].clone()).collect();
    let orders: Vec<usize> = perm.iter().map(|&o| orders[o]).collect();
    let mult: Vec<Vec<usize>> = perm
        .iter()
        .map(|&a| perm.iter().map(|&b| new_of[mult[a][b]]).collect())
        .collect();
    let discovery: Vec<usize> = (0..n).map(|old| new_of[old]).collect();
    let mut new_spanning = vec![None; n];
    for (old, s) in spanning.into_iter().enumerate() {
        new_spanning[new_of[old]] = s.map(|(p, g)| (new_of[p], g));
    }
    let inverse: Vec<usize> =
        (0..n).map(|a| (0..n).find(|&b| mult[a][b] == 0).expect("finite group")).collect();

    let mut group = FiniteMatrixGroup {
        dimension,
        conductor,
        generators,
        elements,
        mult,
        inverse,
        orders,
        classes: Vec::new(),
        class_of: Vec::new(),
        discovery,
        spanning: new_spanning,
    };
    group.compute_classes();
    Ok(group)
}

impl FiniteMatrixGroup {
    fn compute_classes(&mut self) {
        let n = self.elements.len();
        let mut assigned = vec![false; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if assigned[x] {
                continue;
            }
            let mut class: Vec<usize> =
                (0..n).map(|g| self.mult[self.mult[g][x]][self.inverse[g]]).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                assigned[y] = true;
            }
            classes.push(class);
        }
        let sort_key = |c: &Vec<usize>| {
            let rep = c[0];
            (self.orders[rep], self.elements[rep].trace().to_string(), self.elements[rep].key())
        };
        classes.sort_by_cached_key(sort_key);
        let mut class_of = vec![0usize; n];
        for (ci, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = ci;
            }
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[CycMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[CycMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &CycMatrix {
        &self.elements[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let o = self.orders[a] as i64;
        let k = k.rem_euclid(o);
        (0..k).fold(0, |acc, _| self.mult[acc][a])
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn class_rep(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    /// Class of `g^k` for `g` in class `c`.
    pub fn power_class(&self, c: usize, k: i64) -> usize {
        self.class_of[self.pow(self.class_rep(c), k)]
    }

    pub(crate) fn discovery_order(&self) -> &[usize] {
        &self.discovery
    }

    pub(crate) fn spanning(&self, a: usize) -> Option<(usize, usize)> {
        self.spanning[a]
    }

    pub fn index_of(&self, m: &CycMatrix) -> Option<usize> {
        let m = m.lift(self.conductor).ok()?;
        self.elements.iter().position(|x| *x == m)
    }

    /// Same elements as `other`, regardless of ordering or generators.
    pub fn same_elements(&self, other: &FiniteMatrixGroup) -> bool {
        self.order() == other.order() && self.elements.iter().all(|x| other.index_of(x).is_some())
    }

    /// Scalar value of element `a` if it is a scalar matrix.
    pub fn scalar_value(&self, a: usize) -> Option<CycNum> {
        self.elements[a].as_scalar()
    }
}

/// Identifies `T_d`, the scalar matrices in `G` whose scalar is a `d`-th root of unity.
pub fn central_scalar_subgroup(g: &FiniteMatrixGroup, d: usize) -> Result<CentralSubgroupInfo> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let elements: Vec<usize> = (0..g.order())
        .filter(|&a| g.scalar_value(a).is_some() && d % g.element_order(a) == 0)
        .collect();
    let e = elements.len();
    let generator = CycNum::root_of_unity(e as u64, 1)?;
    let generator_element = *elements
        .iter()
        .find(|&&a| g.scalar_value(a).as_ref() == Some(&generator))
        .ok_or_else(|| Error::InvalidParameter("scalar subgroup is not cyclic".into()))?;
    Ok(CentralSubgroupInfo { d, e, generator, generator_element, elements })
}
