//! Independent oracles shared by the integration tests: polynomial
//! substitution, brute-force traces and helper groups.

#![allow(dead_code)]

use std::collections::BTreeMap;

use eqdsing_core::groups::{builtin_group, generate_group, BuiltinGroup};
use eqdsing_core::linalg::CycMatrix;
use eqdsing_core::numbers::CycNum;
use eqdsing_core::rep::{EquivariantContext, Irrep};

pub type Poly = BTreeMap<Vec<u32>, CycNum>;

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e).or_insert_with(CycNum::zero);
            *slot += &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials(nvars - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Trace of `m` acting on degree-`degree` polynomials by `x_i ↦ Σ_j m_{ji} x_j`.
pub fn sym_trace(m: &CycMatrix, degree: u32) -> CycNum {
    let d = m.rows();
    let images: Vec<Poly> = (0..d)
        .map(|i| {
            (0..d)
                .filter(|&j| !m.get(j, i).is_zero())
                .map(|j| {
                    let mut e = vec![0; d];
                    e[j] = 1;
                    (e, m.get(j, i).clone())
                })
                .collect()
        })
        .collect();
    let mut powers: Vec<Vec<Poly>> = images
        .iter()
        .map(|img| {
            let mut v = vec![Poly::from([(vec![0; d], CycNum::one())])];
            for _ in 0..degree {
                let next = poly_mul(v.last().unwrap(), img);
                v.push(next);
            }
            v
        })
        .collect();
    let mut total = CycNum::zero();
    for mono in monomials(d, degree) {
        let mut p = Poly::from([(vec![0; d], CycNum::one())]);
        for (i, &a) in mono.iter().enumerate() {
            p = poly_mul(&p, &powers[i][a as usize]);
        }
        if let Some(c) = p.get(&mono) {
            total += c;
        }
    }
    powers.clear();
    total
}

fn det(rows: &[Vec<CycNum>]) -> CycNum {
    let k = rows.len();
    if k == 0 {
        return CycNum::one();
    }
    let mut acc = CycNum::zero();
    for c in 0..k {
        let minor: Vec<Vec<CycNum>> =
            rows[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect()).collect();
        let term = &rows[0][c] * &det(&minor);
        if c % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Sum of principal `k×k` minors.
pub fn ext_trace(m: &CycMatrix, k: usize) -> CycNum {
    let mut total = CycNum::zero();
    for s in subsets(m.rows(), k) {
        let rows: Vec<Vec<CycNum>> = s.iter().map(|&i| s.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
        total += &det(&rows);
    }
    total
}

/// Invariant dimension of degree-`degree` polynomials, averaging traces over
/// every group element.
pub fn invariant_dim_oracle(elements: &[CycMatrix], degree: u32) -> i64 {
    let mut total = CycNum::zero();
    for g in elements {
        total += &sym_trace(g, degree);
    }
    let avg = total.scale(&eqdsing_core::numbers::rat(1, elements.len() as i64));
    let r = avg.as_rat().expect("rational average").clone();
    assert!(r.is_integer(), "non-integral average {r}");
    r.to_integer().try_into().unwrap()
}

/// Power series coefficients of `Π (1 - t^{num_i}) / Π (1 - t^{den_j})` up to `max`.
pub fn rational_series(num: &[usize], den: &[usize], max: usize) -> Vec<i64> {
    let mut s = vec![0i64; max + 1];
    s[0] = 1;
    for &a in num {
        for i in (a..=max).rev() {
            s[i] -= s[i - a];
        }
    }
    for &b in den {
        for i in b..=max {
            s[i] += s[i - b];
        }
    }
    s
}

pub fn builtin_ctx(kind: BuiltinGroup) -> EquivariantContext {
    let (g, irreps) = builtin_group(&kind).unwrap();
    EquivariantContext::new(g, irreps).unwrap()
}

pub fn q8() -> EquivariantContext {
    builtin_ctx(BuiltinGroup::BinaryDihedral { l: 2 })
}

pub fn z3() -> EquivariantContext {
    builtin_ctx(BuiltinGroup::CyclicDiagonal { m: 3, weights: vec![1, 1, 1] })
}

pub fn trivial(dim: usize) -> EquivariantContext {
    let g = generate_group(dim, &[], 8).unwrap();
    let triv = Irrep::from_generator_images(&g, 0, 1, &[]).unwrap();
    EquivariantContext::new(g, vec![triv]).unwrap()
}

/// The two golden groups.
pub fn golden() -> Vec<(&'static str, EquivariantContext)> {
    vec![("q8", q8()), ("z3", z3())]
}
