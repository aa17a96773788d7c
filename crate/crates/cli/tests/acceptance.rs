//! Acceptance run: one PASS/FAIL line per criterion.

mod support;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use eqdsing::{emit_report_json, load_scenario, run_scenario};
use eqdsing_core::cohomology::{
    euler_character, ext_dim_equivariant, ext_table, EqLineBundle,
};
use eqdsing_core::collection::*;
use eqdsing_core::complex::{ext_dims, EqComplex};
use eqdsing_core::groups::{builtin_group, BuiltinGroup};
use eqdsing_core::linalg::{int_det, is_unitriangular};
use eqdsing_core::rep::{ext_power_character, molien_series, sym_power_character, CharacterVec, EquivariantContext};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::*;

const TIME_BUDGET: Duration = Duration::from_secs(60);
const MOLIEN_MAX_DEGREE: usize = 24;
const RANDOM_EXT_PAIRS: usize = 200;
const NEWTON_MAX_POWER: usize = 5;
/// Criteria whose literal statement cannot hold; they still print FAIL.
const UNATTAINABLE: &[usize] = &[5];

type Outcome = Result<String, String>;

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

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn labels(coll: &ExcCollection, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| coll.labels()[i].clone()).collect()
}

/// Sorted `(source, target, multiplicity)` edges of a quiver component.
fn edges(q: &Quiver, c: usize) -> Vec<(String, String, usize)> {
    let nodes = &q.components[c];
    let mut out = Vec::new();
    for &i in nodes {
        for &j in nodes {
            if q.arrows[i][j] > 0 {
                out.push((q.labels[i].clone(), q.labels[j].clone(), q.arrows[i][j]));
            }
        }
    }
    out.sort();
    out
}

fn star(center: &str, leaves: &[&str], inward: bool) -> Vec<(String, String, usize)> {
    let mut v: Vec<_> = leaves
        .iter()
        .map(|l| if inward { (l.to_string(), center.to_string(), 1) } else { (center.to_string(), l.to_string(), 1) })
        .collect();
    v.sort();
    v
}

fn criterion1() -> Outcome {
    let c = q8();
    let b = beilinson_collection(&c).map_err(e2s)?;
    let h = b.hom_dims();
    for i in 0..10 {
        for j in i + 1..10 {
            let (s, t) = (i % 5, j % 5);
            let expected = if i < 5 && j >= 5 { usize::from((s == 2) != (t == 2)) } else { 0 };
            ensure(h[i][j] == expected, || format!("Hom({}, {}) = {}, expected {expected}", b.labels()[i], b.labels()[j], h[i][j]))?;
        }
    }
    let strong = check_strong(&b);
    ensure(strong.passed, || strong.message.clone())?;
    Ok("layer Hom matrix is the affine D4 McKay adjacency around rho_2; forward Ext^k>=1 vanish".into())
}

fn criterion2() -> Outcome {
    let c = q8();
    let res = dsing_collection(&c, DsingMode::InvariantVeronese { d: 1 }).map_err(e2s)?;
    ensure(res.removed == ["O(0)@rho_0", "O(1)@rho_0"], || format!("removed {:?}", res.removed))?;
    let coll = &res.collection;
    ensure(coll.len() == 8, || format!("{} objects", coll.len()))?;
    let strong = check_strong(coll);
    ensure(strong.passed, || strong.message.clone())?;
    let q = quiver(&c, coll).map_err(e2s)?;
    ensure(q.components.len() == 2, || format!("{} components", q.components.len()))?;
    let a = star("O(1)@rho_2", &["O(0)@rho_1", "O(0)@rho_3", "O(0)@rho_4"], true);
    let b = star("R_{O(1)@rho_0}(O(0)@rho_2)", &["O(1)@rho_1", "O(1)@rho_3", "O(1)@rho_4"], false);
    ensure(edges(&q, 0) == a, || format!("component A {:?}", edges(&q, 0)))?;
    ensure(edges(&q, 1) == b, || format!("component B {:?}", edges(&q, 1)))?;
    let cone = coll.objects()[1].to_string();
    ensure(cone == "{0: O(0)@rho_2 -> 1: O(1)@rho_0}", || format!("cone {cone}"))?;
    Ok("8 objects, strong, two D4 components (three sources into O(1)@rho_2; cone into O(1)@rho_1,3,4)".into())
}

fn criterion3() -> Outcome {
    let c = q8();
    let b = beilinson_collection(&c).map_err(e2s)?;
    let blocks = veronese_blocks(&c, &b, 2).map_err(e2s)?;
    ensure(blocks.e == 2, || format!("e = {}", blocks.e))?;
    let pb = labels(&b, blocks.pullback_block());
    ensure(pb == ["O(0)@rho_0", "O(0)@rho_1", "O(0)@rho_3", "O(0)@rho_4", "O(1)@rho_2"], || format!("pullback {pb:?}"))?;
    for i in 0..b.len() {
        for j in 0..b.len() {
            if blocks.weights[i] != blocks.weights[j] {
                ensure(b.ext(i, j).is_empty(), || format!("Ext({}, {}) across blocks", b.labels()[i], b.labels()[j]))?;
            }
        }
    }
    let res = dsing_collection(&c, DsingMode::InvariantVeronese { d: 2 }).map_err(e2s)?;
    let q = quiver(&c, &res.collection).map_err(e2s)?;
    ensure(q.components.len() == 1, || format!("{} components", q.components.len()))?;
    let d4 = star("O(1)@rho_2", &["O(0)@rho_1", "O(0)@rho_3", "O(0)@rho_4"], true);
    ensure(edges(&q, 0) == d4, || format!("quiver {:?}", edges(&q, 0)))?;
    Ok("e = 2, pullback block matches, cross-block Ext vanish in all degrees, 4-node D4 quiver".into())
}

fn criterion4() -> Outcome {
    let c = z3();
    let b = beilinson_collection(&c).map_err(e2s)?;
    let blocks = veronese_blocks(&c, &b, 3).map_err(e2s)?;
    let rows: Vec<Vec<String>> = blocks.blocks.iter().map(|blk| labels(&b, blk)).collect();
    let expected = [
        ["O(0)@rho_0", "O(1)@rho_1", "O(2)@rho_2"],
        ["O(0)@rho_1", "O(1)@rho_2", "O(2)@rho_0"],
        ["O(0)@rho_2", "O(1)@rho_0", "O(2)@rho_1"],
    ];
    ensure(rows == expected, || format!("blocks {rows:?}"))?;
    let q = quiver(&c, &b).map_err(e2s)?;
    let hom = b.hom_dims();
    for blk in &blocks.blocks {
        let (x, y, z) = (blk[0], blk[1], blk[2]);
        ensure(q.arrows[x][y] == 3 && q.arrows[y][z] == 3, || format!("adjacent arrows in {blk:?}"))?;
        // Composition 3 ⊗ 3 = 9 → Hom of dimension 6 is onto: no length-two arrows.
        ensure(q.arrows[x][z] == 0 && hom[x][z] == 6, || format!("length-two arrows in {blk:?}"))?;
    }
    let d1 = dsing_collection(&c, DsingMode::InvariantVeronese { d: 1 }).map_err(e2s)?;
    let q1 = quiver(&c, &d1.collection).map_err(e2s)?;
    ensure(q1.components.len() == 3, || format!("{} components for d = 1", q1.components.len()))?;
    for k in 0..3 {
        let sub = q1.component_quiver(k);
        ensure(sub.arrows == vec![vec![0, 3], vec![0, 0]], || format!("component {k}: {:?}", sub.arrows))?;
    }
    let crossed = dsing_collection(&c, DsingMode::CrossedProduct { d: 3 }).map_err(e2s)?;
    let want = ["O(1)@rho_0", "O(1)@rho_1", "O(1)@rho_2", "O(2)@rho_0", "O(2)@rho_1", "O(2)@rho_2"];
    ensure(crossed.collection.labels() == want, || format!("crossed d = 3: {:?}", crossed.collection.labels()))?;
    ensure(check_strong(&crossed.collection).passed, || "crossed d = 3 not strong".into())?;
    let empty = dsing_collection(&c, DsingMode::CrossedProduct { d: 1 }).map_err(e2s)?;
    ensure(empty.collection.is_empty(), || format!("crossed d = 1 has {} objects", empty.collection.len()))?;
    Ok("3 orthogonal blocks, arrows 3/3/0, d = 1 gives three Kronecker(3), crossed d = 3 strong with 6 objects, crossed d = 1 empty".into())
}

fn criterion5() -> Outcome {
    let c = q8();
    let computed = molien_series(c.group(), MOLIEN_MAX_DEGREE).map_err(e2s)?;
    let oracle: Vec<i64> =
        (0..=MOLIEN_MAX_DEGREE).map(|m| invariant_dim_oracle(c.group().elements(), m as u32)).collect();
    let stated = rational_series(&[20], &[4, 8, 10], MOLIEN_MAX_DEGREE);
    let actual_form = rational_series(&[12], &[4, 4, 6], MOLIEN_MAX_DEGREE);
    let bd4 = ctx(BuiltinGroup::BinaryDihedral { l: 4 });
    let bd4_series = molien_series(bd4.group(), MOLIEN_MAX_DEGREE).map_err(e2s)?;
    println!("    binary_dihedral(2) Molien : {computed:?}");
    println!("    brute-force oracle        : {oracle:?}");
    println!("    (1-t^20)/((1-t^4)(1-t^8)(1-t^10)) : {stated:?}");
    println!("    (1-t^12)/((1-t^4)^2(1-t^6))       : {actual_form:?}");
    println!(
        "    supporting: Molien == oracle: {}; Molien == degrees 4,4,6 form: {}; binary_dihedral(4) (order 16) == stated series: {}",
        computed == oracle,
        computed == actual_form,
        bd4_series == stated
    );
    ensure(computed == oracle, || "Molien series disagrees with the brute-force oracle".into())?;
    if computed == stated {
        Ok("binary_dihedral(2) series equals (1-t^20)/((1-t^4)(1-t^8)(1-t^10))".into())
    } else {
        let m = (0..=MOLIEN_MAX_DEGREE).find(|&m| computed[m] != stated[m]).unwrap();
        Err(format!(
            "degree {m}: order-8 group has {} invariants, stated series has {}; the stated degrees 4, 8, 10 belong to the order-16 binary dihedral group",
            computed[m], stated[m]
        ))
    }
}

fn golden_contexts() -> Vec<(&'static str, EquivariantContext)> {
    vec![("q8", q8()), ("z3", z3())]
}

fn golden_runs() -> Vec<(&'static str, EquivariantContext, DsingMode)> {
    vec![
        ("q8_d1", q8(), DsingMode::InvariantVeronese { d: 1 }),
        ("q8_veronese_d2", q8(), DsingMode::InvariantVeronese { d: 2 }),
        ("q8_crossed_veronese_d2", q8(), DsingMode::CrossedProduct { d: 2 }),
        ("z3_d1", z3(), DsingMode::InvariantVeronese { d: 1 }),
        ("z3_veronese_d3", z3(), DsingMode::InvariantVeronese { d: 3 }),
        ("z3_crossed_d3", z3(), DsingMode::CrossedProduct { d: 3 }),
    ]
}

fn suite_koszul() -> Result<usize, String> {
    let mut count = 0;
    for (name, c) in golden_contexts() {
        let n = c.n() as i64;
        let g = c.group();
        let dual = c.v_character().conjugate();
        for m in -2 * n - 2..=2 * n + 2 {
            let mut acc = CharacterVec::zero(g);
            for k in 0..=n + 1 {
                let term = ext_power_character(g, &dual, k as usize).mul(&euler_character(&c, m - k));
                acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            ensure(acc.is_zero(), || format!("{name}: Koszul identity fails at m = {m}"))?;
            count += 1;
        }
    }
    Ok(count)
}

fn suite_serre() -> Result<usize, String> {
    let mut count = 0;
    for (name, c) in golden_contexts() {
        let n = c.n();
        ensure(c.in_special_linear(), || format!("{name} not in SL"))?;
        for a in 0..=n as i64 {
            for b in 0..=n as i64 {
                for rho in 0..c.irrep_count() {
                    for sigma in 0..c.irrep_count() {
                        let (l1, l2) = (EqLineBundle::new(a, rho), EqLineBundle::new(b, sigma));
                        let dual = EqLineBundle::new(a - n as i64 - 1, rho);
                        for k in 0..=n {
                            let x = ext_dim_equivariant(&c, l1, l2, k).map_err(e2s)?;
                            let y = ext_dim_equivariant(&c, l2, dual, n - k).map_err(e2s)?;
                            ensure(x == y, || format!("{name}: Serre fails for {l1}, {l2}, k = {k}"))?;
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

fn suite_gram() -> Result<usize, String> {
    let mut steps = 0;
    for (name, c, mode) in golden_runs() {
        let b = beilinson_collection(&c).map_err(e2s)?;
        ensure(is_unitriangular(b.gram()), || format!("{name}: Beilinson Gram"))?;
        let cascade = cascade_mutation(&c, &b).map_err(e2s)?;
        let o = cascade.outcome();
        ensure(o.all_verified(), || format!("{name}: cascade base change"))?;
        ensure(int_det(&o.base_change).abs() == 1, || format!("{name}: det U"))?;
        steps += o.steps.len();
        let res = dsing_collection(&c, mode).map_err(e2s)?;
        ensure(is_unitriangular(res.collection.gram()), || format!("{name}: dsing Gram"))?;
        ensure(res.collection.gram() == &res.collection.ext_euler_matrix(), || format!("{name}: Gram vs Ext"))?;
        if let Some(m) = &res.moves {
            ensure(m.all_verified(), || format!("{name}: dsing base change"))?;
            steps += m.steps.len();
        }
    }
    Ok(steps)
}

fn suite_newton() -> Result<usize, String> {
    let mut count = 0;
    for (name, c) in golden_contexts() {
        let g = c.group();
        let chi = CharacterVec::defining(g);
        for m in 0..=NEWTON_MAX_POWER {
            let sym = sym_power_character(g, &chi, m);
            let ext = ext_power_character(g, &chi, m);
            for cl in 0..g.class_count() {
                let rep = g.element(g.class_rep(cl));
                ensure(sym.values()[cl] == sym_trace(rep, m as u32), || format!("{name}: Sym^{m} class {cl}"))?;
                ensure(ext.values()[cl] == ext_trace(rep, m), || format!("{name}: Λ^{m} class {cl}"))?;
                count += 2;
            }
        }
    }
    Ok(count)
}

fn suite_ext_random() -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(2024);
    let ctxs = golden_contexts();
    for t in 0..RANDOM_EXT_PAIRS {
        let (name, c) = &ctxs[t % ctxs.len()];
        let n = c.n() as i64;
        let a = rng.gen_range(-3..=3);
        let b = a + rng.gen_range(-n..=n);
        let l1 = EqLineBundle::new(a, rng.gen_range(0..c.irrep_count()));
        let l2 = EqLineBundle::new(b, rng.gen_range(0..c.irrep_count()));
        let engine = ext_dims(c, &EqComplex::from_line_bundle(l1), &EqComplex::from_line_bundle(l2)).map_err(e2s)?;
        let mut closed = BTreeMap::new();
        for k in 0..=c.n() {
            let d = ext_dim_equivariant(c, l1, l2, k).map_err(e2s)?;
            if d > 0 {
                closed.insert(k as i32, d);
            }
        }
        ensure(engine == closed, || format!("{name}: {l1} -> {l2}: engine {engine:?}, closed form {closed:?}"))?;
        ensure(closed == ext_table(c, l1, l2).map_err(e2s)?, || "ext_table disagrees".into())?;
    }
    Ok(RANDOM_EXT_PAIRS)
}

fn suite_sizes() -> Result<usize, String> {
    for (name, c, mode) in golden_runs() {
        let np1 = c.n() + 1;
        let r1 = c.irrep_count();
        let res = dsing_collection(&c, mode).map_err(e2s)?;
        let len = res.collection.len();
        match mode {
            DsingMode::CrossedProduct { d } => {
                let a = np1 / d;
                ensure(len == np1 * r1 - a * r1, || format!("{name}: {len} objects"))?;
            }
            DsingMode::InvariantVeronese { d } => {
                let blocks = res.blocks.as_ref().ok_or("no blocks")?;
                let a = np1 / d;
                ensure(blocks.pullback_block().len() * blocks.e == np1 * r1, || format!("{name}: block size"))?;
                ensure(len == np1 * r1 / blocks.e - a, || format!("{name}: {len} objects"))?;
                if d == np1 {
                    let moves = res.moves.as_ref().ok_or("no moves")?;
                    ensure(moves.nontrivial_mutations() == 0, || format!("{name}: mutations for d = n + 1"))?;
                }
            }
        }
    }
    Ok(6)
}

fn criterion6() -> Outcome {
    let a = suite_koszul()?;
    let b = suite_serre()?;
    let c = suite_gram()?;
    let d = suite_newton()?;
    let e = suite_ext_random()?;
    let f = suite_sizes()?;
    Ok(format!(
        "(a) {a} Koszul identities, (b) {b} Serre pairs, (c) {c} mutation steps verified, (d) {d} trace comparisons, (e) {e} random Ext pairs, (f) {f} size formulas"
    ))
}

fn criterion7() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let names = ["q8_d1", "q8_veronese_d2", "q8_crossed_veronese_d2", "z3_d1", "z3_veronese_d3", "z3_crossed_d3"];
    for name in names {
        let s = load_scenario(&dir.join(format!("{name}.json"))).map_err(e2s)?;
        let expected = std::fs::read_to_string(dir.join("expected").join(format!("{name}.json"))).map_err(e2s)?;
        for run in 0..2 {
            let json = emit_report_json(&run_scenario(&s).map_err(e2s)?);
            ensure(json == expected, || format!("{name}: run {run} differs from the committed fixture"))?;
        }
    }
    Ok("6 golden reports byte-match their fixtures on two runs".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [(usize, fn() -> Outcome); 7] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
    ];
    let mut unexpected = 0;
    for (k, f) in criteria {
        let t = Instant::now();
        let outcome = f();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("criterion {k}: PASS ({ms} ms) {msg}"),
            Err(msg) => {
                if UNATTAINABLE.contains(&k) {
                    println!("criterion {k}: FAIL ({ms} ms) {msg} [unattainable as stated]");
                } else {
                    println!("criterion {k}: FAIL ({ms} ms) {msg}");
                    unexpected += 1;
                }
            }
        }
    }
    let total = start.elapsed();
    println!("total time {} ms (budget {} s)", total.as_millis(), TIME_BUDGET.as_secs());
    if total > TIME_BUDGET {
        println!("time budget exceeded");
        unexpected += 1;
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
