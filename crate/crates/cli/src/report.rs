//! Report types and emitters (JSON, DOT, text tables).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use eqdsing_core::collection::{CheckReport, ExcCollection, Quiver};
use serde::{Deserialize, Serialize};

pub type IntRows = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub message: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, message: impl Into<String>) -> Self {
        Check { name: name.into(), passed, message: message.into() }
    }

    pub fn from_report(name: impl Into<String>, r: &CheckReport) -> Self {
        Check::new(name, r.passed, r.message.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub description: String,
    pub order: usize,
    pub dimension: usize,
    pub n: usize,
    pub conductor: u64,
    /// Generators in the cyclotomic literal grammar.
    pub generators: Vec<Vec<Vec<String>>>,
    pub class_sizes: Vec<usize>,
    pub irrep_dims: Vec<usize>,
    /// Character table, one row per irrep, one column per class.
    pub character_table: Vec<Vec<String>>,
    pub in_special_linear: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtEntry {
    pub from: usize,
    pub to: usize,
    pub degree: i32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionOut {
    pub labels: Vec<String>,
    pub objects: Vec<String>,
    pub hom_dims: Vec<Vec<usize>>,
    /// Nonzero Ext groups outside degree 0.
    pub higher_ext: Vec<ExtEntry>,
    pub gram: IntRows,
    /// K-classes in the basis `[O(i)⊗ρ_j]`, twist-major.
    pub kclasses: IntRows,
    pub exceptional: bool,
    pub strong: bool,
    pub provenance: Vec<String>,
}

impl CollectionOut {
    pub fn new(coll: &ExcCollection) -> Self {
        let mut higher_ext = Vec::new();
        for i in 0..coll.len() {
            for j in 0..coll.len() {
                for (&degree, &dim) in coll.ext(i, j) {
                    if degree != 0 {
                        higher_ext.push(ExtEntry { from: i, to: j, degree, dim });
                    }
                }
            }
        }
        CollectionOut {
            labels: coll.labels().to_vec(),
            objects: coll.objects().iter().map(|o| o.to_string()).collect(),
            hom_dims: coll.hom_dims(),
            higher_ext,
            gram: coll.gram().clone(),
            kclasses: coll.kclasses().iter().map(|k| k.coeffs().to_vec()).collect(),
            exceptional: eqdsing_core::collection::check_exceptional(coll).passed,
            strong: eqdsing_core::collection::check_strong(coll).passed,
            provenance: coll.provenance().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOut {
    pub target: String,
    pub passed: String,
    pub result: String,
    pub hom_dim: i64,
    pub gram_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CascadeOut {
    pub steps: Vec<StepOut>,
    pub nontrivial_mutations: usize,
    pub base_change: IntRows,
    pub base_change_verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
    /// Absent when only K-classes could be tracked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collection: Option<CollectionOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kclass_labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksOut {
    pub d: usize,
    pub e: usize,
    pub central_exponents: Vec<usize>,
    pub weights: Vec<usize>,
    pub blocks: Vec<Vec<String>>,
    pub pullback_block: Vec<String>,
    pub orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsingOut {
    pub mode: String,
    pub d: usize,
    pub gorenstein_parameter: usize,
    pub removed: Vec<String>,
    pub shifts: Vec<i32>,
    pub nontrivial_mutations: usize,
    pub expected_size: usize,
    pub fullness: String,
    pub collection: CollectionOut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverOut {
    pub source: String,
    pub labels: Vec<String>,
    pub arrows: Vec<Vec<usize>>,
    pub components: Vec<Vec<usize>>,
    pub component_types: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolienOut {
    pub max_degree: usize,
    pub dims: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistOut {
    pub k: i64,
    pub source: String,
    pub collection: CollectionOut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskError {
    pub task: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub veronese_d: Option<usize>,
    pub tasks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molien: Option<MolienOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beilinson: Option<CollectionOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cascade: Option<CascadeOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BlocksOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dsing: Option<DsingOut>,
    /// Keyed by the collection the quiver belongs to.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub quivers: BTreeMap<String, QuiverOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistOut>,
    pub checks: Vec<Check>,
    pub errors: Vec<TaskError>,
    pub warnings: Vec<String>,
    pub all_checks_passed: bool,
}

impl Report {
    pub fn warn(&mut self, w: impl Into<String>) {
        let w = w.into();
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    pub fn finish(&mut self) {
        self.all_checks_passed = self.errors.is_empty() && self.checks.iter().all(|c| c.passed);
    }
}

/// Pretty JSON with a trailing newline.
pub fn emit_report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_report_json(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Directed graph with one edge per arrow.
pub fn emit_dot(q: &Quiver, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", dot_escape(name));
    for (i, l) in q.labels.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(l));
    }
    for (i, row) in q.arrows.iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            for _ in 0..m {
                let _ = writeln!(out, "  n{i} -> n{j};");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Names a connected quiver for the small shapes that occur here.
pub fn classify_component(q: &Quiver, c: usize) -> String {
    let nodes = &q.components[c];
    let arrows: Vec<(usize, usize, usize)> = nodes
        .iter()
        .flat_map(|&i| nodes.iter().map(move |&j| (i, j)))
        .filter_map(|(i, j)| (q.arrows[i][j] > 0).then_some((i, j, q.arrows[i][j])))
        .collect();
    let total: usize = arrows.iter().map(|a| a.2).sum();
    let degree = |v: usize| arrows.iter().filter(|a| a.0 == v || a.1 == v).map(|a| a.2).sum::<usize>();
    match nodes.len() {
        1 => "A1".into(),
        2 if total == 1 => "A2".into(),
        2 => format!("Kronecker({total})"),
        k if total == k - 1 && arrows.iter().all(|a| a.2 == 1) => {
            let degrees: Vec<usize> = nodes.iter().map(|&v| degree(v)).collect();
            let max = degrees.iter().copied().max().unwrap_or(0);
            if max <= 2 {
                format!("A{k}")
            } else if max == 3 && degrees.iter().filter(|&&d| d == 3).count() == 1 && k == 4 {
                "D4".into()
            } else if k == 5 && max == 4 {
                "affine D4".into()
            } else {
                format!("tree({k})")
            }
        }
        k => {
            // Consecutive nodes joined by equal multiplicities and nothing else.
            let m = q.arrows[nodes[0]][nodes[1]];
            let chain = m > 0
                && arrows.len() == k - 1
                && nodes.windows(2).all(|w| q.arrows[w[0]][w[1]] == m);
            if chain {
                format!("chain({k} nodes, {m} arrows per step)")
            } else {
                format!("quiver({k} nodes, {total} arrows)")
            }
        }
    }
}

pub fn matrix_table<T: std::fmt::Display>(labels: &[String], rows: &[Vec<T>]) -> String {
    let width = labels.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (l, row) in labels.iter().zip(rows) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
        let _ = writeln!(out, "{l:<width$} |{}", cells.join(""));
    }
    out
}
