//! Scenario files: JSON description of a group, a mode and the tasks to run.

use std::path::Path;

use eqdsing_core::groups::{builtin_group, generate_group, BuiltinGroup, FiniteMatrixGroup, DEFAULT_ORDER_CAP};
use eqdsing_core::linalg::CycMatrix;
use eqdsing_core::numbers::CycNum;
use eqdsing_core::rep::{EquivariantContext, Irrep};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    BinaryDihedral {
        l: u64,
    },
    CyclicDiagonal {
        m: u64,
        weights: Vec<i64>,
    },
    /// Generators as matrices of cyclotomic literals; each irrep is the list
    /// of its generator images, irrep 0 being the trivial one.
    Explicit {
        conductor: u64,
        generators: Vec<Vec<Vec<String>>>,
        irreps: Vec<Vec<Vec<Vec<String>>>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    CrossedProduct,
    InvariantVeronese,
    BeilinsonOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    Beilinson,
    Check,
    Gram,
    Molien { max_degree: usize },
    Cascade,
    Blocks,
    Dsing,
    Quiver,
    Twist { k: i64 },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Beilinson => "beilinson",
            Task::Check => "check",
            Task::Gram => "gram",
            Task::Molien { .. } => "molien",
            Task::Cascade => "cascade",
            Task::Blocks => "blocks",
            Task::Dsing => "dsing",
            Task::Quiver => "quiver",
            Task::Twist { .. } => "twist",
        }
    }

    /// Position in the execution order group → beilinson → ….
    fn rank(&self) -> usize {
        match self {
            Task::Molien { .. } => 0,
            Task::Beilinson => 1,
            Task::Cascade => 2,
            Task::Blocks => 3,
            Task::Dsing => 4,
            Task::Quiver => 5,
            Task::Twist { .. } => 6,
            // Checks run last so they cover every collection built.
            Task::Check => 7,
            Task::Gram => 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    /// Embed DOT text of every quiver in the report.
    #[serde(default = "yes")]
    pub embed_dot: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputOptions {
    fn default() -> Self {
        OutputOptions { embed_dot: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub group: GroupSpec,
    pub n_plus_1: usize,
    #[serde(default = "beilinson_only")]
    pub mode: Mode,
    #[serde(default)]
    pub veronese_d: Option<usize>,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub output: OutputOptions,
}

fn beilinson_only() -> Mode {
    Mode::BeilinsonOnly
}

impl Scenario {
    pub fn d(&self) -> usize {
        self.veronese_d.unwrap_or(1)
    }

    /// Tasks sorted into dependency order, duplicates removed.
    pub fn ordered_tasks(&self) -> Vec<Task> {
        let mut tasks = self.tasks.clone();
        tasks.sort_by_key(Task::rank);
        tasks.dedup_by(|a, b| a.rank() == b.rank());
        tasks
    }

    pub fn wants(&self, name: &str) -> bool {
        self.tasks.iter().any(|t| t.name() == name)
    }

    /// Checks invariants that do not need the group.
    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |m: String| Err(CliError::Validation(m));
        if self.n_plus_1 < 1 {
            return invalid("n_plus_1 must be at least 1".into());
        }
        let d = self.d();
        let veronese = matches!(self.mode, Mode::CrossedProduct | Mode::InvariantVeronese)
            && (self.wants("dsing") || self.wants("blocks"));
        if d == 0 || (veronese && self.n_plus_1 % d != 0) {
            return invalid(format!("veronese_d = {d} must divide n_plus_1 = {}", self.n_plus_1));
        }
        if self.wants("blocks") && self.n_plus_1 % d != 0 {
            return invalid(format!("veronese_d = {d} must divide n_plus_1 = {}", self.n_plus_1));
        }
        if self.wants("dsing") && self.mode == Mode::BeilinsonOnly {
            return invalid("task dsing needs mode crossed_product or invariant_veronese".into());
        }
        if let Some(Task::Molien { max_degree }) = self.tasks.iter().find(|t| t.name() == "molien") {
            if *max_degree > 200 {
                return invalid(format!("molien max_degree {max_degree} exceeds 200"));
            }
        }
        Ok(())
    }

    /// Builds the group and irreps, checking invariants that need them.
    pub fn build_context(&self) -> Result<EquivariantContext, CliError> {
        let (group, irreps) = match &self.group {
            GroupSpec::BinaryDihedral { l } => builtin_group(&BuiltinGroup::BinaryDihedral { l: *l })?,
            GroupSpec::CyclicDiagonal { m, weights } => {
                builtin_group(&BuiltinGroup::CyclicDiagonal { m: *m, weights: weights.clone() })?
            }
            GroupSpec::Explicit { conductor, generators, irreps } => explicit_group(*conductor, generators, irreps)?,
        };
        if group.dimension() != self.n_plus_1 {
            return Err(CliError::Validation(format!(
                "n_plus_1 = {} but the group acts on dimension {}",
                self.n_plus_1,
                group.dimension()
            )));
        }
        let ctx = EquivariantContext::new(group, irreps)?;
        if self.mode == Mode::InvariantVeronese && !ctx.in_special_linear() {
            return Err(CliError::Validation(
                "mode invariant_veronese requires the group inside SL (determinant character trivial)".into(),
            ));
        }
        Ok(ctx)
    }
}

fn parse_matrix(rows: &[Vec<String>], conductor: u64, what: &str) -> Result<CycMatrix, CliError> {
    let parsed = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| {
                    let x: CycNum = s.parse()?;
                    Ok(x.lift(eqdsing_core::numbers::lcm(conductor, x.conductor()))?)
                })
                .collect::<Result<Vec<_>, CliError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    CycMatrix::from_rows(parsed).map_err(|e| CliError::Validation(format!("{what}: {e}")))
}

fn explicit_group(
    conductor: u64,
    generators: &[Vec<Vec<String>>],
    irreps: &[Vec<Vec<Vec<String>>>],
) -> Result<(FiniteMatrixGroup, Vec<Irrep>), CliError> {
    if generators.is_empty() {
        return Err(CliError::Validation("explicit group needs at least one generator".into()));
    }
    let gens = generators
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(m, conductor, &format!("generator {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let group = generate_group(gens[0].rows(), &gens, DEFAULT_ORDER_CAP)?;
    let irreps = irreps
        .iter()
        .enumerate()
        .map(|(j, images)| {
            let mats = images
                .iter()
                .map(|m| parse_matrix(m, conductor, &format!("irrep {j}")))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = mats.first().map_or(1, CycMatrix::rows);
            Ok(Irrep::from_generator_images(&group, j, dim, &mats)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((group, irreps))
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let scenario: Scenario = serde_json::from_str(text)
        .map_err(|e| CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}
