//! Pipeline orchestration: scenario in, report out.

use eqdsing_core::collection::{
    beilinson_collection, cascade_mutation, check_exceptional, check_strong, dsing_collection, quiver,
    tensor_twist, veronese_blocks, CascadeResult, DsingMode, ExcCollection, FREENESS_WARNING,
};
use eqdsing_core::linalg::is_unitriangular;
use eqdsing_core::rep::{molien_series, EquivariantContext};

use crate::report::*;
use crate::scenario::{GroupSpec, Mode, Scenario, Task};
use crate::CliError;

pub const WEIGHT_CONVENTION_WARNING: &str = "T_d weight of O(i)@rho_j is (c_j - i) mod e, where rho_j(zeta_e * Id) = zeta_e^c_j; \
the sign is fixed by requiring the Z/3 pullback block to be {O(0)@rho_0, O(1)@rho_1, O(2)@rho_2}";

pub const PROJ_WARNING: &str = "Proj of the degree-3 Veronese of the Z/3 invariant ring is P^2 (n = 2), \
not P^3 as one description of this example states; the computation uses n = 2";

pub const FULLNESS: &str = "full (by Beilinson's theorem and Orlov's removal theorem; not verified here)";

fn describe(spec: &GroupSpec) -> String {
    match spec {
        GroupSpec::BinaryDihedral { l } => format!("binary_dihedral(l={l})"),
        GroupSpec::CyclicDiagonal { m, weights } => format!("cyclic_diagonal(m={m}, weights={weights:?})"),
        GroupSpec::Explicit { conductor, generators, .. } => {
            format!("explicit(conductor={conductor}, {} generators)", generators.len())
        }
    }
}

fn group_summary(s: &Scenario, ctx: &EquivariantContext) -> GroupSummary {
    let g = ctx.group();
    GroupSummary {
        description: describe(&s.group),
        order: g.order(),
        dimension: g.dimension(),
        n: ctx.n(),
        conductor: g.conductor(),
        generators: g
            .generators()
            .iter()
            .map(|m| m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect())
            .collect(),
        class_sizes: g.class_sizes(),
        irrep_dims: ctx.irreps().iter().map(|r| r.dim()).collect(),
        character_table: (0..ctx.irrep_count())
            .map(|j| ctx.irrep_character(j).values().iter().map(|x| x.to_string()).collect())
            .collect(),
        in_special_linear: ctx.in_special_linear(),
    }
}

fn is_z3_example(spec: &GroupSpec) -> bool {
    matches!(spec, GroupSpec::CyclicDiagonal { m: 3, weights } if weights == &[1, 1, 1])
}

struct Run<'a> {
    s: &'a Scenario,
    ctx: EquivariantContext,
    report: Report,
    beilinson: Option<ExcCollection>,
    dsing: Option<ExcCollection>,
    /// Every collection built in this run, for the check and gram tasks.
    built: Vec<(String, ExcCollection)>,
}

impl Run<'_> {
    fn fail(&mut self, task: &str, e: impl std::fmt::Display) {
        self.report.errors.push(TaskError { task: task.into(), message: e.to_string() });
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, message: impl Into<String>) {
        self.report.checks.push(Check::new(name, passed, message));
    }

    fn beilinson(&mut self) -> Result<ExcCollection, CliError> {
        if let Some(b) = &self.beilinson {
            return Ok(b.clone());
        }
        let b = beilinson_collection(&self.ctx)?;
        self.beilinson = Some(b.clone());
        self.built.push(("beilinson".into(), b.clone()));
        Ok(b)
    }

    fn task(&mut self, t: &Task) -> Result<(), CliError> {
        match t {
            Task::Molien { max_degree } => {
                let dims = molien_series(self.ctx.group(), *max_degree)?;
                self.report.molien = Some(MolienOut { max_degree: *max_degree, dims });
            }
            Task::Beilinson => {
                let b = self.beilinson()?;
                self.report.beilinson = Some(CollectionOut::new(&b));
            }
            Task::Cascade => {
                let b = self.beilinson()?;
                let res = cascade_mutation(&self.ctx, &b)?;
                let o = res.outcome();
                self.check(
                    "cascade base change",
                    o.all_verified(),
                    format!("U^T G U = G' and |det U| = 1 over {} steps", o.steps.len()),
                );
                let mut out = CascadeOut {
                    steps: o
                        .steps
                        .iter()
                        .map(|s| StepOut {
                            target: s.target.clone(),
                            passed: s.passed.clone(),
                            result: s.result.clone(),
                            hom_dim: s.hom_dim,
                            gram_verified: s.gram_verified,
                        })
                        .collect(),
                    nontrivial_mutations: o.nontrivial_mutations(),
                    base_change: o.base_change.clone(),
                    base_change_verified: o.base_change_verified,
                    fallback_reason: o.fallback_reason.clone(),
                    collection: None,
                    kclass_labels: None,
                };
                match &res {
                    CascadeResult::Complexes { collection, .. } => {
                        out.collection = Some(CollectionOut::new(collection));
                        self.built.push(("cascade".into(), collection.clone()));
                    }
                    CascadeResult::KClassesOnly { labels, .. } => out.kclass_labels = Some(labels.clone()),
                }
                self.report.cascade = Some(out);
            }
            Task::Blocks => {
                let b = self.beilinson()?;
                self.report.warn(WEIGHT_CONVENTION_WARNING);
                let blocks = veronese_blocks(&self.ctx, &b, self.s.d())?;
                let names = |idx: &[usize]| idx.iter().map(|&i| b.labels()[i].clone()).collect::<Vec<_>>();
                self.report.blocks = Some(BlocksOut {
                    d: blocks.d,
                    e: blocks.e,
                    central_exponents: blocks.central_exponents.clone(),
                    weights: blocks.weights.clone(),
                    blocks: blocks.blocks.iter().map(|blk| names(blk)).collect(),
                    pullback_block: names(blocks.pullback_block()),
                    orthogonal: true,
                });
                self.check("blocks orthogonal", true, format!("{} blocks, no Ext across blocks", blocks.e));
            }
            Task::Dsing => self.dsing()?,
            Task::Quiver => {
                let mut sources = Vec::new();
                if self.beilinson.is_some() || self.dsing.is_none() {
                    sources.push(("beilinson".to_string(), self.beilinson()?));
                }
                if let Some(d) = &self.dsing {
                    sources.push(("dsing".to_string(), d.clone()));
                }
                for (name, coll) in sources {
                    match quiver(&self.ctx, &coll) {
                        Ok(q) => {
                            let dot = self
                                .s
                                .output
                                .embed_dot
                                .then(|| emit_dot(&q, &format!("{}_{name}", self.s.name)));
                            let component_types = (0..q.components.len()).map(|c| classify_component(&q, c)).collect();
                            self.report.quivers.insert(
                                name.clone(),
                                QuiverOut {
                                    source: name,
                                    labels: q.labels.clone(),
                                    arrows: q.arrows.clone(),
                                    components: q.components.clone(),
                                    component_types,
                                    dot,
                                },
                            );
                        }
                        Err(e) => self.fail(&format!("quiver ({name})"), e),
                    }
                }
            }
            Task::Twist { k } => {
                let (source, coll) = match &self.dsing {
                    Some(d) => ("dsing".to_string(), d.clone()),
                    None => ("beilinson".to_string(), self.beilinson()?),
                };
                let twisted = tensor_twist(&self.ctx, &coll, *k)?;
                self.check(
                    "twist keeps gram",
                    twisted.gram() == coll.gram(),
                    format!("tensoring {source} with O({k})"),
                );
                self.built.push((format!("twist({k})"), twisted.clone()));
                self.report.twist = Some(TwistOut { k: *k, source, collection: CollectionOut::new(&twisted) });
            }
            Task::Check => {
                for (name, coll) in self.built.clone() {
                    self.report.checks.push(Check::from_report(format!("{name} exceptional"), &check_exceptional(&coll)));
                    // The crossed-product and Beilinson collections are strong by theory; other
                    // collections only report strongness.
                    let strong = check_strong(&coll);
                    if name == "beilinson" || name == "dsing" {
                        self.report.checks.push(Check::from_report(format!("{name} strong"), &strong));
                    }
                }
            }
            Task::Gram => {
                for (name, coll) in self.built.clone() {
                    self.check(
                        format!("{name} gram unitriangular"),
                        is_unitriangular(coll.gram()),
                        format!("{} objects", coll.len()),
                    );
                    self.check(
                        format!("{name} gram matches ext tables"),
                        coll.gram() == &coll.ext_euler_matrix(),
                        "K-theoretic Euler pairings equal alternating Ext sums",
                    );
                }
            }
        }
        Ok(())
    }

    fn dsing(&mut self) -> Result<(), CliError> {
        let d = self.s.d();
        let mode = match self.s.mode {
            Mode::CrossedProduct => DsingMode::CrossedProduct { d },
            Mode::InvariantVeronese => DsingMode::InvariantVeronese { d },
            Mode::BeilinsonOnly => return Err(CliError::Validation("dsing needs a Veronese mode".into())),
        };
        let np1 = self.ctx.n() + 1;
        let r1 = self.ctx.irrep_count();
        if mode == (DsingMode::InvariantVeronese { d }) {
            self.report.warn(FREENESS_WARNING);
            self.report.warn(WEIGHT_CONVENTION_WARNING);
            if d == 3 && is_z3_example(&self.s.group) {
                self.report.warn(PROJ_WARNING);
            }
        }
        let res = dsing_collection(&self.ctx, mode)?;
        for w in &res.warnings {
            self.report.warn(w.clone());
        }
        let a = res.gorenstein_parameter;
        let (mode_name, expected) = match mode {
            DsingMode::CrossedProduct { .. } => ("crossed_product", np1 * r1 - a * r1),
            DsingMode::InvariantVeronese { .. } => {
                let e = res.blocks.as_ref().map_or(1, |b| b.e);
                ("invariant_veronese", np1 * r1 / e - a)
            }
        };
        let coll = &res.collection;
        self.check(
            "dsing size formula",
            coll.len() == expected,
            format!("{} objects, expected {expected}", coll.len()),
        );
        let nontrivial = res.moves.as_ref().map_or(0, |m| m.nontrivial_mutations());
        if let Some(m) = &res.moves {
            self.check(
                "dsing base change",
                m.all_verified(),
                format!("U^T G U = G' and |det U| = 1 over {} steps", m.steps.len()),
            );
        }
        if matches!(mode, DsingMode::InvariantVeronese { .. }) && d == np1 {
            self.check(
                "no mutation for d = n + 1",
                nontrivial == 0,
                format!("{nontrivial} nontrivial mutations"),
            );
        }
        self.report.dsing = Some(DsingOut {
            mode: mode_name.into(),
            d,
            gorenstein_parameter: a,
            removed: res.removed.clone(),
            shifts: res.shifts.clone(),
            nontrivial_mutations: nontrivial,
            expected_size: expected,
            fullness: FULLNESS.into(),
            collection: CollectionOut::new(coll),
        });
        self.dsing = Some(coll.clone());
        self.built.push(("dsing".into(), coll.clone()));
        Ok(())
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::CrossedProduct => "crossed_product",
        Mode::InvariantVeronese => "invariant_veronese",
        Mode::BeilinsonOnly => "beilinson_only",
    }
}

/// Runs every task of a validated scenario. Task failures are recorded in
/// the report; only invalid scenarios and group construction errors abort.
pub fn run_scenario(s: &Scenario) -> Result<Report, CliError> {
    s.validate()?;
    let ctx = s.build_context()?;
    let tasks = s.ordered_tasks();
    let mut report = Report {
        scenario: s.name.clone(),
        mode: mode_name(s.mode).into(),
        veronese_d: s.veronese_d,
        tasks: tasks.iter().map(|t| t.name().to_string()).collect(),
        group: Some(group_summary(s, &ctx)),
        ..Report::default()
    };
    report.checks.push(Check::new("irreps verified", true, format!("{} irreps", ctx.irrep_count())));
    let mut run = Run { s, ctx, report, beilinson: None, dsing: None, built: Vec::new() };
    for t in &tasks {
        if let Err(e) = run.task(t) {
            run.fail(t.name(), e);
        }
    }
    let mut report = run.report;
    report.finish();
    Ok(report)
}
