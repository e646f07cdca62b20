//! Sweep execution and per-preset post-processing.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{
    emit_metrics, emit_snapshot_csv, sha256_file, write_json, DeltaRow, FileEntry, FitReport,
    FluxRow, GapRow, GradientRow, GradientTable, JumpReport, MetricRow, OdeReport, RunEntry,
    RunManifest, RunSummary, Summary,
};
use super::spec::{epsilon_tag, validate_spec, ExperimentSpec, Overrides, Preset};
use super::HarnessError;
use crate::analysis::{
    detect_jump, fit_power_law, interface_flux, interface_gradient, l2_space, l2_space_time,
    sup_distance, threshold_crossing, BoundsAudit, EnergyAccumulator, EnergyReport, GradientSide,
    RegionSelector, JUMP_THRESHOLD,
};
use crate::coefficients::{BistableReaction, DiffusivityProfile, FaceAveraging};
use crate::grid::{Grid1D, InterfaceSide, Region};
use crate::limits::{asymptotic_profile, solve_ode_limit, SubgridProblem};
use crate::solver::{initial_field, solve_observed, Field, Trajectory, BOUND_SLACK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunKind {
    /// The heterogeneous problem, sharp or smoothed.
    Interface,
    /// Zero-flux problem on the inner region.
    Neumann,
    /// Pointwise reaction ODE.
    Ode,
}

impl RunKind {
    fn name(self) -> &'static str {
        match self {
            RunKind::Interface => "interface",
            RunKind::Neumann => "neumann",
            RunKind::Ode => "ode",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    /// Also the snapshot file stem after `snapshots_`.
    pub label: String,
    pub kind: RunKind,
    pub epsilon: f64,
    pub delta: Option<f64>,
}

/// The independent runs a spec resolves to, in output order.
pub fn plan_runs(spec: &ExperimentSpec) -> Vec<RunPlan> {
    let mut plans = Vec::new();
    for &eps in &spec.epsilons {
        let tag = epsilon_tag(eps);
        plans.push(RunPlan {
            label: tag.clone(),
            kind: RunKind::Interface,
            epsilon: eps,
            delta: None,
        });
        for &d in &spec.deltas {
            plans.push(RunPlan {
                label: format!("{tag}_delta{d:e}"),
                kind: RunKind::Interface,
                epsilon: eps,
                delta: Some(d),
            });
        }
    }
    match spec.preset {
        Some(Preset::Fig3LimitComparison) => plans.push(RunPlan {
            label: "neumann".into(),
            kind: RunKind::Neumann,
            epsilon: 0.0,
            delta: None,
        }),
        Some(Preset::OdeLimitCheck) => plans.push(RunPlan {
            label: "ode".into(),
            kind: RunKind::Ode,
            epsilon: 0.0,
            delta: None,
        }),
        _ => {}
    }
    plans
}

struct RunOutput {
    traj: Trajectory,
    profile: Option<DiffusivityProfile>,
    energy: Option<EnergyReport>,
    bounds: BoundsAudit,
}

struct Outcome {
    plan: RunPlan,
    result: Result<RunOutput, String>,
    wall_time_s: f64,
}

impl Outcome {
    fn ok(&self) -> Option<&RunOutput> {
        self.result.as_ref().ok()
    }
}

struct Context {
    spec: ExperimentSpec,
    grid: Arc<Grid1D>,
    reaction: BistableReaction,
    u0: Field,
}

fn observed_run(
    ctx: &Context,
    grid: &Arc<Grid1D>,
    profile: DiffusivityProfile,
    u0: &Field,
) -> Result<RunOutput, String> {
    let mut energy = EnergyAccumulator::new(&profile, &ctx.reaction);
    let mut bounds = BoundsAudit::new(ctx.reaction.upper_bound(), BOUND_SLACK);
    let traj = solve_observed(
        grid,
        &profile,
        &ctx.reaction,
        u0,
        &ctx.spec.time,
        FaceAveraging::Harmonic,
        |f| {
            energy.push(f);
            bounds.push(f);
        },
    )
    .map_err(|e| e.to_string())?;
    let energy = energy.finish().ok();
    Ok(RunOutput {
        traj,
        profile: Some(profile),
        energy,
        bounds,
    })
}

fn execute(ctx: &Context, plan: &RunPlan) -> Outcome {
    let start = Instant::now();
    let result = (|| match plan.kind {
        RunKind::Interface => {
            let profile = match plan.delta {
                None => DiffusivityProfile::sharp(ctx.grid.clone(), plan.epsilon),
                Some(d) => DiffusivityProfile::smoothed(ctx.grid.clone(), plan.epsilon, d),
            }
            .map_err(|e| e.to_string())?;
            observed_run(ctx, &ctx.grid, profile, &ctx.u0)
        }
        RunKind::Neumann => {
            let sub = SubgridProblem::inner(&ctx.grid, &ctx.u0).map_err(|e| e.to_string())?;
            let profile = DiffusivityProfile::unit(sub.grid.clone());
            observed_run(ctx, &sub.grid, profile, &sub.u0)
        }
        RunKind::Ode => {
            let traj = solve_ode_limit(&ctx.u0, &ctx.reaction, &ctx.spec.time.snapshot_times)
                .map_err(|e| e.to_string())?;
            let mut bounds = BoundsAudit::new(ctx.reaction.upper_bound(), BOUND_SLACK);
            traj.fields().iter().for_each(|f| bounds.push(f));
            Ok(RunOutput {
                traj,
                profile: None,
                energy: None,
                bounds,
            })
        }
    })();
    Outcome {
        plan: plan.clone(),
        result,
        wall_time_s: start.elapsed().as_secs_f64(),
    }
}

/// Runs a built-in preset with optional overrides.
pub fn run_preset(preset: Preset, overrides: &Overrides) -> Result<RunManifest, HarnessError> {
    run_spec(&ExperimentSpec::preset(preset), overrides)
}

/// Validates, executes every run on a pool of `spec.workers` threads and
/// writes all artifacts. Failed runs are listed in the manifest and reported
/// as [`HarnessError::RunsFailed`] after everything else has been written.
pub fn run_spec(spec: &ExperimentSpec, overrides: &Overrides) -> Result<RunManifest, HarnessError> {
    let started = Instant::now();
    let mut spec = spec.clone();
    spec.apply_overrides(overrides);
    validate_spec(&spec)?;

    let grid = spec.build_grid()?;
    let reaction = spec.build_reaction()?;
    let u0 = initial_field(grid.clone(), &spec.initial);
    let ctx = Context {
        spec: spec.clone(),
        grid,
        reaction,
        u0,
    };

    let dir = spec.output_dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;

    let plans = plan_runs(&spec);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| HarnessError::Validation(vec![format!("thread pool: {e}")]))?;
    // Ordered collection keeps the output independent of scheduling.
    let outcomes: Vec<Outcome> = pool.install(|| plans.par_iter().map(|p| execute(&ctx, p)).collect());

    let mut file_names = Vec::new();
    for o in &outcomes {
        if let Some(out) = o.ok() {
            let name = format!("snapshots_{}.csv", o.plan.label);
            emit_snapshot_csv(&out.traj, &dir.join(&name))?;
            file_names.push(name);
        }
    }

    let (metrics, summary) = post_process(&ctx, &outcomes);
    emit_metrics(&metrics, &dir.join("metrics.csv"))?;
    file_names.push("metrics.csv".into());
    write_json(&summary, &dir.join("summary.json"))?;
    file_names.push("summary.json".into());

    let files = file_names
        .into_iter()
        .map(|name| file_entry(&dir, name))
        .collect::<Result<Vec<_>, _>>()?;

    let runs = outcomes
        .iter()
        .map(|o| {
            let (steps, newton_iterations) = o
                .ok()
                .map(|r| (r.traj.meta.steps, r.traj.meta.newton_iterations))
                .unwrap_or((0, 0));
            RunEntry {
                run: o.plan.label.clone(),
                kind: o.plan.kind.name().into(),
                epsilon: o.plan.epsilon,
                delta: o.plan.delta,
                status: if o.result.is_ok() { "ok" } else { "failed" }.into(),
                error: o.result.as_ref().err().cloned(),
                wall_time_s: o.wall_time_s,
                steps,
                newton_iterations,
            }
        })
        .collect();

    let mut environment = BTreeMap::new();
    environment.insert("workers".into(), spec.workers.to_string());
    environment.insert("os".into(), std::env::consts::OS.into());
    environment.insert("arch".into(), std::env::consts::ARCH.into());

    let manifest = RunManifest {
        software: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        preset: preset_name(&spec),
        notes: preset_notes(&spec),
        overrides: overrides.describe(),
        spec,
        runs,
        files,
        wall_time_s: started.elapsed().as_secs_f64(),
        environment,
    };
    write_json(&manifest, &dir.join("manifest.json"))?;

    let failed = manifest.failed_runs();
    if failed > 0 {
        return Err(HarnessError::RunsFailed {
            failed,
            total: manifest.runs.len(),
            manifest: Box::new(manifest),
        });
    }
    Ok(manifest)
}

fn file_entry(dir: &Path, name: String) -> Result<FileEntry, HarnessError> {
    let path = dir.join(&name);
    let bytes = std::fs::metadata(&path)
        .map_err(|e| HarnessError::io(&path, e))?
        .len();
    Ok(FileEntry {
        sha256: sha256_file(&path)?,
        name,
        bytes,
    })
}

fn preset_name(spec: &ExperimentSpec) -> String {
    spec.preset
        .map(|p| p.name().to_string())
        .unwrap_or_else(|| "custom".into())
}

fn preset_notes(spec: &ExperimentSpec) -> Vec<String> {
    let mut notes = Vec::new();
    match spec.preset {
        Some(Preset::Fig2Snapshots) => notes.push(
            "epsilon values e-1, e-2, e-4, e-8 are a preset choice, not a published setting".into(),
        ),
        Some(Preset::Fig4GradientDecay) => notes.push(
            "report times 0.01, 0.04, 0.09 follow the fitted values; the profile figure is captioned with 0.01, 0.03, 0.05".into(),
        ),
        Some(Preset::Fig5Longtime) => notes.push(
            "snapshot times 0, 0.1, 1, 10, 40, 100 are a preset choice, not a published setting; dt switches to 1e-3 after t = 1".into(),
        ),
        Some(Preset::DeltaConvergence) => notes.push(
            "smoothed runs blend the two diffusivities with a quintic smoothstep over an outer collar of width delta".into(),
        ),
        _ => {}
    }
    notes
}

fn post_process(ctx: &Context, outcomes: &[Outcome]) -> (Vec<MetricRow>, Summary) {
    let spec = &ctx.spec;
    let mut metrics = Vec::new();
    let mut summary = Summary {
        preset: preset_name(spec),
        ..Summary::default()
    };

    for o in outcomes {
        let label = o.plan.label.as_str();
        let mut run = RunSummary {
            run: o.plan.label.clone(),
            kind: o.plan.kind.name().into(),
            epsilon: o.plan.epsilon,
            delta: o.plan.delta,
            status: "ok".into(),
            error: None,
            energy: None,
            bounds: None,
        };
        match &o.result {
            Err(e) => {
                run.status = "failed".into();
                run.error = Some(e.clone());
            }
            Ok(out) => {
                metrics.push(MetricRow::new(label, "steps", out.traj.meta.steps as f64));
                metrics.push(MetricRow::new(label, "min", out.bounds.min));
                metrics.push(MetricRow::new(label, "max", out.bounds.max));
                if let Some(e) = &out.energy {
                    metrics.push(MetricRow::new(label, "energy_lhs", e.lhs));
                    metrics.push(MetricRow::new(label, "energy_rhs", e.rhs));
                    metrics.push(MetricRow::new(label, "energy_identity_residual", e.identity_residual));
                    metrics.push(MetricRow::new(label, "energy_inner_gradient", e.bound_inner));
                    metrics.push(MetricRow::new(label, "energy_c1_bound", e.c1_bound));
                }
                run.energy = out.energy;
                run.bounds = Some(out.bounds);
            }
        }
        summary.runs.push(run);
    }

    let sharp: Vec<(&RunPlan, &RunOutput)> = outcomes
        .iter()
        .filter(|o| o.plan.kind == RunKind::Interface && o.plan.delta.is_none())
        .filter_map(|o| o.ok().map(|r| (&o.plan, r)))
        .collect();
    let t_end = spec.time.t_end;

    match spec.preset {
        Some(Preset::Fig2Snapshots) => {
            let mut rows = Vec::new();
            for (plan, out) in &sharp {
                if let Some(row) = flux_row(plan, out, t_end) {
                    push_flux_metrics(&mut metrics, &plan.label, &row);
                    rows.push(row);
                }
            }
            summary.fluxes = Some(rows);
        }
        Some(Preset::Fig3LimitComparison) => {
            let neumann = outcomes
                .iter()
                .find(|o| o.plan.kind == RunKind::Neumann)
                .and_then(Outcome::ok);
            if let Some(n) = neumann {
                let target = n.traj.last();
                let mut rows = Vec::new();
                for (plan, out) in &sharp {
                    if let Some(row) = gap_row(ctx, plan, out, target) {
                        metrics.push(MetricRow::new(&plan.label, "sup_gap", row.sup_gap));
                        metrics.push(MetricRow::new(&plan.label, "l2_gap", row.l2_gap));
                        metrics.push(MetricRow::new(&plan.label, "max_excess", row.max_excess));
                        rows.push(row);
                    }
                }
                summary.neumann_gaps = Some(rows);
            }
        }
        Some(Preset::Fig4GradientDecay) => {
            let (table, fits) = gradient_table(spec, outcomes);
            for row in &table.rows {
                for (t, g) in table.times.iter().zip(&row.gradients) {
                    if let Some(g) = g {
                        metrics.push(MetricRow::new(
                            &epsilon_tag(row.epsilon),
                            &format!("grad_inner_t{t}"),
                            *g,
                        ));
                    }
                }
            }
            for f in &fits {
                let run = format!("fit_t{}", f.t);
                metrics.push(MetricRow::new(&run, "a", f.a));
                metrics.push(MetricRow::new(&run, "b", f.b));
                metrics.push(MetricRow::new(&run, "residual", f.residual));
            }
            summary.gradient_table = Some(table);
            summary.fits = Some(fits);
        }
        Some(Preset::Fig5Longtime) => {
            if let Some((plan, out)) = sharp.first() {
                let report = jump_report(ctx, plan, out);
                for (k, j) in report.found.iter().enumerate() {
                    metrics.push(MetricRow::new(&plan.label, &format!("jump{k}_x"), j.x));
                    metrics.push(MetricRow::new(&plan.label, &format!("jump{k}_height"), j.height));
                }
                metrics.push(MetricRow::new(&plan.label, "step_distance", report.step_distance));
                summary.jumps = Some(report);
            }
        }
        Some(Preset::DeltaConvergence) => {
            let mut rows = Vec::new();
            for (plan, reference) in &sharp {
                for o in outcomes {
                    let (Some(delta), Some(out)) = (o.plan.delta, o.ok()) else {
                        continue;
                    };
                    if o.plan.epsilon != plan.epsilon {
                        continue;
                    }
                    if let Ok(d) = l2_space_time(&out.traj, &reference.traj, RegionSelector::All) {
                        metrics.push(MetricRow::new(&o.plan.label, "l2_qt_to_sharp", d));
                        rows.push(DeltaRow {
                            epsilon: plan.epsilon,
                            delta,
                            l2_qt: d,
                        });
                    }
                }
            }
            summary.delta_distances = Some(rows);
        }
        Some(Preset::OdeLimitCheck) => {
            let ode = outcomes
                .iter()
                .find(|o| o.plan.kind == RunKind::Ode)
                .and_then(Outcome::ok);
            if let (Some(ode), Some((plan, out))) = (ode, sharp.first()) {
                let report = ode_report(plan, out, ode, t_end, 0.1);
                metrics.push(MetricRow::new(&plan.label, "ode_max_diff", report.max_diff));
                summary.ode = Some(report);
            }
        }
        None => {}
    }
    (metrics, summary)
}

fn flux_row(plan: &RunPlan, out: &RunOutput, t: f64) -> Option<FluxRow> {
    let state = out.traj.at(t)?;
    let profile = out.profile.as_ref()?;
    let grad_inner = interface_gradient(state, InterfaceSide::Left, GradientSide::InnerSide).ok()?;
    let grad_outer = interface_gradient(state, InterfaceSide::Left, GradientSide::OuterSide).ok()?;
    let flux = interface_flux(state, profile, InterfaceSide::Left).ok()?;
    Some(FluxRow {
        epsilon: plan.epsilon,
        t,
        grad_inner,
        grad_outer,
        flux,
        flux_ratio: plan.epsilon * grad_outer.abs() / grad_inner.abs(),
    })
}

fn push_flux_metrics(metrics: &mut Vec<MetricRow>, label: &str, row: &FluxRow) {
    metrics.push(MetricRow::new(label, "grad_inner_left", row.grad_inner));
    metrics.push(MetricRow::new(label, "grad_outer_left", row.grad_outer));
    metrics.push(MetricRow::new(label, "flux_left", row.flux));
    metrics.push(MetricRow::new(label, "flux_ratio_left", row.flux_ratio));
}

fn gap_row(ctx: &Context, plan: &RunPlan, out: &RunOutput, target: &Field) -> Option<GapRow> {
    let state = out.traj.last();
    let inner = state.restrict(ctx.grid.inner_cells()).ok()?;
    let max_excess = inner
        .values()
        .iter()
        .zip(target.values())
        .map(|(a, b)| a - b)
        .fold(f64::NEG_INFINITY, f64::max);
    Some(GapRow {
        epsilon: plan.epsilon,
        t: state.t(),
        sup_gap: sup_distance(&inner, target, RegionSelector::All).ok()?,
        l2_gap: l2_space(&inner, target, RegionSelector::All).ok()?,
        max_excess,
    })
}

fn gradient_table(spec: &ExperimentSpec, outcomes: &[Outcome]) -> (GradientTable, Vec<FitReport>) {
    let times = spec.report_times.clone();
    let rows: Vec<GradientRow> = outcomes
        .iter()
        .filter(|o| o.plan.kind == RunKind::Interface && o.plan.delta.is_none())
        .map(|o| GradientRow {
            epsilon: o.plan.epsilon,
            gradients: times
                .iter()
                .map(|&t| {
                    let state = o.ok()?.traj.at(t)?;
                    interface_gradient(state, InterfaceSide::Left, GradientSide::InnerSide)
                        .ok()
                        .map(f64::abs)
                })
                .collect(),
        })
        .collect();
    let fits = times
        .iter()
        .enumerate()
        .filter_map(|(k, &t)| {
            let (eps, vals): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter_map(|r| r.gradients[k].map(|g| (r.epsilon, g)))
                .unzip();
            fit_power_law(&eps, &vals).ok().map(|f| FitReport {
                t,
                a: f.a,
                b: f.b,
                residual: f.residual,
                points: eps.len(),
            })
        })
        .collect();
    (GradientTable { times, rows }, fits)
}

/// Where the initial datum crosses α inside each outer component.
fn expected_jumps(ctx: &Context) -> Vec<f64> {
    let alpha = ctx.reaction.alpha();
    let faces = ctx.grid.face_positions();
    ctx.grid
        .outer_cells()
        .into_iter()
        .filter_map(|cells| {
            let (lo, hi) = (faces[cells.start], faces[cells.end]);
            threshold_crossing(|x| ctx.spec.initial.eval(x), alpha, lo, hi).ok()
        })
        .collect()
}

fn jump_report(ctx: &Context, plan: &RunPlan, out: &RunOutput) -> JumpReport {
    let state = out.traj.last();
    let grid = state.grid();
    let dx = grid.dx();
    let expected = expected_jumps(ctx);

    // Outside: the pointwise ODE limit. Inside: the stable state picked by the mean.
    let mut ideal = asymptotic_profile(&ctx.u0, &ctx.reaction).values().to_vec();
    let inner = grid.inner_cells();
    if !inner.is_empty() {
        let mean = ctx.u0.values()[inner.clone()].iter().sum::<f64>() / inner.len() as f64;
        let level = if mean < ctx.reaction.alpha() { 0.0 } else { 1.0 };
        ideal[inner].iter_mut().for_each(|v| *v = level);
    }

    let mut excluded = 0;
    let mut step_distance: f64 = 0.0;
    for (i, (&x, &u)) in grid.cell_centers().iter().zip(state.values()).enumerate() {
        if expected.iter().any(|&xj| (x - xj).abs() < 3.0 * dx) {
            excluded += 1;
            continue;
        }
        if grid.cell_region(i) != Region::Interface {
            step_distance = step_distance.max((u - ideal[i]).abs());
        }
    }
    JumpReport {
        epsilon: plan.epsilon,
        t: state.t(),
        dx,
        expected,
        found: detect_jump(state, JUMP_THRESHOLD),
        step_distance,
        excluded_cells: excluded,
    }
}

fn ode_report(plan: &RunPlan, out: &RunOutput, ode: &RunOutput, t: f64, margin: f64) -> OdeReport {
    let (Some(a), Some(b)) = (out.traj.at(t), ode.traj.at(t)) else {
        return OdeReport {
            epsilon: plan.epsilon,
            t,
            margin,
            cells: 0,
            max_diff: f64::NAN,
        };
    };
    let grid = a.grid();
    let mut cells = 0;
    let mut max_diff: f64 = 0.0;
    for (i, &x) in grid.cell_centers().iter().enumerate() {
        if grid.cell_region(i) == Region::Outer && grid.distance_to_interface(x) > margin {
            cells += 1;
            max_diff = max_diff.max((a.values()[i] - b.values()[i]).abs());
        }
    }
    OdeReport {
        epsilon: plan.epsilon,
        t,
        margin,
        cells,
        max_diff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(preset: Preset, dir: &Path) -> ExperimentSpec {
        let mut s = ExperimentSpec::preset(preset);
        s.apply_overrides(&Overrides {
            n_cells: Some(200),
            dt: Some(1e-3),
            output_dir: Some(dir.to_path_buf()),
            ..Overrides::default()
        });
        s
    }

    #[test]
    fn plans_per_preset() {
        let labels = |p| -> Vec<String> {
            plan_runs(&ExperimentSpec::preset(p))
                .into_iter()
                .map(|r| r.label)
                .collect()
        };
        assert_eq!(labels(Preset::Fig3LimitComparison), ["e-1", "e-2", "e-4", "e-8", "neumann"]);
        assert_eq!(labels(Preset::OdeLimitCheck), ["e-8", "ode"]);
        assert_eq!(
            labels(Preset::DeltaConvergence),
            ["e-4", "e-4_delta8e-3", "e-4_delta4e-3", "e-4_delta2e-3"]
        );
        assert_eq!(labels(Preset::Fig4GradientDecay).len(), 9);
    }

    #[test]
    fn small_fig3_writes_everything() {
        let dir = tempfile::tempdir().unwrap();
        let spec = small(Preset::Fig3LimitComparison, dir.path());
        let m = run_spec(&spec, &Overrides::default()).unwrap();
        assert_eq!(m.runs.len(), 5);
        assert!(m.file("snapshots_neumann.csv").is_some());
        for f in &m.files {
            assert_eq!(sha256_file(&dir.path().join(&f.name)).unwrap(), f.sha256);
        }
        let text = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
        let s: Summary = serde_json::from_str(&text).unwrap();
        assert_eq!(s.neumann_gaps.unwrap().len(), 4);
    }

    #[test]
    fn failed_runs_do_not_stop_the_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = small(Preset::Fig2Snapshots, dir.path());
        // One Newton iteration cannot converge on the first nonlinear step.
        spec.time.newton_max_iter = 1;
        spec.epsilons = vec![1.0];
        spec.time.dt = 0.05;
        match run_spec(&spec, &Overrides::default()) {
            Err(HarnessError::RunsFailed { failed, manifest, .. }) => {
                assert_eq!(failed, 1);
                assert!(manifest.runs[0].error.as_deref().unwrap().contains("NewtonDiverged"));
                assert!(dir.path().join("manifest.json").exists());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
