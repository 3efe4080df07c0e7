//! Task execution and JSONL reports.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::config::{Expect, Problem, TaskConfig};
use crate::bosonize::{
    antipode_identity_check, check_cocycle, coeval_linearity_check, double_dual_check, dual_structure,
    eval_linearity_check, hopf_axioms_check,
};
use crate::dalgebra::{check_bracket_compat, check_lie_spec, check_superleibniz};
use crate::error::Result;
use crate::pvkit::{
    build_pv_ring, even_reduction, gl_primitive_check, invariant_functionals_check, table_json, wronskian_search,
    zw_matrices, HopfData, WronskianOutcome,
};
use crate::report::Report;
use crate::solver::{residual_report, round_trip_report, series_solve, splitting_report, SeriesModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The task's preconditions did not hold.
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub task: String,
    pub index: usize,
    pub inputs_hash: String,
    pub verdict: Verdict,
    pub witness: Value,
}

/// Hex SHA-256 of the canonical config followed by the task index.
pub fn inputs_hash(canonical: &str, index: usize) -> String {
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    h.update(format!("\n#task {index}").as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn verdict_of(reports: &[Report]) -> Verdict {
    if reports.iter().all(|r| r.passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn with_reports(mut witness: Value, reports: &[Report]) -> (Verdict, Value) {
    witness["reports"] = serde_json::to_value(reports).expect("reports serialize");
    (verdict_of(reports), witness)
}

fn execute(p: &Problem, index: usize, task: &TaskConfig) -> Result<(Verdict, Value)> {
    match task {
        TaskConfig::Check { samples, seed } => {
            let mut reps = vec![
                check_lie_spec(&p.spec),
                check_superleibniz(&p.action, *samples, u64::from(*seed)),
                check_bracket_compat(&p.action),
            ];
            if let Some(m) = &p.module {
                reps.push(m.consistency().clone());
                if m.is_consistent() {
                    reps.push(check_cocycle(m, 2)?);
                }
            }
            Ok(with_reports(json!({}), &reps))
        }
        TaskConfig::Solve { order } => {
            let (model, m) = SeriesModel::for_module(p.module()?)?;
            let sol = series_solve(&m, &model, *order)?;
            let reps = vec![residual_report(&m, &sol), round_trip_report(&m, &sol)?];
            Ok(with_reports(json!({ "solution": sol.to_json(), "trusted": format!("t^{}", sol.trusted) }), &reps))
        }
        TaskConfig::Splitting { order } => {
            let (model, m) = SeriesModel::for_module(p.module()?)?;
            let s = splitting_report(&m, &model, *order)?;
            let reps = [s.report.clone()];
            Ok(with_reports(json!({ "count": s.count, "full": s.full, "body": s.body }), &reps))
        }
        TaskConfig::Pvring => {
            let m = p.module()?;
            let pv = build_pv_ring(m)?;
            let back = gl_primitive_check(pv.grid(0), pv.action(), pv.base().ring())?;
            let mut round = Report::new("primitive_round_trip");
            for (g, f) in back.iter().enumerate() {
                round.record(f == m.map(g), || format!("recovered F({}) = {f}", m.spec().name(g)));
            }
            let reps = vec![
                check_superleibniz(pv.action(), 50, 0),
                check_bracket_compat(pv.action()),
                round,
                invariant_functionals_check(m)?,
            ];
            let gens: Vec<&str> = pv.ring().poly_gens().iter().map(|(n, _)| n.as_str()).collect();
            let dens: Vec<&str> = pv.ring().denominators().iter().map(|d| d.name.as_str()).collect();
            Ok(with_reports(json!({ "generators": gens, "denominators": dens }), &reps))
        }
        TaskConfig::Zw => {
            let zw = zw_matrices(p.module()?)?;
            let reps = [zw.check()?];
            Ok(with_reports(json!({ "z": zw.z.to_json(), "w": zw.w.to_json() }), &reps))
        }
        TaskConfig::Hopf => {
            let h = HopfData::new(p.module()?)?;
            let reps = [h.check()?];
            Ok(with_reports(json!({ "z12": h.z12.to_json(), "w12": h.w12.to_json() }), &reps))
        }
        TaskConfig::Wronskian { bound, expect, .. } => {
            let out = wronskian_search(&p.elements[&index], &p.action, *bound)?;
            let want = expect.unwrap_or(Expect::Certificate);
            let ok = out.is_certificate() == (want == Expect::Certificate);
            let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
            let found = if let WronskianOutcome::Certificate { .. } = out { "certificate" } else { "not_found" };
            let mut w = out.to_json();
            w["outcome"] = json!(found);
            Ok((verdict, w))
        }
        TaskConfig::Dualize { side } => {
            let m = p.module()?;
            let dual = dual_structure(m, *side)?;
            let reps = vec![
                dual.consistency().clone(),
                eval_linearity_check(m, &dual, *side, 20, 0),
                coeval_linearity_check(m, &dual, *side),
                double_dual_check(m)?,
            ];
            Ok(with_reports(json!({ "side": side, "table": table_json(dual.spec(), dual.maps()) }), &reps))
        }
        TaskConfig::BosonizeVerify { bound } => {
            let reps = [antipode_identity_check(&p.spec, *bound), hopf_axioms_check(&p.spec, *bound)];
            Ok(with_reports(json!({ "bound": bound }), &reps))
        }
        TaskConfig::Reduce => {
            let m = p.module()?;
            let red = even_reduction(m)?;
            let reps = [red.check(m, 2)?];
            Ok(with_reports(json!({ "table": table_json(red.module.spec(), red.module.maps()) }), &reps))
        }
    }
}

/// Runs one task; failures of its preconditions become an `error` record.
pub fn run_task(p: &Problem, canonical: &str, index: usize) -> TaskRecord {
    let task = &p.config.tasks[index];
    let (verdict, witness) = match execute(p, index, task) {
        Ok(v) => v,
        Err(e) => (Verdict::Error, json!({ "error": e.to_string() })),
    };
    TaskRecord { task: task.kind().to_string(), index, inputs_hash: inputs_hash(canonical, index), verdict, witness }
}

/// Runs every task in order; with `parallel` the tasks run on the rayon
/// pool but records keep their order.
pub fn run(p: &Problem, parallel: bool) -> Vec<TaskRecord> {
    let canonical = p.config.canonical();
    let n = p.config.tasks.len();
    if parallel {
        (0..n).into_par_iter().map(|i| run_task(p, &canonical, i)).collect()
    } else {
        (0..n).map(|i| run_task(p, &canonical, i)).collect()
    }
}

/// One JSON object per line.
pub fn emit_report(records: &[TaskRecord], out: &mut dyn Write) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// 0 when every task passes, 2 when some task's inputs were invalid,
/// otherwise 1.
pub fn exit_code(records: &[TaskRecord]) -> i32 {
    if records.iter().any(|r| r.verdict == Verdict::Error) {
        2
    } else if records.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else {
        0
    }
}
