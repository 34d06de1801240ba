//! Verification harness: configuration, suite orchestration and reports.

mod config;
mod report;
pub mod suites;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use log::{info, warn};
use rayon::prelude::*;

pub use config::{dyadic, CurveSpec, ExperimentConfig, RunSection, Suite};
pub use report::{SeriesRow, TestRecord, VerifyReport};
pub use suites::SuiteOutput;

use crate::error::Result;
use crate::geometry::ClosedCurve;

fn run_suite(
    suite: Suite,
    curve: &Arc<ClosedCurve>,
    eps: &[f64],
    seed: u64,
) -> Result<SuiteOutput> {
    let mut out = SuiteOutput::default();
    match suite {
        Suite::Geometry => {
            out.extend(suites::linear_estimate(seed)?);
            out.extend(suites::tube_projection()?);
        }
        Suite::Field => {
            out.extend(suites::lq_bounds(curve, eps)?);
            out.extend(suites::interpolation_family()?);
        }
        Suite::Energy => out.extend(suites::energy_log_slope(curve, eps)?),
        Suite::Flux => out.extend(suites::momentum_flux_identity()?),
        Suite::Flatnorm => {
            out.extend(suites::mollification_flat_norm(curve, eps, seed)?);
            out.extend(suites::flat_norm_sandwich(seed)?);
        }
        Suite::Bcf => {
            out.extend(suites::circle_rigid_motion()?);
            out.extend(suites::moment_identity()?);
        }
        Suite::Stability => out.extend(suites::stability_machinery(seed)?),
    }
    Ok(out)
}

fn guarded(suite: Suite, curve: &Arc<ClosedCurve>, eps: &[f64], seed: u64) -> SuiteOutput {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(|| run_suite(suite, curve, eps, seed)));
    let out = match res {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => {
            warn!("suite {suite} failed: {e}");
            SuiteOutput {
                records: vec![TestRecord::failed(
                    suite.name(),
                    suite.name(),
                    "plumbing",
                    e.to_string(),
                )],
                series: vec![],
            }
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            warn!("suite {suite} panicked: {msg}");
            SuiteOutput {
                records: vec![TestRecord::failed(
                    suite.name(),
                    suite.name(),
                    "plumbing",
                    format!("panic: {msg}"),
                )],
                series: vec![],
            }
        }
    };
    info!("suite {suite}: {:.2} s", start.elapsed().as_secs_f64());
    out
}

/// Runs the selected suites. Suites execute concurrently; records are
/// assembled in suite order so the report does not depend on scheduling.
pub fn run(config: &ExperimentConfig) -> Result<VerifyReport> {
    let curve = Arc::new(config.validate()?);
    let seed = config.seed.unwrap_or(0);
    let mut selected = config.suites.clone();
    selected.sort();
    selected.dedup();
    let outputs: Vec<SuiteOutput> = selected
        .par_iter()
        .map(|&s| guarded(s, &curve, &config.epsilons, seed))
        .collect();
    let mut report = VerifyReport {
        seed: config.seed,
        ..Default::default()
    };
    for o in outputs {
        report.records.extend(o.records);
        report.series.extend(o.series);
    }
    Ok(report)
}

/// Writes `report.json` and one `<series>.csv` per series into `dir`.
pub fn write_outputs(report: &VerifyReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), report.to_json())?;
    for name in report.series.keys() {
        std::fs::write(dir.join(format!("{name}.csv")), report.export_series(name)?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn empty_selection_gives_empty_report() {
        let c = ExperimentConfig {
            suites: vec![],
            ..Default::default()
        };
        let r = run(&c).unwrap();
        assert!(r.records.is_empty() && r.passed());
        assert!(r
            .export_series("energy")
            .unwrap_err()
            .to_string()
            .contains("no series"));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let c = ExperimentConfig {
            epsilons: vec![0.6],
            ..Default::default()
        };
        assert!(matches!(run(&c), Err(Error::Config(_))));
    }

    #[test]
    fn field_suite_records_carry_anchors() {
        let c = ExperimentConfig {
            n: 128,
            epsilons: dyadic(&[4, 5, 6]),
            suites: vec![Suite::Field],
            ..Default::default()
        };
        let r = run(&c).unwrap();
        assert_eq!(r.records.len(), 2);
        assert!(r.records.iter().all(|x| !x.anchor.is_empty()));
        assert!(r.series.contains_key("sup_norm_scaled"));
    }
}
