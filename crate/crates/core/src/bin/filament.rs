use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use log::info;

use filament_core::bcf::{evolve, EvolveOptions, StabilityField};
use filament_core::biot_savart::{parse_probes, velocity_csv, FilamentField};
use filament_core::flat_norm::estimate_pair;
use filament_core::harness::{self, dyadic, CurveSpec, ExperimentConfig, Suite, VerifyReport};
use filament_core::{ClosedCurve, Error, Result};

#[derive(Parser)]
#[command(
    name = "filament",
    version,
    about = "Vortex filament verification laboratory"
)]
struct Cli {
    /// Worker threads (0: one per core).
    #[arg(long, global = true, env = "FILAMENT_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// unit-circle, circle:R, ellipse:A:B, trefoil, perturbed-circle:AMP:MODE, or a curve file.
    #[arg(long, default_value = "unit-circle")]
    curve: String,
    /// Samples per curve (power of two ≥ 64).
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// ε grid as dyadic exponents: ε = 2^-k.
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8,9")]
    eps_exp: Vec<i32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for report.json and series CSVs.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Security radius, weak curvature norm, linear estimate, tube projection.
    Geometry(Common),
    /// L^q bounds of the prototype field and the interpolation inequality;
    /// with `--points`, velocities at the listed probes.
    Field {
        #[command(flatten)]
        common: Common,
        /// CSV of `x,y,z` probes; writes `x,y,z,vx,vy,vz` to --out or stdout.
        #[arg(long, requires = "epsilon")]
        points: Option<PathBuf>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Energy against |log ε|.
    Energy(Common),
    /// Momentum-flux identity for plateau test fields.
    Flux(Common),
    /// Flat-norm bounds; with `--a` and `--b`, a JSON bracket for that pair.
    Flatnorm {
        #[command(flatten)]
        common: Common,
        #[arg(long, requires = "b")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        /// Cells per side of the discrete primal (0 skips it).
        #[arg(long, default_value_t = 48)]
        grid: usize,
    },
    /// Integrate the binormal flow and write states plus invariants.
    Evolve {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long)]
        dt: f64,
        #[arg(long = "T")]
        t_final: f64,
        #[arg(long)]
        out: PathBuf,
        /// Store a state every this many steps.
        #[arg(long, default_value_t = 10)]
        output_every: usize,
    },
    /// Run suites from a config file or flags and write a report.
    Verify {
        /// TOML or JSON configuration; flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
        /// Comma-separated suites (default: all).
        #[arg(long, value_delimiter = ',')]
        suites: Option<Vec<Suite>>,
    },
    /// Print one series of a report as CSV.
    Export {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        series: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config_from(c: &Common, suites: Vec<Suite>) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig {
        curve: CurveSpec::parse_arg(&c.curve)?,
        epsilons: dyadic(&c.eps_exp),
        n: c.n,
        seed: c.seed,
        output: c.out.clone(),
        suites,
    })
}

fn print_report(r: &VerifyReport) {
    for rec in &r.records {
        let status = if rec.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<32} [{}]", rec.name, rec.anchor);
        if let Some(m) = &rec.message {
            println!("      {m}");
        }
        for (k, v) in rec.measured.iter().chain(&rec.fitted) {
            println!("      {k} = {v:.6e}");
        }
    }
}

fn verify(cfg: &ExperimentConfig) -> Result<bool> {
    let report = harness::run(cfg)?;
    print_report(&report);
    if let Some(dir) = &cfg.output {
        harness::write_outputs(&report, dir)?;
        info!("wrote {}", dir.display());
    }
    Ok(report.passed())
}

fn run_evolve(
    curve: &str,
    n: usize,
    dt: f64,
    t_final: f64,
    out: &Path,
    output_every: usize,
) -> Result<bool> {
    let c = CurveSpec::parse_arg(curve)?.build(n)?;
    let mut opts = EvolveOptions::new(dt, t_final);
    opts.output_every = output_every;
    let traj = Arc::new(evolve(&c, &opts)?);
    std::fs::create_dir_all(out)?;
    let sf = StabilityField::new(traj.clone())?;
    let mut inv =
        String::from("t,length,max_speed_defect,e_gamma_self,impulse_x,impulse_y,impulse_z\n");
    for (k, (state, rec)) in traj.states.iter().zip(&traj.log).enumerate() {
        state.save(&out.join(format!("curve_{k:05}.csv")))?;
        inv.push_str(&format!(
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            rec.t,
            rec.length,
            rec.speed_defect,
            sf.defect(k, state),
            rec.impulse[0],
            rec.impulse[1],
            rec.impulse[2]
        ));
    }
    std::fs::write(out.join("invariants.csv"), inv)?;
    println!(
        "{} states, dt = {:.6e}, {} renormalizations, length drift {:.3e}, max pre-renormalization |γ'| defect {:.3e}",
        traj.len(),
        traj.dt,
        traj.renormalizations,
        traj.length_drift(),
        traj.max_prerenorm_defect
    );
    Ok(!traj.aborted)
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Geometry(c) => {
            let cfg = config_from(&c, vec![Suite::Geometry])?;
            let curve = cfg.validate()?;
            println!(
                "length {:.12e}, weak curvature norm {:.6e}, min security radius {:.6e}",
                curve.length(),
                curve.weak_norm(),
                curve.min_security_radius()
            );
            verify(&cfg)
        }
        Cmd::Field {
            common,
            points: Some(points),
            epsilon: Some(eps),
        } => {
            let curve = CurveSpec::parse_arg(&common.curve)?.build(common.n)?;
            let field = FilamentField::new(curve, eps)?;
            let probes = parse_probes(&std::fs::read_to_string(points)?)?;
            let csv = velocity_csv(&field, &probes);
            match common.out {
                Some(p) => std::fs::write(p, csv)?,
                None => print!("{csv}"),
            }
            Ok(true)
        }
        Cmd::Field { common, .. } => verify(&config_from(&common, vec![Suite::Field])?),
        Cmd::Energy(c) => verify(&config_from(&c, vec![Suite::Energy])?),
        Cmd::Flux(c) => verify(&config_from(&c, vec![Suite::Flux])?),
        Cmd::Flatnorm {
            common,
            a: Some(a),
            b: Some(b),
            grid,
        } => {
            let seed = common
                .seed
                .ok_or_else(|| Error::Config("flatnorm needs --seed".into()))?;
            let load = |s: &str| -> Result<Arc<ClosedCurve>> {
                Ok(Arc::new(CurveSpec::parse_arg(s)?.build(common.n)?))
            };
            let est = estimate_pair(load(&a)?, load(&b)?, (grid > 0).then_some(grid), seed)?;
            let json = serde_json::to_string_pretty(&est).expect("estimate serializes");
            match common.out {
                Some(p) => std::fs::write(p, json)?,
                None => println!("{json}"),
            }
            Ok(est.lower <= est.upper)
        }
        Cmd::Flatnorm { common, .. } => verify(&config_from(&common, vec![Suite::Flatnorm])?),
        Cmd::Evolve {
            curve,
            n,
            dt,
            t_final,
            out,
            output_every,
        } => run_evolve(&curve, n, dt, t_final, &out, output_every),
        Cmd::Verify {
            config,
            common,
            suites,
        } => {
            let mut cfg = match &config {
                Some(p) => ExperimentConfig::load(p)?,
                None => config_from(&common, Suite::ALL.to_vec())?,
            };
            if let Some(s) = suites {
                cfg.suites = s;
            }
            if common.seed.is_some() {
                cfg.seed = common.seed;
            }
            if common.out.is_some() {
                cfg.output = common.out.clone();
            }
            verify(&cfg)
        }
        Cmd::Export {
            report,
            series,
            out,
        } => {
            let r = VerifyReport::from_json(&std::fs::read_to_string(&report)?)?;
            let csv = r.export_series(&series)?;
            match out {
                Some(p) => std::fs::write(p, csv)?,
                None => print!("{csv}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(2);
    }
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Config(_)) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
