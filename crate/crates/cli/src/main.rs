mod config;
mod manifest;
mod svg;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use chemneuron::crn::{ode_run, ssa_run, BolusSchedule, OdeOptions, Sampling, ScheduleParseError};
use chemneuron::dsl::{parse_network, print_network, DslError};
use chemneuron::experiments::{self as ex, ExperimentError, InputSpec, Protocol, SweepResult, Task, TaskRun};
use chemneuron::model::{self, BasicConfig, BioConfig, ModelError};
use chemneuron::stimulus::AssociativePattern;

use config::{ConfigError, FileConfig};
use manifest::RunManifest;

/// Chemical neuron simulator and experiment runner.
#[derive(Parser, Debug)]
#[command(name = "chemneuron", version)]
struct Cli {
    /// Master seed; replicate seeds are `seed, seed+1, ...`.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Flat TOML file overriding the preset; flags override the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seeds per task or sweep point (delay sweep: trials per point).
    #[arg(long, global = true)]
    replicates: Option<u64>,
    /// Also write SVG charts.
    #[arg(long, global = true)]
    svg: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a .crn network under a bolus schedule.
    Simulate {
        network: PathBuf,
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        t_end: f64,
        /// Sampling interval of the trajectory.
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        /// Integrate the rate equations instead of sampling one stochastic run.
        #[arg(long)]
        ode: bool,
    },
    /// Build neuron networks.
    Model {
        #[command(subcommand)]
        action: ModelCommand,
    },
    /// Associative pattern on a two-channel neuron with H1=100, H2=0.
    Assoc,
    /// Frequency-bias task with k high-frequency channels.
    Fb {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        task: TaskFlags,
    },
    /// Correlation task with a follower chain of length k.
    Tc {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        task: TaskFlags,
    },
    /// Mixed task over bolus sizes (fractions of the threshold).
    SweepBolus {
        #[arg(long, value_delimiter = ',', default_value = "8")]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1.7,10")]
        fractions: Vec<f64>,
        #[arg(long)]
        reduced: bool,
    },
    /// Two-bolus delay protocol.
    SweepDelay {
        #[arg(long, value_delimiter = ',', default_value = "1,4,5")]
        m: Vec<usize>,
        /// Sweep the removal rate of B at the configured m instead of m.
        #[arg(long, value_delimiter = ',')]
        k_b_decay: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.01,0.02,0.05,0.08,0.12,0.2,0.5")]
        deltas: Vec<f64>,
    },
    /// Index of dispersion over chain lengths.
    SweepIod {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10")]
        m: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        fractions: Vec<f64>,
        #[arg(long, value_enum, default_value = "tc2")]
        task: IodTask,
        #[arg(long)]
        reduced: bool,
    },
    /// Compartmental neuron with the Hill activation step: associative
    /// pattern, FB 2 and TC 2.
    Bio {
        #[arg(long)]
        reduced: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ModelCommand {
    /// Print a neuron as .crn text.
    Emit {
        #[arg(long, value_enum, default_value = "basic")]
        variant: VariantArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        beta: Option<u64>,
    },
}

#[derive(clap::Args, Debug)]
struct TaskFlags {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    beta: Option<u64>,
    /// Transient 350, window 150 instead of 700/300.
    #[arg(long)]
    reduced: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Basic,
    Bio,
    Hill,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IodTask {
    Tc2,
    Fb2,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Config(String),
    Simulation(String),
}

fn classify(err: anyhow::Error) -> Failure {
    let msg = format!("{err:#}");
    for cause in err.chain() {
        if cause.is::<ConfigError>() || cause.is::<DslError>() || cause.is::<ScheduleParseError>() {
            return Failure::Config(msg);
        }
        if let Some(ModelError::InvalidConfig { .. }) = cause.downcast_ref::<ModelError>() {
            return Failure::Config(msg);
        }
        if let Some(ExperimentError::Model(ModelError::InvalidConfig { .. }) | ExperimentError::InvalidSweep(_) | ExperimentError::InvalidTask(_)) =
            cause.downcast_ref::<ExperimentError>()
        {
            return Failure::Config(msg);
        }
    }
    Failure::Simulation(msg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let failure = match run(cli) {
        Ok(()) => return ExitCode::SUCCESS,
        Err(e) => e,
    };
    let (code, msg) = match failure {
        Failure::Usage(m) => (1, m),
        Failure::Config(m) => (2, m),
        Failure::Simulation(m) => (3, m),
    };
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Simulation(e.to_string()))?;
    }
    if cli.replicates == Some(0) {
        return Err(Failure::Usage("--replicates must be at least 1".into()));
    }
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(|e| Failure::Config(e.to_string()))?,
        None => FileConfig::default(),
    };
    let ctx = Ctx {
        started: Instant::now(),
        argv: std::env::args().collect(),
        file,
        cli: &cli,
    };
    dispatch(&ctx, &cli.command).map_err(classify)
}

struct Ctx<'a> {
    started: Instant,
    argv: Vec<String>,
    file: FileConfig,
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn seeds(&self, default: u64) -> Vec<u64> {
        let n = self.cli.replicates.unwrap_or(default);
        (0..n).map(|i| self.cli.seed.wrapping_add(i)).collect()
    }

    fn out_dir(&self) -> Result<&Path> {
        let dir = self.cli.out.as_path();
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(dir)
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        let path = self.out_dir()?.join(name);
        Ok(BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?))
    }

    fn svg(&self, name: &str, content: impl FnOnce() -> String) -> Result<()> {
        if self.cli.svg {
            fs::write(self.out_dir()?.join(name), content())?;
        }
        Ok(())
    }

    fn manifest(&self, seeds: Vec<u64>, config: serde_json::Value) -> Result<()> {
        RunManifest::new(self.argv.clone(), self.cli.seed, seeds, config, self.started).write(self.out_dir()?)?;
        Ok(())
    }

    fn protocol(&self, reduced: bool) -> Protocol {
        let mut p = if reduced { Protocol::reduced() } else { Protocol::default() };
        self.file.apply_protocol(&mut p);
        p
    }

    fn inputs(&self) -> InputSpec {
        let mut i = InputSpec::default();
        self.file.apply_inputs(&mut i);
        i
    }

    fn basic(&self, mut preset: BasicConfig) -> BasicConfig {
        self.file.apply_basic(&mut preset);
        preset
    }

    fn bio(&self, mut preset: BioConfig) -> BioConfig {
        self.file.apply_bio(&mut preset);
        preset
    }
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<()> {
    match command {
        Command::Simulate {
            network,
            schedule,
            t_end,
            dt,
            ode,
        } => simulate(ctx, network, schedule.as_deref(), *t_end, *dt, *ode),
        Command::Model {
            action: ModelCommand::Emit { variant, n, m, beta },
        } => emit(ctx, *variant, *n, *m, *beta),
        Command::Assoc => assoc(ctx),
        Command::Fb { k, task } => task_cmd(ctx, Task::Fb(*k), task, 1, ex::FB_BOLUS),
        Command::Tc { k, task } => task_cmd(ctx, Task::Tc(*k), task, 5, ex::TC_BOLUS),
        Command::SweepBolus { m, fractions, reduced } => sweep_bolus(ctx, m, fractions, *reduced),
        Command::SweepDelay { m, k_b_decay, deltas } => sweep_delay(ctx, m, k_b_decay, deltas),
        Command::SweepIod {
            m,
            fractions,
            task,
            reduced,
        } => sweep_iod(ctx, m, fractions, *task, *reduced),
        Command::Bio { reduced } => bio(ctx, *reduced),
    }
}

fn simulate(ctx: &Ctx, network: &Path, schedule: Option<&Path>, t_end: f64, dt: f64, ode: bool) -> Result<()> {
    let text = fs::read_to_string(network).with_context(|| format!("reading {}", network.display()))?;
    let net = parse_network(&text).map_err(|e| ConfigError {
        path: network.display().to_string(),
        line: e.line,
        column: Some(e.column),
        message: e.kind.to_string(),
    })?;
    let sched = match schedule {
        Some(p) => {
            let f = File::open(p).with_context(|| format!("reading {}", p.display()))?;
            BolusSchedule::read_csv(&net, BufReader::new(f)).map_err(|e| ConfigError {
                path: p.display().to_string(),
                line: e.line,
                column: None,
                message: e.message,
            })?
        }
        None => BolusSchedule::empty(),
    };
    let sampling = Sampling::every(dt);
    let traj = if ode {
        ode_run(&net, &sched, t_end, &sampling, &OdeOptions::default())?
    } else {
        ssa_run(&net, &sched, t_end, ctx.cli.seed, &sampling)?
    };
    traj.write_csv(ctx.create("trajectory.csv")?)?;
    ctx.manifest(
        vec![ctx.cli.seed],
        json!({
            "network": network.display().to_string(),
            "schedule": schedule.map(|p| p.display().to_string()),
            "t_end": t_end,
            "dt": dt,
            "ode": ode,
        }),
    )
}

fn emit(ctx: &Ctx, variant: VariantArg, n: usize, m: usize, beta: Option<u64>) -> Result<()> {
    let text = match variant {
        VariantArg::Basic => {
            let mut cfg = ctx.basic(BasicConfig::new(n, m));
            (cfg.channels, cfg.nonlinearity) = (n, m);
            if let Some(b) = beta {
                cfg.bolus_size = b;
            }
            print_network(&model::build_basic_cn(&cfg)?.spec)
        }
        VariantArg::Bio | VariantArg::Hill => {
            let mut cfg = ctx.bio(BioConfig::new(n, m));
            (cfg.channels, cfg.nonlinearity) = (n, m);
            if let Some(b) = beta {
                cfg.bolus_size = b;
            }
            let cn = if matches!(variant, VariantArg::Bio) {
                model::build_bio_cn(&cfg)?
            } else {
                let theta = model::default_hill_theta(&cfg)?;
                model::build_hill_cn(&cfg, cfg.rates.hill_exponent, theta)?
            };
            print_network(&cn.spec)
        }
    };
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn write_assoc(ctx: &Ctx, name: &str, reports: &[ex::AssociativeReport]) -> Result<()> {
    let mut w = ctx.create(name)?;
    writeln!(w, "seed,pre_probe_triggered,post_probe_triggered,pair,dH1,dH2")?;
    for r in reports {
        for (i, d) in r.pair_increments.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.seed,
                r.pre_probe_triggered,
                r.post_probe_triggered,
                i + 1,
                d[0],
                d[1]
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn summarize_assoc(label: &str, reports: &[ex::AssociativeReport]) {
    let n = reports.len();
    let pre = reports.iter().filter(|r| r.pre_probe_triggered).count();
    let post = reports.iter().filter(|r| r.post_probe_triggered).count();
    let (d1, d2) = reports
        .iter()
        .flat_map(|r| &r.pair_increments)
        .fold((0.0, 0.0), |a, d| (a.0 + d[0], a.1 + d[1]));
    println!("{label}: pre-training probe triggered {pre}/{n}, post-training probe triggered {post}/{n}, total dH1 {d1}, dH2 {d2}");
}

fn run_assoc_reports(cn: &model::CnNetwork, pattern: &AssociativePattern, seeds: &[u64]) -> Result<Vec<ex::AssociativeReport>> {
    use rayon::prelude::*;
    let level = cn.default_trigger_level();
    Ok(seeds
        .par_iter()
        .map(|&s| ex::run_associative(cn, pattern, level, s))
        .collect::<Result<Vec<_>, _>>()?)
}

fn assoc(ctx: &Ctx) -> Result<()> {
    let cfg = ctx.basic(ex::associative_config());
    let cn = model::build_basic_cn(&cfg)?;
    let pattern = AssociativePattern::default();
    let seeds = ctx.seeds(20);
    let reports = run_assoc_reports(&cn, &pattern, &seeds)?;
    write_assoc(ctx, "assoc.csv", &reports)?;
    summarize_assoc("assoc", &reports);
    ctx.svg("assoc.svg", || {
        let r = &reports[0];
        let x: Vec<f64> = r.weight_trace.iter().map(|t| t.0).collect();
        let s = (0..2)
            .map(|c| (format!("H{}", c + 1), r.weight_trace.iter().map(|t| Some(t.1[c] as f64)).collect()))
            .collect::<Vec<_>>();
        svg::lines("weights, first seed", &x, &s)
    })?;
    ctx.manifest(seeds, json!({ "config": cfg, "pattern": pattern }))
}

fn write_weights(ctx: &Ctx, prefix: &str, runs: &[TaskRun]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = runs.first().map_or(0, |r| r.summary.means.len());
    let avg = |f: &dyn Fn(&TaskRun) -> &Vec<f64>| -> Vec<f64> {
        (0..n)
            .map(|c| runs.iter().map(|r| f(r)[c]).sum::<f64>() / runs.len() as f64)
            .collect()
    };
    let means = avg(&|r| &r.summary.means);
    let norm = avg(&|r| &r.summary.normalized);
    let mut w = ctx.create(&format!("{prefix}weights.csv"))?;
    writeln!(w, "channel,mean_H,normalized_H")?;
    for c in 0..n {
        writeln!(w, "{},{},{}", c + 1, means[c], norm[c])?;
    }
    w.flush()?;
    let mut w = ctx.create(&format!("{prefix}runs.csv"))?;
    writeln!(w, "seed,success,channel,mean_H,normalized_H")?;
    for r in runs {
        for c in 0..n {
            writeln!(w, "{},{},{},{},{}", r.seed, r.success, c + 1, r.summary.means[c], r.summary.normalized[c])?;
        }
    }
    w.flush()?;
    Ok((means, norm))
}

fn task_cmd(ctx: &Ctx, task: Task, flags: &TaskFlags, default_m: usize, default_beta: u64) -> Result<()> {
    let mut cfg = ctx.basic(ex::task_config(default_m, default_beta));
    if let Some(m) = flags.m {
        cfg.nonlinearity = m;
    }
    if let Some(b) = flags.beta {
        cfg.bolus_size = b;
    }
    let protocol = ctx.protocol(flags.reduced);
    let inputs = ctx.inputs();
    let seeds = ctx.seeds(10);
    let cn = model::build_basic_cn(&cfg)?;
    let runs = ex::run_task(&cn, task, &inputs, &protocol, &seeds)?;
    let (_, norm) = write_weights(ctx, "", &runs)?;
    println!("{task:?}: success in {}/{} seeds", runs.iter().filter(|r| r.success).count(), runs.len());
    ctx.svg("weights.svg", || {
        let labels: Vec<String> = (1..=norm.len()).map(|c| format!("H{c}")).collect();
        svg::bars(&format!("{task:?} normalized weights"), &labels, &norm)
    })?;
    ctx.manifest(
        seeds,
        json!({ "task": format!("{task:?}"), "config": cfg, "protocol": protocol, "inputs": inputs }),
    )
}

fn write_sweeps(ctx: &Ctx, prefix: &str, results: &[SweepResult]) -> Result<()> {
    for r in results {
        let tag = r.series.replace('=', "");
        r.write_csv(ctx.create(&format!("{prefix}_{tag}.csv"))?)?;
        ctx.svg(&format!("{prefix}_{tag}.svg"), || {
            let series: Vec<(String, Vec<Option<f64>>)> =
                r.labels.iter().map(|l| (l.clone(), r.series_of(l))).collect();
            svg::lines(&format!("{prefix} {}", r.series), &r.axis(), &series)
        })?;
    }
    Ok(())
}

fn sweep_bolus(ctx: &Ctx, ms: &[usize], fractions: &[f64], reduced: bool) -> Result<()> {
    let mut cfg = ctx.basic(ex::task_config(1, 1));
    cfg.channels = 3;
    let protocol = ctx.protocol(reduced);
    let inputs = ctx.inputs();
    let seeds = ctx.seeds(10);
    let results = ex::sweep_bolus(ms, fractions, &cfg, &inputs, &protocol, &seeds)?;
    write_sweeps(ctx, "sweep_bolus", &results)?;
    ctx.manifest(
        seeds,
        json!({ "m": ms, "fractions": fractions, "config": cfg, "protocol": protocol, "inputs": inputs }),
    )
}

fn sweep_delay(ctx: &Ctx, ms: &[usize], k_b_decay: &[f64], deltas: &[f64]) -> Result<()> {
    let cfg = ctx.basic(ex::delay_config(1));
    let axis = if k_b_decay.is_empty() {
        ex::DelayAxis::Nonlinearity(ms.to_vec())
    } else {
        ex::DelayAxis::RemovalRate(k_b_decay.to_vec())
    };
    let replicates = ctx.cli.replicates.unwrap_or(1000);
    let results = ex::sweep_delay(&axis, deltas, &cfg, replicates, ctx.cli.seed)?;
    write_sweeps(ctx, "sweep_delay", &results)?;
    ctx.manifest(
        vec![ctx.cli.seed],
        json!({ "axis": axis, "deltas": deltas, "replicates": replicates, "config": cfg }),
    )
}

fn sweep_iod(ctx: &Ctx, ms: &[usize], fractions: &[f64], task: IodTask, reduced: bool) -> Result<()> {
    let (task, base) = match task {
        IodTask::Tc2 => (Task::Tc(2), ex::task_config(1, 1)),
        IodTask::Fb2 => (Task::Fb(2), ex::task_config(1, 1)),
    };
    let cfg = ctx.basic(base);
    let protocol = ctx.protocol(reduced);
    let inputs = ctx.inputs();
    let seeds = ctx.seeds(10);
    let results = ex::sweep_iod(ms, fractions, task, &cfg, &inputs, &protocol, &seeds)?;
    write_sweeps(ctx, "sweep_iod", &results)?;
    ctx.manifest(
        seeds,
        json!({ "task": format!("{task:?}"), "m": ms, "fractions": fractions, "config": cfg, "protocol": protocol, "inputs": inputs }),
    )
}

fn bio(ctx: &Ctx, reduced: bool) -> Result<()> {
    let assoc_cfg = ctx.bio(ex::bio_associative_config());
    let task_cfg = ctx.bio(ex::bio_task_config());
    let theta = model::default_hill_theta(&task_cfg)?;
    let h = task_cfg.rates.hill_exponent;
    let seeds = ctx.seeds(10);

    let assoc_cn = model::build_hill_cn(&assoc_cfg, h, theta)?;
    let reports = run_assoc_reports(&assoc_cn, &AssociativePattern::default(), &ctx.seeds(20))?;
    write_assoc(ctx, "bio_assoc.csv", &reports)?;
    summarize_assoc("bio assoc", &reports);

    let protocol = ctx.protocol(reduced);
    let inputs = ctx.inputs();
    let cn = model::build_hill_cn(&task_cfg, h, theta)?;
    for (task, prefix) in [(Task::Fb(2), "bio_fb2_"), (Task::Tc(2), "bio_tc2_")] {
        let runs = ex::run_task(&cn, task, &inputs, &protocol, &seeds)?;
        write_weights(ctx, prefix, &runs)?;
        println!("bio {task:?}: success in {}/{} seeds", runs.iter().filter(|r| r.success).count(), runs.len());
    }
    ctx.manifest(
        seeds,
        json!({ "associative_config": assoc_cfg, "task_config": task_cfg, "theta": theta, "protocol": protocol, "inputs": inputs }),
    )
}
