//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 on a configuration or usage error, 2 when
//! every trial of a sweep is in outage.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bspower_core::harness::{Family, Scheme};
use bspower_core::powermodel::{
    affine_supply, component_supply, parameterized_supply, AffineParams,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, LevelFilter};
use serde::Serialize;

use crate::config::{
    family_for, AffinePreset, FileConfig, Format, Overrides, RunConfig, CONFIG_ENV,
};
use crate::error::{AppError, Result};
use crate::montecarlo::{is_infeasible, run_sweep, trial_channels, Sweep};
use crate::output::{write_channel_dump, write_points};
use crate::rates::{RateGrid, Spacing};

/// Base-station supply power models and energy-minimal downlink allocation.
#[derive(Debug, Parser)]
#[command(name = "bspower", version)]
#[allow(missing_docs)]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed; a random seed is drawn and logged when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Validate the configuration and print it without computing.
    #[arg(long, global = true)]
    pub dry_run: bool,
    /// Log level on standard error.
    #[arg(long, global = true, default_value = "info", value_name = "LEVEL")]
    pub log_level: LevelFilter,
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
#[allow(missing_docs)]
pub enum Command {
    /// Power model evaluation.
    Powermodel {
        #[command(subcommand)]
        action: PowermodelAction,
    },
    /// Channel inspection.
    Channel {
        #[command(subcommand)]
        action: ChannelAction,
    },
    /// Power control sweep on the TDMA family (default scheme: pc).
    PcSweep(SweepArgs),
    /// Power control with sleep on the TDMA family (default: ba,dtx,pc,prais).
    PraisSweep(SweepArgs),
    /// Antenna selection, power control and sleep on the OFDMA family
    /// (default: ba,dtx,raps).
    RapsSim(SweepArgs),
    /// Any combination of schemes on one family.
    Compare {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Channel family; inferred from the schemes when omitted.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
    },
}

/// `powermodel` actions.
#[derive(Debug, Subcommand)]
pub enum PowermodelAction {
    /// Print the site supply power as JSON and as a table.
    Eval(EvalArgs),
}

/// `channel` actions.
#[derive(Debug, Subcommand)]
pub enum ChannelAction {
    /// Write the eigenvalues of every resource block of one trial as CSV.
    Dump(DumpArgs),
}

/// Power model selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    /// Affine macro-site model.
    Affine,
    /// Parameterized model.
    Parameterized,
    /// Component model.
    Component,
}

/// Channel family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Flat single-antenna channels.
    Tdma,
    /// MIMO channels on the OFDMA grid.
    Ofdma,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Tdma => Family::Tdma,
            FamilyArg::Ofdma => Family::Ofdma,
        }
    }
}

/// Arguments of `powermodel eval`.
#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Model.
    #[arg(long, value_enum, default_value = "affine")]
    pub model: ModelArg,
    /// Transmit antennas per sector.
    #[arg(long = "d", default_value_t = 1, value_name = "ANTENNAS")]
    pub antennas: u32,
    /// Relative load in [0, 1]; 0 means sleep for the affine and
    /// parameterized models.
    #[arg(long, default_value_t = 1.0, value_name = "LOAD")]
    pub chi: f64,
    /// Affine parameter set (applied to every sector; one antenna only).
    #[arg(long, value_enum)]
    pub preset: Option<AffinePreset>,
    /// Component model: RF output per sector (W); defaults to chi times the maximum.
    #[arg(long)]
    pub tx_power: Option<f64>,
    /// Component model: used bandwidth fraction; defaults to chi.
    #[arg(long)]
    pub bandwidth_fraction: Option<f64>,
    /// Component model: evaluate in sleep mode.
    #[arg(long)]
    pub sleep: bool,
}

/// Arguments of `channel dump`.
#[derive(Debug, Args)]
pub struct DumpArgs {
    /// Trial index whose channels are dumped.
    #[arg(long, default_value_t = 0)]
    pub trial: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Arguments shared by the sweep subcommands.
#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Per-user rate grid `start:stop:steps` in bit/s (`k`/`M` suffixes allowed).
    #[arg(long, value_parser = parse_grid)]
    pub rates: Option<RateGrid>,
    /// Spacing of the rate grid.
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// Trials per rate point.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated schemes (ba, dtx, pc, prais, raps).
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<Scheme>>,
    /// TDMA affine parameter set, replacing `[powermodel.affine]`.
    #[arg(long, value_enum)]
    pub preset: Option<AffinePreset>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output encoding.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_grid(s: &str) -> std::result::Result<RateGrid, String> {
    s.parse()
}

/// Parses `args` and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    crate::logging::init(cli.log_level);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            log::error!("event=failed error=\"{err}\"");
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn load_file(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        Some(path) => {
            info!("event=config path={}", path.display());
            FileConfig::load(path)
        }
        None => Ok(FileConfig::default()),
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    let file = load_file(cli.config.as_deref())?;
    let mut overrides = Overrides {
        seed: cli.seed,
        workers: cli.workers,
        ..Overrides::default()
    };
    if let Some(sweep) = sweep_args(&cli.command) {
        overrides.trials = sweep.trials;
        overrides.rates = sweep.rates;
        overrides.spacing = sweep.spacing;
        overrides.preset = sweep.preset;
        overrides.out = sweep.out.clone();
        overrides.format = sweep.format;
    }
    if let Command::Channel {
        action: ChannelAction::Dump(dump),
    } = &cli.command
    {
        overrides.out = dump.out.clone();
    }
    let config = RunConfig::resolve(file, &overrides)?;
    info!(
        "event=resolved seed={} seed_source={} workers={} trials={}",
        config.seed,
        serde_json::to_value(config.seed_source)
            .map_or_else(|_| String::new(), |v| v.as_str().unwrap_or("").to_owned()),
        config.workers,
        config.trials
    );

    match &cli.command {
        Command::Powermodel {
            action: PowermodelAction::Eval(args),
        } => {
            let report = evaluate_model(&config, args)?;
            if cli.dry_run {
                return print_dry_run(&config, &DryRunExtra::Eval(args));
            }
            print_report(&report)
        }
        Command::Channel {
            action: ChannelAction::Dump(args),
        } => {
            if cli.dry_run {
                return print_dry_run(&config, &DryRunExtra::None);
            }
            let channels = trial_channels(&config.scenario, Family::Ofdma, config.seed, args.trial);
            let frame = channels
                .frame
                .as_ref()
                .expect("OFDMA trials carry frame channels");
            let path = config.output.path.clone();
            with_output(path.as_deref(), |out| {
                write_channel_dump(
                    &config.scenario,
                    &channels.drop.distance_m,
                    &channels.drop.gain,
                    frame,
                    out,
                )
            })
        }
        Command::PcSweep(args) => sweep(cli, &config, args, Some(Family::Tdma), &[Scheme::Pc]),
        Command::PraisSweep(args) => sweep(
            cli,
            &config,
            args,
            Some(Family::Tdma),
            &[Scheme::Ba, Scheme::Dtx, Scheme::Pc, Scheme::Prais],
        ),
        Command::RapsSim(args) => sweep(
            cli,
            &config,
            args,
            Some(Family::Ofdma),
            &[Scheme::Ba, Scheme::Dtx, Scheme::Raps],
        ),
        Command::Compare {
            sweep: args,
            family,
        } => {
            let default = config
                .schemes
                .clone()
                .unwrap_or_else(|| vec![Scheme::Ba, Scheme::Dtx, Scheme::Pc, Scheme::Prais]);
            sweep(cli, &config, args, family.map(Family::from), &default)
        }
    }
}

fn sweep_args(command: &Command) -> Option<&SweepArgs> {
    match command {
        Command::PcSweep(a) | Command::PraisSweep(a) | Command::RapsSim(a) => Some(a),
        Command::Compare { sweep, .. } => Some(sweep),
        _ => None,
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum DryRunExtra<'a> {
    None,
    Eval(&'a EvalArgs),
    Sweep {
        family: &'static str,
        schemes: Vec<Scheme>,
        rate_points: Vec<f64>,
    },
}

impl Serialize for EvalArgs {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EvalArgs", 7)?;
        st.serialize_field("model", &self.model)?;
        st.serialize_field("antennas", &self.antennas)?;
        st.serialize_field("chi", &self.chi)?;
        st.serialize_field("preset", &self.preset)?;
        st.serialize_field("tx_power", &self.tx_power)?;
        st.serialize_field("bandwidth_fraction", &self.bandwidth_fraction)?;
        st.serialize_field("sleep", &self.sleep)?;
        st.end()
    }
}

fn print_dry_run(config: &RunConfig, extra: &DryRunExtra<'_>) -> Result<()> {
    #[derive(Serialize)]
    struct DryRun<'a> {
        config: &'a RunConfig,
        command: &'a DryRunExtra<'a>,
    }
    let text = serde_json::to_string_pretty(&DryRun {
        config,
        command: extra,
    })
    .map_err(|e| AppError::config("config", e.to_string()))?;
    with_output(None, |out| writeln!(out, "{text}"))
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::Tdma => "tdma",
        Family::Ofdma => "ofdma",
    }
}

fn sweep(
    cli: &Cli,
    config: &RunConfig,
    args: &SweepArgs,
    family: Option<Family>,
    default: &[Scheme],
) -> Result<()> {
    let schemes = args.schemes.clone().unwrap_or_else(|| default.to_vec());
    let family = family_for(&schemes, family)?;
    let rates = config.rate_points();
    if cli.dry_run {
        return print_dry_run(
            config,
            &DryRunExtra::Sweep {
                family: family_name(family),
                schemes,
                rate_points: rates,
            },
        );
    }
    let power = config.power.scheme_power();
    let schemes_text: Vec<&str> = schemes.iter().map(|s| s.name()).collect();
    info!(
        "event=sweep_start family={} schemes={} rate_points={} trials={} seed={} workers={}",
        family_name(family),
        schemes_text.join(","),
        rates.len(),
        config.trials,
        config.seed,
        config.workers
    );
    let start = Instant::now();
    let points = run_sweep(&Sweep {
        scenario: &config.scenario,
        power: &power,
        family,
        schemes: &schemes,
        rates: &rates,
        trials: config.trials,
        seed: config.seed,
        workers: config.workers,
    })?;
    info!(
        "event=sweep_done points={} excluded={} elapsed_s={:.3}",
        points.len(),
        points.iter().filter(|p| !p.included).count(),
        start.elapsed().as_secs_f64()
    );
    let format = config.output.format;
    with_output(config.output.path.as_deref(), |out| {
        write_points(&points, format, out)
    })?;
    if is_infeasible(&points) {
        return Err(AppError::Infeasible);
    }
    Ok(())
}

fn with_output(
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<()> {
    fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> AppError + '_ {
        move |source| AppError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
    match path {
        Some(path) => {
            let file = File::create(path).map_err(io_error(path))?;
            let mut out = BufWriter::new(file);
            write(&mut out)
                .and_then(|()| out.flush())
                .map_err(io_error(path))?;
            info!("event=written path={}", path.display());
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            match write(&mut out).and_then(|()| out.flush()) {
                // A closed pipe (e.g. `| head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other.map_err(io_error(Path::new("<stdout>"))),
            }
        }
    }
}

/// Result of `powermodel eval`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    /// Model evaluated.
    pub model: ModelArg,
    /// Transmit antennas per sector.
    pub antennas: u32,
    /// Relative load.
    pub load: f64,
    /// Named contributions (W), summing to `total_w`.
    pub breakdown: Vec<(String, f64)>,
    /// Site supply power (W).
    pub total_w: f64,
}

fn site_affine(args: &EvalArgs) -> Result<AffineParams> {
    match args.preset {
        None => Ok(AffineParams::macro_site(args.antennas)?),
        Some(_) if args.antennas != 1 => {
            Err(AppError::config("preset", "presets describe one antenna"))
        }
        Some(preset) => Ok(AffineParams {
            sectors: 3,
            ..preset.params()
        }),
    }
}

/// Evaluates the model selected by `args`.
pub fn evaluate_model(config: &RunConfig, args: &EvalArgs) -> Result<ModelReport> {
    let load = args.chi;
    if !(0.0..=1.0).contains(&load) {
        return Err(AppError::config("chi", "must be in [0, 1]"));
    }
    let entry = |name: &str, value: f64| (name.to_owned(), value);
    let affine_parts = |static_w: f64, total: f64| {
        if load == 0.0 {
            vec![entry("sleep", total)]
        } else {
            vec![entry("static", static_w), entry("load", total - static_w)]
        }
    };
    let (breakdown, total_w) = match args.model {
        ModelArg::Affine => {
            let p = site_affine(args)?;
            let total = affine_supply(&p, load)?;
            (affine_parts(f64::from(p.sectors) * p.idle_w, total), total)
        }
        ModelArg::Parameterized => {
            let p = &config.parameterized;
            let total = parameterized_supply(p, args.antennas, load)?;
            let static_w =
                f64::from(p.sectors) * (p.full_load_w(args.antennas)? - p.slope * p.max_tx_power_w);
            (affine_parts(static_w, total), total)
        }
        ModelArg::Component => {
            let p = &config.component;
            let tx = args.tx_power.unwrap_or(load * p.max_tx_power_w);
            let fraction = args.bandwidth_fraction.unwrap_or(load);
            let b = component_supply(p, args.antennas, tx, fraction, args.sleep)?;
            let parts = b
                .entries()
                .iter()
                .filter(|(n, _)| *n != "total")
                .map(|&(n, v)| entry(n, v))
                .collect();
            (parts, b.total)
        }
    };
    Ok(ModelReport {
        model: args.model,
        antennas: args.antennas,
        load,
        breakdown,
        total_w,
    })
}

/// Formats watts with at most three decimals and no trailing zeros.
fn watts(value: f64) -> String {
    let text = format!("{value:.3}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    format!("{text} W")
}

fn print_report(report: &ModelReport) -> Result<()> {
    let json =
        serde_json::to_string(report).map_err(|e| AppError::config("report", e.to_string()))?;
    let mut lines = vec![json];
    let width = report
        .breakdown
        .iter()
        .map(|(n, _)| n.len())
        .max()
        .unwrap_or(0)
        .max(5);
    lines.push(format!(
        "{:<width$}  {}",
        "model",
        serde_json::to_value(report.model)
            .unwrap_or_default()
            .as_str()
            .unwrap_or("")
    ));
    lines.push(format!("{:<width$}  {}", "d", report.antennas));
    lines.push(format!("{:<width$}  {}", "chi", report.load));
    for (name, value) in &report.breakdown {
        lines.push(format!("{name:<width$}  {:>12}", watts(*value)));
    }
    lines.push(format!(
        "{:<width$}  {:>12}",
        "total",
        watts(report.total_w)
    ));
    with_output(None, |out| {
        lines.iter().try_for_each(|line| writeln!(out, "{line}"))
    })
}
