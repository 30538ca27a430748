use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fock_attenuation::scenario::{
    self, GridSpec, ModeName, Parameters, RunError, ScenarioConfig, ScenarioKind, StateKind,
};

/// Attenuation of nonclassical light in a truncated Fock basis.
#[derive(Parser)]
#[command(name = "fock-atten", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wigner grid of a single input state.
    Wigner(Flags),
    /// Even cat state through an attenuator.
    CatAtten(Flags),
    /// Squeezed vacuum through an attenuator, with Gaussian fits.
    SmsvAtten(Flags),
    /// Interferometer coincidence curve over the phase.
    MziSweep(Flags),
    /// Interferometer visibility against detector efficiency.
    EtaSweep(Flags),
    /// Report every violated constraint without running anything.
    Validate {
        #[arg(value_enum)]
        scenario: Option<ScenarioKind>,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
struct Flags {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON run manifest; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    cutoff: Option<usize>,
    /// Square phase-space grid as MIN:MAX:POINTS.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Squeezing factor s = e^{2ξ}.
    #[arg(long, conflicts_with = "xi")]
    s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    /// Amplitude the attenuator keeps.
    #[arg(long)]
    keep: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeName>,
    /// Detector efficiency; a comma-separated list for eta-sweep.
    #[arg(long, value_delimiter = ',')]
    eta: Vec<f64>,
    /// Number of phase samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Input state for the wigner scenario.
    #[arg(long, value_enum)]
    state: Option<StateKind>,
    /// Photon number for `--state number`.
    #[arg(long)]
    photons: Option<usize>,
}

fn build(kind: Option<ScenarioKind>, flags: Flags) -> Result<ScenarioConfig, Vec<String>> {
    let mut config = match (&flags.config, kind) {
        (Some(path), _) => ScenarioConfig::load(path).map_err(|e| vec![e])?,
        (None, Some(kind)) => ScenarioConfig::new(kind),
        (None, None) => return Err(vec!["validate needs a scenario or --config".into()]),
    };
    if let Some(kind) = kind {
        if config.scenario != kind {
            return Err(vec![format!(
                "config file describes {}, not {kind}",
                config.scenario
            )]);
        }
    }
    let mut overrides = Parameters {
        state: flags.state,
        alpha: flags.alpha,
        photons: flags.photons,
        s: flags.s,
        xi: flags.xi,
        keep: flags.keep,
        mode: flags.mode,
        samples: flags.samples,
        cutoff: flags.cutoff,
        ..Parameters::default()
    };
    match (config.scenario, flags.eta.as_slice()) {
        (_, []) => {}
        (ScenarioKind::EtaSweep, etas) => overrides.etas = Some(etas.to_vec()),
        (_, [eta]) => overrides.eta = Some(*eta),
        _ => return Err(vec!["--eta takes a single value outside eta-sweep".into()]),
    }
    config.parameters.merge(overrides);
    if let Some(out) = flags.out {
        config.output = out;
    }
    if flags.grid.is_some() {
        config.grid = flags.grid;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let (kind, flags, check_only) = match Cli::parse().command {
        Command::Wigner(f) => (Some(ScenarioKind::Wigner), f, false),
        Command::CatAtten(f) => (Some(ScenarioKind::CatAtten), f, false),
        Command::SmsvAtten(f) => (Some(ScenarioKind::SmsvAtten), f, false),
        Command::MziSweep(f) => (Some(ScenarioKind::MziSweep), f, false),
        Command::EtaSweep(f) => (Some(ScenarioKind::EtaSweep), f, false),
        Command::Validate { scenario, flags } => (scenario, flags, true),
    };
    let config = match build(kind, flags) {
        Ok(c) => c,
        Err(diags) => {
            eprintln!("{}", RunError::Config(diags));
            return ExitCode::from(2);
        }
    };

    if check_only {
        let diags = scenario::validate(&config);
        if diags.is_empty() {
            println!("{}: ok", config.scenario);
            return ExitCode::SUCCESS;
        }
        for d in &diags {
            println!("{d}");
        }
        return ExitCode::from(2);
    }

    match scenario::run(&config) {
        Ok(artifacts) => {
            for (name, _) in &artifacts.files {
                println!("{}", config.output.join(name).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
