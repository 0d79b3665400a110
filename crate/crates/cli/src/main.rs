mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command};

use commands::CliError;
use config::{ConfigError, Format, ScenarioConfig, KEYS};
use output::{render_json, write_output, Report};

const SUBCOMMANDS: &[(&str, &str)] = &[
    ("momentum", "field momentum Pi_q along the path"),
    ("phase", "geometric phase from endpoint and path forms"),
    ("interfere", "p_200 / p_210 against a flux-density sweep"),
    ("hmw", "loop phase of a dipole encircling the slab"),
    ("dual", "spin-1/2 passing an electric sheet"),
    (
        "gauge-compare",
        "potential-based phase in two gauges against the field-momentum phase",
    ),
    ("verify", "run the invariant battery"),
];

fn cli() -> Command {
    let mut args = vec![Arg::new("config")
        .long("config")
        .value_name("FILE")
        .value_parser(clap::value_parser!(PathBuf))
        .help("scenario file with one `key = value` per line")];
    for (key, help) in KEYS {
        let flag = key.replace('_', "-");
        let mut arg = Arg::new(*key)
            .long(flag.clone())
            .value_name("VALUE")
            .allow_hyphen_values(true)
            .help(*help);
        if flag != *key {
            arg = arg.alias(*key);
        }
        args.push(arg);
    }
    Command::new("dipole-phase")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Geometric phase of an electric dipole passing a distant magnetic sheet")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommands(
            SUBCOMMANDS
                .iter()
                .map(|(name, about)| Command::new(*name).about(*about).args(args.clone())),
        )
}

fn load(m: &ArgMatches) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = ScenarioConfig::default();
    if let Some(path) = m.get_one::<PathBuf>("config") {
        cfg.apply_file(path)?;
    }
    for (key, _) in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v)
                .map_err(|e| ConfigError::new(format!("--{}: {e}", key.replace('_', "-"))))?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var("DIPOLE_PHASE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        ConfigError::new(format!(
            "DIPOLE_PHASE_THREADS must be a non-negative integer, got `{raw}`"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ConfigError::new(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}

fn emit(report: &Report, cfg: &ScenarioConfig) -> std::io::Result<()> {
    let text = match cfg.format {
        Format::Json => render_json(&report.to_json()),
        Format::Csv => report.to_csv(),
    };
    write_output(&text, cfg.output.as_deref())
}

fn run(name: &str, cfg: &ScenarioConfig) -> Result<(), CliError> {
    if name == "verify" {
        let (report, checks) = commands::verify(cfg);
        print!("{}", commands::verify_table(&checks));
        if let Some(path) = &cfg.output {
            write_output(&render_json(&report.to_json()), Some(path))?;
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        if failed > 0 {
            return Err(CliError::Invariant(format!(
                "{failed} invariant checks failed"
            )));
        }
        return Ok(());
    }
    if cfg.format == Format::Csv && !matches!(name, "momentum" | "interfere") {
        return Err(ConfigError::new(format!(
            "`{name}` has no sweep; csv output needs momentum or interfere"
        ))
        .into());
    }
    let result = match name {
        "momentum" => commands::momentum(cfg),
        "phase" => commands::phase(cfg),
        "interfere" => commands::interfere(cfg),
        "hmw" => commands::hmw(cfg),
        "dual" => commands::dual(cfg),
        "gauge-compare" => commands::gauge(cfg),
        _ => unreachable!("clap rejects unknown subcommands"),
    };
    match result {
        Ok(report) => Ok(emit(&report, cfg)?),
        Err(CliError::Numerical(report, msg)) => {
            emit(&report, cfg)?;
            Err(CliError::Numerical(report, msg))
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let outcome = configure_threads()
        .map_err(CliError::from)
        .and_then(|_| load(sub).map_err(CliError::from))
        .and_then(|cfg| run(name, &cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(c) => eprintln!("error: {c}"),
                CliError::Numerical(_, msg) => eprintln!("error: {msg} (partial results written)"),
                CliError::Invariant(msg) => eprintln!("error: {msg}"),
                CliError::Io(io) => eprintln!("error: {io}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
