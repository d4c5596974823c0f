use clap::Parser;
use thermolink::{Error, Result};
use thermolink_cli::args::{Cli, Command};
use thermolink_cli::{commands, load_config, parse_temperature, sweeps};

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Schedule { config, mode, out } => {
            let scenario = load_config(config.as_deref())?;
            commands::cmd_schedule(&scenario, mode.into(), out.as_deref())
        }
        Command::Simulate {
            config,
            dt,
            out,
            stride,
        } => {
            let scenario = load_config(config.as_deref())?;
            commands::cmd_simulate(&scenario, dt, stride, out.as_deref())
        }
        Command::Sweep {
            figure,
            config,
            mode,
            out,
        } => {
            let scenario = load_config(config.as_deref())?;
            let csv = sweeps::sweep_csv(&scenario, figure, mode.into())?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &csv).map_err(|source| Error::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    Ok(String::new())
                }
                None => Ok(csv),
            }
        }
        Command::Calibrate {
            config,
            threshold_bits,
            target_ttotal,
            target_twait,
        } => {
            let scenario = load_config(config.as_deref())?;
            let target_twait_k = target_twait.as_deref().map(parse_temperature).transpose()?;
            commands::cmd_calibrate(&scenario, threshold_bits, target_ttotal, target_twait_k)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => print!("{output}"),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
