use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dualqkd::practical::{multi_pulse_regime, Regime};
use dualqkd::sweep::Envelope;
use dualqkd::{
    accumulation_time, choice_probabilities, crossover_distance, db_to_transmittance,
    figure_preset, max_secure_distance, max_slow_probability, multi_pulse_qber, optimal_mu, sweep,
    Column, Error, RateTable, Scenario,
};

/// Secret key rates for single- and dual-detector QKD receivers.
#[derive(Parser, Debug)]
#[command(name = "dualqkd", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Key rate (bits/s, unclamped) of a scenario at one fiber length
    Rate {
        #[arg(long)]
        config: PathBuf,
        /// fiber length in km
        #[arg(long, allow_negative_numbers = true)]
        length: f64,
    },
    /// Sweep a scenario over fiber length and write CSV
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        lmin: f64,
        #[arg(long, default_value_t = 250.0)]
        lmax: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// output CSV path, `-` for stdout
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the CSV for one of the nine built-in parameter sets
    Figure {
        #[arg(long)]
        id: u32,
        /// output CSV path, `-` for stdout
        #[arg(long)]
        out: PathBuf,
    },
    /// Longest fiber with a positive key rate
    Maxdist {
        #[arg(long)]
        config: PathBuf,
        /// search limit in km
        #[arg(long, default_value_t = 500.0)]
        lmax: f64,
    },
    /// Length where scenario A stops beating scenario B. Repeating
    /// --config-b compares against the best of those scenarios at each length.
    Crossover {
        #[arg(long)]
        config_a: PathBuf,
        #[arg(long, required = true)]
        config_b: Vec<PathBuf>,
        #[arg(long, default_value_t = 500.0)]
        lmax: f64,
    },
    /// Optimal signal mean photon number for decoy BB84
    MuOpt {
        #[arg(long, allow_negative_numbers = true)]
        edet: f64,
        #[arg(long, allow_negative_numbers = true)]
        f: f64,
    },
    /// Slow-detector routing analysis
    Schedule {
        /// probability of routing a pulse to the slow detector
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        /// pulses per slow-detector response window
        #[arg(long)]
        k: u32,
        /// QBER budget used for the p upper bound
        #[arg(long, default_value_t = 0.01)]
        qber_budget: f64,
        #[arg(long, default_value_t = 1e9)]
        rep_rate: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// fiber loss in dB
        #[arg(long, default_value_t = 21.0)]
        channel_loss_db: f64,
        #[arg(long, default_value_t = 0.16)]
        g_bob: f64,
        #[arg(long, default_value_t = 3.0)]
        switch_loss_db: f64,
        /// slow-detector efficiency
        #[arg(long, default_value_t = 0.5)]
        eta_d: f64,
        /// counts to collect on the slow detector
        #[arg(long, default_value_t = 1e6)]
        counts: f64,
    },
}

#[derive(Debug)]
enum CliError {
    Model(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

fn fmt_km(d: Option<f64>) -> String {
    d.map_or_else(|| "none".to_string(), |d| format!("{d:.2}"))
}

fn write_table(table: &RateTable, out: &Path) -> Result<(), CliError> {
    if out == Path::new("-") {
        table.write_csv(io::stdout().lock())?;
        return Ok(());
    }
    let file = File::create(out).map_err(|e| CliError::Io(out.to_path_buf(), e))?;
    let mut w = BufWriter::new(file);
    table.write_csv(&mut w)?;
    w.flush().map_err(|e| CliError::Io(out.to_path_buf(), e))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Rate { config, length } => {
            let s = Scenario::from_path(&config)?;
            println!("{:.5e}", s.evaluate(length)?);
        }
        Cmd::Sweep {
            config,
            lmin,
            lmax,
            step,
            out,
        } => {
            let s = Scenario::from_path(&config)?;
            let curve = sweep(&s, lmin, lmax, step)?;
            let table = RateTable::from_curves(&[(Column::for_mode(s.mode()), &curve)])?;
            write_table(&table, &out)?;
        }
        Cmd::Figure { id, out } => {
            let fig = figure_preset(id)?;
            write_table(&fig.table()?, &out)?;
            let lmax = fig.grid.l_max;
            let x = crossover_distance(&fig.dual, &fig.best_single(), lmax)?;
            let summary = [
                (
                    "max_distance_dual_km",
                    fmt_km(max_secure_distance(&fig.dual, lmax)?),
                ),
                (
                    "max_distance_fast_km",
                    fmt_km(max_secure_distance(&fig.fast, lmax)?),
                ),
                (
                    "max_distance_slow_km",
                    fmt_km(max_secure_distance(&fig.slow, lmax)?),
                ),
                ("dual_advantage_ends_km", fmt_km(x.map(|c| c.length_km))),
            ];
            // keep stdout clean when the CSV goes there
            let mut sink: Box<dyn Write> = if out == Path::new("-") {
                Box::new(io::stderr())
            } else {
                Box::new(io::stdout())
            };
            for (k, v) in summary {
                let _ = writeln!(sink, "{k}: {v}");
            }
            if x.is_some_and(|c| c.touching) {
                let _ = writeln!(
                    sink,
                    "note: curves touch without crossing; reported grid-cell midpoint"
                );
            }
        }
        Cmd::Maxdist { config, lmax } => {
            let s = Scenario::from_path(&config)?;
            println!("{}", fmt_km(max_secure_distance(&s, lmax)?));
        }
        Cmd::Crossover {
            config_a,
            config_b,
            lmax,
        } => {
            let a = Scenario::from_path(&config_a)?;
            let bs = config_b
                .iter()
                .map(Scenario::from_path)
                .collect::<Result<Vec<_>, _>>()?;
            let env = Envelope::new(bs.iter().collect())?;
            match crossover_distance(&a, &env, lmax)? {
                Some(c) if c.touching => println!("{:.2} (touching)", c.length_km),
                Some(c) => println!("{:.2}", c.length_km),
                None => println!("none"),
            }
        }
        Cmd::MuOpt { edet, f } => {
            println!("{:.6}", optimal_mu(edet, f)?);
        }
        Cmd::Schedule {
            p,
            k,
            qber_budget,
            rep_rate,
            mu,
            channel_loss_db,
            g_bob,
            switch_loss_db,
            eta_d,
            counts,
        } => {
            let c = choice_probabilities(p, k)?;
            let qber = multi_pulse_qber(p, k)?;
            println!("P0: {:.6e}", c.p0);
            println!("P1: {:.6e}", c.p1);
            println!("PM: {:.6e}", c.pm);
            println!("multi_pulse_qber: {qber:.6e}");
            match multi_pulse_regime(p, k)? {
                Regime::Valid => {}
                Regime::WeakApproximation => {
                    eprintln!("warning: k*p > 0.1, first-order QBER estimate is loose")
                }
                Regime::OutsideModel => {
                    eprintln!("warning: QBER estimate >= 0.25, outside the model's validity")
                }
            }
            match max_slow_probability(k, qber_budget)? {
                Some(pmax) => println!("p_max: {pmax:.6e}"),
                None => println!("p_max: unconstrained"),
            }
            let eta = db_to_transmittance(channel_loss_db)?
                * g_bob
                * db_to_transmittance(switch_loss_db)?
                * eta_d;
            let t = accumulation_time(p, rep_rate, mu, eta, counts)?;
            println!("accumulation_time_s: {t:.6e}");
            println!("accumulation_time_h: {:.4}", t / 3600.0);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Model(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(CliError::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
    }
}
