use std::path::PathBuf;
use std::process::ExitCode;

use qsa_cli::acceptance;
use qsa_cli::commands::*;
use qsa_cli::config::{parse_config, FileConfig};
use qsa_cli::output::ArtifactSet;

const USAGE: &str = "\
usage: qsa <command> [--config FILE] [--out DIR] [--seed N] [--jobs N]

commands:
  coupling-scan     well-to-well coupling over an (n, d) grid
  avoided-crossing  synthetic crossing spectrum + model fit
  mode-structure    mode table and pair-splitting scan
  heating           common/stretch heating-rate scan
  exchange          DC-switch phonon-exchange dynamics
  ms-gate           bichromatic gate on two closely spaced modes
  lightshift        geometric transversal gate fidelity sweeps
  pseudo            RF double-well landscape vs amplitude ratio
  qec               resource tables and concatenated-code layouts
  repro-all         run the full acceptance suite and emit a report

exit codes: 0 success, 2 config/schema error, 3 numerical failures (per-point
logs land in the artifacts)";

struct Args {
    command: String,
    config: Option<PathBuf>,
    out: PathBuf,
    seed: u64,
    jobs: Option<usize>,
}

fn parse_args() -> Result<Args, String> {
    let mut argv = std::env::args().skip(1);
    let command = argv.next().ok_or_else(|| USAGE.to_string())?;
    let mut args = Args {
        command,
        config: None,
        out: PathBuf::from("out"),
        seed: 7,
        jobs: None,
    };
    while let Some(flag) = argv.next() {
        let mut value = || argv.next().ok_or(format!("missing value for {flag}"));
        match flag.as_str() {
            "--config" => args.config = Some(PathBuf::from(value()?)),
            "--out" => args.out = PathBuf::from(value()?),
            "--seed" => {
                args.seed = value()?.parse().map_err(|e| format!("--seed: {e}"))?;
            }
            "--jobs" => {
                args.jobs = Some(value()?.parse().map_err(|e| format!("--jobs: {e}"))?);
            }
            "--help" | "-h" => return Err(USAGE.to_string()),
            other => return Err(format!("unknown flag {other}\n{USAGE}")),
        }
    }
    Ok(args)
}

fn load_config(args: &Args) -> Result<FileConfig, String> {
    let path = args.config.as_ref().ok_or("this command needs --config FILE")?;
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text)
}

fn missing_block(name: &str) -> String {
    format!("config file has no \"{name}\" block")
}

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    #[cfg(feature = "parallel")]
    if let Some(jobs) = args.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }

    if args.command == "repro-all" {
        return run_repro_all(&args);
    }

    let outcome: Result<CommandOutcome, String> = (|| {
        let config = load_config(&args)?;
        let seed = config.seed.unwrap_or(args.seed);
        match args.command.as_str() {
            "coupling-scan" => {
                run_coupling_scan(config.coupling_scan.as_ref().ok_or(missing_block("coupling_scan"))?)
            }
            "avoided-crossing" => run_avoided_crossing(
                config.avoided_crossing.as_ref().ok_or(missing_block("avoided_crossing"))?,
                seed,
            ),
            "mode-structure" => {
                run_mode_structure(config.mode_structure.as_ref().ok_or(missing_block("mode_structure"))?)
            }
            "heating" => run_heating(config.heating.as_ref().ok_or(missing_block("heating"))?),
            "exchange" => run_exchange(config.exchange.as_ref().ok_or(missing_block("exchange"))?),
            "ms-gate" => run_ms_gate(config.ms_gate.as_ref().ok_or(missing_block("ms_gate"))?),
            "lightshift" => {
                run_lightshift(config.lightshift.as_ref().ok_or(missing_block("lightshift"))?)
            }
            "pseudo" => run_pseudo(config.pseudo.as_ref().ok_or(missing_block("pseudo"))?),
            "qec" => run_qec(config.qec.as_ref().ok_or(missing_block("qec"))?),
            other => Err(format!("unknown command {other}\n{USAGE}")),
        }
    })();

    match outcome {
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(outcome) => {
            match outcome.artifacts.write_all(&args.out) {
                Ok(paths) => {
                    for p in paths {
                        println!("wrote {}", p.display());
                    }
                }
                Err(e) => {
                    eprintln!("error writing artifacts: {e}");
                    return ExitCode::from(3);
                }
            }
            if outcome.had_point_failures {
                eprintln!("some grid points failed; see status columns");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}

fn run_repro_all(args: &Args) -> ExitCode {
    println!("running acceptance suite (seed {})", args.seed);
    let reports = acceptance::run_all(args.seed, None);
    let mut artifacts = ArtifactSet::default();
    for (name, content) in acceptance::standard_artifacts(args.seed).unwrap_or_default() {
        artifacts.add(name, content);
    }
    artifacts.add_json("acceptance_report.json", &reports);
    let mut all_pass = true;
    for report in &reports {
        let mark = if report.passed { "PASS" } else { "FAIL" };
        println!("[{mark}] criterion {:2}: {} ({:.1}s)", report.id, report.name, report.runtime_s);
        for check in &report.checks {
            let cm = if check.passed { "ok  " } else { "FAIL" };
            println!("    {cm} {}", check.label);
        }
        all_pass &= report.passed;
    }
    if let Err(e) = artifacts.write_all(&args.out) {
        eprintln!("error writing artifacts: {e}");
        return ExitCode::from(3);
    }
    println!("artifacts in {}", args.out.display());
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}
