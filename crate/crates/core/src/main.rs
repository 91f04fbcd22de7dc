use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ringqec::circuit::AncillaMode;
use ringqec::decoder::{read_syndrome_csv, write_correction_csv, Decoder, SyndromeRecord, DEFAULT_P};
use ringqec::harness::{emit, preset_by_name, run_experiment, verification_suite, CodeChoice, CycleRange, ExperimentConfig, Report};
use ringqec::synth::Scheme;

#[derive(Parser)]
#[command(name = "ringqec", version, about = "Single-ancilla ring syndrome circuits: simulate, verify, decode")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a built-in preset (fig10, fig11, fig12).
    Preset {
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Print the preset config as JSON instead of running it.
        #[arg(long)]
        dump_config: bool,
    },
    /// Tableau verification of every scheme for a code (rep3, rep5, laflamme5, shor9).
    Verify { code: String },
    /// Decode `shot,t,generator,bit` syndromes to `shot,qubit,pauli` corrections.
    Decode {
        #[arg(long)]
        syndromes: PathBuf,
        #[arg(long, default_value = "rep3")]
        code: CodeChoice,
        #[arg(long, default_value = "forward-backward")]
        scheme: Scheme,
        #[arg(long, default_value = "qnd")]
        mode: String,
        /// Cycles in the schedule; inferred from the largest step when absent.
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_P)]
        p: f64,
        /// Write corrections here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type Res<T> = Result<T, Box<dyn std::error::Error>>;

fn run(cli: Cli) -> Res<bool> {
    match cli.command {
        Command::Run { config, out, svg } => {
            let mut cfg = ExperimentConfig::from_json(&std::fs::read_to_string(&config)?)?;
            if out.is_some() {
                cfg.output.csv = out;
            }
            if svg.is_some() {
                cfg.output.svg = svg;
            }
            experiment(&cfg)
        }
        Command::Preset {
            name,
            out,
            svg,
            shots,
            seed,
            dump_config,
        } => {
            let mut cfg = preset_by_name(&name).ok_or_else(|| format!("unknown preset {name:?}"))?;
            cfg.output.csv = Some(out);
            cfg.output.svg = svg;
            if let Some(s) = shots {
                cfg.shots = s;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if dump_config {
                println!("{}", serde_json::to_string_pretty(&cfg)?);
                return Ok(true);
            }
            experiment(&cfg)
        }
        Command::Verify { code } => {
            let suite = verification_suite(&code)?;
            let mut ok = true;
            for e in &suite {
                match &e.report {
                    Ok(r) => print!("{:<32} {r}", e.label),
                    Err(msg) => println!("{:<32} error: {msg}", e.label),
                }
                ok &= e.passed();
            }
            println!("{} of {} circuits pass", suite.iter().filter(|e| e.passed()).count(), suite.len());
            Ok(ok)
        }
        Command::Decode {
            syndromes,
            code,
            scheme,
            mode,
            cycles,
            p,
            out,
        } => {
            let text = std::fs::read_to_string(&syndromes)?;
            let mode: AncillaMode = serde_json::from_value(serde_json::Value::String(mode))?;
            let probe = ExperimentConfig {
                code,
                scheme,
                mode,
                cycles: CycleRange { from: 1, to: 1 },
                ..ExperimentConfig::default()
            };
            let per_cycle = probe.circuit()?.schedule.len();
            let max_t = text
                .lines()
                .skip(1)
                .filter_map(|l| l.split(',').nth(1)?.trim().parse::<usize>().ok())
                .max()
                .unwrap_or(1);
            let steps_per_cycle = probe.circuit()?.schedule.last().map_or(1, |e| e.step);
            let cycles = cycles.unwrap_or(max_t.div_ceil(steps_per_cycle).max(1));
            let circuit = ExperimentConfig {
                cycles: CycleRange { from: 1, to: cycles },
                ..probe
            }
            .circuit()?;
            let template = SyndromeRecord::from_outcomes(&circuit, &vec![false; circuit.schedule.len()]);
            let shots = read_syndrome_csv(text.as_bytes(), &template)?;
            let mut cache: std::collections::HashMap<usize, Decoder> = std::collections::HashMap::new();
            let mut rows = Vec::new();
            for (shot, rec) in shots {
                if !cache.contains_key(&rec.len()) {
                    cache.insert(rec.len(), Decoder::for_circuit(&circuit, rec.len(), p)?);
                }
                rows.push((shot, cache[&rec.len()].decode(&rec)?.correction));
            }
            let sink: Box<dyn Write> = match out {
                Some(path) => Box::new(BufWriter::new(File::create(path)?)),
                None => Box::new(io::stdout().lock()),
            };
            write_correction_csv(sink, &rows)?;
            eprintln!("decoded {} shots over {} cycles ({} measurements per cycle)", rows.len(), cycles, per_cycle);
            Ok(true)
        }
    }
}

fn experiment(cfg: &ExperimentConfig) -> Res<bool> {
    let report = run_experiment(cfg)?;
    print_report(&report);
    for path in emit(&report)? {
        eprintln!("wrote {}", path.display());
    }
    let in_range = report.rows.iter().all(|r| {
        (0.0..=1.0 + 1e-9).contains(&r.fid_raw)
            && (0.0..=1.0 + 1e-9).contains(&r.fid_corr)
            && r.fid_raw_err >= 0.0
            && r.fid_corr_err >= 0.0
    });
    Ok(in_range)
}

fn print_report(report: &Report) {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("{:>6} {:>8} {:>18} {:>18}", "cycles", "p2", "raw", "corrected");
    for r in &report.rows {
        println!(
            "{:>6} {:>8} {:>9.5} ± {:.5} {:>9.5} ± {:.5}",
            r.cycles, r.p2, r.fid_raw, r.fid_raw_err, r.fid_corr, r.fid_corr_err
        );
    }
    if !report.baseline.is_empty() {
        println!("single-qubit memory:");
        for b in &report.baseline {
            println!("{:>6} {:>10.1} ns {:>9.5}", b.cycles, b.duration_ns, b.fidelity);
        }
    }
}
