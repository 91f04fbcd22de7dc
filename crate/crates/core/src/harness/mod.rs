//! Seeded end-to-end memory experiments: synthesize, simulate, decode,
//! correct, and score fidelity per cycle count.

mod plot;

use std::io::{Read, Write};
use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{AncillaMode, Circuit, CircuitError};
use crate::decoder::{DecodeError, Decoder, DEFAULT_P};
use crate::density::noise::NoiseParams;
use crate::density::{
    conjugate_by_pauli, laflamme5_psi0, run_shots_with, single_qubit_memory, DensityError, InitialState,
};
use crate::pauli::{Pauli, StabilizerCode};
use crate::tableau::{verify_circuit, VerificationReport};
use crate::synth::{synthesize, synthesize_benchmark_two_ancilla, synthesize_nine_qubit, Scheme};

pub use plot::{render_svg, write_svg, PlotStyle};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("nothing to write: no rows")]
    Empty,
    #[error("comparison mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodeChoice {
    #[serde(rename = "rep3")]
    Rep3,
    #[serde(rename = "rep5")]
    Rep5,
    #[serde(rename = "laflamme5")]
    Laflamme5,
    #[serde(rename = "shor9")]
    Shor9,
    #[serde(rename = "benchmark-2anc")]
    Benchmark2Anc,
    #[serde(rename = "single-qubit-memory")]
    SingleQubitMemory,
}

impl CodeChoice {
    pub fn code(self) -> StabilizerCode {
        match self {
            CodeChoice::Rep3 | CodeChoice::Benchmark2Anc | CodeChoice::SingleQubitMemory => StabilizerCode::rep3(),
            CodeChoice::Rep5 => StabilizerCode::rep5(),
            CodeChoice::Laflamme5 => StabilizerCode::laflamme5(),
            CodeChoice::Shor9 => StabilizerCode::shor9(),
        }
    }
}

impl std::str::FromStr for CodeChoice {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| HarnessError::Config(format!("unknown code {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRange {
    pub from: usize,
    pub to: usize,
}

impl CycleRange {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.from..=self.to
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub code: CodeChoice,
    pub scheme: Scheme,
    pub mode: AncillaMode,
    pub cycles: CycleRange,
    pub shots: usize,
    pub noise: NoiseParams,
    /// Two-qubit depolarization levels to sweep; empty means `noise.p2` only.
    pub p2: Vec<f64>,
    pub seed: u64,
    /// Per-step fault probability behind the decoder's edge weights.
    pub decoder_p: f64,
    /// Also report the one-qubit idle memory over the same wall-clock time.
    pub baseline: bool,
    pub output: OutputPaths,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            code: CodeChoice::Rep3,
            scheme: Scheme::ForwardBackward,
            mode: AncillaMode::Qnd,
            cycles: CycleRange { from: 1, to: 8 },
            shots: 1000,
            noise: NoiseParams::default(),
            p2: Vec::new(),
            seed: 1,
            decoder_p: DEFAULT_P,
            baseline: false,
            output: OutputPaths::default(),
        }
    }
}

/// Two-qubit error levels of the reference sweep.  Approximate: read from
/// plotted curves, not tabulated anywhere.
pub const PRESET_P2: [f64; 4] = [0.0005, 0.001, 0.005, 0.01];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<Vec<String>, HarnessError> {
        if self.shots == 0 {
            return Err(HarnessError::Config("shots must be at least 1".into()));
        }
        if self.cycles.from == 0 || self.cycles.to < self.cycles.from {
            return Err(HarnessError::Config(format!(
                "cycle range {}..={} is empty or starts at 0",
                self.cycles.from, self.cycles.to
            )));
        }
        if !(self.decoder_p > 0.0 && self.decoder_p < 1.0) {
            return Err(HarnessError::Config(format!("decoder_p {} outside (0, 1)", self.decoder_p)));
        }
        if let Some(p) = self.p2.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(HarnessError::Config(format!("p2 {p} outside [0, 1]")));
        }
        Ok(self.noise.validate()?)
    }

    pub fn p2_levels(&self) -> Vec<f64> {
        if self.p2.is_empty() {
            vec![self.noise.p2]
        } else {
            self.p2.clone()
        }
    }

    /// The syndrome circuit over `self.cycles.to` cycles.
    pub fn circuit(&self) -> Result<Circuit, HarnessError> {
        let n = self.cycles.to;
        Ok(match self.code {
            CodeChoice::Benchmark2Anc => synthesize_benchmark_two_ancilla(self.mode)?.repeat(n)?,
            CodeChoice::Shor9 if self.scheme == Scheme::ForwardBackward && self.mode == AncillaMode::Qnd => {
                synthesize_nine_qubit()?.repeat(n)?
            }
            c => synthesize(&c.code(), self.scheme, self.mode, n)?,
        })
    }

    pub fn initial_state(&self) -> Result<InitialState, HarnessError> {
        match self.code {
            CodeChoice::Laflamme5 => Ok(InitialState { psi: laflamme5_psi0() }),
            c => logical_one(&c.code()).ok_or_else(|| HarnessError::Config("code has no |1…1⟩ component".into())),
        }
    }
}

fn apply_pauli(psi: &[Complex64], p: &crate::pauli::PauliString) -> Vec<Complex64> {
    let n = p.n();
    let mut out = psi.to_vec();
    for (q, &l) in p.letters().iter().enumerate() {
        let bit = 1 << (n - 1 - q);
        let prev = out.clone();
        for (i, v) in out.iter_mut().enumerate() {
            let src = prev[i ^ if l.x_bit() { bit } else { 0 }];
            let one = (i & bit) != 0;
            *v = match l {
                Pauli::I => prev[i],
                Pauli::X => src,
                Pauli::Z => if one { -src } else { src },
                Pauli::Y => src * if one { Complex64::i() } else { -Complex64::i() },
            };
        }
    }
    out
}

/// The code-space projection of |1…1⟩, normalized; the logical target state
/// for repetition-type codes.
pub fn logical_one(code: &StabilizerCode) -> Option<InitialState> {
    let n = code.n();
    let mut psi = vec![Complex64::new(0.0, 0.0); 1 << n];
    psi[(1 << n) - 1] = Complex64::new(1.0, 0.0);
    for g in code.generators() {
        let gp = apply_pauli(&psi, g);
        let sign = match g.phase() {
            0 => 1.0,
            2 => -1.0,
            _ => return None,
        };
        for (a, b) in psi.iter_mut().zip(gp) {
            *a = (*a + b * sign) * 0.5;
        }
    }
    let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    (norm > 1e-9).then(|| InitialState {
        psi: psi.into_iter().map(|c| c / norm).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub cycles: usize,
    pub p2: f64,
    pub fid_raw: f64,
    pub fid_raw_err: f64,
    pub fid_corr: f64,
    pub fid_corr_err: f64,
    pub shots: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub cycles: usize,
    pub duration_ns: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
    pub baseline: Vec<BaselineRow>,
    pub warnings: Vec<String>,
}

pub const BOOTSTRAP_RESAMPLES: usize = 200;

/// `√(mean overlap)` and its bootstrap standard error.
pub fn fidelity_with_stderr(overlaps: &[f64], rng: &mut ChaCha8Rng) -> (f64, f64) {
    let n = overlaps.len();
    let est = |sum: f64| (sum / n as f64).clamp(0.0, 1.0).sqrt();
    let f = est(overlaps.iter().sum());
    if n < 2 {
        return (f, 0.0);
    }
    let reps: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| est((0..n).map(|_| overlaps[rng.random_range(0..n)]).sum()))
        .collect();
    let mean = reps.iter().sum::<f64>() / reps.len() as f64;
    let var = reps.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (reps.len() - 1) as f64;
    (f, var.sqrt())
}

fn wall_clock(circuit: &Circuit, params: &NoiseParams, cycles: usize) -> f64 {
    let end = circuit.cycle_ends[cycles - 1];
    circuit.slices[..end]
        .iter()
        .map(|s| params.slice_duration(s.iter().any(|g| g.kind.is_two_qubit())))
        .sum()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let mut warnings = cfg.validate()?;
    let circuit = cfg.circuit()?;
    let mut rows = Vec::new();
    let mut baseline = Vec::new();
    if cfg.code == CodeChoice::SingleQubitMemory {
        for p2 in cfg.p2_levels() {
            let params = NoiseParams { p2, ..cfg.noise.clone() };
            for c in cfg.cycles.iter() {
                let f = single_qubit_memory(&params, &circuit, c)?;
                rows.push(ResultRow {
                    cycles: c,
                    p2,
                    fid_raw: f,
                    fid_raw_err: 0.0,
                    fid_corr: f,
                    fid_corr_err: 0.0,
                    shots: 1,
                    seed: cfg.seed,
                });
            }
        }
        return Ok(Report {
            config: cfg.clone(),
            rows,
            baseline,
            warnings,
        });
    }
    let initial = cfg.initial_state()?;
    let decoders: Vec<Decoder> = cfg
        .cycles
        .iter()
        .map(|c| Decoder::for_circuit(&circuit, circuit.records_through_cycle(c - 1), cfg.decoder_p))
        .collect::<Result<_, _>>()?;
    let target = initial.psi.clone();
    let mut boot = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xB007);
    for p2 in cfg.p2_levels() {
        let params = NoiseParams { p2, ..cfg.noise.clone() };
        let per_shot = run_shots_with(&circuit, &initial, &params, cfg.shots, cfg.seed, &[], |_, shot| {
            cfg.cycles
                .iter()
                .zip(&decoders)
                .map(|(c, dec)| -> Result<(f64, f64), HarnessError> {
                    let rho = &shot.snapshots[c - 1];
                    let raw = rho.expectation(&target)?;
                    let rec = shot.syndrome.truncated(circuit.records_through_cycle(c - 1));
                    let fix = dec.decode(&rec)?.correction;
                    let mut rc = rho.clone();
                    conjugate_by_pauli(&mut rc, &fix.pauli);
                    Ok((raw, rc.expectation(&target)?))
                })
                .collect::<Result<Vec<_>, _>>()
        })?;
        let per_shot: Vec<Vec<(f64, f64)>> = per_shot.into_iter().collect::<Result<_, _>>()?;
        for (k, c) in cfg.cycles.iter().enumerate() {
            let raw: Vec<f64> = per_shot.iter().map(|s| s[k].0).collect();
            let corr: Vec<f64> = per_shot.iter().map(|s| s[k].1).collect();
            let (fid_raw, fid_raw_err) = fidelity_with_stderr(&raw, &mut boot);
            let (fid_corr, fid_corr_err) = fidelity_with_stderr(&corr, &mut boot);
            rows.push(ResultRow {
                cycles: c,
                p2,
                fid_raw,
                fid_raw_err,
                fid_corr,
                fid_corr_err,
                shots: cfg.shots,
                seed: cfg.seed,
            });
        }
    }
    if cfg.baseline {
        for c in cfg.cycles.iter() {
            baseline.push(BaselineRow {
                cycles: c,
                duration_ns: wall_clock(&circuit, &cfg.noise, c) * 1e9,
                fidelity: single_qubit_memory(&cfg.noise, &circuit, c)?,
            });
        }
    }
    let low = rows
        .iter()
        .filter(|r| r.fid_corr < r.fid_raw - 2.0 * r.fid_raw_err.hypot(r.fid_corr_err))
        .count();
    if low > 0 {
        warnings.push(format!("{low} rows with corrected fidelity below uncorrected by more than 2 stderr"));
    }
    Ok(Report {
        config: cfg.clone(),
        rows,
        baseline,
        warnings,
    })
}

fn preset(code: CodeChoice, baseline: bool) -> ExperimentConfig {
    ExperimentConfig {
        code,
        p2: PRESET_P2.to_vec(),
        baseline,
        ..ExperimentConfig::default()
    }
}

/// 3-qubit repetition code, 4 measurements per cycle.
pub fn preset_fig10() -> ExperimentConfig {
    preset(CodeChoice::Rep3, false)
}

/// As `preset_fig10`, with the one-qubit memory baseline.
pub fn preset_fig11() -> ExperimentConfig {
    preset(CodeChoice::Rep3, true)
}

/// 5-qubit code, 8 measurements per cycle.
pub fn preset_fig12() -> ExperimentConfig {
    preset(CodeChoice::Laflamme5, false)
}

pub fn preset_by_name(name: &str) -> Option<ExperimentConfig> {
    match name {
        "fig10" => Some(preset_fig10()),
        "fig11" => Some(preset_fig11()),
        "fig12" => Some(preset_fig12()),
        _ => None,
    }
}

pub fn write_csv<W: Write>(writer: W, rows: &[ResultRow]) -> Result<(), HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::Empty);
    }
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<ResultRow>, HarnessError> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|r| r.map_err(HarnessError::from))
        .collect()
}

pub fn write_baseline_csv<W: Write>(writer: W, rows: &[BaselineRow]) -> Result<(), HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::Empty);
    }
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Write the CSV (plus a `.baseline.csv` sibling when present) and SVG named in
/// the config's output paths.
pub fn emit(report: &Report) -> Result<Vec<PathBuf>, HarnessError> {
    let mut written = Vec::new();
    if let Some(path) = &report.config.output.csv {
        write_csv(std::fs::File::create(path)?, &report.rows)?;
        written.push(path.clone());
        if !report.baseline.is_empty() {
            let b = path.with_extension("baseline.csv");
            write_baseline_csv(std::fs::File::create(&b)?, &report.baseline)?;
            written.push(b);
        }
    }
    if let Some(path) = &report.config.output.svg {
        write_svg(path, &report.rows, &report.baseline, &PlotStyle::default())?;
        written.push(path.clone());
    }
    Ok(written)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub cycles: usize,
    pub p2: f64,
    pub a_corr: f64,
    pub a_err: f64,
    pub b_corr: f64,
    pub b_err: f64,
    /// |a − b| ≤ 3·√(σa² + σb²).
    pub consistent: bool,
}

/// Corrected fidelities of two schemes for the same code and noise.
pub fn compare_schemes(a: &ExperimentConfig, b: &ExperimentConfig) -> Result<Vec<ComparisonRow>, HarnessError> {
    if a.code.code().n() != b.code.code().n() {
        return Err(HarnessError::Mismatch(format!(
            "{:?} has {} data qubits, {:?} has {}",
            a.code,
            a.code.code().n(),
            b.code,
            b.code.code().n()
        )));
    }
    if a.noise != b.noise || a.p2_levels() != b.p2_levels() || a.cycles != b.cycles {
        return Err(HarnessError::Mismatch("noise, p2 sweep and cycle range must match".into()));
    }
    let (ra, rb) = (run_experiment(a)?, run_experiment(b)?);
    Ok(ra
        .rows
        .iter()
        .zip(&rb.rows)
        .map(|(x, y)| ComparisonRow {
            cycles: x.cycles,
            p2: x.p2,
            a_corr: x.fid_corr,
            a_err: x.fid_corr_err,
            b_corr: y.fid_corr,
            b_err: y.fid_corr_err,
            consistent: (x.fid_corr - y.fid_corr).abs() <= 3.0 * x.fid_corr_err.hypot(y.fid_corr_err),
        })
        .collect())
}

/// Outcome of one circuit in the tableau verification suite.
#[derive(Clone, Debug)]
pub struct SuiteEntry {
    pub label: String,
    pub report: Result<VerificationReport, String>,
}

impl SuiteEntry {
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_ok_and(VerificationReport::passed)
    }
}

/// Every synthesizable scheme for a built-in code, checked by tableau
/// simulation.  Schemes a code does not support are left out.
pub fn verification_suite(code_name: &str) -> Result<Vec<SuiteEntry>, HarnessError> {
    let code = StabilizerCode::builtin(code_name)
        .ok_or_else(|| HarnessError::Config(format!("unknown code {code_name:?}")))?;
    let mut circuits: Vec<(String, Result<Circuit, CircuitError>)> = Vec::new();
    if code.n() == 9 {
        circuits.push(("forward-backward qnd".into(), synthesize_nine_qubit()));
        circuits.push(("forward-backward qnd x2".into(), synthesize_nine_qubit().and_then(|c| c.repeat(2))));
    } else {
        for scheme in [Scheme::ForwardBackward, Scheme::HalfCycle, Scheme::ReducedConnectivity] {
            for mode in [AncillaMode::Qnd, AncillaMode::Reinit] {
                for cycles in [1, 2] {
                    let label = format!("{} {} x{cycles}", scheme_name(scheme), mode);
                    circuits.push((label, synthesize(&code, scheme, mode, cycles)));
                }
            }
        }
        if code.generators() == StabilizerCode::rep3().generators() {
            for mode in [AncillaMode::Qnd, AncillaMode::Reinit] {
                circuits.push((
                    format!("benchmark-2anc {}", mode),
                    synthesize_benchmark_two_ancilla(mode),
                ));
            }
        }
    }
    let mut out = Vec::new();
    for (label, c) in circuits {
        match c {
            Err(CircuitError::Unsupported(_)) => continue,
            Err(e) => out.push(SuiteEntry {
                label,
                report: Err(e.to_string()),
            }),
            Ok(c) => out.push(SuiteEntry {
                label,
                report: verify_circuit(&c, &code).map_err(|e| e.to_string()),
            }),
        }
    }
    Ok(out)
}

fn scheme_name(s: Scheme) -> &'static str {
    match s {
        Scheme::ForwardBackward => "forward-backward",
        Scheme::HalfCycle => "half-cycle",
        Scheme::ReducedConnectivity => "reduced-connectivity",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(code: CodeChoice, noise: NoiseParams) -> ExperimentConfig {
        ExperimentConfig {
            code,
            cycles: CycleRange { from: 1, to: 2 },
            shots: 8,
            p2: vec![noise.p2],
            noise,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn zero_noise_gives_unit_fidelity() {
        for code in [CodeChoice::Rep3, CodeChoice::Laflamme5, CodeChoice::Benchmark2Anc] {
            let r = run_experiment(&small(code, NoiseParams::noiseless())).unwrap();
            for row in &r.rows {
                assert!((row.fid_raw - 1.0).abs() < 1e-9, "{code:?} {row:?}");
                assert!((row.fid_corr - 1.0).abs() < 1e-9, "{code:?} {row:?}");
                assert!(row.fid_raw_err < 1e-9);
            }
        }
    }

    #[test]
    fn logical_one_matches_known_states() {
        let rep = logical_one(&StabilizerCode::rep3()).unwrap();
        assert!((rep.psi[7].re - 1.0).abs() < 1e-12);
        let shor = logical_one(&StabilizerCode::shor9()).unwrap();
        let nonzero = shor.psi.iter().filter(|c| c.norm() > 1e-9).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn config_json_round_trip_and_validation() {
        let cfg = preset_fig12();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
        let partial = r#"{"code": "rep5", "shots": 3, "cycles": {"from": 1, "to": 2}}"#;
        let p = ExperimentConfig::from_json(partial).unwrap();
        assert_eq!((p.code, p.shots), (CodeChoice::Rep5, 3));
        assert!(ExperimentConfig::from_json(r#"{"shots": 0}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"cycles": {"from": 0, "to": 2}}"#).is_err());
    }

    #[test]
    fn presets_have_expected_series_lengths() {
        for (cfg, per_cycle) in [(preset_fig10(), 4), (preset_fig11(), 4), (preset_fig12(), 8)] {
            let c = ExperimentConfig {
                cycles: CycleRange { from: 1, to: 1 },
                ..cfg.clone()
            }
            .circuit()
            .unwrap();
            assert_eq!(c.schedule.len(), per_cycle);
            assert_eq!(cfg.noise.p1, 0.000276);
            assert_eq!(cfg.noise.pm, 0.02);
        }
        assert!(preset_fig11().baseline);
    }

    #[test]
    fn csv_round_trip_and_empty() {
        let rows = vec![ResultRow {
            cycles: 3,
            p2: 0.0005,
            fid_raw: 0.912_345_678_901_234_5,
            fid_raw_err: 0.001,
            fid_corr: 0.97,
            fid_corr_err: 1.0 / 3.0,
            shots: 1000,
            seed: 42,
        }];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("cycles,p2,fid_raw,fid_raw_err,fid_corr,fid_corr_err,shots,seed\n"));
        assert_eq!(read_csv(&buf[..]).unwrap(), rows);
        assert!(matches!(write_csv(Vec::new(), &[]), Err(HarnessError::Empty)));
    }

    #[test]
    fn same_seed_same_rows() {
        let cfg = small(CodeChoice::Rep3, NoiseParams::reference(0.01));
        assert_eq!(run_experiment(&cfg).unwrap().rows, run_experiment(&cfg).unwrap().rows);
    }

    #[test]
    fn identical_schemes_compare_equal() {
        let cfg = small(CodeChoice::Rep3, NoiseParams::reference(0.005));
        let rows = compare_schemes(&cfg, &cfg).unwrap();
        assert!(rows.iter().all(|r| r.a_corr == r.b_corr && r.consistent));
        let other = small(CodeChoice::Laflamme5, NoiseParams::reference(0.005));
        assert!(compare_schemes(&cfg, &other).is_err());
    }

    #[test]
    fn suite_passes_for_builtin_codes() {
        for name in ["rep3", "rep5", "laflamme5"] {
            let suite = verification_suite(name).unwrap();
            assert!(suite.len() >= 4, "{name}");
            for e in &suite {
                assert!(e.passed(), "{name} {}: {:?}", e.label, e.report);
            }
        }
        assert!(verification_suite("steane").is_err());
    }

    #[test]
    fn bootstrap_of_constant_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (f, e) = fidelity_with_stderr(&[0.81; 50], &mut rng);
        assert!((f - 0.9).abs() < 1e-12 && e < 1e-12);
    }
}
