//! Subcommand implementations behind the `fetcam` binary. Each command writes
//! its artifacts under the output directory and returns a printable summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::array::{self, ArrayConfig, EarlyTermination, SearchOutcome};
use crate::cell::{
    check_resistance_order, encode, evaluate_divider, evaluate_match_2fefet, CellDesign, CellEncoding, OrderCheck,
    SearchBit, TernaryBit,
};
use crate::config::RunConfig;
use crate::device::PolarizationState;
use crate::error::{Result, TcamError};
use crate::grid;
use crate::perf::{FEMTO, PICO};
use crate::report::{self, sig3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;

pub fn exit_code(err: &TcamError) -> i32 {
    match err {
        TcamError::Format { .. } => EXIT_FORMAT,
        TcamError::Config(_) | TcamError::ResistanceOrder(_) => EXIT_VALIDATION,
        _ => EXIT_FAILURE,
    }
}

/// Command-line overrides applied on top of the loaded configuration.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub no_early_termination: bool,
    pub designs: Vec<CellDesign>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(o) = &self.out_dir {
            cfg.output_dir = o.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.no_early_termination {
            cfg.array.early_termination = EarlyTermination::Disabled;
        }
        if !self.designs.is_empty() {
            let mut d = self.designs.clone();
            d.sort();
            d.dedup();
            cfg.designs = d;
        }
    }
}

#[derive(Debug, Clone)]
pub struct CommandResult {
    pub exit_code: i32,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

fn write_file(dir: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    fs::create_dir_all(dir)?;
    let p = dir.join(name);
    fs::write(&p, contents)?;
    files.push(p);
    Ok(())
}

/// File-name friendly design label.
pub fn design_slug(d: CellDesign) -> String {
    d.name().to_ascii_lowercase()
}

// ---------------------------------------------------------------- validate

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub design: CellDesign,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(design: CellDesign, name: &str, r: std::result::Result<String, String>) -> Check {
    match r {
        Ok(detail) => Check { design, name: name.into(), passed: true, detail },
        Err(detail) => Check { design, name: name.into(), passed: false, detail },
    }
}

fn oracle(stored: TernaryBit, q: SearchBit) -> bool {
    !stored.mismatches(q)
}

fn truth_table(cfg: &ArrayConfig) -> std::result::Result<String, String> {
    let rs = crate::cell::ResistanceSet::from_device(&cfg.dev, &cfg.div).map_err(|e| e.to_string())?;
    let mut worst_margin = f64::INFINITY;
    for b in TernaryBit::ALL {
        for q in SearchBit::ALL {
            let matched = match encode(cfg.design, b) {
                CellEncoding::Pair(p) => !evaluate_match_2fefet(p, q, &cfg.dev).map_err(|e| e.to_string())?.pulls_down,
                CellEncoding::Single(s) => {
                    let e = evaluate_divider(s, q, &rs, &cfg.div).map_err(|e| e.to_string())?;
                    worst_margin = worst_margin.min((e.v_sl_bar - cfg.div.tml_vth).abs());
                    !e.tml_conducting
                }
            };
            if matched != oracle(b, q) {
                return Err(format!(
                    "stored {} / search {} gives {}",
                    b.to_char(),
                    q.to_char(),
                    if matched { "match" } else { "mismatch" }
                ));
            }
        }
    }
    Ok(if worst_margin.is_finite() {
        format!("6/6 combinations; worst TML gate margin {:.3} V", worst_margin)
    } else {
        "6/6 combinations".into()
    })
}

fn validate_design(cfg: &ArrayConfig) -> Vec<Check> {
    let d = cfg.design;
    let mut out = Vec::new();
    out.push(check(d, "device parameters", cfg.dev.validate().map(|_| "ok".into()).map_err(|e| e.to_string())));
    let mw = cfg.dev.vth_hvt - cfg.dev.vth_lvt;
    out.push(check(
        d,
        "memory window",
        if mw > 0.0 && (mw - cfg.dev.memory_window).abs() < 1e-9 {
            Ok(format!("{:.2} V", mw))
        } else {
            Err(format!("vth_hvt - vth_lvt = {mw:.3} V, configured {:.3} V", cfg.dev.memory_window))
        },
    ));
    if d.is_paired() {
        out.push(check(
            d,
            "resistance order",
            match check_resistance_order(&cfg.dev, &cfg.div) {
                Ok(OrderCheck::Ordered(rs)) => Ok(format!(
                    "R_ON {:.3e} < R_N {:.3e} < R_M {:.3e} < R_P {:.3e} < R_OFF {:.3e}",
                    rs.r_on, rs.r_n, rs.r_m, rs.r_p, rs.r_off
                )),
                Ok(OrderCheck::Violated { relation, set }) => Err(format!(
                    "{relation} violated (R_ON {:.3e}, R_N {:.3e}, R_M {:.3e}, R_P {:.3e}, R_OFF {:.3e})",
                    set.r_on, set.r_n, set.r_m, set.r_p, set.r_off
                )),
                Err(e) => Err(e.to_string()),
            },
        ));
    } else {
        out.push(check(
            d,
            "on/off separation",
            match (
                crate::device::search_resistance(&cfg.dev, PolarizationState::Lvt),
                crate::device::search_resistance(&cfg.dev, PolarizationState::Hvt),
            ) {
                (Ok(on), Ok(off)) if off >= 10.0 * on => Ok(format!("R_OFF/R_ON = {:.3e}", off / on)),
                (Ok(on), Ok(off)) => Err(format!("R_OFF/R_ON = {:.3e} below 10", off / on)),
                (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
            },
        ));
    }
    out.push(check(d, "truth table", truth_table(cfg)));
    out.push(check(d, "array configuration", cfg.validate().map(|_| "ok".into()).map_err(|e| e.to_string())));
    out
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<CommandResult> {
    // Calibration may be impossible under an invalid configuration; report the
    // uncalibrated checks in that case.
    let (configs, note) = match cfg.resolve() {
        Ok(m) => (m.configs, None),
        Err(e) => {
            let mut m = BTreeMap::new();
            for d in &cfg.designs {
                m.insert(*d, cfg.base_array(*d)?);
            }
            (m, Some(e.to_string()))
        }
    };
    let mut checks: Vec<Check> = configs.values().flat_map(validate_design).collect();
    if let Some(n) = note {
        checks.push(Check { design: cfg.designs[0], name: "calibration".into(), passed: false, detail: n });
    }
    let mut s = String::new();
    for c in &checks {
        writeln!(s, "[{}] {:<11} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.design.name(), c.name, c.detail)
            .unwrap();
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(s, "{} checks, {} failed", checks.len(), failed).unwrap();
    Ok(CommandResult { exit_code: if failed == 0 { EXIT_OK } else { EXIT_VALIDATION }, summary: s, files: vec![] })
}

// ---------------------------------------------------------------- search

/// Random contents and queries; every even-indexed query is drawn from a
/// stored word (wildcards resolved randomly) and therefore matches it.
pub fn random_workload(
    rows: usize,
    cols: usize,
    queries: usize,
    seed: u64,
) -> (Vec<Vec<TernaryBit>>, Vec<Vec<SearchBit>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<Vec<TernaryBit>> =
        (0..rows).map(|_| (0..cols).map(|_| TernaryBit::ALL[rng.gen_range(0..3)]).collect()).collect();
    let bit = |rng: &mut ChaCha8Rng| if rng.gen::<bool>() { SearchBit::One } else { SearchBit::Zero };
    let qs = (0..queries)
        .map(|i| {
            if i % 2 == 0 && rows > 0 {
                let w = &words[rng.gen_range(0..rows)];
                w.iter()
                    .map(|b| match b {
                        TernaryBit::Zero => SearchBit::Zero,
                        TernaryBit::One => SearchBit::One,
                        TernaryBit::DontCare => bit(&mut rng),
                    })
                    .collect()
            } else {
                (0..cols).map(|_| bit(&mut rng)).collect()
            }
        })
        .collect();
    (words, qs)
}

pub fn search_results_csv(outcomes: &[SearchOutcome], queries: &[Vec<SearchBit>]) -> (String, String) {
    let mut res = String::from(
        "query_index,query,matched_rows,sel_b_suppressed,latency_ps,energy_total_fj,precharge_fj,sense_amp_fj,divider_static_fj,signal_fj\n",
    );
    let mut per_row = String::from("query_index,row,matched,miss_step,steps_executed,latency_ps,energy_fj\n");
    for (i, (o, q)) in outcomes.iter().zip(queries).enumerate() {
        let e = o.total_energy;
        let matched: Vec<String> = o.matched_rows().iter().map(|r| r.to_string()).collect();
        writeln!(
            res,
            "{i},{},{},{},{:.2},{},{},{},{},{}",
            q.iter().map(|b| b.to_char()).collect::<String>(),
            matched.join(" "),
            o.sel_b_suppressed,
            o.total_latency / PICO,
            sig3(e.total / FEMTO),
            sig3(e.precharge / FEMTO),
            sig3(e.sense_amp / FEMTO),
            sig3(e.divider_static / FEMTO),
            sig3(e.signal_switching / FEMTO),
        )
        .unwrap();
        for (r, ro) in o.rows.iter().enumerate() {
            writeln!(
                per_row,
                "{i},{r},{},{},{},{:.2},{}",
                ro.matched,
                ro.miss_step.map_or("none".to_string(), |s| s.to_string()),
                ro.steps_executed,
                ro.latency / PICO,
                sig3(ro.energy.total / FEMTO),
            )
            .unwrap();
        }
    }
    (res, per_row)
}

pub fn cmd_search(cfg: &RunConfig, contents: Option<&Path>, queries: Option<&Path>) -> Result<CommandResult> {
    let (words, qs) = match (contents, queries) {
        (Some(c), Some(q)) => {
            (grid::parse_grid(&fs::read_to_string(c)?)?, grid::parse_queries(&fs::read_to_string(q)?)?)
        }
        (None, None) => random_workload(cfg.array.rows, cfg.array.cols, cfg.random_queries, cfg.seed),
        _ => return Err(TcamError::InvalidInput("contents and queries files must be given together".into())),
    };
    if words.is_empty() {
        return Err(TcamError::Format { line: 1, msg: "contents file holds no rows".into() });
    }
    let mut run = cfg.clone();
    run.array.rows = words.len();
    run.array.cols = words[0].len();
    let model = run.resolve()?;
    let mut files = Vec::new();
    let mut s = String::new();
    if contents.is_none() {
        write_file(&run.output_dir, "contents.txt", &grid::write_grid(&words), &mut files)?;
        write_file(&run.output_dir, "queries.txt", &grid::write_queries(&qs), &mut files)?;
    }
    for (d, acfg) in &model.configs {
        let prog = array::program(acfg, &words)?;
        let outcomes = qs.iter().map(|q| array::search(acfg, &prog.state, q)).collect::<Result<Vec<_>>>()?;
        let (res, rows) = search_results_csv(&outcomes, &qs);
        let slug = design_slug(*d);
        write_file(&run.output_dir, &format!("search_{slug}.csv"), &res, &mut files)?;
        write_file(&run.output_dir, &format!("search_rows_{slug}.csv"), &rows, &mut files)?;
        let hits: usize = outcomes.iter().map(|o| o.matched_rows().len()).sum();
        let suppressed = outcomes.iter().filter(|o| o.sel_b_suppressed).count();
        writeln!(
            s,
            "{d}: {} queries over {}x{}, {hits} row matches, SeL_b suppressed on {suppressed}, write energy {} fJ",
            qs.len(),
            acfg.rows,
            acfg.cols,
            sig3(prog.write_energy / FEMTO)
        )
        .unwrap();
    }
    Ok(CommandResult { exit_code: EXIT_OK, summary: s, files })
}

// ---------------------------------------------------------------- sweep / fom

pub fn cmd_sweep(cfg: &RunConfig) -> Result<CommandResult> {
    let model = cfg.resolve()?;
    let rep = report::sweep(&model.configs, &cfg.sweep.word_lengths)?;
    let csv = rep.to_csv();
    let mut files = Vec::new();
    write_file(&cfg.output_dir, "sweep.csv", &csv, &mut files)?;
    Ok(CommandResult { exit_code: EXIT_OK, summary: csv, files })
}

pub fn cmd_fom(cfg: &RunConfig) -> Result<CommandResult> {
    let model = cfg.resolve()?;
    let rep = report::fom_report(&model.configs, model.calibration)?;
    let csv = rep.to_csv();
    let mut files = Vec::new();
    write_file(&cfg.output_dir, "fom.csv", &csv, &mut files)?;
    write_file(&cfg.output_dir, "fom.json", &rep.to_json(), &mut files)?;
    Ok(CommandResult { exit_code: EXIT_OK, summary: csv, files })
}

// ---------------------------------------------------------------- waveform

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveScenario {
    Match,
    Step1Miss,
    Step2Miss,
}

impl std::str::FromStr for WaveScenario {
    type Err = TcamError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "match" => Ok(Self::Match),
            "step1_miss" => Ok(Self::Step1Miss),
            "step2_miss" => Ok(Self::Step2Miss),
            _ => Err(TcamError::InvalidInput(format!("unknown scenario '{s}' (match|step1_miss|step2_miss)"))),
        }
    }
}

impl WaveScenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::Match => "match",
            Self::Step1Miss => "step1_miss",
            Self::Step2Miss => "step2_miss",
        }
    }
}

/// One stored row and query exhibiting `scenario`; the row mismatches in
/// every cell searched by the missing step.
pub fn scenario_row(cols: usize, scenario: WaveScenario) -> (Vec<TernaryBit>, Vec<SearchBit>) {
    let query: Vec<SearchBit> = (0..cols).map(|i| if i % 4 < 2 { SearchBit::Zero } else { SearchBit::One }).collect();
    let row = query
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let flip = match scenario {
                WaveScenario::Match => false,
                WaveScenario::Step1Miss => i % 2 == 0,
                WaveScenario::Step2Miss => i % 2 == 1,
            };
            match (q, flip) {
                (SearchBit::Zero, false) | (SearchBit::One, true) => TernaryBit::Zero,
                _ => TernaryBit::One,
            }
        })
        .collect();
    (row, query)
}

pub fn cmd_waveform(
    cfg: &RunConfig,
    scenario: WaveScenario,
    time_step: f64,
    explicit_designs: bool,
) -> Result<CommandResult> {
    let mut run = cfg.clone();
    if let Some(d) = run.designs.iter().find(|d| !d.is_paired()) {
        if explicit_designs {
            return Err(TcamError::InvalidInput(format!("waveform scenarios need a 1.5T1Fe design, got {d}")));
        }
    }
    run.designs.retain(|d| d.is_paired());
    if run.designs.is_empty() {
        return Err(TcamError::InvalidInput("waveform scenarios need a 1.5T1Fe design".into()));
    }
    run.array.rows = 1;
    let model = run.resolve()?;
    let mut files = Vec::new();
    let mut s = String::new();
    for (d, acfg) in &model.configs {
        let (row, query) = scenario_row(acfg.cols, scenario);
        let state = array::program(acfg, &[row])?.state;
        let w = array::waveform_trace(acfg, &state, &query, time_step)?;
        write_file(
            &run.output_dir,
            &format!("waveform_{}_{}.csv", design_slug(*d), scenario.name()),
            &w.to_csv(),
            &mut files,
        )?;
        let last = w.samples.last().expect("nonempty trace");
        writeln!(
            s,
            "{d} {}: {} samples, final ML {:.3} V, SA {}",
            scenario.name(),
            w.samples.len(),
            last.ml[0],
            if last.sa[0] { "match" } else { "miss" }
        )
        .unwrap();
    }
    Ok(CommandResult { exit_code: EXIT_OK, summary: s, files })
}
