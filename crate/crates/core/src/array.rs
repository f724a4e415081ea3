//! M x N TCAM array: programming, search with optional early termination,
//! structure accounting and match-line waveform traces.
//!
//! For the paired 1.5T1Fe designs, even columns hold cell1 (searched in step 1
//! under SeL_a) and odd columns hold cell2 (step 2 under SeL_b). The match line
//! is precharged once per search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cell::{
    activated_state, encode, evaluate_divider, CellDesign, CellEncoding, DividerParams, FeFetPair, SearchBit,
    TernaryBit,
};
use crate::device::{polarize, FeFetParams, PolarizationState};
use crate::error::{Result, TcamError};
use crate::perf::{self, CellConstants, EnergyBreakdown, RowModel, TimingParams};

/// How step 2 is gated after a step-1 mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EarlyTermination {
    /// Rows that missed in step 1 skip step 2; SeL_b stays low when every row missed.
    #[default]
    PerRow,
    /// Step 2 runs on all rows unless every row missed in step 1.
    Global,
    Disabled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub rows: usize,
    pub cols: usize,
    pub design: CellDesign,
    pub dev: FeFetParams,
    pub div: DividerParams,
    pub timing: TimingParams,
    pub cell_constants: CellConstants,
    pub driver_shared: bool,
    pub step1_miss_rate: f64,
    pub early_termination: EarlyTermination,
}

impl ArrayConfig {
    /// Uncalibrated defaults for `design`.
    pub fn new(design: CellDesign, rows: usize, cols: usize) -> Self {
        let dev = FeFetParams::preset(design.device_preset()).expect("built-in preset");
        let div = DividerParams { v_sel: dev.read_voltage, ..Default::default() };
        Self {
            rows,
            cols,
            design,
            dev,
            div,
            timing: TimingParams::default_for(design),
            cell_constants: CellConstants::default(),
            driver_shared: false,
            step1_miss_rate: 0.9,
            early_termination: EarlyTermination::PerRow,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(TcamError::Config(format!("array must be at least 1x1, got {}x{}", self.rows, self.cols)));
        }
        if self.design.is_paired() && !self.cols.is_multiple_of(2) {
            return Err(TcamError::Config(format!(
                "{} pairs columns; column count {} must be even",
                self.design, self.cols
            )));
        }
        if !(0.0..=1.0).contains(&self.step1_miss_rate) {
            return Err(TcamError::Config("step1_miss_rate must lie in [0, 1]".into()));
        }
        if self.driver_shared && !self.driver_sharing_supported() {
            return Err(TcamError::Config(format!(
                "{} cannot share HV drivers: write and read voltages differ",
                self.design
            )));
        }
        self.dev.validate()?;
        self.div.validate()?;
        self.timing.validate()
    }

    /// Write and search drivers can be time-multiplexed only on DG designs whose
    /// LVT write level equals the read level.
    pub fn driver_sharing_supported(&self) -> bool {
        self.design.is_double_gate() && (self.dev.write_pos_threshold - self.dev.read_voltage).abs() < 1e-9
    }

    pub fn row_model(&self) -> Result<RowModel> {
        RowModel::new(self.design, self.cols, &self.dev, &self.div, &self.timing)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayState {
    design: CellDesign,
    rows: usize,
    cols: usize,
    bits: Vec<TernaryBit>,
    cells: Vec<CellEncoding>,
    pub ml_voltages: Vec<f64>,
}

impl ArrayState {
    pub fn design(&self) -> CellDesign {
        self.design
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_bits(&self, row: usize) -> &[TernaryBit] {
        &self.bits[row * self.cols..(row + 1) * self.cols]
    }

    pub fn cell(&self, row: usize, col: usize) -> CellEncoding {
        self.cells[row * self.cols + col]
    }

    pub fn words(&self) -> Vec<Vec<TernaryBit>> {
        (0..self.rows).map(|r| self.row_bits(r).to_vec()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ProgramResult {
    pub state: ArrayState,
    pub write_steps: u32,
    pub write_energy: f64,
}

fn check_words(config: &ArrayConfig, words: &[Vec<TernaryBit>]) -> Result<()> {
    if words.len() != config.rows || words.iter().any(|w| w.len() != config.cols) {
        return Err(TcamError::Dimension(format!(
            "contents must be {}x{}, got {} rows",
            config.rows,
            config.cols,
            words.len()
        )));
    }
    Ok(())
}

/// Programs the array through the device write model.
///
/// 1.5T1Fe: three passes (`0` at -Vw, `1` at +Vw, `X` at Vm).
/// 2FeFET: reset every FeFET to HVT at -Vw, then set the LVT halves at +Vw.
pub fn program(config: &ArrayConfig, words: &[Vec<TernaryBit>]) -> Result<ProgramResult> {
    config.validate()?;
    check_words(config, words)?;
    let dev = &config.dev;
    let bits: Vec<TernaryBit> = words.iter().flatten().copied().collect();
    let (cells, write_steps) = if config.design.is_paired() {
        let mut states = vec![PolarizationState::Hvt; bits.len()];
        let passes = [
            (TernaryBit::Zero, dev.write_neg_threshold),
            (TernaryBit::One, dev.write_pos_threshold),
            (TernaryBit::DontCare, dev.write_mid_level),
        ];
        for (target, v) in passes {
            for (s, b) in states.iter_mut().zip(&bits) {
                if *b == target {
                    *s = polarize(dev, *s, v)?;
                }
            }
        }
        (states.into_iter().map(CellEncoding::Single).collect::<Vec<_>>(), 3)
    } else {
        let mut cells = Vec::with_capacity(bits.len());
        for b in &bits {
            let mut left = polarize(dev, PolarizationState::Lvt, dev.write_neg_threshold)?;
            let mut right = polarize(dev, PolarizationState::Lvt, dev.write_neg_threshold)?;
            match b {
                TernaryBit::Zero => right = polarize(dev, right, dev.write_pos_threshold)?,
                TernaryBit::One => left = polarize(dev, left, dev.write_pos_threshold)?,
                TernaryBit::DontCare => {}
            }
            cells.push(CellEncoding::Pair(FeFetPair::new(left, right)?));
        }
        (cells, 2)
    };
    debug_assert!(cells.iter().zip(&bits).all(|(c, b)| *c == encode(config.design, *b)));
    let write_energy = perf::write_energy(config.design, &bits, &config.cell_constants);
    Ok(ProgramResult {
        state: ArrayState {
            design: config.design,
            rows: config.rows,
            cols: config.cols,
            bits,
            cells,
            ml_voltages: vec![config.div.vdd; config.rows],
        },
        write_steps,
        write_energy,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowOutcome {
    pub matched: bool,
    /// Step whose evaluation first found a conducting pull-down path.
    pub miss_step: Option<u8>,
    pub steps_executed: u8,
    pub latency: f64,
    pub energy: EnergyBreakdown,
}

impl RowOutcome {
    /// The row stopped after step 1 because of a step-1 mismatch.
    pub fn terminated_at_step_one(&self, design: CellDesign) -> bool {
        design.is_paired() && self.steps_executed == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub match_mask: Vec<bool>,
    pub rows: Vec<RowOutcome>,
    /// SeL_b never rose because every row missed in step 1.
    pub sel_b_suppressed: bool,
    pub total_latency: f64,
    pub total_energy: EnergyBreakdown,
}

impl SearchOutcome {
    pub fn matched_rows(&self) -> Vec<usize> {
        self.match_mask.iter().enumerate().filter(|(_, m)| **m).map(|(i, _)| i).collect()
    }
}

/// Number of conducting pull-down elements per search step for one row.
fn conducting_per_step(model: &RowModel, state: &ArrayState, row: usize, query: &[SearchBit]) -> Result<[usize; 2]> {
    let mut counts = [0usize; 2];
    for (col, &q) in query.iter().enumerate() {
        match state.cell(row, col) {
            CellEncoding::Pair(pair) => {
                if activated_state(pair, q) == PolarizationState::Lvt {
                    counts[0] += 1;
                }
            }
            CellEncoding::Single(s) => {
                if evaluate_divider(s, q, &model.rs, &model.div)?.tml_conducting {
                    counts[col % 2] += 1;
                }
            }
        }
    }
    Ok(counts)
}

fn check_query(config: &ArrayConfig, state: &ArrayState, query: &[SearchBit]) -> Result<()> {
    if state.design != config.design || state.rows != config.rows || state.cols != config.cols {
        return Err(TcamError::Dimension("array state does not belong to this configuration".into()));
    }
    if query.len() != config.cols {
        return Err(TcamError::Dimension(format!(
            "query length {} differs from word length {}",
            query.len(),
            config.cols
        )));
    }
    Ok(())
}

/// Total conducting pull-down elements of a row over all steps, ignoring termination.
pub fn pull_down_paths(config: &ArrayConfig, state: &ArrayState, query: &[SearchBit], row: usize) -> Result<usize> {
    check_query(config, state, query)?;
    let model = config.row_model()?;
    let c = conducting_per_step(&model, state, row, query)?;
    Ok(c[0] + c[1])
}

pub fn search(config: &ArrayConfig, state: &ArrayState, query: &[SearchBit]) -> Result<SearchOutcome> {
    config.validate()?;
    check_query(config, state, query)?;
    let model = config.row_model()?;
    let design = config.design;

    let counts: Vec<[usize; 2]> = (0..config.rows)
        .into_par_iter()
        .map(|r| conducting_per_step(&model, state, r, query))
        .collect::<Result<_>>()?;

    let miss_steps: Vec<Option<u8>> = counts
        .iter()
        .map(|c| {
            if c[0] > 0 {
                Some(1)
            } else if c[1] > 0 {
                Some(2)
            } else {
                None
            }
        })
        .collect();

    let all_miss_step1 = miss_steps.iter().all(|m| *m == Some(1));
    let full_steps = design.search_steps();
    let steps_for = |miss: Option<u8>| -> u8 {
        if !design.is_paired() {
            return 1;
        }
        match config.early_termination {
            EarlyTermination::PerRow if miss == Some(1) => 1,
            EarlyTermination::Global if all_miss_step1 => 1,
            _ => full_steps,
        }
    };

    let rows: Vec<RowOutcome> = (0..config.rows)
        .into_par_iter()
        .map(|r| {
            let miss_step = miss_steps[r];
            let steps_executed = steps_for(miss_step);
            let energy = model.energy(state.row_bits(r), query, steps_executed)?;
            let latency = if steps_executed == 1 { model.latency.one_step } else { model.latency.full };
            Ok(RowOutcome { matched: miss_step.is_none(), miss_step, steps_executed, latency, energy })
        })
        .collect::<Result<_>>()?;

    let total_energy = rows.iter().fold(EnergyBreakdown::default(), |acc, r| acc + r.energy);
    let total_latency = rows.iter().map(|r| r.latency).fold(0.0, f64::max);
    Ok(SearchOutcome {
        match_mask: rows.iter().map(|r| r.matched).collect(),
        sel_b_suppressed: design.is_paired() && rows.iter().all(|r| r.steps_executed == 1),
        rows,
        total_latency,
        total_energy,
    })
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub state: ArrayState,
    pub query: Vec<SearchBit>,
}

/// Every row holds the query except for one mismatching cell in the last
/// column, so a single pull-down path discharges the match line (in step 2
/// for the paired designs).
pub fn worst_case_latency_scenario(config: &ArrayConfig) -> Result<Scenario> {
    let n = config.cols;
    let query: Vec<SearchBit> = (0..n).map(|i| if i % 2 == 0 { SearchBit::Zero } else { SearchBit::One }).collect();
    let mut row: Vec<TernaryBit> = query
        .iter()
        .map(|q| match q {
            SearchBit::Zero => TernaryBit::Zero,
            SearchBit::One => TernaryBit::One,
        })
        .collect();
    row[n - 1] = match query[n - 1] {
        SearchBit::Zero => TernaryBit::One,
        SearchBit::One => TernaryBit::Zero,
    };
    let words = vec![row; config.rows];
    let state = program(config, &words)?.state;
    Ok(Scenario { state, query })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WellDriverReport {
    pub p_well_count: usize,
    /// High-voltage drivers per subarray.
    pub hv_driver_count: usize,
}

pub fn wells_and_drivers(config: &ArrayConfig) -> WellDriverReport {
    let (m, n) = (config.rows, config.cols);
    let (p_well_count, unshared) = match config.design {
        // row-wise SeL_a/SeL_b per row; BL per column
        CellDesign::OneFiveT1FeDg => (2 * m, 2 * m + n),
        // merged BL/SeL row lines
        CellDesign::OneFiveT1FeSg => (0, 2 * m),
        // BL/BL_bar and the back-gate SL/SL_bar per column
        CellDesign::TwoFeFetDg => (2 * n, 4 * n),
        CellDesign::TwoFeFetSg => (0, 2 * n),
    };
    let hv_driver_count = if config.driver_shared { unshared / 2 } else { unshared };
    WellDriverReport { p_well_count, hv_driver_count }
}

pub fn area(config: &ArrayConfig) -> f64 {
    let wells = wells_and_drivers(config);
    perf::area_estimate(config.design, config.rows, config.cols, &config.cell_constants, wells.p_well_count)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveSample {
    pub time: f64,
    pub sel_a: f64,
    pub sel_b: f64,
    pub ml: Vec<f64>,
    pub sa: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub rows: usize,
    pub sense_threshold: f64,
    pub step1_end: f64,
    pub step2_start: f64,
    pub step2_end: f64,
    pub samples: Vec<WaveSample>,
}

impl Waveform {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time_s,sel_a_v,sel_b_v");
        for r in 0..self.rows {
            out.push_str(&format!(",ml_row{r}_v"));
        }
        for r in 0..self.rows {
            out.push_str(&format!(",sa_row{r}"));
        }
        out.push('\n');
        for s in &self.samples {
            out.push_str(&format!("{:.6e},{:.6},{:.6}", s.time, s.sel_a, s.sel_b));
            for v in &s.ml {
                out.push_str(&format!(",{v:.6}"));
            }
            for a in &s.sa {
                out.push_str(if *a { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }
}

/// Piecewise-exponential match-line trace of one search. A mismatching row
/// starts discharging `t_sense` after its step opens, through all of that
/// step's conducting paths in parallel; the SA output latches low once the
/// line crosses the sense threshold.
pub fn waveform_trace(
    config: &ArrayConfig,
    state: &ArrayState,
    query: &[SearchBit],
    time_step: f64,
) -> Result<Waveform> {
    if !(time_step > 0.0 && time_step.is_finite()) {
        return Err(TcamError::InvalidInput(format!("time_step must be > 0, got {time_step}")));
    }
    let outcome = search(config, state, query)?;
    let model = config.row_model()?;
    let one = model.latency.one_step;
    let vdd = config.div.vdd;
    let paired = config.design.is_paired();
    let step2_start = one * (1.0 + config.timing.slack_fraction);
    let step2_end = step2_start + one;
    // trailing slack window shows the settled sense outputs
    let end = if paired { step2_end } else { one } + config.timing.slack_fraction * one;
    if end / time_step > 5e6 {
        return Err(TcamError::InvalidInput("time_step too small for the trace length".into()));
    }

    // (discharge start, time constant) per mismatching row
    let mut decay = Vec::with_capacity(config.rows);
    for r in 0..config.rows {
        let c = conducting_per_step(&model, state, r, query)?;
        decay.push(match outcome.rows[r].miss_step {
            Some(1) => Some((config.timing.t_sense, model.r_pull() * model.c_ml / c[0] as f64)),
            Some(2) => Some((step2_start + config.timing.t_sense, model.r_pull() * model.c_ml / c[1] as f64)),
            _ => None,
        });
    }

    let threshold = config.timing.sa_threshold(vdd);
    let v_sel = model.v_search;
    let mut latched = vec![true; config.rows];
    let mut samples = Vec::new();
    let count = (end / time_step).floor() as usize;
    for i in 0..=count {
        let t = i as f64 * time_step;
        let sel_a = if t < one { v_sel } else { 0.0 };
        let sel_b = if paired && !outcome.sel_b_suppressed && t >= step2_start && t < step2_end { v_sel } else { 0.0 };
        let ml: Vec<f64> = decay
            .iter()
            .map(|d| match d {
                Some((t0, tau)) if t > *t0 => vdd * (-(t - t0) / tau).exp(),
                _ => vdd,
            })
            .collect();
        for (l, v) in latched.iter_mut().zip(&ml) {
            *l = *l && *v >= threshold;
        }
        samples.push(WaveSample { time: t, sel_a, sel_b, ml, sa: latched.clone() });
    }
    Ok(Waveform { rows: config.rows, sense_threshold: threshold, step1_end: one, step2_start, step2_end, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<TernaryBit> {
        s.chars().map(|c| TernaryBit::from_char(c).unwrap()).collect()
    }

    fn query(s: &str) -> Vec<SearchBit> {
        s.chars().map(|c| SearchBit::from_char(c).unwrap()).collect()
    }

    #[test]
    fn program_steps_and_encoding() {
        let cfg = ArrayConfig::new(CellDesign::OneFiveT1FeDg, 1, 4);
        let p = program(&cfg, &[bits("01X1")]).unwrap();
        assert_eq!(p.write_steps, 3);
        assert_eq!(p.state.cell(0, 2), CellEncoding::Single(PolarizationState::Mvt));
        let cfg2 = ArrayConfig::new(CellDesign::TwoFeFetDg, 2, 2);
        let p2 = program(&cfg2, &[bits("XX"), bits("XX")]).unwrap();
        assert_eq!(p2.write_steps, 2);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(
                    p2.state.cell(r, c),
                    CellEncoding::Pair(FeFetPair::new(PolarizationState::Hvt, PolarizationState::Hvt).unwrap())
                );
            }
        }
        let again = program(&cfg2, &p2.state.words()).unwrap();
        assert_eq!(again.state, p2.state);
        assert_eq!(again.write_energy, p2.write_energy);
    }

    #[test]
    fn program_rejects_bad_shapes() {
        let cfg = ArrayConfig::new(CellDesign::OneFiveT1FeDg, 1, 3);
        assert!(program(&cfg, &[bits("01X")]).is_err());
        let cfg = ArrayConfig::new(CellDesign::TwoFeFetSg, 2, 3);
        assert!(matches!(program(&cfg, &[bits("01X")]), Err(TcamError::Dimension(_))));
    }

    #[test]
    fn wildcard_row_matches() {
        for d in CellDesign::ALL {
            let cfg = ArrayConfig::new(d, 2, 4);
            let st = program(&cfg, &[bits("10X1"), bits("XXXX")]).unwrap().state;
            let out = search(&cfg, &st, &query("1001")).unwrap();
            assert_eq!(out.match_mask, vec![true, true], "{d}");
            let out = search(&cfg, &st, &query("0001")).unwrap();
            assert_eq!(out.match_mask, vec![false, true], "{d}");
            assert!(search(&cfg, &st, &query("100")).is_err());
        }
    }

    #[test]
    fn step_one_termination_and_global_flag() {
        let cfg = ArrayConfig::new(CellDesign::OneFiveT1FeDg, 2, 4);
        // both rows miss in column 0 (step 1)
        let st = program(&cfg, &[bits("1XXX"), bits("10XX")]).unwrap().state;
        let out = search(&cfg, &st, &query("0000")).unwrap();
        assert!(out.sel_b_suppressed);
        for r in &out.rows {
            assert_eq!(r.miss_step, Some(1));
            assert_eq!(r.steps_executed, 1);
            assert!(!r.matched);
        }
        // row 1 now misses only in step 2 (column 1)
        let out = search(&cfg, &st, &query("1100")).unwrap();
        assert!(!out.sel_b_suppressed);
        assert_eq!(out.rows[0].miss_step, None);
        assert_eq!(out.rows[1].miss_step, Some(2));
        assert_eq!(out.rows[0].energy.precharge, out.rows[1].energy.precharge);
    }

    #[test]
    fn worst_case_has_one_path() {
        for d in CellDesign::ALL {
            for n in [2, 64] {
                let cfg = ArrayConfig::new(d, 3, n);
                let sc = worst_case_latency_scenario(&cfg).unwrap();
                let row = sc.state.row_bits(0);
                let mism = row.iter().zip(&sc.query).filter(|(b, q)| b.mismatches(**q)).count();
                assert_eq!(mism, 1);
                for r in 0..3 {
                    assert_eq!(pull_down_paths(&cfg, &sc.state, &sc.query, r).unwrap(), 1);
                }
                let out = search(&cfg, &sc.state, &sc.query).unwrap();
                assert!(out.match_mask.iter().all(|m| !m));
            }
        }
    }

    #[test]
    fn wells_and_drivers_accounting() {
        let mut cfg = ArrayConfig::new(CellDesign::OneFiveT1FeDg, 64, 64);
        let unshared = wells_and_drivers(&cfg);
        assert_eq!(unshared.p_well_count, 128);
        cfg.driver_shared = true;
        cfg.validate().unwrap();
        let shared = wells_and_drivers(&cfg);
        assert_eq!(2 * shared.hv_driver_count, unshared.hv_driver_count);
        let cfg2 = ArrayConfig::new(CellDesign::TwoFeFetDg, 64, 64);
        assert_eq!(wells_and_drivers(&cfg2).p_well_count, 128);
        let cfg3 = ArrayConfig::new(CellDesign::TwoFeFetDg, 16, 64);
        assert_eq!(wells_and_drivers(&cfg3).p_well_count, 128);
        let mut sg = ArrayConfig::new(CellDesign::OneFiveT1FeSg, 64, 64);
        assert_eq!(wells_and_drivers(&sg).p_well_count, 0);
        sg.driver_shared = true;
        assert!(sg.validate().is_err());
    }

    #[test]
    fn waveform_cases() {
        let cfg = ArrayConfig::new(CellDesign::OneFiveT1FeDg, 3, 4);
        // match / step-1 miss / step-2 miss under query 0101
        let st = program(&cfg, &[bits("0101"), bits("1X1X"), bits("0001")]).unwrap().state;
        let q = query("0101");
        let out = search(&cfg, &st, &q).unwrap();
        assert_eq!(out.rows[1].miss_step, Some(1));
        assert_eq!(out.rows[2].miss_step, Some(2));
        let w = waveform_trace(&cfg, &st, &q, 1e-12).unwrap();
        let th = w.sense_threshold;
        assert!(w.samples.iter().all(|s| s.ml[0] >= th && s.sa[0]));
        let end1 = w.samples.iter().rfind(|s| s.time < w.step2_start).unwrap();
        assert!(!end1.sa[1]);
        assert!(end1.ml[2] == cfg.div.vdd && end1.sa[2]);
        let last = w.samples.last().unwrap();
        assert!(last.ml[2] < th && !last.sa[2]);
        assert!(w.samples.iter().any(|s| s.sel_b > 0.0));
        assert!(w.to_csv().starts_with("time_s,sel_a_v,sel_b_v,ml_row0_v,ml_row1_v,ml_row2_v,sa_row0"));
        assert!(waveform_trace(&cfg, &st, &q, 0.0).is_err());
    }

    #[test]
    fn waveform_sel_b_stays_low_on_global_miss() {
        let cfg = ArrayConfig::new(CellDesign::OneFiveT1FeSg, 1, 4);
        let st = program(&cfg, &[bits("1X1X")]).unwrap().state;
        let w = waveform_trace(&cfg, &st, &query("0101"), 1e-12).unwrap();
        assert!(w.samples.iter().all(|s| s.sel_b == 0.0));
    }
}
