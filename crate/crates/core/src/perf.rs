//! Analytical latency, energy and area models.
//!
//! Latency is a first-order RC discharge of the match line through a single
//! pull-down path (worst-case one-cell mismatch) plus a fixed per-step sensing
//! delay. Search energy is split into match-line precharge, sense amplifier,
//! static divider/leakage current integrated over the executed step windows,
//! and search-signal switching.

use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::cell::{
    activated_state, evaluate_divider, CellDesign, CellEncoding, DividerParams, ResistanceSet, SearchBit, TernaryBit,
};
use crate::device::{FeFetParams, PolarizationState};
use crate::error::{Result, TcamError};

pub const FEMTO: f64 = 1e-15;
pub const PICO: f64 = 1e-12;

/// Per-design electrical and timing parameters of the match-line path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingParams {
    /// 2FeFET: drain load of one FeFET. 1.5T1Fe: drain load of one TML (per two cells).
    pub c_ml_per_cell: f64,
    /// Match-line wire capacitance per cell pitch.
    pub c_wire_per_cell: f64,
    /// Search/select line capacitance charged per cell per search step.
    pub c_sl_per_cell: f64,
    /// Energy per sense-amplifier evaluation.
    pub sa_energy: f64,
    /// Match-line sensing target as a fraction of the precharge voltage.
    pub sense_fraction: f64,
    /// Fixed select-setup plus sense-amplifier resolution time per step.
    pub t_sense: f64,
    /// Idle time between the two search steps, as a fraction of one step.
    pub slack_fraction: f64,
    pub write_pulse: f64,
    pub search_pulse: f64,
}

impl TimingParams {
    pub fn default_for(design: CellDesign) -> Self {
        let c_ml_per_cell = if design.is_paired() { 30e-18 } else { 50e-18 };
        Self {
            c_ml_per_cell,
            c_wire_per_cell: 20e-18,
            c_sl_per_cell: 20e-18,
            sa_energy: 0.05e-15,
            sense_fraction: 0.5,
            t_sense: 30e-12,
            slack_fraction: 0.2,
            write_pulse: 10e-9,
            search_pulse: 1e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("c_ml_per_cell", self.c_ml_per_cell),
            ("c_wire_per_cell", self.c_wire_per_cell),
            ("c_sl_per_cell", self.c_sl_per_cell),
            ("sa_energy", self.sa_energy),
            ("t_sense", self.t_sense),
            ("write_pulse", self.write_pulse),
            ("search_pulse", self.search_pulse),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(TcamError::Config(format!("timing.{name} must be positive, got {v}")));
            }
        }
        if !(self.sense_fraction > 0.0 && self.sense_fraction < 1.0) {
            return Err(TcamError::Config("timing.sense_fraction must lie in (0, 1)".into()));
        }
        if !(self.slack_fraction.is_finite() && self.slack_fraction >= 0.0) {
            return Err(TcamError::Config("timing.slack_fraction must be >= 0".into()));
        }
        Ok(())
    }

    /// Sense-amplifier decision threshold for a given precharge voltage.
    pub fn sa_threshold(&self, v_precharge: f64) -> f64 {
        self.sense_fraction * v_precharge
    }
}

/// Reference figures of the 16T CMOS TCAM baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmosBaseline {
    pub write_voltage: String,
    pub area_um2: f64,
    pub latency: f64,
    pub energy_per_cell: f64,
}

/// Per-cell layout and write constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConstants {
    pub area_2sg_um2: f64,
    pub area_2dg_um2: f64,
    pub area_1p5t1sg_um2: f64,
    pub area_1p5t1dg_um2: f64,
    /// Energy to program one SG FeFET (J).
    pub write_energy_sg_fefet: f64,
    /// Energy to program one DG FeFET (J).
    pub write_energy_dg_fefet: f64,
    /// Relative cost of an MVT (don't-care) write, (Vm/Vw)^2.
    pub dontcare_write_scale: f64,
    /// Extra area per isolated P-well (um^2); spacing is already in the cell areas.
    pub well_spacing_overhead_um2: f64,
    pub cmos16t: CmosBaseline,
}

impl Default for CellConstants {
    fn default() -> Self {
        Self {
            area_2sg_um2: 0.095,
            area_2dg_um2: 0.204,
            area_1p5t1sg_um2: 0.108,
            area_1p5t1dg_um2: 0.156,
            write_energy_sg_fefet: 0.815 * FEMTO,
            write_energy_dg_fefet: 0.4075 * FEMTO,
            dontcare_write_scale: 0.64,
            well_spacing_overhead_um2: 0.0,
            cmos16t: CmosBaseline {
                write_voltage: "0.9V".into(),
                area_um2: 0.286,
                latency: 235.0 * PICO,
                energy_per_cell: 0.53 * FEMTO,
            },
        }
    }
}

impl CellConstants {
    pub fn area_um2(&self, design: CellDesign) -> f64 {
        match design {
            CellDesign::TwoFeFetSg => self.area_2sg_um2,
            CellDesign::TwoFeFetDg => self.area_2dg_um2,
            CellDesign::OneFiveT1FeSg => self.area_1p5t1sg_um2,
            CellDesign::OneFiveT1FeDg => self.area_1p5t1dg_um2,
        }
    }

    pub fn write_energy_per_fefet(&self, design: CellDesign) -> f64 {
        if design.is_double_gate() {
            self.write_energy_dg_fefet
        } else {
            self.write_energy_sg_fefet
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub precharge: f64,
    pub sense_amp: f64,
    pub divider_static: f64,
    pub signal_switching: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(precharge: f64, sense_amp: f64, divider_static: f64, signal_switching: f64) -> Self {
        Self {
            precharge,
            sense_amp,
            divider_static,
            signal_switching,
            total: precharge + sense_amp + divider_static + signal_switching,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.precharge * k, self.sense_amp * k, self.divider_static * k, self.signal_switching * k)
    }
}

impl Add for EnergyBreakdown {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(
            self.precharge + o.precharge,
            self.sense_amp + o.sense_amp,
            self.divider_static + o.divider_static,
            self.signal_switching + o.signal_switching,
        )
    }
}

impl AddAssign for EnergyBreakdown {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

pub fn ml_capacitance(design: CellDesign, word_len: usize, t: &TimingParams) -> Result<f64> {
    if word_len == 0 {
        return Err(TcamError::InvalidInput("word length must be >= 1".into()));
    }
    let n = word_len as f64;
    Ok(if design.is_paired() {
        (n / 2.0) * (t.c_ml_per_cell + 2.0 * t.c_wire_per_cell)
    } else {
        n * (2.0 * t.c_ml_per_cell + t.c_wire_per_cell)
    })
}

/// Time for the match line to decay from precharge to `sense_fraction` of it.
pub fn discharge_latency(c_ml: f64, r_pull: f64, t: &TimingParams) -> Result<f64> {
    if !(c_ml > 0.0 && r_pull > 0.0) {
        return Err(TcamError::InvalidInput("capacitance and resistance must be positive".into()));
    }
    Ok(r_pull * c_ml * (1.0 / t.sense_fraction).ln())
}

/// Resistance of a single match-line pull-down path.
pub fn pull_down_resistance(design: CellDesign, rs: &ResistanceSet, div: &DividerParams) -> f64 {
    if design.is_paired() {
        div.tml_r_on
    } else {
        rs.r_on
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Latency {
    pub one_step: f64,
    pub full: f64,
}

pub fn search_latency(
    design: CellDesign,
    word_len: usize,
    dev: &FeFetParams,
    div: &DividerParams,
    t: &TimingParams,
) -> Result<Latency> {
    let rs = ResistanceSet::from_device(dev, div)?;
    latency_from(design, word_len, &rs, div, t)
}

fn latency_from(
    design: CellDesign,
    word_len: usize,
    rs: &ResistanceSet,
    div: &DividerParams,
    t: &TimingParams,
) -> Result<Latency> {
    let c_ml = ml_capacitance(design, word_len, t)?;
    let one_step = t.t_sense + discharge_latency(c_ml, pull_down_resistance(design, rs, div), t)?;
    let full = if design.is_paired() { (2.0 + t.slack_fraction) * one_step } else { one_step };
    Ok(Latency { one_step, full })
}

/// Everything needed to cost searches on rows of one word length.
#[derive(Debug, Clone)]
pub struct RowModel {
    pub design: CellDesign,
    pub word_len: usize,
    pub rs: ResistanceSet,
    pub div: DividerParams,
    pub timing: TimingParams,
    /// Search-line / select-line drive voltage.
    pub v_search: f64,
    pub c_ml: f64,
    pub latency: Latency,
}

impl RowModel {
    pub fn new(
        design: CellDesign,
        word_len: usize,
        dev: &FeFetParams,
        div: &DividerParams,
        timing: &TimingParams,
    ) -> Result<Self> {
        let rs = ResistanceSet::from_device(dev, div)?;
        let latency = latency_from(design, word_len, &rs, div, timing)?;
        Ok(Self {
            design,
            word_len,
            rs,
            div: div.clone(),
            timing: timing.clone(),
            v_search: dev.read_voltage,
            c_ml: ml_capacitance(design, word_len, timing)?,
            latency,
        })
    }

    pub fn r_pull(&self) -> f64 {
        pull_down_resistance(self.design, &self.rs, &self.div)
    }

    /// Static energy of one cell over one step window.
    fn cell_static(&self, stored: TernaryBit, query: SearchBit) -> Result<f64> {
        let vdd = self.div.vdd;
        let window = self.latency.one_step;
        match crate::cell::encode(self.design, stored) {
            CellEncoding::Single(state) => {
                let eval = evaluate_divider(state, query, &self.rs, &self.div)?;
                Ok(vdd * eval.static_current * window)
            }
            CellEncoding::Pair(pair) => {
                // only the non-conducting activated FeFET leaks from the held-high ML
                let state = activated_state(pair, query);
                if state == PolarizationState::Lvt {
                    Ok(0.0)
                } else {
                    Ok(vdd * vdd / self.rs.fefet(state) * window)
                }
            }
        }
    }

    fn cell_signal(&self) -> f64 {
        let c = self.timing.c_sl_per_cell;
        if self.design.is_paired() {
            // select line at V_SeL plus Wr/SL and SL swings at VDD
            c * (self.v_search * self.v_search + self.div.vdd * self.div.vdd)
        } else {
            c * self.v_search * self.v_search
        }
    }

    /// Energy of one row search in which `steps_executed` steps ran.
    pub fn energy(&self, row: &[TernaryBit], query: &[SearchBit], steps_executed: u8) -> Result<EnergyBreakdown> {
        if row.len() != self.word_len || query.len() != self.word_len {
            return Err(TcamError::Dimension(format!(
                "row/query length {}/{} differs from word length {}",
                row.len(),
                query.len(),
                self.word_len
            )));
        }
        if steps_executed == 0 || steps_executed > self.design.search_steps() {
            return Err(TcamError::InvalidInput(format!(
                "{} cannot execute {steps_executed} search steps",
                self.design
            )));
        }
        let vdd = self.div.vdd;
        let precharge = self.c_ml * vdd * vdd;
        let sense_amp = self.timing.sa_energy;
        let mut divider_static = 0.0;
        let mut signal_switching = 0.0;
        for (col, (&s, &q)) in row.iter().zip(query).enumerate() {
            let step = if self.design.is_paired() { (col % 2) as u8 + 1 } else { 1 };
            if step > steps_executed {
                continue;
            }
            divider_static += self.cell_static(s, q)?;
            signal_switching += self.cell_signal();
        }
        Ok(EnergyBreakdown::new(precharge, sense_amp, divider_static, signal_switching))
    }
}

pub fn search_energy(
    design: CellDesign,
    row: &[TernaryBit],
    query: &[SearchBit],
    steps_executed: u8,
    t: &TimingParams,
    dev: &FeFetParams,
    div: &DividerParams,
) -> Result<EnergyBreakdown> {
    RowModel::new(design, row.len(), dev, div, t)?.energy(row, query, steps_executed)
}

pub fn average_search_energy(e_one_step: f64, e_two_step: f64, step1_miss_rate: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&step1_miss_rate) {
        return Err(TcamError::InvalidInput(format!("miss rate {step1_miss_rate} outside [0, 1]")));
    }
    Ok(step1_miss_rate * e_one_step + (1.0 - step1_miss_rate) * e_two_step)
}

/// Total programming energy. 2FeFET cells write both FeFETs whatever the
/// symbol; 1.5T1Fe cells write one FeFET, with MVT writes at the lower Vm.
pub fn write_energy(design: CellDesign, words: &[TernaryBit], cc: &CellConstants) -> f64 {
    let e = cc.write_energy_per_fefet(design);
    if design.is_paired() {
        words
            .iter()
            .map(|b| match b {
                TernaryBit::DontCare => e * cc.dontcare_write_scale,
                _ => e,
            })
            .sum()
    } else {
        2.0 * e * words.len() as f64
    }
}

/// Average-case per-cell write energy (half the cells `0`, half `1`).
pub fn write_energy_per_cell(design: CellDesign, cc: &CellConstants) -> f64 {
    write_energy(design, &[TernaryBit::Zero, TernaryBit::One], cc) / 2.0
}

pub fn area_estimate(design: CellDesign, rows: usize, cols: usize, cc: &CellConstants, p_well_count: usize) -> f64 {
    (rows * cols) as f64 * cc.area_um2(design) + p_well_count as f64 * cc.well_spacing_overhead_um2
}

/// Reference row and query used for figure-of-merit energies: half the cells
/// store `0`, half `1`, and in each search step every (stored, query)
/// combination occurs equally often when `n` is a multiple of 8.
pub fn benchmark_row(n: usize) -> (Vec<TernaryBit>, Vec<SearchBit>) {
    use SearchBit as S;
    use TernaryBit as T;
    const STORED: [TernaryBit; 8] = [T::Zero, T::Zero, T::Zero, T::Zero, T::One, T::One, T::One, T::One];
    const QUERY: [SearchBit; 8] = [S::Zero, S::Zero, S::One, S::One, S::Zero, S::Zero, S::One, S::One];
    ((0..n).map(|i| STORED[i % 8]).collect(), (0..n).map(|i| QUERY[i % 8]).collect())
}

/// Per-cell search energies of the benchmark row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellEnergies {
    pub one_step: f64,
    pub two_step: f64,
    pub average: f64,
}

pub fn benchmark_energies(model: &RowModel, step1_miss_rate: f64) -> Result<CellEnergies> {
    let n = model.word_len;
    let (row, query) = benchmark_row(n);
    let one_step = model.energy(&row, &query, 1)?.total / n as f64;
    let two_step = model.energy(&row, &query, model.design.search_steps())?.total / n as f64;
    Ok(CellEnergies {
        one_step,
        two_step,
        average: if model.design.is_paired() {
            average_search_energy(one_step, two_step, step1_miss_rate)?
        } else {
            one_step
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::FeFetParams;

    fn setup(design: CellDesign) -> (FeFetParams, DividerParams, TimingParams) {
        let dev = FeFetParams::preset(design.device_preset()).unwrap();
        let div = DividerParams { v_sel: dev.read_voltage, ..Default::default() };
        (dev, div, TimingParams::default_for(design))
    }

    #[test]
    fn ml_capacitance_hand_sum() {
        let t2 = TimingParams::default_for(CellDesign::TwoFeFetDg);
        let t1 = TimingParams::default_for(CellDesign::OneFiveT1FeDg);
        // 64 x (2 x 50 aF + 20 aF) = 7.68 fF ; 32 x (30 aF + 40 aF) = 2.24 fF
        let c2 = ml_capacitance(CellDesign::TwoFeFetDg, 64, &t2).unwrap();
        let c1 = ml_capacitance(CellDesign::OneFiveT1FeDg, 64, &t1).unwrap();
        assert!((c2 - 7.68e-15).abs() < 1e-27);
        assert!((c1 - 2.24e-15).abs() < 1e-27);
        assert!(c1 < c2);
        let c128 = ml_capacitance(CellDesign::OneFiveT1FeDg, 128, &t1).unwrap();
        assert!((c128 - 2.0 * c1).abs() < 1e-27);
        assert!(ml_capacitance(CellDesign::OneFiveT1FeDg, 0, &t1).is_err());
    }

    #[test]
    fn rc_identities() {
        let mut t = TimingParams::default_for(CellDesign::TwoFeFetSg);
        let a = discharge_latency(1e-15, 1e5, &t).unwrap();
        let b = discharge_latency(2e-15, 1e5, &t).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-24);
        t.sense_fraction = (-1.0f64).exp();
        let tau = discharge_latency(1e-15, 1e5, &t).unwrap();
        assert!((tau - 1e-10).abs() < 1e-22);
        assert!(discharge_latency(0.0, 1e5, &t).is_err());
    }

    #[test]
    fn latency_structure() {
        for d in CellDesign::ALL {
            let (dev, div, t) = setup(d);
            let mut prev = 0.0;
            for n in [16, 32, 64, 128] {
                let l = search_latency(d, n, &dev, &div, &t).unwrap();
                assert!(l.full > prev);
                prev = l.full;
                if d.is_paired() {
                    assert!((l.full / l.one_step - 2.2).abs() < 1e-12);
                } else {
                    assert_eq!(l.full, l.one_step);
                }
            }
        }
    }

    #[test]
    fn averaging_examples() {
        let a = average_search_energy(0.13, 0.21, 0.9).unwrap();
        assert!((a - 0.138).abs() < 1e-12);
        let b = average_search_energy(0.11, 0.16, 0.9).unwrap();
        assert!((b - 0.115).abs() < 1e-12);
        assert_eq!(average_search_energy(0.11, 0.16, 0.0).unwrap(), 0.16);
        assert!(average_search_energy(0.1, 0.2, 1.5).is_err());
    }

    #[test]
    fn write_energy_table() {
        let cc = CellConstants::default();
        let per = |d| write_energy_per_cell(d, &cc) / FEMTO;
        assert!((per(CellDesign::TwoFeFetSg) - 1.63).abs() < 1e-9);
        assert!((per(CellDesign::TwoFeFetDg) - 0.81).abs() <= 0.005 + 1e-9);
        assert!((per(CellDesign::OneFiveT1FeSg) - 0.82).abs() <= 0.005 + 1e-9);
        assert!((per(CellDesign::OneFiveT1FeDg) - 0.41).abs() <= 0.005 + 1e-9);
        let base = per(CellDesign::TwoFeFetSg);
        assert_eq!(base / per(CellDesign::TwoFeFetDg), 2.0);
        assert_eq!(base / per(CellDesign::OneFiveT1FeSg), 2.0);
        assert_eq!(base / per(CellDesign::OneFiveT1FeDg), 4.0);
        assert_eq!(write_energy(CellDesign::OneFiveT1FeDg, &[], &cc), 0.0);
    }

    #[test]
    fn area_examples() {
        let cc = CellConstants::default();
        let a = area_estimate(CellDesign::OneFiveT1FeDg, 64, 64, &cc, 128);
        assert!((a - 4096.0 * 0.156).abs() < 1e-9);
        assert_eq!(area_estimate(CellDesign::OneFiveT1FeDg, 0, 0, &cc, 0), 0.0);
        assert!((cc.cmos16t.area_um2 / cc.area_1p5t1dg_um2 - 1.83).abs() < 0.005);
    }

    #[test]
    fn early_termination_saves_divider_energy() {
        let d = CellDesign::OneFiveT1FeDg;
        let (dev, div, t) = setup(d);
        let (row, q) = benchmark_row(64);
        let m = RowModel::new(d, 64, &dev, &div, &t).unwrap();
        let e1 = m.energy(&row, &q, 1).unwrap();
        let e2 = m.energy(&row, &q, 2).unwrap();
        assert_eq!(e1.precharge, e2.precharge);
        assert!(e1.divider_static < e2.divider_static);
        assert!(e1.total < e2.total);
        let sum = e2.precharge + e2.sense_amp + e2.divider_static + e2.signal_switching;
        assert!((e2.total - sum).abs() <= 1e-12 * sum);
    }

    #[test]
    fn lvt_rows_cost_more_static() {
        let d = CellDesign::OneFiveT1FeDg;
        let (dev, div, t) = setup(d);
        let q = vec![SearchBit::Zero; 16];
        let lvt = vec![TernaryBit::One; 16];
        let hvt = vec![TernaryBit::Zero; 16];
        let m = RowModel::new(d, 16, &dev, &div, &t).unwrap();
        assert!(m.energy(&lvt, &q, 2).unwrap().divider_static > m.energy(&hvt, &q, 2).unwrap().divider_static);
    }
}
