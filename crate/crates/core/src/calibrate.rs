//! Fits the free electrical parameters to per-design latency/energy targets at
//! one word length.
//!
//! Each device family is fitted through its 2FeFET design first: the
//! match-line capacitance follows from the energy target and the FeFET drive
//! (`i_on_ref`) from the latency target. The fitted device is then shared with
//! the 1.5T1Fe design of the same family, whose step cost, fixed cost and
//! latency targets set the select-line capacitance, the TML drain capacitance
//! and the TML on-resistance in turn.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::array::ArrayConfig;
use crate::cell::{CellDesign, ResistanceSet};
use crate::error::{Result, TcamError};
use crate::perf::{benchmark_row, RowModel, FEMTO, PICO};

const ITERATIONS: usize = 12;

/// Per-design targets in reporting units (ps, fJ per cell).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationTarget {
    pub latency_1step_ps: f64,
    pub latency_full_ps: f64,
    pub energy_1step_fj: f64,
    pub energy_2step_fj: f64,
}

impl CalibrationTarget {
    /// 64x64 reference figures.
    pub fn reference(design: CellDesign) -> Self {
        let (l1, lf, e1, e2) = match design {
            CellDesign::TwoFeFetSg => (582.0, 582.0, 0.17, 0.17),
            CellDesign::TwoFeFetDg => (1147.0, 1147.0, 0.25, 0.25),
            CellDesign::OneFiveT1FeSg => (159.0, 351.0, 0.11, 0.16),
            CellDesign::OneFiveT1FeDg => (231.0, 481.0, 0.13, 0.21),
        };
        Self { latency_1step_ps: l1, latency_full_ps: lf, energy_1step_fj: e1, energy_2step_fj: e2 }
    }

    pub fn reference_set() -> BTreeMap<CellDesign, Self> {
        CellDesign::ALL.iter().map(|d| (*d, Self::reference(*d))).collect()
    }
}

/// Model figures at the calibration word length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelFigures {
    pub latency_1step_ps: f64,
    pub latency_full_ps: f64,
    pub energy_1step_fj: f64,
    pub energy_2step_fj: f64,
}

impl ModelFigures {
    pub fn of(config: &ArrayConfig, word_len: usize) -> Result<Self> {
        let model = RowModel::new(config.design, word_len, &config.dev, &config.div, &config.timing)?;
        let (row, query) = benchmark_row(word_len);
        let n = word_len as f64;
        let e1 = model.energy(&row, &query, 1)?.total / n;
        let e2 = model.energy(&row, &query, config.design.search_steps())?.total / n;
        Ok(Self {
            latency_1step_ps: model.latency.one_step / PICO,
            latency_full_ps: model.latency.full / PICO,
            energy_1step_fj: e1 / FEMTO,
            energy_2step_fj: e2 / FEMTO,
        })
    }

    /// Largest relative deviation from `target` over the four figures.
    pub fn worst_relative_error(&self, target: &CalibrationTarget) -> f64 {
        [
            (self.latency_1step_ps, target.latency_1step_ps),
            (self.latency_full_ps, target.latency_full_ps),
            (self.energy_1step_fj, target.energy_1step_fj),
            (self.energy_2step_fj, target.energy_2step_fj),
        ]
        .iter()
        .map(|(m, t)| ((m - t) / t).abs())
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignCalibration {
    pub design: CellDesign,
    pub target: CalibrationTarget,
    pub before: ModelFigures,
    pub after: ModelFigures,
    pub i_on_ref: f64,
    pub c_ml_per_cell: f64,
    pub c_sl_per_cell: f64,
    pub tml_r_on: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub word_len: usize,
    pub designs: Vec<DesignCalibration>,
}

fn fit_two_fefet(cfg: &mut ArrayConfig, target: &CalibrationTarget, n: usize) -> Result<()> {
    let (row, query) = benchmark_row(n);
    let vdd = cfg.div.vdd;
    let ln = (1.0 / cfg.timing.sense_fraction).ln();
    for _ in 0..ITERATIONS {
        let model = RowModel::new(cfg.design, n, &cfg.dev, &cfg.div, &cfg.timing)?;
        let e = model.energy(&row, &query, 1)?;
        let budget = target.energy_1step_fj * FEMTO * n as f64 - (e.sense_amp + e.signal_switching + e.divider_static);
        let c_ml = budget / (vdd * vdd);
        let c_dev = (c_ml / n as f64 - cfg.timing.c_wire_per_cell) / 2.0;
        if !(c_dev > 0.0) {
            return Err(TcamError::Config(format!(
                "{}: energy target leaves no room for match-line capacitance",
                cfg.design
            )));
        }
        cfg.timing.c_ml_per_cell = c_dev;
        let t_rc = target.latency_1step_ps * PICO - cfg.timing.t_sense;
        if !(t_rc > 0.0) {
            return Err(TcamError::Config(format!("{}: latency target below t_sense", cfg.design)));
        }
        let r_target = t_rc / (c_ml * ln);
        let r_now = ResistanceSet::from_device(&cfg.dev, &cfg.div)?.r_on;
        // drain current scales linearly with i_on_ref
        cfg.dev.i_on_ref *= r_now / r_target;
    }
    Ok(())
}

fn fit_one_five(cfg: &mut ArrayConfig, target: &CalibrationTarget, n: usize) -> Result<()> {
    if !n.is_multiple_of(2) {
        return Err(TcamError::Config("calibration word length must be even".into()));
    }
    let (row, query) = benchmark_row(n);
    let vdd = cfg.div.vdd;
    let ln = (1.0 / cfg.timing.sense_fraction).ln();
    let cells_per_step = (n / 2) as f64;
    for _ in 0..ITERATIONS {
        let model = RowModel::new(cfg.design, n, &cfg.dev, &cfg.div, &cfg.timing)?;
        let e1 = model.energy(&row, &query, 1)?;
        let e2 = model.energy(&row, &query, 2)?;
        let per_cell_signal = model.v_search * model.v_search + vdd * vdd;

        // step 2 cost sets the select/search line capacitance
        let step_budget = (target.energy_2step_fj - target.energy_1step_fj) * FEMTO * n as f64;
        let step2_static = e2.divider_static - e1.divider_static;
        let c_sl = (step_budget - step2_static) / (cells_per_step * per_cell_signal);
        if !(c_sl > 0.0) {
            return Err(TcamError::Config(format!(
                "{}: divider current alone exceeds the step energy target",
                cfg.design
            )));
        }
        cfg.timing.c_sl_per_cell = c_sl;

        // what remains of the one-step energy is precharge plus sensing
        let step1 = e1.divider_static + cells_per_step * c_sl * per_cell_signal;
        let fixed = target.energy_1step_fj * FEMTO * n as f64 - step1 - cfg.timing.sa_energy;
        let c_ml = fixed / (vdd * vdd);
        let c_tml = c_ml / cells_per_step - 2.0 * cfg.timing.c_wire_per_cell;
        if !(c_tml > 0.0) {
            return Err(TcamError::Config(format!(
                "{}: energy target leaves no room for match-line capacitance",
                cfg.design
            )));
        }
        cfg.timing.c_ml_per_cell = c_tml;

        let t_rc = target.latency_1step_ps * PICO - cfg.timing.t_sense;
        if !(t_rc > 0.0) {
            return Err(TcamError::Config(format!("{}: latency target below t_sense", cfg.design)));
        }
        cfg.div.tml_r_on = t_rc / (c_ml * ln);
    }
    Ok(())
}

/// Calibrates every design in `configs` in place. Designs missing from the map
/// still contribute their family's device fit through a default 2FeFET config.
pub fn calibrate(
    configs: &mut BTreeMap<CellDesign, ArrayConfig>,
    targets: &BTreeMap<CellDesign, CalibrationTarget>,
    word_len: usize,
) -> Result<CalibrationReport> {
    if word_len < 8 {
        return Err(TcamError::Config("calibration word length must be >= 8".into()));
    }
    let mut report = Vec::new();
    for (two, one_five) in
        [(CellDesign::TwoFeFetSg, CellDesign::OneFiveT1FeSg), (CellDesign::TwoFeFetDg, CellDesign::OneFiveT1FeDg)]
    {
        let target_two = targets.get(&two).copied().unwrap_or_else(|| CalibrationTarget::reference(two));
        let target_one_five = targets.get(&one_five).copied().unwrap_or_else(|| CalibrationTarget::reference(one_five));

        let mut cfg_two = configs.get(&two).cloned().unwrap_or_else(|| ArrayConfig::new(two, 1, word_len));
        cfg_two.cols = word_len;
        let before_two = ModelFigures::of(&cfg_two, word_len)?;
        fit_two_fefet(&mut cfg_two, &target_two, word_len)?;
        let device = cfg_two.dev.clone();

        if let Some(cfg) = configs.get_mut(&two) {
            cfg.dev = device.clone();
            cfg.timing = cfg_two.timing.clone();
            report.push(summary(cfg, target_two, before_two, word_len)?);
        }
        if let Some(cfg) = configs.get_mut(&one_five) {
            let mut fit = cfg.clone();
            fit.cols = word_len;
            let before = ModelFigures::of(&fit, word_len)?;
            fit.dev = device.clone();
            fit_one_five(&mut fit, &target_one_five, word_len)?;
            cfg.dev = fit.dev;
            cfg.timing = fit.timing;
            cfg.div = fit.div;
            report.push(summary(cfg, target_one_five, before, word_len)?);
        }
    }
    report.sort_by_key(|d| d.design);
    Ok(CalibrationReport { word_len, designs: report })
}

fn summary(cfg: &ArrayConfig, target: CalibrationTarget, before: ModelFigures, n: usize) -> Result<DesignCalibration> {
    Ok(DesignCalibration {
        design: cfg.design,
        target,
        before,
        after: ModelFigures::of(cfg, n)?,
        i_on_ref: cfg.dev.i_on_ref,
        c_ml_per_cell: cfg.timing.c_ml_per_cell,
        c_sl_per_cell: cfg.timing.c_sl_per_cell,
        tml_r_on: cfg.div.tml_r_on,
    })
}
