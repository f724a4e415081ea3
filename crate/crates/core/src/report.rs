//! Figure-of-merit table and word-length sweep, with CSV and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::array::{self, ArrayConfig, WellDriverReport};
use crate::calibrate::CalibrationReport;
use crate::cell::CellDesign;
use crate::error::Result;
use crate::perf::{benchmark_energies, write_energy_per_cell, CellConstants, RowModel, FEMTO, PICO};

/// Array size the figure-of-merit table is evaluated at.
pub const FOM_ROWS: usize = 64;
pub const FOM_WORD_LEN: usize = 64;

/// Three significant digits, fixed notation.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (2 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineRow {
    pub name: String,
    pub write_voltage: String,
    pub cell_area_um2: f64,
    pub latency_ps: f64,
    pub energy_per_cell_fj: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FomRatios {
    /// Baseline cell area over this cell's area.
    pub area: f64,
    /// Reference (2SG-FeFET) write energy over this design's.
    pub write_energy: f64,
    /// Baseline latency over this design's full search latency.
    pub latency: f64,
    /// Baseline energy over this design's average search energy.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FomRow {
    pub design: CellDesign,
    pub write_voltage: String,
    pub fe_thickness_nm: f64,
    pub cell_area_um2: f64,
    pub array_area_um2: f64,
    pub wells_and_drivers: WellDriverReport,
    pub write_energy_fj: f64,
    pub latency_1step_ps: f64,
    pub latency_full_ps: f64,
    pub energy_1step_fj: f64,
    pub energy_2step_fj: f64,
    pub energy_avg_fj: f64,
    pub ratios: FomRatios,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FomReport {
    pub rows: usize,
    pub word_len: usize,
    pub step1_miss_rate: f64,
    pub baseline: BaselineRow,
    pub designs: Vec<FomRow>,
    pub calibration: Option<CalibrationReport>,
}

fn write_voltage_label(cfg: &ArrayConfig) -> String {
    let w = format!("±{}V", cfg.dev.write_pos_threshold);
    if cfg.design.is_paired() {
        format!("{w}, {}V", cfg.dev.write_mid_level)
    } else {
        w
    }
}

fn baseline(cc: &CellConstants) -> BaselineRow {
    BaselineRow {
        name: "16T CMOS".into(),
        write_voltage: cc.cmos16t.write_voltage.clone(),
        cell_area_um2: cc.cmos16t.area_um2,
        latency_ps: cc.cmos16t.latency / PICO,
        energy_per_cell_fj: cc.cmos16t.energy_per_cell / FEMTO,
    }
}

fn fom_row(config: &ArrayConfig, base: &BaselineRow) -> Result<FomRow> {
    let mut cfg = config.clone();
    cfg.rows = FOM_ROWS;
    cfg.cols = FOM_WORD_LEN;
    let model = cfg.row_model()?;
    let e = benchmark_energies(&model, cfg.step1_miss_rate)?;
    let cc = &cfg.cell_constants;
    let cell_area = cc.area_um2(cfg.design);
    let write = write_energy_per_cell(cfg.design, cc) / FEMTO;
    let write_ref = write_energy_per_cell(CellDesign::TwoFeFetSg, cc) / FEMTO;
    let latency_full = model.latency.full / PICO;
    let energy_avg = e.average / FEMTO;
    Ok(FomRow {
        design: cfg.design,
        write_voltage: write_voltage_label(&cfg),
        fe_thickness_nm: cfg.dev.fe_thickness_nm,
        cell_area_um2: cell_area,
        array_area_um2: array::area(&cfg),
        wells_and_drivers: array::wells_and_drivers(&cfg),
        write_energy_fj: write,
        latency_1step_ps: model.latency.one_step / PICO,
        latency_full_ps: latency_full,
        energy_1step_fj: e.one_step / FEMTO,
        energy_2step_fj: e.two_step / FEMTO,
        energy_avg_fj: energy_avg,
        ratios: FomRatios {
            area: base.cell_area_um2 / cell_area,
            write_energy: write_ref / write,
            latency: base.latency_ps / latency_full,
            energy: base.energy_per_cell_fj / energy_avg,
        },
    })
}

pub fn fom_report(
    configs: &BTreeMap<CellDesign, ArrayConfig>,
    calibration: Option<CalibrationReport>,
) -> Result<FomReport> {
    let first = configs.values().next();
    let cc = first.map(|c| c.cell_constants.clone()).unwrap_or_default();
    let base = baseline(&cc);
    let designs = configs.values().map(|c| fom_row(c, &base)).collect::<Result<Vec<_>>>()?;
    Ok(FomReport {
        rows: FOM_ROWS,
        word_len: FOM_WORD_LEN,
        step1_miss_rate: first.map_or(0.9, |c| c.step1_miss_rate),
        baseline: base,
        designs,
        calibration,
    })
}

impl FomReport {
    pub const CSV_HEADER: &'static str = "design,write_voltage,fe_thickness_nm,cell_area_um2,area_ratio,\
write_energy_fj,write_energy_ratio,latency_1step_ps,latency_full_ps,latency_ratio,\
energy_1step_fj,energy_2step_fj,energy_avg_fj,energy_ratio";

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", Self::CSV_HEADER).unwrap();
        let b = &self.baseline;
        writeln!(
            s,
            "{},{},NA,{},1.00,NA,NA,{:.1},{:.1},1.00,{},{},{},1.00",
            b.name,
            b.write_voltage,
            b.cell_area_um2,
            b.latency_ps,
            b.latency_ps,
            sig3(b.energy_per_cell_fj),
            sig3(b.energy_per_cell_fj),
            sig3(b.energy_per_cell_fj),
        )
        .unwrap();
        for r in &self.designs {
            writeln!(
                s,
                "{},\"{}\",{},{},{:.2},{},{:.2},{:.1},{:.1},{:.2},{},{},{},{:.2}",
                r.design,
                r.write_voltage,
                r.fe_thickness_nm,
                r.cell_area_um2,
                r.ratios.area,
                sig3(r.write_energy_fj),
                r.ratios.write_energy,
                r.latency_1step_ps,
                r.latency_full_ps,
                r.ratios.latency,
                sig3(r.energy_1step_fj),
                sig3(r.energy_2step_fj),
                sig3(r.energy_avg_fj),
                r.ratios.energy,
            )
            .unwrap();
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn row(&self, design: CellDesign) -> Option<&FomRow> {
        self.designs.iter().find(|r| r.design == design)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub design: CellDesign,
    pub word_len: usize,
    pub latency_1step_ps: f64,
    pub latency_full_ps: f64,
    pub energy_1step_fj: f64,
    pub energy_2step_fj: f64,
    /// Per-cell energy at the configured step-1 miss rate.
    pub energy_per_cell_fj: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub trends: Vec<TrendCheck>,
}

/// Evaluates every (design, word length) point; rows are ordered by design,
/// then word length.
pub fn sweep(configs: &BTreeMap<CellDesign, ArrayConfig>, word_lengths: &[usize]) -> Result<SweepReport> {
    let points: Vec<(&ArrayConfig, usize)> =
        configs.values().flat_map(|c| word_lengths.iter().map(move |n| (c, *n))).collect();
    let rows = points
        .par_iter()
        .map(|(cfg, n)| {
            let model = RowModel::new(cfg.design, *n, &cfg.dev, &cfg.div, &cfg.timing)?;
            let e = benchmark_energies(&model, cfg.step1_miss_rate)?;
            Ok(SweepRow {
                design: cfg.design,
                word_len: *n,
                latency_1step_ps: model.latency.one_step / PICO,
                latency_full_ps: model.latency.full / PICO,
                energy_1step_fj: e.one_step / FEMTO,
                energy_2step_fj: e.two_step / FEMTO,
                energy_per_cell_fj: e.average / FEMTO,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let trends = trend_checks(&rows);
    Ok(SweepReport { rows, trends })
}

fn series(rows: &[SweepRow], d: CellDesign) -> Vec<SweepRow> {
    rows.iter().filter(|r| r.design == d).copied().collect()
}

fn trend_checks(rows: &[SweepRow]) -> Vec<TrendCheck> {
    let mut out = Vec::new();
    for d in CellDesign::ALL {
        let s = series(rows, d);
        if s.len() < 2 {
            continue;
        }
        out.push(TrendCheck {
            name: format!("{d}: latency strictly increasing"),
            passed: s.windows(2).all(|w| w[1].latency_full_ps > w[0].latency_full_ps),
        });
        let (name, ok) = if d.is_paired() {
            ("non-decreasing", s.windows(2).all(|w| w[1].energy_per_cell_fj >= w[0].energy_per_cell_fj))
        } else {
            ("non-increasing", s.windows(2).all(|w| w[1].energy_per_cell_fj <= w[0].energy_per_cell_fj))
        };
        out.push(TrendCheck { name: format!("{d}: energy per cell {name}"), passed: ok });
    }
    for (two, one_five) in
        [(CellDesign::TwoFeFetSg, CellDesign::OneFiveT1FeSg), (CellDesign::TwoFeFetDg, CellDesign::OneFiveT1FeDg)]
    {
        let (a, b) = (series(rows, two), series(rows, one_five));
        if a.len() < 2 || b.len() < 2 || a.len() != b.len() {
            continue;
        }
        let growth = |s: &[SweepRow]| s[s.len() - 1].latency_full_ps / s[0].latency_full_ps;
        out.push(TrendCheck {
            name: format!("{one_five}: latency grows slower than {two}"),
            passed: growth(&b) < growth(&a),
        });
    }
    out
}

impl SweepReport {
    pub fn all_trends_hold(&self) -> bool {
        self.trends.iter().all(|t| t.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "design,word_len,latency_1step_ps,latency_full_ps,energy_1step_fj,energy_2step_fj,energy_per_cell_fj\n",
        );
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{:.2},{:.2},{},{},{}",
                r.design,
                r.word_len,
                r.latency_1step_ps,
                r.latency_full_ps,
                sig3(r.energy_1step_fj),
                sig3(r.energy_2step_fj),
                sig3(r.energy_per_cell_fj),
            )
            .unwrap();
        }
        for t in &self.trends {
            writeln!(s, "# {} {}", if t.passed { "PASS" } else { "FAIL" }, t.name).unwrap();
        }
        s
    }
}
