//! Run configuration: a JSON document of nested sections merged over the
//! built-in defaults, then resolved into calibrated per-design array configs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::array::{ArrayConfig, EarlyTermination};
use crate::calibrate::{calibrate, CalibrationReport, CalibrationTarget};
use crate::cell::{CellDesign, DividerParams};
use crate::device::FeFetParams;
use crate::error::{Result, TcamError};
use crate::perf::{CellConstants, TimingParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub rows: usize,
    pub cols: usize,
    pub driver_shared: bool,
    pub step1_miss_rate: f64,
    pub early_termination: EarlyTermination,
}

impl Default for ArraySection {
    fn default() -> Self {
        Self {
            rows: 64,
            cols: 64,
            driver_shared: false,
            step1_miss_rate: 0.9,
            early_termination: EarlyTermination::PerRow,
        }
    }
}

/// Divider section; the select-line voltage is taken from each design's device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DividerSection {
    pub vdd: f64,
    pub v_b: f64,
    pub r_n: f64,
    pub r_p: f64,
    pub tml_vth: f64,
    pub tml_r_on: f64,
}

impl Default for DividerSection {
    fn default() -> Self {
        let d = DividerParams::default();
        Self { vdd: d.vdd, v_b: d.v_b, r_n: d.r_n, r_p: d.r_p, tml_vth: d.tml_vth, tml_r_on: d.tml_r_on }
    }
}

impl DividerSection {
    pub fn for_device(&self, dev: &FeFetParams) -> DividerParams {
        DividerParams {
            vdd: self.vdd,
            v_sel: dev.read_voltage,
            v_b: self.v_b,
            r_n: self.r_n,
            r_p: self.r_p,
            tml_vth: self.tml_vth,
            tml_r_on: self.tml_r_on,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub word_lengths: Vec<usize>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { word_lengths: vec![16, 32, 64, 128] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSection {
    pub enabled: bool,
    pub word_len: usize,
    pub targets: BTreeMap<CellDesign, CalibrationTarget>,
}

impl Default for CalibrationSection {
    fn default() -> Self {
        Self { enabled: true, word_len: 64, targets: CalibrationTarget::reference_set() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub designs: Vec<CellDesign>,
    pub array: ArraySection,
    /// Device parameter sets keyed by preset name.
    pub device: BTreeMap<String, FeFetParams>,
    pub divider: DividerSection,
    /// Starting timing parameters per design (calibration refines them).
    pub timing: BTreeMap<CellDesign, TimingParams>,
    pub cell_constants: CellConstants,
    pub sweep: SweepSection,
    pub calibration: CalibrationSection,
    pub seed: u64,
    /// Random queries generated by `search` when no query file is given.
    pub random_queries: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let device = ["sg14", "dg14"]
            .iter()
            .map(|n| (n.to_string(), FeFetParams::preset(n).expect("built-in preset")))
            .collect();
        Self {
            designs: CellDesign::ALL.to_vec(),
            array: ArraySection::default(),
            device,
            divider: DividerSection::default(),
            timing: CellDesign::ALL.iter().map(|d| (*d, TimingParams::default_for(*d))).collect(),
            cell_constants: CellConstants::default(),
            sweep: SweepSection::default(),
            calibration: CalibrationSection::default(),
            seed: 42,
            random_queries: 64,
            output_dir: PathBuf::from("out"),
        }
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// First line of `text` mentioning `"key"`, or 0.
fn line_of_key(text: &str, key: &str) -> usize {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map_or(0, |i| i + 1)
}

impl RunConfig {
    /// Parses `text` as a partial configuration layered over the defaults.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let user: Value =
            serde_json::from_str(text).map_err(|e| TcamError::Format { line: e.line(), msg: e.to_string() })?;
        if !user.is_object() {
            return Err(TcamError::Format { line: 1, msg: "configuration must be a JSON object".into() });
        }
        let mut merged = serde_json::to_value(Self::default()).expect("defaults serialize");
        merge(&mut merged, user);
        let cfg: Self = serde_path_to_error::deserialize(merged).map_err(|e| {
            let path = e.path().to_string();
            let key = e
                .path()
                .iter()
                .filter_map(|s| match s {
                    serde_path_to_error::Segment::Map { key } => Some(key.clone()),
                    _ => None,
                })
                .next_back()
                .unwrap_or_default();
            let inner = e.into_inner().to_string();
            let key = if key.is_empty() { unknown_field(&inner).unwrap_or_default() } else { key };
            TcamError::Format { line: line_of_key(text, &key), msg: format!("{path}: {inner}") }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.designs.is_empty() {
            return Err(TcamError::Config("no designs selected".into()));
        }
        for d in &self.designs {
            if !self.device.contains_key(d.device_preset()) {
                return Err(TcamError::Config(format!("{d} needs device preset '{}'", d.device_preset())));
            }
        }
        let w = &self.sweep.word_lengths;
        if w.is_empty() || w.windows(2).any(|p| p[0] >= p[1]) || w[0] == 0 {
            return Err(TcamError::Config(
                "sweep.word_lengths must be nonempty, positive and strictly ascending".into(),
            ));
        }
        if w.iter().any(|n| n % 2 != 0) {
            return Err(TcamError::Config("sweep.word_lengths must be even".into()));
        }
        Ok(())
    }

    /// Uncalibrated array config for `design` at the configured geometry.
    pub fn base_array(&self, design: CellDesign) -> Result<ArrayConfig> {
        let dev = self
            .device
            .get(design.device_preset())
            .cloned()
            .ok_or_else(|| TcamError::Config(format!("missing device preset '{}'", design.device_preset())))?;
        let mut cfg = ArrayConfig::new(design, self.array.rows, self.array.cols);
        cfg.div = self.divider.for_device(&dev);
        cfg.dev = dev;
        if let Some(t) = self.timing.get(&design) {
            cfg.timing = t.clone();
        }
        cfg.cell_constants = self.cell_constants.clone();
        cfg.driver_shared = self.array.driver_shared && cfg.driver_sharing_supported();
        cfg.step1_miss_rate = self.array.step1_miss_rate;
        cfg.early_termination = self.array.early_termination;
        Ok(cfg)
    }

    /// Builds every selected design, calibrating all four when enabled so
    /// device fits are shared within a family.
    pub fn resolve(&self) -> Result<ResolvedModel> {
        let mut all = BTreeMap::new();
        for d in CellDesign::ALL {
            all.insert(d, self.base_array(d)?);
        }
        let calibration = if self.calibration.enabled {
            Some(calibrate(&mut all, &self.calibration.targets, self.calibration.word_len)?)
        } else {
            None
        };
        let mut configs = BTreeMap::new();
        for d in &self.designs {
            let cfg = all.remove(d).expect("all designs built");
            cfg.validate()?;
            configs.insert(*d, cfg);
        }
        Ok(ResolvedModel { configs, calibration })
    }
}

fn unknown_field(msg: &str) -> Option<String> {
    let rest = msg.strip_prefix("unknown field `")?;
    Some(rest[..rest.find('`')?].to_string())
}

#[derive(Debug, Clone)]
pub struct ResolvedModel {
    pub configs: BTreeMap<CellDesign, ArrayConfig>,
    pub calibration: Option<CalibrationReport>,
}
