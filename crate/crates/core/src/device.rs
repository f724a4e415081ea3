//! Behavioral FeFET and switch-level MOSFET models.
//!
//! An FeFET holds one of three polarization states, each mapping to a
//! threshold voltage on the read gate. Single-gate (SG) devices are written
//! and read through the front gate; double-gate (DG) devices are written
//! through the front gate and read through the back gate, which widens the
//! memory window but degrades the subthreshold slope.
//!
//! The I-V form is exponential below threshold and linear in overdrive above
//! it, joined with matching slope at threshold, times a `tanh` drain factor
//! that gives a linear region followed by saturation.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Result, TcamError};

/// Currents below this floor are treated as "off" for resistance extraction.
pub const CURRENT_FLOOR: f64 = 1e-15;
/// Resistance reported when the current is below [`CURRENT_FLOOR`].
pub const RESISTANCE_CEILING: f64 = 1e12;

const LN_10: f64 = std::f64::consts::LN_10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    FrontGate,
    BackGate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolarizationState {
    Lvt,
    Mvt,
    Hvt,
}

impl PolarizationState {
    pub const ALL: [PolarizationState; 3] = [Self::Lvt, Self::Mvt, Self::Hvt];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeviceKind {
    #[serde(rename = "sg")]
    Sg,
    #[serde(rename = "dg")]
    Dg,
}

/// Operating point of a device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bias {
    pub v_gs: f64,
    pub v_ds: f64,
}

/// FeFET parameter bundle. Threshold voltages refer to the device's read gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeFetParams {
    pub device_kind: DeviceKind,
    pub vth_lvt: f64,
    pub vth_mvt: f64,
    pub vth_hvt: f64,
    /// Nominal `vth_hvt - vth_lvt` (V).
    pub memory_window: f64,
    /// Front-gate subthreshold slope (mV/decade).
    pub ss_front_mv: f64,
    /// Back-gate subthreshold slope (mV/decade).
    pub ss_back_mv: f64,
    /// Saturated drain current at `v_ov_ref` overdrive (A).
    pub i_on_ref: f64,
    pub v_ov_ref: f64,
    /// Drain-voltage scale of the `tanh` linear/saturation factor (V).
    pub v_dsat: f64,
    /// Minimum R_OFF/R_ON the device must show at its search bias.
    pub on_off_ratio: f64,
    pub write_pos_threshold: f64,
    pub write_neg_threshold: f64,
    pub write_mid_level: f64,
    pub write_mid_tolerance: f64,
    /// Read-gate voltage applied during search (V).
    pub read_voltage: f64,
    /// Drain-source voltage at the search bias point (V).
    pub read_vds: f64,
    pub fe_thickness_nm: f64,
}

impl FeFetParams {
    /// 14 nm FDSOI single-gate FeFET: +/-4 V write, 1.8 V window, front-gate read.
    pub fn sg14() -> Self {
        Self {
            device_kind: DeviceKind::Sg,
            vth_lvt: 0.3,
            vth_mvt: 0.92,
            vth_hvt: 2.1,
            memory_window: 1.8,
            ss_front_mv: 100.0,
            ss_back_mv: 400.0,
            i_on_ref: 1.54e-5,
            v_ov_ref: 1.0,
            v_dsat: 0.1,
            on_off_ratio: 1e5,
            write_pos_threshold: 4.0,
            write_neg_threshold: -4.0,
            write_mid_level: 3.2,
            write_mid_tolerance: 0.2,
            read_voltage: 0.8,
            read_vds: 0.4,
            fe_thickness_nm: 10.0,
        }
    }

    /// 14 nm FDSOI double-gate FeFET: +/-2 V write, 2.7 V window, back-gate read
    /// at the same 2 V level as the LVT write.
    pub fn dg14() -> Self {
        Self {
            device_kind: DeviceKind::Dg,
            vth_lvt: 1.1,
            vth_mvt: 2.65,
            vth_hvt: 3.8,
            memory_window: 2.7,
            ss_front_mv: 90.0,
            ss_back_mv: 500.0,
            i_on_ref: 4.3e-6,
            v_ov_ref: 1.0,
            v_dsat: 0.1,
            on_off_ratio: 1e4,
            write_pos_threshold: 2.0,
            write_neg_threshold: -2.0,
            write_mid_level: 1.6,
            write_mid_tolerance: 0.2,
            read_voltage: 2.0,
            read_vds: 0.4,
            fe_thickness_nm: 5.0,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "sg14" => Ok(Self::sg14()),
            "dg14" => Ok(Self::dg14()),
            other => Err(TcamError::Config(format!("unknown device preset '{other}'"))),
        }
    }

    pub fn read_gate(&self) -> GateKind {
        match self.device_kind {
            DeviceKind::Sg => GateKind::FrontGate,
            DeviceKind::Dg => GateKind::BackGate,
        }
    }

    pub fn subthreshold_slope_mv(&self, gate: GateKind) -> f64 {
        match gate {
            GateKind::FrontGate => self.ss_front_mv,
            GateKind::BackGate => self.ss_back_mv,
        }
    }

    pub fn search_bias(&self) -> Bias {
        Bias { v_gs: self.read_voltage, v_ds: self.read_vds }
    }

    pub fn vth(&self, state: PolarizationState) -> f64 {
        match state {
            PolarizationState::Lvt => self.vth_lvt,
            PolarizationState::Mvt => self.vth_mvt,
            PolarizationState::Hvt => self.vth_hvt,
        }
    }

    /// Checks the structural invariants of the parameter set.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("vth_lvt", self.vth_lvt),
            ("vth_mvt", self.vth_mvt),
            ("vth_hvt", self.vth_hvt),
            ("memory_window", self.memory_window),
            ("ss_front_mv", self.ss_front_mv),
            ("ss_back_mv", self.ss_back_mv),
            ("i_on_ref", self.i_on_ref),
            ("v_ov_ref", self.v_ov_ref),
            ("v_dsat", self.v_dsat),
            ("read_voltage", self.read_voltage),
            ("read_vds", self.read_vds),
        ];
        for (name, v) in fields {
            ensure_finite(name, v).map_err(|e| TcamError::Config(e.to_string()))?;
        }
        if !(self.vth_lvt < self.vth_mvt && self.vth_mvt < self.vth_hvt) {
            return Err(TcamError::Config(format!(
                "threshold ordering vth_lvt < vth_mvt < vth_hvt violated ({}, {}, {})",
                self.vth_lvt, self.vth_mvt, self.vth_hvt
            )));
        }
        let mw = self.vth_hvt - self.vth_lvt;
        if (mw - self.memory_window).abs() > 1e-9 {
            return Err(TcamError::Config(format!(
                "memory_window {} V does not equal vth_hvt - vth_lvt = {} V",
                self.memory_window, mw
            )));
        }
        if self.ss_front_mv <= 0.0 || self.ss_back_mv <= self.ss_front_mv {
            return Err(TcamError::Config(format!(
                "subthreshold slopes must satisfy 0 < front ({}) < back ({})",
                self.ss_front_mv, self.ss_back_mv
            )));
        }
        if self.i_on_ref <= 0.0 || self.v_ov_ref <= 0.0 || self.v_dsat <= 0.0 || self.read_vds <= 0.0 {
            return Err(TcamError::Config("i_on_ref, v_ov_ref, v_dsat and read_vds must be positive".into()));
        }
        if !(self.write_neg_threshold < 0.0
            && self.write_pos_threshold > 0.0
            && self.write_mid_tolerance > 0.0
            && (self.write_mid_level - self.write_pos_threshold).abs() > self.write_mid_tolerance)
        {
            return Err(TcamError::Config("write thresholds are inconsistent".into()));
        }
        Ok(())
    }
}

fn check_gate(params: &FeFetParams, gate: GateKind) -> Result<()> {
    if gate == params.read_gate() {
        Ok(())
    } else {
        Err(TcamError::Config(format!(
            "{:?} read requested on a {:?} device that reads through {:?}",
            gate,
            params.device_kind,
            params.read_gate()
        )))
    }
}

/// Applies a front-gate write pulse (source, drain and back gate grounded).
pub fn polarize(params: &FeFetParams, state: PolarizationState, fg_voltage: f64) -> Result<PolarizationState> {
    ensure_finite("fg_voltage", fg_voltage)?;
    let limit = params.write_pos_threshold.abs() * 1.5;
    if fg_voltage.abs() > limit {
        return Err(TcamError::InvalidInput(format!("write voltage {fg_voltage} V exceeds +/-{limit} V")));
    }
    let next = if fg_voltage >= params.write_pos_threshold {
        PolarizationState::Lvt
    } else if fg_voltage <= params.write_neg_threshold {
        PolarizationState::Hvt
    } else if (fg_voltage - params.write_mid_level).abs() <= params.write_mid_tolerance {
        PolarizationState::Mvt
    } else {
        state
    };
    Ok(next)
}

pub fn threshold_voltage(params: &FeFetParams, state: PolarizationState, gate: GateKind) -> Result<f64> {
    check_gate(params, gate)?;
    Ok(params.vth(state))
}

/// Drain current (A) for the given read-gate and drain biases.
pub fn drain_current(
    params: &FeFetParams,
    state: PolarizationState,
    v_gs: f64,
    v_ds: f64,
    gate: GateKind,
) -> Result<f64> {
    ensure_finite("v_gs", v_gs)?;
    ensure_finite("v_ds", v_ds)?;
    if v_ds < 0.0 {
        return Err(TcamError::InvalidInput(format!("v_ds must be >= 0, got {v_ds}")));
    }
    let vth = threshold_voltage(params, state, gate)?;
    let slope = params.subthreshold_slope_mv(gate) / 1000.0;
    // Current at threshold, chosen so the saturated current at v_ov_ref is i_on_ref.
    let i_th = params.i_on_ref / (1.0 + LN_10 * params.v_ov_ref / slope);
    let overdrive = v_gs - vth;
    let gate_factor = if overdrive < 0.0 { 10f64.powf(overdrive / slope) } else { 1.0 + LN_10 * overdrive / slope };
    Ok(i_th * gate_factor * (v_ds / params.v_dsat).tanh())
}

/// `v_ds / I_d`, clamped to [`RESISTANCE_CEILING`] when the current underflows.
pub fn effective_resistance(params: &FeFetParams, state: PolarizationState, bias: Bias, gate: GateKind) -> Result<f64> {
    if !(bias.v_ds > 0.0) {
        return Err(TcamError::InvalidInput(format!("v_ds must be > 0, got {}", bias.v_ds)));
    }
    let i = drain_current(params, state, bias.v_gs, bias.v_ds, gate)?;
    if i < CURRENT_FLOOR {
        Ok(RESISTANCE_CEILING)
    } else {
        Ok(bias.v_ds / i)
    }
}

/// Resistance of the device in `state` at its own search bias on its read gate.
pub fn search_resistance(params: &FeFetParams, state: PolarizationState) -> Result<f64> {
    effective_resistance(params, state, params.search_bias(), params.read_gate())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MosfetKind {
    Tp,
    Tn,
    Tml,
}

/// Switch-level MOSFET: `r_on` when the gate overdrive reaches `vth`, else `r_off`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MosfetParams {
    pub kind: MosfetKind,
    /// Threshold magnitude (V).
    pub vth: f64,
    pub r_on: f64,
    pub r_off: f64,
    pub gate_capacitance: f64,
}

impl MosfetParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_on > 0.0 && self.r_off >= 1e3 * self.r_on) {
            return Err(TcamError::Config(format!(
                "{:?}: r_off ({}) must be >= 1e3 x r_on ({})",
                self.kind, self.r_off, self.r_on
            )));
        }
        if self.kind == MosfetKind::Tml && !(self.vth > 0.0) {
            return Err(TcamError::Config("TML threshold must be positive".into()));
        }
        Ok(())
    }
}

/// NMOS-type devices (TN, TML) conduct on `v_gs >= vth`; TP conducts on `v_gs <= -vth`.
pub fn mosfet_resistance(params: &MosfetParams, v_gs: f64) -> f64 {
    let on = match params.kind {
        MosfetKind::Tn | MosfetKind::Tml => v_gs >= params.vth,
        MosfetKind::Tp => -v_gs >= params.vth,
    };
    if on {
        params.r_on
    } else {
        params.r_off
    }
}
