//! Cell-level encoding and match evaluation for the four FeFET TCAM cells.
//!
//! 2FeFET cells store a complementary pair and pull the match line down
//! directly through whichever FeFET the search line activates. 1.5T1Fe cells
//! store one FeFET per cell and sense it through a resistive divider against
//! TN (search `0`) or TP (search `1`); the divider node `SL_bar` drives the
//! gate of the match-line transistor TML.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::device::{mosfet_resistance, search_resistance, FeFetParams, MosfetKind, MosfetParams, PolarizationState};
use crate::error::{Result, TcamError};

use PolarizationState::{Hvt, Lvt, Mvt};

/// Stored TCAM symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TernaryBit {
    Zero,
    One,
    DontCare,
}

impl TernaryBit {
    pub const ALL: [TernaryBit; 3] = [Self::Zero, Self::One, Self::DontCare];

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Self::Zero),
            '1' => Some(Self::One),
            'X' | 'x' => Some(Self::DontCare),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Self::Zero => '0',
            Self::One => '1',
            Self::DontCare => 'X',
        }
    }

    /// Ternary wildcard rule: a cell mismatches iff it stores a concrete bit
    /// different from the query bit.
    pub fn mismatches(self, query: SearchBit) -> bool {
        match self {
            Self::DontCare => false,
            Self::Zero => query == SearchBit::One,
            Self::One => query == SearchBit::Zero,
        }
    }
}

/// Query symbol. Queries carry no wildcard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchBit {
    Zero,
    One,
}

impl SearchBit {
    pub const ALL: [SearchBit; 2] = [Self::Zero, Self::One];

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Self::Zero),
            '1' => Some(Self::One),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Self::Zero => '0',
            Self::One => '1',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellDesign {
    #[serde(rename = "2SG-FeFET")]
    TwoFeFetSg,
    #[serde(rename = "2DG-FeFET")]
    TwoFeFetDg,
    #[serde(rename = "1.5T1SG-Fe")]
    OneFiveT1FeSg,
    #[serde(rename = "1.5T1DG-Fe")]
    OneFiveT1FeDg,
}

impl CellDesign {
    pub const ALL: [CellDesign; 4] = [Self::TwoFeFetSg, Self::TwoFeFetDg, Self::OneFiveT1FeSg, Self::OneFiveT1FeDg];

    pub fn name(self) -> &'static str {
        match self {
            Self::TwoFeFetSg => "2SG-FeFET",
            Self::TwoFeFetDg => "2DG-FeFET",
            Self::OneFiveT1FeSg => "1.5T1SG-Fe",
            Self::OneFiveT1FeDg => "1.5T1DG-Fe",
        }
    }

    /// True for the 1.5T1Fe cells, which pair two columns on one TML.
    pub fn is_paired(self) -> bool {
        matches!(self, Self::OneFiveT1FeSg | Self::OneFiveT1FeDg)
    }

    pub fn is_double_gate(self) -> bool {
        matches!(self, Self::TwoFeFetDg | Self::OneFiveT1FeDg)
    }

    pub fn search_steps(self) -> u8 {
        if self.is_paired() {
            2
        } else {
            1
        }
    }

    /// Name of the built-in device preset this design uses.
    pub fn device_preset(self) -> &'static str {
        if self.is_double_gate() {
            "dg14"
        } else {
            "sg14"
        }
    }

    /// The 2FeFET cell with the same device family.
    pub fn two_fefet_counterpart(self) -> CellDesign {
        if self.is_double_gate() {
            Self::TwoFeFetDg
        } else {
            Self::TwoFeFetSg
        }
    }
}

impl fmt::Display for CellDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CellDesign {
    type Err = TcamError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        match key.as_str() {
            "2sg-fefet" | "2sg" => Ok(Self::TwoFeFetSg),
            "2dg-fefet" | "2dg" => Ok(Self::TwoFeFetDg),
            "1.5t1sg-fe" | "1.5t1sg" => Ok(Self::OneFiveT1FeSg),
            "1.5t1dg-fe" | "1.5t1dg" => Ok(Self::OneFiveT1FeDg),
            _ => Err(TcamError::Config(format!("unknown cell design '{s}'"))),
        }
    }
}

/// Complementary FeFET pair of a 2FeFET cell. Only HVT/LVT states are legal
/// and (LVT, LVT) is unreachable through the write table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeFetPair {
    left: PolarizationState,
    right: PolarizationState,
}

impl FeFetPair {
    pub fn new(left: PolarizationState, right: PolarizationState) -> Result<Self> {
        if left == Mvt || right == Mvt {
            return Err(TcamError::InvalidInput("2FeFET cells cannot hold MVT".into()));
        }
        if left == Lvt && right == Lvt {
            return Err(TcamError::InvalidInput("(LVT, LVT) is not a legal 2FeFET state".into()));
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> PolarizationState {
        self.left
    }

    pub fn right(&self) -> PolarizationState {
        self.right
    }
}

/// Polarization content of one TCAM cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellEncoding {
    Pair(FeFetPair),
    Single(PolarizationState),
}

pub fn encode(design: CellDesign, value: TernaryBit) -> CellEncoding {
    if design.is_paired() {
        CellEncoding::Single(match value {
            TernaryBit::Zero => Hvt,
            TernaryBit::One => Lvt,
            TernaryBit::DontCare => Mvt,
        })
    } else {
        let (left, right) = match value {
            TernaryBit::Zero => (Hvt, Lvt),
            TernaryBit::One => (Lvt, Hvt),
            TernaryBit::DontCare => (Hvt, Hvt),
        };
        CellEncoding::Pair(FeFetPair { left, right })
    }
}

pub fn decode(design: CellDesign, enc: CellEncoding) -> Result<TernaryBit> {
    match (design.is_paired(), enc) {
        (true, CellEncoding::Single(s)) => Ok(match s {
            Hvt => TernaryBit::Zero,
            Lvt => TernaryBit::One,
            Mvt => TernaryBit::DontCare,
        }),
        (false, CellEncoding::Pair(p)) => match (p.left, p.right) {
            (Hvt, Lvt) => Ok(TernaryBit::Zero),
            (Lvt, Hvt) => Ok(TernaryBit::One),
            (Hvt, Hvt) => Ok(TernaryBit::DontCare),
            other => Err(TcamError::InvalidInput(format!("illegal pair {other:?}"))),
        },
        _ => Err(TcamError::InvalidInput(format!("encoding {enc:?} does not belong to {design}"))),
    }
}

/// Divider and control-transistor parameters of the 1.5T1Fe cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DividerParams {
    pub vdd: f64,
    /// Select-line (read-gate) voltage; filled from the device read voltage.
    pub v_sel: f64,
    /// Small front-gate bias during search `0`. Carried for completeness; it
    /// does not alter the FeFET resistance in this model.
    pub v_b: f64,
    /// TN on-resistance.
    pub r_n: f64,
    /// TP on-resistance.
    pub r_p: f64,
    pub tml_vth: f64,
    pub tml_r_on: f64,
}

impl Default for DividerParams {
    fn default() -> Self {
        Self { vdd: 0.8, v_sel: 2.0, v_b: 0.25, r_n: 1e6, r_p: 1e8, tml_vth: 0.3, tml_r_on: 5e4 }
    }
}

impl DividerParams {
    const OFF_FACTOR: f64 = 1e4;

    pub fn tn(&self) -> MosfetParams {
        MosfetParams {
            kind: MosfetKind::Tn,
            vth: 0.3,
            r_on: self.r_n,
            r_off: self.r_n * Self::OFF_FACTOR,
            gate_capacitance: 1e-16,
        }
    }

    pub fn tp(&self) -> MosfetParams {
        MosfetParams {
            kind: MosfetKind::Tp,
            vth: 0.3,
            r_on: self.r_p,
            r_off: self.r_p * Self::OFF_FACTOR,
            gate_capacitance: 1e-16,
        }
    }

    pub fn tml(&self) -> MosfetParams {
        MosfetParams {
            kind: MosfetKind::Tml,
            vth: self.tml_vth,
            r_on: self.tml_r_on,
            r_off: self.tml_r_on * Self::OFF_FACTOR,
            gate_capacitance: 5e-17,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("vdd", self.vdd),
            ("v_sel", self.v_sel),
            ("r_n", self.r_n),
            ("r_p", self.r_p),
            ("tml_vth", self.tml_vth),
            ("tml_r_on", self.tml_r_on),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(TcamError::Config(format!("divider.{name} must be positive, got {v}")));
            }
        }
        if !(self.v_b.is_finite() && self.v_b >= 0.0) {
            return Err(TcamError::Config("divider.v_b must be >= 0".into()));
        }
        if self.tml_vth >= self.vdd {
            return Err(TcamError::Config("TML threshold must be below VDD".into()));
        }
        Ok(())
    }

    /// Resistance of the divider transistor that conducts for `search`.
    pub fn active_resistor(&self, search: SearchBit) -> f64 {
        match search {
            // Wr/SL and SL at VDD: TN gate high
            SearchBit::Zero => mosfet_resistance(&self.tn(), self.vdd),
            // Wr/SL and SL grounded: TP gate pulled low against its VDD source
            SearchBit::One => mosfet_resistance(&self.tp(), -self.vdd),
        }
    }
}

/// The five resistances that must satisfy R_ON < R_N < R_M < R_P << R_OFF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResistanceSet {
    pub r_on: f64,
    pub r_n: f64,
    pub r_m: f64,
    pub r_p: f64,
    pub r_off: f64,
}

impl ResistanceSet {
    pub fn from_device(dev: &FeFetParams, div: &DividerParams) -> Result<Self> {
        Ok(Self {
            r_on: search_resistance(dev, Lvt)?,
            r_n: div.r_n,
            r_m: search_resistance(dev, Mvt)?,
            r_p: div.r_p,
            r_off: search_resistance(dev, Hvt)?,
        })
    }

    pub fn fefet(&self, state: PolarizationState) -> f64 {
        match state {
            Lvt => self.r_on,
            Mvt => self.r_m,
            Hvt => self.r_off,
        }
    }

    /// Name of the first violated relation, if any. `<<` is taken as a 10x margin.
    pub fn first_violation(&self) -> Option<&'static str> {
        if !(self.r_on < self.r_n) {
            Some("R_ON < R_N")
        } else if !(self.r_n < self.r_m) {
            Some("R_N < R_M")
        } else if !(self.r_m < self.r_p) {
            Some("R_M < R_P")
        } else if !(self.r_p < self.r_off) {
            Some("R_P < R_OFF")
        } else if !(self.r_p <= self.r_off / 10.0) {
            Some("R_P << R_OFF (10x margin)")
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrderCheck {
    Ordered(ResistanceSet),
    Violated { relation: &'static str, set: ResistanceSet },
}

impl OrderCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, Self::Ordered(_))
    }
}

pub fn check_resistance_order(dev: &FeFetParams, div: &DividerParams) -> Result<OrderCheck> {
    let set = ResistanceSet::from_device(dev, div)?;
    Ok(match set.first_violation() {
        None => OrderCheck::Ordered(set),
        Some(relation) => OrderCheck::Violated { relation, set },
    })
}

/// Steady-state `SL_bar` voltage of the divider.
pub fn divider_voltage(search: SearchBit, r_fe: f64, div: &DividerParams) -> Result<f64> {
    if !(r_fe > 0.0) {
        return Err(TcamError::InvalidInput(format!("r_fe must be > 0, got {r_fe}")));
    }
    Ok(match search {
        SearchBit::Zero => div.vdd * div.r_n / (r_fe + div.r_n),
        SearchBit::One => div.vdd * r_fe / (r_fe + div.r_p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividerEval {
    pub tml_conducting: bool,
    pub v_sl_bar: f64,
    /// Current through the FeFET and the active divider transistor (A).
    pub static_current: f64,
}

/// Evaluates a 1.5T1Fe cell from precomputed resistances. Does not re-check ordering.
pub fn evaluate_divider(
    stored: PolarizationState,
    search: SearchBit,
    rs: &ResistanceSet,
    div: &DividerParams,
) -> Result<DividerEval> {
    let r_fe = rs.fefet(stored);
    let v_sl_bar = divider_voltage(search, r_fe, div)?;
    let r_div = match search {
        SearchBit::Zero => rs.r_n,
        SearchBit::One => rs.r_p,
    };
    Ok(DividerEval { tml_conducting: v_sl_bar > div.tml_vth, v_sl_bar, static_current: div.vdd / (r_fe + r_div) })
}

pub fn evaluate_match_1p5(
    stored: PolarizationState,
    search: SearchBit,
    dev: &FeFetParams,
    div: &DividerParams,
) -> Result<DividerEval> {
    match check_resistance_order(dev, div)? {
        OrderCheck::Ordered(rs) => {
            let mut rs = rs;
            rs.r_n = div.active_resistor(SearchBit::Zero);
            rs.r_p = div.active_resistor(SearchBit::One);
            evaluate_divider(stored, search, &rs, div)
        }
        OrderCheck::Violated { relation, .. } => Err(TcamError::ResistanceOrder(relation.into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEval {
    pub pulls_down: bool,
    /// Effective resistance of the FeFET the search line activated.
    pub path_resistance: f64,
}

/// Search `0` drives SL (left FeFET), search `1` drives SL_bar (right FeFET).
pub fn activated_state(pair: FeFetPair, search: SearchBit) -> PolarizationState {
    match search {
        SearchBit::Zero => pair.left,
        SearchBit::One => pair.right,
    }
}

pub fn evaluate_match_2fefet(pair: FeFetPair, search: SearchBit, dev: &FeFetParams) -> Result<PairEval> {
    let state = activated_state(pair, search);
    Ok(PairEval { pulls_down: state == Lvt, path_resistance: search_resistance(dev, state)? })
}
