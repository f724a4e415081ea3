use fetcam::array::{self, ArrayConfig, EarlyTermination};
use fetcam::cell::{divider_voltage, evaluate_divider, CellEncoding, DividerParams, ResistanceSet};
use fetcam::device::{
    drain_current, effective_resistance, polarize, threshold_voltage, Bias, FeFetParams, PolarizationState,
};
use fetcam::grid;
use fetcam::perf::RowModel;
use fetcam::{CellDesign, SearchBit, TernaryBit};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn preset() -> impl Strategy<Value = FeFetParams> {
    prop_oneof![Just(FeFetParams::sg14()), Just(FeFetParams::dg14())]
}

fn state() -> impl Strategy<Value = PolarizationState> {
    prop_oneof![Just(PolarizationState::Lvt), Just(PolarizationState::Mvt), Just(PolarizationState::Hvt)]
}

fn design() -> impl Strategy<Value = CellDesign> {
    prop_oneof![
        Just(CellDesign::TwoFeFetSg),
        Just(CellDesign::TwoFeFetDg),
        Just(CellDesign::OneFiveT1FeSg),
        Just(CellDesign::OneFiveT1FeDg)
    ]
}

fn tern() -> impl Strategy<Value = TernaryBit> {
    prop_oneof![Just(TernaryBit::Zero), Just(TernaryBit::One), Just(TernaryBit::DontCare)]
}

fn sbit() -> impl Strategy<Value = SearchBit> {
    prop_oneof![Just(SearchBit::Zero), Just(SearchBit::One)]
}

/// Device parameters perturbed around a preset while keeping state ordering.
fn device() -> impl Strategy<Value = FeFetParams> {
    (preset(), -0.5f64..0.5, 0.5f64..3.0, 0.1f64..0.9, 0.5f64..2.0).prop_map(|(mut p, shift, mw, mid, scale)| {
        p.vth_lvt += shift;
        p.vth_hvt = p.vth_lvt + mw;
        p.vth_mvt = p.vth_lvt + mid * mw;
        p.memory_window = p.vth_hvt - p.vth_lvt;
        p.i_on_ref *= scale;
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn thresholds_ordered_and_window_consistent(p in device()) {
        let g = p.read_gate();
        let l = threshold_voltage(&p, PolarizationState::Lvt, g).unwrap();
        let m = threshold_voltage(&p, PolarizationState::Mvt, g).unwrap();
        let h = threshold_voltage(&p, PolarizationState::Hvt, g).unwrap();
        prop_assert!(l < m && m < h);
        prop_assert!(((h - l) - p.memory_window).abs() <= 1e-9);
    }

    #[test]
    fn write_is_idempotent(p in preset(), s in state(), frac in -1.5f64..1.5) {
        let v = frac * p.write_pos_threshold;
        let once = polarize(&p, s, v).unwrap();
        prop_assert_eq!(polarize(&p, once, v).unwrap(), once);
    }

    #[test]
    fn current_monotone_in_gate_voltage(p in device(), s in state(), vds in 0.01f64..1.0) {
        let g = p.read_gate();
        let mut last = 0.0;
        for k in 0..100 {
            let vgs = -1.0 + 5.0 * k as f64 / 99.0;
            let i = drain_current(&p, s, vgs, vds, g).unwrap();
            prop_assert!(i >= last, "vgs {} gives {} < {}", vgs, i, last);
            last = i;
        }
    }

    #[test]
    fn resistance_current_duality(p in device(), s in state(), vgs in -1.0f64..4.0, vds in 0.01f64..1.0) {
        let g = p.read_gate();
        let i = drain_current(&p, s, vgs, vds, g).unwrap();
        prop_assume!(i >= fetcam::device::CURRENT_FLOOR);
        let r = effective_resistance(&p, s, Bias { v_gs: vgs, v_ds: vds }, g).unwrap();
        prop_assert!(((r * i) / vds - 1.0).abs() < 1e-6);
    }

    #[test]
    fn divider_matches_rational(vdd in 0.1f64..2.0, e_n in 3.0f64..9.0, e_p in 3.0f64..11.0, e_fe in 2.0f64..12.0, s in sbit()) {
        let div = DividerParams { vdd, r_n: 10f64.powf(e_n), r_p: 10f64.powf(e_p), ..DividerParams::default() };
        let r_fe = 10f64.powf(e_fe);
        let got = divider_voltage(s, r_fe, &div).unwrap();
        let q = |x: f64| BigRational::from_float(x).unwrap();
        let want = match s {
            SearchBit::Zero => q(vdd) * q(div.r_n) / (q(r_fe) + q(div.r_n)),
            SearchBit::One => q(vdd) * q(r_fe) / (q(r_fe) + q(div.r_p)),
        };
        prop_assert!(want > BigRational::from_integer(BigInt::from(0)));
        let rel = ((q(got) - &want) / &want).abs().to_f64().unwrap();
        prop_assert!(rel <= 1e-12, "relative error {}", rel);
    }
}

/// Resistance sets honouring the ordering with each "less than" at least a
/// decade apart, the reading under which the truth table is guaranteed.
fn decade_set() -> impl Strategy<Value = (ResistanceSet, f64)> {
    (3.0f64..5.0, 1.0f64..2.0, 1.0f64..2.0, 1.0f64..2.0, 1.0f64..3.0, 0.3f64..1.5).prop_map(
        |(e_on, g1, g2, g3, g4, vdd)| {
            let r_on = 10f64.powf(e_on);
            let r_n = r_on * 10f64.powf(g1);
            let r_m = r_n * 10f64.powf(g2);
            let r_p = r_m * 10f64.powf(g3);
            let r_off = r_p * 10f64.powf(g4);
            (ResistanceSet { r_on, r_n, r_m, r_p, r_off }, vdd)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn divider_truth_table_robust((rs, vdd) in decade_set()) {
        prop_assert_eq!(rs.first_violation(), None);
        // threshold between the worst blocking case (11x divider) and the worst conducting case
        let div = DividerParams { vdd, r_n: rs.r_n, r_p: rs.r_p, tml_vth: 0.3 * vdd, ..DividerParams::default() };
        for (stored, search, conducts) in [
            (PolarizationState::Hvt, SearchBit::Zero, false),
            (PolarizationState::Hvt, SearchBit::One, true),
            (PolarizationState::Lvt, SearchBit::Zero, true),
            (PolarizationState::Lvt, SearchBit::One, false),
            (PolarizationState::Mvt, SearchBit::Zero, false),
            (PolarizationState::Mvt, SearchBit::One, false),
        ] {
            let e = evaluate_divider(stored, search, &rs, &div).unwrap();
            prop_assert_eq!(e.tml_conducting, conducts, "{:?}/{:?}: {} V", stored, search, e.v_sl_bar);
            if stored == PolarizationState::Mvt {
                prop_assert!(e.v_sl_bar < div.tml_vth);
            }
        }
    }
}

fn array_case() -> impl Strategy<Value = (CellDesign, usize, usize, Vec<TernaryBit>, Vec<SearchBit>)> {
    (design(), 1usize..6, 1usize..5).prop_flat_map(|(d, rows, half)| {
        let cols = 2 * half;
        (
            Just(d),
            Just(rows),
            Just(cols),
            prop::collection::vec(tern(), rows * cols),
            prop::collection::vec(sbit(), cols),
        )
    })
}

fn words(flat: &[TernaryBit], cols: usize) -> Vec<Vec<TernaryBit>> {
    flat.chunks(cols).map(|c| c.to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn energy_is_additive_and_terms_nonnegative((d, rows, cols, flat, q) in array_case()) {
        let cfg = ArrayConfig::new(d, rows, cols);
        let st = array::program(&cfg, &words(&flat, cols)).unwrap().state;
        let out = array::search(&cfg, &st, &q).unwrap();
        for r in &out.rows {
            let e = r.energy;
            prop_assert!(e.precharge >= 0.0 && e.sense_amp >= 0.0 && e.divider_static >= 0.0 && e.signal_switching >= 0.0);
            let sum = e.precharge + e.sense_amp + e.divider_static + e.signal_switching;
            prop_assert!((e.total - sum).abs() <= 1e-12 * sum.abs());
        }
    }

    #[test]
    fn termination_modes_agree_on_matches((d, rows, cols, flat, q) in array_case()) {
        let mut cfg = ArrayConfig::new(d, rows, cols);
        let st = array::program(&cfg, &words(&flat, cols)).unwrap().state;
        let mut outs = Vec::new();
        for mode in [EarlyTermination::PerRow, EarlyTermination::Global, EarlyTermination::Disabled] {
            cfg.early_termination = mode;
            outs.push(array::search(&cfg, &st, &q).unwrap());
        }
        prop_assert_eq!(&outs[0].match_mask, &outs[1].match_mask);
        prop_assert_eq!(&outs[0].match_mask, &outs[2].match_mask);
        for o in &outs[..2] {
            prop_assert!(o.total_energy.total <= outs[2].total_energy.total);
        }
        // precharge is paid once per row in every mode
        let pre: Vec<f64> = outs[0].rows.iter().map(|r| r.energy.precharge).collect();
        prop_assert!(pre.windows(2).all(|w| w[0] == w[1]));
        prop_assert_eq!(outs[0].total_energy.precharge, outs[2].total_energy.precharge);
    }

    #[test]
    fn grid_round_trip((d, rows, cols, flat, _q) in array_case()) {
        let cfg = ArrayConfig::new(d, rows, cols);
        let w = words(&flat, cols);
        let text = grid::write_grid(&w);
        let back = grid::parse_grid(&text).unwrap();
        prop_assert_eq!(&back, &w);
        let a = array::program(&cfg, &w).unwrap().state;
        let b = array::program(&cfg, &back).unwrap().state;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn global_step1_miss_costs_nothing_in_step2() {
    for d in [CellDesign::OneFiveT1FeSg, CellDesign::OneFiveT1FeDg] {
        let mut cfg = ArrayConfig::new(d, 3, 8);
        // every row mismatches in column 0 (step 1)
        let rows: Vec<Vec<TernaryBit>> = ["1XXXXXXX", "10101010", "1X0X1X0X"]
            .iter()
            .map(|s| s.chars().map(|c| TernaryBit::from_char(c).unwrap()).collect())
            .collect();
        let q = vec![SearchBit::Zero; 8];
        let model = RowModel::new(d, 8, &cfg.dev, &cfg.div, &cfg.timing).unwrap();
        for mode in [EarlyTermination::PerRow, EarlyTermination::Global] {
            cfg.early_termination = mode;
            let st = array::program(&cfg, &rows).unwrap().state;
            let out = array::search(&cfg, &st, &q).unwrap();
            assert!(out.sel_b_suppressed);
            for (r, ro) in out.rows.iter().enumerate() {
                let step1 = model.energy(&rows[r], &q, 1).unwrap();
                assert_eq!(ro.energy.divider_static, step1.divider_static);
                assert_eq!(ro.energy.signal_switching, step1.signal_switching);
            }
        }
    }
}

fn oracle(row: &[TernaryBit], q: &[SearchBit]) -> bool {
    row.iter().zip(q).all(|(b, s)| match b {
        TernaryBit::DontCare => true,
        TernaryBit::Zero => *s == SearchBit::Zero,
        TernaryBit::One => *s == SearchBit::One,
    })
}

fn all_words(n: usize) -> Vec<Vec<TernaryBit>> {
    (0..3usize.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let b = TernaryBit::ALL[k % 3];
                    k /= 3;
                    b
                })
                .collect()
        })
        .collect()
}

fn all_queries(n: usize) -> Vec<Vec<SearchBit>> {
    (0..1usize << n).map(|k| (0..n).map(|i| SearchBit::ALL[(k >> i) & 1]).collect()).collect()
}

/// Every word appears in every row position, against every query, for every
/// array size up to 4x4 the design admits.
#[test]
fn small_arrays_match_oracle_exhaustively() {
    for d in CellDesign::ALL {
        for n in 1..=4usize {
            if d.is_paired() && n % 2 != 0 {
                continue;
            }
            let ws = all_words(n);
            let qs = all_queries(n);
            for m in 1..=4usize {
                let cfg = ArrayConfig::new(d, m, n);
                for start in 0..ws.len() {
                    let contents: Vec<Vec<TernaryBit>> = (0..m).map(|r| ws[(start + r) % ws.len()].clone()).collect();
                    let st = array::program(&cfg, &contents).unwrap().state;
                    for q in &qs {
                        let out = array::search(&cfg, &st, q).unwrap();
                        for (r, row) in contents.iter().enumerate() {
                            assert_eq!(out.match_mask[r], oracle(row, q), "{d} {m}x{n} row {r}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn random_64x64_arrays_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    for d in CellDesign::ALL {
        let cfg = ArrayConfig::new(d, 64, 64);
        for _ in 0..1000 {
            let contents: Vec<Vec<TernaryBit>> =
                (0..64).map(|_| (0..64).map(|_| TernaryBit::ALL[rng.gen_range(0..3)]).collect()).collect();
            let q: Vec<SearchBit> = if rng.gen::<bool>() {
                // derived from a stored word so matches occur
                contents[rng.gen_range(0..64)]
                    .iter()
                    .map(|b| match b {
                        TernaryBit::Zero => SearchBit::Zero,
                        TernaryBit::One => SearchBit::One,
                        TernaryBit::DontCare => SearchBit::ALL[rng.gen_range(0..2)],
                    })
                    .collect()
            } else {
                (0..64).map(|_| SearchBit::ALL[rng.gen_range(0..2)]).collect()
            };
            let st = array::program(&cfg, &contents).unwrap().state;
            let out = array::search(&cfg, &st, &q).unwrap();
            let want: Vec<bool> = contents.iter().map(|r| oracle(r, &q)).collect();
            assert_eq!(out.match_mask, want, "{d}");
        }
    }
}

#[test]
fn encoding_decodes_from_programmed_state() {
    for d in CellDesign::ALL {
        let cfg = ArrayConfig::new(d, 1, 6);
        let w: Vec<TernaryBit> = "01X10X".chars().map(|c| TernaryBit::from_char(c).unwrap()).collect();
        let st = array::program(&cfg, std::slice::from_ref(&w)).unwrap().state;
        for (c, b) in w.iter().enumerate() {
            let enc = st.cell(0, c);
            assert_eq!(fetcam::cell::decode(d, enc).unwrap(), *b);
            assert_eq!(matches!(enc, CellEncoding::Single(_)), d.is_paired());
        }
    }
}
