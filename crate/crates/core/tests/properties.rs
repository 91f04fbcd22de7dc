use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;

use ringqec::circuit::{AncillaMode, Circuit, GateKind};
use ringqec::decoder::{detection_events, min_weight_perfect_matching, Decoder, SyndromeRecord, DEFAULT_P};
use ringqec::density::noise::{noisy_gate, NoiseParams, NoisyGate};
use ringqec::density::DensityMatrix;
use ringqec::harness::{read_csv, write_csv, ResultRow};
use ringqec::pauli::{Pauli, PauliString, StabilizerCode};
use ringqec::synth::{synthesize, Scheme};
use ringqec::tableau::{logical_operators, prepare_circuit_state, run_circuit, Injection};

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(pauli(), n).prop_map(PauliString::new)
}

fn symplectic_commute(a: &PauliString, b: &PauliString) -> bool {
    let odd = a
        .letters()
        .iter()
        .zip(b.letters())
        .filter(|(x, y)| (x.x_bit() && y.z_bit()) ^ (x.z_bit() && y.x_bit()))
        .count();
    odd % 2 == 0
}

proptest! {
    #[test]
    fn multiplication_is_associative(a in pauli_string(5), b in pauli_string(5), c in pauli_string(5)) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn commutation_matches_symplectic_form(a in pauli_string(6), b in pauli_string(6)) {
        let c = a.commutes(&b).unwrap();
        prop_assert_eq!(c, b.commutes(&a).unwrap());
        prop_assert_eq!(c, symplectic_commute(&a, &b));
        // commuting strings give equal products in either order
        let (ab, ba) = (a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
        prop_assert_eq!(ab == ba, c);
    }

    #[test]
    fn noisy_gates_keep_states_physical(
        p2 in 0.0f64..0.2,
        pm in 0.0f64..0.2,
        flip in any::<bool>(),
        amps in prop::collection::vec(-1.0f64..1.0, 16),
        gates in prop::collection::vec(0usize..4, 1..12),
    ) {
        let mut psi: Vec<Complex64> = amps.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        psi.iter_mut().for_each(|c| *c /= norm);
        let mut rho = DensityMatrix::from_pure(&psi).unwrap();
        let mut params = NoiseParams::reference(p2);
        params.pm = pm;
        params.measurement_flip_on_gates = flip;
        for g in gates {
            let (kind, slots) = match g {
                0 => (GateKind::H, vec![0]),
                1 => (GateKind::Id { long: true }, vec![2]),
                2 => (GateKind::Cns, vec![0, 1]),
                _ => (GateKind::Cnot, vec![2, 1]),
            };
            let tau = params.slice_duration(slots.len() == 2);
            let NoisyGate::Unitary(s) = noisy_gate(&kind, &slots, tau, &params).unwrap() else { unreachable!() };
            rho.apply_superop(&s, &slots);
        }
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-9);
        prop_assert!(rho.is_valid(1e-9));
    }

    #[test]
    fn matcher_is_optimal_on_small_graphs(
        n in (1usize..=4).prop_map(|k| 2 * k),
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut w = vec![vec![None; n]; n];
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.7) {
                    let x = rng.random_range(0..20i64);
                    w[i][j] = Some(x);
                    edges.push((i, j, x));
                }
            }
        }
        fn best(w: &[Vec<Option<i64>>], left: &[usize]) -> Option<i64> {
            let Some((&i, rest)) = left.split_first() else { return Some(0) };
            rest.iter()
                .enumerate()
                .filter_map(|(k, &j)| {
                    let d = w[i.min(j)][i.max(j)]?;
                    let others: Vec<usize> = rest.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &x)| x).collect();
                    Some(d + best(w, &others)?)
                })
                .min()
        }
        let want = best(&w, &(0..n).collect::<Vec<_>>());
        let got = min_weight_perfect_matching(n, &edges);
        prop_assert_eq!(got.as_ref().map(|g| g.0), want);
        if let Some((total, pairs)) = got {
            prop_assert_eq!(pairs.len(), n / 2);
            let sum: i64 = pairs.iter().map(|&(a, b)| w[a.min(b)][a.max(b)].unwrap()).sum();
            prop_assert_eq!(sum, total);
        }
    }

    #[test]
    fn csv_round_trip(
        rows in prop::collection::vec(
            (1usize..20, 0.0f64..0.1, 0.0f64..=1.0, 0.0f64..0.1, 0.0f64..=1.0, 0.0f64..0.1, 1usize..5000, any::<u64>()),
            1..10,
        )
    ) {
        let rows: Vec<ResultRow> = rows
            .into_iter()
            .map(|(cycles, p2, fid_raw, fid_raw_err, fid_corr, fid_corr_err, shots, seed)| ResultRow {
                cycles, p2, fid_raw, fid_raw_err, fid_corr, fid_corr_err, shots, seed,
            })
            .collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        prop_assert_eq!(read_csv(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn circuit_text_round_trip(code in 0usize..3, scheme in 0usize..2, reinit in any::<bool>(), cycles in 1usize..4) {
        let code = [StabilizerCode::rep3(), StabilizerCode::rep5(), StabilizerCode::laflamme5()][code].clone();
        let scheme = [Scheme::ForwardBackward, Scheme::HalfCycle][scheme];
        let mode = if reinit { AncillaMode::Reinit } else { AncillaMode::Qnd };
        if let Ok(c) = synthesize(&code, scheme, mode, cycles) {
            let back = Circuit::parse_text(&c.to_text()).unwrap();
            prop_assert_eq!(back.to_text(), c.to_text());
        }
    }

    #[test]
    fn quiet_records_have_no_detections(cycles in 1usize..5, reinit in any::<bool>()) {
        let mode = if reinit { AncillaMode::Reinit } else { AncillaMode::Qnd };
        let c = synthesize(&StabilizerCode::laflamme5(), Scheme::ForwardBackward, mode, cycles).unwrap();
        let r = SyndromeRecord::from_outcomes(&c, &vec![false; c.schedule.len()]);
        prop_assert!(detection_events(&r).unwrap().is_empty());
    }

    #[test]
    fn any_single_data_error_is_decoded(q in 0usize..5, p in 1usize..4, step in 1usize..9) {
        let letter = Pauli::NONTRIVIAL[p - 1];
        let code = StabilizerCode::laflamme5();
        let c = synthesize(&code, Scheme::ForwardBackward, AncillaMode::Qnd, 2).unwrap();
        let dec = Decoder::for_circuit(&c, c.schedule.len(), DEFAULT_P).unwrap();
        let (slice, slot) = c.injection_point(q, step).unwrap();
        let mut t = prepare_circuit_state(&c, &code, &logical_operators(&code)[..1]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let out = run_circuit(&c, &mut t, &[Injection { slice, slot, pauli: letter }], &mut rng).unwrap();
        let raw: Vec<bool> = out.iter().map(|o| o.0).collect();
        let d = dec.decode(&SyndromeRecord::from_outcomes(&c, &raw)).unwrap();
        prop_assert_eq!(d.correction.letters(), vec![(q, letter)]);
    }
}
