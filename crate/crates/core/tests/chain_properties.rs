use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use simon_anneal::exact::{enumerate_spectrum, solve_chain_dp};
use simon_anneal::oracle::{is_oracle_valid, OracleSpec};
use simon_anneal::penalty::PenaltyConfig;
use simon_anneal::qubo::{build_qubo, QuboDocument};
use simon_anneal::Error;

fn penalties_with_zeros(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| f64::from(rng.gen_range(-2i32..=2))).collect()
}

// Ground degeneracy doubles with every zero penalty.
#[test]
fn degeneracy_doubles_per_zero_penalty() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=7 {
        for _ in 0..20 {
            let p = penalties_with_zeros(&mut rng, n - 1);
            let zeros = p.iter().filter(|&&v| v == 0.0).count() as u32;
            let expected_energy: f64 = p.iter().filter(|&&v| v < 0.0).sum();
            let spec = OracleSpec::new(n).unwrap();
            let m = build_qubo(&spec, &PenaltyConfig::explicit(&spec, p).unwrap()).unwrap();
            let report = enumerate_spectrum(&m, &spec, 24).unwrap();
            let ground = report.ground();
            assert_eq!(ground.energy, expected_energy);
            assert_eq!(ground.states.len(), 1 << (zeros + 1));
            assert_eq!(report.valid_count(ground), ground.states.len());

            let dp = solve_chain_dp(&m, &spec, 1 << 16).unwrap();
            assert_eq!(dp.degeneracy, 1u128 << (zeros + 1));
        }
    }
}

#[test]
fn every_valid_state_sits_at_its_penalty_energy() {
    let spec = OracleSpec::new(6).unwrap();
    let p = PenaltyConfig::explicit(&spec, vec![2.0, -1.0, 0.5, -3.0, 1.0]).unwrap();
    let m = build_qubo(&spec, &p).unwrap();
    for x in 0u32..64 {
        let input: Vec<u8> = (0..6).map(|k| ((x >> k) & 1) as u8).collect();
        let a = spec.valid_assignment(&input).unwrap();
        assert!(is_oracle_valid(&spec, &a).unwrap());
        let expected: f64 = a.outputs(&spec).iter().zip(p.values()).map(|(&o, &v)| f64::from(o) * v).sum();
        assert_eq!(m.energy(&a).unwrap(), expected);
    }
}

#[test]
fn huge_degeneracy_is_refused_but_counted() {
    let spec = OracleSpec::new(40).unwrap();
    let m = build_qubo(&spec, &PenaltyConfig::zero(&spec)).unwrap();
    match solve_chain_dp(&m, &spec, 1 << 16) {
        Err(Error::DegeneracyTooLarge { count, .. }) => assert_eq!(count, 1u128 << 40),
        other => panic!("expected DegeneracyTooLarge, got {other:?}"),
    }
}

// Generous bound: a linear-time solver should not grow much beyond 10x per
// 10x in n; a quadratic one would grow about 100x.
#[test]
fn chain_dp_scales_linearly() {
    let time = |n: usize| {
        let spec = OracleSpec::new(n).unwrap();
        let m = build_qubo(&spec, &PenaltyConfig::balanced(&spec, 2.0).unwrap()).unwrap();
        let mut best = f64::INFINITY;
        for _ in 0..5 {
            let start = Instant::now();
            solve_chain_dp(&m, &spec, 16).unwrap();
            best = best.min(start.elapsed().as_secs_f64());
        }
        best
    };
    let t100 = time(100);
    let t1000 = time(1000);
    let t10000 = time(10_000);
    assert!(t10000 / t1000 < 30.0, "1000 -> 10000: {t1000} -> {t10000}");
    assert!(t1000 < t100 * 30.0 + 1e-3, "100 -> 1000: {t100} -> {t1000}");
}

#[test]
fn document_round_trip_preserves_ground_solution() {
    let spec = OracleSpec::new(9).unwrap();
    let p = PenaltyConfig::random(&spec, 2.0, 77).unwrap();
    let m = build_qubo(&spec, &p).unwrap();
    let json = QuboDocument::new(&spec, &p, &m).to_json().unwrap();
    let (spec2, _, m2) = QuboDocument::from_json(&json).unwrap().to_parts().unwrap();
    assert_eq!(spec2, spec);
    let a = solve_chain_dp(&m, &spec, 16).unwrap();
    let b = solve_chain_dp(&m2, &spec2, 16).unwrap();
    assert_eq!(a.ground_energy, b.ground_energy);
    assert_eq!(a.ground_states, b.ground_states);
}
