mod common;

use num_complex::Complex64;
use qsearch::{QState, SearchProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn single_qubit_diffusion_maps_zero_to_one() {
    let d = common::diffusion(1);
    let v = common::matvec(&d, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    assert!((v[0]).norm() < 1e-12);
    assert!((v[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);

    let mut s = QState::basis(1, 0).unwrap();
    s.apply_diffusion();
    assert!(common::max_deviation(s.amplitudes(), &v) < 1e-12);
}

#[test]
fn four_by_four_grover_step() {
    let h = common::hadamard(2);
    let start = common::matvec(&h, &[1.0, 0.0, 0.0, 0.0].map(|x| Complex64::new(x, 0.0)));
    let g = common::matmul(&common::diffusion(2), &common::oracle(2, &[2]));
    let after = common::matvec(&g, &start);
    let expected = [0.0, 0.0, 1.0, 0.0].map(|x| Complex64::new(x, 0.0));
    assert!(common::max_deviation(&after, &expected) < 1e-12);

    let problem = SearchProblem::new(2, [2]).unwrap();
    let mut s = QState::uniform(2).unwrap();
    s.grover_iteration(&problem).unwrap();
    assert!(common::max_deviation(s.amplitudes(), &after) < 1e-12);
}

#[test]
fn uniform_prep_matches_hadamard_layer() {
    for n in 1..=6 {
        let size = 1usize << n;
        let mut zero = vec![Complex64::new(0.0, 0.0); size];
        zero[0] = Complex64::new(1.0, 0.0);
        let dense = common::matvec(&common::hadamard(n), &zero);
        assert!(common::max_deviation(QState::uniform(n).unwrap().amplitudes(), &dense) < 1e-12);
    }
}

#[test]
fn fast_iteration_matches_dense_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 1..=6u32 {
        let d = common::diffusion(n);
        for _ in 0..5 {
            let size = 1usize << n;
            let m = rng.gen_range(0..=size);
            let problem = SearchProblem::random(n, m, &mut rng).unwrap();
            let o = common::oracle(n, problem.solutions());
            let amps = (0..size).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let mut fast = QState::normalized(amps).unwrap();
            let mut dense = fast.amplitudes().to_vec();
            for _ in 0..4 {
                fast.grover_iteration(&problem).unwrap();
                dense = common::matvec(&d, &common::matvec(&o, &dense));
                assert!(common::max_deviation(fast.amplitudes(), &dense) <= 1e-10);
            }
        }
    }
}
