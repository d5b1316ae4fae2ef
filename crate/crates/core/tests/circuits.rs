use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use z2_wilson::error::Error;
use z2_wilson::gauge::{Sector, Z2Model};
use z2_wilson::lattice::{rect_boundary_path, Lattice, LinkId, PlaquetteId};
use z2_wilson::statevec::{Axis, ControlBasis, PauliString, StateVector};
use z2_wilson::wilson::*;

fn random_physical(sector: &Sector, rng: &mut ChaCha8Rng) -> StateVector {
    let c = DVector::from_fn(sector.dim(), |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    sector.embed(&c.normalize()).unwrap()
}

fn max_dev(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn cross(lambda: f64) -> (Z2Model, Sector) {
    let m = Z2Model::new(Lattice::cross(), lambda).unwrap();
    let s = m.physical_sector().unwrap();
    (m, s)
}

#[test]
fn plaquette_exponential_via_ancilla_matches_direct() {
    let (model, sector) = cross(10.0);
    let lattice = model.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..50 {
        let psi = random_physical(&sector, &mut rng);
        let p = PlaquetteId(trial % 5);
        let links = lattice.plaquette(p).unwrap();
        let theta = rng.random::<f64>() * 6.0 - 3.0;
        let mut c = Circuit::new(model.n_links());
        let b = c.alloc_ancilla();
        plaquette_exp_via_ancilla(&mut c, lattice, &links, theta, b).unwrap();
        let mut full = attach_ancillas(&psi, &[Prep::Down]);
        c.apply_unitary(&mut full).unwrap();
        let mut direct = psi.clone();
        direct
            .apply_pauli_exp(&model.plaquette_string(p.0), theta)
            .unwrap();
        assert!(max_dev(&full, &attach_ancillas(&direct, &[Prep::Down])) < 1e-12);
    }
}

#[test]
fn spatial_loop_via_ancilla_matches_direct_and_restores_ancilla() {
    let (model, sector) = cross(1.0);
    let lattice = model.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let program = LoopProgram::default_staircase(lattice).unwrap();
    let Step::Spatial(links) = &program.steps[0] else {
        panic!("staircase starts with a spatial loop")
    };
    for _ in 0..10 {
        let psi = random_physical(&sector, &mut rng);
        let mut c = Circuit::new(model.n_links());
        let a = c.alloc_ancilla();
        spatial_loop_via_ancilla(&mut c, lattice, links, a).unwrap();
        let mut full = attach_ancillas(&psi, &[Prep::Minus]);
        c.apply_unitary(&mut full).unwrap();
        let mut direct = psi.clone();
        spatial_loop_direct(&mut direct, lattice, links).unwrap();
        assert!(max_dev(&full, &attach_ancillas(&direct, &[Prep::Minus])) < 1e-12);
    }
}

#[test]
fn link_and_plaquette_loops_agree_up_to_phase() {
    let model = Z2Model::new(Lattice::rect(2, 2).unwrap(), 1.0).unwrap();
    let lattice = model.lattice();
    let sector = model.physical_sector().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (w, h) in [(1, 1), (2, 1), (2, 2)] {
        let path = rect_boundary_path(lattice, 0, 0, w, h).unwrap();
        let psi = random_physical(&sector, &mut rng);

        let mut link = Circuit::new(model.n_links());
        let q = link_based_loop(&mut link, lattice, &path).unwrap();
        let mut lstate = attach_ancillas(&psi, &[Prep::Up, Prep::Down, Prep::Down]);
        let outcomes = link.run(&mut lstate, &mut rng).unwrap();
        assert_eq!(outcomes, vec![(q.closure, false)]);

        let mut plaq = Circuit::new(model.n_links());
        let a = plaq.alloc_ancilla();
        let ps = enclosed_plaquettes(lattice, &path).unwrap();
        assert_eq!(ps.len(), w * h);
        plaquette_composed_loop(&mut plaq, lattice, &ps, a).unwrap();
        let mut pstate = attach_ancillas(&psi, &[Prep::Minus]);
        plaq.apply_unitary(&mut pstate).unwrap();

        // Both equal the direct loop on the link register times a product
        // state on their ancillas.
        let mut direct = psi.clone();
        spatial_loop_direct(&mut direct, lattice, &path).unwrap();
        let matter = if path.len().is_multiple_of(2) {
            [Prep::Down, Prep::Up]
        } else {
            [Prep::Up, Prep::Down]
        };
        let l_expected = attach_ancillas(&direct, &[matter[0], matter[1], Prep::Up]);
        let p_expected = attach_ancillas(&direct, &[Prep::Minus]);
        let l_overlap = l_expected.inner(&lstate).unwrap();
        let p_overlap = p_expected.inner(&pstate).unwrap();
        assert!((l_overlap.norm() - 1.0).abs() < 1e-10);
        assert!((l_overlap - link.global_phase()).norm() < 1e-10);
        assert!((p_overlap - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }
}

#[test]
fn two_ancilla_controlled_plaquette_matches_direct_control() {
    let (model, sector) = cross(10.0);
    let lattice = model.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..20 {
        let psi = random_physical(&sector, &mut rng);
        // control in a random superposition
        let (ca, cb) = (rng.random::<f64>(), rng.random::<f64>());
        let norm = (ca * ca + cb * cb).sqrt();
        let mut amps = psi.amplitudes().iter().map(|a| a * ca / norm).collect::<Vec<_>>();
        amps.extend(psi.amplitudes().iter().map(|a| a * Complex64::new(0.0, cb / norm)));
        let with_control = StateVector::from_amplitudes(amps).unwrap();

        let p = trial % 5;
        let links = lattice.plaquette(PlaquetteId(p)).unwrap();
        let theta = rng.random::<f64>() * 4.0 - 2.0;
        let mut c = Circuit::new(model.n_links());
        let control = c.alloc_ancilla();
        let b = c.alloc_ancilla();
        controlled_plaquette_exp(&mut c, lattice, &links, theta, control, b).unwrap();
        let mut full = attach_ancillas(&with_control, &[Prep::Down]);
        c.apply_unitary(&mut full).unwrap();

        let mut direct = with_control.clone();
        direct
            .apply_controlled_pauli_exp(control, ControlBasis::ZUp, &model.plaquette_string(p), theta)
            .unwrap();
        assert!(max_dev(&full, &attach_ancillas(&direct, &[Prep::Down])) < 1e-12);
    }
}

#[test]
fn ancilla_circuit_reproduces_trotterized_loop() {
    let (model, sector) = cross(10.0);
    let gs = model.ground_state(&sector).unwrap();
    let program = LoopProgram::default_staircase(model.lattice()).unwrap();
    let n = 3;
    let (c, anc) = loop_circuit_via_ancilla(&model, &program, n).unwrap();
    let mut full = attach_ancillas(&gs.state, &[Prep::Minus, Prep::Down]);
    c.apply_unitary(&mut full).unwrap();

    let w = compose_loop(&model, &sector, &program, Mode::Trotter(n)).unwrap();
    let expected = attach_ancillas(&sector.embed(&w.apply(&gs.coefficients)).unwrap(), &[Prep::Minus, Prep::Down]);
    assert!(max_dev(&full, &expected) < 1e-11);
    assert!((full.qubit_purity(anc.spatial) - 1.0).abs() < 1e-10);
    assert!((full.qubit_purity(anc.plaquette) - 1.0).abs() < 1e-10);
    assert!(full.prob_one(anc.plaquette) > 1.0 - 1e-10);
}

#[test]
fn trotterized_programs_stay_gauge_invariant() {
    let (model, sector) = cross(10.0);
    let gs = model.ground_state(&sector).unwrap();
    let lattice = model.lattice();
    let programs = [
        LoopProgram::default_staircase(lattice).unwrap(),
        LoopProgram::staircase(lattice, 1, 0, 3, 0.4).unwrap(),
        LoopProgram::new(vec![Step::FreeEvolve { tau: 0.7 }]),
    ];
    for program in &programs {
        let c = loop_circuit(&model, program, 9).unwrap();
        let mut sv = gs.state.clone();
        c.apply_unitary(&mut sv).unwrap();
        assert!(model.gauge_violation(&sv).unwrap() < 1e-10);
        let check = check_gauge_invariance(&c, &model);
        assert!(check.passed());
        assert_eq!(check.gates_checked, c.gates().len());

        let (ac, _) = loop_circuit_via_ancilla(&model, program, 2).unwrap();
        assert!(check_gauge_invariance(&ac, &model).passed());
        let mut cc = Circuit::new(model.n_links());
        let control = cc.alloc_ancilla();
        let b = cc.alloc_ancilla();
        controlled_loop(&mut cc, &model, program, control, b, 2).unwrap();
        assert!(check_gauge_invariance(&cc, &model).passed());
    }

    let mut link = Circuit::new(model.n_links());
    let path = lattice.plaquette(PlaquetteId(2)).unwrap();
    link_based_loop(&mut link, lattice, &path).unwrap();
    let check = check_gauge_invariance(&link, &model);
    assert!(check.passed());
    assert!(check.via_block > 0);
}

#[test]
fn symbolic_check_flags_a_lone_sigma3() {
    let (model, _) = cross(1.0);
    let mut c = Circuit::new(model.n_links());
    c.push(Gate::pexp(PauliString::single(4, Axis::Z), 0.3));
    c.push(Gate::pexp(PauliString::single(4, Axis::X), 0.3));
    let check = check_gauge_invariance(&c, &model);
    assert_eq!(check.violations, vec![0]);
}

#[test]
fn hadamard_test_matches_sector_oracle() {
    let (model, sector) = cross(10.0);
    let gs = model.ground_state(&sector).unwrap();
    let program = LoopProgram::default_staircase(model.lattice()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let random = random_physical(&sector, &mut rng);
    let random_coeffs = sector.project(&random).unwrap();
    for (psi, coeffs) in [(&gs.state, &gs.coefficients), (&random, &random_coeffs)] {
        for n in [1, 4] {
            let w = compose_loop(&model, &sector, &program, Mode::Trotter(n)).unwrap();
            let re = coeffs.dotc(&w.apply(coeffs)).re;
            let out = hadamard_test(psi, &model, &program, n, Shots::Exact, &mut rng).unwrap();
            assert!((out.p_plus - (2.0 + 2.0 * re) / 4.0).abs() < 1e-10);
            assert!(out.sampled.is_none());
        }
    }
}

#[test]
fn hadamard_sampling_and_identity() {
    let (model, sector) = cross(10.0);
    let gs = model.ground_state(&sector).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let id = hadamard_test(&gs.state, &model, &LoopProgram::default(), 3, Shots::Count(100), &mut rng).unwrap();
    assert!((id.p_plus - 1.0).abs() < 1e-12);
    assert_eq!(id.sampled, Some((1.0, 0.0, 100)));

    let program = LoopProgram::default_staircase(model.lattice()).unwrap();
    let shots = 10_000;
    let out = hadamard_test(&gs.state, &model, &program, 9, Shots::Count(shots), &mut rng).unwrap();
    let (est, _, _) = out.sampled.unwrap();
    let p = out.p_plus;
    assert!((est - p).abs() <= 5.0 * (p * (1.0 - p) / shots as f64).sqrt());

    // replayable from the seed
    let again = |seed| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        hadamard_test(&gs.state, &model, &program, 9, Shots::Count(500), &mut r)
            .unwrap()
            .sampled
    };
    assert_eq!(again(11), again(11));
}

#[test]
fn closure_is_certain_after_a_closed_loop_and_impossible_otherwise() {
    let (model, sector) = cross(10.0);
    let gs = model.ground_state(&sector).unwrap();
    let lattice = model.lattice();
    let path = lattice.plaquette(PlaquetteId(0)).unwrap();

    let mut c = Circuit::new(model.n_links());
    let q = link_based_loop(&mut c, lattice, &path).unwrap();
    let unitary: Vec<Gate> = c.gates().iter().filter(|g| g.pauli().is_some()).cloned().collect();
    let mut u = Circuit::new(model.n_links());
    for _ in 0..3 {
        u.alloc_ancilla();
    }
    for g in unitary {
        u.push(g);
    }
    // resets act on qubits already in |down>, so the unitary part suffices
    let mut sv = attach_ancillas(&gs.state, &[Prep::Up, Prep::Down, Prep::Down]);
    u.apply_unitary(&mut sv).unwrap();
    let p_up = 1.0 - sv.prob_one(q.closure);
    assert!((p_up - 1.0).abs() < 1e-10);

    // matter never created: closure cannot fire
    let mut c = Circuit::new(model.n_links());
    let head = c.alloc_ancilla();
    let tail = c.alloc_ancilla();
    let closure = c.alloc_ancilla();
    link_loop_closure(&mut c, head, tail, closure).unwrap();
    let mut u = Circuit::new(model.n_links());
    for _ in 0..3 {
        u.alloc_ancilla();
    }
    for g in c.gates().iter().filter(|g| g.pauli().is_some()) {
        u.push(g.clone());
    }
    let mut sv = attach_ancillas(&gs.state, &[Prep::Down, Prep::Down, Prep::Down]);
    u.apply_unitary(&mut sv).unwrap();
    let p_up = 1.0 - sv.prob_one(closure);
    assert!(p_up.abs() < 1e-10);
}

#[test]
fn circuits_from_text_reproduce_the_state() {
    let (model, _) = cross(10.0);
    let program = LoopProgram::default_staircase(model.lattice()).unwrap();
    let c = loop_circuit(&model, &program, 2).unwrap();
    let back = Circuit::from_text(model.n_links(), &c.to_text()).unwrap();
    let mut a = StateVector::basis_index(16, 0);
    let mut b = a.clone();
    c.apply_unitary(&mut a).unwrap();
    back.apply_unitary(&mut b).unwrap();
    assert!(max_dev(&a, &b) < 1e-14);
    assert!(c.apply_unitary(&mut StateVector::zero(3)).is_err());
}

/// Least-squares fit `y ~ sum_k c_k f_k(x)`; returns the largest relative
/// residual.
fn fit_residual(xs: &[f64], ys: &[f64], basis: &[fn(f64) -> f64]) -> (Vec<f64>, f64) {
    let a = nalgebra::DMatrix::from_fn(xs.len(), basis.len(), |i, k| basis[k](xs[i]));
    let y = DVector::from_column_slice(ys);
    let coef = (a.transpose() * &a).lu().solve(&(a.transpose() * &y)).unwrap();
    let fit = &a * &coef;
    let worst = (0..ys.len())
        .map(|i| ((fit[i] - ys[i]) / ys[i]).abs())
        .fold(0.0, f64::max);
    (coef.iter().copied().collect(), worst)
}

#[test]
fn gate_counts_scale_with_area_and_perimeter() {
    let mut ls = Vec::new();
    let mut plaq_counts = Vec::new();
    let mut link_counts = Vec::new();
    for side in 1..=4 {
        let lattice = Lattice::rect(side, side).unwrap();
        let path = rect_boundary_path(&lattice, 0, 0, side, side).unwrap();
        let mut p = Circuit::new(lattice.n_links());
        let a = p.alloc_ancilla();
        let ps = enclosed_plaquettes(&lattice, &path).unwrap();
        plaquette_composed_loop(&mut p, &lattice, &ps, a).unwrap();
        let mut l = Circuit::new(lattice.n_links());
        link_based_loop(&mut l, &lattice, &path).unwrap();
        ls.push(path.len() as f64);
        plaq_counts.push(p.census().total() as f64);
        link_counts.push(l.census().total() as f64);
    }
    assert_eq!(ls, vec![4.0, 8.0, 12.0, 16.0]);
    let (coef, res) = fit_residual(&ls, &plaq_counts, &[|x| x * x, |x| x]);
    assert!(coef[0] > 0.0 && res < 0.02);
    let (_, res) = fit_residual(&ls, &link_counts, &[|x| x, |_| 1.0]);
    assert!(res < 0.02);
    let (_, linear_res) = fit_residual(&ls, &plaq_counts, &[|x| x, |_| 1.0]);
    assert!(linear_res > 0.02);
}

#[test]
fn construction_errors() {
    let (model, _) = cross(1.0);
    let lattice = model.lattice();
    let mut c = Circuit::new(model.n_links());
    let a = c.alloc_ancilla();
    let plaq = lattice.plaquette(PlaquetteId(0)).unwrap();
    assert_eq!(
        controlled_plaquette_exp(&mut c, lattice, &plaq, 0.1, a, a),
        Err(Error::AncillaCollision(a))
    );
    assert_eq!(
        plaquette_exp_via_ancilla(&mut c, lattice, &plaq, 0.1, 3),
        Err(Error::AncillaUnavailable(3))
    );
    assert!(matches!(
        spatial_loop_via_ancilla(&mut c, lattice, &[LinkId(99)], a),
        Err(Error::InvalidLink(99))
    ));
    assert!(matches!(
        link_based_loop(&mut c, lattice, &[LinkId(0), LinkId(2)]),
        Err(Error::InvalidProgram(_))
    ));
    let open = LoopProgram::new(vec![Step::Spatial(vec![LinkId(0)])]);
    assert!(loop_circuit(&model, &open, 1).is_err());
}
