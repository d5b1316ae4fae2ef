//! Independent dense oracles shared by the integration tests. Oracle
//! matrices never come from the library: they are built from explicit
//! Kronecker products and exponentiated by scaling and squaring.

#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use z2_wilson::gauge::Z2Model;
use z2_wilson::lattice::{Lattice, LinkId, VertexId};
use z2_wilson::wilson::{compose_loop, LoopProgram, Mode, Step};
pub use num_complex::Complex64 as C;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);
pub const I: C = C::new(0.0, 1.0);

pub fn pauli2(axis: char) -> DMatrix<C> {
    match axis {
        'I' => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        'X' => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        'Y' => DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        'Z' => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        // |up><down| with up = basis state 0
        '+' => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]),
        '-' => DMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO]),
        _ => panic!("unknown axis {axis}"),
    }
}

/// Dense operator on `n` qubits, qubit 0 the least significant index bit.
pub fn dense(n: usize, ops: &[(usize, char)]) -> DMatrix<C> {
    let mut m = DMatrix::from_element(1, 1, ONE);
    for q in (0..n).rev() {
        let f = ops
            .iter()
            .filter(|(k, _)| *k == q)
            .fold(pauli2('I'), |acc, (_, a)| acc * pauli2(*a));
        m = m.kronecker(&f);
    }
    m
}

/// `exp(-i t h)` by Taylor series with scaling and squaring.
pub fn expm(h: &DMatrix<C>, t: f64) -> DMatrix<C> {
    let a = h * C::new(0.0, -t);
    let norm: f64 = a.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    let s = (norm / 0.25).log2().ceil().max(0.0) as i32;
    let a = a / C::new(2f64.powi(s), 0.0);
    let n = h.nrows();
    let mut term = DMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / C::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Lowest eigenpair of a Hermitian matrix by shifted power iteration.
pub fn ground(h: &DMatrix<C>) -> (f64, DVector<C>) {
    let n = h.nrows();
    let bound: f64 = (0..n)
        .map(|i| (0..n).map(|j| h[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let shifted = DMatrix::identity(n, n) * C::new(bound, 0.0) - h;
    let mut v = DVector::from_fn(n, |i, _| C::new(1.0 + 0.01 * i as f64, 0.003 * i as f64)).normalize();
    // Run well past the point where successive iterates agree to 1e-14.
    let mut extra = None;
    for _ in 0..1_000_000 {
        let next = (&shifted * &v).normalize();
        let moved = (&next - &v).norm();
        v = next;
        match extra {
            None if moved < 1e-14 => extra = Some(2000),
            Some(0) => break,
            Some(k) => extra = Some(k - 1),
            None => {}
        }
    }
    let e = v.dotc(&(h * &v)).re;
    (e, v)
}

pub fn op_fidelity(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a.adjoint() * b).trace().norm() / a.nrows() as f64
}

pub fn state_fidelity(psi: &DVector<C>, a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a * psi).dotc(&(b * psi)).norm()
}

/// The cross sector written in plaquette variables: a five-spin
/// transverse-field model with `H = -sum_l c_l prod_{p ∋ l} Z_p - lambda sum_p X_p`.
pub struct DualCross {
    pub lambda: f64,
}

/// Plaquettes of the cross as link lists: bottom arm, left, centre, right, top.
pub const CROSS_PLAQUETTES: [[usize; 4]; 5] = [
    [0, 2, 4, 1],
    [3, 7, 10, 6],
    [4, 8, 11, 7],
    [5, 9, 12, 8],
    [11, 14, 15, 13],
];

impl DualCross {
    fn electric(&self, modified: &[usize]) -> DMatrix<C> {
        let mut h = DMatrix::zeros(32, 32);
        for l in 0..16 {
            let c = if modified.contains(&l) { -1.0 } else { 1.0 };
            let ops: Vec<(usize, char)> = (0..5)
                .filter(|&p| CROSS_PLAQUETTES[p].contains(&l))
                .map(|p| (p, 'Z'))
                .collect();
            h -= dense(5, &ops) * C::new(c, 0.0);
        }
        h
    }

    fn magnetic(&self) -> DMatrix<C> {
        let mut h = DMatrix::zeros(32, 32);
        for p in 0..5 {
            h -= dense(5, &[(p, 'X')]) * C::new(self.lambda, 0.0);
        }
        h
    }

    pub fn hamiltonian(&self, modified: &[usize]) -> DMatrix<C> {
        self.electric(modified) + self.magnetic()
    }

    pub fn loop_x(&self, p: usize) -> DMatrix<C> {
        dense(5, &[(p, 'X')])
    }

    pub fn trotter(&self, tau: f64, n: usize, modified: &[usize]) -> DMatrix<C> {
        let dt = tau / n as f64;
        let half = expm(&self.electric(modified), dt / 2.0);
        let mag = expm(&self.magnetic(), dt);
        let step = &half * &mag * &half;
        (0..n).fold(DMatrix::identity(32, 32), |acc, _| &step * acc)
    }

    /// The default two-slice staircase: plaquette 0, evolve with link 4
    /// modified, plaquette 2, evolve with link 11 modified.
    pub fn staircase(&self, n_steps: Option<usize>) -> DMatrix<C> {
        let evolve = |mods: &[usize]| match n_steps {
            None => expm(&self.hamiltonian(mods), 1.0),
            Some(n) => self.trotter(1.0, n, mods),
        };
        evolve(&[11]) * self.loop_x(2) * evolve(&[4]) * self.loop_x(0)
    }
}

// Single plaquette: links 0 bottom, 1 left, 2 right, 3 top.
pub const RECT_STARS: [[usize; 2]; 4] = [[0, 1], [0, 2], [1, 3], [2, 3]];

pub fn rect_h(lambda: f64, electric_mods: &[usize], magnetic: bool) -> DMatrix<C> {
    let mut h = DMatrix::zeros(16, 16);
    for l in 0..4 {
        let c = if electric_mods.contains(&l) { 1.0 } else { -1.0 };
        h += dense(4, &[(l, 'X')]) * C::new(c, 0.0);
    }
    if magnetic {
        h -= dense(4, &[(0, 'Z'), (1, 'Z'), (2, 'Z'), (3, 'Z')]) * C::new(lambda, 0.0);
    }
    h
}

pub fn rect_trotter(lambda: f64, tau: f64, n: usize, mods: &[usize]) -> DMatrix<C> {
    let dt = tau / n as f64;
    let half = expm(&rect_h(lambda, mods, false), dt / 2.0);
    let mag = expm(&(rect_h(lambda, &[], true) - rect_h(lambda, &[], false)), dt);
    let step = &half * mag * &half;
    (0..n).fold(DMatrix::identity(16, 16), |acc, _| &step * acc)
}

/// Largest deviation between library and full-space dense results on the
/// single-plaquette lattice at `lambda = 10`: ground energy (also against
/// the closed form) and both fidelities of a two-slice loop for each `n_T`.
pub fn single_plaquette_deviation(steps: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    let lattice = Lattice::rect(1, 1).unwrap();
    for (v, star) in RECT_STARS.iter().enumerate() {
        let got: BTreeSet<usize> = lattice.star(VertexId(v)).unwrap().iter().copied().collect();
        assert_eq!(got, star.iter().copied().collect());
    }
    let lambda = 10.0;
    let model = Z2Model::new(lattice, lambda).unwrap();
    let sector = model.physical_sector().unwrap();
    let gs = model.ground_state(&sector).unwrap();

    let stars: Vec<DMatrix<C>> = RECT_STARS
        .iter()
        .map(|s| dense(4, &[(s[0], 'X'), (s[1], 'X')]))
        .collect();
    let id = DMatrix::<C>::identity(16, 16);
    let projector = stars
        .iter()
        .fold(id.clone(), |p, g| p * (&id + g) * C::new(0.5, 0.0));
    let penalty = stars
        .iter()
        .fold(DMatrix::zeros(16, 16), |acc, g| acc + (&id - g) * C::new(10.0, 0.0));
    let (e, psi) = ground(&(rect_h(lambda, &[], true) + penalty));
    worst = worst.max((e - gs.energy).abs());
    worst = worst.max((e + (16.0f64 + lambda * lambda).sqrt()).abs());

    let plaq = dense(4, &[(0, 'Z'), (1, 'Z'), (2, 'Z'), (3, 'Z')]);
    let program = LoopProgram::new(vec![
        Step::Spatial(vec![LinkId(0), LinkId(2), LinkId(3), LinkId(1)]),
        Step::Temporal {
            tau: 1.0,
            modified: vec![LinkId(3)],
        },
        Step::Spatial(vec![LinkId(0), LinkId(2), LinkId(3), LinkId(1)]),
        Step::Temporal {
            tau: 0.5,
            modified: vec![LinkId(2)],
        },
    ]);
    let exact_full = expm(&rect_h(lambda, &[2], true), 0.5) * &plaq * expm(&rect_h(lambda, &[3], true), 1.0) * &plaq;
    let exact = compose_loop(&model, &sector, &program, Mode::Exact).unwrap();
    for &n in steps {
        let trot_full = rect_trotter(lambda, 0.5, n, &[2]) * &plaq * rect_trotter(lambda, 1.0, n, &[3]) * &plaq;
        let full_op = (&projector * exact_full.adjoint() * &trot_full).trace().norm() / projector.trace().re;
        let full_state = state_fidelity(&psi, &exact_full, &trot_full);

        let trot = compose_loop(&model, &sector, &program, Mode::Trotter(n)).unwrap();
        let lib_op = z2_wilson::trotter::operator_fidelity(&exact, &trot).unwrap();
        let lib_state = z2_wilson::trotter::state_fidelity(&gs.coefficients, &exact, &trot).unwrap();
        worst = worst.max((full_op - lib_op).abs());
        worst = worst.max((full_state - lib_state).abs());
    }
    worst
}
