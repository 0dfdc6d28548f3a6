#[path = "support/fd_oracle.rs"]
mod fd_oracle;

use dwell_core::eigensolver::{iswp_state, solve_spectrum};
use dwell_core::potentials::{DswpParams, IswpParams, PhysicalConstants, JOULE_PER_EV};
use fd_oracle::{cell_average, fd_levels, Tridiagonal};

fn hbar2_2m(c: &PhysicalConstants) -> f64 {
    c.hbar * c.hbar / (2.0 * c.particle_mass) / JOULE_PER_EV * 1e20
}

#[test]
fn cell_average_is_exact() {
    let (v0, v1, l0, l1) = (0.5, 0.25, 0.672, 0.128);
    assert_eq!(cell_average(v0, v1, l0, l1, 0.8, 0.9), 0.0);
    assert_eq!(cell_average(v0, v1, l0, l1, 0.2, 0.3), -0.5);
    assert_eq!(cell_average(v0, v1, l0, l1, -0.1, 0.1), -0.25);
    // half barrier, half well
    assert!((cell_average(v0, v1, l0, l1, 0.028, 0.228) + 0.375).abs() < 1e-15);
}

#[test]
fn sturm_count_on_a_known_spectrum() {
    // eigenvalues of tridiag(-1, 2, -1) are 2 - 2 cos(jπ/(n+1))
    let n = 50;
    let m = Tridiagonal { diag: vec![2.0; n], off: -1.0 };
    for j in 1..=5 {
        let exact = 2.0 - 2.0 * (j as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
        assert!((m.eigenvalue(j - 1, -1.0, 5.0, 1e-14) - exact).abs() < 1e-12);
    }
    assert_eq!(m.count_below(4.1), n);
}

#[test]
fn finite_differences_agree_with_matching_roots() {
    let p = DswpParams::default();
    let c = PhysicalConstants::default();
    let states = solve_spectrum(&p, &c).unwrap();
    let fd = fd_levels(hbar2_2m(&c), [p.v0, p.v1, p.l0, p.l1], 1.3, 20_000, 4);
    for (s, e) in states.iter().zip(&fd) {
        assert!((s.energy - e).abs() < 1e-6, "{}: {} vs {}", s.label(), s.energy, e);
    }
    // the tiny doublet splitting survives the discretization
    let split = |a: f64, b: f64| b - a;
    assert!((split(fd[0], fd[1]) - split(states[0].energy, states[1].energy)).abs() < 1e-7);
}

#[test]
fn finite_differences_recover_the_box() {
    // kinetic part alone on [0, L] is the infinite well
    let c = PhysicalConstants::default();
    let n = 8000;
    let width = 1.344;
    let h = width / (n + 1) as f64;
    let t = hbar2_2m(&c) / (h * h);
    let m = Tridiagonal { diag: vec![2.0 * t; n], off: -t };
    let box_state = iswp_state(&IswpParams { width }, &c, 1).unwrap();
    let e1 = m.eigenvalue(0, 0.0, 1.0, 1e-14);
    assert!((e1 / box_state.energy - 1.0).abs() < 1e-6, "{e1} vs {}", box_state.energy);
}
