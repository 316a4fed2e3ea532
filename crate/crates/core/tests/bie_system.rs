mod common;

use axibie::bie::{assemble, assemble_with, jump_check, solve, Formulation};
use axibie::field::manufactured_case;
use axibie::geometry::Contour;
use axibie::material::{characteristic_data, validate_constants, CharacteristicData};
use axibie::Error;

fn cd() -> CharacteristicData {
    characteristic_data(&validate_constants(common::reference_constants()).unwrap()).unwrap()
}

#[test]
fn small_system_shape_and_norm() {
    let sys = assemble(&Contour::torus(2.0, 1.0).unwrap(), &cd(), 16).unwrap();
    assert_eq!(sys.matrix.shape(), (32, 32));
    assert!(sys.matrix.iter().all(|v| v.is_finite()));
    assert!(sys.compact_norm() < 10.0);
    assert!(sys.condition_number().is_finite());
}

#[test]
fn smallest_singular_value_and_condition_settle() {
    let c = Contour::torus(2.0, 1.0).unwrap();
    let smallest = |n| {
        let s = assemble(&c, &cd(), n).unwrap().singular_values();
        s.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let (a, b) = (smallest(64), smallest(256));
    assert!((a - b).abs() <= 0.1 * b, "{a} vs {b}");
    let conds: Vec<f64> = [32, 64, 128]
        .iter()
        .map(|&n| assemble(&c, &cd(), n).unwrap().condition_number())
        .collect();
    for w in conds.windows(2) {
        assert!(w[1] / w[0] < 2.0 && w[0] / w[1] < 2.0, "{conds:?}");
    }
}

#[test]
fn axis_touching_and_odd_grids_are_rejected() {
    let s = Contour::sphere(1.0).unwrap();
    assert!(matches!(assemble(&s, &cd(), 32), Err(Error::DegenerateContour(_))));
    let t = Contour::torus(2.0, 1.0).unwrap();
    assert!(assemble(&t, &cd(), 31).is_err());
    assert!(assemble(&t, &cd(), 8).is_err());
}

#[test]
fn boundary_limit_matches_the_discrete_operator_on_a_spline_contour() {
    // an egg-shaped section away from the axis, given only by samples
    let n = 96;
    let (r, z): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            (3.0 + 0.8 * t.cos() + 0.1 * (2.0 * t).cos(), 1.1 * t.sin())
        })
        .unzip();
    let c = Contour::samples(&r, &z).unwrap();
    let cd = cd();
    let case = manufactured_case((0.0, 4.0), [0.7, -1.2], &c, &cd).unwrap();
    let sys = assemble_with(&c, &cd, 128, Formulation::Derived).unwrap();
    let (g1, g2) = case.boundary_data(&sys.grid).unwrap();
    let h = solve(&sys, &g1, &g2).unwrap();
    for i in [0, 37, 90] {
        let j = jump_check(&sys, &h, i).unwrap();
        assert!(j.jump_error < 1e-6, "node {i}: {}", j.jump_error);
        assert!((j.interior_limit[0] - g1[i]).abs() < 1e-6);
        assert!((j.interior_limit[1] - g2[i]).abs() < 1e-6);
    }
    let (u, x) = (
        axibie::field::displacement(&sys.grid, &h, 3.1, 0.2).unwrap(),
        case.exact(3.1, 0.2).unwrap(),
    );
    assert!((u.u_r - x.u_r).hypot(u.u_z - x.u_z) < 1e-6 * x.u_r.hypot(x.u_z));
}
