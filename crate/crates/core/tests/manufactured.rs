mod common;

use axibie::bie::{assemble_with, solve, Formulation};
use axibie::field::{displacement_with, manufactured_case};
use axibie::geometry::Contour;
use axibie::material::{characteristic_data, validate_constants};

use common::{reference_constants, torus_probes};

fn max_error(form: Formulation, n: usize, pole: (f64, f64), coeffs: [f64; 2]) -> f64 {
    let m = validate_constants(reference_constants()).unwrap();
    let cd = characteristic_data(&m).unwrap();
    let c = Contour::torus(2.0, 1.0).unwrap();
    let case = manufactured_case(pole, coeffs, &c, &cd).unwrap();
    let sys = assemble_with(&c, &cd, n, form).unwrap();
    let (g1, g2) = case.boundary_data(&sys.grid).unwrap();
    let h = solve(&sys, &g1, &g2).unwrap();
    let mut e = 0.0f64;
    for (r, z) in torus_probes() {
        let u = displacement_with(&sys.grid, &h, form, r, z).unwrap();
        let x = case.exact(r, z).unwrap();
        e = e.max((u.u_r - x.u_r).hypot(u.u_z - x.u_z) / x.u_r.hypot(x.u_z));
    }
    e
}

#[test]
fn derived_system_converges_for_several_poles() {
    for (pole, coeffs) in [
        ((5.0, 0.0), [1.0, 1.0]),
        ((0.0, 3.0), [1.0, -0.5]),
        ((2.0, -2.5), [0.0, 1.0]),
    ] {
        let e64 = max_error(Formulation::Derived, 64, pole, coeffs);
        let e128 = max_error(Formulation::Derived, 128, pole, coeffs);
        println!("pole {pole:?}: N=64 {e64:.2e}, N=128 {e128:.2e}");
        assert!(e128 < 1e-6 && e128 < e64, "pole {pole:?}");
    }
}

#[test]
fn classical_system_misses_the_manufactured_field() {
    let e = max_error(Formulation::Classical, 128, (5.0, 0.0), [1.0, 1.0]);
    assert!(e > 1e-2, "{e:.3e}");
}
