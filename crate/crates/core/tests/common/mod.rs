//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use axibie::material::{ElasticConstants, QuarticForm};

/// `(1/π)∫₀^π cos^n φ · [r² + a² − 2ra cos φ + (z − ζ)²]^{−1/2} dφ` by the periodic
/// trapezoidal rule, doubled until two successive sums agree.
pub fn ring_integral(r: f64, z: f64, a: f64, zeta: f64, n: i32) -> f64 {
    let f = |phi: f64| phi.cos().powi(n) / (r * r + a * a - 2.0 * r * a * phi.cos() + (z - zeta).powi(2)).sqrt();
    let mut m = 16usize;
    let mut prev = f64::NAN;
    loop {
        // full period, half of it by symmetry
        let s: f64 = (0..m).map(|i| f(2.0 * PI * i as f64 / m as f64)).sum::<f64>() / m as f64;
        if (s - prev).abs() < 1e-15 * s.abs().max(1.0) || m > 1 << 22 {
            return s;
        }
        prev = s;
        m *= 2;
    }
}

/// Adaptive Simpson quadrature.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Quartic in `μ = λ²`, written out independently of the library.
pub fn quartic(form: QuarticForm, c: &ElasticConstants, lambda: f64) -> f64 {
    let mu = lambda * lambda;
    let mid = match form {
        QuarticForm::Equilibrium => c.a13 * (c.a13 + 2.0 * c.a44) - c.a11 * c.a33,
        QuarticForm::ShearMiddle => c.a13 * (c.a13 + 2.0 * c.a44) - c.a11 * c.a44,
    };
    c.a33 * c.a44 * mu * mu + mid * mu + c.a11 * c.a44
}

/// Probe points inside torus(2, 1), between 0.2 and 0.74 from the core circle.
pub fn torus_probes() -> Vec<(f64, f64)> {
    (0..10)
        .map(|i| {
            let t = 0.37 + 0.6 * i as f64;
            let rho = 0.2 + 0.06 * i as f64;
            (2.0 + rho * t.cos(), rho * t.sin())
        })
        .collect()
}

pub fn reference_constants() -> ElasticConstants {
    ElasticConstants::new(20.0, 5.0, 1.0, 2.0, 1.0)
}
