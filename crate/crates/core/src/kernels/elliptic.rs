//! Complete elliptic integrals of the first and second kind, parameter convention
//! `K(m) = ∫₀^{π/2} (1 − m sin²θ)^{−1/2} dθ`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Below this parameter the power series are used instead of the AGM.
const SERIES_BELOW: f64 = 0.25;
const SERIES_TERMS: usize = 64;

/// `(K(m), E(m))` for `0 ≤ m < 1`.
pub fn elliptic_ke(m: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::DomainError(format!("elliptic parameter {m} outside [0, 1)")));
    }
    Ok(agm_ke(m, 1.0 - m))
}

/// `(K, E)` by the arithmetic–geometric mean, with the complementary parameter
/// `m1 = 1 − m` passed separately so that it keeps full relative accuracy.
pub fn agm_ke(m: f64, m1: f64) -> (f64, f64) {
    let (mut a, mut b) = (1.0f64, m1.sqrt());
    let mut sum = 0.5 * m;
    let mut pow = 0.5;
    for _ in 0..40 {
        let c = 0.5 * (a - b);
        if c.abs() <= 1e-17 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let k = FRAC_PI_2 / a;
    (k, k * (1.0 - sum))
}

/// `K`, `E` and their first two derivatives in `m`, each as `[f, f', f'']`.
#[derive(Debug, Clone, Copy)]
pub struct KeJet {
    pub k: [f64; 3],
    pub e: [f64; 3],
}

fn series_coeffs() -> impl Iterator<Item = (usize, f64)> {
    let mut a = 1.0f64;
    (0..SERIES_TERMS).map(move |n| {
        if n > 0 {
            let q = (2 * n - 1) as f64 / (2 * n) as f64;
            a *= q * q;
        }
        (n, a)
    })
}

/// Derivative jets of `K` and `E` at `m`, with `m1 = 1 − m` supplied accurately.
pub fn ke_jet(m: f64, m1: f64) -> KeJet {
    if m < SERIES_BELOW {
        let mut k = [0.0; 3];
        let mut e = [0.0; 3];
        for (n, a) in series_coeffs() {
            let nf = n as f64;
            let ea = -a / (2.0 * nf - 1.0);
            let p0 = m.powi(n as i32);
            let p1 = if n >= 1 { nf * m.powi(n as i32 - 1) } else { 0.0 };
            let p2 = if n >= 2 {
                nf * (nf - 1.0) * m.powi(n as i32 - 2)
            } else {
                0.0
            };
            for (i, p) in [p0, p1, p2].into_iter().enumerate() {
                k[i] += a * p;
                e[i] += ea * p;
            }
        }
        for i in 0..3 {
            k[i] *= FRAC_PI_2;
            e[i] *= FRAC_PI_2;
        }
        return KeJet { k, e };
    }
    let (kv, ev) = agm_ke(m, m1);
    let d = 2.0 * m * m1;
    let nn = ev - m1 * kv;
    let k1 = nn / d;
    let e1 = (ev - kv) / (2.0 * m);
    let nn1 = e1 + kv - m1 * k1;
    let d1 = 2.0 * (1.0 - 2.0 * m);
    let k2 = (nn1 * d - nn * d1) / (d * d);
    let e2 = (e1 - k1) / (2.0 * m) - (ev - kv) / (2.0 * m * m);
    KeJet {
        k: [kv, k1, k2],
        e: [ev, e1, e2],
    }
}

/// `U(m) = ((2 − m)K − 2E)/m²` and its first two derivatives.
///
/// `U` stays finite at `m = 0`, where the direct form cancels catastrophically.
pub fn u_jet(m: f64, ke: &KeJet) -> [f64; 3] {
    if m < SERIES_BELOW {
        let mut u = [0.0; 3];
        let mut prev = 1.0;
        for (n, a) in series_coeffs() {
            if n >= 2 {
                let nf = n as f64;
                let c = 4.0 * nf * a / (2.0 * nf - 1.0) - prev;
                let p = (n - 2) as i32;
                u[0] += c * m.powi(p);
                if p >= 1 {
                    u[1] += c * p as f64 * m.powi(p - 1);
                }
                if p >= 2 {
                    u[2] += c * (p * (p - 1)) as f64 * m.powi(p - 2);
                }
            }
            prev = a;
        }
        return u.map(|x| x * FRAC_PI_2);
    }
    let [k0, k1, k2] = ke.k;
    let [e0, e1, e2] = ke.e;
    let n0 = (2.0 - m) * k0 - 2.0 * e0;
    let n1 = -k0 + (2.0 - m) * k1 - 2.0 * e1;
    let n2 = -2.0 * k1 + (2.0 - m) * k2 - 2.0 * e2;
    let m2 = m * m;
    [
        n0 / m2,
        n1 / m2 - 2.0 * n0 / (m2 * m),
        n2 / m2 - 4.0 * n1 / (m2 * m) + 6.0 * n0 / (m2 * m2),
    ]
}
