//! Ring-source kernels `w₀`, `w₁` of the axisymmetric quasi-harmonic operators,
//! their derivative jets and the boundary combinations built from them.
//!
//! `w₀(r, z; a, ζ) = (1/π)∫₀^π ρ(φ)^{−1} dφ` and `w₁ = (1/π)∫₀^π cos φ ρ(φ)^{−1} dφ`
//! with `ρ(φ)² = r² + a² − 2ra cos φ + (z − ζ)²`. Both are evaluated in closed
//! form through `K(m)`, `E(m)` with `m = 4ra/((r + a)² + (z − ζ)²)`.

pub mod bessel;
pub mod elliptic;
pub mod jet;

use std::f64::consts::PI;

pub use bessel::{bessel_j01, bessel_j1_prime};
pub use elliptic::elliptic_ke;
pub use jet::Jet;

use crate::error::{Error, Result};
use crate::geometry::TransformedFrame;
use crate::quadrature::adaptive;

/// Field point in a transformed plane `(r, λz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub r: f64,
    pub z: f64,
}

impl FieldPoint {
    pub fn new(r: f64, z: f64) -> Self {
        Self { r, z }
    }
}

/// Source ring of radius `a` at height `zeta` (transformed plane).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingPole {
    pub a: f64,
    pub zeta: f64,
}

impl RingPole {
    pub fn new(a: f64, zeta: f64) -> Self {
        Self { a, zeta }
    }
}

/// Kernel value and partial derivatives with respect to the field point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KernelJet {
    pub value: f64,
    pub d_r: f64,
    pub d_z: f64,
    pub d_rr: f64,
    pub d_rz: f64,
    pub d_zz: f64,
}

impl From<Jet> for KernelJet {
    fn from(j: Jet) -> Self {
        Self {
            value: j.v,
            d_r: j.r,
            d_z: j.z,
            d_rr: j.rr,
            d_rz: j.rz,
            d_zz: j.zz,
        }
    }
}

/// Jets of `w₀`, `w₁` and `V = w₁/r` at one field point. `V` stays finite on the axis.
#[derive(Debug, Clone, Copy)]
pub struct RingJets {
    pub w0: Jet,
    pub w1: Jet,
    pub v: Jet,
}

impl RingJets {
    /// `(1/r)∂(r w₁)/∂r = w₁/r + ∂w₁/∂r`.
    pub fn f(&self) -> f64 {
        self.v.v + self.w1.r
    }
}

struct Geometry {
    rho_p2: Jet,
    m: Jet,
    m1: Jet,
}

fn geometry(p: FieldPoint, q: RingPole) -> Result<Geometry> {
    let vals = [p.r, p.z, q.a, q.zeta];
    if vals.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("kernel argument"));
    }
    if p.r < 0.0 || q.a < 0.0 {
        return Err(Error::DomainError(format!("negative radius r={} a={}", p.r, q.a)));
    }
    let dz = p.z - q.zeta;
    let r = Jet::var_r(p.r);
    let d = Jet::var_z(dz);
    let sp = r + q.a;
    let sm = r + (-q.a);
    let rho_p2 = sp * sp + d * d;
    let rho_m2 = sm * sm + d * d;
    let scale = p.r + q.a + dz.abs();
    if rho_m2.v.sqrt() <= 1e-14 * scale {
        return Err(Error::PoleHit);
    }
    let inv = rho_p2.recip();
    Ok(Geometry {
        m: (r * inv).scale(4.0 * q.a),
        m1: rho_m2 * inv,
        rho_p2,
    })
}

/// Jets of `w₀`, `w₁`, `w₁/r` in the field variables.
pub fn ring_jets(p: FieldPoint, q: RingPole) -> Result<RingJets> {
    let g = geometry(p, q)?;
    let kj = elliptic::ke_jet(g.m.v, g.m1.v);
    let u = elliptic::u_jet(g.m.v, &kj);
    let k = g.m.lift(kj.k[0], kj.k[1], kj.k[2]);
    let uj = g.m.lift(u[0], u[1], u[2]);
    let inv_rho = g.rho_p2.powf(-0.5);
    let w0 = (k * inv_rho).scale(2.0 / PI);
    let w1 = (g.m * uj * inv_rho).scale(2.0 / PI);
    let v = (uj * g.rho_p2.powf(-1.5)).scale(8.0 * q.a / PI);
    Ok(RingJets { w0, w1, v })
}

/// Jets of the coefficients of `ln(1/m₁)` in `w₀`, `w₁` and `w₁/r`, where
/// `m₁ = ((r − a)² + (z − ζ)²)/((r + a)² + (z − ζ)²)`.
///
/// Requires the field point and ring to be off the axis.
pub fn log_part_jets(p: FieldPoint, q: RingPole) -> Result<RingJets> {
    if p.r <= 0.0 || q.a <= 0.0 {
        return Err(Error::DomainError("log split needs r > 0 and a > 0".into()));
    }
    let dz = p.z - q.zeta;
    let r = Jet::var_r(p.r);
    let d = Jet::var_z(dz);
    let sp = r + q.a;
    let sm = r + (-q.a);
    let rho_p2 = sp * sp + d * d;
    let inv = rho_p2.recip();
    let m = (r * inv).scale(4.0 * q.a);
    let m1 = (sm * sm + d * d) * inv;
    // K(m₁), E(m₁) as functions of m₁; m₁ is small next to the pole
    let kj = elliptic::ke_jet(m1.v, m.v);
    let k1 = m1.lift(kj.k[0], kj.k[1], kj.k[2]);
    let e1 = m1.lift(kj.e[0], kj.e[1], kj.e[2]);
    let inv_rho = rho_p2.powf(-0.5);
    let c = 2.0 / (PI * PI);
    let w0 = (k1 * inv_rho).scale(c);
    let w1 = (((e1.scale(2.0) - m * k1) * inv_rho) / m).scale(c);
    let v = w1 / r;
    Ok(RingJets { w0, w1, v })
}

pub fn w0_jet(p: FieldPoint, q: RingPole) -> Result<KernelJet> {
    Ok(ring_jets(p, q)?.w0.into())
}

pub fn w1_jet(p: FieldPoint, q: RingPole) -> Result<KernelJet> {
    Ok(ring_jets(p, q)?.w1.into())
}

/// Poisson kernel of the half-plane `z > 0` for the operator with root `λ`,
/// `Λ(r, z; a) = (λz/π)∫₀^π (r² + a² + λ²z² − 2ar cos α)^{−3/2} dα = −∂w₀/∂z̄` at `z̄ = λz`.
pub fn poisson_kernel(r: f64, z: f64, a: f64, lambda: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::DomainError(format!("Poisson kernel needs z > 0, got {z}")));
    }
    Ok(-ring_jets(FieldPoint::new(r, lambda * z), RingPole::new(a, 0.0))?.w0.z)
}

/// The four bracketed boundary combinations of the ring kernels.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundaryCombos {
    /// `(1/r)∂(r w₁)/∂r·n₁ + ∂w₁/∂z̄·n₂`
    pub dn_big_g: f64,
    /// `∂w₁/∂z̄·n₁ − (1/r)∂(r w₁)/∂r·n₂`
    pub dt_big_g: f64,
    /// `∂w₀/∂r·n₁ + ∂w₀/∂z̄·n₂`
    pub dn_g: f64,
    /// `−∂w₀/∂r·n₂ + ∂w₀/∂z̄·n₁`
    pub dt_g: f64,
}

/// Combinations from precomputed jets with direction cosines `(n1, n2)`.
pub fn combos_from_jets(j: &RingJets, n1: f64, n2: f64) -> BoundaryCombos {
    let f = j.f();
    BoundaryCombos {
        dn_big_g: f * n1 + j.w1.z * n2,
        dt_big_g: j.w1.z * n1 - f * n2,
        dn_g: j.w0.r * n1 + j.w0.z * n2,
        dt_g: -j.w0.r * n2 + j.w0.z * n1,
    }
}

pub fn boundary_combos(p: FieldPoint, q: RingPole, frame: &TransformedFrame) -> Result<BoundaryCombos> {
    Ok(combos_from_jets(&ring_jets(p, q)?, frame.n1k, frame.n2k))
}

/// Angular weight of a ring integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    One,
    Cos,
}

/// `(1/π)∫₀^π w(φ)·[r² + a² − 2ra cos φ + (z − ζ)²]^{−power} dφ` by adaptive quadrature.
pub fn kernel_by_quadrature(p: FieldPoint, q: RingPole, weight: Weight, power: f64) -> Result<f64> {
    let dz = p.z - q.zeta;
    let near = (p.r - q.a).powi(2) + dz * dz;
    let f = |phi: f64| {
        let w = match weight {
            Weight::One => 1.0,
            Weight::Cos => phi.cos(),
        };
        let d2 = near + 4.0 * p.r * q.a * (0.5 * phi).sin().powi(2);
        w * d2.powf(-power)
    };
    let dmin = near.sqrt();
    if dmin == 0.0 {
        return Err(Error::PoleHit);
    }
    // split off the peak at φ = 0 whose width is about dmin/√(ra)
    let width = (dmin / (p.r * q.a).sqrt().max(dmin)).min(PI);
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = width.min(PI);
    loop {
        total += adaptive(&f, lo, hi, 1e-14, 1e-13)?;
        if hi >= PI {
            break;
        }
        lo = hi;
        hi = (hi * 4.0).min(PI);
    }
    Ok(total / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn axis_ring_reduces_to_point_source() {
        let p = FieldPoint::new(0.7, 1.3);
        let q = RingPole::new(0.0, 0.4);
        let j = ring_jets(p, q).unwrap();
        let d2: f64 = 0.49 + 0.81;
        assert!((j.w0.v - d2.powf(-0.5)).abs() < 1e-15);
        assert!((j.w0.z + 0.9 / d2.powf(1.5)).abs() < 1e-15);
        assert_eq!(j.w1.v, 0.0);
        assert_eq!(j.w1.r, 0.0);
    }

    #[test]
    fn reference_value_and_symmetry() {
        let j = w0_jet(FieldPoint::new(1.0, 1.0), RingPole::new(1.0, 0.0)).unwrap();
        let (k, _) = elliptic_ke(0.8).unwrap();
        assert!((j.value - 2.0 * k / (PI * 5f64.sqrt())).abs() < 1e-15);
        assert!((j.value - 0.64263).abs() < 1e-5);
        let w1 = w1_jet(FieldPoint::new(1.0, 1.0), RingPole::new(1.0, 0.0)).unwrap();
        assert!((w1.value - 0.125_151_536_728_587_8).abs() < 1e-13, "{}", w1.value);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (r, a, z, zeta) = (
                rng.random_range(0.0..3.0),
                rng.random_range(0.0..3.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            );
            let x = w0_jet(FieldPoint::new(r, z), RingPole::new(a, zeta)).unwrap().value;
            let y = w0_jet(FieldPoint::new(a, z), RingPole::new(r, zeta)).unwrap().value;
            assert!((x - y).abs() <= 1e-14 * x.abs());
        }
    }

    #[test]
    fn pole_is_rejected() {
        let e = ring_jets(FieldPoint::new(1.0, 0.5), RingPole::new(1.0, 0.5)).unwrap_err();
        assert_eq!(e, Error::PoleHit);
        assert!(ring_jets(FieldPoint::new(0.0, 0.0), RingPole::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn w1_over_r_has_finite_axis_limit() {
        let q = RingPole::new(1.2, 0.3);
        let v = |r: f64| ring_jets(FieldPoint::new(r, 0.8), q).unwrap();
        let (a, b) = (v(1e-3), v(1e-4));
        let lim = v(0.0).v.v;
        assert!((a.w1.v / 1e-3 - a.v.v).abs() < 1e-12);
        // the ratio is even in r, so Richardson on r² removes the leading error
        let rich = (100.0 * b.w1.v / 1e-4 - a.w1.v / 1e-3) / 99.0;
        assert!((rich - lim).abs() < 1e-10 * lim.abs());
        let quad = kernel_by_quadrature(FieldPoint::new(1e-4, 0.8), q, Weight::Cos, 0.5).unwrap();
        assert!((quad / 1e-4 - lim).abs() < 1e-6 * lim.abs());
    }

    #[test]
    fn combos_rotate_with_frame() {
        let j = ring_jets(FieldPoint::new(1.3, 0.4), RingPole::new(0.9, -0.2)).unwrap();
        let (n1, n2) = (0.6, 0.8);
        let c = combos_from_jets(&j, n1, n2);
        let rot = combos_from_jets(&j, -n2, n1);
        assert!((rot.dn_big_g - c.dt_big_g).abs() < 1e-15);
        assert!((rot.dt_big_g + c.dn_big_g).abs() < 1e-15);
        assert!((rot.dn_g - c.dt_g).abs() < 1e-15);
        assert!((rot.dt_g + c.dn_g).abs() < 1e-15);
        let e = combos_from_jets(&j, 1.0, 0.0);
        assert_eq!(e.dn_big_g, j.f());
        assert_eq!(e.dt_big_g, j.w1.z);
    }

    #[test]
    fn poisson_kernel_on_axis() {
        let (a, z) = (0.8, 0.6);
        let v = poisson_kernel(0.0, z, a, 1.0).unwrap();
        assert!((v - z / (a * a + z * z).powf(1.5)).abs() < 1e-14);
        assert!(poisson_kernel(0.0, 0.0, a, 1.0).is_err());
        let far = poisson_kernel(0.3, 1e-6, 1.0, 2.0).unwrap();
        assert!(far.abs() < 1e-5);
    }

    #[test]
    fn log_part_matches_expansion() {
        // w₀ − W₀ₚ·ln(1/m₁) stays bounded as the pole is approached
        let q = RingPole::new(1.5, 0.2);
        let rest = |eps: f64| {
            let p = FieldPoint::new(1.5 + eps, 0.2);
            let w = ring_jets(p, q).unwrap().w0.v;
            let l = log_part_jets(p, q).unwrap().w0.v;
            let m1 = eps * eps / ((3.0 + eps) * (3.0 + eps));
            w - l * (1.0 / m1).ln()
        };
        let (a, b) = (rest(1e-4), rest(1e-6));
        assert!((a - b).abs() < 1e-3);
    }
}
