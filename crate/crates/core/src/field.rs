//! Interior displacements and stresses from solved densities, and
//! manufactured exterior-source solutions.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::bie::{kernel_blocks, DensityPair, Formulation, Node, NystromGrid};
use crate::error::{Error, Result};
use crate::geometry::Contour;
use crate::kernels::{ring_jets, FieldPoint, RingPole};
use crate::material::{
    stresses_from_fields, CharacteristicData, DisplacementGradientSample, StressSample, ValidatedMaterial,
};
use crate::quadrature::adaptive_vec;

/// Points closer to the contour than this many mesh widths use adaptive quadrature.
pub const NEAR_MESH_WIDTHS: f64 = 5.0;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FieldSample {
    pub r: f64,
    pub z: f64,
    pub u_r: f64,
    pub u_z: f64,
    pub grad: Option<DisplacementGradientSample>,
    pub stress: Option<StressSample>,
    /// Set when the point lies within the near-boundary band.
    pub near_boundary: bool,
}

/// Trigonometric interpolant of the nodal densities.
#[derive(Debug, Clone)]
pub struct DensityInterpolant {
    period: f64,
    /// Cosine and sine coefficients of `h₁` and `h₂`, index 0..=N/2.
    a: [Vec<f64>; 2],
    b: [Vec<f64>; 2],
    max_abs: f64,
}

impl DensityInterpolant {
    pub fn new(grid: &NystromGrid, h: &DensityPair) -> Self {
        let n = grid.len();
        let m = n / 2;
        let mut a = [vec![0.0; m + 1], vec![0.0; m + 1]];
        let mut b = [vec![0.0; m + 1], vec![0.0; m + 1]];
        for (c, vals) in [&h.h1, &h.h2].into_iter().enumerate() {
            for k in 0..=m {
                let (mut sa, mut sb) = (0.0, 0.0);
                for (j, v) in vals.iter().enumerate() {
                    let (sn, cs) = (2.0 * PI * (k * j) as f64 / n as f64).sin_cos();
                    sa += v * cs;
                    sb += v * sn;
                }
                let w = if k == 0 || k == m { 1.0 } else { 2.0 };
                a[c][k] = w * sa / n as f64;
                b[c][k] = if k == m { 0.0 } else { w * sb / n as f64 };
            }
        }
        Self {
            period: grid.contour.period(),
            a,
            b,
            max_abs: h.max_abs(),
        }
    }

    /// Largest nodal density magnitude.
    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    pub fn eval(&self, s: f64) -> (f64, f64) {
        let x = 2.0 * PI * s / self.period;
        let (s1, c1) = x.sin_cos();
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut out = [0.0; 2];
        for k in 0..self.a[0].len() {
            for (c, o) in out.iter_mut().enumerate() {
                *o += self.a[c][k] * ck + self.b[c][k] * sk;
            }
            let nc = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = nc;
        }
        (out[0], out[1])
    }
}

fn check_inside(c: &Contour, r: f64, z: f64) -> Result<f64> {
    if !(r.is_finite() && z.is_finite()) {
        return Err(Error::NonFinite("field point"));
    }
    let d = c.distance(r, z);
    if r < 0.0 || !c.contains(r, z) || d == 0.0 {
        return Err(Error::PointOutside(r, z));
    }
    Ok(d)
}

/// Whether `(r, z)` lies within `NEAR_MESH_WIDTHS` node spacings of the boundary in
/// either stretched plane `(r, λ_k z)`.
fn is_near(grid: &NystromGrid, r: f64, z: f64) -> bool {
    (0..2).any(|k| {
        let l = grid.cd.lambda(k);
        let mut d2 = f64::INFINITY;
        let mut step = 0.0f64;
        for n in &grid.nodes {
            d2 = d2.min((n.r - r).powi(2) + (l * (n.z - z)).powi(2));
            step = step.max(n.tf[k].dsk * grid.h);
        }
        d2.sqrt() < NEAR_MESH_WIDTHS * step
    })
}

/// Contribution `[u_r, u_z]` of densities `(h₁, h₂)` at `node`, per unit parameter.
fn source_integrand(
    cd: &CharacteristicData,
    form: Formulation,
    target: (f64, f64),
    node: &Node,
    h1: f64,
    h2: f64,
) -> Result<[f64; 2]> {
    let k = kernel_blocks(cd, form, target, node, ring_jets)?;
    Ok([k[0] * h1 + k[1] * h2, k[2] * h1 + k[3] * h2])
}

/// Representation evaluated by adaptive quadrature on the interpolated densities.
pub fn displacement_adaptive(
    grid: &NystromGrid,
    dens: &DensityInterpolant,
    form: Formulation,
    r: f64,
    z: f64,
) -> Result<[f64; 2]> {
    let c = &grid.contour;
    let l = c.period();
    let (s_star, _) = c.closest(r, z);
    let mut err = None;
    let tol = 1e-11 * dens.max_abs();
    let mut f = |t: f64| {
        let s = (s_star + t).rem_euclid(l);
        let (h1, h2) = dens.eval(s);
        match Node::at(c, &grid.cd, s).and_then(|nd| source_integrand(&grid.cd, form, (r, z), &nd, h1, h2)) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                [0.0; 2]
            }
        }
    };
    let mut total = [0.0; 2];
    for (a, b) in [(0.0, 0.5 * l), (0.5 * l, l)] {
        let v = adaptive_vec(&mut f, a, b, tol, 1e-11)?;
        total[0] += v[0];
        total[1] += v[1];
    }
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Interior displacement from the solved densities.
pub fn displacement(grid: &NystromGrid, h: &DensityPair, r: f64, z: f64) -> Result<FieldSample> {
    displacement_with(grid, h, Formulation::Derived, r, z)
}

pub fn displacement_with(
    grid: &NystromGrid,
    h: &DensityPair,
    form: Formulation,
    r: f64,
    z: f64,
) -> Result<FieldSample> {
    check_inside(&grid.contour, r, z)?;
    let near = is_near(grid, r, z);
    let u = if near {
        let dens = DensityInterpolant::new(grid, h);
        displacement_adaptive(grid, &dens, form, r, z)?
    } else {
        let mut u = [0.0; 2];
        for (j, nd) in grid.nodes.iter().enumerate() {
            let v = source_integrand(&grid.cd, form, (r, z), nd, h.h1[j], h.h2[j])?;
            u[0] += grid.h * v[0];
            u[1] += grid.h * v[1];
        }
        u
    };
    let u_r = if r == 0.0 { 0.0 } else { u[0] };
    Ok(FieldSample {
        r,
        z,
        u_r,
        u_z: u[1],
        near_boundary: near,
        ..Default::default()
    })
}

/// `[u_r, u_z, ∂u_r/∂r, u_r/r, ∂u_z/∂z, ∂u_r/∂z, ∂u_z/∂r]` contributed by one node,
/// per unit parameter, with kernels differentiated at the field point.
fn gradient_integrand(cd: &CharacteristicData, target: (f64, f64), node: &Node, h1: f64, h2: f64) -> Result<[f64; 7]> {
    let (kl1, kl2, d) = (cd.k_lambda(0), cd.k_lambda(1), cd.delta);
    let alpha = [-kl2 * h1 / d, kl1 * h1 / d];
    let beta = [h2 / d, -h2 / d];
    let (r, z) = target;
    let mut out = [0.0; 7];
    for k in 0..2 {
        let (l, kk) = (cd.lambda(k), cd.k(k));
        let j = ring_jets(FieldPoint::new(r, l * z), RingPole::new(node.r, l * node.z))?;
        let tf = &node.tf[k];
        let wn = -(alpha[k] * tf.n1k + beta[k] * tf.n2k);
        let wt = alpha[k] * tf.n2k - beta[k] * tf.n1k;
        let meas = node.r * tf.dsk;
        let f = j.f();
        let f_r = j.v.r + j.w1.rr;
        let f_z = j.v.z + j.w1.rz;
        let p = wn * j.w0.r - wt * j.w1.z;
        let q = wn * j.w0.z + wt * f;
        let w0r_over_r = if r > 1e-12 { j.w0.r / r } else { j.w0.rr };
        let p_over_r = wn * w0r_over_r - wt * j.v.z;
        let p_r = wn * j.w0.rr - wt * j.w1.rz;
        let p_z = wn * j.w0.rz - wt * j.w1.zz;
        let q_r = wn * j.w0.rz + wt * f_r;
        let q_z = wn * j.w0.zz + wt * f_z;
        out[0] += meas * p;
        out[1] += meas * kk * l * q;
        out[2] += meas * p_r;
        out[3] += meas * p_over_r;
        out[4] += meas * kk * l * l * q_z;
        out[5] += meas * l * p_z;
        out[6] += meas * kk * l * q_r;
    }
    Ok(out)
}

fn gradient_sum(grid: &NystromGrid, h: &DensityPair, r: f64, z: f64, near: bool) -> Result<[f64; 7]> {
    if !near {
        let mut g = [0.0; 7];
        for (j, nd) in grid.nodes.iter().enumerate() {
            let v = gradient_integrand(&grid.cd, (r, z), nd, h.h1[j], h.h2[j])?;
            for i in 0..7 {
                g[i] += grid.h * v[i];
            }
        }
        return Ok(g);
    }
    let dens = DensityInterpolant::new(grid, h);
    let c = &grid.contour;
    let l = c.period();
    let (s_star, _) = c.closest(r, z);
    let mut err = None;
    let mut f = |t: f64| {
        let s = (s_star + t).rem_euclid(l);
        let (h1, h2) = dens.eval(s);
        match Node::at(c, &grid.cd, s).and_then(|nd| gradient_integrand(&grid.cd, (r, z), &nd, h1, h2)) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                [0.0; 7]
            }
        }
    };
    let mut g = [0.0; 7];
    for (a, b) in [(0.0, 0.5 * l), (0.5 * l, l)] {
        let v = adaptive_vec(&mut f, a, b, 1e-11 * dens.max_abs(), 1e-10)?;
        for i in 0..7 {
            g[i] += v[i];
        }
    }
    match err {
        Some(e) => Err(e),
        None => Ok(g),
    }
}

/// Displacement, gradient and stresses at an interior point.
pub fn stress(
    grid: &NystromGrid,
    h: &DensityPair,
    material: &ValidatedMaterial,
    r: f64,
    z: f64,
) -> Result<FieldSample> {
    check_inside(&grid.contour, r, z)?;
    let near = is_near(grid, r, z);
    let g = gradient_sum(grid, h, r, z, near)?;
    let grad = DisplacementGradientSample {
        dur_dr: g[2],
        ur_over_r: g[3],
        duz_dz: g[4],
        dur_dz: g[5],
        duz_dr: g[6],
    };
    let s = stresses_from_fields(material, &grid.cd, &grad)?;
    Ok(FieldSample {
        r,
        z,
        u_r: if r == 0.0 { 0.0 } else { g[0] },
        u_z: g[1],
        grad: Some(grad),
        stress: Some(s),
        near_boundary: near,
    })
}

/// Displacements at many points in parallel.
pub fn displacements(grid: &NystromGrid, h: &DensityPair, pts: &[(f64, f64)]) -> Result<Vec<FieldSample>> {
    pts.par_iter().map(|&(r, z)| displacement(grid, h, r, z)).collect()
}

/// Exact field of the potentials `φ_k = c_k w₀(r, λ_k z; a₀, λ_k z₀)`.
#[derive(Debug, Clone, Copy)]
pub struct ManufacturedCase {
    pub pole: (f64, f64),
    pub coeffs: [f64; 2],
    pub cd: CharacteristicData,
}

/// Potentials' derivatives `(φ_r, φ_rr, φ_zz, φ_rz)` in physical coordinates, per branch.
#[derive(Debug, Clone, Copy, Default)]
pub struct PotentialDerivatives {
    pub phi_r: f64,
    pub phi_rr: f64,
    pub phi_zz: f64,
    pub phi_rz: f64,
}

pub fn manufactured_case(
    pole: (f64, f64),
    coeffs: [f64; 2],
    c: &Contour,
    cd: &CharacteristicData,
) -> Result<ManufacturedCase> {
    let (a, z) = pole;
    if !(a.is_finite() && z.is_finite()) || a < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "pole ({a}, {z}) must be finite with a ≥ 0"
        )));
    }
    if c.contains(a, z) || c.distance(a, z) < 0.1 * c.scale() {
        return Err(Error::PoleInsideRegion(a, z));
    }
    Ok(ManufacturedCase { pole, coeffs, cd: *cd })
}

impl ManufacturedCase {
    pub fn potential(&self, k: usize, r: f64, z: f64) -> Result<PotentialDerivatives> {
        let l = self.cd.lambda(k);
        let c = self.coeffs[k];
        let j = ring_jets(FieldPoint::new(r, l * z), RingPole::new(self.pole.0, l * self.pole.1))?.w0;
        Ok(PotentialDerivatives {
            phi_r: c * j.r,
            phi_rr: c * j.rr,
            phi_zz: c * l * l * j.zz,
            phi_rz: c * l * j.rz,
        })
    }

    /// Residual `φ_rr + φ_r/r + φ_zz/λ²` of branch `k`.
    pub fn pde_residual(&self, k: usize, r: f64, z: f64) -> Result<f64> {
        let p = self.potential(k, r, z)?;
        let l = self.cd.lambda(k);
        Ok(p.phi_rr + p.phi_r / r + p.phi_zz / (l * l))
    }

    /// Exact displacement and gradient.
    pub fn exact(&self, r: f64, z: f64) -> Result<FieldSample> {
        let mut s = FieldSample {
            r,
            z,
            ..Default::default()
        };
        let mut g = DisplacementGradientSample::default();
        for k in 0..2 {
            let (l, kk, c) = (self.cd.lambda(k), self.cd.k(k), self.coeffs[k]);
            let j = ring_jets(FieldPoint::new(r, l * z), RingPole::new(self.pole.0, l * self.pole.1))?.w0;
            s.u_r += c * j.r;
            s.u_z += c * kk * l * j.z;
            g.dur_dr += c * j.rr;
            g.ur_over_r += c * if r > 1e-12 { j.r / r } else { j.rr };
            g.duz_dz += c * kk * l * l * j.zz;
            g.dur_dz += c * l * j.rz;
            g.duz_dr += c * kk * l * j.rz;
        }
        if r == 0.0 {
            s.u_r = 0.0;
        }
        s.grad = Some(g);
        Ok(s)
    }

    pub fn exact_stress(&self, material: &ValidatedMaterial, r: f64, z: f64) -> Result<FieldSample> {
        let mut s = self.exact(r, z)?;
        s.stress = Some(stresses_from_fields(material, &self.cd, &s.grad.expect("gradient"))?);
        Ok(s)
    }

    /// Boundary traces `(g₁, g₂)` at the grid nodes.
    pub fn boundary_data(&self, grid: &NystromGrid) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut g1 = Vec::with_capacity(grid.len());
        let mut g2 = Vec::with_capacity(grid.len());
        for nd in &grid.nodes {
            let s = self.exact(nd.r, nd.z)?;
            g1.push(s.u_r);
            g2.push(s.u_z);
        }
        Ok((g1, g2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bie::{assemble, solve};
    use crate::material::{characteristic_data, potential_stresses, validate_constants, ElasticConstants};

    fn material() -> ValidatedMaterial {
        validate_constants(ElasticConstants::new(20.0, 5.0, 1.0, 2.0, 1.0)).unwrap()
    }

    #[test]
    fn interpolant_reproduces_nodes_and_trig_polynomials() {
        let c = Contour::torus(2.0, 1.0).unwrap();
        let cd = characteristic_data(&material()).unwrap();
        let grid = NystromGrid::new(&c, &cd, 32).unwrap();
        let f = |s: f64| 1.0 + (3.0 * s).cos() - 0.5 * (7.0 * s).sin();
        let h = DensityPair {
            h1: grid.nodes.iter().map(|n| f(n.s)).collect(),
            h2: grid.nodes.iter().map(|n| 2.0 * f(n.s)).collect(),
        };
        let di = DensityInterpolant::new(&grid, &h);
        for i in 0..40 {
            let s = 0.157 * i as f64;
            let (a, b) = di.eval(s);
            assert!((a - f(s)).abs() < 1e-13 && (b - 2.0 * f(s)).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_densities_give_zero_field() {
        let c = Contour::torus(2.0, 1.0).unwrap();
        let cd = characteristic_data(&material()).unwrap();
        let grid = NystromGrid::new(&c, &cd, 16).unwrap();
        let h = DensityPair::zeros(16);
        let s = displacement(&grid, &h, 2.0, 0.1).unwrap();
        assert_eq!((s.u_r, s.u_z), (0.0, 0.0));
        let s = stress(&grid, &h, &material(), 2.3, 0.2).unwrap();
        assert_eq!(s.stress.unwrap(), StressSample::default());
        assert!(matches!(
            displacement(&grid, &h, 5.0, 0.0),
            Err(Error::PointOutside(..))
        ));
    }

    #[test]
    fn manufactured_potentials_are_quasi_harmonic() {
        let c = Contour::torus(2.0, 1.0).unwrap();
        let cd = characteristic_data(&material()).unwrap();
        let m = manufactured_case((5.0, 0.0), [1.0, 1.0], &c, &cd).unwrap();
        for &(r, z) in &[(2.0, 0.0), (2.5, 0.3), (1.5, -0.6)] {
            for k in 0..2 {
                assert!(m.pde_residual(k, r, z).unwrap().abs() < 1e-8);
            }
        }
        assert!(matches!(
            manufactured_case((2.0, 0.0), [1.0, 1.0], &c, &cd),
            Err(Error::PoleInsideRegion(..))
        ));
        let zero = manufactured_case((5.0, 0.0), [0.0, 0.0], &c, &cd).unwrap();
        let s = zero.exact(2.0, 0.2).unwrap();
        assert_eq!((s.u_r, s.u_z), (0.0, 0.0));
    }

    #[test]
    fn hooke_and_potential_routes_agree() {
        let m = material();
        let cd = characteristic_data(&m).unwrap();
        let c = Contour::torus(2.0, 1.0).unwrap();
        let mc = manufactured_case((5.0, 0.7), [0.8, -1.3], &c, &cd).unwrap();
        let (r, z) = (2.2, 0.35);
        let s = mc.exact_stress(&m, r, z).unwrap().stress.unwrap();
        let p = [mc.potential(0, r, z).unwrap(), mc.potential(1, r, z).unwrap()];
        let (zz, rz) = potential_stresses(&m, &cd, [p[0].phi_zz, p[1].phi_zz], [p[0].phi_rz, p[1].phi_rz]);
        assert!((zz - s.zz).abs() < 1e-10 * s.zz.abs());
        assert!((rz - s.rz).abs() < 1e-10 * s.rz.abs());
    }

    #[test]
    fn field_and_source_forms_agree() {
        let m = material();
        let cd = characteristic_data(&m).unwrap();
        let c = Contour::torus(2.0, 1.0).unwrap();
        let sys = assemble(&c, &cd, 32).unwrap();
        let g1: Vec<f64> = sys.grid.nodes.iter().map(|n| n.s.cos()).collect();
        let g2: Vec<f64> = sys.grid.nodes.iter().map(|n| (2.0 * n.s).sin()).collect();
        let h = solve(&sys, &g1, &g2).unwrap();
        let a = displacement(&sys.grid, &h, 2.1, 0.2).unwrap();
        let b = stress(&sys.grid, &h, &m, 2.1, 0.2).unwrap();
        assert!((a.u_r - b.u_r).abs() < 1e-10 * a.u_r.abs().max(1.0));
        assert!((a.u_z - b.u_z).abs() < 1e-10 * a.u_z.abs().max(1.0));
    }
}
