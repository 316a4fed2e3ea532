//! Displacement problem for the half-plane `z > 0` by Hankel transforms, the
//! closed-form Hankel modes, and the ring-kernel convolution forms of the same
//! solution.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{bessel_j01, bessel_j1_prime, ring_jets, FieldPoint, RingPole};
use crate::material::{CharacteristicData, DisplacementGradientSample};
use crate::quadrature::{adaptive, GaussRule};

/// A radial profile on `[0, ∞)`, zero beyond its support.
#[derive(Clone)]
pub enum Profile {
    /// Samples on a strictly increasing grid, interpolated locally.
    Samples { r: Vec<f64>, v: Vec<f64> },
    /// A closure supported on `[0, r_max]`.
    Function {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        r_max: f64,
    },
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Profile::Samples { r, .. } => write!(f, "Profile::Samples({} points)", r.len()),
            Profile::Function { r_max, .. } => write!(f, "Profile::Function(r_max = {r_max})"),
        }
    }
}

impl Profile {
    pub fn samples(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() || r.len() < 6 {
            return Err(Error::InvalidParameter(
                "profile needs ≥ 6 samples with matching lengths".into(),
            ));
        }
        if r.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("profile sample"));
        }
        if r[0] < 0.0 || r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "profile grid must be increasing and start at r ≥ 0".into(),
            ));
        }
        Ok(Profile::Samples { r, v })
    }

    pub fn function<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F, r_max: f64) -> Self {
        Profile::Function { f: Arc::new(f), r_max }
    }

    pub fn zero() -> Self {
        Self::function(|_| 0.0, 1.0)
    }

    pub fn r_max(&self) -> f64 {
        match self {
            Profile::Samples { r, .. } => *r.last().expect("non-empty"),
            Profile::Function { r_max, .. } => *r_max,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Function { f, r_max } => {
                if x > *r_max {
                    0.0
                } else {
                    f(x)
                }
            }
            Profile::Samples { r, v } => {
                let n = r.len();
                if x > r[n - 1] {
                    return 0.0;
                }
                let i = r.partition_point(|&ri| ri <= x).saturating_sub(1);
                let lo = i.saturating_sub(2).min(n - 6);
                lagrange(&r[lo..lo + 6], &v[lo..lo + 6], x)
            }
        }
    }
}

fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut s = 0.0;
    for i in 0..xs.len() {
        let mut l = 1.0;
        for j in 0..xs.len() {
            if i != j {
                l *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        s += l * ys[i];
    }
    s
}

/// Prescribed `u_r = f₁(r)`, `u_z = f₂(r)` on `z = 0`.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub f1: Profile,
    pub f2: Profile,
}

impl BoundaryData {
    /// Sampled data; checks that `|f|·r^{3/2}` does not grow over the last decade of the grid.
    pub fn from_samples(r: Vec<f64>, f1: Vec<f64>, f2: Vec<f64>) -> Result<Self> {
        for (name, f) in [("f1", &f1), ("f2", &f2)] {
            check_decay(name, &r, f)?;
        }
        Ok(Self {
            f1: Profile::samples(r.clone(), f1)?,
            f2: Profile::samples(r, f2)?,
        })
    }
}

fn check_decay(name: &str, r: &[f64], f: &[f64]) -> Result<()> {
    let n = r.len();
    if n == 0 || f.len() != n {
        return Err(Error::InvalidParameter(format!("{name}: length mismatch")));
    }
    let r_max = r[n - 1];
    let start = r.partition_point(|&x| x < 0.1 * r_max);
    let peak = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let w = |i: usize| f[i].abs() * r[i].powf(1.5);
    if start < n && w(n - 1) > w(start) + 1e-12 * peak * r_max.powf(1.5) {
        return Err(Error::DecayViolation(format!(
            "{name}: |f|·r^1.5 grows from {:.3e} to {:.3e} over the last decade",
            w(start),
            w(n - 1)
        )));
    }
    Ok(())
}

/// Grid and panel settings for the transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelConfig {
    pub t_max: f64,
    pub t_panels: usize,
    pub t_nodes: usize,
    /// Upper bound on the width of an `r` panel.
    pub r_panel: f64,
    pub r_nodes: usize,
}

impl Default for HankelConfig {
    fn default() -> Self {
        Self {
            t_max: 40.0,
            t_panels: 1024,
            t_nodes: 6,
            r_panel: 0.2,
            r_nodes: 10,
        }
    }
}

/// Transform values on a Gauss–Legendre `t`-grid, with the weights needed for inversion.
#[derive(Debug, Clone)]
pub struct HankelProfile {
    pub t: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub order: u8,
}

fn t_grid(cfg: &HankelConfig) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussRule::new(cfg.t_nodes);
    let h = cfg.t_max / cfg.t_panels as f64;
    let mut t = Vec::with_capacity(cfg.t_panels * cfg.t_nodes);
    let mut w = Vec::with_capacity(t.capacity());
    for p in 0..cfg.t_panels {
        for (x, wx) in rule.mapped(p as f64 * h, (p + 1) as f64 * h) {
            t.push(x);
            w.push(wx);
        }
    }
    (t, w)
}

fn bessel(order: u8, x: f64) -> f64 {
    let (j0, j1) = bessel_j01(x);
    if order == 0 {
        j0
    } else {
        j1
    }
}

/// Forward transform at one `t` on panels no wider than half a Bessel period.
fn forward_at(f: &Profile, order: u8, t: f64, cfg: &HankelConfig, rule: &GaussRule) -> f64 {
    let r_max = f.r_max();
    let width = (PI / t).min(cfg.r_panel);
    let panels = (r_max / width).ceil().max(1.0) as usize;
    let h = r_max / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        s += rule.integrate(p as f64 * h, (p + 1) as f64 * h, |r| {
            f.eval(r) * bessel(order, t * r) * r
        });
    }
    s
}

/// `f̂(t) = ∫₀^∞ f(r) J_ν(tr) r dr`.
pub fn hankel_transform(f: &Profile, order: u8, cfg: &HankelConfig) -> Result<HankelProfile> {
    if order > 1 {
        return Err(Error::InvalidParameter(format!("Hankel order {order} not supported")));
    }
    let (t, weights) = t_grid(cfg);
    let rule = GaussRule::new(cfg.r_nodes);
    let values: Vec<f64> = t.par_iter().map(|&t| forward_at(f, order, t, cfg, &rule)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::ConvergenceFailure("non-finite Hankel transform".into()));
    }
    Ok(HankelProfile {
        t,
        weights,
        values,
        order,
    })
}

/// `f(r) = ∫₀^T f̂(t) J_ν(tr) t dt`.
pub fn inverse_hankel(h: &HankelProfile, r: f64) -> f64 {
    h.t.iter()
        .zip(&h.weights)
        .zip(&h.values)
        .map(|((&t, &w), &v)| w * v * bessel(h.order, t * r) * t)
        .sum()
}

/// Closed-form field of the potential `φ = A e^{−tλz} t J₀(tr)` on branch `j`.
#[derive(Debug, Clone, Copy)]
pub struct ModeField {
    pub t: f64,
    pub branch: usize,
    pub amplitude: f64,
    pub lambda: f64,
    pub k: f64,
}

/// Potential, displacements and their derivatives at one point.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModeSample {
    pub phi: f64,
    pub phi_rr: f64,
    pub phi_r: f64,
    pub phi_zz: f64,
    pub phi_rz: f64,
    pub u_r: f64,
    pub u_z: f64,
    pub grad: DisplacementGradientSample,
}

pub fn mode_fields(t: f64, branch: usize, amplitude: f64, cd: &CharacteristicData) -> Result<ModeField> {
    if !(t > 0.0) || branch > 1 {
        return Err(Error::InvalidParameter(format!(
            "mode needs t > 0 and branch 0 or 1, got t={t}, branch={branch}"
        )));
    }
    Ok(ModeField {
        t,
        branch,
        amplitude,
        lambda: cd.lambda(branch),
        k: cd.k(branch),
    })
}

impl ModeField {
    pub fn at(&self, r: f64, z: f64) -> ModeSample {
        let (t, l, k) = (self.t, self.lambda, self.k);
        let e = self.amplitude * (-t * l * z).exp();
        let x = t * r;
        let (j0, j1) = bessel_j01(x);
        let j1p = bessel_j1_prime(x);
        let t2 = t * t;
        let t3 = t2 * t;
        // J₁(tr)/r, finite on the axis
        let j1_over_r = if x < 1e-8 { 0.5 * t } else { j1 / r };
        let phi_r = -e * t2 * j1;
        let phi_rr = -e * t3 * j1p;
        let phi_zz = e * t3 * l * l * j0;
        let phi_rz = e * t3 * l * j1;
        let u_z = k * (-e * t2 * l * j0);
        ModeSample {
            phi: e * t * j0,
            phi_r,
            phi_rr,
            phi_zz,
            phi_rz,
            u_r: phi_r,
            u_z,
            grad: DisplacementGradientSample {
                dur_dr: phi_rr,
                ur_over_r: -e * t2 * j1_over_r,
                duz_dz: k * phi_zz,
                dur_dz: phi_rz,
                duz_dr: k * phi_rz,
            },
        }
    }

    /// `φ_rr + φ_r/r + φ_zz/λ²`.
    pub fn pde_residual(&self, r: f64, z: f64) -> f64 {
        let s = self.at(r, z);
        s.phi_rr + s.phi_r / r + s.phi_zz / (self.lambda * self.lambda)
    }
}

/// Residuals of the axisymmetric Cauchy–Riemann pair for `q₁ = r e^{−tz} J₁(tr)`,
/// `q₂ = e^{−tz} J₀(tr)`.
pub fn cr_residual(t: f64, z: f64, r: f64) -> (f64, f64) {
    let e = (-t * z).exp();
    let x = t * r;
    let (j0, j1) = bessel_j01(x);
    let dq1_dz = -t * r * e * j1;
    let dq1_dr = e * (j1 + x * bessel_j1_prime(x));
    let dq2_dr = -t * e * j1;
    let dq2_dz = -t * e * j0;
    (dq1_dz / r - dq2_dr, dq1_dr / r + dq2_dz)
}

/// Hankel-form solution of the half-plane problem.
#[derive(Debug, Clone)]
pub struct HalfPlaneSolution {
    pub f1_hat: HankelProfile,
    pub f2_hat: HankelProfile,
    cd: CharacteristicData,
}

pub fn halfplane_solve(bd: &BoundaryData, cd: &CharacteristicData, cfg: &HankelConfig) -> Result<HalfPlaneSolution> {
    if cd.delta == 0.0 {
        return Err(Error::ZeroDelta);
    }
    Ok(HalfPlaneSolution {
        f1_hat: hankel_transform(&bd.f1, 1, cfg)?,
        f2_hat: hankel_transform(&bd.f2, 0, cfg)?,
        cd: *cd,
    })
}

impl HalfPlaneSolution {
    /// Amplitudes `(A₁ t, A₂ t)` of the two potentials at grid node `i`.
    pub fn amplitudes(&self, i: usize) -> (f64, f64) {
        let (f1, f2) = (self.f1_hat.values[i], self.f2_hat.values[i]);
        let cd = &self.cd;
        (
            (cd.k_lambda(1) * f1 - f2) / cd.delta,
            (f2 - cd.k_lambda(0) * f1) / cd.delta,
        )
    }

    /// `(u_r, u_z)` at `z ≥ 0`.
    pub fn displacement(&self, r: f64, z: f64) -> (f64, f64) {
        let cd = &self.cd;
        let (mut ur, mut uz) = (0.0, 0.0);
        for i in 0..self.f1_hat.t.len() {
            let t = self.f1_hat.t[i];
            let w = self.f1_hat.weights[i];
            let (a1, a2) = self.amplitudes(i);
            let (j0, j1) = bessel_j01(t * r);
            let e1 = (-t * cd.lambda1 * z).exp();
            let e2 = (-t * cd.lambda2 * z).exp();
            ur -= w * t * j1 * (a1 * e1 + a2 * e2);
            uz -= w * t * j0 * (cd.k_lambda(0) * a1 * e1 + cd.k_lambda(1) * a2 * e2);
        }
        (ur, uz)
    }

    /// Limit `z → 0⁺` by Richardson extrapolation over `z = h, h/2, h/4`.
    pub fn boundary_limit(&self, r: f64, h: f64) -> (f64, f64) {
        let a = self.displacement(r, h);
        let b = self.displacement(r, 0.5 * h);
        let c = self.displacement(r, 0.25 * h);
        let ex = |a: f64, b: f64, c: f64| (8.0 * c - 6.0 * b + a) / 3.0;
        (ex(a.0, b.0, c.0), ex(a.1, b.1, c.1))
    }
}

/// `∫₀^∞ K(a) f(a) a da` with a breakpoint at the kernel peak `a = r`.
fn convolve<K: Fn(f64) -> Result<f64>>(k: K, f: &Profile, r: f64) -> Result<f64> {
    let r_max = f.r_max();
    let mut cuts = vec![0.0];
    if r > 0.0 && r < r_max {
        cuts.push(r);
    }
    cuts.push(r_max);
    let mut err = None;
    let mut total = 0.0;
    {
        let mut g = |a: f64| match k(a) {
            Ok(v) => v * f.eval(a) * a,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        };
        for w in cuts.windows(2) {
            total += adaptive(&mut g, w[0], w[1], 1e-13, 1e-11)?;
        }
    }
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// The four ring-kernel transforms on branch `j` at `(r, z)`:
/// `∫f̂₁J₁ t e dt`, `∫f̂₂J₁ t e dt`, `∫f̂₁J₀ t e dt`, `∫f̂₂J₀ t e dt` with `e = e^{−tλ_j z}`.
fn branch_integrals(bd: &BoundaryData, lambda: f64, r: f64, z: f64) -> Result<[f64; 4]> {
    let p = FieldPoint::new(r, lambda * z);
    let jets = |a: f64| ring_jets(p, RingPole::new(a, 0.0));
    Ok([
        convolve(|a| Ok(-jets(a)?.w1.z), &bd.f1, r)?,
        convolve(|a| Ok(-jets(a)?.w0.r), &bd.f2, r)?,
        convolve(|a| Ok(jets(a)?.f()), &bd.f1, r)?,
        convolve(|a| Ok(-jets(a)?.w0.z), &bd.f2, r)?,
    ])
}

/// Displacements from the ring-kernel convolution form of the solution.
pub fn convolution_displacement(bd: &BoundaryData, cd: &CharacteristicData, r: f64, z: f64) -> Result<(f64, f64)> {
    if z <= 0.0 {
        return Err(Error::DomainError("convolution form needs z > 0".into()));
    }
    let i1 = branch_integrals(bd, cd.lambda1, r, z)?;
    let i2 = branch_integrals(bd, cd.lambda2, r, z)?;
    let (kl1, kl2, d) = (cd.k_lambda(0), cd.k_lambda(1), cd.delta);
    let ur = -(kl2 * i1[0] - i1[1]) / d + (kl1 * i2[0] - i2[1]) / d;
    let uz = -kl1 / d * (kl2 * i1[2] - i1[3]) + kl2 / d * (kl1 * i2[2] - i2[3]);
    Ok((ur, uz))
}

/// The `γ` densities of the half-plane solution, `[[γ₁₁, γ₁₂], [γ₂₁, γ₂₂]]`.
pub fn halfplane_gammas(bd: &BoundaryData, cd: &CharacteristicData) -> [[Profile; 2]; 2] {
    let scaled = |p: &Profile, c: f64| {
        let p = p.clone();
        let r_max = p.r_max();
        Profile::function(move |x| c * p.eval(x), r_max)
    };
    let d = cd.delta;
    [
        [scaled(&bd.f1, -cd.k_lambda(1) / d), scaled(&bd.f2, -1.0 / d)],
        [scaled(&bd.f1, cd.k_lambda(0) / d), scaled(&bd.f2, 1.0 / d)],
    ]
}

/// Displacements assembled from `γ`-densities and the ring kernels,
/// `u_r = Σ_k (Λ_{k1}∗γ_{k1} + ∂_r g_k∗γ_{k2})`, `u_z = −Σ_k k_kλ_k(Λ_k∗γ_{k2} − F_k∗γ_{k1})`.
pub fn gamma_displacement(gammas: &[[Profile; 2]; 2], cd: &CharacteristicData, r: f64, z: f64) -> Result<(f64, f64)> {
    if z <= 0.0 {
        return Err(Error::DomainError("half-plane field needs z > 0".into()));
    }
    let (mut ur, mut uz) = (0.0, 0.0);
    for (j, g) in gammas.iter().enumerate() {
        let p = FieldPoint::new(r, cd.lambda(j) * z);
        let jets = |a: f64| ring_jets(p, RingPole::new(a, 0.0));
        let lam1 = convolve(|a| Ok(-jets(a)?.w1.z), &g[0], r)?;
        let dg = convolve(|a| Ok(jets(a)?.w0.r), &g[1], r)?;
        let lam = convolve(|a| Ok(-jets(a)?.w0.z), &g[1], r)?;
        let f = convolve(|a| Ok(jets(a)?.f()), &g[0], r)?;
        ur += lam1 + dg;
        uz -= cd.k_lambda(j) * (lam - f);
    }
    Ok((ur, uz))
}
