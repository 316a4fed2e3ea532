//! Nyström discretisation of the second-kind boundary integral system for the
//! displacement densities `h₁`, `h₂` on a closed meridional contour.
//!
//! The displacement is represented through the two potentials as
//! `u_r = p₁ + p₂`, `u_z = k₁λ₁q₁ + k₂λ₂q₂` with
//! `p_k = ∫(α_k ∂_n G_k − β_k ∂_τ G_k) a dS_k`, `q_k = ∫(α_k ∂_τ g_k + β_k ∂_n g_k) a dS_k`,
//! `α₁ = −k₂λ₂h₁/δ`, `α₂ = k₁λ₁h₁/δ`, `β₁ = −β₂ = h₂/δ`. Derivatives are taken at the
//! boundary point in the plane `(r, λ_k z)`, along its internal normal, and
//! `dS_k = √(r'² + λ_k² z'²) ds`. The boundary values satisfy `(I + K)h = g`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field;
use crate::geometry::{frame, transformed_frame, Contour, TransformedFrame};
use crate::kernels::{combos_from_jets, log_part_jets, ring_jets, FieldPoint, RingJets, RingPole};
use crate::material::CharacteristicData;
use crate::quadrature::log_weights;

pub const MIN_NODES: usize = 16;

/// Kernel arrangement of the boundary system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// Tangential cross terms pair `G` with `h₂` and `g` with `h₁`, measure `dS_k`.
    #[default]
    Derived,
    /// Tangential cross terms pair `g` with `h₂` and `G` with `h₁`, measure `ds`.
    Classical,
}

/// Boundary data at one parameter value.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub s: f64,
    pub r: f64,
    pub z: f64,
    /// Frames in the planes of `λ₁` and `λ₂`.
    pub tf: [TransformedFrame; 2],
    /// `√(r'² + z'²)`
    pub ds: f64,
    /// Physical inward normal.
    pub normal: [f64; 2],
}

impl Node {
    pub fn at(c: &Contour, cd: &CharacteristicData, s: f64) -> Result<Self> {
        let p = c.eval(s);
        let f = frame(c, s)?;
        Ok(Self {
            s,
            r: p.r,
            z: p.z,
            tf: [
                transformed_frame(c, s, cd.lambda1)?,
                transformed_frame(c, s, cd.lambda2)?,
            ],
            ds: p.dr.hypot(p.dz),
            normal: f.normal,
        })
    }
}

/// Equispaced nodes and the quadrature data of the periodic rule.
#[derive(Debug, Clone)]
pub struct NystromGrid {
    pub contour: Contour,
    pub cd: CharacteristicData,
    pub nodes: Vec<Node>,
    /// Trapezoid weight `L/N`.
    pub h: f64,
    /// Log weights on the contour parameter, already scaled by `L/(2π)`.
    pub log_w: Vec<f64>,
}

impl NystromGrid {
    pub fn new(c: &Contour, cd: &CharacteristicData, n: usize) -> Result<Self> {
        if n < MIN_NODES || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "node count must be even and ≥ {MIN_NODES}, got {n}"
            )));
        }
        if c.axis_touching() {
            return Err(Error::DegenerateContour(
                "contours meeting the axis are not supported by the Nyström solver".into(),
            ));
        }
        let l = c.period();
        let h = l / n as f64;
        let nodes = (0..n)
            .map(|j| Node::at(c, cd, h * j as f64))
            .collect::<Result<Vec<_>>>()?;
        if nodes.iter().any(|nd| nd.r <= 0.0) {
            return Err(Error::DegenerateContour("contour reaches r ≤ 0".into()));
        }
        let scale = l / (2.0 * PI);
        let log_w = log_weights(n).into_iter().map(|w| w * scale).collect();
        Ok(Self {
            contour: c.clone(),
            cd: *cd,
            nodes,
            h,
            log_w,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `ln(4 sin²(π(s − s₀)/L))`
fn log_factor(s: f64, s0: f64, l: f64) -> f64 {
    (4.0 * (PI * (s - s0) / l).sin().powi(2)).ln()
}

/// Kernel blocks `[K₁₁, K₁₂, K₂₁, K₂₂]` mapping `(h₁, h₂)` at `node` to `(u_r, u_z)` at
/// the target `(r, z)`, per unit parameter length.
pub fn kernel_blocks<J>(
    cd: &CharacteristicData,
    form: Formulation,
    target: (f64, f64),
    node: &Node,
    jets: J,
) -> Result<[f64; 4]>
where
    J: Fn(FieldPoint, RingPole) -> Result<RingJets>,
{
    let mut c = [Default::default(); 2];
    let mut ds = [0.0; 2];
    for k in 0..2 {
        let l = cd.lambda(k);
        let j = jets(
            FieldPoint::new(node.r, l * node.z),
            RingPole::new(target.0, l * target.1),
        )?;
        c[k] = combos_from_jets(&j, node.tf[k].n1k, node.tf[k].n2k);
        ds[k] = match form {
            Formulation::Derived => node.tf[k].dsk,
            Formulation::Classical => node.ds,
        };
    }
    let [c1, c2] = c;
    let (kl1, kl2, d) = (cd.k_lambda(0), cd.k_lambda(1), cd.delta);
    let a = node.r;
    Ok(match form {
        Formulation::Derived => [
            a * (-kl2 / d * c1.dn_big_g * ds[0] + kl1 / d * c2.dn_big_g * ds[1]),
            -a / d * (c1.dt_big_g * ds[0] - c2.dt_big_g * ds[1]),
            a * kl1 * kl2 / d * (c2.dt_g * ds[1] - c1.dt_g * ds[0]),
            a / d * (kl1 * c1.dn_g * ds[0] - kl2 * c2.dn_g * ds[1]),
        ],
        Formulation::Classical => {
            let w = a * ds[0];
            [
                w * (c1.dn_big_g + kl1 / d * (c2.dn_big_g - c1.dn_big_g)),
                w / d * (c1.dt_g - c2.dt_g),
                w * kl1 * kl2 / d * (c1.dt_big_g - c2.dt_big_g),
                w * (c2.dn_g + kl1 / d * (c1.dn_g - c2.dn_g)),
            ]
        }
    })
}

/// Smooth remainder `B = K − A·ln(4 sin²)` of the kernel blocks.
fn smooth_part(grid: &NystromGrid, form: Formulation, target: (f64, f64), s0: f64, node: &Node) -> Result<[f64; 4]> {
    let k = kernel_blocks(&grid.cd, form, target, node, ring_jets)?;
    let a = log_blocks(grid, form, target, node)?;
    let lf = log_factor(node.s, s0, grid.contour.period());
    Ok([0, 1, 2, 3].map(|i| k[i] - a[i] * lf))
}

/// Coefficients `A` of `ln(4 sin²(π(s − s₀)/L))` in the kernel blocks.
fn log_blocks(grid: &NystromGrid, form: Formulation, target: (f64, f64), node: &Node) -> Result<[f64; 4]> {
    let p = kernel_blocks(&grid.cd, form, target, node, log_part_jets)?;
    Ok(p.map(|v| -v))
}

/// Dense `(I + K)` with unknowns ordered `[h₁…, h₂…]` and rows `[u_r…, u_z…]`.
#[derive(Debug, Clone)]
pub struct BieSystem {
    pub grid: NystromGrid,
    pub matrix: DMatrix<f64>,
    pub formulation: Formulation,
}

pub fn assemble(c: &Contour, cd: &CharacteristicData, n: usize) -> Result<BieSystem> {
    assemble_with(c, cd, n, Formulation::Derived)
}

pub fn assemble_with(c: &Contour, cd: &CharacteristicData, n: usize, form: Formulation) -> Result<BieSystem> {
    let grid = NystromGrid::new(c, cd, n)?;
    let rows: Vec<Vec<[f64; 4]>> = (0..n)
        .into_par_iter()
        .map(|i| row_blocks(&grid, form, i))
        .collect::<Result<_>>()?;
    let mut m = DMatrix::<f64>::identity(2 * n, 2 * n);
    for (i, row) in rows.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            m[(i, j)] += b[0];
            m[(i, n + j)] += b[1];
            m[(n + i, j)] += b[2];
            m[(n + i, n + j)] += b[3];
        }
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("system matrix"));
    }
    Ok(BieSystem {
        grid,
        matrix: m,
        formulation: form,
    })
}

/// Quadrature weights of row `i` for all source nodes.
fn row_blocks(grid: &NystromGrid, form: Formulation, i: usize) -> Result<Vec<[f64; 4]>> {
    let n = grid.len();
    let xi = &grid.nodes[i];
    let target = (xi.r, xi.z);
    let mut out = Vec::with_capacity(n);
    for (j, nj) in grid.nodes.iter().enumerate() {
        let a = log_blocks(grid, form, target, nj)?;
        let b = if j == i {
            diagonal_smooth(grid, form, xi)?
        } else {
            smooth_part(grid, form, target, xi.s, nj)?
        };
        let lw = grid.log_w[(j + n - i) % n];
        out.push([0, 1, 2, 3].map(|k| grid.h * b[k] + lw * a[k]));
    }
    Ok(out)
}

/// `B(s₀, s₀)` by symmetric Richardson extrapolation from `s₀ ± η`, `s₀ ± η/2`.
fn diagonal_smooth(grid: &NystromGrid, form: Formulation, xi: &Node) -> Result<[f64; 4]> {
    let eta = grid.contour.period() / (8.0 * grid.len() as f64);
    let target = (xi.r, xi.z);
    let avg = |e: f64| -> Result<[f64; 4]> {
        let p = smooth_part(grid, form, target, xi.s, &Node::at(&grid.contour, &grid.cd, xi.s + e)?)?;
        let m = smooth_part(grid, form, target, xi.s, &Node::at(&grid.contour, &grid.cd, xi.s - e)?)?;
        Ok([0, 1, 2, 3].map(|k| 0.5 * (p[k] + m[k])))
    };
    let (b1, b2) = (avg(eta)?, avg(0.5 * eta)?);
    Ok([0, 1, 2, 3].map(|k| (4.0 * b2[k] - b1[k]) / 3.0))
}

/// Boundary densities at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPair {
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
}

impl DensityPair {
    pub fn zeros(n: usize) -> Self {
        Self {
            h1: vec![0.0; n],
            h2: vec![0.0; n],
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.h1.iter().chain(&self.h2).fold(0.0f64, |m, v| m.max(v.abs()))
    }

    fn stacked(&self) -> DVector<f64> {
        DVector::from_iterator(self.h1.len() * 2, self.h1.iter().chain(&self.h2).copied())
    }
}

impl BieSystem {
    pub fn n(&self) -> usize {
        self.grid.len()
    }

    /// `(I + K)h`, split into the two rows.
    pub fn apply(&self, h: &DensityPair) -> (Vec<f64>, Vec<f64>) {
        let y = &self.matrix * h.stacked();
        let n = self.n();
        (
            y.rows(0, n).iter().copied().collect(),
            y.rows(n, n).iter().copied().collect(),
        )
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .matrix
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// 2-norm condition number.
    pub fn condition_number(&self) -> f64 {
        let s = self.singular_values();
        s[0] / s[s.len() - 1]
    }

    /// `max |a_ij|` of the compact part `K`.
    pub fn compact_norm(&self) -> f64 {
        let n = 2 * self.n();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let v = self.matrix[(i, j)] - if i == j { 1.0 } else { 0.0 };
                m = m.max(v.abs());
            }
        }
        m
    }
}

/// Dense LU solve of `(I + K)h = g`.
pub fn solve(sys: &BieSystem, g1: &[f64], g2: &[f64]) -> Result<DensityPair> {
    let n = sys.n();
    if g1.len() != n || g2.len() != n {
        return Err(Error::InvalidParameter(format!(
            "data length ({}, {}) does not match {n} nodes",
            g1.len(),
            g2.len()
        )));
    }
    if g1.iter().chain(g2).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("boundary data"));
    }
    let rhs = DVector::from_iterator(2 * n, g1.iter().chain(g2).copied());
    let lu = sys.matrix.clone().lu();
    let x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSystem("LU pivot vanished".into()))?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem("non-finite solution".into()));
    }
    Ok(DensityPair {
        h1: x.rows(0, n).iter().copied().collect(),
        h2: x.rows(n, n).iter().copied().collect(),
    })
}

/// `max |(I + K)h − g|`.
pub fn residual(sys: &BieSystem, h: &DensityPair, g1: &[f64], g2: &[f64]) -> f64 {
    let (a, b) = sys.apply(h);
    a.iter()
        .zip(g1)
        .chain(b.iter().zip(g2))
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// `(γ₁₁, γ₂₁, γ₁₂, γ₂₂)` for densities `(h₁, h₂)` at one node.
pub fn gammas(h1: f64, h2: f64, cd: &CharacteristicData) -> Result<(f64, f64, f64, f64)> {
    let d = cd.delta;
    if d == 0.0 || !d.is_finite() {
        return Err(Error::ZeroDelta);
    }
    Ok((-cd.k_lambda(1) * h1 / d, cd.k_lambda(0) * h1 / d, -h2 / d, h2 / d))
}

/// Result of the boundary-limit check at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpCheck {
    /// Extrapolated interior limit `(u_r, u_z)`.
    pub interior_limit: [f64; 2],
    /// `h(s₀) + K h(s₀)` from the assembled system.
    pub direct_value: [f64; 2],
    pub jump_error: f64,
    /// Values at the offsets `ε`, largest first.
    pub ladder: [[f64; 2]; 3],
    pub offsets: [f64; 3],
}

/// Interior limit at node `i` from points `X(s₀) + ε n`, `ε ∈ {1e-2, 1e-3, 1e-4}·scale`,
/// extrapolated to `ε = 0` and compared with the discrete boundary operator.
pub fn jump_check(sys: &BieSystem, h: &DensityPair, i: usize) -> Result<JumpCheck> {
    let grid = &sys.grid;
    let node = &grid.nodes[i];
    let scale = grid.contour.scale();
    let offsets = [1e-2 * scale, 1e-3 * scale, 1e-4 * scale];
    let dens = field::DensityInterpolant::new(grid, h);
    let mut ladder = [[0.0; 2]; 3];
    for (k, &e) in offsets.iter().enumerate() {
        let (r, z) = (node.r + e * node.normal[0], node.z + e * node.normal[1]);
        ladder[k] = field::displacement_adaptive(grid, &dens, sys.formulation, r, z)?;
    }
    let lim = [0, 1].map(|c| extrapolate_to_zero(&offsets, &[ladder[0][c], ladder[1][c], ladder[2][c]]));
    let (a, b) = sys.apply(h);
    let direct = [a[i], b[i]];
    let err = (lim[0] - direct[0]).abs().max((lim[1] - direct[1]).abs());
    Ok(JumpCheck {
        interior_limit: lim,
        direct_value: direct,
        jump_error: err,
        ladder,
        offsets,
    })
}

/// Value at 0 of the quadratic through three samples.
pub fn extrapolate_to_zero(x: &[f64; 3], y: &[f64; 3]) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        let mut l = 1.0;
        for j in 0..3 {
            if i != j {
                l *= x[j] / (x[j] - x[i]);
            }
        }
        s += l * y[i];
    }
    s
}
