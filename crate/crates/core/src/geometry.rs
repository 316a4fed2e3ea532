//! Meridional boundary curves, their frames and the affinely stretched frames
//! of the planes `(r, λz)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position and parametric derivatives at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub r: f64,
    pub z: f64,
    pub dr: f64,
    pub dz: f64,
    pub ddr: f64,
    pub ddz: f64,
}

/// Serialized description of a contour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContourSpec {
    Torus {
        #[serde(rename = "R0")]
        r0: f64,
        rho: f64,
    },
    Sphere {
        #[serde(rename = "R")]
        radius: f64,
    },
    Samples {
        r: Vec<f64>,
        z: Vec<f64>,
    },
}

#[derive(Debug, Clone)]
enum Shape {
    Torus { r0: f64, rho: f64 },
    Sphere { radius: f64 },
    Spline { r: PeriodicSpline, z: PeriodicSpline },
}

/// Closed meridional curve parametrised on `[0, L)`.
#[derive(Debug, Clone)]
pub struct Contour {
    shape: Shape,
    period: f64,
    axis_touching: bool,
    orientation: f64,
}

const DENSE: usize = 4096;

impl Contour {
    pub fn from_spec(spec: &ContourSpec) -> Result<Self> {
        match spec {
            ContourSpec::Torus { r0, rho } => Self::torus(*r0, *rho),
            ContourSpec::Sphere { radius } => Self::sphere(*radius),
            ContourSpec::Samples { r, z } => Self::samples(r, z),
        }
    }

    /// `r = R₀ + ρ cos s`, `z = ρ sin s`, `s ∈ [0, 2π)`.
    pub fn torus(r0: f64, rho: f64) -> Result<Self> {
        if !(r0.is_finite() && rho.is_finite() && rho > 0.0 && r0 > rho) {
            return Err(Error::InvalidParameter(format!(
                "torus needs R0 > rho > 0, got R0={r0}, rho={rho}"
            )));
        }
        Ok(Self::finish(Shape::Torus { r0, rho }, 2.0 * PI, false))
    }

    /// Meridian semicircle `r = R sin s`, `z = R cos s`, `s ∈ [0, π]`.
    pub fn sphere(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!("sphere needs R > 0, got {radius}")));
        }
        Ok(Self::finish(Shape::Sphere { radius }, PI, true))
    }

    /// Periodic cubic spline through closed samples at equispaced parameters on
    /// `[0, 2π)`. A repeated closing sample is dropped.
    pub fn samples(r: &[f64], z: &[f64]) -> Result<Self> {
        if r.len() != z.len() {
            return Err(Error::InvalidParameter("r and z sample counts differ".into()));
        }
        let mut n = r.len();
        if n >= 2 {
            let size = r.iter().chain(z).fold(0.0f64, |m, v| m.max(v.abs()));
            if (r[0] - r[n - 1]).hypot(z[0] - z[n - 1]) <= 1e-12 * size {
                n -= 1;
            }
        }
        if n < 8 {
            return Err(Error::InvalidParameter(format!(
                "need at least 8 distinct samples, got {n}"
            )));
        }
        if r[..n].iter().chain(&z[..n]).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("contour sample"));
        }
        if r[..n].iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidParameter(
                "sampled contours must stay off the axis (r > 0)".into(),
            ));
        }
        let period = 2.0 * PI;
        let shape = Shape::Spline {
            r: PeriodicSpline::new(&r[..n], period),
            z: PeriodicSpline::new(&z[..n], period),
        };
        Ok(Self::finish(shape, period, false))
    }

    fn finish(shape: Shape, period: f64, axis_touching: bool) -> Self {
        let mut c = Self {
            shape,
            period,
            axis_touching,
            orientation: 1.0,
        };
        c.orientation = if c.signed_area() >= 0.0 { 1.0 } else { -1.0 };
        c
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn axis_touching(&self) -> bool {
        self.axis_touching
    }

    /// `+1` when the curve runs counter-clockwise in the `(r, z)` plane.
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn eval(&self, s: f64) -> ContourPoint {
        match &self.shape {
            Shape::Torus { r0, rho } => {
                let (sn, cs) = s.sin_cos();
                ContourPoint {
                    r: r0 + rho * cs,
                    z: rho * sn,
                    dr: -rho * sn,
                    dz: rho * cs,
                    ddr: -rho * cs,
                    ddz: -rho * sn,
                }
            }
            Shape::Sphere { radius } => {
                let (sn, cs) = s.sin_cos();
                ContourPoint {
                    r: radius * sn,
                    z: radius * cs,
                    dr: radius * cs,
                    dz: -radius * sn,
                    ddr: -radius * sn,
                    ddz: -radius * cs,
                }
            }
            Shape::Spline { r, z } => {
                let (r0, r1, r2) = r.eval(s);
                let (z0, z1, z2) = z.eval(s);
                ContourPoint {
                    r: r0,
                    z: z0,
                    dr: r1,
                    dz: z1,
                    ddr: r2,
                    ddz: z2,
                }
            }
        }
    }

    /// Dense polyline including the closing axis segment for axis-touching curves.
    pub fn polyline(&self, n: usize) -> Vec<(f64, f64)> {
        let count = if self.axis_touching { n + 1 } else { n };
        (0..count)
            .map(|i| {
                let p = self.eval(self.period * i as f64 / n as f64);
                (p.r, p.z)
            })
            .collect()
    }

    /// Half the larger of the `r` and `z` extents.
    pub fn scale(&self) -> f64 {
        let pts = self.polyline(DENSE);
        let ext = |f: fn(&(f64, f64)) -> f64| {
            let lo = pts.iter().map(f).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        0.5 * ext(|p| p.0).max(ext(|p| p.1))
    }

    fn signed_area(&self) -> f64 {
        // ½∮(r dz − z dr); the axis segment contributes nothing
        let n = DENSE;
        let h = self.period / n as f64;
        let count = if self.axis_touching { n + 1 } else { n };
        let f = |s: f64| {
            let p = self.eval(s);
            0.5 * (p.r * p.dz - p.z * p.dr)
        };
        if self.axis_touching {
            // composite Simpson on the open arc
            (0..count)
                .map(|i| {
                    let w = if i == 0 || i == n {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    w * f(h * i as f64)
                })
                .sum::<f64>()
                * h
                / 3.0
        } else {
            (0..n).map(|i| f(h * i as f64)).sum::<f64>() * h
        }
    }

    /// Point-in-region test in the meridional half-plane.
    pub fn contains(&self, r: f64, z: f64) -> bool {
        let pts = self.polyline(DENSE);
        let mut inside = false;
        let n = pts.len();
        for i in 0..n {
            let (r1, z1) = pts[i];
            let (r2, z2) = pts[(i + 1) % n];
            if (z1 > z) != (z2 > z) {
                let x = r1 + (z - z1) * (r2 - r1) / (z2 - z1);
                if r < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Closest parameter and distance from `(r, z)` to the curve.
    pub fn closest(&self, r: f64, z: f64) -> (f64, f64) {
        let n = 1024;
        let h = self.period / n as f64;
        let count = if self.axis_touching { n + 1 } else { n };
        let d2 = |s: f64| {
            let p = self.eval(s);
            (p.r - r).powi(2) + (p.z - z).powi(2)
        };
        let mut best = (0.0, f64::INFINITY);
        for i in 0..count {
            let s = h * i as f64;
            let d = d2(s);
            if d < best.1 {
                best = (s, d);
            }
        }
        let mut s = best.0;
        for _ in 0..30 {
            let p = self.eval(s);
            let (ex, ez) = (p.r - r, p.z - z);
            let g = ex * p.dr + ez * p.dz;
            let hss = p.dr * p.dr + p.dz * p.dz + ex * p.ddr + ez * p.ddz;
            if hss <= 0.0 {
                break;
            }
            let step = (g / hss).clamp(-h, h);
            let mut t = s - step;
            if self.axis_touching {
                t = t.clamp(0.0, self.period);
            }
            s = t;
            if step.abs() < 1e-15 * self.period {
                break;
            }
        }
        let d = d2(s).min(best.1);
        let s = if d2(s) <= best.1 { s } else { best.0 };
        let s = if self.axis_touching {
            s
        } else {
            s.rem_euclid(self.period)
        };
        (s, d.sqrt())
    }

    /// Distance from `(r, z)` to the curve (the axis segment is not part of the boundary).
    pub fn distance(&self, r: f64, z: f64) -> f64 {
        self.closest(r, z).1
    }
}

/// Unit inward normal and unit tangent in the physical plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub normal: [f64; 2],
    pub tangent: [f64; 2],
}

/// Physical frame with the normal fixed to point into the region.
pub fn frame(c: &Contour, s: f64) -> Result<Frame> {
    let p = c.eval(s);
    let n2 = p.dr * p.dr + p.dz * p.dz;
    if n2 < 1e-20 {
        return Err(Error::DegeneratePoint(s));
    }
    let l = n2.sqrt();
    let o = c.orientation();
    Ok(Frame {
        normal: [-o * p.dz / l, o * p.dr / l],
        tangent: [p.dr / l, p.dz / l],
    })
}

/// Direction cosines and arc factor in the plane `(r, λz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedFrame {
    pub n1k: f64,
    pub n2k: f64,
    /// `√(r'² + λ²z'²)`
    pub dsk: f64,
    pub r: f64,
}

pub fn transformed_frame(c: &Contour, s: f64, lambda: f64) -> Result<TransformedFrame> {
    let p = c.eval(s);
    let d2 = p.dr * p.dr + lambda * lambda * p.dz * p.dz;
    if d2 < 1e-20 {
        return Err(Error::DegeneratePoint(s));
    }
    let l = d2.sqrt();
    let o = c.orientation();
    Ok(TransformedFrame {
        n1k: -o * lambda * p.dz / l,
        n2k: o * p.dr / l,
        dsk: l,
        r: p.r,
    })
}

/// Periodic interpolating cubic spline on equispaced knots.
#[derive(Debug, Clone)]
struct PeriodicSpline {
    y: Vec<f64>,
    m: Vec<f64>,
    h: f64,
    period: f64,
}

impl PeriodicSpline {
    fn new(y: &[f64], period: f64) -> Self {
        let n = y.len();
        let h = period / n as f64;
        // cyclic system (M_{i−1} + 4M_i + M_{i+1}) h/6 = (y_{i+1} − 2y_i + y_{i−1})/h
        let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
        let mut b = nalgebra::DVector::<f64>::zeros(n);
        for i in 0..n {
            let (im, ip) = ((i + n - 1) % n, (i + 1) % n);
            a[(i, im)] += h / 6.0;
            a[(i, i)] += 4.0 * h / 6.0;
            a[(i, ip)] += h / 6.0;
            b[i] = (y[ip] - 2.0 * y[i] + y[im]) / h;
        }
        let m = a.lu().solve(&b).expect("diagonally dominant spline system");
        Self {
            y: y.to_vec(),
            m: m.iter().copied().collect(),
            h,
            period,
        }
    }

    fn eval(&self, s: f64) -> (f64, f64, f64) {
        let n = self.y.len();
        let t = s.rem_euclid(self.period) / self.h;
        let i = (t.floor() as usize).min(n - 1);
        let u = t - i as f64;
        let j = (i + 1) % n;
        let h = self.h;
        let (a, b) = (1.0 - u, u);
        let (yi, yj, mi, mj) = (self.y[i], self.y[j], self.m[i], self.m[j]);
        let v = a * yi + b * yj + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
        let d1 = (yj - yi) / h + ((1.0 - 3.0 * a * a) * mi + (3.0 * b * b - 1.0) * mj) * h / 6.0;
        let d2 = a * mi + b * mj;
        (v, d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive;

    #[test]
    fn torus_reference_points() {
        let c = Contour::torus(2.0, 1.0).unwrap();
        let p = c.eval(0.0);
        assert_eq!((p.r, p.z, p.dr, p.dz), (3.0, 0.0, 0.0, 1.0));
        let f = frame(&c, 0.0).unwrap();
        assert_eq!(f.normal, [-1.0, 0.0]);
        assert_eq!(f.tangent, [0.0, 1.0]);
        let len = adaptive(
            |s| {
                let p = c.eval(s);
                p.dr.hypot(p.dz)
            },
            0.0,
            2.0 * PI,
            1e-13,
            1e-13,
        )
        .unwrap();
        assert!((len - 2.0 * PI).abs() < 1e-10);
        assert!(Contour::torus(1.0, 1.0).is_err());
        assert!(Contour::torus(2.0, -1.0).is_err());
    }

    #[test]
    fn sphere_normal_points_inward() {
        let c = Contour::sphere(1.0).unwrap();
        let p = c.eval(PI / 2.0);
        assert!((p.r - 1.0).abs() < 1e-15 && p.z.abs() < 1e-15);
        let f = frame(&c, PI / 2.0).unwrap();
        assert!((f.normal[0] + 1.0).abs() < 1e-15 && f.normal[1].abs() < 1e-15);
        assert!(c.axis_touching());
        for i in 1..20 {
            let s = PI * i as f64 / 20.0;
            let p = c.eval(s);
            let f = frame(&c, s).unwrap();
            assert!(c.contains(p.r + 0.01 * f.normal[0], p.z + 0.01 * f.normal[1]));
            assert!(!c.contains(p.r - 0.01 * f.normal[0], p.z - 0.01 * f.normal[1]));
        }
    }

    #[test]
    fn frames_are_orthonormal() {
        let c = Contour::torus(2.0, 1.0).unwrap();
        for i in 0..100 {
            let s = 0.0628 * i as f64;
            let f = frame(&c, s).unwrap();
            let dot = f.normal[0] * f.tangent[0] + f.normal[1] * f.tangent[1];
            assert!(dot.abs() < 1e-15);
            for lambda in [0.7, 4.2] {
                let t = transformed_frame(&c, s, lambda).unwrap();
                assert!((t.n1k.hypot(t.n2k) - 1.0).abs() < 1e-14);
                assert!(t.dsk > 0.0);
            }
        }
    }

    #[test]
    fn transformed_frame_cases() {
        let c = Contour::torus(2.0, 1.0).unwrap();
        let t = transformed_frame(&c, PI / 2.0, 3.0).unwrap();
        assert!(t.n1k.abs() < 1e-15 && (t.n2k + 1.0).abs() < 1e-15);
        assert!((t.dsk - 1.0).abs() < 1e-15);
        let s = PI / 4.0;
        let f = frame(&c, s).unwrap();
        let t1 = transformed_frame(&c, s, 1.0).unwrap();
        assert!((t1.n1k - f.normal[0]).abs() < 1e-15 && (t1.n2k - f.normal[1]).abs() < 1e-15);
        let p = c.eval(s);
        let (x, y) = (-2.0 * p.dz, p.dr);
        let l = x.hypot(y);
        let t2 = transformed_frame(&c, s, 2.0).unwrap();
        assert!((t2.n1k - x / l).abs() < 1e-15 && (t2.n2k - y / l).abs() < 1e-15);
    }

    #[test]
    fn inside_test_and_distance() {
        let c = Contour::torus(2.0, 1.0).unwrap();
        assert!(c.contains(2.0, 0.0));
        assert!(c.contains(2.9, 0.0));
        assert!(!c.contains(3.1, 0.0));
        assert!(!c.contains(0.5, 0.0));
        assert!((c.distance(2.0, 0.0) - 1.0).abs() < 1e-12);
        assert!((c.distance(5.0, 0.0) - 2.0).abs() < 1e-12);
        let (s, d) = c.closest(2.0 + 0.5 * 0.3f64.cos(), 0.5 * 0.3f64.sin());
        assert!((s - 0.3).abs() < 1e-10 && (d - 0.5).abs() < 1e-12);
        assert!((c.scale() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn spline_contour_reproduces_torus() {
        let n = 128;
        let s: Vec<f64> = (0..=n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let r: Vec<f64> = s.iter().map(|s| 2.0 + s.cos()).collect();
        let z: Vec<f64> = s.iter().map(|s| s.sin()).collect();
        let c = Contour::samples(&r, &z).unwrap();
        let t = Contour::torus(2.0, 1.0).unwrap();
        for i in 0..50 {
            let x = 0.1234 * i as f64;
            let (a, b) = (c.eval(x), t.eval(x));
            assert!((a.r - b.r).abs() < 1e-6 && (a.z - b.z).abs() < 1e-6);
            assert!(
                (a.dr - b.dr).abs() < 1e-4 && (a.dz - b.dz).abs() < 1e-4,
                "{x} {a:?} {b:?}"
            );
        }
        assert_eq!(c.orientation(), 1.0);
        assert!(Contour::samples(&[1.0; 4], &[0.0; 4]).is_err());
    }
}
