//! Quadrature rules: Gauss–Legendre, adaptive Gauss–Kronrod and the periodic
//! logarithmic rule used for the weakly singular boundary kernels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

/// Fixed Gauss–Legendre rule mapped to arbitrary intervals.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    /// Nodes and weights on [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<const D: usize, F: FnMut(f64) -> [f64; D]>(f: &mut F, a: f64, b: f64) -> ([f64; D], f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let fc = f(c);
    let mut rk = fc.map(|v| v * WGK[7]);
    let mut rg = fc.map(|v| v * WG[3]);
    for j in 0..7 {
        let dx = h * XGK[j];
        let (fl, fr) = (f(c - dx), f(c + dx));
        for d in 0..D {
            let s = fl[d] + fr[d];
            rk[d] += WGK[j] * s;
            if j % 2 == 1 {
                rg[d] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0f64;
    for d in 0..D {
        err = err.max(((rk[d] - rg[d]) * h).abs());
    }
    (rk.map(|v| v * h), err)
}

struct Segment<const D: usize> {
    a: f64,
    b: f64,
    value: [f64; D],
    err: f64,
}

impl<const D: usize> PartialEq for Segment<D> {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl<const D: usize> Eq for Segment<D> {}
impl<const D: usize> PartialOrd for Segment<D> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const D: usize> Ord for Segment<D> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on [a, b].
///
/// Stops when the estimated error is below `max(abs_tol, rel_tol·|I|)`.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    Ok(adaptive_vec(|x| [f(x)], a, b, abs_tol, rel_tol)?[0])
}

/// Vector-valued [`adaptive`]; the error is measured in the max norm.
pub fn adaptive_vec<const D: usize, F: FnMut(f64) -> [f64; D]>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<[f64; D]> {
    const MAX_SEGMENTS: usize = 20_000;
    let norm = |v: &[f64; D]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let sum = |heap: &BinaryHeap<Segment<D>>| {
        let mut t = [0.0; D];
        for s in heap.iter() {
            for d in 0..D {
                t[d] += s.value[d];
            }
        }
        t
    };
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, err: e });
    let (mut total, mut err) = (v, e);
    while err > abs_tol.max(rel_tol * norm(&total)) {
        if !total.iter().all(|x| x.is_finite()) {
            return Err(Error::ConvergenceFailure("non-finite integrand".into()));
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::ConvergenceFailure(format!(
                "adaptive quadrature: error estimate {err:.3e} after {MAX_SEGMENTS} segments"
            )));
        }
        let s = heap.pop().expect("non-empty heap");
        let m = 0.5 * (s.a + s.b);
        let (v1, e1) = gk15(&mut f, s.a, m);
        let (v2, e2) = gk15(&mut f, m, s.b);
        for d in 0..D {
            total[d] += v1[d] + v2[d] - s.value[d];
        }
        err += e1 + e2 - s.err;
        heap.push(Segment {
            a: s.a,
            b: m,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: m,
            b: s.b,
            value: v2,
            err: e2,
        });
        // refresh the running sums now and then to shed rounding drift
        if heap.len() % 64 == 0 {
            total = sum(&heap);
            err = heap.iter().map(|s| s.err).sum();
        }
    }
    Ok(sum(&heap))
}

/// Weights `R_j` of the periodic rule
/// `∫₀^{2π} ln(4 sin²((t − t_i)/2)) φ(t) dt ≈ Σ_j R_{|i−j|} φ(t_j)` on `N` equispaced nodes.
pub fn log_weights(n_nodes: usize) -> Vec<f64> {
    assert!(n_nodes >= 2 && n_nodes.is_multiple_of(2));
    let n = n_nodes / 2;
    let nf = n as f64;
    (0..n_nodes)
        .map(|j| {
            let t = j as f64 * PI / nf;
            let s: f64 = (1..n).map(|m| (m as f64 * t).cos() / m as f64).sum();
            -2.0 * PI / nf * s - PI / (nf * nf) * (nf * t).cos()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = GaussRule::new(8);
        for p in 0..16 {
            let v = rule.integrate(0.0, 2.0, |x| x.powi(p));
            let exact = 2f64.powi(p + 1) / (p + 1) as f64;
            assert!((v - exact).abs() < 1e-12 * exact, "p = {p}");
        }
        let ws: f64 = GaussRule::new(101).weights.iter().sum();
        assert!((ws - 2.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let v = adaptive(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        let v = adaptive(|x: f64| x.sin(), 0.0, PI, 1e-14, 0.0).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn log_rule_is_spectral() {
        // ∫₀^{2π} ln(4 sin²((t−s)/2)) cos(t) dt = −2π cos(s)
        for n in [16, 32] {
            let w = log_weights(n);
            for i in [0, 3] {
                let ti = 2.0 * PI * i as f64 / n as f64;
                let v: f64 = (0..n)
                    .map(|j| w[(j + n - i) % n] * (2.0 * PI * j as f64 / n as f64).cos())
                    .sum();
                assert!((v + 2.0 * PI * ti.cos()).abs() < 1e-13);
            }
        }
        // constant density integrates to zero
        let s: f64 = log_weights(64).iter().sum();
        assert!(s.abs() < 1e-13);
    }
}
