//! Bessel functions `J₀`, `J₁` of real non-negative argument.

/// Switch to the Hankel asymptotic expansion at and above this argument.
const ASYMPTOTIC_FROM: f64 = 25.0;

/// `(J₀(x), J₁(x))`. Small and moderate arguments use Miller's backward
/// recurrence normalised with `J₀ + 2ΣJ_{2k} = 1`; large ones the asymptotic expansion.
pub fn bessel_j01(x: f64) -> (f64, f64) {
    let x = x.abs();
    if x >= ASYMPTOTIC_FROM {
        return (asymptotic(0.0, x), asymptotic(1.0, x));
    }
    miller(x)
}

fn asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (0.0, 0.0);
    let mut term = 1.0;
    for k in 0..60 {
        if k % 2 == 0 {
            p += if (k / 2) % 2 == 0 { term } else { -term };
        } else {
            q += if (k / 2) % 2 == 0 { term } else { -term };
        }
        let odd = (2 * k + 1) as f64;
        let next = term * (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
        if next.abs() < 1e-18 {
            break;
        }
        term = next;
    }
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn miller(x: f64) -> (f64, f64) {
    if x < 1e-3 {
        let x2 = x * x;
        return (
            1.0 - x2 / 4.0 + x2 * x2 / 64.0,
            x / 2.0 - x * x2 / 16.0 + x * x2 * x2 / 384.0,
        );
    }
    let mut n = (x + 25.0 + (40.0 * x).sqrt()) as usize;
    n += n % 2;
    let (mut jp, mut j) = (0.0f64, 1e-30f64);
    let mut sum = 0.0;
    let mut j1 = 0.0;
    let mut j0 = 0.0;
    for k in (1..=n).rev() {
        let jm = 2.0 * k as f64 / x * j - jp;
        jp = j;
        j = jm;
        let idx = k - 1;
        if idx % 2 == 0 && idx > 0 {
            sum += 2.0 * j;
        }
        if idx == 1 {
            j1 = j;
        }
        if idx == 0 {
            j0 = j;
        }
        if j.abs() > 1e200 {
            j *= 1e-200;
            jp *= 1e-200;
            sum *= 1e-200;
            j1 *= 1e-200;
            j0 *= 1e-200;
        }
    }
    let norm = sum + j0;
    (j0 / norm, j1 / norm)
}

/// `J₁'(x) = J₀(x) − J₁(x)/x`.
pub fn bessel_j1_prime(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        return 0.5 - 3.0 * x2 / 16.0 + 5.0 * x2 * x2 / 384.0;
    }
    let (j0, j1) = bessel_j01(x);
    j0 - j1 / x
}
