//! Second-order forward jets in two variables `(r, z)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value with first and second partial derivatives in `(r, z)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub r: f64,
    pub z: f64,
    pub rr: f64,
    pub rz: f64,
    pub zz: f64,
}

impl Jet {
    pub const fn constant(v: f64) -> Self {
        Self {
            v,
            r: 0.0,
            z: 0.0,
            rr: 0.0,
            rz: 0.0,
            zz: 0.0,
        }
    }

    pub const fn var_r(v: f64) -> Self {
        Self {
            v,
            r: 1.0,
            z: 0.0,
            rr: 0.0,
            rz: 0.0,
            zz: 0.0,
        }
    }

    pub const fn var_z(v: f64) -> Self {
        Self {
            v,
            r: 0.0,
            z: 1.0,
            rr: 0.0,
            rz: 0.0,
            zz: 0.0,
        }
    }

    /// Composition `f(self)` given `f`, `f'`, `f''` at `self.v`.
    pub fn lift(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            v: f0,
            r: f1 * self.r,
            z: f1 * self.z,
            rr: f2 * self.r * self.r + f1 * self.rr,
            rz: f2 * self.r * self.z + f1 * self.rz,
            zz: f2 * self.z * self.z + f1 * self.zz,
        }
    }

    pub fn scale(self, s: f64) -> Self {
        Self {
            v: s * self.v,
            r: s * self.r,
            z: s * self.z,
            rr: s * self.rr,
            rz: s * self.rz,
            zz: s * self.zz,
        }
    }

    pub fn recip(self) -> Self {
        let i = 1.0 / self.v;
        self.lift(i, -i * i, 2.0 * i * i * i)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.lift(s, 0.5 / s, -0.25 / (s * self.v))
    }

    /// `self^p` for real `p` and positive value.
    pub fn powf(self, p: f64) -> Self {
        let x = self.v;
        let f0 = x.powf(p);
        self.lift(f0, p * f0 / x, p * (p - 1.0) * f0 / (x * x))
    }

    pub fn ln(self) -> Self {
        let i = 1.0 / self.v;
        self.lift(self.v.ln(), i, -i * i)
    }

    pub fn is_finite(&self) -> bool {
        [self.v, self.r, self.z, self.rr, self.rz, self.zz]
            .iter()
            .all(|x| x.is_finite())
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            r: self.r + o.r,
            z: self.z + o.z,
            rr: self.rr + o.rr,
            rz: self.rz + o.rz,
            zz: self.zz + o.zz,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            r: self.r * o.v + self.v * o.r,
            z: self.z * o.v + self.v * o.z,
            rr: self.rr * o.v + 2.0 * self.r * o.r + self.v * o.rr,
            rz: self.rz * o.v + self.r * o.z + self.z * o.r + self.v * o.rz,
            zz: self.zz * o.v + 2.0 * self.z * o.z + self.v * o.zz,
        }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, s: f64) -> Jet {
        Jet { v: self.v + s, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_matches_closed_form() {
        // f = r² z³ at (2, 3)
        let (r, z) = (Jet::var_r(2.0), Jet::var_z(3.0));
        let f = r * r * z * z * z;
        assert_eq!(f.v, 108.0);
        assert_eq!(f.r, 2.0 * 2.0 * 27.0);
        assert_eq!(f.z, 4.0 * 3.0 * 9.0);
        assert_eq!(f.rr, 2.0 * 27.0);
        assert_eq!(f.rz, 2.0 * 2.0 * 3.0 * 9.0);
        assert_eq!(f.zz, 4.0 * 6.0 * 3.0);
    }

    #[test]
    fn chain_rule() {
        // 1/sqrt(r² + z²) at (3, 4)
        let (r, z) = (Jet::var_r(3.0), Jet::var_z(4.0));
        let f = (r * r + z * z).sqrt().recip();
        let d = 5.0f64;
        assert!((f.v - 0.2).abs() < 1e-15);
        assert!((f.r + 3.0 / d.powi(3)).abs() < 1e-15);
        assert!((f.rr - (3.0 * 9.0 - 25.0) / d.powi(5)).abs() < 1e-15);
        assert!((f.rz - 3.0 * 12.0 / d.powi(5)).abs() < 1e-15);
        let g = (r * r + z * z).powf(-0.5);
        assert!((g.zz - f.zz).abs() < 1e-15);
    }
}
