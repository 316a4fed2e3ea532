//! Elastic constants of a hexagonal (transversely isotropic) medium and the
//! characteristic data of its quasi-harmonic decomposition.
//!
//! The displacements are written as `u_r = ∂φ₁/∂r + ∂φ₂/∂r`,
//! `u_z = k₁ ∂φ₁/∂z + k₂ ∂φ₂/∂z`, where each potential solves
//! `φ_rr + φ_r/r + φ_zz/λ² = 0`. The roots `λ_j²` are the two roots of a
//! quadratic in `μ = λ²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum relative gap between the two characteristic roots.
pub const ROOT_GAP_TOL: f64 = 1e-8;
/// Minimum `|δ| / |k₁λ₁|`.
pub const DELTA_TOL: f64 = 1e-10;

/// The five axisymmetric stiffness coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticConstants {
    pub a11: f64,
    pub a12: f64,
    pub a13: f64,
    pub a33: f64,
    pub a44: f64,
}

impl ElasticConstants {
    pub fn new(a11: f64, a12: f64, a13: f64, a33: f64, a44: f64) -> Self {
        Self {
            a11,
            a12,
            a13,
            a33,
            a44,
        }
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::new(self.a11 * t, self.a12 * t, self.a13 * t, self.a33 * t, self.a44 * t)
    }
}

/// Elastic constants that passed [`validate_constants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidatedMaterial(ElasticConstants);

impl ValidatedMaterial {
    pub fn constants(&self) -> &ElasticConstants {
        &self.0
    }
}

/// Checks finiteness and positive definiteness of the axisymmetric stiffness block.
pub fn validate_constants(c: ElasticConstants) -> Result<ValidatedMaterial> {
    let fields = [
        ("a11", c.a11),
        ("a12", c.a12),
        ("a13", c.a13),
        ("a33", c.a33),
        ("a44", c.a44),
    ];
    for (name, v) in fields {
        if !v.is_finite() {
            return Err(Error::NonFinite(name));
        }
    }
    if c.a44 <= 0.0 {
        return Err(Error::NotPositiveDefinite("a44 must be > 0"));
    }
    if c.a11 <= c.a12.abs() {
        return Err(Error::NotPositiveDefinite("a11 must exceed |a12|"));
    }
    if (c.a11 + c.a12) * c.a33 <= 2.0 * c.a13 * c.a13 {
        return Err(Error::NotPositiveDefinite("(a11 + a12)*a33 must exceed 2*a13^2"));
    }
    Ok(ValidatedMaterial(c))
}

/// Which quadratic in `μ = λ²` defines the characteristic roots.
///
/// `Equilibrium` has middle coefficient `a13(a13 + 2a44) − a11·a33`; its roots make
/// the potential representation satisfy both equilibrium equations together with the
/// `k_j` formula. `ShearMiddle` uses `a13(a13 + 2a44) − a11·a44`, which only satisfies
/// the radial equilibrium equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuarticForm {
    #[default]
    Equilibrium,
    ShearMiddle,
}

impl QuarticForm {
    /// Coefficients `(c0, c1, c2)` of `c0 + c1·μ + c2·μ²`.
    pub fn coefficients(self, c: &ElasticConstants) -> (f64, f64, f64) {
        let middle = match self {
            QuarticForm::Equilibrium => c.a11 * c.a33,
            QuarticForm::ShearMiddle => c.a11 * c.a44,
        };
        (c.a11 * c.a44, c.a13 * (c.a13 + 2.0 * c.a44) - middle, c.a33 * c.a44)
    }

    /// Residual of the characteristic quartic at `λ`.
    pub fn residual(self, c: &ElasticConstants, lambda: f64) -> f64 {
        let (c0, c1, c2) = self.coefficients(c);
        let mu = lambda * lambda;
        c0 + c1 * mu + c2 * mu * mu
    }
}

/// Characteristic roots and coupling coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicData {
    pub lambda1: f64,
    pub lambda2: f64,
    pub k1: f64,
    pub k2: f64,
    pub delta: f64,
    pub form: QuarticForm,
}

impl CharacteristicData {
    /// `λ_j` for branch `j ∈ {0, 1}`.
    pub fn lambda(&self, j: usize) -> f64 {
        [self.lambda1, self.lambda2][j]
    }

    pub fn k(&self, j: usize) -> f64 {
        [self.k1, self.k2][j]
    }

    /// `k_j λ_j`.
    pub fn k_lambda(&self, j: usize) -> f64 {
        self.k(j) * self.lambda(j)
    }
}

/// Characteristic data from the equilibrium-consistent quartic.
pub fn characteristic_data(c: &ValidatedMaterial) -> Result<CharacteristicData> {
    characteristic_data_with(c, QuarticForm::Equilibrium)
}

pub fn characteristic_data_with(c: &ValidatedMaterial, form: QuarticForm) -> Result<CharacteristicData> {
    let e = c.constants();
    let (c0, c1, c2) = form.coefficients(e);
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return Err(Error::ComplexRoots);
    }
    let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
    if q == 0.0 {
        return Err(Error::ComplexRoots);
    }
    let mut mus = [q / c2, c0 / q];
    if !(mus[0] > 0.0 && mus[1] > 0.0) {
        return Err(Error::ComplexRoots);
    }
    for mu in mus.iter_mut() {
        // one Newton step removes the rounding left by the closed form
        let f = c0 + *mu * (c1 + c2 * *mu);
        let df = c1 + 2.0 * c2 * *mu;
        if df != 0.0 {
            *mu -= f / df;
        }
    }
    let (mut l1, mut l2) = (mus[0].sqrt(), mus[1].sqrt());
    if l1 < l2 {
        std::mem::swap(&mut l1, &mut l2);
    }
    let gap = (l1 - l2) / l1;
    if gap < ROOT_GAP_TOL {
        return Err(Error::DegenerateRoots { gap });
    }
    let denom = e.a13 + e.a44;
    if denom == 0.0 {
        return Err(Error::DomainError(
            "a13 + a44 vanishes; coupling coefficients undefined".into(),
        ));
    }
    let k_of = |l: f64| (e.a11 - e.a44 * l * l) / (l * l * denom);
    let (k1, k2) = (k_of(l1), k_of(l2));
    let delta = k1 * l1 - k2 * l2;
    if !delta.is_finite() || delta.abs() < DELTA_TOL * (k1 * l1).abs().max(f64::MIN_POSITIVE) {
        return Err(Error::ZeroDelta);
    }
    Ok(CharacteristicData {
        lambda1: l1,
        lambda2: l2,
        k1,
        k2,
        delta,
        form,
    })
}

/// Displacement gradient at one point. `ur_over_r` is supplied by the caller so the
/// axis limit can be taken upstream.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DisplacementGradientSample {
    pub dur_dr: f64,
    pub ur_over_r: f64,
    pub duz_dz: f64,
    pub dur_dz: f64,
    pub duz_dr: f64,
}

/// Axisymmetric stress state: radial, hoop, shear and axial components.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StressSample {
    pub rr: f64,
    pub hoop: f64,
    pub rz: f64,
    pub zz: f64,
}

/// Hooke's law for the axisymmetric strain state.
pub fn stresses_from_fields(
    c: &ValidatedMaterial,
    _cd: &CharacteristicData,
    du: &DisplacementGradientSample,
) -> Result<StressSample> {
    let vals = [du.dur_dr, du.ur_over_r, du.duz_dz, du.dur_dz, du.duz_dr];
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("displacement gradient"));
    }
    let e = c.constants();
    Ok(StressSample {
        rr: e.a11 * du.dur_dr + e.a12 * du.ur_over_r + e.a13 * du.duz_dz,
        hoop: e.a12 * du.dur_dr + e.a11 * du.ur_over_r + e.a13 * du.duz_dz,
        rz: e.a44 * (du.dur_dz + du.duz_dr),
        zz: e.a13 * (du.dur_dr + du.ur_over_r) + e.a33 * du.duz_dz,
    })
}

/// `(σ_zz, σ_rz)` directly from the potentials' second derivatives
/// `φ_j,zz` and `φ_j,rz` (physical coordinates).
pub fn potential_stresses(
    c: &ValidatedMaterial,
    cd: &CharacteristicData,
    phi_zz: [f64; 2],
    phi_rz: [f64; 2],
) -> (f64, f64) {
    let e = c.constants();
    let mut zz = 0.0;
    let mut rz = 0.0;
    for j in 0..2 {
        let (l, k) = (cd.lambda(j), cd.k(j));
        zz += (e.a33 * k - e.a13 / (l * l)) * phi_zz[j];
        rz += e.a44 * (1.0 + k) * phi_rz[j];
    }
    (zz, rz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> ValidatedMaterial {
        validate_constants(ElasticConstants::new(20.0, 5.0, 1.0, 2.0, 1.0)).unwrap()
    }

    /// Leading principal minors of the 4x4 axisymmetric stiffness matrix.
    fn minors_positive(c: &ElasticConstants) -> bool {
        let m = nalgebra::Matrix4::new(
            c.a11, c.a12, c.a13, 0.0, //
            c.a12, c.a11, c.a13, 0.0, //
            c.a13, c.a13, c.a33, 0.0, //
            0.0, 0.0, 0.0, c.a44,
        );
        (1..=4).all(|k| m.view((0, 0), (k, k)).determinant() > 0.0)
    }

    #[test]
    fn reference_material_is_valid() {
        let c = ElasticConstants::new(20.0, 5.0, 1.0, 2.0, 1.0);
        assert!(minors_positive(&c));
        assert!(validate_constants(c).is_ok());
    }

    #[test]
    fn rejects_indefinite_materials() {
        let e = validate_constants(ElasticConstants::new(1.0, 2.0, 0.0, 1.0, 1.0)).unwrap_err();
        assert_eq!(e, Error::NotPositiveDefinite("a11 must exceed |a12|"));
        let e = validate_constants(ElasticConstants::new(20.0, 5.0, 1.0, 2.0, 0.0)).unwrap_err();
        assert_eq!(e, Error::NotPositiveDefinite("a44 must be > 0"));
        let e = validate_constants(ElasticConstants::new(f64::NAN, 5.0, 1.0, 2.0, 1.0)).unwrap_err();
        assert_eq!(e, Error::NonFinite("a11"));
    }

    #[test]
    fn validation_agrees_with_principal_minors() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let c = ElasticConstants::new(
                rng.random_range(0.1..10.0),
                rng.random_range(-10.0..10.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(0.1..10.0),
                rng.random_range(-1.0..5.0),
            );
            assert_eq!(validate_constants(c).is_ok(), minors_positive(&c), "{c:?}");
        }
    }

    #[test]
    fn shear_middle_quartic_reference_roots() {
        // 2μ² − 17μ + 20 = 0
        let cd = characteristic_data_with(&reference(), QuarticForm::ShearMiddle).unwrap();
        let disc: f64 = 17.0 * 17.0 - 4.0 * 2.0 * 20.0;
        let mu1 = (17.0 + disc.sqrt()) / 4.0;
        let mu2 = (17.0 - disc.sqrt()) / 4.0;
        assert!((cd.lambda1 - mu1.sqrt()).abs() < 1e-13);
        assert!((cd.lambda2 - mu2.sqrt()).abs() < 1e-13);
        assert!((cd.lambda1 - 2.66260).abs() < 1e-5);
        assert!((cd.lambda2 - 1.18767).abs() < 1e-5);
        let k = |mu: f64| (20.0 - mu) / (2.0 * mu);
        assert!((cd.k1 - k(mu1)).abs() < 1e-12);
        assert!((cd.k2 - k(mu2)).abs() < 1e-12);
        assert!((cd.delta - (k(mu1) * mu1.sqrt() - k(mu2) * mu2.sqrt())).abs() < 1e-12);
        assert!((cd.k1 - 0.91055).abs() < 1e-4);
        assert!((cd.k2 - 6.58944).abs() < 1e-4);
        assert!((cd.delta + 5.40169).abs() < 1e-4);
    }

    #[test]
    fn equilibrium_quartic_reference_roots() {
        // 2μ² − 37μ + 20 = 0
        let cd = characteristic_data(&reference()).unwrap();
        let disc: f64 = 37.0 * 37.0 - 160.0;
        assert!((cd.lambda1 - ((37.0 + disc.sqrt()) / 4.0).sqrt()).abs() < 1e-13);
        assert!((cd.lambda2 - ((37.0 - disc.sqrt()) / 4.0).sqrt()).abs() < 1e-13);
        let e = reference();
        for j in 0..2 {
            let r = QuarticForm::Equilibrium.residual(e.constants(), cd.lambda(j));
            assert!(r.abs() <= 1e-12 * 20.0);
        }
    }

    #[test]
    fn complex_and_degenerate_roots() {
        let m = validate_constants(ElasticConstants::new(3.0, 0.0, 1.0, 3.0, 1.0)).unwrap();
        assert_eq!(
            characteristic_data_with(&m, QuarticForm::ShearMiddle).unwrap_err(),
            Error::ComplexRoots
        );
        // the same constants give a double root of the equilibrium quartic
        assert!(matches!(
            characteristic_data(&m).unwrap_err(),
            Error::DegenerateRoots { .. }
        ));
        // isotropic: a11 = a33 = λ+2μ, a13 = λ, a44 = μ
        let iso = validate_constants(ElasticConstants::new(3.0, 1.0, 1.0, 3.0, 1.0)).unwrap();
        assert!(matches!(
            characteristic_data(&iso).unwrap_err(),
            Error::DegenerateRoots { .. }
        ));
    }

    #[test]
    fn scaling_invariance() {
        let a = characteristic_data(&reference()).unwrap();
        let b = characteristic_data(&validate_constants(reference().constants().scaled(10.0)).unwrap()).unwrap();
        for (x, y) in [
            (a.lambda1, b.lambda1),
            (a.lambda2, b.lambda2),
            (a.k1, b.k1),
            (a.k2, b.k2),
            (a.delta, b.delta),
        ] {
            assert!((x - y).abs() <= 1e-13 * x.abs());
        }
    }

    #[test]
    fn hooke_law_reads() {
        let m = reference();
        let cd = characteristic_data(&m).unwrap();
        let z = stresses_from_fields(&m, &cd, &DisplacementGradientSample::default()).unwrap();
        assert_eq!(z, StressSample::default());
        let du = DisplacementGradientSample {
            dur_dr: 1.0,
            ..Default::default()
        };
        let s = stresses_from_fields(&m, &cd, &du).unwrap();
        assert_eq!((s.rr, s.hoop, s.zz, s.rz), (20.0, 5.0, 1.0, 0.0));
        let bad = DisplacementGradientSample {
            duz_dr: f64::INFINITY,
            ..Default::default()
        };
        assert!(stresses_from_fields(&m, &cd, &bad).is_err());
    }
}
