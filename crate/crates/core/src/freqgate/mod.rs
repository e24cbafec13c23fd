//! The tunable frequency beam splitter: an EOM / pulse shaper / EOM cascade
//! reduced to its 2×2 action on bins 0 and 1.

mod calibrate;
mod comb;

pub use calibrate::{calibrate_theta, Calibration, CalibrationOptions, HADAMARD_FIDELITY_TARGET};
pub use comb::{
    composed_gate_oracle, eom_matrix, shaper_matrix, truncation_adequate, CombMatrix, CombSpec,
    EomDrive, DEFAULT_K_MAX, MIN_K_MAX,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{as_f64, lit, Real};
use crate::specfun::{self, couplings};

/// Modulation depth and shaper phase of the beam splitter.
///
/// `phi` is unrestricted; every use of it is 2π-periodic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSettings<T> {
    theta: T,
    phi: T,
}

impl<T: Real> GateSettings<T> {
    pub fn new(theta: T, phi: T) -> Result<Self> {
        if !(theta >= T::zero() && theta <= lit(specfun::MAX_ARGUMENT)) {
            return Err(Error::Domain {
                what: "modulation depth theta",
                value: as_f64(theta),
                allowed: "[0, 10]",
            });
        }
        if !phi.is_finite() {
            return Err(Error::Domain {
                what: "shaper phase phi",
                value: as_f64(phi),
                allowed: "finite reals",
            });
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }
}

/// Complex 2×2 block connecting input bins {0, 1} to output bins {0, 1}.
///
/// `b01` is the amplitude from input bin 1 to output bin 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix2<T> {
    pub b00: Complex<T>,
    pub b01: Complex<T>,
    pub b10: Complex<T>,
    pub b11: Complex<T>,
}

impl<T: Real> TransferMatrix2<T> {
    pub fn new(b00: Complex<T>, b01: Complex<T>, b10: Complex<T>, b11: Complex<T>) -> Self {
        Self { b00, b01, b10, b11 }
    }

    pub fn from_real(b00: T, b01: T, b10: T, b11: T) -> Self {
        Self::new(b00.into(), b01.into(), b10.into(), b11.into())
    }

    pub fn identity() -> Self {
        Self::from_real(T::one(), T::zero(), T::zero(), T::one())
    }

    /// The 2×2 Hadamard `[[1, 1], [1, -1]] / √2`.
    pub fn hadamard() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self::from_real(h, h, h, -h)
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        [self.b00, self.b01, self.b10, self.b11]
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.b00 * c, self.b01 * c, self.b10 * c, self.b11 * c)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.b00.conj(),
            self.b10.conj(),
            self.b01.conj(),
            self.b11.conj(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(
            self.b00 * rhs.b00 + self.b01 * rhs.b10,
            self.b00 * rhs.b01 + self.b01 * rhs.b11,
            self.b10 * rhs.b00 + self.b11 * rhs.b10,
            self.b10 * rhs.b01 + self.b11 * rhs.b11,
        )
    }

    /// `M† M`.
    pub fn gram(&self) -> Self {
        self.adjoint().mul(self)
    }

    pub fn trace(&self) -> Complex<T> {
        self.b00 + self.b11
    }

    /// `tr(M† M)`, the squared Frobenius norm.
    pub fn frobenius_sq(&self) -> T {
        self.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}

/// Closed-form beam splitter:
///
/// ```text
/// b00 = e^{iφ/2} [cos φ/2 − i c1 sin φ/2]
/// b11 = e^{iφ/2} [cos φ/2 + i c1 sin φ/2]
/// b01 = b10 = −2i c2 e^{iφ/2} sin φ/2
/// ```
pub fn closed_form_gate<T: Real>(settings: GateSettings<T>) -> Result<TransferMatrix2<T>> {
    let (c1, c2) = couplings(settings.theta)?;
    Ok(gate_from_couplings(c1, c2, settings.phi))
}

pub(crate) fn gate_from_couplings<T: Real>(c1: T, c2: T, phi: T) -> TransferMatrix2<T> {
    let half = phi / lit(2.0);
    let (s, c) = half.sin_cos();
    let phase = Complex::from_polar(T::one(), half);
    let i = Complex::<T>::i();
    let b00 = phase * (Complex::from(c) - i * (c1 * s));
    let b11 = phase * (Complex::from(c) + i * (c1 * s));
    let off = phase * (-i * (lit::<T>(2.0) * c2 * s));
    TransferMatrix2::new(b00, off, off, b11)
}

/// `f(Θ) = c1² + 4 c2²`, the probability retained in the two-bin space at φ = π.
pub fn unitarity_factor<T: Real>(theta: T) -> Result<T> {
    let (c1, c2) = couplings(theta)?;
    Ok(c1 * c1 + lit::<T>(4.0) * c2 * c2)
}

/// Scale-invariant overlap with the Hadamard: `|tr(H† M)|² / (2 tr(M† M))`.
pub fn hadamard_fidelity<T: Real>(m: &TransferMatrix2<T>) -> Result<T> {
    let norm = m.frobenius_sq();
    if !(norm >= lit(1e-30)) {
        return Err(Error::Degenerate(
            "hadamard_fidelity needs a nonzero matrix",
        ));
    }
    let overlap = TransferMatrix2::hadamard().adjoint().mul(m).trace();
    Ok(overlap.norm_sqr() / (lit::<T>(2.0) * norm))
}

/// Transmission `|b00|²` and reflection `|b01|²`.
pub fn port_probabilities<T: Real>(settings: GateSettings<T>) -> Result<(T, T)> {
    let m = closed_form_gate(settings)?;
    Ok((m.b00.norm_sqr(), m.b01.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gate(theta: f64, phi: f64) -> TransferMatrix2<f64> {
        closed_form_gate(GateSettings::new(theta, phi).unwrap()).unwrap()
    }

    #[test]
    fn identity_at_zero_phase() {
        let m = gate(0.8169, 0.0);
        assert!(m.max_abs_diff(&TransferMatrix2::identity()) < 1e-15);
    }

    #[test]
    fn real_symmetric_at_pi() {
        let m = gate(0.8169, PI);
        for z in m.entries() {
            assert!(z.im.abs() < 1e-15);
        }
        assert!((m.b00.re - 0.7056).abs() < 2e-4);
        assert!((m.b01.re - 0.6915).abs() < 2e-4);
        assert!((m.b11.re + 0.7056).abs() < 2e-4);
        assert_eq!(m.b01, m.b10);
    }

    #[test]
    fn no_modulation_means_diagonal_unit_modulus() {
        for &phi in &[0.3, 1.0, PI, 5.5] {
            let m = gate(0.0, phi);
            assert_eq!(m.b01.norm(), 0.0);
            assert!((m.b00.norm() - 1.0).abs() < 1e-15);
            assert!((m.b11.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unitarity_factor_values() {
        assert_eq!(unitarity_factor(0.0).unwrap(), 1.0);
        assert!((unitarity_factor(0.8169_f64).unwrap() - 0.9760).abs() < 5e-4);
        let c2 = coupling_c2_default(2.40483);
        assert!((unitarity_factor(2.40483).unwrap() - 4.0 * c2 * c2).abs() < 1e-10);
    }

    fn coupling_c2_default(theta: f64) -> f64 {
        specfun::coupling_c2(theta, specfun::SeriesTolerance::default()).unwrap()
    }

    #[test]
    fn fidelity_basics() {
        let h = TransferMatrix2::<f64>::hadamard();
        assert!((hadamard_fidelity(&h).unwrap() - 1.0).abs() < 1e-15);
        let scaled = h.scale(Complex::new(3.7, 0.0));
        assert!((hadamard_fidelity(&scaled).unwrap() - 1.0).abs() < 1e-15);
        let rotated = h.scale(Complex::from_polar(0.2, 1.1));
        assert!((hadamard_fidelity(&rotated).unwrap() - 1.0).abs() < 1e-14);
        let zero = TransferMatrix2::from_real(0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            hadamard_fidelity(&zero),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn fidelity_at_published_setting_rounds_to_four_nines() {
        let f = hadamard_fidelity(&gate(0.8169, PI)).unwrap();
        assert!((0.99985..=1.0).contains(&f), "{f}");
    }

    #[test]
    fn port_probability_examples() {
        let s = |t: f64, p: f64| GateSettings::new(t, p).unwrap();
        let (tr, rf) = port_probabilities(s(0.8169, 0.0)).unwrap();
        assert!((tr - 1.0).abs() < 1e-15 && rf.abs() < 1e-30);
        let (tr, rf) = port_probabilities(s(0.8169, PI)).unwrap();
        assert!((tr - 0.4979).abs() < 5e-4);
        assert!((rf - 0.4782).abs() < 5e-4);
        assert!((tr + rf - unitarity_factor(0.8169).unwrap()).abs() < 1e-14);
        for &phi in &[0.0, 1.0, 2.5, 6.0] {
            let (tr, rf) = port_probabilities(s(0.0, phi)).unwrap();
            assert!((tr - 1.0).abs() < 1e-15 && rf == 0.0);
        }
    }

    #[test]
    fn settings_validation() {
        assert!(matches!(
            GateSettings::new(99.0, 0.0),
            Err(Error::Domain { .. })
        ));
        assert!(GateSettings::new(-0.1, 0.0).is_err());
        assert!(GateSettings::new(1.0, f64::INFINITY).is_err());
        assert!(GateSettings::new(1.0, -40.0).is_ok());
    }

    #[test]
    fn symmetry_and_passivity() {
        for &theta in &[0.0, 0.2, 0.8169, 1.5, 3.0] {
            let f = unitarity_factor(theta).unwrap();
            for k in 0..40 {
                let phi = -7.0 + 0.37 * k as f64;
                let m = gate(theta, phi);
                assert_eq!(m.b01, m.b10);
                assert!((m.b00.norm() - m.b11.norm()).abs() < 1e-14);
                let s2 = (phi / 2.0).sin().powi(2);
                let lhs = m.b00.norm_sqr() + m.b01.norm_sqr();
                assert!((lhs - (1.0 - (1.0 - f) * s2)).abs() < 1e-12);
                assert!(lhs <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn b11_is_phase_rotated_conjugate_of_b00() {
        for &phi in &[0.4, 1.3, PI, 4.5] {
            let m = gate(0.8169, phi);
            let rotated = Complex::from_polar(1.0, phi) * m.b00.conj();
            assert!((m.b11 - rotated).norm() < 1e-15);
        }
    }
}
