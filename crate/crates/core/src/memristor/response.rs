use crate::error::{Error, Result};
use crate::freqgate::gate_from_couplings;
use crate::scalar::{as_f64, lit, Real};
use crate::specfun::couplings;

/// Beam-splitter couplings `c1`, `c2` at a fixed modulation depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings<T> {
    pub theta: T,
    pub c1: T,
    pub c2: T,
}

impl<T: Real> Couplings<T> {
    pub fn new(theta: T) -> Result<Self> {
        let (c1, c2) = couplings(theta)?;
        Ok(Self { theta, c1, c2 })
    }

    /// `|B00|² = cos²(φ/2) + c1² sin²(φ/2)`.
    pub fn transmission(&self, phi: T) -> T {
        gate_from_couplings(self.c1, self.c2, phi).b00.norm_sqr()
    }

    /// `|B01|² = 4 c2² sin²(φ/2)`.
    pub fn reflection(&self, phi: T) -> T {
        gate_from_couplings(self.c1, self.c2, phi).b01.norm_sqr()
    }

    /// `f(Θ) = c1² + 4 c2²`.
    pub fn unitarity_factor(&self) -> T {
        self.c1 * self.c1 + lit::<T>(4.0) * self.c2 * self.c2
    }

    pub(crate) fn coherent(&self, phi: T, x_in: T) -> (T, T) {
        let n_in = x_in * x_in;
        (n_in * self.transmission(phi), n_in * self.reflection(phi))
    }

    pub(crate) fn squeezed(&self, phi: T, x2_in: T) -> Result<(T, T)> {
        let n_in = squeezed_photon_number(x2_in)?;
        Ok((n_in * self.transmission(phi), n_in * self.reflection(phi)))
    }

    pub(crate) fn fock(&self, phi: T, alpha: T, beta: T) -> (T, T) {
        let two = lit::<T>(2.0);
        let (s, c) = (phi / two).sin_cos();
        let (s2, c2) = (s * s, c * c);
        let mix0 = self.c1 * alpha + two * self.c2 * beta;
        let mix1 = self.c1 * beta - two * self.c2 * alpha;
        (
            alpha * alpha * c2 + mix0 * mix0 * s2,
            beta * beta * c2 + mix1 * mix1 * s2,
        )
    }
}

/// `sinh² r` of an x-squeezed vacuum with `<x²> = e^{-2r}/4`.
pub fn squeezed_photon_number<T: Real>(x2_in: T) -> Result<T> {
    let quarter = lit::<T>(0.25);
    if !(x2_in > T::zero() && x2_in <= quarter) {
        return Err(Error::Domain {
            what: "quadrature second moment <x^2>",
            value: as_f64(x2_in),
            allowed: "(0, 1/4]",
        });
    }
    let deficit = T::one() - lit::<T>(4.0) * x2_in;
    Ok(deficit * deficit / (lit::<T>(16.0) * x2_in))
}

/// Coherent input with real amplitude `x_in` in bin 0.
pub fn coherent_response<T: Real>(theta: T, phi: T, x_in: T) -> Result<(T, T)> {
    Ok(Couplings::new(theta)?.coherent(phi, x_in))
}

/// x-squeezed vacuum in bin 0 with quadrature second moment `x2_in`.
pub fn squeezed_response<T: Real>(theta: T, phi: T, x2_in: T) -> Result<(T, T)> {
    Couplings::new(theta)?.squeezed(phi, x2_in)
}

/// Single photon `alpha |1,0> + beta |0,1>` with real amplitudes.
///
/// `n1 = β² cos²(φ/2) + (c1 β − 2 c2 α)² sin²(φ/2)`; the relative minus sign
/// is what conserves probability.
pub fn fock_response<T: Real>(theta: T, phi: T, alpha: T, beta: T) -> Result<(T, T)> {
    let norm = alpha * alpha + beta * beta;
    if !((norm - T::one()).abs() <= lit(1e-9)) {
        return Err(Error::Normalization(as_f64(norm)));
    }
    Ok(Couplings::new(theta)?.fock(phi, alpha, beta))
}
