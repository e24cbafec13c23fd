//! Brute-force model of the cascade over a truncated frequency comb.
//!
//! Bins run over `n ∈ [-k_max, k_max + 1]`; matrix row `m`, column `n` is
//! the amplitude from input bin `n` to output bin `m`.

use ndarray::Array2;
use num_complex::Complex;

use super::{GateSettings, TransferMatrix2};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::bessel_j;

pub const MIN_K_MAX: usize = 10;
pub const DEFAULT_K_MAX: usize = 25;

/// Truncated equispaced comb `ν_n = ν0 + n Δν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombSpec<T> {
    k_max: usize,
    /// Bin spacing in GHz; metadata only.
    pub delta_nu: T,
    /// Comb offset in GHz; metadata only.
    pub nu0: T,
}

impl<T: Real> CombSpec<T> {
    pub fn new(k_max: usize) -> Result<Self> {
        if k_max < MIN_K_MAX {
            return Err(Error::invalid(format!(
                "comb half-width k_max must be at least {MIN_K_MAX}, got {k_max}"
            )));
        }
        Ok(Self {
            k_max,
            delta_nu: T::from_f64(25.0).unwrap_or_else(T::zero),
            nu0: T::zero(),
        })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn dimension(&self) -> usize {
        2 * self.k_max + 2
    }

    pub fn bins(&self) -> impl Iterator<Item = i64> {
        let k = self.k_max as i64;
        -k..=k + 1
    }

    pub fn index_of(&self, bin: i64) -> Option<usize> {
        let k = self.k_max as i64;
        (-k..=k + 1).contains(&bin).then(|| (bin + k) as usize)
    }

    /// Frequency of `bin` in GHz.
    pub fn frequency(&self, bin: i64) -> T {
        self.nu0 + self.delta_nu * T::from_i64(bin).unwrap_or_else(T::zero)
    }
}

/// Dense operator over the truncated comb.
#[derive(Debug, Clone, PartialEq)]
pub struct CombMatrix<T> {
    spec: CombSpec<T>,
    entries: Array2<Complex<T>>,
}

impl<T: Real> CombMatrix<T> {
    pub fn spec(&self) -> &CombSpec<T> {
        &self.spec
    }

    pub fn entries(&self) -> &Array2<Complex<T>> {
        &self.entries
    }

    /// Amplitude from input bin `input` to output bin `output`.
    pub fn get(&self, output: i64, input: i64) -> Option<Complex<T>> {
        let m = self.spec.index_of(output)?;
        let n = self.spec.index_of(input)?;
        Some(self.entries[[m, n]])
    }

    /// `self · rhs`.
    pub fn then_after(&self, rhs: &CombMatrix<T>) -> CombMatrix<T> {
        CombMatrix {
            spec: self.spec,
            entries: self.entries.dot(&rhs.entries),
        }
    }

    /// Block for bins {0, 1}.
    pub fn computational_block(&self) -> TransferMatrix2<T> {
        let k = self.spec.k_max;
        let e = &self.entries;
        TransferMatrix2::new(e[[k, k]], e[[k, k + 1]], e[[k + 1, k]], e[[k + 1, k + 1]])
    }

    /// `Σ_m |entries[m][n]|²` for input bin `n`.
    pub fn column_norm_sq(&self, input: i64) -> Option<T> {
        let n = self.spec.index_of(input)?;
        Some(self.entries.column(n).iter().map(|z| z.norm_sqr()).sum())
    }
}

/// Sign of the time-domain drive `exp[±iΘ sin(2πΔν t)]`.
///
/// The cascade's first EOM is driven with [`EomDrive::Positive`] and carries
/// the alternating kernel `(-1)^d J_d(Θ)`; the second is driven exactly out
/// of phase with kernel `J_d(Θ)`. This assignment reproduces the closed-form
/// matrix including the sign of the off-diagonal elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EomDrive {
    Positive,
    Negative,
}

/// Banded convolution `b_m = Σ_n s^{m-n} J_{m-n}(Θ) a_n`.
pub fn eom_matrix<T: Real>(comb: &CombSpec<T>, theta: T, drive: EomDrive) -> Result<CombMatrix<T>> {
    let dim = comb.dimension();
    let mut kernel = Vec::with_capacity(dim);
    for d in 0..dim {
        kernel.push(bessel_j(d as i32, theta)?);
    }
    let alternating = drive == EomDrive::Positive;
    let entries = Array2::from_shape_fn((dim, dim), |(m, n)| {
        let offset = m as i64 - n as i64;
        let d = offset.unsigned_abs() as usize;
        let mut value = kernel[d];
        // J_{-d} = (-1)^d J_d; the alternating kernel contributes another (-1)^d.
        let odd = d % 2 == 1;
        if odd && (offset < 0) != alternating {
            value = -value;
        }
        Complex::from(value)
    });
    Ok(CombMatrix {
        spec: *comb,
        entries,
    })
}

/// Diagonal pulse shaper applying `e^{iφ}` to bins `n ≥ 1`.
pub fn shaper_matrix<T: Real>(comb: &CombSpec<T>, phi: T) -> CombMatrix<T> {
    let dim = comb.dimension();
    let mut entries = Array2::from_elem((dim, dim), Complex::from(T::zero()));
    let shifted = Complex::from_polar(T::one(), phi);
    for (i, bin) in comb.bins().enumerate() {
        entries[[i, i]] = if bin >= 1 {
            shifted
        } else {
            Complex::from(T::one())
        };
    }
    CombMatrix {
        spec: *comb,
        entries,
    }
}

/// Whether `k_max` leaves enough margin for the Bessel band at `theta`.
pub fn truncation_adequate<T: Real>(k_max: usize, theta: T) -> bool {
    let band = (theta * T::from_f64(4.0).unwrap())
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX);
    k_max >= MIN_K_MAX.saturating_add(band)
}

/// Second EOM · shaper · first EOM over the truncated comb, restricted to bins {0, 1}.
pub fn composed_gate_oracle<T: Real>(
    comb: &CombSpec<T>,
    settings: GateSettings<T>,
) -> Result<TransferMatrix2<T>> {
    if !truncation_adequate(comb.k_max, settings.theta()) {
        log::warn!(
            "comb half-width {} is narrow for theta = {}; the oracle may be truncation limited",
            comb.k_max,
            settings.theta()
        );
    }
    let first = eom_matrix(comb, settings.theta(), EomDrive::Positive)?;
    let second = eom_matrix(comb, settings.theta(), EomDrive::Negative)?;
    let shaper = shaper_matrix(comb, settings.phi());
    Ok(second
        .then_after(&shaper)
        .then_after(&first)
        .computational_block())
}
