use std::thread;

use serde::{Deserialize, Serialize};

use super::{extract_loop, find_pinch, lobe_areas, Loop, Point};
use crate::error::{Error, Result};
use crate::memristor::{simulate, DriveSignal, InputModel, MeasurementConfig, SimulationConfig};
use crate::scalar::{lit, Real};

/// Pinches of different loops closer than this fraction of the control
/// range are the same pinch.
pub const PINCH_LOCATION_FRACTION: f64 = 0.05;

/// Relative drop an area must show to count as decreasing.
pub const AREA_MARGIN: f64 = 0.01;

const MIN_FREQUENCIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Memristive,
    NonMemristive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    /// Some loop has no pinch at all.
    MissingPinch,
    /// No pinch location is shared by every loop.
    MovingPinch,
    /// Total area fails to drop by the margin between consecutive frequencies.
    NonDecreasingArea,
}

impl Reason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Reason::MissingPinch => "missing-pinch",
            Reason::MovingPinch => "moving-pinch",
            Reason::NonDecreasingArea => "non-decreasing-area",
        }
    }
}

/// One frequency of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry<T> {
    pub omega: T,
    pub total_area: T,
    /// The pinch shared across the sweep if there is one, otherwise the
    /// pinch nearest the middle of the control range.
    pub pinch: Option<Point<T>>,
    pub lobes: Vec<T>,
    pub pinches: Vec<Point<T>>,
    /// `[min, max]` of the control coordinate.
    pub control_range: [T; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepParams<T> {
    pub theta: T,
    pub omega0: T,
    pub phi0: T,
    pub alpha_depth: T,
    pub x_max: Option<T>,
    pub pinch_tol: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport<T> {
    pub model: String,
    pub params: SweepParams<T>,
    pub results: Vec<SweepEntry<T>>,
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
}

impl<T: Real> SweepReport<T> {
    /// Recomputes pinch selection and verdict from the stored entries.
    pub fn reclassify(mut self) -> Result<Self> {
        let (verdict, reasons) = verdict_from_entries(&mut self.results)?;
        self.verdict = verdict;
        self.reasons = reasons;
        Ok(self)
    }
}

/// Pinches, lobes and area of one loop with a known source frequency.
pub fn summarize<T: Real>(lp: &Loop<T>, tol: T) -> Result<SweepEntry<T>> {
    let source = lp
        .source()
        .ok_or_else(|| Error::invalid("loop has no source frequency"))?;
    let pinches = find_pinch(lp, tol);
    let lobes = lobe_areas(lp, &pinches);
    let total_area = lobes.iter().fold(T::zero(), |a, &b| a + b);
    let (lo, hi) = lp.control_range();
    let centre = (lo + hi) / lit(2.0);
    let locations: Vec<Point<T>> = pinches.iter().map(|p| p.location).collect();
    Ok(SweepEntry {
        omega: source.omega,
        total_area,
        pinch: nearest(&locations, centre),
        lobes,
        pinches: locations,
        control_range: [lo, hi],
    })
}

fn nearest<T: Real>(points: &[Point<T>], control: T) -> Option<Point<T>> {
    points.iter().copied().min_by(|a, b| {
        (a.control - control)
            .abs()
            .partial_cmp(&(b.control - control).abs())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// Verdict (memristive iff a common pinch exists and area strictly drops),
/// updating each entry's `pinch` to the shared pinch when one is found.
pub fn verdict_from_entries<T: Real>(
    entries: &mut [SweepEntry<T>],
) -> Result<(Verdict, Vec<Reason>)> {
    if entries.len() < MIN_FREQUENCIES {
        return Err(Error::invalid(format!(
            "a sweep needs at least {MIN_FREQUENCIES} frequencies, got {}",
            entries.len()
        )));
    }
    if entries.windows(2).any(|w| !(w[1].omega > w[0].omega)) {
        return Err(Error::invalid(
            "sweep frequencies must be strictly increasing",
        ));
    }
    if entries
        .iter()
        .any(|e| !(e.total_area >= T::zero() && e.total_area.is_finite()))
    {
        return Err(Error::invalid("loop areas must be finite and non-negative"));
    }

    let width = entries
        .iter()
        .map(|e| e.control_range[1] - e.control_range[0])
        .fold(T::zero(), T::max);
    let reach = lit::<T>(PINCH_LOCATION_FRACTION) * width;

    let mut reasons = Vec::new();
    if entries.iter().any(|e| e.pinches.is_empty()) {
        reasons.push(Reason::MissingPinch);
    } else {
        let centre = (entries[0].control_range[0] + entries[0].control_range[1]) / lit(2.0);
        let mut candidates = entries[0].pinches.clone();
        candidates.sort_by(|a, b| {
            (a.control - centre)
                .abs()
                .partial_cmp(&(b.control - centre).abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let common = candidates.into_iter().find(|c| {
            entries.iter().all(|e| {
                e.pinches
                    .iter()
                    .any(|p| (p.control - c.control).abs() <= reach)
            })
        });
        match common {
            Some(c) => {
                for e in entries.iter_mut() {
                    e.pinch = nearest(&e.pinches, c.control);
                }
            }
            None => reasons.push(Reason::MovingPinch),
        }
    }

    let keep = T::one() - lit::<T>(AREA_MARGIN);
    if entries
        .windows(2)
        .any(|w| !(w[1].total_area < w[0].total_area * keep))
    {
        reasons.push(Reason::NonDecreasingArea);
    }

    let verdict = if reasons.is_empty() {
        Verdict::Memristive
    } else {
        Verdict::NonMemristive
    };
    Ok((verdict, reasons))
}

/// Sweep report for loops of one model at increasing frequencies.
pub fn classify_memristive<T: Real>(loops: &[Loop<T>], tol: T) -> Result<SweepReport<T>> {
    let first = loops
        .first()
        .and_then(|l| l.source())
        .copied()
        .ok_or_else(|| Error::invalid("classification needs loops with source metadata"))?;
    if loops
        .iter()
        .any(|l| l.source().map(|s| s.model.name()) != Some(first.model.name()))
    {
        return Err(Error::invalid(
            "all loops of a sweep must come from the same model",
        ));
    }
    let mut results = loops
        .iter()
        .map(|l| summarize(l, tol))
        .collect::<Result<Vec<_>>>()?;
    let (verdict, reasons) = verdict_from_entries(&mut results)?;
    let x_max = match first.model {
        InputModel::Coherent { x_max } => Some(x_max),
        _ => None,
    };
    Ok(SweepReport {
        model: first.model.name().to_string(),
        params: SweepParams {
            theta: first.theta,
            omega0: first.omega0,
            phi0: first.phi0,
            alpha_depth: first.alpha_depth,
            x_max,
            pinch_tol: tol,
        },
        results,
        verdict,
        reasons,
    })
}

/// Simulates one loop per entry of `omegas` (in parallel) and classifies them.
///
/// `drive.omega` is replaced by each sweep frequency.
pub fn sweep_frequencies<T: Real>(
    model: &InputModel<T>,
    theta: T,
    drive: &DriveSignal<T>,
    omegas: &[T],
    meas: &MeasurementConfig<T>,
    config: &SimulationConfig,
    tol: T,
) -> Result<SweepReport<T>> {
    let loops: Vec<Result<Loop<T>>> = thread::scope(|scope| {
        let handles: Vec<_> = omegas
            .iter()
            .map(|&omega| {
                scope.spawn(move || {
                    let d = DriveSignal { omega, ..*drive };
                    extract_loop(&simulate(model, theta, &d, meas, config)?)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let loops = loops.into_iter().collect::<Result<Vec<_>>>()?;
    classify_memristive(&loops, tol)
}
