//! Control-response loops: pinch detection, enclosed area and the
//! memristor verdict over a drive-frequency sweep.

mod arrangement;
mod classify;
mod pinch;

use serde::{Deserialize, Serialize};

pub use arrangement::{lobe_areas, shoelace};
pub use classify::{
    classify_memristive, summarize, sweep_frequencies, verdict_from_entries, Reason, SweepEntry,
    SweepParams, SweepReport, Verdict, AREA_MARGIN, PINCH_LOCATION_FRACTION,
};
pub use pinch::{find_pinch, PinchPoint, DEFAULT_PINCH_TOL};

use crate::error::{Error, Result};
use crate::memristor::{InputModel, Trajectory};
use crate::scalar::{count, lit, Real};

/// Fewest samples per period a loop may be built from.
pub const MIN_LOOP_SAMPLES: usize = 100;

const CLOSURE_TOL: f64 = 1e-9;

/// A point of the plane with the control observable on the first axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point<T> {
    pub control: T,
    pub response: T,
}

impl<T: Real> Point<T> {
    pub fn new(control: T, response: T) -> Self {
        Self { control, response }
    }

    pub(crate) fn sub(self, o: Self) -> Self {
        Self::new(self.control - o.control, self.response - o.response)
    }

    pub(crate) fn add(self, o: Self) -> Self {
        Self::new(self.control + o.control, self.response + o.response)
    }

    pub(crate) fn scale(self, s: T) -> Self {
        Self::new(self.control * s, self.response * s)
    }

    pub(crate) fn cross(self, o: Self) -> T {
        self.control * o.response - self.response * o.control
    }

    pub(crate) fn dot(self, o: Self) -> T {
        self.control * o.control + self.response * o.response
    }

    pub fn distance(self, o: Self) -> T {
        self.sub(o).dot(self.sub(o)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopPoint<T> {
    pub t: T,
    pub control: T,
    pub response: T,
}

impl<T: Real> LoopPoint<T> {
    pub fn point(&self) -> Point<T> {
        Point::new(self.control, self.response)
    }
}

/// Parameters of the simulation a loop was cut from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopSource<T> {
    pub model: InputModel<T>,
    pub theta: T,
    pub omega: T,
    pub omega0: T,
    pub phi0: T,
    pub alpha_depth: T,
}

/// Closed polyline over one drive period. The last point repeats the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop<T> {
    points: Vec<LoopPoint<T>>,
    period: T,
    source: Option<LoopSource<T>>,
}

impl<T: Real> Loop<T> {
    /// Validates closure, finiteness and strictly increasing parameters.
    pub fn new(
        points: Vec<LoopPoint<T>>,
        period: T,
        source: Option<LoopSource<T>>,
    ) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InsufficientData(format!(
                "a loop needs at least 3 segments, got {} points",
                points.len()
            )));
        }
        if points
            .iter()
            .any(|p| !(p.t.is_finite() && p.control.is_finite() && p.response.is_finite()))
        {
            return Err(Error::invalid("loop contains non-finite values"));
        }
        if points.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::invalid(
                "loop parameters must be strictly increasing",
            ));
        }
        let first = points[0].point();
        let last = points[points.len() - 1].point();
        if first.distance(last) > lit(CLOSURE_TOL) {
            return Err(Error::invalid(format!(
                "loop is not closed: endpoints {} apart",
                first.distance(last)
            )));
        }
        if !(period > T::zero()) {
            return Err(Error::invalid("loop period must be positive"));
        }
        Ok(Self {
            points,
            period,
            source,
        })
    }

    /// Closes `vertices` and parametrizes them by index, one unit per edge.
    pub fn from_polyline(vertices: &[(T, T)]) -> Result<Self> {
        let mut points: Vec<_> = vertices
            .iter()
            .enumerate()
            .map(|(i, &(control, response))| LoopPoint {
                t: count(i),
                control,
                response,
            })
            .collect();
        if let Some(&first) = points.first() {
            points.push(LoopPoint {
                t: count(vertices.len()),
                ..first
            });
        }
        Self::new(points, count(vertices.len()), None)
    }

    pub fn points(&self) -> &[LoopPoint<T>] {
        &self.points
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn source(&self) -> Option<&LoopSource<T>> {
        self.source.as_ref()
    }

    /// Number of edges.
    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Same curve traversed backwards, parameters remapped onto the same span.
    pub fn reversed(&self) -> Self {
        let t0 = self.points[0].t;
        let t1 = self.points[self.points.len() - 1].t;
        let points = self
            .points
            .iter()
            .rev()
            .map(|p| LoopPoint {
                t: t0 + (t1 - p.t),
                ..*p
            })
            .collect();
        Self {
            points,
            period: self.period,
            source: self.source,
        }
    }

    /// `(min, max)` of the control coordinate.
    pub fn control_range(&self) -> (T, T) {
        range(self.points.iter().map(|p| p.control))
    }

    pub fn response_range(&self) -> (T, T) {
        range(self.points.iter().map(|p| p.response))
    }

    /// Larger side of the bounding box.
    pub(crate) fn extent(&self) -> T {
        let (c0, c1) = self.control_range();
        let (r0, r1) = self.response_range();
        (c1 - c0).max(r1 - r0)
    }
}

fn range<T: Real>(values: impl Iterator<Item = T>) -> (T, T) {
    values.fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Cuts the final full period out of a trajectory and closes it.
pub fn extract_loop<T: Real>(traj: &Trajectory<T>) -> Result<Loop<T>> {
    let n = traj.samples_per_period();
    if n < MIN_LOOP_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{n} samples per period, need {MIN_LOOP_SAMPLES}"
        )));
    }
    if traj.points.len() < n + 1 {
        return Err(Error::InsufficientData(format!(
            "trajectory has {} samples, a full period needs {}",
            traj.points.len(),
            n + 1
        )));
    }
    let start = traj.points.len() - 1 - n;
    let period = traj.period();
    let mut points: Vec<_> = traj.points[start..start + n]
        .iter()
        .map(|p| LoopPoint {
            t: p.t,
            control: p.control,
            response: p.response,
        })
        .collect();
    let first = points[0];
    points.push(LoopPoint {
        t: first.t + period,
        ..first
    });
    let source = LoopSource {
        model: traj.model,
        theta: traj.theta,
        omega: traj.drive.omega,
        omega0: traj.drive.omega0,
        phi0: traj.drive.phi0,
        alpha_depth: traj.drive.alpha_depth,
    };
    Loop::new(points, period, Some(source))
}

/// Enclosed area: sum of the lobes, with pinches found at `tol`.
pub fn total_area<T: Real>(lp: &Loop<T>, tol: T) -> T {
    let pinches = find_pinch(lp, tol);
    lobe_areas(lp, &pinches)
        .into_iter()
        .fold(T::zero(), |a, b| a + b)
}
