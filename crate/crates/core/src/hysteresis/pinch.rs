use super::{Loop, Point};
use crate::scalar::{as_f64, count, lit, Real};

/// Default geometric tolerance for self-contact.
pub const DEFAULT_PINCH_TOL: f64 = 1e-9;

/// Fraction of the period two visits must be apart to count as distinct.
const MIN_SEPARATION: f64 = 0.01;

/// Self-intersection or self-contact of a loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinchPoint<T> {
    pub location: Point<T>,
    /// Loop parameters of the two visits.
    pub t1: T,
    pub t2: T,
}

/// Parameters `(s, u)` in the open unit square where `ab` and `cd` cross.
pub(crate) fn proper_crossing<T: Real>(
    a: Point<T>,
    b: Point<T>,
    c: Point<T>,
    d: Point<T>,
) -> Option<(T, T)> {
    let d1 = b.sub(a);
    let d2 = d.sub(c);
    let denom = d1.cross(d2);
    let scale = d1.dot(d1).sqrt() * d2.dot(d2).sqrt();
    if !(denom.abs() > lit::<T>(1e-12) * scale) {
        return None;
    }
    let ac = c.sub(a);
    let s = ac.cross(d2) / denom;
    let u = ac.cross(d1) / denom;
    let inside = |x: T| x > T::zero() && x < T::one();
    (inside(s) && inside(u)).then_some((s, u))
}

/// Parameter on `ab` of the point closest to `p`, and the distance.
pub(crate) fn project<T: Real>(p: Point<T>, a: Point<T>, b: Point<T>) -> (T, T) {
    let d = b.sub(a);
    let len2 = d.dot(d);
    let s = if len2 > T::zero() {
        (p.sub(a).dot(d) / len2).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    (s, p.distance(a.add(d.scale(s))))
}

/// Closest pair between two non-crossing segments: `(s, u, distance)`.
fn contact<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> (T, T, T) {
    let (u_a, dist_a) = project(a, c, d);
    let mut best = (T::zero(), u_a, dist_a);
    let (u_b, dist_b) = project(b, c, d);
    if dist_b < best.2 {
        best = (T::one(), u_b, dist_b);
    }
    let (s_c, dist_c) = project(c, a, b);
    if dist_c < best.2 {
        best = (s_c, T::zero(), dist_c);
    }
    let (s_d, dist_d) = project(d, a, b);
    if dist_d < best.2 {
        best = (s_d, T::one(), dist_d);
    }
    best
}

pub(crate) fn boxes_overlap<T: Real>(
    a: Point<T>,
    b: Point<T>,
    c: Point<T>,
    d: Point<T>,
    pad: T,
) -> bool {
    a.control.min(b.control) <= c.control.max(d.control) + pad
        && c.control.min(d.control) <= a.control.max(b.control) + pad
        && a.response.min(b.response) <= c.response.max(d.response) + pad
        && c.response.min(d.response) <= a.response.max(b.response) + pad
}

struct Candidate<T> {
    location: Point<T>,
    t1: T,
    t2: T,
    gap: T,
}

/// Self-intersections and self-contacts of the loop.
///
/// Pairs of non-adjacent edges are tested for a proper crossing, then for
/// a closest approach within `tol`. A hit counts only if its two parameters
/// are more than 1% of the period apart and the curve does not coincide
/// with itself around it (a retraced arc touches itself everywhere without
/// being pinched). Hits within `tol`, or within the retrace window of an
/// earlier hit, are merged. The result is sorted by control.
pub fn find_pinch<T: Real>(lp: &Loop<T>, tol: T) -> Vec<PinchPoint<T>> {
    let pts: Vec<Point<T>> = lp.points().iter().map(|p| p.point()).collect();
    let times: Vec<T> = lp.points().iter().map(|p| p.t).collect();
    let n = lp.segments();
    let period = lp.period();
    let window = (n / 100).max(1);
    let window_time = period * count(window) / count(n);
    let min_sep = period * lit(MIN_SEPARATION);

    let circular_gap = |x: T, y: T| {
        let d = (x - y).abs() % period;
        d.min(period - d)
    };
    // Whether vertex `probe` lies on the arc around segment `centre`,
    // ignoring the two edges incident to the probe itself.
    let near_arc = |probe: usize, centre: usize| {
        (0..=4 * window).any(|k| {
            let seg = (centre + n * 2 + k - 2 * window) % n;
            let incident = seg == probe || (seg + 1) % n == probe;
            !incident && project(pts[probe], pts[seg], pts[seg + 1]).1 <= tol
        })
    };
    // Probes sit on both sides of the contact at vertex offsets short of
    // half the distance to the other visit, so neither reaches the turnaround
    // of a fold. `at` and `other` are fractional vertex positions.
    let retraced = |at: f64, other: f64| {
        let raw = (at - other).abs() % n as f64;
        let gap = raw.min(n as f64 - raw);
        let offset = ((gap / 2.0 - 1.0).floor().max(1.0) as usize).min(window);
        let base = at.round() as usize % n;
        let centre = other.round() as usize % n;
        near_arc((base + offset) % n, centre) && near_arc((base + n - offset) % n, centre)
    };

    let mut candidates = Vec::new();
    for i in 0..n {
        let (a, b) = (pts[i], pts[i + 1]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (pts[j], pts[j + 1]);
            if !boxes_overlap(a, b, c, d, tol) {
                continue;
            }
            let (s, u, gap, location) = match proper_crossing(a, b, c, d) {
                Some((s, u)) => (s, u, T::zero(), a.add(b.sub(a).scale(s))),
                None => {
                    let (s, u, gap) = contact(a, b, c, d);
                    if gap > tol {
                        continue;
                    }
                    let pa = a.add(b.sub(a).scale(s));
                    let pc = c.add(d.sub(c).scale(u));
                    (s, u, gap, pa.add(pc).scale(lit(0.5)))
                }
            };
            let t1 = times[i] + (times[i + 1] - times[i]) * s;
            let t2 = times[j] + (times[j + 1] - times[j]) * u;
            if circular_gap(t1, t2) <= min_sep
                || retraced(i as f64 + as_f64(s), j as f64 + as_f64(u))
            {
                continue;
            }
            candidates.push(Candidate {
                location,
                t1,
                t2,
                gap,
            });
        }
    }

    candidates.sort_by(|x, y| {
        x.gap
            .partial_cmp(&y.gap)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<PinchPoint<T>> = Vec::new();
    for c in candidates {
        let duplicate = kept.iter().any(|k| {
            let same_visits = (circular_gap(k.t1, c.t1) <= window_time
                && circular_gap(k.t2, c.t2) <= window_time)
                || (circular_gap(k.t1, c.t2) <= window_time
                    && circular_gap(k.t2, c.t1) <= window_time);
            k.location.distance(c.location) <= tol || same_visits
        });
        if !duplicate {
            kept.push(PinchPoint {
                location: c.location,
                t1: c.t1,
                t2: c.t2,
            });
        }
    }
    kept.sort_by(|x, y| {
        (x.location.control, x.location.response)
            .partial_cmp(&(y.location.control, y.location.response))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_eight_has_one_crossing() {
        let lp = Loop::from_polyline(&[(0.0f64, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        let pinches = find_pinch(&lp, 1e-9);
        assert_eq!(pinches.len(), 1);
        assert!(pinches[0].location.distance(Point::new(0.5, 0.5)) < 1e-12);
        assert!((pinches[0].t1 - 0.5).abs() < 1e-12 && (pinches[0].t2 - 2.5).abs() < 1e-12);
    }

    #[test]
    fn convex_polygon_is_not_pinched() {
        let lp = Loop::from_polyline(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!(find_pinch(&lp, 1e-9).is_empty());
    }

    #[test]
    fn retraced_path_is_not_pinched() {
        let mut v: Vec<(f64, f64)> = (0..=200)
            .map(|k| (k as f64 / 200.0, (k as f64 / 200.0).powi(2)))
            .collect();
        let back: Vec<_> = v[1..200].iter().rev().copied().collect();
        v.extend(back);
        let lp = Loop::from_polyline(&v).unwrap();
        let p = find_pinch(&lp, 1e-9);
        assert!(p.is_empty(), "{p:?}");
    }

    #[test]
    fn tangential_touch_is_a_pinch() {
        // Two parabolas tangent at the origin, traversed as one loop.
        let mut v = Vec::new();
        for k in 0..=100 {
            let x = 1.0 - k as f64 / 50.0;
            v.push((x, 2.0 * x * x));
        }
        for k in 1..100 {
            let x = -1.0 + k as f64 / 50.0;
            v.push((x, x * x));
        }
        let lp = Loop::from_polyline(&v).unwrap();
        let pinches = find_pinch(&lp, 1e-9);
        assert_eq!(pinches.len(), 1, "{pinches:?}");
        assert!(pinches[0].location.distance(Point::new(0.0, 0.0)) < 1e-12);
    }
}
