//! Bounded faces of the planar graph traced by a loop.

use std::collections::{HashMap, HashSet};

use super::pinch::{boxes_overlap, project, proper_crossing, PinchPoint};
use super::{Loop, Point};
use crate::scalar::{as_f64, lit, Real};

/// Vertices closer than this fraction of the loop extent are merged.
const SNAP_RELATIVE: f64 = 1e-9;

/// Faces below this fraction of the squared extent are discarded.
const FACE_FLOOR_RELATIVE: f64 = 1e-12;

/// Signed area enclosed by the ring `points`, positive when counterclockwise.
pub fn shoelace<T: Real>(points: &[Point<T>]) -> T {
    let n = points.len();
    if n < 3 {
        return T::zero();
    }
    let twice = (0..n).fold(T::zero(), |acc, i| {
        acc + points[i].cross(points[(i + 1) % n])
    });
    twice / lit(2.0)
}

/// Areas of the regions the loop encloses, one per lobe.
///
/// The polyline is split at its self-crossings, at vertices lying on other
/// edges, and at `pinches`; coincident vertices and edges are merged. Each
/// bounded face of the resulting planar graph is a lobe, so retraced arcs
/// enclose nothing and a figure eight yields two lobes.
pub fn lobe_areas<T: Real>(lp: &Loop<T>, pinches: &[PinchPoint<T>]) -> Vec<T> {
    let pts: Vec<Point<T>> = lp.points().iter().map(|p| p.point()).collect();
    let times: Vec<T> = lp.points().iter().map(|p| p.t).collect();
    let n = lp.segments();
    let extent = lp.extent();
    if !(extent > T::zero()) {
        return Vec::new();
    }
    let snap = (lit::<T>(SNAP_RELATIVE) * extent).max(lit::<T>(16.0) * T::epsilon() * extent);

    // Split parameters per segment with an optional exact vertex location.
    let mut splits: Vec<Vec<(T, Option<Point<T>>)>> = vec![Vec::new(); n];
    for i in 0..n {
        let (a, b) = (pts[i], pts[i + 1]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (pts[j], pts[j + 1]);
            if !boxes_overlap(a, b, c, d, snap) {
                continue;
            }
            if let Some((s, u)) = proper_crossing(a, b, c, d) {
                let x = a.add(b.sub(a).scale(s));
                splits[i].push((s, Some(x)));
                splits[j].push((u, Some(x)));
            }
            for (p, target, (ta, tb)) in [
                (a, j, (c, d)),
                (b, j, (c, d)),
                (c, i, (a, b)),
                (d, i, (a, b)),
            ] {
                let (s, dist) = project(p, ta, tb);
                if dist <= snap && s > T::zero() && s < T::one() {
                    splits[target].push((s, Some(p)));
                }
            }
        }
    }
    for pinch in pinches {
        for t in [pinch.t1, pinch.t2] {
            if let Some(k) = segment_at(&times, lp.period(), t) {
                let (s, _) = project(pinch.location, pts[k], pts[k + 1]);
                splits[k].push((s, Some(pinch.location)));
            }
        }
    }

    // Vertices: original points first, then split points in segment order.
    let mut coords: Vec<Point<T>> = pts[..n].to_vec();
    let mut chain: Vec<(usize, usize)> = Vec::new();
    for (k, list) in splits.iter_mut().enumerate() {
        list.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(std::cmp::Ordering::Equal));
        let mut prev = k;
        for &(s, at) in list.iter() {
            let p = at.unwrap_or_else(|| pts[k].add(pts[k + 1].sub(pts[k]).scale(s)));
            coords.push(p);
            let id = coords.len() - 1;
            chain.push((prev, id));
            prev = id;
        }
        chain.push((prev, (k + 1) % n));
    }

    let rep = snap_vertices(&coords, snap);
    let mut edges = HashSet::new();
    for (u, v) in chain {
        let (u, v) = (rep[u], rep[v]);
        if u != v {
            edges.insert((u.min(v), u.max(v)));
        }
    }

    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v) in &edges {
        adjacency.entry(u).or_default().push(v);
        adjacency.entry(v).or_default().push(u);
    }
    for (&v, nbrs) in adjacency.iter_mut() {
        let o = coords[v];
        nbrs.sort_by(|&x, &y| {
            let ax = angle(coords[x].sub(o));
            let ay = angle(coords[y].sub(o));
            ax.partial_cmp(&ay).unwrap_or(std::cmp::Ordering::Equal)
        });
    }

    let floor = lit::<T>(FACE_FLOOR_RELATIVE) * extent * extent;
    let mut visited: HashSet<(usize, usize)> = HashSet::new();
    let mut starts: Vec<(usize, usize)> =
        edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
    starts.sort_unstable();
    let mut areas = Vec::new();
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let mut ring = Vec::new();
        let (mut u, mut v) = start;
        loop {
            visited.insert((u, v));
            ring.push(coords[u]);
            let nbrs = &adjacency[&v];
            let idx = nbrs
                .iter()
                .position(|&w| w == u)
                .expect("edge stored in both directions");
            let w = nbrs[(idx + nbrs.len() - 1) % nbrs.len()];
            u = v;
            v = w;
            if (u, v) == start {
                break;
            }
        }
        let area = shoelace(&ring);
        if area > floor {
            areas.push(area);
        }
    }
    areas.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    areas
}

fn angle<T: Real>(d: Point<T>) -> T {
    d.response.atan2(d.control)
}

/// Segment index containing loop parameter `t`, folded into the loop span.
fn segment_at<T: Real>(times: &[T], period: T, t: T) -> Option<usize> {
    let t0 = times[0];
    let folded = t0 + ((t - t0) % period + period) % period;
    let k = times.partition_point(|&x| x <= folded);
    (k >= 1 && k < times.len()).then(|| k - 1)
}

/// Representative index for every vertex after merging those within `snap`.
fn snap_vertices<T: Real>(coords: &[Point<T>], snap: T) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..coords.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let cell = as_f64(snap);
    let key = |p: Point<T>| {
        (
            (as_f64(p.control) / cell).floor() as i64,
            (as_f64(p.response) / cell).floor() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in coords.iter().enumerate() {
        let (kx, ky) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(kx + dx, ky + dy)) {
                    for &j in bucket {
                        if coords[j].distance(p) <= snap {
                            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                            if ri != rj {
                                parent[ri.max(rj)] = ri.min(rj);
                            }
                        }
                    }
                }
            }
        }
        grid.entry((kx, ky)).or_default().push(i);
    }
    (0..coords.len()).map(|i| find(&mut parent, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hysteresis::find_pinch;

    fn areas(v: &[(f64, f64)]) -> Vec<f64> {
        let lp = Loop::from_polyline(v).unwrap();
        lobe_areas(&lp, &find_pinch(&lp, 1e-9))
    }

    #[test]
    fn unit_square() {
        assert_eq!(
            areas(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]),
            vec![1.0]
        );
        assert_eq!(
            areas(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]),
            vec![1.0]
        );
    }

    #[test]
    fn figure_eight_splits_into_two_lobes() {
        let a: Vec<f64> = areas(&[(0.0, 0.0), (2.0, 2.0), (2.0, 0.0), (0.0, 2.0)]);
        assert_eq!(a.len(), 2);
        assert!(a.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let ring: Vec<_> = [(0.0f64, 0.0), (2.0, 2.0), (2.0, 0.0), (0.0, 2.0)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect();
        assert!(
            shoelace(&ring).abs() < 1e-12,
            "lobes cancel in the signed area"
        );
    }

    #[test]
    fn retraced_arc_encloses_nothing() {
        let mut v: Vec<(f64, f64)> = (0..=50)
            .map(|k| (k as f64, (k as f64 * 0.1).sin()))
            .collect();
        let back: Vec<_> = v[1..50].iter().rev().copied().collect();
        v.extend(back);
        assert!(areas(&v).is_empty());
    }

    #[test]
    fn nested_spur_does_not_change_area() {
        // Square with an inward spike that goes out and comes back.
        let v = [
            (0.0f64, 0.0),
            (1.0, 0.0),
            (1.0, 0.5),
            (0.5, 0.5),
            (1.0, 0.5),
            (1.0, 1.0),
            (0.0, 1.0),
        ];
        let a = areas(&v);
        assert_eq!(a.len(), 1);
        assert!((a[0] - 1.0).abs() < 1e-12);
    }
}
