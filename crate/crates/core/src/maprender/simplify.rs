use crate::model::Point;

fn seg_dist(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return ((p[0] - a[0]).powi(2) + (p[1] - a[1]).powi(2)).sqrt();
    }
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    ((p[0] - qx).powi(2) + (p[1] - qy).powi(2)).sqrt()
}

/// Douglas-Peucker reduction of an open polyline. Endpoints are kept.
pub fn douglas_peucker(points: &[Point], tolerance: f64) -> Vec<Point> {
    if points.len() <= 2 {
        return points.to_vec();
    }
    let mut keep = vec![false; points.len()];
    keep[0] = true;
    keep[points.len() - 1] = true;
    let mut stack = vec![(0, points.len() - 1)];
    while let Some((a, b)) = stack.pop() {
        let mut best = (0.0, 0);
        for i in a + 1..b {
            let d = seg_dist(points[i], points[a], points[b]);
            if d > best.0 {
                best = (d, i);
            }
        }
        if best.0 > tolerance {
            keep[best.1] = true;
            stack.push((a, best.1));
            stack.push((best.1, b));
        }
    }
    points
        .iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(*p))
        .collect()
}

/// Simplifies a closed ring, splitting it at the vertex farthest from the
/// first one. Rings that would collapse below three distinct vertices are
/// returned unchanged.
pub fn simplify_ring(ring: &[Point], tolerance: f64) -> Vec<Point> {
    if ring.len() <= 4 || tolerance <= 0.0 {
        return ring.to_vec();
    }
    let open = &ring[..ring.len() - 1];
    let far = (1..open.len())
        .max_by(|&i, &j| {
            let di = seg_dist(open[i], open[0], open[0]);
            let dj = seg_dist(open[j], open[0], open[0]);
            di.total_cmp(&dj).then(j.cmp(&i))
        })
        .unwrap_or(1);
    let mut out = douglas_peucker(&ring[..=far], tolerance);
    out.pop();
    out.extend(douglas_peucker(&ring[far..], tolerance));
    if out.len() < 4 {
        ring.to_vec()
    } else {
        out
    }
}
