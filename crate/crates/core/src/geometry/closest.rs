use super::Vec3;

/// Closest pair between a forward ray and a closed edge segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestApproach {
    /// Point on the edge (`m_d`).
    pub edge_point: Vec3,
    /// Point on the ray (`m_n`).
    pub ray_point: Vec3,
    pub gap: f64,
    /// Distance along the ray from its origin to `ray_point`.
    pub ray_param: f64,
    /// Normalized position of `edge_point` along the edge, in `[0, 1]`.
    pub edge_param: f64,
    /// Ray and edge are parallel; the pair is taken at the ray origin.
    pub parallel: bool,
}

/// Relative tolerance on `|e|^2 - (d.e)^2` below which the ray is treated as
/// parallel to the edge.
const PARALLEL_EPS: f64 = 1e-12;

/// Minimizes `|origin + s*dir - (a + t*(b - a))|` over `s >= 0`, `t in [0, 1]`.
///
/// `direction` must be unit length and the edge non-degenerate.
pub fn closest_approach(origin: &Vec3, direction: &Vec3, a: &Vec3, b: &Vec3) -> ClosestApproach {
    let edge = b - a;
    let w0 = origin - a;
    let de = direction.dot(&edge);
    let ee = edge.dot(&edge);
    let dw = direction.dot(&w0);
    let ew = edge.dot(&w0);

    let make = |s: f64, t: f64, parallel: bool| {
        let ray_point = origin + direction * s;
        let edge_point = a + edge * t;
        ClosestApproach {
            edge_point,
            ray_point,
            gap: (ray_point - edge_point).norm(),
            ray_param: s,
            edge_param: t,
            parallel,
        }
    };

    let denom = ee - de * de;
    if denom <= PARALLEL_EPS * ee {
        return make(0.0, (ew / ee).clamp(0.0, 1.0), true);
    }

    let t = (ew - de * dw) / denom;
    let s = t * de - dw;
    if s >= 0.0 && (0.0..=1.0).contains(&t) {
        return make(s, t, false);
    }

    // The constrained minimum lies on the boundary of the feasible region:
    // the ray origin (s = 0) or one of the edge endpoints (t = 0, t = 1).
    [
        make(0.0, (ew / ee).clamp(0.0, 1.0), false),
        make((-dw).max(0.0), 0.0, false),
        make((de - dw).max(0.0), 1.0, false),
    ]
    .into_iter()
    .min_by(|x, y| x.gap.total_cmp(&y.gap))
    .expect("non-empty")
}
