//! Unwrapped polar angles along a point sequence.

use std::f64::consts::PI;

/// Accumulates per-step angle increments via `atan2` of successive points,
/// assuming each step rotates by less than `pi`. Returns the index of the
/// first point at the origin, where the polar angle is undefined.
pub(crate) fn unwrapped_angles(points: &[(f64, f64)]) -> Result<Vec<f64>, usize> {
    let mut out = Vec::with_capacity(points.len());
    let mut prev_raw = 0.0;
    for (i, &(x, y)) in points.iter().enumerate() {
        if x == 0.0 && y == 0.0 {
            return Err(i);
        }
        let raw = y.atan2(x);
        if i == 0 {
            out.push(raw);
        } else {
            let delta = wrap_to_pi(raw - prev_raw);
            out.push(out[i - 1] + delta);
        }
        prev_raw = raw;
    }
    Ok(out)
}

/// Map an angle difference into `[-pi, pi)`.
fn wrap_to_pi(angle: f64) -> f64 {
    (angle + PI).rem_euclid(2.0 * PI) - PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unwraps_across_branch_cut() {
        let points: Vec<(f64, f64)> = (0..20)
            .map(|n| {
                let phi = 0.5 * n as f64;
                (phi.cos(), phi.sin())
            })
            .collect();
        let angles = unwrapped_angles(&points).unwrap();
        for (n, angle) in angles.iter().enumerate() {
            assert!((angle - 0.5 * n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn origin_point_reported() {
        let points = [(1.0, 0.0), (0.0, 0.0)];
        assert_eq!(unwrapped_angles(&points), Err(1));
    }
}
