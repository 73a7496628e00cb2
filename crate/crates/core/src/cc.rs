//! Carnot-Caratheodory norm and geodesics on G²(ℝ²).
//!
//! The CC norm of exp(x + a) is the length of the shortest planar path from
//! the origin to x sweeping signed area a. For d = 2 the minimizers are
//! circle arcs; with chord length L = |x|₂ and half arc angle φ the chord
//! and segment-area relations are L = 2R sin φ and |a| = R²(φ − sin φ cos φ),
//! so φ solves the strictly increasing ratio equation
//! (φ − sin φ cos φ) / (4 sin² φ) = |a| / L².

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::math;

const PI: f64 = core::f64::consts::PI;

/// Above this |a|/L² the arc is numerically a full circle and the pure-area
/// branch takes over.
const PURE_AREA_RATIO: f64 = 1e6;
/// φ is kept away from the sin φ → 0 singularity at π.
const PHI_CAP: f64 = PI - 1e-9;
/// Bisection terminates at this interval width.
const PHI_TOL: f64 = 1e-12;

/// Solved geometry of the geodesic joining the identity to a group element.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSpec {
    /// Endpoint displacement x.
    pub chord: [f64; 2],
    /// The single independent level-2 entry a[0][1].
    pub signed_area: f64,
    /// Subtended angle 2φ, signed like the area; ±2π on the pure-area branch.
    pub arc_angle: f64,
    /// CC norm.
    pub length: f64,
}

/// (φ − sin φ cos φ) / (4 sin² φ), with a series for small φ where the
/// numerator cancels catastrophically.
fn segment_ratio(phi: f64) -> f64 {
    let num = if phi < 1e-2 {
        let p2 = phi * phi;
        phi * p2 * (2.0 / 3.0 - p2 * (2.0 / 15.0 - p2 * (4.0 / 315.0)))
    } else {
        phi - 0.5 * math::sin(2.0 * phi)
    };
    let s = math::sin(phi);
    num / (4.0 * s * s)
}

/// Solves segment_ratio(φ) = ratio by bisection on (0, cap).
fn solve_phi(ratio: f64, cap: f64) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = cap;
    if segment_ratio(hi) < ratio {
        return Err(Error::NonConvergence {
            residual: ratio - segment_ratio(hi),
        });
    }
    while hi - lo > PHI_TOL {
        let mid = 0.5 * (lo + hi);
        if segment_ratio(mid) < ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// CC norm from raw parts: chord (x0, x1) and signed area a01.
pub fn cc_norm_parts(x0: f64, x1: f64, area: f64) -> Result<f64> {
    Ok(spec_parts(x0, x1, area)?.length)
}

fn spec_parts(x0: f64, x1: f64, area: f64) -> Result<GeodesicSpec> {
    let l = math::hypot(x0, x1);
    let abs_a = math::abs(area);
    if abs_a == 0.0 {
        return Ok(GeodesicSpec {
            chord: [x0, x1],
            signed_area: area,
            arc_angle: 0.0,
            length: l,
        });
    }
    let sign = if area > 0.0 { 1.0 } else { -1.0 };
    let ratio = abs_a / (l * l);
    if l == 0.0 || ratio > PURE_AREA_RATIO {
        // Full circle of area |a|; the tiny chord correction is below the
        // branch threshold's resolution.
        return Ok(GeodesicSpec {
            chord: [x0, x1],
            signed_area: area,
            arc_angle: sign * 2.0 * PI,
            length: 2.0 * math::sqrt(PI * abs_a),
        });
    }
    let phi = solve_phi(ratio, PHI_CAP)?;
    Ok(GeodesicSpec {
        chord: [x0, x1],
        signed_area: area,
        arc_angle: sign * 2.0 * phi,
        length: l * phi / math::sin(phi),
    })
}

fn require_d2(g: &GroupElement) -> Result<()> {
    if g.dim() != 2 {
        return Err(Error::Unsupported(alloc::format!(
            "CC geometry requires d = 2, got d = {}",
            g.dim()
        )));
    }
    Ok(())
}

/// Solved geodesic geometry for a G²(ℝ²) element.
pub fn geodesic_spec(g: &GroupElement) -> Result<GeodesicSpec> {
    require_d2(g)?;
    spec_parts(g.log().x[0], g.log().x[1], g.log().a[1])
}

/// Exact Carnot-Caratheodory norm, d = 2 only.
pub fn cc_norm(g: &GroupElement) -> Result<f64> {
    require_d2(g)?;
    cc_norm_parts(g.log().x[0], g.log().x[1], g.log().a[1])
}

/// Piecewise-linear discretization of the CC geodesic from the identity to
/// g, with m + 1 vertices starting at 0 and ending at x.
///
/// For x = 0 the geodesic circle is non-unique up to rotation; we fix the
/// circle through the origin tangent to the first coordinate axis.
pub fn cc_geodesic(g: &GroupElement, m: usize) -> Result<Vec<[f64; 2]>> {
    require_d2(g)?;
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let x0 = g.log().x[0];
    let x1 = g.log().x[1];
    let area = g.log().a[1];
    let l = math::hypot(x0, x1);
    let mut verts = Vec::with_capacity(m + 1);

    if area == 0.0 {
        for j in 0..=m {
            let t = j as f64 / m as f64;
            verts.push([t * x0, t * x1]);
        }
        return Ok(verts);
    }

    let sign = if area > 0.0 { 1.0 } else { -1.0 };
    if l == 0.0 {
        // Closed circle of area |a|, tangent to the first axis at the origin.
        let r = math::sqrt(math::abs(area) / PI);
        for j in 0..=m {
            if j == 0 || j == m {
                verts.push([0.0, 0.0]);
                continue;
            }
            let th = 2.0 * PI * j as f64 / m as f64;
            verts.push([r * math::sin(th), sign * r * (1.0 - math::cos(th))]);
        }
        return Ok(verts);
    }

    // Arc branch, no threshold on the ratio: endpoint exactness matters more
    // than the norm's branch convention here.
    let ratio = math::abs(area) / (l * l);
    let phi = solve_phi(ratio, PHI_CAP)?;
    let sin_phi = math::sin(phi);
    let r = l / (2.0 * sin_phi);
    // Canonical frame: chord along +x. Center (L/2, s·k), start angle β0,
    // sweep s·2φ; positive area bulges below the chord.
    let k = (l / 2.0) * math::cos(phi) / sin_phi;
    let cx = l / 2.0;
    let cy = sign * k;
    let beta0 = math::atan2(-cy, -cx);
    // Rotate canonical coordinates onto the actual chord direction.
    let u = [x0 / l, x1 / l];
    for j in 0..=m {
        if j == 0 {
            verts.push([0.0, 0.0]);
            continue;
        }
        if j == m {
            verts.push([x0, x1]);
            continue;
        }
        let th = beta0 + sign * 2.0 * phi * j as f64 / m as f64;
        let px = cx + r * math::cos(th);
        let py = cy + r * math::sin(th);
        verts.push([px * u[0] - py * u[1], px * u[1] + py * u[0]]);
    }
    Ok(verts)
}
