//! Homogeneous p-variation and related functionals, computed exactly over
//! the stored grid by dynamic programming.
//!
//! The supremum over dissections restricted to the grid is attained with
//! both endpoints included (dropping an endpoint never increases the sum),
//! so V(j) = max_{i<j} [V(i) + d(i,j)^p] with V(0) = 0 gives the exact
//! grid supremum in O(n²) distance evaluations. Ties in the argmax break
//! toward the earlier predecessor index.

use alloc::vec;
use alloc::vec::Vec;

use crate::cc;
use crate::error::{Error, Result};
use crate::group::{HomNorm, NormKind, VectorNorm};
use crate::math;
use crate::path::{subsample, Dissection, GroupPath};

/// x^p with fast paths for integer and half-integer exponents, which are
/// the only ones the experiments use in hot loops.
pub(crate) fn powp(x: f64, p: f64) -> f64 {
    let ip = p as i32;
    let frac = p - ip as f64;
    if frac == 0.0 {
        powi(x, ip)
    } else if frac == 0.5 {
        powi(x, ip) * math::sqrt(x)
    } else {
        math::powf(x, p)
    }
}

fn powi(x: f64, n: i32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// Result of a variation computation: the value (already raised to 1/p),
/// the exponent, and a maximizing dissection of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationResult {
    pub value: f64,
    pub p: f64,
    pub dissection: Dissection,
}

/// Shared DP kernel. `dist` evaluates the distance between grid points
/// i < j; returns (sup of Σ d^p, maximizing index chain).
fn pvar_dp<F>(n_points: usize, p: f64, mut dist: F) -> Result<(f64, Vec<usize>)>
where
    F: FnMut(usize, usize) -> Result<f64>,
{
    if n_points == 0 {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    if n_points == 1 {
        return Ok((0.0, vec![0]));
    }
    let mut v = vec![0.0f64; n_points];
    let mut prev = vec![0usize; n_points];
    for j in 1..n_points {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for i in 0..j {
            let c = v[i] + powp(dist(i, j)?, p);
            if c > best {
                best = c;
                arg = i;
            }
        }
        v[j] = best;
        prev[j] = arg;
    }
    let mut chain = vec![n_points - 1];
    while *chain.last().unwrap() != 0 {
        let c = prev[*chain.last().unwrap()];
        chain.push(c);
    }
    chain.reverse();
    Ok((v[n_points - 1], chain))
}

/// Homogeneous p-variation of a group path: exact supremum over all
/// sub-dissections of the grid.
pub fn p_variation(path: &GroupPath, p: f64, n: &HomNorm) -> Result<VariationResult> {
    if p < 1.0 {
        return Err(Error::InvalidInput("p must be at least 1".into()));
    }
    let (vp, chain) = pvar_dp(path.len(), p, |i, j| path.increment_norm(i, j, n))?;
    Ok(VariationResult {
        value: math::powf(vp, 1.0 / p),
        p,
        dissection: Dissection::new(chain, path.len() - 1)?,
    })
}

/// Approximate p-variation for large grids: grid points whose increments on
/// both sides are below `eps` are pruned before running the exact DP on the
/// surviving points. With eps = 0 this is the exact DP.
pub fn p_variation_pruned(
    path: &GroupPath,
    p: f64,
    n: &HomNorm,
    eps: f64,
) -> Result<VariationResult> {
    if p < 1.0 {
        return Err(Error::InvalidInput("p must be at least 1".into()));
    }
    if eps < 0.0 {
        return Err(Error::InvalidInput("eps must be nonnegative".into()));
    }
    let last = path.len() - 1;
    let mut kept = Vec::with_capacity(path.len());
    kept.push(0);
    for i in 1..last {
        if path.increment_norm(i - 1, i, n)? >= eps || path.increment_norm(i, i + 1, n)? >= eps {
            kept.push(i);
        }
    }
    if last > 0 {
        kept.push(last);
    }
    let (vp, chain) = pvar_dp(kept.len(), p, |i, j| {
        path.increment_norm(kept[i], kept[j], n)
    })?;
    let mapped: Vec<usize> = chain.into_iter().map(|k| kept[k]).collect();
    Ok(VariationResult {
        value: math::powf(vp, 1.0 / p),
        p,
        dissection: Dissection::new(mapped, last)?,
    })
}

/// q-variation of a discrete ℝᵏ-valued sequence (rows of `values`, row
/// length `dim`), with the Euclidean distance on increments. Same DP as the
/// group case.
pub fn discrete_q_variation(values: &[f64], dim: usize, q: f64) -> Result<VariationResult> {
    if q < 1.0 {
        return Err(Error::InvalidInput("q must be at least 1".into()));
    }
    if dim == 0 || values.len() % dim != 0 {
        return Err(Error::InvalidInput("values must be rows of length dim".into()));
    }
    let n_points = values.len() / dim;
    let (vq, chain) = pvar_dp(n_points, q, |i, j| {
        let mut acc = 0.0;
        for k in 0..dim {
            let d = values[j * dim + k] - values[i * dim + k];
            acc += d * d;
        }
        Ok(math::sqrt(acc))
    })?;
    Ok(VariationResult {
        value: math::powf(vq, 1.0 / q),
        p: q,
        dissection: Dissection::new(chain, n_points - 1)?,
    })
}

/// Distance between matching increments of two paths on the same grid:
/// ‖(X_{s,t})⁻¹ ⊗ Y_{s,t}‖, allocation-free.
pub fn increment_mismatch_norm(
    x: &GroupPath,
    y: &GroupPath,
    i: usize,
    j: usize,
    n: &HomNorm,
) -> Result<f64> {
    let d = x.dim();
    let (xi, xj) = (x.x_at(i), x.x_at(j));
    let (yi, yj) = (y.x_at(i), y.x_at(j));
    let (ai, aj) = (x.a_at(i), x.a_at(j));
    let (bi, bj) = (y.a_at(i), y.a_at(j));

    macro_rules! mismatch_a {
        ($k:expr, $l:expr) => {{
            let (k, l) = ($k, $l);
            let ax = aj[k * d + l] - ai[k * d + l] - 0.5 * (xi[k] * xj[l] - xj[k] * xi[l]);
            let ay = bj[k * d + l] - bi[k * d + l] - 0.5 * (yi[k] * yj[l] - yj[k] * yi[l]);
            let ix = xj[k] - xi[k];
            let il = xj[l] - xi[l];
            let jx = yj[k] - yi[k];
            let jl = yj[l] - yi[l];
            ay - ax - 0.5 * (ix * jl - il * jx)
        }};
    }

    if n.kind == NormKind::CarnotCaratheodory {
        if d != 2 {
            return Err(Error::Unsupported(
                "Carnot-Caratheodory norm requires d = 2".into(),
            ));
        }
        let m0 = (yj[0] - yi[0]) - (xj[0] - xi[0]);
        let m1 = (yj[1] - yi[1]) - (xj[1] - xi[1]);
        return cc::cc_norm_parts(m0, m1, mismatch_a!(0, 1));
    }

    let mut xacc = 0.0;
    for k in 0..d {
        let m = (yj[k] - yi[k]) - (xj[k] - xi[k]);
        match n.vector {
            VectorNorm::L1 => xacc += math::abs(m),
            VectorNorm::L2 => xacc += m * m,
            VectorNorm::LMax => xacc = math::max(xacc, math::abs(m)),
        }
    }
    if n.vector == VectorNorm::L2 {
        xacc = math::sqrt(xacc);
    }
    let mut aacc = 0.0;
    for k in 0..d {
        for l in (k + 1)..d {
            let m = mismatch_a!(k, l);
            match n.vector {
                VectorNorm::L1 => aacc += math::abs(m),
                VectorNorm::L2 => aacc += m * m,
                VectorNorm::LMax => aacc = math::max(aacc, math::abs(m)),
            }
        }
    }
    if n.vector == VectorNorm::L2 {
        aacc = math::sqrt(aacc);
    }
    Ok(match n.kind {
        NormKind::ExplicitSum => xacc + math::sqrt(aacc),
        NormKind::ExplicitMax => math::max(xacc, math::sqrt(aacc)),
        NormKind::CarnotCaratheodory => unreachable!(),
    })
}

fn require_same_grid(x: &GroupPath, y: &GroupPath) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    if x.times() != y.times() {
        return Err(Error::InvalidInput("paths must share an identical grid".into()));
    }
    Ok(())
}

/// Supremum distances between two paths on the same grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupDistance {
    /// sup over grid pairs s ≤ t of d(X_{s,t}, Y_{s,t}).
    pub increment: f64,
    /// sup over grid times t of d(X_t, Y_t).
    pub pointwise: f64,
}

pub fn sup_distance(x: &GroupPath, y: &GroupPath, n: &HomNorm) -> Result<SupDistance> {
    require_same_grid(x, y)?;
    let len = x.len();
    let mut inc = 0.0f64;
    let mut pt = 0.0f64;
    for i in 0..len {
        for j in (i + 1)..len {
            let v = increment_mismatch_norm(x, y, i, j, n)?;
            if v > inc {
                inc = v;
            }
            if i == 0 && v > pt {
                pt = v;
            }
        }
    }
    Ok(SupDistance {
        increment: inc,
        pointwise: pt,
    })
}

/// p-variation distance: sup over sub-dissections of Σ d(X_{t_i,t_{i+1}},
/// Y_{t_i,t_{i+1}})^p, raised to 1/p. Zero iff all increments coincide.
pub fn pvar_distance(x: &GroupPath, y: &GroupPath, p: f64, n: &HomNorm) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::InvalidInput("p must be at least 1".into()));
    }
    require_same_grid(x, y)?;
    let (vp, _) = pvar_dp(x.len(), p, |i, j| increment_mismatch_norm(x, y, i, j, n))?;
    Ok(math::powf(vp, 1.0 / p))
}

/// Both sides of the interpolation estimate
/// d_{p-var} ≤ C d_∞^{1−p′/p} (‖X‖_{p′-var}^{p′/p} + ‖Y‖_{p′-var}^{p′/p}),
/// together with the implied constant LHS/RHS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationReport {
    pub lhs: f64,
    pub d_inf: f64,
    pub x_pvar: f64,
    pub y_pvar: f64,
    pub rhs_without_c: f64,
    pub implied_c: f64,
}

pub fn interpolation_bound_check(
    x: &GroupPath,
    y: &GroupPath,
    p: f64,
    p_prime: f64,
    n: &HomNorm,
) -> Result<InterpolationReport> {
    if !(2.0 < p_prime && p_prime < p) {
        return Err(Error::InvalidInput("need 2 < p' < p".into()));
    }
    let lhs = pvar_distance(x, y, p, n)?;
    let d_inf = sup_distance(x, y, n)?.increment;
    let x_pvar = p_variation(x, p_prime, n)?.value;
    let y_pvar = p_variation(y, p_prime, n)?.value;
    let e = p_prime / p;
    let rhs = math::powf(d_inf, 1.0 - e) * (math::powf(x_pvar, e) + math::powf(y_pvar, e));
    let implied_c = if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    };
    Ok(InterpolationReport {
        lhs,
        d_inf,
        x_pvar,
        y_pvar,
        rhs_without_c: rhs,
        implied_c,
    })
}

/// Deterministic decomposition bound for lifted piecewise-linear
/// approximations: with K the chord-comparison factor
/// (|x^D|_{p-var}/|x|_{p-var})^p,
///
///   ‖x^D‖_{p-var}^p ≤ 3^{p−1}·max_{(s_k)⊂D} Σ_k ‖x^D_{s_k,s_{k+1}}‖^p
///                    + 3^{p−1}·K·|x|_{p-var}^p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PwlBoundReport {
    /// ‖x^D‖_{p-var}^p over the full grid.
    pub lhs_pow: f64,
    /// max over sub-dissections of D of Σ ‖x^D_{s_k,s_{k+1}}‖^p.
    pub block_term: f64,
    /// Euclidean p-variation^p of the level-1 input path x.
    pub level1_pvar_pow: f64,
    /// Chord comparison factor K = (|x^D|_{p-var} / |x|_{p-var})^p.
    pub chord_factor: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn pwl_pvar_bound_check(
    path: &GroupPath,
    approx: &GroupPath,
    diss: &Dissection,
    p: f64,
    n: &HomNorm,
) -> Result<PwlBoundReport> {
    require_same_grid(path, approx)?;
    let d = path.dim();
    let lhs_pow = powp(p_variation(approx, p, n)?.value, p);
    let blocks = subsample(approx, diss)?;
    let block_term = powp(p_variation(&blocks, p, n)?.value, p);
    let xs: Vec<f64> = (0..path.len()).flat_map(|i| path.x_at(i).to_vec()).collect();
    let level1 = powp(discrete_q_variation(&xs, d, p)?.value, p);
    let xds: Vec<f64> = (0..approx.len())
        .flat_map(|i| approx.x_at(i).to_vec())
        .collect();
    let level1_d = powp(discrete_q_variation(&xds, d, p)?.value, p);
    let chord_factor = if level1 > 0.0 { level1_d / level1 } else { 1.0 };
    let c = math::powf(3.0, p - 1.0);
    let rhs = c * block_term + c * chord_factor * level1;
    Ok(PwlBoundReport {
        lhs_pow,
        block_term,
        level1_pvar_pow: level1,
        chord_factor,
        rhs,
        holds: lhs_pow <= rhs * (1.0 + 1e-12) + 1e-12,
    })
}
