//! Group-valued paths on finite grids: lifting, subsampling, concatenation,
//! reparametrization, dilation, and the piecewise-linear / geodesic
//! approximations.
//!
//! Paths are stored as absolute points (first point = identity); increments
//! are always derived as point(i)⁻¹ ⊗ point(j), so Chen's relation
//! increment(r,t) = increment(r,s) ⊗ increment(s,t) holds by construction.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cc;
use crate::error::{Error, Result};
use crate::group::{GroupElement, HomNorm, LieValue, NormKind, VectorNorm};
use crate::math;

/// A strictly increasing set of grid indices containing both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Dissection {
    indices: Vec<usize>,
}

impl Dissection {
    /// Validates: nonempty, strictly increasing, starts at 0, ends at `last`.
    pub fn new(indices: Vec<usize>, last: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidInput("dissection must be nonempty".into()));
        }
        if indices[0] != 0 || *indices.last().unwrap() != last {
            return Err(Error::InvalidInput(
                "dissection must contain both endpoints".into(),
            ));
        }
        for w in indices.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidInput(
                    "dissection indices must be strictly increasing".into(),
                ));
            }
        }
        Ok(Dissection { indices })
    }

    /// Every grid point of a path with `n_points` points.
    pub fn full(n_points: usize) -> Self {
        Dissection {
            indices: (0..n_points).collect(),
        }
    }

    /// Just the two endpoints.
    pub fn two_point(n_points: usize) -> Self {
        Dissection {
            indices: vec![0, n_points - 1],
        }
    }

    /// 2^k equal blocks; requires 2^k to divide the number of grid steps.
    pub fn dyadic(n_points: usize, k: u32) -> Result<Self> {
        let n = n_points - 1;
        let blocks = 1usize << k;
        if n % blocks != 0 {
            return Err(Error::InvalidInput(format!(
                "grid with {n} steps is not divisible into 2^{k} blocks"
            )));
        }
        let step = n / blocks;
        Ok(Dissection {
            indices: (0..=blocks).map(|b| b * step).collect(),
        })
    }

    /// Geometrically shrinking mesh toward the right endpoint:
    /// indices n, ⌊n·r⌋, ⌊n·r²⌋, … down to 0, with 0 < r < 1.
    pub fn geometric(n_points: usize, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidInput("geometric ratio must be in (0,1)".into()));
        }
        let n = n_points - 1;
        let mut idx = vec![n];
        let mut v = n as f64;
        loop {
            v *= ratio;
            let i = v as usize;
            if i == 0 {
                break;
            }
            if *idx.last().unwrap() != i {
                idx.push(i);
            }
        }
        idx.push(0);
        idx.reverse();
        Ok(Dissection { indices: idx })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// A G²(ℝᵈ)-valued path on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPath {
    d: usize,
    times: Vec<f64>,
    /// (n+1) × d level-1 values, row-major.
    xs: Vec<f64>,
    /// (n+1) × d × d antisymmetric level-2 log values, row-major.
    aas: Vec<f64>,
}

impl GroupPath {
    pub fn with_capacity(d: usize, n_points: usize) -> Self {
        GroupPath {
            d,
            times: Vec::with_capacity(n_points),
            xs: Vec::with_capacity(n_points * d),
            aas: Vec::with_capacity(n_points * d * d),
        }
    }

    /// Rebuilds a path from raw columns, validating every invariant.
    pub fn from_raw(d: usize, times: Vec<f64>, xs: Vec<f64>, aas: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        let n = times.len();
        if n == 0 {
            return Err(Error::InvalidInput("path must have at least one point".into()));
        }
        if xs.len() != n * d || aas.len() != n * d * d {
            return Err(Error::InvalidInput("column lengths disagree".into()));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidInput("times must be strictly increasing".into()));
            }
        }
        let path = GroupPath { d, times, xs, aas };
        if !path.point(0).is_identity() {
            return Err(Error::InvalidInput("path must start at the identity".into()));
        }
        for i in 0..n {
            LieValue {
                x: path.x_at(i).to_vec(),
                a: path.a_at(i).to_vec(),
            }
            .validate()?;
        }
        Ok(path)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of grid points (n + 1 for n steps).
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Flat (n+1) × d level-1 coordinates, row-major.
    pub fn xs_raw(&self) -> &[f64] {
        &self.xs
    }

    /// Flat (n+1) × d² log-area coordinates, row-major.
    pub fn aas_raw(&self) -> &[f64] {
        &self.aas
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn x_at(&self, i: usize) -> &[f64] {
        &self.xs[i * self.d..(i + 1) * self.d]
    }

    pub fn a_at(&self, i: usize) -> &[f64] {
        &self.aas[i * self.d * self.d..(i + 1) * self.d * self.d]
    }

    pub fn point(&self, i: usize) -> GroupElement {
        GroupElement::from_log(LieValue {
            x: self.x_at(i).to_vec(),
            a: self.a_at(i).to_vec(),
        })
        .expect("stored points are valid")
    }

    fn push_raw(&mut self, t: f64, x: &[f64], a: &[f64]) {
        debug_assert!(self.times.last().map_or(true, |last| t > *last));
        self.times.push(t);
        self.xs.extend_from_slice(x);
        self.aas.extend_from_slice(a);
    }

    fn push_identity(&mut self, t: f64) {
        self.times.push(t);
        self.xs.extend(core::iter::repeat(0.0).take(self.d));
        self.aas.extend(core::iter::repeat(0.0).take(self.d * self.d));
    }

    /// Appends last ⊗ exp(dx, 0): the chord step of the canonical lift.
    fn push_chord_step(&mut self, t: f64, dx: &[f64]) {
        let d = self.d;
        let last = self.len() - 1;
        let mut x = vec![0.0; d];
        let mut a = vec![0.0; d * d];
        {
            let px = self.x_at(last);
            let pa = self.a_at(last);
            for i in 0..d {
                x[i] = px[i] + dx[i];
            }
            for i in 0..d {
                for j in (i + 1)..d {
                    let v = pa[i * d + j] + 0.5 * (px[i] * dx[j] - px[j] * dx[i]);
                    a[i * d + j] = v;
                    a[j * d + i] = -v;
                }
            }
        }
        self.push_raw(t, &x, &a);
    }

    /// Increment point(i)⁻¹ ⊗ point(j).
    pub fn increment(&self, i: usize, j: usize) -> GroupElement {
        self.point(i).inverse().product(&self.point(j)).unwrap()
    }

    /// Homogeneous norm of the increment (i, j), computed without allocating.
    pub fn increment_norm(&self, i: usize, j: usize, n: &HomNorm) -> Result<f64> {
        let d = self.d;
        let xi = self.x_at(i);
        let xj = self.x_at(j);
        let ai = self.a_at(i);
        let aj = self.a_at(j);

        if n.kind == NormKind::CarnotCaratheodory {
            if d != 2 {
                return Err(Error::Unsupported(
                    "Carnot-Caratheodory norm requires d = 2".into(),
                ));
            }
            let dx0 = xj[0] - xi[0];
            let dx1 = xj[1] - xi[1];
            let da = aj[1] - ai[1] - 0.5 * (xi[0] * xj[1] - xj[0] * xi[1]);
            return cc::cc_norm_parts(dx0, dx1, da);
        }

        let mut xacc = 0.0;
        for k in 0..d {
            let dx = xj[k] - xi[k];
            match n.vector {
                VectorNorm::L1 => xacc += math::abs(dx),
                VectorNorm::L2 => xacc += dx * dx,
                VectorNorm::LMax => xacc = math::max(xacc, math::abs(dx)),
            }
        }
        if n.vector == VectorNorm::L2 {
            xacc = math::sqrt(xacc);
        }
        let mut aacc = 0.0;
        for k in 0..d {
            for l in (k + 1)..d {
                let da = aj[k * d + l] - ai[k * d + l] - 0.5 * (xi[k] * xj[l] - xj[k] * xi[l]);
                match n.vector {
                    VectorNorm::L1 => aacc += math::abs(da),
                    VectorNorm::L2 => aacc += da * da,
                    VectorNorm::LMax => aacc = math::max(aacc, math::abs(da)),
                }
            }
        }
        if n.vector == VectorNorm::L2 {
            aacc = math::sqrt(aacc);
        }
        let v = match n.kind {
            NormKind::ExplicitSum => xacc + math::sqrt(aacc),
            NormKind::ExplicitMax => math::max(xacc, math::sqrt(aacc)),
            NormKind::CarnotCaratheodory => unreachable!(),
        };
        Ok(v)
    }

    /// Euclidean (vector) norm of the level-1 increment only.
    pub fn level1_increment_norm(&self, i: usize, j: usize, vn: VectorNorm) -> f64 {
        let xi = self.x_at(i);
        let xj = self.x_at(j);
        let mut acc = 0.0;
        for k in 0..self.d {
            let dx = xj[k] - xi[k];
            match vn {
                VectorNorm::L1 => acc += math::abs(dx),
                VectorNorm::L2 => acc += dx * dx,
                VectorNorm::LMax => acc = math::max(acc, math::abs(dx)),
            }
        }
        if vn == VectorNorm::L2 {
            math::sqrt(acc)
        } else {
            acc
        }
    }
}

/// Canonical lift of a piecewise-linear path: each segment contributes
/// exp(Δx, 0), accumulated left-to-right. `vertices` is row-major with
/// `d` columns and the first row must be 0.
pub fn lift_piecewise_linear(times: &[f64], vertices: &[f64], d: usize) -> Result<GroupPath> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let n = times.len();
    if n == 0 || vertices.len() != n * d {
        return Err(Error::InvalidInput(
            "vertex rows must match the time grid".into(),
        ));
    }
    if vertices[..d].iter().any(|v| *v != 0.0) {
        return Err(Error::InvalidInput("path must start at the origin".into()));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidInput("times must be strictly increasing".into()));
        }
    }
    let mut path = GroupPath::with_capacity(d, n);
    path.push_identity(times[0]);
    let mut dx = vec![0.0; d];
    for k in 1..n {
        for i in 0..d {
            dx[i] = vertices[k * d + i] - vertices[(k - 1) * d + i];
        }
        path.push_chord_step(times[k], &dx);
    }
    Ok(path)
}

/// Convenience wrapper for planar vertex lists.
pub fn lift_planar(times: &[f64], vertices: &[[f64; 2]]) -> Result<GroupPath> {
    let flat: Vec<f64> = vertices.iter().flat_map(|v| v.iter().copied()).collect();
    lift_piecewise_linear(times, &flat, 2)
}

/// Restriction of a path to a dissection; points are copied, so increments
/// stay Chen-consistent.
pub fn subsample(path: &GroupPath, diss: &Dissection) -> Result<GroupPath> {
    let last = path.len() - 1;
    if *diss.indices().last().unwrap() != last {
        return Err(Error::InvalidInput(
            "dissection is not subordinate to the path grid".into(),
        ));
    }
    let d = path.dim();
    let mut out = GroupPath::with_capacity(d, diss.len());
    for &i in diss.indices() {
        if i > last {
            return Err(Error::InvalidInput("dissection index out of range".into()));
        }
        out.push_raw(path.times()[i], path.x_at(i), path.a_at(i));
    }
    Ok(out)
}

/// Lifted piecewise-linear approximation x^D, evaluated on the full grid of
/// the input path. Within a D-interval [t_i, t_j] the point at time t is
/// node_i ⊗ exp(s · M_{t_i,t_j}) with s = (t − t_i)/(t_j − t_i), a straight
/// chord with exactly zero log-area.
pub fn piecewise_linear_approx(path: &GroupPath, diss: &Dissection) -> Result<GroupPath> {
    let last = path.len() - 1;
    if *diss.indices().last().unwrap() != last || *diss.indices().first().unwrap() != 0 {
        return Err(Error::InvalidInput(
            "dissection is not subordinate to the path grid".into(),
        ));
    }
    let d = path.dim();
    let mut out = GroupPath::with_capacity(d, path.len());
    out.push_identity(path.times()[0]);
    let idx = diss.indices();
    let mut chord = vec![0.0; d];
    for w in idx.windows(2) {
        let (i, j) = (w[0], w[1]);
        if j > last {
            return Err(Error::InvalidInput("dissection index out of range".into()));
        }
        for k in 0..d {
            chord[k] = path.x_at(j)[k] - path.x_at(i)[k];
        }
        let node = out.point(out.len() - 1);
        let ti = path.times()[i];
        let tj = path.times()[j];
        // Interior grid times keep the fine resolution of the input path.
        for g in (i + 1)..j {
            let s = (path.times()[g] - ti) / (tj - ti);
            let step = GroupElement::from_chord(chord.iter().map(|c| s * c).collect());
            let p = node.product(&step).unwrap();
            out.push_raw(path.times()[g], &p.log().x, &p.log().a);
        }
        let step = GroupElement::from_chord(chord.clone());
        let p = node.product(&step).unwrap();
        out.push_raw(tj, &p.log().x, &p.log().a);
    }
    Ok(out)
}

/// Geodesic approximation M^{[D]} for d = 2: each D-increment is replaced by
/// the m-vertex polygonal discretization of its CC geodesic, then lifted.
pub fn geodesic_approx(path: &GroupPath, diss: &Dissection, m: usize) -> Result<GroupPath> {
    if path.dim() != 2 {
        return Err(Error::Unsupported(
            "geodesic approximation requires d = 2".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let last = path.len() - 1;
    if *diss.indices().last().unwrap() != last {
        return Err(Error::InvalidInput(
            "dissection is not subordinate to the path grid".into(),
        ));
    }
    let mut out = GroupPath::with_capacity(2, diss.len() * m + 1);
    out.push_identity(path.times()[0]);
    for w in diss.indices().windows(2) {
        let (i, j) = (w[0], w[1]);
        let inc = path.increment(i, j);
        let verts = cc::cc_geodesic(&inc, m)?;
        let ti = path.times()[i];
        let tj = path.times()[j];
        for (k, pair) in verts.windows(2).enumerate() {
            let t = ti + (tj - ti) * (k + 1) as f64 / m as f64;
            let dx = vec![pair[1][0] - pair[0][0], pair[1][1] - pair[0][1]];
            out.push_chord_step(t, &dx);
        }
    }
    Ok(out)
}

/// Concatenation p ∗ q: q's grid is shifted to start at p's endpoint and its
/// points are left-multiplied by p's final element.
pub fn concatenate(p: &GroupPath, q: &GroupPath) -> Result<GroupPath> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    if !q.point(0).is_identity() {
        return Err(Error::InvalidInput(
            "second path must start at the identity".into(),
        ));
    }
    let d = p.dim();
    let shift = p.times()[p.len() - 1] - q.times()[0];
    let tail = p.point(p.len() - 1);
    let mut out = GroupPath::with_capacity(d, p.len() + q.len() - 1);
    for i in 0..p.len() {
        out.push_raw(p.times()[i], p.x_at(i), p.a_at(i));
    }
    for k in 1..q.len() {
        let g = tail.product(&q.point(k))?;
        out.push_raw(q.times()[k] + shift, &g.log().x, &g.log().a);
    }
    Ok(out)
}

/// Reparametrization by a nondecreasing index map: the output point at
/// `target_times[k]` is the input point at `index_map[k]`. Plateaus in the
/// map give repeated points (zero increments).
pub fn time_change(
    path: &GroupPath,
    target_times: &[f64],
    index_map: &[usize],
) -> Result<GroupPath> {
    if target_times.len() != index_map.len() || index_map.is_empty() {
        return Err(Error::InvalidInput(
            "target grid and index map must have equal nonzero length".into(),
        ));
    }
    if index_map[0] != 0 {
        return Err(Error::InvalidInput(
            "index map must start at 0 so the path starts at the identity".into(),
        ));
    }
    for w in index_map.windows(2) {
        if w[1] < w[0] {
            return Err(Error::InvalidInput("index map must be nondecreasing".into()));
        }
    }
    for w in target_times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidInput("times must be strictly increasing".into()));
        }
    }
    let d = path.dim();
    let mut out = GroupPath::with_capacity(d, index_map.len());
    for (k, &i) in index_map.iter().enumerate() {
        if i >= path.len() {
            return Err(Error::InvalidInput("index map out of range".into()));
        }
        out.push_raw(target_times[k], path.x_at(i), path.a_at(i));
    }
    Ok(out)
}

/// Pointwise dilation δ_c of every point of the path.
pub fn path_dilate(c: f64, path: &GroupPath) -> GroupPath {
    let d = path.dim();
    let c2 = c * c;
    let mut out = GroupPath {
        d,
        times: path.times.clone(),
        xs: path.xs.iter().map(|v| c * v).collect(),
        aas: Vec::with_capacity(path.aas.len()),
    };
    for i in 0..path.len() {
        let a = path.a_at(i);
        for k in 0..d {
            for l in 0..d {
                // Scale via the upper triangle's sign structure so the
                // result stays exactly antisymmetric.
                out.aas.push(if k == l {
                    0.0
                } else if k < l {
                    c2 * a[k * d + l]
                } else {
                    -(c2 * a[l * d + k])
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group;
    use crate::group::hom_norm;

    fn unit_square() -> GroupPath {
        let verts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]];
        // 0-area times; strictly increasing.
        lift_planar(&[0.0, 1.0, 2.0, 3.0, 4.0], &verts).unwrap()
    }

    #[test]
    fn unit_square_loop_area() {
        let p = unit_square();
        let g = p.point(4);
        assert_eq!(g.log().x, vec![0.0, 0.0]);
        assert!((g.log().a[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_segment_no_area() {
        let p = lift_planar(&[0.0, 1.0], &[[0.0, 0.0], [1.0, 2.0]]).unwrap();
        let g = p.point(1);
        assert_eq!(g.log().x, vec![1.0, 2.0]);
        assert_eq!(g.log().a[1], 0.0);
    }

    #[test]
    fn triangle_shoelace() {
        let p = lift_planar(
            &[0.0, 1.0, 2.0, 3.0],
            &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
        )
        .unwrap();
        let g = p.point(3);
        assert!((g.log().a[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn subsample_identity_and_two_point() {
        let p = unit_square();
        let full = subsample(&p, &Dissection::full(p.len())).unwrap();
        assert_eq!(full, p);
        let two = subsample(&p, &Dissection::two_point(p.len())).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two.increment(0, 1), p.increment(0, 4));
    }

    #[test]
    fn chen_relation_on_subsample() {
        let p = unit_square();
        let diss = Dissection::new(vec![0, 2, 4], 4).unwrap();
        let s = subsample(&p, &diss).unwrap();
        let whole = s.increment(0, 2);
        let glued = s.increment(0, 1).product(&s.increment(1, 2)).unwrap();
        assert_eq!(whole, glued);
    }

    #[test]
    fn pwl_approx_full_grid_keeps_level1() {
        let p = unit_square();
        let ap = piecewise_linear_approx(&p, &Dissection::full(p.len())).unwrap();
        for i in 0..p.len() {
            assert_eq!(ap.x_at(i), p.x_at(i));
        }
        // Full grid of a polygon: approximation is the path itself.
        for i in 0..p.len() {
            assert_eq!(ap.a_at(i), p.a_at(i));
        }
    }

    #[test]
    fn pwl_approx_two_point_is_single_chord() {
        let p = unit_square();
        let ap = piecewise_linear_approx(&p, &Dissection::two_point(p.len())).unwrap();
        let inc = ap.increment(0, ap.len() - 1);
        assert_eq!(inc.log().x, p.increment(0, 4).log().x);
        assert_eq!(inc.log().a[1], 0.0);
        // Within-interval increments have exactly zero log-area.
        for i in 0..ap.len() - 1 {
            assert_eq!(ap.increment(i, i + 1).log().a[1], 0.0);
        }
    }

    #[test]
    fn pwl_approx_is_projection() {
        let p = unit_square();
        let diss = Dissection::new(vec![0, 2, 4], 4).unwrap();
        let once = piecewise_linear_approx(&p, &diss).unwrap();
        let twice = piecewise_linear_approx(&once, &diss).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn concatenate_round_trip() {
        let p = unit_square();
        // Split at vertex 2 and reconcatenate.
        let mut head = GroupPath::with_capacity(2, 3);
        head.push_identity(p.times()[0]);
        for i in 1..3 {
            head.push_raw(p.times()[i], p.x_at(i), p.a_at(i));
        }
        let mut tail = GroupPath::with_capacity(2, 3);
        tail.push_identity(p.times()[2]);
        for i in 3..5 {
            let g = p.increment(2, i);
            tail.push_raw(p.times()[i], &g.log().x, &g.log().a);
        }
        let glued = concatenate(&head, &tail).unwrap();
        assert_eq!(glued.len(), p.len());
        for i in 0..p.len() {
            let dist =
                group::distance(&glued.point(i), &p.point(i), &HomNorm::SUM_L2).unwrap();
            assert!(dist < 1e-13);
        }
    }

    #[test]
    fn time_change_identity_and_plateau() {
        let p = unit_square();
        let id = time_change(&p, p.times(), &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(id, p);
        let plateau = time_change(&p, &[0.0, 1.0, 2.0, 3.0], &[0, 1, 1, 4]).unwrap();
        assert!(plateau.increment(1, 2).is_identity());
    }

    #[test]
    fn dilate_scales_areas_by_c_squared() {
        let p = unit_square();
        let q = path_dilate(2.0, &p);
        assert_eq!(q.point(4).log().a[1], 4.0 * p.point(4).log().a[1]);
        assert_eq!(path_dilate(1.0, &p), p);
    }

    #[test]
    fn dilate_matches_lift_of_scaled_polygon() {
        let verts = [[0.0, 0.0], [0.3, -0.1], [0.5, 0.7], [-0.2, 0.4]];
        let times = [0.0, 1.0, 2.0, 3.0];
        let p = lift_planar(&times, &verts).unwrap();
        for c in [-1.0, 2.0] {
            let scaled: Vec<[f64; 2]> = verts.iter().map(|v| [c * v[0], c * v[1]]).collect();
            let q = lift_planar(&times, &scaled).unwrap();
            let dq = path_dilate(c, &p);
            for i in 0..p.len() {
                let dist = group::distance(&q.point(i), &dq.point(i), &HomNorm::SUM_L2).unwrap();
                assert!(dist < 1e-12);
            }
        }
    }

    #[test]
    fn increment_norm_matches_slow_path() {
        let p = unit_square();
        for i in 0..p.len() {
            for j in i..p.len() {
                for n in [HomNorm::SUM_L2, HomNorm::SUM_L1, HomNorm::MAX_L2, HomNorm::CC] {
                    let fast = p.increment_norm(i, j, &n).unwrap();
                    let slow = hom_norm(&p.increment(i, j), &n).unwrap();
                    assert!(
                        (fast - slow).abs() <= 1e-14 * (1.0 + slow),
                        "i={i} j={j} {fast} vs {slow}"
                    );
                }
            }
        }
    }

    #[test]
    fn geodesic_approx_straight_path_is_itself() {
        let p = lift_planar(&[0.0, 1.0], &[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let g = geodesic_approx(&p, &Dissection::two_point(2), 4).unwrap();
        let end = g.point(g.len() - 1);
        assert_eq!(end.log().x, vec![1.0, 0.0]);
        assert_eq!(end.log().a[1], 0.0);
    }

    #[test]
    fn geodesic_approx_converges_at_nodes() {
        let p = unit_square();
        let diss = Dissection::new(vec![0, 2, 4], 4).unwrap();
        let g = geodesic_approx(&p, &diss, 512).unwrap();
        // Node times are ti; locate them in the output grid.
        for (k, &i) in diss.indices().iter().enumerate() {
            let t = p.times()[i];
            let pos = k * 512;
            assert!((g.times()[pos] - t).abs() < 1e-12);
            let dist = group::distance(&g.point(pos), &p.point(i), &HomNorm::SUM_L2).unwrap();
            assert!(dist < 1e-2, "node {k}: {dist}");
        }
    }
}
