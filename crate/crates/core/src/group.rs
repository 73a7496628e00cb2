//! Arithmetic in the step-2 free nilpotent group G²(ℝᵈ), in log coordinates.
//!
//! An element is stored as its logarithm (x, a) with x ∈ ℝᵈ and a ∈ so(d).
//! The tensor representative (1, x, a + ½ x⊗x) is derived on demand and is
//! never the canonical form: keeping log coordinates makes antisymmetry of
//! the level-2 part exact under every operation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Vector norm used on level 1 and on the independent level-2 entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorNorm {
    L1,
    L2,
    LMax,
}

/// Kind of homogeneous norm on the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// |x| + |a|^{1/2}
    ExplicitSum,
    /// max(|x|, |a|^{1/2})
    ExplicitMax,
    /// Exact Carnot-Caratheodory norm; d = 2 only.
    CarnotCaratheodory,
}

/// A homogeneous norm: the kind together with the underlying vector norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomNorm {
    pub kind: NormKind,
    pub vector: VectorNorm,
}

impl HomNorm {
    pub const SUM_L2: HomNorm = HomNorm {
        kind: NormKind::ExplicitSum,
        vector: VectorNorm::L2,
    };
    pub const SUM_L1: HomNorm = HomNorm {
        kind: NormKind::ExplicitSum,
        vector: VectorNorm::L1,
    };
    pub const MAX_L2: HomNorm = HomNorm {
        kind: NormKind::ExplicitMax,
        vector: VectorNorm::L2,
    };
    pub const CC: HomNorm = HomNorm {
        kind: NormKind::CarnotCaratheodory,
        vector: VectorNorm::L2,
    };
}

pub fn vector_norm(v: &[f64], norm: VectorNorm) -> f64 {
    match norm {
        VectorNorm::L1 => v.iter().map(|t| math::abs(*t)).sum(),
        VectorNorm::L2 => math::sqrt(v.iter().map(|t| t * t).sum()),
        VectorNorm::LMax => v.iter().fold(0.0, |m, t| math::max(m, math::abs(*t))),
    }
}

/// Norm of an antisymmetric d×d matrix, taken over the d(d-1)/2 independent
/// upper-triangular entries.
pub fn upper_norm(a: &[f64], d: usize, norm: VectorNorm) -> f64 {
    let mut acc = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            let v = a[i * d + j];
            match norm {
                VectorNorm::L1 => acc += math::abs(v),
                VectorNorm::L2 => acc += v * v,
                VectorNorm::LMax => acc = math::max(acc, math::abs(v)),
            }
        }
    }
    if norm == VectorNorm::L2 {
        math::sqrt(acc)
    } else {
        acc
    }
}

/// Log coordinates of a group element: level-1 vector and antisymmetric
/// level-2 matrix, row-major d×d.
#[derive(Debug, Clone, PartialEq)]
pub struct LieValue {
    pub x: Vec<f64>,
    pub a: Vec<f64>,
}

impl LieValue {
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn zero(d: usize) -> Self {
        LieValue {
            x: vec![0.0; d],
            a: vec![0.0; d * d],
        }
    }

    /// Checks the so(d) membership and the shape agreement between x and a.
    pub fn validate(&self) -> Result<()> {
        let d = self.x.len();
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if self.a.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                got: self.a.len(),
            });
        }
        for i in 0..d {
            for j in 0..d {
                let ok = if i == j {
                    self.a[i * d + j] == 0.0
                } else {
                    self.a[i * d + j] == -self.a[j * d + i]
                };
                if !ok {
                    return Err(Error::InvalidInput(format!(
                        "level-2 matrix is not antisymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A point of G²(ℝᵈ), canonically represented by its log coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    log: LieValue,
}

impl GroupElement {
    pub fn identity(d: usize) -> Self {
        GroupElement {
            log: LieValue::zero(d),
        }
    }

    /// Builds exp(x + a) from a full antisymmetric matrix. Fails if a is not
    /// exactly antisymmetric.
    pub fn from_log(log: LieValue) -> Result<Self> {
        log.validate()?;
        Ok(GroupElement { log })
    }

    /// Builds exp(x + a) from the independent entries a[i][j], i < j, listed
    /// row by row.
    pub fn from_upper(x: Vec<f64>, upper: &[f64]) -> Result<Self> {
        let d = x.len();
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if upper.len() != d * (d - 1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: d * (d - 1) / 2,
                got: upper.len(),
            });
        }
        let mut a = vec![0.0; d * d];
        let mut k = 0;
        for i in 0..d {
            for j in (i + 1)..d {
                a[i * d + j] = upper[k];
                a[j * d + i] = -upper[k];
                k += 1;
            }
        }
        Ok(GroupElement {
            log: LieValue { x, a },
        })
    }

    /// exp(Δx) for a straight chord: zero log-area.
    pub fn from_chord(x: Vec<f64>) -> Self {
        let d = x.len();
        GroupElement {
            log: LieValue {
                x,
                a: vec![0.0; d * d],
            },
        }
    }

    pub fn log(&self) -> &LieValue {
        &self.log
    }

    pub fn dim(&self) -> usize {
        self.log.dim()
    }

    pub fn is_identity(&self) -> bool {
        self.log.x.iter().all(|v| *v == 0.0) && self.log.a.iter().all(|v| *v == 0.0)
    }

    /// Group product via the step-2 BCH formula:
    /// log(g ⊗ h) = (x_g + x_h, a_g + a_h + ½[x_g, x_h]).
    ///
    /// The commutator entry is built as ½(x_g[i] x_h[j] − x_g[j] x_h[i]) and
    /// mirrored with an exact sign flip, so antisymmetry holds bit-for-bit.
    pub fn product(&self, other: &GroupElement) -> Result<GroupElement> {
        let d = self.dim();
        if other.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: other.dim(),
            });
        }
        let mut x = vec![0.0; d];
        for i in 0..d {
            x[i] = self.log.x[i] + other.log.x[i];
        }
        let mut a = vec![0.0; d * d];
        for i in 0..d {
            for j in (i + 1)..d {
                let comm = 0.5 * (self.log.x[i] * other.log.x[j] - self.log.x[j] * other.log.x[i]);
                let v = self.log.a[i * d + j] + other.log.a[i * d + j] + comm;
                a[i * d + j] = v;
                a[j * d + i] = -v;
            }
        }
        Ok(GroupElement {
            log: LieValue { x, a },
        })
    }

    /// Group inverse; in log coordinates simply (−x, −a).
    pub fn inverse(&self) -> GroupElement {
        let d = self.dim();
        let x = self.log.x.iter().map(|v| -v).collect();
        let mut a = vec![0.0; d * d];
        for i in 0..d {
            for j in (i + 1)..d {
                let v = -self.log.a[i * d + j];
                a[i * d + j] = v;
                a[j * d + i] = -v;
            }
        }
        GroupElement {
            log: LieValue { x, a },
        }
    }

    /// Dilation δ_c: exp(x + a) ↦ exp(cx + c²a).
    pub fn dilate(&self, c: f64) -> GroupElement {
        let d = self.dim();
        let c2 = c * c;
        let x = self.log.x.iter().map(|v| c * v).collect();
        let mut a = vec![0.0; d * d];
        for i in 0..d {
            for j in (i + 1)..d {
                let v = c2 * self.log.a[i * d + j];
                a[i * d + j] = v;
                a[j * d + i] = -v;
            }
        }
        GroupElement {
            log: LieValue { x, a },
        }
    }

    /// The level-2 tensor representative a + ½ x⊗x, for display/interchange.
    pub fn tensor_level2(&self) -> Vec<f64> {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = self.log.a[i * d + j] + 0.5 * self.log.x[i] * self.log.x[j];
            }
        }
        m
    }
}

/// Homogeneous norm of a group element.
pub fn hom_norm(g: &GroupElement, n: &HomNorm) -> Result<f64> {
    let d = g.dim();
    let lv = vector_norm(&g.log().x, n.vector);
    match n.kind {
        NormKind::ExplicitSum => Ok(lv + math::sqrt(upper_norm(&g.log().a, d, n.vector))),
        NormKind::ExplicitMax => Ok(math::max(
            lv,
            math::sqrt(upper_norm(&g.log().a, d, n.vector)),
        )),
        NormKind::CarnotCaratheodory => {
            if d != 2 {
                return Err(Error::Unsupported(format!(
                    "Carnot-Caratheodory norm requires d = 2, got d = {d}"
                )));
            }
            crate::cc::cc_norm_parts(g.log().x[0], g.log().x[1], g.log().a[1])
        }
    }
}

/// Left-invariant distance d(g, h) = ‖g⁻¹ ⊗ h‖.
pub fn distance(g: &GroupElement, h: &GroupElement, n: &HomNorm) -> Result<f64> {
    hom_norm(&g.inverse().product(h)?, n)
}
