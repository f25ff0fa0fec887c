use std::fmt;

use crate::linalg::{project, DenseMatrix, DenseVector, SubspaceBasis};

/// Partial-smoothness class of a regularizer at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialSmoothnessClass {
    /// Partly smooth relative to a general C^2 manifold.
    GeneralManifold,
    /// The active manifold is the linear subspace `T_x`.
    LinearSubspace,
    /// The active manifold is the affine subspace `x + T_x`.
    AffineSubspace,
    /// Linear (or affine) manifold with a locally constant generalized sign.
    LinearSubspaceConstantSign,
}

impl PartialSmoothnessClass {
    /// Whether the active manifold is flat (linear or affine).
    pub fn is_flat(self) -> bool {
        !matches!(self, PartialSmoothnessClass::GeneralManifold)
    }

    pub fn has_constant_sign(self) -> bool {
        matches!(self, PartialSmoothnessClass::LinearSubspaceConstantSign)
    }

    pub fn label(self) -> &'static str {
        match self {
            PartialSmoothnessClass::GeneralManifold => "general-manifold",
            PartialSmoothnessClass::LinearSubspace => "linear-subspace",
            PartialSmoothnessClass::AffineSubspace => "affine-subspace",
            PartialSmoothnessClass::LinearSubspaceConstantSign => "linear-subspace-constant-sign",
        }
    }
}

/// Discrete description of the active manifold at a point. Two points lie
/// on the same manifold iff their descriptors are equal.
///
/// All indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManifoldDescriptor {
    /// `supp(x)`.
    CoordinateSupport(Vec<usize>),
    /// Indices of the blocks with `x_b != 0`.
    BlockSupport(Vec<usize>),
    /// Jump set `{i : x_{i+1} != x_i}`.
    TvSupport(Vec<usize>),
    /// Entries attaining `||x||_inf`, with their signs; empty at the origin.
    SaturationSupport { indices: Vec<usize>, signs: Vec<i8> },
    /// Rank of the matrix.
    FixedRank(usize),
}

impl ManifoldDescriptor {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ManifoldDescriptor::CoordinateSupport(_) => "coordinate-support",
            ManifoldDescriptor::BlockSupport(_) => "block-support",
            ManifoldDescriptor::TvSupport(_) => "tv-support",
            ManifoldDescriptor::SaturationSupport { .. } => "saturation-support",
            ManifoldDescriptor::FixedRank(_) => "fixed-rank",
        }
    }

    pub fn same_kind(&self, other: &ManifoldDescriptor) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

impl fmt::Display for ManifoldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(v: &[usize]) -> String {
            v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
        }
        match self {
            ManifoldDescriptor::CoordinateSupport(s) => write!(f, "support[{}]", list(s)),
            ManifoldDescriptor::BlockSupport(s) => write!(f, "blocks[{}]", list(s)),
            ManifoldDescriptor::TvSupport(s) => write!(f, "jumps[{}]", list(s)),
            ManifoldDescriptor::SaturationSupport { indices, signs } => {
                let parts: Vec<String> = indices
                    .iter()
                    .zip(signs)
                    .map(|(i, s)| format!("{}{}", if *s < 0 { '-' } else { '+' }, i))
                    .collect();
                write!(f, "saturated[{}]", parts.join(" "))
            }
            ManifoldDescriptor::FixedRank(r) => write!(f, "rank[{r}]"),
        }
    }
}

/// Left/right singular factors spanning the spectral tangent space.
#[derive(Debug, Clone)]
pub struct SpectralFactors {
    pub u: DenseMatrix,
    pub v: DenseMatrix,
}

/// Model tangent subspace `T_x`: its discrete descriptor plus a realized
/// orthonormal basis.
#[derive(Debug, Clone)]
pub struct ModelSubspace {
    pub descriptor: ManifoldDescriptor,
    /// Present for the nuclear norm only.
    pub factors: Option<SpectralFactors>,
    pub basis: SubspaceBasis,
}

impl ModelSubspace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn project(&self, x: &DenseVector) -> crate::Result<DenseVector> {
        project(&self.basis, x)
    }
}

/// `lambda * e_x`, an element of `T_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedSign {
    pub e: DenseVector,
}
