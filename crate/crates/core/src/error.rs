use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: bad rational literal, nonpositive length, n out of range, ...
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An index set touches positions outside {1, ..., n-2}.
    #[error("index set {0:#b} has bits outside 1..={1}")]
    IndexOutOfRange(u32, usize),

    /// The length vector lies on a wall: a signed combination of the lengths
    /// vanishes, so the moduli space is singular. Carries one side of the
    /// offending partition (1-based indices, the side containing index 1).
    #[error("length vector lies on a wall: indices {0:?} balance their complement")]
    NotSmooth(Vec<usize>),

    /// No closed polygon exists: one side exceeds the sum of all others.
    #[error("empty moduli space: side {0} exceeds the sum of the others")]
    EmptyModuliSpace(usize),

    /// All lengths equal: no bending pair is available. Callers are expected
    /// to use the closed-form equilateral class or perturb one side.
    #[error("equilateral length vector: no pair r_i != r_j to bend around")]
    Equilateral,

    /// The requested index set fails the closing (triangle) inequalities.
    #[error("index set is not admissible for these lengths")]
    NotAdmissible,

    /// A bending circle action was requested about a zero-length diagonal.
    #[error("bending action undefined: diagonal {0} has zero length")]
    UndefinedAction(usize),

    /// An angle coordinate was requested at a polygon whose k-th fan triangle
    /// is flat, so the dihedral angle is not defined there.
    #[error("angle coordinate undefined: fan triangle {0} is degenerate")]
    DegenerateTriangle(usize),

    /// The two polygons cannot be compared (different edge counts or lengths).
    #[error("polygons are not comparable: {0}")]
    Mismatch(String),

    /// The half-plane intersection is empty.
    #[error("empty polytope")]
    EmptyPolytope,
}

pub type Result<T> = std::result::Result<T, Error>;
