//! Numeric tolerances shared by checks and the acceptance runner.

/// Closed-form identities (Gromov product algebra, explicit planar metrics).
pub const TOL_EXACT: f64 = 1e-9;

/// Anything that passes through a net distance.
pub const TOL_NET: f64 = 1e-6;

/// Exact four-point enumeration refuses spaces needing more ordered labelings.
pub const EXACT_LABELING_GUARD: u128 = 10_000_000;

/// Spaces with fewer points may hold every distance row at once.
pub const FULL_MATRIX_LIMIT: usize = 5_000;

/// Upper bound on cached distance entries for larger spaces.
pub const ROW_CACHE_ENTRIES: usize = 16_000_000;

/// Worst-case length ratio of a king-move path to the chord, 1/cos(pi/8).
pub const KING_DISTORTION: f64 = 1.082_392_200_292_394;
