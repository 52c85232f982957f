//! Central numeric thresholds.
//!
//! Every tolerance that appears in more than one module lives here, so the
//! provenance headers written by the CLI can echo a single source of truth.

/// A normalized projective point counts as infinity when the modulus of its
/// denominator component drops below this.
pub const INFINITY_THRESHOLD: f64 = 1e-14;

/// Default relative cluster radius when merging root approximations into
/// multiple roots.
pub const ROOT_CLUSTER_RADIUS: f64 = 1e-6;

/// Snapping tolerance (chordal) for portraits of maps with exactly
/// representable coefficients.
pub const SNAP_TOL_EXACT: f64 = 1e-6;

/// Snapping tolerance (chordal) for the bundled map with 6-digit truncated
/// coefficients.
pub const SNAP_TOL_RHAT: f64 = 2e-2;

/// An orbit point closer (chordal) than this to a critical point is
/// perturbed before taking `log R^#`.
pub const CRITICAL_PROXIMITY: f64 = 1e-12;

/// Size of the random perturbation applied in that case.
pub const CRITICAL_PERTURBATION: f64 = 1e-10;

/// `|Im z|` below this (after max-modulus normalization) is recorded as the
/// `boundary` itinerary symbol.
pub const ITINERARY_BOUNDARY_TOL: f64 = 1e-9;

/// Chordal exclusion radius around postcritical points for density sampling.
pub const POST_EXCLUSION_RADIUS: f64 = 1e-3;

/// Critical-value re-anchoring applies only when the orbit point lies within
/// this distance of the critical point whose branch it is attributed to.
pub const ANCHOR_SOURCE_RADIUS: f64 = 0.5;

/// ... and when the image lands within this distance of that critical
/// point's (displaced) critical value.
pub const ANCHOR_IMAGE_RADIUS: f64 = 3e-2;

/// Critical-value displacements at or below this are rounding noise of an
/// exactly represented map; no anchor entry is recorded for them.
pub const ANCHOR_MIN_DISPLACEMENT: f64 = 1e-12;
