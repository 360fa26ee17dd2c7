//! Rational approximation to algebraic varieties.

mod certificate;
mod points;
mod poly;
mod scan;

pub use certificate::{ball_is_zero_free, denominator_bound_check, exclusion_certificate, DenominatorBound, ExclusionCertificate, RatBox};
pub use points::{height, rational_point_search, RationalPointSet, POINT_SEARCH_LIMIT};
pub use poly::{Degrees, Interval, MultiPolynomial};
pub use scan::{variety_approx_scan, within_threshold, HitClass, ScanConfig, ScanHit, ScanMode, ScanReport, SCAN_LIMIT};
