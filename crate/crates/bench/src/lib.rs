//! Shared fixtures for the benchmarks.

use graphflow::knot::bundled_curve;
use graphflow::KnotCurve;

pub fn trefoil() -> KnotCurve {
    bundled_curve("trefoil").expect("shipped curve")
}
