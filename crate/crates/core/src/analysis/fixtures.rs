//! Hand-built edge configurations.

use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, EdgeConfig, Vertex};

/// Two parallel lines at `y = 2` and `y = 1`.
///
/// The top line is a source: edges point away from `x = 0` in both directions.
/// The bottom line points back towards `x = 0`. Every `period`-th column
/// (including `x = 0`) has a drop edge `(x, 2) → (x, 1)`. The configuration
/// has no directed cycle; with `bridge` the single edge `(0, 1) → (0, 2)` is
/// added, which closes a cycle through every drop edge.
pub fn two_lines(region: BoxRegion, period: u32, bridge: bool) -> Result<EdgeConfig> {
    let r = region.half_width() as i32;
    if r < 2 {
        return Err(Error::RegionTooSmall { required: 2, available: region.half_width() });
    }
    if period == 0 {
        return Err(Error::InvalidParameter("drop period must be positive"));
    }
    let mut z = EdgeConfig::empty(region);
    for x in 0..r {
        z.set_open(Vertex::new(x, 2), Vertex::new(x + 1, 2), true)?;
        z.set_open(Vertex::new(-x, 2), Vertex::new(-x - 1, 2), true)?;
        z.set_open(Vertex::new(x + 1, 1), Vertex::new(x, 1), true)?;
        z.set_open(Vertex::new(-x - 1, 1), Vertex::new(-x, 1), true)?;
    }
    for x in -r..=r {
        if x.unsigned_abs() % period == 0 {
            z.set_open(Vertex::new(x, 2), Vertex::new(x, 1), true)?;
        }
    }
    if bridge {
        z.set_open(Vertex::new(0, 1), Vertex::new(0, 2), true)?;
    }
    Ok(z)
}
