//! Domain doubling so Dirichlet problems can use periodic operators.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::state::{Grid1D, Grid2D};

/// Mirror half-domain samples: `[a, b, c, d] → [a, b, c, d, d, c, b, a]`.
pub fn reflect_for_dirichlet<T: Copy>(half: &[T], grid: &Grid1D) -> Result<Vec<T>> {
    if !grid.reflected {
        bail!(Domain, "grid is not marked as reflected");
    }
    if half.len() != grid.points() / 2 {
        bail!(
            Dimension,
            "expected {} half-domain samples, got {}",
            grid.points() / 2,
            half.len()
        );
    }
    let mut out = half.to_vec();
    out.extend(half.iter().rev());
    Ok(out)
}

/// Mirror a physical quadrant along every reflected axis.
pub fn reflect_2d<T: Copy>(quadrant: &[T], grid: &Grid2D) -> Result<Vec<T>> {
    let (px, py) = (grid.x.physical_points(), grid.y.physical_points());
    if quadrant.len() != px * py {
        bail!(
            Dimension,
            "expected {} quadrant samples, got {}",
            px * py,
            quadrant.len()
        );
    }
    let (nx, ny) = (grid.x.points(), grid.y.points());
    let mut out = Vec::with_capacity(nx * ny);
    for kx in 0..nx {
        let sx = if kx < px { kx } else { nx - 1 - kx };
        for ky in 0..ny {
            let sy = if ky < py { ky } else { ny - 1 - ky };
            out.push(quadrant[sx * py + sy]);
        }
    }
    Ok(out)
}

/// Physical part of a full-grid vector (first half in 1D, quadrant in 2D).
pub fn physical_part<T: Copy>(full: &[T], grid: &crate::state::Grid) -> Vec<T> {
    full.iter()
        .zip(grid.physical_mask())
        .filter(|(_, m)| *m)
        .map(|(v, _)| *v)
        .collect()
}
