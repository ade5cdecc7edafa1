use crate::error::{Error, Result};
use crate::lattice::{Configuration, Lattice, Neighbourhood};

/// Whether the periodic extension of `tile` gives every cell a colour
/// different from the cells at each nonzero neighbourhood offset. One
/// period is enough to decide this.
pub fn check_colouring(tile: &Configuration, neigh: &Neighbourhood) -> bool {
    let lattice = tile.lattice();
    if neigh.dim() != lattice.dim() {
        return false;
    }
    lattice.points().all(|p| {
        let own = tile.get(&p);
        neigh.offsets().iter().filter(|o| !o.is_origin()).all(|o| tile.get(&(&p + o)) != own)
    })
}

/// A tile can only be laid on a lattice whose extents are multiples of the
/// tile's.
pub fn check_tile_fits(tile: &Configuration, lattice: &Lattice) -> Result<()> {
    let t = tile.lattice();
    if t.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), found: lattice.dim() });
    }
    for (axis, (&e, &te)) in lattice.dims().iter().zip(t.dims()).enumerate() {
        if e % te != 0 {
            return Err(Error::InvalidColouring(format!(
                "lattice extent {e} along axis {axis} is not a multiple of the tile extent {te}"
            )));
        }
    }
    Ok(())
}
