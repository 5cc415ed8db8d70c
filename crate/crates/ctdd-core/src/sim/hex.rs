//! Hexagonal tessellation in axial coordinates.
//!
//! Cells are hexagons of apothem `rho` with vertical left/right edges, so
//! cell (0,0) is centered at the origin and its axial neighbor (1,0) at
//! `(2 rho, 0)`. Each cell covers area `2 sqrt(3) rho^2`.

/// Axial cell index.
pub type HexIndex = (i32, i32);

/// Tessellation of the plane into hexagons of apothem `rho`.
#[derive(Debug, Clone, Copy)]
pub struct HexGrid {
    rho: f64,
}

impl HexGrid {
    pub fn new(rho: f64) -> Self {
        assert!(rho > 0.0, "hex apothem must be positive");
        HexGrid { rho }
    }

    /// Center of cell `(q, r)`: `q * (2 rho, 0) + r * (rho, sqrt(3) rho)`.
    pub fn center(&self, idx: HexIndex) -> (f64, f64) {
        let (q, r) = idx;
        (
            2.0 * self.rho * q as f64 + self.rho * r as f64,
            3.0f64.sqrt() * self.rho * r as f64,
        )
    }

    /// Cell containing the point. Total on the plane; boundary ties resolve
    /// deterministically through the cube-rounding arithmetic.
    pub fn index(&self, x: f64, y: f64) -> HexIndex {
        // Fractional axial coordinates (inverse of `center`), then cube
        // rounding to the nearest hexagon center.
        let rf = y / (3.0f64.sqrt() * self.rho);
        let qf = (x - self.rho * rf) / (2.0 * self.rho);
        cube_round(qf, rf)
    }
}

fn cube_round(qf: f64, rf: f64) -> HexIndex {
    let sf = -qf - rf;
    let mut q = qf.round();
    let mut r = rf.round();
    let s = sf.round();
    let dq = (q - qf).abs();
    let dr = (r - rf).abs();
    let ds = (s - sf).abs();
    if dq > dr && dq > ds {
        q = -r - s;
    } else if dr > ds {
        r = -q - s;
    }
    (q as i32, r as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    #[test]
    fn origin_and_axial_neighbor_convention() {
        let grid = HexGrid::new(29.428);
        assert_eq!(grid.index(0.0, 0.0), (0, 0));
        assert_eq!(grid.index(2.0 * 29.428, 0.0), (1, 0));
        assert_eq!(grid.center((1, 0)), (2.0 * 29.428, 0.0));
    }

    #[test]
    fn index_inverts_center() {
        let grid = HexGrid::new(17.3);
        for q in -5..=5 {
            for r in -5..=5 {
                let (x, y) = grid.center((q, r));
                assert_eq!(grid.index(x, y), (q, r));
            }
        }
    }

    #[test]
    fn points_map_to_nearest_center() {
        // Hexagonal Voronoi property: the containing cell's center is the
        // closest center.
        let grid = HexGrid::new(10.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let x = rng.gen_range(-100.0..100.0);
            let y = rng.gen_range(-100.0..100.0);
            let idx = grid.index(x, y);
            let (cx, cy) = grid.center(idx);
            let own = (x - cx).powi(2) + (y - cy).powi(2);
            for dq in -1..=1 {
                for dr in -1..=1 {
                    let (ox, oy) = grid.center((idx.0 + dq, idx.1 + dr));
                    let other = (x - ox).powi(2) + (y - oy).powi(2);
                    assert!(own <= other + 1e-9);
                }
            }
        }
    }

    #[test]
    fn empirical_cell_area_matches_hexagon_formula() {
        // A million uniform points over a large window: every interior
        // cell's hit fraction reproduces the 2 sqrt(3) rho^2 area within 1%.
        let rho = 25.0;
        let grid = HexGrid::new(rho);
        let half = 500.0;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000usize;
        let mut hits: HashMap<HexIndex, u64> = HashMap::new();
        for _ in 0..n {
            let x = rng.gen_range(-half..half);
            let y = rng.gen_range(-half..half);
            *hits.entry(grid.index(x, y)).or_default() += 1;
        }
        let cell_area = 2.0 * 3.0f64.sqrt() * rho * rho;
        let window_area = (2.0 * half) * (2.0 * half);
        // Only cells fully inside the window (centers at least one
        // circumradius from the edge).
        let circum = 2.0 * rho / 3.0f64.sqrt();
        let mut checked = 0;
        for (&idx, &count) in &hits {
            let (cx, cy) = grid.center(idx);
            if cx.abs() < half - 2.0 * circum && cy.abs() < half - 2.0 * circum {
                let est = count as f64 / n as f64 * window_area;
                assert!(
                    (est - cell_area).abs() / cell_area < 0.01 + 4.0 / (count as f64).sqrt(),
                    "cell {idx:?}: estimated {est}, want {cell_area}"
                );
                checked += 1;
            }
        }
        assert!(checked > 100);
    }
}
