//! Point-process sampling, fading-gain draws, and nearest-SAP association.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// Sample a homogeneous PPP of the given intensity on the axis-aligned
/// rectangle `[min.0, max.0] x [min.1, max.1]`: Poisson count, uniform
/// positions.
pub fn sample_ppp<R: Rng>(
    intensity: f64,
    min: (f64, f64),
    max: (f64, f64),
    rng: &mut R,
) -> Vec<(f64, f64)> {
    debug_assert!(intensity >= 0.0);
    let area = (max.0 - min.0) * (max.1 - min.1);
    debug_assert!(area > 0.0);
    let mean = intensity * area;
    if mean == 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    let mut pts = Vec::with_capacity(count);
    for _ in 0..count {
        let x = min.0 + (max.0 - min.0) * rng.gen::<f64>();
        let y = min.1 + (max.1 - min.1) * rng.gen::<f64>();
        pts.push((x, y));
    }
    pts
}

/// Exp(1) draw. The complement keeps the argument of `ln` in (0, 1].
#[inline]
pub fn exp1<R: Rng>(rng: &mut R) -> f64 {
    -(1.0 - rng.gen::<f64>()).ln()
}

/// Gamma(n, 1) draw for small integer shape, as `-ln` of a product of
/// uniforms (sum of n unit exponentials).
#[inline]
pub fn gamma_int<R: Rng>(rng: &mut R, n: u32) -> f64 {
    let mut prod = 1.0;
    for _ in 0..n {
        prod *= 1.0 - rng.gen::<f64>();
    }
    -prod.ln()
}

/// Nearest-SAP association with a per-SAP service cap.
///
/// Every MU maps to its closest SAP; a SAP attracting more than `n_cap` MUs
/// serves a uniformly random subset of `n_cap` of them. Returns the full
/// association and the served groups.
pub struct Association {
    /// `assoc[m]` = index of the SAP nearest to MU `m`.
    pub assoc: Vec<u32>,
    /// Served MU indices, grouped by SAP: group `i` is
    /// `served[served_offsets[i] as usize..served_offsets[i+1] as usize]`.
    pub served_offsets: Vec<u32>,
    pub served: Vec<u32>,
}

impl Association {
    pub fn served_count(&self, sap: usize) -> u32 {
        self.served_offsets[sap + 1] - self.served_offsets[sap]
    }

    pub fn served_group(&self, sap: usize) -> &[u32] {
        &self.served[self.served_offsets[sap] as usize..self.served_offsets[sap + 1] as usize]
    }

    pub fn is_served(&self, sap: usize, mu: u32) -> bool {
        self.served_group(sap).contains(&mu)
    }
}

/// Uniform bucket grid over SAP positions for nearest-neighbor lookup.
pub struct SapGrid {
    cells: usize,
    min: (f64, f64),
    inv_side: f64,
    offsets: Vec<u32>,
    by_bucket: Vec<u32>,
    side: f64,
}

impl SapGrid {
    pub fn build(saps: &[(f64, f64)], min: (f64, f64), max: (f64, f64)) -> Self {
        let span = (max.0 - min.0).max(max.1 - min.1);
        let cells = ((saps.len() as f64).sqrt().ceil() as usize).clamp(1, 256);
        let side = span / cells as f64;
        let inv_side = 1.0 / side;
        let bucket = |x: f64, y: f64| -> usize {
            let bx = (((x - min.0) * inv_side) as usize).min(cells - 1);
            let by = (((y - min.1) * inv_side) as usize).min(cells - 1);
            by * cells + bx
        };
        let mut counts = vec![0u32; cells * cells + 1];
        for &(x, y) in saps {
            counts[bucket(x, y) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let offsets = counts;
        let mut cursor = offsets.clone();
        let mut by_bucket = vec![0u32; saps.len()];
        for (i, &(x, y)) in saps.iter().enumerate() {
            let b = bucket(x, y);
            by_bucket[cursor[b] as usize] = i as u32;
            cursor[b] += 1;
        }
        SapGrid {
            cells,
            min,
            inv_side,
            offsets,
            by_bucket,
            side,
        }
    }

    /// Index and squared distance of the SAP nearest to `(x, y)`, by an
    /// expanding ring search over buckets. Any bucket at Chebyshev ring `r`
    /// holds points no closer than `(r-1) * side`, which bounds the search.
    pub fn nearest(&self, saps: &[(f64, f64)], x: f64, y: f64) -> (usize, f64) {
        let cells = self.cells as i64;
        let bx = (((x - self.min.0) * self.inv_side) as i64).clamp(0, cells - 1);
        let by = (((y - self.min.1) * self.inv_side) as i64).clamp(0, cells - 1);
        let mut best = f64::INFINITY;
        let mut best_i = usize::MAX;
        let mut ring: i64 = 0;
        loop {
            if best_i != usize::MAX {
                let bound = (ring - 1).max(0) as f64 * self.side;
                if bound * bound > best {
                    break;
                }
            }
            if ring > 2 * cells {
                break;
            }
            let (lo_x, hi_x) = (bx - ring, bx + ring);
            let (lo_y, hi_y) = (by - ring, by + ring);
            for cy in lo_y.max(0)..=hi_y.min(cells - 1) {
                let mut scan = |cx: i64| {
                    if cx < 0 || cx >= cells {
                        return;
                    }
                    let b = (cy * cells + cx) as usize;
                    for k in self.offsets[b]..self.offsets[b + 1] {
                        let i = self.by_bucket[k as usize] as usize;
                        let (sx, sy) = saps[i];
                        let d2 = (sx - x) * (sx - x) + (sy - y) * (sy - y);
                        if d2 < best {
                            best = d2;
                            best_i = i;
                        }
                    }
                };
                if cy == lo_y || cy == hi_y {
                    for cx in lo_x.max(0)..=hi_x.min(cells - 1) {
                        scan(cx);
                    }
                } else {
                    scan(lo_x);
                    if hi_x != lo_x {
                        scan(hi_x);
                    }
                }
            }
            ring += 1;
        }
        (best_i, best)
    }
}

/// Associate each MU to its nearest SAP and apply the service cap.
pub fn associate<R: Rng>(
    mus: &[(f64, f64)],
    saps: &[(f64, f64)],
    min: (f64, f64),
    max: (f64, f64),
    n_cap: u32,
    rng: &mut R,
) -> Association {
    associate_with_preselection(mus, saps, min, max, n_cap, None, rng)
}

/// [`associate`], optionally reusing an already-drawn served subset for one
/// SAP (whose cap lottery was decided beforehand). The predetermined SAP is
/// skipped in the selection loop so the draw sequence stays aligned with
/// the early decision.
pub fn associate_with_preselection<R: Rng>(
    mus: &[(f64, f64)],
    saps: &[(f64, f64)],
    min: (f64, f64),
    max: (f64, f64),
    n_cap: u32,
    preselected: Option<(usize, &[u32])>,
    rng: &mut R,
) -> Association {
    assert!(!saps.is_empty());
    let grid = SapGrid::build(saps, min, max);
    let mut assoc = vec![0u32; mus.len()];
    let mut counts = vec![0u32; saps.len() + 1];
    for (m, &(x, y)) in mus.iter().enumerate() {
        let (i, _) = grid.nearest(saps, x, y);
        assoc[m] = i as u32;
        counts[i + 1] += 1;
    }
    // Group MU indices by SAP (counting sort), then pick the served subset
    // per SAP in index order so the draw sequence is reproducible.
    for i in 1..counts.len() {
        counts[i] += counts[i - 1];
    }
    let group_offsets = counts;
    let mut cursor = group_offsets.clone();
    let mut grouped = vec![0u32; mus.len()];
    for (m, &a) in assoc.iter().enumerate() {
        grouped[cursor[a as usize] as usize] = m as u32;
        cursor[a as usize] += 1;
    }

    let mut served_offsets = Vec::with_capacity(saps.len() + 1);
    let mut served = Vec::with_capacity(mus.len().min(saps.len() * n_cap as usize));
    served_offsets.push(0u32);
    for i in 0..saps.len() {
        let (lo, hi) = (group_offsets[i] as usize, group_offsets[i + 1] as usize);
        let group = &mut grouped[lo..hi];
        if let Some((pre_sap, pre_served)) = preselected {
            if i == pre_sap && pre_served.len() == group.len().min(n_cap as usize) {
                served.extend_from_slice(pre_served);
                served_offsets.push(served.len() as u32);
                continue;
            }
        }
        let take = group.len().min(n_cap as usize);
        if group.len() > take {
            for j in 0..take {
                let pick = rng.gen_range(j..group.len());
                group.swap(j, pick);
            }
        }
        served.extend_from_slice(&group[..take]);
        served_offsets.push(served.len() as u32);
    }
    Association {
        assoc,
        served_offsets,
        served,
    }
}

/// Exact members of one SAP's association cell, computed locally.
///
/// Nearest-association cells are contained in a disk of a few mean
/// inter-SAP spacings around their SAP (the chance of an MU associating
/// from beyond `3/sqrt(lambda_s)` is `e^{-9 pi}`), so only MUs inside that
/// disk need a nearest-SAP test. Lets the service-cap lottery for the
/// typical link run before the full association is paid for.
pub fn local_cell_members(
    mus: &[(f64, f64)],
    saps: &[(f64, f64)],
    grid: &SapGrid,
    sap: usize,
    lambda_s: f64,
) -> Vec<u32> {
    let (cx, cy) = saps[sap];
    let radius = 3.0 / lambda_s.sqrt();
    let r2 = radius * radius;
    let mut members = Vec::new();
    for (m, &(x, y)) in mus.iter().enumerate() {
        let d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        if d2 <= r2 {
            let (i, _) = grid.nearest(saps, x, y);
            if i == sap {
                members.push(m as u32);
            }
        }
    }
    members
}
