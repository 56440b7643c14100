//! Inner/outer approximations of a domain by centered dyadic cubes
//! `Q_{2^k} + 2^k j = [-2^{k-1}, 2^{k-1})^d + 2^k j` of side at least one,
//! plus unit patches covering the remainder.

use crate::error::{CoreError, Result};
use crate::geometry::domain::{AaBox, ContinuousDomain};

/// A dyadic cube of side `2^level` centered at `2^level * index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicCube {
    pub level: u32,
    pub index: Vec<i64>,
}

impl DyadicCube {
    pub fn to_box(&self) -> AaBox {
        let side = (1u64 << self.level) as f64;
        AaBox::new(
            self.index.iter().map(|&j| side * (j as f64 - 0.5)).collect(),
            self.index.iter().map(|&j| side * (j as f64 + 0.5)).collect(),
        )
    }
}

/// Dyadic inner approximation, unit outer patches, and their box geometry.
#[derive(Debug, Clone)]
pub struct DyadicCover {
    dim: usize,
    /// Maximal disjoint cubes of side >= 1 contained in the domain.
    pub inner_cubes: Vec<DyadicCube>,
    /// Unit cells `v` meeting the un-covered part of the domain.
    pub patch_cells: Vec<Vec<i64>>,
    /// `R_v \ F^-` fragments, disjoint from the inner cubes and one another.
    pub patch_boxes: Vec<AaBox>,
    l: f64,
}

impl DyadicCover {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index sets `J_k`: per-scale cube indices of the inner approximation.
    pub fn per_scale(&self) -> std::collections::BTreeMap<u32, Vec<Vec<i64>>> {
        let mut map = std::collections::BTreeMap::new();
        for c in &self.inner_cubes {
            map.entry(c.level)
                .or_insert_with(Vec::new)
                .push(c.index.clone());
        }
        map
    }

    pub fn inner_boxes(&self) -> Vec<AaBox> {
        self.inner_cubes.iter().map(DyadicCube::to_box).collect()
    }

    /// `F^-` as a domain backed by the disjoint inner cubes.
    pub fn inner_domain(&self) -> Result<ContinuousDomain> {
        ContinuousDomain::from_disjoint_boxes(self.dim, self.inner_boxes(), "dyadic-inner")
    }

    /// `F^+ = F^- ∪ ⋃_v R_v` as a domain backed by disjoint boxes.
    pub fn outer_domain(&self) -> Result<ContinuousDomain> {
        let mut boxes = self.inner_boxes();
        boxes.extend(self.patch_boxes.iter().cloned());
        ContinuousDomain::from_disjoint_boxes(self.dim, boxes, "dyadic-outer")
    }

    pub fn inner_volume(&self) -> f64 {
        self.inner_boxes().iter().map(AaBox::volume).sum()
    }

    pub fn outer_volume(&self) -> f64 {
        self.inner_volume() + self.patch_boxes.iter().map(AaBox::volume).sum::<f64>()
    }

    pub fn resolution(&self) -> f64 {
        self.l
    }
}

/// True when some strictly larger dyadic cube containing `cube` lies inside
/// the domain. In the centered convention, `Q_{k,j}` is contained in
/// `Q_{k+m,J}` exactly when `|j - 2^m J| <= 2^{m-1} - 1` componentwise.
fn has_containing_cube_inside(
    domain: &ContinuousDomain,
    cube: &DyadicCube,
    top_level: u32,
) -> bool {
    for target in cube.level + 1..=top_level {
        let m = target - cube.level;
        let scale = 1i64 << m;
        let half = 1i64 << (m - 1);
        let mut index = Vec::with_capacity(cube.index.len());
        let mut feasible = true;
        for &j in &cube.index {
            // The integer interval [(j - half + 1) / scale, (j + half - 1) / scale]
            // has length < 1, so it contains at most one integer.
            let lo = j - half + 1;
            let hi = j + half - 1;
            let candidate = hi.div_euclid(scale);
            if candidate * scale < lo {
                feasible = false;
                break;
            }
            index.push(candidate);
        }
        if !feasible {
            continue;
        }
        let big = DyadicCube {
            level: target,
            index,
        };
        if domain.contains_box(&big.to_box()) {
            return true;
        }
    }
    false
}

/// Builds the dyadic sandwich `F^- ⊆ F ⊆ F^+`. The domain must sit inside the
/// fundamental cell `(-L/2, L/2)^d`. Maximal contained cubes are selected
/// greedily from the largest level down; cubes overlapping an earlier
/// selection are skipped, which keeps the inner family disjoint.
pub fn dyadic_approximations(domain: &ContinuousDomain, l: f64) -> Result<DyadicCover> {
    let d = domain.dim();
    let bbox = domain.bounding_box();
    let half = l / 2.0;
    if bbox.lo.iter().any(|&x| x < -half - 1e-12) || bbox.hi.iter().any(|&x| x > half + 1e-12) {
        return Err(CoreError::DomainOutsideCell { l });
    }

    let max_width = bbox
        .widths()
        .iter()
        .fold(0.0f64, |a, &b| a.max(b))
        .max(1.0);
    // No cube with side exceeding the diameter fits, so this level is a safe
    // cap for containment checks.
    let top_level = (max_width.log2().ceil() as u32) + 1;

    let mut selected: Vec<DyadicCube> = Vec::new();
    let mut selected_boxes: Vec<AaBox> = Vec::new();
    for level in (0..=top_level).rev() {
        let side = (1u64 << level) as f64;
        let lo_idx: Vec<i64> = bbox
            .lo
            .iter()
            .map(|&x| (x / side - 0.5).floor() as i64)
            .collect();
        let hi_idx: Vec<i64> = bbox
            .hi
            .iter()
            .map(|&x| (x / side + 0.5).ceil() as i64)
            .collect();
        let mut j = lo_idx.clone();
        'cubes: loop {
            let cube = DyadicCube {
                level,
                index: j.clone(),
            };
            let cube_box = cube.to_box();
            if domain.contains_box(&cube_box)
                && !has_containing_cube_inside(domain, &cube, top_level)
                && !selected_boxes.iter().any(|b| b.intersects(&cube_box))
            {
                selected.push(cube);
                selected_boxes.push(cube_box);
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    break 'cubes;
                }
                j[axis] += 1;
                if j[axis] <= hi_idx[axis] {
                    break;
                }
                j[axis] = lo_idx[axis];
                axis += 1;
            }
        }
    }

    // V: unit cells meeting F \ F^-, detected on a spacing-1/16 sample grid.
    let spacing = 1.0 / 16.0;
    let mut patch_cells = Vec::new();
    let v_lo: Vec<i64> = bbox.lo.iter().map(|&x| (x - 0.5).floor() as i64).collect();
    let v_hi: Vec<i64> = bbox.hi.iter().map(|&x| (x + 0.5).ceil() as i64).collect();
    let mut v = v_lo.clone();
    'cells: loop {
        let cell = AaBox::new(
            v.iter().map(|&vi| vi as f64 - 0.5).collect(),
            v.iter().map(|&vi| vi as f64 + 0.5).collect(),
        );
        let mut hit = false;
        let steps = (1.0 / spacing) as usize;
        let mut idx = vec![0usize; d];
        'samples: loop {
            let x: Vec<f64> = (0..d)
                .map(|i| cell.lo[i] + (idx[i] as f64 + 0.5) * spacing)
                .collect();
            if domain.contains(&x) && !selected_boxes.iter().any(|b| b.contains(&x)) {
                hit = true;
                break 'samples;
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    break 'samples;
                }
                idx[axis] += 1;
                if idx[axis] < steps {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
        }
        if hit {
            patch_cells.push(v.clone());
        }
        let mut axis = 0;
        loop {
            if axis == d {
                break 'cells;
            }
            v[axis] += 1;
            if v[axis] <= v_hi[axis] {
                break;
            }
            v[axis] = v_lo[axis];
            axis += 1;
        }
    }

    // R_v \ F^- as disjoint boxes; the R_v themselves tile, so fragments from
    // distinct cells never overlap.
    let mut patch_boxes = Vec::new();
    for v in &patch_cells {
        let r_v = AaBox::new(
            v.iter().map(|&vi| (vi as f64 - 0.5).max(-half)).collect(),
            v.iter().map(|&vi| (vi as f64 + 0.5).min(half)).collect(),
        );
        if r_v.volume() <= 0.0 {
            continue;
        }
        let mut fragments = vec![r_v];
        for cutter in &selected_boxes {
            let mut next = Vec::new();
            for frag in fragments {
                next.extend(frag.subtract(cutter));
            }
            fragments = next;
        }
        patch_boxes.extend(fragments);
    }

    Ok(DyadicCover {
        dim: d,
        inner_cubes: selected,
        patch_cells,
        patch_boxes,
        l,
    })
}
