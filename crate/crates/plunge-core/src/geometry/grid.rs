//! Finite subsets of the scaled lattice `L^{-1} Z^d`: discretization of
//! continuous domains, the discrete boundary, and discrete Ahlfors regularity.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::geometry::domain::ContinuousDomain;
use crate::geometry::regularity::{RegularityMode, RegularityReport};

/// A finite set of lattice points `k` representing `k / resolution`.
#[derive(Debug, Clone)]
pub struct GridSet {
    dim: usize,
    resolution: f64,
    points: Vec<Vec<i64>>,
    index: HashSet<Vec<i64>>,
}

impl GridSet {
    pub fn new(dim: usize, resolution: f64, mut points: Vec<Vec<i64>>) -> Result<Self> {
        if resolution <= 0.0 {
            return Err(CoreError::InvalidParameter(
                "grid resolution must be > 0".into(),
            ));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(CoreError::InvalidParameter(
                "grid point dimension mismatch".into(),
            ));
        }
        points.sort();
        points.dedup();
        let index = points.iter().cloned().collect();
        Ok(GridSet {
            dim,
            resolution,
            points,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Lattice points in deterministic (lexicographic) order.
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        self.index.contains(k)
    }

    /// Physical coordinates `k / L` of the i-th point.
    pub fn physical(&self, i: usize) -> Vec<f64> {
        self.points[i]
            .iter()
            .map(|&k| k as f64 / self.resolution)
            .collect()
    }

    /// Componentwise integer bounding box of the point set.
    pub fn integer_bbox(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        if self.points.is_empty() {
            return None;
        }
        let mut lo = self.points[0].clone();
        let mut hi = self.points[0].clone();
        for p in &self.points {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Some((lo, hi))
    }
}

/// `E_L = L^{-1} Z^d ∩ E`: all integer vectors `k` with `k / L` in the domain.
/// An empty result is allowed and signals a degenerate configuration downstream.
pub fn discretize(domain: &ContinuousDomain, l: f64) -> Result<GridSet> {
    if l <= 0.0 {
        return Err(CoreError::InvalidParameter("resolution L must be > 0".into()));
    }
    let d = domain.dim();
    let bbox = domain.bounding_box();
    let lo: Vec<i64> = bbox.lo.iter().map(|&x| (l * x - 0.5).floor() as i64).collect();
    let hi: Vec<i64> = bbox.hi.iter().map(|&x| (l * x + 0.5).ceil() as i64).collect();
    let mut points = Vec::new();
    let mut k = lo.clone();
    'outer: loop {
        let x: Vec<f64> = k.iter().map(|&ki| ki as f64 / l).collect();
        if domain.contains(&x) {
            points.push(k.clone());
        }
        let mut axis = 0;
        loop {
            if axis == d {
                break 'outer;
            }
            k[axis] += 1;
            if k[axis] <= hi[axis] {
                break;
            }
            k[axis] = lo[axis];
            axis += 1;
        }
    }
    GridSet::new(d, l, points)
}

/// Points of the set at Euclidean distance exactly one (in lattice units) from
/// the complement lattice, i.e. with some axis neighbor outside.
pub fn discrete_boundary(s: &GridSet) -> Result<GridSet> {
    if s.is_empty() {
        return Err(CoreError::InvalidParameter(
            "discrete boundary of an empty set".into(),
        ));
    }
    let d = s.dim();
    let mut boundary = Vec::new();
    let mut probe = vec![0i64; d];
    for p in s.points() {
        let mut on_boundary = false;
        'axes: for axis in 0..d {
            for step in [-1i64, 1] {
                probe.copy_from_slice(p);
                probe[axis] += step;
                if !s.contains(&probe) {
                    on_boundary = true;
                    break 'axes;
                }
            }
        }
        if on_boundary {
            boundary.push(p.clone());
        }
    }
    GridSet::new(d, s.resolution(), boundary)
}

/// Discrete Ahlfors regularity constant: the minimum over boundary points `k`
/// and integer window sizes `n` of `#(∂Ω ∩ k + [-n/2, n/2)^d) / n^(d-1)`,
/// with `n` ranging over `1..=ceil((#∂Ω)^(1/(d-1)))`.
pub fn discrete_ahlfors(boundary: &GridSet) -> Result<RegularityReport> {
    let d = boundary.dim();
    if d < 2 {
        return Err(CoreError::InvalidParameter(
            "discrete Ahlfors regularity needs d >= 2".into(),
        ));
    }
    if boundary.is_empty() {
        return Err(CoreError::InvalidParameter("empty boundary set".into()));
    }
    let count = boundary.len() as f64;
    let n_max = count.powf(1.0 / (d as f64 - 1.0)).ceil().max(1.0) as i64;

    // For each center, the window size at which another point enters is
    // n >= 2*delta+1 for delta >= 0 and n >= -2*delta for delta < 0, per axis.
    let per_point: Vec<(Vec<i64>, f64, i64)> = boundary
        .points()
        .par_iter()
        .map(|center| {
            let mut entering = vec![0usize; (n_max + 2) as usize];
            for q in boundary.points() {
                let mut n_enter = 1i64;
                for i in 0..d {
                    let delta = q[i] - center[i];
                    let need = if delta >= 0 { 2 * delta + 1 } else { -2 * delta };
                    n_enter = n_enter.max(need);
                }
                if n_enter <= n_max {
                    entering[n_enter as usize] += 1;
                }
            }
            let mut best = f64::INFINITY;
            let mut best_n = 1i64;
            let mut cumulative = 0usize;
            for n in 1..=n_max {
                cumulative += entering[n as usize];
                let ratio = cumulative as f64 / (n as f64).powi(d as i32 - 1);
                if ratio < best {
                    best = ratio;
                    best_n = n;
                }
            }
            (center.clone(), best, best_n)
        })
        .collect();

    let mut kappa = f64::INFINITY;
    let mut minimizer = (per_point[0].0.clone(), per_point[0].2);
    for (center, ratio, n) in &per_point {
        if *ratio < kappa - 1e-15 {
            kappa = *ratio;
            minimizer = (center.clone(), *n);
        }
    }
    Ok(RegularityReport {
        eta: n_max as f64,
        kappa,
        per_point_worst: per_point
            .into_iter()
            .map(|(p, ratio, _)| (p.iter().map(|&v| v as f64).collect(), ratio))
            .collect(),
        mode: RegularityMode::DiscreteExact,
        resolution: None,
        minimizer: Some((
            minimizer.0.iter().map(|&v| v as f64).collect(),
            minimizer.1 as f64,
        )),
    })
}

/// Terms of the lattice counting estimate `L^{-d} #E_L <~ |E| + |∂E|/(κ L)`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LatticeCount {
    pub lhs: f64,
    pub volume: f64,
    pub correction: f64,
}

pub fn lattice_count_check(
    domain: &ContinuousDomain,
    l: f64,
    kappa: f64,
) -> Result<LatticeCount> {
    let volume = domain.volume().ok_or_else(|| {
        CoreError::InvalidParameter("lattice count check needs an exact volume".into())
    })?;
    let boundary = domain.boundary_measure().ok_or_else(|| {
        CoreError::InvalidParameter("lattice count check needs an exact boundary measure".into())
    })?;
    let grid = discretize(domain, l)?;
    Ok(LatticeCount {
        lhs: grid.len() as f64 / l.powi(domain.dim() as i32),
        volume,
        correction: boundary / (kappa * l),
    })
}
