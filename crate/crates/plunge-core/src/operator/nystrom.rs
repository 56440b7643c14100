//! Independent brute-force oracle: quadrature discretization of the kernel
//! `K(x, y) = L^{-d} Σ_{m ∈ Ω} e^{2πi m·(x-y)/L}` on a grid over F. Used only
//! by tests to cross-validate the assembled matrix.

use faer::c64;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::geometry::domain::ContinuousDomain;
use crate::geometry::grid::GridSet;

const GRID_LIMIT: usize = 4096;

/// Eigenvalues (descending) of the quadrature-weighted kernel matrix on an
/// `n`-per-axis grid over the bounding box of `f`. Cells straddling the
/// boundary get fractional weights from an 8^d subsample.
pub fn nystrom_oracle(omega: &GridSet, f: &ContinuousDomain, grid_n: usize) -> Result<Vec<f64>> {
    let d = f.dim();
    let total = grid_n.pow(d as u32);
    if total > GRID_LIMIT {
        return Err(CoreError::OracleGridTooLarge {
            points: total,
            limit: GRID_LIMIT,
        });
    }
    let l = omega.resolution();
    let bbox = f.bounding_box();
    let h: Vec<f64> = (0..d)
        .map(|i| (bbox.hi[i] - bbox.lo[i]) / grid_n as f64)
        .collect();
    let cell_volume: f64 = h.iter().product();

    // Quadrature nodes with volume-fraction weights.
    let sub = 8usize;
    let mut nodes: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut idx = vec![0usize; d];
    'cells: loop {
        let center: Vec<f64> = (0..d)
            .map(|i| bbox.lo[i] + (idx[i] as f64 + 0.5) * h[i])
            .collect();
        let mut hits = 0usize;
        let mut sidx = vec![0usize; d];
        'subs: loop {
            let x: Vec<f64> = (0..d)
                .map(|i| bbox.lo[i] + (idx[i] as f64 + (sidx[i] as f64 + 0.5) / sub as f64) * h[i])
                .collect();
            if f.contains(&x) {
                hits += 1;
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    break 'subs;
                }
                sidx[axis] += 1;
                if sidx[axis] < sub {
                    break;
                }
                sidx[axis] = 0;
                axis += 1;
            }
        }
        if hits > 0 {
            let fraction = hits as f64 / (sub as f64).powi(d as i32);
            nodes.push((center, cell_volume * fraction));
        }
        let mut axis = 0;
        loop {
            if axis == d {
                break 'cells;
            }
            idx[axis] += 1;
            if idx[axis] < grid_n {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }

    // B = C^H C with C[m, p] = sqrt(w_p) L^{-d/2} e^{-2πi m·x_p / L}.
    let n_omega = omega.len();
    let n_pts = nodes.len();
    let scale = l.powi(-(d as i32)).sqrt();
    let c = faer::Mat::<c64>::from_fn(n_omega, n_pts, |mi, p| {
        let m = &omega.points()[mi];
        let (x, w) = &nodes[p];
        let phase: f64 = m
            .iter()
            .zip(x)
            .map(|(&mk, &xk)| -2.0 * PI * mk as f64 * xk / l)
            .sum();
        let amp = w.sqrt() * scale;
        c64::new(amp * phase.cos(), amp * phase.sin())
    });
    let b = c.adjoint() * &c;
    let mut evals = crate::eig::hermitian_eigenvalues(&b)?;
    evals.reverse();
    Ok(evals)
}
