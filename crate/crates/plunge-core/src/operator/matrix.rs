//! Assembly of the finite Hermitian matrix sharing the nonzero spectrum of the
//! concentration operator `T = χ_F F_L^{-1} χ_Ω F_L`: entries are
//! `L^{-d} * ft_indicator(F)((m - m')/L)` over the frequency set `Ω`.

use std::collections::HashMap;
use std::io::Write;

use faer::c64;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::geometry::domain::ContinuousDomain;
use crate::geometry::grid::GridSet;
use crate::operator::transform::{
    ft_indicator, ft_indicator_rasterized, has_exact_transform, rasterization_cell,
};

/// Default cap on the frequency-set size (dense eigensolve stays tractable).
pub const DEFAULT_OMEGA_CAP: usize = 6000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AssemblyMode {
    Exact,
    Rasterized { cell: f64 },
}

/// Matrix storage; centrally symmetric domains have a real transform and get
/// the cheaper real-symmetric path.
#[derive(Debug, Clone)]
pub enum MatrixData {
    Real(faer::Mat<f64>),
    Complex(faer::Mat<c64>),
}

#[derive(Debug, Clone)]
pub struct ConcentrationMatrix {
    omega: GridSet,
    f_label: String,
    f_volume: Option<f64>,
    mode: AssemblyMode,
    data: MatrixData,
}

impl ConcentrationMatrix {
    pub fn size(&self) -> usize {
        self.omega.len()
    }

    pub fn omega(&self) -> &GridSet {
        &self.omega
    }

    pub fn resolution(&self) -> f64 {
        self.omega.resolution()
    }

    pub fn mode(&self) -> AssemblyMode {
        self.mode
    }

    pub fn data(&self) -> &MatrixData {
        &self.data
    }

    pub fn f_label(&self) -> &str {
        &self.f_label
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match &self.data {
            MatrixData::Real(m) => Complex64::new(m[(i, j)], 0.0),
            MatrixData::Complex(m) => {
                let v = m[(i, j)];
                Complex64::new(v.re, v.im)
            }
        }
    }

    /// Trace and squared Frobenius norm (`tr(M^2)` for Hermitian input).
    pub fn trace_stats(&self) -> TraceStats {
        let n = self.size();
        match &self.data {
            MatrixData::Real(m) => {
                let trace = (0..n).map(|i| m[(i, i)]).sum();
                let trace_sq = (0..n)
                    .into_par_iter()
                    .map(|i| (0..n).map(|j| m[(i, j)] * m[(i, j)]).sum::<f64>())
                    .sum();
                TraceStats { trace, trace_sq }
            }
            MatrixData::Complex(m) => {
                let trace = (0..n).map(|i| m[(i, i)].re).sum();
                let trace_sq = (0..n)
                    .into_par_iter()
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let v = m[(i, j)];
                                v.re * v.re + v.im * v.im
                            })
                            .sum::<f64>()
                    })
                    .sum();
                TraceStats { trace, trace_sq }
            }
        }
    }

    /// Largest asymmetry `|M - M^*|` entry; zero by construction for the
    /// mirrored fill, kept as a defensive check before eigensolves.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.size();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                let a = self.entry(i, j);
                let b = self.entry(j, i).conj();
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }

    /// Debug export: one `row,col,re,im` line per entry.
    pub fn export_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.size();
        writeln!(w, "row,col,re,im")?;
        for i in 0..n {
            for j in 0..n {
                let v = self.entry(i, j);
                writeln!(w, "{},{},{:.17e},{:.17e}", i, j, v.re, v.im)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TraceStats {
    pub trace: f64,
    pub trace_sq: f64,
}

fn check_domain_in_cell(f: &ContinuousDomain, l: f64) -> Result<()> {
    let half = l / 2.0;
    let bbox = f.bounding_box();
    if bbox.lo.iter().any(|&x| x < -half - 1e-12) || bbox.hi.iter().any(|&x| x > half + 1e-12) {
        return Err(CoreError::DomainOutsideCell { l });
    }
    Ok(())
}

/// Assembles the `#Ω x #Ω` matrix with entries
/// `L^{-d} * ft_indicator(F)((m - m')/L)`. Entries depend only on the
/// difference `m - m'`, so each distinct difference is evaluated once.
pub fn assemble(omega: &GridSet, f: &ContinuousDomain, cap: usize) -> Result<ConcentrationMatrix> {
    let n = omega.len();
    if n == 0 {
        return Err(CoreError::InvalidParameter("empty frequency set".into()));
    }
    if n > cap {
        return Err(CoreError::CapExceeded { size: n, cap });
    }
    if omega.dim() != f.dim() {
        return Err(CoreError::InvalidParameter(
            "frequency set and spatial domain dimension mismatch".into(),
        ));
    }
    let l = omega.resolution();
    check_domain_in_cell(f, l)?;
    let d = omega.dim();
    let scale = l.powi(-(d as i32));

    // Distinct differences m - m'.
    let points = omega.points();
    let mut diff_index: HashMap<Vec<i64>, u32> = HashMap::new();
    let mut diffs: Vec<Vec<i64>> = Vec::new();
    let mut entry_ids: Vec<u32> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let diff: Vec<i64> = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| a - b)
                .collect();
            let next = diffs.len() as u32;
            let id = *diff_index.entry(diff.clone()).or_insert_with(|| {
                diffs.push(diff);
                next
            });
            entry_ids.push(id);
        }
    }

    let exact = has_exact_transform(f);
    let mode = if exact {
        AssemblyMode::Exact
    } else {
        let max_xi = diffs
            .iter()
            .flat_map(|diff| diff.iter().map(|&k| (k as f64 / l).abs()))
            .fold(0.0f64, f64::max);
        AssemblyMode::Rasterized {
            cell: rasterization_cell(max_xi),
        }
    };

    let values: Vec<Complex64> = diffs
        .par_iter()
        .map(|diff| {
            let xi: Vec<f64> = diff.iter().map(|&k| k as f64 / l).collect();
            let v = match mode {
                AssemblyMode::Exact => ft_indicator(f, &xi).expect("exact transform"),
                AssemblyMode::Rasterized { cell } => {
                    ft_indicator_rasterized(f, &xi, cell).expect("rasterized transform")
                }
            };
            scale * v
        })
        .collect();

    let data = if f.centrally_symmetric() && mode == AssemblyMode::Exact {
        MatrixData::Real(faer::Mat::from_fn(n, n, |i, j| {
            values[entry_ids[i * n + j] as usize].re
        }))
    } else {
        // Hermitian symmetrization: average the (i,j) and conj (j,i) values so
        // rasterization noise cannot break symmetry.
        MatrixData::Complex(faer::Mat::from_fn(n, n, |i, j| {
            let a = values[entry_ids[i * n + j] as usize];
            let b = values[entry_ids[j * n + i] as usize].conj();
            let v = 0.5 * (a + b);
            c64::new(v.re, v.im)
        }))
    };

    let matrix = ConcentrationMatrix {
        omega: omega.clone(),
        f_label: f.label().to_string(),
        f_volume: f.volume(),
        mode,
        data,
    };

    // Trace identity: n * L^{-d} * |F| when the volume is known exactly.
    if let (Some(vol), AssemblyMode::Exact) = (matrix.f_volume, mode) {
        let expected = n as f64 * scale * vol;
        let got = matrix.trace_stats().trace;
        let tol = 1e-10 * expected.abs().max(1.0);
        debug_assert!(
            (got - expected).abs() <= tol,
            "trace {got} deviates from {expected}"
        );
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::ContinuousDomain;
    use crate::geometry::grid::{discretize, GridSet};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn grid1(points: &[i64]) -> GridSet {
        GridSet::new(1, 1.0, points.iter().map(|&k| vec![k]).collect()).unwrap()
    }

    #[test]
    fn full_cell_domain_gives_identity() {
        let f = ContinuousDomain::cuboid(&[1.0]).unwrap();
        let m = assemble(&grid1(&[0]), &f, DEFAULT_OMEGA_CAP).unwrap();
        assert_relative_eq!(m.entry(0, 0).re, 1.0);
        let m2 = assemble(&grid1(&[0, 1]), &f, DEFAULT_OMEGA_CAP).unwrap();
        assert_relative_eq!(m2.entry(0, 0).re, 1.0);
        assert_relative_eq!(m2.entry(0, 1).re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn quarter_interval_analytic_entries() {
        let f = ContinuousDomain::cuboid(&[0.5]).unwrap();
        let m = assemble(&grid1(&[0, 1]), &f, DEFAULT_OMEGA_CAP).unwrap();
        assert_relative_eq!(m.entry(0, 0).re, 0.5);
        assert_relative_eq!(m.entry(1, 1).re, 0.5);
        assert_relative_eq!(m.entry(0, 1).re, 1.0 / PI, epsilon = 1e-15);
        assert_relative_eq!(m.entry(1, 0).re, 1.0 / PI, epsilon = 1e-15);
    }

    #[test]
    fn trace_stats_match_arithmetic() {
        let f = ContinuousDomain::cuboid(&[0.5]).unwrap();
        let m = assemble(&grid1(&[0, 1]), &f, DEFAULT_OMEGA_CAP).unwrap();
        let stats = m.trace_stats();
        assert_relative_eq!(stats.trace, 1.0);
        assert_relative_eq!(stats.trace_sq, 0.5 + 2.0 / (PI * PI), epsilon = 1e-14);
    }

    #[test]
    fn diagonal_is_volume_scaled() {
        let f = ContinuousDomain::cuboid(&[0.5]).unwrap();
        let m = assemble(&grid1(&[-2, 0, 1, 5, 9]), &f, DEFAULT_OMEGA_CAP).unwrap();
        let stats = m.trace_stats();
        assert_relative_eq!(stats.trace, 5.0 * 0.25 * 2.0); // 5 * L^{-1} * |F| = 5 * 0.5
    }

    #[test]
    fn cap_and_cell_guards() {
        let f = ContinuousDomain::cuboid(&[0.5]).unwrap();
        assert!(matches!(
            assemble(&grid1(&[0, 1, 2]), &f, 2),
            Err(CoreError::CapExceeded { .. })
        ));
        let wide = ContinuousDomain::cuboid(&[3.0]).unwrap();
        assert!(matches!(
            assemble(&grid1(&[0]), &wide, 10),
            Err(CoreError::DomainOutsideCell { .. })
        ));
    }

    #[test]
    fn dilation_invariance_entrywise() {
        // lambda_n(T_{t^{-1}E, tF, tL}) = lambda_n(T_{E,F,L}) realized as an
        // entrywise-identical matrix for lattice-compatible t.
        let e = ContinuousDomain::ball(2, 1.3).unwrap();
        let f = ContinuousDomain::cuboid(&[0.8, 0.6]).unwrap();
        let l = 4.0;
        let base = assemble(&discretize(&e, l).unwrap(), &f, DEFAULT_OMEGA_CAP).unwrap();
        for t in [2.0, 0.5] {
            let e_t = e.dilate(1.0 / t).unwrap();
            let f_t = f.dilate(t).unwrap();
            let m_t = assemble(&discretize(&e_t, t * l).unwrap(), &f_t, DEFAULT_OMEGA_CAP).unwrap();
            assert_eq!(base.size(), m_t.size());
            for i in 0..base.size() {
                for j in 0..base.size() {
                    let a = base.entry(i, j);
                    let b = m_t.entry(i, j);
                    assert_relative_eq!(a.re, b.re, epsilon = 1e-12);
                    assert_relative_eq!(a.im, b.im, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn shift_of_frequency_set_preserves_matrix() {
        let f = ContinuousDomain::cuboid(&[0.5]).unwrap();
        let a = assemble(&grid1(&[0, 1, 3]), &f, DEFAULT_OMEGA_CAP).unwrap();
        let b = assemble(&grid1(&[7, 8, 10]), &f, DEFAULT_OMEGA_CAP).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(a.entry(i, j).re, b.entry(i, j).re, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn csv_export_shape() {
        let f = ContinuousDomain::cuboid(&[0.5]).unwrap();
        let m = assemble(&grid1(&[0, 1]), &f, DEFAULT_OMEGA_CAP).unwrap();
        let mut buf = Vec::new();
        m.export_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("row,col,re,im"));
    }
}
