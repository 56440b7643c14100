//! Fourier transforms of indicator functions, `∫_F e^{-2πi x·ξ} dx`.
//! Closed forms cover boxes, balls (d <= 3), annuli, their differences and
//! unions; generic predicates go through a rasterized sum of cell transforms.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::geometry::domain::{AaBox, ContinuousDomain, DomainKind};

/// sin(t)/t with the removable singularity filled in.
fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-8 {
        1.0 - t * t / 6.0
    } else {
        t.sin() / t
    }
}

/// Transform of the centered interval of length `w`.
fn interval_ft(w: f64, xi: f64) -> f64 {
    w * sinc(PI * w * xi)
}

/// Transform of a (possibly shifted) box `[lo, hi)`.
fn box_ft(b: &AaBox, xi: &[f64]) -> Complex64 {
    let mut value = Complex64::new(1.0, 0.0);
    for i in 0..b.dim() {
        let w = b.hi[i] - b.lo[i];
        let c = 0.5 * (b.hi[i] + b.lo[i]);
        let phase = Complex64::from_polar(1.0, -2.0 * PI * c * xi[i]);
        value *= phase * interval_ft(w, xi[i]);
    }
    value
}

/// Transform of the centered ball of radius `r` in dimension `d`.
fn ball_ft(d: usize, r: f64, xi: &[f64]) -> f64 {
    let rho: f64 = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let z = 2.0 * PI * r * rho;
    match d {
        1 => 2.0 * r * sinc(z),
        2 => {
            // (r/|ξ|) J_1(2π r |ξ|), with the |ξ| -> 0 limit π r².
            let j1_over_z = if z < 1e-6 {
                0.5 - z * z / 16.0
            } else {
                libm::j1(z) / z
            };
            2.0 * PI * r * r * j1_over_z
        }
        3 => {
            // volume * 3 (sin z - z cos z) / z^3
            let g = if z < 0.5 {
                let z2 = z * z;
                1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0
            } else {
                3.0 * (z.sin() - z * z.cos()) / (z * z * z)
            };
            4.0 / 3.0 * PI * r * r * r * g
        }
        _ => unreachable!("dimension capped at 3"),
    }
}

/// Exact transform where a closed form exists.
fn exact_ft(domain: &ContinuousDomain, xi: &[f64]) -> Option<Complex64> {
    let d = domain.dim();
    match domain.kind() {
        DomainKind::Box { widths } => {
            let mut value = Complex64::new(1.0, 0.0);
            for i in 0..d {
                value *= interval_ft(widths[i], xi[i]);
            }
            Some(value)
        }
        DomainKind::Ball { radius } => Some(Complex64::new(ball_ft(d, *radius, xi), 0.0)),
        DomainKind::Annulus { inner, outer } => Some(Complex64::new(
            ball_ft(d, *outer, xi) - ball_ft(d, *inner, xi),
            0.0,
        )),
        DomainKind::BoxMinusBall { width, radius } => {
            let mut boxv = Complex64::new(1.0, 0.0);
            for i in 0..d {
                boxv *= interval_ft(*width, xi[i]);
            }
            Some(boxv - ball_ft(d, *radius, xi))
        }
        DomainKind::LShape { width, notch } => {
            let mut boxv = Complex64::new(1.0, 0.0);
            for i in 0..2 {
                boxv *= interval_ft(*width, xi[i]);
            }
            let h = width / 2.0;
            let corner = AaBox::new(vec![h - notch, h - notch], vec![h, h]);
            Some(boxv - box_ft(&corner, xi))
        }
        DomainKind::Union(parts) => {
            let mut total = Complex64::new(0.0, 0.0);
            for p in parts {
                total += exact_ft(p, xi)?;
            }
            Some(total)
        }
        DomainKind::Dilation { base, factor } => {
            let scaled: Vec<f64> = xi.iter().map(|v| v * factor).collect();
            Some(factor.powi(d as i32) * exact_ft(base, &scaled)?)
        }
        DomainKind::Shift { base, offset } => {
            let dot: f64 = offset.iter().zip(xi).map(|(o, v)| o * v).sum();
            Some(Complex64::from_polar(1.0, -2.0 * PI * dot) * exact_ft(base, xi)?)
        }
        DomainKind::BoxList { boxes } => {
            let mut total = Complex64::new(0.0, 0.0);
            for b in boxes {
                total += box_ft(b, xi);
            }
            Some(total)
        }
        DomainKind::Predicate { .. } => None,
    }
}

/// Whether [`ft_indicator`] has a closed form for this domain.
pub fn has_exact_transform(domain: &ContinuousDomain) -> bool {
    match domain.kind() {
        DomainKind::Predicate { .. } => false,
        DomainKind::Union(parts) => parts.iter().all(has_exact_transform),
        DomainKind::Dilation { base, .. } | DomainKind::Shift { base, .. } => {
            has_exact_transform(base)
        }
        _ => true,
    }
}

/// `∫_F e^{-2πi x·ξ} dx` in closed form; errors on generic predicates.
pub fn ft_indicator(domain: &ContinuousDomain, xi: &[f64]) -> Result<Complex64> {
    exact_ft(domain, xi).ok_or(CoreError::ExactTransformUnavailable)
}

/// Rasterized transform: sum of the closed-form transforms of grid cells whose
/// centers lie inside the domain. The cell size is recorded by the caller.
pub fn ft_indicator_rasterized(
    domain: &ContinuousDomain,
    xi: &[f64],
    cell: f64,
) -> Result<Complex64> {
    if cell <= 0.0 {
        return Err(CoreError::InvalidParameter("cell size must be > 0".into()));
    }
    let d = domain.dim();
    let bbox = domain.bounding_box();
    let counts: Vec<usize> = (0..d)
        .map(|i| ((bbox.hi[i] - bbox.lo[i]) / cell).ceil() as usize)
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; d];
    'outer: loop {
        let lo: Vec<f64> = (0..d).map(|i| bbox.lo[i] + idx[i] as f64 * cell).collect();
        let hi: Vec<f64> = lo.iter().map(|v| v + cell).collect();
        let center: Vec<f64> = lo.iter().map(|v| v + cell / 2.0).collect();
        if domain.contains(&center) {
            total += box_ft(&AaBox::new(lo, hi), xi);
        }
        let mut axis = 0;
        loop {
            if axis == d {
                break 'outer;
            }
            idx[axis] += 1;
            if idx[axis] < counts[axis] {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
    Ok(total)
}

/// Default rasterization cell for a batch of evaluation frequencies.
pub fn rasterization_cell(max_abs_xi: f64) -> f64 {
    (0.01f64).min(1.0 / (8.0 * max_abs_xi.max(1e-9)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::ContinuousDomain;
    use approx::assert_relative_eq;

    #[test]
    fn interval_values() {
        let f = ContinuousDomain::cuboid(&[1.0]).unwrap();
        assert_relative_eq!(ft_indicator(&f, &[0.0]).unwrap().re, 1.0);
        assert_relative_eq!(
            ft_indicator(&f, &[1.0]).unwrap().re,
            0.0,
            epsilon = 1e-15
        );
        let half = ContinuousDomain::cuboid(&[0.5]).unwrap();
        assert_relative_eq!(
            ft_indicator(&half, &[1.0]).unwrap().re,
            1.0 / PI,
            epsilon = 1e-15
        );
    }

    #[test]
    fn value_at_zero_is_volume() {
        for spec in [
            ContinuousDomain::ball(2, 1.7).unwrap(),
            ContinuousDomain::ball(3, 0.9).unwrap(),
            ContinuousDomain::annulus(2, 0.5, 1.5).unwrap(),
            ContinuousDomain::box_minus_ball(2, 4.0, 1.0).unwrap(),
            ContinuousDomain::l_shape(2.0, 0.5).unwrap(),
        ] {
            let zero = vec![0.0; spec.dim()];
            assert_relative_eq!(
                ft_indicator(&spec, &zero).unwrap().re,
                spec.volume().unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let f = ContinuousDomain::l_shape(1.8, 0.6).unwrap();
        for xi in [[0.3, -0.7], [1.2, 0.4], [-2.0, 2.5]] {
            let plus = ft_indicator(&f, &xi).unwrap();
            let minus = ft_indicator(&f, &[-xi[0], -xi[1]]).unwrap();
            assert_relative_eq!(plus.re, minus.re, epsilon = 1e-14);
            assert_relative_eq!(plus.im, -minus.im, epsilon = 1e-14);
        }
    }

    #[test]
    fn disk_transform_against_quadrature() {
        let f = ContinuousDomain::ball(2, 1.2).unwrap();
        for xi in [[0.5, 0.0], [0.7, -0.3], [1.5, 1.1]] {
            let exact = ft_indicator(&f, &xi).unwrap();
            // brute-force midpoint quadrature oracle
            let n = 2000;
            let h = 2.4 / n as f64;
            let mut sum = Complex64::new(0.0, 0.0);
            for ix in 0..n {
                for iy in 0..n {
                    let x = -1.2 + (ix as f64 + 0.5) * h;
                    let y = -1.2 + (iy as f64 + 0.5) * h;
                    if x * x + y * y <= 1.44 {
                        let phase = -2.0 * PI * (x * xi[0] + y * xi[1]);
                        sum += Complex64::from_polar(h * h, phase);
                    }
                }
            }
            assert_relative_eq!(exact.re, sum.re, epsilon = 2e-4);
            assert_relative_eq!(exact.im, sum.im, epsilon = 2e-4);
        }
    }

    #[test]
    fn ball3_transform_small_and_large_args() {
        let f = ContinuousDomain::ball(3, 0.8).unwrap();
        // continuity across the series/direct switch at z = 0.5
        let v1 = ft_indicator(&f, &[0.0993, 0.0, 0.0]).unwrap().re;
        let v2 = ft_indicator(&f, &[0.0994, 0.0, 0.0]).unwrap().re;
        assert_relative_eq!(v1, v2, max_relative = 1e-6);
    }

    #[test]
    fn rasterized_matches_exact_on_disk() {
        let f = ContinuousDomain::ball(2, 1.0).unwrap();
        let xi = [0.8, -0.4];
        let exact = ft_indicator(&f, &xi).unwrap();
        let raster = ft_indicator_rasterized(&f, &xi, 0.005).unwrap();
        assert_relative_eq!(exact.re, raster.re, epsilon = 3e-3);
        assert_relative_eq!(exact.im, raster.im, epsilon = 3e-3);
    }

    #[test]
    fn exact_mode_rejected_for_predicates() {
        let dom = ContinuousDomain::from_predicate(
            2,
            AaBox::new(vec![-1.0, -1.0], vec![1.0, 1.0]),
            |x| x[0].abs() + x[1].abs() <= 1.0,
            "diamond",
        )
        .unwrap();
        assert!(ft_indicator(&dom, &[0.1, 0.2]).is_err());
        assert!(!has_exact_transform(&dom));
    }
}
