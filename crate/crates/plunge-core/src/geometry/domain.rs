//! Continuous domains: catalog shapes, set algebra, membership, exact measures,
//! and the text mini-language used by the CLI.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};

/// An axis-aligned box `[lo, hi)` (half-open); degenerate axes allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct AaBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AaBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        AaBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a).max(0.0))
            .product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&xi, (&lo, &hi))| xi >= lo && xi < hi)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).collect()
    }

    pub fn intersects(&self, other: &AaBox) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((&alo, &ahi), (&blo, &bhi))| alo < bhi && blo < ahi)
    }

    /// Removes `cut` from `self`, returning disjoint boxes covering the difference.
    pub fn subtract(&self, cut: &AaBox) -> Vec<AaBox> {
        if !self.intersects(cut) {
            return vec![self.clone()];
        }
        let mut pieces = Vec::new();
        let mut core = self.clone();
        for axis in 0..self.dim() {
            if cut.lo[axis] > core.lo[axis] {
                let mut below = core.clone();
                below.hi[axis] = cut.lo[axis];
                pieces.push(below);
                core.lo[axis] = cut.lo[axis];
            }
            if cut.hi[axis] < core.hi[axis] {
                let mut above = core.clone();
                above.lo[axis] = cut.hi[axis];
                pieces.push(above);
                core.hi[axis] = cut.hi[axis];
            }
        }
        pieces.retain(|b| b.volume() > 0.0);
        pieces
    }
}

type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Shape tag of a [`ContinuousDomain`].
#[derive(Clone)]
pub enum DomainKind {
    /// Closed box centered at the origin with the given side lengths.
    Box { widths: Vec<f64> },
    /// Closed ball of the given radius centered at the origin.
    Ball { radius: f64 },
    /// Closed annulus `inner <= |x| <= outer`.
    Annulus { inner: f64, outer: f64 },
    /// Square of side `width` minus the concentric open ball of radius `radius`.
    BoxMinusBall { width: f64, radius: f64 },
    /// Square of side `width` minus the open corner notch of side `notch` (d = 2).
    LShape { width: f64, notch: f64 },
    /// Finite union; parts are assumed essentially disjoint for exact measures.
    Union(Vec<ContinuousDomain>),
    /// `factor * base`.
    Dilation {
        base: Box<ContinuousDomain>,
        factor: f64,
    },
    /// `base + offset`.
    Shift {
        base: Box<ContinuousDomain>,
        offset: Vec<f64>,
    },
    /// Disjoint half-open boxes (dyadic covers and rasterized sets).
    BoxList { boxes: Vec<AaBox> },
    /// Generic membership predicate; only approximate operations apply.
    Predicate { member: Predicate },
}

impl fmt::Debug for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Box { widths } => write!(f, "Box({widths:?})"),
            DomainKind::Ball { radius } => write!(f, "Ball({radius})"),
            DomainKind::Annulus { inner, outer } => write!(f, "Annulus({inner},{outer})"),
            DomainKind::BoxMinusBall { width, radius } => {
                write!(f, "BoxMinusBall({width},{radius})")
            }
            DomainKind::LShape { width, notch } => write!(f, "LShape({width},{notch})"),
            DomainKind::Union(parts) => write!(f, "Union[{}]", parts.len()),
            DomainKind::Dilation { factor, .. } => write!(f, "Dilation(x{factor})"),
            DomainKind::Shift { offset, .. } => write!(f, "Shift({offset:?})"),
            DomainKind::BoxList { boxes } => write!(f, "BoxList[{}]", boxes.len()),
            DomainKind::Predicate { .. } => write!(f, "Predicate"),
        }
    }
}

/// A compact subset of R^d described by a membership predicate, a bounding box,
/// and (for catalog shapes) exact volume and boundary measure.
#[derive(Debug, Clone)]
pub struct ContinuousDomain {
    dim: usize,
    kind: DomainKind,
    bounding_box: AaBox,
    volume: Option<f64>,
    boundary_measure: Option<f64>,
    label: String,
}

fn ball_volume(d: usize, r: f64) -> f64 {
    match d {
        1 => 2.0 * r,
        2 => PI * r * r,
        3 => 4.0 / 3.0 * PI * r * r * r,
        _ => unreachable!("dimension capped at 3"),
    }
}

fn sphere_area(d: usize, r: f64) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * PI * r,
        3 => 4.0 * PI * r * r,
        _ => unreachable!("dimension capped at 3"),
    }
}

impl ContinuousDomain {
    fn check_dim(d: usize) -> Result<()> {
        if d == 0 || d > 3 {
            return Err(CoreError::InvalidParameter(format!(
                "dimension {d} unsupported (1..=3)"
            )));
        }
        Ok(())
    }

    /// Closed box centered at the origin; degenerate (zero-width) axes allowed.
    pub fn cuboid(widths: &[f64]) -> Result<Self> {
        Self::check_dim(widths.len())?;
        if widths.iter().any(|&w| w < 0.0) {
            return Err(CoreError::InvalidParameter("negative box width".into()));
        }
        let d = widths.len();
        let nonzero: Vec<f64> = widths.iter().copied().filter(|&w| w > 0.0).collect();
        let volume = if nonzero.len() == d {
            widths.iter().product()
        } else {
            0.0
        };
        // For a full-dimensional box the boundary is 2 * sum_i prod_{j != i} w_j;
        // a degenerate box *is* its own boundary.
        let boundary = if nonzero.len() == d {
            if d == 1 {
                2.0
            } else {
                2.0 * (0..d)
                    .map(|i| {
                        widths
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, &w)| w)
                            .product::<f64>()
                    })
                    .sum::<f64>()
            }
        } else {
            nonzero.iter().product()
        };
        let label = format!(
            "box({})",
            widths
                .iter()
                .map(|w| format!("{w}"))
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(ContinuousDomain {
            dim: d,
            bounding_box: AaBox::new(
                widths.iter().map(|w| -w / 2.0).collect(),
                widths.iter().map(|w| w / 2.0).collect(),
            ),
            kind: DomainKind::Box {
                widths: widths.to_vec(),
            },
            volume: Some(volume),
            boundary_measure: Some(boundary),
            label,
        })
    }

    pub fn ball(d: usize, radius: f64) -> Result<Self> {
        Self::check_dim(d)?;
        if radius <= 0.0 {
            return Err(CoreError::InvalidParameter("ball radius must be > 0".into()));
        }
        Ok(ContinuousDomain {
            dim: d,
            bounding_box: AaBox::new(vec![-radius; d], vec![radius; d]),
            kind: DomainKind::Ball { radius },
            volume: Some(ball_volume(d, radius)),
            boundary_measure: Some(sphere_area(d, radius)),
            label: format!("ball({radius})"),
        })
    }

    pub fn annulus(d: usize, inner: f64, outer: f64) -> Result<Self> {
        Self::check_dim(d)?;
        if !(0.0 < inner && inner < outer) {
            return Err(CoreError::InvalidParameter(format!(
                "annulus requires 0 < r0 < r1, got ({inner}, {outer})"
            )));
        }
        Ok(ContinuousDomain {
            dim: d,
            bounding_box: AaBox::new(vec![-outer; d], vec![outer; d]),
            kind: DomainKind::Annulus { inner, outer },
            volume: Some(ball_volume(d, outer) - ball_volume(d, inner)),
            boundary_measure: Some(sphere_area(d, outer) + sphere_area(d, inner)),
            label: format!("annulus({inner},{outer})"),
        })
    }

    /// Square (cube) of side `width` with the concentric open ball of radius
    /// `radius` removed; requires the ball strictly inside.
    pub fn box_minus_ball(d: usize, width: f64, radius: f64) -> Result<Self> {
        Self::check_dim(d)?;
        if !(radius > 0.0 && 2.0 * radius < width) {
            return Err(CoreError::InvalidParameter(format!(
                "boxminusball requires 0 < 2r < w, got (w={width}, r={radius})"
            )));
        }
        Ok(ContinuousDomain {
            dim: d,
            bounding_box: AaBox::new(vec![-width / 2.0; d], vec![width / 2.0; d]),
            kind: DomainKind::BoxMinusBall { width, radius },
            volume: Some(width.powi(d as i32) - ball_volume(d, radius)),
            boundary_measure: Some(
                2.0 * d as f64 * width.powi(d as i32 - 1) + sphere_area(d, radius),
            ),
            label: format!("boxminusball({width},{radius})"),
        })
    }

    /// Square of side `width` minus the open top-right corner square of side
    /// `notch` (d = 2 only). The perimeter stays 4w for a corner notch.
    pub fn l_shape(width: f64, notch: f64) -> Result<Self> {
        if !(notch > 0.0 && notch < width) {
            return Err(CoreError::InvalidParameter(format!(
                "lshape requires 0 < notch < w, got (w={width}, notch={notch})"
            )));
        }
        Ok(ContinuousDomain {
            dim: 2,
            bounding_box: AaBox::new(vec![-width / 2.0; 2], vec![width / 2.0; 2]),
            kind: DomainKind::LShape { width, notch },
            volume: Some(width * width - notch * notch),
            boundary_measure: Some(4.0 * width),
            label: format!("lshape({width},{notch})"),
        })
    }

    /// Union of essentially disjoint parts. Exact measures add up; overlapping
    /// parts silently overcount, so callers are responsible for disjointness.
    pub fn union(parts: Vec<ContinuousDomain>) -> Result<Self> {
        if parts.is_empty() {
            return Err(CoreError::InvalidParameter("empty union".into()));
        }
        let d = parts[0].dim;
        if parts.iter().any(|p| p.dim != d) {
            return Err(CoreError::InvalidParameter(
                "union parts of mixed dimension".into(),
            ));
        }
        let lo: Vec<f64> = (0..d)
            .map(|i| {
                parts
                    .iter()
                    .map(|p| p.bounding_box.lo[i])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let hi: Vec<f64> = (0..d)
            .map(|i| {
                parts
                    .iter()
                    .map(|p| p.bounding_box.hi[i])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let volume = parts.iter().map(|p| p.volume).sum::<Option<f64>>();
        let boundary = parts.iter().map(|p| p.boundary_measure).sum::<Option<f64>>();
        let label = format!(
            "union({})",
            parts
                .iter()
                .map(|p| p.label.clone())
                .collect::<Vec<_>>()
                .join(";")
        );
        Ok(ContinuousDomain {
            dim: d,
            bounding_box: AaBox::new(lo, hi),
            kind: DomainKind::Union(parts),
            volume,
            boundary_measure: boundary,
            label,
        })
    }

    pub fn dilate(&self, factor: f64) -> Result<Self> {
        if factor <= 0.0 {
            return Err(CoreError::InvalidParameter(
                "dilation factor must be > 0".into(),
            ));
        }
        let d = self.dim;
        Ok(ContinuousDomain {
            dim: d,
            bounding_box: AaBox::new(
                self.bounding_box.lo.iter().map(|x| x * factor).collect(),
                self.bounding_box.hi.iter().map(|x| x * factor).collect(),
            ),
            volume: self.volume.map(|v| v * factor.powi(d as i32)),
            boundary_measure: self
                .boundary_measure
                .map(|b| b * factor.powi(d as i32 - 1)),
            label: format!("dilate({},{factor})", self.label),
            kind: DomainKind::Dilation {
                base: Box::new(self.clone()),
                factor,
            },
        })
    }

    pub fn shift(&self, offset: &[f64]) -> Result<Self> {
        if offset.len() != self.dim {
            return Err(CoreError::InvalidParameter(
                "shift offset dimension mismatch".into(),
            ));
        }
        Ok(ContinuousDomain {
            dim: self.dim,
            bounding_box: AaBox::new(
                self.bounding_box
                    .lo
                    .iter()
                    .zip(offset)
                    .map(|(x, v)| x + v)
                    .collect(),
                self.bounding_box
                    .hi
                    .iter()
                    .zip(offset)
                    .map(|(x, v)| x + v)
                    .collect(),
            ),
            volume: self.volume,
            boundary_measure: self.boundary_measure,
            label: format!(
                "shift({},{})",
                self.label,
                offset
                    .iter()
                    .map(|v| format!("{v}"))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            kind: DomainKind::Shift {
                base: Box::new(self.clone()),
                offset: offset.to_vec(),
            },
        })
    }

    /// Disjoint half-open boxes; exact volume is the sum.
    pub fn from_disjoint_boxes(d: usize, boxes: Vec<AaBox>, label: &str) -> Result<Self> {
        Self::check_dim(d)?;
        if boxes.iter().any(|b| b.dim() != d) {
            return Err(CoreError::InvalidParameter(
                "box list dimension mismatch".into(),
            ));
        }
        let volume = boxes.iter().map(AaBox::volume).sum();
        let (lo, hi) = if boxes.is_empty() {
            (vec![0.0; d], vec![0.0; d])
        } else {
            (
                (0..d)
                    .map(|i| boxes.iter().map(|b| b.lo[i]).fold(f64::INFINITY, f64::min))
                    .collect(),
                (0..d)
                    .map(|i| {
                        boxes
                            .iter()
                            .map(|b| b.hi[i])
                            .fold(f64::NEG_INFINITY, f64::max)
                    })
                    .collect(),
            )
        };
        Ok(ContinuousDomain {
            dim: d,
            bounding_box: AaBox::new(lo, hi),
            kind: DomainKind::BoxList { boxes },
            volume: Some(volume),
            boundary_measure: None,
            label: label.to_string(),
        })
    }

    /// Generic predicate domain; only rasterized estimates apply.
    pub fn from_predicate(
        d: usize,
        bounding_box: AaBox,
        member: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
        label: &str,
    ) -> Result<Self> {
        Self::check_dim(d)?;
        Ok(ContinuousDomain {
            dim: d,
            bounding_box,
            kind: DomainKind::Predicate {
                member: Arc::new(member),
            },
            volume: None,
            boundary_measure: None,
            label: label.to_string(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn bounding_box(&self) -> &AaBox {
        &self.bounding_box
    }

    pub fn volume(&self) -> Option<f64> {
        self.volume
    }

    pub fn boundary_measure(&self) -> Option<f64> {
        self.boundary_measure
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bounding_diameter(&self) -> f64 {
        self.bounding_box
            .widths()
            .iter()
            .map(|w| w * w)
            .sum::<f64>()
            .sqrt()
    }

    /// Membership; catalog shapes are closed sets (boundary inclusive).
    pub fn contains(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        let r2 = || x.iter().map(|v| v * v).sum::<f64>();
        match &self.kind {
            DomainKind::Box { widths } => x
                .iter()
                .zip(widths)
                .all(|(&xi, &w)| xi.abs() <= w / 2.0),
            DomainKind::Ball { radius } => r2() <= radius * radius,
            DomainKind::Annulus { inner, outer } => {
                let r2 = r2();
                inner * inner <= r2 && r2 <= outer * outer
            }
            DomainKind::BoxMinusBall { width, radius } => {
                x.iter().all(|&xi| xi.abs() <= width / 2.0) && r2() >= radius * radius
            }
            DomainKind::LShape { width, notch } => {
                let c = width / 2.0 - notch;
                x.iter().all(|&xi| xi.abs() <= width / 2.0) && !(x[0] > c && x[1] > c)
            }
            DomainKind::Union(parts) => parts.iter().any(|p| p.contains(x)),
            DomainKind::Dilation { base, factor } => {
                let y: Vec<f64> = x.iter().map(|v| v / factor).collect();
                base.contains(&y)
            }
            DomainKind::Shift { base, offset } => {
                let y: Vec<f64> = x.iter().zip(offset).map(|(v, o)| v - o).collect();
                base.contains(&y)
            }
            DomainKind::BoxList { boxes } => boxes.iter().any(|b| b.contains(x)),
            DomainKind::Predicate { member } => member(x),
        }
    }

    /// True when membership is invariant under `x -> -x`; such domains have a
    /// real-valued indicator transform.
    pub fn centrally_symmetric(&self) -> bool {
        match &self.kind {
            DomainKind::Box { .. }
            | DomainKind::Ball { .. }
            | DomainKind::Annulus { .. }
            | DomainKind::BoxMinusBall { .. } => true,
            DomainKind::Dilation { base, .. } => base.centrally_symmetric(),
            _ => false,
        }
    }

    /// Exact test for `cube = [lo, hi) subset of self`. Conservative (may say
    /// `false` on a contained cube) only for unions straddling parts and for
    /// predicate domains, where a dense sample decides.
    pub fn contains_box(&self, cube: &AaBox) -> bool {
        let far2 = || -> f64 {
            cube.lo
                .iter()
                .zip(&cube.hi)
                .map(|(&a, &b)| a.abs().max(b.abs()).powi(2))
                .sum()
        };
        let near2 = || -> f64 {
            cube.lo
                .iter()
                .zip(&cube.hi)
                .map(|(&a, &b)| {
                    let c = 0.0_f64.clamp(a, b);
                    c * c
                })
                .sum()
        };
        match &self.kind {
            DomainKind::Box { widths } => cube
                .lo
                .iter()
                .zip(&cube.hi)
                .zip(widths)
                .all(|((&a, &b), &w)| a >= -w / 2.0 && b <= w / 2.0),
            DomainKind::Ball { radius } => far2() <= radius * radius,
            DomainKind::Annulus { inner, outer } => {
                far2() <= outer * outer && near2() >= inner * inner
            }
            DomainKind::BoxMinusBall { width, radius } => {
                cube.lo
                    .iter()
                    .zip(&cube.hi)
                    .all(|(&a, &b)| a >= -width / 2.0 && b <= width / 2.0)
                    && near2() >= radius * radius
            }
            DomainKind::LShape { width, notch } => {
                let c = width / 2.0 - notch;
                cube.lo
                    .iter()
                    .zip(&cube.hi)
                    .all(|(&a, &b)| a >= -width / 2.0 && b <= width / 2.0)
                    && !(cube.hi[0] > c && cube.hi[1] > c)
            }
            DomainKind::Union(parts) => parts.iter().any(|p| p.contains_box(cube)),
            DomainKind::Dilation { base, factor } => {
                let scaled = AaBox::new(
                    cube.lo.iter().map(|v| v / factor).collect(),
                    cube.hi.iter().map(|v| v / factor).collect(),
                );
                base.contains_box(&scaled)
            }
            DomainKind::Shift { base, offset } => {
                let moved = AaBox::new(
                    cube.lo.iter().zip(offset).map(|(v, o)| v - o).collect(),
                    cube.hi.iter().zip(offset).map(|(v, o)| v - o).collect(),
                );
                base.contains_box(&moved)
            }
            DomainKind::BoxList { boxes } => boxes.iter().any(|b| {
                cube.lo
                    .iter()
                    .zip(&cube.hi)
                    .zip(b.lo.iter().zip(&b.hi))
                    .all(|((&a, &bb), (&lo, &hi))| a >= lo && bb <= hi)
            }),
            DomainKind::Predicate { .. } => {
                // Sampled approximation: 5^d interior grid plus corners.
                let d = self.dim;
                let mut idx = vec![0usize; d];
                loop {
                    let x: Vec<f64> = (0..d)
                        .map(|i| {
                            cube.lo[i]
                                + (cube.hi[i] - cube.lo[i]) * (idx[i] as f64 + 0.5) / 5.0
                        })
                        .collect();
                    if !self.contains(&x) {
                        return false;
                    }
                    let mut axis = 0;
                    loop {
                        if axis == d {
                            return true;
                        }
                        idx[axis] += 1;
                        if idx[axis] < 5 {
                            break;
                        }
                        idx[axis] = 0;
                        axis += 1;
                    }
                }
            }
        }
    }
}

fn split_top_level(args: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in args.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c == sep && depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

fn parse_real(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CoreError::Parse(format!("expected a real number, got `{s}`")))
}

/// Parses the domain mini-language:
/// `box(w1,...,wd)`, `ball(r)`, `annulus(r0,r1)`, `boxminusball(w,r)`,
/// `lshape(w,notch)`, `union(spec;spec)`, `dilate(spec,t)`, `shift(spec,v1,...,vd)`.
/// Case-insensitive; `ball`/`annulus`/`boxminusball` default to d = 2 unless a
/// leading dimension is supplied as `ball2(r)` style via [`parse_domain_dim`].
pub fn parse_domain(spec: &str) -> Result<ContinuousDomain> {
    parse_domain_dim(spec, 2)
}

/// Same as [`parse_domain`] with an explicit ambient dimension for the radial shapes.
pub fn parse_domain_dim(spec: &str, radial_dim: usize) -> Result<ContinuousDomain> {
    let s = spec.trim();
    let open = s
        .find('(')
        .ok_or_else(|| CoreError::Parse(format!("missing `(` in `{s}`")))?;
    if !s.ends_with(')') {
        return Err(CoreError::Parse(format!("missing trailing `)` in `{s}`")));
    }
    let name = s[..open].trim().to_ascii_lowercase();
    let args = &s[open + 1..s.len() - 1];
    match name.as_str() {
        "box" => {
            let widths: Result<Vec<f64>> = split_top_level(args, ',')
                .iter()
                .map(|a| parse_real(a))
                .collect();
            ContinuousDomain::cuboid(&widths?)
        }
        "ball" => ContinuousDomain::ball(radial_dim, parse_real(args)?),
        "ball1" => ContinuousDomain::ball(1, parse_real(args)?),
        "ball2" => ContinuousDomain::ball(2, parse_real(args)?),
        "ball3" => ContinuousDomain::ball(3, parse_real(args)?),
        "annulus" => {
            let parts = split_top_level(args, ',');
            if parts.len() != 2 {
                return Err(CoreError::Parse("annulus takes (r0,r1)".into()));
            }
            ContinuousDomain::annulus(radial_dim, parse_real(&parts[0])?, parse_real(&parts[1])?)
        }
        "boxminusball" | "squareminusdisk" => {
            let parts = split_top_level(args, ',');
            if parts.len() != 2 {
                return Err(CoreError::Parse("boxminusball takes (w,r)".into()));
            }
            ContinuousDomain::box_minus_ball(
                radial_dim,
                parse_real(&parts[0])?,
                parse_real(&parts[1])?,
            )
        }
        "lshape" => {
            let parts = split_top_level(args, ',');
            if parts.len() != 2 {
                return Err(CoreError::Parse("lshape takes (w,notch)".into()));
            }
            ContinuousDomain::l_shape(parse_real(&parts[0])?, parse_real(&parts[1])?)
        }
        "union" => {
            let parts = split_top_level(args, ';');
            let domains: Result<Vec<_>> = parts
                .iter()
                .map(|p| parse_domain_dim(p, radial_dim))
                .collect();
            ContinuousDomain::union(domains?)
        }
        "dilate" => {
            let parts = split_top_level(args, ',');
            if parts.len() != 2 {
                return Err(CoreError::Parse("dilate takes (spec,t)".into()));
            }
            parse_domain_dim(&parts[0], radial_dim)?.dilate(parse_real(&parts[1])?)
        }
        "shift" => {
            let parts = split_top_level(args, ',');
            if parts.len() < 2 {
                return Err(CoreError::Parse("shift takes (spec,v1,...,vd)".into()));
            }
            let base = parse_domain_dim(&parts[0], radial_dim)?;
            let offset: Result<Vec<f64>> = parts[1..].iter().map(|a| parse_real(a)).collect();
            base.shift(&offset?)
        }
        other => Err(CoreError::Parse(format!("unknown domain kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn box_measures() {
        let b = ContinuousDomain::cuboid(&[1.0, 1.0]).unwrap();
        assert_relative_eq!(b.volume().unwrap(), 1.0);
        assert_relative_eq!(b.boundary_measure().unwrap(), 4.0);
        let b3 = ContinuousDomain::cuboid(&[1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(b3.volume().unwrap(), 6.0);
        // 2*(2*3 + 1*3 + 1*2) = 22
        assert_relative_eq!(b3.boundary_measure().unwrap(), 22.0);
    }

    #[test]
    fn disk_and_square_minus_disk() {
        let disk = ContinuousDomain::ball(2, 3.0).unwrap();
        assert_relative_eq!(disk.boundary_measure().unwrap(), 6.0 * PI);
        let smd = ContinuousDomain::box_minus_ball(2, 4.0, 1.0).unwrap();
        assert_relative_eq!(smd.volume().unwrap(), 16.0 - PI);
        assert_relative_eq!(smd.boundary_measure().unwrap(), 16.0 + 2.0 * PI);
        assert!(smd.contains(&[1.9, 0.0]));
        assert!(!smd.contains(&[0.5, 0.0]));
        assert!(smd.contains(&[1.0, 0.0])); // on the inner circle: closed set
    }

    #[test]
    fn annulus_guard() {
        assert!(ContinuousDomain::annulus(2, 1.0, 0.5).is_err());
        assert!(ContinuousDomain::annulus(2, 0.5, 1.0).is_ok());
    }

    #[test]
    fn lshape_membership_and_measures() {
        let l = ContinuousDomain::l_shape(2.0, 0.5).unwrap();
        assert_relative_eq!(l.volume().unwrap(), 4.0 - 0.25);
        assert_relative_eq!(l.boundary_measure().unwrap(), 8.0);
        assert!(l.contains(&[0.0, 0.0]));
        assert!(!l.contains(&[0.9, 0.9]));
        assert!(l.contains(&[0.5, 0.9])); // x0 = c boundary stays in
    }

    #[test]
    fn parser_round_trips() {
        let d = parse_domain("BOX(1, 1)").unwrap();
        assert!(matches!(d.kind(), DomainKind::Box { .. }));
        let d = parse_domain("dilate(ball(1),2.5)").unwrap();
        assert_relative_eq!(d.volume().unwrap(), PI * 6.25);
        let d = parse_domain("union(shift(ball(1),-2,0); shift(ball(1),2,0))").unwrap();
        assert_relative_eq!(d.volume().unwrap(), 2.0 * PI);
        assert!(d.contains(&[2.5, 0.0]));
        assert!(!d.contains(&[0.0, 0.0]));
        assert!(parse_domain("gizmo(1)").is_err());
        assert!(parse_domain("squareminusdisk(4,1)").is_ok());
    }

    #[test]
    fn dilation_scales_measures() {
        let d = ContinuousDomain::ball(2, 1.0).unwrap().dilate(3.0).unwrap();
        assert_relative_eq!(d.volume().unwrap(), 9.0 * PI);
        assert_relative_eq!(d.boundary_measure().unwrap(), 6.0 * PI);
        assert!(d.contains(&[2.9, 0.0]));
        assert!(!d.contains(&[3.1, 0.0]));
    }

    #[test]
    fn box_subtract_partitions_volume() {
        let b = AaBox::new(vec![0.0, 0.0], vec![2.0, 2.0]);
        let cut = AaBox::new(vec![1.0, -1.0], vec![3.0, 1.0]);
        let pieces = b.subtract(&cut);
        let vol: f64 = pieces.iter().map(AaBox::volume).sum();
        // removed overlap is [1,2)x[0,1) of area 1
        assert_relative_eq!(vol, 3.0);
        for p in &pieces {
            assert!(!p.intersects(&cut));
        }
    }

    #[test]
    fn contains_box_exact_cases() {
        let disk = ContinuousDomain::ball(2, 2.3).unwrap();
        assert!(disk.contains_box(&AaBox::new(vec![-1.0, -1.0], vec![1.0, 1.0])));
        assert!(!disk.contains_box(&AaBox::new(vec![-2.0, -2.0], vec![2.0, 2.0])));
        let smd = ContinuousDomain::box_minus_ball(2, 4.0, 1.0).unwrap();
        assert!(smd.contains_box(&AaBox::new(vec![1.0, 1.0], vec![2.0, 2.0])));
        assert!(!smd.contains_box(&AaBox::new(vec![0.5, 0.5], vec![1.5, 1.5])));
    }
}
