//! Wire cross-sections and their boundary discretisation into panels.
//!
//! Coordinates: x across the wire, z normal to the chip, the wire runs along y.
//! Strips occupy `|x| <= w`, `-d <= z <= 0`, so z = 0 is the top surface.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use nalgebra::Vector2;

use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;

/// Rectangular wire with rounded corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripGeometry {
    pub half_width: f64,
    /// Zero for the thin-strip idealisation.
    pub thickness: f64,
    pub corner_radius: f64,
}

impl StripGeometry {
    pub fn new(half_width: f64, thickness: f64, corner_radius: f64) -> Result<Self> {
        let g = Self {
            half_width,
            thickness,
            corner_radius,
        };
        g.validate()?;
        Ok(g)
    }

    /// Corner radius w/32, clamped to d/2 for very thin strips.
    pub fn with_default_corners(half_width: f64, thickness: f64) -> Result<Self> {
        Self::new(half_width, thickness, (half_width / 32.0).min(thickness / 2.0))
    }

    pub fn validate(&self) -> Result<()> {
        let (w, d, r) = (self.half_width, self.thickness, self.corner_radius);
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidGeometry(format!("half-width must be positive, got {w}")));
        }
        if !(d >= 0.0 && d.is_finite()) {
            return Err(Error::InvalidGeometry(format!("thickness must be non-negative, got {d}")));
        }
        // small slack so that r = d/2 computed in floating point is accepted
        let rmax = w.min(d / 2.0) * (1.0 + 1e-12);
        if !(r >= 0.0 && r <= rmax) {
            return Err(Error::InvalidGeometry(format!(
                "corner radius {r} must lie in [0, min(w, d/2)] = [0, {}]",
                w.min(d / 2.0)
            )));
        }
        Ok(())
    }

    /// Analytic perimeter of the rounded rectangle.
    pub fn perimeter(&self) -> f64 {
        let (w, d, r) = (self.half_width, self.thickness, self.corner_radius);
        2.0 * (2.0 * w - 2.0 * r) + 2.0 * (d - 2.0 * r) + 2.0 * PI * r
    }

    pub fn cross_section_area(&self) -> f64 {
        let (w, d, r) = (self.half_width, self.thickness, self.corner_radius);
        2.0 * w * d - (4.0 - PI) * r * r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderGeometry {
    pub radius: f64,
}

impl CylinderGeometry {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidGeometry(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { radius })
    }
}

/// One boundary element. Panels lie entirely on one straight or circular piece
/// of the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub midpoint: Vec2,
    /// Unit normal pointing out of the conductor.
    pub normal: Vec2,
    /// n × ŷ, i.e. the counter-clockwise direction in the (x, z) plane.
    pub tangent: Vec2,
    pub length: f64,
    /// `None` for straight panels.
    pub curvature_radius: Option<f64>,
    /// Arclength of the midpoint from the start of the boundary.
    pub arclength: f64,
}

impl Panel {
    fn new(midpoint: Vec2, normal: Vec2, length: f64, curvature_radius: Option<f64>) -> Self {
        Self {
            midpoint,
            normal,
            tangent: tangent_of(normal),
            length,
            curvature_radius,
            arclength: 0.0,
        }
    }

    /// Point and outward normal at signed arclength `s` from the midpoint.
    pub fn point_at(&self, s: f64) -> (Vec2, Vec2) {
        match self.curvature_radius {
            None => (self.midpoint + self.tangent * s, self.normal),
            Some(rc) => {
                let center = self.midpoint - self.normal * rc;
                let (sin, cos) = (s / rc).sin_cos();
                let n = self.normal * cos + self.tangent * sin;
                (center + n * rc, n)
            }
        }
    }

    /// Angle subtended at the centre of curvature, da/R; zero when flat.
    pub fn subtended_angle(&self) -> f64 {
        self.curvature_radius.map_or(0.0, |rc| self.length / rc)
    }
}

/// t = n × ŷ for n = (nx, nz).
pub fn tangent_of(n: Vec2) -> Vec2 {
    Vec2::new(-n.y, n.x)
}

/// Closed boundary traversed once counter-clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    panels: Vec<Panel>,
    perimeter: f64,
    top: f64,
}

enum Piece {
    Line { from: Vec2, to: Vec2 },
    Arc { center: Vec2, radius: f64, start: f64, end: f64 },
}

impl Piece {
    fn length(&self) -> f64 {
        match self {
            Piece::Line { from, to } => (to - from).norm(),
            Piece::Arc { radius, start, end, .. } => radius * (end - start),
        }
    }

    fn panels(&self, n: usize, out: &mut Vec<Panel>) {
        let len = self.length();
        let da = len / n as f64;
        for k in 0..n {
            let f = (k as f64 + 0.5) / n as f64;
            let p = match self {
                Piece::Line { from, to } => {
                    let t = (to - from) / len;
                    Panel::new(from + (to - from) * f, Vec2::new(t.y, -t.x), da, None)
                }
                Piece::Arc { center, radius, start, end } => {
                    let a = start + (end - start) * f;
                    let n = Vec2::new(a.cos(), a.sin());
                    Panel::new(center + n * *radius, n, da, Some(*radius))
                }
            };
            out.push(p);
        }
    }
}

impl SurfaceMesh {
    fn from_panels(mut panels: Vec<Panel>, top: f64) -> Self {
        let mut s = 0.0;
        for p in panels.iter_mut() {
            p.arclength = s + 0.5 * p.length;
            s += p.length;
        }
        Self {
            panels,
            perimeter: s,
            top,
        }
    }

    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    /// Sum of panel lengths.
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Highest z on the boundary.
    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn min_panel_length(&self) -> f64 {
        self.panels.iter().map(|p| p.length).fold(f64::INFINITY, f64::min)
    }

    pub fn max_panel_length(&self) -> f64 {
        self.panels.iter().map(|p| p.length).fold(0.0, f64::max)
    }

    /// Σ t·da; vanishes for a closed curve.
    pub fn closure(&self) -> Vec2 {
        self.panels.iter().map(|p| p.tangent * p.length).sum()
    }

    /// Distance to the nearest panel (on its exact straight or circular shape)
    /// and whether the point is on the outward side of that panel.
    pub fn distance_and_side(&self, p: Vec2) -> (f64, bool) {
        let mut best = (f64::INFINITY, true);
        for pan in &self.panels {
            let (dist, outside) = match pan.curvature_radius {
                None => {
                    let d = p - pan.midpoint;
                    let u = d.dot(&pan.tangent).clamp(-0.5 * pan.length, 0.5 * pan.length);
                    ((d - pan.tangent * u).norm(), d.dot(&pan.normal) > 0.0)
                }
                Some(rc) => {
                    let centre = pan.midpoint - pan.normal * rc;
                    let d = p - centre;
                    let half = 0.5 * pan.length / rc;
                    let angle = d.dot(&pan.tangent).atan2(d.dot(&pan.normal));
                    if angle.abs() <= half {
                        let r = d.norm();
                        ((r - rc).abs(), r > rc)
                    } else {
                        let (end, n) = pan.point_at(0.5 * pan.length * angle.signum());
                        let e = p - end;
                        (e.norm(), e.dot(&n) > 0.0)
                    }
                }
            };
            if dist < best.0 {
                best = (dist, outside);
            }
        }
        best
    }

    /// Rows `x,z,nx,nz,da,curvature` with the curvature radius written as `inf`
    /// for flat panels.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("# units: x=m, z=m, nx=1, nz=1, da=m, curvature=m\nx,z,nx,nz,da,curvature\n");
        for p in &self.panels {
            let curv = p.curvature_radius.map_or("inf".to_string(), crate::table::fmt_num);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                crate::table::fmt_num(p.midpoint.x),
                crate::table::fmt_num(p.midpoint.y),
                crate::table::fmt_num(p.normal.x),
                crate::table::fmt_num(p.normal.y),
                crate::table::fmt_num(p.length),
                curv
            );
        }
        s
    }
}

pub const MIN_RECT_PANELS: usize = 32;
pub const MIN_CIRCLE_PANELS: usize = 16;

/// Discretises a rounded rectangle into panels whose count per boundary piece
/// is proportional to its arclength. Counts are kept equal for pieces of
/// equal length so the mesh inherits the rectangle's mirror symmetries.
pub fn mesh_rounded_rectangle(geom: &StripGeometry, n_panels: usize) -> Result<SurfaceMesh> {
    geom.validate()?;
    let (w, d, r) = (geom.half_width, geom.thickness, geom.corner_radius);
    if d <= 0.0 || r <= 0.0 {
        return Err(Error::InvalidGeometry(
            "boundary elements need finite thickness and rounded corners".into(),
        ));
    }
    if n_panels < MIN_RECT_PANELS {
        return Err(Error::TooCoarse {
            got: n_panels,
            min: MIN_RECT_PANELS,
        });
    }
    let hx = w - r;
    let zt = -r;
    let zb = -d + r;
    let lh = 2.0 * hx;
    let lv = (zt - zb).max(0.0);
    let la = FRAC_PI_2 * r;
    let perim = geom.perimeter();
    let n = n_panels as f64;

    let ideal = |l: f64| n * l / perim;
    // short pieces round up so that no panel is much longer than perim/n
    let count = |l: f64, up: bool| match (l > 0.0, up) {
        (false, _) => 0,
        (true, true) => (ideal(l) - 1e-9).ceil().max(1.0) as usize,
        (true, false) => (ideal(l).round() as usize).max(1),
    };
    let na = count(la, true);
    let mut nh = count(lh, false);
    let mut nv = count(lv, true);
    let mut used = 4 * na + 2 * nh + 2 * nv;
    // settle the remainder in symmetric pairs: add where panels are longest,
    // remove where they stay shortest
    let len_h = |k: usize| if k > 0 { lh / k as f64 } else { f64::INFINITY };
    let len_v = |k: usize| if k > 0 { lv / k as f64 } else { f64::INFINITY };
    while used + 2 <= n_panels {
        let grow_h = if lh > 0.0 { len_h(nh) } else { f64::NEG_INFINITY };
        let grow_v = if lv > 0.0 { len_v(nv) } else { f64::NEG_INFINITY };
        if grow_h >= grow_v {
            nh += 1;
        } else {
            nv += 1;
        }
        used += 2;
    }
    while used > n_panels + 1 {
        let after_h = if nh > 1 { len_h(nh - 1) } else { f64::INFINITY };
        let after_v = if nv > 1 { len_v(nv - 1) } else { f64::INFINITY };
        if after_h.is_infinite() && after_v.is_infinite() {
            return Err(Error::TooCoarse {
                got: n_panels,
                min: used,
            });
        }
        if after_h <= after_v {
            nh -= 1;
        } else {
            nv -= 1;
        }
        used -= 2;
    }
    // odd leftover goes to the top face, over (used > n) or under (used < n) by one
    let n_top = if used == n_panels + 1 {
        nh - 1
    } else if used + 1 == n_panels {
        nh + 1
    } else {
        nh
    };

    let pieces = [
        (Piece::Line { from: Vec2::new(-hx, -d), to: Vec2::new(hx, -d) }, nh),
        (Piece::Arc { center: Vec2::new(hx, zb), radius: r, start: -FRAC_PI_2, end: 0.0 }, na),
        (Piece::Line { from: Vec2::new(w, zb), to: Vec2::new(w, zt) }, nv),
        (Piece::Arc { center: Vec2::new(hx, zt), radius: r, start: 0.0, end: FRAC_PI_2 }, na),
        (Piece::Line { from: Vec2::new(hx, 0.0), to: Vec2::new(-hx, 0.0) }, n_top),
        (Piece::Arc { center: Vec2::new(-hx, zt), radius: r, start: FRAC_PI_2, end: PI }, na),
        (Piece::Line { from: Vec2::new(-w, zt), to: Vec2::new(-w, zb) }, nv),
        (Piece::Arc { center: Vec2::new(-hx, zb), radius: r, start: PI, end: 1.5 * PI }, na),
    ];
    let mut panels = Vec::with_capacity(n_panels);
    for (piece, count) in &pieces {
        if piece.length() > 0.0 && *count > 0 {
            piece.panels(*count, &mut panels);
        }
    }
    debug_assert_eq!(panels.len(), n_panels);
    Ok(SurfaceMesh::from_panels(panels, 0.0))
}

/// Uniform panels on a circle centred at the origin; panel k has its
/// midpoint at angle (k + ½)·2π/n.
pub fn mesh_circle(geom: &CylinderGeometry, n_panels: usize) -> Result<SurfaceMesh> {
    if n_panels < MIN_CIRCLE_PANELS {
        return Err(Error::TooCoarse {
            got: n_panels,
            min: MIN_CIRCLE_PANELS,
        });
    }
    let r = geom.radius;
    let da = 2.0 * PI * r / n_panels as f64;
    let panels = (0..n_panels)
        .map(|k| {
            let a = (k as f64 + 0.5) * 2.0 * PI / n_panels as f64;
            let n = Vec2::new(a.cos(), a.sin());
            Panel::new(n * r, n, da, Some(r))
        })
        .collect();
    Ok(SurfaceMesh::from_panels(panels, r))
}
