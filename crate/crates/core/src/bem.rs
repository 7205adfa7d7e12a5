//! Boundary elements for a Meissner-state wire of finite cross-section.
//!
//! Outside the conductor the field is written as B = −∇ψ + ∇×(A ŷ). The
//! scalar potential ψ screens the bias (∂ψ/∂n = 0 on the surface), the vector
//! potential A carries the transport current (A constant on the surface).
//! Both are represented through Green's identity with G = −(1/2π) log r and
//! collocated at panel midpoints.
//!
//! The solution is stored as responses to a unit bias along x, a unit bias
//! along z, and the transport current, so any bias can be superposed later
//! without solving again.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{SurfaceMesh, Vec2};
use crate::physics::MU0;

/// Field evaluation is refused closer than this many shortest panel lengths.
pub const NEAR_SURFACE_CUTOFF: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct BemProblem {
    pub mesh: SurfaceMesh,
    pub bias: Vec2,
    pub current: f64,
}

impl BemProblem {
    pub fn new(mesh: SurfaceMesh, bias: Vec2, current: f64) -> Self {
        Self { mesh, bias, current }
    }
}

/// Dense collocation system `matrix · x = rhs` (one column of `rhs` per load).
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DMatrix<f64>,
}

/// Diagonal coefficient of the scalar system, 1/2 + dφ/4π.
pub fn curvature_self_term(da: f64, curvature_radius: Option<f64>) -> f64 {
    0.5 + curvature_radius.map_or(0.0, |rc| da / rc) / (4.0 * PI)
}

/// Integral of −G over a straight panel of length `da` around its own
/// midpoint, with logarithms taken relative to `length_scale`:
/// (da/2π)(1 − log(da/(2L))).
pub fn log_self_term(da: f64, length_scale: f64) -> f64 {
    da / (2.0 * PI) * (1.0 - (da / (2.0 * length_scale)).ln())
}

fn build_rows<F>(n: usize, row: F) -> DMatrix<f64>
where
    F: Fn(usize) -> Vec<f64> + Sync + Send,
{
    let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(row).collect();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// Scalar-potential system for the two unit bias loads (columns: x, z):
/// (1/2 + dφ_i/4π) ψ_i − Σ_{j≠i} ∂G/∂n_j(x_i, x_j) da_j ψ_j = −x_i·b.
pub fn assemble_scalar(mesh: &SurfaceMesh) -> LinearSystem {
    let panels = mesh.panels();
    let n = panels.len();
    let matrix = build_rows(n, |i| {
        let xi = panels[i].midpoint;
        panels
            .iter()
            .enumerate()
            .map(|(j, pj)| {
                if i == j {
                    curvature_self_term(pj.length, pj.curvature_radius)
                } else {
                    let d = xi - pj.midpoint;
                    -d.dot(&pj.normal) / (2.0 * PI * d.norm_squared()) * pj.length
                }
            })
            .collect()
    });
    let rhs = DMatrix::from_fn(n, 2, |i, k| -panels[i].midpoint[k]);
    LinearSystem { matrix, rhs }
}

/// Vector-potential system for ∂A/∂n with A0 = 1 on the surface:
/// −Σ_j Ĝ_ij q_j = 1, where Ĝ_ij = −(1/2π) log(r_ij/L) da_j and the diagonal
/// is the integrated logarithmic singularity. L is the perimeter.
pub fn assemble_vector(mesh: &SurfaceMesh) -> LinearSystem {
    let panels = mesh.panels();
    let n = panels.len();
    let scale = mesh.perimeter();
    let matrix = build_rows(n, |i| {
        let xi = panels[i].midpoint;
        panels
            .iter()
            .enumerate()
            .map(|(j, pj)| {
                if i == j {
                    -log_self_term(pj.length, scale)
                } else {
                    let r = (xi - pj.midpoint).norm();
                    (r / scale).ln() / (2.0 * PI) * pj.length
                }
            })
            .collect()
    });
    LinearSystem {
        matrix,
        rhs: DMatrix::from_element(n, 1, 1.0),
    }
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves by LU and reports the reciprocal 1-norm condition number.
fn solve_dense(sys: &LinearSystem) -> Result<(DMatrix<f64>, f64)> {
    let lu = sys.matrix.clone().lu();
    let inv = lu.try_inverse().ok_or(Error::SingularSystem { rcond: 0.0 })?;
    let rcond = 1.0 / (one_norm(&sys.matrix) * one_norm(&inv));
    if !(rcond > 1e3 * f64::EPSILON) {
        return Err(Error::SingularSystem { rcond });
    }
    Ok((inv * &sys.rhs, rcond))
}

#[derive(Debug)]
struct Responses {
    mesh: SurfaceMesh,
    psi_x: Vec<f64>,
    psi_z: Vec<f64>,
    /// ∂A/∂n for A0 = 1.
    dadn_unit: Vec<f64>,
    /// −∮ ∂A/∂n da for A0 = 1, equal to μ0 times the unscaled current.
    unit_flux: f64,
    rcond: f64,
}

/// Solved boundary densities for a given mesh, bias and current.
#[derive(Debug, Clone)]
pub struct BemSolution {
    inner: Arc<Responses>,
    bias: Vec2,
    current: f64,
}

/// Solves both subsystems. Cost is dominated by one O(N³) factorisation each.
pub fn solve(problem: &BemProblem) -> Result<BemSolution> {
    let mesh = &problem.mesh;
    let (psi, rc_s) = solve_dense(&assemble_scalar(mesh))?;
    let (q, rc_v) = solve_dense(&assemble_vector(mesh))?;
    let dadn_unit: Vec<f64> = q.column(0).iter().copied().collect();
    let unit_flux = -mesh.panels().iter().zip(&dadn_unit).map(|(p, q)| q * p.length).sum::<f64>();
    if !(unit_flux.abs() > 0.0) {
        return Err(Error::SingularSystem { rcond: rc_v });
    }
    Ok(BemSolution {
        inner: Arc::new(Responses {
            mesh: mesh.clone(),
            psi_x: psi.column(0).iter().copied().collect(),
            psi_z: psi.column(1).iter().copied().collect(),
            dadn_unit,
            unit_flux,
            rcond: rc_s.min(rc_v),
        }),
        bias: problem.bias,
        current: problem.current,
    })
}

/// Induced fields per unit load at one point, excluding the applied bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldResponse {
    /// Screening field per tesla of bias along x.
    pub per_bias_x: Vec2,
    /// Screening field per tesla of bias along z.
    pub per_bias_z: Vec2,
    /// Field of the transport current for A0 = 1.
    pub unit_current: Vec2,
}

const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

/// Lagrange basis through `nodes` evaluated at `s`.
fn lagrange<const M: usize>(nodes: &[f64; M], s: f64) -> [f64; M] {
    let mut out = [1.0; M];
    for k in 0..M {
        for m in 0..M {
            if m != k {
                out[k] *= (s - nodes[m]) / (nodes[k] - nodes[m]);
            }
        }
    }
    out
}

/// Derivative of the Lagrange basis through `nodes` at `s`.
fn lagrange_derivative<const M: usize>(nodes: &[f64; M], s: f64) -> [f64; M] {
    let mut out = [0.0; M];
    for k in 0..M {
        for m in 0..M {
            if m == k {
                continue;
            }
            let mut term = 1.0 / (nodes[k] - nodes[m]);
            for l in 0..M {
                if l != k && l != m {
                    term *= (s - nodes[l]) / (nodes[k] - nodes[l]);
                }
            }
            out[k] += term;
        }
    }
    out
}

impl BemSolution {
    pub fn mesh(&self) -> &SurfaceMesh {
        &self.inner.mesh
    }

    pub fn bias(&self) -> Vec2 {
        self.bias
    }

    pub fn current(&self) -> f64 {
        self.current
    }

    /// Same solved densities with a different bias and current.
    pub fn with_loads(&self, bias: Vec2, current: f64) -> Self {
        Self {
            inner: Arc::clone(&self.inner),
            bias,
            current,
        }
    }

    /// Reciprocal condition estimate of the worse of the two systems.
    pub fn rcond(&self) -> f64 {
        self.inner.rcond
    }

    /// ψ on the panels for the present bias (T·m).
    pub fn psi_surface(&self) -> Vec<f64> {
        let r = &self.inner;
        r.psi_x.iter().zip(&r.psi_z).map(|(a, b)| self.bias.x * a + self.bias.y * b).collect()
    }

    /// ∂A/∂n on the panels before rescaling (A0 = 1).
    pub fn dadn_surface(&self) -> &[f64] {
        &self.inner.dadn_unit
    }

    /// Factor taking the A0 = 1 solution to the requested current,
    /// μ0 I / (−∮ ∂A/∂n da).
    pub fn current_scale(&self) -> f64 {
        MU0 * self.current / self.inner.unit_flux
    }

    /// Surface value of A after rescaling.
    pub fn a0(&self) -> f64 {
        self.current_scale()
    }

    /// −∮ ∂A/∂n da / μ0 after rescaling.
    pub fn enclosed_current(&self) -> f64 {
        let s = self.current_scale();
        -self
            .mesh()
            .panels()
            .iter()
            .zip(self.dadn_surface())
            .map(|(p, q)| s * q * p.length)
            .sum::<f64>()
            / MU0
    }

    /// Periodic neighbour index and arclength offset relative to panel `j`.
    fn neighbour(&self, j: usize, k: isize) -> (usize, f64) {
        let panels = self.mesh().panels();
        let n = panels.len() as isize;
        let idx = (j as isize + k).rem_euclid(n) as usize;
        let mut off = panels[idx].arclength - panels[j].arclength;
        let per = self.mesh().perimeter();
        if k > 0 && off < 0.0 {
            off += per;
        } else if k < 0 && off > 0.0 {
            off -= per;
        }
        (idx, off)
    }

    fn check_point(&self, p: Vec2) -> Result<()> {
        let (dist, outside) = self.mesh().distance_and_side(p);
        if !outside {
            return Err(Error::InsideConductor { x: p.x, z: p.y });
        }
        let cutoff = NEAR_SURFACE_CUTOFF * self.mesh().min_panel_length();
        if dist < cutoff {
            return Err(Error::TooCloseToSurface {
                x: p.x,
                z: p.y,
                distance: dist,
                cutoff,
            });
        }
        Ok(())
    }

    /// Induced field per unit load at `p`.
    ///
    /// Each panel is integrated on its exact straight or circular shape with
    /// the densities interpolated by cubic Lagrange polynomials through the
    /// neighbouring collocation values; panels near `p` are subdivided.
    pub fn response(&self, p: Vec2) -> Result<FieldResponse> {
        self.check_point(p)?;
        Ok(self.response_unchecked(p))
    }

    fn response_unchecked(&self, p: Vec2) -> FieldResponse {
        let r = &self.inner;
        let panels = r.mesh.panels();
        // accumulators: ∇ψ for the two bias loads and ∇A for the current
        let mut gx = Vec2::zeros();
        let mut gz = Vec2::zeros();
        let mut ga = Vec2::zeros();
        for (j, pan) in panels.iter().enumerate() {
            let da = pan.length;
            let gap = ((p - pan.midpoint).norm() - 0.5 * da).max(1e-300);
            let near = gap < 6.0 * da;
            let nsub = if near { ((3.0 * da / gap).ceil() as usize).clamp(1, 512) } else { 1 };
            let rule: &[(f64, f64)] = if near { &GL8 } else { &GL4 };
            // stencils on either side of the midpoint
            let stencil = |ks: [isize; 4]| {
                let mut nodes = [0.0; 4];
                let mut idx = [0usize; 4];
                for (m, k) in ks.iter().enumerate() {
                    let (i, off) = self.neighbour(j, *k);
                    idx[m] = i;
                    nodes[m] = off;
                }
                (nodes, idx)
            };
            let ahead = stencil([-1, 0, 1, 2]);
            let behind = stencil([-2, -1, 0, 1]);
            let h = da / nsub as f64;
            for sub in 0..nsub {
                let c = -0.5 * da + (sub as f64 + 0.5) * h;
                for &(xg, wg) in rule {
                    let s = c + 0.5 * h * xg;
                    let weight = 0.5 * h * wg;
                    let (nodes, idx) = if s >= 0.0 { &ahead } else { &behind };
                    let l = lagrange(nodes, s);
                    let (mut px, mut pz, mut qa) = (0.0, 0.0, 0.0);
                    for m in 0..4 {
                        px += l[m] * r.psi_x[idx[m]];
                        pz += l[m] * r.psi_z[idx[m]];
                        qa += l[m] * r.dadn_unit[idx[m]];
                    }
                    let (x, nrm) = pan.point_at(s);
                    let d = p - x;
                    let r2 = d.norm_squared();
                    let dn = d.dot(&nrm);
                    let kd = (nrm / r2 - d * (2.0 * dn / (r2 * r2))) * weight;
                    gx += kd * px;
                    gz += kd * pz;
                    ga += d * (qa * weight / r2);
                }
            }
        }
        let k = 1.0 / (2.0 * PI);
        FieldResponse {
            per_bias_x: -gx * k,
            per_bias_z: -gz * k,
            unit_current: Vec2::new(-ga.y, ga.x) * k,
        }
    }

    /// Total field (bias, screening and current) for arbitrary loads.
    pub fn field_with(&self, p: Vec2, bias: Vec2, current: f64) -> Result<Vec2> {
        let r = self.response(p)?;
        Ok(combine(&r, bias, MU0 * current / self.inner.unit_flux))
    }

    /// Total field for the solution's own bias and current.
    pub fn evaluate_field(&self, p: Vec2) -> Result<Vec2> {
        self.field_with(p, self.bias, self.current)
    }

    /// Fields at many points, evaluated in parallel.
    pub fn evaluate_many(&self, points: &[Vec2]) -> Vec<Result<Vec2>> {
        points.par_iter().map(|&p| self.evaluate_field(p)).collect()
    }

    /// Tangential derivative of a panel density at panel `i` (five-point stencil).
    fn tangential_derivative(&self, values: &[f64], i: usize) -> f64 {
        let mut nodes = [0.0; 5];
        let mut vals = [0.0; 5];
        for (m, k) in (-2..=2).enumerate() {
            let (idx, off) = self.neighbour(i, k);
            nodes[m] = off;
            vals[m] = values[idx];
        }
        let w = lagrange_derivative(&nodes, 0.0);
        w.iter().zip(&vals).map(|(a, b)| a * b).sum()
    }

    /// Tangential field on each panel, B_t = −∂ψ/∂t + ∂A/∂n, for given loads.
    pub fn tangential_field_with(&self, bias: Vec2, current: f64) -> Vec<f64> {
        let r = &self.inner;
        let psi: Vec<f64> = r.psi_x.iter().zip(&r.psi_z).map(|(a, b)| bias.x * a + bias.y * b).collect();
        let scale = MU0 * current / r.unit_flux;
        (0..psi.len())
            .map(|i| {
                // ψ includes the applied part −x·b, whose tangential derivative is −t·b
                let t = r.mesh.panels()[i].tangent;
                let dpsi = self.tangential_derivative(&psi, i) - t.dot(&bias);
                -dpsi + scale * r.dadn_unit[i]
            })
            .collect()
    }

    /// Sheet current on each panel (A/m, positive along +y), −B_t/μ0.
    pub fn surface_current(&self) -> Vec<f64> {
        self.tangential_field_with(self.bias, self.current).iter().map(|b| -b / MU0).collect()
    }

    /// Largest |B| on the surface for given loads.
    pub fn max_surface_field_with(&self, bias: Vec2, current: f64) -> f64 {
        self.tangential_field_with(bias, current).iter().fold(0.0, |m, b| m.max(b.abs()))
    }

    /// RMS of n·B over RMS of t·B, sampled `offset` panel lengths outside each
    /// panel midpoint.
    pub fn boundary_residual(&self, offset: f64) -> f64 {
        let panels = self.mesh().panels();
        let scale = self.current_scale();
        let sums: Vec<(f64, f64)> = panels
            .par_iter()
            .map(|pan| {
                let p = pan.midpoint + pan.normal * (offset * pan.length);
                let b = combine(&self.response_unchecked(p), self.bias, scale);
                (b.dot(&pan.normal).powi(2), b.dot(&pan.tangent).powi(2))
            })
            .collect();
        let (nn, tt) = sums.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        (nn / tt).sqrt()
    }

    /// Area enclosed by the mesh, ½∮ x·n da.
    pub fn cross_section_area(&self) -> f64 {
        0.5 * self.mesh().panels().iter().map(|p| p.midpoint.dot(&p.normal) * p.length).sum::<f64>()
    }
}

fn combine(r: &FieldResponse, bias: Vec2, current_scale: f64) -> Vec2 {
    bias + r.per_bias_x * bias.x + r.per_bias_z * bias.y + r.unit_current * current_scale
}

/// Convenience: panel table for CSV export (index, arclength, ψ, ∂A/∂n scaled, sheet current).
pub fn surface_table(sol: &BemSolution) -> Vec<(usize, f64, f64, f64, f64)> {
    let psi = sol.psi_surface();
    let k = sol.surface_current();
    let s = sol.current_scale();
    sol.mesh()
        .panels()
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.arclength, psi[i], s * sol.dadn_surface()[i], k[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::{line_current_field, screened_uniform_field};
    use crate::geometry::{mesh_circle, mesh_rounded_rectangle, CylinderGeometry, StripGeometry};
    use crate::sheet::{on_axis_meissner, screened_vertical_field};

    fn circle(n: usize) -> SurfaceMesh {
        mesh_circle(&CylinderGeometry::new(1.0).unwrap(), n).unwrap()
    }

    fn exact_cylinder(bias: Vec2, current: f64, p: Vec2) -> Vec2 {
        screened_uniform_field(1.0, Vec2::zeros(), bias, p) + line_current_field(current, Vec2::zeros(), p)
    }

    fn max_cylinder_error(n: usize, bias: Vec2, current: f64) -> f64 {
        let sol = solve(&BemProblem::new(circle(n), bias, current)).unwrap();
        let mut err: f64 = 0.0;
        for r in [1.1, 1.5, 2.0, 5.0, 10.0] {
            for k in 0..12 {
                let th = k as f64 * PI / 6.0 + 0.1;
                let p = Vec2::new(r * th.sin(), r * th.cos());
                let e = exact_cylinder(bias, current, p);
                let b = sol.evaluate_field(p).unwrap();
                err = err.max((b - e).norm() / e.norm());
            }
        }
        err
    }

    #[test]
    fn self_terms() {
        assert_eq!(curvature_self_term(0.3, None), 0.5);
        let n = 64.0;
        let da = 2.0 * PI / n;
        assert!((curvature_self_term(da, Some(1.0)) - (0.5 + 1.0 / (2.0 * n))).abs() < 1e-15);
        assert!((log_self_term(0.01, 1.0) - 0.010024).abs() < 5e-7);
    }

    #[test]
    fn cylinder_oracle_and_convergence() {
        let unit = MU0 / (2.0 * PI);
        let bias = Vec2::new(-0.3 * unit, 0.0);
        for (bias, current) in [(bias, 0.0), (bias, 1.0)] {
            let errs: Vec<f64> = [64, 128, 256, 512].iter().map(|&n| max_cylinder_error(n, bias, current)).collect();
            assert!(errs[2] < 0.01, "{errs:?}");
            assert!(errs.windows(2).all(|e| e[1] < e[0]), "{errs:?}");
        }
        // a uniform density is reproduced exactly, leaving only roundoff
        for n in [64, 512] {
            assert!(max_cylinder_error(n, Vec2::zeros(), 1.0) < 1e-10);
        }
    }

    #[test]
    fn circle_current_density_is_uniform() {
        let sol = solve(&BemProblem::new(circle(64), Vec2::zeros(), 1.0)).unwrap();
        let q = sol.dadn_surface();
        let mean = q.iter().sum::<f64>() / q.len() as f64;
        let spread = q.iter().fold(0.0f64, |m, v| m.max((v - mean).abs())) / mean.abs();
        assert!(spread < 1e-6);
        assert!((sol.enclosed_current() - 1.0).abs() < 1e-12);
        let k: f64 = sol.surface_current().iter().zip(sol.mesh().panels()).map(|(k, p)| k * p.length).sum();
        assert!((k - 1.0).abs() < 1e-6, "{k}");
    }

    #[test]
    fn linearity_and_zero_bias() {
        let b = Vec2::new(1e-4, 3e-5);
        let s1 = solve(&BemProblem::new(circle(64), b, 0.5)).unwrap();
        let s2 = s1.with_loads(2.0 * b, 1.0);
        for (a, c) in s1.psi_surface().iter().zip(s2.psi_surface()) {
            assert_eq!(2.0 * a, c);
        }
        assert_eq!(2.0 * s1.current_scale(), s2.current_scale());
        let s0 = s1.with_loads(Vec2::zeros(), 0.5);
        assert!(s0.psi_surface().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn superposition() {
        let b = Vec2::new(-2e-4, 5e-5);
        let sol = solve(&BemProblem::new(circle(128), b, 0.7)).unwrap();
        let p = Vec2::new(0.3, 1.7);
        let both = sol.evaluate_field(p).unwrap();
        let bias_only = sol.field_with(p, b, 0.0).unwrap();
        let cur_only = sol.field_with(p, Vec2::zeros(), 0.7).unwrap();
        assert!((both - bias_only - cur_only).norm() < 1e-12 * both.norm());
    }

    #[test]
    fn near_surface_and_interior_rejected() {
        let sol = solve(&BemProblem::new(circle(64), Vec2::zeros(), 1.0)).unwrap();
        let da = 2.0 * PI / 64.0;
        assert!(matches!(sol.evaluate_field(Vec2::new(0.0, 1.0 + 0.01 * da)), Err(Error::TooCloseToSurface { .. })));
        assert!(matches!(sol.evaluate_field(Vec2::new(0.0, 0.5)), Err(Error::InsideConductor { .. })));
    }

    #[test]
    fn boundary_residual_matches_exact_field() {
        // off the surface n·B is physical: for the cylinder it is the exact
        // B_r at r = 1 + δ, so the measured residual must reproduce it
        let b0 = 1e-4;
        for n in [64, 256] {
            let sol = solve(&BemProblem::new(circle(n), Vec2::new(b0, 0.0), 0.0)).unwrap();
            let (mut nn, mut tt) = (0.0, 0.0);
            for p in sol.mesh().panels() {
                let x = p.midpoint + p.normal * (0.5 * p.length);
                let e = exact_cylinder(Vec2::new(b0, 0.0), 0.0, x);
                nn += e.dot(&p.normal).powi(2);
                tt += e.dot(&p.tangent).powi(2);
            }
            let exact = (nn / tt).sqrt();
            let got = sol.boundary_residual(0.5);
            assert!((got - exact).abs() < 1e-4 * exact, "{got} vs {exact}");
        }
    }

    #[test]
    fn thin_strip_matches_sheet_limits() {
        let g = StripGeometry::new(1.0, 0.02, 0.01).unwrap();
        let mesh = mesh_rounded_rectangle(&g, 600).unwrap();
        let sol = solve(&BemProblem::new(mesh, Vec2::new(0.0, 1e-4), 0.0)).unwrap();
        for z in [0.3, 1.0, 2.0] {
            let b = sol.evaluate_field(Vec2::new(0.0, z)).unwrap();
            let thin = screened_vertical_field(1e-4, 1.0, 0.0, z);
            assert!((b.y - thin.y).abs() / thin.y < 0.02, "z = {z}: {} vs {}", b.y, thin.y);
        }
        let sol = sol.with_loads(Vec2::zeros(), 1.0);
        let b = sol.evaluate_field(Vec2::new(0.0, 1.0)).unwrap();
        let eq = on_axis_meissner(1.0, 1.0, 1.0);
        assert!((b.x - eq).abs() / eq < 0.03, "{} vs {eq}", b.x);
    }

    #[test]
    fn thick_strip_stays_close_to_thin_field() {
        let g = StripGeometry::new(1.0, 0.08, 0.031).unwrap();
        let sol = solve(&BemProblem::new(mesh_rounded_rectangle(&g, 420).unwrap(), Vec2::zeros(), 1.0)).unwrap();
        for z in [0.5, 1.0, 2.0, 4.0] {
            let b = sol.evaluate_field(Vec2::new(0.0, z)).unwrap().norm();
            let eq = on_axis_meissner(1.0, 1.0, z);
            assert!((b - eq).abs() / eq < 0.05, "z = {z}: {b} vs {eq}");
        }
    }

    #[test]
    fn horizontal_bias_currents_oppose_on_faces() {
        let g = StripGeometry::new(1.0, 0.08, 0.031).unwrap();
        let mesh = mesh_rounded_rectangle(&g, 240).unwrap();
        let sol = solve(&BemProblem::new(mesh, Vec2::new(1e-4, 0.0), 0.0)).unwrap();
        let k = sol.surface_current();
        let panels = sol.mesh().panels();
        let top: f64 = panels.iter().zip(&k).filter(|(p, _)| p.normal.y > 0.99).map(|(p, k)| k * p.length).sum();
        let bottom: f64 = panels.iter().zip(&k).filter(|(p, _)| p.normal.y < -0.99).map(|(p, k)| k * p.length).sum();
        assert!(top * bottom < 0.0);
        let total: f64 = panels.iter().zip(&k).map(|(p, k)| k * p.length).sum();
        assert!(total.abs() < 1e-6 * top.abs());
    }

    #[test]
    fn lagrange_helpers() {
        let nodes = [-1.0, 0.0, 1.5, 2.0];
        let l = lagrange(&nodes, 0.7);
        let f = |x: f64| x * x * x - x + 2.0;
        let v: f64 = l.iter().zip(nodes).map(|(a, x)| a * f(x)).sum();
        assert!((v - f(0.7)).abs() < 1e-13);
        let d = lagrange_derivative(&nodes, 0.0);
        let dv: f64 = d.iter().zip(nodes).map(|(a, x)| a * f(x)).sum();
        assert!((dv + 1.0).abs() < 1e-13);
    }
}
