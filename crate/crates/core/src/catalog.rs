//! Constructors for the classified surfaces and their controls.
//!
//! The positive examples are the Hopf images of three-circle products in
//! `S⁵(1)` (the two classified radius branches at ρ = 4) and the product
//! surface in `CP³(ρ)` built by integrating its moving frame. Controls are
//! perturbed-radius tori (still pmc, no longer biharmonic), the equal-radius
//! minimal torus, totally geodesic `CP¹` and `RP²` patches, and one generic
//! non-pmc chart.

use crate::biharmonic::{solve_case_ii, CaseIIData};
use crate::calculus::jet::{vadd, vaxpy, vdot, vmul_i, vscale, vscale_f64, vsub, Cx, Jet, Ring};
use crate::calculus::{ParamMap, C64};
use crate::curves::{CurveSpec, FrameInit, TorsionClass};
use crate::error::{GeomError, Result};
use crate::surfaces::{Chart, Domain};
use std::f64::consts::PI;
use std::sync::Arc;

/// Radii of a three-circle product torus in `S⁵(1)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct TorusSpec {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub branch: Branch,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum Branch {
    Plus,
    Minus,
    Custom,
}

impl TorusSpec {
    pub fn classified(branch: Branch) -> Result<TorusSpec> {
        let s41 = 41.0_f64.sqrt();
        let (r1sq, r2sq) = match branch {
            Branch::Plus => ((9.0 + s41) / 20.0, (11.0 - s41) / 40.0),
            Branch::Minus => ((9.0 - s41) / 20.0, (11.0 + s41) / 40.0),
            Branch::Custom => {
                return Err(GeomError::Domain("custom branch needs explicit radii".into()))
            }
        };
        Ok(TorusSpec { r1: r1sq.sqrt(), r2: r2sq.sqrt(), r3: r2sq.sqrt(), branch })
    }

    pub fn radius_defect(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3 - 1.0).abs()
    }
}

/// Chart `(u, v) ↦ (r₁, r₂ e^{iu}, r₃ e^{iv})`.
///
/// The first circle's phase is removed by the Hopf action, so two angles
/// parametrize the projected surface; the lift is deliberately not
/// horizontal — downstream geometry is gauge-invariant.
struct TorusMap {
    r: [f64; 3],
}

impl ParamMap for TorusMap {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>> {
        vec![
            Cx::from_f64(self.r[0], 0.0),
            Cx::exp_i(u).scale_f64(self.r[1]),
            Cx::exp_i(v).scale_f64(self.r[2]),
        ]
    }
}

/// The classified Lagrangian torus in `CP²(4)`.
pub fn torus_cp2(branch: Branch) -> Result<Chart> {
    let spec = TorusSpec::classified(branch)?;
    Ok(torus_chart(&spec))
}

fn torus_chart(spec: &TorusSpec) -> Chart {
    Chart::new(
        Arc::new(TorusMap { r: [spec.r1, spec.r2, spec.r3] }),
        4.0,
        Domain::new((0.0, 2.0 * PI), (0.0, 2.0 * PI)),
    )
}

/// Product torus with custom squared radii (controls).
pub fn perturbed_torus(r1sq: f64, r2sq: f64, r3sq: f64) -> Result<Chart> {
    if r1sq <= 0.0 || r2sq <= 0.0 || r3sq <= 0.0 {
        return Err(GeomError::Domain("squared radii must be positive".into()));
    }
    if (r1sq + r2sq + r3sq - 1.0).abs() > 1e-12 {
        return Err(GeomError::Domain(format!(
            "squared radii must sum to 1, got {}",
            r1sq + r2sq + r3sq
        )));
    }
    let spec = TorusSpec {
        r1: r1sq.sqrt(),
        r2: r2sq.sqrt(),
        r3: r3sq.sqrt(),
        branch: Branch::Custom,
    };
    Ok(torus_chart(&spec))
}

struct ComplexLineMap;
impl ParamMap for ComplexLineMap {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>> {
        vec![Cx::from_f64(1.0, 0.0), Cx::new(u, v), Cx::zero()]
    }
}

/// Totally geodesic complex line `CP¹ ⊂ CP²(ρ)`: σ = 0, K = ρ, |cos θ| = 1.
pub fn complex_line_cp2(rho: f64) -> Chart {
    Chart::new(Arc::new(ComplexLineMap), rho, Domain::new((-1.0, 1.0), (-1.0, 1.0)))
}

struct RealPlaneMap;
impl ParamMap for RealPlaneMap {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>> {
        vec![Cx::from_f64(1.0, 0.0), Cx::new(u, Jet::ZERO), Cx::new(v, Jet::ZERO)]
    }
}

/// Totally geodesic totally real plane (real points of `CP²(ρ)`):
/// σ = 0, K = ρ/4, cos θ = 0.
pub fn real_plane_cp2(rho: f64) -> Chart {
    Chart::new(Arc::new(RealPlaneMap), rho, Domain::new((-1.0, 1.0), (-1.0, 1.0)))
}

struct GenericControlMap;
impl ParamMap for GenericControlMap {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>> {
        vec![Cx::from_f64(1.0, 0.0), Cx::new(u, v), Cx::new(u * u, Jet::ZERO)]
    }
}

/// Generic non-pmc chart `(1, u+iv, u²)`; negative control.
pub fn generic_control(rho: f64) -> Chart {
    Chart::new(Arc::new(GenericControlMap), rho, Domain::new((0.1, 0.9), (0.1, 0.9)))
}

/// Precompose a chart with a constant linear parameter change.
pub struct LinearReparamMap {
    pub inner: Arc<dyn ParamMap>,
    pub m: [[f64; 2]; 2],
}

impl ParamMap for LinearReparamMap {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>> {
        let uu = u.scale(self.m[0][0]) + v.scale(self.m[0][1]);
        let vv = u.scale(self.m[1][0]) + v.scale(self.m[1][1]);
        self.inner.eval(uu, vv)
    }
    fn eval_value(&self, u: f64, v: f64) -> Vec<C64> {
        self.inner.eval_value(
            self.m[0][0] * u + self.m[0][1] * v,
            self.m[1][0] * u + self.m[1][1] * v,
        )
    }
}

/// Reparametrize a constant-metric chart so the induced metric is the
/// identity (flat isothermal coordinates), as required by the holomorphicity
/// check of the quadratic-form coefficient.
pub fn isothermalize(chart: &Chart) -> Result<Chart> {
    let (cu, cv) = chart.domain.center();
    let fd = crate::surfaces::fundamental_data(chart, cu, cv)?;
    let m = crate::mat2::inv_sqrt_sym(fd.g)?;
    Ok(Chart::new(
        Arc::new(LinearReparamMap { inner: chart.map.clone(), m }),
        chart.rho,
        chart.domain,
    ))
}

/// Frenet data of the two classified curves: the order-4 holomorphic helix
/// and the totally real circle of curvature `√(ρ/2)`.
pub struct GammaCurves {
    pub gamma1: CurveSpec,
    pub gamma1_frame: FrameInit,
    pub gamma2: CurveSpec,
    pub gamma2_frame: FrameInit,
}

/// Curvatures `(κ₁, κ₂, κ₃)` of the order-4 helix at curvature constant ρ.
pub fn gamma1_curvatures(rho: f64) -> [f64; 3] {
    [
        (7.0 * rho / 6.0).sqrt(),
        0.5 * (5.0 * rho / 42.0).sqrt(),
        1.5 * (rho / 42.0).sqrt(),
    ]
}

/// Specs (with class tags and target torsions) for both product-surface
/// generator curves.
pub fn gamma_specs(rho: f64) -> Result<GammaCurves> {
    if rho <= 0.0 {
        return Err(GeomError::Domain(format!("rho must be positive, got {rho}")));
    }
    let k = gamma1_curvatures(rho);
    let tor = crate::curves::helix_class_torsions(k[0], k[1], k[2], TorsionClass::I3)?;
    let gamma1 = CurveSpec {
        rho,
        curvatures: k.to_vec(),
        class_tag: Some(TorsionClass::I3),
        target_torsions: Some(tor),
    };
    let gamma1_frame = crate::curves::helix_frame(&gamma1)?;
    let (gamma2, gamma2_frame) = crate::curves::circle_spec((rho / 2.0).sqrt(), 0.0, rho)?;
    Ok(GammaCurves { gamma1, gamma1_frame, gamma2, gamma2_frame })
}

// ---------------------------------------------------------------------------
// product surface in CP³(ρ) by moving-frame integration
// ---------------------------------------------------------------------------

/// Constant structure coefficients of the frame ODE, from the closed-form
/// shape operators and normal-connection coefficients.
///
/// The normal connection is derived from `∇̄J = 0` and the shape data
/// (`∇⊥E₃ = −⟨A₅·,E₁⟩E₆`, `∇⊥E₅ = (|T|/|N|)⟨A₅·,E₁⟩E₆`, ...), not read off
/// any printed table; the flow-commutativity check certifies it.
#[derive(Clone, Debug)]
pub struct FrameCoeffs {
    pub rho: f64,
    pub a3: [[f64; 2]; 2],
    pub a4: [[f64; 2]; 2],
    pub a5: [[f64; 2]; 2],
    pub t_over_n: f64,
}

impl FrameCoeffs {
    pub fn from_case(case: &CaseIIData) -> FrameCoeffs {
        FrameCoeffs {
            rho: case.rho,
            a3: case.a3,
            a4: case.a4,
            a5: case.a5,
            t_over_n: (case.t2 / case.n2).sqrt(),
        }
    }
}

/// Frame-ODE state: lift plus the six parallel frame fields, any scalar ring.
pub(crate) type FrameState<T> = [Vec<Cx<T>>; 7];

/// One RK4 stage of the frame flow along tangent direction `dir` (0 or 1).
fn frame_rhs<T: Ring>(c: &FrameCoeffs, s: &FrameState<T>, dir: usize) -> FrameState<T> {
    let rho4 = c.rho / 4.0;
    let z = &s[0];
    let e: Vec<&Vec<Cx<T>>> = (1..7).map(|i| &s[i]).collect();
    let ea = e[dir];
    let iz = vmul_i(z);
    let iea = vmul_i(ea);

    // constraint-derived sphere/Hopf correction for a frame field f:
    // f' = RHS − (ρ/4)(⟨f, E_a⟩ z + ⟨f, iE_a⟩ iz)
    let correct = |f: &Vec<Cx<T>>, rhs: Vec<Cx<T>>| -> Vec<Cx<T>> {
        let mut out = rhs;
        out = vaxpy(&out, z, vdot(f, ea).scale_f64(-rho4));
        out = vaxpy(&out, &iz, vdot(f, &iea).scale_f64(-rho4));
        out
    };

    let dim = z.len();
    let zero = || vec![Cx::<T>::zero(); dim];
    let a_mats = [&c.a3, &c.a4, &c.a5];

    // tangent fields: ∇̄_{E_a} E_b = σ(E_a, E_b) = Σ_α (A_α)_{ab} E_α
    let mut de = Vec::with_capacity(6);
    for b in 0..2 {
        let mut rhs = zero();
        for (ai, a_mat) in a_mats.iter().enumerate() {
            rhs = vaxpy(&rhs, e[2 + ai], T::from_f64(a_mat[dir][b]));
        }
        de.push(correct(e[b], rhs));
    }

    // normal fields: ∇̄_{E_a} E_α = −A_α E_a + ∇⊥_{E_a} E_α
    let a5_1a = c.a5[0][dir];
    let a5_2a = c.a5[1][dir];
    for alpha in 0..4 {
        let mut rhs = zero();
        if alpha < 3 {
            let a_mat = a_mats[alpha];
            for b in 0..2 {
                rhs = vaxpy(&rhs, e[b], T::from_f64(-a_mat[b][dir]));
            }
        }
        match alpha {
            // E₃
            0 => rhs = vaxpy(&rhs, e[5], T::from_f64(-a5_1a)),
            // E₄
            1 => rhs = vaxpy(&rhs, e[5], T::from_f64(-a5_2a)),
            // E₅
            2 => rhs = vaxpy(&rhs, e[5], T::from_f64(c.t_over_n * a5_1a)),
            // E₆
            _ => {
                rhs = vaxpy(&rhs, e[2], T::from_f64(a5_1a));
                rhs = vaxpy(&rhs, e[3], T::from_f64(a5_2a));
                rhs = vaxpy(&rhs, e[4], T::from_f64(-c.t_over_n * a5_1a));
            }
        }
        de.push(correct(e[2 + alpha], rhs));
    }

    // z' = E_a
    [
        ea.clone(),
        de.remove(0),
        de.remove(0),
        de.remove(0),
        de.remove(0),
        de.remove(0),
        de.remove(0),
    ]
}

fn state_axpy<T: Ring>(y: &FrameState<T>, x: &FrameState<T>, s: T) -> FrameState<T> {
    std::array::from_fn(|i| vaxpy(&y[i], &x[i], s))
}

/// RK4 flow of the frame system along `dir` by parameter `h` (ring scalar),
/// taking `n` equal steps.
pub(crate) fn frame_flow<T: Ring>(
    c: &FrameCoeffs,
    state: &FrameState<T>,
    dir: usize,
    h: T,
    n: usize,
) -> FrameState<T> {
    let mut y = state.clone();
    let step = h.scale_f64(1.0 / n as f64);
    for _ in 0..n {
        let k1 = frame_rhs(c, &y, dir);
        let y2 = state_axpy(&y, &k1, step.scale_f64(0.5));
        let k2 = frame_rhs(c, &y2, dir);
        let y3 = state_axpy(&y, &k2, step.scale_f64(0.5));
        let k3 = frame_rhs(c, &y3, dir);
        let y4 = state_axpy(&y, &k3, step);
        let k4 = frame_rhs(c, &y4, dir);
        let mut inc = state_axpy(&y, &k1, step.scale_f64(1.0 / 6.0));
        inc = state_axpy(&inc, &k2, step.scale_f64(1.0 / 3.0));
        inc = state_axpy(&inc, &k3, step.scale_f64(1.0 / 3.0));
        inc = state_axpy(&inc, &k4, step.scale_f64(1.0 / 6.0));
        y = inc;
    }
    y
}

fn initial_state(rho: f64) -> FrameState<f64> {
    let dim = 4;
    let basis = |k: usize| -> Vec<Cx<f64>> {
        (0..dim).map(|i| Cx::from_f64(if i == k { 1.0 } else { 0.0 }, 0.0)).collect()
    };
    let z0 = vscale_f64(&basis(0), 2.0 / rho.sqrt());
    let e1 = basis(1);
    let e2 = basis(2);
    let e3 = vmul_i(&e1);
    let e4 = vmul_i(&e2);
    let e6 = basis(3);
    let e5 = vmul_i(&e6);
    [z0, e1, e2, e3, e4, e5, e6]
}

/// Sampled chart of the product surface: evaluation re-integrates the frame
/// ODE from the nearest precomputed grid state, in jet arithmetic when
/// derivatives are requested. (Cubic-interpolation error would swamp third
/// derivatives; re-integration keeps them exact for the discrete flow.)
pub struct CaseIiiMap {
    coeffs: FrameCoeffs,
    cell: f64,
    steps_per_cell: usize,
    nu: usize,
    nv: usize,
    /// `grid[i][j]`: state at `(u_i, v_j)`, built v-first then u
    grid: Vec<Vec<FrameState<f64>>>,
}

impl CaseIiiMap {
    fn locate(&self, x: f64, n: usize) -> usize {
        let i = (x / self.cell).floor();
        (i.max(0.0) as usize).min(n - 1)
    }

    fn state_at(&self, u: f64, v: f64) -> (usize, usize, f64, f64) {
        let i = self.locate(u, self.nu);
        let j = self.locate(v, self.nv);
        (i, j, u - i as f64 * self.cell, v - j as f64 * self.cell)
    }

    /// Plain-f64 state at `(u, v)` (positions and frames).
    pub fn full_state(&self, u: f64, v: f64) -> FrameState<f64> {
        let (i, j, du, dv) = self.state_at(u, v);
        let s = frame_flow(&self.coeffs, &self.grid[i][j], 1, dv, self.steps_per_cell);
        frame_flow(&self.coeffs, &s, 0, du, self.steps_per_cell)
    }
}

impl ParamMap for CaseIiiMap {
    fn dim(&self) -> usize {
        4
    }

    fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>> {
        let (i, j, _, _) = self.state_at(u.value(), v.value());
        let base = &self.grid[i][j];
        let lift: FrameState<Jet> = std::array::from_fn(|k| {
            base[k]
                .iter()
                .map(|c| Cx::new(Jet::constant(c.re), Jet::constant(c.im)))
                .collect()
        });
        let du = u - Jet::constant(i as f64 * self.cell);
        let dv = v - Jet::constant(j as f64 * self.cell);
        let s = frame_flow(&self.coeffs, &lift, 1, dv, self.steps_per_cell);
        let s = frame_flow(&self.coeffs, &s, 0, du, self.steps_per_cell);
        s[0].clone()
    }

    fn eval_value(&self, u: f64, v: f64) -> Vec<C64> {
        self.full_state(u, v)[0].iter().map(|c| c.value()).collect()
    }
}

/// Defect of flow commutativity (u-then-v vs v-then-u to the same corner).
pub fn flow_commutativity_defect(map: &CaseIiiMap, u: f64, v: f64) -> f64 {
    let c = &map.coeffs;
    let n = ((u.abs().max(v.abs()) / map.cell).ceil() as usize).max(1) * map.steps_per_cell;
    let s0 = &map.grid[0][0];
    let a = frame_flow(c, &frame_flow(c, s0, 0, u, n), 1, v, n);
    let b = frame_flow(c, &frame_flow(c, s0, 1, v, n), 0, u, n);
    let mut worst: f64 = 0.0;
    for k in 0..7 {
        let d: f64 = a[k]
            .iter()
            .zip(&b[k])
            .map(|(x, y)| {
                let dr = x.re - y.re;
                let di = x.im - y.im;
                dr * dr + di * di
            })
            .sum();
        worst = worst.max(d.sqrt());
    }
    worst
}

/// Build the flat product surface `γ₁ × γ₂ ⊂ CP³(ρ)` from its moving frame.
///
/// Integrates the construction grid at the given step, then checks that the
/// two coordinate flows commute; a defect above `1e-4` signals wrong
/// connection coefficients and aborts.
pub fn case_iii_surface(rho: f64, step: f64, extent: f64) -> Result<Chart> {
    if rho <= 0.0 {
        return Err(GeomError::Domain(format!("rho must be positive, got {rho}")));
    }
    if step <= 0.0 || extent <= 0.0 {
        return Err(GeomError::Domain("step and extent must be positive".into()));
    }
    let case = solve_case_ii(rho)?;
    let coeffs = FrameCoeffs::from_case(&case);

    let cell: f64 = 0.25_f64.min(extent);
    let steps_per_cell = ((cell / step).ceil() as usize).max(1);
    let n_cells = (extent / cell).ceil() as usize;

    let s0 = initial_state(rho);
    // v-spine from the origin, then each u-row from the spine, so that
    // grid[i][j] = flow_u(u_i) ∘ flow_v(v_j) applied to the initial state.
    let mut spine = Vec::with_capacity(n_cells);
    spine.push(s0);
    for j in 1..n_cells {
        let prev = &spine[j - 1];
        spine.push(frame_flow(&coeffs, prev, 1, cell, steps_per_cell));
    }
    let mut grid: Vec<Vec<FrameState<f64>>> = Vec::with_capacity(n_cells);
    grid.push(spine);
    for i in 1..n_cells {
        let row: Vec<FrameState<f64>> = grid[i - 1]
            .iter()
            .map(|s| frame_flow(&coeffs, s, 0, cell, steps_per_cell))
            .collect();
        grid.push(row);
    }

    let map = CaseIiiMap { coeffs, cell, steps_per_cell, nu: n_cells, nv: n_cells, grid };

    let probe = extent.min(1.0);
    let defect = flow_commutativity_defect(&map, probe, probe);
    if defect > 1e-4 {
        return Err(GeomError::Integrability { defect, limit: 1e-4 });
    }

    Ok(Chart::new(Arc::new(map), rho, Domain::new((0.0, extent), (0.0, extent))))
}

/// Estimate one period of the circle factor by probing for a state return,
/// capped at `cap`; used to pick a default integration extent.
pub fn circle_period_estimate(rho: f64, cap: f64) -> f64 {
    let case = match solve_case_ii(rho) {
        Ok(c) => c,
        Err(_) => return cap,
    };
    let coeffs = FrameCoeffs::from_case(&case);
    let s0 = initial_state(rho);
    let step = 1e-2;
    let mut s = s0.clone();
    let mut t = 0.0;
    while t < cap {
        s = frame_flow(&coeffs, &s, 1, step, 1);
        t += step;
        if t > 0.5 {
            let d: f64 = s[0]
                .iter()
                .zip(&s0[0])
                .map(|(x, y)| {
                    let dr = x.re - y.re;
                    let di = x.im - y.im;
                    dr * dr + di * di
                })
                .sum::<f64>()
                .sqrt();
            if d < 1e-3 {
                return t;
            }
        }
    }
    cap
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classified_radii_lie_on_sphere() {
        for branch in [Branch::Plus, Branch::Minus] {
            let spec = TorusSpec::classified(branch).unwrap();
            assert!(spec.radius_defect() < 1e-15, "defect {}", spec.radius_defect());
        }
    }

    #[test]
    fn perturbed_torus_validates_radii() {
        assert!(perturbed_torus(0.5, 0.25, 0.25).is_ok());
        assert!(perturbed_torus(0.5, 0.3, 0.25).is_err());
        assert!(perturbed_torus(-0.1, 0.6, 0.5).is_err());
    }
}
