//! Pointwise geometry of an immersed surface in `CP^n(ρ)` from a chart.
//!
//! A [`Chart`] supplies an arbitrary lift `f(u,v)` into `C^{n+1}` — neither
//! normalized nor horizontal. Everything here is computed gauge-invariantly:
//! the lift is rescaled onto the sphere, tangent vectors are projected onto
//! the horizontal distribution, and ambient covariant derivatives are taken
//! with the flat derivative corrected by the Hopf connection form
//! `ω_a = (ρ/4)⟨∂_a ẑ, iẑ⟩` and then projected horizontally:
//!
//! ```text
//! ∇̄_{∂_a} W  =  P_ẑ( ∂_a W − i ω_a W )
//! ```
//!
//! The sphere radial correction lies along `ẑ` and dies under `P_ẑ`, and a
//! phase change of the lift shifts `ω` so that the combination is invariant;
//! `gauge_invariance_check` certifies this numerically.

use crate::ambient::ComplexVector;
use crate::calculus::jet::{vadd, vaxpy, vdot, vmul_i, vscale, vscale_f64, vsub, Cx, Jet};
use crate::calculus::{ParamMap, ScalarMap, C64};
use crate::error::{GeomError, Result};
use std::sync::Arc;

/// Rectangular parameter domain.
#[derive(Clone, Copy, Debug)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Domain {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Domain { u, v }
    }

    /// `n × n` sample points at cell centers, row-major, deterministic order.
    pub fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let fu = (i as f64 + 0.5) / n as f64;
                let fv = (j as f64 + 0.5) / n as f64;
                pts.push((
                    self.u.0 + fu * (self.u.1 - self.u.0),
                    self.v.0 + fv * (self.v.1 - self.v.0),
                ));
            }
        }
        pts
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u.0 + self.u.1), 0.5 * (self.v.0 + self.v.1))
    }
}

/// A parametrized surface patch: lift map, curvature constant, domain.
#[derive(Clone)]
pub struct Chart {
    pub map: Arc<dyn ParamMap>,
    pub rho: f64,
    pub domain: Domain,
}

impl Chart {
    pub fn new(map: Arc<dyn ParamMap>, rho: f64, domain: Domain) -> Self {
        Chart { map, rho, domain }
    }
}

/// A chart with its lift multiplied by a smooth unit phase `e^{iφ(u,v)}`.
pub struct RegaugedMap {
    pub inner: Arc<dyn ParamMap>,
    pub phase: Arc<dyn ScalarMap>,
}

impl ParamMap for RegaugedMap {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>> {
        let phase = Cx::exp_i(self.phase.eval(u, v));
        self.inner.eval(u, v).iter().map(|z| z.mul(phase)).collect()
    }
}

// ---------------------------------------------------------------------------
// jet-level analysis
// ---------------------------------------------------------------------------

pub(crate) type VJet = Vec<Cx<Jet>>;

pub(crate) fn vd_du(v: &[Cx<Jet>]) -> VJet {
    v.iter().map(|z| Cx::new(z.re.d_du(), z.im.d_du())).collect()
}

pub(crate) fn vd_dv(v: &[Cx<Jet>]) -> VJet {
    v.iter().map(|z| Cx::new(z.re.d_dv(), z.im.d_dv())).collect()
}

pub(crate) fn vd(v: &[Cx<Jet>], a: usize) -> VJet {
    if a == 0 {
        vd_du(v)
    } else {
        vd_dv(v)
    }
}

pub(crate) fn values(v: &[Cx<Jet>]) -> ComplexVector {
    ComplexVector(v.iter().map(|z| z.value()).collect())
}

/// Full jet-level state of the surface at one parameter point.
///
/// Validity orders: `z` carries three derivative orders, `xu`/`xv`/frame two,
/// `sigma`/`h` and everything built from them one. Reading higher slots than
/// valid is a bug; the finite-difference oracle tests guard this.
pub(crate) struct SurfaceJets {
    pub rho: f64,
    pub dim: usize,
    pub z: VJet,
    pub xu: VJet,
    pub xv: VJet,
    pub omega: [Jet; 2],
    pub g: [[Jet; 2]; 2],
    pub ginv: [[Jet; 2]; 2],
    pub detg: Jet,
    pub e: [VJet; 2],
    /// `e_i = coeff[i][0] x_u + coeff[i][1] x_v`
    pub coeff: [[Jet; 2]; 2],
    /// σ on coordinate fields: `[uu, uv, vv]`
    pub sigma_coord: [VJet; 3],
    pub h: VJet,
    pub h2: Jet,
    /// components of `T = (JH)^⊤` in the orthonormal frame
    pub t_coeff: [Jet; 2],
    pub t2: Jet,
    pub n_vec: VJet,
    pub n2: Jet,
    pub cos_theta: Jet,
    /// shape operator in the `H` direction on the orthonormal frame
    pub a_h: [[Jet; 2]; 2],
    /// rotation coefficient `⟨∇_{∂_a} E₁, E₂⟩` of the tangent frame
    pub omega_frame: [f64; 2],
    /// Christoffel symbols `Γ^c_{ab}` of the induced metric, jets
    pub gamma: [[[Jet; 2]; 2]; 2],
}

impl SurfaceJets {
    /// Horizontal projection at the analyzed lift.
    pub fn project(&self, w: &[Cx<Jet>]) -> VJet {
        project_at(&self.z, self.rho, w)
    }

    /// σ on frame vectors `(e_i, e_j)`.
    pub fn sigma_frame(&self, i: usize, j: usize) -> VJet {
        let mut out = vec![Cx::zero(); self.dim];
        for (a, sig_row) in [[0usize, 1], [1, 2]].iter().enumerate() {
            for (b, &sid) in sig_row.iter().enumerate() {
                let w = self.coeff[i][a].mul(self.coeff[j][b]);
                out = vaxpy(&out, &self.sigma_coord[sid], w);
            }
        }
        out
    }

    /// Ambient covariant derivative `∇̄_{∂_a}` of a field given its jets.
    pub fn cov_deriv(&self, field: &[Cx<Jet>], a: usize) -> VJet {
        let d = vd(field, a);
        let corr = vscale(&vmul_i(field), self.omega[a]);
        self.project(&vsub(&d, &corr))
    }

    /// Split a vector at this point into (tangential, normal) parts.
    pub fn split(&self, w: &[Cx<Jet>]) -> (VJet, VJet) {
        let mut tan = vec![Cx::zero(); self.dim];
        for e in &self.e {
            tan = vaxpy(&tan, e, vdot(w, e));
        }
        let nor = vsub(w, &tan);
        (tan, nor)
    }

    /// `∇⊥_{∂_a} H` (value slots are the meaningful ones).
    pub fn nabla_perp_h_coord(&self, a: usize) -> VJet {
        let full = self.cov_deriv(&self.h, a);
        let (_, nor) = self.split(&full);
        nor
    }
}

fn project_at(z: &[Cx<Jet>], rho: f64, w: &[Cx<Jet>]) -> VJet {
    let jz = vmul_i(z);
    let a = vdot(w, z).scale(rho / 4.0);
    let b = vdot(w, &jz).scale(rho / 4.0);
    let mut out = vsub(w, &vscale(z, a));
    out = vsub(&out, &vscale(&jz, b));
    out
}

pub(crate) fn analyze(chart: &Chart, u: f64, v: f64) -> Result<SurfaceJets> {
    let rho = chart.rho;
    let raw = chart.map.eval(Jet::var_u(u), Jet::var_v(v));
    let dim = raw.len();
    if raw.iter().any(|z| !z.is_finite()) {
        return Err(GeomError::Evaluation(format!("chart lift not finite at ({u}, {v})")));
    }
    let nf = vdot(&raw, &raw);
    if nf.value() < 1e-300 {
        return Err(GeomError::Degenerate(format!("chart lift vanishes at ({u}, {v})")));
    }
    // Rescale onto the sphere ⟨z, z⟩ = 4/ρ.
    let z = vscale_f64(&vscale(&raw, nf.recip().sqrt()), 2.0 / rho.sqrt());

    let zu = vd_du(&z);
    let zv = vd_dv(&z);
    let jz = vmul_i(&z);
    let omega = [vdot(&zu, &jz).scale(rho / 4.0), vdot(&zv, &jz).scale(rho / 4.0)];

    let xu = project_at(&z, rho, &zu);
    let xv = project_at(&z, rho, &zv);

    let g = [[vdot(&xu, &xu), vdot(&xu, &xv)], [vdot(&xv, &xu), vdot(&xv, &xv)]];
    let detg = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if !(detg.value() > 1e-12 * (g[0][0].value() * g[1][1].value()).max(1e-300)) {
        return Err(GeomError::RankDeficient(u, v));
    }
    let inv_det = detg.recip();
    let ginv = [
        [g[1][1] * inv_det, -g[0][1] * inv_det],
        [-g[1][0] * inv_det, g[0][0] * inv_det],
    ];

    // Gram–Schmidt on (x_u, x_v), in that order.
    let inv_n1 = g[0][0].sqrt().recip();
    let e1 = vscale(&xu, inv_n1);
    let proj = vdot(&xv, &e1);
    let w2 = vsub(&xv, &vscale(&e1, proj));
    let n2sq = vdot(&w2, &w2);
    let inv_n2 = n2sq.sqrt().recip();
    let e2 = vscale(&w2, inv_n2);
    // e1 = inv_n1 x_u; e2 = inv_n2 (x_v − (g_uv/g_uu) x_u)
    let coeff = [
        [inv_n1, Jet::ZERO],
        [(g[0][1] * g[0][0].recip() * inv_n2).neg(), inv_n2],
    ];

    // Second fundamental form on coordinate fields.
    let cov = |field: &VJet, a: usize| -> VJet {
        let d = vd(field, a);
        let corr = vscale(&vmul_i(field), omega[a]);
        project_at(&z, rho, &vsub(&d, &corr))
    };
    let normal_part = |w: &VJet| -> VJet {
        let mut tan = vec![Cx::zero(); dim];
        tan = vaxpy(&tan, &e1, vdot(w, &e1));
        tan = vaxpy(&tan, &e2, vdot(w, &e2));
        vsub(w, &tan)
    };
    let sig_uu = normal_part(&cov(&xu, 0));
    let sig_uv = normal_part(&cov(&xv, 0));
    let sig_vv = normal_part(&cov(&xv, 1));

    // H = (1/2) trace_g σ.
    let mut h = vscale(&sig_uu, ginv[0][0]);
    h = vaxpy(&h, &sig_uv, ginv[0][1].scale(2.0));
    h = vaxpy(&h, &sig_vv, ginv[1][1]);
    let h = vscale_f64(&h, 0.5);
    let h2 = vdot(&h, &h);

    let jh = vmul_i(&h);
    let t_coeff = [vdot(&jh, &e1), vdot(&jh, &e2)];
    let mut t_vec = vscale(&e1, t_coeff[0]);
    t_vec = vaxpy(&t_vec, &e2, t_coeff[1]);
    let n_vec = vsub(&jh, &t_vec);
    let t2 = t_coeff[0] * t_coeff[0] + t_coeff[1] * t_coeff[1];
    let n2 = vdot(&n_vec, &n_vec);

    let cos_theta = vdot(&vmul_i(&e1), &e2);

    // Shape operator in the H direction, frame components.
    let e = [e1, e2];
    let sj = |i: usize, j: usize| -> VJet {
        let sigs = [&sig_uu, &sig_uv, &sig_vv];
        let idx = |a: usize, b: usize| a + b; // uu=0, uv/vu=1, vv=2
        let mut out = vec![Cx::zero(); dim];
        for a in 0..2 {
            for b in 0..2 {
                out = vaxpy(&out, sigs[idx(a, b)], coeff[i][a].mul(coeff[j][b]));
            }
        }
        out
    };
    let a_h = [
        [vdot(&sj(0, 0), &h), vdot(&sj(0, 1), &h)],
        [vdot(&sj(1, 0), &h), vdot(&sj(1, 1), &h)],
    ];

    // Frame rotation ⟨∇_{∂_a} E₁, E₂⟩.
    let mut omega_frame = [0.0; 2];
    for a in 0..2 {
        let de1 = cov(&e[0], a);
        omega_frame[a] = vdot(&de1, &e[1]).value();
    }

    // Christoffel symbols of the induced metric as jets.
    let dg = |c: usize, a: usize, b: usize| -> Jet {
        if c == 0 {
            g[a][b].d_du()
        } else {
            g[a][b].d_dv()
        }
    };
    let mut gamma = [[[Jet::ZERO; 2]; 2]; 2];
    for d in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = Jet::ZERO;
                for c in 0..2 {
                    let first_kind = (dg(a, b, c) + dg(b, a, c) - dg(c, a, b)).scale(0.5);
                    acc = acc + ginv[d][c] * first_kind;
                }
                gamma[d][a][b] = acc;
            }
        }
    }

    Ok(SurfaceJets {
        rho,
        dim,
        z,
        xu,
        xv,
        omega,
        g,
        ginv,
        detg,
        e,
        coeff,
        sigma_coord: [sig_uu, sig_uv, sig_vv],
        h,
        h2,
        t_coeff,
        t2,
        n_vec,
        n2,
        cos_theta,
        a_h,
        omega_frame,
        gamma,
    })
}

// ---------------------------------------------------------------------------
// public pointwise state
// ---------------------------------------------------------------------------

/// The complete pointwise geometric state of an immersed surface.
#[derive(Clone, Debug)]
pub struct FundamentalData {
    pub rho: f64,
    /// lift of the point on the sphere
    pub lift: ComplexVector,
    /// first fundamental form on `(∂_u, ∂_v)`
    pub g: [[f64; 2]; 2],
    pub ginv: [[f64; 2]; 2],
    /// horizontal coordinate tangents
    pub x_u: ComplexVector,
    pub x_v: ComplexVector,
    /// orthonormal tangent frame from Gram–Schmidt on `(x_u, x_v)`
    pub e1: ComplexVector,
    pub e2: ComplexVector,
    /// `e_i = frame_coeff[i][0] x_u + frame_coeff[i][1] x_v`
    pub frame_coeff: [[f64; 2]; 2],
    /// σ on the orthonormal frame: `[σ(E₁,E₁), σ(E₁,E₂), σ(E₂,E₂)]`
    pub sigma: [ComplexVector; 3],
    /// mean curvature vector
    pub h: ComplexVector,
    pub h_norm_sq: f64,
    /// shape operator in the `H` direction on the frame
    pub a_h: [[f64; 2]; 2],
    /// deterministic orthonormal normal frame; starts with `H/|H|` when `|H| > 0`
    pub normal_frame: Vec<ComplexVector>,
    /// whether `normal_frame[0]` is `H/|H|`
    pub normal_frame_starts_with_h: bool,
    /// shape operators aligned with `normal_frame`
    pub a_mats: Vec<[[f64; 2]; 2]>,
    /// `∇⊥_{E₁} H`, `∇⊥_{E₂} H`
    pub nabla_perp_h: [ComplexVector; 2],
    /// tangent and normal parts of `JH`
    pub t_vec: ComplexVector,
    pub n_comp: ComplexVector,
    pub t_norm_sq: f64,
    pub n_norm_sq: f64,
    /// components of `T` in the frame
    pub t_frame: [f64; 2],
    /// Kähler angle cosine `⟨JE₁, E₂⟩`
    pub cos_theta: f64,
    /// Gaussian curvature, intrinsically from the metric
    pub k_intrinsic: f64,
    /// Gaussian curvature via the Gauss equation
    pub k_gauss: f64,
}

impl FundamentalData {
    /// `|A_H|²` (Frobenius).
    pub fn a_h_norm_sq(&self) -> f64 {
        self.a_h.iter().flatten().map(|x| x * x).sum()
    }

    pub fn trace_a_h(&self) -> f64 {
        self.a_h[0][0] + self.a_h[1][1]
    }

    /// Pointwise pmc defect `|∇⊥_{E₁}H| + |∇⊥_{E₂}H|`.
    pub fn pmc_defect(&self) -> f64 {
        self.nabla_perp_h[0].norm() + self.nabla_perp_h[1].norm()
    }
}

/// Intrinsic Gaussian curvature from the metric jets.
fn k_intrinsic(sj: &SurfaceJets) -> f64 {
    // R^l_{kij} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im} Γ^m_{jk} − Γ^l_{jm} Γ^m_{ik}
    let dgamma = |c: usize, l: usize, a: usize, b: usize| -> f64 {
        if c == 0 {
            sj.gamma[l][a][b].d_du().value()
        } else {
            sj.gamma[l][a][b].d_dv().value()
        }
    };
    let (i, j, k) = (0, 1, 1);
    let mut riem = [0.0; 2]; // R^l_{kij}
    for (l, r) in riem.iter_mut().enumerate() {
        let mut acc = dgamma(i, l, j, k) - dgamma(j, l, i, k);
        for m in 0..2 {
            acc += sj.gamma[l][i][m].value() * sj.gamma[m][j][k].value()
                - sj.gamma[l][j][m].value() * sj.gamma[m][i][k].value();
        }
        *r = acc;
    }
    // K = ⟨R(∂u,∂v)∂v, ∂u⟩ / det g
    let num = sj.g[0][0].value() * riem[0] + sj.g[0][1].value() * riem[1];
    num / sj.detg.value()
}

/// Deterministic normal frame: Gram–Schmidt over `{H, JE₁, JE₂, e_k, i e_k}`
/// restricted to the horizontal space, orthogonal to the tangent frame.
fn normal_frame(sj: &SurfaceJets) -> (Vec<ComplexVector>, bool) {
    let dim = sj.dim;
    let want = 2 * (dim - 1) - 2;
    let z = values(&sj.z);
    let e1 = values(&sj.e[0]);
    let e2 = values(&sj.e[1]);
    let h = values(&sj.h);
    let rho = sj.rho;

    let mut seeds: Vec<ComplexVector> = Vec::new();
    let h_big = sj.h2.value() > 1e-18;
    if h_big {
        seeds.push(h.clone());
    }
    seeds.push(crate::ambient::jmul(&e1));
    seeds.push(crate::ambient::jmul(&e2));
    for k in 0..dim {
        seeds.push(ComplexVector::basis(dim, k));
        seeds.push(crate::ambient::jmul(&ComplexVector::basis(dim, k)));
    }

    let dot = |a: &ComplexVector, b: &ComplexVector| crate::ambient::re_inner(a, b).unwrap();
    let jz = crate::ambient::jmul(&z);
    let mut frame: Vec<ComplexVector> = Vec::new();
    for seed in seeds {
        if frame.len() == want {
            break;
        }
        // horizontal projection, then orthogonalize against tangents and
        // previously accepted normals
        let mut w = seed;
        w = w.sub(&z.scale(dot(&w, &z) * rho / 4.0));
        w = w.sub(&jz.scale(dot(&w, &jz) * rho / 4.0));
        w = w.sub(&e1.scale(dot(&w, &e1)));
        w = w.sub(&e2.scale(dot(&w, &e2)));
        for f in &frame {
            let c = dot(&w, f);
            w = w.sub(&f.scale(c));
        }
        let n = w.norm();
        if n > 1e-8 {
            frame.push(w.scale(1.0 / n));
        }
    }
    (frame, h_big)
}

/// Compute the full pointwise state at `(u, v)`.
pub fn fundamental_data(chart: &Chart, u: f64, v: f64) -> Result<FundamentalData> {
    let sj = analyze(chart, u, v)?;
    let sig = [
        values(&sj.sigma_frame(0, 0)),
        values(&sj.sigma_frame(0, 1)),
        values(&sj.sigma_frame(1, 1)),
    ];
    let h = values(&sj.h);
    let (nframe, starts_with_h) = normal_frame(&sj);
    let dot = |a: &ComplexVector, b: &ComplexVector| crate::ambient::re_inner(a, b).unwrap();
    let a_mats: Vec<[[f64; 2]; 2]> = nframe
        .iter()
        .map(|nu| {
            [
                [dot(&sig[0], nu), dot(&sig[1], nu)],
                [dot(&sig[1], nu), dot(&sig[2], nu)],
            ]
        })
        .collect();

    // ∇⊥H in frame directions.
    let npc = [sj.nabla_perp_h_coord(0), sj.nabla_perp_h_coord(1)];
    let mut nabla_perp_h = [ComplexVector::zeros(sj.dim), ComplexVector::zeros(sj.dim)];
    for i in 0..2 {
        let mut acc = ComplexVector::zeros(sj.dim);
        for (a, np) in npc.iter().enumerate() {
            acc = acc.add(&values(np).scale(sj.coeff[i][a].value()));
        }
        nabla_perp_h[i] = acc;
    }

    // Gauss equation: K = sec(E₁,E₂) + ⟨σ₁₁, σ₂₂⟩ − |σ₁₂|².
    let cos_theta = sj.cos_theta.value();
    let sec = chart.rho / 4.0 * (1.0 + 3.0 * cos_theta * cos_theta);
    let k_gauss = sec + dot(&sig[0], &sig[2]) - dot(&sig[1], &sig[1]);

    let gv = [
        [sj.g[0][0].value(), sj.g[0][1].value()],
        [sj.g[1][0].value(), sj.g[1][1].value()],
    ];
    let ginvv = [
        [sj.ginv[0][0].value(), sj.ginv[0][1].value()],
        [sj.ginv[1][0].value(), sj.ginv[1][1].value()],
    ];

    Ok(FundamentalData {
        rho: chart.rho,
        lift: values(&sj.z),
        g: gv,
        ginv: ginvv,
        x_u: values(&sj.xu),
        x_v: values(&sj.xv),
        e1: values(&sj.e[0]),
        e2: values(&sj.e[1]),
        frame_coeff: [
            [sj.coeff[0][0].value(), sj.coeff[0][1].value()],
            [sj.coeff[1][0].value(), sj.coeff[1][1].value()],
        ],
        sigma: sig,
        h,
        h_norm_sq: sj.h2.value(),
        a_h: [
            [sj.a_h[0][0].value(), sj.a_h[0][1].value()],
            [sj.a_h[1][0].value(), sj.a_h[1][1].value()],
        ],
        normal_frame: nframe,
        normal_frame_starts_with_h: starts_with_h,
        a_mats,
        nabla_perp_h,
        t_vec: {
            let mut t = values(&sj.e[0]).scale(sj.t_coeff[0].value());
            t = t.add(&values(&sj.e[1]).scale(sj.t_coeff[1].value()));
            t
        },
        n_comp: values(&sj.n_vec),
        t_norm_sq: sj.t2.value(),
        n_norm_sq: sj.n2.value(),
        t_frame: [sj.t_coeff[0].value(), sj.t_coeff[1].value()],
        cos_theta,
        k_intrinsic: k_intrinsic(&sj),
        k_gauss,
    })
}

/// Sup over the grid of the pointwise pmc defect `Σ_i |∇⊥_{E_i}H|`.
pub fn pmc_residual(chart: &Chart, grid: &[(f64, f64)]) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for &(u, v) in grid {
        let fd = fundamental_data(chart, u, v)?;
        sup = sup.max(fd.pmc_defect());
    }
    Ok(sup)
}

/// Max discrepancy of all `FundamentalData` outputs between a chart and the
/// same chart regauged by `e^{iφ(u,v)}`.
///
/// Scalar outputs are compared directly; lift-space vectors are compared
/// after unwinding the known phase.
pub fn gauge_invariance_check(
    chart: &Chart,
    phase: Arc<dyn ScalarMap>,
    u: f64,
    v: f64,
) -> Result<f64> {
    let regauged = Chart {
        map: Arc::new(RegaugedMap { inner: chart.map.clone(), phase: phase.clone() }),
        rho: chart.rho,
        domain: chart.domain,
    };
    let a = fundamental_data(chart, u, v)?;
    let b = fundamental_data(&regauged, u, v)?;

    let phi = phase.eval(Jet::constant(u), Jet::constant(v)).value();
    let unwind = C64::from_polar(1.0, -phi);
    let align = |w: &ComplexVector| ComplexVector(w.as_slice().iter().map(|x| x * unwind).collect());

    let mut worst: f64 = 0.0;
    let mut scal = |x: f64, y: f64| worst = worst.max((x - y).abs());
    for i in 0..2 {
        for j in 0..2 {
            scal(a.g[i][j], b.g[i][j]);
            scal(a.a_h[i][j], b.a_h[i][j]);
        }
    }
    scal(a.h_norm_sq, b.h_norm_sq);
    scal(a.t_norm_sq, b.t_norm_sq);
    scal(a.n_norm_sq, b.n_norm_sq);
    scal(a.cos_theta, b.cos_theta);
    scal(a.k_intrinsic, b.k_intrinsic);
    scal(a.k_gauss, b.k_gauss);
    scal(a.pmc_defect(), b.pmc_defect());

    let mut vect = |x: &ComplexVector, y: &ComplexVector| {
        let d = x.sub(&align(y)).norm();
        if d > worst {
            worst = d;
        }
    };
    vect(&a.lift, &b.lift);
    vect(&a.e1, &b.e1);
    vect(&a.e2, &b.e2);
    vect(&a.h, &b.h);
    vect(&a.t_vec, &b.t_vec);
    vect(&a.n_comp, &b.n_comp);
    for k in 0..3 {
        vect(&a.sigma[k], &b.sigma[k]);
    }
    for k in 0..2 {
        vect(&a.nabla_perp_h[k], &b.nabla_perp_h[k]);
    }
    Ok(worst)
}

/// One row of a grid sweep, exportable as CSV/JSON.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GridSample {
    pub u: f64,
    pub v: f64,
    pub k_gauss: f64,
    pub k_intrinsic: f64,
    pub h_norm: f64,
    pub t_norm: f64,
    pub cos_theta: f64,
    pub pmc_defect: f64,
}

/// Sweep a chart over an `n × n` grid.
pub fn grid_report(chart: &Chart, n: usize) -> Result<Vec<GridSample>> {
    chart
        .domain
        .grid(n)
        .iter()
        .map(|&(u, v)| {
            let fd = fundamental_data(chart, u, v)?;
            Ok(GridSample {
                u,
                v,
                k_gauss: fd.k_gauss,
                k_intrinsic: fd.k_intrinsic,
                h_norm: fd.h_norm_sq.sqrt(),
                t_norm: fd.t_norm_sq.sqrt(),
                cos_theta: fd.cos_theta,
                pmc_defect: fd.pmc_defect(),
            })
        })
        .collect()
}

/// Fixed-column CSV for grid sweeps: `u,v,k_gauss,k_intrinsic,h_norm,t_norm,cos_theta,pmc_defect`.
pub fn grid_csv(samples: &[GridSample]) -> String {
    let mut out = String::from("u,v,k_gauss,k_intrinsic,h_norm,t_norm,cos_theta,pmc_defect\n");
    for s in samples {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            s.u, s.v, s.k_gauss, s.k_intrinsic, s.h_norm, s.t_norm, s.cos_theta, s.pmc_defect
        ));
    }
    out
}
