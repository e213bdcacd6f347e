//! Fubini–Study geometry of `CP^n(ρ)` through the Hopf fibration.
//!
//! A point is represented by a chosen lift on `S^{2n+1}(ρ/4)`; tangent
//! vectors are horizontal vectors at the lift (orthogonal to both `z` and
//! `iz`). The curvature tensor is the closed form
//!
//! ```text
//! R̄(X,Y)Z = (ρ/4){⟨Y,Z⟩X − ⟨X,Z⟩Y + ⟨JY,Z⟩JX − ⟨JX,Z⟩JY + 2⟨X,JY⟩JZ}
//! ```
//!
//! and the sectional curvature of a plane with Kähler angle θ is
//! `(ρ/4)(1 + 3cos²θ)`, pinched between `ρ/4` (totally real) and `ρ`
//! (holomorphic).

use crate::ambient::{jmul, re_inner, ComplexVector, SphereLift};
use crate::error::{GeomError, Result};

/// A point of `CP^n(ρ)` carried by one chosen sphere lift.
///
/// Gauge equality — lifts differing by a unit phase — is a predicate, not a
/// canonical form; all downstream geometry is computed gauge-invariantly.
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    pub lift: SphereLift,
}

impl ProjectivePoint {
    pub fn new(lift: SphereLift) -> Self {
        ProjectivePoint { lift }
    }

    /// True when the two lifts differ by a unit complex phase.
    pub fn gauge_eq(&self, other: &ProjectivePoint, tol: f64) -> bool {
        if self.lift.z.len() != other.lift.z.len() {
            return false;
        }
        // |⟨z1, z2⟩_C| = R² exactly on the same fiber.
        let mut herm = num_complex::Complex::new(0.0, 0.0);
        for (a, b) in self.lift.z.as_slice().iter().zip(other.lift.z.as_slice()) {
            herm += a * b.conj();
        }
        (herm.norm() - self.lift.radius_sq()).abs() < tol
    }
}

/// A tangent vector of `CP^n(ρ)` represented by a horizontal vector at a lift.
#[derive(Clone, Debug)]
pub struct TangentVector {
    pub base: ProjectivePoint,
    pub w: ComplexVector,
}

impl TangentVector {
    pub fn horizontality_defect(&self) -> f64 {
        let z = &self.base.lift.z;
        let a = re_inner(&self.w, z).unwrap_or(f64::INFINITY).abs();
        let b = re_inner(&self.w, &jmul(z)).unwrap_or(f64::INFINITY).abs();
        a.max(b)
    }

    pub fn norm(&self) -> f64 {
        re_inner(&self.w, &self.w).unwrap().sqrt()
    }
}

/// Project a vector onto the horizontal space at `z`: remove the components
/// along `z` (sphere radial) and `Jz` (Hopf vertical). Self-adjoint and
/// idempotent with respect to the real inner product.
pub fn horizontal_project(z: &SphereLift, w: &ComplexVector) -> TangentVector {
    let inv_r2 = z.rho / 4.0;
    let jz = jmul(&z.z);
    let a = re_inner(w, &z.z).unwrap() * inv_r2;
    let b = re_inner(w, &jz).unwrap() * inv_r2;
    let proj = w.sub(&z.z.scale(a)).sub(&jz.scale(b));
    TangentVector { base: ProjectivePoint::new(z.clone()), w: proj }
}

fn check_same_base(vs: &[&TangentVector]) -> Result<()> {
    let z0 = vs[0].base.lift.z.as_slice();
    for v in &vs[1..] {
        let z = v.base.lift.z.as_slice();
        if z.len() != z0.len() {
            return Err(GeomError::DimensionMismatch(z.len(), z0.len()));
        }
        let d: f64 = z0.iter().zip(z).map(|(a, b)| (a - b).norm_sqr()).sum();
        if d.sqrt() > 1e-9 {
            return Err(GeomError::Domain("tangent vectors at different base points".into()));
        }
    }
    Ok(())
}

/// The curvature tensor `R̄(X,Y)Z` of `CP^n(ρ)` in closed form.
pub fn curvature_tensor(
    rho: f64,
    x: &TangentVector,
    y: &TangentVector,
    z: &TangentVector,
) -> Result<TangentVector> {
    check_same_base(&[x, y, z])?;
    let (xv, yv, zv) = (&x.w, &y.w, &z.w);
    let jx = jmul(xv);
    let jy = jmul(yv);
    let jz = jmul(zv);
    let mut out = xv.scale(re_inner(yv, zv)?);
    out = out.sub(&yv.scale(re_inner(xv, zv)?));
    out = out.add(&jx.scale(re_inner(&jy, zv)?));
    out = out.sub(&jy.scale(re_inner(&jx, zv)?));
    out = out.add(&jz.scale(2.0 * re_inner(xv, &jy)?));
    Ok(TangentVector { base: x.base.clone(), w: out.scale(rho / 4.0) })
}

/// Sectional curvature of the plane spanned by `x` and `y`.
pub fn sectional_curvature(rho: f64, x: &TangentVector, y: &TangentVector) -> Result<f64> {
    check_same_base(&[x, y])?;
    let xx = re_inner(&x.w, &x.w)?;
    let yy = re_inner(&y.w, &y.w)?;
    let xy = re_inner(&x.w, &y.w)?;
    let gram = xx * yy - xy * xy;
    if gram < 1e-12 * (xx * yy + 1e-300) {
        return Err(GeomError::Domain("degenerate plane for sectional curvature".into()));
    }
    let rxyy = curvature_tensor(rho, x, y, y)?;
    Ok(re_inner(&rxyy.w, &x.w)? / gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::sphere_normalize;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn rand_vec(rng: &mut ChaCha12Rng, n: usize) -> ComplexVector {
        ComplexVector(
            (0..n)
                .map(|_| num_complex::Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
    }

    fn setup(rng: &mut ChaCha12Rng, rho: f64, n: usize) -> SphereLift {
        sphere_normalize(&rand_vec(rng, n), rho).unwrap()
    }

    fn horiz(rng: &mut ChaCha12Rng, z: &SphereLift) -> TangentVector {
        horizontal_project(z, &rand_vec(rng, z.z.len()))
    }

    fn unit(v: &TangentVector) -> TangentVector {
        TangentVector { base: v.base.clone(), w: v.w.scale(1.0 / v.norm()) }
    }

    #[test]
    fn projection_removes_radial_and_vertical() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let z = setup(&mut rng, 3.0, 3);
        let p = horizontal_project(&z, &z.z);
        assert!(p.norm() < 1e-13);
        let p = horizontal_project(&z, &jmul(&z.z));
        assert!(p.norm() < 1e-13);
        // Idempotence on an already-horizontal vector.
        let w = horiz(&mut rng, &z);
        let w2 = horizontal_project(&z, &w.w);
        assert!(w2.w.sub(&w.w).norm() < 1e-14);
        assert!(w.horizontality_defect() < 1e-10);
    }

    #[test]
    fn holomorphic_plane_has_curvature_rho() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for &rho in &[1.0, 2.5, 4.0] {
            let z = setup(&mut rng, rho, 3);
            let x = unit(&horiz(&mut rng, &z));
            let y = TangentVector { base: x.base.clone(), w: jmul(&x.w) };
            // R̄(X, JX)JX = ρ X
            let r = curvature_tensor(rho, &x, &y, &y).unwrap();
            assert!(r.w.sub(&x.w.scale(rho)).norm() < 1e-12 * rho);
            assert_relative_eq!(sectional_curvature(rho, &x, &y).unwrap(), rho, epsilon = 1e-12);
        }
    }

    #[test]
    fn totally_real_plane_has_quarter_curvature() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let rho = 2.0;
        let z = setup(&mut rng, rho, 3);
        let x = unit(&horiz(&mut rng, &z));
        // Orthogonalize a second vector against x and Jx.
        let mut y = horiz(&mut rng, &z);
        let jx = jmul(&x.w);
        y.w = y.w.sub(&x.w.scale(re_inner(&y.w, &x.w).unwrap()));
        y.w = y.w.sub(&jx.scale(re_inner(&y.w, &jx).unwrap()));
        let y = unit(&y);
        let r = curvature_tensor(rho, &x, &y, &y).unwrap();
        assert!(r.w.sub(&x.w.scale(rho / 4.0)).norm() < 1e-12);
        assert_relative_eq!(sectional_curvature(rho, &x, &y).unwrap(), rho / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn first_bianchi_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        let rho = 3.0;
        for _ in 0..20 {
            let z = setup(&mut rng, rho, 4);
            let x = horiz(&mut rng, &z);
            let y = horiz(&mut rng, &z);
            let w = horiz(&mut rng, &z);
            let a = curvature_tensor(rho, &x, &y, &w).unwrap();
            let b = curvature_tensor(rho, &y, &w, &x).unwrap();
            let c = curvature_tensor(rho, &w, &x, &y).unwrap();
            let sum = a.w.add(&b.w).add(&c.w);
            assert!(sum.norm() < 1e-12, "bianchi residual {}", sum.norm());
        }
    }

    #[test]
    fn curvature_symmetries_and_pinching() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let rho = 4.0;
        for _ in 0..20 {
            let z = setup(&mut rng, rho, 3);
            let x = horiz(&mut rng, &z);
            let y = horiz(&mut rng, &z);
            let v = horiz(&mut rng, &z);
            let w = horiz(&mut rng, &z);
            // Antisymmetry in (X, Y).
            let r1 = curvature_tensor(rho, &x, &y, &v).unwrap();
            let r2 = curvature_tensor(rho, &y, &x, &v).unwrap();
            assert!(r1.w.add(&r2.w).norm() < 1e-12);
            // Pair symmetry ⟨R(X,Y)Z,W⟩ = ⟨R(Z,W)X,Y⟩.
            let lhs = re_inner(&r1.w, &w.w).unwrap();
            let r3 = curvature_tensor(rho, &v, &w, &x).unwrap();
            let rhs = re_inner(&r3.w, &y.w).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
            // Pinching ρ/4 ≤ sec ≤ ρ.
            if let Ok(sec) = sectional_curvature(rho, &x, &y) {
                assert!(sec > rho / 4.0 - 1e-9 && sec < rho + 1e-9, "sec {sec}");
            }
        }
    }

    #[test]
    fn sectional_matches_kahler_angle_formula() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let rho = 2.0;
        for _ in 0..20 {
            let z = setup(&mut rng, rho, 3);
            let x = unit(&horiz(&mut rng, &z));
            let mut y = horiz(&mut rng, &z);
            y.w = y.w.sub(&x.w.scale(re_inner(&y.w, &x.w).unwrap()));
            let y = unit(&y);
            let cos_theta = re_inner(&x.w, &jmul(&y.w)).unwrap();
            let sec = sectional_curvature(rho, &x, &y).unwrap();
            assert_relative_eq!(
                sec,
                rho / 4.0 * (1.0 + 3.0 * cos_theta * cos_theta),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn mismatched_base_points_error() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let z1 = setup(&mut rng, 1.0, 3);
        let z2 = setup(&mut rng, 1.0, 3);
        let x = horiz(&mut rng, &z1);
        let y = horiz(&mut rng, &z2);
        assert!(curvature_tensor(1.0, &x, &y, &y).is_err());
    }

    #[test]
    fn gauge_equality_detects_phase() {
        let mut rng = ChaCha12Rng::seed_from_u64(14);
        let z = setup(&mut rng, 4.0, 3);
        let phase = num_complex::Complex::from_polar(1.0, 1.234);
        let z2 = SphereLift {
            z: ComplexVector(z.z.as_slice().iter().map(|w| w * phase).collect()),
            rho: 4.0,
        };
        let p = ProjectivePoint::new(z.clone());
        let q = ProjectivePoint::new(z2);
        assert!(p.gauge_eq(&q, 1e-10));
        let other = ProjectivePoint::new(setup(&mut rng, 4.0, 3));
        assert!(!p.gauge_eq(&other, 1e-10));
    }
}
