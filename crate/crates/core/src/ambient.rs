//! The ambient complex coordinate space `C^{n+1}` seen as `R^{2n+2}`.
//!
//! All geometry downstream is expressed through the real part of the
//! Hermitian product and the complex structure `J` (entrywise multiplication
//! by `i`), together with the sphere `S^{2n+1}(ρ/4) = {⟨z,z⟩ = 4/ρ}` whose
//! Hopf quotient is `CP^n(ρ)`.

use crate::calculus::C64;
use crate::error::{GeomError, Result};
use num_complex::Complex;

/// A finite complex vector; the working element of the ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(pub Vec<C64>);

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeomError::Degenerate("non-finite complex entries".into()));
        }
        Ok(ComplexVector(entries))
    }

    pub fn zeros(n: usize) -> Self {
        ComplexVector(vec![C64::new(0.0, 0.0); n])
    }

    /// Standard basis vector `e_k` in `C^n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[k] = C64::new(1.0, 0.0);
        ComplexVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexVector(self.0.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        ComplexVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        ComplexVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// Real part of the Hermitian inner product; the Riemannian metric of
/// `C^{n+1}` as a real vector space.
pub fn re_inner(u: &ComplexVector, v: &ComplexVector) -> Result<f64> {
    if u.len() != v.len() {
        return Err(GeomError::DimensionMismatch(u.len(), v.len()));
    }
    Ok(u.0.iter().zip(&v.0).map(|(a, b)| (a * b.conj()).re).sum())
}

/// The complex structure `J`: entrywise multiplication by `i`.
pub fn jmul(u: &ComplexVector) -> ComplexVector {
    ComplexVector(u.0.iter().map(|z| Complex::new(-z.im, z.re)).collect())
}

/// A point of the sphere `S^{2n+1}(ρ/4)`, radius `2/√ρ`.
#[derive(Clone, Debug)]
pub struct SphereLift {
    pub z: ComplexVector,
    pub rho: f64,
}

impl SphereLift {
    /// Radius-squared invariant `⟨z, z⟩ = 4/ρ`.
    pub fn radius_sq(&self) -> f64 {
        4.0 / self.rho
    }

    pub fn radius_defect(&self) -> f64 {
        (re_inner(&self.z, &self.z).unwrap() - self.radius_sq()).abs()
    }
}

/// Rescale a nonzero vector onto the sphere `⟨z,z⟩ = 4/ρ`.
pub fn sphere_normalize(z: &ComplexVector, rho: f64) -> Result<SphereLift> {
    if rho <= 0.0 {
        return Err(GeomError::Domain(format!("rho must be positive, got {rho}")));
    }
    let n = z.norm();
    if n < 1e-300 {
        return Err(GeomError::Degenerate("cannot normalize the zero vector".into()));
    }
    let lift = z.scale(2.0 / (rho.sqrt() * n));
    Ok(SphereLift { z: lift, rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn e(n: usize, k: usize) -> ComplexVector {
        ComplexVector::basis(n, k)
    }

    #[test]
    fn inner_product_basics() {
        let e1 = e(2, 0);
        let ie1 = jmul(&e1);
        assert_relative_eq!(re_inner(&e1, &ie1).unwrap(), 0.0);
        assert_relative_eq!(re_inner(&e1, &e1).unwrap(), 1.0);
        let w = ComplexVector::new(vec![C64::new(1.0, 1.0), C64::new(0.0, 0.0)]).unwrap();
        assert_relative_eq!(re_inner(&w, &e1).unwrap(), 1.0);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(re_inner(&e(2, 0), &e(3, 0)).is_err());
    }

    #[test]
    fn sphere_normalize_radii() {
        let z = ComplexVector::new(vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)]).unwrap();
        let lift = sphere_normalize(&z, 4.0).unwrap();
        assert_relative_eq!(lift.z.norm(), 1.0, epsilon = 1e-14);
        assert!(lift.radius_defect() < 1e-12);

        let z = ComplexVector::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let lift = sphere_normalize(&z, 1.0).unwrap();
        assert_relative_eq!(lift.z.as_slice()[0].re, 2.0, epsilon = 1e-14);

        assert!(sphere_normalize(&ComplexVector::zeros(2), 1.0).is_err());
        assert!(sphere_normalize(&e(2, 0), -1.0).is_err());
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = ComplexVector> {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), n).prop_map(|xs| {
            ComplexVector(xs.into_iter().map(|(a, b)| C64::new(a, b)).collect())
        })
    }

    proptest! {
        #[test]
        fn j_squares_to_minus_identity(u in arb_vec(3)) {
            let jj = jmul(&jmul(&u));
            for (a, b) in jj.as_slice().iter().zip(u.as_slice()) {
                prop_assert!((a + b).norm() < 1e-15);
            }
        }

        #[test]
        fn j_is_an_isometry(u in arb_vec(3), v in arb_vec(3)) {
            let lhs = re_inner(&jmul(&u), &jmul(&v)).unwrap();
            let rhs = re_inner(&u, &v).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn j_is_skew(u in arb_vec(3)) {
            let x = re_inner(&jmul(&u), &u).unwrap();
            prop_assert!(x.abs() < 1e-12 * (1.0 + re_inner(&u, &u).unwrap()));
        }

        #[test]
        fn inner_is_symmetric_positive(u in arb_vec(3), v in arb_vec(3)) {
            let ab = re_inner(&u, &v).unwrap();
            let ba = re_inner(&v, &u).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12 * (1.0 + ab.abs()));
            prop_assert!(re_inner(&u, &u).unwrap() >= 0.0);
        }

        #[test]
        fn normalize_lands_on_sphere(u in arb_vec(3), rho in 0.1..10.0f64) {
            prop_assume!(u.norm() > 1e-6);
            let lift = sphere_normalize(&u, rho).unwrap();
            prop_assert!(lift.radius_defect() < 1e-12 * (1.0 + 4.0 / rho));
        }
    }
}
