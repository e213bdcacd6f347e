//! Differentiation engine for parameter-to-lift maps.
//!
//! The primary path evaluates a [`ParamMap`] in truncated-Taylor (jet)
//! arithmetic, producing all partial derivatives up to third order exactly.
//! A central finite-difference oracle cross-validates the jets; it is the
//! secondary path only, since the surface residuals downstream involve third
//! derivatives of the immersion where differencing noise would dominate.

pub mod jet;

use crate::error::{GeomError, Result};
use jet::{Cx, Jet};
use num_complex::Complex;

pub type C64 = Complex<f64>;

/// A smooth map from a planar parameter domain into `C^{n+1}` lift vectors.
///
/// Implementations must be deterministic and side-effect free; evaluation in
/// jet arithmetic is what grants the engine exact derivatives.
pub trait ParamMap: Send + Sync {
    /// Complex dimension of the ambient space (`n + 1` entries).
    fn dim(&self) -> usize;

    /// Evaluate at jet-valued parameters, propagating derivatives.
    fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>>;

    /// Plain evaluation; overridden where a cheaper path exists.
    fn eval_value(&self, u: f64, v: f64) -> Vec<C64> {
        self.eval(Jet::constant(u), Jet::constant(v))
            .iter()
            .map(|z| z.value())
            .collect()
    }
}

/// A smooth real-valued function on the parameter domain (gauge phases).
pub trait ScalarMap: Send + Sync {
    fn eval(&self, u: Jet, v: Jet) -> Jet;
}

/// Polynomial scalar map `Σ c_ab u^a v^b`; coefficients indexed like jets.
pub struct Poly2 {
    pub coeffs: Vec<(usize, usize, f64)>,
}

impl Poly2 {
    pub fn new(coeffs: Vec<(usize, usize, f64)>) -> Self {
        Poly2 { coeffs }
    }

    /// Linear phase `a·u + b·v`.
    pub fn linear(a: f64, b: f64) -> Self {
        Poly2::new(vec![(1, 0, a), (0, 1, b)])
    }
}

impl ScalarMap for Poly2 {
    fn eval(&self, u: Jet, v: Jet) -> Jet {
        let mut acc = Jet::ZERO;
        for &(a, b, c) in &self.coeffs {
            let mut term = Jet::constant(c);
            for _ in 0..a {
                term = term * u;
            }
            for _ in 0..b {
                term = term * v;
            }
            acc = acc + term;
        }
        acc
    }
}

/// All partial derivatives of a lift map up to order three at one point.
#[derive(Clone, Debug)]
pub struct Jet3 {
    pub value: Vec<C64>,
    pub du: Vec<C64>,
    pub dv: Vec<C64>,
    pub duu: Vec<C64>,
    pub duv: Vec<C64>,
    pub dvv: Vec<C64>,
    pub duuu: Vec<C64>,
    pub duuv: Vec<C64>,
    pub duvv: Vec<C64>,
    pub dvvv: Vec<C64>,
}

impl Jet3 {
    pub fn partial(&self, a: usize, b: usize) -> &[C64] {
        match (a, b) {
            (0, 0) => &self.value,
            (1, 0) => &self.du,
            (0, 1) => &self.dv,
            (2, 0) => &self.duu,
            (1, 1) => &self.duv,
            (0, 2) => &self.dvv,
            (3, 0) => &self.duuu,
            (2, 1) => &self.duuv,
            (1, 2) => &self.duvv,
            (0, 3) => &self.dvvv,
            _ => panic!("order > 3"),
        }
    }
}

fn extract(raw: &[Cx<Jet>], a: usize, b: usize) -> Vec<C64> {
    raw.iter()
        .map(|z| C64::new(z.re.partial(a, b), z.im.partial(a, b)))
        .collect()
}

/// Evaluate a map and return every partial up to order three.
///
/// Errors if the map produces non-finite coefficients at the point (for
/// example normalization of a vanishing vector).
pub fn jet3_eval(f: &dyn ParamMap, u: f64, v: f64) -> Result<Jet3> {
    let raw = f.eval(Jet::var_u(u), Jet::var_v(v));
    if raw.iter().any(|z| !z.is_finite()) {
        return Err(GeomError::Evaluation(format!(
            "map not differentiable at ({u}, {v}): non-finite jet coefficients"
        )));
    }
    Ok(Jet3 {
        value: extract(&raw, 0, 0),
        du: extract(&raw, 1, 0),
        dv: extract(&raw, 0, 1),
        duu: extract(&raw, 2, 0),
        duv: extract(&raw, 1, 1),
        dvv: extract(&raw, 0, 2),
        duuu: extract(&raw, 3, 0),
        duuv: extract(&raw, 2, 1),
        duvv: extract(&raw, 1, 2),
        dvvv: extract(&raw, 0, 3),
    })
}

/// Finite-difference estimates of the partials of a given total order.
#[derive(Clone, Debug)]
pub struct FdPartials {
    /// `(a, b, value)` for each partial with `a + b == order`.
    pub partials: Vec<(usize, usize, Vec<C64>)>,
    /// Set when the step is too small for the order to be well conditioned.
    pub conditioning_warning: Option<String>,
}

/// Central finite differences of order `1`, `2`, or `3`; error `O(h²)`.
///
/// Third-order stencils lose roughly `ε/h³` to cancellation; steps below
/// `~3e-4` start to drown the `O(h²)` truncation there, and anything below
/// `1e-10` is flagged outright.
pub fn fd_oracle(f: &dyn ParamMap, u: f64, v: f64, order: usize, h: f64) -> Result<FdPartials> {
    if !(1..=3).contains(&order) {
        return Err(GeomError::Domain(format!("fd order {order} not in 1..=3")));
    }
    if h <= 0.0 {
        return Err(GeomError::Domain("fd step must be positive".into()));
    }
    let warning = (h < 1e-10).then(|| {
        format!("step {h:.1e} below 1e-10: cancellation dominates central differences")
    });

    let at = |du: f64, dv: f64| f.eval_value(u + du * h, v + dv * h);
    let n = f.dim();
    let comb = |terms: &[(f64, Vec<C64>)], denom: f64| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (w, vals) in terms {
            for (o, x) in out.iter_mut().zip(vals) {
                *o += x * *w;
            }
        }
        for o in &mut out {
            *o /= denom;
        }
        out
    };

    let mut partials = Vec::new();
    match order {
        1 => {
            partials.push((1, 0, comb(&[(1.0, at(1.0, 0.0)), (-1.0, at(-1.0, 0.0))], 2.0 * h)));
            partials.push((0, 1, comb(&[(1.0, at(0.0, 1.0)), (-1.0, at(0.0, -1.0))], 2.0 * h)));
        }
        2 => {
            let f0 = at(0.0, 0.0);
            partials.push((
                2,
                0,
                comb(&[(1.0, at(1.0, 0.0)), (-2.0, f0.clone()), (1.0, at(-1.0, 0.0))], h * h),
            ));
            partials.push((
                0,
                2,
                comb(&[(1.0, at(0.0, 1.0)), (-2.0, f0), (1.0, at(0.0, -1.0))], h * h),
            ));
            partials.push((
                1,
                1,
                comb(
                    &[
                        (1.0, at(1.0, 1.0)),
                        (-1.0, at(1.0, -1.0)),
                        (-1.0, at(-1.0, 1.0)),
                        (1.0, at(-1.0, -1.0)),
                    ],
                    4.0 * h * h,
                ),
            ));
        }
        3 => {
            let h3 = h * h * h;
            partials.push((
                3,
                0,
                comb(
                    &[
                        (1.0, at(2.0, 0.0)),
                        (-2.0, at(1.0, 0.0)),
                        (2.0, at(-1.0, 0.0)),
                        (-1.0, at(-2.0, 0.0)),
                    ],
                    2.0 * h3,
                ),
            ));
            partials.push((
                0,
                3,
                comb(
                    &[
                        (1.0, at(0.0, 2.0)),
                        (-2.0, at(0.0, 1.0)),
                        (2.0, at(0.0, -1.0)),
                        (-1.0, at(0.0, -2.0)),
                    ],
                    2.0 * h3,
                ),
            ));
            // ∂_uuv: v-difference of the ∂_uu stencil.
            let row = |dv: f64| -> Vec<(f64, Vec<C64>)> {
                vec![(1.0, at(1.0, dv)), (-2.0, at(0.0, dv)), (1.0, at(-1.0, dv))]
            };
            let mut terms = row(1.0);
            terms.extend(row(-1.0).into_iter().map(|(w, x)| (-w, x)));
            partials.push((2, 1, comb(&terms, 2.0 * h3)));
            let col = |du: f64| -> Vec<(f64, Vec<C64>)> {
                vec![(1.0, at(du, 1.0)), (-2.0, at(du, 0.0)), (1.0, at(du, -1.0))]
            };
            let mut terms = col(1.0);
            terms.extend(col(-1.0).into_iter().map(|(w, x)| (-w, x)));
            partials.push((1, 2, comb(&terms, 2.0 * h3)));
        }
        _ => unreachable!(),
    }
    Ok(FdPartials { partials, conditioning_warning: warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    struct SinFirst;
    impl ParamMap for SinFirst {
        fn dim(&self) -> usize {
            2
        }
        fn eval(&self, u: Jet, _v: Jet) -> Vec<Cx<Jet>> {
            vec![Cx::new(u.sin(), Jet::ZERO), Cx::zero()]
        }
    }

    struct CubicFirst;
    impl ParamMap for CubicFirst {
        fn dim(&self) -> usize {
            2
        }
        fn eval(&self, u: Jet, _v: Jet) -> Vec<Cx<Jet>> {
            vec![Cx::new(u.powi(3), Jet::ZERO), Cx::zero()]
        }
    }

    struct ExpIu;
    impl ParamMap for ExpIu {
        fn dim(&self) -> usize {
            2
        }
        fn eval(&self, u: Jet, _v: Jet) -> Vec<Cx<Jet>> {
            vec![Cx::exp_i(u), Cx::zero()]
        }
    }

    #[test]
    fn cubic_third_partial() {
        let j = jet3_eval(&CubicFirst, 0.0, 0.0).unwrap();
        assert_relative_eq!(j.duuu[0].re, 6.0, epsilon = 1e-14);
        assert_relative_eq!(j.duuu[0].im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn exponential_partials_at_zero() {
        let j = jet3_eval(&ExpIu, 0.0, 0.0).unwrap();
        assert_relative_eq!(j.du[0].im, 1.0, epsilon = 1e-15);
        assert_relative_eq!(j.du[0].re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(j.duu[0].re, -1.0, epsilon = 1e-15);
        assert_relative_eq!(j.duu[0].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn fd_first_order_matches_sin() {
        let fd = fd_oracle(&SinFirst, 0.0, 0.0, 1, 1e-5).unwrap();
        assert!(fd.conditioning_warning.is_none());
        let du = &fd.partials.iter().find(|p| p.0 == 1 && p.1 == 0).unwrap().2;
        assert_relative_eq!(du[0].re, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn fd_converges_at_second_order() {
        // Halving h shrinks the error by about 4x on a smooth map.
        let exact = 0.25f64.cos();
        let err_at = |h: f64| {
            let fd = fd_oracle(&SinFirst, 0.25, 0.0, 1, h).unwrap();
            (fd.partials[0].2[0].re - exact).abs()
        };
        let e1 = err_at(1e-2);
        let e2 = err_at(5e-3);
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn fd_warning_for_tiny_step() {
        let fd = fd_oracle(&SinFirst, 0.0, 0.0, 1, 1e-12).unwrap();
        assert!(fd.conditioning_warning.is_some());
    }

    #[test]
    fn jets_match_fd_on_composite_map() {
        struct Composite;
        impl ParamMap for Composite {
            fn dim(&self) -> usize {
                2
            }
            fn eval(&self, u: Jet, v: Jet) -> Vec<Cx<Jet>> {
                let denom = Jet::constant(2.0) + u * u + v * v;
                let a = Cx::new((u * v).exp(), u.sin()).scale(denom.recip());
                let b = Cx::exp_i(u.scale(0.7) + v * v);
                vec![a, b]
            }
        }
        let (u0, v0) = (0.33, -0.21);
        let j = jet3_eval(&Composite, u0, v0).unwrap();
        for order in 1..=3 {
            let h = 1e-3;
            let fd = fd_oracle(&Composite, u0, v0, order, h).unwrap();
            for (a, b, est) in &fd.partials {
                let exact = j.partial(*a, *b);
                for (x, y) in est.iter().zip(exact) {
                    assert!(
                        (x - y).norm() < 100.0 * h * h,
                        "order ({a},{b}): fd {x} vs jet {y}"
                    );
                }
            }
        }
    }
}
