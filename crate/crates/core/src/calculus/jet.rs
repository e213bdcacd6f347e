//! Truncated third-order Taylor arithmetic in two variables.
//!
//! A [`Jet`] carries the value of a scalar function of `(u, v)` together with
//! its Taylor coefficients up to total degree three. Arithmetic on jets is
//! polynomial arithmetic truncated at degree three, so every derivative that
//! survives the truncation is exact to machine precision; nothing is computed
//! by differencing. Elementary functions (`sqrt`, `exp`, `sin`, `cos`, ...)
//! are propagated through their local Taylor series.
//!
//! Coefficients are stored in graded order
//! `1, u, v, u², uv, v², u³, u²v, uv², v³`
//! as Taylor coefficients (the `(a,b)` slot holds `∂_u^a ∂_v^b f / (a! b!)`).

/// Monomial exponents for each coefficient slot, graded order.
pub const JET_EXP: [(usize, usize); 10] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

fn slot(a: usize, b: usize) -> usize {
    match (a, b) {
        (0, 0) => 0,
        (1, 0) => 1,
        (0, 1) => 2,
        (2, 0) => 3,
        (1, 1) => 4,
        (0, 2) => 5,
        (3, 0) => 6,
        (2, 1) => 7,
        (1, 2) => 8,
        (0, 3) => 9,
        _ => unreachable!("degree > 3"),
    }
}

/// Order-3 two-variable jet with `f64` coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; 10],
}

impl Jet {
    pub const ZERO: Jet = Jet { c: [0.0; 10] };

    pub fn constant(x: f64) -> Jet {
        let mut c = [0.0; 10];
        c[0] = x;
        Jet { c }
    }

    /// Seed for the first parameter: value `x` with `∂_u = 1`.
    pub fn var_u(x: f64) -> Jet {
        let mut c = [0.0; 10];
        c[0] = x;
        c[1] = 1.0;
        Jet { c }
    }

    /// Seed for the second parameter: value `y` with `∂_v = 1`.
    pub fn var_v(y: f64) -> Jet {
        let mut c = [0.0; 10];
        c[0] = y;
        c[2] = 1.0;
        Jet { c }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Partial derivative `∂_u^a ∂_v^b` (Taylor coefficient times `a! b!`).
    pub fn partial(&self, a: usize, b: usize) -> f64 {
        const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];
        self.c[slot(a, b)] * FACT[a] * FACT[b]
    }

    /// Jet of `∂_u f`, valid one order lower (cubic slots are zeroed).
    pub fn d_du(&self) -> Jet {
        let mut out = [0.0; 10];
        for (i, &(a, b)) in JET_EXP.iter().enumerate() {
            if a + b <= 2 {
                out[i] = self.c[slot(a + 1, b)] * (a + 1) as f64;
            }
        }
        Jet { c: out }
    }

    /// Jet of `∂_v f`, valid one order lower.
    pub fn d_dv(&self) -> Jet {
        let mut out = [0.0; 10];
        for (i, &(a, b)) in JET_EXP.iter().enumerate() {
            if a + b <= 2 {
                out[i] = self.c[slot(a, b + 1)] * (b + 1) as f64;
            }
        }
        Jet { c: out }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut c = self.c;
        for x in &mut c {
            *x *= s;
        }
        Jet { c }
    }

    /// Composition `c0 + c1 r + c2 r² + c3 r³` where `r = self - self.value()`.
    ///
    /// `ck` must be the Taylor coefficients `f^(k)(a0)/k!` of the analytic
    /// function being applied at `a0 = self.value()`.
    fn series(&self, c0: f64, c1: f64, c2: f64, c3: f64) -> Jet {
        let mut r = *self;
        r.c[0] = 0.0;
        let r2 = r * r;
        let r3 = r2 * r;
        let mut out = r.scale(c1) + r2.scale(c2) + r3.scale(c3);
        out.c[0] += c0;
        out
    }

    pub fn recip(&self) -> Jet {
        let a = self.c[0];
        self.series(1.0 / a, -1.0 / (a * a), 1.0 / (a * a * a), -1.0 / (a * a * a * a))
    }

    pub fn sqrt(&self) -> Jet {
        let a = self.c[0];
        let s = a.sqrt();
        self.series(s, 0.5 / s, -1.0 / (8.0 * s * a), 1.0 / (16.0 * s * a * a))
    }

    pub fn exp(&self) -> Jet {
        let e = self.c[0].exp();
        self.series(e, e, e / 2.0, e / 6.0)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        self.series(s, c, -s / 2.0, -c / 6.0)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        self.series(c, -s, -c / 2.0, s / 6.0)
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut acc = Jet::constant(1.0);
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for i in 0..10 {
            c[i] += rhs.c[i];
        }
        Jet { c }
    }
}

impl std::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for i in 0..10 {
            c[i] -= rhs.c[i];
        }
        Jet { c }
    }
}

impl std::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = [0.0; 10];
        for (i, &(a1, b1)) in JET_EXP.iter().enumerate() {
            let x = self.c[i];
            if x == 0.0 {
                continue;
            }
            for (j, &(a2, b2)) in JET_EXP.iter().enumerate() {
                let (a, b) = (a1 + a2, b1 + b2);
                if a + b <= 3 {
                    out[slot(a, b)] += x * rhs.c[j];
                }
            }
        }
        Jet { c: out }
    }
}

impl std::ops::Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

/// Scalar ring shared by `f64` (plain evaluation) and [`Jet`] (derivative
/// propagation); lets ODE kernels run on either without duplication.
pub trait Ring: Copy {
    fn zero() -> Self;
    fn from_f64(x: f64) -> Self;
    fn value(&self) -> f64;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn neg(self) -> Self;
    fn scale_f64(self, s: f64) -> Self;
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn neg(self) -> Self {
        -self
    }
    fn scale_f64(self, s: f64) -> Self {
        self * s
    }
}

impl Ring for Jet {
    fn zero() -> Self {
        Jet::ZERO
    }
    fn from_f64(x: f64) -> Self {
        Jet::constant(x)
    }
    fn value(&self) -> f64 {
        self.c[0]
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn neg(self) -> Self {
        -self
    }
    fn scale_f64(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// Complex number over a scalar ring; `Cx<Jet>` is a complex-valued jet.
#[derive(Clone, Copy, Debug)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Ring> Cx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cx { re, im }
    }

    pub fn zero() -> Self {
        Cx { re: T::zero(), im: T::zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Cx { re: T::from_f64(re), im: T::from_f64(im) }
    }

    pub fn real(re: T) -> Self {
        Cx { re, im: T::zero() }
    }

    pub fn conj(self) -> Self {
        Cx { re: self.re, im: self.im.neg() }
    }

    /// Multiplication by `i`.
    pub fn mul_i(self) -> Self {
        Cx { re: self.im.neg(), im: self.re }
    }

    pub fn add(self, rhs: Self) -> Self {
        Cx { re: self.re.add(rhs.re), im: self.im.add(rhs.im) }
    }

    pub fn sub(self, rhs: Self) -> Self {
        Cx { re: self.re.sub(rhs.re), im: self.im.sub(rhs.im) }
    }

    pub fn neg(self) -> Self {
        Cx { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(self, rhs: Self) -> Self {
        Cx {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    /// Scale by a real ring element.
    pub fn scale(self, s: T) -> Self {
        Cx { re: self.re.mul(s), im: self.im.mul(s) }
    }

    pub fn scale_f64(self, s: f64) -> Self {
        Cx { re: self.re.scale_f64(s), im: self.im.scale_f64(s) }
    }

    /// `Re(self * conj(rhs))`, the real inner product of C as R².
    pub fn re_dot(self, rhs: Self) -> T {
        self.re.mul(rhs.re).add(self.im.mul(rhs.im))
    }

    pub fn norm_sq(self) -> T {
        self.re_dot(self)
    }

    pub fn value(&self) -> num_complex::Complex<f64> {
        num_complex::Complex::new(self.re.value(), self.im.value())
    }
}

impl Cx<Jet> {
    /// `e^{iθ}` for a real jet θ.
    pub fn exp_i(theta: Jet) -> Self {
        Cx { re: theta.cos(), im: theta.sin() }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Real inner product `Σ Re(u_k conj(v_k))` of two complex vectors.
pub fn vdot<T: Ring>(u: &[Cx<T>], v: &[Cx<T>]) -> T {
    let mut acc = T::zero();
    for (a, b) in u.iter().zip(v) {
        acc = acc.add(a.re_dot(*b));
    }
    acc
}

/// Entrywise multiplication by `i` (the ambient complex structure).
pub fn vmul_i<T: Ring>(u: &[Cx<T>]) -> Vec<Cx<T>> {
    u.iter().map(|x| x.mul_i()).collect()
}

/// `y + x·s` for a ring scalar `s`.
pub fn vaxpy<T: Ring>(y: &[Cx<T>], x: &[Cx<T>], s: T) -> Vec<Cx<T>> {
    y.iter().zip(x).map(|(a, b)| a.add(b.scale(s))).collect()
}

pub fn vadd<T: Ring>(a: &[Cx<T>], b: &[Cx<T>]) -> Vec<Cx<T>> {
    a.iter().zip(b).map(|(x, y)| x.add(*y)).collect()
}

pub fn vsub<T: Ring>(a: &[Cx<T>], b: &[Cx<T>]) -> Vec<Cx<T>> {
    a.iter().zip(b).map(|(x, y)| x.sub(*y)).collect()
}

pub fn vscale<T: Ring>(a: &[Cx<T>], s: T) -> Vec<Cx<T>> {
    a.iter().map(|x| x.scale(s)).collect()
}

pub fn vscale_f64<T: Ring>(a: &[Cx<T>], s: f64) -> Vec<Cx<T>> {
    a.iter().map(|x| x.scale_f64(s)).collect()
}

pub fn vzero<T: Ring>(n: usize) -> Vec<Cx<T>> {
    vec![Cx::zero(); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_partials_are_exact() {
        // f(u,v) = u³ + 2u²v - v² + 5
        let u = Jet::var_u(1.3);
        let v = Jet::var_v(-0.4);
        let f = u.powi(3) + (u * u * v).scale(2.0) - v * v + Jet::constant(5.0);
        let (x, y) = (1.3, -0.4);
        assert_relative_eq!(f.value(), x * x * x + 2.0 * x * x * y - y * y + 5.0, epsilon = 1e-15);
        assert_relative_eq!(f.partial(1, 0), 3.0 * x * x + 4.0 * x * y, epsilon = 1e-14);
        assert_relative_eq!(f.partial(0, 1), 2.0 * x * x - 2.0 * y, epsilon = 1e-14);
        assert_relative_eq!(f.partial(2, 0), 6.0 * x + 4.0 * y, epsilon = 1e-14);
        assert_relative_eq!(f.partial(1, 1), 4.0 * x, epsilon = 1e-14);
        assert_relative_eq!(f.partial(3, 0), 6.0, epsilon = 1e-14);
        assert_relative_eq!(f.partial(2, 1), 4.0, epsilon = 1e-14);
        assert_relative_eq!(f.partial(0, 3), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn transcendental_chain() {
        // f = exp(sin(u) cos(v)); check ∂_u and ∂_uv against closed forms.
        let (x, y) = (0.7, 0.3);
        let f = (Jet::var_u(x).sin() * Jet::var_v(y).cos()).exp();
        let g = (x.sin() * y.cos()).exp();
        assert_relative_eq!(f.value(), g, epsilon = 1e-15);
        assert_relative_eq!(f.partial(1, 0), g * x.cos() * y.cos(), epsilon = 1e-13);
        let duv = g * (x.cos() * y.cos()) * (-x.sin() * y.sin()) + g * (-x.cos() * y.sin());
        assert_relative_eq!(f.partial(1, 1), duv, epsilon = 1e-13);
    }

    #[test]
    fn division_and_sqrt_roundtrip() {
        let u = Jet::var_u(0.9);
        let v = Jet::var_v(2.1);
        let f = (u * u + v).sqrt();
        let back = f * f;
        let expect = u * u + v;
        for i in 0..10 {
            assert_relative_eq!(back.c[i], expect.c[i], epsilon = 1e-13);
        }
        let q = u / v;
        let back = q * v;
        for i in 0..10 {
            assert_relative_eq!(back.c[i], u.c[i], epsilon = 1e-13);
        }
    }

    #[test]
    fn derivative_extraction_shifts_coefficients() {
        let u = Jet::var_u(0.5);
        let v = Jet::var_v(1.5);
        let f = u.powi(2) * v + v.powi(3);
        let fu = f.d_du(); // 2uv
        assert_relative_eq!(fu.value(), 2.0 * 0.5 * 1.5, epsilon = 1e-15);
        assert_relative_eq!(fu.partial(1, 0), 2.0 * 1.5, epsilon = 1e-15);
        assert_relative_eq!(fu.partial(0, 1), 2.0 * 0.5, epsilon = 1e-15);
        assert_relative_eq!(fu.partial(1, 1), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn complex_jet_exp_i_is_unit() {
        let theta = Jet::var_u(0.4) + Jet::var_v(0.0).scale(2.0);
        let e = Cx::exp_i(theta);
        let n = e.norm_sq();
        assert_relative_eq!(n.value(), 1.0, epsilon = 1e-15);
        // |e|² is identically 1, so all derivative slots vanish.
        for i in 1..10 {
            assert!(n.c[i].abs() < 1e-14);
        }
    }
}
