//! Small 2×2 real-matrix helpers.

use crate::error::{GeomError, Result};

pub type Mat2 = [[f64; 2]; 2];

pub fn det(m: Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn trace(m: Mat2) -> f64 {
    m[0][0] + m[1][1]
}

pub fn frobenius(m: Mat2) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn sub(a: Mat2, b: Mat2) -> Mat2 {
    [[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]]
}

pub fn mul(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn scale(a: Mat2, s: f64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn apply(a: Mat2, v: [f64; 2]) -> [f64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

/// Inverse square root of a symmetric positive-definite 2×2 matrix.
pub fn inv_sqrt_sym(g: Mat2) -> Result<Mat2> {
    // eigen-decomposition of a symmetric 2×2
    let (a, b, c) = (g[0][0], g[0][1], g[1][1]);
    let tr = a + c;
    let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    if l2 <= 0.0 {
        return Err(GeomError::Degenerate("metric not positive definite".into()));
    }
    let (v1, v2) = if b.abs() > 1e-300 {
        ([l1 - c, b], [l2 - c, b])
    } else if a >= c {
        ([1.0, 0.0], [0.0, 1.0])
    } else {
        ([0.0, 1.0], [1.0, 0.0])
    };
    let norm = |v: [f64; 2]| {
        let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
        [v[0] / n, v[1] / n]
    };
    let (v1, v2) = (norm(v1), norm(v2));
    let (s1, s2) = (1.0 / l1.sqrt(), 1.0 / l2.sqrt());
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = s1 * v1[i] * v1[j] + s2 * v2[i] * v2[j];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn inv_sqrt_recovers_inverse() {
        let g = [[2.0, 0.5], [0.5, 1.0]];
        let m = inv_sqrt_sym(g).unwrap();
        // m g m = id
        let id = mul(mul(m, g), m);
        assert_relative_eq!(id[0][0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(id[1][1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(id[0][1], 0.0, epsilon = 1e-12);
    }
}
