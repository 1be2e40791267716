//! Real quaternions, their simplex/perplex split and the `χ` embedding into
//! 2×2 complex matrices.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmatrix::ComplexMatrix;

/// A quaternion `x0 + x1 i + x2 j + x3 k`.
///
/// Serialized as the JSON array `[x0, x1, x2, x3]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(v: [f64; 4]) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Quaternion::real(r)
    }
}

impl From<Complex64> for Quaternion {
    fn from(z: Complex64) -> Self {
        Quaternion::new(z.re, z.im, 0.0, 0.0)
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Quaternion { x0, x1, x2, x3 }
    }

    pub const fn real(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    /// The unit complex number `e^{iφ}` viewed as a quaternion.
    pub fn exp_i(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Quaternion::new(c, s, 0.0, 0.0)
    }

    /// Rebuilds `x' + x'' j` from its simplex and perplex parts.
    pub fn from_parts(simplex: Complex64, perplex: Complex64) -> Self {
        Quaternion::new(simplex.re, simplex.im, perplex.re, perplex.im)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Modulus `|x|`.
    pub fn norm(self) -> f64 {
        self.x0.hypot(self.x1).hypot(self.x2.hypot(self.x3))
    }

    /// `conj(x) / |x|²`. Not finite for `x = 0`.
    pub fn inv(self) -> Self {
        self.conj() / self.norm_sqr()
    }

    pub fn re(self) -> f64 {
        self.x0
    }

    /// Imaginary part `x1 i + x2 j + x3 k`.
    pub fn im(self) -> Self {
        Quaternion::new(0.0, self.x1, self.x2, self.x3)
    }

    /// `x' = x0 + x1 i`.
    pub fn simplex(self) -> Complex64 {
        Complex64::new(self.x0, self.x1)
    }

    /// `x'' = x2 + x3 i`, so that `x = x' + x'' j`.
    pub fn perplex(self) -> Complex64 {
        Complex64::new(self.x2, self.x3)
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x0
            .abs()
            .max(self.x1.abs())
            .max(self.x2.abs())
            .max(self.x3.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// `χ(x) = [[x', −x''], [conj(x''), conj(x')]]`.
    pub fn chi(self) -> ComplexMatrix {
        let s = self.simplex();
        let p = self.perplex();
        ComplexMatrix::from_rows(&[&[s, -p], &[p.conj(), s.conj()]])
    }

    /// First column of `χ(x)`: `[x', conj(x'')]`.
    pub fn chi_column(self) -> [Complex64; 2] {
        [self.simplex(), self.perplex().conj()]
    }

    /// Inverse of [`Quaternion::chi_column`].
    pub fn from_chi_column(col: [Complex64; 2]) -> Self {
        Quaternion::from_parts(col[0], col[1].conj())
    }

    /// Reads a quaternion back from a 2×2 block in the image of `χ`,
    /// starting at `(row, col)` of `m`.
    pub fn from_chi_block(m: &ComplexMatrix, row: usize, col: usize) -> Self {
        Quaternion::from_parts(m[(row, col)], -m[(row, col + 1)])
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:+}i {:+}j {:+}k",
            self.x0, self.x1, self.x2, self.x3
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.x0 + o.x0,
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.x3 + o.x3,
        )
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.x0 - o.x0,
            self.x1 - o.x1,
            self.x2 - o.x2,
            self.x3 - o.x3,
        )
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (self.x0, self.x1, self.x2, self.x3);
        let (b0, b1, b2, b3) = (o.x0, o.x1, o.x2, o.x3);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, r: f64) -> Quaternion {
        Quaternion::new(self.x0 * r, self.x1 * r, self.x2 * r, self.x3 * r)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, r: f64) -> Quaternion {
        Quaternion::new(self.x0 / r, self.x1 / r, self.x2 / r, self.x3 / r)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |acc, q| acc + q)
    }
}

pub fn qmul(x: Quaternion, y: Quaternion) -> Quaternion {
    x * y
}

pub fn qconj(x: Quaternion) -> Quaternion {
    x.conj()
}

pub fn modulus(x: Quaternion) -> f64 {
    x.norm()
}

pub fn chi_scalar(x: Quaternion) -> ComplexMatrix {
    x.chi()
}

/// A 2×2 matrix of quaternions, row-major.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QMat2(pub [[Quaternion; 2]; 2]);

impl QMat2 {
    pub const ZERO: QMat2 = QMat2([[Quaternion::ZERO; 2]; 2]);
    pub const IDENTITY: QMat2 = QMat2([
        [Quaternion::ONE, Quaternion::ZERO],
        [Quaternion::ZERO, Quaternion::ONE],
    ]);

    pub fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        QMat2([[a, b], [c, d]])
    }

    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.0[r][c]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QMat2 {
        let m = &self.0;
        QMat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    /// Left-multiplies `scale` into every entry.
    pub fn scale_left(&self, scale: Quaternion) -> QMat2 {
        let m = &self.0;
        QMat2::new(
            scale * m[0][0],
            scale * m[0][1],
            scale * m[1][0],
            scale * m[1][1],
        )
    }

    pub fn apply(&self, v: [Quaternion; 2]) -> [Quaternion; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entrywise quaternion modulus of `self − other`.
    pub fn max_diff(&self, other: &QMat2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn chi(&self) -> ComplexMatrix {
        chi_matrix(&[&self.0[0][..], &self.0[1][..]])
    }

    /// Reads back a 4×4 complex matrix in the image of `χ`.
    pub fn from_chi(m: &ComplexMatrix) -> QMat2 {
        assert_eq!((m.rows(), m.cols()), (4, 4));
        let e = |r: usize, c: usize| Quaternion::from_chi_block(m, 2 * r, 2 * c);
        QMat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Add for QMat2 {
    type Output = QMat2;
    fn add(self, o: QMat2) -> QMat2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.0[r][c] += o.0[r][c];
            }
        }
        out
    }
}

impl Mul for QMat2 {
    type Output = QMat2;
    fn mul(self, o: QMat2) -> QMat2 {
        let a = &self.0;
        let b = &o.0;
        QMat2(std::array::from_fn(|r| {
            std::array::from_fn(|c| a[r][0] * b[0][c] + a[r][1] * b[1][c])
        }))
    }
}

impl Mul<f64> for QMat2 {
    type Output = QMat2;
    fn mul(self, s: f64) -> QMat2 {
        let mut out = self;
        for row in out.0.iter_mut() {
            for q in row.iter_mut() {
                *q = *q * s;
            }
        }
        out
    }
}

/// Blockwise `χ` of an `n×n` quaternion matrix given as rows (`n ≤ 4`).
pub fn chi_matrix(rows: &[&[Quaternion]]) -> ComplexMatrix {
    let n = rows.len();
    assert!(
        n <= 4,
        "chi_matrix supports at most 4x4 quaternion matrices"
    );
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    for (r, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n, "quaternion matrix must be square");
        for (c, q) in row.iter().enumerate() {
            out.set_block(2 * r, 2 * c, &q.chi());
        }
    }
    out
}
