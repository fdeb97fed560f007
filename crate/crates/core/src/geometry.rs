//! Two-dimensional vector and matrix algebra on flat tori.
//!
//! Column vectors (vertex coordinates, displacements) and row vectors (dual
//! coordinates, gradients) share the [`Vec2`] type; which one is meant is
//! fixed by the signature of each operation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A real 2-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// `det(self, other)`: the z-component of the cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An integer 2-vector: homology vectors and lattice translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IVec2 {
    pub x: i64,
    pub y: i64,
}

impl IVec2 {
    pub const ZERO: IVec2 = IVec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        IVec2 { x, y }
    }

    pub fn to_vec2(self) -> Vec2 {
        Vec2::new(self.x as f64, self.y as f64)
    }

    pub fn max_abs(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    /// Componentwise rounding; the caller guarantees `v` is near-integral.
    pub fn round(v: Vec2) -> IVec2 {
        IVec2::new(v.x.round() as i64, v.y.round() as i64)
    }
}

impl Add for IVec2 {
    type Output = IVec2;
    fn add(self, rhs: IVec2) -> IVec2 {
        IVec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for IVec2 {
    fn add_assign(&mut self, rhs: IVec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for IVec2 {
    type Output = IVec2;
    fn sub(self, rhs: IVec2) -> IVec2 {
        IVec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for IVec2 {
    type Output = IVec2;
    fn neg(self) -> IVec2 {
        IVec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for IVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A real 2×2 matrix `((a, b), (c, d))` with columns `(a, c)` and `(b, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    /// Counterclockwise quarter turn.
    pub const J: Mat2 = Mat2::new(0.0, -1.0, 1.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_cols(u: Vec2, v: Vec2) -> Self {
        Mat2::new(u.x, v.x, u.y, v.y)
    }

    pub fn col0(&self) -> Vec2 {
        Vec2::new(self.a, self.c)
    }

    pub fn col1(&self) -> Vec2 {
        Vec2::new(self.b, self.d)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Mat2::new(
            self.d / det,
            -self.b / det,
            -self.c / det,
            self.a / det,
        ))
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn mul_ivec(&self, k: IVec2) -> Vec2 {
        self.mul_vec(k.to_vec2())
    }

    /// Row vector times matrix: `r · self`.
    pub fn row_mul(&self, r: Vec2) -> Vec2 {
        Vec2::new(r.x * self.a + r.y * self.c, r.x * self.b + r.y * self.d)
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn approx_eq(&self, other: &Mat2, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), ({}, {}))", self.a, self.b, self.c, self.d)
    }
}

/// `v⊥ = (Jv)ᵀ`: maps the column `(x, y)` to the row `(−y, x)`.
pub fn perp(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// `A⊥ = (JA)ᵀ` for a 2×n matrix given by its columns; row `i` of the result
/// is `perp` of column `i`.
pub fn mat_perp(columns: &[Vec2]) -> Vec<Vec2> {
    columns.iter().copied().map(perp).collect()
}

/// The flat torus `𝕋_M`: the plane modulo the lattice spanned by the columns
/// of `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusShape {
    m: Mat2,
    inv: Mat2,
}

impl TorusShape {
    pub fn new(m: Mat2) -> Result<Self> {
        let det = m.det();
        if !m.is_finite() || !(det > 0.0) {
            return Err(Error::DegenerateShape { det });
        }
        let inv = m.inverse().ok_or(Error::DegenerateShape { det })?;
        Ok(TorusShape { m, inv })
    }

    pub fn square() -> Self {
        TorusShape {
            m: Mat2::IDENTITY,
            inv: Mat2::IDENTITY,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn inverse(&self) -> Mat2 {
        self.inv
    }

    pub fn det(&self) -> f64 {
        self.m.det()
    }

    pub fn u(&self) -> Vec2 {
        self.m.col0()
    }

    pub fn v(&self) -> Vec2 {
        self.m.col1()
    }

    /// `M⁻¹p`.
    pub fn lattice_coords(&self, p: Vec2) -> Vec2 {
        self.inv.mul_vec(p)
    }

    /// `M·k`.
    pub fn translation(&self, k: IVec2) -> Vec2 {
        self.m.mul_ivec(k)
    }

    /// Rounds `M⁻¹t` to the nearest lattice vector and reports the distance
    /// (in native units) from `t` to that lattice point.
    pub fn nearest_lattice(&self, t: Vec2) -> (IVec2, f64) {
        let k = IVec2::round(self.lattice_coords(t));
        (k, (t - self.translation(k)).norm())
    }
}

/// Splits `p` as `q + M·k` with `k` integral and `M⁻¹q ∈ [0,1)²`.
pub fn reduce_to_fundamental(p: Vec2, shape: &TorusShape) -> (Vec2, IVec2) {
    let s = shape.lattice_coords(p);
    let k = IVec2::new(s.x.floor() as i64, s.y.floor() as i64);
    if k == IVec2::ZERO {
        return (p, k);
    }
    (p - shape.translation(k), k)
}

/// Like [`reduce_to_fundamental`], but leaves points that are already inside
/// the closed domain up to `slack` lattice units where they are. Used when
/// canonicalizing stored coordinates, so that re-reducing a reduced point is a
/// no-op despite rounding in `M⁻¹`.
pub(crate) fn reduce_lenient(p: Vec2, shape: &TorusShape, slack: f64) -> (Vec2, IVec2) {
    let s = shape.lattice_coords(p);
    let axis = |t: f64| -> i64 {
        if t >= -slack && t <= 1.0 + slack {
            0
        } else {
            t.floor() as i64
        }
    };
    let k = IVec2::new(axis(s.x), axis(s.y));
    if k == IVec2::ZERO {
        return (p, k);
    }
    (p - shape.translation(k), k)
}
