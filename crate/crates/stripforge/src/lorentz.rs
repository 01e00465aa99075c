//! The Minkowski vector space R^{2,1}, the hyperboloid model of the
//! hyperbolic plane, oriented geodesics, and the isometry group.
//!
//! Conventions fixed here and used by the whole crate:
//!
//! * The bilinear form is `<v,w> = v1*w1 + v2*w2 - v3*w3`.
//! * The hyperbolic plane is the future sheet `{<p,p> = -1, p3 > 0}`.
//! * The Minkowski cross product is
//!   `v ^ w = (-v2*w3 + v3*w2, -v3*w1 + v1*w3, v1*w2 - v2*w1)`,
//!   characterized by `<u ^ v, w> = -det(u, v, w)`.
//! * The volume form used for orientation statements is
//!   `vol(u, v, w) = <u ^ v, w>`; a triple is *positively oriented* when
//!   `vol > 0`.  Under this convention, for a hyperbolic translation with
//!   Killing vector `V`, the triple (attracting endpoint, `V`, repelling
//!   endpoint) is positively oriented.
//! * Isometries are real 2x2 matrices normalized to `|det| = 1`, acting on
//!   Minkowski space by conjugation of traceless 2x2 matrices
//!   (`V ^ W` equals the matrix bracket, `<V,V> = -4 det`).  A matrix of
//!   determinant -1 conjugates to a time-reversing linear map; composing
//!   with `-1` on the hyperboloid yields the orientation-reversing
//!   hyperbolic isometry.  All group-element comparisons are projective
//!   (a matrix and its negative are the same isometry).
//! * An oriented geodesic stores its two ideal endpoints `left`, `right`
//!   (future lightlike vectors scaled to third coordinate 1); its normal is
//!   `left ^ right` and the *positive side* of the geodesic is where
//!   `<p, normal> > 0`.  Walking from `left` to `right`, the positive side
//!   is on the walker's left hand for the standard example: the geodesic
//!   below has `left = (0,-1,1)`, `right = (0,1,1)`, normal `(2,0,0)`,
//!   positive side `{x1 > 0}`.

use crate::error::{Error, Result};
use crate::tol;
use nalgebra::Matrix2;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A vector in R^{2,1} with signature (+, +, -).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkVec {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

/// Causal type of a vector, classified relative to its Euclidean size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    Zero,
    Lightlike,
    Timelike,
    Spacelike,
}

impl MinkVec {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        MinkVec { x1, x2, x3 }
    }

    pub const ZERO: MinkVec = MinkVec::new(0.0, 0.0, 0.0);

    /// The bilinear form `v1*w1 + v2*w2 - v3*w3`.
    pub fn inner(&self, w: &MinkVec) -> f64 {
        self.x1 * w.x1 + self.x2 * w.x2 - self.x3 * w.x3
    }

    /// `<v, v>`.
    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Euclidean norm-square, used to set relative scales.
    pub fn euclid_norm_sq(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Minkowski cross product, characterized by `<u ^ v, w> = -det(u,v,w)`.
    ///
    /// It satisfies `<v ^ w, v> = <v ^ w, w> = 0` and
    /// `<v ^ w, v ^ w> = <v,w>^2 - <v,v><w,w>`, and corresponds to the
    /// matrix bracket under [`to_sl2`].
    pub fn wedge(&self, w: &MinkVec) -> MinkVec {
        MinkVec::new(
            -self.x2 * w.x3 + self.x3 * w.x2,
            -self.x3 * w.x1 + self.x1 * w.x3,
            self.x1 * w.x2 - self.x2 * w.x1,
        )
    }

    /// Causal classification with a relative lightlike band.
    pub fn causal_class(&self) -> CausalClass {
        let scale = self.euclid_norm_sq();
        if scale == 0.0 {
            return CausalClass::Zero;
        }
        let ns = self.norm_sq();
        if ns.abs() <= tol::LIGHTLIKE_REL * scale {
            CausalClass::Lightlike
        } else if ns > 0.0 {
            CausalClass::Spacelike
        } else {
            CausalClass::Timelike
        }
    }

    /// Rescale a spacelike vector to `<v,v> = 1`.
    pub fn unit_spacelike(&self) -> Result<MinkVec> {
        let ns = self.norm_sq();
        if ns <= 0.0 {
            return Err(Error::CausalType(format!(
                "unit_spacelike: <v,v> = {ns} is not positive"
            )));
        }
        Ok(*self / ns.sqrt())
    }

    /// Rescale a lightlike vector to third coordinate 1 (must be future).
    pub fn lightlike_x3_one(&self) -> Result<MinkVec> {
        if self.causal_class() != CausalClass::Lightlike {
            return Err(Error::CausalType(format!(
                "lightlike_x3_one: vector {self:?} is not lightlike"
            )));
        }
        if self.x3 <= 0.0 {
            return Err(Error::CausalType(format!(
                "lightlike_x3_one: vector {self:?} is not future-pointing"
            )));
        }
        Ok(*self / self.x3)
    }
}

/// Orientation volume form: `vol(u, v, w) = <u ^ v, w>`.
///
/// A triple is called positively oriented when this is positive.
pub fn vol(u: &MinkVec, v: &MinkVec, w: &MinkVec) -> f64 {
    u.wedge(v).inner(w)
}

impl Add for MinkVec {
    type Output = MinkVec;
    fn add(self, w: MinkVec) -> MinkVec {
        MinkVec::new(self.x1 + w.x1, self.x2 + w.x2, self.x3 + w.x3)
    }
}

impl Sub for MinkVec {
    type Output = MinkVec;
    fn sub(self, w: MinkVec) -> MinkVec {
        MinkVec::new(self.x1 - w.x1, self.x2 - w.x2, self.x3 - w.x3)
    }
}

impl Neg for MinkVec {
    type Output = MinkVec;
    fn neg(self) -> MinkVec {
        MinkVec::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for MinkVec {
    type Output = MinkVec;
    fn mul(self, s: f64) -> MinkVec {
        MinkVec::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

impl Div<f64> for MinkVec {
    type Output = MinkVec;
    fn div(self, s: f64) -> MinkVec {
        MinkVec::new(self.x1 / s, self.x2 / s, self.x3 / s)
    }
}

/// Identify R^{2,1} with traceless 2x2 matrices:
/// `V -> [[V1/2, (V2+V3)/2], [(V2-V3)/2, -V1/2]]`.
///
/// Under this map the bracket `XY - YX` corresponds to [`MinkVec::wedge`]
/// and `det X = -<V,V>/4`.
pub fn to_sl2(v: &MinkVec) -> Matrix2<f64> {
    Matrix2::new(
        v.x1 / 2.0,
        (v.x2 + v.x3) / 2.0,
        (v.x2 - v.x3) / 2.0,
        -v.x1 / 2.0,
    )
}

/// Inverse of [`to_sl2`] on traceless matrices:
/// `V = (2*X11, X12 + X21, X12 - X21)`.
pub fn from_sl2(x: &Matrix2<f64>) -> MinkVec {
    MinkVec::new(2.0 * x[(0, 0)], x[(0, 1)] + x[(1, 0)], x[(0, 1)] - x[(1, 0)])
}

/// Exponential of a traceless 2x2 matrix in closed form.
///
/// Uses `X^2 = d I` with `d = -det X`, so
/// `exp X = c(d) I + s(d) X` where `c = cosh(sqrt d)`, `s = sinh(sqrt d)/sqrt d`
/// (trigonometric for `d < 0`, a series near `d = 0`).
pub fn sl2_exp(x: &Matrix2<f64>) -> Matrix2<f64> {
    let d = -x.determinant();
    let (c, s) = cosh_sinhc(d);
    Matrix2::identity() * c + x * s
}

/// `(cosh(sqrt d), sinh(sqrt d)/sqrt d)` for any real `d`, including the
/// trigonometric branch for negative `d` and a series near zero.
fn cosh_sinhc(d: f64) -> (f64, f64) {
    if d > 1e-12 {
        let r = d.sqrt();
        (r.cosh(), r.sinh() / r)
    } else if d < -1e-12 {
        let r = (-d).sqrt();
        (r.cos(), r.sin() / r)
    } else {
        // cosh(sqrt d) = 1 + d/2 + d^2/24, sinh(sqrt d)/sqrt d = 1 + d/6 + d^2/120
        (1.0 + d / 2.0 + d * d / 24.0, 1.0 + d / 6.0 + d * d / 120.0)
    }
}

/// `arcsinh(sqrt u)/sqrt u` for `u > 0`, `arcsin(sqrt -u)/sqrt -u` for
/// `u < 0`, series near zero.  This is the factor recovering `X` from the
/// traceless part of `exp X`.
fn logc(u: f64) -> f64 {
    if u > 1e-12 {
        let r = u.sqrt();
        r.asinh() / r
    } else if u < -1e-12 {
        let r = (-u).sqrt();
        r.asin() / r
    } else {
        1.0 - u / 6.0 + 3.0 * u * u / 40.0
    }
}

/// A point on the future sheet of the hyperboloid `<p,p> = -1`, `p3 > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint(MinkVec);

impl HPoint {
    /// The point `(0, 0, 1)`.
    pub const ORIGIN: HPoint = HPoint(MinkVec::new(0.0, 0.0, 1.0));

    /// Normalize a timelike vector onto the future sheet.
    pub fn from_timelike(v: &MinkVec) -> Result<HPoint> {
        let ns = v.norm_sq();
        if ns >= 0.0 {
            return Err(Error::CausalType(format!(
                "from_timelike: <v,v> = {ns} is not negative"
            )));
        }
        let p = *v / (-ns).sqrt();
        Ok(HPoint(if p.x3 > 0.0 { p } else { -p }))
    }

    pub fn vec(&self) -> MinkVec {
        self.0
    }

    /// Hyperbolic distance `arccosh(-<p,q>)`.
    pub fn dist(&self, q: &HPoint) -> f64 {
        let c = -self.0.inner(&q.0);
        if c <= 1.0 {
            0.0
        } else {
            c.acosh()
        }
    }
}

/// Classification of a Killing vector of the hyperbolic plane.
#[derive(Debug, Clone)]
pub enum KillingClass {
    Zero,
    /// Rotation about `center` with angular speed `velocity`.
    Elliptic { center: HPoint, velocity: f64 },
    /// Parabolic with ideal fixed point `fixed` (lightlike, third
    /// coordinate 1).
    Parabolic { fixed: MinkVec },
    /// Translation along the axis from `repel` to `attract` (both lightlike,
    /// third coordinate 1) with speed `velocity = sqrt(<V,V>)`.
    Hyperbolic {
        attract: MinkVec,
        repel: MinkVec,
        velocity: f64,
    },
}

/// Classify a Killing vector by causal type.
pub fn classify_killing(v: &MinkVec) -> KillingClass {
    match v.causal_class() {
        CausalClass::Zero => KillingClass::Zero,
        CausalClass::Lightlike => {
            let fixed = if v.x3 > 0.0 { *v } else { -*v };
            KillingClass::Parabolic {
                fixed: fixed / fixed.x3,
            }
        }
        CausalClass::Timelike => {
            let velocity = (-v.norm_sq()).sqrt();
            KillingClass::Elliptic {
                center: HPoint::from_timelike(v).expect("timelike"),
                velocity,
            }
        }
        CausalClass::Spacelike => {
            let (attract, repel) = attract_repel(v).expect("spacelike");
            KillingClass::Hyperbolic {
                attract,
                repel,
                velocity: v.norm_sq().sqrt(),
            }
        }
    }
}

/// The two ideal fixed points of the translation flow of a spacelike
/// Killing vector, as `(attracting, repelling)`, both scaled to third
/// coordinate 1.
///
/// They satisfy `V ^ a = sqrt(<V,V>) a` and `V ^ r = -sqrt(<V,V>) r`,
/// and `(a, V, r)` is positively oriented.
pub fn attract_repel(v: &MinkVec) -> Result<(MinkVec, MinkVec)> {
    let ns = v.norm_sq();
    if ns <= 0.0 {
        return Err(Error::CausalType(format!(
            "attract_repel: <V,V> = {ns} is not positive"
        )));
    }
    let t = MinkVec::new(0.0, 0.0, 1.0);
    // Projection of the hyperboloid basepoint onto the axis plane; always
    // future timelike.
    let p0 = t - *v * (t.inner(v) / ns);
    let p = HPoint::from_timelike(&p0)?.vec();
    let u = v.wedge(&p) / ns.sqrt();
    let a = p + u;
    let r = p - u;
    Ok((a / a.x3, r / r.x3))
}

/// The future lightlike vector representing the ideal boundary point
/// `[x : y]` of the projective line (upper half-plane boundary point `x/y`).
pub fn lightlike_from_boundary(x: f64, y: f64) -> MinkVec {
    // Rank-one traceless matrix annihilating (x, y); always future.
    from_sl2(&Matrix2::new(-x * y, x * x, -y * y, x * y))
}

/// An isometry of the hyperbolic plane: a real 2x2 matrix normalized to
/// `|det| = 1`, considered projectively (`g` and `-g` are equal).
///
/// Determinant +1 matrices act preserving orientation; determinant -1
/// matrices act reversing orientation (their conjugation action on
/// Minkowski space is time-reversing and the induced map on the future
/// sheet composes with the antipode).
#[derive(Debug, Clone, Copy)]
pub struct Isometry {
    m: Matrix2<f64>,
    /// Sign of the determinant, tracked algebraically.  Products of
    /// isometries can have entries large enough that the floating-point
    /// determinant (a difference of huge products) is pure cancellation
    /// noise, so neither the sign nor the scale of `det` is ever recomputed
    /// from entries after construction.
    sign: i8,
}

impl Isometry {
    pub fn identity() -> Isometry {
        Isometry {
            m: Matrix2::identity(),
            sign: 1,
        }
    }

    /// Normalize an invertible matrix to `|det| = 1`.  This is the only
    /// place a determinant is computed from entries; feed it
    /// well-conditioned input (entries of moderate size).
    pub fn from_matrix(m: &Matrix2<f64>) -> Result<Isometry> {
        let d = m.determinant();
        if d.abs() < 1e-100 || !d.is_finite() {
            return Err(Error::Numerical(format!(
                "from_matrix: determinant {d} is not invertible"
            )));
        }
        Ok(Isometry {
            m: m / d.abs().sqrt(),
            sign: if d >= 0.0 { 1 } else { -1 },
        })
    }

    /// The underlying matrix (normalized at construction, sign arbitrary).
    pub fn matrix(&self) -> Matrix2<f64> {
        self.m
    }

    /// `+1.0` for orientation-preserving, `-1.0` for orientation-reversing.
    pub fn det_sign(&self) -> f64 {
        f64::from(self.sign)
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    pub fn inverse(&self) -> Isometry {
        // For det = ±1 the inverse is ±adjugate, exactly.
        let m = self.m;
        let inv = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) * self.det_sign();
        Isometry {
            m: inv,
            sign: self.sign,
        }
    }

    /// Plain matrix product.  No renormalization: the product of
    /// `|det| = 1` matrices has `|det| = 1` up to negligible relative
    /// drift, whereas rescaling by a floating-point determinant of a
    /// large-entry matrix would inject its cancellation error into every
    /// entry.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            m: self.m * other.m,
            sign: self.sign * other.sign,
        }
    }

    /// Conjugation action on Minkowski space: `V -> g X(V) g^{-1}`.
    ///
    /// This is a linear map preserving the bilinear form and the cross
    /// product; for `det = -1` it is time-reversing.
    pub fn adjoint(&self, v: &MinkVec) -> MinkVec {
        let x = to_sl2(v);
        let gi = self.inverse();
        from_sl2(&(self.m * x * gi.m))
    }

    /// Action on the hyperbolic plane: conjugation followed by
    /// renormalization onto the future sheet.
    pub fn act(&self, p: &HPoint) -> HPoint {
        let w = self.adjoint(&p.vec());
        HPoint::from_timelike(&w).expect("image of timelike vector")
    }

    /// Projective comparison: smallest entrywise distance to `other` or
    /// `-other`.
    pub fn proj_dist(&self, other: &Isometry) -> f64 {
        let d1 = (self.m - other.m).abs().max();
        let d2 = (self.m + other.m).abs().max();
        d1.min(d2)
    }

    pub fn approx_eq(&self, other: &Isometry) -> bool {
        self.proj_dist(other) <= tol::EQ_PROJECTIVE
    }

    /// Translation length on the hyperbolic plane.
    ///
    /// Orientation-preserving: `2 arccosh(|tr|/2)` if `|tr| >= 2`, else 0.
    /// Orientation-reversing (glide reflection): `2 arcsinh(|tr|/2)`.
    pub fn translation_length(&self) -> f64 {
        let h = self.trace().abs() / 2.0;
        if self.det_sign() > 0.0 {
            if h >= 1.0 {
                2.0 * h.acosh()
            } else {
                0.0
            }
        } else {
            2.0 * h.asinh()
        }
    }

    /// Whether this is a hyperbolic translation (orientation-preserving
    /// with `|tr| > 2`), strictly.
    pub fn is_hyperbolic(&self) -> bool {
        self.det_sign() > 0.0 && self.trace().abs() > 2.0
    }

    /// The one-parameter group generated by a Killing vector.
    ///
    /// `exp_killing(V)` acts as: rotation by angle `sqrt(-<V,V>)` when `V`
    /// is timelike, translation by `sqrt(<V,V>)` when spacelike, parabolic
    /// when lightlike.
    pub fn exp_killing(v: &MinkVec) -> Isometry {
        Isometry {
            m: sl2_exp(&to_sl2(v)),
            sign: 1,
        }
    }

    /// Inverse of [`Isometry::exp_killing`] on orientation-preserving
    /// isometries, using the trace-positive lift.
    ///
    /// Elliptic rotation angles land in `(0, pi]`.  Errors on
    /// orientation-reversing input.
    pub fn log_killing(&self) -> Result<MinkVec> {
        if self.det_sign() < 0.0 {
            return Err(Error::CausalType(
                "log_killing: orientation-reversing isometry has no Killing logarithm".into(),
            ));
        }
        let m = if self.m.trace() < 0.0 { -self.m } else { self.m };
        let t = m.trace() / 2.0;
        let x0 = m - Matrix2::identity() * t;
        // m = cosh(s) I + (sinh s / s) X with s^2 = t^2 - 1 (possibly
        // negative); recover X = (s / sinh s) X0.
        let u = t * t - 1.0;
        Ok(from_sl2(&(x0 * logc(u))))
    }

    /// Hyperbolic square root: the unique hyperbolic `h` with `h^2 = g`
    /// (same axis, half the translation length).
    pub fn sqrt_hyperbolic(&self) -> Result<Isometry> {
        if !self.is_hyperbolic() {
            return Err(Error::CausalType(
                "sqrt_hyperbolic: isometry is not a hyperbolic translation".into(),
            ));
        }
        let m = if self.m.trace() < 0.0 { -self.m } else { self.m };
        let h = (m + Matrix2::identity()) / (m.trace() + 2.0).sqrt();
        Ok(Isometry { m: h, sign: 1 })
    }

    /// Real power of a hyperbolic translation: `exp(t log g)`, sharing the
    /// axis of `g`.
    pub fn pow_hyperbolic(&self, t: f64) -> Result<Isometry> {
        if !self.is_hyperbolic() {
            return Err(Error::CausalType(
                "pow_hyperbolic: isometry is not a hyperbolic translation".into(),
            ));
        }
        let v = self.log_killing()?;
        Ok(Isometry::exp_killing(&(v * t)))
    }

    /// The invariant geodesic: translation axis of a hyperbolic or glide
    /// isometry (oriented from repelling to attracting ideal point), or the
    /// mirror of a reflection (orientation as produced by its normal).
    pub fn axis(&self) -> Result<OrientedGeodesic> {
        if self.det_sign() > 0.0 {
            let v = self.log_killing()?;
            if v.causal_class() != CausalClass::Spacelike {
                return Err(Error::CausalType(
                    "axis: orientation-preserving isometry is not hyperbolic".into(),
                ));
            }
            OrientedGeodesic::from_normal(&v)
        } else if self.translation_length() > 0.0 {
            let v = self.compose(self).log_killing()?;
            OrientedGeodesic::from_normal(&v)
        } else {
            // Pure reflection: 2 X(n) for the unit spacelike mirror normal.
            let n = from_sl2(&self.m) / 2.0;
            OrientedGeodesic::from_normal(&n)
        }
    }

    /// Reflection of the hyperbolic plane across the geodesic orthogonal to
    /// the spacelike vector `n`.
    pub fn reflection(n: &MinkVec) -> Result<Isometry> {
        let nn = n.unit_spacelike()?;
        Ok(Isometry {
            m: to_sl2(&nn) * 2.0,
            sign: -1,
        })
    }

    /// Derivative at `t = 0` of `translation_length(exp_killing(tU) g)`.
    ///
    /// Requires `g` to have positive translation length.  `u` is the Killing
    /// vector of the insertion.
    pub fn dlength(&self, u: &MinkVec) -> Result<f64> {
        let m = if self.m.trace() < 0.0 { -self.m } else { self.m };
        let h = m.trace() / 2.0;
        let x = to_sl2(u);
        let num = (x * m).trace();
        if self.det_sign() > 0.0 {
            if h <= 1.0 {
                return Err(Error::CausalType(format!(
                    "dlength: |tr|/2 = {h} <= 1, length derivative undefined"
                )));
            }
            Ok(num / (h * h - 1.0).sqrt())
        } else {
            Ok(num / (h * h + 1.0).sqrt())
        }
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

/// An oriented complete geodesic of the hyperbolic plane, stored by its two
/// ideal endpoints (future lightlike vectors, third coordinate 1).
///
/// The normal is `left ^ right`; the *positive side* is
/// `{p : <p, left ^ right> > 0}`.  Reversing orientation swaps the sides.
#[derive(Debug, Clone, Copy)]
pub struct OrientedGeodesic {
    left: MinkVec,
    right: MinkVec,
}

impl OrientedGeodesic {
    /// Build from two distinct future lightlike endpoint representatives.
    pub fn from_endpoints(left: &MinkVec, right: &MinkVec) -> Result<OrientedGeodesic> {
        let l = left.lightlike_x3_one()?;
        let r = right.lightlike_x3_one()?;
        if (l - r).euclid_norm_sq() < 1e-24 {
            return Err(Error::InvalidInput(
                "from_endpoints: endpoints coincide".into(),
            ));
        }
        Ok(OrientedGeodesic { left: l, right: r })
    }

    /// The geodesic orthogonal to a spacelike vector `n`, oriented so that
    /// its normal is a positive multiple of `n`: `left` is the repelling and
    /// `right` the attracting ideal point of the translation flow of `n`.
    pub fn from_normal(n: &MinkVec) -> Result<OrientedGeodesic> {
        let (attract, repel) = attract_repel(n)?;
        OrientedGeodesic::from_endpoints(&repel, &attract)
    }

    pub fn left(&self) -> MinkVec {
        self.left
    }

    pub fn right(&self) -> MinkVec {
        self.right
    }

    /// `left ^ right`: spacelike, vanishing inner product with every point
    /// of the geodesic.
    pub fn normal(&self) -> MinkVec {
        self.left.wedge(&self.right)
    }

    /// The normal scaled to `<n,n> = 1`.
    pub fn unit_normal(&self) -> MinkVec {
        self.normal().unit_spacelike().expect("normals are spacelike")
    }

    /// Signed side of a point: positive on the positive side.
    pub fn side_of(&self, p: &HPoint) -> f64 {
        p.vec().inner(&self.unit_normal())
    }

    /// Perpendicular hyperbolic distance from a point:
    /// `arcsinh(|<p, unit normal>|)`.
    pub fn dist_to_point(&self, p: &HPoint) -> f64 {
        self.side_of(p).abs().asinh()
    }

    /// Reverse orientation (swaps endpoints, negates the normal, swaps the
    /// sides).
    pub fn reverse(&self) -> OrientedGeodesic {
        OrientedGeodesic {
            left: self.right,
            right: self.left,
        }
    }

    /// Transport by an isometry: endpoints map by the boundary action.
    ///
    /// For orientation-reversing `g` the positive side of the image is the
    /// image of the *negative* side (a reflection swaps left and right hands).
    pub fn transform(&self, g: &Isometry) -> OrientedGeodesic {
        let act_boundary = |v: &MinkVec| {
            let w = g.adjoint(v);
            if w.x3 > 0.0 {
                w
            } else {
                -w
            }
        };
        let l = act_boundary(&self.left);
        let r = act_boundary(&self.right);
        OrientedGeodesic::from_endpoints(&l, &r).expect("isometric image of a geodesic")
    }

    /// Unit-speed parametrization running from `left` (s -> -inf) to
    /// `right` (s -> +inf); `s = 0` is the point closest to the midpoint
    /// normalization of the chosen endpoint representatives.
    pub fn point_param(&self, s: f64) -> HPoint {
        let v = self.left * (-s).exp() + self.right * s.exp();
        HPoint::from_timelike(&v).expect("chord of distinct lightlike rays is timelike")
    }

    /// Foot of the perpendicular from `p`.
    pub fn project(&self, p: &HPoint) -> HPoint {
        let n = self.unit_normal();
        let q = p.vec() - n * p.vec().inner(&n);
        HPoint::from_timelike(&q).expect("projection stays timelike")
    }

    /// Whether the two geodesics cross transversally (strictly).
    pub fn crosses(&self, other: &OrientedGeodesic) -> bool {
        self.unit_normal().inner(&other.unit_normal()).abs() < 1.0 - 1e-12
    }

    /// Intersection point of two crossing geodesics.
    pub fn intersection(&self, other: &OrientedGeodesic) -> Option<HPoint> {
        let w = self.normal().wedge(&other.normal());
        if w.causal_class() == CausalClass::Timelike {
            Some(HPoint::from_timelike(&w).expect("timelike"))
        } else {
            None
        }
    }

    /// Angle of crossing in `(0, pi)`, measured so that `cos` equals the
    /// inner product of unit normals.
    pub fn crossing_angle(&self, other: &OrientedGeodesic) -> Option<f64> {
        let c = self.unit_normal().inner(&other.unit_normal());
        if c.abs() < 1.0 - 1e-12 {
            Some(c.acos())
        } else {
            None
        }
    }

    /// The common perpendicular geodesic of two disjoint geodesics,
    /// oriented so that its normal is `n1 ^ n2`.
    pub fn common_perpendicular(&self, other: &OrientedGeodesic) -> Result<OrientedGeodesic> {
        let w = self.normal().wedge(&other.normal());
        if w.causal_class() != CausalClass::Spacelike {
            return Err(Error::CausalType(
                "common_perpendicular: geodesics are not disjoint".into(),
            ));
        }
        OrientedGeodesic::from_normal(&w)
    }

    /// Distance between two disjoint geodesics (0 if they meet).
    pub fn dist_to_geodesic(&self, other: &OrientedGeodesic) -> f64 {
        let c = self.unit_normal().inner(&other.unit_normal()).abs();
        if c <= 1.0 {
            0.0
        } else {
            c.acosh()
        }
    }
}

/// The Killing vector of the unit-speed translation flow through `p`,
/// orthogonal to `line`, flowing toward the positive side of `line`,
/// scaled by `speed`.
///
/// `p` must lie on `line`.  The result is `speed * (p ^ unit_normal)`; it
/// lies in the quadrant of Killing vectors spanned positively by `left` and
/// `-right` (the translations moving `line` off itself toward its positive
/// side).
pub fn orthogonal_translation(
    line: &OrientedGeodesic,
    p: &HPoint,
    speed: f64,
) -> Result<MinkVec> {
    let n = line.unit_normal();
    if p.vec().inner(&n).abs() > tol::ON_TOL {
        return Err(Error::InvalidInput(
            "orthogonal_translation: base point is not on the line".into(),
        ));
    }
    Ok(p.vec().wedge(&n) * speed)
}
