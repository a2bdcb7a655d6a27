//! Upper half-space and upper half-plane geometry.
//!
//! Points of hyperbolic 3-space live in the upper half-space model
//! `{(z, t) : z in C, t > 0}`; `SL2(C)` acts isometrically through the
//! Poincare extension of homographies. The hyperbolic plane attached to an
//! indefinite form with nonzero leading coefficient is the halfsphere over
//! its boundary circle; an intrinsic chart maps it isometrically to the upper
//! half-plane, where point reduction and Dirichlet domains are computed.

use num_complex::Complex;
use thiserror::Error;

use crate::forms::{complete_unimodular, FormClass, HermitianForm, UniMat};
use crate::ring::{is_coprime_pair, QuadInt};
use crate::scalar::Real;

pub mod dirichlet;

pub use dirichlet::{
    dirichlet_domain_area, dirichlet_domain_area_stable, DirichletPolygon, DomainQuality,
    PolygonVertex,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("geometric operation requires a nonzero leading coefficient")]
    DegenerateLeadingCoefficient,
    #[error("cusp lies on the boundary circle of the plane")]
    CuspOnCircle,
    #[error("pair is not coprime")]
    NonCoprimePair,
    #[error("form is not indefinite (discriminant {0})")]
    NotIndefinite(i64),
    #[error("matrix does not preserve the plane (imaginary residue {0})")]
    NotPlanePreserving(f64),
    #[error("Dirichlet polygon fails to close (free boundary gap {gap:.3e} rad); add generators or deepen the search")]
    PolygonNotClosed { gap: f64 },
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
}

/// A point of the upper half-space model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H3Point<R> {
    pub z: Complex<R>,
    pub t: R,
}

impl<R: Real> H3Point<R> {
    pub fn new(z: Complex<R>, t: R) -> H3Point<R> {
        assert!(t > R::zero(), "height must be positive");
        H3Point { z, t }
    }
}

/// Hyperbolic distance: `cosh d = 1 + (|z1 - z2|^2 + (t1 - t2)^2) / (2 t1 t2)`.
pub fn h3_distance<R: Real>(p: &H3Point<R>, q: &H3Point<R>) -> R {
    let dz = p.z - q.z;
    let dt = p.t - q.t;
    let two = R::from_f64_lossy(2.0);
    let c = R::one() + (dz.norm_sqr() + dt * dt) / (two * p.t * q.t);
    c.max(R::one()).acosh()
}

/// A determinant-normalized element of `SL2(C)` acting on the half-space.
#[derive(Debug, Clone, Copy)]
pub struct Mobius<R> {
    pub a: Complex<R>,
    pub b: Complex<R>,
    pub c: Complex<R>,
    pub d: Complex<R>,
}

impl<R: Real> Mobius<R> {
    /// Scales the entries so the determinant becomes 1.
    pub fn new(a: Complex<R>, b: Complex<R>, c: Complex<R>, d: Complex<R>) -> Mobius<R> {
        let det = a * d - b * c;
        debug_assert!(det.norm() > R::from_f64_lossy(1e-300), "singular matrix");
        let s = det.sqrt().inv();
        Mobius {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        }
    }

    pub fn identity() -> Mobius<R> {
        Mobius {
            a: Complex::new(R::one(), R::zero()),
            b: Complex::new(R::zero(), R::zero()),
            c: Complex::new(R::zero(), R::zero()),
            d: Complex::new(R::one(), R::zero()),
        }
    }

    pub fn from_unimat(g: &UniMat) -> Mobius<R> {
        let [alpha, beta, gamma, delta] = g.entries();
        Mobius {
            a: alpha.to_complex(),
            b: beta.to_complex(),
            c: gamma.to_complex(),
            d: delta.to_complex(),
        }
    }

    pub fn inverse(&self) -> Mobius<R> {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn compose(&self, rhs: &Mobius<R>) -> Mobius<R> {
        Mobius {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Poincare extension to the upper half-space.
    pub fn apply_h3(&self, p: &H3Point<R>) -> H3Point<R> {
        let num = self.a * p.z + self.b;
        let den = self.c * p.z + self.d;
        let q = den.norm_sqr() + self.c.norm_sqr() * p.t * p.t;
        let z = (num * den.conj() + self.a * self.c.conj() * p.t * p.t) / q;
        H3Point::new(z, p.t / q)
    }

    /// Homography on the boundary; `None` at the pole.
    pub fn apply_boundary(&self, z: Complex<R>) -> Option<Complex<R>> {
        let den = self.c * z + self.d;
        if den.norm() < R::from_f64_lossy(1e-14) {
            return None;
        }
        Some((self.a * z + self.b) / den)
    }
}

/// A Euclidean circle in the boundary plane.
#[derive(Debug, Clone, Copy)]
pub struct EuclideanCircle<R> {
    pub center: Complex<R>,
    pub radius: R,
}

impl<R: Real> EuclideanCircle<R> {
    /// Image under a Mobius map, or `None` when the pole lies on the circle
    /// (the image being a line).
    ///
    /// The image center is the image of the inversion of the pole in the
    /// circle; the radius comes from the image of the circle point farthest
    /// from the pole.
    pub fn image_under(&self, m: &Mobius<R>) -> Option<EuclideanCircle<R>> {
        let affine = m.c.norm() < R::from_f64_lossy(1e-14);
        if affine {
            let scale = (m.a / m.d).norm();
            return Some(EuclideanCircle {
                center: (m.a * self.center + m.b) / m.d,
                radius: self.radius * scale,
            });
        }
        let pole = -m.d / m.c;
        let dp = pole - self.center;
        let dist = dp.norm();
        if (dist - self.radius).abs() < R::from_f64_lossy(1e-12) * (R::one() + self.radius) {
            return None;
        }
        // Image center = image of the inversion of the pole in the circle;
        // when the pole sits at the center, that inversion is infinity.
        let center = if dist > R::from_f64_lossy(1e-14) {
            let inv_pole = self.center
                + dp.conj().inv() * Complex::new(self.radius * self.radius, R::zero());
            m.apply_boundary(inv_pole)?
        } else {
            m.a / m.c
        };
        let far = if dist > R::from_f64_lossy(1e-14) {
            self.center - dp / dist * self.radius
        } else {
            self.center + Complex::new(self.radius, R::zero())
        };
        let on_image = m.apply_boundary(far)?;
        Some(EuclideanCircle {
            center,
            radius: (on_image - center).norm(),
        })
    }
}

/// Geometric realization of the plane attached to a form.
#[derive(Debug, Clone, Copy)]
pub enum PlaneGeometry<R> {
    Halfsphere { center: Complex<R>, radius: R },
    /// Vertical plane over the real line `p0 + s * dir`.
    VerticalPlane { p0: Complex<R>, dir: Complex<R> },
}

/// The totally geodesic plane `{ f(z,1) + |a| t^2 = 0 }` of an indefinite form.
#[derive(Debug, Clone, Copy)]
pub struct PlaneOfForm<R> {
    form: HermitianForm,
    geometry: PlaneGeometry<R>,
}

impl<R: Real> PlaneOfForm<R> {
    pub fn from_form(f: &HermitianForm) -> Result<PlaneOfForm<R>, GeomError> {
        if f.classify() != FormClass::Indefinite {
            return Err(GeomError::NotIndefinite(f.discriminant()));
        }
        let geometry = if f.a() != 0 {
            let a = R::from_i64_lossy(f.a());
            let center = -f.b().conj().to_complex::<R>() / a;
            let radius = R::from_i64_lossy(f.discriminant()).sqrt() / a.abs();
            PlaneGeometry::Halfsphere { center, radius }
        } else {
            // 2 Re(b z) + c = 0: base point -c*conj(b)/(2|b|^2), direction i*conj(b).
            let b = f.b().to_complex::<R>();
            let c = R::from_i64_lossy(f.c());
            let p0 = b.conj() * (-c / (R::from_f64_lossy(2.0) * b.norm_sqr()));
            let dir = Complex::new(R::zero(), R::one()) * b.conj() / b.norm();
            PlaneGeometry::VerticalPlane { p0, dir }
        };
        Ok(PlaneOfForm { form: *f, geometry })
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn geometry(&self) -> &PlaneGeometry<R> {
        &self.geometry
    }

    /// Scaled residual of the defining equation at a point; zero on the plane.
    pub fn residual(&self, p: &H3Point<R>) -> R {
        let a = R::from_i64_lossy(self.form.a());
        let b = self.form.b().to_complex::<R>();
        let c = R::from_i64_lossy(self.form.c());
        let two = R::from_f64_lossy(2.0);
        let value = a * p.z.norm_sqr() + two * (b * p.z).re + c + a.abs() * p.t * p.t;
        let scale = a.abs() * (p.z.norm_sqr() + p.t * p.t)
            + two * b.norm() * p.z.norm()
            + c.abs()
            + R::one();
        value.abs() / scale
    }

    /// Apex of the halfsphere, the unique highest point of the plane.
    pub fn apex(&self) -> Result<H3Point<R>, GeomError> {
        match self.geometry {
            PlaneGeometry::Halfsphere { center, radius } => Ok(H3Point::new(center, radius)),
            PlaneGeometry::VerticalPlane { .. } => Err(GeomError::DegenerateLeadingCoefficient),
        }
    }
}

/// A horoball based at a cusp of `P^1(K)`, normalized as the image of the
/// height-1 horoball at infinity under any matrix sending `(1,0)` to the
/// defining coprime pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuspHoroball {
    u: QuadInt,
    v: QuadInt,
}

impl CuspHoroball {
    pub fn new(u: QuadInt, v: QuadInt) -> Result<CuspHoroball, GeomError> {
        if !is_coprime_pair(&u, &v).map_err(|_| GeomError::NonCoprimePair)? {
            return Err(GeomError::NonCoprimePair);
        }
        Ok(CuspHoroball { u, v })
    }

    pub fn at_infinity(field: crate::ring::Field) -> CuspHoroball {
        CuspHoroball {
            u: field.one(),
            v: field.zero(),
        }
    }

    pub fn pair(&self) -> (QuadInt, QuadInt) {
        (self.u, self.v)
    }

    pub fn is_at_infinity(&self) -> bool {
        self.v.is_zero()
    }

    /// Euclidean diameter `1/N(v)` for a finite cusp.
    pub fn diameter(&self) -> Option<num_rational::Ratio<i64>> {
        if self.v.is_zero() {
            None
        } else {
            Some(num_rational::Ratio::new(1, self.v.norm()))
        }
    }

    /// A matrix with `g . (1,0) = (u,v)`, mapping the standard horoball here.
    pub fn completion(&self) -> UniMat {
        complete_unimodular(&self.u, &self.v).expect("coprime pair completes")
    }
}

/// Signed length `ln(|f(u,v)| / sqrt(Delta))` of the common perpendicular
/// between the plane of `f` and the horoball at `u/v`; minus infinity when
/// the value vanishes (the cusp then lies on the boundary circle).
pub fn perp_length_pair<R: Real>(
    f: &HermitianForm,
    u: &QuadInt,
    v: &QuadInt,
) -> Result<R, GeomError> {
    if f.classify() != FormClass::Indefinite {
        return Err(GeomError::NotIndefinite(f.discriminant()));
    }
    if !is_coprime_pair(u, v).map_err(|_| GeomError::NonCoprimePair)? {
        return Err(GeomError::NonCoprimePair);
    }
    let value = f.eval(u, v);
    if value == 0 {
        return Ok(R::neg_infinity());
    }
    let delta = R::from_i64_lossy(f.discriminant());
    Ok(R::from_i64_lossy(value.abs()).ln() - delta.ln() / R::from_f64_lossy(2.0))
}

/// Foot on the plane of the common perpendicular to a cusp horoball, with its
/// signed length (negative when the foot lies inside the horoball).
///
/// The perpendicular to the halfsphere from a boundary point is the geodesic
/// joining the cusp to its inversion in the boundary circle; the foot is its
/// crossing with the halfsphere. The length is the signed distance from the
/// foot to the horosphere, `ln((|z - p|^2 + t^2) / (diameter * t))` at a
/// finite cusp `p` and `-ln t` at infinity. Everything stays in quantities of
/// the size of the plane itself, so no precision is lost for pairs with
/// large entries.
pub fn foot_of_perpendicular<R: Real>(
    plane: &PlaneOfForm<R>,
    hb: &CuspHoroball,
) -> Result<(H3Point<R>, R), GeomError> {
    let PlaneGeometry::Halfsphere { center, radius } = plane.geometry else {
        return Err(GeomError::DegenerateLeadingCoefficient);
    };
    let (u, v) = hb.pair();
    if plane.form.eval(&u, &v) == 0 {
        return Err(GeomError::CuspOnCircle);
    }
    if hb.is_at_infinity() {
        let apex = H3Point::new(center, radius);
        return Ok((apex, -radius.ln()));
    }
    let p = u.to_complex::<R>() / v.to_complex::<R>();
    let zeta = p - center;
    let dist = zeta.norm();
    let foot = if dist < R::from_f64_lossy(1e-14) {
        // Cusp under the apex: the perpendicular is the vertical line.
        H3Point::new(center, radius)
    } else {
        // The cusp and its inversion lie on one ray from the center, at
        // parameters s1 and s2; the geodesic between them is the semicircle
        // over that segment, and it crosses the halfsphere at the angle
        // determined below.
        let s1 = dist;
        let s2 = radius * radius / dist;
        let two = R::from_f64_lossy(2.0);
        let mid = (s1 + s2) / two;
        let rg = (s1 - s2).abs() / two;
        let cos_t = ((radius * radius - mid * mid - rg * rg) / (two * mid * rg))
            .max(-R::one())
            .min(R::one());
        let sin_t = (R::one() - cos_t * cos_t).max(R::zero()).sqrt();
        let dir = zeta / dist;
        H3Point::new(center + dir * (mid + rg * cos_t), rg * sin_t)
    };
    let dia = R::one() / R::from_i64_lossy(v.norm());
    let length = (((foot.z - p).norm_sqr() + foot.t * foot.t) / (dia * foot.t)).ln();
    Ok((foot, length))
}

/// A point of the upper half-plane, `re = x`, `im = t > 0`.
pub type H2Point<R> = Complex<R>;

/// Hyperbolic plane distance.
pub fn h2_distance<R: Real>(p: &H2Point<R>, q: &H2Point<R>) -> R {
    (R::one() + h2_cosh_m1(p, q)).acosh()
}

/// `cosh(distance) - 1`, a cheap monotone surrogate for comparisons.
pub fn h2_cosh_m1<R: Real>(p: &H2Point<R>, q: &H2Point<R>) -> R {
    let two = R::from_f64_lossy(2.0);
    ((p - q).norm_sqr() / (two * p.im * q.im)).max(R::zero())
}

/// An orientation-preserving isometry of the upper half-plane, as a real
/// matrix with determinant 1 acting by homography.
#[derive(Debug, Clone, Copy)]
pub struct H2Isometry<R> {
    pub m: [R; 4],
}

impl<R: Real> H2Isometry<R> {
    pub fn identity() -> H2Isometry<R> {
        H2Isometry {
            m: [R::one(), R::zero(), R::zero(), R::one()],
        }
    }

    pub fn new(m: [R; 4]) -> H2Isometry<R> {
        let det = m[0] * m[3] - m[1] * m[2];
        debug_assert!(det > R::zero(), "needs positive determinant");
        let s = det.sqrt().recip();
        H2Isometry {
            m: [m[0] * s, m[1] * s, m[2] * s, m[3] * s],
        }
    }

    pub fn apply(&self, z: &H2Point<R>) -> H2Point<R> {
        let num = z * self.m[0] + self.m[1];
        let den = z * self.m[2] + self.m[3];
        num / den
    }

    pub fn compose(&self, rhs: &H2Isometry<R>) -> H2Isometry<R> {
        let a = &self.m;
        let b = &rhs.m;
        H2Isometry {
            m: [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ],
        }
    }

    pub fn inverse(&self) -> H2Isometry<R> {
        H2Isometry {
            m: [self.m[3], -self.m[1], -self.m[2], self.m[0]],
        }
    }
}

/// Isometric chart between the plane of a form and the upper half-plane.
///
/// Composition of the similarity sending the plane to the reference
/// halfsphere of its discriminant with a fixed Mobius map sending that
/// halfsphere to the vertical plane over the real line.
#[derive(Debug, Clone)]
pub struct PlaneChart<R> {
    form: HermitianForm,
    to_plane_map: Mobius<R>,
    from_plane_map: Mobius<R>,
}

impl<R: Real> PlaneChart<R> {
    pub fn new(f: &HermitianForm) -> Result<PlaneChart<R>, GeomError> {
        if f.classify() != FormClass::Indefinite {
            return Err(GeomError::NotIndefinite(f.discriminant()));
        }
        if f.a() == 0 {
            return Err(GeomError::DegenerateLeadingCoefficient);
        }
        let work = if f.a() > 0 { *f } else { -*f };
        let sqrt_a = R::from_i64_lossy(work.a()).sqrt();
        let b_conj = work.b().conj().to_complex::<R>();
        let zero = Complex::new(R::zero(), R::zero());
        // Sends the plane of `work` to the halfsphere of radius sqrt(Delta).
        let g_inv = Mobius::new(
            Complex::new(sqrt_a, R::zero()),
            b_conj / sqrt_a,
            zero,
            Complex::new(sqrt_a.recip(), R::zero()),
        );
        let r = R::from_i64_lossy(work.discriminant()).sqrt();
        // Sends the halfsphere |z| = r to the vertical plane over R:
        // three boundary points r, i r, -r go to 0, 1, infinity.
        let i = Complex::new(R::zero(), R::one());
        let h = Mobius::new(
            -i,
            i * r,
            Complex::new(R::one(), R::zero()),
            Complex::new(r, R::zero()),
        );
        let to_plane_map = h.compose(&g_inv);
        let from_plane_map = to_plane_map.inverse();
        Ok(PlaneChart {
            form: *f,
            to_plane_map,
            from_plane_map,
        })
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    /// Chart coordinates of a point on the plane, with the transverse
    /// imaginary residue (zero for points exactly on the plane).
    pub fn to_plane(&self, p: &H3Point<R>) -> (H2Point<R>, R) {
        let q = self.to_plane_map.apply_h3(p);
        (Complex::new(q.z.re, q.t), q.z.im.abs())
    }

    pub fn from_plane(&self, p: &H2Point<R>) -> H3Point<R> {
        self.from_plane_map
            .apply_h3(&H3Point::new(Complex::new(p.re, R::zero()), p.im))
    }

    /// Conjugates an automorph of the form into a real plane isometry.
    ///
    /// The conjugated matrix is real up to a scalar phase; after removing the
    /// phase its determinant must be positive (automorphs preserve the two
    /// sides of the plane).
    pub fn isometry(&self, g: &UniMat) -> Result<H2Isometry<R>, GeomError> {
        let conj = self
            .to_plane_map
            .compose(&Mobius::from_unimat(g))
            .compose(&self.from_plane_map);
        let entries = [conj.a, conj.b, conj.c, conj.d];
        let lead = entries
            .iter()
            .copied()
            .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
            .unwrap();
        let phase = lead / lead.norm();
        let scaled: Vec<Complex<R>> = entries.iter().map(|e| e / phase).collect();
        let size = scaled.iter().map(|e| e.norm()).fold(R::zero(), R::max);
        let residue = scaled
            .iter()
            .map(|e| e.im.abs())
            .fold(R::zero(), R::max)
            / size;
        if residue > R::from_f64_lossy(1e-8) {
            return Err(GeomError::NotPlanePreserving(residue.to_f64().unwrap()));
        }
        let m = [scaled[0].re, scaled[1].re, scaled[2].re, scaled[3].re];
        let det = m[0] * m[3] - m[1] * m[2];
        if det <= R::zero() {
            return Err(GeomError::NotPlanePreserving(-1.0));
        }
        Ok(H2Isometry::new(m))
    }
}

/// Greedy Dirichlet reduction: repeatedly applies the generator that most
/// decreases the distance to the base point, while the decrease exceeds
/// `tol`. The returned word lists generator indices in application order, so
/// the exact product (last to first) maps the input to the output.
pub fn reduce_point<R: Real>(
    p: &H2Point<R>,
    gens: &[H2Isometry<R>],
    base: &H2Point<R>,
    tol: R,
) -> (H2Point<R>, Vec<usize>) {
    let mut current = *p;
    let mut dist = h2_distance(&current, base);
    let mut word = Vec::new();
    for _ in 0..100_000 {
        // Improvement is judged on cosh(d) - 1, monotone in d.
        let target = ((dist - tol).max(R::zero())).cosh() - R::one();
        let mut best: Option<(usize, H2Point<R>, R)> = None;
        for (i, g) in gens.iter().enumerate() {
            let q = g.apply(&current);
            let c = h2_cosh_m1(&q, base);
            if c < target && best.as_ref().is_none_or(|(_, _, bc)| c < *bc) {
                best = Some((i, q, c));
            }
        }
        match best {
            Some((i, q, c)) => {
                current = q;
                dist = (R::one() + c).acosh();
                word.push(i);
            }
            None => break,
        }
    }
    (current, word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;

    fn qi() -> Field {
        Field::gaussian()
    }

    fn f2() -> HermitianForm {
        HermitianForm::reference(qi(), 2)
    }

    fn pt(x: f64, y: f64, t: f64) -> H3Point<f64> {
        H3Point::new(Complex::new(x, y), t)
    }

    #[test]
    fn distance_examples() {
        let e = std::f64::consts::E;
        assert!((h3_distance(&pt(0.0, 0.0, 1.0), &pt(0.0, 0.0, e)) - 1.0).abs() < 1e-12);
        assert_eq!(h3_distance(&pt(0.3, -0.2, 0.7), &pt(0.3, -0.2, 0.7)), 0.0);
        let expected = 1.5f64.acosh();
        assert!((h3_distance(&pt(0.0, 0.0, 1.0), &pt(1.0, 0.0, 1.0)) - expected).abs() < 1e-12);
    }

    #[test]
    fn distance_matches_arc_integration() {
        // Independent oracle: integrate ds = |dgamma| / t along the known
        // geodesic semicircle between (0,1) and (1,1): center 1/2, radius
        // sqrt(5)/2, length integral of dtheta / sin(theta).
        let r = (1.25f64).sqrt();
        let c = 0.5f64;
        let th1 = ((0.0 - c) / r).acos().min(((1.0) / r).asin() + std::f64::consts::FRAC_PI_2);
        let th2 = ((1.0 - c) / r).acos();
        let (lo, hi) = (th2.min(th1), th2.max(th1));
        let n = 20001;
        let h = (hi - lo) / (n as f64 - 1.0);
        let mut sum = 0.0;
        for k in 0..n {
            let th = lo + h * k as f64;
            let w = if k == 0 || k == n - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += w / th.sin();
        }
        let arc = sum * h / 3.0;
        let formula = h3_distance(&pt(0.0, 0.0, 1.0), &pt(1.0, 0.0, 1.0));
        assert!((arc - formula).abs() < 1e-8, "arc {arc} vs {formula}");
    }

    #[test]
    fn h3_distance_invariant_under_mobius() {
        let ms = [
            Mobius::new(
                Complex::new(1.3, 0.2),
                Complex::new(-0.4, 1.0),
                Complex::new(0.0, 0.7),
                Complex::new(0.9, -0.3),
            ),
            Mobius::<f64>::from_unimat(
                &UniMat::new(qi().int(2, 1), qi().int(1, 1), qi().int(1, 0), qi().int(1, 0))
                    .unwrap_or_else(|_| UniMat::identity(qi())),
            ),
        ];
        let p = pt(0.4, -0.7, 1.3);
        let q = pt(-1.1, 0.2, 0.4);
        let d0 = h3_distance(&p, &q);
        for m in &ms {
            let d1 = h3_distance(&m.apply_h3(&p), &m.apply_h3(&q));
            assert!((d0 - d1).abs() < 1e-10, "{d0} vs {d1}");
        }
    }

    #[test]
    fn perp_length_examples() {
        let f = qi();
        let l10: f64 = perp_length_pair(&f2(), &f.one(), &f.zero()).unwrap();
        assert!((l10 - (1.0 / 2.0f64.sqrt()).ln()).abs() < 1e-12);
        assert!((l10 + 0.34657).abs() < 1e-5);
        let lnull: f64 = perp_length_pair(&f2(), &f.int(1, 1), &f.one()).unwrap();
        assert_eq!(lnull, f64::NEG_INFINITY);
        let l51: f64 = perp_length_pair(&f2(), &f.int(5, 0), &f.one()).unwrap();
        assert!((l51 - (23.0 / 2.0f64.sqrt()).ln()).abs() < 1e-12);
        assert!((l51 - 2.78892).abs() < 1e-5);
        assert_eq!(
            perp_length_pair::<f64>(&f2(), &f.int(2, 0), &f.int(2, 0)),
            Err(GeomError::NonCoprimePair)
        );
    }

    #[test]
    fn foot_at_infinity_is_apex() {
        let plane = PlaneOfForm::<f64>::from_form(&f2()).unwrap();
        let hb = CuspHoroball::at_infinity(qi());
        let (foot, length) = foot_of_perpendicular(&plane, &hb).unwrap();
        assert!((foot.z.norm()) < 1e-12);
        assert!((foot.t - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((length + 2.0f64.sqrt().ln()).abs() < 1e-12);
    }

    #[test]
    fn foot_matches_formula_at_finite_cusps() {
        let f = qi();
        let plane = PlaneOfForm::<f64>::from_form(&f2()).unwrap();
        for (ux, uy, vx, vy) in [(5i64, 0i64, 1i64, 0i64), (0, 0, 1, 0), (3, 1, 1, 1), (2, -3, 1, 2)] {
            let (u, v) = (f.int(ux, uy), f.int(vx, vy));
            if f2().eval(&u, &v) == 0 || !is_coprime_pair(&u, &v).unwrap() {
                continue;
            }
            let hb = CuspHoroball::new(u, v).unwrap();
            let (foot, length) = foot_of_perpendicular(&plane, &hb).unwrap();
            let expected: f64 = perp_length_pair(&f2(), &u, &v).unwrap();
            assert!(
                (length - expected).abs() < 1e-9,
                "pair ({u},{v}): {length} vs {expected}"
            );
            assert!(plane.residual(&foot) < 1e-9, "foot off plane");
        }
    }

    #[test]
    fn foot_length_by_direct_minimization() {
        // Oracle: minimize the distance from horoball boundary over a grid of
        // plane points, using that the distance from (z, t) to the standard
        // horosphere is |ln t| after moving the horoball to infinity.
        let f = qi();
        let (u, v) = (f.int(5, 0), f.one());
        let g = CuspHoroball::new(u, v).unwrap().completion();
        let minv = Mobius::<f64>::from_unimat(&g).inverse();
        let mut best = f64::INFINITY;
        let n = 400;
        for i in 0..n {
            for j in 1..n {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                let phi = std::f64::consts::FRAC_PI_2 * j as f64 / n as f64;
                let r = 2.0f64.sqrt();
                let p = H3Point::new(
                    Complex::from_polar(r * phi.sin(), theta),
                    r * phi.cos(),
                );
                let q = minv.apply_h3(&p);
                best = best.min(q.t.ln().abs());
            }
        }
        let expected: f64 = perp_length_pair(&f2(), &u, &v).unwrap();
        assert!((best - expected).abs() < 1e-3, "{best} vs {expected}");
    }

    #[test]
    fn cusp_on_circle_is_rejected() {
        let f = qi();
        let plane = PlaneOfForm::<f64>::from_form(&f2()).unwrap();
        let hb = CuspHoroball::new(f.int(1, 1), f.one()).unwrap();
        assert_eq!(
            foot_of_perpendicular(&plane, &hb).unwrap_err(),
            GeomError::CuspOnCircle
        );
    }

    #[test]
    fn chart_is_identity_like_on_reference_form() {
        let chart = PlaneChart::<f64>::new(&f2()).unwrap();
        // The apex of the reference halfsphere goes to height 1 over 0.
        let apex = pt(0.0, 0.0, 2.0f64.sqrt());
        let (p, residue) = chart.to_plane(&apex);
        assert!(residue < 1e-12);
        assert!((p - Complex::new(0.0, 1.0)).norm() < 1e-12);
        let back = chart.from_plane(&p);
        assert!(h3_distance(&apex, &back) < 1e-12);
    }

    #[test]
    fn chart_normalizes_shifted_form() {
        // a = 1, b = i, c = -1 has the same discriminant; its plane maps to
        // the reference halfsphere by an integral shear.
        let f = qi();
        let form = HermitianForm::new(1, f.int(0, 1), -1);
        let g = UniMat::new(f.one(), f.int(0, 1), f.zero(), f.one()).unwrap();
        assert_eq!(form.compose(&g), f2());
        let chart = PlaneChart::<f64>::new(&form).unwrap();
        let plane = PlaneOfForm::<f64>::from_form(&form).unwrap();
        let apex = plane.apex().unwrap();
        let (p, residue) = chart.to_plane(&apex);
        assert!(residue < 1e-10);
        assert!(p.im > 0.0);
    }

    #[test]
    fn chart_preserves_distances() {
        let f = qi();
        let form = HermitianForm::new(2, f.int(1, 1), -2);
        let chart = PlaneChart::<f64>::new(&form).unwrap();
        let plane = PlaneOfForm::<f64>::from_form(&form).unwrap();
        let PlaneGeometry::Halfsphere { center, radius } = plane.geometry() else {
            panic!()
        };
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut max_err: f64 = 0.0;
        for _ in 0..100 {
            let sample = |th: f64, ph: f64| {
                H3Point::new(
                    center + Complex::from_polar(radius * ph.sin(), th),
                    radius * ph.cos(),
                )
            };
            let p = sample(
                rnd() * std::f64::consts::TAU,
                0.05 + 0.9 * rnd() * std::f64::consts::FRAC_PI_2,
            );
            let q = sample(
                rnd() * std::f64::consts::TAU,
                0.05 + 0.9 * rnd() * std::f64::consts::FRAC_PI_2,
            );
            let (cp, rp) = chart.to_plane(&p);
            let (cq, rq) = chart.to_plane(&q);
            assert!(rp < 1e-10 && rq < 1e-10, "points left the plane");
            max_err = max_err.max((h3_distance(&p, &q) - h2_distance(&cp, &cq)).abs());
        }
        assert!(max_err < 1e-10, "max error {max_err}");
    }

    #[test]
    fn reduce_point_base_cases() {
        let base = Complex::new(0.1, 1.2);
        // A hyperbolic translation z -> 4z and its inverse.
        let g = H2Isometry::new([2.0, 0.0, 0.0, 0.5]);
        let gens = [g, g.inverse()];
        let tol = 1e-9;
        let (p, word) = reduce_point(&base, &gens, &base, tol);
        assert!(word.is_empty());
        assert_eq!(p, base);

        let moved = gens[0].apply(&base);
        let (back, word) = reduce_point(&moved, &gens, &base, tol);
        assert_eq!(word, vec![1]);
        assert!(h2_distance(&back, &base) < 1e-12);

        // Idempotence.
        let far = Complex::new(3.7, 0.01);
        let (red, _) = reduce_point(&far, &gens, &base, tol);
        let (red2, word2) = reduce_point(&red, &gens, &base, tol);
        assert!(word2.is_empty());
        assert_eq!(red, red2);
    }
}
