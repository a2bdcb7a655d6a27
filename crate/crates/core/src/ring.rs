//! Exact arithmetic in imaginary quadratic orders: ring elements in the
//! integral basis `(1, omega)`, ideals in Hermite normal form, prime
//! splitting, and Bezout completion of coprime pairs.
//!
//! The basis element is `omega = (e + sqrt(D_K)) / 2` with `e = D_K mod 2`,
//! so `omega = sqrt(D_K/4)` for even discriminants (for example `omega = i`
//! when `D_K = -4`) and `omega = (1 + sqrt(D_K))/2` for odd ones. It satisfies
//! `omega^2 = e*omega - m` with `m = (e - D_K)/4`, which gives one code path
//! for all fields.

use num_integer::Integer;
use num_rational::Ratio;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub mod quotient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("{0} is not a fundamental imaginary quadratic discriminant")]
    NotFundamental(i64),
    #[error("elements of different fields (D_K = {0} and D_K = {1})")]
    FieldMismatch(i64, i64),
    #[error("the zero pair generates the zero module")]
    ZeroPair,
    #[error("the zero ideal has no Hermite basis")]
    ZeroIdeal,
    #[error("ideal norm {norm} exceeds the enumeration bound {bound}")]
    OracleBound { norm: i64, bound: i64 },
}

/// An imaginary quadratic field, identified by its (fundamental) discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    d_k: i64,
}

fn is_squarefree(n: i64) -> bool {
    let mut n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl Field {
    pub fn new(d_k: i64) -> Result<Field, RingError> {
        let ok = d_k < 0
            && match d_k.rem_euclid(4) {
                1 => is_squarefree(d_k),
                0 => {
                    let q = d_k / 4;
                    let r = q.rem_euclid(4);
                    (r == 2 || r == 3) && is_squarefree(q)
                }
                _ => false,
            };
        if ok {
            Ok(Field { d_k })
        } else {
            Err(RingError::NotFundamental(d_k))
        }
    }

    /// The Gaussian field `Q(i)`.
    pub fn gaussian() -> Field {
        Field { d_k: -4 }
    }

    pub fn discriminant(&self) -> i64 {
        self.d_k
    }

    /// Trace of `omega`; `0` for even discriminants, `1` for odd ones.
    pub fn omega_trace(&self) -> i64 {
        self.d_k.rem_euclid(2)
    }

    /// Norm of `omega`: `(e - D_K)/4` with `e` the trace.
    pub fn omega_norm(&self) -> i64 {
        (self.omega_trace() - self.d_k) / 4
    }

    /// Number of roots of unity in `O_K`.
    pub fn omega_k(&self) -> i64 {
        match self.d_k {
            -4 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    /// The roots of unity, closed under multiplication.
    pub fn roots_of_unity(&self) -> Vec<QuadInt> {
        let mut units = Vec::new();
        for x in -2..=2i64 {
            for y in -2..=2i64 {
                let q = self.int(x, y);
                if q.norm() == 1 {
                    units.push(q);
                }
            }
        }
        units.sort();
        debug_assert_eq!(units.len() as i64, self.omega_k());
        units
    }

    pub fn int(&self, x: i64, y: i64) -> QuadInt {
        QuadInt {
            field: *self,
            x,
            y,
        }
    }

    pub fn zero(&self) -> QuadInt {
        self.int(0, 0)
    }

    pub fn one(&self) -> QuadInt {
        self.int(1, 0)
    }

    pub fn omega(&self) -> QuadInt {
        self.int(0, 1)
    }

    /// Complex embedding of `omega` with positive imaginary part.
    pub fn omega_complex<R: crate::scalar::Real>(&self) -> num_complex::Complex<R> {
        let half = R::from_f64_lossy(0.5);
        num_complex::Complex::new(
            R::from_i64_lossy(self.omega_trace()) * half,
            R::from_i64_lossy(-self.d_k).sqrt() * half,
        )
    }

    /// All ring elements of norm at most `bound`, sorted by `(norm, x, y)`.
    pub fn elements_with_norm_at_most(&self, bound: i64) -> Vec<QuadInt> {
        let mut out = Vec::new();
        if bound < 0 {
            return out;
        }
        let t = self.omega_trace();
        let m = self.omega_norm();
        // N(x + y*omega) = (x + t*y/2)^2 + (|D_K|/4) y^2
        let y_max = (4.0 * bound as f64 / (-self.d_k) as f64).sqrt().floor() as i64 + 1;
        for y in -y_max..=y_max {
            // x^2 + t*y*x + (m*y^2 - bound) <= 0
            let disc = (t * y) as f64 * (t * y) as f64 - 4.0 * (m * y * y - bound) as f64;
            if disc < 0.0 {
                continue;
            }
            let lo = ((-(t * y) as f64 - disc.sqrt()) / 2.0).floor() as i64 - 1;
            let hi = ((-(t * y) as f64 + disc.sqrt()) / 2.0).ceil() as i64 + 1;
            for x in lo..=hi {
                let q = self.int(x, y);
                if q.norm() <= bound {
                    out.push(q);
                }
            }
        }
        out.sort_by_key(|q| (q.norm(), q.x, q.y));
        out
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = serde_json::Map::new();
        map.insert("D_K".into(), self.d_k.into());
        serde_json::Value::Object(map).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Field, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(rename = "D_K")]
            d_k: i64,
        }
        let repr = Repr::deserialize(d)?;
        Field::new(repr.d_k).map_err(D::Error::custom)
    }
}

/// An element `x + y*omega` of `O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    x: i64,
    y: i64,
    field: Field,
}

fn to_i64(v: i128) -> i64 {
    i64::try_from(v).expect("coordinate overflow")
}

impl QuadInt {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn is_one(&self) -> bool {
        self.x == 1 && self.y == 0
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// `q * conj(q)`, a nonnegative rational integer.
    pub fn norm(&self) -> i64 {
        let (x, y) = (self.x as i128, self.y as i128);
        let t = self.field.omega_trace() as i128;
        let m = self.field.omega_norm() as i128;
        to_i64(x * x + t * x * y + m * y * y)
    }

    /// `q + conj(q)`.
    pub fn trace(&self) -> i64 {
        2 * self.x + self.field.omega_trace() * self.y
    }

    pub fn conj(&self) -> QuadInt {
        // conj(x + y*omega) = (x + t*y) - y*omega
        self.field
            .int(self.x + self.field.omega_trace() * self.y, -self.y)
    }

    /// Multiplication by a rational integer.
    pub fn scale(&self, k: i64) -> QuadInt {
        self.field.int(
            to_i64(self.x as i128 * k as i128),
            to_i64(self.y as i128 * k as i128),
        )
    }

    /// Exact division by a rational integer, when both coordinates divide.
    pub fn div_exact_int(&self, k: i64) -> Option<QuadInt> {
        if k == 0 || self.x % k != 0 || self.y % k != 0 {
            return None;
        }
        Some(self.field.int(self.x / k, self.y / k))
    }

    /// Exact division by another element, when the quotient lies in `O_K`.
    pub fn div_exact(&self, rhs: &QuadInt) -> Option<QuadInt> {
        if rhs.is_zero() {
            return None;
        }
        (*self * rhs.conj()).div_exact_int(rhs.norm())
    }

    /// Complex embedding using the positive-imaginary-part `omega`.
    pub fn to_complex<R: crate::scalar::Real>(&self) -> num_complex::Complex<R> {
        let w = self.field.omega_complex::<R>();
        num_complex::Complex::new(R::from_i64_lossy(self.x), R::zero())
            + w * R::from_i64_lossy(self.y)
    }

    fn assert_same_field(&self, rhs: &QuadInt) {
        assert_eq!(
            self.field.d_k, rhs.field.d_k,
            "{}",
            RingError::FieldMismatch(self.field.d_k, rhs.field.d_k)
        );
    }
}

impl std::fmt::Display for QuadInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, y) => write!(f, "{y}w"),
            (x, y) if y < 0 => write!(f, "{x}{y}w"),
            (x, y) => write!(f, "{x}+{y}w"),
        }
    }
}

impl std::ops::Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        self.assert_same_field(&rhs);
        self.field.int(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        self.assert_same_field(&rhs);
        self.field.int(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        self.field.int(-self.x, -self.y)
    }
}

impl std::ops::Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: QuadInt) -> QuadInt {
        self.assert_same_field(&rhs);
        // (x1 + y1 w)(x2 + y2 w) with w^2 = t w - m
        let (x1, y1, x2, y2) = (
            self.x as i128,
            self.y as i128,
            rhs.x as i128,
            rhs.y as i128,
        );
        let t = self.field.omega_trace() as i128;
        let m = self.field.omega_norm() as i128;
        self.field.int(
            to_i64(x1 * x2 - m * y1 * y2),
            to_i64(x1 * y2 + y1 * x2 + t * y1 * y2),
        )
    }
}

/// An element of `K` with rational coordinates over `(1, omega)`.
///
/// Used for exact boundary-circle data and exact homography evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadRat {
    pub x: Ratio<i64>,
    pub y: Ratio<i64>,
    field: Field,
}

impl QuadRat {
    pub fn new(field: Field, x: Ratio<i64>, y: Ratio<i64>) -> QuadRat {
        QuadRat { x, y, field }
    }

    pub fn from_int(q: &QuadInt) -> QuadRat {
        QuadRat {
            x: Ratio::from_integer(q.x),
            y: Ratio::from_integer(q.y),
            field: q.field,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.x == Ratio::from_integer(0) && self.y == Ratio::from_integer(0)
    }

    pub fn conj(&self) -> QuadRat {
        let t = Ratio::from_integer(self.field.omega_trace());
        QuadRat::new(self.field, self.x + t * self.y, -self.y)
    }

    pub fn norm(&self) -> Ratio<i64> {
        let t = Ratio::from_integer(self.field.omega_trace());
        let m = Ratio::from_integer(self.field.omega_norm());
        self.x * self.x + t * self.x * self.y + m * self.y * self.y
    }

    pub fn trace(&self) -> Ratio<i64> {
        let t = Ratio::from_integer(self.field.omega_trace());
        self.x + self.x + t * self.y
    }

    pub fn add(&self, rhs: &QuadRat) -> QuadRat {
        QuadRat::new(self.field, self.x + rhs.x, self.y + rhs.y)
    }

    pub fn mul(&self, rhs: &QuadRat) -> QuadRat {
        let t = Ratio::from_integer(self.field.omega_trace());
        let m = Ratio::from_integer(self.field.omega_norm());
        QuadRat::new(
            self.field,
            self.x * rhs.x - m * self.y * rhs.y,
            self.x * rhs.y + self.y * rhs.x + t * self.y * rhs.y,
        )
    }

    pub fn div(&self, rhs: &QuadRat) -> Option<QuadRat> {
        let n = rhs.norm();
        if n == Ratio::from_integer(0) {
            return None;
        }
        let num = self.mul(&rhs.conj());
        Some(QuadRat::new(self.field, num.x / n, num.y / n))
    }

    pub fn to_complex<R: crate::scalar::Real>(&self) -> num_complex::Complex<R> {
        let w = self.field.omega_complex::<R>();
        num_complex::Complex::new(crate::scalar::ratio_to_real(self.x), R::zero())
            + w * crate::scalar::ratio_to_real::<R>(self.y)
    }
}

/// Row Hermite normal form `[[a, b], [0, c]]` of a list of Z^2 rows,
/// with `a, c > 0` and `0 <= b < c`. Returns `None` when the rows do not
/// span a rank-2 lattice.
pub(crate) fn hnf_rows(rows: &[(i64, i64)]) -> Option<[i64; 4]> {
    let mut rows: Vec<(i64, i64)> = rows.iter().copied().filter(|r| *r != (0, 0)).collect();
    if rows.is_empty() {
        return None;
    }
    // Column 0 pivot by repeated remainder reduction.
    loop {
        rows.sort_by_key(|r| (r.0 == 0, r.0.abs()));
        if rows.len() < 2 || rows[1].0 == 0 {
            break;
        }
        let (px, py) = rows[0];
        for r in rows.iter_mut().skip(1) {
            if r.0 != 0 {
                let q = r.0.div_euclid(px);
                r.0 -= q * px;
                r.1 -= q * py;
            }
        }
    }
    let (mut a, mut b) = rows[0];
    if a == 0 {
        return None;
    }
    if a < 0 {
        a = -a;
        b = -b;
    }
    let mut c = 0i64;
    for r in rows.iter().skip(1) {
        debug_assert_eq!(r.0, 0);
        c = c.gcd(&r.1);
    }
    if c == 0 {
        return None;
    }
    Some([a, b.rem_euclid(c), 0, c])
}

/// Whether the `O_K`-ideal generated by `u` and `v` is all of `O_K`.
///
/// This is ideal coprimality (meaningful for every class number), computed
/// from the Hermite form of the Z-module spanned by `u, u*omega, v, v*omega`.
pub fn is_coprime_pair(u: &QuadInt, v: &QuadInt) -> Result<bool, RingError> {
    u.assert_same_field(v);
    if u.is_zero() && v.is_zero() {
        return Err(RingError::ZeroPair);
    }
    // The norm of the generated ideal divides both element norms.
    let g = u.norm().gcd(&v.norm());
    if g == 1 {
        return Ok(true);
    }
    let w = u.field.omega();
    let uw = *u * w;
    let vw = *v * w;
    let hnf = hnf_rows(&[
        (u.x, u.y),
        (uw.x, uw.y),
        (v.x, v.y),
        (vw.x, vw.y),
    ]);
    Ok(matches!(hnf, Some([1, 0, 0, 1])))
}

/// Solves `s*u + t*v = 1` over `O_K` for an ideal-coprime pair.
///
/// The two coordinate equations over `Z` form a 2x4 linear system that is
/// solved by a column echelon reduction with a tracked unimodular transform.
pub fn solve_bezout(u: &QuadInt, v: &QuadInt) -> Option<(QuadInt, QuadInt)> {
    u.assert_same_field(v);
    let field = u.field;
    let t = field.omega_trace();
    let m = field.omega_norm();
    // Columns of the 2x4 matrix: images of the basis unknowns
    // (s0, s1, t0, t1) under (s, t) -> s*u + t*v in coordinates.
    let col = |q: &QuadInt| [[q.x, q.y], [-m * q.y, q.x + t * q.y]];
    let [cu0, cu1] = col(u);
    let [cv0, cv1] = col(v);
    let mut a = [
        [cu0[0], cu1[0], cv0[0], cv1[0]],
        [cu0[1], cu1[1], cv0[1], cv1[1]],
    ];
    let mut u_tr = [[0i64; 4]; 4];
    for (i, row) in u_tr.iter_mut().enumerate() {
        row[i] = 1;
    }
    // Column echelon: pivot row 0 then row 1.
    for pivot in 0..2usize {
        loop {
            let mut best: Option<usize> = None;
            for j in pivot..4 {
                if a[pivot][j] != 0
                    && best.is_none_or(|b| a[pivot][j].abs() < a[pivot][b].abs())
                {
                    best = Some(j);
                }
            }
            let Some(bj) = best else {
                return None;
            };
            for k in 0..2 {
                a[k].swap(pivot, bj);
            }
            for row in u_tr.iter_mut() {
                row.swap(pivot, bj);
            }
            let mut done = true;
            for j in (pivot + 1)..4 {
                if a[pivot][j] != 0 {
                    let q = a[pivot][j].div_euclid(a[pivot][pivot]);
                    for k in 0..2 {
                        a[k][j] -= q * a[k][pivot];
                    }
                    for row in u_tr.iter_mut() {
                        let s = row[pivot];
                        row[j] -= q * s;
                    }
                    if a[pivot][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
    }
    // Solve the lower-triangular 2x2 system H z = (1, 0).
    let h00 = a[0][0];
    let h10 = a[1][0];
    let h11 = a[1][1];
    if h00 == 0 || h11 == 0 || 1 % h00 != 0 {
        return None;
    }
    let z0 = 1 / h00;
    let r = -h10 * z0;
    if r % h11 != 0 {
        return None;
    }
    let z1 = r / h11;
    let sol: Vec<i64> = (0..4)
        .map(|i| u_tr[i][0] * z0 + u_tr[i][1] * z1)
        .collect();
    let s = field.int(sol[0], sol[1]);
    let tq = field.int(sol[2], sol[3]);
    debug_assert!((s * *u + tq * *v).is_one());
    Some((s, tq))
}

/// A nonzero ideal of `O_K`, stored as the Hermite basis
/// `{a + b*omega, c*omega}` with `a, c > 0` and `0 <= b < c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadIdeal {
    field: Field,
    a: i64,
    b: i64,
    c: i64,
}

impl QuadIdeal {
    pub fn from_gens(gens: &[QuadInt]) -> Result<QuadIdeal, RingError> {
        let field = gens.first().map(|g| g.field).ok_or(RingError::ZeroIdeal)?;
        let mut rows = Vec::with_capacity(gens.len() * 2);
        for g in gens {
            g.assert_same_field(&gens[0]);
            let gw = *g * field.omega();
            rows.push((g.x, g.y));
            rows.push((gw.x, gw.y));
        }
        let [a, b, _, c] = hnf_rows(&rows).ok_or(RingError::ZeroIdeal)?;
        let ideal = QuadIdeal { field, a, b, c };
        debug_assert!(ideal.is_closed_under_omega());
        Ok(ideal)
    }

    pub fn principal(g: &QuadInt) -> Result<QuadIdeal, RingError> {
        QuadIdeal::from_gens(std::slice::from_ref(g))
    }

    pub fn unit_ideal(field: Field) -> QuadIdeal {
        QuadIdeal {
            field,
            a: 1,
            b: 0,
            c: 1,
        }
    }

    /// Constructs directly from a Hermite basis; used by the ideal enumerator.
    fn from_hnf_unchecked(field: Field, a: i64, b: i64, c: i64) -> QuadIdeal {
        QuadIdeal { field, a, b, c }
    }

    fn is_closed_under_omega(&self) -> bool {
        let g1 = self.field.int(self.a, self.b);
        let g2 = self.field.int(0, self.c);
        self.contains(&(g1 * self.field.omega())) && self.contains(&(g2 * self.field.omega()))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Hermite basis rows `[a, b, 0, c]` (row-major).
    pub fn hnf_rows(&self) -> [i64; 4] {
        [self.a, self.b, 0, self.c]
    }

    pub fn norm(&self) -> i64 {
        self.a * self.c
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.norm() == 1
    }

    pub fn contains(&self, q: &QuadInt) -> bool {
        assert_eq!(self.field, q.field);
        if q.x % self.a != 0 {
            return false;
        }
        let j = q.x / self.a;
        (q.y - j * self.b) % self.c == 0
    }

    pub fn contains_int(&self, n: i64) -> bool {
        self.contains(&self.field.int(n, 0))
    }

    /// Basis as ring elements.
    pub fn basis(&self) -> [QuadInt; 2] {
        [self.field.int(self.a, self.b), self.field.int(0, self.c)]
    }

    pub fn mul(&self, rhs: &QuadIdeal) -> QuadIdeal {
        assert_eq!(self.field, rhs.field);
        let [x1, x2] = self.basis();
        let [y1, y2] = rhs.basis();
        QuadIdeal::from_gens(&[x1 * y1, x1 * y2, x2 * y1, x2 * y2]).expect("product of nonzero")
    }

    /// Whether `self` divides `rhs`, i.e. `rhs` is contained in `self`.
    pub fn divides(&self, rhs: &QuadIdeal) -> bool {
        rhs.basis().iter().all(|g| self.contains(g))
    }

    /// The distinct prime ideals dividing this ideal, with their norms.
    ///
    /// The rational primes come from trial division of the ideal norm; each is
    /// lifted through its splitting type and kept when it divides the ideal.
    pub fn prime_divisors(&self) -> Vec<(QuadIdeal, i64)> {
        let mut out = Vec::new();
        let mut n = self.norm();
        let mut p = 2i64;
        while p * p <= n {
            if n % p == 0 {
                while n % p == 0 {
                    n /= p;
                }
                self.push_primes_above(p, &mut out);
            }
            p += 1;
        }
        if n > 1 {
            self.push_primes_above(n, &mut out);
        }
        out
    }

    fn push_primes_above(&self, p: i64, out: &mut Vec<(QuadIdeal, i64)>) {
        for prime in primes_above(self.field, p) {
            if prime.divides(self) {
                let norm = prime.norm();
                out.push((prime, norm));
            }
        }
    }

    /// All ideals of norm at most `bound`, sorted by (norm, basis).
    pub fn enumerate_up_to_norm(field: Field, bound: i64) -> Vec<QuadIdeal> {
        let mut out = Vec::new();
        for c in 1..=bound {
            for a in 1..=(bound / c) {
                for b in 0..c {
                    let cand = QuadIdeal::from_hnf_unchecked(field, a, b, c);
                    if cand.is_closed_under_omega() {
                        out.push(cand);
                    }
                }
            }
        }
        out.sort_by_key(|i| (i.norm(), i.hnf_rows()));
        out
    }
}

/// Splitting type of a rational prime in `O_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Splitting {
    /// `p = p1 * p2` with two distinct primes of norm `p`.
    Split(QuadIdeal, QuadIdeal),
    /// `p = p1^2` with one prime of norm `p`.
    Ramified(QuadIdeal),
    /// `p` stays prime, with norm `p^2`.
    Inert(QuadIdeal),
}

impl Splitting {
    pub fn primes(&self) -> Vec<QuadIdeal> {
        match self {
            Splitting::Split(a, b) => vec![*a, *b],
            Splitting::Ramified(a) | Splitting::Inert(a) => vec![*a],
        }
    }
}

/// Splitting of the rational prime `p`, from the roots of the minimal
/// polynomial of `omega` modulo `p`.
pub fn split_prime(field: Field, p: i64) -> Splitting {
    assert!(p >= 2, "not a prime candidate: {p}");
    let t = field.omega_trace();
    let m = field.omega_norm();
    let roots: Vec<i64> = (0..p)
        .filter(|x| (x * x + t * x + m).rem_euclid(p) == 0)
        .collect();
    let above = |r: i64| {
        QuadIdeal::from_gens(&[field.int(p, 0), field.int(r, 1)]).expect("nonzero prime")
    };
    match roots.len() {
        0 => Splitting::Inert(QuadIdeal::principal(&field.int(p, 0)).expect("nonzero")),
        1 => Splitting::Ramified(above(roots[0])),
        2 => Splitting::Split(above(roots[0]), above(roots[1])),
        _ => unreachable!("quadratic with more than two roots mod a prime"),
    }
}

/// The prime ideals above `p`, each with norm `p` or `p^2`.
pub fn primes_above(field: Field, p: i64) -> Vec<QuadIdeal> {
    split_prime(field, p).primes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qi() -> Field {
        Field::gaussian()
    }

    fn eisenstein() -> Field {
        Field::new(-3).unwrap()
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [-3, -4, -7, -8, -11, -15, -19, -20, -163] {
            assert!(Field::new(d).is_ok(), "D_K = {d}");
        }
        for d in [0, -1, -2, -5, -6, -9, -12, -16, -18, 5] {
            assert!(Field::new(d).is_err(), "D_K = {d}");
        }
    }

    #[test]
    fn norm_of_two_plus_i() {
        // omega = i for D_K = -4
        let q = qi().int(2, 1);
        assert_eq!(q.norm(), 5);
    }

    #[test]
    fn conj_in_odd_field() {
        // trace(omega) = 1 when D_K is odd, so conj(1 + w) = 2 - w
        let f = eisenstein();
        let q = f.int(1, 1);
        assert_eq!(q.conj(), f.int(2, -1));
    }

    #[test]
    fn norm_of_zero() {
        assert_eq!(qi().zero().norm(), 0);
    }

    #[test]
    fn roots_of_unity_counts() {
        assert_eq!(qi().roots_of_unity().len(), 4);
        assert_eq!(eisenstein().roots_of_unity().len(), 6);
        let f7 = Field::new(-7).unwrap();
        let units = f7.roots_of_unity();
        assert_eq!(units, vec![f7.int(-1, 0), f7.int(1, 0)]);
    }

    #[test]
    fn roots_of_unity_closed_under_multiplication() {
        for field in [qi(), eisenstein(), Field::new(-8).unwrap()] {
            let units = field.roots_of_unity();
            for a in &units {
                assert_eq!(a.norm(), 1);
                for b in &units {
                    assert!(units.contains(&(*a * *b)));
                }
            }
        }
    }

    #[test]
    fn coprime_examples() {
        let f = qi();
        assert!(is_coprime_pair(&f.int(1, 1), &f.one()).unwrap());
        // 1 - i = -i(1 + i): common factor 1 + i
        assert!(!is_coprime_pair(&f.int(1, 1), &f.int(1, -1)).unwrap());
        assert_eq!(
            is_coprime_pair(&f.zero(), &f.zero()),
            Err(RingError::ZeroPair)
        );
    }

    /// Independent Bezout search over a small box.
    fn coprime_by_box_search(u: &QuadInt, v: &QuadInt) -> bool {
        let f = u.field();
        let r = 6i64;
        for sx in -r..=r {
            for sy in -r..=r {
                for tx in -r..=r {
                    for ty in -r..=r {
                        if (f.int(sx, sy) * *u + f.int(tx, ty) * *v).is_one() {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn coprime_matches_box_oracle_in_eisenstein() {
        let f = eisenstein();
        let u = f.int(3, 0);
        let v = f.int(2, 1);
        let expected = coprime_by_box_search(&u, &v);
        assert_eq!(is_coprime_pair(&u, &v).unwrap(), expected);
        assert!(expected);
    }

    #[test]
    fn bezout_solves_when_coprime() {
        let f = qi();
        let cases = [
            (f.int(1, 1), f.one()),
            (f.int(3, 0), f.int(2, 1)),
            (f.int(5, 2), f.int(3, -1)),
            (f.int(1, 0), f.zero()),
        ];
        for (u, v) in cases {
            let (s, t) = solve_bezout(&u, &v).expect("coprime pair");
            assert!((s * u + t * v).is_one());
        }
        assert!(solve_bezout(&f.int(1, 1), &f.int(1, -1)).is_none());
    }

    #[test]
    fn ideal_norms() {
        let f = qi();
        assert_eq!(QuadIdeal::principal(&f.int(1, 1)).unwrap().norm(), 2);
        assert_eq!(QuadIdeal::principal(&f.int(2, 0)).unwrap().norm(), 4);
        let one_plus_i = QuadIdeal::principal(&f.int(1, 1)).unwrap();
        assert!(one_plus_i.contains(&f.int(2, 0)));
    }

    #[test]
    fn prime_divisor_examples() {
        let f = qi();
        // 2 ramifies
        let two = QuadIdeal::principal(&f.int(2, 0)).unwrap();
        let divs = two.prime_divisors();
        assert_eq!(divs.len(), 1);
        assert_eq!(divs[0].1, 2);
        assert_eq!(divs[0].0, QuadIdeal::principal(&f.int(1, 1)).unwrap());
        // 5 splits into two primes of norm 5
        let five = QuadIdeal::principal(&f.int(5, 0)).unwrap();
        let divs = five.prime_divisors();
        assert_eq!(divs.len(), 2);
        assert!(divs.iter().all(|(_, n)| *n == 5));
        assert_ne!(divs[0].0, divs[1].0);
        // 3 is inert
        let three = QuadIdeal::principal(&f.int(3, 0)).unwrap();
        let divs = three.prime_divisors();
        assert_eq!(divs.len(), 1);
        assert_eq!(divs[0].1, 9);
    }

    #[test]
    fn splitting_consistency_with_kronecker_pattern() {
        for field in [qi(), eisenstein(), Field::new(-7).unwrap()] {
            for p in [2i64, 3, 5, 7, 11, 13, 17, 19, 23] {
                let split = split_prime(field, p);
                let norms: i64 = split.primes().iter().map(|q| q.norm()).product();
                match &split {
                    Splitting::Split(a, b) => {
                        assert_eq!(a.norm() * b.norm(), p * p);
                        assert_ne!(a, b);
                    }
                    Splitting::Ramified(a) => {
                        assert_eq!(a.norm(), p);
                        assert_eq!(field.discriminant().rem_euclid(p), 0);
                    }
                    Splitting::Inert(a) => assert_eq!(a.norm(), p * p),
                }
                if field.discriminant() % p != 0 {
                    assert_eq!(norms == p * p && split.primes().len() == 2, {
                        crate::analytic::kronecker_symbol(field.discriminant(), p) == 1
                    });
                }
            }
        }
    }

    #[test]
    fn ideal_enumeration_finds_small_ideals() {
        let f = qi();
        let ideals = QuadIdeal::enumerate_up_to_norm(f, 10);
        // norms 1,2,4,5,5,8,9,10,10 plus (3) of norm 9? (3) inert has norm 9.
        let norms: Vec<i64> = ideals.iter().map(|i| i.norm()).collect();
        assert_eq!(norms[0], 1);
        assert!(norms.contains(&2));
        assert!(norms.windows(2).all(|w| w[0] <= w[1]));
        // Every enumerated ideal is genuinely an ideal and they are distinct.
        for w in ideals.windows(2) {
            assert_ne!(w[0], w[1]);
        }
        // Count ideals of norm 5: the two primes above 5.
        assert_eq!(norms.iter().filter(|n| **n == 5).count(), 2);
        // Norm 4: (2), (1+i)^2 = (2i) = (2)... and (1+i)*conj? (2) only plus
        // the square of the ramified prime which equals (2). Expect exactly 1.
        assert_eq!(norms.iter().filter(|n| **n == 4).count(), 1);
    }

    #[test]
    fn quad_rat_field_operations() {
        let f = qi();
        let half = QuadRat::new(f, Ratio::new(1, 2), Ratio::new(-1, 3));
        let q = QuadRat::from_int(&f.int(2, 5));
        let prod = half.mul(&q);
        let back = prod.div(&q).unwrap();
        assert_eq!(back, half);
        assert_eq!(half.mul(&half.conj()).x, half.norm());
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(x1 in -50i64..50, y1 in -50i64..50,
                                  x2 in -50i64..50, y2 in -50i64..50,
                                  odd in proptest::bool::ANY) {
            let f = if odd { eisenstein() } else { qi() };
            let a = f.int(x1, y1);
            let b = f.int(x2, y2);
            prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
        }

        #[test]
        fn hnf_invariant_under_permutation_and_units(
            x1 in -20i64..20, y1 in -20i64..20,
            x2 in -20i64..20, y2 in -20i64..20,
            unit_idx in 0usize..4, swap in proptest::bool::ANY)
        {
            let f = qi();
            let a = f.int(x1, y1);
            let b = f.int(x2, y2);
            prop_assume!(!a.is_zero() || !b.is_zero());
            let base = QuadIdeal::from_gens(&[a, b]).unwrap();
            let u = f.roots_of_unity()[unit_idx];
            let gens = if swap { [b * u, a] } else { [a * u, b] };
            let other = QuadIdeal::from_gens(&gens).unwrap();
            prop_assert_eq!(base, other);
        }

        #[test]
        fn principal_ideal_norms_multiply(x1 in -30i64..30, y1 in -30i64..30,
                                          x2 in -30i64..30, y2 in -30i64..30) {
            let f = eisenstein();
            let a = f.int(x1, y1);
            let b = f.int(x2, y2);
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ia = QuadIdeal::principal(&a).unwrap();
            let ib = QuadIdeal::principal(&b).unwrap();
            prop_assert_eq!(ia.norm(), a.norm());
            prop_assert_eq!(ia.mul(&ib).norm(), ia.norm() * ib.norm());
        }
    }
}
