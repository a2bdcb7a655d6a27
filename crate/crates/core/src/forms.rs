//! Integral binary Hermitian forms and the right `SL2(O_K)` action by
//! precomposition.
//!
//! A form `f(u,v) = a|u|^2 + 2 Re(b u conj(v)) + c|v|^2` is stored by its
//! coefficients `a, c` (rational integers) and `b` (an element of `O_K`).
//! Its discriminant is `N(b) - a*c`; the form is indefinite exactly when the
//! discriminant is positive, and its zero set in `P^1(C)` is then a circle
//! (or a real line through infinity when `a = 0`).

use num_rational::Ratio;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ring::{is_coprime_pair, solve_bezout, Field, QuadInt, QuadRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("form and argument live over different fields")]
    FieldMismatch,
    #[error("matrix determinant is {0}, not 1")]
    NotUnimodular(String),
    #[error("form is not indefinite (discriminant {0})")]
    NotIndefinite(i64),
    #[error("operation requires a nonzero leading coefficient")]
    DegenerateLeadingCoefficient,
}

/// Sign type of a binary Hermitian form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormClass {
    Indefinite,
    Definite,
    Degenerate,
}

/// An integral binary Hermitian form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HermitianForm {
    a: i64,
    b: QuadInt,
    c: i64,
}

impl HermitianForm {
    pub fn new(a: i64, b: QuadInt, c: i64) -> HermitianForm {
        HermitianForm { a, b, c }
    }

    /// `|u|^2 - delta * |v|^2`, the reference form of a given discriminant.
    pub fn reference(field: Field, delta: i64) -> HermitianForm {
        HermitianForm::new(1, field.zero(), -delta)
    }

    pub fn field(&self) -> Field {
        self.b.field()
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> QuadInt {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// Exact value `a*N(u) + Tr(b * u * conj(v)) + c*N(v)`.
    pub fn eval(&self, u: &QuadInt, v: &QuadInt) -> i64 {
        assert_eq!(self.field(), u.field(), "{}", FormError::FieldMismatch);
        assert_eq!(self.field(), v.field(), "{}", FormError::FieldMismatch);
        let cross = self.b * *u * v.conj();
        self.a
            .checked_mul(u.norm())
            .and_then(|t| t.checked_add(cross.trace()))
            .and_then(|t| t.checked_add(self.c.checked_mul(v.norm())?))
            .expect("form value overflow")
    }

    /// `N(b) - a*c`.
    pub fn discriminant(&self) -> i64 {
        self.b.norm() - self.a * self.c
    }

    pub fn classify(&self) -> FormClass {
        match self.discriminant() {
            d if d > 0 => FormClass::Indefinite,
            0 => FormClass::Degenerate,
            _ => FormClass::Definite,
        }
    }

    /// gcd of `a`, `c` and the basis coordinates of `b`; for `Q(i)` these are
    /// exactly `a, c, Re(b), Im(b)`.
    pub fn content(&self) -> i64 {
        use num_integer::Integer;
        self.a
            .gcd(&self.c)
            .gcd(&self.b.x())
            .gcd(&self.b.y())
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn primitive_part(&self) -> HermitianForm {
        let g = self.content();
        if g <= 1 {
            return *self;
        }
        HermitianForm::new(
            self.a / g,
            self.b.div_exact_int(g).expect("content divides"),
            self.c / g,
        )
    }

    /// Right action by precomposition: `(f.compose(g))(w) = f(g w)`.
    ///
    /// Coefficients by exact expansion: the new `a` and `c` are the values of
    /// `f` on the columns of `g`, and the new `b` is
    /// `a*alpha*conj(beta) + b*alpha*conj(delta) + conj(b)*conj(beta)*gamma + c*gamma*conj(delta)`.
    pub fn compose(&self, g: &UniMat) -> HermitianForm {
        let [alpha, beta, gamma, delta] = g.entries();
        let a = self.eval(&alpha, &gamma);
        let c = self.eval(&beta, &delta);
        let fld = self.field();
        let scale = |q: QuadInt, k: i64| q.scale(k);
        let b = scale(alpha * beta.conj(), self.a)
            + self.b * alpha * delta.conj()
            + self.b.conj() * beta.conj() * gamma
            + scale(gamma * delta.conj(), self.c);
        debug_assert_eq!(b.field(), fld);
        HermitianForm::new(a, b, c)
    }

    /// Boundary of the zero set in `P^1(C)`: the circle of center `-conj(b)/a`
    /// and squared radius `discriminant / a^2` when `a != 0`, otherwise a real
    /// line together with the point at infinity.
    pub fn boundary_circle(&self) -> Result<BoundaryCircle, FormError> {
        let delta = self.discriminant();
        if delta <= 0 {
            return Err(FormError::NotIndefinite(delta));
        }
        if self.a != 0 {
            let bc = self.b.conj();
            let center = QuadRat::new(
                self.field(),
                Ratio::new(-bc.x(), self.a),
                Ratio::new(-bc.y(), self.a),
            );
            Ok(BoundaryCircle::Circle {
                center,
                radius_sq: Ratio::new(delta, self.a * self.a),
            })
        } else {
            // 2 Re(b z) + c = 0 written over x = Re z, y = Im z:
            // (2 b.x + t b.y) x - b.y sqrt(|D_K|) y + c = 0
            let t = self.field().omega_trace();
            Ok(BoundaryCircle::LineWithInfinity {
                coeff_x: 2 * self.b.x() + t * self.b.y(),
                coeff_y_sqrt_disc: -self.b.y(),
                offset: self.c,
            })
        }
    }
}

impl std::ops::Neg for HermitianForm {
    type Output = HermitianForm;
    fn neg(self) -> HermitianForm {
        HermitianForm::new(-self.a, -self.b, -self.c)
    }
}

impl std::fmt::Display for HermitianForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

impl Serialize for HermitianForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = serde_json::Map::new();
        map.insert("D_K".into(), self.field().discriminant().into());
        map.insert("a".into(), self.a.into());
        map.insert(
            "b".into(),
            serde_json::json!({"x": self.b.x(), "y": self.b.y()}),
        );
        map.insert("c".into(), self.c.into());
        serde_json::Value::Object(map).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<HermitianForm, D::Error> {
        #[derive(Deserialize)]
        struct Xy {
            x: i64,
            y: i64,
        }
        #[derive(Deserialize)]
        struct Repr {
            #[serde(rename = "D_K")]
            d_k: i64,
            a: i64,
            b: Xy,
            c: i64,
        }
        let r = Repr::deserialize(d)?;
        let field = Field::new(r.d_k).map_err(D::Error::custom)?;
        Ok(HermitianForm::new(r.a, field.int(r.b.x, r.b.y), r.c))
    }
}

/// The boundary circle of an indefinite form in `C U {infinity}`, with exact
/// rational data.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCircle {
    Circle {
        /// Center as an element of `K` (rational coordinates over `(1, omega)`).
        center: QuadRat,
        radius_sq: Ratio<i64>,
    },
    /// `coeff_x * Re(z) + coeff_y_sqrt_disc * sqrt(|D_K|) * Im(z) + offset = 0`
    /// together with the point at infinity.
    LineWithInfinity {
        coeff_x: i64,
        coeff_y_sqrt_disc: i64,
        offset: i64,
    },
}

/// A determinant-1 matrix over `O_K`, acting on pairs by
/// `(u, v) -> (alpha u + beta v, gamma u + delta v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniMat {
    alpha: QuadInt,
    beta: QuadInt,
    gamma: QuadInt,
    delta: QuadInt,
}

impl UniMat {
    pub fn new(
        alpha: QuadInt,
        beta: QuadInt,
        gamma: QuadInt,
        delta: QuadInt,
    ) -> Result<UniMat, FormError> {
        let det = alpha * delta - beta * gamma;
        if !det.is_one() {
            return Err(FormError::NotUnimodular(det.to_string()));
        }
        Ok(UniMat {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn identity(field: Field) -> UniMat {
        UniMat {
            alpha: field.one(),
            beta: field.zero(),
            gamma: field.zero(),
            delta: field.one(),
        }
    }

    pub fn field(&self) -> Field {
        self.alpha.field()
    }

    pub fn entries(&self) -> [QuadInt; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn alpha(&self) -> QuadInt {
        self.alpha
    }

    pub fn beta(&self) -> QuadInt {
        self.beta
    }

    pub fn gamma(&self) -> QuadInt {
        self.gamma
    }

    pub fn delta(&self) -> QuadInt {
        self.delta
    }

    pub fn mul(&self, rhs: &UniMat) -> UniMat {
        UniMat {
            alpha: self.alpha * rhs.alpha + self.beta * rhs.gamma,
            beta: self.alpha * rhs.beta + self.beta * rhs.delta,
            gamma: self.gamma * rhs.alpha + self.delta * rhs.gamma,
            delta: self.gamma * rhs.beta + self.delta * rhs.delta,
        }
    }

    pub fn inverse(&self) -> UniMat {
        UniMat {
            alpha: self.delta,
            beta: -self.beta,
            gamma: -self.gamma,
            delta: self.alpha,
        }
    }

    pub fn neg(&self) -> UniMat {
        UniMat {
            alpha: -self.alpha,
            beta: -self.beta,
            gamma: -self.gamma,
            delta: -self.delta,
        }
    }

    pub fn apply_pair(&self, u: &QuadInt, v: &QuadInt) -> (QuadInt, QuadInt) {
        (
            self.alpha * *u + self.beta * *v,
            self.gamma * *u + self.delta * *v,
        )
    }

    pub fn first_column(&self) -> (QuadInt, QuadInt) {
        (self.alpha, self.gamma)
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_one() && self.delta.is_one() && self.beta.is_zero() && self.gamma.is_zero()
    }

    /// Whether the matrix is `id` or `-id`.
    pub fn is_central(&self) -> bool {
        self.is_identity() || self.neg().is_identity()
    }

    pub fn max_entry_norm(&self) -> i64 {
        self.entries().iter().map(|q| q.norm()).max().unwrap()
    }

    /// Representative of `{g, -g}` with lexicographically positive first
    /// nonzero coordinate; used to deduplicate up to sign.
    pub fn sign_canonical(&self) -> UniMat {
        for q in self.entries() {
            for coord in [q.x(), q.y()] {
                if coord > 0 {
                    return *self;
                }
                if coord < 0 {
                    return self.neg();
                }
            }
        }
        *self
    }
}

impl std::fmt::Display for UniMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.alpha, self.beta, self.gamma, self.delta
        )
    }
}

/// Wire representation of a matrix (the field is carried by the context).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniMatRepr {
    pub alpha: [i64; 2],
    pub beta: [i64; 2],
    pub gamma: [i64; 2],
    pub delta: [i64; 2],
}

impl UniMatRepr {
    pub fn of(g: &UniMat) -> UniMatRepr {
        let e = |q: QuadInt| [q.x(), q.y()];
        UniMatRepr {
            alpha: e(g.alpha),
            beta: e(g.beta),
            gamma: e(g.gamma),
            delta: e(g.delta),
        }
    }

    pub fn into_unimat(&self, field: Field) -> Result<UniMat, FormError> {
        UniMat::new(
            field.int(self.alpha[0], self.alpha[1]),
            field.int(self.beta[0], self.beta[1]),
            field.int(self.gamma[0], self.gamma[1]),
            field.int(self.delta[0], self.delta[1]),
        )
    }
}

/// Completes an ideal-coprime pair to a matrix with that pair as first column,
/// so that `g . (1,0) = (u,v)`.
pub fn complete_unimodular(u: &QuadInt, v: &QuadInt) -> Option<UniMat> {
    let (s, t) = solve_bezout(u, v)?;
    UniMat::new(*u, -t, *v, s).ok()
}

/// All `g` in `SL2(O_K)` with entry norms at most `height` and
/// `f.compose(g) == target`, in deterministic order.
///
/// The search enumerates candidate first columns `(alpha, gamma)` with
/// `f(alpha, gamma) = target.a` and solves the remaining two linear conditions
/// (mixed coefficient and determinant) for the second column by Cramer's rule
/// over `K`, keeping integral solutions. Requires `target.a != 0`.
pub fn matrices_mapping(f: &HermitianForm, target: &HermitianForm, height: i64) -> Vec<UniMat> {
    assert!(
        target.a() != 0,
        "{}",
        FormError::DegenerateLeadingCoefficient
    );
    let field = f.field();
    let elements = field.elements_with_norm_at_most(height);
    let target_b_conj = target.b().conj();
    let mut out = Vec::new();
    for alpha in &elements {
        for gamma in &elements {
            if f.eval(alpha, gamma) != target.a() {
                continue;
            }
            // s = a*alpha + conj(b)*gamma, t = b*alpha + c*gamma
            let s = alpha.scale(f.a) + f.b.conj() * *gamma;
            let t = f.b * *alpha + gamma.scale(f.c);
            // beta = (conj(target.b)*alpha - conj(t)) / target.a
            // delta = (conj(s) + gamma*conj(target.b)) / target.a
            let beta_num = target_b_conj * *alpha - t.conj();
            let delta_num = s.conj() + *gamma * target_b_conj;
            let (Some(beta), Some(delta)) = (
                beta_num.div_exact_int(target.a()),
                delta_num.div_exact_int(target.a()),
            ) else {
                continue;
            };
            if beta.norm() > height || delta.norm() > height {
                continue;
            }
            let Ok(g) = UniMat::new(*alpha, beta, *gamma, delta) else {
                continue;
            };
            if f.compose(&g) == *target {
                out.push(g);
            }
        }
    }
    out
}

/// Outcome of a bounded reciprocity search.
///
/// Absence of a witness within the bound is not a proof of non-reciprocity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReciprocityResult {
    Witness(UniMat),
    NoneWithinBound { height: i64 },
}

/// Searches for `g` with `f.compose(g) == -f` and `membership(g)`, over entry
/// norms at most `height`.
pub fn reciprocity_witness<M: Fn(&UniMat) -> bool>(
    f: &HermitianForm,
    membership: M,
    height: i64,
) -> Result<ReciprocityResult, FormError> {
    if f.classify() != FormClass::Indefinite {
        return Err(FormError::NotIndefinite(f.discriminant()));
    }
    let (work, conj) = if f.a() != 0 {
        (*f, UniMat::identity(f.field()))
    } else {
        let h = normalizing_transform(f);
        (f.compose(&h), h)
    };
    for g in matrices_mapping(&work, &-work, height) {
        let witness = conj.mul(&g).mul(&conj.inverse());
        if membership(&witness) {
            debug_assert_eq!(f.compose(&witness), -*f);
            return Ok(ReciprocityResult::Witness(witness));
        }
    }
    Ok(ReciprocityResult::NoneWithinBound { height })
}

/// A matrix `g` with `a(f.compose(g)) > 0`, found by searching coprime pairs
/// with positive form value in enumeration order; identity when `a > 0`
/// already.
pub fn normalizing_transform(f: &HermitianForm) -> UniMat {
    let field = f.field();
    if f.a() > 0 {
        return UniMat::identity(field);
    }
    let mut bound = 4i64;
    loop {
        let elements = field.elements_with_norm_at_most(bound);
        for v in &elements {
            for u in &elements {
                if u.is_zero() && v.is_zero() {
                    continue;
                }
                if f.eval(u, v) > 0 && is_coprime_pair(u, v).unwrap_or(false) {
                    if let Some(g) = complete_unimodular(u, v) {
                        debug_assert!(f.compose(&g).a() > 0);
                        return g;
                    }
                }
            }
        }
        bound *= 4;
        assert!(bound < 1 << 24, "no positive value found; form not indefinite?");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qi() -> Field {
        Field::gaussian()
    }

    fn f2() -> HermitianForm {
        HermitianForm::reference(qi(), 2)
    }

    #[test]
    fn eval_examples() {
        let f = qi();
        assert_eq!(f2().eval(&f.int(3, 0), &f.int(2, 0)), 1);
        let fi = HermitianForm::new(1, f.int(0, 1), -1);
        assert_eq!(fi.eval(&f.one(), &f.one()), 0);
        assert_eq!(f2().eval(&f.int(1, 1), &f.one()), 0);
    }

    #[test]
    fn discriminant_examples() {
        let f = qi();
        assert_eq!(f2().discriminant(), 2);
        assert_eq!(HermitianForm::new(1, f.int(0, 1), -1).discriminant(), 2);
        assert_eq!(HermitianForm::new(2, f.int(1, 1), -2).discriminant(), 6);
    }

    #[test]
    fn compose_with_shear() {
        let f = qi();
        let g = UniMat::new(f.one(), f.one(), f.zero(), f.one()).unwrap();
        let composed = f2().compose(&g);
        assert_eq!(composed, HermitianForm::new(1, f.one(), -1));
        // Oracle: (f.compose(g))(w) = f(g w) on a grid of pairs.
        for ux in -3..3i64 {
            for vy in -3..3i64 {
                let (u, v) = (f.int(ux, 1), f.int(2, vy));
                let (gu, gv) = g.apply_pair(&u, &v);
                assert_eq!(composed.eval(&u, &v), f2().eval(&gu, &gv));
            }
        }
    }

    #[test]
    fn compose_with_identity() {
        let id = UniMat::identity(qi());
        let form = HermitianForm::new(3, qi().int(2, -1), -4);
        assert_eq!(form.compose(&id), form);
    }

    #[test]
    fn classify_and_primitivity() {
        let f = qi();
        assert_eq!(f2().classify(), FormClass::Indefinite);
        assert!(f2().is_primitive());
        let even = HermitianForm::new(2, f.int(1, 1), -2);
        assert_eq!(even.classify(), FormClass::Indefinite);
        assert!(even.is_primitive());
        assert_eq!(
            HermitianForm::new(1, f.zero(), 1).classify(),
            FormClass::Definite
        );
        let imprimitive = HermitianForm::new(2, f.int(0, 2), -4);
        assert_eq!(imprimitive.content(), 2);
        assert!(imprimitive.primitive_part().is_primitive());
    }

    #[test]
    fn boundary_circle_of_reference_form() {
        match f2().boundary_circle().unwrap() {
            BoundaryCircle::Circle { center, radius_sq } => {
                assert!(center.is_zero());
                assert_eq!(radius_sq, Ratio::from_integer(2));
            }
            _ => panic!("expected a circle"),
        }
    }

    #[test]
    fn boundary_line_when_a_vanishes() {
        let f = qi();
        let form = HermitianForm::new(0, f.one(), 0);
        assert!(matches!(
            form.boundary_circle().unwrap(),
            BoundaryCircle::LineWithInfinity { .. }
        ));
    }

    #[test]
    fn boundary_circle_with_nonzero_center() {
        let f = qi();
        let form = HermitianForm::new(1, f.int(0, 1), -1);
        match form.boundary_circle().unwrap() {
            BoundaryCircle::Circle { center, radius_sq } => {
                // center = -conj(i)/1 = i
                assert_eq!(center, QuadRat::from_int(&f.int(0, 1)));
                assert_eq!(radius_sq, Ratio::from_integer(2));
                // Cross-check: both intersections of the circle with the two
                // roots of a*x^2 + Tr(b)*x + c on the real axis, when they are
                // rational, satisfy f(z, 1) = 0 exactly. Here Tr(b) = 0 and
                // the circle |z - i|^2 = 2 crosses the real axis at +-1.
                for x in [-1i64, 1] {
                    assert_eq!(form.eval(&f.int(x, 0), &f.one()), 0);
                }
            }
            _ => panic!("expected a circle"),
        }
    }

    #[test]
    fn reciprocity_witness_for_norm_form() {
        let f = qi();
        let form = HermitianForm::new(1, f.zero(), -1);
        match reciprocity_witness(&form, |_| true, 4).unwrap() {
            ReciprocityResult::Witness(g) => {
                assert_eq!(form.compose(&g), -form);
            }
            _ => panic!("expected a witness"),
        }
    }

    #[test]
    fn reciprocity_bounded_search_reports_absence() {
        assert_eq!(
            reciprocity_witness(&f2(), |_| true, 1).unwrap(),
            ReciprocityResult::NoneWithinBound { height: 1 }
        );
    }

    #[test]
    fn complete_unimodular_first_column() {
        let f = qi();
        let (u, v) = (f.int(3, 1), f.int(2, 1));
        let g = complete_unimodular(&u, &v).expect("coprime");
        assert_eq!(g.first_column(), (u, v));
        assert!(complete_unimodular(&f.int(1, 1), &f.int(1, -1)).is_none());
    }

    #[test]
    fn normalizing_transform_makes_a_positive() {
        let f = qi();
        for form in [
            HermitianForm::new(-1, f.zero(), 2),
            HermitianForm::new(0, f.one(), 0),
            HermitianForm::new(0, f.int(1, 1), 3),
        ] {
            let g = normalizing_transform(&form);
            assert!(form.compose(&g).a() > 0, "form {form}");
            assert_eq!(form.compose(&g).discriminant(), form.discriminant());
        }
    }

    fn random_word(field: Field, seed: u64, len: usize) -> UniMat {
        // Deterministic small word in elementary matrices.
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 5) as i64 - 2
        };
        let s = UniMat::new(field.zero(), -field.one(), field.one(), field.zero()).unwrap();
        let mut g = UniMat::identity(field);
        for i in 0..len {
            let q = field.int(next(), next());
            let e = if i % 2 == 0 {
                UniMat::new(field.one(), q, field.zero(), field.one()).unwrap()
            } else {
                UniMat::new(field.one(), field.zero(), q, field.one()).unwrap()
            };
            g = g.mul(&e).mul(&s);
        }
        g
    }

    #[test]
    fn serde_round_trip() {
        let form = HermitianForm::new(2, qi().int(1, 1), -2);
        let json = serde_json::to_string(&form).unwrap();
        assert!(json.contains("\"D_K\":-4"));
        let back: HermitianForm = serde_json::from_str(&json).unwrap();
        assert_eq!(back, form);
    }

    proptest! {
        #[test]
        fn action_and_discriminant_invariance(seed in 0u64..5000, len in 1usize..6) {
            let field = qi();
            let g = random_word(field, seed, len);
            let form = HermitianForm::new(2, field.int(1, 1), -2);
            let composed = form.compose(&g);
            prop_assert_eq!(composed.discriminant(), form.discriminant());
            let (u, v) = (field.int(3, -1), field.int(1, 2));
            let (gu, gv) = g.apply_pair(&u, &v);
            prop_assert_eq!(composed.eval(&u, &v), form.eval(&gu, &gv));
        }

        #[test]
        fn coprimality_preserved_by_unimodular_action(
            seed in 0u64..5000, len in 1usize..5,
            ux in -6i64..6, uy in -6i64..6, vx in -6i64..6, vy in -6i64..6)
        {
            let field = qi();
            let (u, v) = (field.int(ux, uy), field.int(vx, vy));
            prop_assume!(!u.is_zero() || !v.is_zero());
            let g = random_word(field, seed, len);
            let (gu, gv) = g.apply_pair(&u, &v);
            prop_assert_eq!(
                is_coprime_pair(&u, &v).unwrap(),
                is_coprime_pair(&gu, &gv).unwrap()
            );
        }
    }
}
