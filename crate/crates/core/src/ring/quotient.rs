//! Finite quotient rings `O_K / a` and enumeration-based congruence indices.
//!
//! The quotient is the ground truth for `[SL2(O_K) : SL2-congruence-subgroup]`
//! indices: the full-level index is the order of `SL2(O_K/a)` counted by
//! enumeration, and the Hecke index is the cardinality of the projective line
//! over `O_K/a` counted by orbit enumeration under the unit action.

use super::{hnf_rows, Field, QuadIdeal, RingError};

/// Default cap on the ideal norm accepted by the enumeration oracle.
pub const DEFAULT_ORACLE_BOUND: i64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    /// `[Gamma_K : Gamma_K(a)]`, the order of `SL2(O_K/a)`.
    FullLevel,
    /// `[Gamma_K : Gamma_K0(a)]`, the cardinality of `P^1(O_K/a)`.
    Hecke,
}

/// The finite ring `O_K / a` with explicit residue representatives.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    field: Field,
    a: i64,
    b: i64,
    c: i64,
    size: usize,
}

impl QuotientRing {
    pub fn new(ideal: &QuadIdeal) -> QuotientRing {
        let [a, b, _, c] = ideal.hnf_rows();
        QuotientRing {
            field: ideal.field(),
            a,
            b,
            c,
            size: (a * c) as usize,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Residue representative of `x + y*omega` inside `[0,a) x [0,c)`.
    fn reduce(&self, x: i64, y: i64) -> (i64, i64) {
        let j = x.div_euclid(self.a);
        let x = x - j * self.a;
        let y = y - j * self.b;
        (x, y.rem_euclid(self.c))
    }

    fn index_of(&self, x: i64, y: i64) -> usize {
        let (x, y) = self.reduce(x, y);
        (y * self.a + x) as usize
    }

    /// Residue index of a ring element.
    pub fn index_of_element(&self, q: &super::QuadInt) -> usize {
        self.index_of(
            q.x().rem_euclid(self.a * self.c),
            q.y().rem_euclid(self.a * self.c),
        )
    }

    fn coords(&self, idx: usize) -> (i64, i64) {
        let idx = idx as i64;
        (idx % self.a, idx / self.a)
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.index_of(1, 0)
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let (x1, y1) = self.coords(i);
        let (x2, y2) = self.coords(j);
        self.index_of(x1 + x2, y1 + y2)
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let (x1, y1) = self.coords(i);
        let (x2, y2) = self.coords(j);
        let t = self.field.omega_trace() as i128;
        let m = self.field.omega_norm() as i128;
        let (x1, y1, x2, y2) = (x1 as i128, y1 as i128, x2 as i128, y2 as i128);
        let x = x1 * x2 - m * y1 * y2;
        let y = x1 * y2 + y1 * x2 + t * y1 * y2;
        self.index_of(
            (x.rem_euclid((self.a * self.c) as i128 * 4)) as i64,
            (y.rem_euclid((self.a * self.c) as i128 * 4)) as i64,
        )
    }

    /// Whether the residues `i, j` generate the unit ideal together with `a`.
    pub fn is_unimodular_pair(&self, i: usize, j: usize) -> bool {
        let (x1, y1) = self.coords(i);
        let (x2, y2) = self.coords(j);
        let w = self.field.omega();
        let l1 = self.field.int(x1, y1);
        let l2 = self.field.int(x2, y2);
        let l1w = l1 * w;
        let l2w = l2 * w;
        let rows = [
            (l1.x(), l1.y()),
            (l1w.x(), l1w.y()),
            (l2.x(), l2.y()),
            (l2w.x(), l2w.y()),
            (self.a, self.b),
            (0, self.c),
        ];
        matches!(hnf_rows(&rows), Some([1, 0, 0, 1]))
    }

    pub fn is_unit(&self, i: usize) -> bool {
        self.is_unimodular_pair(i, self.zero())
    }

    pub fn units(&self) -> Vec<usize> {
        (0..self.size).filter(|i| self.is_unit(*i)).collect()
    }

    /// Order of `SL2` over this ring by enumeration: the number of matrices
    /// `[[alpha, beta], [gamma, delta]]` with `alpha*delta - beta*gamma = 1`.
    pub fn sl2_order(&self) -> i64 {
        let n = self.size;
        // pair_product[s] = #{(alpha, delta) : alpha * delta = s}
        let mut pair_product = vec![0u64; n];
        for alpha in 0..n {
            for delta in 0..n {
                pair_product[self.mul(alpha, delta)] += 1;
            }
        }
        let one = self.one();
        let mut total = 0u64;
        for beta in 0..n {
            for gamma in 0..n {
                total += pair_product[self.add(one, self.mul(beta, gamma))];
            }
        }
        total as i64
    }

    /// Order of the upper-triangular determinant-1 subgroup by enumeration.
    pub fn borel_order(&self) -> i64 {
        let n = self.size;
        let one = self.one();
        let mut diag = 0u64;
        for alpha in 0..n {
            for delta in 0..n {
                if self.mul(alpha, delta) == one {
                    diag += 1;
                }
            }
        }
        diag as i64 * n as i64
    }

    /// Cardinality of the projective line: unimodular pairs up to the unit
    /// action, counted by orbit enumeration.
    pub fn projective_line_order(&self) -> i64 {
        let n = self.size;
        let units = self.units();
        let mut seen = vec![false; n * n];
        let mut orbits = 0i64;
        for i in 0..n {
            for j in 0..n {
                if seen[i * n + j] || !self.is_unimodular_pair(i, j) {
                    continue;
                }
                orbits += 1;
                for u in &units {
                    let (ui, uj) = (self.mul(*u, i), self.mul(*u, j));
                    seen[ui * n + uj] = true;
                }
            }
        }
        orbits
    }
}

/// Congruence-subgroup index in the Bianchi group by finite enumeration.
pub fn sl2_index_oracle(
    ideal: &QuadIdeal,
    kind: OracleKind,
    bound: i64,
) -> Result<i64, RingError> {
    let norm = ideal.norm();
    if norm > bound {
        return Err(RingError::OracleBound { norm, bound });
    }
    if norm == 1 {
        return Ok(1);
    }
    let ring = QuotientRing::new(ideal);
    Ok(match kind {
        OracleKind::FullLevel => ring.sl2_order(),
        OracleKind::Hecke => ring.projective_line_order(),
    })
}
