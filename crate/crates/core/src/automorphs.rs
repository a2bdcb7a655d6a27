//! The automorph group of a form: bounded generator search with exact
//! verification, congruence intersections, orbit canonicalization of pairs,
//! and equivalence testing with machine-checked witnesses.

use std::collections::{BTreeSet, VecDeque};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{matrices_mapping, normalizing_transform, HermitianForm, UniMat, UniMatRepr};
use crate::hyperbolic::{
    foot_of_perpendicular, h2_cosh_m1, h2_distance, reduce_point, CuspHoroball, GeomError,
    H2Isometry, H2Point, PlaneChart, PlaneOfForm,
};
use crate::ring::{is_coprime_pair, QuadInt};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("pair represents zero; routed to the boundary-orbit path")]
    NullPair,
    #[error("pair is not coprime")]
    NonCoprime,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Generators of the automorph group of a form found by bounded search.
///
/// Every stored matrix satisfies `f.compose(g) == f` exactly; the set is
/// closed under inverse and contains `-id` when the group does. Completeness
/// is heuristic (`complete_hint` records whether a downstream covolume check
/// validated the set).
#[derive(Debug, Clone)]
pub struct AutomorphSet {
    pub form: HermitianForm,
    pub gens: Vec<UniMat>,
    pub search_height: i64,
    pub complete_hint: bool,
}

impl AutomorphSet {
    pub fn contains_minus_id(&self) -> bool {
        self.gens.iter().any(|g| g.neg().is_identity())
    }

    pub fn noncentral(&self) -> Vec<UniMat> {
        self.gens.iter().copied().filter(|g| !g.is_central()).collect()
    }

    /// Checks every generator exactly.
    pub fn verify(&self) -> bool {
        self.gens.iter().all(|g| self.form.compose(g) == self.form)
    }
}

/// Exhaustive automorph search over entry norms at most `height`.
///
/// Forms with `a = 0` are conjugated to a nonzero leading coefficient first
/// and the results conjugated back, so the height bound then applies to the
/// transformed search.
pub fn find_automorphs(f: &HermitianForm, height: i64) -> AutomorphSet {
    let field = f.field();
    let conj = if f.a() != 0 {
        UniMat::identity(field)
    } else {
        normalizing_transform(f)
    };
    let work = f.compose(&conj);
    let raw = matrices_mapping(&work, &work, height);
    let conj_inv = conj.inverse();
    let mut seen = BTreeSet::new();
    let mut gens = Vec::new();
    let minus_id = UniMat::identity(field).neg();
    gens.push(minus_id);
    seen.insert(minus_id.sign_canonical());
    seen.insert(UniMat::identity(field).sign_canonical());
    for g in raw {
        let back = conj.mul(&g).mul(&conj_inv);
        debug_assert_eq!(f.compose(&back), *f);
        for h in [back.sign_canonical(), back.sign_canonical().inverse().sign_canonical()] {
            if seen.insert(h) {
                gens.push(h);
            }
        }
    }
    gens.sort_by_key(unimat_key);
    AutomorphSet {
        form: *f,
        gens,
        search_height: height,
        complete_hint: false,
    }
}

fn unimat_key(g: &UniMat) -> [i64; 8] {
    let [a, b, c, d] = g.entries();
    [a.x(), a.y(), b.x(), b.y(), c.x(), c.y(), d.x(), d.y()]
}

fn pair_key(u: &QuadInt, v: &QuadInt) -> [i64; 4] {
    [u.x(), u.y(), v.x(), v.y()]
}

fn subgroup_alphabet(aset: &AutomorphSet) -> Vec<UniMat> {
    let field = aset.form.field();
    let mut alphabet: Vec<UniMat> = Vec::new();
    let mut seen = BTreeSet::new();
    for g in aset.noncentral() {
        for h in [g, g.inverse()] {
            if seen.insert(unimat_key(&h)) {
                alphabet.push(h);
            }
        }
    }
    let minus_id = UniMat::identity(field).neg();
    if seen.insert(unimat_key(&minus_id)) {
        alphabet.push(minus_id);
    }
    alphabet
}

fn collect_intersection(
    aset: &AutomorphSet,
    mut raw: Vec<UniMat>,
    cap: usize,
) -> AutomorphSet {
    let mut keys = BTreeSet::new();
    let mut gens = Vec::new();
    raw.sort_by_key(|g| (g.max_entry_norm(), unimat_key(g)));
    for g in raw {
        if g.is_identity() {
            continue;
        }
        if keys.insert(unimat_key(&g)) {
            gens.push(g);
            let inv = g.inverse();
            if keys.insert(unimat_key(&inv)) {
                gens.push(inv);
            }
        }
        if gens.len() >= cap {
            break;
        }
    }
    gens.sort_by_key(unimat_key);
    AutomorphSet {
        form: aset.form,
        gens,
        search_height: aset.search_height,
        complete_hint: false,
    }
}

/// Generators of the intersection with a subgroup, from bounded words of the
/// full automorph set filtered through the membership predicate.
///
/// When every generator already satisfies the predicate the intersection is
/// the whole group and the set is returned unchanged. Otherwise `-id` takes
/// part in the alphabet so that members of the form `-w` are found even when
/// neither factor is a member, and the collected members are kept smallest
/// first under a generating-set cap (completeness stays heuristic and is
/// validated by the covolume downstream).
pub fn intersect_with_subgroup<M: Fn(&UniMat) -> bool>(
    aset: &AutomorphSet,
    member: M,
    word_length: usize,
) -> AutomorphSet {
    if aset.gens.iter().all(&member) {
        return aset.clone();
    }
    let field = aset.form.field();
    let alphabet = subgroup_alphabet(aset);
    let mut visited: BTreeSet<[i64; 8]> = BTreeSet::new();
    let mut members: Vec<UniMat> = Vec::new();
    let mut frontier = vec![UniMat::identity(field)];
    visited.insert(unimat_key(&frontier[0]));
    let cap = 300_000usize;
    for _ in 0..word_length {
        let mut next = Vec::new();
        for w in &frontier {
            for a in &alphabet {
                let cand = a.mul(w);
                if !visited.insert(unimat_key(&cand)) {
                    continue;
                }
                if member(&cand) {
                    members.push(cand);
                }
                next.push(cand);
            }
            if visited.len() > cap {
                break;
            }
        }
        if next.is_empty() || visited.len() > cap {
            break;
        }
        frontier = next;
    }
    collect_intersection(aset, members, 160)
}

/// Generators of `SU_f ∩ Gamma(a)` or `SU_f ∩ Gamma_0(a)` by the Schreier
/// construction on the finite coset action.
///
/// The Hecke group is the stabilizer of the class of `(1,0)` in the
/// projective line over `O_K / a`, the level group is the kernel of the
/// reduction map; in both cases the orbit of the base state under the
/// automorph generators is finite, and the Schreier elements
/// `w(q)^{-1} g w(p)` along a spanning tree of the orbit graph generate the
/// stabilizer whenever the input set generates the group.
pub fn intersect_congruence(
    aset: &AutomorphSet,
    ideal: &crate::ring::QuadIdeal,
    hecke: bool,
) -> AutomorphSet {
    use crate::ring::quotient::QuotientRing;
    let field = aset.form.field();
    if ideal.is_unit_ideal() {
        return aset.clone();
    }
    let ring = QuotientRing::new(ideal);
    let reduce = |g: &UniMat| -> [usize; 4] {
        let [a, b, c, d] = g.entries();
        [
            ring.index_of_element(&a),
            ring.index_of_element(&b),
            ring.index_of_element(&c),
            ring.index_of_element(&d),
        ]
    };
    let mat_mul = |x: &[usize; 4], y: &[usize; 4]| -> [usize; 4] {
        [
            ring.add(ring.mul(x[0], y[0]), ring.mul(x[1], y[2])),
            ring.add(ring.mul(x[0], y[1]), ring.mul(x[1], y[3])),
            ring.add(ring.mul(x[2], y[0]), ring.mul(x[3], y[2])),
            ring.add(ring.mul(x[2], y[1]), ring.mul(x[3], y[3])),
        ]
    };
    // State: the matrix class mod the ideal for the level group, or the
    // projective class of the first column for the Hecke group.
    let units = ring.units();
    let state_of = |m: &[usize; 4]| -> Vec<usize> {
        if hecke {
            let mut best = vec![usize::MAX, usize::MAX];
            for u in &units {
                let cand = vec![ring.mul(*u, m[0]), ring.mul(*u, m[2])];
                if cand < best {
                    best = cand;
                }
            }
            best
        } else {
            m.to_vec()
        }
    };
    let alphabet = subgroup_alphabet(aset);
    let reduced: Vec<[usize; 4]> = alphabet.iter().map(&reduce).collect();
    let id_red = reduce(&UniMat::identity(field));
    let base = state_of(&id_red);
    // Orbit BFS with exact word representatives.
    let mut orbit: std::collections::BTreeMap<Vec<usize>, (UniMat, [usize; 4])> =
        std::collections::BTreeMap::new();
    orbit.insert(base.clone(), (UniMat::identity(field), id_red));
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    queue.push_back(base);
    let orbit_cap = 100_000usize;
    while let Some(state) = queue.pop_front() {
        let (rep, rep_red) = orbit.get(&state).unwrap().clone();
        for (g, g_red) in alphabet.iter().zip(&reduced) {
            let next_red = mat_mul(g_red, &rep_red);
            let next_state = state_of(&next_red);
            if !orbit.contains_key(&next_state) && orbit.len() < orbit_cap {
                orbit.insert(next_state.clone(), (g.mul(&rep), next_red));
                queue.push_back(next_state);
            }
        }
    }
    // Schreier generators.
    let mut raw = Vec::new();
    for (rep, rep_red) in orbit.values() {
        for (g, g_red) in alphabet.iter().zip(&reduced) {
            let next_red = mat_mul(g_red, rep_red);
            let next_state = state_of(&next_red);
            let (target_rep, _) = orbit.get(&next_state).expect("orbit is closed");
            let schreier = target_rep.inverse().mul(g).mul(rep);
            raw.push(schreier);
        }
    }
    let out = collect_intersection(aset, raw, 160);
    debug_assert!(out.gens.iter().all(|g| {
        let member = if hecke {
            ideal.contains(&g.gamma())
        } else {
            let one = field.one();
            ideal.contains(&(g.alpha() - one))
                && ideal.contains(&(g.delta() - one))
                && ideal.contains(&g.beta())
                && ideal.contains(&g.gamma())
        };
        member && aset.form.compose(g) == aset.form
    }));
    out
}

/// Tunables of the reduction machinery.
#[derive(Debug, Clone)]
pub struct FuchsianParams {
    pub seed: u64,
    pub tol: f64,
    /// Word depth of the element ball used for foot-stabilizer sweeps.
    pub stab_word_depth: usize,
    /// Word depth of the exact escalation search in ambiguous verdicts.
    pub escalation_depth: usize,
    pub escalation_cap: usize,
}

impl Default for FuchsianParams {
    fn default() -> FuchsianParams {
        FuchsianParams {
            seed: 1,
            tol: 1e-9,
            stab_word_depth: 2,
            escalation_depth: 10,
            escalation_cap: 200_000,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator set with chart, base point and reduction state for one form.
pub struct FuchsianData {
    form: HermitianForm,
    plane: PlaneOfForm<f64>,
    chart: PlaneChart<f64>,
    base: H2Point<f64>,
    gens_exact: Vec<UniMat>,
    gens_intr: Vec<H2Isometry<f64>>,
    ball: Vec<(UniMat, H2Isometry<f64>)>,
    has_minus_id: bool,
    params: FuchsianParams,
}

impl FuchsianData {
    /// Builds the reduction state; the form needs a nonzero leading
    /// coefficient (counting normalizes first).
    ///
    /// The base point is a deterministic jitter of the chart image of the
    /// plane apex, keeping it off elliptic fixed points with a configurable
    /// seed.
    pub fn new(
        aset: &AutomorphSet,
        params: FuchsianParams,
    ) -> Result<FuchsianData, GeomError> {
        let form = aset.form;
        let chart = PlaneChart::<f64>::new(&form)?;
        let plane = PlaneOfForm::<f64>::from_form(&form)?;
        let mut state = params.seed ^ 0xA076_1D64_78BD_642F;
        let r1 = splitmix64(&mut state) as f64 / u64::MAX as f64;
        let r2 = splitmix64(&mut state) as f64 / u64::MAX as f64;
        let base = num_complex::Complex::new(
            (r1 - 0.5) * 0.381_966_011_250_105,
            ((r2 - 0.5) * 0.267_949_192_431_123).exp(),
        );

        // Reduction generators: noncentral, closed under inverse, one per
        // projective class (the plane action of g and -g coincide).
        let mut gens_exact = Vec::new();
        let mut gens_intr = Vec::new();
        let mut seen = BTreeSet::new();
        for g in aset.noncentral() {
            for h in [g, g.inverse()] {
                if !seen.insert(unimat_key(&h.sign_canonical())) {
                    continue;
                }
                gens_intr.push(chart.isometry(&h)?);
                gens_exact.push(h);
            }
        }

        // Element ball for stabilizer sweeps.
        let mut ball = vec![(
            UniMat::identity(form.field()),
            H2Isometry::<f64>::identity(),
        )];
        let mut ball_seen: BTreeSet<[i64; 8]> =
            ball.iter().map(|(g, _)| unimat_key(g)).collect();
        let mut frontier: Vec<UniMat> = vec![UniMat::identity(form.field())];
        for _ in 0..params.stab_word_depth {
            let mut next = Vec::new();
            for w in &frontier {
                for g in &gens_exact {
                    let cand = g.mul(w);
                    let canon = cand.sign_canonical();
                    if !ball_seen.insert(unimat_key(&canon)) {
                        continue;
                    }
                    ball.push((cand, chart.isometry(&cand)?));
                    next.push(cand);
                }
            }
            if next.is_empty() || ball.len() > 4096 {
                break;
            }
            frontier = next;
        }

        Ok(FuchsianData {
            form,
            plane,
            chart,
            base,
            gens_exact,
            gens_intr,
            ball,
            has_minus_id: aset.contains_minus_id(),
            params,
        })
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn base(&self) -> H2Point<f64> {
        self.base
    }

    pub fn generators(&self) -> &[UniMat] {
        &self.gens_exact
    }

    pub fn plane_isometries(&self) -> &[H2Isometry<f64>] {
        &self.gens_intr
    }

    pub fn params(&self) -> &FuchsianParams {
        &self.params
    }

    pub fn chart(&self) -> &PlaneChart<f64> {
        &self.chart
    }

    /// Chart coordinates of the perpendicular foot of a pair.
    pub fn foot(&self, u: &QuadInt, v: &QuadInt) -> Result<H2Point<f64>, OrbitError> {
        let hb = CuspHoroball::new(*u, *v).map_err(|_| OrbitError::NonCoprime)?;
        let (foot3, _) = foot_of_perpendicular(&self.plane, &hb)?;
        let (p, _residue) = self.chart.to_plane(&foot3);
        Ok(p)
    }

    /// Whether some nontrivial ball element fixes the pair projectively,
    /// which would give its perpendicular a multiplicity below one.
    pub fn pair_multiplicity_event(&self, pair: (QuadInt, QuadInt)) -> bool {
        let units = self.form.field().roots_of_unity();
        for (sigma, _) in &self.ball {
            if sigma.is_central() {
                continue;
            }
            let q = sigma.apply_pair(&pair.0, &pair.1);
            if units
                .iter()
                .any(|unit| q == (pair.0 * *unit, pair.1 * *unit))
            {
                return true;
            }
        }
        false
    }
}

/// Canonical orbit representative of a pair, with the exact witness mapping
/// the input to it.
#[derive(Debug, Clone)]
pub struct CanonicalRep {
    pub pair: (QuadInt, QuadInt),
    pub value: i64,
    /// Reduced foot in plane coordinates.
    pub foot: H2Point<f64>,
    /// Product of generators with `witness . input = pair`.
    pub witness: UniMat,
}

/// Reduces the perpendicular foot of the pair into the Dirichlet domain of
/// the base point, applies the exact word to the pair, then normalizes under
/// the elements of the ball fixing the reduced foot (and the sign, when the
/// group contains `-id`), taking the lexicographic minimum.
pub fn canonical_orbit_rep(
    pair: (QuadInt, QuadInt),
    fdata: &FuchsianData,
) -> Result<CanonicalRep, OrbitError> {
    let (u, v) = pair;
    let value = fdata.form.eval(&u, &v);
    if value == 0 {
        return Err(OrbitError::NullPair);
    }
    if !is_coprime_pair(&u, &v).map_err(|_| OrbitError::NonCoprime)? {
        return Err(OrbitError::NonCoprime);
    }
    let p = fdata.foot(&u, &v)?;
    let tol = fdata.params.tol;
    let (p_red, word) = reduce_point(&p, &fdata.gens_intr, &fdata.base, tol);
    let mut w = UniMat::identity(fdata.form.field());
    for i in &word {
        w = fdata.gens_exact[*i].mul(&w);
    }
    let mapped = w.apply_pair(&u, &v);

    let near_sur = (10.0 * tol).cosh() - 1.0;
    let mut best_pair = mapped;
    let mut best_witness = w;
    let mut consider = |cand: (QuadInt, QuadInt), witness: UniMat| {
        if pair_key(&cand.0, &cand.1) < pair_key(&best_pair.0, &best_pair.1) {
            best_pair = cand;
            best_witness = witness;
        }
    };
    for (sigma, sigma_intr) in &fdata.ball {
        if h2_cosh_m1(&sigma_intr.apply(&p_red), &p_red) > near_sur {
            continue;
        }
        let cand = sigma.apply_pair(&mapped.0, &mapped.1);
        let witness = sigma.mul(&w);
        consider(cand, witness);
        if fdata.has_minus_id {
            consider((-cand.0, -cand.1), witness.neg());
        }
    }
    debug_assert_eq!(
        best_witness.apply_pair(&u, &v),
        best_pair,
        "witness must map the input to the canonical pair"
    );
    debug_assert_eq!(
        fdata.form.eval(&best_pair.0, &best_pair.1),
        value,
        "automorph witnesses preserve the value"
    );
    Ok(CanonicalRep {
        pair: best_pair,
        value,
        foot: p_red,
        witness: best_witness,
    })
}

/// Outcome of an equivalence test: positive verdicts carry an exact witness
/// that is a product of stored generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    Equivalent(UniMat),
    InequivalentModuloGenerators,
    Unknown,
}

/// Exact breadth-first word search mapping `from` to `to`.
pub fn bfs_witness(
    fdata: &FuchsianData,
    from: (QuadInt, QuadInt),
    to: (QuadInt, QuadInt),
    depth: usize,
    cap: usize,
) -> Option<UniMat> {
    let field = fdata.form.field();
    let id = UniMat::identity(field);
    if from == to {
        return Some(id);
    }
    let mut alphabet = fdata.gens_exact.clone();
    if fdata.has_minus_id {
        alphabet.push(id.neg());
    }
    let mut visited: BTreeSet<[i64; 4]> = BTreeSet::new();
    visited.insert(pair_key(&from.0, &from.1));
    let mut queue = VecDeque::new();
    queue.push_back((from, id, 0usize));
    while let Some((pair, w, d)) = queue.pop_front() {
        if d >= depth {
            continue;
        }
        for g in &alphabet {
            let np = g.apply_pair(&pair.0, &pair.1);
            if !visited.insert(pair_key(&np.0, &np.1)) {
                continue;
            }
            let nw = g.mul(&w);
            if np == to {
                return Some(nw);
            }
            if visited.len() < cap {
                queue.push_back((np, nw, d + 1));
            }
        }
        if visited.len() >= cap {
            break;
        }
    }
    None
}

/// Decides equivalence of two pairs under the group carried by `fdata`.
///
/// Equal form values are a necessary condition and checked first. Null pairs
/// go through exact word search only. Otherwise canonical representatives
/// are compared; on mismatch with nearby reduced feet the verdict escalates
/// to an exact word search before giving up as `Unknown`.
pub fn are_equivalent(
    pair1: (QuadInt, QuadInt),
    pair2: (QuadInt, QuadInt),
    fdata: &FuchsianData,
) -> Result<EquivalenceVerdict, OrbitError> {
    let v1 = fdata.form.eval(&pair1.0, &pair1.1);
    let v2 = fdata.form.eval(&pair2.0, &pair2.1);
    if v1 != v2 {
        return Ok(EquivalenceVerdict::InequivalentModuloGenerators);
    }
    let params = &fdata.params;
    if v1 == 0 {
        return Ok(
            match bfs_witness(
                fdata,
                pair1,
                pair2,
                params.escalation_depth,
                params.escalation_cap,
            ) {
                Some(w) => EquivalenceVerdict::Equivalent(w),
                None => EquivalenceVerdict::Unknown,
            },
        );
    }
    let r1 = canonical_orbit_rep(pair1, fdata)?;
    let r2 = canonical_orbit_rep(pair2, fdata)?;
    if r1.pair == r2.pair {
        let witness = r2.witness.inverse().mul(&r1.witness);
        debug_assert_eq!(witness.apply_pair(&pair1.0, &pair1.1), pair2);
        return Ok(EquivalenceVerdict::Equivalent(witness));
    }
    let near = 10.0 * params.tol;
    let feet_close = h2_distance(&r1.foot, &r2.foot) < near
        || fdata
            .gens_intr
            .iter()
            .any(|g| h2_distance(&g.apply(&r1.foot), &r2.foot) < near);
    if feet_close {
        return Ok(
            match bfs_witness(
                fdata,
                pair1,
                pair2,
                params.escalation_depth,
                params.escalation_cap,
            ) {
                Some(w) => EquivalenceVerdict::Equivalent(w),
                None => EquivalenceVerdict::Unknown,
            },
        );
    }
    Ok(EquivalenceVerdict::InequivalentModuloGenerators)
}

/// Canonical key of a null pair: lexicographic minimum over bounded words and
/// unit scalings, realizing orbit matching of boundary points by exact
/// projective equality.
pub fn canonical_null_key(pair: (QuadInt, QuadInt), fdata: &FuchsianData) -> [i64; 4] {
    let units = fdata.form.field().roots_of_unity();
    let mut best = pair_key(&pair.0, &pair.1);
    for (sigma, _) in &fdata.ball {
        let q = sigma.apply_pair(&pair.0, &pair.1);
        for unit in &units {
            let cand = (q.0 * *unit, q.1 * *unit);
            let key = pair_key(&cand.0, &cand.1);
            if key < best {
                best = key;
            }
        }
    }
    best
}

#[derive(Serialize, Deserialize)]
struct GeneratorCacheFile {
    d_k: i64,
    a: i64,
    b: [i64; 2],
    c: i64,
    height: i64,
    gens: Vec<UniMatRepr>,
}

/// File name keyed by form and search height, so deeper searches never reuse
/// shallow results.
pub fn cache_file_name(f: &HermitianForm, height: i64) -> String {
    format!(
        "gens_dk{}_a{}_bx{}_by{}_c{}_h{}.json",
        f.field().discriminant(),
        f.a(),
        f.b().x(),
        f.b().y(),
        f.c(),
        height
    )
}

pub fn save_generator_cache(dir: &Path, aset: &AutomorphSet) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(&aset.form, aset.search_height));
    let file = GeneratorCacheFile {
        d_k: aset.form.field().discriminant(),
        a: aset.form.a(),
        b: [aset.form.b().x(), aset.form.b().y()],
        c: aset.form.c(),
        height: aset.search_height,
        gens: aset.gens.iter().map(UniMatRepr::of).collect(),
    };
    let mut f = std::fs::File::create(&path)?;
    f.write_all(serde_json::to_string_pretty(&file).unwrap().as_bytes())?;
    Ok(path)
}

/// Loads a cached generator set; every matrix is re-verified exactly and the
/// cache is ignored on any mismatch.
pub fn load_generator_cache(
    dir: &Path,
    form: &HermitianForm,
    height: i64,
) -> Option<AutomorphSet> {
    let path = dir.join(cache_file_name(form, height));
    let text = std::fs::read_to_string(path).ok()?;
    let file: GeneratorCacheFile = serde_json::from_str(&text).ok()?;
    if file.d_k != form.field().discriminant()
        || file.a != form.a()
        || file.b != [form.b().x(), form.b().y()]
        || file.c != form.c()
        || file.height != height
    {
        return None;
    }
    let mut gens = Vec::new();
    for repr in &file.gens {
        let g = repr.into_unimat(form.field()).ok()?;
        if form.compose(&g) != *form {
            return None;
        }
        gens.push(g);
    }
    Some(AutomorphSet {
        form: *form,
        gens,
        search_height: height,
        complete_hint: false,
    })
}

/// Cached wrapper around [`find_automorphs`].
pub fn find_automorphs_cached(
    f: &HermitianForm,
    height: i64,
    cache_dir: Option<&Path>,
) -> AutomorphSet {
    if let Some(dir) = cache_dir {
        if let Some(aset) = load_generator_cache(dir, f, height) {
            return aset;
        }
    }
    let aset = find_automorphs(f, height);
    if let Some(dir) = cache_dir {
        let _ = save_generator_cache(dir, &aset);
    }
    aset
}
