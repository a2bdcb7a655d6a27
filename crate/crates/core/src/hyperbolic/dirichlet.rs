//! Dirichlet fundamental polygons of plane Fuchsian groups.
//!
//! The construction moves to the Poincare disk centered at the base point.
//! Every group element within a word/radius ball contributes the hyperbolic
//! perpendicular bisector of the segment from the center to its orbit point:
//! a circle orthogonal to the unit circle. The Dirichlet cell is the set of
//! disk points outside every bisector circle; since the cell is star-shaped
//! around the center, its boundary is the lower envelope of the radial
//! distance functions of the circles, which is sampled, refined at the
//! junctions by bisection plus exact circle-circle intersection, and measured
//! by Gauss-Bonnet with ideal vertices contributing angle zero.

use num_complex::Complex;
use serde::Serialize;

use super::{h2_distance, GeomError, H2Isometry, H2Point};
use crate::scalar::Real;

/// Quality knobs of the polygon construction.
#[derive(Debug, Clone)]
pub struct DomainQuality {
    /// Maximal word length explored when building the element ball.
    pub word_depth: usize,
    /// Hyperbolic radius: orbit points beyond it are discarded.
    pub ball_radius: f64,
    /// Angular samples of the envelope.
    pub samples: usize,
    /// Hard cap on the number of bisector circles.
    pub max_elements: usize,
    /// Distance to the unit circle below which a junction is ideal.
    pub ideal_eps: f64,
    /// Free-boundary runs wider than this (radians) fail the construction.
    pub max_free_gap: f64,
}

impl Default for DomainQuality {
    fn default() -> DomainQuality {
        DomainQuality {
            word_depth: 16,
            ball_radius: 7.0,
            samples: 16384,
            max_elements: 20000,
            ideal_eps: 1e-5,
            max_free_gap: 2e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PolygonVertex<R> {
    /// Disk-model coordinates in the chart centered at the base point.
    pub x: R,
    pub y: R,
    /// Interior angle; zero at ideal vertices.
    pub angle: R,
    pub ideal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DirichletPolygon<R> {
    pub vertices: Vec<PolygonVertex<R>>,
    /// Gauss-Bonnet area `(n-2) pi - sum of interior angles`.
    pub area: R,
    /// Number of bisector circles that contribute a side.
    pub sides: usize,
    /// Orbit points examined.
    pub ball_size: usize,
}

/// Orbit ball of the group generated by `gens`, deduplicated by orbit point.
///
/// Breadth-first products are pruned once the orbit point leaves the ball
/// radius by a fixed slack, which keeps almost-geodesic words; completeness
/// is heuristic and validated downstream by the area itself.
fn orbit_ball<R: Real>(
    gens: &[H2Isometry<R>],
    base: &H2Point<R>,
    quality: &DomainQuality,
) -> Vec<(R, H2Point<R>)> {
    let slack = R::from_f64_lossy(2.0);
    let radius = R::from_f64_lossy(quality.ball_radius);
    let quant = |p: &H2Point<R>| -> (i64, i64) {
        let s = 1e9;
        (
            (p.re.to_f64().unwrap() * s).round() as i64,
            (p.im.to_f64().unwrap() * s).round() as i64,
        )
    };
    let mut seen = std::collections::HashSet::new();
    seen.insert(quant(base));
    let mut out: Vec<(R, H2Point<R>)> = Vec::new();
    let mut frontier = vec![H2Isometry::<R>::identity()];
    let hard_cap = 1_000_000usize;
    let mut visited = 0usize;
    for _ in 0..quality.word_depth {
        let mut next = Vec::new();
        for g in &frontier {
            for h in gens {
                let cand = h.compose(g);
                let p = cand.apply(base);
                visited += 1;
                if visited > hard_cap {
                    break;
                }
                let d = h2_distance(&p, base);
                if d > radius + slack {
                    continue;
                }
                if !seen.insert(quant(&p)) {
                    continue;
                }
                if d <= radius && d > R::from_f64_lossy(1e-9) {
                    out.push((d, p));
                }
                next.push(cand);
            }
        }
        if next.is_empty() || visited > hard_cap {
            break;
        }
        frontier = next;
    }
    out.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then_with(|| a.1.re.partial_cmp(&b.1.re).unwrap())
            .then_with(|| a.1.im.partial_cmp(&b.1.im).unwrap())
    });
    out.truncate(quality.max_elements);
    out
}

/// Bisector of the disk center and an interior point, as a circle orthogonal
/// to the unit circle.
#[derive(Debug, Clone, Copy)]
struct Bisector<R> {
    center: Complex<R>,
    radius: R,
    /// `|center|`, cached.
    dist: R,
}

fn bisector_of<R: Real>(v: Complex<R>) -> Bisector<R> {
    let e = v.norm();
    // Euclidean radius of the hyperbolic midpoint of [0, v].
    let rho_m = e / (R::one() + (R::one() - e * e).max(R::zero()).sqrt());
    let two = R::from_f64_lossy(2.0);
    let rho_c = (R::one() - rho_m * rho_m) / (two * rho_m);
    let dist = rho_m + rho_c;
    Bisector {
        center: v / e * dist,
        radius: rho_c,
        dist,
    }
}

/// First crossing of the ray `s * e^{i phi}` with the bisector, or `None`
/// when the ray misses it. Uses `|center|^2 - radius^2 = 1`.
fn ray_hit<R: Real>(b: &Bisector<R>, dir: Complex<R>) -> Option<R> {
    let proj = (b.center * dir.conj()).re;
    if proj < R::one() {
        return None;
    }
    Some(proj - (proj * proj - R::one()).max(R::zero()).sqrt())
}

const NO_OWNER: usize = usize::MAX;

/// Builds the Dirichlet polygon of the group generated by `gens` around
/// `base` and measures its area by Gauss-Bonnet.
pub fn dirichlet_domain_area<R: Real>(
    gens: &[H2Isometry<R>],
    base: &H2Point<R>,
    quality: &DomainQuality,
) -> Result<DirichletPolygon<R>, GeomError> {
    let ball = orbit_ball(gens, base, quality);
    if ball.is_empty() {
        return Err(GeomError::PolygonNotClosed {
            gap: std::f64::consts::TAU,
        });
    }
    // Disk chart centered at base.
    let base_conj = base.conj();
    let cayley = |z: &H2Point<R>| (z - base) / (z - base_conj);
    let bisectors: Vec<Bisector<R>> = ball.iter().map(|(_, p)| bisector_of(cayley(p))).collect();

    let s_count = quality.samples;
    let tau = R::from_f64_lossy(std::f64::consts::TAU);
    let phi_of = |k: usize| tau * R::from_f64_lossy((k as f64 + 0.5) / s_count as f64);
    let mut env = vec![R::one(); s_count];
    let mut owner = vec![NO_OWNER; s_count];
    for (j, b) in bisectors.iter().enumerate() {
        let theta = b.center.im.atan2(b.center.re).to_f64().unwrap();
        let half = (1.0 / b.dist.to_f64().unwrap()).clamp(-1.0, 1.0).acos();
        let lo = ((theta - half) / std::f64::consts::TAU * s_count as f64).floor() as i64 - 1;
        let hi = ((theta + half) / std::f64::consts::TAU * s_count as f64).ceil() as i64 + 1;
        for kk in lo..=hi {
            let k = kk.rem_euclid(s_count as i64) as usize;
            let phi = phi_of(k);
            let dir = Complex::from_polar(R::one(), phi);
            if let Some(s) = ray_hit(b, dir) {
                if s < env[k] {
                    env[k] = s;
                    owner[k] = j;
                }
            }
        }
    }

    // Runs of constant owner around the circle.
    let start = (0..s_count)
        .find(|k| owner[*k] != owner[(k + s_count - 1) % s_count])
        .ok_or_else(|| {
            if owner[0] == NO_OWNER {
                GeomError::PolygonNotClosed {
                    gap: std::f64::consts::TAU,
                }
            } else {
                GeomError::DegeneratePolygon("single bisector covers all directions".into())
            }
        })?;
    let mut runs: Vec<(usize, usize, usize)> = Vec::new(); // (owner, first, len)
    {
        let mut k = start;
        loop {
            let o = owner[k];
            let mut len = 0usize;
            while owner[(k + len) % s_count] == o && len < s_count {
                len += 1;
            }
            runs.push((o, k, len));
            k = (k + len) % s_count;
            if k == start {
                break;
            }
        }
    }
    // Reject wide free-boundary runs; collapse narrow ones into ideal marks.
    let sample_width = std::f64::consts::TAU / s_count as f64;
    for (o, _, len) in &runs {
        if *o == NO_OWNER {
            let gap = *len as f64 * sample_width;
            if gap > quality.max_free_gap.max(3.0 * sample_width) {
                return Err(GeomError::PolygonNotClosed { gap });
            }
        }
    }
    let arcs: Vec<(usize, usize, usize)> =
        runs.iter().copied().filter(|(o, _, _)| *o != NO_OWNER).collect();
    if arcs.len() < 2 {
        return Err(GeomError::DegeneratePolygon(format!(
            "only {} boundary arcs",
            arcs.len()
        )));
    }

    // One vertex per junction of consecutive arcs.
    let mut vertices: Vec<PolygonVertex<R>> = Vec::new();
    let eval_s = |j: usize, phi: R| -> R {
        ray_hit(&bisectors[j], Complex::from_polar(R::one(), phi)).unwrap_or_else(R::one)
    };
    for a in 0..arcs.len() {
        let (ci, first_i, len_i) = arcs[a];
        let (cj, first_j, _) = arcs[(a + 1) % arcs.len()];
        let k_end = (first_i + len_i - 1) % s_count;
        let separated_by_gap = (first_j + s_count - (k_end + 1)) % s_count > 0;
        if separated_by_gap {
            // Tangency at the boundary circle: ideal vertex.
            let mid = phi_of(k_end) + R::from_f64_lossy(sample_width);
            let p = Complex::from_polar(R::one(), mid);
            vertices.push(PolygonVertex {
                x: p.re,
                y: p.im,
                angle: R::zero(),
                ideal: true,
            });
            continue;
        }
        // Bisection of s_i - s_j over the bracketing samples.
        let mut lo = phi_of(k_end);
        let mut hi = lo + R::from_f64_lossy(sample_width);
        for _ in 0..70 {
            let mid = (lo + hi) / R::from_f64_lossy(2.0);
            if eval_s(ci, mid) <= eval_s(cj, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let phi = (lo + hi) / R::from_f64_lossy(2.0);
        let s = eval_s(ci, phi).min(eval_s(cj, phi));
        let rough = Complex::from_polar(s, phi);
        if R::one() - s < R::from_f64_lossy(quality.ideal_eps) {
            let p = Complex::from_polar(R::one(), phi);
            vertices.push(PolygonVertex {
                x: p.re,
                y: p.im,
                angle: R::zero(),
                ideal: true,
            });
            continue;
        }
        // Exact circle-circle intersection near the rough point.
        let (b1, b2) = (&bisectors[ci], &bisectors[cj]);
        let dvec = b2.center - b1.center;
        let d = dvec.norm();
        let p = if d > R::from_f64_lossy(1e-12) {
            let aa = (d * d + b1.radius * b1.radius - b2.radius * b2.radius)
                / (R::from_f64_lossy(2.0) * d);
            let h2 = (b1.radius * b1.radius - aa * aa).max(R::zero());
            let h = h2.sqrt();
            let mid = b1.center + dvec / d * aa;
            let off = Complex::new(-dvec.im, dvec.re) / d * h;
            let p1 = mid + off;
            let p2 = mid - off;
            if (p1 - rough).norm() < (p2 - rough).norm() {
                p1
            } else {
                p2
            }
        } else {
            rough
        };
        let r1 = (p - b1.center) / b1.radius;
        let r2 = (p - b2.center) / b2.radius;
        let dot = (r1.re * r2.re + r1.im * r2.im)
            .max(-R::one())
            .min(R::one());
        let angle = R::PI() - dot.acos();
        vertices.push(PolygonVertex {
            x: p.re,
            y: p.im,
            angle,
            ideal: false,
        });
    }

    let n = vertices.len();
    if n < 3 {
        return Err(GeomError::DegeneratePolygon(format!("{n} vertices")));
    }
    let angle_sum = vertices
        .iter()
        .fold(R::zero(), |acc, v| acc + v.angle);
    let area = R::PI() * R::from_i64_lossy(n as i64 - 2) - angle_sum;
    if area <= R::zero() {
        return Err(GeomError::DegeneratePolygon(format!(
            "nonpositive area {area}"
        )));
    }
    let mut side_owners: Vec<usize> = arcs.iter().map(|(o, _, _)| *o).collect();
    side_owners.dedup();
    Ok(DirichletPolygon {
        vertices,
        area,
        sides: arcs.len(),
        ball_size: ball.len(),
    })
}

/// Area plus a stability diagnostic: the relative change when the ball radius
/// doubles (with the word depth raised to match).
pub fn dirichlet_domain_area_stable<R: Real>(
    gens: &[H2Isometry<R>],
    base: &H2Point<R>,
    quality: &DomainQuality,
) -> Result<(DirichletPolygon<R>, f64), GeomError> {
    let first = dirichlet_domain_area(gens, base, quality)?;
    let mut wide = quality.clone();
    wide.ball_radius = quality.ball_radius * 2.0;
    wide.word_depth = quality.word_depth * 2;
    let second = dirichlet_domain_area(gens, base, &wide)?;
    let rel = ((second.area - first.area).abs() / first.area)
        .to_f64()
        .unwrap();
    Ok((second, rel))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dirichlet area of the classical modular group is pi/3.
    #[test]
    fn modular_group_area() {
        let s = H2Isometry::new([0.0, -1.0, 1.0, 0.0]);
        let t = H2Isometry::new([1.0, 1.0, 0.0, 1.0]);
        let gens = [s, t, t.inverse()];
        let base = Complex::new(0.07, 1.31);
        let quality = DomainQuality {
            ball_radius: 6.0,
            word_depth: 24,
            ..DomainQuality::default()
        };
        let poly = dirichlet_domain_area(&gens, &base, &quality).unwrap();
        let expected = std::f64::consts::PI / 3.0;
        assert!(
            (poly.area - expected).abs() / expected < 0.01,
            "area {} vs {}",
            poly.area,
            expected
        );
        assert!(poly.vertices.iter().any(|v| v.ideal), "one cusp expected");
    }

    /// A Fuchsian group with two parabolic generators: the level-2 style
    /// group generated by z + 2 and z / (2z + 1) has covolume 2 pi... use
    /// instead the free product check: ideal quadrilateral area 2 pi for the
    /// group generated by z + 4 and z/(z+1)-type pairs is covered by the
    /// automorph pipeline; here only failure reporting is exercised.
    #[test]
    fn cyclic_group_does_not_close() {
        let t = H2Isometry::new([1.0, 1.0, 0.0, 1.0]);
        let gens = [t, t.inverse()];
        let base = Complex::new(0.11, 1.07);
        let err = dirichlet_domain_area(&gens, &base, &DomainQuality::default()).unwrap_err();
        assert!(matches!(err, GeomError::PolygonNotClosed { .. }));
    }

    #[test]
    fn hecke_like_group_area_stability() {
        // Gamma_0(2)-style: generated by z+1 and z/(2z+1); covolume pi.
        let t = H2Isometry::new([1.0, 1.0, 0.0, 1.0]);
        let u = H2Isometry::new([1.0, 0.0, 2.0, 1.0]);
        let gens = [t, t.inverse(), u, u.inverse()];
        let base = Complex::new(0.13, 0.83);
        let quality = DomainQuality {
            ball_radius: 5.0,
            word_depth: 20,
            ..DomainQuality::default()
        };
        let (poly, rel) = dirichlet_domain_area_stable(&gens, &base, &quality).unwrap();
        let expected = std::f64::consts::PI;
        assert!(
            (poly.area - expected).abs() / expected < 0.01,
            "area {} vs {}",
            poly.area,
            expected
        );
        assert!(rel < 0.005, "unstable area: {rel}");
    }
}
