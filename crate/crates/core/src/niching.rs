//! Reference-direction niching: objective normalization by ideal point and
//! extreme-point intercepts, association of points to their nearest
//! reference direction, and the boundary-front fill that keeps the
//! population spread across niches.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::refpoints::ReferencePointSet;

const EPS: f64 = 1e-12;

/// Translate by the ideal point and divide by the intercepts of the plane
/// through the per-axis extreme points. Falls back to the per-axis range
/// when the intercept plane is degenerate, and to 1 when a range is zero.
pub fn normalize(points: &[[f64; 3]]) -> Vec<[f64; 3]> {
    if points.is_empty() {
        return Vec::new();
    }
    let mut ideal = [f64::INFINITY; 3];
    for p in points {
        for d in 0..3 {
            ideal[d] = ideal[d].min(p[d]);
        }
    }
    let translated: Vec<[f64; 3]> = points
        .iter()
        .map(|p| [p[0] - ideal[0], p[1] - ideal[1], p[2] - ideal[2]])
        .collect();

    let mut extreme = [0usize; 3];
    for (axis, slot) in extreme.iter_mut().enumerate() {
        let mut best = f64::INFINITY;
        for (i, t) in translated.iter().enumerate() {
            let asf = (0..3)
                .map(|d| t[d] / if d == axis { 1.0 } else { 1e-6 })
                .fold(f64::NEG_INFINITY, f64::max);
            if asf < best {
                best = asf;
                *slot = i;
            }
        }
    }

    let scale = plane_intercepts(&translated, extreme).unwrap_or_else(|| {
        let mut ranges = [0f64; 3];
        for t in &translated {
            for d in 0..3 {
                ranges[d] = ranges[d].max(t[d]);
            }
        }
        ranges
    });
    let scale = scale.map(|s| if s > EPS { s } else { 1.0 });
    translated
        .iter()
        .map(|t| [t[0] / scale[0], t[1] / scale[1], t[2] / scale[2]])
        .collect()
}

/// Intercepts of the plane through the three extreme points, or `None` when
/// the system is degenerate (shared extremes, singular matrix, or
/// non-positive intercepts).
fn plane_intercepts(translated: &[[f64; 3]], extreme: [usize; 3]) -> Option<[f64; 3]> {
    if extreme[0] == extreme[1] || extreme[0] == extreme[2] || extreme[1] == extreme[2] {
        return None;
    }
    let mut m = [[0f64; 4]; 3];
    for r in 0..3 {
        let p = translated[extreme[r]];
        m[r] = [p[0], p[1], p[2], 1.0];
    }
    // Gaussian elimination with partial pivoting on the 3x4 system.
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col].abs() < EPS {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                #[allow(clippy::needless_range_loop)]
                for k in col..4 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    let mut intercepts = [0f64; 3];
    for d in 0..3 {
        let coef = m[d][3] / m[d][d];
        if coef < EPS {
            return None;
        }
        intercepts[d] = 1.0 / coef;
    }
    Some(intercepts)
}

/// Nearest reference direction per point: (direction index, perpendicular
/// distance to the ray through the origin). Ties go to the lower index.
pub fn associate(normalized: &[[f64; 3]], refs: &ReferencePointSet) -> Vec<(usize, f64)> {
    assert_eq!(refs.n_objectives, 3, "niching works on three objectives");
    normalized
        .iter()
        .map(|t| {
            let mut best = (0usize, f64::INFINITY);
            for (ri, r) in refs.directions.iter().enumerate() {
                let rr: f64 = r.iter().map(|x| x * x).sum();
                let tr: f64 = (0..3).map(|d| t[d] * r[d]).sum();
                let proj = tr / rr;
                let dist: f64 = (0..3)
                    .map(|d| {
                        let diff = t[d] - proj * r[d];
                        diff * diff
                    })
                    .sum::<f64>()
                    .sqrt();
                if dist < best.1 {
                    best = (ri, dist);
                }
            }
            best
        })
        .collect()
}

/// Environmental selection result: surviving indices plus the (front rank,
/// niche count) pair used by tournament selection.
#[derive(Clone, Debug)]
pub struct Selected {
    pub indices: Vec<usize>,
    pub meta: Vec<(usize, usize)>,
}

/// Keep `n` of the candidates: whole fronts while they fit, then fill from
/// the boundary front by repeatedly drawing from the least-crowded
/// reference niche.
pub fn select(
    points: &[[f64; 3]],
    fronts: &[Vec<usize>],
    refs: &ReferencePointSet,
    n: usize,
    rng: &mut impl Rng,
) -> Selected {
    let total: usize = fronts.iter().map(|f| f.len()).sum();
    let n = n.min(total);

    let mut rank_of = vec![usize::MAX; points.len()];
    for (rank, front) in fronts.iter().enumerate() {
        for &i in front {
            rank_of[i] = rank;
        }
    }

    // Fronts that fully fit, plus the boundary front that overflows n.
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut boundary: Vec<usize> = Vec::new();
    let mut considered: Vec<usize> = Vec::new();
    for front in fronts {
        if chosen.len() == n {
            break;
        }
        considered.extend_from_slice(front);
        if chosen.len() + front.len() <= n {
            chosen.extend_from_slice(front);
        } else {
            boundary = front.clone();
            break;
        }
    }

    let considered_points: Vec<[f64; 3]> = considered.iter().map(|&i| points[i]).collect();
    let normalized = normalize(&considered_points);
    let assoc = associate(&normalized, refs);
    let assoc_of = |idx: usize, considered: &[usize]| {
        let pos = considered.iter().position(|&i| i == idx).unwrap();
        assoc[pos]
    };

    let mut counts = vec![0usize; refs.len()];
    for &i in &chosen {
        counts[assoc_of(i, &considered).0] += 1;
    }

    let mut pool = boundary;
    let mut active: Vec<bool> = pool.iter().fold(vec![false; refs.len()], |mut acc, &i| {
        acc[assoc_of(i, &considered).0] = true;
        acc
    });
    while chosen.len() < n {
        let min_count = (0..refs.len())
            .filter(|&r| active[r])
            .map(|r| counts[r])
            .min()
            .expect("pool members keep their niches active");
        let tied: Vec<usize> = (0..refs.len())
            .filter(|&r| active[r] && counts[r] == min_count)
            .collect();
        let niche = *tied.choose(rng).expect("tie set is non-empty");
        let members: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&i| assoc_of(i, &considered).0 == niche)
            .collect();
        if members.is_empty() {
            active[niche] = false;
            continue;
        }
        let pick = if counts[niche] == 0 {
            members
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    assoc_of(a, &considered)
                        .1
                        .total_cmp(&assoc_of(b, &considered).1)
                })
                .unwrap()
        } else {
            *members.choose(rng).unwrap()
        };
        pool.retain(|&i| i != pick);
        chosen.push(pick);
        counts[niche] += 1;
        if !pool.iter().any(|&i| assoc_of(i, &considered).0 == niche) {
            active[niche] = false;
        }
    }

    let meta = chosen
        .iter()
        .map(|&i| (rank_of[i], counts[assoc_of(i, &considered).0]))
        .collect();
    Selected {
        indices: chosen,
        meta,
    }
}
