//! Fast non-dominated sorting into Pareto fronts under minimization.

use crate::eval::ObjectiveVector;

/// Partition indices into fronts: front 0 holds the non-dominated points,
/// front k the points dominated only by earlier fronts. Every index appears
/// exactly once.
pub fn nondominated_sort(points: &[ObjectiveVector]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dominators = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i].dominates(&points[j]) {
                dominated_by[i].push(j);
                dominators[j] += 1;
            } else if points[j].dominates(&points[i]) {
                dominated_by[j].push(i);
                dominators[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominators[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                dominators[j] -= 1;
                if dominators[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::take(&mut current));
        current = next;
    }
    fronts
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(stations: u32, worker: f64, electrical: f64) -> ObjectiveVector {
        ObjectiveVector {
            stations,
            worker_energy: worker,
            electrical_energy: electrical,
        }
    }

    #[test]
    fn sample_front_sorts_as_a_single_front() {
        let pts = crate::fixtures::sample_front();
        for a in &pts {
            for b in &pts {
                if a != b {
                    assert!(!a.dominates(b), "{a:?} dominates {b:?}");
                }
            }
        }
        let fronts = nondominated_sort(&pts);
        assert_eq!(fronts.len(), 1);
        assert_eq!(fronts[0].len(), 8);
    }

    #[test]
    fn chain_gives_singleton_fronts() {
        let pts = vec![v(1, 1.0, 1.0), v(2, 2.0, 2.0), v(3, 3.0, 3.0)];
        let fronts = nondominated_sort(&pts);
        assert_eq!(fronts, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn duplicates_share_a_front() {
        let pts = vec![v(2, 2.0, 2.0), v(1, 1.0, 1.0), v(1, 1.0, 1.0)];
        let fronts = nondominated_sort(&pts);
        assert_eq!(fronts, vec![vec![1, 2], vec![0]]);
    }

    #[test]
    fn empty_input_gives_no_fronts() {
        assert!(nondominated_sort(&[]).is_empty());
    }

    /// Peeling oracle straight from the definition: repeatedly remove the
    /// non-dominated subset.
    fn peel(points: &[ObjectiveVector]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..points.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining
                        .iter()
                        .any(|&j| j != i && points[j].dominates(&points[i]))
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn matches_peeling_oracle_on_random_grids() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let n = rng.random_range(1..30);
            let pts: Vec<ObjectiveVector> = (0..n)
                .map(|_| {
                    v(
                        rng.random_range(1..5),
                        rng.random_range(0..5) as f64,
                        rng.random_range(0..5) as f64,
                    )
                })
                .collect();
            assert_eq!(nondominated_sort(&pts), peel(&pts));
        }
    }
}
