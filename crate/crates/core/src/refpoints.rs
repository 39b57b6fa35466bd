//! Reference directions on the unit simplex, built as the lattice of all
//! non-negative rational vectors with a fixed denominator that sum to 1.

/// Lattice of reference directions for `n_objectives` objectives with
/// `divisions` divisions per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferencePointSet {
    pub directions: Vec<Vec<f64>>,
    pub n_objectives: usize,
    pub divisions: usize,
}

impl ReferencePointSet {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

pub fn reference_points(n_objectives: usize, divisions: usize) -> ReferencePointSet {
    assert!(n_objectives >= 2, "need at least two objectives");
    assert!(divisions >= 1, "need at least one division");
    let mut directions = Vec::new();
    let mut current = Vec::with_capacity(n_objectives);
    fill(
        divisions,
        n_objectives,
        divisions,
        &mut current,
        &mut directions,
    );
    ReferencePointSet {
        directions,
        n_objectives,
        divisions,
    }
}

fn fill(
    left: usize,
    dims_left: usize,
    divisions: usize,
    current: &mut Vec<f64>,
    out: &mut Vec<Vec<f64>>,
) {
    if dims_left == 1 {
        let mut dir = current.clone();
        dir.push(left as f64 / divisions as f64);
        out.push(dir);
        return;
    }
    for k in 0..=left {
        current.push(k as f64 / divisions as f64);
        fill(left - k, dims_left - 1, divisions, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        let mut r = 1usize;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn three_objectives_five_divisions_gives_21() {
        let set = reference_points(3, 5);
        assert_eq!(set.len(), 21);
    }

    #[test]
    fn two_objectives_one_division() {
        let set = reference_points(2, 1);
        assert_eq!(set.directions, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn three_objectives_one_division_gives_unit_vectors() {
        let set = reference_points(3, 1);
        let expected = vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0],
        ];
        assert_eq!(set.directions, expected);
    }

    #[test]
    fn lattice_counts_and_sums() {
        for (n, m) in [(2, 4), (3, 3), (3, 5), (4, 2)] {
            let set = reference_points(n, m);
            assert_eq!(set.len(), binomial(n + m - 1, n - 1), "n={n} m={m}");
            for dir in &set.directions {
                assert_eq!(dir.len(), n);
                let sum: f64 = dir.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12);
                assert!(dir.iter().all(|&x| (0.0..=1.0).contains(&x)));
            }
            let mut dedup = set.directions.clone();
            dedup.sort_by(|a, b| a.partial_cmp(b).unwrap());
            dedup.dedup();
            assert_eq!(dedup.len(), set.len());
        }
    }
}
