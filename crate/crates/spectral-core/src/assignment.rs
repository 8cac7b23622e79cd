/// Minimum-cost perfect assignment on a square cost matrix (Hungarian method,
/// potentials formulation, O(n³)).
///
/// `cost(i, j)` is the cost of assigning row `i` to column `j`. Returns `col_of_row`.
pub fn min_cost_assignment(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    // row_of_col[j] is the row matched to column j (1-based, 0 = free).
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0usize; n];
    for j in 1..=n {
        col_of_row[row_of_col[j] - 1] = j - 1;
    }
    col_of_row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(c: &[Vec<f64>]) -> f64 {
        fn rec(c: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
            if row == c.len() {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for j in 0..c.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(c[row][j] + rec(c, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        rec(c, 0, &mut vec![false; c.len()])
    }

    #[test]
    fn matches_brute_force() {
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 1..=6 {
            let c: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
            let a = min_cost_assignment(n, |i, j| c[i][j]);
            let total: f64 = a.iter().enumerate().map(|(i, &j)| c[i][j]).sum();
            assert!((total - brute_force(&c)).abs() < 1e-12);
            let mut seen = a.clone();
            seen.sort();
            assert_eq!(seen, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn greedy_trap() {
        // Greedy would take (0,0) and force (1,1) = 10.
        let c = [[1.0, 2.0], [2.0, 10.0]];
        assert_eq!(min_cost_assignment(2, |i, j| c[i][j]), vec![1, 0]);
    }
}
