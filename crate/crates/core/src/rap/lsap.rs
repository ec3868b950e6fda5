//! Rectangular linear sum assignment by shortest augmenting paths.
//!
//! Jonker-Volgenant style dual updates in the rectangular form described by Crouse
//! (2016): one Dijkstra-like search per row over reduced costs, with row and column
//! potentials kept feasible between augmentations.

/// Minimizes `sum cost[i][col4row[i]]` over injective row-to-column maps.
///
/// `cost` is row-major `rows x cols` with `rows <= cols`. Returns `col4row`.
pub fn minimize(cost: &[f64], rows: usize, cols: usize) -> Vec<usize> {
    assert!(rows <= cols, "lsap requires rows <= cols ({rows} > {cols})");
    assert_eq!(cost.len(), rows * cols);
    if rows == 0 {
        return Vec::new();
    }

    let mut u = vec![0.0f64; rows];
    let mut v = vec![0.0f64; cols];
    let mut shortest = vec![f64::INFINITY; cols];
    let mut path = vec![usize::MAX; cols];
    let mut col4row = vec![usize::MAX; rows];
    let mut row4col = vec![usize::MAX; cols];
    let mut visited_rows = vec![false; rows];
    let mut visited_cols = vec![false; cols];
    let mut remaining = vec![0usize; cols];

    for cur_row in 0..rows {
        // Dijkstra over columns from `cur_row`.
        visited_rows.fill(false);
        visited_cols.fill(false);
        shortest.fill(f64::INFINITY);
        for (it, r) in remaining.iter_mut().enumerate() {
            *r = cols - it - 1;
        }
        let mut num_remaining = cols;
        let mut min_val = 0.0;
        let mut i = cur_row;
        let sink = loop {
            visited_rows[i] = true;
            let row = &cost[i * cols..(i + 1) * cols];
            let mut lowest = f64::INFINITY;
            let mut index = usize::MAX;
            for (it, &j) in remaining[..num_remaining].iter().enumerate() {
                let r = min_val + row[j] - u[i] - v[j];
                if r < shortest[j] {
                    path[j] = i;
                    shortest[j] = r;
                }
                if shortest[j] < lowest
                    || (shortest[j] == lowest && row4col[j] == usize::MAX)
                {
                    lowest = shortest[j];
                    index = it;
                }
            }
            debug_assert!(lowest.is_finite(), "finite costs always admit an augmenting path");
            min_val = lowest;
            let j = remaining[index];
            visited_cols[j] = true;
            num_remaining -= 1;
            remaining[index] = remaining[num_remaining];
            if row4col[j] == usize::MAX {
                break j;
            }
            i = row4col[j];
        };

        u[cur_row] += min_val;
        for r in 0..rows {
            if visited_rows[r] && r != cur_row {
                u[r] += min_val - shortest[col4row[r]];
            }
        }
        for c in 0..cols {
            if visited_cols[c] {
                v[c] -= min_val - shortest[c];
            }
        }

        let mut j = sink;
        loop {
            let r = path[j];
            row4col[j] = r;
            std::mem::swap(&mut col4row[r], &mut j);
            if r == cur_row {
                break;
            }
        }
    }
    col4row
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(cost: &[f64], cols: usize, a: &[usize]) -> f64 {
        a.iter().enumerate().map(|(i, &j)| cost[i * cols + j]).sum()
    }

    #[test]
    fn square_three_by_three() {
        let cost = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let a = minimize(&cost, 3, 3);
        assert_eq!(total(&cost, 3, &a), 5.0);
    }

    #[test]
    fn rectangular_picks_cheapest_columns() {
        let cost = [5.0, 1.0, 9.0, 4.0, 2.0, 8.0, 0.0, 7.0];
        let a = minimize(&cost, 2, 4);
        assert_eq!(total(&cost, 4, &a), 1.0);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn empty() {
        assert!(minimize(&[], 0, 3).is_empty());
    }
}
