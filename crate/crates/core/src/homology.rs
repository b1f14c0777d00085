//! Integer first homology of a quotient complex via Smith normal form.

use crate::complex::{sort_parity, CellId, SimplicialPreComplex};

/// Integer boundary matrix `∂_k : C_k → C_{k-1}` (rows: `(k-1)`-cells).
#[allow(clippy::needless_range_loop)]
pub fn boundary_matrix(c: &SimplicialPreComplex, k: usize) -> Vec<Vec<i64>> {
    let group = c.group();
    let mut m = vec![vec![0i64; c.num_cells(k)]; c.num_cells(k - 1)];
    for j in 0..c.num_cells(k) {
        let key = c.cell_lifts(CellId::new(k, j));
        for drop in 0..key.len() {
            let face: Vec<_> = key
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, &l)| l)
                .collect();
            let canon = group.canonical(&face);
            let parity = sort_parity(&group.shift_all(&face, canon.shift));
            let sign = if drop % 2 == 0 { 1 } else { -1 };
            let row = c.find_cell(&face).expect("faces of cells are cells").index;
            m[row][j] += sign * parity as i64;
        }
    }
    m
}

/// Nonzero invariant factors of an integer matrix (absolute values).
#[allow(clippy::needless_range_loop)]
pub fn invariant_factors(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero pivot in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let piv = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = m[i][t] / piv;
                if f != 0 {
                    for j in t..cols {
                        m[i][j] -= f * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let f = m[t][j] / piv;
                if f != 0 {
                    for i in t..rows {
                        m[i][j] -= f * m[i][t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // the pivot must divide the remaining block
                let mut bad = None;
                for i in t + 1..rows {
                    for j in t + 1..cols {
                        if m[i][j] % piv != 0 {
                            bad = Some(i);
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/column t onto the diagonal
            let mut best = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// First homology as `(free rank, torsion coefficients > 1)`.
pub fn first_homology(c: &SimplicialPreComplex) -> (usize, Vec<i64>) {
    let d1 = invariant_factors(boundary_matrix(c, 1));
    let d2 = invariant_factors(boundary_matrix(c, 2));
    let kernel = c.num_edges() - d1.len();
    let free = kernel - d2.len();
    (free, d2.into_iter().filter(|&x| x > 1).collect())
}

/// Order of H₁ when finite.
pub fn h1_order(c: &SimplicialPreComplex) -> Option<i64> {
    let (free, torsion) = first_homology(c);
    if free > 0 {
        None
    } else {
        Some(torsion.iter().product())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_of_small_matrices() {
        assert_eq!(invariant_factors(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(
            invariant_factors(vec![vec![0, 0], vec![0, 0]]),
            Vec::<i64>::new()
        );
        assert_eq!(invariant_factors(vec![vec![4, 6]]), vec![2]);
    }
}
