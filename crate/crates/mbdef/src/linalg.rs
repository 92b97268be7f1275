//! Dense exact linear algebra over Q(i).
//!
//! Desk-scale only: everything here is plain Gaussian elimination with exact
//! scalars, enough for the homology of the small complexes in this crate.

use crate::scalar::Scalar;

/// Column-major dense matrix: `cols[j]` is the j-th column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols: vec![vec![Scalar::zero(); rows]; cols],
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<Scalar>>) -> Self {
        debug_assert!(cols.iter().all(|c| c.len() == rows));
        Matrix { rows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn rank(&self) -> usize {
        row_echelon(self.transposed_rows()).len()
    }

    fn transposed_rows(&self) -> Vec<Vec<Scalar>> {
        // Rows of the matrix, for row reduction.
        let mut rows = vec![vec![Scalar::zero(); self.ncols()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                rows[i][j] = v.clone();
            }
        }
        rows
    }

    /// Basis of the nullspace, as coefficient vectors over the columns.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let n = self.ncols();
        let mut rows = self.transposed_rows();
        let pivots = reduce_in_place(&mut rows);
        let pivot_cols: Vec<usize> = pivots.clone();
        let is_pivot = |j: usize| pivot_cols.contains(&j);
        let mut basis = Vec::new();
        for free in 0..n {
            if is_pivot(free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); n];
            v[free] = Scalar::one();
            // Back-substitute pivot coordinates.
            for (r, &pc) in pivot_cols.iter().enumerate() {
                // row r: x_pc + sum_{j>pc} a_j x_j = 0
                let coeff = rows[r][free].clone();
                if !coeff.is_zero() {
                    v[pc] = coeff.neg();
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Row-reduce in place to reduced row echelon form; returns the pivot column
/// of each nonzero row (in order). Zero rows are dropped.
fn reduce_in_place(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        // find a pivot in column c at or below row r
        let mut piv = None;
        for i in r..rows.len() {
            if !rows[i][c].is_zero() {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let sub = &rows[r][j] * &f;
                    rows[i][j] -= &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

fn row_echelon(mut rows: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    reduce_in_place(&mut rows);
    rows
}

/// Homology at the middle of `pre --d_in--> mid --d_out--> post`.
///
/// `d_out` maps the `dim`-dimensional middle space out, `d_in` maps into it;
/// `d_out * d_in = 0` is assumed. Returns the quotient dimension and
/// representative vectors (coordinates in the middle space): kernel vectors
/// extending a basis of the image.
pub fn homology(d_out: &Matrix, d_in: &Matrix) -> (usize, Vec<Vec<Scalar>>) {
    let kernel = d_out.kernel_basis();
    let rank_in = d_in.rank();
    let dim_h = kernel.len() - rank_in;
    // Representatives: grow a row space from the image columns, keep the
    // kernel vectors that enlarge it.
    let mut rows: Vec<Vec<Scalar>> = d_in
        .cols
        .iter()
        .filter(|c| c.iter().any(|v| !v.is_zero()))
        .cloned()
        .collect();
    reduce_in_place(&mut rows);
    let mut reps = Vec::new();
    for k in kernel {
        let mut trial = rows.clone();
        trial.push(k.clone());
        let before = rows.len();
        reduce_in_place(&mut trial);
        if trial.len() > before {
            rows = trial;
            reps.push(k);
        }
    }
    debug_assert_eq!(reps.len(), dim_h);
    (dim_h, reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_kernel() {
        // columns (1,2), (2,4), (0,1): rank 2, kernel spanned by (2,-1,0)
        let m = Matrix::from_columns(
            2,
            vec![vec![s(1), s(2)], vec![s(2), s(4)], vec![s(0), s(1)]],
        );
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // check M k = 0
        for row in 0..2 {
            let mut acc = Scalar::zero();
            for (j, col) in m.cols.iter().enumerate() {
                acc += &(&col[row] * &k[0][j]);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn homology_of_exact_pair() {
        // 0 -> K --id--> K -> 0 has no homology in the middle
        let d_out = Matrix::from_columns(1, vec![vec![s(1)]]);
        let d_in = Matrix::zero(1, 0);
        let (h, _) = homology(&d_out, &d_in);
        assert_eq!(h, 0);
        // and K --0--> K --0--> K has one dimension
        let (h2, reps) = homology(&Matrix::zero(1, 1), &Matrix::zero(1, 1));
        assert_eq!(h2, 1);
        assert_eq!(reps.len(), 1);
    }
}
