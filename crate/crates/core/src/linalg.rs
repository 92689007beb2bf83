//! Exact linear algebra over big rationals: reduced row echelon form,
//! solving with kernel bases, rank, and span comparisons.

use num_traits::{One, Zero};

use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c));
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// pivot row in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = Rat::one() / self.at(row, col).clone();
            for j in col..self.cols {
                let v = self.at(row, j).clone() * &inv;
                *self.at_mut(row, j) = v;
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for j in col..self.cols {
                    let v = self.at(r, j).clone() - &factor * self.at(row, j);
                    *self.at_mut(r, j) = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(mut self) -> usize {
        self.rref().len()
    }
}

/// Outcome of solving `A x = b` exactly.
pub enum SolveOutcome {
    /// Particular solution (free variables set to zero) plus a kernel basis.
    Solved {
        particular: Vec<Rat>,
        kernel: Vec<Vec<Rat>>,
    },
    /// Indices of the input rows that reduce to `0 = nonzero`.
    Inconsistent { bad_rows: Vec<usize> },
}

/// Solves `A x = b` by incremental row reduction. A row that contradicts the
/// subsystem accepted before it is blamed by its input index; redundant rows
/// are fine. The accepted rows are kept fully reduced, so on success the
/// particular solution (free variables zero) and kernel fall out directly.
pub fn solve_with_kernel(a: &QMat, b: &[Rat]) -> SolveOutcome {
    assert_eq!(a.rows, b.len());
    let cols = a.cols;
    let mut reduced: Vec<(usize, Vec<Rat>, Rat)> = Vec::new(); // (pivot col, row, rhs)
    let mut bad_rows = Vec::new();
    for i in 0..a.rows {
        let mut row: Vec<Rat> = (0..cols).map(|j| a.at(i, j).clone()).collect();
        let mut rhs = b[i].clone();
        for (pc, rrow, rrhs) in &reduced {
            if !row[*pc].is_zero() {
                let f = row[*pc].clone();
                for j in 0..cols {
                    let v = row[j].clone() - f.clone() * &rrow[j];
                    row[j] = v;
                }
                rhs -= f * rrhs;
            }
        }
        match row.iter().position(|x| !x.is_zero()) {
            None => {
                if !rhs.is_zero() {
                    bad_rows.push(i);
                }
            }
            Some(pc) => {
                let inv = Rat::one() / row[pc].clone();
                for j in 0..cols {
                    let v = row[j].clone() * &inv;
                    row[j] = v;
                }
                rhs *= inv;
                for (_, rrow, rrhs) in reduced.iter_mut() {
                    if !rrow[pc].is_zero() {
                        let f = rrow[pc].clone();
                        for j in 0..cols {
                            let v = rrow[j].clone() - f.clone() * &row[j];
                            rrow[j] = v;
                        }
                        *rrhs -= f * &rhs;
                    }
                }
                reduced.push((pc, row, rhs));
            }
        }
    }
    if !bad_rows.is_empty() {
        return SolveOutcome::Inconsistent { bad_rows };
    }
    let mut particular = vec![Rat::zero(); cols];
    for (pc, _, rhs) in &reduced {
        particular[*pc] = rhs.clone();
    }
    let pivot_cols: Vec<usize> = reduced.iter().map(|(pc, _, _)| *pc).collect();
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (pc, rrow, _) in &reduced {
            v[*pc] = -rrow[free].clone();
        }
        kernel.push(v);
    }
    SolveOutcome::Solved { particular, kernel }
}

fn kernel_from_rref(m: &QMat, pivots: &[usize], cols: usize) -> Vec<Vec<Rat>> {
    let pivot_cols: Vec<usize> = pivots.iter().copied().filter(|&c| c < cols).collect();
    let mut kernel = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m.at(row, free).clone();
        }
        kernel.push(v);
    }
    kernel
}

/// Null space basis of `A`.
pub fn nullspace(a: &QMat) -> Vec<Vec<Rat>> {
    let mut m = a.clone();
    let pivots = m.rref();
    kernel_from_rref(&m, &pivots, a.cols)
}

/// Is `v` in the span of `basis`?
pub fn in_span(v: &[Rat], basis: &[Vec<Rat>]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let cols = basis.len();
    let rows = v.len();
    let mut a = QMat::zeros(rows, cols);
    for (j, b) in basis.iter().enumerate() {
        assert_eq!(b.len(), rows);
        for i in 0..rows {
            *a.at_mut(i, j) = b[i].clone();
        }
    }
    matches!(solve_with_kernel(&a, v), SolveOutcome::Solved { .. })
}

/// Do two lists of vectors span the same subspace?
pub fn span_eq(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    a.iter().all(|v| in_span(v, b)) && b.iter().all(|v| in_span(v, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn solve_unique() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let a = QMat::from_rows(vec![v(&[1, 1]), v(&[1, -1])]);
        match solve_with_kernel(&a, &v(&[3, 1])) {
            SolveOutcome::Solved { particular, kernel } => {
                assert_eq!(particular, v(&[2, 1]));
                assert!(kernel.is_empty());
            }
            _ => panic!("expected a solution"),
        }
    }

    #[test]
    fn solve_underdetermined_reports_kernel() {
        let a = QMat::from_rows(vec![v(&[1, 1, 0]), v(&[0, 0, 1])]);
        match solve_with_kernel(&a, &v(&[2, 5])) {
            SolveOutcome::Solved { particular, kernel } => {
                assert_eq!(particular, v(&[2, 0, 5]));
                assert_eq!(kernel, vec![v(&[-1, 1, 0])]);
            }
            _ => panic!("expected a solution"),
        }
    }

    #[test]
    fn inconsistent_rows_blamed() {
        let a = QMat::from_rows(vec![v(&[1, 0]), v(&[1, 0]), v(&[0, 1])]);
        match solve_with_kernel(&a, &v(&[1, 2, 3])) {
            SolveOutcome::Inconsistent { bad_rows } => {
                assert!(!bad_rows.is_empty());
                assert!(bad_rows.iter().all(|&r| r < 2));
            }
            _ => panic!("expected inconsistency"),
        }
    }

    #[test]
    fn spans_and_nullspaces() {
        let a = QMat::from_rows(vec![v(&[1, 2, 3]), v(&[2, 4, 6])]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for k in &ns {
            let dot: Rat = (0..3).map(|j| a.at(0, j).clone() * &k[j]).sum();
            assert!(dot.is_zero());
        }
        assert!(span_eq(
            &[v(&[1, 0]), v(&[0, 1])],
            &[v(&[1, 1]), v(&[1, -1])]
        ));
        assert!(!span_eq(&[v(&[1, 0])], &[v(&[0, 1])]));
        assert!(in_span(&[rat(1, 2), rat(1, 2)], &[v(&[1, 1])]));
    }
}
