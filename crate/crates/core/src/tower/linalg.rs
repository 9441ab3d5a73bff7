//! Dense linear algebra over a tower level.

use super::{Elem, FieldTower};

impl FieldTower {
    /// Row echelon form in place; returns pivot columns.
    fn echelon(&self, m: &mut [Vec<Elem>], ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            if row == m.len() {
                break;
            }
            let Some(pr) = (row..m.len()).find(|&r| !self.is_zero(&m[r][col])) else {
                continue;
            };
            m.swap(row, pr);
            let inv = self.inv(&m[row][col]).expect("pivot of a field element");
            let pivot_row: Vec<Elem> = m[row].iter().map(|x| self.mul(x, &inv)).collect();
            m[row] = pivot_row;
            for r in 0..m.len() {
                if r == row || self.is_zero(&m[r][col]) {
                    continue;
                }
                let f = m[r][col].clone();
                for c in col..m[r].len() {
                    if self.is_zero(&m[row][c]) {
                        continue;
                    }
                    let t = self.mul(&f, &m[row][c]);
                    m[r][c] = self.sub(&m[r][c], &t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// One solution of `A x = b` over level `lv` (free variables set to zero).
    pub fn solve_linear(&self, a: &[Vec<Elem>], b: &[Elem], lv: usize) -> Option<Vec<Elem>> {
        let ncols = a.first().map_or(0, |r| r.len());
        let mut m: Vec<Vec<Elem>> = a
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut r = r.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        let pivots = self.echelon(&mut m, ncols);
        for r in m.iter().skip(pivots.len()) {
            if !self.is_zero(&r[ncols]) {
                return None;
            }
        }
        let mut x = vec![self.zero(lv); ncols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = m[r][ncols].clone();
        }
        Some(x)
    }

    pub fn rank(&self, a: &[Vec<Elem>]) -> usize {
        let ncols = a.first().map_or(0, |r| r.len());
        let mut m = a.to_vec();
        self.echelon(&mut m, ncols).len()
    }

    /// Determinant of a square matrix over level `lv`.
    pub fn det(&self, a: &[Vec<Elem>], lv: usize) -> Elem {
        let n = a.len();
        let mut m = a.to_vec();
        let mut det = self.one(lv);
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !self.is_zero(&m[r][col])) else {
                return self.zero(lv);
            };
            if pr != col {
                m.swap(pr, col);
                det = self.neg(&det);
            }
            det = self.mul(&det, &m[col][col]);
            let inv = self.inv(&m[col][col]).expect("pivot of a field element");
            let pivot = m[col].clone();
            for mr in m.iter_mut().skip(col + 1) {
                if self.is_zero(&mr[col]) {
                    continue;
                }
                let f = self.mul(&mr[col], &inv);
                for (x, y) in mr.iter_mut().zip(&pivot).skip(col) {
                    let t = self.mul(&f, y);
                    *x = self.sub(x, &t);
                }
            }
        }
        det
    }

    /// Matrix of multiplication by `x` on level `from` as a vector space over
    /// level `to`; column `j` holds the coordinates of `x · basis_j`.
    pub fn mult_matrix(&self, x: &Elem, from: usize, to: usize) -> Vec<Vec<Elem>> {
        let basis = self.basis(from, to);
        let cols: Vec<Vec<Elem>> = basis
            .iter()
            .map(|b| self.coords(&self.mul(x, b), to))
            .collect();
        let n = basis.len();
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect()
    }
}
