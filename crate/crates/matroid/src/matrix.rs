use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ground::{bits, Mask};

/// A matrix over a [`FieldSpec`], stored row-major as field indices, with
/// one column per labeled element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u8>,
    pub labels: Vec<String>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), cols);
        Matrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
            labels,
        }
    }

    pub fn from_rows(rows: Vec<Vec<u8>>, labels: Vec<String>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        if labels.len() != c {
            return Err(Error::Invalid("label count differs from column count".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
            labels,
        })
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_slices(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.entries[r * self.cols..(r + 1) * self.cols].to_vec()).collect()
    }

    /// Rank of the column set `mask`, by Gaussian elimination.
    pub fn rank_of_columns(&self, f: &FieldSpec, mask: Mask) -> u32 {
        let cols: Vec<usize> = bits(mask).filter(|&c| c < self.cols).collect();
        if cols.is_empty() {
            return 0;
        }
        // work matrix: rows x chosen columns
        let mut w: Vec<Vec<u8>> = (0..self.rows)
            .map(|r| cols.iter().map(|&c| self.get(r, c)).collect())
            .collect();
        let mut rank = 0usize;
        for c in 0..cols.len() {
            let mut piv = None;
            for r in rank..self.rows {
                if w[r][c] != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            w.swap(rank, p);
            let inv = f.inv(w[rank][c]);
            for x in w[rank].iter_mut() {
                *x = f.mul(*x, inv);
            }
            for r in 0..self.rows {
                if r != rank && w[r][c] != 0 {
                    let factor = w[r][c];
                    for cc in 0..cols.len() {
                        let sub = f.mul(factor, w[rank][cc]);
                        w[r][cc] = f.sub(w[r][cc], sub);
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank as u32
    }

    /// Determinant of a square matrix, by elimination.
    pub fn det(&self, f: &FieldSpec) -> u8 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut w: Vec<Vec<u8>> = (0..n)
            .map(|r| self.entries[r * n..(r + 1) * n].to_vec())
            .collect();
        let mut det = 1u8;
        for c in 0..n {
            let mut piv = None;
            for r in c..n {
                if w[r][c] != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let Some(p) = piv else { return 0 };
            if p != c {
                w.swap(c, p);
                det = f.neg(det);
            }
            det = f.mul(det, w[c][c]);
            let inv = f.inv(w[c][c]);
            for r in (c + 1)..n {
                if w[r][c] != 0 {
                    let factor = f.mul(w[r][c], inv);
                    for cc in c..n {
                        let sub = f.mul(factor, w[c][cc]);
                        w[r][cc] = f.sub(w[r][cc], sub);
                    }
                }
            }
        }
        det
    }

    /// Row-reduce so that the columns of `basis` (in ascending index order)
    /// become the identity. `basis` must be independent and span the rows.
    pub fn reduce_to_standard_form(&self, f: &FieldSpec, basis: Mask) -> Result<Matrix> {
        let bcols: Vec<usize> = bits(basis).filter(|&c| c < self.cols).collect();
        let mut w = self.clone();
        let mut row = 0usize;
        for &bc in &bcols {
            let mut piv = None;
            for r in row..w.rows {
                if w.get(r, bc) != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let p = piv.ok_or_else(|| Error::Domain("basis columns are dependent".into()))?;
            if p != row {
                for c in 0..w.cols {
                    let a = w.get(row, c);
                    let b = w.get(p, c);
                    w.set(row, c, b);
                    w.set(p, c, a);
                }
            }
            let inv = f.inv(w.get(row, bc));
            for c in 0..w.cols {
                w.set(row, c, f.mul(w.get(row, c), inv));
            }
            for r in 0..w.rows {
                if r != row && w.get(r, bc) != 0 {
                    let factor = w.get(r, bc);
                    for c in 0..w.cols {
                        let sub = f.mul(factor, w.get(row, c));
                        w.set(r, c, f.sub(w.get(r, c), sub));
                    }
                }
            }
            row += 1;
        }
        if row != w.rows {
            return Err(Error::Domain("basis does not span the matrix rows".into()));
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_det_over_gf5() {
        let f = FieldSpec::new(5).unwrap();
        let m = Matrix::from_rows(
            vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]],
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
        )
        .unwrap();
        assert_eq!(m.rank_of_columns(&f, 0b1111), 2);
        assert_eq!(m.rank_of_columns(&f, 0b0011), 2);
        assert_eq!(m.rank_of_columns(&f, 0b0100), 1);
        let sq = Matrix::from_rows(vec![vec![1, 2], vec![3, 4]], vec!["x".into(), "y".into()]).unwrap();
        // det = 4 - 6 = -2 = 3 mod 5
        assert_eq!(sq.det(&f), 3);
    }

    #[test]
    fn standard_form_makes_identity() {
        let f = FieldSpec::new(7).unwrap();
        let m = Matrix::from_rows(
            vec![vec![2, 1, 3], vec![4, 0, 5]],
            vec!["a".into(), "b".into(), "c".into()],
        )
        .unwrap();
        let s = m.reduce_to_standard_form(&f, 0b011).unwrap();
        assert_eq!(s.get(0, 0), 1);
        assert_eq!(s.get(1, 0), 0);
        assert_eq!(s.get(0, 1), 0);
        assert_eq!(s.get(1, 1), 1);
        // ranks preserved
        for mask in 0..8u32 {
            assert_eq!(m.rank_of_columns(&f, mask), s.rank_of_columns(&f, mask));
        }
    }
}
