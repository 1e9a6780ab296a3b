use std::fmt;

use super::field::{Field, OrderedField};
use super::ratfunc::RatFunc;
use super::ring::Ring;
use super::SymError;

/// Dense matrix of rational functions, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<RatFunc<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn from_rows(rows: Vec<Vec<RatFunc<F>>>) -> Result<Matrix<F>, SymError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(SymError::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix<F> {
        Matrix { rows, cols, data: vec![RatFunc::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix<F> {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one(ring));
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc<F> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc<F>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[RatFunc<F>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<RatFunc<F>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[RatFunc<F>] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Result<Matrix<F>, SymError> {
        if self.cols != rhs.rows {
            return Err(SymError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let ring = self.data[0].ring().clone();
        let mut out = Matrix::zeros(&ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = RatFunc::zero(&ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[RatFunc<F>]) -> Result<Vec<RatFunc<F>>, SymError> {
        if v.len() != self.cols {
            return Err(SymError::Dimension("matrix-vector".into()));
        }
        let ring = v[0].ring().clone();
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = RatFunc::zero(&ring);
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = &acc + &(a * b);
                }
                acc
            })
            .collect())
    }

    pub fn sub(&self, rhs: &Matrix<F>) -> Result<Matrix<F>, SymError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(SymError::Dimension("subtraction".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &RatFunc<F>) -> Matrix<F> {
        self.map(|e| e * c)
    }

    pub fn map<G: FnMut(&RatFunc<F>) -> RatFunc<F>>(&self, g: G) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(g).collect() }
    }

    pub fn try_map<G, E>(&self, g: G) -> Result<Matrix<F>, E>
    where
        G: FnMut(&RatFunc<F>) -> Result<RatFunc<F>, E>,
    {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(g).collect::<Result<_, _>>()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    /// Row echelon reduction to reduced form. Returns the reduced matrix
    /// and the pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // prefer the sparsest nonzero pivot to limit expression swell
            let pick = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero())
                .min_by_key(|&i| m.get(i, c).num().num_terms() + m.get(i, c).den().num_terms());
            let Some(p) = pick else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Result<RatFunc<F>, SymError> {
        if !self.is_square() {
            return Err(SymError::Dimension("determinant of non-square matrix".into()));
        }
        let ring = self.data[0].ring().clone();
        match self.rows {
            1 => return Ok(self.get(0, 0).clone()),
            2 => {
                return Ok(&(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)));
            }
            _ => {}
        }
        let mut m = self.clone();
        let mut det = RatFunc::one(&ring);
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(RatFunc::zero(&ring));
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix<F>, SymError> {
        if !self.is_square() {
            return Err(SymError::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let ring = self.data[0].ring().clone();
        if n == 2 {
            let d = self.det()?;
            if d.is_zero() {
                return Err(SymError::SingularMatrix);
            }
            let di = d.inv()?;
            return Matrix::from_rows(vec![
                vec![self.get(1, 1) * &di, -(self.get(0, 1) * &di)],
                vec![-(self.get(1, 0) * &di), self.get(0, 0) * &di],
            ]);
        }
        let mut aug = Matrix::zeros(&ring, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, RatFunc::one(&ring));
        }
        let (red, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return Err(SymError::SingularMatrix);
        }
        let mut out = Matrix::zeros(&ring, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, red.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<RatFunc<F>>> {
        let ring = self.data.first().map(|e| e.ring().clone());
        let Some(ring) = ring else { return Vec::new() };
        let (red, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![RatFunc::zero(&ring); self.cols];
                v[f] = RatFunc::one(&ring);
                for (r, &p) in piv.iter().enumerate() {
                    v[p] = -red.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `M x = b` if the system is consistent.
    pub fn solve(&self, b: &[RatFunc<F>]) -> Option<Vec<RatFunc<F>>> {
        assert_eq!(b.len(), self.rows);
        let ring = b.first()?.ring().clone();
        let mut aug = Matrix::zeros(&ring, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (red, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![RatFunc::zero(&ring); self.cols];
        for (r, &p) in piv.iter().enumerate() {
            x[p] = red.get(r, self.cols).clone();
        }
        Some(x)
    }
}

impl<F: OrderedField> Matrix<F> {
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|e| e.to_string()).collect()).collect()
    }
}

impl<F: OrderedField> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_string_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse::parse_expression;
    use num_rational::BigRational;

    fn m(ring: &Ring, rows: &[&[&str]]) -> Matrix<BigRational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_expression(s, ring).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_roundtrip_3x3() {
        let ring = Ring::new(&["z", "t"]).unwrap();
        let a = m(&ring, &[&["1", "z", "0"], &["t", "1", "z"], &["0", "1", "2"]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&ring, 3));
    }

    #[test]
    fn rank_and_nullspace() {
        let ring = Ring::new(&["z"]).unwrap();
        let a = m(&ring, &[&["1", "z"], &["z", "z^2"]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        let image = a.mul_vec(&ns[0]).unwrap();
        assert!(image.iter().all(|e| e.is_zero()));
        assert!(a.inverse().is_err());
    }

    #[test]
    fn det_by_elimination_matches_cofactor() {
        let ring = Ring::new(&["z"]).unwrap();
        let a = m(&ring, &[&["z", "1", "2"], &["0", "z", "1"], &["1", "0", "z"]]);
        let expected: RatFunc<BigRational> = parse_expression("z^3 - 2*z + 1", &ring).unwrap();
        assert_eq!(a.det().unwrap(), expected);
    }
}
