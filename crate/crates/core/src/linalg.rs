//! Small dense linear algebra: a row-major matrix and a rank-revealing
//! Householder least-squares solve.

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).iter().zip(x).map(|(&a, &b)| a * b).sum()).collect()
    }

    /// `Aᵀ y`.
    pub fn tr_mul_vec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (r, &yr) in y.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o = *o + a * yr;
            }
        }
        out
    }

    /// Numerical rank from pivoted Householder QR.
    pub fn rank(&self) -> usize {
        let all: Vec<usize> = (0..self.cols).collect();
        let b = vec![T::zero(); self.rows];
        lstsq_columns(self, &all, &b).1
    }
}

pub fn norm2<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Least squares restricted to the columns `cols` of `a`.
///
/// Returns the solution (indexed like `cols`) and the numerical rank of the
/// sub-matrix. Columns past the rank get zero coefficients.
pub fn lstsq_columns<T: Real>(a: &Matrix<T>, cols: &[usize], b: &[T]) -> (Vec<T>, usize) {
    let m = a.rows();
    let k = cols.len();
    assert_eq!(b.len(), m);
    // Column-major working copy.
    let mut w: Vec<Vec<T>> = cols.iter().map(|&c| (0..m).map(|r| a.get(r, c)).collect()).collect();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..k).collect();
    let max_norm = w.iter().map(|c| norm2(c)).fold(T::zero(), T::max);
    let tol = T::epsilon() * T::from_usize(m.max(k)).unwrap() * max_norm;
    let mut rank = 0;
    for j in 0..k.min(m) {
        let (p, pn) = (j..k)
            .map(|c| (c, norm2(&w[c][j..])))
            .fold((j, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pn <= tol {
            break;
        }
        w.swap(j, p);
        perm.swap(j, p);
        let alpha = if w[j][j] > T::zero() { -pn } else { pn };
        let mut v: Vec<T> = w[j][j..].to_vec();
        v[0] = v[0] - alpha;
        let vv: T = v.iter().map(|&x| x * x).sum();
        if vv > T::zero() {
            let two = T::lit(2.0);
            for col in w.iter_mut().skip(j + 1) {
                let s = two * v.iter().zip(&col[j..]).map(|(&a, &b)| a * b).sum::<T>() / vv;
                for (c, &vi) in col[j..].iter_mut().zip(&v) {
                    *c = *c - s * vi;
                }
            }
            let s = two * v.iter().zip(&rhs[j..]).map(|(&a, &b)| a * b).sum::<T>() / vv;
            for (c, &vi) in rhs[j..].iter_mut().zip(&v) {
                *c = *c - s * vi;
            }
        }
        w[j][j] = alpha;
        for x in w[j][j + 1..].iter_mut() {
            *x = T::zero();
        }
        rank = j + 1;
    }
    let mut z = vec![T::zero(); k];
    for i in (0..rank).rev() {
        let mut s = rhs[i];
        for jj in i + 1..rank {
            s = s - w[jj][i] * z[jj];
        }
        z[i] = s / w[i][i];
    }
    let mut out = vec![T::zero(); k];
    for (pos, &orig) in perm.iter().enumerate() {
        out[orig] = z[pos];
    }
    (out, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solves_square_system() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let (x, r) = lstsq_columns(&a, &[0, 1], &[3.0, 5.0]);
        assert_eq!(r, 2);
        assert_abs_diff_eq!(x[0], 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(x[1], 1.4, epsilon = 1e-14);
    }

    #[test]
    fn overdetermined_matches_normal_equations() {
        // Fit y = c0 + c1 t through (0,1), (1,2), (2,2): normal equations give
        // c0 = 7/6, c1 = 1/2.
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]);
        let (x, _) = lstsq_columns(&a, &[0, 1], &[1.0, 2.0, 2.0]);
        assert_abs_diff_eq!(x[0], 7.0 / 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(x[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn rank_deficiency_detected() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![1.0, 0.0, 1.0]]);
        assert_eq!(a.rank(), 2);
        assert_eq!(Matrix::<f64>::zeros(3, 3).rank(), 0);
        let (x, r) = lstsq_columns(&a, &[0, 1, 2], &[1.0, 2.0, 0.0]);
        assert_eq!(r, 2);
        let fit = a.mul_vec(&x);
        for (f, b) in fit.iter().zip([1.0, 2.0, 0.0]) {
            assert_abs_diff_eq!(*f, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn works_in_f32() {
        let a = Matrix::from_rows(&[vec![2.0f32, 1.0], vec![1.0, 3.0]]);
        let (x, _) = lstsq_columns(&a, &[0, 1], &[3.0, 5.0]);
        assert_abs_diff_eq!(x[1], 1.4, epsilon = 1e-5);
    }
}
