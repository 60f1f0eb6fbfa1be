//! Lawson–Hanson active-set nonnegative least squares.

use crate::linalg::{lstsq_columns, norm2, Matrix};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct NnlsOptions<T> {
    /// Stop once no inactive coordinate has a descent gradient above this.
    pub kkt_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for NnlsOptions<T> {
    fn default() -> Self {
        NnlsOptions { kkt_tol: T::default_kkt_tol(), max_iter: 5_000 }
    }
}

#[derive(Debug, Clone)]
pub struct NnlsSolution<T> {
    pub x: Vec<T>,
    /// `‖A x − b‖₂`.
    pub residual_norm: T,
    /// Largest violation of the KKT conditions at `x`.
    pub kkt_residual: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Gradient of ½‖Ax − b‖² is `Aᵀ(Ax − b)`; this returns its negation.
fn neg_gradient<T: Real>(a: &Matrix<T>, b: &[T], x: &[T]) -> Vec<T> {
    let r: Vec<T> = b.iter().zip(a.mul_vec(x)).map(|(&bi, ax)| bi - ax).collect();
    a.tr_mul_vec(&r)
}

/// KKT violation: `|g_j|` on the support, `max(-g_j, 0)` off it.
pub fn kkt_residual<T: Real>(a: &Matrix<T>, b: &[T], x: &[T]) -> T {
    let w = neg_gradient(a, b, x);
    x.iter()
        .zip(&w)
        .map(|(&xj, &wj)| if xj > T::zero() { wj.abs() } else { wj.max(T::zero()) })
        .fold(T::zero(), T::max)
}

/// Solve `min ‖A x − b‖₂` subject to `x ≥ 0`.
pub fn nnls<T: Real>(a: &Matrix<T>, b: &[T], opts: &NnlsOptions<T>) -> NnlsSolution<T> {
    let n = a.cols();
    let mut x = vec![T::zero(); n];
    let mut passive = vec![false; n];
    let mut iterations = 0;
    let mut w = neg_gradient(a, b, &x);

    'outer: loop {
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .map(|j| (j, w[j]))
            .fold(None, |best: Option<(usize, T)>, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            });
        let Some((t, wt)) = candidate else { break };
        if wt <= opts.kkt_tol || iterations >= opts.max_iter {
            break;
        }
        passive[t] = true;

        loop {
            iterations += 1;
            let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let (zp, _) = lstsq_columns(a, &cols, b);
            let mut z = vec![T::zero(); n];
            for (&c, &v) in cols.iter().zip(&zp) {
                z[c] = v;
            }
            if cols.iter().all(|&j| z[j] > T::zero()) {
                x = z;
                break;
            }
            // Step toward z until the first passive coordinate hits zero.
            let alpha = cols
                .iter()
                .filter(|&&j| z[j] <= T::zero())
                .map(|&j| x[j] / (x[j] - z[j]))
                .fold(T::infinity(), T::min);
            for j in 0..n {
                x[j] = x[j] + alpha * (z[j] - x[j]);
            }
            let floor = T::epsilon() * T::lit(10.0);
            for &j in &cols {
                if x[j] <= floor {
                    x[j] = T::zero();
                    passive[j] = false;
                }
            }
            if iterations >= opts.max_iter {
                break 'outer;
            }
        }
        w = neg_gradient(a, b, &x);
    }

    let r: Vec<T> = a.mul_vec(&x).iter().zip(b).map(|(&ax, &bi)| ax - bi).collect();
    let kkt = kkt_residual(a, b, &x);
    NnlsSolution {
        residual_norm: norm2(&r),
        converged: kkt <= opts.kkt_tol,
        kkt_residual: kkt,
        iterations,
        x,
    }
}
