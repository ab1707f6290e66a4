//! Dense Hermitian eigensolver (cyclic Jacobi).
//!
//! The dressed-state sweeps and density-operator positivity checks need
//! eigenvalues of Hermitian matrices of dimension at most a few hundred;
//! a quadratic-convergence Jacobi iteration is plenty and avoids linking a
//! LAPACK backend.

use ndarray::Array2;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &Array2<Complex64>) -> Vec<f64> {
    let (vals, _) = jacobi(a, false);
    vals
}

/// Eigenvalues (ascending) and matching eigenvectors (columns) of a
/// Hermitian matrix.
pub fn hermitian_eigen(a: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>) {
    let (vals, vecs) = jacobi(a, true);
    (vals, vecs.expect("vectors requested"))
}

fn off_diagonal_norm(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn jacobi(input: &Array2<Complex64>, want_vectors: bool) -> (Vec<f64>, Option<Array2<Complex64>>) {
    let n = input.nrows();
    assert_eq!(n, input.ncols(), "matrix must be square");
    let mut a = input.clone();
    let mut v = want_vectors.then(|| Array2::<Complex64>::eye(n));

    let scale: f64 = input.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= tol / (n as f64) {
                    continue;
                }
                let phase = apq / g;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- J† A J with J mixing columns p, q:
                //   col p' = c col_p − s conj(phase) col_q
                //   col q' = s phase col_p + c col_q
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = c * aip - s * phase.conj() * aiq;
                    a[(i, q)] = s * phase * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = c * apj - s * phase * aqj;
                    a[(q, j)] = s * phase.conj() * apj + c * aqj;
                }
                // keep the block exactly Hermitian against rounding drift
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = c * vip - s * phase.conj() * viq;
                        v[(i, q)] = s * phase * vip + c * viq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vecs = v.map(|v| {
        let mut sorted = Array2::<Complex64>::zeros((n, n));
        for (new_col, &old_col) in order.iter().enumerate() {
            for i in 0..n {
                sorted[(i, new_col)] = v[(i, old_col)];
            }
        }
        sorted
    });
    (vals, vecs)
}
