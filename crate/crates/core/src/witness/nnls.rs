use nalgebra::{DMatrix, DVector};

/// Lawson–Hanson nonnegative least squares: `argmin ‖Ax − b‖₂` over `x ≥ 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 10.0 * f64::EPSILON * a.norm() * (a.nrows().max(n) as f64);
    let max_iter = 3 * n.max(1);

    let mut w = a.tr_mul(&(b - a * &x));
    for _ in 0..max_iter {
        let candidate = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        passive[j] = true;

        loop {
            let s = solve_passive(a, b, &passive);
            let blocking: Vec<usize> = (0..n).filter(|&i| passive[i] && s[i] <= tol).collect();
            if blocking.is_empty() {
                x = s;
                break;
            }
            let alpha = blocking
                .iter()
                .map(|&i| x[i] / (x[i] - s[i]))
                .fold(f64::INFINITY, f64::min);
            x += (&s - &x).scale(alpha);
            for i in 0..n {
                if passive[i] && x[i] <= tol {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
        w = a.tr_mul(&(b - a * &x));
    }
    x
}

/// Unconstrained least squares restricted to the passive columns.
fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..passive.len()).filter(|&i| passive[i]).collect();
    let sub = DMatrix::from_fn(a.nrows(), cols.len(), |r, c| a[(r, cols[c])]);
    let sol = sub.svd(true, true).solve(b, 1e-13).expect("U and V were requested");
    let mut full = DVector::zeros(passive.len());
    for (k, &i) in cols.iter().enumerate() {
        full[i] = sol[k];
    }
    full
}
