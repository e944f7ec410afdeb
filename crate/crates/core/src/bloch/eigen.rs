use super::TridiagonalHamiltonian;
use crate::error::{Error, Result};

/// Iteration cap per eigenvalue for the implicit QL sweeps.
const MAX_SWEEPS: usize = 50;

/// Eigenvalues in ascending order with their orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// `vectors[j]` is the eigenvector of `values[j]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Diagonalize the fixed-`κ` Hamiltonian.
pub fn eigensystem(h: &TridiagonalHamiltonian) -> Result<Eigensystem> {
    let n = h.dim();
    let off = vec![h.off_diagonal(); n.saturating_sub(1)];
    tridiagonal_eigensystem(h.diagonal(), &off)
}

/// Eigen-decomposition of the real symmetric tridiagonal matrix with main
/// diagonal `diag` and sub/super-diagonal `off` (`off[i]` couples `i` and
/// `i + 1`), by implicit-shift QL iteration.
pub fn tridiagonal_eigensystem(diag: &[f64], off: &[f64]) -> Result<Eigensystem> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    if off.len() + 1 != n {
        return Err(Error::invalid(format!(
            "off-diagonal has {} entries, expected {}",
            off.len(),
            n - 1
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    // z[k][j]: component k of eigenvector j
    let mut z = vec![vec![0.0; n]; n];
    for (k, row) in z.iter_mut().enumerate() {
        row[k] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NonConvergence(format!(
                    "tridiagonal QL did not converge for eigenvalue {l} after {MAX_SWEEPS} sweeps"
                )));
            }
            // Wilkinson-style shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&j| d[j]).collect();
    let vectors = order
        .iter()
        .map(|&j| z.iter().map(|row| row[j]).collect())
        .collect();
    Ok(Eigensystem { values, vectors })
}
