//! Top eigenpair of a ball-compressed averaging operator.

use nalgebra::{DMatrix, SymmetricEigen};

use super::ball::OUTSIDE;

/// The compression of `Σ_s w_s ρ(s)` to the first `dim` ball elements, where
/// `ρ(s)δ_x = δ_{xs}`. For symmetric weights this is unitarily equivalent to
/// the left regular operator via `δ_x ↦ δ_{x⁻¹}`.
pub struct CompressedOp<'a> {
    actions: &'a [Vec<u32>],
    weights: &'a [f64],
    dim: usize,
}

impl<'a> CompressedOp<'a> {
    pub fn new(actions: &'a [Vec<u32>], weights: &'a [f64], dim: usize) -> Self {
        assert_eq!(actions.len(), weights.len());
        CompressedOp { actions, weights, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (act, &w) in self.actions.iter().zip(self.weights) {
            for (x, &y) in act[..self.dim].iter().enumerate() {
                if y != OUTSIDE && (y as usize) < self.dim {
                    out[y as usize] += w * v[x];
                }
            }
        }
        out
    }

    /// `⟨ρ(s)v, v⟩` for the `s`-th generator, counting only overlap inside the ball.
    pub fn generator_overlap(&self, s: usize, v: &[f64]) -> f64 {
        self.actions[s][..self.dim]
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != OUTSIDE && (y as usize) < self.dim)
            .map(|(x, &y)| v[y as usize] * v[x])
            .sum()
    }

    /// Dense copy, for small cross-checks.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (act, &w) in self.actions.iter().zip(self.weights) {
            for (x, &y) in act[..self.dim].iter().enumerate() {
                if y != OUTSIDE && (y as usize) < self.dim {
                    m[(y as usize, x)] += w;
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct Eigenpair {
    /// Rayleigh quotient of `vector`; a lower bound for the top eigenvalue.
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖Mv − λv‖`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (u, v) in y.iter_mut().zip(x) {
        *u += a * v;
    }
}

fn top_of_tridiagonal(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut best = 0;
    for i in 1..k {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    (eig.eigenvalues[best], eig.eigenvectors.column(best).iter().copied().collect())
}

/// Largest Krylov dimension before a restart, bounded by memory for big balls.
fn krylov_limit(dim: usize) -> usize {
    dim.min(300).min((40_000_000 / dim.max(1)).max(20))
}

const MAX_RESTARTS: usize = 40;

/// Restarted Lanczos with full reorthogonalization, started from the uniform
/// vector. Stops when the Ritz residual drops below `rel_tol · θ` or the Krylov
/// space becomes invariant.
pub fn top_eigenpair(op: &CompressedOp, rel_tol: f64) -> Eigenpair {
    let dim = op.dim();
    let mut start = vec![1.0 / (dim as f64).sqrt(); dim];
    let limit = krylov_limit(dim);
    let mut iterations = 0;
    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let y = loop {
            let j = basis.len() - 1;
            let mut w = op.apply(&basis[j]);
            iterations += 1;
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    axpy(&mut w, -c, q);
                }
            }
            let b = norm(&w);
            let at_limit = basis.len() >= limit;
            let check = b < 1e-12 || at_limit || basis.len().is_multiple_of(8) || basis.len() < 8;
            if check {
                let (theta, y) = top_of_tridiagonal(&alpha, &beta);
                let est = b * y[y.len() - 1].abs();
                if b < 1e-12 || est <= rel_tol * theta.abs().max(1e-300) || at_limit {
                    break y;
                }
            }
            beta.push(b);
            w.iter_mut().for_each(|x| *x /= b);
            basis.push(w);
        };
        let mut v = vec![0.0; dim];
        for (q, c) in basis.iter().zip(&y) {
            axpy(&mut v, *c, q);
        }
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        let mv = op.apply(&v);
        let value = dot(&mv, &v);
        let residual = mv.iter().zip(&v).map(|(m, x)| (m - value * x).powi(2)).sum::<f64>().sqrt();
        if residual <= rel_tol * value.abs().max(1e-300) {
            return Eigenpair { value, vector: v, residual, iterations, converged: true };
        }
        start = v;
        if iterations > MAX_RESTARTS * limit {
            break;
        }
    }
    let mv = op.apply(&start);
    let value = dot(&mv, &start);
    let residual = mv.iter().zip(&start).map(|(m, x)| (m - value * x).powi(2)).sum::<f64>().sqrt();
    Eigenpair { value, vector: start, residual, iterations, converged: residual <= rel_tol * value.abs() }
}

/// Perron normalization of the top eigenvector: non-negative entries, unit
/// norm, value recomputed as the Rayleigh quotient.
pub fn perron_normalize(op: &CompressedOp, pair: &Eigenpair) -> Eigenpair {
    let sign = if pair.vector.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let mut v: Vec<f64> = pair.vector.iter().map(|x| (sign * x).max(0.0)).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mv = op.apply(&v);
    let value = dot(&mv, &v);
    let residual = mv.iter().zip(&v).map(|(m, x)| (m - value * x).powi(2)).sum::<f64>().sqrt();
    Eigenpair { value, vector: v, residual, iterations: pair.iterations, converged: pair.converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_top_eigenvalue() {
        let n = 21;
        let fwd: Vec<u32> = (0..n).map(|x| if x + 1 < n { (x + 1) as u32 } else { OUTSIDE }).collect();
        let back: Vec<u32> = (0..n).map(|x| if x > 0 { (x - 1) as u32 } else { OUTSIDE }).collect();
        let actions = vec![fwd, back];
        let weights = vec![0.5, 0.5];
        let op = CompressedOp::new(&actions, &weights, n);
        let pair = top_eigenpair(&op, 1e-10);
        assert!(pair.converged);
        assert!((pair.value - (std::f64::consts::PI / 22.0).cos()).abs() < 1e-12);
        let p = perron_normalize(&op, &pair);
        assert!(p.vector.iter().all(|&x| x >= 0.0));
    }
}
