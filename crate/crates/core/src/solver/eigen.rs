//! Buckling eigenproblem `K phi = -lambda K_G phi` for the smallest positive
//! `lambda`.
//!
//! The pencil is inverted to `-K_G phi = mu K phi` with `mu = 1 / lambda`, so
//! the wanted modes are the largest positive `mu`. Small systems go through a
//! dense reduction; larger ones use subspace iteration with Rayleigh-Ritz.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sparse::{CsrMatrix, SkylineCholesky};
use crate::error::{Error, Result};

/// Systems up to this size are solved densely.
pub const DENSE_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Force subspace iteration even below [`DENSE_LIMIT`].
    pub force_iterative: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 400,
            seed: 0x5eed,
            force_iterative: false,
        }
    }
}

/// Eigenpairs in ascending `lambda`, modes in reduced (free-DOF) numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEigen {
    pub lambdas: Vec<f64>,
    pub modes: Vec<DVector<f64>>,
    pub iterations: usize,
}

pub fn solve_pencil(
    k: &CsrMatrix,
    kg: &CsrMatrix,
    factor: &SkylineCholesky,
    n_modes: usize,
    opts: &EigenOptions,
) -> Result<ReducedEigen> {
    let n = k.dim();
    if kg.dim() != n || factor.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "K is {n}, K_G is {}, factor is {}",
            kg.dim(),
            factor.dim()
        )));
    }
    if n == 0 || n_modes == 0 {
        return Ok(ReducedEigen {
            lambdas: vec![],
            modes: vec![],
            iterations: 0,
        });
    }
    if n <= DENSE_LIMIT && !opts.force_iterative {
        dense(k, kg, n_modes)
    } else {
        subspace(k, kg, factor, n_modes, opts)
    }
}

/// Positive `mu` in descending order with their vectors.
fn select(mu: &DVector<f64>, vecs: &DMatrix<f64>, n_modes: usize) -> (Vec<f64>, Vec<DVector<f64>>) {
    let mut order: Vec<usize> = (0..mu.len()).filter(|&i| mu[i] > 0.0).collect();
    order.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]));
    order.truncate(n_modes);
    (
        order.iter().map(|&i| 1.0 / mu[i]).collect(),
        order.iter().map(|&i| vecs.column(i).into_owned()).collect(),
    )
}

/// Reduces `(-G) v = mu K v` to a standard problem with `K = L L^T`.
fn reduced_generalized(kr: &DMatrix<f64>, gr: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let chol = kr
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Eigen("projected stiffness is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Eigen("singular projected stiffness".into()))?;
    let mut c = &linv * gr * linv.transpose();
    c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let vecs = linv.transpose() * eig.eigenvectors;
    Ok((eig.eigenvalues, vecs))
}

fn dense(k: &CsrMatrix, kg: &CsrMatrix, n_modes: usize) -> Result<ReducedEigen> {
    let kd = k.to_dense();
    let gd = -kg.to_dense();
    let (mu, vecs) = reduced_generalized(&kd, &gd)?;
    let (lambdas, modes) = select(&mu, &vecs, n_modes);
    Ok(ReducedEigen {
        lambdas,
        modes,
        iterations: 0,
    })
}

fn subspace(
    k: &CsrMatrix,
    kg: &CsrMatrix,
    factor: &SkylineCholesky,
    n_modes: usize,
    opts: &EigenOptions,
) -> Result<ReducedEigen> {
    let n = k.dim();
    let q = (2 * n_modes).max(n_modes + 8).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = DMatrix::<f64>::from_fn(n, q, |_, _| rng.random_range(-1.0..1.0));
    let (dk, dg) = (k.diagonal(), kg.diagonal());
    for i in 0..n {
        x[(i, 0)] = if dk[i] > 0.0 { (dg[i] / dk[i]).abs() } else { 0.0 };
    }
    let mut previous: Vec<f64> = Vec::new();
    let mut col = vec![0.0; n];
    for iter in 1..=opts.max_iterations {
        // Y = K^{-1} (-K_G) X
        let mut y = DMatrix::<f64>::zeros(n, q);
        for c in 0..q {
            kg.mul_vec(x.column(c).as_slice(), &mut col);
            col.iter_mut().for_each(|v| *v = -*v);
            factor.solve_in_place(&mut col);
            y.column_mut(c).copy_from_slice(&col);
        }
        let qmat = y.qr().q();
        let mut kq = DMatrix::<f64>::zeros(n, q);
        let mut gq = DMatrix::<f64>::zeros(n, q);
        for c in 0..q {
            k.mul_vec(qmat.column(c).as_slice(), &mut col);
            kq.column_mut(c).copy_from_slice(&col);
            kg.mul_vec(qmat.column(c).as_slice(), &mut col);
            gq.column_mut(c).copy_from_slice(&col);
        }
        let kr = qmat.transpose() * &kq;
        let gr = -(qmat.transpose() * &gq);
        let kr = (&kr + kr.transpose()) * 0.5;
        let gr = (&gr + gr.transpose()) * 0.5;
        let (mu, v) = reduced_generalized(&kr, &gr)?;
        // keep the dominant subspace, ordered by |mu|
        let mut order: Vec<usize> = (0..q).collect();
        order.sort_by(|&a, &b| mu[b].abs().total_cmp(&mu[a].abs()));
        let ritz = &qmat * &v;
        x = DMatrix::from_fn(n, q, |i, c| ritz[(i, order[c])]);
        let (lambdas, _) = select(&mu, &ritz, n_modes);
        let done = lambdas.len() == previous.len()
            && lambdas
                .iter()
                .zip(&previous)
                .all(|(a, b)| (a - b).abs() <= opts.tolerance * a.abs());
        if done || iter == opts.max_iterations {
            if !done {
                log::warn!("subspace iteration stopped after {iter} iterations without converging");
            }
            let (lambdas, modes) = select(&mu, &ritz, n_modes);
            return Ok(ReducedEigen {
                lambdas,
                modes,
                iterations: iter,
            });
        }
        previous = lambdas;
    }
    unreachable!("loop returns on its last iteration")
}

/// Scales to unit max-norm with the largest-magnitude entry positive.
pub fn normalize_mode(v: &mut DVector<f64>) {
    let (mut best, mut idx) = (0.0, 0);
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    if best > 0.0 {
        let s = if v[idx] < 0.0 { -1.0 / best } else { 1.0 / best };
        *v *= s;
    }
}
