//! Generalized eigenvalue solver for `L v = lambda M v` with diagonal `M`.
//!
//! Models below 400 vertices are diagonalized densely via the symmetric
//! transform `M^{-1/2} L M^{-1/2}`.  Larger models use block shift-invert
//! subspace expansion: the operator `B = (L + sigma M)^{-1} M` is applied by
//! conjugate-gradient solves, the basis is kept `M`-orthonormal with full
//! reorthogonalization (so degenerate torus eigenvalues come out with their
//! multiplicities), and Rayleigh–Ritz on the projected pencil extracts the
//! pairs.  Residuals are certified as `||L v - lambda M v|| <= tol ||M v||`.

use super::graph::{pcg, Csr, DiscreteManifold};
use super::SpectraError;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Residual tolerance relative to `||M v||`.
    pub tol: f64,
    /// Spectral shift of the inverted operator.
    pub sigma: f64,
    /// Dense-solver cutoff.
    pub dense_cutoff: usize,
    /// Deterministic seed for the start block.
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { tol: 1e-8, sigma: 1.0, dense_cutoff: 400, seed: 0x5eed }
    }
}

/// Lowest `k` eigenvalues, ascending.
pub fn eigenvalues(g: &DiscreteManifold, k: usize) -> Result<Vec<f64>, SpectraError> {
    Ok(eigenpairs(g, k, &EigenOptions::default())?.0)
}

/// Lowest `k` eigenpairs of `L v = lambda M v`, eigenvalues ascending and
/// eigenvectors `M`-orthonormal.
pub fn eigenpairs(
    g: &DiscreteManifold,
    k: usize,
    opts: &EigenOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectraError> {
    let n = g.len();
    if k > n {
        return Err(SpectraError::TooManyEigenvalues(k, n));
    }
    g.validate()?;
    if n <= opts.dense_cutoff {
        dense_eigenpairs(g, k, opts)
    } else {
        lanczos_eigenpairs(g, k, opts)
    }
}

fn dense_eigenpairs(
    g: &DiscreteManifold,
    k: usize,
    opts: &EigenOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectraError> {
    let n = g.len();
    let l = g.laplacian();
    let mh: Vec<f64> = g.measures.iter().map(|m| 1.0 / m.sqrt()).collect();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for idx in l.row_ptr[i] as usize..l.row_ptr[i + 1] as usize {
            let j = l.col[idx] as usize;
            s[(i, j)] += l.val[idx] * mh[i] * mh[j];
        }
    }
    // symmetrize against rounding
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (s[(i, j)] + s[(j, i)]);
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut vals = Vec::with_capacity(k);
    let mut vecs = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        vals.push(eig.eigenvalues[idx].max(0.0));
        let u = eig.eigenvectors.column(idx);
        vecs.push((0..n).map(|i| u[i] * mh[i]).collect::<Vec<f64>>());
    }
    // M-normalize, then polish like the iterative path (the raw dense
    // pairs sit just above the residual criterion at large condition)
    for v in vecs.iter_mut() {
        let nrm = m_dot(&g.measures, v, v).sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    let a_shift = l.shifted(&g.measures, opts.sigma);
    refine_pairs(g, &l, &a_shift, opts, &mut vals, &mut vecs)?;
    check_residuals(g, &l, &vals, &vecs, opts.tol)?;
    Ok((vals, vecs))
}

/// `M`-inner product.
fn m_dot(m: &[f64], a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).zip(m).map(|((x, y), w)| x * y * w).sum()
}

fn lanczos_eigenpairs(
    g: &DiscreteManifold,
    k: usize,
    opts: &EigenOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), SpectraError> {
    let n = g.len();
    let l = g.laplacian();
    let a_shift = l.shifted(&g.measures, opts.sigma);
    let m = &g.measures;
    let block = k.clamp(4, 8);
    let max_basis = (8 * k + 48).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (n as u64));

    // basis vectors (M-orthonormal) and their images under B = A^{-1} M
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut images: Vec<Vec<f64>> = Vec::new();

    let orthonormalize = |v: &mut Vec<f64>, basis: &[Vec<f64>]| -> Option<()> {
        for _ in 0..2 {
            for b in basis {
                let c = m_dot(m, v, b);
                for i in 0..v.len() {
                    v[i] -= c * b[i];
                }
            }
        }
        let norm = m_dot(m, v, v).sqrt();
        if norm < 1e-12 {
            return None;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        Some(())
    };

    let apply_b = |v: &[f64]| -> Result<Vec<f64>, SpectraError> {
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = m[i] * v[i];
        }
        let mut x = vec![0.0; n];
        pcg(&a_shift, &rhs, &mut x, 1e-12, 40 * (n as f64).sqrt() as usize + 4000)?;
        Ok(x)
    };

    // start block: one constant vector (captures the kernel exactly) plus
    // random vectors
    let mut pending: Vec<Vec<f64>> = Vec::new();
    pending.push(vec![1.0; n]);
    for _ in 1..block {
        pending.push((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
    }

    let mut vals: Vec<f64> = Vec::new();
    let mut vecs: Vec<Vec<f64>> = Vec::new();
    // the subspace loop certifies at a loose tolerance; deflated inverse
    // iteration below polishes the pairs down to opts.tol
    let loose_tol = (opts.tol * 100.0).max(1e-6);

    while basis.len() < max_basis {
        // expand the basis by the pending block
        let mut appended = 0;
        for mut v in pending.drain(..) {
            if orthonormalize(&mut v, &basis).is_some() {
                let w = apply_b(&v)?;
                basis.push(v);
                images.push(w);
                appended += 1;
            }
        }
        if appended == 0 {
            // basis exhausted (tiny models); fall back to random restart
            pending.push((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let mut v = pending.pop().unwrap();
            if orthonormalize(&mut v, &basis).is_none() {
                break;
            }
            let w = apply_b(&v)?;
            basis.push(v);
            images.push(w);
        }
        let mdim = basis.len();
        // projected operator H_ij = <v_i, B v_j>_M (symmetrized)
        let mut h = DMatrix::<f64>::zeros(mdim, mdim);
        for i in 0..mdim {
            for j in 0..mdim {
                h[(i, j)] = m_dot(m, &basis[i], &images[j]);
            }
        }
        for i in 0..mdim {
            for j in 0..i {
                let v = 0.5 * (h[(i, j)] + h[(j, i)]);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(h);
        // largest theta of B correspond to the smallest lambda
        let mut order: Vec<usize> = (0..mdim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
        let mut cand_vals = Vec::new();
        let mut cand_vecs = Vec::new();
        let mut next_block: Vec<Vec<f64>> = Vec::new();
        let mut all_converged = true;
        for &idx in order.iter().take(k) {
            let theta = eig.eigenvalues[idx];
            if theta <= 0.0 {
                all_converged = false;
                continue;
            }
            let lambda = (1.0 / theta - opts.sigma).max(0.0);
            let y = eig.eigenvectors.column(idx);
            let mut x = vec![0.0; n];
            for (j, b) in basis.iter().enumerate() {
                let c = y[j];
                for i in 0..n {
                    x[i] += c * b[i];
                }
            }
            let nrm = m_dot(m, &x, &x).sqrt();
            for xi in x.iter_mut() {
                *xi /= nrm;
            }
            let res = residual(g, &l, lambda, &x);
            if res > loose_tol {
                all_converged = false;
                // refine this direction next round: take B x as new direction
                let mut img = vec![0.0; n];
                for (j, w) in images.iter().enumerate() {
                    let c = y[j];
                    for i in 0..n {
                        img[i] += c * w[i];
                    }
                }
                next_block.push(img);
            }
            cand_vals.push(lambda);
            cand_vecs.push(x);
        }
        if all_converged && cand_vals.len() == k {
            // ascending order
            let mut idx: Vec<usize> = (0..k).collect();
            idx.sort_by(|&a, &b| cand_vals[a].partial_cmp(&cand_vals[b]).unwrap());
            vals = idx.iter().map(|&i| cand_vals[i]).collect();
            vecs = idx.iter().map(|&i| cand_vecs[i].clone()).collect();
            break;
        }
        if next_block.is_empty() {
            next_block.push((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect());
        }
        pending = next_block;
    }
    if vals.len() != k {
        return Err(SpectraError::NoConvergence { residual: f64::NAN, tol: opts.tol });
    }
    refine_pairs(g, &l, &a_shift, opts, &mut vals, &mut vecs)?;
    check_residuals(g, &l, &vals, &vecs, opts.tol)?;
    Ok((vals, vecs))
}

/// Deflated inverse iteration: polishes Ritz pairs (ascending) until the
/// residual criterion holds, re-orthogonalizing each vector against the
/// already refined ones so degenerate clusters keep their multiplicity.
fn refine_pairs(
    g: &DiscreteManifold,
    l: &Csr,
    a_shift: &Csr,
    opts: &EigenOptions,
    vals: &mut [f64],
    vecs: &mut [Vec<f64>],
) -> Result<(), SpectraError> {
    let n = g.len();
    let m = &g.measures;
    let k = vals.len();
    for j in 0..k {
        for _step in 0..6 {
            if residual(g, l, vals[j], &vecs[j]) <= opts.tol {
                break;
            }
            let mut rhs = vec![0.0; n];
            for i in 0..n {
                rhs[i] = m[i] * vecs[j][i];
            }
            let mut x = vecs[j].clone();
            pcg(a_shift, &rhs, &mut x, 1e-14, 80 * (n as f64).sqrt() as usize + 8000)?;
            // deflate against previously refined pairs (twice)
            for _ in 0..2 {
                for p in 0..j {
                    let c = m_dot(m, &x, &vecs[p]);
                    for i in 0..n {
                        x[i] -= c * vecs[p][i];
                    }
                }
            }
            let nrm = m_dot(m, &x, &x).sqrt();
            if nrm < 1e-300 {
                break;
            }
            for xi in x.iter_mut() {
                *xi /= nrm;
            }
            // Rayleigh quotient
            let mut lx = vec![0.0; n];
            l.matvec(&x, &mut lx);
            let num: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
            vals[j] = (num).max(0.0);
            vecs[j] = x;
        }
    }
    // keep ascending order after refinement
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs: Vec<Vec<f64>> = order.iter().map(|&i| vecs[i].clone()).collect();
    vals.copy_from_slice(&sorted_vals);
    vecs.clone_from_slice(&sorted_vecs);
    Ok(())
}

fn residual(g: &DiscreteManifold, l: &Csr, lambda: f64, v: &[f64]) -> f64 {
    let n = g.len();
    let mut lv = vec![0.0; n];
    l.matvec(v, &mut lv);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let mv = g.measures[i] * v[i];
        let r = lv[i] - lambda * mv;
        num += r * r;
        den += mv * mv;
    }
    (num / den.max(1e-300)).sqrt()
}

fn check_residuals(
    g: &DiscreteManifold,
    l: &Csr,
    vals: &[f64],
    vecs: &[Vec<f64>],
    tol: f64,
) -> Result<(), SpectraError> {
    let mut worst = 0.0f64;
    for (lam, v) in vals.iter().zip(vecs) {
        worst = worst.max(residual(g, l, *lam, v));
    }
    if worst > tol {
        return Err(SpectraError::NoConvergence { residual: worst, tol });
    }
    Ok(())
}
