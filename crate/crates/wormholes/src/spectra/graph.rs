//! Weighted-graph storage: vertices with positions and measures, edges with
//! conductances, and a CSR matrix-vector kernel for the induced operator.

use super::SpectraError;
use serde::Serialize;

/// Where a vertex lives in the assembled model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VertexKind {
    /// Grid vertex of a base torus/rectangle (`torus` selects the copy).
    Base { torus: u8, ix: u16, iy: u16 },
    /// Interior cylinder vertex: `layer` along the handle, `seg` around.
    Handle { handle: u32, layer: u16, seg: u16 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    /// Conductance `c > 0`; the edge contributes `c |u_a - u_b|^2`.
    pub c: f64,
}

/// A weighted graph modelling `int |du|^2` (conductances) and `int |u|^2`
/// (vertex measures).
#[derive(Debug, Clone, Default)]
pub struct DiscreteManifold {
    pub positions: Vec<[f64; 2]>,
    pub kinds: Vec<VertexKind>,
    pub measures: Vec<f64>,
    pub edges: Vec<Edge>,
    /// Diagonal potential per vertex; a Dirichlet condition grounds removed
    /// neighbours into this term (`q += pot_x |u_x|^2`).  Empty means zero.
    pub potentials: Vec<f64>,
}

impl DiscreteManifold {
    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    pub fn push_vertex(&mut self, pos: [f64; 2], kind: VertexKind, measure: f64) -> u32 {
        let id = self.positions.len() as u32;
        self.positions.push(pos);
        self.kinds.push(kind);
        self.measures.push(measure);
        id
    }

    pub fn push_edge(&mut self, a: u32, b: u32, c: f64) {
        debug_assert!(a != b && c > 0.0);
        self.edges.push(Edge { a, b, c });
    }

    pub fn total_measure(&self) -> f64 {
        self.measures.iter().sum()
    }

    /// Energy `sum c |u_a - u_b|^2 + sum pot u^2` of a vector.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let edge_part: f64 = self
            .edges
            .iter()
            .map(|e| {
                let d = u[e.a as usize] - u[e.b as usize];
                e.c * d * d
            })
            .sum();
        let pot_part: f64 = self.potentials.iter().zip(u).map(|(p, x)| p * x * x).sum();
        edge_part + pot_part
    }

    /// Mass `sum m u^2`.
    pub fn mass(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.measures).map(|(x, m)| m * x * x).sum()
    }

    pub fn validate(&self) -> Result<(), SpectraError> {
        for e in &self.edges {
            if e.c <= 0.0 {
                return Err(SpectraError::NotIsometric("nonpositive conductance".into()));
            }
        }
        if self.measures.iter().any(|&m| m <= 0.0) {
            return Err(SpectraError::NotIsometric("nonpositive measure".into()));
        }
        Ok(())
    }

    /// Laplacian as CSR (diagonal = sum of incident conductances).
    pub fn laplacian(&self) -> Csr {
        Csr::from_graph(self)
    }
}

/// Distance on the unit torus (per-coordinate wrap).
pub fn torus_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let mut d2 = 0.0;
    for i in 0..2 {
        let mut d = (a[i] - b[i]).abs();
        if d > 0.5 {
            d = 1.0 - d;
        }
        d2 += d * d;
    }
    d2.sqrt()
}

/// Compressed sparse row symmetric matrix.
#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<u32>,
    pub col: Vec<u32>,
    pub val: Vec<f64>,
    pub diag: Vec<f64>,
}

impl Csr {
    /// Graph Laplacian `L = D - C` of the weighted graph.
    pub fn from_graph(g: &DiscreteManifold) -> Csr {
        let n = g.len();
        let mut deg = vec![0u32; n];
        for e in &g.edges {
            deg[e.a as usize] += 1;
            deg[e.b as usize] += 1;
        }
        let mut row_ptr = vec![0u32; n + 1];
        for i in 0..n {
            row_ptr[i + 1] = row_ptr[i] + deg[i] + 1; // +1 for the diagonal
        }
        let nnz = row_ptr[n] as usize;
        let mut col = vec![0u32; nnz];
        let mut val = vec![0.0f64; nnz];
        let mut cursor: Vec<u32> = row_ptr[..n].to_vec();
        let mut diag = vec![0.0f64; n];
        // reserve the first slot of each row for the diagonal
        for i in 0..n {
            col[cursor[i] as usize] = i as u32;
            cursor[i] += 1;
        }
        for e in &g.edges {
            let (a, b, c) = (e.a as usize, e.b as usize, e.c);
            diag[a] += c;
            diag[b] += c;
            col[cursor[a] as usize] = b as u32;
            val[cursor[a] as usize] = -c;
            cursor[a] += 1;
            col[cursor[b] as usize] = a as u32;
            val[cursor[b] as usize] = -c;
            cursor[b] += 1;
        }
        if !g.potentials.is_empty() {
            for i in 0..n {
                diag[i] += g.potentials[i];
            }
        }
        for i in 0..n {
            val[row_ptr[i] as usize] = diag[i];
        }
        Csr { n, row_ptr, col, val, diag }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            let lo = self.row_ptr[i] as usize;
            let hi = self.row_ptr[i + 1] as usize;
            for k in lo..hi {
                acc += self.val[k] * x[self.col[k] as usize];
            }
            y[i] = acc;
        }
    }

    /// Adds `shift * m[i]` to the diagonal, producing `L + shift M`.
    pub fn shifted(&self, measures: &[f64], shift: f64) -> Csr {
        let mut out = self.clone();
        for i in 0..self.n {
            out.val[self.row_ptr[i] as usize] += shift * measures[i];
            out.diag[i] += shift * measures[i];
        }
        out
    }
}

/// Jacobi-preconditioned conjugate gradient for SPD systems.
///
/// Solves `A x = b` to relative residual `tol`; `x` carries the initial
/// guess on entry.
pub fn pcg(a: &Csr, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> Result<usize, SpectraError> {
    let n = a.n;
    let mut r = vec![0.0; n];
    a.matvec(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let mut z: Vec<f64> = r.iter().zip(&a.diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    for it in 0..max_iter {
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= tol * bnorm {
            return Ok(it);
        }
        a.matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(SpectraError::CgStall(rnorm / bnorm));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / a.diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if rnorm <= tol * bnorm * 10.0 {
        // accept a mildly degraded solve rather than failing the sweep
        Ok(max_iter)
    } else {
        Err(SpectraError::CgStall(rnorm / bnorm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> DiscreteManifold {
        let mut g = DiscreteManifold::default();
        for i in 0..n {
            g.push_vertex([i as f64, 0.0], VertexKind::Base { torus: 0, ix: i as u16, iy: 0 }, 1.0);
        }
        for i in 0..n - 1 {
            g.push_edge(i as u32, i as u32 + 1, 1.0);
        }
        g
    }

    #[test]
    fn laplacian_constant_in_kernel() {
        let g = path_graph(7);
        let l = g.laplacian();
        let ones = vec![1.0; 7];
        let mut y = vec![0.0; 7];
        l.matvec(&ones, &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-14));
        assert!(g.energy(&ones) < 1e-30);
    }

    #[test]
    fn energy_matches_quadratic_form() {
        let g = path_graph(5);
        let l = g.laplacian();
        let u: Vec<f64> = (0..5).map(|i| (i as f64).sin()).collect();
        let mut lu = vec![0.0; 5];
        l.matvec(&u, &mut lu);
        let q_form: f64 = u.iter().zip(&lu).map(|(a, b)| a * b).sum();
        assert!((q_form - g.energy(&u)).abs() < 1e-12);
        assert!(q_form >= 0.0);
    }

    #[test]
    fn pcg_solves_shifted_system() {
        let g = path_graph(40);
        let a = g.laplacian().shifted(&g.measures, 1.0);
        let want: Vec<f64> = (0..40).map(|i| ((i * 7 % 11) as f64) - 5.0).collect();
        let mut b = vec![0.0; 40];
        a.matvec(&want, &mut b);
        let mut x = vec![0.0; 40];
        pcg(&a, &b, &mut x, 1e-12, 8000).unwrap();
        for i in 0..40 {
            assert!((x[i] - want[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn torus_metric_wraps() {
        assert!((torus_distance([0.1, 0.1], [0.9, 0.1]) - 0.2).abs() < 1e-15);
        assert!((torus_distance([0.0, 0.0], [0.5, 0.5]) - 0.5f64.hypot(0.5)).abs() < 1e-15);
    }
}
