//! Quasi-unitary resolvent probe: the operator norm of
//! `J (L0 + s)^{-1} - (L_eps + s)^{-1} J` between the weighted spaces, and
//! the Hausdorff distance of resolvent spectra.

use super::build::{base_vertex_id, LimitModel};
use super::graph::{pcg, Csr, DiscreteManifold, VertexKind};
use super::SpectraError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Discrete identification operator `J: H_0 -> H_eps`: each target vertex
/// either copies one source vertex or is set to zero (handle vertices).
#[derive(Debug, Clone)]
pub struct JMap {
    pub target_from_source: Vec<Option<u32>>,
    pub n_source: usize,
}

impl JMap {
    pub fn apply(&self, f: &[f64], out: &mut [f64]) {
        for (t, src) in self.target_from_source.iter().enumerate() {
            out[t] = match src {
                Some(s) => f[*s as usize],
                None => 0.0,
            };
        }
    }

    /// Weighted adjoint `J* = M_0^{-1} J^T M_eps`.
    pub fn apply_adjoint(&self, w: &[f64], m_target: &[f64], m_source: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for (t, src) in self.target_from_source.iter().enumerate() {
            if let Some(s) = src {
                out[*s as usize] += m_target[t] * w[t];
            }
        }
        for (s, x) in out.iter_mut().enumerate() {
            *x /= m_source[s];
        }
    }
}

/// Builds the extension-by-zero/quotient-lift map from a limit model onto an
/// assembled wormhole model: base vertices pull the limit value of their
/// grid site (through the quotient projection), handle vertices get zero.
pub fn jmap_onto_model(
    model: &DiscreteManifold,
    limit: &LimitModel,
    n: u32,
) -> Result<JMap, SpectraError> {
    let mut target_from_source = Vec::with_capacity(model.len());
    for kind in &model.kinds {
        target_from_source.push(match kind {
            VertexKind::Base { torus, ix, iy } => {
                let base_id = base_vertex_id(n, *torus, *ix as u32, *iy as u32) as usize;
                if base_id >= limit.map.len() {
                    return Err(SpectraError::MapDimension(
                        limit.map.len(),
                        model.len(),
                        base_id,
                        model.len(),
                    ));
                }
                Some(limit.map[base_id])
            }
            VertexKind::Handle { .. } => None,
        });
    }
    Ok(JMap { target_from_source, n_source: limit.manifold.len() })
}

struct Resolvent<'a> {
    a: Csr,
    m: &'a [f64],
}

impl<'a> Resolvent<'a> {
    fn new(g: &'a DiscreteManifold, shift: f64) -> Resolvent<'a> {
        Resolvent { a: g.laplacian().shifted(&g.measures, shift), m: &g.measures }
    }

    /// `x = (L + s M)^{-1} M u`.
    fn apply(&self, u: &[f64], x: &mut Vec<f64>) -> Result<(), SpectraError> {
        let n = self.a.n;
        let rhs: Vec<f64> = (0..n).map(|i| self.m[i] * u[i]).collect();
        x.iter_mut().for_each(|v| *v = 0.0);
        pcg(&self.a, &rhs, x, 1e-11, 60 * (n as f64).sqrt() as usize + 5000)?;
        Ok(())
    }
}

/// Operator norm of `J R_0 - R_eps J` (power iteration on the weighted
/// normal operator), where `R = (Delta + shift)^{-1}` and `J` is the
/// extension-by-zero identification.  A vanishing perturbation with `J` the
/// identity gives 0.
pub fn resolvent_distance(
    model: &DiscreteManifold,
    limit: &DiscreteManifold,
    j: &JMap,
    shift: f64,
) -> Result<f64, SpectraError> {
    if j.target_from_source.len() != model.len() || j.n_source != limit.len() {
        return Err(SpectraError::MapDimension(
            j.n_source,
            j.target_from_source.len(),
            limit.len(),
            model.len(),
        ));
    }
    let n0 = limit.len();
    let ne = model.len();
    let r0 = Resolvent::new(limit, shift);
    let re = Resolvent::new(model, shift);
    let m0 = &limit.measures;
    let me = &model.measures;
    let mut rng = ChaCha8Rng::seed_from_u64(0x700f ^ (n0 as u64) ^ ((ne as u64) << 20));
    let mut v: Vec<f64> = (0..n0).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm0 = |x: &[f64]| -> f64 {
        x.iter().zip(m0).map(|(a, w)| a * a * w).sum::<f64>().sqrt()
    };
    let nv = norm0(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut sigma_prev = 0.0;
    let mut sigma = 0.0;
    let mut r0v = vec![0.0; n0];
    let mut jv = vec![0.0; ne];
    let mut rejv = vec![0.0; ne];
    let mut w = vec![0.0; ne];
    let mut jstar_w = vec![0.0; n0];
    let mut r0_jw = vec![0.0; n0];
    let mut rew = vec![0.0; ne];
    for it in 0..80 {
        // w = D v = J R0 v - Re J v
        r0.apply(&v, &mut r0v)?;
        j.apply(&r0v, &mut w);
        j.apply(&v, &mut jv);
        re.apply(&jv, &mut rejv)?;
        for i in 0..ne {
            w[i] -= rejv[i];
        }
        let wnorm_sq: f64 = w.iter().zip(me).map(|(a, m)| a * a * m).sum();
        sigma = wnorm_sq.sqrt();
        // v <- D* w, normalised
        j.apply_adjoint(&w, me, m0, &mut jstar_w);
        r0.apply(&jstar_w, &mut r0_jw)?;
        re.apply(&w, &mut rew)?;
        j.apply_adjoint(&rew, me, m0, &mut jstar_w);
        for i in 0..n0 {
            v[i] = r0_jw[i] - jstar_w[i];
        }
        let nv = norm0(&v);
        if nv < 1e-300 {
            return Ok(0.0);
        }
        v.iter_mut().for_each(|x| *x /= nv);
        if it > 4 && (sigma - sigma_prev).abs() <= 1e-4 * sigma.max(1e-30) {
            break;
        }
        sigma_prev = sigma;
    }
    Ok(sigma)
}

/// Hausdorff distance between the resolvent images `{1/(lambda+1)}` of two
/// finite spectra restricted to the window `[0, window]`.
pub fn hausdorff_spectral_distance(
    spec_a: &[f64],
    spec_b: &[f64],
    window: f64,
) -> Result<f64, SpectraError> {
    let map = |s: &[f64]| -> Vec<f64> {
        s.iter().filter(|&&l| (0.0..=window).contains(&l)).map(|&l| 1.0 / (l + 1.0)).collect()
    };
    let a = map(spec_a);
    let b = map(spec_b);
    if a.is_empty() || b.is_empty() {
        return Err(SpectraError::EmptyWindow);
    }
    let one_sided = |x: &[f64], y: &[f64]| -> f64 {
        x.iter()
            .map(|&p| y.iter().map(|&q| (p - q).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(one_sided(&a, &b).max(one_sided(&b, &a)))
}

#[cfg(test)]
mod tests {
    use super::super::build::{build_base, BaseKind, LimitModel};
    use super::*;

    #[test]
    fn identity_map_zero_distance() {
        let base = build_base(BaseKind::Torus, 12).unwrap();
        let limit = LimitModel::fading(&base);
        let j = jmap_onto_model(&base, &limit, 12).unwrap();
        let d = resolvent_distance(&base, &base, &j, 1.0).unwrap();
        assert!(d < 1e-8, "distance {d}");
    }

    #[test]
    fn hausdorff_cases() {
        assert_eq!(hausdorff_spectral_distance(&[0.0, 1.0], &[0.0, 1.0], 10.0).unwrap(), 0.0);
        let pi2 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        let d = hausdorff_spectral_distance(&[0.0], &[0.0, pi2], 50.0).unwrap();
        assert!((d - (1.0 - 1.0 / (pi2 + 1.0))).abs() < 1e-14);
        // symmetry
        let d2 = hausdorff_spectral_distance(&[0.0, pi2], &[0.0], 50.0).unwrap();
        assert_eq!(d, d2);
        // window filters
        assert!(hausdorff_spectral_distance(&[100.0], &[0.0], 50.0).is_err());
    }
}
