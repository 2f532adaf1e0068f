//! Model assembly: flat base grids, disk removal with boundary rings,
//! cylinder gluing, and identified (quotient) limit models.

use super::graph::{torus_distance, DiscreteManifold, VertexKind};
use super::SpectraError;
use std::collections::{HashMap, HashSet};

/// Flat base manifolds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    /// One unit torus, `n x n` grid.
    Torus,
    /// Two disjoint unit tori (isometric copies).
    TwoTori,
    /// Unit square with free (Neumann) boundary.
    RectangleNeumann,
}

/// Deterministic vertex id of a base grid vertex.
pub fn base_vertex_id(n: u32, torus: u8, ix: u32, iy: u32) -> u32 {
    torus as u32 * n * n + ix * n + iy
}

/// Builds the flat base grid: conductance 1 per edge, measure `h^2` per
/// vertex, `h = 1/n`.
pub fn build_base(kind: BaseKind, n: u32) -> Result<DiscreteManifold, SpectraError> {
    if n < 8 {
        return Err(SpectraError::Resolution(n));
    }
    let h = 1.0 / n as f64;
    let copies: u8 = if kind == BaseKind::TwoTori { 2 } else { 1 };
    let mut g = DiscreteManifold::default();
    for t in 0..copies {
        for ix in 0..n {
            for iy in 0..n {
                g.push_vertex(
                    [ix as f64 * h, iy as f64 * h],
                    VertexKind::Base { torus: t, ix: ix as u16, iy: iy as u16 },
                    h * h,
                );
            }
        }
        let off = t as u32 * n * n;
        for ix in 0..n {
            for iy in 0..n {
                let id = off + ix * n + iy;
                let wrap = kind != BaseKind::RectangleNeumann;
                if ix + 1 < n || wrap {
                    let jx = (ix + 1) % n;
                    g.push_edge(id, off + jx * n + iy, 1.0);
                }
                if iy + 1 < n || wrap {
                    let jy = (iy + 1) % n;
                    g.push_edge(id, off + ix * n + jy, 1.0);
                }
            }
        }
    }
    Ok(g)
}

/// Boundary ring of one removed disk: the gluing sites, in circular order.
#[derive(Debug, Clone)]
pub struct Ring {
    pub torus: u8,
    pub center: [f64; 2],
    pub eps: f64,
    pub vertices: Vec<u32>,
}

/// Base manifold with disks removed; rings retained as gluing sites.
#[derive(Debug, Clone)]
pub struct PuncturedManifold {
    pub manifold: DiscreteManifold,
    pub rings: Vec<Ring>,
    pub grid_n: u32,
    /// Measure removed with the deleted vertices.
    pub removed_measure: f64,
}

fn wrap01(x: f64) -> f64 {
    x - x.floor()
}

fn grid_n_of(base: &DiscreteManifold) -> u32 {
    let mut n = 0u32;
    for k in &base.kinds {
        if let VertexKind::Base { ix, iy, .. } = k {
            n = n.max(*ix as u32 + 1).max(*iy as u32 + 1);
        }
    }
    n
}

/// Selects, for each center, a ring of `k` distinct grid vertices nearest to
/// `k` equispaced points on the circle of radius `eps`.  All rings share the
/// same `k`; if some circle cannot host `k` distinct vertices, `k` is
/// decreased globally (not below 8).
fn select_rings(
    _base: &DiscreteManifold,
    lookup: &HashMap<(u8, u16, u16), u32>,
    centers: &[(u8, [f64; 2])],
    eps: f64,
    n: u32,
    ring_cap: usize,
) -> Result<(Vec<Ring>, usize), SpectraError> {
    let h = 1.0 / n as f64;
    let k_max = ((2.0 * std::f64::consts::PI * eps / (1.4 * h)).floor() as usize).min(ring_cap);
    if eps < 0.5 * h || k_max < 8 {
        return Err(SpectraError::Unresolvable { eps, h, got: k_max });
    }
    'k_loop: for k in (8..=k_max).rev() {
        let mut rings = Vec::with_capacity(centers.len());
        let mut used: HashSet<u32> = HashSet::new();
        for &(t, c) in centers {
            let mut verts = Vec::with_capacity(k);
            for s in 0..k {
                let th = 2.0 * std::f64::consts::PI * (s as f64 + 0.37) / k as f64;
                let px = wrap01(c[0] + eps * th.cos());
                let py = wrap01(c[1] + eps * th.sin());
                let ix = ((px / h).round() as i64).rem_euclid(n as i64) as u16;
                let iy = ((py / h).round() as i64).rem_euclid(n as i64) as u16;
                let id = *lookup.get(&(t, ix, iy)).expect("grid vertex must exist");
                if verts.contains(&id) {
                    continue 'k_loop; // duplicate within a ring: shrink k
                }
                verts.push(id);
            }
            for &v in &verts {
                if !used.insert(v) {
                    return Err(SpectraError::RingClash);
                }
            }
            rings.push(Ring { torus: t, center: c, eps, vertices: verts });
        }
        return Ok((rings, k));
    }
    Err(SpectraError::Unresolvable { eps, h, got: 0 })
}

/// Removes the vertices strictly inside each disk `B_eps(center)`; the
/// boundary ring of nearest-to-circle vertices is retained as gluing sites.
///
/// Centers must be pairwise `eps`-separated (distance `>= 2 eps` on the same
/// copy) and each circle must resolve at least 8 distinct ring vertices.
pub fn remove_balls(
    base: &DiscreteManifold,
    centers: &[(u8, [f64; 2])],
    eps: f64,
) -> Result<PuncturedManifold, SpectraError> {
    remove_balls_with_cap(base, centers, eps, 64)
}

/// [`remove_balls`] with an explicit upper bound on the ring size (tighter
/// vertex budgets want coarser gluing circles).
pub fn remove_balls_with_cap(
    base: &DiscreteManifold,
    centers: &[(u8, [f64; 2])],
    eps: f64,
    ring_cap: usize,
) -> Result<PuncturedManifold, SpectraError> {
    let n = grid_n_of(base);
    if centers.is_empty() {
        return Ok(PuncturedManifold {
            manifold: base.clone(),
            rings: Vec::new(),
            grid_n: n,
            removed_measure: 0.0,
        });
    }
    for i in 0..centers.len() {
        for j in 0..i {
            if centers[i].0 != centers[j].0 {
                continue;
            }
            let d = torus_distance(centers[i].1, centers[j].1);
            if d < 2.0 * eps {
                return Err(SpectraError::Separation(d, 2.0 * eps));
            }
        }
    }
    let mut lookup: HashMap<(u8, u16, u16), u32> = HashMap::new();
    for (id, k) in base.kinds.iter().enumerate() {
        if let VertexKind::Base { torus, ix, iy } = k {
            lookup.insert((*torus, *ix, *iy), id as u32);
        }
    }
    let (rings, _k) = select_rings(base, &lookup, centers, eps, n, ring_cap)?;
    let ring_set: HashSet<u32> = rings.iter().flat_map(|r| r.vertices.iter().copied()).collect();
    // delete strict-interior vertices that are not gluing sites
    let mut keep = vec![true; base.len()];
    let mut removed_measure = 0.0;
    for (id, kind) in base.kinds.iter().enumerate() {
        let VertexKind::Base { torus, .. } = kind else { continue };
        if ring_set.contains(&(id as u32)) {
            continue;
        }
        let pos = base.positions[id];
        for &(t, c) in centers {
            if t == *torus && torus_distance(pos, c) < eps {
                keep[id] = false;
                removed_measure += base.measures[id];
                break;
            }
        }
    }
    let mut old_to_new = vec![u32::MAX; base.len()];
    let mut g = DiscreteManifold::default();
    for id in 0..base.len() {
        if keep[id] {
            old_to_new[id] =
                g.push_vertex(base.positions[id], base.kinds[id], base.measures[id]);
        }
    }
    for e in &base.edges {
        if keep[e.a as usize] && keep[e.b as usize] {
            g.push_edge(old_to_new[e.a as usize], old_to_new[e.b as usize], e.c);
        }
    }
    let rings = rings
        .into_iter()
        .map(|r| Ring {
            vertices: r.vertices.iter().map(|&v| old_to_new[v as usize]).collect(),
            ..r
        })
        .collect();
    Ok(PuncturedManifold { manifold: g, rings, grid_n: n, removed_measure })
}

/// Imposes a Dirichlet condition on every ring: ring vertices are deleted
/// and their conductances become grounded diagonal potentials on the
/// neighbours (the obstacle problem; the hole then raises eigenvalues by
/// the order of its capacity).
pub fn ground_rings(p: &PuncturedManifold) -> DiscreteManifold {
    let g = &p.manifold;
    let ring_set: std::collections::HashSet<u32> =
        p.rings.iter().flat_map(|r| r.vertices.iter().copied()).collect();
    let mut old_to_new = vec![u32::MAX; g.len()];
    let mut out = DiscreteManifold::default();
    for id in 0..g.len() {
        if !ring_set.contains(&(id as u32)) {
            old_to_new[id] = out.push_vertex(g.positions[id], g.kinds[id], g.measures[id]);
        }
    }
    out.potentials = vec![0.0; out.len()];
    for e in &g.edges {
        let (ka, kb) = (ring_set.contains(&e.a), ring_set.contains(&e.b));
        match (ka, kb) {
            (false, false) => {
                out.push_edge(old_to_new[e.a as usize], old_to_new[e.b as usize], e.c)
            }
            (false, true) => out.potentials[old_to_new[e.a as usize] as usize] += e.c,
            (true, false) => out.potentials[old_to_new[e.b as usize] as usize] += e.c,
            (true, true) => {}
        }
    }
    out
}

/// A punctured base with discrete cylinders glued onto ring pairs.
#[derive(Debug, Clone)]
pub struct WormholeModel {
    pub manifold: DiscreteManifold,
    pub rings: Vec<Ring>,
    pub eps: f64,
    pub ell: f64,
    /// Total measure carried by the cylinders (including the glued ends).
    pub handle_measure: f64,
}

/// Glues one discrete cylinder `[0, ell] x eps S^1` per pair of rings.
///
/// The cylinder grid has `n_long` longitudinal intervals and `n_trans`
/// transversal segments; `n_trans` must equal the ring size.  Product-metric
/// weights: longitudinal conductance `eps dphi / ds`, transversal
/// `ds / (eps dphi)` (half at the glued ends), vertex measure
/// `eps dphi ds` (half at the ends, added to the ring vertices).
pub fn attach_handles(
    punctured: &PuncturedManifold,
    pairs: &[(usize, usize)],
    eps: f64,
    ell: f64,
    n_long: u32,
    n_trans: usize,
) -> Result<WormholeModel, SpectraError> {
    if n_long < 4 {
        return Err(SpectraError::HandleResolution(n_long));
    }
    let mut g = punctured.manifold.clone();
    let ds = ell / n_long as f64;
    let dphi = 2.0 * std::f64::consts::PI / n_trans as f64;
    let c_long = eps * dphi / ds;
    let c_trans = ds / (eps * dphi);
    let cell = eps * dphi * ds;
    let mut handle_measure = 0.0;
    for (hidx, &(rm, rp)) in pairs.iter().enumerate() {
        let ring_minus = &punctured.rings[rm];
        let ring_plus = &punctured.rings[rp];
        if ring_minus.vertices.len() != n_trans {
            return Err(SpectraError::GluingMismatch(n_trans, ring_minus.vertices.len()));
        }
        if ring_plus.vertices.len() != n_trans {
            return Err(SpectraError::GluingMismatch(n_trans, ring_plus.vertices.len()));
        }
        // layer 0 = ring-, layer n_long = ring+, interior layers are new
        let mut layers: Vec<Vec<u32>> = Vec::with_capacity(n_long as usize + 1);
        layers.push(ring_minus.vertices.clone());
        for layer in 1..n_long {
            let mut ids = Vec::with_capacity(n_trans);
            for seg in 0..n_trans {
                let id = g.push_vertex(
                    ring_minus.center,
                    VertexKind::Handle { handle: hidx as u32, layer: layer as u16, seg: seg as u16 },
                    cell,
                );
                ids.push(id);
            }
            handle_measure += cell * n_trans as f64;
            layers.push(ids);
        }
        layers.push(ring_plus.vertices.clone());
        // end half-cells merge into the glued base vertices
        for &v in ring_minus.vertices.iter().chain(&ring_plus.vertices) {
            g.measures[v as usize] += 0.5 * cell;
            handle_measure += 0.5 * cell;
        }
        for layer in 0..=n_long as usize {
            let trans_weight = if layer == 0 || layer == n_long as usize {
                0.5 * c_trans
            } else {
                c_trans
            };
            for seg in 0..n_trans {
                let a = layers[layer][seg];
                let b = layers[layer][(seg + 1) % n_trans];
                g.push_edge(a, b, trans_weight);
                if layer < n_long as usize {
                    g.push_edge(a, layers[layer + 1][seg], c_long);
                }
            }
        }
    }
    Ok(WormholeModel {
        manifold: g,
        rings: punctured.rings.clone(),
        eps,
        ell,
        handle_measure,
    })
}

/// Standalone discrete cylinder `[0, ell] x eps S^1`; `dirichlet_ends`
/// grounds both boundary circles (the grounded conductances become diagonal
/// potentials).
pub fn build_cylinder(
    eps: f64,
    ell: f64,
    n_long: u32,
    n_trans: usize,
    dirichlet_ends: bool,
) -> Result<DiscreteManifold, SpectraError> {
    if n_long < 4 {
        return Err(SpectraError::HandleResolution(n_long));
    }
    let ds = ell / n_long as f64;
    let dphi = 2.0 * std::f64::consts::PI / n_trans as f64;
    let c_long = eps * dphi / ds;
    let c_trans = ds / (eps * dphi);
    let cell = eps * dphi * ds;
    let mut g = DiscreteManifold::default();
    let (lo, hi) = if dirichlet_ends { (1, n_long - 1) } else { (0, n_long) };
    let mut ids: HashMap<(u32, usize), u32> = HashMap::new();
    for layer in lo..=hi {
        let boundary_layer = layer == 0 || layer == n_long;
        let m = if boundary_layer { 0.5 * cell } else { cell };
        for seg in 0..n_trans {
            let id = g.push_vertex(
                [layer as f64 * ds, seg as f64 * dphi * eps],
                VertexKind::Handle { handle: 0, layer: layer as u16, seg: seg as u16 },
                m,
            );
            ids.insert((layer, seg), id);
        }
    }
    g.potentials = vec![0.0; g.len()];
    for layer in lo..=hi {
        let boundary_layer = layer == 0 || layer == n_long;
        let tw = if boundary_layer { 0.5 * c_trans } else { c_trans };
        for seg in 0..n_trans {
            let a = ids[&(layer, seg)];
            g.push_edge(a, ids[&(layer, (seg + 1) % n_trans)], tw);
            if layer < hi {
                g.push_edge(a, ids[&(layer + 1, seg)], c_long);
            }
        }
        if dirichlet_ends && (layer == lo || layer == hi) {
            // grounded edge towards the deleted boundary circle
            for seg in 0..n_trans {
                g.potentials[ids[&(layer, seg)] as usize] += c_long;
            }
        }
    }
    Ok(g)
}

/// Limit operators of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// Unperturbed base manifold.
    Fading,
    /// Quotient identifying two isometric regions.
    Identified,
}

/// A limit model together with the projection of base vertices onto it.
#[derive(Debug, Clone)]
pub struct LimitModel {
    pub kind: LimitKind,
    pub manifold: DiscreteManifold,
    /// Old base-vertex id -> limit vertex id.
    pub map: Vec<u32>,
}

impl LimitModel {
    pub fn fading(base: &DiscreteManifold) -> LimitModel {
        LimitModel {
            kind: LimitKind::Fading,
            manifold: base.clone(),
            map: (0..base.len() as u32).collect(),
        }
    }
}

/// Quotient of `base` by the vertex bijection `phi` (pairs of
/// `(minus, plus)` ids): identified vertices carry summed measures and
/// summed conductances, realizing the weighted Kirchhoff coupling.
///
/// Errors if the two sides do not match in measure or in edge structure.
pub fn build_identified_limit(
    base: &DiscreteManifold,
    phi: &[(u32, u32)],
) -> Result<LimitModel, SpectraError> {
    let n = base.len();
    let mut partner = vec![u32::MAX; n];
    for &(a, b) in phi {
        if a == b || partner[a as usize] != u32::MAX || partner[b as usize] != u32::MAX {
            return Err(SpectraError::NotIsometric("phi is not a bijection of disjoint sets".into()));
        }
        let (ma, mb) = (base.measures[a as usize], base.measures[b as usize]);
        if (ma - mb).abs() > 1e-12 * ma.abs().max(mb.abs()) {
            return Err(SpectraError::NotIsometric(format!(
                "measure mismatch at pair ({a}, {b}): {ma} vs {mb}"
            )));
        }
        partner[a as usize] = b;
        partner[b as usize] = a;
    }
    let minus: HashSet<u32> = phi.iter().map(|p| p.0).collect();
    let plus: HashSet<u32> = phi.iter().map(|p| p.1).collect();
    // conductance structure must map: edges inside the plus set correspond
    // to edges inside the minus set with equal weight
    let mut minus_edges: HashMap<(u32, u32), f64> = HashMap::new();
    for e in &base.edges {
        if minus.contains(&e.a) && minus.contains(&e.b) {
            let key = (e.a.min(e.b), e.a.max(e.b));
            *minus_edges.entry(key).or_insert(0.0) += e.c;
        }
    }
    let mut plus_edges: HashMap<(u32, u32), f64> = HashMap::new();
    for e in &base.edges {
        if plus.contains(&e.a) && plus.contains(&e.b) {
            let (pa, pb) = (partner[e.a as usize], partner[e.b as usize]);
            let key = (pa.min(pb), pa.max(pb));
            *plus_edges.entry(key).or_insert(0.0) += e.c;
        }
    }
    if minus_edges.len() != plus_edges.len()
        || minus_edges.iter().any(|(k, c)| {
            plus_edges.get(k).map_or(true, |c2| (c - c2).abs() > 1e-12 * c.abs().max(*c2))
        })
    {
        return Err(SpectraError::NotIsometric("edge structure differs between regions".into()));
    }
    // representative of a plus vertex is its minus partner
    let mut rep: Vec<u32> = (0..n as u32).collect();
    for &(a, b) in phi {
        rep[b as usize] = a;
    }
    let mut map = vec![u32::MAX; n];
    let mut g = DiscreteManifold::default();
    for v in 0..n {
        let r = rep[v] as usize;
        if r == v {
            map[v] = g.push_vertex(base.positions[v], base.kinds[v], base.measures[v]);
        }
    }
    for v in 0..n {
        let r = rep[v] as usize;
        if r != v {
            map[v] = map[r];
            g.measures[map[r] as usize] += base.measures[v];
        }
    }
    let mut merged: HashMap<(u32, u32), f64> = HashMap::new();
    for e in &base.edges {
        let (a, b) = (map[e.a as usize], map[e.b as usize]);
        if a == b {
            continue;
        }
        *merged.entry((a.min(b), a.max(b))).or_insert(0.0) += e.c;
    }
    let mut keys: Vec<(u32, u32)> = merged.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        g.push_edge(k.0, k.1, merged[&k]);
    }
    Ok(LimitModel { kind: LimitKind::Identified, manifold: g, map })
}

/// Configuration of the adhering two-tori experiment.
#[derive(Debug, Clone, Copy)]
pub struct AdheringConfig {
    /// Base grid resolution per torus.
    pub n: u32,
    /// Cover-distance exponent (`eta = eps^alpha * cover_scale`).
    pub alpha: f64,
    /// Length exponent (`ell = eps^lambda`).
    pub lambda: f64,
    /// Desk-scale cover coefficient; the placement spacing is
    /// `s = placement_a * eta`.
    pub cover_scale: f64,
    /// Grid coefficient of the periodic placement (`1/(2 sqrt m)` in the
    /// analysis; desk-scale runs may need a larger value for
    /// `eps`-separation).
    pub placement_a: f64,
    /// Number of eigenvalues to track.
    pub k: usize,
    /// Upper bound on the gluing-ring size (vertex budget control).
    pub ring_cap: usize,
}

/// One assembled adhering case: the wormhole model plus both candidate
/// limits on the same grid.
#[derive(Debug)]
pub struct AdheringCase {
    pub eps: f64,
    pub model: WormholeModel,
    pub identified: LimitModel,
    pub base_pair: LimitModel,
    /// Per-side handle count actually placed.
    pub per_side: u32,
}

/// Builds the two-tori adhering model at one `eps`: periodic placement
/// `I^- = {p in s Z^2}` on the first torus, `I^+` at the identical positions
/// of the second, and one handle per pair.
pub fn build_adhering_case(cfg: &AdheringConfig, eps: f64) -> Result<AdheringCase, SpectraError> {
    let n = cfg.n;
    let h = 1.0 / n as f64;
    let eta = eps.powf(cfg.alpha) * cfg.cover_scale;
    let ell = eps.powf(cfg.lambda);
    let spacing = cfg.placement_a * eta;
    // periodic count per side; keep the actual spacing separated
    let mut count = (1.0 / spacing).round().max(1.0) as u32;
    let max_count = (1.0 / (2.0 * eps + 2.0 * h)).floor().max(1.0) as u32;
    count = count.min(max_count);
    if (1.0 / count as f64) < 2.0 * eps {
        return Err(SpectraError::Separation(1.0 / count as f64, 2.0 * eps));
    }
    let s = 1.0 / count as f64;
    let mut centers = Vec::new();
    for t in 0..2u8 {
        for i in 0..count {
            for j in 0..count {
                centers.push((t, [(i as f64 + 0.5) * s, (j as f64 + 0.5) * s]));
            }
        }
    }
    let base = build_base(BaseKind::TwoTori, n)?;
    let punctured = remove_balls_with_cap(&base, &centers, eps, cfg.ring_cap)?;
    let n_trans = punctured.rings[0].vertices.len();
    let n_handles = (count * count) as usize;
    let pairs: Vec<(usize, usize)> =
        (0..n_handles).map(|i| (i, i + n_handles)).collect();
    let n_long = ((ell / h).round() as u32).max(4);
    let model = attach_handles(&punctured, &pairs, eps, ell, n_long, n_trans)?;
    // limits on the unperturbed two-tori grid
    let phi: Vec<(u32, u32)> = (0..n * n)
        .map(|i| (i, i + n * n))
        .collect();
    let identified = build_identified_limit(&base, &phi)?;
    let base_pair = LimitModel::fading(&base);
    Ok(AdheringCase { eps, model, identified, base_pair, per_side: count })
}

/// Configuration of the fading two-tori experiment: a fixed sparse handle
/// set at explicit centers.
#[derive(Debug, Clone)]
pub struct FadingConfig {
    pub n: u32,
    /// Length exponent (`ell = eps^lambda`).
    pub lambda: f64,
    /// Fixed handle centers (identical on both tori).
    pub centers: Vec<[f64; 2]>,
    pub k: usize,
}

#[derive(Debug)]
pub struct FadingCase {
    pub eps: f64,
    pub model: WormholeModel,
    pub base_pair: LimitModel,
}

/// Builds the fading model at one `eps`: handles between the two tori at
/// the fixed centers.
pub fn build_fading_case(cfg: &FadingConfig, eps: f64) -> Result<FadingCase, SpectraError> {
    let n = cfg.n;
    let h = 1.0 / n as f64;
    let ell = eps.powf(cfg.lambda);
    let mut centers = Vec::new();
    for t in 0..2u8 {
        for &c in &cfg.centers {
            centers.push((t, c));
        }
    }
    let base = build_base(BaseKind::TwoTori, n)?;
    let punctured = remove_balls(&base, &centers, eps)?;
    let n_trans = punctured.rings[0].vertices.len();
    let k = cfg.centers.len();
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (i, i + k)).collect();
    let n_long = ((ell / h).round() as u32).max(4);
    let model = attach_handles(&punctured, &pairs, eps, ell, n_long, n_trans)?;
    let base_pair = LimitModel::fading(&base);
    Ok(FadingCase { eps, model, base_pair })
}

#[cfg(test)]
mod tests {
    use super::super::eigen::eigenvalues;
    use super::*;

    #[test]
    fn base_measure_and_kernel() {
        let g = build_base(BaseKind::Torus, 16).unwrap();
        assert_eq!(g.len(), 256);
        assert!((g.total_measure() - 1.0).abs() < 1e-12);
        let ones = vec![1.0; g.len()];
        assert!(g.energy(&ones) < 1e-30);
        assert!(build_base(BaseKind::Torus, 4).is_err());
    }

    #[test]
    fn remove_balls_identity_and_unresolvable() {
        let g = build_base(BaseKind::Torus, 16).unwrap();
        let p = remove_balls(&g, &[], 0.1).unwrap();
        assert_eq!(p.manifold.len(), g.len());
        // eps below h/2 cannot host a ring
        let err = remove_balls(&g, &[(0, [0.5, 0.5])], 0.02).unwrap_err();
        assert!(matches!(err, SpectraError::Unresolvable { .. }));
        // separation violation
        let err = remove_balls(&g, &[(0, [0.3, 0.3]), (0, [0.4, 0.3])], 0.15).unwrap_err();
        assert!(matches!(err, SpectraError::Separation(..)));
    }

    #[test]
    fn remove_balls_ring_geometry() {
        let g = build_base(BaseKind::Torus, 48).unwrap();
        let p = remove_balls(&g, &[(0, [0.5, 0.5])], 0.12).unwrap();
        let ring = &p.rings[0];
        assert!(ring.vertices.len() >= 8);
        // ring vertices survive and sit near the circle
        for &v in &ring.vertices {
            let d = torus_distance(p.manifold.positions[v as usize], [0.5, 0.5]);
            assert!((d - 0.12).abs() < 1.5 / 48.0, "ring vertex at distance {d}");
        }
        // interior removed: no vertex strictly inside radius eps - 1.5 h
        for pos in &p.manifold.positions {
            assert!(torus_distance(*pos, [0.5, 0.5]) > 0.12 - 1.5 / 48.0 - 1e-12);
        }
        assert!(p.removed_measure > 0.0);
    }

    #[test]
    fn dirichlet_hole_raises_lambda1_by_capacity() {
        // removing one disk as an obstacle (Dirichlet ring) from the
        // Neumann square raises the first eigenvalue above the intact 0,
        // monotonically in the hole size and at the capacity scale
        // ~ 2 pi / |log eps|
        let intact = build_base(BaseKind::RectangleNeumann, 48).unwrap();
        let vals0 = eigenvalues(&intact, 1).unwrap();
        assert!(vals0[0].abs() < 1e-10);
        let mut last = 0.0;
        let mut scaled = Vec::new();
        for &eps in &[0.05, 0.08, 0.12] {
            let punched = remove_balls(&intact, &[(0, [0.5, 0.5])], eps).unwrap();
            let grounded = ground_rings(&punched);
            let vals1 = eigenvalues(&grounded, 1).unwrap();
            assert!(vals1[0] > last, "eps={eps}: {} vs {}", vals1[0], last);
            last = vals1[0];
            scaled.push(vals1[0] * (-eps.ln()));
        }
        // capacity scaling: lambda_1 |log eps| stays within a x1.6 band
        let max = scaled.iter().cloned().fold(f64::MIN, f64::max);
        let min = scaled.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 1.6, "scaled shifts {scaled:?}");
    }

    #[test]
    fn free_hole_lowers_degenerate_lambda1() {
        // with a free (Neumann) hole the square's degenerate first pair
        // rotates a combination to vanish at the hole; the gradient mass
        // removed there lowers lambda_1
        let intact = build_base(BaseKind::RectangleNeumann, 32).unwrap();
        let vals0 = eigenvalues(&intact, 2).unwrap();
        let punched = remove_balls(&intact, &[(0, [0.5, 0.5])], 0.09).unwrap();
        let vals1 = eigenvalues(&punched.manifold, 2).unwrap();
        assert!(vals1[0].abs() < 1e-9);
        assert!(vals1[1] < vals0[1]);
    }

    #[test]
    fn attach_handles_measure_budget() {
        let g = build_base(BaseKind::TwoTori, 32).unwrap();
        let eps = 0.1;
        let ell = 0.1;
        let p = remove_balls(&g, &[(0, [0.5, 0.5]), (1, [0.5, 0.5])], eps).unwrap();
        let n_trans = p.rings[0].vertices.len();
        let model = attach_handles(&p, &[(0, 1)], eps, ell, 4, n_trans).unwrap();
        // total measure = base - removed + cylinder measure (2 pi eps ell)
        let want_cyl = 2.0 * std::f64::consts::PI * eps * ell;
        assert!((model.handle_measure - want_cyl).abs() < 0.05 * want_cyl);
        let total = model.manifold.total_measure();
        let expect = g.total_measure() - p.removed_measure + model.handle_measure;
        assert!((total - expect).abs() < 1e-10);
        // constants extend with zero energy
        let ones = vec![1.0; model.manifold.len()];
        assert!(model.manifold.energy(&ones) < 1e-20);
        // gluing mismatch is rejected
        assert!(attach_handles(&p, &[(0, 1)], eps, ell, 4, n_trans + 1).is_err());
        assert!(attach_handles(&p, &[(0, 1)], eps, ell, 2, n_trans).is_err());
    }

    #[test]
    fn identified_limit_two_tori_is_single_torus() {
        let n = 16u32;
        let two = build_base(BaseKind::TwoTori, n).unwrap();
        let phi: Vec<(u32, u32)> = (0..n * n).map(|i| (i, i + n * n)).collect();
        let q = build_identified_limit(&two, &phi).unwrap();
        assert_eq!(q.manifold.len(), (n * n) as usize);
        // doubled weights leave the spectrum of a single torus unchanged
        let single = build_base(BaseKind::Torus, n).unwrap();
        let a = eigenvalues(&q.manifold, 5).unwrap();
        let b = eigenvalues(&single, 5).unwrap();
        for j in 0..5 {
            assert!((a[j] - b[j]).abs() < 1e-7 * (1.0 + b[j]), "j={j}");
        }
    }

    #[test]
    fn identified_limit_rejects_mismatch() {
        let n = 8u32;
        let mut two = build_base(BaseKind::TwoTori, n).unwrap();
        // break one measure on the plus side
        let idx = (n * n) as usize + 5;
        two.measures[idx] *= 2.0;
        let phi: Vec<(u32, u32)> = (0..n * n).map(|i| (i, i + n * n)).collect();
        assert!(build_identified_limit(&two, &phi).is_err());
    }

    #[test]
    fn half_identification_interlaces() {
        // identifying half of the two tori gives eigenvalues between the
        // disjoint pair and the full quotient (form-domain monotonicity)
        let n = 12u32;
        let two = build_base(BaseKind::TwoTori, n).unwrap();
        let mut phi_half = Vec::new();
        for ix in 0..n / 2 {
            for iy in 0..n {
                let i = base_vertex_id(n, 0, ix, iy);
                phi_half.push((i, i + n * n));
            }
        }
        let half = build_identified_limit(&two, &phi_half).unwrap();
        let phi_full: Vec<(u32, u32)> = (0..n * n).map(|i| (i, i + n * n)).collect();
        let full = build_identified_limit(&two, &phi_full).unwrap();
        let l_two = eigenvalues(&two, 4).unwrap();
        let l_half = eigenvalues(&half.manifold, 4).unwrap();
        let l_full = eigenvalues(&full.manifold, 4).unwrap();
        // identification shrinks the form domain: eigenvalues increase
        for j in 0..4 {
            assert!(l_two[j] <= l_half[j] + 1e-9, "j={j}");
            assert!(l_half[j] <= l_full[j] + 1e-9, "j={j}");
        }
    }

    #[test]
    fn adhering_gap_opening() {
        // the near-degenerate zero pair of the disjoint tori splits: the
        // symmetric branch stays at 0, the antisymmetric partner escapes
        // upward monotonically as eps decreases (denser handles)
        use super::super::eigen::{eigenpairs, EigenOptions};
        use std::collections::HashMap;
        let cfg = AdheringConfig {
            n: 48,
            alpha: 0.5,
            lambda: 1.0,
            cover_scale: 1.0,
            placement_a: 1.6,
            k: 6,
            ring_cap: 10,
        };
        let mut last_escape = 0.0f64;
        for &eps in &[0.24, 0.12, 0.04] {
            let case = build_adhering_case(&cfg, eps).unwrap();
            let g = &case.model.manifold;
            let (vals, vecs) = eigenpairs(g, cfg.k, &EigenOptions::default()).unwrap();
            // swap map: exchange the torus copies, reverse handle layers
            let mut lookup: HashMap<VertexKind, usize> = HashMap::new();
            for (i, k) in g.kinds.iter().enumerate() {
                lookup.insert(*k, i);
            }
            let n_long = g
                .kinds
                .iter()
                .filter_map(|k| match k {
                    VertexKind::Handle { layer, .. } => Some(*layer + 1),
                    _ => None,
                })
                .max()
                .unwrap();
            let swapped = |k: &VertexKind| -> usize {
                let sk = match k {
                    VertexKind::Base { torus, ix, iy } => {
                        VertexKind::Base { torus: 1 - torus, ix: *ix, iy: *iy }
                    }
                    VertexKind::Handle { handle, layer, seg } => {
                        VertexKind::Handle { handle: *handle, layer: n_long - layer, seg: *seg }
                    }
                };
                lookup[&sk]
            };
            // lowest eigenvalue whose eigenvector is swap-antisymmetric
            let mut escape = None;
            for (lam, v) in vals.iter().zip(&vecs) {
                let mut sym = 0.0;
                let mut anti = 0.0;
                for (i, k) in g.kinds.iter().enumerate() {
                    let w = v[swapped(k)];
                    sym += (v[i] - w) * (v[i] - w) * g.measures[i];
                    anti += (v[i] + w) * (v[i] + w) * g.measures[i];
                }
                if anti < sym {
                    escape = Some(*lam);
                    break;
                }
            }
            let escape = escape.expect("an antisymmetric branch inside the window");
            assert!(
                escape > last_escape,
                "eps={eps}: escape {escape} vs previous {last_escape}"
            );
            last_escape = escape;
        }
    }

    #[test]
    fn cylinder_constant_mode() {
        let g = build_cylinder(0.1, 0.5, 8, 12, false).unwrap();
        let vals = eigenvalues(&g, 2).unwrap();
        assert!(vals[0].abs() < 1e-9);
        // second Neumann eigenvalue approaches (pi/ell)^2
        let want = std::f64::consts::PI.powi(2) / 0.25;
        assert!((vals[1] - want).abs() < 0.05 * want);
    }
}
