//! Turning a realized butterfly into an induced copy of T.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pieces::Spire;
use super::realization::{check_realization, Realization};
use super::EngineError;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::mass::MassProvider;
use crate::ratio::{from_usize, Rational};
use crate::trees::{butterfly, fit_tau, CaterpillarTree, NodeId, Nursery};

/// The induced subgraph H assembled from a realized butterfly: a spine path
/// p_{v_0}, ..., p_{v_τ} with a τ-vertex leg P_u starting at p_v for every
/// butterfly leaf u attached to v.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HostSubgraph {
    pub spine: Vec<Vertex>,
    /// Each leg starts with its spine vertex.
    pub legs: Vec<Vec<Vertex>>,
}

impl HostSubgraph {
    /// Distinct vertices of H in ascending order.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.spine.iter().chain(self.legs.iter().flatten()).copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Finds T inside the butterfly component of `r`, returning the image of
/// each tree vertex together with the host subgraph it was found in.
pub fn extract_copy(
    g: &Graph,
    m: &MassProvider,
    r: &Realization,
    t: &CaterpillarTree,
) -> Result<(Vec<Vertex>, HostSubgraph), EngineError> {
    let nursery = &r.nursery;
    let tau = nursery.tau();
    if fit_tau(t.graph())? > tau {
        return Err(EngineError::Precondition(format!("tau = {tau} does not fit the target tree")));
    }
    if r.kappa <= Rational::from_integer(0.into()) {
        return Err(EngineError::Precondition("kappa must be positive".into()));
    }
    let report = check_realization(g, m, r);
    if !report.is_valid() {
        return Err(EngineError::Precondition(format!("invalid realization: {}", report.summary())));
    }
    let idx = nursery
        .butterfly_index()
        .ok_or_else(|| EngineError::Precondition("no component is the butterfly".into()))?;
    let comp = &nursery.components()[idx];
    let (chrysalis, nodes) = comp.to_chrysalis(tau);
    let node = |v: Vertex| nodes[v as usize];

    let mut p: BTreeMap<NodeId, Vertex> = BTreeMap::new();
    let spine_nodes: Vec<NodeId> = chrysalis.spine().iter().map(|&v| node(v)).collect();
    let mut prev = r.set(spine_nodes[0]).first().expect("head set is nonempty");
    p.insert(spine_nodes[0], prev);
    for &v in &spine_nodes[1..] {
        let x = r.set(v);
        let next = g
            .neighbour_slice(prev)
            .iter()
            .copied()
            .find(|&w| x.contains(w))
            .ok_or_else(|| EngineError::TheoremViolation(format!("X_{v} does not cover p = {prev}")))?;
        p.insert(v, next);
        prev = next;
    }
    let spine: Vec<Vertex> = spine_nodes.iter().map(|v| p[v]).collect();

    let mut legs = Vec::new();
    for u in comp.leaves() {
        let v = comp.parent(u).expect("a leaf has a parent");
        let spire = &r.spires[&u];
        legs.push(leg(g, p[&v], spire, tau)?);
    }
    let host = HostSubgraph { spine, legs };

    let vertices = host.vertices();
    let local: BTreeMap<Vertex, Vertex> = vertices.iter().enumerate().map(|(i, &v)| (v, i as Vertex)).collect();
    let edges: Vec<_> = g
        .edges()
        .filter(|(a, b)| local.contains_key(a) && local.contains_key(b))
        .map(|(a, b)| (local[&a], local[&b]))
        .collect();
    let h = Graph::from_edges(vertices.len(), &edges)?;
    let found = find_induced_in(&h, t.graph())
        .ok_or_else(|| EngineError::TheoremViolation("target tree not found in the host subgraph".into()))?;
    Ok((found.into_iter().map(|i| vertices[i as usize]).collect(), host))
}

/// The induced path P_u: p_v, then a shortest route through Z_u to x^τ,
/// then back along the spire path, cut to τ vertices.
fn leg(g: &Graph, start: Vertex, spire: &Spire, tau: usize) -> Result<Vec<Vertex>, EngineError> {
    let target = spire.xs[tau - 1];
    let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    parent.insert(start, start);
    while let Some(u) = queue.pop_front() {
        if u == target {
            break;
        }
        for &w in g.neighbour_slice(u) {
            if spire.z.contains(w) && !parent.contains_key(&w) {
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    if !parent.contains_key(&target) {
        return Err(EngineError::TheoremViolation(format!("x_tau = {target} unreachable from {start} through Z")));
    }
    let mut path = vec![target];
    let mut cur = target;
    while cur != start {
        cur = parent[&cur];
        path.push(cur);
    }
    path.reverse();
    path.extend(spire.xs[..tau - 1].iter().rev());
    path.truncate(tau);
    Ok(path)
}

/// Induced embedding of the tree `t` into `host`, searching tree vertices in
/// breadth-first order and drawing each candidate from the neighbours of its
/// parent's image.
pub fn find_induced_in(host: &Graph, t: &Graph) -> Option<Vec<Vertex>> {
    let k = t.n();
    if k == 0 {
        return Some(Vec::new());
    }
    if k > host.n() {
        return None;
    }
    let mut order = vec![0 as Vertex];
    let mut parent = vec![None; k];
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &w in t.neighbour_slice(u) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = Some(u);
                order.push(w);
            }
        }
    }
    if order.len() != k {
        return None;
    }
    let mut image: Vec<Option<Vertex>> = vec![None; k];
    let mut used = vec![false; host.n()];
    fn place(
        depth: usize,
        order: &[Vertex],
        parent: &[Option<Vertex>],
        host: &Graph,
        t: &Graph,
        image: &mut [Option<Vertex>],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let tv = order[depth];
        let candidates: Vec<Vertex> = match parent[tv as usize] {
            None => (0..host.n() as Vertex).collect(),
            Some(pv) => host.neighbour_slice(image[pv as usize].unwrap()).to_vec(),
        };
        for c in candidates {
            if used[c as usize] || host.degree(c) < t.degree(tv) {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&w| host.has_edge(c, image[w as usize].unwrap()) == t.has_edge(tv, w));
            if !consistent {
                continue;
            }
            image[tv as usize] = Some(c);
            used[c as usize] = true;
            if place(depth + 1, order, parent, host, t, image, used) {
                return true;
            }
            image[tv as usize] = None;
            used[c as usize] = false;
        }
        false
    }
    if place(0, &order, &parent, host, t, &mut image, &mut used) {
        Some(image.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}

/// A host graph built around a τ-butterfly realization, for exercising
/// extraction without running the whole engine.
#[derive(Clone, Debug)]
pub struct SyntheticButterfly {
    pub graph: Graph,
    pub mass: MassProvider,
    pub realization: Realization,
}

/// Spine vertex v_i gets s_i (s_0..s_τ a path) plus `extras` vertices
/// adjacent to s_{i+1} and to the connector of every leaf at v_i. Leaf u at v
/// gets a connector c_u adjacent to s_v and x^τ_u, the spire path
/// x^1_u..x^τ_u, and `extras` further Z vertices hung off random Z vertices.
/// Identifiers are shuffled with `seed`.
pub fn synthetic_butterfly(tau: usize, extras: usize, seed: u64) -> Result<SyntheticButterfly, EngineError> {
    let b = butterfly(tau)?;
    let nursery = Nursery::from_chrysalis(&b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next: Vertex = 0;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut edges = Vec::new();
    let mut classes: BTreeMap<NodeId, Vec<Vertex>> = BTreeMap::new();
    let mut raw_spires: BTreeMap<NodeId, (Vec<Vertex>, Vec<Vertex>)> = BTreeMap::new();

    let spine: Vec<Vertex> = b.spine().to_vec();
    let s: Vec<Vertex> = spine.iter().map(|_| fresh()).collect();
    for w in s.windows(2) {
        edges.push((w[0], w[1]));
    }
    let mut connectors: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for u in 0..b.vertex_count() as Vertex {
        if spine.contains(&u) {
            continue;
        }
        let v = b.parent(u).unwrap();
        let pos = spine.iter().position(|&x| x == v).unwrap();
        let c = fresh();
        let xs: Vec<Vertex> = (0..tau).map(|_| fresh()).collect();
        edges.push((s[pos], c));
        edges.push((c, xs[tau - 1]));
        for w in xs.windows(2) {
            edges.push((w[0], w[1]));
        }
        let mut z = vec![c, xs[tau - 1]];
        for _ in 0..extras {
            let e = fresh();
            let anchor = z[rng.gen_range(0..z.len())];
            edges.push((anchor, e));
            z.push(e);
        }
        connectors.entry(v).or_default().push(c);
        let mut class = xs.clone();
        class.extend(z.iter().copied().filter(|&w| w != xs[tau - 1]));
        classes.insert(NodeId(u), class);
        raw_spires.insert(NodeId(u), (xs, z));
    }
    for (pos, &v) in spine.iter().enumerate() {
        let mut class = vec![s[pos]];
        for _ in 0..extras {
            let e = fresh();
            if pos + 1 < s.len() {
                edges.push((e, s[pos + 1]));
            }
            for &c in connectors.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                edges.push((e, c));
            }
            if pos == 0 && s.len() > 1 {
                // keep the head class itself connected to the spine
                edges.push((e, s[0]));
            }
            class.push(e);
        }
        classes.insert(NodeId(v), class);
    }
    let n = next as usize;
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    for k in (1..n).rev() {
        perm.swap(k, rng.gen_range(0..=k));
    }
    let map = |v: Vertex| perm[v as usize];
    let graph = Graph::from_edges(n, &edges.iter().map(|&(a, b)| (map(a), map(b))).collect::<Vec<_>>())?;
    let assignment = classes
        .into_iter()
        .map(|(k, vs)| (k, VertexSet::from_iter(n, vs.into_iter().map(map))))
        .collect();
    let spires = raw_spires
        .into_iter()
        .map(|(k, (xs, z))| {
            (k, Spire { xs: xs.into_iter().map(map).collect(), z: VertexSet::from_iter(n, z.into_iter().map(map)) })
        })
        .collect();
    let mass = MassProvider::cardinality(n);
    let realization = Realization { nursery, assignment, spires, kappa: from_usize(1) / from_usize(n) };
    Ok(SyntheticButterfly { graph, mass, realization })
}
