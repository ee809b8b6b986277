//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use caterpillar_eh::graph::{Graph, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// AHU encoding of `t` rooted at `root`.
pub fn rooted_code(t: &Graph, root: Vertex, parent: Option<Vertex>) -> String {
    let mut kids: Vec<String> =
        t.neighbour_slice(root).iter().filter(|&&c| Some(c) != parent).map(|&c| rooted_code(t, c, Some(root))).collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn centres(t: &Graph) -> Vec<Vertex> {
    let n = t.n();
    if n <= 2 {
        return (0..n as Vertex).collect();
    }
    let mut deg: Vec<usize> = (0..n as Vertex).map(|v| t.degree(v)).collect();
    let mut layer: Vec<Vertex> = (0..n as Vertex).filter(|&v| deg[v as usize] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in t.neighbour_slice(v) {
                deg[w as usize] -= 1;
                if deg[w as usize] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Canonical form of an unrooted tree.
pub fn canonical(t: &Graph) -> String {
    centres(t).into_iter().map(|c| rooted_code(t, c, None)).min().unwrap_or_default()
}

/// Every unlabelled tree on 1..=max_n vertices, grown one leaf at a time and
/// deduplicated by canonical form.
pub fn all_trees(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut layer = vec![Graph::empty(1)];
    for n in 1..=max_n {
        out.extend(layer.iter().cloned());
        if n == max_n {
            break;
        }
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &layer {
            for v in 0..n as Vertex {
                let mut edges: Vec<_> = t.edges().collect();
                edges.push((v, n as Vertex));
                let g = Graph::from_edges(n + 1, &edges).unwrap();
                if seen.insert(canonical(&g)) {
                    next.push(g);
                }
            }
        }
        layer = next;
    }
    out
}

/// Random graph with about `avg_degree * n / 2` edges.
pub fn sparse_random(n: usize, avg_degree: f64, rng: &mut ChaCha8Rng) -> Graph {
    let target = ((n as f64) * avg_degree / 2.0) as usize;
    let mut set = BTreeSet::new();
    if n >= 2 {
        let cap = n * (n - 1) / 2;
        while set.len() < target.min(cap) {
            let u = rng.gen_range(0..n as Vertex);
            let v = rng.gen_range(0..n as Vertex);
            if u != v {
                set.insert((u.min(v), u.max(v)));
            }
        }
    }
    Graph::from_edges(n, &set.into_iter().collect::<Vec<_>>()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Consecutive identifier ranges of the given sizes. Each range is a cycle,
/// range g is matched to range g+1 vertex by vertex, and random chords are
/// added while every degree stays at most `max_degree`.
pub fn clustered(sizes: &[usize], max_degree: usize, rng: &mut ChaCha8Rng) -> Graph {
    let n: usize = sizes.iter().sum();
    let starts: Vec<usize> = sizes.iter().scan(0, |acc, &s| { let st = *acc; *acc += s; Some(st) }).collect();
    let mut set = BTreeSet::new();
    let mut deg = vec![0usize; n];
    let add = |u: usize, v: usize, set: &mut BTreeSet<(Vertex, Vertex)>, deg: &mut Vec<usize>| {
        if u != v && deg[u] < max_degree && deg[v] < max_degree && set.insert((u.min(v) as Vertex, u.max(v) as Vertex)) {
            deg[u] += 1;
            deg[v] += 1;
        }
    };
    for g in 0..sizes.len() {
        let (s, len) = (starts[g], sizes[g]);
        for k in 0..len {
            if len > 2 || k + 1 < len {
                add(s + k, s + (k + 1) % len, &mut set, &mut deg);
            }
        }
        if g + 1 < sizes.len() {
            for k in 0..len.min(sizes[g + 1]) {
                add(s + k, starts[g + 1] + k, &mut set, &mut deg);
            }
        }
    }
    for _ in 0..n {
        let g = rng.gen_range(0..sizes.len());
        if sizes[g] < 2 {
            continue;
        }
        let u = starts[g] + rng.gen_range(0..sizes[g]);
        let v = starts[g] + rng.gen_range(0..sizes[g]);
        add(u, v, &mut set, &mut deg);
    }
    Graph::from_edges(n, &set.into_iter().collect::<Vec<_>>()).unwrap()
}
