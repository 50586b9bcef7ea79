//! The "minimum attained twice" condition on a square table of ranks.
//!
//! A triple `(a, b, c)` violates the condition when
//! `w(a,b) < min(w(a,c), w(b,c))`. For symmetric tables every triple
//! passes iff each entry `w(x,y)` is at least the bottleneck value of the
//! path joining `x` and `y` in a maximum spanning tree, and that test is
//! quadratic. Asymmetric or small tables are checked triple by triple.

/// Outcome of a check: total number of violations found (triples for the
/// exhaustive method, pairs for the spanning-tree method) and up to
/// `limit` witness triples.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IsoscelesOutcome {
    pub violations: usize,
    pub witnesses: Vec<(usize, usize, usize)>,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Exhaustive,
    SpanningTree,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::SpanningTree => "spanning-tree",
        }
    }
}

/// Tables at most this large are checked on all ordered triples.
pub const EXHAUSTIVE_LIMIT: usize = 160;

pub fn check(
    n: usize,
    w: &(impl Fn(usize, usize) -> u32 + Sync),
    symmetric: bool,
    limit: usize,
) -> IsoscelesOutcome {
    if n <= EXHAUSTIVE_LIMIT || !symmetric {
        exhaustive(n, w, limit)
    } else {
        spanning_tree(n, w, limit)
    }
}

/// Check every ordered triple, repeats included.
pub fn exhaustive(n: usize, w: &impl Fn(usize, usize) -> u32, limit: usize) -> IsoscelesOutcome {
    let mut out = IsoscelesOutcome::default();
    for a in 0..n {
        for b in 0..n {
            let ab = w(a, b);
            for c in 0..n {
                if ab < w(a, c).min(w(b, c)) {
                    out.violations += 1;
                    if out.witnesses.len() < limit {
                        out.witnesses.push((a, b, c));
                    }
                }
            }
        }
    }
    out
}

/// Quadratic check for symmetric tables.
pub fn spanning_tree(
    n: usize,
    w: &(impl Fn(usize, usize) -> u32 + Sync),
    limit: usize,
) -> IsoscelesOutcome {
    let mut out = IsoscelesOutcome {
        method: Method::SpanningTree,
        ..Default::default()
    };
    // Triples with a repeated entry reduce to w(a,c) <= w(a,a).
    for a in 0..n {
        let aa = w(a, a);
        for c in 0..n {
            if aa < w(a, c) {
                out.violations += 1;
                if out.witnesses.len() < limit {
                    out.witnesses.push((a, a, c));
                }
            }
        }
    }
    if n < 3 {
        return out;
    }
    // Prim, maximum weight.
    let mut in_tree = vec![false; n];
    let mut best = vec![0u32; n];
    let mut link = vec![usize::MAX; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = w(0, v);
        link[v] = 0;
    }
    for _ in 1..n {
        let mut pick = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (pick == usize::MAX || best[v] > best[pick]) {
                pick = v;
            }
        }
        in_tree[pick] = true;
        adj[pick].push(link[pick]);
        adj[link[pick]].push(pick);
        for v in 0..n {
            if !in_tree[v] {
                let x = w(pick, v);
                if x > best[v] {
                    best[v] = x;
                    link[v] = pick;
                }
            }
        }
    }
    use rayon::prelude::*;
    let per_root: Vec<(usize, Vec<(usize, usize, usize)>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            // Bottleneck from x to every vertex, with parents for witnesses.
            let mut bott = vec![u32::MAX; n];
            let mut parent = vec![usize::MAX; n];
            let mut stack = vec![x];
            let mut seen = vec![false; n];
            seen[x] = true;
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        parent[v] = u;
                        bott[v] = bott[u].min(w(u, v));
                        stack.push(v);
                    }
                }
            }
            let mut count = 0;
            let mut wit = Vec::new();
            for y in (x + 1)..n {
                let m = w(x, y);
                if m < bott[y] {
                    count += 1;
                    if wit.len() < limit {
                        wit.push(witness(x, y, m, &parent, w));
                    }
                }
            }
            (count, wit)
        })
        .collect();
    for (c, wit) in per_root {
        out.violations += c;
        for t in wit {
            if out.witnesses.len() < limit {
                out.witnesses.push(t);
            }
        }
    }
    out
}

/// Walk the tree path from `x` to `y` to the first vertex `p_j` with
/// `w(x, p_j) <= m`; then `(x, p_j, p_{j-1})` violates.
fn witness(
    x: usize,
    y: usize,
    m: u32,
    parent: &[usize],
    w: &impl Fn(usize, usize) -> u32,
) -> (usize, usize, usize) {
    let mut path = vec![y];
    let mut u = y;
    while u != x {
        u = parent[u];
        path.push(u);
    }
    path.reverse();
    for j in 2..path.len() {
        if w(x, path[j]) <= m {
            return (x, path[j], path[j - 1]);
        }
    }
    unreachable!("bottleneck above the direct entry implies a violating triple")
}
