//! Canonical labelling of small incidence structures.
//!
//! A structure is a vertex set `0..n` together with labelled blocks of two or
//! three vertices. Linear 3-graphs are blocks of size three with one label;
//! colored link graphs are blocks of size two labelled by color. The labelling
//! is found by equitable refinement followed by individualisation, keeping the
//! lexicographically least relabelled block list. Automorphisms discovered at
//! the leaves prune equivalent branches.

use crate::graph::{LinearThreeGraph, Triple};

/// Isomorphism-invariant encoding; equal codes iff the structures are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    fn from_keys(n: usize, keys: &[u64]) -> Self {
        let mut bytes = Vec::with_capacity(8 + 8 * keys.len());
        bytes.extend_from_slice(&(n as u32).to_be_bytes());
        bytes.extend_from_slice(&(keys.len() as u32).to_be_bytes());
        for k in keys {
            bytes.extend_from_slice(&k.to_be_bytes());
        }
        CanonicalCode(bytes)
    }
}

const ABSENT: usize = 0xFFFF;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub label: u8,
    verts: [usize; 3],
    len: usize,
}

impl Block {
    pub fn pair(label: u8, u: usize, v: usize) -> Self {
        Block {
            label,
            verts: [u, v, ABSENT],
            len: 2,
        }
    }

    pub fn triple(label: u8, t: &Triple) -> Self {
        Block {
            label,
            verts: t.vertices(),
            len: 3,
        }
    }

    fn members(&self) -> &[usize] {
        &self.verts[..self.len]
    }

    fn key(&self, labeling: &[usize]) -> u64 {
        let mut v = [ABSENT; 3];
        for (slot, &x) in v.iter_mut().zip(self.members()) {
            *slot = labeling[x];
        }
        v.sort_unstable();
        (self.label as u64) << 48 | (v[0] as u64) << 32 | (v[1] as u64) << 16 | v[2] as u64
    }
}

#[derive(Debug, Clone)]
pub struct Canonical {
    /// `labeling[v]` is the canonical position of vertex `v`.
    pub labeling: Vec<usize>,
    pub code: CanonicalCode,
}

impl Canonical {
    /// Inverse of `labeling`: the vertex sitting at each canonical position.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.labeling.len()];
        for (v, &p) in self.labeling.iter().enumerate() {
            inv[p] = v;
        }
        inv
    }
}

/// Canonical form of `n` vertices with the given blocks. `colors`, when given,
/// is an initial vertex coloring that isomorphisms must preserve.
pub fn canonical_form(n: usize, blocks: &[Block], colors: Option<&[u32]>) -> Canonical {
    let mut incident = vec![Vec::new(); n];
    for (i, b) in blocks.iter().enumerate() {
        for &v in b.members() {
            incident[v].push(i);
        }
    }
    let cells = match colors {
        None if n == 0 => Vec::new(),
        None => vec![(0..n).collect()],
        Some(colors) => {
            let mut distinct: Vec<u32> = colors.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            distinct
                .iter()
                .map(|c| (0..n).filter(|&v| colors[v] == *c).collect())
                .collect()
        }
    };
    let mut search = Search {
        n,
        blocks,
        incident,
        first: None,
        best: None,
        autos: Vec::new(),
        path: Vec::new(),
    };
    search.descend(cells);
    let best = search.best.expect("search always reaches a leaf");
    Canonical {
        code: CanonicalCode::from_keys(n, &best.keys),
        labeling: best.labeling,
    }
}

pub fn graph_canonical(h: &LinearThreeGraph) -> Canonical {
    let blocks: Vec<Block> = h.edges().map(|t| Block::triple(0, t)).collect();
    canonical_form(h.n(), &blocks, None)
}

/// Canonical form of `h` with one distinguished edge.
pub fn graph_canonical_marked(h: &LinearThreeGraph, marked: &Triple) -> Canonical {
    let blocks: Vec<Block> = h
        .edges()
        .map(|t| Block::triple(u8::from(t == marked), t))
        .collect();
    canonical_form(h.n(), &blocks, None)
}

struct Leaf {
    path: Vec<usize>,
    labeling: Vec<usize>,
    keys: Vec<u64>,
}

struct Search<'a> {
    n: usize,
    blocks: &'a [Block],
    incident: Vec<Vec<usize>>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
    path: Vec<usize>,
}

const MAX_STORED_AUTOMORPHISMS: usize = 128;

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    /// Split cells by the multiset of (label, cells of co-members) until stable.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let mut cell_of = vec![0usize; self.n];
        loop {
            for (i, cell) in cells.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = i;
                }
            }
            let mut changed = false;
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells {
                if cell.len() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut keyed: Vec<(Vec<u64>, usize)> = cell
                    .iter()
                    .map(|&v| (self.signature(v, &cell_of), v))
                    .collect();
                keyed.sort_unstable();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                        start = i;
                    }
                }
                changed |= keyed.first().map(|f| f.0 != keyed[keyed.len() - 1].0) == Some(true);
            }
            cells = next;
            if !changed {
                return cells;
            }
        }
    }

    fn signature(&self, v: usize, cell_of: &[usize]) -> Vec<u64> {
        let mut sig: Vec<u64> = self.incident[v]
            .iter()
            .map(|&bi| {
                let b = &self.blocks[bi];
                let mut others = [ABSENT; 2];
                let mut k = 0;
                for &u in b.members() {
                    if u != v {
                        others[k] = cell_of[u];
                        k += 1;
                    }
                }
                others.sort_unstable();
                (b.label as u64) << 40 | (others[0] as u64) << 20 | others[1] as u64
            })
            .collect();
        sig.sort_unstable();
        sig
    }

    /// Returns `Some(depth)` when the caller should unwind to that depth.
    fn descend(&mut self, cells: Vec<Vec<usize>>) -> Option<usize> {
        let cells = self.refine(cells);
        let depth = self.path.len();
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(&cells);
        };
        let mut members = cells[target].clone();
        members.sort_unstable();
        let mut tried: Vec<usize> = Vec::new();
        for &w in &members {
            if self.equivalent_to_tried(w, &tried) {
                continue;
            }
            tried.push(w);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend(cells[..target].iter().cloned());
            child.push(vec![w]);
            child.push(cells[target].iter().copied().filter(|&u| u != w).collect());
            child.extend(cells[target + 1..].iter().cloned());
            self.path.push(w);
            let jump = self.descend(child);
            self.path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    /// Orbit test under the stored automorphisms that fix the current path.
    fn equivalent_to_tried(&self, w: usize, tried: &[usize]) -> bool {
        if tried.is_empty() || self.autos.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for sigma in &self.autos {
            if self.path.iter().any(|&v| sigma[v] != v) {
                continue;
            }
            for (v, &img) in sigma.iter().enumerate() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, img));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let root = find(&mut parent, w);
        tried.iter().any(|&u| find(&mut parent, u) == root)
    }

    fn leaf(&mut self, cells: &[Vec<usize>]) -> Option<usize> {
        let mut labeling = vec![0; self.n];
        for (i, cell) in cells.iter().enumerate() {
            labeling[cell[0]] = i;
        }
        let mut keys: Vec<u64> = self.blocks.iter().map(|b| b.key(&labeling)).collect();
        keys.sort_unstable();
        let leaf = Leaf {
            path: self.path.clone(),
            labeling,
            keys,
        };

        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                path: leaf.path.clone(),
                labeling: leaf.labeling.clone(),
                keys: leaf.keys.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if leaf.keys == first.keys {
            let jump = common_prefix(&leaf.path, &first.path);
            let sigma = automorphism(&first.labeling, &leaf.labeling);
            self.store(sigma);
            return Some(jump);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.keys.cmp(&best.keys) {
            std::cmp::Ordering::Equal => {
                let jump = common_prefix(&leaf.path, &best.path);
                let sigma = automorphism(&best.labeling, &leaf.labeling);
                self.store(sigma);
                Some(jump)
            }
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            std::cmp::Ordering::Greater => None,
        }
    }

    fn store(&mut self, sigma: Vec<usize>) {
        if self.autos.len() < MAX_STORED_AUTOMORPHISMS
            && sigma.iter().enumerate().any(|(v, &s)| v != s)
        {
            self.autos.push(sigma);
        }
    }
}

/// `lab1^{-1} ∘ lab2`, an automorphism whenever both labellings give the same code.
fn automorphism(lab1: &[usize], lab2: &[usize]) -> Vec<usize> {
    let mut inv1 = vec![0; lab1.len()];
    for (v, &p) in lab1.iter().enumerate() {
        inv1[p] = v;
    }
    lab2.iter().map(|&p| inv1[p]).collect()
}
