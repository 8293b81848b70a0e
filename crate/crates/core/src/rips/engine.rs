//! Vietoris–Rips persistence in dimensions 0–2.
//!
//! Simplices are ordered by (filtration value, dimension, lexicographic
//! vertex tuple); a simplex's value is the largest pairwise distance among
//! its vertices. H0 comes from union–find over the sorted edges. H1 and H2
//! come from Z/2 column reduction of the boundary matrices, highest
//! dimension first so that every triangle paired in ∂3 is cleared from ∂2.
//!
//! ∂2 additionally skips triangles that cannot own a pivot: a reduced
//! column's pivot is always a still-unpaired positive edge no younger than
//! the triangle's youngest edge, so once every positive edge up to that
//! index is paired the column must reduce to zero. A triangle that is the
//! youngest face of some tetrahedron is cleared without building ∂3.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rips::diagram::{close_unpaired, Feature, PersistenceDiagram};
use crate::rips::distance::DistanceMatrix;

const NONE: u32 = u32::MAX;

/// Persistence diagram of the Rips filtration of `d`, up to dimension
/// `max_dim`, truncated at `max_eps`.
pub fn rips_persistence(
    d: &DistanceMatrix,
    max_dim: usize,
    max_eps: f64,
) -> Result<PersistenceDiagram> {
    check_args(max_dim, max_eps)?;
    let n = d.len();
    if n > (1 << 21) {
        return Err(Error::domain("too many points for vertex-tuple keys"));
    }
    let mut features = Vec::new();

    let edges = Edges::build(d, max_eps);
    let negative_edge = zeroth_homology(n, &edges, &mut features);

    if max_dim >= 1 {
        let triangles = build_triangles(n, &edges);
        let mut cleared = vec![false; triangles.len()];
        let mut h2_unpaired = Vec::new();

        if max_dim >= 2 {
            let tetrahedra = build_tetrahedra(&edges, &triangles);
            reduce_tetrahedra(&triangles, &tetrahedra, &mut cleared, &mut features);
        }

        let zero_columns =
            reduce_triangles(&edges, &triangles, &negative_edge, &cleared, &mut features);

        if max_dim >= 2 {
            for (t, tri) in triangles.iter().enumerate() {
                if zero_columns[t] && !cleared[t] {
                    h2_unpaired.push((2, tri.value));
                }
            }
            close_unpaired(&mut features, h2_unpaired);
        }
    }

    Ok(PersistenceDiagram::new(features, max_eps))
}

pub(crate) fn check_args(max_dim: usize, max_eps: f64) -> Result<()> {
    if max_dim > 2 {
        return Err(Error::domain(format!(
            "max_dim must be 0, 1 or 2, got {max_dim}"
        )));
    }
    if !(max_eps > 0.0) {
        return Err(Error::domain(format!(
            "max_eps must be positive, got {max_eps}"
        )));
    }
    Ok(())
}

struct Edges {
    /// `(value, a, b)` with `a < b`, in filtration order.
    list: Vec<(f64, u32, u32)>,
    /// Filtration index of edge `{a, b}` at `a * n + b` and `b * n + a`.
    index: Vec<u32>,
    /// Neighbours `b > a` of each vertex `a`, ascending.
    up: Vec<Vec<u32>>,
    /// `(edge, neighbour)` of each vertex in filtration order.
    incident: Vec<Vec<(u32, u32)>>,
    n: usize,
}

impl Edges {
    fn build(d: &DistanceMatrix, max_eps: f64) -> Self {
        let n = d.len();
        let mut list = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = d.get(a, b);
                if v <= max_eps {
                    list.push((v, a as u32, b as u32));
                }
            }
        }
        list.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        let mut index = vec![NONE; n * n];
        let mut up = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (e, &(_, a, b)) in list.iter().enumerate() {
            index[a as usize * n + b as usize] = e as u32;
            index[b as usize * n + a as usize] = e as u32;
            up[a as usize].push(b);
            incident[a as usize].push((e as u32, b));
            incident[b as usize].push((e as u32, a));
        }
        up.iter_mut().for_each(|u| u.sort_unstable());
        Self {
            list,
            index,
            up,
            incident,
            n,
        }
    }

    #[inline]
    fn id(&self, a: u32, b: u32) -> u32 {
        self.index[a as usize * self.n + b as usize]
    }

    #[inline]
    fn value(&self, e: u32) -> f64 {
        self.list[e as usize].0
    }
}

/// Union–find over the sorted edges. Returns which edges merge components.
fn zeroth_homology(n: usize, edges: &Edges, features: &mut Vec<Feature>) -> Vec<bool> {
    let mut uf = UnionFind::new(n);
    let mut negative = vec![false; edges.list.len()];
    for (e, &(v, a, b)) in edges.list.iter().enumerate() {
        if uf.union(a as usize, b as usize) {
            negative[e] = true;
            if v > 0.0 {
                features.push(Feature::finite(0, 0.0, v));
            }
        }
    }
    let components = (0..n).filter(|&i| uf.find(i) == i).count();
    close_unpaired(features, std::iter::repeat_n((0, 0.0), components));
    negative
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// True when `a` and `b` were in different components.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

struct Triangle {
    value: f64,
    v: [u32; 3],
}

/// True when some tetrahedron has `tri` as its youngest face.
///
/// Such a tetrahedron's ∂3 column either claims `tri` as its pivot or
/// finds it already claimed, so `tri` is cleared from ∂2 either way.
fn is_youngest_face(edges: &Edges, tri: &Triangle) -> bool {
    let [a, b, c] = tri.v;
    let v = tri.value;
    let precedes = |value: f64, mut f: [u32; 3]| {
        f.sort_unstable();
        value < v || (value == v && f < tri.v)
    };
    let ab = edges.value(edges.id(a, b));
    let ac = edges.value(edges.id(a, c));
    let bc = edges.value(edges.id(b, c));
    for &(ad, d) in &edges.incident[a as usize] {
        let ad = edges.value(ad);
        if ad > v {
            break;
        }
        if d == b || d == c {
            continue;
        }
        let (bd, cd) = (edges.id(b, d), edges.id(c, d));
        if bd == NONE || cd == NONE {
            continue;
        }
        let (bd, cd) = (edges.value(bd), edges.value(cd));
        if bd > v || cd > v {
            continue;
        }
        if precedes(ab.max(ad).max(bd), [a, b, d])
            && precedes(ac.max(ad).max(cd), [a, c, d])
            && precedes(bc.max(bd).max(cd), [b, c, d])
        {
            return true;
        }
    }
    false
}

fn build_triangles(n: usize, edges: &Edges) -> Vec<Triangle> {
    let mut out = Vec::new();
    for a in 0..n as u32 {
        let up_a = &edges.up[a as usize];
        for (i, &b) in up_a.iter().enumerate() {
            let ab = edges.value(edges.id(a, b));
            for &c in &up_a[i + 1..] {
                let bc = edges.id(b, c);
                if bc == NONE {
                    continue;
                }
                let value = ab.max(edges.value(edges.id(a, c))).max(edges.value(bc));
                out.push(Triangle {
                    value,
                    v: [a, b, c],
                });
            }
        }
    }
    out.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.v.cmp(&y.v)));
    out
}

struct Tetrahedron {
    value: f64,
    v: [u32; 4],
}

fn tri_key(v: [u32; 3]) -> u64 {
    (v[0] as u64) << 42 | (v[1] as u64) << 21 | v[2] as u64
}

fn build_tetrahedra(edges: &Edges, triangles: &[Triangle]) -> Vec<Tetrahedron> {
    let mut out = Vec::new();
    for t in triangles {
        let [a, b, c] = t.v;
        for &x in &edges.up[c as usize] {
            let (ax, bx) = (edges.id(a, x), edges.id(b, x));
            if ax == NONE || bx == NONE {
                continue;
            }
            let value = t
                .value
                .max(edges.value(ax))
                .max(edges.value(bx))
                .max(edges.value(edges.id(c, x)));
            out.push(Tetrahedron {
                value,
                v: [a, b, c, x],
            });
        }
    }
    out.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.v.cmp(&y.v)));
    out
}

/// Reduced columns keyed by pivot row.
struct PivotStore {
    columns: Vec<Vec<u32>>,
    scratch: Vec<u32>,
}

impl PivotStore {
    fn new(rows: usize) -> Self {
        Self {
            columns: vec![Vec::new(); rows],
            scratch: Vec::new(),
        }
    }

    /// Reduce `col` (sorted ascending) against stored columns. On a new
    /// pivot the column is stored and the pivot returned.
    fn reduce(&mut self, col: &mut Vec<u32>) -> Option<u32> {
        while let Some(&pivot) = col.last() {
            let other = &self.columns[pivot as usize];
            if other.is_empty() {
                self.columns[pivot as usize] = col.clone();
                return Some(pivot);
            }
            symmetric_difference(col, other, &mut self.scratch);
            std::mem::swap(col, &mut self.scratch);
        }
        None
    }
}

fn symmetric_difference(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

fn reduce_tetrahedra(
    triangles: &[Triangle],
    tetrahedra: &[Tetrahedron],
    cleared: &mut [bool],
    features: &mut Vec<Feature>,
) {
    let index: HashMap<u64, u32> = triangles
        .iter()
        .enumerate()
        .map(|(i, t)| (tri_key(t.v), i as u32))
        .collect();
    let mut store = PivotStore::new(triangles.len());
    let mut col = Vec::with_capacity(4);
    for tet in tetrahedra {
        let [a, b, c, x] = tet.v;
        col.clear();
        for face in [[b, c, x], [a, c, x], [a, b, x], [a, b, c]] {
            col.push(index[&tri_key(face)]);
        }
        col.sort_unstable();
        if let Some(pivot) = store.reduce(&mut col) {
            cleared[pivot as usize] = true;
            let birth = triangles[pivot as usize].value;
            if birth < tet.value {
                features.push(Feature::finite(2, birth, tet.value));
            }
        }
    }
}

/// Reduce ∂2 and record H1 pairs. Returns which triangle columns are zero
/// after reduction (cleared, skipped or reduced away).
fn reduce_triangles(
    edges: &Edges,
    triangles: &[Triangle],
    negative_edge: &[bool],
    cleared: &[bool],
    features: &mut Vec<Feature>,
) -> Vec<bool> {
    let positive: Vec<u32> = (0..edges.list.len() as u32)
        .filter(|&e| !negative_edge[e as usize])
        .collect();
    let mut paired = vec![false; edges.list.len()];
    // index into `positive` of the oldest positive edge not yet paired
    let mut oldest_unpaired = 0;

    let mut store = PivotStore::new(edges.list.len());
    let mut zero = vec![true; triangles.len()];
    let mut col = Vec::with_capacity(3);
    for (t, tri) in triangles.iter().enumerate() {
        if cleared[t] {
            continue;
        }
        while oldest_unpaired < positive.len() && paired[positive[oldest_unpaired] as usize] {
            oldest_unpaired += 1;
        }
        let [a, b, c] = tri.v;
        col.clear();
        col.extend_from_slice(&[edges.id(a, b), edges.id(a, c), edges.id(b, c)]);
        col.sort_unstable();
        match positive.get(oldest_unpaired) {
            Some(&e) if e <= col[2] => {}
            _ => continue,
        }
        if is_youngest_face(edges, tri) {
            continue;
        }
        if let Some(pivot) = store.reduce(&mut col) {
            zero[t] = false;
            paired[pivot as usize] = true;
            let birth = edges.value(pivot);
            if birth < tri.value {
                features.push(Feature::finite(1, birth, tri.value));
            }
        }
    }
    let survivors = positive
        .iter()
        .filter(|&&e| !paired[e as usize])
        .map(|&e| (1, edges.value(e)));
    close_unpaired(features, survivors);
    zero
}
