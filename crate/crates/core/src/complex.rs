//! Finite simplicial complexes with exact rational vertices.
//!
//! Cells are strictly increasing vertex-index tuples grouped by dimension
//! and kept closed under taking faces. [`SimplicialComplex::new`] checks
//! geometric validity exactly: affinely independent cells, and every pair
//! of maximal cells meeting in the convex hull of their shared vertices
//! (an exact linear program per pair whose bounding boxes overlap).

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{span_vector, MultiVector};
use crate::lp::{self, LinearProgram};
use crate::rational::{factorial, gram_det, rank, sub_points, Point, Q};

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    dim: usize,
    vertices: Vec<Point>,
    cells: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices && self.cells == other.cells
    }
}
impl Eq for SimplicialComplex {}

/// A vertex tuple in a chosen order; its orientation is the parity of the
/// permutation sorting it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedCell {
    pub vertices: Vec<usize>,
}

impl OrientedCell {
    pub fn new(vertices: Vec<usize>) -> Self {
        OrientedCell { vertices }
    }

    /// Sorted tuple and orientation sign; `None` on a repeated vertex.
    pub fn canonical(&self) -> Option<(Vec<usize>, i8)> {
        permutation_sign(&self.vertices)
    }

    pub fn reversed(&self) -> OrientedCell {
        let mut v = self.vertices.clone();
        if v.len() >= 2 {
            v.swap(0, 1);
        }
        OrientedCell { vertices: v }
    }
}

/// Sorts `v` and returns the parity of the sorting permutation.
pub fn permutation_sign(v: &[usize]) -> Option<(Vec<usize>, i8)> {
    let mut inversions = 0usize;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i] == v[j] {
                return None;
            }
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    let mut s = v.to_vec();
    s.sort_unstable();
    Some((s, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

/// The codimension-one faces of a sorted cell, with the boundary signs
/// `(−1)^i` of the omitted position.
pub fn facets(cell: &[usize]) -> Vec<(Vec<usize>, i8)> {
    (0..cell.len())
        .map(|i| {
            let mut f = cell.to_vec();
            f.remove(i);
            (f, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

fn all_faces(cell: &[usize], out: &mut [BTreeSet<Vec<usize>>]) {
    let k = cell.len();
    for mask in 1u64..(1u64 << k) {
        let face: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| cell[i]).collect();
        out[face.len() - 1].insert(face);
    }
}

impl SimplicialComplex {
    /// Builds and validates the closure of `cells`.
    pub fn new(vertices: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, |v| v.len());
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidComplex("vertices of different dimensions".into()));
        }
        for c in &cells {
            if c.is_empty() {
                return Err(Error::InvalidComplex("empty cell".into()));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::InvalidComplex(format!("vertex index {bad} out of range")));
            }
            if permutation_sign(c).is_none() {
                return Err(Error::InvalidComplex(format!("repeated vertex in cell {c:?}")));
            }
        }
        let k = SimplicialComplex::trusted(dim, vertices, cells);
        k.validate()?;
        Ok(k)
    }

    /// Builds the closure of `cells` without geometric checks; callers
    /// guarantee validity.
    pub fn trusted(dim: usize, vertices: Vec<Point>, cells: Vec<Vec<usize>>) -> Self {
        let top = cells.iter().map(|c| c.len()).max().unwrap_or(0);
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top.max(1)];
        for i in 0..vertices.len() {
            sets[0].insert(vec![i]);
        }
        for c in &cells {
            let mut s = c.clone();
            s.sort_unstable();
            all_faces(&s, &mut sets);
        }
        while sets.len() > 1 && sets.last().is_some_and(|s| s.is_empty()) {
            sets.pop();
        }
        let cells: Vec<Vec<Vec<usize>>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = cells
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
            .collect();
        SimplicialComplex {
            dim,
            vertices,
            cells,
            index,
        }
    }

    pub fn empty(dim: usize) -> Self {
        SimplicialComplex::trusted(dim, Vec::new(), Vec::new())
    }

    pub fn validate(&self) -> Result<()> {
        for layer in &self.cells {
            for c in layer {
                if !self.is_independent(c) {
                    return Err(Error::InvalidComplex(format!("cell {c:?} is degenerate")));
                }
            }
        }
        let maximal = self.maximal_cells();
        let boxes: Vec<(Point, Point)> = maximal.iter().map(|c| self.bounding_box(c)).collect();
        for i in 0..maximal.len() {
            for j in (i + 1)..maximal.len() {
                if !boxes_overlap(&boxes[i], &boxes[j]) {
                    continue;
                }
                if !self.meet_properly(&maximal[i], &maximal[j]) {
                    return Err(Error::InvalidComplex(format!(
                        "cells {:?} and {:?} do not meet in a common face",
                        maximal[i], maximal[j]
                    )));
                }
            }
        }
        Ok(())
    }

    fn bounding_box(&self, c: &[usize]) -> (Point, Point) {
        let mut lo = self.vertices[c[0]].clone();
        let mut hi = lo.clone();
        for &v in &c[1..] {
            for (k, x) in self.vertices[v].iter().enumerate() {
                if *x < lo[k] {
                    lo[k] = x.clone();
                }
                if *x > hi[k] {
                    hi[k] = x.clone();
                }
            }
        }
        (lo, hi)
    }

    pub fn is_independent(&self, cell: &[usize]) -> bool {
        let pts = self.points(cell);
        let edges: Vec<Point> = pts[1..].iter().map(|p| sub_points(p, &pts[0])).collect();
        rank(&edges) == edges.len()
    }

    /// Whether the two simplices intersect exactly in the hull of their
    /// shared vertices.
    pub fn meet_properly(&self, a: &[usize], b: &[usize]) -> bool {
        simplices_meet_properly(&self.points(a), a, &self.points(b), b)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Highest cell dimension, `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        if self.vertices.is_empty() {
            None
        } else {
            Some(self.cells.len() - 1)
        }
    }

    /// Cells of dimension `k` in lexicographic order.
    pub fn cells(&self, k: usize) -> &[Vec<usize>] {
        self.cells.get(k).map_or(&[], |l| l.as_slice())
    }

    pub fn cell_index(&self, cell: &[usize]) -> Option<usize> {
        let k = cell.len().checked_sub(1)?;
        self.index.get(k)?.get(cell).copied()
    }

    pub fn contains(&self, cell: &[usize]) -> bool {
        self.cell_index(cell).is_some()
    }

    pub fn maximal_cells(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (k, layer) in self.cells.iter().enumerate() {
            let above: BTreeSet<Vec<usize>> = self
                .cells
                .get(k + 1)
                .map(|l| l.iter().flat_map(|c| facets(c).into_iter().map(|(f, _)| f)).collect())
                .unwrap_or_default();
            out.extend(layer.iter().filter(|c| !above.contains(*c)).cloned());
        }
        out
    }

    pub fn points(&self, cell: &[usize]) -> Vec<Point> {
        cell.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Orientation multivector of a cell in the given vertex order.
    pub fn span(&self, cell: &[usize]) -> MultiVector {
        span_vector(&self.points(cell)).expect("vertices share one dimension")
    }

    /// Gram determinant of the edge vectors: `(k! · vol_k)²`.
    pub fn gram(&self, cell: &[usize]) -> Q {
        let pts = self.points(cell);
        let edges: Vec<Point> = pts[1..].iter().map(|p| sub_points(p, &pts[0])).collect();
        gram_det(&edges)
    }

    /// Exact squared `k`-volume.
    pub fn volume_sq(&self, cell: &[usize]) -> Q {
        let f = Q::from_integer(factorial(cell.len() - 1));
        self.gram(cell) / (&f * &f)
    }

    /// `(k+1)`-cells having `face` as a facet.
    pub fn cofaces(&self, face: &[usize]) -> Vec<Vec<usize>> {
        self.cells(face.len())
            .iter()
            .filter(|c| face.iter().all(|v| c.contains(v)))
            .cloned()
            .collect()
    }

    /// Replaces every vertex by its image; the caller guarantees that the
    /// map is injective and affine (so validity is preserved).
    pub fn map_vertices(&self, target_dim: usize, f: impl Fn(&Point) -> Point) -> SimplicialComplex {
        SimplicialComplex {
            dim: target_dim,
            vertices: self.vertices.iter().map(f).collect(),
            cells: self.cells.clone(),
            index: self.index.clone(),
        }
    }

    /// Kuhn triangulation of the grid `[0,c₁]×…×[0,c_n]` with unit cubes.
    pub fn kuhn_grid(counts: &[usize]) -> SimplicialComplex {
        let n = counts.len();
        let sizes: Vec<usize> = counts.iter().map(|c| c + 1).collect();
        let total: usize = sizes.iter().product();
        let decode = |mut idx: usize| -> Vec<usize> {
            let mut out = vec![0; n];
            for k in (0..n).rev() {
                out[k] = idx % sizes[k];
                idx /= sizes[k];
            }
            out
        };
        let encode = |c: &[usize]| c.iter().zip(&sizes).fold(0, |acc, (x, s)| acc * s + x);
        let vertices: Vec<Point> = (0..total)
            .map(|i| decode(i).into_iter().map(|x| Q::from_integer(x.into())).collect())
            .collect();
        let mut cells = Vec::new();
        let perms = permutations(n);
        for i in 0..total {
            let corner = decode(i);
            if corner.iter().zip(counts).any(|(x, c)| x >= c) {
                continue;
            }
            for p in &perms {
                let mut cur = corner.clone();
                let mut cell = vec![encode(&cur)];
                for &axis in p {
                    cur[axis] += 1;
                    cell.push(encode(&cur));
                }
                cell.sort_unstable();
                cells.push(cell);
            }
        }
        if n == 0 {
            return SimplicialComplex::trusted(0, vec![Vec::new()], vec![vec![0]]);
        }
        SimplicialComplex::trusted(n, vertices, cells)
    }

    /// Realizes an abstract complex on `num_vertices` vertices with vertex
    /// `i` at the basis vector `eᵢ`; every such realization is valid.
    pub fn from_abstract(num_vertices: usize, cells: Vec<Vec<usize>>) -> Result<SimplicialComplex> {
        for c in &cells {
            if c.iter().any(|&i| i >= num_vertices) || permutation_sign(c).is_none() {
                return Err(Error::InvalidComplex(format!("bad abstract cell {c:?}")));
            }
        }
        let vertices = (0..num_vertices)
            .map(|i| (0..num_vertices).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        Ok(SimplicialComplex::trusted(num_vertices, vertices, cells))
    }
}

fn boxes_overlap(a: &(Point, Point), b: &(Point, Point)) -> bool {
    (0..a.0.len()).all(|k| a.0[k] <= b.1[k] && b.0[k] <= a.1[k])
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Exact test that `conv(pa) ∩ conv(pb) = conv(shared vertices)`, where
/// `ia`, `ib` are vertex labels identifying shared vertices. Maximizes the
/// barycentric weight on non-shared vertices over the intersection.
pub fn simplices_meet_properly(pa: &[Point], ia: &[usize], pb: &[Point], ib: &[usize]) -> bool {
    let n = pa[0].len();
    let na = pa.len();
    let nb = pb.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 0..n {
        let mut row: Vec<Q> = pa.iter().map(|p| p[k].clone()).collect();
        row.extend(pb.iter().map(|p| -p[k].clone()));
        a.push(row);
        b.push(Q::zero());
    }
    let mut ra = vec![Q::one(); na];
    ra.extend(vec![Q::zero(); nb]);
    a.push(ra);
    b.push(Q::one());
    let mut rb = vec![Q::zero(); na];
    rb.extend(vec![Q::one(); nb]);
    a.push(rb);
    b.push(Q::one());
    let mut c: Vec<Q> = ia
        .iter()
        .map(|v| if ib.contains(v) { Q::zero() } else { -Q::one() })
        .collect();
    c.extend(ib.iter().map(|v| if ia.contains(v) { Q::zero() } else { -Q::one() }));
    match lp::solve(&LinearProgram { a, b, c }, 10_000) {
        Err(_) => true,
        Ok(sol) => sol.objective.is_zero(),
    }
}
