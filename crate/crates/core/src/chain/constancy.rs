//! Constancy on oriented combinatorial manifolds.
//!
//! If `∂T` vanishes on the interior faces of a connected, coherently
//! oriented `m`-manifold `M` and `T` is carried by `M`, then `T` is the
//! oriented fundamental chain of `M` times one coefficient. The solver
//! propagates the normalized coefficient `o(c)·T(c)` across interior faces
//! and reports the first face where adjacent values disagree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use super::GChain;
use crate::complex::{facets, SimplicialComplex};
use crate::error::{Error, Result};
use crate::group::{GroupElement, NormedGroup, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstancyOutcome {
    Constant(GroupElement),
    /// An interior face where `∂T` does not vanish.
    Inconsistent { face: Vec<usize> },
}

/// Facet incidences of a pure `m`-dimensional cell set.
struct Manifold {
    cells: Vec<Vec<usize>>,
    /// Each `(m−1)`-face with its cofaces `(cell index, induced sign)`.
    faces: BTreeMap<Vec<usize>, Vec<(usize, i8)>>,
}

impl Manifold {
    fn new(complex: &SimplicialComplex, cells: &[Vec<usize>]) -> Result<Manifold> {
        let Some(first) = cells.first() else {
            return Err(Error::NotConnected);
        };
        let m = first.len() - 1;
        if m == 0 {
            return Err(Error::NotManifold("a manifold of dimension zero".into()));
        }
        let mut sorted = Vec::with_capacity(cells.len());
        let mut seen = BTreeSet::new();
        for c in cells {
            let mut s = c.clone();
            s.sort_unstable();
            if s.len() != m + 1 || !complex.contains(&s) {
                return Err(Error::NotManifold(format!("cell {c:?} is not an {m}-cell of the complex")));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::NotManifold(format!("cell {s:?} listed twice")));
            }
            sorted.push(s);
        }
        let mut faces: BTreeMap<Vec<usize>, Vec<(usize, i8)>> = BTreeMap::new();
        for (i, c) in sorted.iter().enumerate() {
            for (f, s) in facets(c) {
                faces.entry(f).or_default().push((i, s));
            }
        }
        if let Some((f, _)) = faces.iter().find(|(_, v)| v.len() > 2) {
            return Err(Error::NotManifold(format!("face {f:?} lies in more than two cells")));
        }
        Ok(Manifold { cells: sorted, faces })
    }

    fn neighbours(&self) -> Vec<Vec<(usize, &Vec<usize>)>> {
        let mut adj = vec![Vec::new(); self.cells.len()];
        for (f, inc) in &self.faces {
            if let [(a, _), (b, _)] = inc[..] {
                adj[a].push((b, f));
                adj[b].push((a, f));
            }
        }
        adj
    }

    /// Breadth-first order from cell 0; `NotConnected` if some cell is
    /// unreachable.
    fn traversal(&self) -> Result<Vec<(usize, Option<usize>)>> {
        let adj = self.neighbours();
        let mut parent = vec![None; self.cells.len()];
        let mut visited = vec![false; self.cells.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([0]);
        visited[0] = true;
        while let Some(c) = queue.pop_front() {
            order.push((c, parent[c]));
            for &(d, _) in &adj[c] {
                if !visited[d] {
                    visited[d] = true;
                    parent[d] = Some(c);
                    queue.push_back(d);
                }
            }
        }
        if order.len() != self.cells.len() {
            return Err(Error::NotConnected);
        }
        Ok(order)
    }
}

/// Signs making `cells` coherently oriented, relative to the given vertex
/// orders; the first cell keeps the orientation of its sorted vertex order.
pub fn coherent_orientation(complex: &SimplicialComplex, cells: &[Vec<usize>]) -> Result<Vec<i8>> {
    let m = Manifold::new(complex, cells)?;
    let order = m.traversal()?;
    let mut o = vec![0i8; m.cells.len()];
    let sign_in = |cell: usize, face: &[usize]| -> i8 {
        m.faces[face].iter().find(|(c, _)| *c == cell).expect("incident").1
    };
    for (c, parent) in order {
        o[c] = match parent {
            None => 1,
            Some(p) => {
                let face = shared_face(&m.cells[c], &m.cells[p]);
                -o[p] * sign_in(p, &face) * sign_in(c, &face)
            }
        };
    }
    check_coherent(&m, &o)?;
    Ok(o.into_iter().zip(cells).map(|(s, c)| s * sorted_sign(c)).collect())
}

/// `Σ o(c)·[c]·g` over the given oriented cells.
pub fn fundamental_chain(
    complex: &Arc<SimplicialComplex>,
    cells: &[Vec<usize>],
    orientation: &[i8],
    g: &GroupElement,
) -> Result<GChain> {
    if cells.len() != orientation.len() {
        return Err(Error::DimensionMismatch("one sign per cell required".into()));
    }
    let dim = cells.first().map_or(0, |c| c.len() - 1);
    let mut out = GChain::zero(complex.clone(), dim, g.group.clone());
    for (c, &s) in cells.iter().zip(orientation) {
        let v = if s < 0 { g.group.neg(&g.value) } else { g.value.clone() };
        out.add_term(c, v)?;
    }
    Ok(out)
}

/// Finds `g` with `T = [M]·g`, or a face witnessing that `∂T` does not
/// vanish on the interior of `M`.
///
/// `orientation[i]` orients `cells[i]` taken in the given vertex order.
pub fn constancy_solve(t: &GChain, cells: &[Vec<usize>], orientation: &[i8]) -> Result<ConstancyOutcome> {
    if cells.len() != orientation.len() {
        return Err(Error::DimensionMismatch("one sign per cell required".into()));
    }
    let m = Manifold::new(t.complex(), cells)?;
    if m.cells[0].len() != t.dim() + 1 {
        return Err(Error::DegreeError(format!("{}-chain on a {}-manifold", t.dim(), m.cells[0].len() - 1)));
    }
    // Orientation relative to the sorted vertex order.
    let o: Vec<i8> = cells.iter().zip(orientation).map(|(c, &s)| s * sorted_sign(c)).collect();
    check_coherent(&m, &o)?;
    m.traversal()?;
    let members: BTreeSet<&Vec<usize>> = m.cells.iter().collect();
    if let Some((c, _)) = t.terms().find(|(c, _)| !members.contains(c)) {
        return Err(Error::CarrierMismatch(format!("cell {c:?} lies outside the manifold")));
    }
    let group: &NormedGroup = t.group();
    let normalized: Vec<Value> = m
        .cells
        .iter()
        .zip(&o)
        .map(|(c, &s)| {
            let v = t.coefficient(c);
            if s < 0 {
                group.neg(&v)
            } else {
                v
            }
        })
        .collect();
    for (f, inc) in &m.faces {
        if let [(a, _), (b, _)] = inc[..] {
            if normalized[a] != normalized[b] {
                return Ok(ConstancyOutcome::Inconsistent { face: f.clone() });
            }
        }
    }
    Ok(ConstancyOutcome::Constant(GroupElement {
        group: group.clone(),
        value: normalized[0].clone(),
    }))
}

fn check_coherent(m: &Manifold, o: &[i8]) -> Result<()> {
    for (f, inc) in &m.faces {
        if let [(a, sa), (b, sb)] = inc[..] {
            if o[a] * sa != -(o[b] * sb) {
                return Err(Error::IncoherentOrientation(f.clone()));
            }
        }
    }
    Ok(())
}

fn shared_face(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|v| b.contains(v)).collect()
}

fn sorted_sign(c: &[usize]) -> i8 {
    crate::complex::permutation_sign(c).map_or(1, |(_, s)| s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::sign_of;
    use num_bigint::BigInt;

    fn square() -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::kuhn_grid(&[1, 1]))
    }

    #[test]
    fn constant_square() {
        let k = square();
        let cells = k.cells(2).to_vec();
        let o = coherent_orientation(&k, &cells).unwrap();
        let g = GroupElement::cyclic(7, 3).unwrap();
        let t = fundamental_chain(&k, &cells, &o, &g).unwrap();
        assert_eq!(constancy_solve(&t, &cells, &o).unwrap(), ConstancyOutcome::Constant(g.clone()));
        let flipped: Vec<i8> = o.iter().map(|s| -s).collect();
        assert_eq!(constancy_solve(&t, &cells, &flipped).unwrap(), ConstancyOutcome::Constant(g.neg()));
    }

    #[test]
    fn perturbed_square_reports_diagonal() {
        let k = square();
        let cells = k.cells(2).to_vec();
        let o = coherent_orientation(&k, &cells).unwrap();
        let g = GroupElement::int(1);
        let mut t = fundamental_chain(&k, &cells, &o, &g).unwrap();
        t.add_term(&cells[0], Value::Int(BigInt::from(o[0]))).unwrap();
        assert_eq!(
            constancy_solve(&t, &cells, &o).unwrap(),
            ConstancyOutcome::Inconsistent { face: vec![0, 3] }
        );
    }

    #[test]
    fn incoherent_orientation_rejected() {
        let k = square();
        let cells = k.cells(2).to_vec();
        let t = GChain::zero(k.clone(), 2, NormedGroup::Integers);
        assert!(matches!(constancy_solve(&t, &cells, &[1, 1]), Err(Error::IncoherentOrientation(_))));
    }

    #[test]
    fn disconnected_and_branching() {
        let k = Arc::new(SimplicialComplex::kuhn_grid(&[2, 1]));
        let two = k.cells(2);
        let apart = vec![two[0].clone(), two[3].clone()];
        assert!(matches!(coherent_orientation(&k, &apart), Err(Error::NotConnected)));
        // Three triangles on one edge.
        let book = SimplicialComplex::from_abstract(5, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
        let book = Arc::new(book);
        assert!(matches!(coherent_orientation(&book, book.cells(2)), Err(Error::NotManifold(_))));
    }

    #[test]
    fn cube_surface() {
        let k = Arc::new(SimplicialComplex::kuhn_grid(&[1, 1, 1]));
        let mut solid = GChain::zero(k.clone(), 3, NormedGroup::Integers);
        for c in k.cells(3) {
            let s = sign_of(&k.span(c).coefficient(&[0, 1, 2]));
            solid.add_term(c, Value::Int(BigInt::from(s))).unwrap();
        }
        let shell = solid.boundary().unwrap();
        assert_eq!(shell.len(), 12);
        let cells: Vec<Vec<usize>> = shell.terms().map(|(c, _)| c.clone()).collect();
        let o: Vec<i8> = shell.terms().map(|(_, v)| if *v == Value::Int(BigInt::from(1)) { 1 } else { -1 }).collect();
        let g = GroupElement::rational(crate::rational::q(-5, 3));
        let t = shell.rho_scale(&GroupElement::int(1)).unwrap();
        assert_eq!(constancy_solve(&t, &cells, &o).unwrap(), ConstancyOutcome::Constant(GroupElement::int(1)));
        let tg = fundamental_chain(&k, &cells, &o, &g).unwrap();
        assert!(tg.boundary().unwrap().is_zero());
        assert_eq!(constancy_solve(&tg, &cells, &o).unwrap(), ConstancyOutcome::Constant(g));
        assert!(coherent_orientation(&k, &cells).is_ok());
    }
}
