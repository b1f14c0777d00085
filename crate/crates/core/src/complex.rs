//! Oriented simplicial pre-complexes of closed 3- and 4-manifolds.
//!
//! A complex is stored as a list of top simplices over *lifted* vertex labels
//! `(vertex, copy)`, together with the deck group acting on copies. Lower cells
//! are orbits of lifted vertex sets, so a quotient top simplex may contain the
//! same quotient cell several times (pre-complex semantics), while top
//! simplices themselves are always identified by slot.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of the universal cover: quotient vertex plus deck-group copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lift {
    pub vertex: usize,
    pub copy: i64,
}

impl Lift {
    pub fn new(vertex: usize, copy: i64) -> Self {
        Lift { vertex, copy }
    }

    pub fn base(vertex: usize) -> Self {
        Lift { vertex, copy: 0 }
    }
}

/// Combinatorial deck group acting on lift copies by `copy -> copy + g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeckGroup {
    Trivial,
    Cyclic(u32),
    Infinite,
}

/// Canonical representative of the orbit of a lifted vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub key: Vec<Lift>,
    /// Shift `g` with `sorted(labels + g) == key`.
    pub shift: i64,
    /// Number of group elements mapping the set onto itself.
    pub stabilizer: usize,
}

impl DeckGroup {
    pub fn order(&self) -> Option<u32> {
        match self {
            DeckGroup::Trivial => Some(1),
            DeckGroup::Cyclic(p) => Some(*p),
            DeckGroup::Infinite => None,
        }
    }

    pub fn normalize(&self, copy: i64) -> i64 {
        match self {
            DeckGroup::Trivial => 0,
            DeckGroup::Cyclic(p) => copy.rem_euclid(*p as i64),
            DeckGroup::Infinite => copy,
        }
    }

    pub fn shift(&self, l: Lift, g: i64) -> Lift {
        Lift::new(l.vertex, self.normalize(l.copy + g))
    }

    pub fn shift_all(&self, labels: &[Lift], g: i64) -> Vec<Lift> {
        labels.iter().map(|&l| self.shift(l, g)).collect()
    }

    pub fn canonical(&self, labels: &[Lift]) -> Canonical {
        match self {
            DeckGroup::Trivial => {
                let mut key = labels.to_vec();
                key.sort();
                Canonical {
                    key,
                    shift: 0,
                    stabilizer: 1,
                }
            }
            DeckGroup::Infinite => {
                let g = -labels.iter().map(|l| l.copy).min().unwrap_or(0);
                let mut key = self.shift_all(labels, g);
                key.sort();
                Canonical {
                    key,
                    shift: g,
                    stabilizer: 1,
                }
            }
            DeckGroup::Cyclic(p) => {
                let mut best: Option<(Vec<Lift>, i64)> = None;
                let mut ties = 0;
                for g in 0..*p as i64 {
                    let mut cand = self.shift_all(labels, g);
                    cand.sort();
                    match &best {
                        Some((b, _)) if *b < cand => {}
                        Some((b, _)) if *b == cand => ties += 1,
                        _ => {
                            best = Some((cand, g));
                            ties = 1;
                        }
                    }
                }
                let (key, shift) = best.expect("cyclic group of order zero");
                Canonical {
                    key,
                    shift,
                    stabilizer: ties,
                }
            }
        }
    }
}

/// Dimension plus dense index of a cell slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId {
    pub dim: usize,
    pub index: usize,
}

impl CellId {
    pub fn new(dim: usize, index: usize) -> Self {
        CellId { dim, index }
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}:{}", self.dim, self.index)
    }
}

/// Ordered top simplex with its orientation sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Top {
    pub lifts: Vec<Lift>,
    pub orientation: i8,
}

impl Top {
    pub fn new(lifts: Vec<Lift>, orientation: i8) -> Self {
        Top { lifts, orientation }
    }
}

/// Where a local face of a top simplex lands among the cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceRef {
    pub index: usize,
    pub shift: i64,
}

/// One occurrence of a cell inside a top simplex, as a mask of local positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Incidence {
    pub top: usize,
    pub mask: u32,
}

/// Oriented closed pseudo-manifold with full incidence tables.
#[derive(Clone, Debug)]
pub struct SimplicialPreComplex {
    dim: usize,
    group: DeckGroup,
    vertex_names: Vec<String>,
    tops: Vec<Top>,
    cells: Vec<Vec<Vec<Lift>>>,
    lookup: Vec<HashMap<Vec<Lift>, usize>>,
    faces: Vec<Vec<FaceRef>>,
    incidences: Vec<Vec<Vec<Incidence>>>,
    hinge_cycles: Vec<Vec<Incidence>>,
}

pub fn popcount(mask: u32) -> usize {
    mask.count_ones() as usize
}

pub fn mask_positions(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Mask of the local edge `{i, j}`.
pub fn pair_mask(i: usize, j: usize) -> u32 {
    (1 << i) | (1 << j)
}

/// Local vertex pairs `(i, j)`, `i < j`, in lexicographic order.
pub fn local_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Parity (+1 / -1) of the permutation sorting a sequence of distinct items.
pub fn sort_parity<T: Ord>(seq: &[T]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn subset(labels: &[Lift], mask: u32) -> Vec<Lift> {
    labels
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &l)| l)
        .collect()
}

impl SimplicialPreComplex {
    /// Builds a complex over a trivial deck group from vertex-index tuples.
    pub fn build(dim: usize, tops: &[(i8, Vec<usize>)]) -> Result<Self> {
        let nverts = tops
            .iter()
            .flat_map(|(_, v)| v.iter().copied())
            .max()
            .map_or(0, |m| m + 1);
        let names = (0..nverts).map(|i| (i + 1).to_string()).collect();
        let tops = tops
            .iter()
            .map(|(s, v)| Top::new(v.iter().map(|&i| Lift::base(i)).collect(), *s))
            .collect();
        Self::build_with_group(dim, DeckGroup::Trivial, names, tops)
    }

    /// Builds and validates a complex. Every named vertex must be used.
    pub fn build_with_group(
        dim: usize,
        group: DeckGroup,
        vertex_names: Vec<String>,
        tops: Vec<Top>,
    ) -> Result<Self> {
        if !(3..=4).contains(&dim) {
            return Err(Error::BadParams(format!("dimension {dim} not in {{3, 4}}")));
        }
        if tops.is_empty() {
            return Err(Error::Empty);
        }
        if let DeckGroup::Cyclic(0) = group {
            return Err(Error::BadParams("cyclic group of order 0".into()));
        }
        let n = dim + 1;
        let mut normalized = Vec::with_capacity(tops.len());
        for (t, top) in tops.into_iter().enumerate() {
            if top.lifts.len() != n {
                return Err(Error::BadArity {
                    index: t,
                    expected: n,
                    found: top.lifts.len(),
                });
            }
            if top.orientation != 1 && top.orientation != -1 {
                return Err(Error::BadParams(format!(
                    "orientation of top {t} must be +-1"
                )));
            }
            let lifts: Vec<Lift> = top
                .lifts
                .iter()
                .map(|l| Lift::new(l.vertex, group.normalize(l.copy)))
                .collect();
            for l in &lifts {
                if l.vertex >= vertex_names.len() {
                    return Err(Error::UnknownVertex(l.vertex));
                }
            }
            let mut sorted = lifts.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::RepeatedVertex(t));
            }
            normalized.push(Top::new(lifts, top.orientation));
        }

        let mut c = SimplicialPreComplex {
            dim,
            group,
            vertex_names,
            tops: normalized,
            cells: vec![Vec::new(); n],
            lookup: vec![HashMap::new(); n],
            faces: Vec::new(),
            incidences: vec![Vec::new(); n],
            hinge_cycles: Vec::new(),
        };
        // vertex cells are indexed by vertex id
        for v in 0..c.vertex_names.len() {
            let key = vec![Lift::base(v)];
            c.lookup[0].insert(key.clone(), v);
            c.cells[0].push(key);
            c.incidences[0].push(Vec::new());
        }
        for t in 0..c.tops.len() {
            let mut refs = vec![
                FaceRef {
                    index: usize::MAX,
                    shift: 0
                };
                1 << n
            ];
            for mask in 1u32..(1 << n) {
                let k = popcount(mask) - 1;
                let labels = subset(&c.tops[t].lifts, mask);
                let canon = group.canonical(&labels);
                if canon.stabilizer != 1 {
                    return Err(Error::NonFreeAction(c.format_lifts(&labels)));
                }
                let index = match c.lookup[k].get(&canon.key) {
                    Some(&i) => i,
                    None => {
                        let i = c.cells[k].len();
                        c.lookup[k].insert(canon.key.clone(), i);
                        c.cells[k].push(canon.key);
                        c.incidences[k].push(Vec::new());
                        i
                    }
                };
                refs[mask as usize] = FaceRef {
                    index,
                    shift: canon.shift,
                };
                c.incidences[k][index].push(Incidence { top: t, mask });
            }
            c.faces.push(refs);
        }
        for (v, inc) in c.incidences[0].iter().enumerate() {
            if inc.is_empty() {
                return Err(Error::BadParams(format!(
                    "vertex {} is not used by any simplex",
                    c.vertex_names[v]
                )));
            }
        }
        c.validate_facets()?;
        c.hinge_cycles = (0..c.cells[dim - 2].len())
            .map(|h| c.walk_hinge(h))
            .collect::<Result<_>>()?;
        Ok(c)
    }

    fn validate_facets(&self) -> Result<()> {
        let k = self.dim - 1;
        for (f, inc) in self.incidences[k].iter().enumerate() {
            if inc.len() != 2 {
                return Err(Error::NonManifold {
                    cell: self.format_lifts(&self.cells[k][f]),
                    count: inc.len(),
                });
            }
            let a = self.facet_orientation(inc[0]);
            let b = self.facet_orientation(inc[1]);
            if a == b {
                return Err(Error::OrientationClash {
                    cell: self.format_lifts(&self.cells[k][f]),
                });
            }
        }
        Ok(())
    }

    /// Orientation induced on a facet incidence, relative to the facet's canonical order.
    pub fn facet_orientation(&self, inc: Incidence) -> i8 {
        let n = self.dim + 1;
        let full = (1u32 << n) - 1;
        let missing = (full & !inc.mask).trailing_zeros() as usize;
        let sign = if missing.is_multiple_of(2) { 1 } else { -1 };
        sign * self.tops[inc.top].orientation * self.face_parity(inc)
    }

    /// Parity of the local position order of a face relative to the canonical order.
    pub fn face_parity(&self, inc: Incidence) -> i8 {
        let r = self.faces[inc.top][inc.mask as usize];
        let shifted = self
            .group
            .shift_all(&subset(&self.tops[inc.top].lifts, inc.mask), r.shift);
        sort_parity(&shifted)
    }

    fn walk_hinge(&self, h: usize) -> Result<Vec<Incidence>> {
        let k = self.dim - 2;
        let n = self.dim + 1;
        let full = (1u32 << n) - 1;
        let all = &self.incidences[k][h];
        let start = all[0];
        let outer = full & !start.mask;
        let low = outer & outer.wrapping_neg();
        let mut cur = start;
        let mut exit = start.mask | (outer & !low);
        let mut cycle = Vec::new();
        loop {
            cycle.push(cur);
            if cycle.len() > all.len() {
                return Err(Error::OpenLink(self.format_lifts(&self.cells[k][h])));
            }
            let fref = self.faces[cur.top][exit as usize];
            let pair = &self.incidences[k + 1][fref.index];
            let here = Incidence {
                top: cur.top,
                mask: exit,
            };
            let other = if pair[0] == here { pair[1] } else { pair[0] };
            let oref = self.faces[other.top][other.mask as usize];
            let delta = fref.shift - oref.shift;
            let hinge_labels = self
                .group
                .shift_all(&subset(&self.tops[cur.top].lifts, cur.mask), delta);
            let mut hmask = 0u32;
            for p in mask_positions(other.mask) {
                if hinge_labels.contains(&self.tops[other.top].lifts[p]) {
                    hmask |= 1 << p;
                }
            }
            if popcount(hmask) != k + 1 {
                return Err(Error::OpenLink(self.format_lifts(&self.cells[k][h])));
            }
            let next = Incidence {
                top: other.top,
                mask: hmask,
            };
            exit = hmask | (full & !other.mask);
            if next == start {
                break;
            }
            cur = next;
        }
        if cycle.len() != all.len() {
            return Err(Error::OpenLink(self.format_lifts(&self.cells[k][h])));
        }
        Ok(cycle)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> DeckGroup {
        self.group
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn tops(&self) -> &[Top] {
        &self.tops
    }

    pub fn num_tops(&self) -> usize {
        self.tops.len()
    }

    pub fn num_cells(&self, k: usize) -> usize {
        self.cells[k].len()
    }

    pub fn num_edges(&self) -> usize {
        self.cells[1].len()
    }

    pub fn num_hinges(&self) -> usize {
        self.cells[self.dim - 2].len()
    }

    /// Cell counts for dimensions `0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k % 2 == 0 {
                    c.len() as i64
                } else {
                    -(c.len() as i64)
                }
            })
            .sum()
    }

    /// Canonical lifted labels of a cell.
    pub fn cell_lifts(&self, id: CellId) -> &[Lift] {
        &self.cells[id.dim][id.index]
    }

    /// Quotient vertices of a cell (with repetition when lifts share a vertex).
    pub fn cell_vertices(&self, id: CellId) -> Vec<usize> {
        self.cell_lifts(id).iter().map(|l| l.vertex).collect()
    }

    /// All cell slots whose lifted labels lie in the orbit of `labels`.
    pub fn find_cell(&self, labels: &[Lift]) -> Option<CellId> {
        if labels.is_empty() || labels.len() > self.dim + 1 {
            return None;
        }
        let k = labels.len() - 1;
        let canon = self.group.canonical(labels);
        self.lookup[k].get(&canon.key).map(|&i| CellId::new(k, i))
    }

    /// All slots whose quotient vertex multiset matches `vertices`.
    pub fn cells_with_vertices(&self, vertices: &[usize]) -> Vec<CellId> {
        if vertices.is_empty() || vertices.len() > self.dim + 1 {
            return Vec::new();
        }
        let k = vertices.len() - 1;
        let mut want = vertices.to_vec();
        want.sort();
        (0..self.cells[k].len())
            .filter(|&i| {
                let mut have: Vec<usize> = self.cells[k][i].iter().map(|l| l.vertex).collect();
                have.sort();
                have == want
            })
            .map(|i| CellId::new(k, i))
            .collect()
    }

    pub fn face_ref(&self, top: usize, mask: u32) -> FaceRef {
        self.faces[top][mask as usize]
    }

    /// Cell of the local face `mask` of top simplex `top`.
    pub fn top_face(&self, top: usize, mask: u32) -> CellId {
        CellId::new(popcount(mask) - 1, self.faces[top][mask as usize].index)
    }

    /// Edge cells of a top simplex, indexed like [`local_pairs`].
    pub fn top_edges(&self, top: usize) -> Vec<usize> {
        local_pairs(self.dim + 1)
            .into_iter()
            .map(|(i, j)| self.faces[top][pair_mask(i, j) as usize].index)
            .collect()
    }

    /// Lifted labels of a local face, in local position order.
    pub fn local_lifts(&self, top: usize, mask: u32) -> Vec<Lift> {
        subset(&self.tops[top].lifts, mask)
    }

    pub fn incidences(&self, id: CellId) -> &[Incidence] {
        &self.incidences[id.dim][id.index]
    }

    /// Top-simplex slots around a hinge, in cyclic order.
    pub fn hinge_cycle(&self, h: CellId) -> Result<&[Incidence]> {
        if h.dim + 2 != self.dim || h.index >= self.hinge_cycles.len() {
            return Err(Error::BadParams(format!("{h} is not a hinge")));
        }
        Ok(&self.hinge_cycles[h.index])
    }

    pub fn format_lift(&self, l: Lift) -> String {
        let name = self
            .vertex_names
            .get(l.vertex)
            .cloned()
            .unwrap_or_else(|| format!("#{}", l.vertex));
        if self.group == DeckGroup::Trivial {
            name
        } else {
            format!("{}@{}", name, l.copy)
        }
    }

    pub fn format_lifts(&self, ls: &[Lift]) -> String {
        ls.iter()
            .map(|&l| self.format_lift(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn format_cell(&self, id: CellId) -> String {
        self.format_lifts(self.cell_lifts(id))
    }
}

/// Assigns orientation signs making all glued facets induce opposite orientations.
pub fn orient_consistently(dim: usize, group: DeckGroup, tops: &[Vec<Lift>]) -> Result<Vec<i8>> {
    let n = dim + 1;
    let mut facets: HashMap<Vec<Lift>, Vec<(usize, i8)>> = HashMap::new();
    for (t, lifts) in tops.iter().enumerate() {
        if lifts.len() != n {
            return Err(Error::BadArity {
                index: t,
                expected: n,
                found: lifts.len(),
            });
        }
        for miss in 0..n {
            let face: Vec<Lift> = lifts
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != miss)
                .map(|(_, &l)| l)
                .collect();
            let canon = group.canonical(&face);
            let parity = sort_parity(&group.shift_all(&face, canon.shift));
            let sign = if miss % 2 == 0 { 1 } else { -1 };
            facets
                .entry(canon.key)
                .or_default()
                .push((t, sign * parity));
        }
    }
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); tops.len()];
    for (key, inc) in &facets {
        if inc.len() != 2 {
            return Err(Error::NonManifold {
                cell: format!("{key:?}"),
                count: inc.len(),
            });
        }
        let (a, sa) = inc[0];
        let (b, sb) = inc[1];
        // signs s_a, s_b must satisfy s_a * sa = -(s_b * sb)
        let rel = -sa * sb;
        adj[a].push((b, rel));
        adj[b].push((a, rel));
    }
    let mut signs = vec![0i8; tops.len()];
    for root in 0..tops.len() {
        if signs[root] != 0 {
            continue;
        }
        signs[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(t) = queue.pop_front() {
            for &(u, rel) in &adj[t] {
                let want = signs[t] * rel;
                if signs[u] == 0 {
                    signs[u] = want;
                    queue.push_back(u);
                } else if signs[u] != want {
                    return Err(Error::OrientationClash {
                        cell: format!("top {u}"),
                    });
                }
            }
        }
    }
    Ok(signs)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn boundary_simplex(d: usize) -> Vec<(i8, Vec<usize>)> {
        (0..d + 2)
            .map(|i| {
                let s = if i % 2 == 0 { 1 } else { -1 };
                (s, (0..d + 2).filter(|&v| v != i).collect())
            })
            .collect()
    }

    #[test]
    fn boundary_of_four_simplex_counts() {
        let c = SimplicialPreComplex::build(3, &boundary_simplex(3)).unwrap();
        assert_eq!(c.f_vector(), vec![5, 10, 10, 5]);
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn boundary_of_five_simplex_counts() {
        let c = SimplicialPreComplex::build(4, &boundary_simplex(4)).unwrap();
        assert_eq!(c.f_vector(), vec![6, 15, 20, 15, 6]);
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn pillow_is_a_precomplex() {
        let c = SimplicialPreComplex::build(3, &[(1, vec![0, 1, 2, 3]), (-1, vec![0, 1, 2, 3])])
            .unwrap();
        assert_eq!(c.num_cells(2), 4);
        for f in 0..4 {
            let inc = c.incidences(CellId::new(2, f));
            assert_eq!(inc.len(), 2);
            assert_ne!(inc[0].top, inc[1].top);
        }
        let e = c.find_cell(&[Lift::base(0), Lift::base(1)]).unwrap();
        assert_eq!(c.hinge_cycle(e).unwrap().len(), 2);
    }

    #[test]
    fn hinge_cycles_in_spheres() {
        let c = SimplicialPreComplex::build(3, &boundary_simplex(3)).unwrap();
        let e = c.find_cell(&[Lift::base(0), Lift::base(1)]).unwrap();
        assert_eq!(c.hinge_cycle(e).unwrap().len(), 3);
        let c4 = SimplicialPreComplex::build(4, &boundary_simplex(4)).unwrap();
        let tri = c4
            .find_cell(&[Lift::base(0), Lift::base(1), Lift::base(2)])
            .unwrap();
        let cyc = c4.hinge_cycle(tri).unwrap();
        assert_eq!(cyc.len(), 3);
        let edge = c4.find_cell(&[Lift::base(0), Lift::base(1)]).unwrap();
        assert_eq!(c4.incidences(edge).len(), 4);
    }

    #[test]
    fn consecutive_hinge_entries_share_a_facet() {
        let c = SimplicialPreComplex::build(4, &boundary_simplex(4)).unwrap();
        for h in 0..c.num_hinges() {
            let cyc = c.hinge_cycle(CellId::new(2, h)).unwrap();
            for w in 0..cyc.len() {
                let a = cyc[w];
                let b = cyc[(w + 1) % cyc.len()];
                let fa: Vec<usize> = (0..5)
                    .filter(|&i| a.mask & (1 << i) == 0)
                    .map(|i| c.top_face(a.top, ((1 << 5) - 1) & !(1 << i)).index)
                    .collect();
                let fb: Vec<usize> = (0..5)
                    .filter(|&i| b.mask & (1 << i) == 0)
                    .map(|i| c.top_face(b.top, ((1 << 5) - 1) & !(1 << i)).index)
                    .collect();
                assert!(fa.iter().any(|f| fb.contains(f)));
            }
        }
    }

    #[test]
    fn arity_and_manifold_errors() {
        let err = SimplicialPreComplex::build(3, &[(1, vec![0, 1, 2])]).unwrap_err();
        assert!(matches!(err, Error::BadArity { .. }));
        let err = SimplicialPreComplex::build(3, &[(1, vec![0, 1, 2, 3])]).unwrap_err();
        assert!(matches!(err, Error::NonManifold { count: 1, .. }));
        let mut tops = boundary_simplex(3);
        tops[0].0 = -tops[0].0;
        let err = SimplicialPreComplex::build(3, &tops).unwrap_err();
        assert!(matches!(err, Error::OrientationClash { .. }));
        let err = SimplicialPreComplex::build(3, &[]).unwrap_err();
        assert_eq!(err, Error::Empty);
    }

    #[test]
    fn orientation_recovered_by_propagation() {
        let tops: Vec<Vec<Lift>> = boundary_simplex(4)
            .into_iter()
            .map(|(_, v)| v.into_iter().map(Lift::base).collect())
            .collect();
        let signs = orient_consistently(4, DeckGroup::Trivial, &tops).unwrap();
        let expect: Vec<i8> = boundary_simplex(4).iter().map(|(s, _)| *s).collect();
        assert!(signs == expect || signs.iter().zip(&expect).all(|(a, b)| *a == -b));
    }

    #[test]
    fn cyclic_canonical_detects_stabilizer() {
        let g = DeckGroup::Cyclic(4);
        let c = g.canonical(&[Lift::new(0, 0), Lift::new(0, 2)]);
        assert_eq!(c.stabilizer, 2);
        let c = g.canonical(&[Lift::new(0, 3), Lift::new(1, 1)]);
        assert_eq!(c.stabilizer, 1);
        assert_eq!(c.key, vec![Lift::new(0, 0), Lift::new(1, 2)]);
    }
}
