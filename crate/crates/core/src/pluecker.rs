//! The Plücker space `(L, ~)` of an affine space, held as its concurrence
//! graph: one vertex per line, an edge between distinct lines that meet.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{LineId, Plane, Point, PointId, Space, SpaceDesc};

/// Default vertex bound for clique enumeration and automorphism search.
pub const DESK_VERTEX_BOUND: usize = 200;

/// Largest graph [`ConcurrenceGraph::build`] will materialize.
pub const MAX_GRAPH_VERTICES: usize = 10_000;

/// The desk bound, overridable through `PLUECKER_MAX_VERTICES`.
pub fn desk_vertex_bound() -> usize {
    std::env::var("PLUECKER_MAX_VERTICES").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DESK_VERTEX_BOUND)
}

pub(crate) fn check_desk_bound(what: &'static str, actual: usize) -> Result<()> {
    let limit = desk_vertex_bound();
    if actual > limit {
        Err(Error::BoundExceeded { what, actual, limit })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `~`: equal or meeting.
    Related,
    /// `≁`: disjoint.
    Unrelated,
}

/// Adjacency stores `≈` (related and distinct); `~` adds the diagonal.
#[derive(Debug, Clone)]
pub struct ConcurrenceGraph {
    space: SpaceDesc,
    adj: Vec<FixedBitSet>,
    edges: usize,
}

impl ConcurrenceGraph {
    pub fn build(space: &Space) -> Result<ConcurrenceGraph> {
        let v = space.line_count();
        if v > MAX_GRAPH_VERTICES {
            return Err(Error::BoundExceeded {
                what: "concurrence graph vertices",
                actual: v,
                limit: MAX_GRAPH_VERTICES,
            });
        }
        let mut adj = vec![FixedBitSet::with_capacity(v); v];
        // two distinct lines meet iff some star holds both
        for q in space.points() {
            let star = space.star(q);
            for (i, &a) in star.iter().enumerate() {
                for &b in &star[i + 1..] {
                    adj[a as usize].insert(b as usize);
                    adj[b as usize].insert(a as usize);
                }
            }
        }
        let edges = adj.iter().map(|row| row.count_ones(..)).sum::<usize>() / 2;
        Ok(ConcurrenceGraph { space: space.desc(), adj, edges })
    }

    /// A graph from explicit adjacency rows (symmetrized, loops dropped).
    pub fn from_adjacency(space: SpaceDesc, rows: &[Vec<u32>]) -> ConcurrenceGraph {
        let v = rows.len();
        let mut adj = vec![FixedBitSet::with_capacity(v); v];
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                if j as usize != i {
                    adj[i].insert(j as usize);
                    adj[j as usize].insert(i);
                }
            }
        }
        let edges = adj.iter().map(|row| row.count_ones(..)).sum::<usize>() / 2;
        ConcurrenceGraph { space, adj, edges }
    }

    pub fn space(&self) -> SpaceDesc {
        self.space
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn adjacent(&self, a: u32, b: u32) -> bool {
        self.adj[a as usize].contains(b as usize)
    }

    #[inline]
    pub fn related(&self, a: u32, b: u32) -> bool {
        a == b || self.adjacent(a, b)
    }

    pub fn neighbor_set(&self, a: u32) -> &FixedBitSet {
        &self.adj[a as usize]
    }

    pub fn neighbors(&self, a: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[a as usize].ones().map(|j| j as u32)
    }

    pub fn degree(&self, a: u32) -> usize {
        self.adj[a as usize].count_ones(..)
    }

    /// Adjacency list rows, one per vertex in index order.
    pub fn adjacency_rows(&self) -> Vec<Vec<u32>> {
        (0..self.vertex_count() as u32).map(|v| self.neighbors(v).collect()).collect()
    }

    /// `index: n1 n2 ...`, one line per vertex.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for (v, row) in self.adjacency_rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{v}: {}\n", cells.join(" ")));
        }
        out
    }

    /// Connected components of `~` or `≁`, each sorted, ordered by their
    /// smallest member.
    pub fn components(&self, relation: Relation) -> Vec<Vec<u32>> {
        let v = self.vertex_count();
        let mut seen = FixedBitSet::with_capacity(v);
        let mut out = Vec::new();
        for start in 0..v {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut comp = vec![start as u32];
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let next: Vec<usize> = match relation {
                    Relation::Related => self.adj[x].ones().filter(|&y| !seen.contains(y)).collect(),
                    Relation::Unrelated => {
                        (0..v).filter(|&y| y != x && !seen.contains(y) && !self.adj[x].contains(y)).collect()
                    }
                };
                for y in next {
                    seen.insert(y);
                    comp.push(y as u32);
                    stack.push(y);
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_clique(&self, set: &[u32]) -> bool {
        set.iter().enumerate().all(|(i, &a)| set[i + 1..].iter().all(|&b| self.related(a, b)))
    }

    /// Pairwise related, and no outside vertex is adjacent to all members.
    pub fn is_maximal_clique(&self, set: &[u32]) -> bool {
        if set.is_empty() || !self.is_clique(set) {
            return false;
        }
        let mut common = self.adj[set[0] as usize].clone();
        for &x in &set[1..] {
            common.intersect_with(&self.adj[x as usize]);
        }
        for &x in set {
            common.set(x as usize, false);
        }
        common.is_clear()
    }

    /// All maximal cliques by Bron–Kerbosch with Tomita pivoting, each sorted,
    /// the list sorted lexicographically.
    pub fn enumerate_maximal_cliques(&self) -> Result<Vec<Vec<u32>>> {
        check_desk_bound("clique enumeration vertices", self.vertex_count())?;
        let v = self.vertex_count();
        let mut out = Vec::new();
        let mut candidates = FixedBitSet::with_capacity(v);
        candidates.insert_range(..);
        let mut current = Vec::new();
        self.bron_kerbosch(&mut current, candidates, FixedBitSet::with_capacity(v), &mut out);
        for c in &mut out {
            c.sort_unstable();
        }
        out.sort();
        Ok(out)
    }

    fn bron_kerbosch(
        &self,
        current: &mut Vec<u32>,
        mut cand: FixedBitSet,
        mut excl: FixedBitSet,
        out: &mut Vec<Vec<u32>>,
    ) {
        if cand.is_clear() {
            if excl.is_clear() {
                out.push(current.clone());
            }
            return;
        }
        let pivot = cand
            .ones()
            .chain(excl.ones())
            .max_by_key(|&u| (self.adj[u].intersection_count(&cand), std::cmp::Reverse(u)))
            .expect("nonempty");
        let mut branch = cand.clone();
        branch.difference_with(&self.adj[pivot]);
        for w in branch.ones() {
            current.push(w as u32);
            let mut next_cand = cand.clone();
            next_cand.intersect_with(&self.adj[w]);
            let mut next_excl = excl.clone();
            next_excl.intersect_with(&self.adj[w]);
            self.bron_kerbosch(current, next_cand, next_excl, out);
            current.pop();
            cand.set(w, false);
            excl.insert(w);
        }
    }
}

/// Geometric maximality test on a [`Space`], independent of any graph.
pub fn is_maximal_related_set(space: &Space, lines: &[LineId]) -> bool {
    if lines.is_empty() {
        return false;
    }
    let pairwise = lines.iter().enumerate().all(|(i, &a)| lines[i + 1..].iter().all(|&b| space.related(a, b)));
    pairwise && space.lines().all(|x| lines.contains(&x) || !lines.iter().all(|&a| space.related(a, x)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueKind {
    Star {
        center: PointId,
    },
    /// `q + 1` lines of one plane, one per direction, without a common point.
    NonStar {
        plane: Plane,
    },
    /// Neither shape; a counterexample to the classification.
    Other,
}

/// Classifies a maximal set of mutually related lines.
pub fn classify_clique(space: &Space, lines: &[LineId]) -> CliqueKind {
    let Some((&first, rest)) = lines.split_first() else { return CliqueKind::Other };
    let common: Vec<PointId> =
        space.line_points(first).iter().copied().filter(|&p| rest.iter().all(|&l| space.on_line(p, l))).collect();
    if let [center] = common.as_slice() {
        let mut sorted = lines.to_vec();
        sorted.sort_unstable();
        if sorted == space.star(*center) {
            return CliqueKind::Star { center: *center };
        }
        return CliqueKind::Other;
    }
    if !common.is_empty() || lines.len() != space.order() as usize + 1 {
        return CliqueKind::Other;
    }
    let Some(plane) = space.plane_of_lines(first, rest[0]) else { return CliqueKind::Other };
    let coplanar = lines.iter().all(|&l| space.plane_contains_line(&plane, l));
    let classes: BTreeSet<u32> = lines.iter().map(|&l| space.class_index(l)).collect();
    if coplanar && classes.len() == lines.len() {
        CliqueKind::NonStar { plane }
    } else {
        CliqueKind::Other
    }
}

/// Clique record of the JSON clique report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueRecord {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub lines: Vec<LineId>,
    pub center: Option<Point>,
    pub plane: Option<Plane>,
}

impl CliqueRecord {
    pub fn new(space: &Space, lines: &[LineId]) -> CliqueRecord {
        let mut sorted = lines.to_vec();
        sorted.sort_unstable();
        match classify_clique(space, &sorted) {
            CliqueKind::Star { center } => {
                CliqueRecord { kind: "star", lines: sorted, center: Some(space.point(center)), plane: None }
            }
            CliqueKind::NonStar { plane } => {
                CliqueRecord { kind: "nonstar", lines: sorted, center: None, plane: Some(plane) }
            }
            CliqueKind::Other => CliqueRecord { kind: "other", lines: sorted, center: None, plane: None },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NonStarClique {
    pub lines: Vec<LineId>,
    /// The pencil line that was moved off the centre.
    pub replaced: LineId,
    pub translated: LineId,
    pub plane: Plane,
}

/// Translates one line of the pencil `L(Q, E)` off `Q`, yielding a maximal
/// set of mutually related lines that is not a star.
///
/// The pencil line with the smallest index is translated by the direction of
/// the pencil line with the second-smallest index.
pub fn nonstar_maximal_clique(space: &Space, q: PointId, plane: &Plane) -> Result<NonStarClique> {
    if space.dim() < 2 {
        return Err(Error::Dimension { role: "source", needed: 2, got: space.dim() });
    }
    let pencil = space.pencil(q, plane)?;
    let (moved, keeper) = (pencil[0], pencil[1]);
    let translated = space.translate_line(moved, &space.line(keeper).dir);
    let mut lines: Vec<LineId> = pencil[1..].to_vec();
    lines.push(translated);
    lines.sort_unstable();
    if !is_maximal_related_set(space, &lines) {
        return Err(Error::Inconsistent(format!("translated pencil {lines:?} is not a maximal related set")));
    }
    if !matches!(classify_clique(space, &lines), CliqueKind::NonStar { .. }) {
        return Err(Error::Inconsistent(format!("translated pencil {lines:?} is not a transversal set")));
    }
    Ok(NonStarClique { lines, replaced: moved, translated, plane: plane.clone() })
}

/// The projective space `A/Q`: the star of `Q` as points, its pencils as lines.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientSpace {
    pub origin: PointId,
    pub points: Vec<LineId>,
    pub lines: Vec<Vec<LineId>>,
}

impl QuotientSpace {
    pub fn new(space: &Space, q: PointId) -> Result<QuotientSpace> {
        if space.dim() < 2 {
            return Err(Error::Dimension { role: "source", needed: 2, got: space.dim() });
        }
        let lines = space.planes_through(q).iter().map(|e| space.pencil(q, e)).collect::<Result<Vec<_>>>()?;
        let quotient = QuotientSpace { origin: q, points: space.star(q).to_vec(), lines };
        quotient.verify_axioms().map_err(Error::Inconsistent)?;
        Ok(quotient)
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    /// The quotient line through two distinct quotient points.
    pub fn join(&self, a: LineId, b: LineId) -> Option<&[LineId]> {
        self.lines.iter().find(|l| l.contains(&a) && l.contains(&b)).map(|l| l.as_slice())
    }

    pub fn collinear(&self, a: LineId, b: LineId, c: LineId) -> bool {
        self.join(a, b).is_some_and(|l| l.contains(&c))
    }

    /// Projective dimension `d` with `#points = (k^(d+1) - 1)/(k - 1)`,
    /// `k + 1` points per line.
    pub fn projective_dimension(&self) -> Option<u32> {
        let k = self.lines.first()?.len() as u128 - 1;
        (0..64).find(|&d| crate::geometry::counts::gaussian_one(d + 1, k) == self.points.len() as u128)
    }

    /// Lines have at least three points, two points share exactly one line,
    /// and the Veblen–Young axiom holds.
    pub fn verify_axioms(&self) -> std::result::Result<(), String> {
        let k = self.lines.first().map_or(0, |l| l.len());
        if self.lines.iter().any(|l| l.len() != k || k < 3) {
            return Err("quotient lines do not all have the same size >= 3".into());
        }
        let np = self.points.len();
        let pos = |x: LineId| self.points.binary_search(&x).expect("quotient point");
        let mut join = vec![usize::MAX; np * np];
        for (li, line) in self.lines.iter().enumerate() {
            for &a in line {
                for &b in line {
                    if a == b {
                        continue;
                    }
                    let slot = &mut join[pos(a) * np + pos(b)];
                    if *slot != usize::MAX {
                        return Err(format!("points {a} and {b} lie on two quotient lines"));
                    }
                    *slot = li;
                }
            }
        }
        for a in 0..np {
            for b in 0..np {
                if a != b && join[a * np + b] == usize::MAX {
                    return Err(format!("points {} and {} lie on no quotient line", self.points[a], self.points[b]));
                }
            }
        }
        let meets = |l: usize, m: usize| l == m || self.lines[l].iter().any(|x| self.lines[m].contains(x));
        for a in 0..np {
            for b in 0..np {
                if b == a {
                    continue;
                }
                let ab = join[a * np + b];
                for c in 0..np {
                    if c == a || c == b || self.lines[ab].contains(&self.points[c]) {
                        continue;
                    }
                    for d in 0..np {
                        if d == a || d == b || d == c {
                            continue;
                        }
                        if meets(ab, join[c * np + d]) && !meets(join[a * np + c], join[b * np + d]) {
                            return Err(format!(
                                "Veblen-Young fails for {}, {}, {}, {}",
                                self.points[a], self.points[b], self.points[c], self.points[d]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
