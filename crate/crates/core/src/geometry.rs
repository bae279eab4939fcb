//! The affine space AG(n, q): points, canonical lines and planes, incidence.
//!
//! Points are indexed lexicographically by coordinate codes. Lines are stored
//! in canonical form (direction with leading coefficient 1, base zero at the
//! direction's pivot) and indexed by sorting on `(dir, base)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

pub type PointId = u32;
pub type LineId = u32;

/// Upper bound on `|L|` for building an explicit [`Space`].
pub const MAX_SPACE_LINES: u128 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<FieldElem>);

impl Point {
    pub fn coords(&self) -> &[FieldElem] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Line {
    pub base: Point,
    pub dir: Vec<FieldElem>,
}

/// A plane with its direction space in reduced row-echelon form and its base
/// reduced to zero at both pivot columns.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Plane {
    pub base: Point,
    pub dirs: [Vec<FieldElem>; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "point")]
pub enum Meet {
    Equal,
    Point(PointId),
    Parallel,
    Skew,
}

/// `{"n": .., "p": .., "h": ..}` as used in every file format and report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceDesc {
    pub n: u32,
    pub p: u32,
    pub h: u32,
}

impl fmt::Display for SpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AG({}, {})", self.n, self.p.pow(self.h))
    }
}

/// Closed-form counts for AG(n, q).
pub mod counts {
    /// `(q^k - 1) / (q - 1)`
    pub fn gaussian_one(k: u32, q: u128) -> u128 {
        (0..k).map(|i| q.pow(i)).sum()
    }

    pub fn points(n: u32, q: u128) -> u128 {
        q.pow(n)
    }

    /// Lines through a fixed point.
    pub fn star(n: u32, q: u128) -> u128 {
        gaussian_one(n, q)
    }

    /// `q^(n-1) (q^n - 1) / (q - 1)`
    pub fn lines(n: u32, q: u128) -> u128 {
        if n == 0 {
            return 0;
        }
        q.pow(n - 1) * gaussian_one(n, q)
    }

    /// Number of 2-dimensional subspaces of GF(q)^n.
    pub fn planes_through_point(n: u32, q: u128) -> u128 {
        if n < 2 {
            return 0;
        }
        gaussian_one(n, q) * gaussian_one(n - 1, q) / (q + 1)
    }

    pub fn planes(n: u32, q: u128) -> u128 {
        if n < 2 {
            return 0;
        }
        q.pow(n - 2) * planes_through_point(n, q)
    }

    pub fn parallel_class(n: u32, q: u128) -> u128 {
        if n == 0 {
            return 0;
        }
        q.pow(n - 1)
    }

    /// Edges of the concurrence graph: every point contributes one edge per
    /// pair of lines through it.
    pub fn concurrence_edges(n: u32, q: u128) -> u128 {
        let s = star(n, q);
        points(n, q) * s * s.saturating_sub(1) / 2
    }
}

pub struct Space {
    n: u32,
    field: Field,
    coords: Vec<FieldElem>,
    lines: Vec<Line>,
    line_points: Vec<Vec<PointId>>,
    line_index: HashMap<Line, LineId>,
    stars: Vec<Vec<LineId>>,
    class_of: Vec<u32>,
    classes: Vec<Vec<LineId>>,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space").field("n", &self.n).field("field", &self.field).finish()
    }
}

impl Space {
    pub fn new(n: u32, p: u32, h: u32) -> Result<Space> {
        let field = Field::new(p, h)?;
        Space::over(n, field)
    }

    pub fn from_desc(desc: SpaceDesc) -> Result<Space> {
        Space::new(desc.n, desc.p, desc.h)
    }

    pub fn over(n: u32, field: Field) -> Result<Space> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        let q = field.order();
        let line_count = counts::lines(n, q as u128);
        if line_count > MAX_SPACE_LINES {
            return Err(Error::SpaceTooLarge { n, q, lines: line_count, limit: MAX_SPACE_LINES });
        }
        let point_count = q.pow(n) as usize;
        let nu = n as usize;
        let mut coords = Vec::with_capacity(point_count * nu);
        for idx in 0..point_count {
            let mut digits = vec![FieldElem::ZERO; nu];
            let mut rest = idx as u32;
            for slot in digits.iter_mut().rev() {
                *slot = FieldElem((rest % q) as u8);
                rest /= q;
            }
            coords.extend(digits);
        }

        let mut space = Space {
            n,
            field,
            coords,
            lines: Vec::with_capacity(line_count as usize),
            line_points: Vec::with_capacity(line_count as usize),
            line_index: HashMap::with_capacity(line_count as usize),
            stars: vec![Vec::new(); point_count],
            class_of: Vec::with_capacity(line_count as usize),
            classes: Vec::new(),
        };

        // Points are already in lexicographic order, so scanning them yields
        // canonical directions and bases in sorted order.
        for d in 0..point_count as PointId {
            let dir = space.coords(d).to_vec();
            let Some(pivot) = dir.iter().position(|c| !c.is_zero()) else { continue };
            if dir[pivot] != FieldElem::ONE {
                continue;
            }
            let class = space.classes.len() as u32;
            let mut members = Vec::new();
            for b in 0..point_count as PointId {
                if !space.coords(b)[pivot].is_zero() {
                    continue;
                }
                let id = space.lines.len() as LineId;
                let line = Line { base: space.point(b), dir: dir.clone() };
                let mut pts: Vec<PointId> = space
                    .field
                    .elements()
                    .map(|t| {
                        let v: Vec<FieldElem> = line
                            .base
                            .0
                            .iter()
                            .zip(&dir)
                            .map(|(&x, &y)| space.field.add(x, space.field.mul(t, y)))
                            .collect();
                        space.index_of(&v)
                    })
                    .collect();
                pts.sort_unstable();
                for &pt in &pts {
                    space.stars[pt as usize].push(id);
                }
                space.line_index.insert(line.clone(), id);
                space.lines.push(line);
                space.line_points.push(pts);
                space.class_of.push(class);
                members.push(id);
            }
            space.classes.push(members);
        }
        debug_assert_eq!(space.lines.len() as u128, line_count);
        Ok(space)
    }

    pub fn dim(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The order of the space: points per line.
    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn desc(&self) -> SpaceDesc {
        SpaceDesc { n: self.n, p: self.field.characteristic(), h: self.field.degree() }
    }

    pub fn point_count(&self) -> usize {
        self.stars.len()
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.point_count() as PointId
    }

    pub fn lines(&self) -> std::ops::Range<LineId> {
        0..self.line_count() as LineId
    }

    /// All points in index (lexicographic) order.
    pub fn enumerate_points(&self) -> Vec<Point> {
        self.points().map(|p| self.point(p)).collect()
    }

    pub fn coords(&self, p: PointId) -> &[FieldElem] {
        let n = self.n as usize;
        &self.coords[p as usize * n..(p as usize + 1) * n]
    }

    pub fn point(&self, p: PointId) -> Point {
        Point(self.coords(p).to_vec())
    }

    fn index_of(&self, coords: &[FieldElem]) -> PointId {
        let q = self.order();
        coords.iter().fold(0, |acc, c| acc * q + c.code())
    }

    pub fn point_id(&self, point: &Point) -> Result<PointId> {
        if point.0.len() != self.n as usize {
            return Err(Error::CoordinateCount { expected: self.n as usize, got: point.0.len() });
        }
        for c in &point.0 {
            self.field.elem(c.code())?;
        }
        Ok(self.index_of(&point.0))
    }

    pub fn line(&self, l: LineId) -> &Line {
        &self.lines[l as usize]
    }

    pub fn line_id(&self, line: &Line) -> Option<LineId> {
        self.line_index.get(line).copied()
    }

    pub fn line_points(&self, l: LineId) -> &[PointId] {
        &self.line_points[l as usize]
    }

    pub fn on_line(&self, p: PointId, l: LineId) -> bool {
        self.line_points(l).binary_search(&p).is_ok()
    }

    fn vsub(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    fn vadd(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect()
    }

    fn vscale(&self, t: FieldElem, a: &[FieldElem]) -> Vec<FieldElem> {
        a.iter().map(|&x| self.field.mul(t, x)).collect()
    }

    /// Scales `dir` to leading coefficient 1 and moves `base` along it until
    /// the pivot coordinate vanishes.
    pub fn canonical_line(&self, base: &[FieldElem], dir: &[FieldElem]) -> Option<Line> {
        let pivot = dir.iter().position(|c| !c.is_zero())?;
        let lead_inv = self.field.inv(dir[pivot]).ok()?;
        let dir = self.vscale(lead_inv, dir);
        let base = self.vsub(base, &self.vscale(base[pivot], &dir));
        Some(Line { base: Point(base), dir })
    }

    /// The line `P v Q`.
    pub fn line_through(&self, p: PointId, q: PointId) -> Result<LineId> {
        if p == q {
            return Err(Error::EqualPoints);
        }
        let dir = self.vsub(self.coords(q), self.coords(p));
        let line = self.canonical_line(self.coords(p), &dir).expect("distinct points give a direction");
        Ok(self.line_index[&line])
    }

    /// The line through `p` with direction `dir`.
    pub fn line_with_dir(&self, p: PointId, dir: &[FieldElem]) -> Option<LineId> {
        let line = self.canonical_line(self.coords(p), dir)?;
        self.line_id(&line)
    }

    pub fn intersect(&self, a: LineId, b: LineId) -> Meet {
        if a == b {
            return Meet::Equal;
        }
        let (pa, pb) = (self.line_points(a), self.line_points(b));
        let (mut i, mut j) = (0, 0);
        while i < pa.len() && j < pb.len() {
            match pa[i].cmp(&pb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Meet::Point(pa[i]),
            }
        }
        if self.is_parallel(a, b) {
            Meet::Parallel
        } else {
            Meet::Skew
        }
    }

    /// Lines are related iff they share a point (equal lines included).
    pub fn related(&self, a: LineId, b: LineId) -> bool {
        matches!(self.intersect(a, b), Meet::Equal | Meet::Point(_))
    }

    pub fn is_parallel(&self, a: LineId, b: LineId) -> bool {
        self.class_of[a as usize] == self.class_of[b as usize]
    }

    pub fn class_index(&self, l: LineId) -> u32 {
        self.class_of[l as usize]
    }

    pub fn parallel_classes(&self) -> &[Vec<LineId>] {
        &self.classes
    }

    pub fn parallel_class(&self, l: LineId) -> &[LineId] {
        &self.classes[self.class_of[l as usize] as usize]
    }

    /// The star `L(Q)`: all lines through `q`, sorted by index.
    pub fn star(&self, q: PointId) -> &[LineId] {
        &self.stars[q as usize]
    }

    fn reduce_rows(&self, rows: &[Vec<FieldElem>; 2], v: &[FieldElem]) -> Vec<FieldElem> {
        let mut v = v.to_vec();
        for row in rows {
            let pivot = row.iter().position(|c| !c.is_zero()).expect("echelon rows are nonzero");
            let t = v[pivot];
            if !t.is_zero() {
                v = self.vsub(&v, &self.vscale(t, row));
            }
        }
        v
    }

    /// Reduced row-echelon form of two independent vectors, or `None` when
    /// they are dependent.
    fn rref_pair(&self, a: &[FieldElem], b: &[FieldElem]) -> Option<[Vec<FieldElem>; 2]> {
        let f = &self.field;
        let mut r1 = a.to_vec();
        let mut r2 = b.to_vec();
        let p1 = r1.iter().position(|c| !c.is_zero());
        let p2 = r2.iter().position(|c| !c.is_zero());
        match (p1, p2) {
            (Some(x), Some(y)) if y < x => std::mem::swap(&mut r1, &mut r2),
            (None, _) => std::mem::swap(&mut r1, &mut r2),
            _ => {}
        }
        let k1 = r1.iter().position(|c| !c.is_zero())?;
        r1 = self.vscale(f.inv(r1[k1]).ok()?, &r1);
        r2 = self.vsub(&r2, &self.vscale(r2[k1], &r1));
        let k2 = r2.iter().position(|c| !c.is_zero())?;
        r2 = self.vscale(f.inv(r2[k2]).ok()?, &r2);
        r1 = self.vsub(&r1, &self.vscale(r1[k2], &r2));
        Some([r1, r2])
    }

    fn plane_from(&self, base: &[FieldElem], a: &[FieldElem], b: &[FieldElem]) -> Option<Plane> {
        let dirs = self.rref_pair(a, b)?;
        let base = self.reduce_rows(&dirs, base);
        Some(Plane { base: Point(base), dirs })
    }

    /// The plane `P v a` spanned by a line and a point off it.
    pub fn span_plane(&self, a: LineId, p: PointId) -> Result<Plane> {
        if self.on_line(p, a) {
            return Err(Error::PointOnLine { point: p, line: a });
        }
        let line = self.line(a);
        let offset = self.vsub(self.coords(p), &line.base.0);
        Ok(self.plane_from(&line.base.0, &line.dir, &offset).expect("point off the line spans a plane"))
    }

    /// The plane spanned by two distinct lines that meet or are parallel.
    pub fn plane_of_lines(&self, a: LineId, b: LineId) -> Option<Plane> {
        match self.intersect(a, b) {
            Meet::Point(_) | Meet::Parallel => {
                let p = *self.line_points(b).iter().find(|&&p| !self.on_line(p, a))?;
                self.span_plane(a, p).ok()
            }
            _ => None,
        }
    }

    pub fn plane_contains(&self, plane: &Plane, p: PointId) -> bool {
        let offset = self.vsub(self.coords(p), &plane.base.0);
        self.reduce_rows(&plane.dirs, &offset).iter().all(|c| c.is_zero())
    }

    pub fn plane_contains_line(&self, plane: &Plane, l: LineId) -> bool {
        self.line_points(l).iter().all(|&p| self.plane_contains(plane, p))
    }

    pub fn plane_points(&self, plane: &Plane) -> Vec<PointId> {
        let f = &self.field;
        let mut out = Vec::with_capacity((f.order() * f.order()) as usize);
        for s in f.elements() {
            for t in f.elements() {
                let v = self
                    .vadd(&self.vadd(&plane.base.0, &self.vscale(s, &plane.dirs[0])), &self.vscale(t, &plane.dirs[1]));
                out.push(self.index_of(&v));
            }
        }
        out.sort_unstable();
        out
    }

    /// The pencil `L(Q, E)`: lines through `q` inside `plane`.
    pub fn pencil(&self, q: PointId, plane: &Plane) -> Result<Vec<LineId>> {
        if !self.plane_contains(plane, q) {
            return Err(Error::PointNotInPlane(q));
        }
        let pencil: Vec<LineId> = self
            .star(q)
            .iter()
            .copied()
            .filter(|&l| self.reduce_rows(&plane.dirs, &self.line(l).dir).iter().all(|c| c.is_zero()))
            .collect();
        debug_assert_eq!(pencil.len() as u32, self.order() + 1);
        Ok(pencil)
    }

    /// All planes through `q`, sorted.
    pub fn planes_through(&self, q: PointId) -> Vec<Plane> {
        let star = self.star(q);
        let mut planes: Vec<Plane> = Vec::new();
        for (i, &a) in star.iter().enumerate() {
            for &b in &star[i + 1..] {
                let la = self.line(a);
                let lb = self.line(b);
                if let Some(plane) = self.plane_from(self.coords(q), &la.dir, &lb.dir) {
                    planes.push(plane);
                }
            }
        }
        planes.sort();
        planes.dedup();
        planes
    }

    /// Image of line `l` under the translation by `vector`.
    pub fn translate_line(&self, l: LineId, vector: &[FieldElem]) -> LineId {
        let line = self.line(l);
        let base = self.vadd(&line.base.0, vector);
        self.line_with_dir(self.index_of(&base), &line.dir).expect("translated line exists")
    }

    /// Collinearity of three distinct points, computed directly and through
    /// the triple star intersection; the two answers must agree.
    pub fn collinear(&self, p: PointId, q: PointId, r: PointId) -> Result<bool> {
        if p == q || q == r || p == r {
            return Err(Error::EqualPoints);
        }
        let direct = self.collinear_direct(p, q, r);
        let via_stars = self.triple_star_count(p, q, r) == 1;
        if direct != via_stars {
            return Err(Error::Inconsistent(format!(
                "collinearity of {p}, {q}, {r}: direct={direct}, star count={via_stars}"
            )));
        }
        Ok(direct)
    }

    pub fn collinear_direct(&self, p: PointId, q: PointId, r: PointId) -> bool {
        let l = self.line_through(p, q).expect("distinct");
        self.on_line(r, l)
    }

    /// `#(L(P) ∩ L(Q))`
    pub fn pair_star_count(&self, p: PointId, q: PointId) -> usize {
        let sq = self.star(q);
        self.star(p).iter().filter(|l| sq.binary_search(l).is_ok()).count()
    }

    /// `#(L(P) ∩ L(Q) ∩ L(R))`
    pub fn triple_star_count(&self, p: PointId, q: PointId, r: PointId) -> usize {
        let (sq, sr) = (self.star(q), self.star(r));
        self.star(p).iter().filter(|l| sq.binary_search(l).is_ok() && sr.binary_search(l).is_ok()).count()
    }

    pub fn vector(&self, codes: &[u32]) -> Result<Vec<FieldElem>> {
        if codes.len() != self.n as usize {
            return Err(Error::CoordinateCount { expected: self.n as usize, got: codes.len() });
        }
        codes.iter().map(|&c| self.field.elem(c)).collect()
    }

    pub fn point_from_codes(&self, codes: &[u32]) -> Result<PointId> {
        let v = self.vector(codes)?;
        Ok(self.index_of(&v))
    }
}
