//! Values computed here by independent brute force, then compared with the
//! library and with frozen constants.

use std::collections::BTreeSet;

use affine_pluecker::geometry::counts;
use affine_pluecker::groups::{affinity_closure_order, affinity_order_formula, graph_automorphisms};
use affine_pluecker::pluecker::ConcurrenceGraph;
use affine_pluecker::{Field, FieldElem, PointId, Space};

// Polynomials over GF(p) as coefficient vectors, constant term first.

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let h = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (h..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            for (k, &m) in modulus.iter().enumerate() {
                prod[d - h + k] = (prod[d - h + k] + p * p - c * m % p) % p;
            }
        }
    }
    prod.truncate(h);
    prod
}

fn digits(code: u32, p: u32, h: u32) -> Vec<u32> {
    (0..h).map(|i| code / p.pow(i) % p).collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Monic `modulus` gives a field iff every non-zero residue has an inverse.
fn is_field_modulus(modulus: &[u32], p: u32) -> bool {
    let h = (modulus.len() - 1) as u32;
    let q = p.pow(h);
    (1..q).all(|a| (1..q).any(|b| undigits(&poly_mul_mod(&digits(a, p, h), &digits(b, p, h), modulus, p), p) == 1))
}

const FIELDS: [(u32, u32); 14] =
    [(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (31, 1)];

#[test]
fn field_tables_match_polynomial_arithmetic() {
    for (p, h) in FIELDS {
        let f = Field::new(p, h).unwrap();
        let modulus = f.modulus().to_vec();
        assert_eq!(modulus.len() as u32, h + 1);
        assert_eq!(*modulus.last().unwrap(), 1);
        let q = f.order();
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a, p, h), digits(b, p, h));
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                assert_eq!(f.add(FieldElem(a as u8), FieldElem(b as u8)).code(), undigits(&sum, p));
                let prod = poly_mul_mod(&da, &db, &modulus, p);
                assert_eq!(f.mul(FieldElem(a as u8), FieldElem(b as u8)).code(), undigits(&prod, p), "GF({q}) {a}*{b}");
            }
        }
    }
}

#[test]
fn moduli_are_the_smallest_irreducible_ones() {
    for (p, h) in FIELDS.into_iter().filter(|&(_, h)| h > 1) {
        let f = Field::new(p, h).unwrap();
        // monic polynomials ordered by their low coefficients read from the constant term
        let first = (0..p.pow(h))
            .map(|c| {
                let mut m = digits(c, p, h);
                m.push(1);
                m
            })
            .min_by_key(|m| if is_field_modulus(m, p) { (0, m.clone()) } else { (1, m.clone()) })
            .unwrap();
        assert!(is_field_modulus(&first, p));
        assert_eq!(f.modulus(), first.as_slice(), "GF({p}^{h})");
    }
    assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
    assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
}

#[test]
fn frobenius_count_and_fixed_field() {
    for (p, h) in FIELDS {
        let f = Field::new(p, h).unwrap();
        let autos = f.automorphisms();
        assert_eq!(autos.len() as u32, h);
        let fixed = f.elements().filter(|&a| autos.iter().all(|s| s.apply(a) == a)).count();
        assert_eq!(fixed as u32, p);
    }
}

/// Lines as point sets, built directly from all pairs of points.
fn brute_lines(s: &Space) -> BTreeSet<Vec<PointId>> {
    let f = s.field();
    let mut lines = BTreeSet::new();
    for a in s.points() {
        for b in s.points().filter(|&b| b > a) {
            let (pa, pb) = (s.coords(a), s.coords(b));
            let dir: Vec<FieldElem> = pa.iter().zip(pb).map(|(&x, &y)| f.sub(y, x)).collect();
            let mut pts: Vec<PointId> = f
                .elements()
                .map(|t| {
                    let c: Vec<u32> = pa.iter().zip(&dir).map(|(&x, &d)| f.add(x, f.mul(t, d)).code()).collect();
                    s.point_from_codes(&c).unwrap()
                })
                .collect();
            pts.sort_unstable();
            lines.insert(pts);
        }
    }
    lines
}

#[test]
fn counts_match_enumeration() {
    for (n, p, h) in [(1, 3, 1), (2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 3, 1), (2, 2, 2), (4, 2, 1), (2, 5, 1), (3, 2, 2)]
    {
        let s = Space::new(n, p, h).unwrap();
        let q = s.order() as u128;
        let lines = brute_lines(&s);
        assert_eq!(lines.len(), s.line_count());
        assert_eq!(lines.len() as u128, counts::lines(n, q));
        let lib: BTreeSet<Vec<PointId>> = s.lines().map(|l| s.line_points(l).to_vec()).collect();
        assert_eq!(lib, lines);
        let star = lines.iter().filter(|l| l.contains(&0)).count();
        assert_eq!(star as u128, counts::star(n, q));
        let ls: Vec<&Vec<PointId>> = lines.iter().collect();
        let edges: usize =
            (0..ls.len()).map(|i| (i + 1..ls.len()).filter(|&j| ls[i].iter().any(|x| ls[j].contains(x))).count()).sum();
        assert_eq!(edges as u128, counts::concurrence_edges(n, q));
        assert_eq!(ConcurrenceGraph::build(&s).unwrap().edge_count(), edges);
    }
    // frozen
    assert_eq!(counts::lines(3, 2), 28);
    assert_eq!(counts::lines(3, 3), 117);
    assert_eq!(counts::concurrence_edges(3, 2), 168);
}

#[test]
fn planes_match_enumeration() {
    for (n, p, h) in [(3, 2, 1), (3, 3, 1), (4, 2, 1), (3, 2, 2)] {
        let s = Space::new(n, p, h).unwrap();
        let f = s.field();
        let lines = brute_lines(&s);
        // a + s (b - a) + t (c - a) for non-collinear a, b, c
        let mut planes = BTreeSet::new();
        for a in s.points() {
            for b in s.points().filter(|&b| b > a) {
                for c in s.points().filter(|&c| c > b) {
                    if lines.iter().any(|l| l.contains(&a) && l.contains(&b) && l.contains(&c)) {
                        continue;
                    }
                    let (pa, pb, pc) = (s.coords(a), s.coords(b), s.coords(c));
                    let mut pts = BTreeSet::new();
                    for x in f.elements() {
                        for y in f.elements() {
                            let codes: Vec<u32> = (0..n as usize)
                                .map(|i| {
                                    let u = f.mul(x, f.sub(pb[i], pa[i]));
                                    let v = f.mul(y, f.sub(pc[i], pa[i]));
                                    f.add(pa[i], f.add(u, v)).code()
                                })
                                .collect();
                            pts.insert(s.point_from_codes(&codes).unwrap());
                        }
                    }
                    planes.insert(pts.into_iter().collect::<Vec<_>>());
                }
            }
        }
        assert_eq!(planes.len() as u128, counts::planes(n, s.order() as u128), "AG({n},{p}^{h})");
        let through_origin = planes.iter().filter(|e| e.contains(&0)).count();
        assert_eq!(through_origin, s.planes_through(0).len());
        assert_eq!(through_origin as u128, counts::planes_through_point(n, s.order() as u128));
    }
}

/// Maximal cliques by checking every vertex subset.
fn brute_maximal_cliques(g: &ConcurrenceGraph) -> usize {
    let v = g.vertex_count() as u32;
    let clique = |m: u32| (0..v).all(|a| m >> a & 1 == 0 || (a + 1..v).all(|b| m >> b & 1 == 0 || g.adjacent(a, b)));
    (1u32..1 << v).filter(|&m| clique(m) && (0..v).all(|x| m >> x & 1 == 1 || !clique(m | 1 << x))).count()
}

#[test]
fn clique_counts() {
    for (n, p, expected) in [(2, 2, 8), (2, 3, 81)] {
        let s = Space::new(n, p, 1).unwrap();
        let g = ConcurrenceGraph::build(&s).unwrap();
        let brute = brute_maximal_cliques(&g);
        assert_eq!(brute, expected);
        assert_eq!(g.enumerate_maximal_cliques().unwrap().len(), brute);
    }
    // AG(3,2): 8 stars and 4 non-star triangles in each of the 14 planes
    let s = Space::new(3, 2, 1).unwrap();
    let g = ConcurrenceGraph::build(&s).unwrap();
    assert_eq!(g.enumerate_maximal_cliques().unwrap().len(), 8 + 14 * 4);
}

fn for_each_permutation(v: &mut Vec<u32>, k: usize, visit: &mut impl FnMut(&[u32])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        for_each_permutation(v, k + 1, visit);
        v.swap(k, i);
    }
}

#[test]
fn collineations_of_small_planes() {
    for (p, expected) in [(2u32, 24u128), (3, 432)] {
        let s = Space::new(2, p, 1).unwrap();
        let lines: Vec<BTreeSet<PointId>> = brute_lines(&s).into_iter().map(|l| l.into_iter().collect()).collect();
        let line_set: BTreeSet<BTreeSet<PointId>> = lines.iter().cloned().collect();
        let mut count = 0u128;
        let mut perm: Vec<u32> = s.points().collect();
        for_each_permutation(&mut perm, 0, &mut |pi| {
            if lines.iter().all(|l| line_set.contains(&l.iter().map(|&x| pi[x as usize]).collect())) {
                count += 1;
            }
        });
        assert_eq!(count, expected);
        assert_eq!(affinity_order_formula(2, p, 1), expected);
        assert_eq!(affinity_closure_order(&s).unwrap() as u128, expected);
    }
}

#[test]
fn triangular_graph_automorphisms() {
    // every permutation of the 8 points induces an automorphism of T(8)
    let s = Space::new(3, 2, 1).unwrap();
    let g = ConcurrenceGraph::build(&s).unwrap();
    let mut induced = 0u32;
    let mut perm: Vec<u32> = s.points().collect();
    for_each_permutation(&mut perm, 0, &mut |pi| {
        let table: Vec<u32> = s
            .lines()
            .map(|l| {
                let pts = s.line_points(l);
                s.line_through(pi[pts[0] as usize], pi[pts[1] as usize]).unwrap()
            })
            .collect();
        let ok = (0..28u32)
            .all(|a| (a + 1..28).all(|b| g.adjacent(a, b) == g.adjacent(table[a as usize], table[b as usize])));
        induced += ok as u32;
    });
    assert_eq!(induced, 40320);
    assert_eq!(graph_automorphisms(&g).unwrap().order, 40320);

    let s = Space::new(4, 2, 1).unwrap();
    let g = ConcurrenceGraph::build(&s).unwrap();
    assert_eq!(graph_automorphisms(&g).unwrap().order, (1..=16u128).product::<u128>());
}

#[test]
fn plane_graphs_are_complete_multipartite() {
    // lines of a plane of order q meet unless parallel: q + 1 classes of q lines,
    // so the group is (q + 1)! * (q!)^(q + 1)
    for (p, h) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let s = Space::new(2, p, h).unwrap();
        let q = s.order() as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        let expected = fact(q + 1) * fact(q).pow(q as u32 + 1);
        let g = ConcurrenceGraph::build(&s).unwrap();
        let auts = graph_automorphisms(&g).unwrap();
        assert_eq!(auts.order, expected, "AG(2,{q})");
        assert!(auts.certified);
    }
}
