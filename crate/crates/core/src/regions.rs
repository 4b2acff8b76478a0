//! Disk-membership labels and the topology of the labelled regions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{circle_circle_intersect, Circle, IntersectionPair, Point2};
use crate::objective::SensorConfig;
use crate::scalar::{lit, Scalar};
use crate::union_find::UnionFind;

/// Membership bits `(i1, i2, i3)`; bit `j` is set when the point lies in closed disk `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionLabel(pub u8);

impl RegionLabel {
    pub const NONE: RegionLabel = RegionLabel(0);
    pub const ALL: RegionLabel = RegionLabel(0b111);

    pub fn from_bits(bits: [bool; 3]) -> Self {
        RegionLabel(bits.iter().enumerate().fold(0, |m, (j, b)| m | ((*b as u8) << j)))
    }

    pub fn inside(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn bits(self) -> [bool; 3] {
        [self.inside(0), self.inside(1), self.inside(2)]
    }

    /// Number of disks containing the region.
    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn all() -> impl Iterator<Item = RegionLabel> {
        (0..8u8).map(RegionLabel)
    }

    /// Single-disk label for 0-based disk `j`.
    pub fn single(j: usize) -> Self {
        RegionLabel(1 << j)
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.bits();
        write!(f, "{}{}{}", a as u8, b as u8, c as u8)
    }
}

/// Label of `w`; points within `tol` of a circle count as inside it.
pub fn classify_point<T: Scalar>(config: &SensorConfig<T>, w: Point2<T>, tol: T) -> RegionLabel {
    RegionLabel::from_bits([0, 1, 2].map(|j| w.dist(config.sensors[j]) <= config.ranges[j] + tol))
}

/// Topology flags of one labelled region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTopology {
    pub nonempty: bool,
    pub connected: bool,
    pub components: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionTopology {
    pub labels: [LabelTopology; 8],
    pub r3_nonempty: bool,
}

impl RegionTopology {
    pub fn get(&self, label: RegionLabel) -> LabelTopology {
        self.labels[label.0 as usize]
    }

    /// Single-disk regions are all nonempty and connected, and the triple overlap is nonempty.
    pub fn all_regions_connected(&self) -> bool {
        self.r3_nonempty
            && (0..3).all(|j| {
                let t = self.get(RegionLabel::single(j));
                t.nonempty && t.connected
            })
    }
}

/// True when some point of the sensor triangle lies outside every open disk.
pub fn k_nonempty<T: Scalar>(config: &SensorConfig<T>, tol: T) -> bool {
    let z = config.sensors;
    let eps = tol * config.scale();
    let in_triangle = |p: Point2<T>| {
        let s = [0, 1, 2].map(|k| (z[(k + 1) % 3] - z[k]).cross(p - z[k]));
        let area = (z[1] - z[0]).cross(z[2] - z[0]).abs();
        let slack = eps * config.scale().max(area.sqrt());
        s.iter().all(|v| *v >= -slack) || s.iter().all(|v| *v <= slack)
    };
    let outside_all = |p: Point2<T>| (0..3).all(|j| p.dist(z[j]) >= config.ranges[j] - eps);
    let circles = config.circles();
    let mut corners: Vec<Point2<T>> = z.to_vec();
    for i in 0..3 {
        for j in i + 1..3 {
            if let Ok(pair) = circle_circle_intersect(&circles[i], &circles[j], z[3 - i - j], None) {
                corners.extend(pair.plus());
                corners.extend(pair.minus());
            }
        }
    }
    for k in 0..3 {
        let (a, b) = (z[k], z[(k + 1) % 3]);
        for c in &circles {
            corners.extend(segment_circle(a, b, c));
        }
    }
    corners.into_iter().any(|p| in_triangle(p) && outside_all(p))
}

fn segment_circle<T: Scalar>(a: Point2<T>, b: Point2<T>, c: &Circle<T>) -> Vec<Point2<T>> {
    let d = b - a;
    let f = a - c.center;
    let qa = d.norm_sq();
    if qa == T::zero() {
        return Vec::new();
    }
    let qb = d.dot(f);
    let qc = f.norm_sq() - c.radius * c.radius;
    let disc = qb * qb - qa * qc;
    if disc < T::zero() {
        return Vec::new();
    }
    let root = disc.sqrt();
    [(-qb - root) / qa, (-qb + root) / qa]
        .into_iter()
        .filter(|t| *t >= T::zero() && *t <= T::one())
        .map(|t| a + d * t)
        .collect()
}

struct Arc<T> {
    circle: usize,
    start: Option<usize>,
    end: Option<usize>,
    mid: Point2<T>,
}

struct Vertex<T> {
    at: Point2<T>,
}

/// Decides nonemptiness and connectedness of all eight regions from the circle arrangement.
///
/// Regions touching at a single point count as connected.
pub fn region_topology<T: Scalar>(config: &SensorConfig<T>, tol: T) -> Result<RegionTopology> {
    let circles = config.circles();
    let scale = config.scale();
    let abs_tol = tol * scale;
    let positive: Vec<usize> = (0..3).filter(|j| circles[*j].radius > T::zero()).collect();

    // vertices and the circles through them
    let mut vertices: Vec<Vertex<T>> = Vec::new();
    let mut on_circle: Vec<Vec<usize>> = vec![Vec::new(); 3];
    let mut adjacency = UnionFind::new(3);
    for (a, &i) in positive.iter().enumerate() {
        for &j in &positive[a + 1..] {
            let third = config.sensors[3 - i - j];
            let pair = circle_circle_intersect(&circles[i], &circles[j], third, None)?;
            let pts = match pair {
                IntersectionPair::Empty => vec![],
                IntersectionPair::Tangent(p) => vec![p],
                IntersectionPair::Two { plus, minus } => vec![plus, minus],
            };
            for p in pts {
                let k = 3 - i - j;
                if circles[k].radius > T::zero() && circles[k].signed_gap(p).abs() <= abs_tol {
                    return Err(Error::DegenerateArrangement);
                }
                if circles[k].radius == T::zero() && p.dist(circles[k].center) <= abs_tol {
                    return Err(Error::DegenerateArrangement);
                }
                on_circle[i].push(vertices.len());
                on_circle[j].push(vertices.len());
                vertices.push(Vertex { at: p });
                adjacency.union(i, j);
            }
        }
    }

    // arcs, ordered counter-clockwise per circle
    let angle = |c: usize, p: Point2<T>| {
        let v = p - circles[c].center;
        v.y.atan2(v.x)
    };
    let point_at = |c: usize, a: T| {
        circles[c].center + Point2::new(a.cos(), a.sin()) * circles[c].radius
    };
    let tau = T::PI() + T::PI();
    let mut arcs: Vec<Arc<T>> = Vec::new();
    let mut arcs_of: Vec<Vec<(T, usize)>> = vec![Vec::new(); 3];
    for &c in &positive {
        let mut vs: Vec<(T, usize)> = on_circle[c].iter().map(|&v| (angle(c, vertices[v].at), v)).collect();
        vs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if vs.is_empty() {
            arcs_of[c].push((T::zero(), arcs.len()));
            arcs.push(Arc { circle: c, start: None, end: None, mid: point_at(c, T::zero()) });
            continue;
        }
        for k in 0..vs.len() {
            let (a0, v0) = vs[k];
            let (mut a1, v1) = vs[(k + 1) % vs.len()];
            if a1 <= a0 {
                a1 = a1 + tau;
            }
            arcs_of[c].push((a0, arcs.len()));
            arcs.push(Arc {
                circle: c,
                start: Some(v0),
                end: Some(v1),
                mid: point_at(c, (a0 + a1) * lit(0.5)),
            });
        }
    }
    // arc of circle `c` covering angle `a`
    let arc_at = |c: usize, a: T| -> usize {
        let list = &arcs_of[c];
        let mut best = list[list.len() - 1].1;
        for &(start, id) in list {
            if start <= a {
                best = id;
            }
        }
        best
    };

    let inner = |arc: usize| 2 * arc;
    let outer = |arc: usize| 2 * arc + 1;
    let unbounded = 2 * arcs.len();
    let mut faces = UnionFind::new(2 * arcs.len() + 1);

    // sectors around each vertex
    for (vid, v) in vertices.iter().enumerate() {
        struct HalfEdge<T> {
            tangent: Point2<T>,
            curvature: T,
            left: usize,
            right: usize,
        }
        let mut halves: Vec<HalfEdge<T>> = Vec::new();
        for (id, arc) in arcs.iter().enumerate() {
            let c = arc.circle;
            let radial = (v.at - circles[c].center) * circles[c].radius.recip();
            let ccw = radial.perp();
            let k = circles[c].radius.recip();
            if arc.start == Some(vid) {
                // leaves counter-clockwise; centre on the left
                halves.push(HalfEdge { tangent: ccw, curvature: k, left: inner(id), right: outer(id) });
            }
            if arc.end == Some(vid) {
                halves.push(HalfEdge { tangent: -ccw, curvature: -k, left: outer(id), right: inner(id) });
            }
        }
        // group equal tangents, then sort by angle and curvature
        let mut keyed: Vec<(T, T, usize)> = Vec::new();
        let mut reps: Vec<(Point2<T>, T)> = Vec::new();
        for (h, he) in halves.iter().enumerate() {
            let theta = match reps.iter().find(|(t, _)| t.dot(he.tangent) > T::one() - lit(1e-12)) {
                Some((_, a)) => *a,
                None => {
                    let a = he.tangent.y.atan2(he.tangent.x);
                    reps.push((he.tangent, a));
                    a
                }
            };
            keyed.push((theta, he.curvature, h));
        }
        keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
        let m = keyed.len();
        for k in 0..m {
            let cur = &halves[keyed[k].2];
            let next = &halves[keyed[(k + 1) % m].2];
            faces.union(cur.left, next.right);
        }
    }

    // full circles: inner and outer sides of the single arc are separate unless joined above
    // nesting of connected components via a ray from an extreme point
    let dir = Point2::new(lit::<T>(0.8253356149096783), lit(0.5646424733950354));
    let mut comp_done = [false; 3];
    for &c in &positive {
        let root = adjacency.find(c);
        if comp_done[root] {
            continue;
        }
        comp_done[root] = true;
        let members: Vec<usize> = positive.iter().copied().filter(|&k| adjacency.find(k) == root).collect();
        let lowest = *members
            .iter()
            .min_by(|&&a, &&b| {
                let ka = circles[a].center.dot(dir) - circles[a].radius;
                let kb = circles[b].center.dot(dir) - circles[b].radius;
                ka.partial_cmp(&kb).unwrap()
            })
            .unwrap();
        let p = circles[lowest].center - dir * circles[lowest].radius;
        let start_arc = arc_at(lowest, angle(lowest, p));
        let mut hit: Option<(T, usize)> = None;
        for &o in &positive {
            if members.contains(&o) {
                continue;
            }
            let w = p - circles[o].center;
            let b = w.dot(dir);
            let disc = b * b - w.norm_sq() + circles[o].radius * circles[o].radius;
            if disc < T::zero() {
                continue;
            }
            let root_d = disc.sqrt();
            for t in [b - root_d, b + root_d] {
                if t > T::zero() && hit.map_or(true, |(bt, _)| t < bt) {
                    hit = Some((t, o));
                }
            }
        }
        let target = match hit {
            None => unbounded,
            Some((t, o)) => {
                let q = p - dir * t;
                let arc = arc_at(o, angle(o, q));
                if (circles[o].center - q).dot(dir) > T::zero() {
                    inner(arc)
                } else {
                    outer(arc)
                }
            }
        };
        faces.union(outer(start_arc), target);
    }

    // label of every side; consistency within a face is an invariant
    let mask_positive: u8 = positive.iter().fold(0, |m, j| m | (1 << j));
    let side_label = |arc: &Arc<T>, inside: bool| -> u8 {
        let mut bits = 0u8;
        for &j in &positive {
            let set = if j == arc.circle { inside } else { arc.mid.dist(circles[j].center) < circles[j].radius };
            if set {
                bits |= 1 << j;
            }
        }
        bits
    };
    let mut face_label: Vec<Option<u8>> = vec![None; 2 * arcs.len() + 1];
    let mut assign = |faces: &mut UnionFind, node: usize, label: u8| -> Result<()> {
        let r = faces.find(node);
        match face_label[r] {
            Some(l) if l != label => Err(Error::Internal(format!(
                "face labels disagree ({l:03b} vs {label:03b})"
            ))),
            _ => {
                face_label[r] = Some(label);
                Ok(())
            }
        }
    };
    assign(&mut faces, unbounded, 0)?;
    for (id, arc) in arcs.iter().enumerate() {
        assign(&mut faces, inner(id), side_label(arc, true))?;
        assign(&mut faces, outer(id), side_label(arc, false))?;
    }

    // vertices touched by each face
    let n_nodes = 2 * arcs.len() + 1;
    let mut face_vertices: Vec<Vec<usize>> = vec![Vec::new(); n_nodes];
    for (id, arc) in arcs.iter().enumerate() {
        for side in [inner(id), outer(id)] {
            let r = faces.find(side);
            face_vertices[r].extend(arc.start);
            face_vertices[r].extend(arc.end);
        }
    }
    let face_roots: Vec<usize> = {
        let mut r: Vec<usize> = (0..n_nodes).map(|n| faces.find(n)).collect();
        r.sort_unstable();
        r.dedup();
        r
    };

    let vertex_in = |v: &Vertex<T>, label: RegionLabel| -> bool {
        (0..3).all(|j| {
            let gap = circles[j].signed_gap(v.at);
            if gap.abs() <= abs_tol {
                return true;
            }
            (gap < T::zero()) == label.inside(j)
        })
    };

    let mut labels = [LabelTopology { nonempty: false, connected: true, components: 0 }; 8];
    for label in RegionLabel::all() {
        let point_disks: Vec<usize> = (0..3).filter(|j| circles[*j].radius == T::zero() && label.inside(*j)).collect();
        let topo = if let Some(&j) = point_disks.first() {
            let p = circles[j].center;
            let ok = (0..3).all(|k| {
                let gap = circles[k].signed_gap(p);
                if gap.abs() <= abs_tol {
                    true
                } else {
                    (gap < T::zero()) == label.inside(k)
                }
            });
            let n = usize::from(ok);
            LabelTopology { nonempty: ok, connected: true, components: n }
        } else {
            let want = label.0 & mask_positive;
            let my_faces: Vec<usize> = face_roots
                .iter()
                .copied()
                .filter(|r| face_label[*r] == Some(want))
                .collect();
            let my_vertices: Vec<usize> =
                (0..vertices.len()).filter(|v| vertex_in(&vertices[*v], label)).collect();
            let mut uf = UnionFind::new(n_nodes + vertices.len());
            for &f in &my_faces {
                for &v in &face_vertices[f] {
                    if my_vertices.contains(&v) {
                        uf.union(f, n_nodes + v);
                    }
                }
            }
            let nodes = my_faces.iter().copied().chain(my_vertices.iter().map(|v| n_nodes + v));
            let components = uf.count_among(nodes);
            LabelTopology { nonempty: components > 0, connected: components <= 1, components }
        };
        labels[label.0 as usize] = topo;
    }
    Ok(RegionTopology { labels, r3_nonempty: labels[7].nonempty })
}
