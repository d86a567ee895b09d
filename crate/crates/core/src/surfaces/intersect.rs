use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::diagram::{boundary_walk, piece_anchors, word_from_letters, End, PathDiagram};
use super::polygon::{cross, q, PolygonModel, Point, Q};
use super::word::GeneratorWord;
use crate::error::{Error, Result};

/// Reference corner used to cut paths at interior points. Corner 1 always
/// represents p_1 when the surface is not a disk.
const CUT_CORNER: usize = 1;

/// Location of a point on a diagram: piece, segment within the piece and
/// parameter along the segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathLocation {
    pub piece: usize,
    pub segment: usize,
    #[serde(serialize_with = "ser_q")]
    pub t: Q,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&super::polygon::q_to_string(x))
}

/// Prefix runs from the path's source to the cut, suffix from the cut to the
/// target, both through the reference corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub prefix: GeneratorWord,
    pub suffix: GeneratorWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub sign: i32,
    pub point: Point,
    pub alpha_at: PathLocation,
    pub beta_at: PathLocation,
    pub alpha_split: Split,
    pub beta_split: Split,
}

impl Crossing {
    /// Word of α∗_qβ.
    pub fn alpha_then_beta(&self) -> GeneratorWord {
        concat_reduced(&self.alpha_split.prefix, &self.beta_split.suffix)
    }

    /// Word of β∗_qα.
    pub fn beta_then_alpha(&self) -> GeneratorWord {
        concat_reduced(&self.beta_split.prefix, &self.alpha_split.suffix)
    }

    /// Word of α^{a} ∗_q β^{b} for a, b ∈ {+1, −1}.
    pub fn reroute(&self, alpha_forward: bool, beta_forward: bool) -> GeneratorWord {
        let first = if alpha_forward {
            self.alpha_split.prefix.clone()
        } else {
            self.alpha_split.suffix.inverse()
        };
        let second = if beta_forward {
            self.beta_split.suffix.clone()
        } else {
            self.beta_split.prefix.inverse()
        };
        concat_reduced(&first, &second)
    }
}

fn concat_reduced(a: &GeneratorWord, b: &GeneratorWord) -> GeneratorWord {
    a.concat(b).expect("cut words meet at the reference corner").reduced()
}

/// Relation between the end `I` of α and the end `J` of β.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointRelation {
    /// Marked point shared by the two ends, if any.
    pub shared: Option<usize>,
    /// ε(α^I, β^J) ∈ {0, ±1/2}.
    #[serde(serialize_with = "ser_q")]
    pub sign: Q,
    /// Whether α^I is on the left of β^J (meaningful only when shared).
    pub alpha_left: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionData {
    pub crossings: Vec<Crossing>,
    /// Indexed by `[I.index()][J.index()]`.
    pub endpoints: [[EndpointRelation; 2]; 2],
}

impl IntersectionData {
    pub fn endpoint(&self, i: End, j: End) -> &EndpointRelation {
        &self.endpoints[i.index()][j.index()]
    }

    pub fn endpoint_sum(&self) -> Q {
        self.endpoints
            .iter()
            .flatten()
            .fold(Q::zero(), |acc, e| acc + &e.sign)
    }

    pub fn crossing_sum(&self) -> Q {
        Q::from_integer(self.crossings.iter().map(|c| c.sign as i64).sum::<i64>().into())
    }
}

/// i(α,β) = Σ ε(α^I,β^J) + Σ ε_q.
pub fn algebraic_intersection(data: &IntersectionData) -> Q {
    data.endpoint_sum() + data.crossing_sum()
}

struct Segment<'a> {
    piece: usize,
    index: usize,
    a: &'a Point,
    b: &'a Point,
    lo: (f64, f64),
    hi: (f64, f64),
}

fn segments(d: &PathDiagram) -> Vec<Segment<'_>> {
    let mut out = Vec::new();
    for (pi, piece) in d.pieces.iter().enumerate() {
        for (si, w) in piece.windows(2).enumerate() {
            let (ax, ay) = w[0].to_f64();
            let (bx, by) = w[1].to_f64();
            out.push(Segment {
                piece: pi,
                index: si,
                a: &w[0],
                b: &w[1],
                lo: (ax.min(bx) - 1e-9, ay.min(by) - 1e-9),
                hi: (ax.max(bx) + 1e-9, ay.max(by) + 1e-9),
            });
        }
    }
    out
}

/// Position of a direction at a marked point, increasing with angle.
fn compare_directions(pm: &PolygonModel, c1: usize, d1: &Point, c2: usize, d2: &Point) -> Ordering {
    let (_, i1) = pm.chain_pos[c1];
    let (_, i2) = pm.chain_pos[c2];
    match i1.cmp(&i2) {
        Ordering::Equal => {
            let c = cross(d1, d2);
            if c.is_positive() {
                Ordering::Less
            } else if c.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
        o => o,
    }
}

fn split_at(d: &PathDiagram, pm: &PolygonModel, piece: usize) -> Split {
    let anchors = piece_anchors(d, pm);
    let mut pre = Vec::new();
    for &(s, e) in &anchors[..piece] {
        pre.extend(boundary_walk(pm, s, e));
    }
    pre.extend(boundary_walk(pm, anchors[piece].0, CUT_CORNER));
    let mut suf = boundary_walk(pm, CUT_CORNER, anchors[piece].1);
    for &(s, e) in &anchors[piece + 1..] {
        suf.extend(boundary_walk(pm, s, e));
    }
    let cut = pm.corner_point[CUT_CORNER];
    Split {
        prefix: word_from_letters(d.source, cut, pre),
        suffix: word_from_letters(cut, d.target, suf),
    }
}

/// All crossings and endpoint relations of two diagrams, decided exactly.
pub fn intersection_data(
    alpha: &PathDiagram,
    beta: &PathDiagram,
    pm: &PolygonModel,
) -> Result<IntersectionData> {
    alpha.validate(pm)?;
    beta.validate(pm)?;
    let gp = |m: String| Error::NotGeneralPosition(m);

    let mut endpoints: Vec<Vec<EndpointRelation>> = Vec::new();
    for i in End::BOTH {
        let mut row = Vec::new();
        for j in End::BOTH {
            let ca = alpha.corner(i);
            let cb = beta.corner(j);
            let pa = pm.corner_point[ca];
            let pb = pm.corner_point[cb];
            if pa != pb {
                row.push(EndpointRelation {
                    shared: None,
                    sign: Q::zero(),
                    alpha_left: false,
                });
                continue;
            }
            let order = compare_directions(
                pm,
                ca,
                &alpha.outward_direction(i),
                cb,
                &beta.outward_direction(j),
            );
            let s = q((i.sign() * j.sign()) as i64, 2);
            let sign = match order {
                Ordering::Less => s,
                Ordering::Greater => -s,
                Ordering::Equal => return Err(gp("coinciding endpoint directions".into())),
            };
            row.push(EndpointRelation {
                shared: Some(pa),
                sign,
                alpha_left: order == Ordering::Greater,
            });
        }
        endpoints.push(row);
    }

    let shared_corners: Vec<&Point> = End::BOTH
        .iter()
        .flat_map(|&i| End::BOTH.iter().map(move |&j| (i, j)))
        .filter(|&(i, j)| alpha.corner(i) == beta.corner(j))
        .map(|(i, _)| &pm.vertices[alpha.corner(i)])
        .collect();

    let sa = segments(alpha);
    let sb = segments(beta);
    let mut crossings = Vec::new();
    for x in &sa {
        for y in &sb {
            if x.hi.0 < y.lo.0 || y.hi.0 < x.lo.0 || x.hi.1 < y.lo.1 || y.hi.1 < x.lo.1 {
                continue;
            }
            let r = x.b.sub(x.a);
            let s = y.b.sub(y.a);
            let qp = y.a.sub(x.a);
            let den = cross(&r, &s);
            if den.is_zero() {
                if !cross(&qp, &r).is_zero() {
                    continue;
                }
                // collinear: overlap test by projection onto r
                let rr = &r.x * &r.x + &r.y * &r.y;
                let t0 = (&qp.x * &r.x + &qp.y * &r.y) / &rr;
                let e = y.b.sub(x.a);
                let t1 = (&e.x * &r.x + &e.y * &r.y) / &rr;
                let (lo, hi) = if t0 < t1 { (t0, t1) } else { (t1, t0) };
                if hi.is_negative() || lo > Q::one() {
                    continue;
                }
                return Err(gp("collinear overlapping segments".into()));
            }
            let t = cross(&qp, &s) / &den;
            let u = cross(&qp, &r) / &den;
            let zero = Q::zero();
            let one = Q::one();
            if t < zero || t > one || u < zero || u > one {
                continue;
            }
            let point = x.a.lerp(x.b, &t);
            let interior = t.is_positive() && t < one && u.is_positive() && u < one;
            if !interior {
                if shared_corners.iter().any(|c| **c == point) {
                    continue;
                }
                return Err(gp(format!("paths touch at a segment endpoint {point}")));
            }
            crossings.push(Crossing {
                sign: if den.is_positive() { 1 } else { -1 },
                point,
                alpha_at: PathLocation {
                    piece: x.piece,
                    segment: x.index,
                    t,
                },
                beta_at: PathLocation {
                    piece: y.piece,
                    segment: y.index,
                    t: u,
                },
                alpha_split: split_at(alpha, pm, x.piece),
                beta_split: split_at(beta, pm, y.piece),
            });
        }
    }
    let mut it = endpoints.into_iter().map(|row| {
        let mut r = row.into_iter();
        [r.next().unwrap(), r.next().unwrap()]
    });
    Ok(IntersectionData {
        crossings,
        endpoints: [it.next().unwrap(), it.next().unwrap()],
    })
}

/// Truncates α at a crossing and continues along β: the smoothing α∗_qβ
/// drawn directly as a diagram.
pub fn smoothing_diagram(alpha: &PathDiagram, beta: &PathDiagram, c: &Crossing) -> PathDiagram {
    let ap = c.alpha_at.piece;
    let bp = c.beta_at.piece;
    let mut pieces: Vec<Vec<Point>> = alpha.pieces[..ap].to_vec();
    let mut joined: Vec<Point> = alpha.pieces[ap][..=c.alpha_at.segment].to_vec();
    joined.push(c.point.clone());
    joined.extend_from_slice(&beta.pieces[bp][c.beta_at.segment + 1..]);
    pieces.push(joined);
    pieces.extend_from_slice(&beta.pieces[bp + 1..]);
    let mut crossings = alpha.crossings[..ap].to_vec();
    crossings.extend_from_slice(&beta.crossings[bp..]);
    PathDiagram {
        source: alpha.source,
        target: beta.target,
        start_corner: alpha.start_corner,
        end_corner: beta.end_corner,
        pieces,
        crossings,
    }
}

/// Realizes two words by diagrams in general position with each other,
/// trying successive seeds.
pub fn realize_pair(
    wa: &GeneratorWord,
    wb: &GeneratorWord,
    pm: &PolygonModel,
    seed: u64,
) -> Result<(PathDiagram, PathDiagram, IntersectionData)> {
    use super::diagram::diagram_from_word;
    let mut last = None;
    for attempt in 0..32u64 {
        let s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(attempt * 2);
        let da = diagram_from_word(wa, pm, s)?;
        let db = diagram_from_word(wb, pm, s + 1)?;
        match intersection_data(&da, &db, pm) {
            Ok(data) => return Ok((da, db, data)),
            Err(e @ Error::NotGeneralPosition(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::diagram::{diagram_from_word, word_of_diagram_unchecked};
    use crate::surfaces::polygon::polygon_model;
    use crate::surfaces::SurfaceSpec;

    fn w(s: &str) -> GeneratorWord {
        GeneratorWord::parse(s).unwrap()
    }

    #[test]
    fn handle_generators_intersect_once() {
        let pm = polygon_model(&SurfaceSpec::new(1, 1).unwrap());
        for seed in 0..3 {
            let (_, _, data) = realize_pair(&w("C_1"), &w("D_1"), &pm, seed).unwrap();
            assert_eq!(algebraic_intersection(&data), Q::one());
        }
    }

    #[test]
    fn diagram_against_itself_is_rejected() {
        let pm = polygon_model(&SurfaceSpec::new(1, 1).unwrap());
        let d = diagram_from_word(&w("C_1 D_1"), &pm, 0).unwrap();
        assert!(matches!(
            intersection_data(&d, &d, &pm),
            Err(Error::NotGeneralPosition(_))
        ));
    }

    #[test]
    fn disjoint_paths_have_no_data() {
        let pm = polygon_model(&SurfaceSpec::new(0, 3).unwrap());
        let (_, _, data) = realize_pair(&w("B_2"), &w("B_3"), &pm, 4).unwrap();
        assert!(data.crossings.is_empty());
        assert!(algebraic_intersection(&data).is_zero());
        assert!(data.endpoints.iter().flatten().all(|e| e.shared.is_none()));
    }

    #[test]
    fn smoothing_reads_prefix_then_suffix() {
        let pm = polygon_model(&SurfaceSpec::new(1, 2).unwrap());
        let (da, db, data) =
            realize_pair(&w("C_1 D_1 A_2"), &w("A_2 B_2 A_2^-1 D_1^-1"), &pm, 7).unwrap();
        assert!(!data.crossings.is_empty());
        for c in &data.crossings {
            let drawn = word_of_diagram_unchecked(&smoothing_diagram(&da, &db, c), &pm);
            assert_eq!(drawn, c.alpha_then_beta());
        }
    }
}
