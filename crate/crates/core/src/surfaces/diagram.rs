use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::polygon::{q, PolygonModel, Point, Q};
use super::word::{GeneratorWord, Letter};
use crate::error::{Error, Result};

mod qser {
    use super::super::polygon::{q_from_str, q_to_string, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        q_from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Leaving the polygon through `side` at `param` and re-entering through
/// the partner side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCrossing {
    pub side: usize,
    #[serde(with = "qser")]
    pub param: Q,
    pub reentry_side: usize,
    #[serde(with = "qser")]
    pub reentry_param: Q,
}

/// A polyline path on the fundamental polygon. `crossings[i]` joins the
/// last point of `pieces[i]` to the first point of `pieces[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDiagram {
    pub source: usize,
    pub target: usize,
    pub start_corner: usize,
    pub end_corner: usize,
    pub pieces: Vec<Vec<Point>>,
    pub crossings: Vec<SideCrossing>,
}

/// Which end of a path a direction belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum End {
    /// The starting direction α^∧.
    Start,
    /// The ending direction α^∨.
    End,
}

impl End {
    pub const BOTH: [End; 2] = [End::Start, End::End];

    pub fn index(self) -> usize {
        match self {
            End::Start => 0,
            End::End => 1,
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            End::Start => 1,
            End::End => -1,
        }
    }
}

impl PathDiagram {
    pub fn start_point(&self) -> &Point {
        &self.pieces[0][0]
    }

    pub fn end_point(&self) -> &Point {
        self.pieces.last().unwrap().last().unwrap()
    }

    pub fn corner(&self, e: End) -> usize {
        match e {
            End::Start => self.start_corner,
            End::End => self.end_corner,
        }
    }

    /// Direction pointing from the marked corner into the polygon.
    pub fn outward_direction(&self, e: End) -> Point {
        match e {
            End::Start => self.pieces[0][1].sub(&self.pieces[0][0]),
            End::End => {
                let p = self.pieces.last().unwrap();
                p[p.len() - 2].sub(&p[p.len() - 1])
            }
        }
    }

    pub fn segment_count(&self) -> usize {
        self.pieces.iter().map(|p| p.len() - 1).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn validate(&self, pm: &PolygonModel) -> Result<()> {
        let n = pm.side_count();
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if self.pieces.is_empty() || self.pieces.iter().any(|p| p.len() < 2) {
            return bad("every piece needs at least two points".into());
        }
        if self.crossings.len() + 1 != self.pieces.len() {
            return bad("crossing count must be one less than piece count".into());
        }
        if self.start_corner >= n || self.end_corner >= n {
            return bad("corner index out of range".into());
        }
        if pm.corner_point[self.start_corner] != self.source
            || pm.corner_point[self.end_corner] != self.target
        {
            return bad("endpoint corners do not match the marked points".into());
        }
        if self.start_point() != &pm.vertices[self.start_corner]
            || self.end_point() != &pm.vertices[self.end_corner]
        {
            return bad("path must start and end at its corners".into());
        }
        for (i, c) in self.crossings.iter().enumerate() {
            if c.side >= n || pm.sides[c.side].partner != Some(c.reentry_side) {
                return bad(format!("crossing {i} does not use an identified side pair"));
            }
            if !c.param.is_positive() || c.param >= Q::one() {
                return bad(format!("crossing {i} hits a corner"));
            }
            if pm.identify(c.side, &c.param) != Some((c.reentry_side, c.reentry_param.clone())) {
                return bad(format!("crossing {i} re-enters at the wrong point"));
            }
            if self.pieces[i].last().unwrap() != &pm.side_point(c.side, &c.param)
                || self.pieces[i + 1][0] != pm.side_point(c.reentry_side, &c.reentry_param)
            {
                return bad(format!("crossing {i} is not attached to its pieces"));
            }
        }
        for piece in &self.pieces {
            for (k, p) in piece.iter().enumerate() {
                let inner = k > 0 && k + 1 < piece.len();
                if inner && !pm.inside_open(p) {
                    return bad(format!("interior point {p} is not strictly inside"));
                }
                if !pm.inside_closed(p) {
                    return bad(format!("point {p} is outside the polygon"));
                }
            }
            for w in piece.windows(2) {
                if w[0] == w[1] {
                    return bad("repeated point".into());
                }
                let mid = w[0].lerp(&w[1], &q(1, 2));
                if !pm.inside_open(&mid) {
                    return bad(format!("segment {} – {} runs along the boundary", w[0], w[1]));
                }
                for (c, v) in pm.vertices.iter().enumerate() {
                    if v == &w[0] || v == &w[1] {
                        if (v == self.start_point() && c == self.start_corner)
                            || (v == self.end_point() && c == self.end_corner)
                        {
                            continue;
                        }
                        return bad(format!("segment touches corner {c}"));
                    }
                    if on_open_segment(&w[0], &w[1], v) {
                        return bad(format!("segment passes through corner {c}"));
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn on_open_segment(a: &Point, b: &Point, p: &Point) -> bool {
    if !super::polygon::orient(a, b, p).is_zero() {
        return false;
    }
    let d = b.sub(a);
    let t = if d.x.is_zero() {
        (&p.y - &a.y) / &d.y
    } else {
        (&p.x - &a.x) / &d.x
    };
    t.is_positive() && t < Q::one()
}

fn interval_index(pm: &PolygonModel, corner: usize) -> usize {
    if corner == 0 {
        pm.side_count()
    } else {
        corner
    }
}

/// Word of the boundary walk between two corners avoiding the β_1 side.
pub fn boundary_walk(pm: &PolygonModel, from: usize, to: usize) -> Vec<Letter> {
    let a = interval_index(pm, from);
    let b = interval_index(pm, to);
    if a <= b {
        (a..b).map(|k| pm.sides[k].label).collect()
    } else {
        (b..a).rev().map(|k| pm.sides[k].label.inv()).collect()
    }
}

/// Corners between which each piece runs, after sliding side points to the
/// source corner of their side's generator.
pub fn piece_anchors(d: &PathDiagram, pm: &PolygonModel) -> Vec<(usize, usize)> {
    (0..d.pieces.len())
        .map(|i| {
            let s = if i == 0 {
                d.start_corner
            } else {
                pm.anchor(d.crossings[i - 1].reentry_side)
            };
            let e = if i + 1 == d.pieces.len() {
                d.end_corner
            } else {
                pm.anchor(d.crossings[i].side)
            };
            (s, e)
        })
        .collect()
}

pub(crate) fn word_from_letters(source: usize, target: usize, letters: Vec<Letter>) -> GeneratorWord {
    GeneratorWord {
        source,
        target,
        letters,
    }
    .reduced()
}

/// Reads the homotopy class of a diagram as a freely reduced word.
pub fn word_of_diagram(d: &PathDiagram, pm: &PolygonModel) -> Result<GeneratorWord> {
    d.validate(pm)?;
    Ok(word_of_diagram_unchecked(d, pm))
}

pub(crate) fn word_of_diagram_unchecked(d: &PathDiagram, pm: &PolygonModel) -> GeneratorWord {
    let mut letters = Vec::new();
    for (s, e) in piece_anchors(d, pm) {
        letters.extend(boundary_walk(pm, s, e));
    }
    word_from_letters(d.source, d.target, letters)
}

/// Where a based loop leaves and re-enters its corner. Parameters in (0,1)
/// interpolate between the corner's outgoing side (0) and incoming side (1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stubs {
    pub corner: usize,
    pub start: Q,
    pub end: Q,
}

struct Leg {
    start: usize,
    end: usize,
    inner: Vec<Point>,
}

struct Builder<'a> {
    pm: &'a PolygonModel,
    rng: ChaCha8Rng,
    pieces: Vec<Vec<Point>>,
    crossings: Vec<SideCrossing>,
}

impl<'a> Builder<'a> {
    fn jitter(&mut self, lo: i64, hi: i64, den: i64) -> Q {
        q(self.rng.gen_range(lo..=hi), den)
    }

    fn emit(&mut self, p: Point) {
        self.pieces.last_mut().unwrap().push(p);
    }

    fn leg(&mut self, l: Letter, prefer_partner: bool) -> Result<Leg> {
        let pm = self.pm;
        let direct = pm.side_of(l);
        let partner = pm.side_of(l.inv());
        let (side, forward) = match (direct, partner) {
            (Some(a), Some(b)) => {
                if prefer_partner {
                    (b, false)
                } else {
                    (a, true)
                }
            }
            (Some(a), None) => (a, true),
            (None, Some(b)) => (b, false),
            (None, None) => {
                return Err(Error::InvalidWord(format!(
                    "letter {l} is not a side of this polygon"
                )))
            }
        };
        let n = pm.side_count();
        let tau = self.jitter(300, 700, 1000);
        let depth = self.jitter(150, 450, 1000);
        let m = pm.side_point(side, &tau).lerp(&pm.centroid(), &depth);
        let (start, end) = if forward {
            (side, (side + 1) % n)
        } else {
            ((side + 1) % n, side)
        };
        Ok(Leg {
            start,
            end,
            inner: vec![m],
        })
    }

    fn cross(&mut self, side: usize, t: Q) -> usize {
        let pm = self.pm;
        let (s2, t2) = pm.identify(side, &t).expect("interior side");
        self.emit(pm.side_point(side, &t));
        self.crossings.push(SideCrossing {
            side,
            param: t,
            reentry_side: s2,
            reentry_param: t2.clone(),
        });
        self.pieces.push(vec![pm.side_point(s2, &t2)]);
        if t2 < q(1, 2) {
            s2
        } else {
            (s2 + 1) % pm.side_count()
        }
    }

    /// Joins the last emitted point (near corner `x`) to `b` (near corner `y`)
    /// by turning around their common marked point.
    fn route(&mut self, x: usize, y: usize, b: Point) -> Result<()> {
        let pm = self.pm;
        let n = pm.side_count();
        let (px, ix) = pm.chain_pos[x];
        let (py, iy) = pm.chain_pos[y];
        if px != py {
            return Err(Error::InvalidWord("letters are not composable".into()));
        }
        let mut cur = x;
        while cur != y {
            let lam = self.jitter(10, 24, 1024);
            cur = if iy > ix {
                self.cross((cur + n - 1) % n, Q::one() - lam)
            } else {
                self.cross(cur, lam)
            };
        }
        self.emit(b);
        Ok(())
    }

    fn near(&mut self, corner: usize, toward: &Point) -> Point {
        let lam = self.jitter(16, 40, 1024);
        self.pm.vertices[corner].lerp(toward, &lam)
    }

    fn stub_tip(&mut self, corner: usize, s: &Q) -> Point {
        let pm = self.pm;
        let n = pm.side_count();
        let v = &pm.vertices[corner];
        let out = pm.vertices[(corner + 1) % n].sub(v);
        let inc = pm.vertices[(corner + n - 1) % n].sub(v);
        let dir = out.scale(&(Q::one() - s)).add(&inc.scale(s));
        v.add(&dir.scale(&q(1, 24)))
    }
}

/// Realizes a word as a polyline built from per-generator templates joined
/// near the marked points. `seed` perturbs every free parameter.
pub fn diagram_from_word(w: &GeneratorWord, pm: &PolygonModel, seed: u64) -> Result<PathDiagram> {
    build(w, pm, seed, None)
}

/// Like [`diagram_from_word`] for a closed word, but leaving and returning
/// to `stubs.corner` along the given directions.
pub fn based_loop_from_word(
    w: &GeneratorWord,
    pm: &PolygonModel,
    seed: u64,
    stubs: Stubs,
) -> Result<PathDiagram> {
    build(w, pm, seed, Some(stubs))
}

fn build(w: &GeneratorWord, pm: &PolygonModel, seed: u64, stubs: Option<Stubs>) -> Result<PathDiagram> {
    pm.spec.check_word(w)?;
    let w = w.reduced();
    if w.is_constant() {
        return Err(Error::DegeneratePath("constant paths have no diagram".into()));
    }
    if let Some(s) = &stubs {
        if !w.is_closed() || pm.corner_point[s.corner] != w.source {
            return Err(Error::InvalidArgument(
                "stubs need a closed word based at the stub corner".into(),
            ));
        }
        let ok = |t: &Q| t.is_positive() && t < &Q::one();
        if !ok(&s.start) || !ok(&s.end) || s.start == s.end {
            return Err(Error::InvalidArgument("stub parameters must be distinct, in (0,1)".into()));
        }
    }
    let mut b = Builder {
        pm,
        rng: ChaCha8Rng::seed_from_u64(seed),
        pieces: vec![Vec::new()],
        crossings: Vec::new(),
    };
    let mut legs = Vec::with_capacity(w.len());
    for l in &w.letters {
        let flip = b.rng.gen_bool(0.5);
        legs.push(b.leg(*l, flip)?);
    }
    let (start_corner, end_corner) = match &stubs {
        Some(s) => (s.corner, s.corner),
        None => (legs[0].start, legs.last().unwrap().end),
    };
    b.emit(pm.vertices[start_corner].clone());
    // (corner, point) the path currently hangs near, waiting for the next leg
    let mut pending: Option<usize> = None;
    if let Some(s) = &stubs {
        let tip = b.stub_tip(s.corner, &s.start);
        b.emit(tip);
        pending = Some(s.corner);
    }
    let count = legs.len();
    for (i, leg) in legs.iter().enumerate() {
        if let Some(x) = pending {
            let entry = b.near(leg.start, &leg.inner[0]);
            b.route(x, leg.start, entry)?;
        }
        for p in &leg.inner {
            b.emit(p.clone());
        }
        if i + 1 == count && stubs.is_none() {
            b.emit(pm.vertices[leg.end].clone());
        } else {
            let exit = b.near(leg.end, leg.inner.last().unwrap());
            b.emit(exit);
            pending = Some(leg.end);
        }
    }
    if let Some(s) = &stubs {
        let tip = b.stub_tip(s.corner, &s.end);
        b.route(pending.unwrap(), s.corner, tip)?;
        b.emit(pm.vertices[s.corner].clone());
    }
    let d = PathDiagram {
        source: w.source,
        target: w.target,
        start_corner,
        end_corner,
        pieces: b.pieces,
        crossings: b.crossings,
    };
    d.validate(pm)?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::polygon::polygon_model;
    use crate::surfaces::SurfaceSpec;

    fn pm(g: usize, b: usize) -> PolygonModel {
        polygon_model(&SurfaceSpec::new(g, b).unwrap())
    }

    #[test]
    fn generator_template_reads_itself() {
        let pm = pm(1, 1);
        for s in ["C_1", "D_1", "C_1^-1", "B_1"] {
            let w = GeneratorWord::parse(s).unwrap();
            for seed in 0..4 {
                let d = diagram_from_word(&w, &pm, seed).unwrap();
                assert_eq!(d.pieces.len(), 1);
                let read = word_of_diagram(&d, &pm).unwrap();
                assert_eq!(read, pm.spec.canonical(&w));
            }
        }
    }

    #[test]
    fn alpha_template_on_annulus() {
        let pm = pm(0, 2);
        let d = diagram_from_word(&GeneratorWord::parse("A_2").unwrap(), &pm, 1).unwrap();
        assert_eq!(word_of_diagram(&d, &pm).unwrap().to_string(), "A_2");
    }

    #[test]
    fn commutator_round_trip() {
        let pm = pm(1, 1);
        let w = GeneratorWord::parse("C_1 D_1 C_1^-1 D_1^-1").unwrap();
        for seed in 0..8 {
            let d = diagram_from_word(&w, &pm, seed).unwrap();
            assert_eq!(word_of_diagram(&d, &pm).unwrap(), w);
        }
    }

    #[test]
    fn two_letter_word_has_one_junction() {
        let pm = pm(1, 1);
        let w = GeneratorWord::parse("C_1 D_1").unwrap();
        let d = diagram_from_word(&w, &pm, 3).unwrap();
        assert_eq!(word_of_diagram(&d, &pm).unwrap(), w);
    }

    #[test]
    fn constant_word_is_rejected() {
        let pm = pm(1, 1);
        let e = GeneratorWord::identity(1);
        assert!(matches!(
            diagram_from_word(&e, &pm, 0),
            Err(Error::DegeneratePath(_))
        ));
    }

    #[test]
    fn based_loop_keeps_its_word() {
        let pm = pm(1, 2);
        let w = GeneratorWord::parse("C_1 A_2 B_2 A_2^-1").unwrap();
        let stubs = Stubs {
            corner: pm.chains[0][2],
            start: q(1, 5),
            end: q(3, 10),
        };
        let d = based_loop_from_word(&w, &pm, 9, stubs).unwrap();
        assert_eq!(word_of_diagram(&d, &pm).unwrap(), w);
    }

    #[test]
    fn json_round_trip() {
        let pm = pm(0, 3);
        let w = GeneratorWord::parse("A_2 B_2^-1 A_2^-1 A_3").unwrap();
        let d = diagram_from_word(&w, &pm, 5).unwrap();
        let back = PathDiagram::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn tampered_diagram_fails_validation() {
        let pm = pm(0, 2);
        let w = GeneratorWord::parse("A_2 B_2").unwrap();
        let mut d = diagram_from_word(&w, &pm, 2).unwrap();
        d.pieces[0].insert(1, pm.vertices[2].clone());
        assert!(d.validate(&pm).is_err());
    }
}
