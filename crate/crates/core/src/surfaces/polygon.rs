use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::spec::SurfaceSpec;
use super::word::{Generator, Letter};
use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn q_from_str(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Q) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    /// self + t (to − self)
    pub fn lerp(&self, to: &Point, t: &Q) -> Point {
        self.add(&to.sub(self).scale(t))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap(), self.y.to_f64().unwrap())
    }
}

pub fn cross(a: &Point, b: &Point) -> Q {
    &a.x * &b.y - &a.y * &b.x
}

pub fn orient(a: &Point, b: &Point, c: &Point) -> Q {
    cross(&b.sub(a), &c.sub(a))
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", q_to_string(&self.x), q_to_string(&self.y))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [q_to_string(&self.x), q_to_string(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let x = q_from_str(&x).map_err(serde::de::Error::custom)?;
        let y = q_from_str(&y).map_err(serde::de::Error::custom)?;
        Ok(Point::new(x, y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    pub label: Letter,
    pub partner: Option<usize>,
}

impl Side {
    pub fn is_boundary(&self) -> bool {
        self.partner.is_none()
    }
}

/// The fundamental polygon. Side `k` runs counterclockwise from vertex `k`
/// to vertex `k + 1`.
#[derive(Clone, Debug)]
pub struct PolygonModel {
    pub spec: SurfaceSpec,
    pub sides: Vec<Side>,
    pub vertices: Vec<Point>,
    /// Marked point index of each corner.
    pub corner_point: Vec<usize>,
    /// Corners around each marked point in increasing angle, indexed by p - 1.
    pub chains: Vec<Vec<usize>>,
    /// (marked point, position in its chain) per corner.
    pub chain_pos: Vec<(usize, usize)>,
}

fn rational_circle_point(theta: f64) -> Point {
    let t = q(((theta / 2.0).tan() * 4096.0).round() as i64, 4096);
    let t2 = &t * &t;
    let den = Q::one() + &t2;
    Point::new((Q::one() - &t2) / &den, (&t + &t) / &den)
}

pub fn polygon_model(spec: &SurfaceSpec) -> PolygonModel {
    let mut labels: Vec<Letter> = vec![Letter::new(Generator::Beta(1), false)];
    for i in 2..=spec.boundary_count {
        labels.push(Letter::new(Generator::Alpha(i), false));
        labels.push(Letter::new(Generator::Beta(i), false));
        labels.push(Letter::new(Generator::Alpha(i), true));
    }
    for j in 1..=spec.genus {
        labels.push(Letter::new(Generator::Gamma(j), false));
        labels.push(Letter::new(Generator::Delta(j), false));
        labels.push(Letter::new(Generator::Gamma(j), true));
        labels.push(Letter::new(Generator::Delta(j), true));
    }
    let n = labels.len();
    let sides: Vec<Side> = labels
        .iter()
        .map(|l| Side {
            label: *l,
            partner: if matches!(l.generator, Generator::Beta(_)) {
                None
            } else {
                labels.iter().position(|m| *m == l.inv())
            },
        })
        .collect();
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let vertices = (0..n)
        .map(|k| rational_circle_point(-std::f64::consts::PI + step / 2.0 + step * k as f64))
        .collect();
    let corner_point: Vec<usize> = labels.iter().map(|l| l.source()).collect();

    let mut chains = vec![Vec::new(); spec.boundary_count];
    let mut chain_pos = vec![(0, 0); n];
    for (k, side) in sides.iter().enumerate() {
        if let Generator::Beta(i) = side.label.generator {
            let mut corner = k;
            loop {
                chain_pos[corner] = (i, chains[i - 1].len());
                chains[i - 1].push(corner);
                let incoming = (corner + n - 1) % n;
                match sides[incoming].partner {
                    Some(p) => corner = p,
                    None => break,
                }
            }
        }
    }
    PolygonModel {
        spec: *spec,
        sides,
        vertices,
        corner_point,
        chains,
        chain_pos,
    }
}

impl PolygonModel {
    pub fn side_count(&self) -> usize {
        self.sides.len()
    }

    pub fn side_start(&self, k: usize) -> &Point {
        &self.vertices[k]
    }

    pub fn side_end(&self, k: usize) -> &Point {
        &self.vertices[(k + 1) % self.sides.len()]
    }

    pub fn side_point(&self, k: usize, t: &Q) -> Point {
        self.side_start(k).lerp(self.side_end(k), t)
    }

    /// The corner where the side's generator starts.
    pub fn anchor(&self, k: usize) -> usize {
        if self.sides[k].label.inverse {
            (k + 1) % self.sides.len()
        } else {
            k
        }
    }

    /// Image of the point at parameter `t` of side `k` on the partner side.
    pub fn identify(&self, k: usize, t: &Q) -> Option<(usize, Q)> {
        self.sides[k].partner.map(|p| (p, Q::one() - t))
    }

    /// The side carrying a given letter, read counterclockwise.
    pub fn side_of(&self, l: Letter) -> Option<usize> {
        self.sides.iter().position(|s| s.label == l)
    }

    /// Next corner in increasing angle around the same marked point.
    pub fn chain_next(&self, corner: usize) -> Option<usize> {
        let n = self.sides.len();
        self.sides[(corner + n - 1) % n].partner
    }

    /// Next corner in decreasing angle around the same marked point.
    pub fn chain_prev(&self, corner: usize) -> Option<usize> {
        let n = self.sides.len();
        self.sides[corner].partner.map(|p| (p + 1) % n)
    }

    pub fn inside_closed(&self, p: &Point) -> bool {
        let n = self.sides.len();
        (0..n).all(|k| !orient(self.side_start(k), self.side_end(k), p).is_negative())
    }

    /// Strictly interior to the polygon.
    pub fn inside_open(&self, p: &Point) -> bool {
        let n = self.sides.len();
        (0..n).all(|k| orient(self.side_start(k), self.side_end(k), p).is_positive())
    }

    pub fn on_side(&self, k: usize, p: &Point) -> Option<Q> {
        let a = self.side_start(k);
        let b = self.side_end(k);
        if !orient(a, b, p).is_zero() {
            return None;
        }
        let d = b.sub(a);
        let t = if d.x.is_zero() {
            (&p.y - &a.y) / &d.y
        } else {
            (&p.x - &a.x) / &d.x
        };
        if t.is_negative() || t > Q::one() {
            None
        } else {
            Some(t)
        }
    }

    pub fn centroid(&self) -> Point {
        let n = Q::from_integer(BigInt::from(self.vertices.len()));
        let mut c = Point::new(Q::zero(), Q::zero());
        for v in &self.vertices {
            c = c.add(v);
        }
        c.scale(&(Q::one() / n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(pm: &PolygonModel) -> Vec<String> {
        pm.sides.iter().map(|s| s.label.to_string()).collect()
    }

    #[test]
    fn annulus_square() {
        let pm = polygon_model(&SurfaceSpec::new(0, 2).unwrap());
        assert_eq!(labels(&pm), ["B_1", "A_2", "B_2", "A_2⁻¹"]);
        assert_eq!(pm.sides[1].partner, Some(3));
        assert_eq!(pm.chains, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn torus_pentagon() {
        let pm = polygon_model(&SurfaceSpec::new(1, 1).unwrap());
        assert_eq!(labels(&pm), ["B_1", "C_1", "D_1", "C_1⁻¹", "D_1⁻¹"]);
        assert_eq!(pm.sides.iter().filter(|s| s.partner.is_some()).count(), 4);
        assert_eq!(pm.chains[0].len(), 5);
        assert_eq!(pm.chains[0][0], 0);
        assert_eq!(*pm.chains[0].last().unwrap(), 1);
    }

    #[test]
    fn disk_is_one_gon() {
        let pm = polygon_model(&SurfaceSpec::new(0, 1).unwrap());
        assert_eq!(pm.side_count(), 1);
        assert!(pm.sides[0].is_boundary());
    }

    #[test]
    fn vertices_on_unit_circle_and_convex() {
        let pm = polygon_model(&SurfaceSpec::new(1, 2).unwrap());
        let n = pm.side_count();
        assert_eq!(n, 8);
        for v in &pm.vertices {
            assert_eq!(&v.x * &v.x + &v.y * &v.y, Q::one());
        }
        for k in 0..n {
            let c = orient(&pm.vertices[k], &pm.vertices[(k + 1) % n], &pm.vertices[(k + 2) % n]);
            assert!(c.is_positive());
        }
        assert!(pm.inside_open(&pm.centroid()));
    }

    #[test]
    fn every_corner_is_in_exactly_one_chain() {
        for (g, b) in [(0, 2), (1, 1), (0, 3), (1, 2), (2, 1), (2, 3)] {
            let pm = polygon_model(&SurfaceSpec::new(g, b).unwrap());
            let mut seen: Vec<usize> = pm.chains.iter().flatten().copied().collect();
            seen.sort();
            assert_eq!(seen, (0..pm.side_count()).collect::<Vec<_>>());
            for (i, chain) in pm.chains.iter().enumerate() {
                for &c in chain {
                    assert_eq!(pm.corner_point[c], i + 1);
                }
            }
        }
    }
}
