use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::repspace::RepPoint;
use crate::surfaces::{canonical_pieces, Generator, GeneratorWord, PieceKind, SurfaceSpec};

/// Change of generating system matching a permuted piece order. Moving piece
/// Y left past X replaces each p_1 end of Y's generators by a conjugation
/// through X's boundary loop c_X, which keeps the boundary product fixed:
/// (c_X c_Y c_X⁻¹) c_X = c_X c_Y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reordering {
    pub spec: SurfaceSpec,
    pub order: Vec<PieceKind>,
    /// New generators as words in the canonical ones.
    pub to_new: BTreeMap<Generator, GeneratorWord>,
    /// Canonical generators as words in the new ones.
    pub to_old: BTreeMap<Generator, GeneratorWord>,
}

fn substitute(w: &GeneratorWord, map: &BTreeMap<Generator, GeneratorWord>) -> GeneratorWord {
    let mut acc = GeneratorWord::identity(w.source);
    for l in &w.letters {
        let image = map
            .get(&l.generator)
            .cloned()
            .unwrap_or_else(|| GeneratorWord::generator(l.generator));
        let image = if l.inverse { image.inverse() } else { image };
        acc = acc.concat(&image).expect("substitution preserves endpoints");
    }
    acc.reduced()
}

fn piece_loop(p: PieceKind) -> GeneratorWord {
    GeneratorWord::from_letters(p.first_moment_letters()).expect("piece loops are composable")
}

fn conjugated(g: Generator, c: &GeneratorWord) -> GeneratorWord {
    let mut w = GeneratorWord::generator(g);
    if g.source() == 1 {
        w = c.concat(&w).unwrap();
    }
    if g.target() == 1 {
        w = w.concat(&c.inverse()).unwrap();
    }
    w
}

impl Reordering {
    pub fn new(spec: &SurfaceSpec, order: &[PieceKind]) -> Result<Self> {
        let mut cur = canonical_pieces(spec);
        let mut sorted_want = order.to_vec();
        let mut sorted_have = cur.clone();
        sorted_want.sort_by_key(|p| format!("{p:?}"));
        sorted_have.sort_by_key(|p| format!("{p:?}"));
        if sorted_want != sorted_have {
            return Err(Error::InvalidArgument("piece order is not a permutation of the pieces".into()));
        }
        let mut to_new: BTreeMap<Generator, GeneratorWord> = BTreeMap::new();
        let mut to_old: BTreeMap<Generator, GeneratorWord> = BTreeMap::new();
        for (target, want) in order.iter().enumerate() {
            let mut k = cur.iter().position(|p| p == want).unwrap();
            while k > target {
                let (x, y) = (cur[k - 1], cur[k]);
                let c = piece_loop(x);
                let forward: BTreeMap<Generator, GeneratorWord> =
                    y.generators().iter().map(|g| (*g, conjugated(*g, &c))).collect();
                let backward: BTreeMap<Generator, GeneratorWord> =
                    y.generators().iter().map(|g| (*g, conjugated(*g, &c.inverse()))).collect();
                for g in y.generators() {
                    let expr = substitute(&forward[&g], &to_new);
                    to_new.insert(g, expr);
                }
                for g in spec.generators() {
                    let expr = to_old.get(&g).cloned().unwrap_or_else(|| GeneratorWord::generator(g));
                    to_old.insert(g, substitute(&expr, &backward));
                }
                cur.swap(k - 1, k);
                k -= 1;
            }
        }
        Ok(Reordering {
            spec: *spec,
            order: order.to_vec(),
            to_new,
            to_old,
        })
    }

    /// Coordinates of the same representation in the new generating system.
    pub fn point(&self, m: &RepPoint) -> Result<RepPoint> {
        let mats = self
            .spec
            .generators()
            .into_iter()
            .map(|g| match self.to_new.get(&g) {
                Some(w) => m.holonomy(w),
                None => m.generator(g),
            })
            .collect::<Result<_>>()?;
        RepPoint::new(self.spec, mats)
    }

    /// A canonical word rewritten in the new generators.
    pub fn word(&self, w: &GeneratorWord) -> GeneratorWord {
        let w = self.spec.expand_boundary(w);
        substitute(&w, &self.to_old)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{max_abs, AlgebraContext, Observable};
    use crate::quasipoisson::{Assoc, SurfaceFunction, SurfaceQp};
    use crate::surfaces::Letter;

    fn check(spec: SurfaceSpec, order: &[PieceKind], words: &[(&str, &str)]) {
        let ctx = AlgebraContext::gl(2);
        let r = Reordering::new(&spec, order).unwrap();
        let base = SurfaceQp::build(&spec, &ctx).unwrap();
        let moved = SurfaceQp::build_with(&spec, &ctx, order, Assoc::Left).unwrap();
        for seed in 0..4 {
            let m = RepPoint::random(&ctx, spec, seed).unwrap();
            let m2 = r.point(&m).unwrap();
            for i in 2..=spec.boundary_count {
                let a = m.boundary_moment(i).unwrap();
                let b = m2.boundary_moment(i).unwrap();
                assert!(max_abs(&(a - b)) < 1e-10);
            }
            let letters: Vec<Letter> = order.iter().flat_map(|p| p.first_moment_letters()).collect();
            let prod = m2.holonomy(&GeneratorWord::from_letters(letters).unwrap()).unwrap();
            assert!(max_abs(&(prod - m.boundary_moment(1).unwrap())) < 1e-10);
            for (a, b) in words {
                let (wa, wb) = (GeneratorWord::parse(a).unwrap(), GeneratorWord::parse(b).unwrap());
                let (ra, rb) = (r.word(&wa), r.word(&wb));
                assert!(max_abs(&(m.holonomy(&wa).unwrap() - m2.holonomy(&ra).unwrap())) < 1e-10);
                for (o1, o2) in [
                    (Observable::entry(0, 1), Observable::entry(1, 0)),
                    (Observable::trace(), Observable::entry(1, 1)),
                ] {
                    let f = SurfaceFunction::holonomy(o1.clone(), wa.clone());
                    let g = SurfaceFunction::holonomy(o2.clone(), wb.clone());
                    let f2 = SurfaceFunction::holonomy(o1, ra.clone());
                    let g2 = SurfaceFunction::holonomy(o2, rb.clone());
                    let x = base.bracket_numeric(&f, &g, &m).unwrap();
                    let y = moved.bracket_numeric(&f2, &g2, &m2).unwrap();
                    assert!((x - y).abs() < 1e-9, "{a} {b}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn swapping_two_annuli() {
        let spec = SurfaceSpec::new(0, 3).unwrap();
        check(
            spec,
            &[PieceKind::Annulus(3), PieceKind::Annulus(2)],
            &[("A_2", "A_3"), ("A_2 B_2", "B_3"), ("A_2 B_2 A_2^-1", "A_3 B_3^-1")],
        );
    }

    #[test]
    fn handle_before_annulus() {
        let spec = SurfaceSpec::new(1, 2).unwrap();
        check(
            spec,
            &[PieceKind::Torus(1), PieceKind::Annulus(2)],
            &[("C_1", "A_2"), ("D_1", "C_1 A_2"), ("A_2 B_2 A_2^-1", "D_1")],
        );
    }

    #[test]
    fn three_pieces_reversed() {
        let spec = SurfaceSpec::new(1, 3).unwrap();
        let order = [PieceKind::Torus(1), PieceKind::Annulus(3), PieceKind::Annulus(2)];
        check(spec, &order, &[("A_2", "C_1"), ("A_3 B_3", "D_1 A_2")]);
    }

    #[test]
    fn rejects_non_permutations() {
        let spec = SurfaceSpec::new(0, 3).unwrap();
        assert!(Reordering::new(&spec, &[PieceKind::Annulus(2)]).is_err());
    }
}
