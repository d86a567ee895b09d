use serde::Serialize;

use super::spec::SurfaceSpec;
use super::word::{Generator, GeneratorWord, Letter};
use crate::error::{Error, Result};

/// A building block of the canonical splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PieceKind {
    /// The annulus carrying (u_i, v_i).
    Annulus(usize),
    /// The one-holed torus carrying (a_j, b_j).
    Torus(usize),
}

impl PieceKind {
    pub fn surface(self) -> SurfaceSpec {
        match self {
            PieceKind::Annulus(_) => SurfaceSpec {
                genus: 0,
                boundary_count: 2,
            },
            PieceKind::Torus(_) => SurfaceSpec {
                genus: 1,
                boundary_count: 1,
            },
        }
    }

    /// The two generators of the original surface this piece carries.
    pub fn generators(self) -> [Generator; 2] {
        match self {
            PieceKind::Annulus(i) => [Generator::Alpha(i), Generator::Beta(i)],
            PieceKind::Torus(j) => [Generator::Gamma(j), Generator::Delta(j)],
        }
    }

    /// Word whose holonomy is this piece's contribution to μ_1.
    pub fn first_moment_letters(self) -> Vec<Letter> {
        let [x, y] = self.generators();
        match self {
            PieceKind::Annulus(_) => vec![
                Letter::new(x, false),
                Letter::new(y, false),
                Letter::new(x, true),
            ],
            PieceKind::Torus(_) => vec![
                Letter::new(x, false),
                Letter::new(y, false),
                Letter::new(x, true),
                Letter::new(y, true),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitPiece {
    pub kind: PieceKind,
    pub surface: SurfaceSpec,
    /// (generator of the piece, generator of the split surface).
    pub coordinate_map: Vec<(Generator, Generator)>,
    /// The piece is read as a fused double through (u, v) = (a, b).
    pub fused_double_reading: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splitting {
    pub pieces: Vec<SplitPiece>,
    /// Words of μ_1 of each piece; their product is μ_1.
    pub moment_chain: Vec<GeneratorWord>,
}

/// Pieces in the order of the boundary product: annuli 2..b, then tori 1..g.
pub fn canonical_pieces(spec: &SurfaceSpec) -> Vec<PieceKind> {
    (2..=spec.boundary_count)
        .map(PieceKind::Annulus)
        .chain((1..=spec.genus).map(PieceKind::Torus))
        .collect()
}

pub fn split_canonical(spec: &SurfaceSpec) -> Result<Splitting> {
    spec.validate()?;
    if spec.is_trivial() {
        return Err(Error::InvalidSurface("the disk cannot be split".into()));
    }
    let mut pieces = Vec::new();
    let mut chain = Vec::new();
    for kind in canonical_pieces(spec) {
        let local = match kind {
            PieceKind::Annulus(_) => [Generator::Alpha(2), Generator::Beta(2)],
            PieceKind::Torus(_) => [Generator::Gamma(1), Generator::Delta(1)],
        };
        let global = kind.generators();
        pieces.push(SplitPiece {
            kind,
            surface: kind.surface(),
            coordinate_map: vec![(local[0], global[0]), (local[1], global[1])],
            fused_double_reading: matches!(kind, PieceKind::Torus(_)),
        });
        chain.push(GeneratorWord::from_letters(kind.first_moment_letters())?);
    }
    Ok(Splitting {
        pieces,
        moment_chain: chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_and_torus_are_their_own_splitting() {
        let s = split_canonical(&SurfaceSpec::new(0, 2).unwrap()).unwrap();
        assert_eq!(s.pieces.len(), 1);
        assert_eq!(s.pieces[0].surface, SurfaceSpec::new(0, 2).unwrap());
        let t = split_canonical(&SurfaceSpec::new(1, 1).unwrap()).unwrap();
        assert_eq!(t.pieces.len(), 1);
        assert!(t.pieces[0].fused_double_reading);
    }

    #[test]
    fn genus_one_two_holes() {
        let spec = SurfaceSpec::new(1, 2).unwrap();
        let s = split_canonical(&spec).unwrap();
        let kinds: Vec<_> = s.pieces.iter().map(|p| p.surface).collect();
        assert_eq!(
            kinds,
            vec![SurfaceSpec::new(0, 2).unwrap(), SurfaceSpec::new(1, 1).unwrap()]
        );
        let mut product = GeneratorWord::identity(1);
        for w in &s.moment_chain {
            product = product.concat(w).unwrap();
        }
        assert_eq!(product, spec.moment_word(1).unwrap());
    }

    #[test]
    fn disk_is_rejected() {
        assert!(split_canonical(&SurfaceSpec::new(0, 1).unwrap()).is_err());
    }
}
