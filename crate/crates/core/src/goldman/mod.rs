//! Symbolic Goldman algebra: path-entry symbols expanded into the localized
//! polynomial ring of generator entries, and their bracket.

mod algebra;
mod normal;
mod poly;

pub use algebra::{
    bracket_extended, bracket_symbolic, normalize, DiagramTable, PathEntrySymbol, SymbolPoly,
};
pub use normal::{letter_matrix, word_matrix, NfMatrix, NormalForm};
pub use poly::{adjugate_of_generator, det, det_of_generator, generic_matrix, Monomial, Poly, Var};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{AlgebraContext, Observable};
    use crate::quasipoisson::{SurfaceFunction, SurfaceQp};
    use crate::repspace::RepPoint;
    use crate::surfaces::{polygon_model, realize_pair, Generator, GeneratorWord, SurfaceSpec, Q};
    use num_traits::One;

    fn w(s: &str) -> GeneratorWord {
        GeneratorWord::parse(s).unwrap()
    }

    fn sym(s: &str, i: usize, j: usize) -> SymbolPoly {
        SymbolPoly::symbol(PathEntrySymbol::new(w(s), i, j))
    }

    #[test]
    fn generator_entry_is_an_indeterminate() {
        let spec = SurfaceSpec::new(0, 2).unwrap();
        let nf = normalize(&spec, 2, &sym("A_2", 0, 1)).unwrap();
        assert_eq!(nf, NormalForm::var(Var::new(Generator::Alpha(2), 0, 1), 2));
        assert_eq!(nf.to_sexpr(), "(/ (+ (* 1 (X A_2 1 2))) (*))");
    }

    #[test]
    fn inverse_letter_uses_the_adjugate() {
        let spec = SurfaceSpec::new(0, 2).unwrap();
        let nf = normalize(&spec, 2, &sym("A_2^-1", 0, 0)).unwrap();
        assert_eq!(nf.to_sexpr(), "(/ (+ (* 1 (X A_2 2 2))) (* (^ (det A_2) 1)))");
    }

    #[test]
    fn defining_relation_is_annihilated() {
        let spec = SurfaceSpec::new(1, 2).unwrap();
        for (a, b) in [("C_1", "D_1 A_2"), ("A_2 B_2^-1", "A_2^-1 C_1"), ("D_1^-1", "D_1")] {
            let ab = w(a).concat(&w(b)).unwrap().to_string();
            for i in 0..2 {
                for k in 0..2 {
                    let mut e = sym(&ab, i, k).scale(&-Q::one());
                    for j in 0..2 {
                        e = e.add(&sym(a, i, j).mul(&sym(b, j, k)));
                    }
                    assert!(normalize(&spec, 2, &e).unwrap().is_zero(), "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn constant_word_is_kronecker_delta() {
        let spec = SurfaceSpec::new(0, 2).unwrap();
        let one = normalize(&spec, 2, &sym("A_2 A_2^-1", 1, 1)).unwrap();
        assert_eq!(one.as_constant(), Some(Q::one()));
        let e = PathEntrySymbol::new(GeneratorWord::identity(1), 0, 1);
        assert!(e.normalize(&spec, 2).unwrap().is_zero());
    }

    #[test]
    fn evaluation_matches_holonomy() {
        let spec = SurfaceSpec::new(1, 1).unwrap();
        let ctx = AlgebraContext::gl(2);
        let word = w("C_1 D_1^-1 C_1");
        let mat = word_matrix(&spec, &word, 2).unwrap();
        for seed in 0..5 {
            let m = RepPoint::random(&ctx, spec, seed).unwrap();
            let h = m.holonomy(&word).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((mat[i][j].evaluate(&m).unwrap() - h[(i, j)].re).abs() < 1e-12);
                }
            }
        }
        assert_eq!(NormalForm::one(2).evaluate(&RepPoint::identity(spec, &ctx)).unwrap(), 1.0);
    }

    #[test]
    fn singular_point_is_rejected() {
        let spec = SurfaceSpec::new(0, 2).unwrap();
        let ctx = AlgebraContext::gl(2);
        let mut m = RepPoint::identity(spec, &ctx);
        m.mats[0] = crate::lie::Mat::zeros(2, 2);
        let nf = normalize(&spec, 2, &sym("A_2^-1", 0, 0)).unwrap();
        assert!(nf.evaluate(&m).is_err());
    }

    #[test]
    fn symbolic_bracket_matches_numeric() {
        let ctx = AlgebraContext::gl(2);
        for (g, b, wa, wb) in [(1, 1, "C_1", "D_1"), (0, 3, "A_2 B_2", "A_3"), (1, 2, "C_1 A_2", "A_2 B_2 A_2^-1")] {
            let spec = SurfaceSpec::new(g, b).unwrap();
            let pm = polygon_model(&spec);
            let s = SurfaceQp::build(&spec, &ctx).unwrap();
            let (_, _, data) = realize_pair(&w(wa), &w(wb), &pm, 1).unwrap();
            for (i, j, k, l) in [(0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1)] {
                let a = PathEntrySymbol::new(w(wa), i, j);
                let bb = PathEntrySymbol::new(w(wb), k, l);
                let nf = bracket_symbolic(&spec, 2, &a, &bb, &data).unwrap();
                for seed in 0..4 {
                    let m = RepPoint::random(&ctx, spec, seed).unwrap();
                    let num = s
                        .bracket_numeric(
                            &SurfaceFunction::holonomy(Observable::entry(i, j), w(wa)),
                            &SurfaceFunction::holonomy(Observable::entry(k, l), w(wb)),
                            &m,
                        )
                        .unwrap();
                    let sym = nf.evaluate(&m).unwrap();
                    assert!((sym - num).abs() < 1e-8, "{wa} {wb}: {sym} vs {num}");
                }
            }
        }
    }

    #[test]
    fn symbolic_bracket_is_antisymmetric() {
        let spec = SurfaceSpec::new(1, 1).unwrap();
        let pm = polygon_model(&spec);
        let mut t = DiagramTable::new();
        let (a, b) = (w("C_1 D_1"), w("D_1^-1"));
        t.register(&a, &b, &pm, 2).unwrap();
        let f = sym("C_1 D_1", 0, 1);
        let g = sym("D_1^-1", 1, 1);
        let fg = bracket_extended(&spec, 2, &f, &g, &t).unwrap();
        let gf = bracket_extended(&spec, 2, &g, &f, &t).unwrap();
        assert!(!fg.is_zero());
        assert!(fg.add(&gf).is_zero());
    }

    #[test]
    fn disjoint_words_bracket_to_zero() {
        let spec = SurfaceSpec::new(0, 3).unwrap();
        let pm = polygon_model(&spec);
        let (_, _, data) = realize_pair(&w("B_2"), &w("B_3"), &pm, 0).unwrap();
        let a = PathEntrySymbol::new(w("B_2"), 0, 1);
        let b = PathEntrySymbol::new(w("B_3"), 1, 0);
        assert!(bracket_symbolic(&spec, 2, &a, &b, &data).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule() {
        let spec = SurfaceSpec::new(1, 1).unwrap();
        let pm = polygon_model(&spec);
        let f = sym("C_1", 0, 1);
        let g = sym("D_1", 1, 1);
        let h = sym("C_1 D_1", 0, 0).add(&SymbolPoly::constant(Q::from_integer(3.into())));
        let mut t = DiagramTable::new();
        t.register_all(&f, &g.mul(&h), &pm, 5).unwrap();
        let lhs = bracket_extended(&spec, 2, &f, &g.mul(&h), &t).unwrap();
        let fg = bracket_extended(&spec, 2, &f, &g, &t).unwrap();
        let fh = bracket_extended(&spec, 2, &f, &h, &t).unwrap();
        let rhs = fg
            .mul(&normalize(&spec, 2, &h).unwrap())
            .add(&normalize(&spec, 2, &g).unwrap().mul(&fh));
        assert_eq!(lhs, rhs);
        let c = SymbolPoly::constant(Q::one());
        assert!(bracket_extended(&spec, 2, &c, &g, &t).unwrap().is_zero());
    }

    #[test]
    fn missing_registration_is_an_error() {
        let spec = SurfaceSpec::new(1, 1).unwrap();
        let t = DiagramTable::new();
        assert!(bracket_extended(&spec, 2, &sym("C_1", 0, 0), &sym("D_1", 0, 0), &t).is_err());
    }
}
