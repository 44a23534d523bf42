//! Regradings between bicomplexes, zigzag modules and complexes, and
//! tricomplexes.

use crate::bicomplex::{Bicomplex, Convention, OFFSETS as BI_OFFSETS};
use crate::error::Result;
use crate::field::Field;
use crate::graded::Deg;
use crate::tricomplex::{Tricomplex, OFFSETS};
use crate::zigzag::{AComplex, AModule, Window, COMPLEX_OFFSETS, D, L, MODULE_OFFSETS, R};

fn odd(n: i32) -> bool {
    n.rem_euclid(2) == 1
}

/// The bridge `G` from complexes of zigzag modules: vertex `v`, internal
/// degree `q` and homological degree `h` go to `(v + q, q, h)`, with
/// `∂₁ = R`, `∂₂ = (-1)^v L` and `∂₃ = (-1)^{v+h} d`.
pub fn functor_g<K: Field>(c: &AComplex<K>) -> Tricomplex<K> {
    let phi = |x: Deg| Deg::new(x.i() + x.j(), x.j(), x.k());
    let module = c.module().regrade(3, phi, &[0, 1, 2], &OFFSETS, |a, x| match a {
        R => false,
        L => odd(x.i()),
        _ => odd(x.i() + x.k()),
    });
    debug_assert_eq!([R, L, D], [0, 1, 2]);
    debug_assert_eq!(COMPLEX_OFFSETS.map(phi), OFFSETS);
    Tricomplex::checked(module)
}

/// `F`: a bicomplex as a zigzag module, `M_r = ⊕_{i-j=r} M^{i,j}` with
/// `R = ∂₁` and `L = (-1)^r ∂₂`. Commuting input is converted first. The
/// window is the (untruncated) range of occupied vertices.
pub fn bicomplex_bridge<K: Field>(b: &Bicomplex<K>) -> Result<AModule<K>> {
    let b = b.to_anticommute();
    let phi = |x: Deg| Deg::d2(x.i() - x.j(), x.j());
    let module = b.module().regrade(2, phi, &[R, L], &MODULE_OFFSETS, |a, x| a == 1 && odd(x.i() - x.j()));
    let vertices: Vec<i32> = module.space().support().map(|d| d.i()).collect();
    let lo = vertices.iter().copied().min().unwrap_or(0);
    let hi = vertices.iter().copied().max().unwrap_or(0);
    AModule::new(Window::new(lo, hi)?, module)
}

/// The inverse of [`bicomplex_bridge`]; the result anticommutes.
pub fn bicomplex_unbridge<K: Field>(m: &AModule<K>) -> Result<Bicomplex<K>> {
    let phi = |x: Deg| Deg::d2(x.i() + x.j(), x.j());
    let module = m.module().regrade(2, phi, &[0, 1], &BI_OFFSETS, |a, x| a == L && odd(x.i()));
    Bicomplex::from_module(module, Convention::Anticommute)
}

/// Relabels the axes: axis `a` becomes axis `perm[a]`, and `∂_{a+1}`
/// becomes `∂_{perm[a]+1}`.
pub fn permute_axes<K: Field>(m: &Tricomplex<K>, perm: [usize; 3]) -> Tricomplex<K> {
    let mut seen = [false; 3];
    for p in perm {
        assert!(p < 3 && !seen[p], "not a permutation: {perm:?}");
        seen[p] = true;
    }
    let phi = |x: Deg| {
        let mut out = [0; 3];
        for a in 0..3 {
            out[perm[a]] = x.0[a];
        }
        Deg(out)
    };
    let offsets = [0, 1, 2].map(|a| OFFSETS[perm[a]]);
    Tricomplex::checked(m.module().regrade(3, phi, &perm, &offsets, |_, _| false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicomplex::SummandLabel;
    use crate::field::{PrimeField, Rationals};
    use crate::random::{random_bicomplex, random_tricomplex};
    use crate::tricomplex::{braid_r, stable_iso, strip_free};
    use crate::zigzag::khse_generator;
    use proptest::prelude::*;

    fn window() -> Window {
        Window::new(-3, 3).unwrap()
    }

    #[test]
    fn g_on_projectives_is_q_on_the_nose() {
        let f = Rationals;
        for r in -2..=2 {
            for j in -2..=2 {
                for k in -2..=2 {
                    let p = AComplex::projective(&f, window(), r, j, k).unwrap();
                    assert_eq!(functor_g(&p), Tricomplex::q_at(&f, Deg::new(r + j, j, -k)), "P_{r}<{j}>[{k}]");
                }
            }
        }
    }

    #[test]
    fn g_intertwines_shifts() {
        let f = PrimeField::default();
        let p = AComplex::projective(&f, window(), 0, 0, 0).unwrap();
        let x = AComplex::projective(&f, window(), 1, 0, 0).unwrap();
        let m = crate::zigzag::chain_cone(&crate::zigzag::chain_maps(&x, &p, 0, 0)[0], &x, &p);
        let m = AComplex::new(m.window(), m.module().clone()).unwrap();
        let g = functor_g(&m);
        assert_eq!(functor_g(&m.shift_internal(1)), g.shift(Deg::new(1, 1, 0)));
        assert_eq!(functor_g(&m.shift_hom(1)), g.shift(Deg::new(0, 0, -1)));
        assert_eq!(functor_g(&m.translate()), g.shift(Deg::new(1, 0, 0)));
    }

    #[test]
    fn g_intertwines_the_braid_generator() {
        let f = PrimeField::default();
        for (r, s) in [(0, 0), (0, 1), (1, 0), (-1, 1)] {
            let m = AComplex::projective(&f, window(), s, 0, 0).unwrap();
            let lhs = functor_g(&khse_generator(r, &m).unwrap());
            let rhs = braid_r(r, &functor_g(&m));
            assert!(stable_iso(&lhs, &rhs, 0, 16).is_iso(), "r = {r}, P_{s}");
        }
    }

    #[test]
    fn bridge_examples() {
        let f = Rationals;
        for (r, j) in [(0, 0), (1, -1), (-2, 2)] {
            let sq = Bicomplex::standard(&f, &SummandLabel::square(r + j, j));
            let m = bicomplex_bridge(&sq).unwrap();
            let p = AModule::projective(&f, m.window(), r, j).unwrap();
            assert_eq!(m.module(), p.module());
        }
        let dot = Bicomplex::standard(&f, &SummandLabel::dot(2, 5));
        let m = bicomplex_bridge(&dot).unwrap();
        assert_eq!(m.module(), AModule::simple(&f, m.window(), -3, 5).unwrap().module());
    }

    #[test]
    fn permutation_examples() {
        let f = Rationals;
        let q = Tricomplex::q(&f);
        let p = permute_axes(&q, [2, 0, 1]);
        assert!(p.d(1).is_zero());
        assert_eq!(permute_axes(&p, [1, 2, 0]), q);
        assert_eq!(permute_axes(&Tricomplex::free(&f, Deg::ZERO), [1, 0, 2]).total_dim(), 8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn bridge_round_trip(seed in 0u64..10_000) {
            let f = PrimeField::default();
            let b = random_bicomplex(&f, seed, (-2, 2), 3);
            let m = bicomplex_bridge(&b).unwrap();
            prop_assert_eq!(bicomplex_unbridge(&m).unwrap(), b.clone());
            let shifted = bicomplex_bridge(&b.shift(1, 0)).unwrap();
            // F(M{1,0}) is the vertex translate of F(M), with L negated
            let want = m.module().shift(Deg::d2(1, 0));
            let want = want.with_op(L, want.op(L).neg());
            prop_assert_eq!(shifted.module(), &want);
        }

        #[test]
        fn braid_relation_after_permuting_axes(seed in 0u64..10_000) {
            let f = PrimeField::default();
            let m = random_tricomplex(&f, seed, (-1, 1), 2);
            let perm = [1, 2, 0];
            let inv = [2, 0, 1];
            let pm = permute_axes(&m, inv);
            let side = |rs: [i32; 3]| {
                let mut cur = pm.clone();
                for r in rs {
                    cur = strip_free(&braid_r(r, &cur)).residue;
                }
                permute_axes(&cur, perm)
            };
            prop_assert!(stable_iso(&side([0, 1, 0]), &side([1, 0, 1]), seed, 16).is_iso());
            prop_assert_eq!(permute_axes(&pm, perm), m);
        }
    }
}
