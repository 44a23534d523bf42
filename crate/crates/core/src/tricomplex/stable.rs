//! The stable category: free summands, stable Homs, shift, cones, the
//! isomorphism test and braid words.

use std::collections::BTreeMap;

use crate::field::Field;
use crate::graded::{Deg, GradedMap};
use crate::module::{module_maps, span_rank, split_free, tensor as module_tensor, HomLayout, IsoOutcome};
use crate::tricomplex::{braid_r, braid_rprime, tensor, TriMorphism, Tricomplex};
use crate::zigzag::BraidWord;

const ONES: Deg = Deg::new(1, 1, 1);

/// A tricomplex without free summands, with the frees removed from it.
#[derive(Clone, Debug, PartialEq)]
pub struct StableObject<K: Field> {
    pub residue: Tricomplex<K>,
    /// Number of `Λ₃{x}` removed, by `x`.
    pub frees: BTreeMap<Deg, usize>,
}

/// Splits off every free summand.
pub fn strip_free<K: Field>(m: &Tricomplex<K>) -> StableObject<K> {
    let s = split_free(m.module());
    StableObject {
        residue: Tricomplex::checked(s.residue.clone()),
        frees: s.counts(),
    }
}

/// `∂_a · g = ∂_a g - (-1)^{|g|} g ∂_a` on homogeneous linear maps.
fn act<K: Field>(a: usize, g: &GradedMap<K>, m: &Tricomplex<K>, n: &Tricomplex<K>) -> GradedMap<K> {
    let left = n.d(a).compose(g);
    let right = g.compose(m.d(a));
    if g.offset().is_odd() {
        left.add(&right)
    } else {
        left.sub(&right)
    }
}

/// `∂₁∂₂∂₃ · g` for every elementary linear map `g: M → N` lowering degrees
/// by `(1,1,1)`. These span the maps that are zero in the stable category.
pub fn stable_zero_maps<K: Field>(m: &Tricomplex<K>, n: &Tricomplex<K>) -> Vec<GradedMap<K>> {
    let f = m.field();
    let layout = HomLayout::new(m.space(), n.space(), -ONES);
    (0..layout.len)
        .map(|i| {
            let g = layout.to_map(f, m.space(), n.space(), &[(i, f.one())]);
            act(0, &act(1, &act(2, &g, m, n), m, n), m, n)
        })
        .filter(|h| !h.is_zero())
        .collect()
}

/// `dim Hom(M, N{s})` in the stable category.
pub fn stable_hom<K: Field>(m: &Tricomplex<K>, n: &Tricomplex<K>, s: Deg) -> usize {
    let n = n.shift(s);
    let all = module_maps(m.module(), n.module()).len();
    let zero = stable_zero_maps(m, &n);
    debug_assert!(zero.iter().all(|h| crate::module::check_morphism(h, m.module(), n.module()).is_ok()));
    all - span_rank(m.space(), n.space(), Deg::ZERO, &zero)
}

/// Decides `M ≅ N` in the stable category: strips free summands and looks
/// for a module isomorphism between the residues. The witness is in residue
/// coordinates.
pub fn stable_iso<K: Field>(m: &Tricomplex<K>, n: &Tricomplex<K>, seed: u64, trials: usize) -> IsoOutcome<K> {
    let a = strip_free(m).residue;
    let b = strip_free(n).residue;
    crate::module::find_iso(a.module(), b.module(), seed, trials)
}

/// `M[1] = M ⊗ Λ̂`.
pub fn stable_shift<K: Field>(m: &Tricomplex<K>) -> Tricomplex<K> {
    tensor(m, &Tricomplex::lambda_hat(m.field()))
}

/// The embedding `M → M ⊗ Λ₃{-1,-1,-1}`, `m ↦ m ⊗ ∂₁∂₂∂₃`, into a free
/// module.
pub(crate) fn envelope<K: Field>(m: &Tricomplex<K>) -> TriMorphism<K> {
    let f = m.field();
    let t = module_tensor(m.module(), Tricomplex::free(f, -ONES).module());
    let target = Tricomplex::checked(t.module.clone());
    let mut map = GradedMap::zero(f, m.space(), target.space(), Deg::ZERO);
    for (x, n) in m.space().iter() {
        let mut blk = crate::matrix::Matrix::zeros(f, target.dim(x), n);
        for i in 0..n {
            blk.set(t.index(x, i, Deg::ZERO, 0, 1), i, f.one());
        }
        map.set_block(x, blk);
    }
    TriMorphism::new(m.clone(), target, map).expect("the envelope is a morphism")
}

/// The cone of `f: M → N`: the cokernel of `m ↦ (f m, m ⊗ ∂₁∂₂∂₃)` into
/// `N ⊕ M ⊗ Λ₃{-1,-1,-1}`.
pub fn stable_cone<K: Field>(f: &TriMorphism<K>) -> Tricomplex<K> {
    let fld = f.source.field();
    let env = envelope(&f.source);
    let sum = f.target.direct_sum(&env.target);
    let mut sub = crate::module::Blocks::new();
    for (x, n) in f.source.space().iter() {
        let top = f.map.block(x);
        let bottom = env.map.block(x);
        sub.insert(x, crate::matrix::Matrix::vstack(fld, n, &[&top, &bottom]));
    }
    Tricomplex::checked(sum.module().quotient(&sub).module)
}

/// Applies the letters of a word from left to right, `R_r` for `r` and
/// `R'_r` for `-r`, removing free summands after each letter.
pub fn braid_word<K: Field>(word: &BraidWord, m: &Tricomplex<K>) -> Tricomplex<K> {
    let mut cur = strip_free(m).residue;
    for &(r, positive) in &word.letters {
        let next = if positive { braid_r(r, &cur) } else { braid_rprime(r, &cur) };
        cur = strip_free(&next).residue;
    }
    cur
}

/// Invariants of a stable object: the graded dimensions without free
/// summands and `dim Hom(Q{p}, M)` for every probe `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub dims: BTreeMap<Deg, usize>,
    pub probes: Vec<usize>,
}

pub fn fingerprint<K: Field>(m: &Tricomplex<K>, probes: &[Deg]) -> Fingerprint {
    let r = strip_free(m).residue;
    let f = m.field();
    Fingerprint {
        dims: r.dims(),
        probes: probes.iter().map(|p| stable_hom(&Tricomplex::q_at(f, *p), &r, Deg::ZERO)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::random::{random_tricomplex, rng};
    use proptest::prelude::*;
    use rand::Rng;

    fn e(i: i32, j: i32, k: i32) -> Deg {
        Deg::new(i, j, k)
    }

    /// Maps `M → N` that factor through the injective envelope
    /// `M → M ⊗ Λ₃{-1,-1,-1}`; over a self-injective algebra these are all
    /// the maps factoring through a projective.
    fn stable_hom_oracle<K: Field>(m: &Tricomplex<K>, n: &Tricomplex<K>, s: Deg) -> usize {
        let n = n.shift(s);
        let env = envelope(m);
        let through: Vec<GradedMap<K>> = module_maps(env.target.module(), n.module()).iter().map(|h| h.compose(&env.map)).collect();
        module_maps(m.module(), n.module()).len() - span_rank(m.space(), n.space(), Deg::ZERO, &through)
    }

    #[test]
    fn strip_examples() {
        let f = Rationals;
        let s = Tricomplex::simple(&f, e(0, 1, 0));
        let m = Tricomplex::free(&f, Deg::ZERO).direct_sum(&s);
        let out = strip_free(&m);
        assert_eq!(out.residue, s);
        assert_eq!(out.frees, BTreeMap::from([(Deg::ZERO, 1)]));
        let q = Tricomplex::q(&f);
        assert_eq!(strip_free(&q).residue, q);
    }

    #[test]
    fn stable_hom_examples() {
        let f = Rationals;
        let q = Tricomplex::q(&f);
        assert_eq!(stable_hom(&q, &q, Deg::ZERO), 1);
        assert_eq!(stable_hom(&q, &q, e(-1, -1, 0)), 1);
        assert_eq!(stable_hom(&q, &q, e(1, 0, 0)), 0);
        let free = Tricomplex::free(&f, Deg::ZERO);
        for s in [Deg::ZERO, e(1, 1, 1), e(-1, 0, 2)] {
            assert_eq!(stable_hom(&free, &q, s), 0);
            assert_eq!(stable_hom(&q, &free, s), 0);
            assert_eq!(stable_hom(&free, &free, s), 0);
        }
        // a simple module has a one-dimensional stable endomorphism ring
        let s = Tricomplex::simple(&f, Deg::ZERO);
        assert_eq!(stable_hom(&s, &s, Deg::ZERO), 1);
    }

    #[test]
    fn iso_examples() {
        let f = PrimeField::default();
        let q = Tricomplex::q(&f);
        let with_free = q.direct_sum(&Tricomplex::free(&f, e(2, -1, 0)));
        assert!(stable_iso(&q, &with_free, 0, 8).is_iso());
        assert!(matches!(stable_iso(&q, &q.shift(e(1, 0, 0)), 0, 8), IsoOutcome::NotIso(_)));
    }

    #[test]
    fn shift_and_cone_examples() {
        let f = Rationals;
        let s = Tricomplex::simple(&f, Deg::ZERO);
        assert_eq!(stable_shift(&s).dims(), Tricomplex::lambda_hat(&f).dims());
        let q = Tricomplex::q(&f);
        let c = stable_cone(&TriMorphism::identity(&q));
        assert!(strip_free(&c).residue.is_zero());
        let z = TriMorphism::zero(&Tricomplex::zero(&f), &q);
        assert_eq!(stable_cone(&z), q);
        // the cone of M → 0 is the shift of M
        let to_zero = TriMorphism::zero(&q, &Tricomplex::zero(&f));
        let c = stable_cone(&to_zero);
        assert!(stable_iso(&c, &stable_shift(&q), 0, 8).is_iso());
    }

    #[test]
    fn braid_words_on_q() {
        let f = PrimeField::default();
        let q = Tricomplex::q(&f);
        let w: BraidWord = "0,-0".parse().unwrap();
        assert!(stable_iso(&braid_word(&w, &q), &q, 0, 16).is_iso());
        let a = braid_word(&"0,1,0".parse().unwrap(), &q);
        let b = braid_word(&"1,0,1".parse().unwrap(), &q);
        assert!(stable_iso(&a, &b, 0, 16).is_iso());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn stable_hom_matches_the_envelope_oracle(a in 0u64..10_000, b in 0u64..10_000) {
            let f = PrimeField::default();
            let m = random_tricomplex(&f, a, (-1, 1), 2);
            let n = random_tricomplex(&f, b, (-1, 1), 2);
            let mut g = rng(a ^ b);
            let s = e(g.gen_range(-1..=1), g.gen_range(-1..=1), g.gen_range(-1..=1));
            prop_assert_eq!(stable_hom(&m, &n, s), stable_hom_oracle(&m, &n, s));
        }

        #[test]
        fn stable_hom_ignores_frees(a in 0u64..10_000, b in 0u64..10_000, i in -1i32..=1, j in -1i32..=1) {
            let f = PrimeField::default();
            let m = random_tricomplex(&f, a, (-1, 1), 2);
            let n = random_tricomplex(&f, b, (-1, 1), 2);
            let free = Tricomplex::free(&f, e(i, j, 0));
            let base = stable_hom(&m, &n, Deg::ZERO);
            prop_assert_eq!(stable_hom(&m.direct_sum(&free), &n, Deg::ZERO), base);
            prop_assert_eq!(stable_hom(&m, &n.direct_sum(&free), Deg::ZERO), base);
        }

        #[test]
        fn strip_bookkeeping(seed in 0u64..10_000) {
            let f = PrimeField::default();
            let m = random_tricomplex(&f, seed, (-2, 2), 3);
            let out = strip_free(&m);
            prop_assert!(strip_free(&out.residue).frees.is_empty());
            let mut dims = out.residue.dims();
            for (x, c) in &out.frees {
                for (y, n) in Tricomplex::free(&f, *x).space().iter() {
                    *dims.entry(y).or_default() += c * n;
                }
            }
            prop_assert_eq!(dims, m.dims());
        }
    }
}
