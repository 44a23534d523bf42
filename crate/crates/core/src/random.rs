//! Seeded generators for tests and the verification harness.
//!
//! Random objects are built as direct sums of known pieces followed by a
//! random change of basis, so every output is valid by construction and its
//! summands are known.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bicomplex::{Bicomplex, SummandKind, SummandLabel};
use crate::field::Field;
use crate::graded::{Deg, GradedSpace};
use crate::matrix::Matrix;
use crate::module::{Blocks, GradedModule};
use crate::tricomplex::Tricomplex;
use crate::zigzag::{chain_maps, chain_cone, AComplex, Window};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random invertible matrix.
pub fn invertible<K: Field, R: Rng + ?Sized>(f: &K, n: usize, rng: &mut R) -> Matrix<K> {
    loop {
        let m = Matrix::random(f, n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

/// The same module in a random basis.
pub fn scramble<K: Field, R: Rng + ?Sized>(m: &GradedModule<K>, rng: &mut R) -> GradedModule<K> {
    let basis: Blocks<K> = m.space().iter().map(|(d, n)| (d, invertible(m.field(), n, rng))).collect();
    m.change_basis(&basis)
}

/// A random indecomposable whose support fits in the square window.
pub fn random_label<R: Rng + ?Sized>(rng: &mut R, window: (i32, i32), max_len: usize) -> SummandLabel {
    let (lo, hi) = window;
    loop {
        let i = rng.gen_range(lo..=hi);
        let j = rng.gen_range(lo..=hi);
        let len = rng.gen_range(1..=max_len.max(1));
        let label = match rng.gen_range(0..4) {
            0 => SummandLabel::dot(i, j),
            1 => SummandLabel::square(i, j),
            2 => SummandLabel::zright(i, j, len),
            _ => SummandLabel::zup(i, j, len),
        };
        if label.degrees().iter().all(|d| (lo..=hi).contains(&d.i()) && (lo..=hi).contains(&d.j())) {
            return label;
        }
    }
}

/// A random bicomplex on the window `[lo, hi]²` with at most `max_dim` in
/// each bidegree, together with the summands it was built from.
pub fn random_bicomplex_with_labels<K: Field>(f: &K, seed: u64, window: (i32, i32), max_dim: usize) -> (Bicomplex<K>, Vec<SummandLabel>) {
    let mut rng = rng(seed);
    let count = rng.gen_range(1..=6);
    let mut space = GradedSpace::new(2);
    let mut labels = Vec::new();
    for _ in 0..count * 4 {
        if labels.len() == count {
            break;
        }
        let label = random_label(&mut rng, window, 4);
        let mut next = space.clone();
        for d in label.degrees() {
            next.add_dim(d, 1);
        }
        if next.iter().all(|(_, n)| n <= max_dim) {
            space = next;
            labels.push(label);
        }
    }
    let mut acc = Bicomplex::trivial(f, GradedSpace::new(2));
    for l in &labels {
        acc = acc.direct_sum(&Bicomplex::standard(f, l));
    }
    let module = scramble(acc.module(), &mut rng);
    let b = Bicomplex::from_module(module, acc.convention()).expect("a change of basis keeps the relations");
    labels.sort();
    (b, labels)
}

pub fn random_bicomplex<K: Field>(f: &K, seed: u64, window: (i32, i32), max_dim: usize) -> Bicomplex<K> {
    random_bicomplex_with_labels(f, seed, window, max_dim).0
}

/// Whether a label kind is a zigzag.
pub fn is_zigzag(l: &SummandLabel) -> bool {
    matches!(l.kind, SummandKind::ZRight | SummandKind::ZUp)
}

/// A window of degrees `lo..=hi` in every one of the first `arity` axes.
pub fn in_box(d: Deg, arity: usize, lo: i32, hi: i32) -> bool {
    d.0[..arity].iter().all(|x| (lo..=hi).contains(x))
}

/// A random tricomplex supported in `[lo, hi]³` with at most `max_dim` in
/// each degree: a direct sum of up to four quotients of free modules, in a
/// random basis.
pub fn random_tricomplex<K: Field>(f: &K, seed: u64, window: (i32, i32), max_dim: usize) -> Tricomplex<K> {
    let mut rng = rng(seed);
    loop {
        let mut acc = Tricomplex::zero(f);
        for _ in 0..rng.gen_range(1..=4) {
            acc = acc.direct_sum(&random_quotient(f, &mut rng, window));
        }
        if acc.is_zero() || acc.space().iter().any(|(_, n)| n > max_dim) {
            continue;
        }
        let module = scramble(acc.module(), &mut rng);
        return Tricomplex::new(module).expect("a change of basis keeps the relations");
    }
}

/// One or two copies of `Λ₃` with nearby generators, modulo the submodule
/// generated by a few random homogeneous elements and by everything outside
/// the box.
fn random_quotient<K: Field, R: Rng + ?Sized>(f: &K, rng: &mut R, window: (i32, i32)) -> Tricomplex<K> {
    let (lo, hi) = window;
    let base = Deg::new(rng.gen_range(lo..=hi), rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
    let mut free = Tricomplex::zero(f);
    for _ in 0..rng.gen_range(1..=2) {
        let step = Deg::new(rng.gen_range(0..=1), rng.gen_range(0..=1), rng.gen_range(0..=1));
        free = free.direct_sum(&Tricomplex::free(f, base + step));
    }
    let m = free.module();
    let mut sub: Blocks<K> = Blocks::new();
    let add = |sub: &mut Blocks<K>, d: Deg, cols: Matrix<K>| {
        let cur = sub.remove(&d).unwrap_or_else(|| Matrix::zeros(f, m.dim(d), 0));
        sub.insert(d, Matrix::hstack(f, m.dim(d), &[&cur, &cols]));
    };
    for (d, n) in m.space().iter() {
        if !in_box(d, 3, lo, hi) {
            add(&mut sub, d, Matrix::identity(f, n));
        }
    }
    let support: Vec<(Deg, usize)> = m.space().iter().collect();
    for _ in 0..rng.gen_range(1..=3) {
        let (d, n) = support[rng.gen_range(0..support.len())];
        let v = Matrix::random(f, n, 1, rng);
        // the submodule generated by v: its images under all monomials
        for mask in 0..8usize {
            let ops: Vec<usize> = (0..3).filter(|a| mask >> a & 1 == 1).collect();
            let x = ops.iter().fold(d, |x, a| x + crate::tricomplex::OFFSETS[*a]);
            if m.dim(x) > 0 {
                add(&mut sub, x, m.monomial(&ops, d).mul(&v));
            }
        }
    }
    let q = m.quotient(&sub).module;
    let space = GradedSpace::from_dims(3, q.space().iter().filter(|(_, n)| *n > 0));
    let blocks: Blocks<K> = space.iter().map(|(d, n)| (d, Matrix::identity(f, n))).collect();
    Tricomplex::new(q.restrict(&blocks)).expect("quotients of modules are modules")
}

/// A random bounded complex of projective zigzag modules: a sum of single
/// projectives and two-term complexes `P → P'` with a random nonzero map,
/// in a random basis. Generators sit at vertices `lo..=hi`.
pub fn random_projective_complex<K: Field>(f: &K, seed: u64, window: Window, vertices: (i32, i32)) -> AComplex<K> {
    let mut rng = rng(seed);
    let mut acc = AComplex::zero(f, window);
    let proj = |rng: &mut ChaCha8Rng, k: i32| {
        let r = rng.gen_range(vertices.0..=vertices.1);
        let j = rng.gen_range(-1..=1);
        AComplex::projective(f, window, r, j, k).expect("vertex inside the window")
    };
    for _ in 0..rng.gen_range(1..=3) {
        let k = rng.gen_range(-1..=1);
        let piece = if rng.gen_bool(0.3) {
            proj(&mut rng, k)
        } else {
            loop {
                let x = proj(&mut rng, k);
                let y = proj(&mut rng, k);
                let maps = chain_maps(&x, &y, 0, 0);
                if maps.is_empty() {
                    continue;
                }
                let mut h = maps[0].scale(&f.random(&mut rng));
                for g in &maps[1..] {
                    h = h.add(&g.scale(&f.random(&mut rng)));
                }
                if h.is_zero() {
                    continue;
                }
                break chain_cone(&h, &x, &y);
            }
        };
        acc = acc.direct_sum(&piece);
    }
    let module = scramble(acc.module(), &mut rng);
    AComplex::new(window, module).expect("a change of basis keeps the relations")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn generators_are_reproducible_and_bounded() {
        let f = PrimeField::default();
        let (a, la) = random_bicomplex_with_labels(&f, 7, (0, 3), 4);
        let (b, lb) = random_bicomplex_with_labels(&f, 7, (0, 3), 4);
        assert_eq!(la, lb);
        assert_eq!(a.module().ops(), b.module().ops());
        assert!(a.space().iter().all(|(d, n)| n <= 4 && in_box(d, 2, 0, 3)));
    }

    #[test]
    fn tricomplexes_are_bounded_and_varied() {
        let f = PrimeField::default();
        let mut sizes = std::collections::BTreeSet::new();
        for seed in 0..20 {
            let m = random_tricomplex(&f, seed, (-2, 2), 3);
            assert!(m.space().iter().all(|(d, n)| n <= 3 && in_box(d, 3, -2, 2)));
            sizes.insert(m.total_dim());
        }
        assert!(sizes.len() > 3);
        assert_eq!(random_tricomplex(&f, 5, (-2, 2), 3), random_tricomplex(&f, 5, (-2, 2), 3));
    }

    #[test]
    fn projective_complexes_are_complexes() {
        let f = PrimeField::default();
        let w = Window::new(-3, 3).unwrap();
        for seed in 0..10 {
            let c = random_projective_complex(&f, seed, w, (-2, 2));
            assert!(!c.is_zero());
        }
    }
}
