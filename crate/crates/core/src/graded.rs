//! Multigraded vector spaces and homogeneous maps between them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::field::Field;
use crate::matrix::Matrix;

/// A multidegree. Coordinates beyond the arity of the ambient space are zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Deg(pub [i32; 3]);

impl Deg {
    pub const ZERO: Deg = Deg([0, 0, 0]);

    pub const fn new(i: i32, j: i32, k: i32) -> Self {
        Deg([i, j, k])
    }

    pub const fn d1(i: i32) -> Self {
        Deg([i, 0, 0])
    }

    pub const fn d2(i: i32, j: i32) -> Self {
        Deg([i, j, 0])
    }

    /// The unit vector along `axis` (0-based).
    pub fn unit(axis: usize) -> Self {
        let mut d = [0; 3];
        d[axis] = 1;
        Deg(d)
    }

    pub fn i(self) -> i32 {
        self.0[0]
    }

    pub fn j(self) -> i32 {
        self.0[1]
    }

    pub fn k(self) -> i32 {
        self.0[2]
    }

    pub fn total(self) -> i32 {
        self.0.iter().sum()
    }

    /// True when the total degree is odd.
    pub fn is_odd(self) -> bool {
        self.total().rem_euclid(2) == 1
    }

    /// Smallest arity able to hold this degree.
    pub fn min_arity(self) -> usize {
        if self.0[2] != 0 {
            3
        } else if self.0[1] != 0 {
            2
        } else {
            1
        }
    }

    pub fn display(self, arity: usize) -> String {
        let parts: Vec<String> = self.0[..arity].iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for Deg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(self.min_arity().max(2)))
    }
}

impl Add for Deg {
    type Output = Deg;
    fn add(self, o: Deg) -> Deg {
        Deg([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Deg {
    type Output = Deg;
    fn sub(self, o: Deg) -> Deg {
        Deg([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Deg {
    type Output = Deg;
    fn neg(self) -> Deg {
        Deg([-self.0[0], -self.0[1], -self.0[2]])
    }
}

/// Finitely supported assignment of dimensions to multidegrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    arity: usize,
    dims: BTreeMap<Deg, usize>,
}

impl GradedSpace {
    pub fn new(arity: usize) -> Self {
        assert!((1..=3).contains(&arity), "arity must be 1, 2 or 3");
        GradedSpace {
            arity,
            dims: BTreeMap::new(),
        }
    }

    pub fn from_dims(arity: usize, dims: impl IntoIterator<Item = (Deg, usize)>) -> Self {
        let mut s = GradedSpace::new(arity);
        for (d, n) in dims {
            s.add_dim(d, n);
        }
        s
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self, d: Deg) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn set_dim(&mut self, d: Deg, n: usize) {
        assert!(d.min_arity() <= self.arity, "degree {d} exceeds arity {}", self.arity);
        if n == 0 {
            self.dims.remove(&d);
        } else {
            self.dims.insert(d, n);
        }
    }

    pub fn add_dim(&mut self, d: Deg, n: usize) {
        let cur = self.dim(d);
        self.set_dim(d, cur + n);
    }

    /// Degrees with nonzero dimension, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = Deg> + '_ {
        self.dims.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Deg, usize)> + '_ {
        self.dims.iter().map(|(d, n)| (*d, *n))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// `V{s}`: the piece in degree `d` moves to `d + s`.
    pub fn shift(&self, s: Deg) -> Self {
        GradedSpace::from_dims(self.arity, self.iter().map(|(d, n)| (d + s, n)))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut s = self.clone();
        for (d, n) in other.iter() {
            s.add_dim(d, n);
        }
        s
    }

    /// Coordinatewise minimum and maximum over the support.
    pub fn bounds(&self) -> Option<(Deg, Deg)> {
        let mut it = self.support();
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for d in it {
            for a in 0..3 {
                lo.0[a] = lo.0[a].min(d.0[a]);
                hi.0[a] = hi.0[a].max(d.0[a]);
            }
        }
        Some((lo, hi))
    }
}

/// A homogeneous linear map of fixed degree offset, stored blockwise.
///
/// The block at `d` maps the source piece at `d` to the target piece at
/// `d + offset`. Zero blocks are never stored, so structural equality is
/// equality of maps.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap<K: Field> {
    field: K,
    source: GradedSpace,
    target: GradedSpace,
    offset: Deg,
    blocks: BTreeMap<Deg, Matrix<K>>,
}

impl<K: Field> GradedMap<K> {
    pub fn zero(field: &K, source: &GradedSpace, target: &GradedSpace, offset: Deg) -> Self {
        assert_eq!(source.arity(), target.arity(), "arity mismatch");
        GradedMap {
            field: field.clone(),
            source: source.clone(),
            target: target.clone(),
            offset,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(field: &K, space: &GradedSpace) -> Self {
        GradedMap::from_fn(field, space, space, Deg::ZERO, |_, n, _| Matrix::identity(field, n))
    }

    /// Builds a map from a block generator called with `(d, dim source, dim target)`.
    pub fn from_fn(
        field: &K,
        source: &GradedSpace,
        target: &GradedSpace,
        offset: Deg,
        mut f: impl FnMut(Deg, usize, usize) -> Matrix<K>,
    ) -> Self {
        let mut m = GradedMap::zero(field, source, target, offset);
        for (d, n) in source.iter() {
            let t = target.dim(d + offset);
            if t > 0 {
                m.set_block(d, f(d, n, t));
            }
        }
        m
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn offset(&self) -> Deg {
        self.offset
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Deg, &Matrix<K>)> {
        self.blocks.iter().map(|(d, m)| (*d, m))
    }

    pub fn block_ref(&self, d: Deg) -> Option<&Matrix<K>> {
        self.blocks.get(&d)
    }

    /// The block at `d`, zero-filled when absent.
    pub fn block(&self, d: Deg) -> Matrix<K> {
        match self.blocks.get(&d) {
            Some(m) => m.clone(),
            None => Matrix::zeros(&self.field, self.target.dim(d + self.offset), self.source.dim(d)),
        }
    }

    pub fn set_block(&mut self, d: Deg, m: Matrix<K>) {
        let shape = (self.target.dim(d + self.offset), self.source.dim(d));
        assert_eq!(m.shape(), shape, "block at {d} has the wrong shape");
        if m.is_zero() {
            self.blocks.remove(&d);
        } else {
            self.blocks.insert(d, m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Lowest degree carrying a nonzero block.
    pub fn first_nonzero(&self) -> Option<Deg> {
        self.blocks.keys().next().copied()
    }

    /// Applies the block at `d` to a coordinate vector.
    pub fn apply(&self, d: Deg, v: &[K::Elem]) -> Vec<K::Elem> {
        match self.blocks.get(&d) {
            Some(m) => m.apply(v),
            None => vec![self.field.zero(); self.target.dim(d + self.offset)],
        }
    }

    /// `self ∘ g`: apply `g` first.
    pub fn compose(&self, g: &Self) -> Self {
        assert!(self.field == g.field, "maps over different fields");
        assert!(g.target == self.source, "composition of incompatible maps");
        let mut out = GradedMap::zero(&self.field, &g.source, &self.target, g.offset + self.offset);
        for (d, gb) in &g.blocks {
            if let Some(fb) = self.blocks.get(&(*d + g.offset)) {
                out.set_block(*d, fb.mul(gb));
            }
        }
        out
    }

    fn check_parallel(&self, o: &Self) {
        assert!(self.field == o.field, "maps over different fields");
        assert!(
            self.source == o.source && self.target == o.target && self.offset == o.offset,
            "maps are not parallel"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_parallel(o);
        let mut out = self.clone();
        for (d, b) in &o.blocks {
            let sum = match out.blocks.get(d) {
                Some(a) => a.add(b),
                None => b.clone(),
            };
            out.set_block(*d, sum);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let mut out = GradedMap::zero(&self.field, &self.source, &self.target, self.offset);
        for (d, b) in &self.blocks {
            out.set_block(*d, b.scale(s));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    /// Multiplies the block at each degree by `sign(d) ∈ {+1, -1}`.
    pub fn twist(&self, negate: impl Fn(Deg) -> bool) -> Self {
        let mut out = self.clone();
        for (d, b) in &self.blocks {
            if negate(*d) {
                out.blocks.insert(*d, b.neg());
            }
        }
        out
    }

    /// Block-diagonal sum. Bases of the sums put the summand of `self` first.
    pub fn direct_sum(&self, o: &Self) -> Self {
        assert!(self.field == o.field, "maps over different fields");
        assert_eq!(self.offset, o.offset, "offset mismatch in direct sum");
        let source = self.source.direct_sum(&o.source);
        let target = self.target.direct_sum(&o.target);
        let f = &self.field;
        GradedMap::from_fn(f, &source, &target, self.offset, |d, n, t| {
            let mut m = Matrix::zeros(f, t, n);
            m.set_block(0, 0, &self.block(d));
            m.set_block(self.target.dim(d + self.offset), self.source.dim(d), &o.block(d));
            m
        })
    }

    /// Relabels source and target degrees by `s`; no matrix changes.
    pub fn shift(&self, s: Deg) -> Self {
        GradedMap {
            field: self.field.clone(),
            source: self.source.shift(s),
            target: self.target.shift(s),
            offset: self.offset,
            blocks: self.blocks.iter().map(|(d, m)| (*d + s, m.clone())).collect(),
        }
    }

    /// Replaces source and target by equal-dimensional spaces, for instance
    /// after a shift applied to only one side.
    pub fn with_spaces(&self, source: &GradedSpace, target: &GradedSpace, offset: Deg, relabel: Deg) -> Self {
        let mut out = GradedMap::zero(&self.field, source, target, offset);
        for (d, m) in &self.blocks {
            out.set_block(*d + relabel, m.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn random_space(arity: usize, seed: u64) -> GradedSpace {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let mut s = GradedSpace::new(arity);
        for _ in 0..6 {
            let mut d = [0; 3];
            for x in d.iter_mut().take(arity) {
                *x = rng.gen_range(-2..=2);
            }
            s.set_dim(Deg(d), rng.gen_range(0..=3));
        }
        s
    }

    fn random_map(f: &PrimeField, s: &GradedSpace, t: &GradedSpace, off: Deg, seed: u64) -> GradedMap<PrimeField> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        GradedMap::from_fn(f, s, t, off, |_, n, m| Matrix::random(f, m, n, &mut rng))
    }

    #[test]
    fn direct_sum_dims_add() {
        let v = random_space(2, 1);
        let w = random_space(2, 2);
        let s = v.direct_sum(&w);
        for d in v.support().chain(w.support()) {
            assert_eq!(s.dim(d), v.dim(d) + w.dim(d));
        }
    }

    #[test]
    #[should_panic(expected = "incompatible")]
    fn compose_checks_spaces() {
        let f = PrimeField::default();
        let v = random_space(2, 1);
        let w = random_space(2, 2);
        let a = GradedMap::identity(&f, &v);
        let b = GradedMap::identity(&f, &w);
        a.compose(&b);
    }

    proptest! {
        #[test]
        fn shift_round_trip(seed in 0u64..500, a in -3i32..4, b in -3i32..4, c in -3i32..4) {
            let v = random_space(3, seed);
            let s = Deg::new(a, b, c);
            prop_assert_eq!(v.shift(s).shift(-s), v.clone());
            let f = PrimeField::default();
            let m = random_map(&f, &v, &v, Deg::new(1, 0, 0), seed);
            prop_assert_eq!(m.shift(s).shift(-s), m.clone());
            prop_assert_eq!(m.shift(s).block(Deg::ZERO + s), m.block(Deg::ZERO));
        }

        #[test]
        fn compose_with_identity(seed in 0u64..500) {
            let f = PrimeField::default();
            let v = random_space(2, seed);
            let w = random_space(2, seed + 1000);
            let m = random_map(&f, &v, &w, Deg::d2(0, 1), seed);
            prop_assert_eq!(m.compose(&GradedMap::identity(&f, &v)), m.clone());
            prop_assert_eq!(GradedMap::identity(&f, &w).compose(&m), m.clone());
        }

        #[test]
        fn compose_offsets_add(seed in 0u64..500) {
            let f = PrimeField::default();
            let u = random_space(2, seed);
            let v = random_space(2, seed + 1);
            let w = random_space(2, seed + 2);
            let g = random_map(&f, &u, &v, Deg::d2(1, 0), seed);
            let h = random_map(&f, &v, &w, Deg::d2(0, 1), seed + 7);
            let c = h.compose(&g);
            prop_assert_eq!(c.offset(), Deg::d2(1, 1));
            for d in u.support() {
                prop_assert_eq!(c.block(d), h.block(d + Deg::d2(1, 0)).mul(&g.block(d)));
            }
        }
    }
}
