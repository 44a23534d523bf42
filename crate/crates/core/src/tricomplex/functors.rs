//! The functors `U_r`, the transformations `in_r`, `out_r`, `∂₃`-cones and
//! the braid functors `R_r = C₃(in_r)`, `R'_r = C₃(out_r){0,0,1}`.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::field::Field;
use crate::graded::{Deg, GradedMap, GradedSpace};
use crate::matrix::Matrix;
use crate::module::{cone, tensor as module_tensor, GradedModule, Tensor};
use crate::tricomplex::{TriMorphism, Tricomplex, OFFSETS, Q_DEGREES};

/// `⊕_{i-j=r} M_{i,j}`: the columns on the line `i - j = r`, keeping only
/// `∂₃`.
pub fn line<K: Field>(r: i32, m: &Tricomplex<K>) -> Tricomplex<K> {
    keep_d3(m, |x| x.i() - x.j() == r)
}

/// `M_{i,j}`: the column over `(i, j)`, keeping only `∂₃`.
pub fn restrict_partial<K: Field>(m: &Tricomplex<K>, i: i32, j: i32) -> Tricomplex<K> {
    keep_d3(m, |x| x.i() == i && x.j() == j)
}

fn keep_d3<K: Field>(m: &Tricomplex<K>, keep: impl Fn(Deg) -> bool) -> Tricomplex<K> {
    let f = m.field();
    let space = GradedSpace::from_dims(3, m.space().iter().filter(|(x, _)| keep(*x)));
    let mut ops: Vec<GradedMap<K>> = OFFSETS.iter().map(|o| GradedMap::zero(f, &space, &space, *o)).collect();
    for (x, b) in m.d(2).blocks() {
        if keep(x) {
            ops[2].set_block(x, b.clone());
        }
    }
    Tricomplex::checked(GradedModule::new(f, space, ops))
}

/// `Q ⊗ line_r(M)` with its tensor bookkeeping.
fn u_tensor<K: Field>(r: i32, m: &Tricomplex<K>) -> (Tensor<K>, Tricomplex<K>) {
    let l = line(r, m);
    let t = module_tensor(Tricomplex::q(m.field()).module(), l.module());
    (t, l)
}

/// `U_r(M) = ⊕_{i-j=r} Q ⊗ M_{i,j}`.
pub fn functor_u<K: Field>(r: i32, m: &Tricomplex<K>) -> Tricomplex<K> {
    Tricomplex::checked(u_tensor(r, m).0.module)
}

/// Dense blocks of a degree-preserving map, filled piece by piece.
struct Blocks<'a, K: Field> {
    field: &'a K,
    source: &'a GradedSpace,
    target: &'a GradedSpace,
    dense: BTreeMap<Deg, Matrix<K>>,
}

impl<'a, K: Field> Blocks<'a, K> {
    fn new(field: &'a K, source: &'a GradedSpace, target: &'a GradedSpace) -> Self {
        Blocks {
            field,
            source,
            target,
            dense: BTreeMap::new(),
        }
    }

    fn add(&mut self, x: Deg, row: usize, col: usize, m: &Matrix<K>) {
        let (f, s, t) = (self.field, self.source, self.target);
        let blk = self.dense.entry(x).or_insert_with(|| Matrix::zeros(f, t.dim(x), s.dim(x)));
        let cur = blk.block(row, col, m.rows(), m.cols());
        blk.set_block(row, col, &cur.add(m));
    }

    fn finish(self) -> GradedMap<K> {
        let mut out = GradedMap::zero(self.field, self.source, self.target, Deg::ZERO);
        for (x, m) in self.dense {
            out.set_block(x, m);
        }
        out
    }
}

/// `in_r: U_r(M) → M`, `q ⊗ m ↦ q·m`.
pub fn nat_in<K: Field>(r: i32, m: &Tricomplex<K>) -> TriMorphism<K> {
    let f = m.field();
    let (t, l) = u_tensor(r, m);
    let u = Tricomplex::checked(t.module.clone());
    let mut acc = Blocks::new(f, u.space(), m.space());
    for (x, n) in l.space().iter() {
        for (b, qd) in Q_DEGREES.iter().enumerate() {
            let y = *qd + x;
            if m.dim(y) == 0 {
                continue;
            }
            let act = match b {
                0 => Matrix::identity(f, n),
                1 => m.d(0).block(x),
                2 => m.d(1).block(x),
                _ => m.module().monomial(&[1, 0], x),
            };
            acc.add(y, 0, t.index(*qd, 0, x, 0, n), &act);
        }
    }
    let map = acc.finish();
    TriMorphism::new(u, m.clone(), map).expect("in_r is a morphism")
}

/// Signs of the four terms of `out_r`, kept as data so that tests can
/// corrupt them one at a time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutSigns {
    /// `ω ⊗ ∂₁∂₂m` on the line `i - j = r`.
    pub omega_top: i64,
    /// `∂₁∂₂ω ⊗ m` on the line `i - j = r`.
    pub top_m: i64,
    /// `∂₁ω ⊗ ∂₂m` on the line `i - j = r + 1`.
    pub d1w: i64,
    /// `∂₂ω ⊗ ∂₁m` on the line `i - j = r - 1`.
    pub d2w: i64,
}

impl Default for OutSigns {
    fn default() -> Self {
        OutSigns {
            omega_top: 1,
            top_m: 1,
            d1w: 1,
            d2w: -1,
        }
    }
}

impl OutSigns {
    /// The four variants with exactly one sign flipped.
    pub fn single_flips() -> Vec<(&'static str, OutSigns)> {
        let s = OutSigns::default();
        vec![
            ("omega_top", OutSigns { omega_top: -s.omega_top, ..s }),
            ("top_m", OutSigns { top_m: -s.top_m, ..s }),
            ("d1w", OutSigns { d1w: -s.d1w, ..s }),
            ("d2w", OutSigns { d2w: -s.d2w, ..s }),
        ]
    }
}

/// `out_r: M → U_r(M){-1,-1,0}`.
pub fn nat_out<K: Field>(r: i32, m: &Tricomplex<K>) -> TriMorphism<K> {
    nat_out_with(r, m, OutSigns::default()).expect("out_r is a morphism")
}

/// `out_r` with the given term signs, checked to be a morphism. For
/// `m ∈ M_{i,j,k}` and `g = (-1)^{i+j}` it sends
///
/// * `i - j = r`: `m ↦ g (ω ⊗ ∂₁∂₂m + ∂₁∂₂ω ⊗ m)`,
/// * `i - j = r + 1`: `m ↦ g ∂₁ω ⊗ ∂₂m`,
/// * `i - j = r - 1`: `m ↦ -g ∂₂ω ⊗ ∂₁m`,
///
/// with `∂₁∂₂ω = -∂₂∂₁ω` in the stored basis of `Q`.
pub fn nat_out_with<K: Field>(r: i32, m: &Tricomplex<K>, signs: OutSigns) -> Result<TriMorphism<K>> {
    let f = m.field();
    let (t, l) = u_tensor(r, m);
    let diag = Deg::new(1, 1, 0);
    let target = Tricomplex::checked(t.module.clone()).shift(-diag);
    let mut acc = Blocks::new(f, m.space(), target.space());
    for (x, n) in m.space().iter() {
        let g = if (x.i() + x.j()).rem_euclid(2) == 0 { 1 } else { -1 };
        let c = |s: i64| f.from_i64(s * g);
        // (Q degree, line degree, block on M_x, coefficient)
        let mut terms: Vec<(usize, Deg, Matrix<K>, K::Elem)> = Vec::new();
        match x.i() - x.j() - r {
            0 => {
                terms.push((0, x + diag, m.module().monomial(&[0, 1], x), c(signs.omega_top)));
                terms.push((3, x, Matrix::identity(f, n), c(-signs.top_m)));
            }
            1 => terms.push((1, x + OFFSETS[1], m.d(1).block(x), c(signs.d1w))),
            -1 => terms.push((2, x + OFFSETS[0], m.d(0).block(x), c(signs.d2w))),
            _ => {}
        }
        for (b, z, blk, coeff) in terms {
            let nz = l.dim(z);
            if nz == 0 {
                continue;
            }
            acc.add(x, t.index(Q_DEGREES[b], 0, z, 0, nz), 0, &blk.scale(&coeff));
        }
    }
    let map = acc.finish();
    TriMorphism::new(m.clone(), target, map)
}

/// `C₃(f)`: the space `M{0,0,-1} ⊕ N` with `∂₃(m, n) = (-∂₃m, f m + ∂₃n)`.
/// `∂₁` and `∂₂` are negated on the `M` part, which keeps them
/// anticommuting with the new `∂₃`.
pub fn d3_cone<K: Field>(f: &TriMorphism<K>) -> Tricomplex<K> {
    Tricomplex::checked(cone(&f.map, f.source.module(), f.target.module(), 2, true))
}

/// `R_r(M) = C₃(in_r)`.
pub fn braid_r<K: Field>(r: i32, m: &Tricomplex<K>) -> Tricomplex<K> {
    d3_cone(&nat_in(r, m))
}

/// `R'_r(M) = C₃(out_r){0,0,1}`, so `M` keeps its degrees.
pub fn braid_rprime<K: Field>(r: i32, m: &Tricomplex<K>) -> Tricomplex<K> {
    braid_rprime_with(r, m, OutSigns::default()).expect("out_r is a morphism")
}

pub fn braid_rprime_with<K: Field>(r: i32, m: &Tricomplex<K>, signs: OutSigns) -> Result<Tricomplex<K>> {
    Ok(d3_cone(&nat_out_with(r, m, signs)?).shift(OFFSETS[2]))
}
