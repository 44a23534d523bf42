//! Cohomology, total cohomology and spectral-sequence pages.

use std::collections::BTreeMap;

use crate::bicomplex::decompose::decompose;
use crate::bicomplex::{Bicomplex, SummandKind, OFFSETS};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedMap, GradedSpace};
use crate::matrix::Matrix;
use crate::module::Blocks;

/// Cohomology of one differential, with the map induced by the other one.
#[derive(Clone, Debug)]
pub struct Cohomology<K: Field> {
    pub space: GradedSpace,
    /// Columns: cocycles representing the basis of `space`.
    pub reps: Blocks<K>,
    /// The other differential acting on cohomology.
    pub induced: GradedMap<K>,
}

impl<K: Field> Cohomology<K> {
    pub fn dims(&self) -> BTreeMap<Deg, usize> {
        self.space.iter().collect()
    }
}

/// Kernel modulo image for a self-map `d` of a graded space with `d² = 0`.
/// Returns representatives per degree.
fn cocycle_reps<K: Field>(d: &GradedMap<K>) -> Blocks<K> {
    let mut reps = Blocks::new();
    for (x, n) in d.source().iter() {
        let z = d.block(x).kernel_basis();
        let img = d.block(x - d.offset()).image_basis();
        debug_assert_eq!(img.rows(), n);
        let coords = z.solve(&img).expect("d squares to zero");
        let comp = Matrix::complement_basis(&coords, z.cols());
        let r = z.mul(&comp);
        if r.cols() > 0 {
            reps.insert(x, r);
        }
    }
    reps
}

/// The map induced by `g` on `H(d)`, for `g` a chain map of `d` (up to sign).
fn induced_map<K: Field>(d: &GradedMap<K>, reps: &Blocks<K>, space: &GradedSpace, g: &GradedMap<K>) -> GradedMap<K> {
    let f = d.field();
    GradedMap::from_fn(f, space, space, g.offset(), |x, n, m| {
        let y = x + g.offset();
        if m == 0 {
            return Matrix::zeros(f, 0, n);
        }
        let src = &reps[&x];
        let tgt = &reps[&y];
        let img = d.block(y - d.offset());
        let basis = Matrix::hstack(f, tgt.rows(), &[tgt, &img]);
        let sol = basis.solve(&g.block(x).mul(src)).expect("g maps cocycles to cocycles");
        sol.block(0, 0, tgt.cols(), src.cols())
    })
}

fn homology_of<K: Field>(d: &GradedMap<K>, other: &GradedMap<K>) -> Cohomology<K> {
    let reps = cocycle_reps(d);
    let space = GradedSpace::from_dims(d.source().arity(), reps.iter().map(|(x, m)| (*x, m.cols())));
    let induced = induced_map(d, &reps, &space, other);
    Cohomology { space, reps, induced }
}

/// Cohomology with respect to `d1` (`direction = 1`) or `d2` (`direction = 2`).
pub fn cohomology<K: Field>(b: &Bicomplex<K>, direction: usize) -> Result<Cohomology<K>> {
    match direction {
        1 => Ok(homology_of(b.d1(), b.d2())),
        2 => Ok(homology_of(b.d2(), b.d1())),
        _ => Err(Error::Invalid(format!("direction must be 1 or 2, got {direction}"))),
    }
}

/// `H(H(M, d2), d1)`, computed directly.
pub fn e2_page<K: Field>(b: &Bicomplex<K>) -> BTreeMap<Deg, usize> {
    let h = homology_of(b.d2(), b.d1());
    let zero = GradedMap::zero(b.field(), &h.space, &h.space, OFFSETS[1]);
    homology_of(&h.induced, &zero).dims()
}

/// Cohomology of `Tot^k = ⊕_{i+j=k} M^{i,j}` with `d = d1 + d2`, by degree.
/// Commuting input is converted first.
pub fn total_cohomology<K: Field>(b: &Bicomplex<K>) -> BTreeMap<i32, usize> {
    let b = b.to_anticommute();
    let f = b.field();
    let mut parts: BTreeMap<i32, Vec<(Deg, usize)>> = BTreeMap::new();
    for (d, n) in b.space().iter() {
        parts.entry(d.i() + d.j()).or_default().push((d, n));
    }
    let offset_in = |k: i32, d: Deg| -> Option<usize> {
        let list = parts.get(&k)?;
        let mut acc = 0;
        for (e, n) in list {
            if *e == d {
                return Some(acc);
            }
            acc += n;
        }
        None
    };
    let tot_dim = |k: i32| parts.get(&k).map_or(0, |l| l.iter().map(|(_, n)| n).sum());
    let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
    for (&k, list) in &parts {
        let mut m = Matrix::zeros(f, tot_dim(k + 1), tot_dim(k));
        for &(d, _) in list {
            let c0 = offset_in(k, d).unwrap();
            for op in [b.d1(), b.d2()] {
                if let Some(r0) = offset_in(k + 1, d + op.offset()) {
                    m.set_block(r0, c0, &op.block(d));
                }
            }
        }
        ranks.insert(k, m.rank());
    }
    parts
        .keys()
        .map(|&k| {
            let r_out = ranks.get(&k).copied().unwrap_or(0);
            let r_in = ranks.get(&(k - 1)).copied().unwrap_or(0);
            (k, tot_dim(k) - r_out - r_in)
        })
        .filter(|&(_, n)| n > 0)
        .collect()
}

/// Page `p ≥ 1` of the spectral sequence starting with `d2`, read off the
/// summands of [`decompose`].
pub fn spectral_page<K: Field>(b: &Bicomplex<K>, page: usize) -> Result<BTreeMap<Deg, usize>> {
    if page == 0 {
        return Err(Error::Invalid("pages start at 1".into()));
    }
    let dec = decompose(&b.to_anticommute())?;
    let mut out = BTreeMap::new();
    let mut put = |i: i32, j: i32| *out.entry(Deg::d2(i, j)).or_insert(0) += 1;
    for l in dec.labels() {
        let (i, j) = l.pos;
        match l.kind {
            SummandKind::Dot => put(i, j),
            SummandKind::Square => {}
            SummandKind::ZUp if l.len % 2 == 0 => {
                let r = (l.len / 2) as i32;
                put(i + r, j - r)
            }
            SummandKind::ZUp => {}
            SummandKind::ZRight if l.len % 2 == 0 => put(i, j),
            SummandKind::ZRight => {
                let k = (l.len / 2) as i32;
                if page <= k as usize + 1 {
                    put(i, j);
                    put(i + k + 1, j - k);
                }
            }
        }
    }
    Ok(out)
}

/// Sums a bigraded table along antidiagonals.
pub fn collapse(page: &BTreeMap<Deg, usize>) -> BTreeMap<i32, usize> {
    let mut out = BTreeMap::new();
    for (d, n) in page {
        if *n > 0 {
            *out.entry(d.i() + d.j()).or_insert(0) += n;
        }
    }
    out
}
