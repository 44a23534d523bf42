//! Splitting a bounded bicomplex into indecomposables.
//!
//! Squares come first: wherever `d1 d2` is nonzero the submodule generated by
//! a vector is free and splits off (see [`split_free`]). On the remainder
//! `d1 d2 = 0`, so each bidegree splits as `D ⊕ C` with `D = ker d1 ∩ ker d2`,
//! and `d1, d2` only map `C` into `D`. Fixing an antidiagonal `i + j = s`, the
//! pieces `C^{a,s-a}` and `D^{a,s+1-a}` form a line
//!
//! ```text
//!   D^{a,s+1-a} <-d2- C^{a,s-a} -d1-> D^{a+1,s-a} <-d2- C^{a+1,s-a-1} -d1-> ...
//! ```
//!
//! i.e. a representation of an A-type quiver with alternating orientation.
//! It is brought into interval form by a left-to-right sweep; each interval
//! becomes a dot or a zigzag.

use std::collections::BTreeMap;

use crate::bicomplex::{Bicomplex, Convention, SummandKind, SummandLabel, OFFSETS};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedMap, GradedSpace};
use crate::matrix::Matrix;
use crate::module::{split_free, Blocks, GradedModule};

/// Summands with their basis vectors and the resulting change of basis.
#[derive(Clone, Debug)]
pub struct Decomposition<K: Field> {
    /// Each summand with its standard basis expressed in input coordinates.
    pub summands: Vec<(SummandLabel, Vec<Vec<K::Elem>>)>,
    /// Per bidegree, columns are the summand basis vectors in summand order.
    pub change_of_basis: Blocks<K>,
}

impl<K: Field> Decomposition<K> {
    pub fn labels(&self) -> Vec<SummandLabel> {
        self.summands.iter().map(|(l, _)| *l).collect()
    }

    /// The multiset of summands.
    pub fn census(&self) -> BTreeMap<SummandLabel, usize> {
        let mut c = BTreeMap::new();
        for (l, _) in &self.summands {
            *c.entry(*l).or_insert(0) += 1;
        }
        c
    }

    /// Direct sum of the standard summands in summand order.
    pub fn reassembled(&self, field: &K) -> Bicomplex<K> {
        let mut acc = Bicomplex::trivial(field, GradedSpace::new(2));
        for (l, _) in &self.summands {
            acc = acc.direct_sum(&Bicomplex::standard(field, l));
        }
        acc
    }

    /// Checks `d · P = P · d_std` for both differentials and that every
    /// change-of-basis block is invertible.
    pub fn verify(&self, b: &Bicomplex<K>) -> Result<()> {
        let std = self.reassembled(b.field());
        if std.space() != b.space() {
            return Err(Error::Invalid("summand dimensions do not add up".into()));
        }
        for (d, p) in &self.change_of_basis {
            if p.inverse().is_none() {
                return Err(Error::relation("invertible change of basis", *d));
            }
        }
        let p = GradedMap::from_fn(b.field(), b.space(), b.space(), Deg::ZERO, |d, _, _| self.change_of_basis[&d].clone());
        for (a, name) in [(0, "d1"), (1, "d2")] {
            let lhs = b.module().op(a).compose(&p);
            let rhs = p.compose(std.module().op(a));
            if let Some(d) = lhs.sub(&rhs).first_nonzero() {
                return Err(Error::relation(format!("reassembled {name}"), d));
            }
        }
        Ok(())
    }
}

/// Decomposes a bounded bicomplex in the anticommuting convention.
pub fn decompose<K: Field>(b: &Bicomplex<K>) -> Result<Decomposition<K>> {
    if b.convention() != Convention::Anticommute {
        return Err(Error::Unsupported("decompose expects the anticommuting convention".into()));
    }
    let f = b.field();
    let m = b.module();
    let mut summands: Vec<(SummandLabel, Vec<Vec<K::Elem>>)> = Vec::new();

    let split = split_free(m);
    for (d, g) in &split.generators {
        let d1g = m.op(0).apply(*d, g);
        let d2g = m.op(1).apply(*d, g);
        let top = m.op(1).apply(*d + OFFSETS[0], &d1g);
        summands.push((SummandLabel::square(d.i(), d.j()), vec![g.clone(), d1g, d2g, top]));
    }

    let n = &split.residue;
    let to_ambient = |d: Deg, v: &[K::Elem]| split.residue_basis[&d].apply(v);
    for (label, vecs, degs) in strings(n) {
        let vecs = vecs.iter().zip(&degs).map(|(v, d)| to_ambient(*d, v)).collect();
        summands.push((label, vecs));
    }

    let mut cols: BTreeMap<Deg, Vec<Vec<K::Elem>>> = BTreeMap::new();
    for (label, vecs) in &summands {
        for (d, v) in label.degrees().into_iter().zip(vecs) {
            cols.entry(d).or_default().push(v.clone());
        }
    }
    let change_of_basis = cols.into_iter().map(|(d, c)| (d, Matrix::from_columns(f, b.dim(d), &c))).collect();
    let out = Decomposition {
        summands,
        change_of_basis,
    };
    out.verify(b).expect("decomposition failed its own reassembly check");
    Ok(out)
}

/// Interval modules of the line quivers of a bicomplex with `d1 d2 = 0`.
/// Returns label, vectors in module coordinates and their degrees.
fn strings<K: Field>(n: &GradedModule<K>) -> Vec<(SummandLabel, Vec<Vec<K::Elem>>, Vec<Deg>)> {
    let f = n.field();
    let (d1, d2) = (n.op(0), n.op(1));
    // D and C bases per bidegree
    let mut dbase = Blocks::new();
    let mut cbase = Blocks::new();
    for (x, dim) in n.space().iter() {
        let stacked = Matrix::vstack(f, dim, &[&d1.block(x), &d2.block(x)]);
        let dk = stacked.kernel_basis();
        let c = Matrix::complement_basis(&dk, dim);
        dbase.insert(x, dk);
        cbase.insert(x, c);
    }
    let empty = |_: Deg| Matrix::zeros(f, 0, 0);
    let dmat = |x: Deg| dbase.get(&x).cloned().unwrap_or_else(|| empty(x));
    let cmat = |x: Deg| cbase.get(&x).cloned().unwrap_or_else(|| empty(x));
    let dim_of = |pos: i32, s: i32| -> usize {
        if pos.rem_euclid(2) == 0 {
            let a = pos / 2;
            cbase.get(&Deg::d2(a, s - a)).map_or(0, |m| m.cols())
        } else {
            let a = (pos + 1) / 2;
            dbase.get(&Deg::d2(a, s + 1 - a)).map_or(0, |m| m.cols())
        }
    };
    let deg_of = |pos: i32, s: i32| -> Deg {
        if pos.rem_euclid(2) == 0 {
            let a = pos / 2;
            Deg::d2(a, s - a)
        } else {
            let a = (pos + 1) / 2;
            Deg::d2(a, s + 1 - a)
        }
    };
    // d restricted to C, in D coordinates
    let arrow = |x: Deg, op: &GradedMap<K>| -> Matrix<K> {
        let c = cmat(x);
        let target = dmat(x + op.offset());
        if c.cols() == 0 || target.cols() == 0 {
            return Matrix::zeros(f, target.cols(), c.cols());
        }
        let img = op.block(x).mul(&c);
        target.solve(&img).expect("d maps C into D")
    };

    let mut sums: Vec<i32> = n.space().support().flat_map(|d| [d.i() + d.j(), d.i() + d.j() - 1]).collect();
    sums.sort_unstable();
    sums.dedup();
    let mut out = Vec::new();
    for s in sums {
        let positions: Vec<i32> = n
            .space()
            .support()
            .filter(|d| d.i() + d.j() == s || d.i() + d.j() == s + 1)
            .flat_map(|d| {
                if d.i() + d.j() == s {
                    vec![2 * d.i()]
                } else {
                    vec![2 * d.i() - 1]
                }
            })
            .filter(|p| dim_of(*p, s) > 0)
            .collect();
        let (Some(&lo), Some(&hi)) = (positions.iter().min(), positions.iter().max()) else {
            continue;
        };
        let dims: Vec<usize> = (lo..=hi).map(|p| dim_of(p, s)).collect();
        // arrows[t] links position lo+t and lo+t+1
        let arrows: Vec<Arrow<K>> = (lo..hi)
            .map(|p| {
                if p.rem_euclid(2) == 0 {
                    Arrow::Forward(arrow(deg_of(p, s), d1))
                } else {
                    Arrow::Backward(arrow(deg_of(p + 1, s), d2))
                }
            })
            .collect();
        for bar in interval_decomposition(f, &dims, &arrows) {
            let b = lo + bar.birth as i32;
            let e = b + bar.vectors.len() as i32 - 1;
            let label = if b.rem_euclid(2) == 0 {
                let a = b / 2;
                assert!(e > b, "a C vector cannot be killed by both differentials");
                SummandLabel::zright(a, s - a, (e - b) as usize)
            } else {
                let a = (b + 1) / 2;
                if e == b {
                    SummandLabel::dot(a, s + 1 - a)
                } else {
                    SummandLabel::zup(a, s + 1 - a, (e - b) as usize)
                }
            };
            let mut vecs = Vec::new();
            let mut degs = Vec::new();
            for (t, v) in bar.vectors.iter().enumerate() {
                let pos = b + t as i32;
                let x = deg_of(pos, s);
                let basis = if pos.rem_euclid(2) == 0 { cmat(x) } else { dmat(x) };
                vecs.push(basis.apply(v));
                degs.push(x);
            }
            debug_assert_eq!(degs, label.degrees());
            out.push((label, vecs, degs));
        }
    }
    out.sort_by_key(|a| a.0);
    out
}

/// An arrow between consecutive vertices of a line quiver.
pub(crate) enum Arrow<K: Field> {
    /// From vertex `t` to vertex `t + 1`.
    Forward(Matrix<K>),
    /// From vertex `t + 1` to vertex `t`.
    Backward(Matrix<K>),
}

/// An interval summand: birth vertex and one vector per vertex from there on.
#[derive(Clone, Debug)]
pub(crate) struct Bar<E> {
    pub birth: usize,
    /// True when born at a vertex whose left arrow points into it (or at the
    /// first vertex).
    incoming: bool,
    pub vectors: Vec<Vec<E>>,
}

impl<E> Bar<E> {
    /// Order in which bars may be added to later ones without breaking the
    /// decomposition: outgoing births from late to early, then incoming
    /// births from early to late.
    fn key(&self) -> (bool, i64) {
        if self.incoming {
            (true, self.birth as i64)
        } else {
            (false, -(self.birth as i64))
        }
    }
}

/// Interval decomposition of a representation of a line quiver. Vertex `t`
/// has dimension `dims[t]`; the returned bars carry vectors that every arrow
/// maps to the next vector of the bar (or to zero at its end).
pub(crate) fn interval_decomposition<K: Field>(f: &K, dims: &[usize], arrows: &[Arrow<K>]) -> Vec<Bar<K::Elem>> {
    assert_eq!(arrows.len() + 1, dims.len());
    let mut done: Vec<Bar<K::Elem>> = Vec::new();
    let mut alive: Vec<Bar<K::Elem>> = Matrix::identity(f, dims[0])
        .columns()
        .into_iter()
        .map(|v| Bar {
            birth: 0,
            incoming: true,
            vectors: vec![v],
        })
        .collect();
    for (t, arrow) in arrows.iter().enumerate() {
        alive.sort_by_key(|b| b.key());
        let mut next: Vec<Bar<K::Elem>> = Vec::new();
        match arrow {
            Arrow::Forward(g) => {
                // survivors' images stay independent; a bar whose image lies in
                // their span is corrected by earlier bars and ends here
                let mut images: Vec<Vec<K::Elem>> = Vec::new();
                let mut survivors: Vec<Bar<K::Elem>> = Vec::new();
                for mut bar in alive.drain(..) {
                    let img = g.apply(bar.vectors.last().unwrap());
                    let span = Matrix::from_columns(f, dims[t + 1], &images);
                    let target = Matrix::from_columns(f, dims[t + 1], std::slice::from_ref(&img));
                    match span.solve(&target) {
                        Some(c) => {
                            for (k, s) in survivors.iter().enumerate() {
                                add_bar(f, &mut bar, s, &f.neg(c.get(k, 0)));
                            }
                            debug_assert!(g.apply(bar.vectors.last().unwrap()).iter().all(|x| f.is_zero(x)));
                            done.push(bar);
                        }
                        None => {
                            images.push(img);
                            survivors.push(bar);
                        }
                    }
                }
                for (mut bar, img) in survivors.into_iter().zip(images.iter()) {
                    bar.vectors.push(img.clone());
                    next.push(bar);
                }
                let span = Matrix::from_columns(f, dims[t + 1], &images);
                for v in Matrix::complement_basis(&span, dims[t + 1]).columns() {
                    next.push(Bar {
                        birth: t + 1,
                        incoming: true,
                        vectors: vec![v],
                    });
                }
            }
            Arrow::Backward(g) => {
                // rewrite the image of g in the basis of alive bars, then give
                // every image vector its own latest bar
                let m = alive.len();
                let x = Matrix::from_columns(f, dims[t], &alive.iter().map(|b| b.vectors.last().unwrap().clone()).collect::<Vec<_>>());
                let coords = x.solve(&g.image_basis()).expect("alive bars span the vertex");
                let reversed = Matrix::from_fn(f, coords.cols(), m, |r, c| coords.get(m - 1 - c, r).clone());
                let ech = reversed.echelon();
                let mut pivot_rows: BTreeMap<usize, Vec<K::Elem>> = BTreeMap::new();
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    let row: Vec<K::Elem> = (0..m).map(|c| ech.reduced.get(r, m - 1 - c).clone()).collect();
                    pivot_rows.insert(m - 1 - pc, row);
                }
                let old = alive.clone();
                for (p, row) in &pivot_rows {
                    let bar = &mut alive[*p];
                    let mut fresh = Bar {
                        birth: bar.birth,
                        incoming: bar.incoming,
                        vectors: bar.vectors.iter().map(|v| vec![f.zero(); v.len()]).collect(),
                    };
                    for (j, c) in row.iter().enumerate() {
                        if !f.is_zero(c) {
                            add_bar(f, &mut fresh, &old[j], c);
                        }
                    }
                    *bar = fresh;
                }
                for (p, mut bar) in alive.drain(..).enumerate() {
                    if pivot_rows.contains_key(&p) {
                        let want = Matrix::from_columns(f, dims[t], &[bar.vectors.last().unwrap().clone()]);
                        let y = g.solve(&want).expect("vector lies in the image");
                        bar.vectors.push(y.column(0));
                        next.push(bar);
                    } else {
                        done.push(bar);
                    }
                }
                for v in g.kernel_basis().columns() {
                    next.push(Bar {
                        birth: t + 1,
                        incoming: false,
                        vectors: vec![v],
                    });
                }
            }
        }
        alive = next;
    }
    done.extend(alive);
    done.sort_by_key(|b| (b.birth, b.vectors.len()));
    done
}

/// `bar += c · other` on the vertices both bars cover.
fn add_bar<K: Field>(f: &K, bar: &mut Bar<K::Elem>, other: &Bar<K::Elem>, c: &K::Elem) {
    let start = bar.birth.max(other.birth);
    let end = bar.birth + bar.vectors.len();
    for t in start..end {
        let (dst, src) = (&mut bar.vectors[t - bar.birth], &other.vectors[t - other.birth]);
        for (a, b) in dst.iter_mut().zip(src) {
            *a = f.mul_add(c, b, a);
        }
    }
}

/// A summand of a single complex: `S^i` is `k` in degree `i`, `P^i` is
/// `k → k` from degree `i` to `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplexSummand {
    Simple(i32),
    Free(i32),
}

/// Decomposes a bounded complex (arity 1, one differential of degree 1) by
/// placing it on the row `j = 0` of a bicomplex.
pub fn decompose_complex<K: Field>(c: &GradedModule<K>) -> Result<Vec<ComplexSummand>> {
    if c.space().arity() != 1 || c.offsets() != [Deg::d1(1)] {
        return Err(Error::Invalid("expected a complex with one differential of degree 1".into()));
    }
    let f = c.field();
    let space = GradedSpace::from_dims(2, c.space().iter());
    let d1 = c.op(0).with_spaces(&space, &space, OFFSETS[0], Deg::ZERO);
    let d2 = GradedMap::zero(f, &space, &space, OFFSETS[1]);
    let b = Bicomplex::new(f, space, d1, d2, Convention::Anticommute)?;
    decompose(&b)?
        .labels()
        .into_iter()
        .map(|l| match (l.kind, l.len) {
            (SummandKind::Dot, _) => Ok(ComplexSummand::Simple(l.pos.0)),
            (SummandKind::ZRight, 1) => Ok(ComplexSummand::Free(l.pos.0)),
            _ => Err(Error::Invalid(format!("unexpected summand {l} in a single complex"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::random::random_bicomplex;
    use proptest::prelude::*;

    fn census_of(labels: &[SummandLabel]) -> BTreeMap<SummandLabel, usize> {
        let mut c = BTreeMap::new();
        for l in labels {
            *c.entry(*l).or_insert(0) += 1;
        }
        c
    }

    #[test]
    fn free_module_is_one_square() {
        let sq = Bicomplex::standard(&Rationals, &SummandLabel::square(0, 0));
        assert_eq!(decompose(&sq).unwrap().labels(), vec![SummandLabel::square(0, 0)]);
    }

    #[test]
    fn single_dot() {
        let b = Bicomplex::trivial(&Rationals, GradedSpace::from_dims(2, [(Deg::d2(2, 3), 1)]));
        assert_eq!(decompose(&b).unwrap().labels(), vec![SummandLabel::dot(2, 3)]);
    }

    #[test]
    fn identity_arrow_is_rightward_zigzag() {
        let b = Bicomplex::standard(&Rationals, &SummandLabel::zright(0, 0, 1));
        assert_eq!(decompose(&b).unwrap().labels(), vec![SummandLabel::zright(0, 0, 1)]);
    }

    #[test]
    fn every_standard_summand_is_recognized() {
        let f = PrimeField::default();
        for l in 1..7 {
            for label in [SummandLabel::zright(1, -1, l), SummandLabel::zup(-2, 1, l)] {
                let b = Bicomplex::standard(&f, &label);
                assert_eq!(decompose(&b).unwrap().labels(), vec![label]);
            }
        }
    }

    #[test]
    fn commuting_input_is_rejected() {
        let sq = Bicomplex::standard(&Rationals, &SummandLabel::square(0, 0)).convert_convention();
        assert!(matches!(decompose(&sq), Err(Error::Unsupported(_))));
    }

    #[test]
    fn single_complex_summands() {
        let f = Rationals;
        // k --1--> k --0--> k
        let m = GradedModule::from_arrows(&f, 1, &[Deg::d1(1)], &[Deg::d1(0), Deg::d1(1), Deg::d1(2)], &[(0, 0, 1, 1)]);
        let mut got = decompose_complex(&m).unwrap();
        got.sort();
        assert_eq!(got, vec![ComplexSummand::Simple(2), ComplexSummand::Free(0)]);
    }

    /// Ranks of d1, d2 and d1 d2 in every bidegree, computed straight from
    /// the matrices.
    fn rank_census<K: Field>(b: &Bicomplex<K>) -> BTreeMap<Deg, (usize, usize, usize, usize)> {
        let d12 = b.d1().compose(b.d2());
        b.space()
            .iter()
            .map(|(d, n)| (d, (n, b.d1().block(d).rank(), b.d2().block(d).rank(), d12.block(d).rank())))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn decomposition_is_sound(seed in 0u64..10_000) {
            let f = PrimeField::default();
            let b = random_bicomplex(&f, seed, (-2, 2), 4);
            let dec = decompose(&b).unwrap();
            prop_assert!(dec.verify(&b).is_ok());
            let std = dec.reassembled(&f);
            prop_assert_eq!(rank_census(&std), rank_census(&b));
            let again = decompose(&std).unwrap();
            prop_assert_eq!(again.census(), dec.census());
        }

        #[test]
        fn generated_census_is_recovered(seed in 0u64..10_000) {
            let f = PrimeField::default();
            let (b, labels) = crate::random::random_bicomplex_with_labels(&f, seed, (-2, 2), 3);
            let dec = decompose(&b).unwrap();
            prop_assert_eq!(dec.census(), census_of(&labels));
        }
    }
}
