//! Bicomplexes: bigraded modules over the exterior algebra on two generators.
//!
//! A bicomplex carries `d1` of degree `(1,0)` and `d2` of degree `(0,1)`, both
//! squaring to zero and either anticommuting or commuting. Every bounded
//! bicomplex splits into dots, squares and two families of zigzags
//! ([`decompose`]); the spectral sequence starting from `d2`-cohomology is
//! read off that census ([`spectral_page`]).

mod decompose;
mod spectral;

use std::fmt;
use std::str::FromStr;

pub use decompose::{decompose, decompose_complex, ComplexSummand, Decomposition};
pub use spectral::{cohomology, collapse, e2_page, spectral_page, total_cohomology, Cohomology};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedMap, GradedSpace};
use crate::module::GradedModule;

/// Offsets of `d1` and `d2`.
pub const OFFSETS: [Deg; 2] = [Deg::d2(1, 0), Deg::d2(0, 1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `d1 d2 + d2 d1 = 0`.
    Anticommute,
    /// `d1 d2 = d2 d1`.
    Commute,
}

impl Convention {
    pub fn other(self) -> Self {
        match self {
            Convention::Anticommute => Convention::Commute,
            Convention::Commute => Convention::Anticommute,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Anticommute => "anticommute",
            Convention::Commute => "commute",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anticommute" => Ok(Convention::Anticommute),
            "commute" => Ok(Convention::Commute),
            _ => Err(Error::Parse(format!("unknown convention `{s}`"))),
        }
    }
}

/// A validated bicomplex.
#[derive(Clone, Debug, PartialEq)]
pub struct Bicomplex<K: Field> {
    module: GradedModule<K>,
    convention: Convention,
}

impl<K: Field> Bicomplex<K> {
    /// Validates `d1² = 0`, `d2² = 0` and the mixed relation blockwise.
    pub fn new(field: &K, space: GradedSpace, d1: GradedMap<K>, d2: GradedMap<K>, convention: Convention) -> Result<Self> {
        if space.arity() != 2 {
            return Err(Error::Invalid("a bicomplex needs a bigraded space".into()));
        }
        if d1.offset() != OFFSETS[0] || d2.offset() != OFFSETS[1] {
            return Err(Error::Invalid("d1 must have degree (1,0) and d2 degree (0,1)".into()));
        }
        if d1.source() != &space || d1.target() != &space || d2.source() != &space || d2.target() != &space {
            return Err(Error::Invalid("differentials do not act on the given space".into()));
        }
        Bicomplex::from_module(GradedModule::new(field, space, vec![d1, d2]), convention)
    }

    pub fn from_module(module: GradedModule<K>, convention: Convention) -> Result<Self> {
        if module.space().arity() != 2 || module.offsets() != OFFSETS {
            return Err(Error::Invalid("not a bigraded module with d1, d2".into()));
        }
        module.check_square_zero(0, "d1")?;
        module.check_square_zero(1, "d2")?;
        module.check_pair(0, 1, convention == Convention::Anticommute, ("d1", "d2"))?;
        Ok(Bicomplex { module, convention })
    }

    /// The bicomplex with the given dimensions and zero differentials.
    pub fn trivial(field: &K, space: GradedSpace) -> Self {
        Bicomplex {
            module: GradedModule::trivial(field, space, &OFFSETS),
            convention: Convention::Anticommute,
        }
    }

    /// The indecomposable named by `label`, in its standard basis.
    pub fn standard(field: &K, label: &SummandLabel) -> Self {
        let (degs, arrows) = label.shape();
        Bicomplex {
            module: GradedModule::from_arrows(field, 2, &OFFSETS, &degs, &arrows),
            convention: Convention::Anticommute,
        }
    }

    pub fn field(&self) -> &K {
        self.module.field()
    }

    pub fn space(&self) -> &GradedSpace {
        self.module.space()
    }

    pub fn d1(&self) -> &GradedMap<K> {
        self.module.op(0)
    }

    pub fn d2(&self) -> &GradedMap<K> {
        self.module.op(1)
    }

    pub fn module(&self) -> &GradedModule<K> {
        &self.module
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn dim(&self, d: Deg) -> usize {
        self.module.dim(d)
    }

    /// Switches convention by scaling `d2` at `(i, j)` by `(-1)^(i-j)`.
    /// Applying it twice gives back the input.
    pub fn convert_convention(&self) -> Self {
        let d2 = self.d2().twist(|d| (d.i() - d.j()).rem_euclid(2) == 1);
        Bicomplex {
            module: self.module.with_op(1, d2),
            convention: self.convention.other(),
        }
    }

    pub fn to_anticommute(&self) -> Self {
        match self.convention {
            Convention::Anticommute => self.clone(),
            Convention::Commute => self.convert_convention(),
        }
    }

    /// Relabels `(i, j)` to `(i + a, j + b)`; no matrix changes.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        Bicomplex {
            module: self.module.shift(Deg::d2(a, b)),
            convention: self.convention,
        }
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        assert_eq!(self.convention, o.convention, "convention mismatch");
        Bicomplex {
            module: self.module.direct_sum(&o.module),
            convention: self.convention,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SummandKind {
    Dot,
    Square,
    ZRight,
    ZUp,
}

/// An indecomposable bicomplex: kind, anchor bidegree and, for zigzags, the
/// number of nonzero arrows.
///
/// Anchors: the unique degree of a dot, the southwest corner of a square, the
/// top left term of a rightward zigzag and the top term of an upward zigzag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SummandLabel {
    pub kind: SummandKind,
    pub pos: (i32, i32),
    pub len: usize,
}

impl SummandLabel {
    pub fn dot(i: i32, j: i32) -> Self {
        SummandLabel {
            kind: SummandKind::Dot,
            pos: (i, j),
            len: 0,
        }
    }

    pub fn square(i: i32, j: i32) -> Self {
        SummandLabel {
            kind: SummandKind::Square,
            pos: (i, j),
            len: 0,
        }
    }

    pub fn zright(i: i32, j: i32, len: usize) -> Self {
        assert!(len >= 1, "zigzags have at least one arrow");
        SummandLabel {
            kind: SummandKind::ZRight,
            pos: (i, j),
            len,
        }
    }

    pub fn zup(i: i32, j: i32, len: usize) -> Self {
        assert!(len >= 1, "zigzags have at least one arrow");
        SummandLabel {
            kind: SummandKind::ZUp,
            pos: (i, j),
            len,
        }
    }

    pub fn anchor(&self) -> Deg {
        Deg::d2(self.pos.0, self.pos.1)
    }

    /// Standard basis degrees and nonzero entries `(op, source, target, coeff)`
    /// of `d1` (op 0) and `d2` (op 1).
    ///
    /// A square is `e, d1 e, d2 e, d2 d1 e`; the last vector is the stored top
    /// class, so `d1 (d2 e) = -(d2 d1 e)`.
    pub fn shape(&self) -> (Vec<Deg>, Vec<(usize, usize, usize, i64)>) {
        let (i, j) = self.pos;
        match self.kind {
            SummandKind::Dot => (vec![Deg::d2(i, j)], vec![]),
            SummandKind::Square => (
                vec![Deg::d2(i, j), Deg::d2(i + 1, j), Deg::d2(i, j + 1), Deg::d2(i + 1, j + 1)],
                vec![(0, 0, 1, 1), (1, 0, 2, 1), (1, 1, 3, 1), (0, 2, 3, -1)],
            ),
            SummandKind::ZRight => {
                let degs = (0..=self.len as i32)
                    .map(|k| {
                        let m = k / 2;
                        if k % 2 == 0 {
                            Deg::d2(i + m, j - m)
                        } else {
                            Deg::d2(i + m + 1, j - m)
                        }
                    })
                    .collect();
                let mut arrows = Vec::new();
                for k in 0..self.len {
                    if k % 2 == 0 {
                        arrows.push((0, k, k + 1, 1));
                    } else {
                        arrows.push((1, k + 1, k, 1));
                    }
                }
                (degs, arrows)
            }
            SummandKind::ZUp => {
                let degs = (0..=self.len as i32)
                    .map(|k| {
                        let m = k / 2;
                        if k % 2 == 0 {
                            Deg::d2(i + m, j - m)
                        } else {
                            Deg::d2(i + m, j - m - 1)
                        }
                    })
                    .collect();
                let mut arrows = Vec::new();
                for k in 0..self.len {
                    if k % 2 == 0 {
                        arrows.push((1, k + 1, k, 1));
                    } else {
                        arrows.push((0, k, k + 1, 1));
                    }
                }
                (degs, arrows)
            }
        }
    }

    pub fn degrees(&self) -> Vec<Deg> {
        self.shape().0
    }
}

impl fmt::Display for SummandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.pos;
        match self.kind {
            SummandKind::Dot => write!(f, "Dot@({i},{j})"),
            SummandKind::Square => write!(f, "Square@({i},{j})"),
            SummandKind::ZRight => write!(f, "ZRight@({i},{j}),l={}", self.len),
            SummandKind::ZUp => write!(f, "ZUp@({i},{j}),l={}", self.len),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::matrix::Matrix;

    fn square_data(top_sign: i64) -> (GradedSpace, GradedMap<Rationals>, GradedMap<Rationals>) {
        let q = Rationals;
        let degs = [Deg::d2(0, 0), Deg::d2(1, 0), Deg::d2(0, 1), Deg::d2(1, 1)];
        let space = GradedSpace::from_dims(2, degs.iter().map(|d| (*d, 1)));
        let one = |x: i64| Matrix::from_i64(&q, &[&[x]]);
        let mut d1 = GradedMap::zero(&q, &space, &space, OFFSETS[0]);
        d1.set_block(degs[0], one(1));
        d1.set_block(degs[2], one(top_sign));
        let mut d2 = GradedMap::zero(&q, &space, &space, OFFSETS[1]);
        d2.set_block(degs[0], one(1));
        d2.set_block(degs[1], one(1));
        (space, d1, d2)
    }

    #[test]
    fn square_validates_only_with_forced_sign() {
        let (s, d1, d2) = square_data(-1);
        assert!(Bicomplex::new(&Rationals, s, d1, d2, Convention::Anticommute).is_ok());
        let (s, d1, d2) = square_data(1);
        let err = Bicomplex::new(&Rationals, s, d1, d2, Convention::Anticommute).unwrap_err();
        assert_eq!(err, Error::relation("d1d2 + d2d1 = 0", Deg::d2(0, 0)));
    }

    #[test]
    fn standard_square_matches_hand_data() {
        let (s, d1, d2) = square_data(-1);
        let hand = Bicomplex::new(&Rationals, s, d1, d2, Convention::Anticommute).unwrap();
        assert_eq!(Bicomplex::standard(&Rationals, &SummandLabel::square(0, 0)), hand);
    }

    #[test]
    fn zero_maps_are_valid() {
        let s = GradedSpace::from_dims(2, [(Deg::d2(2, 3), 2)]);
        let z = GradedMap::zero(&Rationals, &s, &s, OFFSETS[0]);
        let z2 = GradedMap::zero(&Rationals, &s, &s, OFFSETS[1]);
        let b = Bicomplex::new(&Rationals, s, z, z2, Convention::Anticommute).unwrap();
        assert_eq!(b.convert_convention().module(), b.module());
    }

    #[test]
    fn converted_square_commutes() {
        let sq = Bicomplex::standard(&Rationals, &SummandLabel::square(0, 0));
        let c = sq.convert_convention();
        assert_eq!(c.convention(), Convention::Commute);
        // d2 at (1,0) is scaled by (-1)^(1-0)
        assert_eq!(c.d2().block(Deg::d2(1, 0)), Matrix::from_i64(&Rationals, &[&[-1]]));
        assert_eq!(c.d2().block(Deg::d2(0, 0)), Matrix::from_i64(&Rationals, &[&[1]]));
        let lhs = c.d1().compose(c.d2());
        let rhs = c.d2().compose(c.d1());
        assert_eq!(lhs, rhs);
        assert_eq!(c.convert_convention(), sq);
    }

    #[test]
    fn every_standard_summand_is_valid() {
        let f = PrimeField::default();
        for l in 1..6 {
            for label in [SummandLabel::zright(1, -1, l), SummandLabel::zup(-2, 0, l)] {
                let b = Bicomplex::standard(&f, &label);
                Bicomplex::from_module(b.module().clone(), Convention::Anticommute).unwrap();
                assert_eq!(b.module().total_dim(), l + 1);
            }
        }
    }

    #[test]
    fn labels_print_compactly() {
        assert_eq!(SummandLabel::square(0, 0).to_string(), "Square@(0,0)");
        assert_eq!(SummandLabel::zright(0, 0, 3).to_string(), "ZRight@(0,0),l=3");
    }
}
