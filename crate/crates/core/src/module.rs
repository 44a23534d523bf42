//! Multigraded modules presented by a list of homogeneous operators.
//!
//! Bicomplexes, tricomplexes, zigzag-algebra modules and complexes of them are
//! all a graded space together with a few operators of fixed degree. This
//! module holds what they share: relation checks, sub- and quotient modules,
//! Hom spaces, free summands over exterior algebras, tensor products and a
//! randomized isomorphism search.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedMap, GradedSpace};
use crate::matrix::Matrix;
use crate::sparse::Eliminator;

/// Per-degree matrices, typically bases given as columns.
pub type Blocks<K> = BTreeMap<Deg, Matrix<K>>;

#[derive(Clone, Debug, PartialEq)]
pub struct GradedModule<K: Field> {
    field: K,
    space: GradedSpace,
    ops: Vec<GradedMap<K>>,
}

impl<K: Field> GradedModule<K> {
    pub fn new(field: &K, space: GradedSpace, ops: Vec<GradedMap<K>>) -> Self {
        for op in &ops {
            assert!(op.field() == field, "operator over a different field");
            assert!(op.source() == &space && op.target() == &space, "operator does not act on the space");
        }
        GradedModule {
            field: field.clone(),
            space,
            ops,
        }
    }

    /// The module with the given space and all operators zero.
    pub fn trivial(field: &K, space: GradedSpace, offsets: &[Deg]) -> Self {
        let ops = offsets.iter().map(|o| GradedMap::zero(field, &space, &space, *o)).collect();
        GradedModule::new(field, space, ops)
    }

    /// Builds a module from a list of basis vectors and nonzero operator
    /// entries `(op, source, target, coefficient)` indexing into that list.
    /// Basis vectors sharing a degree are numbered in order of appearance.
    pub fn from_arrows(field: &K, arity: usize, offsets: &[Deg], degs: &[Deg], arrows: &[(usize, usize, usize, i64)]) -> Self {
        let mut space = GradedSpace::new(arity);
        let mut slot = Vec::with_capacity(degs.len());
        for d in degs {
            slot.push(space.dim(*d));
            space.add_dim(*d, 1);
        }
        let mut blocks: Vec<Blocks<K>> = vec![Blocks::new(); offsets.len()];
        for &(a, s, t, c) in arrows {
            assert_eq!(degs[s] + offsets[a], degs[t], "arrow has the wrong degree");
            let m = blocks[a]
                .entry(degs[s])
                .or_insert_with(|| Matrix::zeros(field, space.dim(degs[t]), space.dim(degs[s])));
            let x = field.add(m.get(slot[t], slot[s]), &field.from_i64(c));
            m.set(slot[t], slot[s], x);
        }
        let ops = offsets
            .iter()
            .zip(blocks)
            .map(|(o, bl)| {
                let mut op = GradedMap::zero(field, &space, &space, *o);
                for (d, m) in bl {
                    op.set_block(d, m);
                }
                op
            })
            .collect();
        GradedModule::new(field, space, ops)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn ops(&self) -> &[GradedMap<K>] {
        &self.ops
    }

    pub fn op(&self, a: usize) -> &GradedMap<K> {
        &self.ops[a]
    }

    pub fn offsets(&self) -> Vec<Deg> {
        self.ops.iter().map(|o| o.offset()).collect()
    }

    pub fn dim(&self, d: Deg) -> usize {
        self.space.dim(d)
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_empty()
    }

    pub fn into_parts(self) -> (GradedSpace, Vec<GradedMap<K>>) {
        (self.space, self.ops)
    }

    /// `M{s}`: relabel every degree by `s`; the action is unchanged.
    pub fn shift(&self, s: Deg) -> Self {
        GradedModule {
            field: self.field.clone(),
            space: self.space.shift(s),
            ops: self.ops.iter().map(|o| o.shift(s)).collect(),
        }
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        assert_eq!(self.offsets(), o.offsets(), "operator offsets differ");
        let ops = self.ops.iter().zip(&o.ops).map(|(a, b)| a.direct_sum(b)).collect();
        GradedModule::new(&self.field, self.space.direct_sum(&o.space), ops)
    }

    /// Moves every degree along an affine relabelling `phi`. Operator `a`
    /// becomes operator `order[a]` of the result, with offset `offsets[a]`,
    /// and its block at source degree `d` is negated when `negate(a, d)`.
    pub fn regrade(
        &self,
        arity: usize,
        phi: impl Fn(Deg) -> Deg,
        order: &[usize],
        offsets: &[Deg],
        negate: impl Fn(usize, Deg) -> bool,
    ) -> Self {
        let space = GradedSpace::from_dims(arity, self.space.iter().map(|(d, n)| (phi(d), n)));
        let mut ops = vec![None; self.ops.len()];
        for (a, op) in self.ops.iter().enumerate() {
            let mut out = GradedMap::zero(&self.field, &space, &space, offsets[a]);
            for (d, m) in op.blocks() {
                assert_eq!(phi(d + op.offset()), phi(d) + offsets[a], "relabelling is not affine");
                out.set_block(phi(d), if negate(a, d) { m.neg() } else { m.clone() });
            }
            ops[order[a]] = Some(out);
        }
        GradedModule::new(&self.field, space, ops.into_iter().map(|o| o.expect("order is a permutation")).collect())
    }

    /// Replaces operator `a`.
    pub fn with_op(&self, a: usize, op: GradedMap<K>) -> Self {
        let mut ops = self.ops.clone();
        assert_eq!(op.offset(), ops[a].offset(), "offset mismatch");
        ops[a] = op;
        GradedModule::new(&self.field, self.space.clone(), ops)
    }

    /// `op_a ∘ op_a = 0`.
    pub fn check_square_zero(&self, a: usize, name: &str) -> Result<()> {
        let sq = self.ops[a].compose(&self.ops[a]);
        match sq.first_nonzero() {
            Some(d) => Err(Error::relation(format!("{name}^2 = 0"), d)),
            None => Ok(()),
        }
    }

    /// `op_a op_b + op_b op_a = 0` when `anti`, otherwise `op_a op_b = op_b op_a`.
    pub fn check_pair(&self, a: usize, b: usize, anti: bool, names: (&str, &str)) -> Result<()> {
        let ab = self.ops[a].compose(&self.ops[b]);
        let ba = self.ops[b].compose(&self.ops[a]);
        let (rel, bad) = if anti {
            (format!("{0}{1} + {1}{0} = 0", names.0, names.1), ab.add(&ba))
        } else {
            (format!("{0}{1} = {1}{0}", names.0, names.1), ab.sub(&ba))
        };
        match bad.first_nonzero() {
            Some(d) => Err(Error::relation(rel, d)),
            None => Ok(()),
        }
    }

    /// All relations of an exterior algebra on the operators.
    pub fn check_exterior(&self, names: &[&str]) -> Result<()> {
        for a in 0..self.ops.len() {
            self.check_square_zero(a, names[a])?;
        }
        for a in 0..self.ops.len() {
            for b in a + 1..self.ops.len() {
                self.check_pair(a, b, true, (names[a], names[b]))?;
            }
        }
        Ok(())
    }

    /// Block at `d` of `op_{s_1} ∘ … ∘ op_{s_k}` for `subset = [s_1, …, s_k]`,
    /// so the last index acts first.
    pub fn monomial(&self, subset: &[usize], d: Deg) -> Matrix<K> {
        let mut m = Matrix::identity(&self.field, self.dim(d));
        let mut cur = d;
        for &a in subset.iter().rev() {
            let op = &self.ops[a];
            m = op.block(cur).mul(&m);
            cur = cur + op.offset();
        }
        m
    }

    /// The submodule spanned per degree by the columns of `basis`, with the
    /// induced action. Panics unless the span is invariant.
    pub fn restrict(&self, basis: &Blocks<K>) -> Self {
        let space = GradedSpace::from_dims(self.space.arity(), basis.iter().map(|(d, b)| (*d, b.cols())));
        let ops = self
            .ops
            .iter()
            .map(|op| {
                GradedMap::from_fn(&self.field, &space, &space, op.offset(), |d, _, _| {
                    let img = op.block(d).mul(&basis[&d]);
                    basis[&(d + op.offset())].solve(&img).expect("span is not invariant")
                })
            })
            .collect();
        GradedModule::new(&self.field, space, ops)
    }

    /// Expresses the module in new bases: column `c` of `basis[d]` becomes
    /// basis vector `c` in degree `d`.
    pub fn change_basis(&self, basis: &Blocks<K>) -> Self {
        for (d, n) in self.space.iter() {
            assert_eq!(basis[&d].shape(), (n, n), "change of basis must be square");
        }
        self.restrict(basis)
    }

    /// Quotient by the submodule spanned by `sub`. Degrees missing from `sub`
    /// are treated as zero.
    pub fn quotient(&self, sub: &Blocks<K>) -> Quotient<K> {
        let f = &self.field;
        let mut lift = Blocks::new();
        let mut proj = Blocks::new();
        let mut space = GradedSpace::new(self.space.arity());
        for (d, n) in self.space.iter() {
            let s = sub.get(&d).cloned().unwrap_or_else(|| Matrix::zeros(f, n, 0));
            let s = s.image_basis();
            let c = Matrix::complement_basis(&s, n);
            let full = Matrix::hstack(f, n, &[&s, &c]);
            let inv = full.inverse().expect("complement yields a basis");
            proj.insert(d, inv.block(s.cols(), 0, c.cols(), n));
            space.set_dim(d, c.cols());
            lift.insert(d, c);
        }
        let ops = self
            .ops
            .iter()
            .map(|op| {
                GradedMap::from_fn(f, &space, &space, op.offset(), |d, _, _| {
                    proj[&(d + op.offset())].mul(&op.block(d)).mul(&lift[&d])
                })
            })
            .collect();
        Quotient {
            module: GradedModule::new(f, space, ops),
            proj,
            lift,
        }
    }
}

/// A quotient module with its projection and a section of it.
#[derive(Clone, Debug)]
pub struct Quotient<K: Field> {
    pub module: GradedModule<K>,
    /// Quotient coordinates of a vector of the ambient module.
    pub proj: Blocks<K>,
    /// Ambient representatives of the quotient basis.
    pub lift: Blocks<K>,
}

/// Requires `f ∘ op_a = ± op_a ∘ f` for operator `op`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub op: usize,
    pub negate: bool,
}

impl Constraint {
    pub fn commute(op: usize) -> Self {
        Constraint { op, negate: false }
    }

    pub fn all(n: usize) -> Vec<Self> {
        (0..n).map(Constraint::commute).collect()
    }
}

/// Position of every block of a homogeneous map inside one long coordinate
/// vector, row-major within each block.
#[derive(Clone, Debug)]
pub struct HomLayout {
    pub offset: Deg,
    pub blocks: BTreeMap<Deg, (usize, usize, usize)>,
    pub len: usize,
}

impl HomLayout {
    pub fn new(source: &GradedSpace, target: &GradedSpace, offset: Deg) -> Self {
        let mut blocks = BTreeMap::new();
        let mut len = 0;
        for (d, n) in source.iter() {
            let t = target.dim(d + offset);
            if t > 0 {
                blocks.insert(d, (len, t, n));
                len += t * n;
            }
        }
        HomLayout { offset, blocks, len }
    }

    pub fn index(&self, d: Deg, r: usize, c: usize) -> Option<usize> {
        self.blocks.get(&d).map(|(s, _, n)| s + r * n + c)
    }

    pub fn to_map<K: Field>(
        &self,
        field: &K,
        source: &GradedSpace,
        target: &GradedSpace,
        coords: &[(usize, K::Elem)],
    ) -> GradedMap<K> {
        let mut dense: BTreeMap<Deg, Matrix<K>> = BTreeMap::new();
        let starts: Vec<(usize, Deg)> = self.blocks.iter().map(|(d, (s, _, _))| (*s, *d)).collect();
        for (i, v) in coords {
            let pos = starts.partition_point(|(s, _)| s <= i) - 1;
            let (s, d) = starts[pos];
            let (_, t, n) = self.blocks[&d];
            let m = dense.entry(d).or_insert_with(|| Matrix::zeros(field, t, n));
            m.set((i - s) / n, (i - s) % n, v.clone());
        }
        let mut out = GradedMap::zero(field, source, target, self.offset);
        for (d, m) in dense {
            out.set_block(d, m);
        }
        out
    }

    pub fn to_coords<K: Field>(&self, map: &GradedMap<K>) -> Vec<(usize, K::Elem)> {
        let f = map.field();
        let mut out = Vec::new();
        for (d, m) in map.blocks() {
            let (s, t, n) = self.blocks[&d];
            for r in 0..t {
                for c in 0..n {
                    let x = m.get(r, c);
                    if !f.is_zero(x) {
                        out.push((s + r * n + c, x.clone()));
                    }
                }
            }
        }
        out
    }
}

/// Sparse rows expressing `op_N ∘ f ∓ f ∘ op_M = 0` in the coordinates of `layout`.
fn constraint_rows<K: Field>(
    m: &GradedModule<K>,
    n: &GradedModule<K>,
    layout: &HomLayout,
    c: Constraint,
) -> Vec<Vec<(usize, K::Elem)>> {
    let f = m.field();
    let opm = &m.ops[c.op];
    let opn = &n.ops[c.op];
    assert_eq!(opm.offset(), opn.offset(), "operator offsets differ");
    let e = opm.offset();
    let mut rows = Vec::new();
    for (d, dm) in m.space.iter() {
        let tdeg = d + layout.offset + e;
        let tn = n.dim(tdeg);
        if tn == 0 {
            continue;
        }
        let left = layout.blocks.get(&d).map(|_| opn.block(d + layout.offset));
        let right = layout.blocks.get(&(d + e)).and(opm.block_ref(d));
        if left.is_none() && right.is_none() {
            continue;
        }
        for p in 0..tn {
            for q in 0..dm {
                let mut row = Vec::new();
                if let Some(a) = &left {
                    // (op_N f_d)[p][q] = Σ_k a[p][k] f_d[k][q]
                    for k in 0..a.cols() {
                        let x = a.get(p, k);
                        if !f.is_zero(x) {
                            row.push((layout.index(d, k, q).unwrap(), x.clone()));
                        }
                    }
                }
                if let Some(b) = right {
                    // (f_{d+e} op_M)[p][q] = Σ_k f_{d+e}[p][k] b[k][q]
                    for k in 0..b.rows() {
                        let x = b.get(k, q);
                        if !f.is_zero(x) {
                            let x = if c.negate { x.clone() } else { f.neg(x) };
                            row.push((layout.index(d + e, p, k).unwrap(), x));
                        }
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Basis of the homogeneous maps `M → N` of the given offset satisfying the
/// constraints.
pub fn hom_basis<K: Field>(
    m: &GradedModule<K>,
    n: &GradedModule<K>,
    offset: Deg,
    constraints: &[Constraint],
) -> Vec<GradedMap<K>> {
    let layout = HomLayout::new(&m.space, &n.space, offset);
    let mut elim = Eliminator::new(m.field(), layout.len);
    for c in constraints {
        for row in constraint_rows(m, n, &layout, *c) {
            elim.add_row(&row);
        }
    }
    elim.nullspace()
        .iter()
        .map(|v| layout.to_map(m.field(), &m.space, &n.space, v))
        .collect()
}

/// Degree-preserving maps commuting with every operator.
pub fn module_maps<K: Field>(m: &GradedModule<K>, n: &GradedModule<K>) -> Vec<GradedMap<K>> {
    hom_basis(m, n, Deg::ZERO, &Constraint::all(m.ops.len()))
}

/// Checks that `f` commutes with every operator.
pub fn check_morphism<K: Field>(f: &GradedMap<K>, m: &GradedModule<K>, n: &GradedModule<K>) -> Result<()> {
    if f.source() != m.space() || f.target() != n.space() {
        return Err(Error::Invalid("morphism has the wrong source or target".into()));
    }
    for (a, (om, on)) in m.ops.iter().zip(&n.ops).enumerate() {
        let diff = f.compose(om).sub(&on.compose(f));
        if let Some(d) = diff.first_nonzero() {
            return Err(Error::relation(format!("morphism commutes with operator {}", a + 1), d));
        }
    }
    Ok(())
}

/// Tensor product of modules over an exterior algebra:
/// `op(x ⊗ y) = op(x) ⊗ y + (-1)^{|x|} x ⊗ op(y)` with `|x|` the total degree.
///
/// The basis in each degree lists the pairs grouped by the degree of the left
/// factor in increasing order, row-major inside a group.
pub fn tensor<K: Field>(a: &GradedModule<K>, b: &GradedModule<K>) -> Tensor<K> {
    assert_eq!(a.offsets(), b.offsets(), "operator offsets differ");
    let f = a.field();
    let arity = a.space.arity().max(b.space.arity());
    let mut space = GradedSpace::new(arity);
    let mut parts: BTreeMap<Deg, Vec<(Deg, Deg, usize)>> = BTreeMap::new();
    for (da, na) in a.space.iter() {
        for (db, nb) in b.space.iter() {
            let x = da + db;
            let start = space.dim(x);
            parts.entry(x).or_default().push((da, db, start));
            space.add_dim(x, na * nb);
        }
    }
    let locate = |x: Deg, da: Deg| -> Option<usize> {
        parts.get(&x)?.iter().find(|(p, _, _)| *p == da).map(|(_, _, s)| *s)
    };
    let ops = a
        .ops
        .iter()
        .zip(&b.ops)
        .map(|(oa, ob)| {
            let e = oa.offset();
            GradedMap::from_fn(f, &space, &space, e, |x, n, t| {
                let mut blk = Matrix::zeros(f, t, n);
                for (da, db, s) in &parts[&x] {
                    let (na, nb) = (a.dim(*da), b.dim(*db));
                    if let (Some(ma), Some(s2)) = (oa.block_ref(*da), locate(x + e, *da + e)) {
                        blk.set_block(s2, *s, &ma.kron(&Matrix::identity(f, nb)));
                    }
                    if let (Some(mb), Some(s2)) = (ob.block_ref(*db), locate(x + e, *da)) {
                        let k = Matrix::identity(f, na).kron(mb);
                        let k = if da.is_odd() { k.neg() } else { k };
                        let cur = blk.block(s2, *s, k.rows(), k.cols());
                        blk.set_block(s2, *s, &cur.add(&k));
                    }
                }
                blk
            })
        })
        .collect();
    Tensor {
        module: GradedModule::new(f, space, ops),
        parts,
    }
}

/// A tensor product with the bookkeeping to locate `x ⊗ y`.
#[derive(Clone, Debug)]
pub struct Tensor<K: Field> {
    pub module: GradedModule<K>,
    parts: BTreeMap<Deg, Vec<(Deg, Deg, usize)>>,
}

impl<K: Field> Tensor<K> {
    /// Index of basis vector `ia ⊗ ib` (left factor in degree `da`, right in `db`).
    pub fn index(&self, da: Deg, ia: usize, db: Deg, ib: usize, nb: usize) -> usize {
        let (_, _, s) = self.parts[&(da + db)].iter().find(|(p, q, _)| *p == da && *q == db).expect("no such pair");
        s + ia * nb + ib
    }
}

/// Result of splitting off all free summands over the exterior algebra on
/// the operators.
#[derive(Clone, Debug)]
pub struct FreeSplit<K: Field> {
    /// Generators of the free summands: degree and coordinate vector.
    pub generators: Vec<(Deg, Vec<K::Elem>)>,
    /// The complement, free of free summands.
    pub residue: GradedModule<K>,
    /// Columns: the residue basis in ambient coordinates.
    pub residue_basis: Blocks<K>,
}

impl<K: Field> FreeSplit<K> {
    /// Number of free summands generated in each degree.
    pub fn counts(&self) -> BTreeMap<Deg, usize> {
        let mut c = BTreeMap::new();
        for (d, _) in &self.generators {
            *c.entry(*d).or_insert(0) += 1;
        }
        c
    }
}

/// Sign `σ` with `∂_{S^c} ∂_S = σ ∂_{all}` for increasing index lists.
fn frobenius_sign(subset: &[usize], complement: &[usize]) -> bool {
    let inversions = complement.iter().map(|c| subset.iter().filter(|s| *s < c).count()).sum::<usize>();
    inversions % 2 == 1
}

/// Splits `M = F ⊕ N` with `F` free over the exterior algebra on the
/// operators and `N` without free summands.
///
/// In each degree the generators are chosen where the top monomial acts
/// nontrivially. A Frobenius projection `π: M → F` is built from functionals
/// dual to the top classes of the generators, and `N = ker π`.
pub fn split_free<K: Field>(m: &GradedModule<K>) -> FreeSplit<K> {
    let f = m.field();
    let n_ops = m.ops.len();
    let all: Vec<usize> = (0..n_ops).collect();
    let top_shift = m.offsets().into_iter().fold(Deg::ZERO, |a, b| a + b);
    let subsets: Vec<Vec<usize>> = (0..1usize << n_ops).map(|mask| all.iter().copied().filter(|a| mask >> a & 1 == 1).collect()).collect();

    // generators and dual functionals, per degree
    let mut generators = Vec::new();
    let mut functionals: Vec<(Deg, Vec<K::Elem>)> = Vec::new();
    for (d, n) in m.space.iter() {
        let top = m.monomial(&all, d);
        if top.is_zero() {
            continue;
        }
        let gens = Matrix::complement_basis(&top.kernel_basis(), n);
        let tops = top.mul(&gens);
        let phi = tops.transpose().solve(&Matrix::identity(f, gens.cols())).expect("independent top classes").transpose();
        for t in 0..gens.cols() {
            generators.push((d, gens.column(t)));
            functionals.push((d, phi.row(t).to_vec()));
        }
    }
    if generators.is_empty() {
        let basis = m.space.iter().map(|(d, n)| (d, Matrix::identity(f, n))).collect();
        return FreeSplit {
            generators,
            residue: m.clone(),
            residue_basis: basis,
        };
    }

    // π row by row: the coefficient of ∂_S e_t at x = d_t + e_S is
    // σ_S φ_t(∂_{S^c} x)
    let mut pi_rows: BTreeMap<Deg, Vec<Vec<K::Elem>>> = BTreeMap::new();
    for (d, phi) in &functionals {
        let phi = Matrix::new(f, 1, phi.len(), phi.clone());
        for s in &subsets {
            let x = *d + s.iter().fold(Deg::ZERO, |a, i| a + m.ops[*i].offset());
            if m.dim(x) == 0 {
                continue;
            }
            let comp: Vec<usize> = all.iter().copied().filter(|a| !s.contains(a)).collect();
            let mut row = phi.mul(&m.monomial(&comp, x));
            if frobenius_sign(s, &comp) {
                row = row.neg();
            }
            debug_assert_eq!(*d + top_shift, x + comp.iter().fold(Deg::ZERO, |a, i| a + m.ops[*i].offset()));
            pi_rows.entry(x).or_default().push(row.row(0).to_vec());
        }
    }
    let mut residue_basis = Blocks::new();
    for (d, n) in m.space.iter() {
        let basis = match pi_rows.get(&d) {
            Some(rows) => {
                let pi = Matrix::new(f, rows.len(), n, rows.concat());
                assert_eq!(pi.rank(), rows.len(), "projection onto the free part must be onto");
                pi.kernel_basis()
            }
            None => Matrix::identity(f, n),
        };
        if basis.cols() > 0 {
            residue_basis.insert(d, basis);
        }
    }
    let residue = m.restrict(&residue_basis);
    FreeSplit {
        generators,
        residue,
        residue_basis,
    }
}

/// Result of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoOutcome<K: Field> {
    Iso(IsoWitness<K>),
    /// A certified obstruction.
    NotIso(String),
    /// No invertible element found within the trial budget.
    Unknown { trials: usize },
}

impl<K: Field> IsoOutcome<K> {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Iso(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            IsoOutcome::Iso(_) => "true",
            IsoOutcome::NotIso(_) => "false",
            IsoOutcome::Unknown { .. } => "unknown",
        }
    }
}

/// An isomorphism together with its inverse, both checked.
#[derive(Clone, Debug)]
pub struct IsoWitness<K: Field> {
    pub forward: GradedMap<K>,
    pub backward: GradedMap<K>,
}

/// Searches for a degree-preserving isomorphism `M → N` commuting with all
/// operators.
///
/// Obstructions that certify non-isomorphism: differing graded dimensions, a
/// degree where the Hom space cannot be onto, or one where it cannot be
/// injective. Otherwise random elements of the Hom space are tried; over a
/// large field a generic element is invertible whenever any element is.
pub fn find_iso<K: Field>(m: &GradedModule<K>, n: &GradedModule<K>, seed: u64, trials: usize) -> IsoOutcome<K> {
    let f = m.field();
    if m.space() != n.space() {
        let d = m.space().support().chain(n.space().support()).find(|d| m.dim(*d) != n.dim(*d)).unwrap();
        return IsoOutcome::NotIso(format!("dimensions differ at {d}: {} vs {}", m.dim(d), n.dim(d)));
    }
    let basis = module_maps(m, n);
    for (d, dim) in m.space().iter() {
        let blocks: Vec<Matrix<K>> = basis.iter().map(|h| h.block(d)).collect();
        let refs: Vec<&Matrix<K>> = blocks.iter().collect();
        if Matrix::hstack(f, dim, &refs).rank() < dim {
            return IsoOutcome::NotIso(format!("no module map is onto at {d}"));
        }
        if Matrix::vstack(f, dim, &refs).rank() < dim {
            return IsoOutcome::NotIso(format!("no module map is injective at {d}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'trial: for _ in 0..trials {
        let coeffs: Vec<K::Elem> = basis.iter().map(|_| f.random(&mut rng)).collect();
        let mut fwd = GradedMap::zero(f, m.space(), n.space(), Deg::ZERO);
        let mut bwd = GradedMap::zero(f, n.space(), m.space(), Deg::ZERO);
        for (d, dim) in m.space().iter() {
            let mut blk = Matrix::zeros(f, dim, dim);
            for (h, c) in basis.iter().zip(&coeffs) {
                if let Some(b) = h.block_ref(d) {
                    blk = blk.add(&b.scale(c));
                }
            }
            let Some(inv) = blk.inverse() else { continue 'trial };
            fwd.set_block(d, blk);
            bwd.set_block(d, inv);
        }
        let ok = check_morphism(&fwd, m, n).is_ok()
            && fwd.compose(&bwd) == GradedMap::identity(f, n.space())
            && bwd.compose(&fwd) == GradedMap::identity(f, m.space());
        assert!(ok, "combination of module maps failed verification");
        return IsoOutcome::Iso(IsoWitness {
            forward: fwd,
            backward: bwd,
        });
    }
    IsoOutcome::Unknown { trials }
}

/// Mapping cone along operator `op`: the module `S{-e} ⊕ T` (`e` the offset
/// of `op`) with `op(s, t) = (-op s, f s + op t)`. The other operators act
/// diagonally, negated on the `S` part when `negate_others` is set.
pub fn cone<K: Field>(f: &GradedMap<K>, s: &GradedModule<K>, t: &GradedModule<K>, op: usize, negate_others: bool) -> GradedModule<K> {
    let fld = s.field();
    let e = s.ops[op].offset();
    assert_eq!(f.offset(), Deg::ZERO, "cone of a map that is not degree-preserving");
    let ops: Vec<GradedMap<K>> = s
        .ops
        .iter()
        .enumerate()
        .map(|(a, o)| if a == op || negate_others { o.neg() } else { o.clone() })
        .collect();
    let shifted = GradedModule::new(fld, s.space.clone(), ops).shift(-e);
    let sum = shifted.direct_sum(t);
    let mut d = sum.ops[op].clone();
    for (x, fb) in f.blocks() {
        // f maps S at x, sitting in the cone at x - e, to T at x
        let y = x;
        let mut blk = d.block(x - e);
        blk.set_block(shifted.dim(y), 0, fb);
        d.set_block(x - e, blk);
    }
    sum.with_op(op, d)
}

/// Rank of a family of maps with a common offset.
pub fn span_rank<K: Field>(source: &GradedSpace, target: &GradedSpace, offset: Deg, maps: &[GradedMap<K>]) -> usize {
    let Some(first) = maps.first() else { return 0 };
    let layout = HomLayout::new(source, target, offset);
    let mut elim = Eliminator::new(first.field(), layout.len);
    maps.iter().filter(|m| elim.add_row(&layout.to_coords(m))).count()
}

/// A graded space assembled from labelled pieces, each a block of basis
/// vectors in one degree. Pieces in the same degree are stacked in order of
/// insertion.
#[derive(Clone, Debug)]
pub struct Pieces<T: Ord> {
    space: GradedSpace,
    at: BTreeMap<T, (Deg, usize, usize)>,
}

impl<T: Ord + Clone + std::fmt::Debug> Pieces<T> {
    pub fn new(arity: usize) -> Self {
        Pieces {
            space: GradedSpace::new(arity),
            at: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, key: T, deg: Deg, len: usize) {
        if len == 0 {
            return;
        }
        let start = self.space.dim(deg);
        self.space.add_dim(deg, len);
        let old = self.at.insert(key.clone(), (deg, start, len));
        assert!(old.is_none(), "piece {key:?} added twice");
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Degree, first index and length of a piece.
    pub fn get(&self, key: &T) -> Option<(Deg, usize, usize)> {
        self.at.get(key).copied()
    }

    pub fn keys(&self) -> impl Iterator<Item = &T> {
        self.at.keys()
    }

    /// Sums the given blocks `(source piece, target piece, matrix)` into a
    /// map of offset `offset`. Blocks naming a missing piece are skipped.
    pub fn map<K: Field, U: Ord + Clone + std::fmt::Debug>(
        &self,
        field: &K,
        target: &Pieces<U>,
        offset: Deg,
        parts: impl IntoIterator<Item = (T, U, Matrix<K>)>,
    ) -> GradedMap<K> {
        let mut dense: BTreeMap<Deg, Matrix<K>> = BTreeMap::new();
        for (s, t, m) in parts {
            let (Some((ds, s0, sl)), Some((dt, t0, tl))) = (self.get(&s), target.get(&t)) else { continue };
            assert_eq!(ds + offset, dt, "block {s:?} -> {t:?} has the wrong degree");
            assert_eq!(m.shape(), (tl, sl), "block {s:?} -> {t:?} has the wrong shape");
            let blk = dense
                .entry(ds)
                .or_insert_with(|| Matrix::zeros(field, target.space.dim(dt), self.space.dim(ds)));
            for r in 0..tl {
                for c in 0..sl {
                    let x = field.add(blk.get(t0 + r, s0 + c), m.get(r, c));
                    blk.set(t0 + r, s0 + c, x);
                }
            }
        }
        let mut out = GradedMap::zero(field, &self.space, &target.space, offset);
        for (d, m) in dense {
            out.set_block(d, m);
        }
        out
    }
}
