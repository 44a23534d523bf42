//! The zigzag algebra, its graded modules and complexes of them.
//!
//! A graded module over the zigzag algebra is stored as a `(v, q)`-graded
//! space (vertex, internal degree) with two commuting square-zero operators:
//! `R = (v|v+1)` of degree `(1, 0)` and `L = (v|v-1)` of degree `(-1, 1)`.
//! Paths act in the order they are traversed, so `(v|v+1|v)` acts as `L R`.
//! Complexes add a homological axis `h` and a differential `d` of degree
//! `(0, 0, 1)` commuting with `R` and `L`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedMap, GradedSpace};
use crate::matrix::Matrix;
use crate::module::{cone, hom_basis, span_rank, Constraint, GradedModule, HomLayout, Pieces};

pub const R: usize = 0;
pub const L: usize = 1;
pub const D: usize = 2;

pub const MODULE_OFFSETS: [Deg; 2] = [Deg::d2(1, 0), Deg::d2(-1, 1)];
pub const COMPLEX_OFFSETS: [Deg; 3] = [Deg::new(1, 0, 0), Deg::new(-1, 1, 0), Deg::new(0, 0, 1)];

/// A range of vertices. With `truncate` set, the algebra is the finite
/// zigzag algebra on these vertices; otherwise the window only bounds the
/// vertices at which generators may sit, and projectives are those of the
/// infinite algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i32,
    pub hi: i32,
    pub truncate: bool,
}

impl Window {
    pub fn new(lo: i32, hi: i32) -> Result<Self> {
        if hi < lo {
            return Err(Error::Invalid(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Window { lo, hi, truncate: false })
    }

    pub fn finite(lo: i32, hi: i32) -> Result<Self> {
        Ok(Window {
            truncate: true,
            ..Window::new(lo, hi)?
        })
    }

    pub fn contains(&self, r: i32) -> bool {
        (self.lo..=self.hi).contains(&r)
    }

    /// Whether `r` and both its neighbours lie in the window.
    pub fn is_interior(&self, r: i32) -> bool {
        self.lo < r && r < self.hi
    }

    fn check(&self, r: i32) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(self.error(r))
        }
    }

    fn check_interior(&self, r: i32) -> Result<()> {
        if self.is_interior(r) {
            Ok(())
        } else {
            Err(self.error(r))
        }
    }

    fn error(&self, r: i32) -> Error {
        Error::Window {
            vertex: r,
            lo: self.lo,
            hi: self.hi,
        }
    }

    /// Whether vertex `v` exists in the algebra.
    fn has_vertex(&self, v: i32) -> bool {
        !self.truncate || self.contains(v)
    }
}

/// A basis path of the zigzag algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    /// The idempotent `(r)`.
    Idem(i32),
    /// `(from|to)` with `to = from ± 1`.
    Edge(i32, i32),
    /// `(r|r+1|r) = (r|r-1|r)`.
    Loop(i32),
}

impl Path {
    pub fn source(self) -> i32 {
        match self {
            Path::Idem(r) | Path::Loop(r) | Path::Edge(r, _) => r,
        }
    }

    pub fn target(self) -> i32 {
        match self {
            Path::Idem(r) | Path::Loop(r) | Path::Edge(_, r) => r,
        }
    }

    pub fn degree(self) -> i32 {
        match self {
            Path::Idem(_) => 0,
            Path::Edge(a, b) => i32::from(b < a),
            Path::Loop(_) => 1,
        }
    }

    fn vertices(self) -> Vec<i32> {
        match self {
            Path::Idem(r) => vec![r],
            Path::Edge(a, b) => vec![a, b],
            Path::Loop(r) => vec![r, r + 1, r],
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Idem(r) => write!(f, "({r})"),
            Path::Edge(a, b) => write!(f, "({a}|{b})"),
            Path::Loop(r) => write!(f, "({r}|{}|{r})", r + 1),
        }
    }
}

/// The zigzag algebra on a window, with an explicit basis of paths.
#[derive(Clone, Debug)]
pub struct ZigzagAlgebra {
    pub window: Window,
    pub basis: Vec<Path>,
}

impl ZigzagAlgebra {
    /// The finite zigzag algebra on the vertices of `window`.
    pub fn new(window: Window) -> Self {
        let (lo, hi) = (window.lo, window.hi);
        let mut basis = Vec::new();
        for r in lo..=hi {
            basis.push(Path::Idem(r));
        }
        for r in lo..hi {
            basis.push(Path::Edge(r, r + 1));
            basis.push(Path::Edge(r + 1, r));
        }
        if hi > lo {
            for r in lo..=hi {
                basis.push(Path::Loop(r));
            }
        }
        ZigzagAlgebra { window, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn has_edge(&self, a: i32, b: i32) -> bool {
        (a - b).abs() == 1 && self.window.contains(a) && self.window.contains(b)
    }

    /// The path through the given vertices, reduced by the relations.
    fn reduce(&self, w: &[i32]) -> Option<Path> {
        match *w {
            [r] => Some(Path::Idem(r)),
            [a, b] => Some(Path::Edge(a, b)),
            [a, _, c] if a == c => Some(Path::Loop(a)),
            _ => None,
        }
    }

    /// `a · b`: first `a`, then `b`.
    pub fn mul(&self, a: Path, b: Path) -> Option<Path> {
        if a.target() != b.source() {
            return None;
        }
        let mut w = a.vertices();
        w.extend(&b.vertices()[1..]);
        self.reduce(&w)
    }

    /// Multiplication table: `table[a][b]` is the basis index of `a · b`.
    pub fn table(&self) -> Vec<Vec<Option<usize>>> {
        let index: BTreeMap<Path, usize> = self.basis.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        self.basis
            .iter()
            .map(|a| self.basis.iter().map(|b| self.mul(*a, *b).map(|p| index[&p])).collect())
            .collect()
    }

    /// Checks the defining relations, associativity, the grading and
    /// orthogonality of the idempotents on the whole table.
    pub fn check_relations(&self) -> Result<()> {
        let fail = |what: String| Err(Error::Invalid(what));
        let (lo, hi) = (self.window.lo, self.window.hi);
        for r in lo..=hi {
            for s in [r - 1, r + 1] {
                let t = 2 * s - r;
                if self.has_edge(r, s) && self.has_edge(s, t) && self.mul(Path::Edge(r, s), Path::Edge(s, t)).is_some() {
                    return fail(format!("({r}|{s}|{t}) should vanish"));
                }
            }
            let up = self.has_edge(r, r + 1).then(|| self.mul(Path::Edge(r, r + 1), Path::Edge(r + 1, r)));
            let down = self.has_edge(r, r - 1).then(|| self.mul(Path::Edge(r, r - 1), Path::Edge(r - 1, r)));
            if let (Some(a), Some(b)) = (up, down) {
                if a != b || a.is_none() {
                    return fail(format!("({r}|{}|{r}) and ({r}|{}|{r}) differ", r + 1, r - 1));
                }
            }
        }
        for &a in &self.basis {
            for &b in &self.basis {
                if let (Path::Idem(x), Path::Idem(y)) = (a, b) {
                    let expect = (x == y).then_some(a);
                    if self.mul(a, b) != expect {
                        return fail(format!("idempotents {a} and {b}"));
                    }
                }
                if let Some(p) = self.mul(a, b) {
                    if p.degree() != a.degree() + b.degree() {
                        return fail(format!("grading of {a} · {b}"));
                    }
                }
                for &c in &self.basis {
                    let left = self.mul(a, b).and_then(|ab| self.mul(ab, c));
                    let right = self.mul(b, c).and_then(|bc| self.mul(a, bc));
                    if left != right {
                        return fail(format!("associativity of {a}, {b}, {c}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `R L = L R` at every vertex with both neighbours. At the ends of a
/// truncated window only one of the two loops exists and nothing is imposed.
fn check_loops<K: Field>(window: &Window, m: &GradedModule<K>) -> Result<()> {
    for d in m.space().support() {
        let v = d.i();
        if window.has_vertex(v - 1) && window.has_vertex(v + 1) && m.monomial(&[R, L], d) != m.monomial(&[L, R], d) {
            return Err(Error::relation("R L = L R", d));
        }
    }
    Ok(())
}

/// The action of a path on a module with operators `R` and `L`.
pub fn path_action<K: Field>(window: &Window, m: &GradedModule<K>, p: Path, d: Deg) -> Matrix<K> {
    match p {
        Path::Idem(r) => {
            let n = if d.i() == r { m.dim(d) } else { 0 };
            let mut out = Matrix::zeros(m.field(), m.dim(d), m.dim(d));
            for i in 0..n {
                out.set(i, i, m.field().one());
            }
            out
        }
        Path::Edge(a, b) => {
            let op = if b > a { R } else { L };
            if d.i() == a {
                m.op(op).block(d)
            } else {
                Matrix::zeros(m.field(), m.dim(d + m.op(op).offset()), m.dim(d))
            }
        }
        Path::Loop(r) => {
            if d.i() != r {
                Matrix::zeros(m.field(), m.dim(d + m.op(R).offset() + m.op(L).offset()), m.dim(d))
            } else if window.has_vertex(r + 1) {
                m.monomial(&[L, R], d)
            } else {
                m.monomial(&[R, L], d)
            }
        }
    }
}

/// Basis vectors of `P_r⟨j⟩` and its operator entries, in the signed basis
/// `b0 = g, b1 = R g, b2 = (-1)^r L g, b3 = -(-1)^r L R g`, which the
/// bridge to tricomplexes sends to the standard basis of `Q`.
fn projective_shape(window: &Window, r: i32) -> (Vec<(usize, Deg)>, Vec<(usize, usize, usize, i64)>) {
    let s = if r.rem_euclid(2) == 0 { 1 } else { -1 };
    let right = window.has_vertex(r + 1);
    let left = window.has_vertex(r - 1);
    let mut vecs = vec![(0, Deg::d2(r, 0))];
    if right {
        vecs.push((1, Deg::d2(r + 1, 0)));
    }
    if left {
        vecs.push((2, Deg::d2(r - 1, 1)));
    }
    if right || left {
        vecs.push((3, Deg::d2(r, 1)));
    }
    let mut arrows = Vec::new();
    if right {
        arrows.push((R, 0, 1, 1));
        arrows.push((L, 1, 3, -s));
    }
    if left {
        arrows.push((L, 0, 2, s));
        arrows.push((R, 2, 3, -1));
    }
    (vecs, arrows)
}

/// A graded module over the zigzag algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AModule<K: Field> {
    window: Window,
    module: GradedModule<K>,
}

impl<K: Field> AModule<K> {
    /// Validates `R² = 0`, `L² = 0` and `R L = L R`.
    pub fn new(window: Window, module: GradedModule<K>) -> Result<Self> {
        if module.space().arity() != 2 || module.offsets() != MODULE_OFFSETS {
            return Err(Error::Invalid("expected operators R of degree (1,0) and L of degree (-1,1)".into()));
        }
        module.check_square_zero(R, "R")?;
        module.check_square_zero(L, "L")?;
        check_loops(&window, &module)?;
        if let Some(d) = module.space().support().find(|d| !window.has_vertex(d.i())) {
            return Err(Error::Window {
                vertex: d.i(),
                lo: window.lo,
                hi: window.hi,
            });
        }
        Ok(AModule { window, module })
    }

    /// `P_r⟨j⟩`, generated in vertex `r` and degree `j`.
    pub fn projective(field: &K, window: Window, r: i32, j: i32) -> Result<Self> {
        window.check(r)?;
        let (vecs, arrows) = projective_shape(&window, r);
        let idx: BTreeMap<usize, usize> = vecs.iter().enumerate().map(|(i, (b, _))| (*b, i)).collect();
        let degs: Vec<Deg> = vecs.iter().map(|(_, d)| *d + Deg::d2(0, j)).collect();
        let arrows: Vec<_> = arrows.iter().map(|&(a, s, t, c)| (a, idx[&s], idx[&t], c)).collect();
        Ok(AModule {
            window,
            module: GradedModule::from_arrows(field, 2, &MODULE_OFFSETS, &degs, &arrows),
        })
    }

    /// The simple module at vertex `r` in degree `j`.
    pub fn simple(field: &K, window: Window, r: i32, j: i32) -> Result<Self> {
        window.check(r)?;
        Ok(AModule {
            window,
            module: GradedModule::from_arrows(field, 2, &MODULE_OFFSETS, &[Deg::d2(r, j)], &[]),
        })
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn module(&self) -> &GradedModule<K> {
        &self.module
    }

    pub fn field(&self) -> &K {
        self.module.field()
    }

    /// Internal degree dimensions, summed over vertices.
    pub fn degree_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (d, n) in self.module.space().iter() {
            *out.entry(d.j()).or_insert(0) += n;
        }
        out
    }

    /// `M⟨j⟩`: internal degrees raised by `j`.
    pub fn shift(&self, j: i32) -> Self {
        AModule {
            window: self.window,
            module: self.module.shift(Deg::d2(0, j)),
        }
    }

    /// The module sitting in homological degree `h` of a complex.
    pub fn as_complex(&self, h: i32) -> AComplex<K> {
        let f = self.field();
        let space = GradedSpace::from_dims(3, self.module.space().iter().map(|(d, n)| (Deg::new(d.i(), d.j(), h), n)));
        let lift = Deg::new(0, 0, h);
        let mut ops: Vec<GradedMap<K>> =
            (0..2).map(|a| self.module.op(a).with_spaces(&space, &space, COMPLEX_OFFSETS[a], lift)).collect();
        ops.push(GradedMap::zero(f, &space, &space, COMPLEX_OFFSETS[D]));
        AComplex {
            window: self.window,
            module: GradedModule::new(f, space, ops),
        }
    }
}

/// Basis of the module maps `M → N` raising internal degree by `j`.
pub fn hom_modules<K: Field>(m: &AModule<K>, n: &AModule<K>, j: i32) -> Vec<GradedMap<K>> {
    hom_basis(&m.module, &n.module, Deg::d2(0, j), &Constraint::all(2))
}

/// A bounded complex of graded modules over the zigzag algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct AComplex<K: Field> {
    window: Window,
    module: GradedModule<K>,
}

impl<K: Field> AComplex<K> {
    /// Validates that `R`, `L`, `d` square to zero and pairwise commute.
    pub fn new(window: Window, module: GradedModule<K>) -> Result<Self> {
        if module.space().arity() != 3 || module.offsets() != COMPLEX_OFFSETS {
            return Err(Error::Invalid("expected operators R, L, d of degrees (1,0,0), (-1,1,0), (0,0,1)".into()));
        }
        for (a, name) in [(R, "R"), (L, "L"), (D, "d")] {
            module.check_square_zero(a, name)?;
        }
        check_loops(&window, &module)?;
        module.check_pair(R, D, false, ("R", "d"))?;
        module.check_pair(L, D, false, ("L", "d"))?;
        if let Some(d) = module.space().support().find(|d| !window.has_vertex(d.i())) {
            return Err(Error::Window {
                vertex: d.i(),
                lo: window.lo,
                hi: window.hi,
            });
        }
        Ok(AComplex { window, module })
    }

    pub fn zero(field: &K, window: Window) -> Self {
        AComplex {
            window,
            module: GradedModule::trivial(field, GradedSpace::new(3), &COMPLEX_OFFSETS),
        }
    }

    /// `P_r⟨j⟩[k]`: the projective alone in homological degree `-k`.
    pub fn projective(field: &K, window: Window, r: i32, j: i32, k: i32) -> Result<Self> {
        Ok(AModule::projective(field, window, r, j)?.as_complex(-k))
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn module(&self) -> &GradedModule<K> {
        &self.module
    }

    pub fn field(&self) -> &K {
        self.module.field()
    }

    pub fn space(&self) -> &GradedSpace {
        self.module.space()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        AComplex {
            window: self.window,
            module: self.module.direct_sum(&o.module),
        }
    }

    /// `M⟨j⟩`.
    pub fn shift_internal(&self, j: i32) -> Self {
        AComplex {
            window: self.window,
            module: self.module.shift(Deg::new(0, j, 0)),
        }
    }

    /// `M[k]`, with `(M[k])_h = M_{h+k}` and differential `(-1)^k d`.
    pub fn shift_hom(&self, k: i32) -> Self {
        let m = self.module.shift(Deg::new(0, 0, -k));
        let d = if k.rem_euclid(2) == 1 { m.op(D).neg() } else { m.op(D).clone() };
        AComplex {
            window: self.window,
            module: m.with_op(D, d),
        }
    }

    /// Vertex translation `v ↦ v + 1`, with `L` and `d` negated. This
    /// representative of the translate matches the tricomplex shift
    /// `{1,0,0}` under the bridge functor exactly.
    pub fn translate(&self) -> Self {
        let m = self.module.shift(Deg::new(1, 0, 0));
        let ops = vec![m.op(R).clone(), m.op(L).neg(), m.op(D).neg()];
        let window = Window {
            lo: self.window.lo + 1,
            hi: self.window.hi + 1,
            ..self.window
        };
        AComplex {
            window,
            module: GradedModule::new(self.field(), m.space().clone(), ops),
        }
    }

    /// Dimensions of the cohomology of `d`, per degree `(v, q, h)`.
    pub fn homology_dims(&self) -> BTreeMap<Deg, usize> {
        let d = self.module.op(D);
        self.space()
            .iter()
            .filter_map(|(x, n)| {
                let h = n - d.block(x).rank() - d.block(x - COMPLEX_OFFSETS[D]).rank();
                (h > 0).then_some((x, h))
            })
            .collect()
    }

    /// Degrees at vertex `r`.
    fn vertex_degrees(&self, r: i32) -> Vec<(Deg, usize)> {
        self.space().iter().filter(|(d, _)| d.i() == r).collect()
    }
}

/// Basis of the chain maps `M → N` raising `(q, h)` by `(j, k)`.
pub fn chain_maps<K: Field>(m: &AComplex<K>, n: &AComplex<K>, j: i32, k: i32) -> Vec<GradedMap<K>> {
    hom_basis(&m.module, &n.module, Deg::new(0, j, k), &Constraint::all(3))
}

/// `d h + h d` for every module map `h` of offset `offset - (0,0,1)`.
fn boundaries<K: Field>(m: &AComplex<K>, n: &AComplex<K>, offset: Deg) -> Vec<GradedMap<K>> {
    let hs = hom_basis(&m.module, &n.module, offset - COMPLEX_OFFSETS[D], &[Constraint::commute(R), Constraint::commute(L)]);
    hs.iter()
        .map(|h| n.module.op(D).compose(h).add(&h.compose(m.module.op(D))))
        .collect()
}

/// Dimension of chain maps modulo null-homotopic ones, from `M` to `N`
/// raising `(q, h)` by `(j, k)`.
pub fn hom_homotopy<K: Field>(m: &AComplex<K>, n: &AComplex<K>, j: i32, k: i32) -> usize {
    let offset = Deg::new(0, j, k);
    let z = chain_maps(m, n, j, k).len();
    z - span_rank(m.space(), n.space(), offset, &boundaries(m, n, offset))
}

/// Solves `f = d h + h d` over module maps `h`. Returns a homotopy when one
/// exists. `f` must be a chain map.
pub fn is_null_homotopic<K: Field>(f: &GradedMap<K>, m: &AComplex<K>, n: &AComplex<K>) -> Result<Option<GradedMap<K>>> {
    crate::module::check_morphism(f, &m.module, &n.module)?;
    let fld = m.field();
    let offset = f.offset();
    let hs = hom_basis(&m.module, &n.module, offset - COMPLEX_OFFSETS[D], &[Constraint::commute(R), Constraint::commute(L)]);
    let layout = HomLayout::new(m.space(), n.space(), offset);
    let dense = |g: &GradedMap<K>| {
        let mut v = vec![fld.zero(); layout.len];
        for (i, x) in layout.to_coords(g) {
            v[i] = x;
        }
        v
    };
    let cols: Vec<Vec<K::Elem>> = hs
        .iter()
        .map(|h| dense(&n.module.op(D).compose(h).add(&h.compose(m.module.op(D)))))
        .collect();
    let a = Matrix::from_columns(fld, layout.len, &cols);
    let b = Matrix::from_columns(fld, layout.len, &[dense(f)]);
    let Some(c) = a.solve(&b) else { return Ok(None) };
    let mut h = GradedMap::zero(fld, m.space(), n.space(), offset - COMPLEX_OFFSETS[D]);
    for (i, hi) in hs.iter().enumerate() {
        h = h.add(&hi.scale(c.get(i, 0)));
    }
    debug_assert!(n.module.op(D).compose(&h).add(&h.compose(m.module.op(D))) == *f);
    Ok(Some(h))
}

/// `P_r ⊗ (r)M` together with the evaluation map to `M`.
///
/// `(r)M` is the part of `M` at vertex `r` with the restricted differential,
/// a complex of vector spaces. Writing `b0..b3` for the signed basis of
/// `P_r`, the map sends `b0 ⊗ m ↦ m`, `b1 ⊗ m ↦ R m`,
/// `b2 ⊗ m ↦ (-1)^r L m` and `b3 ⊗ m ↦ -(-1)^r L R m`.
pub fn evaluation<K: Field>(r: i32, m: &AComplex<K>) -> (AComplex<K>, GradedMap<K>) {
    let fld = m.field();
    let (vecs, arrows) = projective_shape(&m.window, r);
    let parts = m.vertex_degrees(r);
    let mut x = Pieces::new(3);
    for &(b, pd) in &vecs {
        for &(d, n) in &parts {
            x.push((b, d), Deg::new(pd.i(), pd.j() + d.j(), d.k()), n);
        }
    }
    let mut ops = Vec::new();
    for a in [R, L] {
        let blocks = arrows
            .iter()
            .filter(|t| t.0 == a)
            .flat_map(|&(_, s, t, c)| {
                parts
                    .iter()
                    .map(move |&(d, n)| ((s, d), (t, d), Matrix::identity(fld, n).scale(&fld.from_i64(c))))
            })
            .collect::<Vec<_>>();
        ops.push(x.map(fld, &x, COMPLEX_OFFSETS[a], blocks));
    }
    let dm = m.module.op(D);
    let dblocks = vecs
        .iter()
        .flat_map(|&(b, _)| parts.iter().map(move |&(d, _)| ((b, d), (b, d + COMPLEX_OFFSETS[D]), dm.block(d))))
        .collect::<Vec<_>>();
    ops.push(x.map(fld, &x, COMPLEX_OFFSETS[D], dblocks));
    let source = AComplex {
        window: m.window,
        module: GradedModule::new(fld, x.space().clone(), ops),
    };

    let sign = fld.sign(r.rem_euclid(2) == 1);
    let mut target = Pieces::new(3);
    for (d, n) in m.space().iter() {
        target.push(d, d, n);
    }
    let mut blocks = Vec::new();
    for &(b, _) in &vecs {
        for &(d, _) in &parts {
            let (t, mat) = match b {
                0 => (d, path_action(&m.window, &m.module, Path::Idem(r), d)),
                1 => (d + COMPLEX_OFFSETS[R], m.module.op(R).block(d)),
                2 => (d + COMPLEX_OFFSETS[L], m.module.op(L).block(d).scale(&sign)),
                _ => (d + COMPLEX_OFFSETS[R] + COMPLEX_OFFSETS[L], m.module.monomial(&[L, R], d).scale(&fld.neg(&sign))),
            };
            blocks.push(((b, d), t, mat));
        }
    }
    let f = x.map(fld, &target, Deg::ZERO, blocks);
    (source, f)
}

/// The cone of a chain map: `X[1] ⊕ M` with `d(x, m) = (-d x, f x + d m)`.
pub fn chain_cone<K: Field>(f: &GradedMap<K>, x: &AComplex<K>, m: &AComplex<K>) -> AComplex<K> {
    AComplex {
        window: m.window,
        module: cone(f, &x.module, &m.module, D, false),
    }
}

/// The braid generator `R_r(M) = C(P_r ⊗ (r)M → M)`.
pub fn khse_generator<K: Field>(r: i32, m: &AComplex<K>) -> Result<AComplex<K>> {
    m.window.check_interior(r)?;
    let (x, f) = evaluation(r, m);
    debug_assert!(crate::module::check_morphism(&f, &x.module, &m.module).is_ok());
    let out = chain_cone(&f, &x, m);
    AComplex::new(out.window, out.module)
}

/// A word in the braid generators and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord {
    /// `(index, positive)`.
    pub letters: Vec<(i32, bool)>,
}

impl BraidWord {
    pub fn positive(indices: &[i32]) -> Self {
        BraidWord {
            letters: indices.iter().map(|&r| (r, true)).collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.1)
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            letters: self.letters.iter().rev().map(|&(r, p)| (r, !p)).collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|&(r, p)| if p { format!("{r}") } else { format!("-{r}") }).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Comma-separated indices; a leading `-` marks an inverse letter, so
    /// `-0` is the inverse of the generator at vertex 0.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(BraidWord::default());
        }
        let letters = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                let (neg, body) = match t.strip_prefix('-') {
                    Some(b) => (true, b),
                    None => (false, t.strip_prefix('+').unwrap_or(t)),
                };
                let r: i32 = body.parse().map_err(|_| Error::Parse(format!("bad braid letter {t:?}")))?;
                Ok((r, !neg))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BraidWord { letters })
    }
}

/// Applies the letters of a positive word from left to right.
pub fn braid_apply<K: Field>(word: &BraidWord, m: &AComplex<K>) -> Result<AComplex<K>> {
    let mut cur = m.clone();
    for &(r, positive) in &word.letters {
        if !positive {
            return Err(Error::Unsupported(format!(
                "inverse letter -{r}: inverse generators are only available on tricomplexes"
            )));
        }
        cur = khse_generator(r, &cur)?;
    }
    Ok(cur)
}

/// `hom_homotopy` from every probe `P_s⟨j⟩[k]` into `M`, in probe order.
pub fn fingerprint<K: Field>(m: &AComplex<K>, probes: &[(i32, i32, i32)]) -> Result<Vec<usize>> {
    probes
        .iter()
        .map(|&(s, j, k)| Ok(hom_homotopy(&AComplex::projective(m.field(), m.window, s, j, k)?, m, 0, 0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::module::check_morphism;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn window() -> Window {
        Window::new(-2, 2).unwrap()
    }

    /// Independent count of paths modulo the relations: words of length at
    /// most two along edges, where a length-two word survives only if it
    /// returns to its start, and the two returning words are identified.
    fn count_paths(lo: i32, hi: i32) -> usize {
        let mut n = 0;
        let mut loops = std::collections::BTreeSet::new();
        for a in lo..=hi {
            n += 1;
            for b in [a - 1, a + 1] {
                if (lo..=hi).contains(&b) {
                    n += 1;
                    for c in [b - 1, b + 1] {
                        if (lo..=hi).contains(&c) && c == a {
                            loops.insert(a);
                        }
                    }
                }
            }
        }
        n + loops.len()
    }

    #[test]
    fn algebra_sizes_and_relations() {
        let a2 = ZigzagAlgebra::new(Window::finite(1, 2).unwrap());
        assert_eq!(a2.dim(), 6);
        for (lo, hi) in [(0, 0), (1, 2), (-2, 2), (0, 5)] {
            let a = ZigzagAlgebra::new(Window::finite(lo, hi).unwrap());
            assert_eq!(a.dim(), count_paths(lo, hi));
            a.check_relations().unwrap();
            assert_eq!(a.table().len(), a.dim());
        }
        let a = ZigzagAlgebra::new(window());
        assert_eq!(a.mul(Path::Edge(0, 1), Path::Edge(1, 0)), Some(Path::Loop(0)));
        assert_eq!(a.mul(Path::Edge(0, -1), Path::Edge(-1, 0)), Some(Path::Loop(0)));
        assert_eq!(a.mul(Path::Edge(0, 1), Path::Edge(1, 2)), None);
    }

    #[test]
    fn projective_dims_and_basis() {
        let f = Rationals;
        let p = AModule::projective(&f, window(), 0, 0).unwrap();
        assert_eq!(p.module().total_dim(), 4);
        assert_eq!(p.degree_dims(), BTreeMap::from([(0, 2), (1, 2)]));
        assert_eq!(p.shift(1).degree_dims(), BTreeMap::from([(1, 2), (2, 2)]));
        let q = AModule::projective(&f, Window::finite(-2, 2).unwrap(), 2, 0).unwrap();
        assert_eq!(q.module().total_dim(), 3);
        assert!(AModule::projective(&f, window(), 3, 0).is_err());
    }

    #[test]
    fn paths_act_compatibly_with_the_table() {
        let f = PrimeField::default();
        let w = Window::finite(-2, 2).unwrap();
        let alg = ZigzagAlgebra::new(w);
        for r in -2..=2 {
            let p = AModule::projective(&f, w, r, 0).unwrap();
            let m = p.module();
            for &a in &alg.basis {
                for &b in &alg.basis {
                    for d in m.space().support() {
                        let lhs = match alg.mul(a, b) {
                            Some(ab) => path_action(&w, m, ab, d),
                            None => Matrix::zeros(&f, m.dim(d + path_offset(a) + path_offset(b)), m.dim(d)),
                        };
                        let mid = d + path_offset(a);
                        let rhs = path_action(&w, m, b, mid).mul(&path_action(&w, m, a, d));
                        assert_eq!(lhs, rhs, "{a} then {b} at {d}");
                    }
                }
            }
        }
    }

    fn path_offset(p: Path) -> Deg {
        Deg::d2(p.target() - p.source(), p.degree())
    }

    #[test]
    fn hom_between_projectives() {
        let f = Rationals;
        let p = |r, j| AModule::projective(&f, window(), r, j).unwrap();
        assert_eq!(hom_modules(&p(0, 0), &p(0, 0), 0).len(), 1);
        assert_eq!(hom_modules(&p(0, 0), &p(0, 0), 1).len(), 1);
        assert_eq!(hom_modules(&p(0, 0), &p(1, 0), 0).len(), 0);
        assert_eq!(hom_modules(&p(0, 0), &p(1, 0), 1).len(), 1);
        assert_eq!(hom_modules(&p(0, 0), &p(-1, 0), 0).len(), 1);
        assert_eq!(hom_modules(&p(0, 0), &p(-1, 0), 1).len(), 0);
        assert_eq!(hom_modules(&p(0, 0), &p(2, 0), 0).len(), 0);
        let id = GradedMap::identity(&f, p(1, 0).module().space());
        let basis = hom_modules(&p(1, 0), &p(1, 0), 0);
        assert_eq!(span_rank(id.source(), id.target(), Deg::ZERO, &[basis[0].clone(), id.clone()]), 1);
    }

    /// Dimension of module maps by brute force: every linear map of the
    /// right degree, kept when it commutes with both operators, counted by
    /// building the commutation equations entry by entry.
    fn brute_hom_dim<K: Field>(m: &GradedModule<K>, n: &GradedModule<K>, off: Deg) -> usize {
        let f = m.field();
        let mut vars = Vec::new();
        for (d, dm) in m.space().iter() {
            for r in 0..n.dim(d + off) {
                for c in 0..dm {
                    vars.push((d, r, c));
                }
            }
        }
        let mut eqs: Vec<Vec<K::Elem>> = Vec::new();
        for a in 0..m.ops().len() {
            let e = m.op(a).offset();
            for (d, dm) in m.space().iter() {
                let t = d + off + e;
                for p in 0..n.dim(t) {
                    for q in 0..dm {
                        let row: Vec<K::Elem> = vars
                            .iter()
                            .map(|&(vd, vr, vc)| {
                                let mut x = f.zero();
                                if vd == d && vc == q {
                                    x = f.add(&x, n.op(a).block(d + off).get(p, vr));
                                }
                                if vd == d + e && vr == p {
                                    x = f.sub(&x, m.op(a).block(d).get(vc, q));
                                }
                                x
                            })
                            .collect();
                        eqs.push(row);
                    }
                }
            }
        }
        let rows: Vec<&[K::Elem]> = eqs.iter().map(|r| r.as_slice()).collect();
        let mat = if rows.is_empty() {
            Matrix::zeros(f, 0, vars.len())
        } else {
            Matrix::new(f, rows.len(), vars.len(), rows.concat())
        };
        vars.len() - mat.rank()
    }

    fn random_amodule(f: &PrimeField, seed: u64) -> AModule<PrimeField> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let w = window();
        let mut m = AModule::simple(f, w, 0, 0).unwrap();
        let n = rng.gen_range(1..=3);
        for t in 0..n {
            let r = rng.gen_range(-2..=2);
            let j = rng.gen_range(-1..=1);
            let piece = if rng.gen_bool(0.6) {
                AModule::projective(f, w, r, j).unwrap()
            } else {
                AModule::simple(f, w, r, j).unwrap()
            };
            m = if t == 0 { piece } else { AModule { window: w, module: m.module.direct_sum(&piece.module) } };
        }
        AModule::new(w, crate::random::scramble(&m.module, &mut rng)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn hom_dims_match_brute_force(s1 in 0u64..1000, s2 in 0u64..1000, j in -1i32..=1) {
            let f = PrimeField::default();
            let (m, n) = (random_amodule(&f, s1), random_amodule(&f, s2));
            let basis = hom_modules(&m, &n, j);
            prop_assert_eq!(basis.len(), brute_hom_dim(m.module(), n.module(), Deg::d2(0, j)));
            for h in &basis {
                prop_assert!(check_morphism(h, m.module(), n.module()).is_ok());
            }
        }
    }

    /// `P_r --id--> P_r` in homological degrees 0 and 1.
    fn two_term(f: &Rationals, r: i32) -> AComplex<Rationals> {
        let p0 = AComplex::projective(f, window(), r, 0, 0).unwrap();
        let p1 = AComplex::projective(f, window(), r, 0, -1).unwrap();
        let sum = p0.direct_sum(&p1);
        let d = GradedMap::from_fn(f, sum.space(), sum.space(), COMPLEX_OFFSETS[D], |x, n, t| {
            if x.k() == 0 {
                Matrix::identity(f, n)
            } else {
                Matrix::zeros(f, t, n)
            }
        });
        AComplex::new(window(), sum.module().with_op(D, d)).unwrap()
    }

    #[test]
    fn null_homotopies() {
        let f = Rationals;
        let p = AComplex::projective(&f, window(), 0, 0, 0).unwrap();
        let zero = GradedMap::zero(&f, p.space(), p.space(), Deg::ZERO);
        assert!(is_null_homotopic(&zero, &p, &p).unwrap().is_some());
        let id = GradedMap::identity(&f, p.space());
        assert!(is_null_homotopic(&id, &p, &p).unwrap().is_none());
        let c = two_term(&f, 0);
        let id = GradedMap::identity(&f, c.space());
        let h = is_null_homotopic(&id, &c, &c).unwrap().expect("contractible");
        let dh = c.module().op(D).compose(&h).add(&h.compose(c.module().op(D)));
        assert_eq!(dh, id);
        assert_eq!(hom_homotopy(&c, &c, 0, 0), 0);
    }

    #[test]
    fn hom_homotopy_on_projectives() {
        let f = PrimeField::default();
        let p = |r, j, k| AComplex::projective(&f, window(), r, j, k).unwrap();
        assert_eq!(hom_homotopy(&p(0, 0, 0), &p(0, 0, 0), 0, 0), 1);
        assert_eq!(hom_homotopy(&p(0, 0, 0), &p(0, 0, 0), 1, 0), 1);
        assert_eq!(hom_homotopy(&p(0, 0, 0), &p(2, 0, 0), 0, 0), 0);
        assert_eq!(hom_homotopy(&p(-1, 0, 0), &p(1, 0, 0), 0, 0), 0);
    }

    /// The table of homotopy classes of maps between shifted projectives:
    /// one-dimensional in four cases, zero otherwise.
    fn table(r1: i32, j1: i32, k1: i32, r2: i32, j2: i32, k2: i32) -> usize {
        let nonzero = k1 == k2
            && ((r1 == r2 && j1 == j2)
                || (r1 == r2 + 1 && j1 == j2)
                || (r1 == r2 - 1 && j1 == j2 + 1)
                || (r1 == r2 && j1 == j2 + 1));
        usize::from(nonzero)
    }

    #[test]
    fn homotopy_hom_table() {
        let f = PrimeField::default();
        for r1 in -1..=1 {
            for dr in -2..=2 {
                let r2 = r1 + dr;
                if !(-2..=2).contains(&r2) {
                    continue;
                }
                for dj in -2..=2 {
                    for dk in -2..=2 {
                        let a = AComplex::projective(&f, window(), r1, dj, dk).unwrap();
                        let b = AComplex::projective(&f, window(), r2, 0, 0).unwrap();
                        assert_eq!(hom_homotopy(&a, &b, 0, 0), table(r1, dj, dk, r2, 0, 0), "r1={r1} r2={r2} dj={dj} dk={dk}");
                    }
                }
            }
        }
    }

    /// `M ⊗ k[d]/(d²)` with `D(m⊗1) = dm⊗1 + (-1)^h m⊗d`, `D(m⊗d) = dm⊗d`;
    /// with `mu` set, `d` on `M` is replaced by zero. Pieces: `(false, x)`
    /// for `m⊗1`, `(true, x)` for `m⊗d`.
    fn with_dual_numbers(m: &AComplex<Rationals>, mu: bool) -> (Pieces<(bool, Deg)>, GradedModule<Rationals>) {
        let f = Rationals;
        let mut p = Pieces::new(3);
        for (x, n) in m.space().iter() {
            p.push((false, x), x, n);
            p.push((true, x), x + COMPLEX_OFFSETS[D], n);
        }
        let mut ops = Vec::new();
        for a in [R, L] {
            let parts: Vec<_> = m
                .space()
                .support()
                .flat_map(|x| [false, true].map(|t| ((t, x), (t, x + COMPLEX_OFFSETS[a]), m.module().op(a).block(x))))
                .collect();
            ops.push(p.map(&f, &p, COMPLEX_OFFSETS[a], parts));
        }
        let mut parts = Vec::new();
        for (x, n) in m.space().iter() {
            let y = x + COMPLEX_OFFSETS[D];
            if !mu {
                parts.push(((false, x), (false, y), m.module().op(D).block(x)));
                parts.push(((true, x), (true, y), m.module().op(D).block(x)));
            }
            parts.push(((false, x), (true, x), Matrix::identity(&f, n).scale(&f.sign(x.k().rem_euclid(2) == 1))));
        }
        ops.push(p.map(&f, &p, COMPLEX_OFFSETS[D], parts));
        let module = GradedModule::new(&f, p.space().clone(), ops);
        (p, module)
    }

    #[test]
    fn dual_number_isomorphism() {
        let f = Rationals;
        let c = two_term(&f, 0).direct_sum(&AComplex::projective(&f, window(), 1, 0, 1).unwrap());
        let (pa, a) = with_dual_numbers(&c, false);
        let (pb, b) = with_dual_numbers(&c, true);
        AComplex::new(window(), a.clone()).unwrap();
        AComplex::new(window(), b.clone()).unwrap();
        // φ(m⊗1) = m⊗1, φ(m⊗d) = (-1)^{h+1} dm⊗1 + m⊗d; ψ has sign (-1)^h
        let build = |sign_odd: bool| {
            let mut parts = Vec::new();
            for (x, n) in c.space().iter() {
                let s = f.sign((x.k().rem_euclid(2) == 1) != sign_odd);
                parts.push(((false, x), (false, x), Matrix::identity(&f, n)));
                parts.push(((true, x), (true, x), Matrix::identity(&f, n)));
                parts.push(((true, x), (false, x + COMPLEX_OFFSETS[D]), c.module().op(D).block(x).scale(&s)));
            }
            parts
        };
        let phi = pa.map(&f, &pb, Deg::ZERO, build(true));
        let psi = pb.map(&f, &pa, Deg::ZERO, build(false));
        check_morphism(&phi, &a, &b).unwrap();
        check_morphism(&psi, &b, &a).unwrap();
        assert_eq!(phi.compose(&psi), GradedMap::identity(&f, b.space()));
    }

    #[test]
    fn khse_examples() {
        let f = Rationals;
        let w = window();
        let zero = AComplex::zero(&f, w);
        assert!(khse_generator(0, &zero).unwrap().is_zero());
        let p2 = AComplex::projective(&f, w, 2, 0, 0).unwrap();
        assert_eq!(khse_generator(0, &p2).unwrap(), p2);
        let p0 = AComplex::projective(&f, w, 0, 0, 0).unwrap();
        let out = khse_generator(0, &p0).unwrap();
        // (0)P_0 is two-dimensional, so the cone adds two copies of P_0
        assert_eq!(out.space().total_dim(), 4 + 2 * 4);
        assert!(khse_generator(2, &p0).is_err());
        assert!(braid_apply(&"-0".parse().unwrap(), &p0).is_err());
        assert_eq!(braid_apply(&BraidWord::default(), &p0).unwrap(), p0);
    }

    #[test]
    fn braid_relations_on_homology_and_probes() {
        let f = PrimeField::default();
        let w = Window::new(-3, 3).unwrap();
        let probes: Vec<(i32, i32, i32)> = (-2..=2).flat_map(|s| (-1..=2).flat_map(move |j| (-2..=2).map(move |k| (s, j, k)))).collect();
        for s in -1..=1 {
            let p = AComplex::projective(&f, w, s, 0, 0).unwrap();
            let a = braid_apply(&BraidWord::positive(&[0, 1, 0]), &p).unwrap();
            let b = braid_apply(&BraidWord::positive(&[1, 0, 1]), &p).unwrap();
            assert_eq!(a.homology_dims(), b.homology_dims());
            assert_eq!(fingerprint(&a, &probes).unwrap(), fingerprint(&b, &probes).unwrap());
            let c = braid_apply(&BraidWord::positive(&[-1, 1]), &p).unwrap();
            let d = braid_apply(&BraidWord::positive(&[1, -1]), &p).unwrap();
            assert_eq!(c.homology_dims(), d.homology_dims());
        }
    }

    #[test]
    fn braid_words_parse() {
        let w: BraidWord = "0,1,-0".parse().unwrap();
        assert_eq!(w.letters, vec![(0, true), (1, true), (0, false)]);
        assert_eq!(w.to_string(), "0,1,-0");
        assert_eq!(w.inverse().to_string(), "0,-1,-0");
        assert!("0,x".parse::<BraidWord>().is_err());
    }

    #[test]
    fn translate_and_shifts() {
        let f = Rationals;
        let p = AComplex::projective(&f, window(), 0, 0, 0).unwrap();
        let q = AComplex::projective(&f, Window::new(-1, 3).unwrap(), 1, 0, 0).unwrap();
        assert_eq!(p.translate().module(), q.module());
        assert_eq!(p.shift_internal(1), AComplex::projective(&f, window(), 0, 1, 0).unwrap());
        assert_eq!(p.shift_hom(1), AComplex::projective(&f, window(), 0, 0, 1).unwrap());
    }
}
