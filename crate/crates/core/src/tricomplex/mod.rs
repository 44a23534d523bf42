//! Trigraded modules over the exterior algebra `Λ₃ = Λ(∂₁, ∂₂, ∂₃)`.
//!
//! A tricomplex is a `(i, j, k)`-graded space with three square-zero,
//! pairwise anticommuting operators of degrees `e₁, e₂, e₃`. The submodules
//! hold the functors `U_r`, the braid functors `R_r`, `R'_r`, the stable
//! category and the bridges from bicomplexes and zigzag complexes.

mod bridge;
mod functors;
mod stable;
pub mod verify;

use std::collections::BTreeMap;

pub use bridge::{bicomplex_bridge, bicomplex_unbridge, functor_g, permute_axes};
pub use functors::{braid_r, braid_rprime, braid_rprime_with, d3_cone, functor_u, line, nat_in, nat_out, restrict_partial, OutSigns};
pub use stable::{
    braid_word, fingerprint, stable_cone, stable_hom, stable_iso, stable_shift, stable_zero_maps, strip_free, Fingerprint, StableObject,
};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Deg, GradedMap, GradedSpace};
use crate::module::{check_morphism, GradedModule};

pub const OFFSETS: [Deg; 3] = [Deg::new(1, 0, 0), Deg::new(0, 1, 0), Deg::new(0, 0, 1)];
pub const NAMES: [&str; 3] = ["d1", "d2", "d3"];

/// Degrees of the basis `ω, ∂₁ω, ∂₂ω, ∂₂∂₁ω` of `Q`.
pub const Q_DEGREES: [Deg; 4] = [Deg::new(0, 0, 0), Deg::new(1, 0, 0), Deg::new(0, 1, 0), Deg::new(1, 1, 0)];

/// A validated tricomplex.
#[derive(Clone, Debug, PartialEq)]
pub struct Tricomplex<K: Field> {
    module: GradedModule<K>,
}

impl<K: Field> Tricomplex<K> {
    pub fn new(module: GradedModule<K>) -> Result<Self> {
        if module.space().arity() != 3 || module.offsets() != OFFSETS {
            return Err(Error::Invalid("expected a trigraded module with d1, d2, d3 of degrees e1, e2, e3".into()));
        }
        module.check_exterior(&NAMES)?;
        Ok(Tricomplex { module })
    }

    /// For constructions that are valid by design; the relations are still
    /// checked.
    pub(crate) fn checked(module: GradedModule<K>) -> Self {
        match Tricomplex::new(module) {
            Ok(t) => t,
            Err(e) => panic!("construction produced an invalid tricomplex: {e}"),
        }
    }

    pub fn from_arrows(field: &K, degs: &[Deg], arrows: &[(usize, usize, usize, i64)]) -> Result<Self> {
        Tricomplex::new(GradedModule::from_arrows(field, 3, &OFFSETS, degs, arrows))
    }

    pub fn zero(field: &K) -> Self {
        Tricomplex {
            module: GradedModule::trivial(field, GradedSpace::new(3), &OFFSETS),
        }
    }

    /// The one-dimensional module in degree `at`.
    pub fn simple(field: &K, at: Deg) -> Self {
        Tricomplex::checked(GradedModule::from_arrows(field, 3, &OFFSETS, &[at], &[]))
    }

    /// `Λ₃{at}`, with basis the increasing monomials `∂_S` applied to the
    /// generator, ordered by the bitmask of `S`.
    pub fn free(field: &K, at: Deg) -> Self {
        let (degs, arrows) = exterior_shape(at, 8);
        Tricomplex::checked(GradedModule::from_arrows(field, 3, &OFFSETS, &degs, &arrows))
    }

    /// `Q = Λ₃ω / Λ₃∂₃ω` with basis `ω, ∂₁ω, ∂₂ω, ∂₂∂₁ω`.
    pub fn q(field: &K) -> Self {
        let arrows = [(0, 0, 1, 1), (1, 0, 2, 1), (1, 1, 3, 1), (0, 2, 3, -1)];
        Tricomplex::checked(GradedModule::from_arrows(field, 3, &OFFSETS, &Q_DEGREES, &arrows))
    }

    /// `Q{at}`.
    pub fn q_at(field: &K, at: Deg) -> Self {
        Tricomplex::q(field).shift(at)
    }

    /// `Λ₁' = k[∂₃]/(∂₃²)` with `∂₁, ∂₂` acting by zero.
    pub fn lambda1_prime(field: &K) -> Self {
        Tricomplex::checked(GradedModule::from_arrows(field, 3, &OFFSETS, &[Deg::ZERO, OFFSETS[2]], &[(2, 0, 1, 1)]))
    }

    /// `Λ̂ = Λ₃/(∂₁∂₂∂₃){-1,-1,-1}`.
    pub fn lambda_hat(field: &K) -> Self {
        let (degs, arrows) = exterior_shape(Deg::new(-1, -1, -1), 7);
        Tricomplex::checked(GradedModule::from_arrows(field, 3, &OFFSETS, &degs, &arrows))
    }

    pub fn module(&self) -> &GradedModule<K> {
        &self.module
    }

    pub fn into_module(self) -> GradedModule<K> {
        self.module
    }

    pub fn field(&self) -> &K {
        self.module.field()
    }

    pub fn space(&self) -> &GradedSpace {
        self.module.space()
    }

    /// Operator `∂_{a+1}`.
    pub fn d(&self, a: usize) -> &GradedMap<K> {
        self.module.op(a)
    }

    pub fn dim(&self, x: Deg) -> usize {
        self.module.dim(x)
    }

    pub fn total_dim(&self) -> usize {
        self.module.total_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    pub fn dims(&self) -> BTreeMap<Deg, usize> {
        self.space().iter().collect()
    }

    /// `M{s}`.
    pub fn shift(&self, s: Deg) -> Self {
        Tricomplex {
            module: self.module.shift(s),
        }
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        Tricomplex {
            module: self.module.direct_sum(&o.module),
        }
    }
}

/// Basis `∂_S g` of a free module for the first `count` bitmasks `S`, with
/// `∂_r ∂_S = (-1)^{#{s ∈ S, s < r}} ∂_{S ∪ r}`.
fn exterior_shape(at: Deg, count: usize) -> (Vec<Deg>, Vec<(usize, usize, usize, i64)>) {
    let deg = |s: usize| (0..3).filter(|a| s >> a & 1 == 1).fold(at, |x, a| x + OFFSETS[a]);
    let degs = (0..count).map(deg).collect();
    let mut arrows = Vec::new();
    for s in 0..count {
        for r in 0..3 {
            let t = s | 1 << r;
            if s >> r & 1 == 0 && t < count {
                let below = (0..r).filter(|a| s >> a & 1 == 1).count();
                arrows.push((r, s, t, if below % 2 == 0 { 1 } else { -1 }));
            }
        }
    }
    (degs, arrows)
}

/// A degree-preserving map of tricomplexes commuting with `∂₁, ∂₂, ∂₃`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriMorphism<K: Field> {
    pub source: Tricomplex<K>,
    pub target: Tricomplex<K>,
    pub map: GradedMap<K>,
}

impl<K: Field> TriMorphism<K> {
    pub fn new(source: Tricomplex<K>, target: Tricomplex<K>, map: GradedMap<K>) -> Result<Self> {
        if map.offset() != Deg::ZERO {
            return Err(Error::Invalid("a morphism of tricomplexes preserves degrees".into()));
        }
        check_morphism(&map, &source.module, &target.module)?;
        Ok(TriMorphism { source, target, map })
    }

    pub fn zero(source: &Tricomplex<K>, target: &Tricomplex<K>) -> Self {
        let map = GradedMap::zero(source.field(), source.space(), target.space(), Deg::ZERO);
        TriMorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        }
    }

    pub fn identity(m: &Tricomplex<K>) -> Self {
        TriMorphism {
            source: m.clone(),
            target: m.clone(),
            map: GradedMap::identity(m.field(), m.space()),
        }
    }
}

/// `M ⊗ N` with `∂(x ⊗ y) = ∂x ⊗ y + (-1)^{|x|} x ⊗ ∂y`, `|x|` the total
/// degree.
pub fn tensor<K: Field>(m: &Tricomplex<K>, n: &Tricomplex<K>) -> Tricomplex<K> {
    Tricomplex::checked(crate::module::tensor(&m.module, &n.module).module)
}
