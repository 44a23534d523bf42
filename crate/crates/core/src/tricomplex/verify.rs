//! Executable checks of the Temperley–Lieb relations for `U_r`, and of
//! invertibility and braid relations for `R_r` on given inputs.

use crate::field::Field;
use crate::graded::{Deg, GradedMap};
use crate::module::{find_iso, GradedModule, IsoOutcome};
use crate::tricomplex::{
    braid_r, braid_rprime_with, functor_g, functor_u, stable_hom, strip_free, OutSigns, Tricomplex,
};
use crate::zigzag::{hom_homotopy, khse_generator, AComplex, Window};

/// Random trials allowed to an isomorphism search before it gives up.
pub const ISO_TRIALS: usize = 32;

/// The outcome of one check.
#[derive(Clone, Debug)]
pub struct Check<K: Field> {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// An isomorphism and its inverse, when one was found.
    pub witness: Option<Witness<K>>,
}

/// An isomorphism `source → target` with its inverse.
#[derive(Clone, Debug)]
pub struct Witness<K: Field> {
    pub source: GradedModule<K>,
    pub target: GradedModule<K>,
    pub forward: GradedMap<K>,
    pub backward: GradedMap<K>,
}

impl<K: Field> Check<K> {
    fn plain(name: String, passed: bool, detail: String) -> Self {
        Check {
            name,
            passed,
            detail,
            witness: None,
        }
    }

    fn from_iso(name: String, (source, target): (GradedModule<K>, GradedModule<K>), out: IsoOutcome<K>) -> Self {
        match out {
            IsoOutcome::Iso(w) => Check {
                name,
                passed: true,
                detail: "isomorphic".into(),
                witness: Some(Witness {
                    source,
                    target,
                    forward: w.forward,
                    backward: w.backward,
                }),
            },
            IsoOutcome::NotIso(why) => Check::plain(name, false, format!("not isomorphic: {why}")),
            IsoOutcome::Unknown { trials } => Check::plain(name, false, format!("unknown after {trials} trials")),
        }
    }
}

fn iso<K: Field>(name: String, m: &Tricomplex<K>, n: &Tricomplex<K>, seed: u64) -> Check<K> {
    Check::from_iso(name, (m.module().clone(), n.module().clone()), find_iso(m.module(), n.module(), seed, ISO_TRIALS))
}

/// The same test as [`stable_iso`](crate::tricomplex::stable_iso), keeping the residues the witness lives
/// on.
fn stable<K: Field>(name: String, m: &Tricomplex<K>, n: &Tricomplex<K>, seed: u64) -> Check<K> {
    let a = strip_free(m).residue;
    let b = strip_free(n).residue;
    let out = find_iso(a.module(), b.module(), seed, ISO_TRIALS);
    Check::from_iso(name, (a.into_module(), b.into_module()), out)
}

fn u_word<K: Field>(rs: &[i32], m: &Tricomplex<K>) -> Tricomplex<K> {
    // U_{r1} U_{r2} … M applies the last letter first
    rs.iter().rev().fold(m.clone(), |acc, r| functor_u(*r, &acc))
}

/// The relation between `U_r` and `U_s`, as an isomorphism of tricomplexes:
/// `U_r U_r ≅ U_r{1,1,0} ⊕ U_r`, `U_r U_s U_r ≅ U_r{1,1,0}` for
/// `|r - s| = 1`, and `U_r U_s = 0` for `|r - s| > 1`.
pub fn verify_tl<K: Field>(r: i32, s: i32, m: &Tricomplex<K>, seed: u64) -> Check<K> {
    let u = functor_u(r, m);
    let diag = Deg::new(1, 1, 0);
    match (r - s).abs() {
        0 => {
            let lhs = u_word(&[r, r], m);
            let rhs = u.shift(diag).direct_sum(&u);
            iso(format!("U{r}U{r} = U{r}{{1,1,0}} + U{r}"), &lhs, &rhs, seed)
        }
        1 => {
            let lhs = u_word(&[r, s, r], m);
            let rhs = u.shift(diag);
            iso(format!("U{r}U{s}U{r} = U{r}{{1,1,0}}"), &lhs, &rhs, seed)
        }
        _ => {
            let lhs = u_word(&[r, s], m);
            Check::plain(format!("U{r}U{s} = 0"), lhs.is_zero(), format!("total dimension {}", lhs.total_dim()))
        }
    }
}

/// `R'_r R_r M ≅ M` and `R_r R'_r M ≅ M` in the stable category, with
/// `out_r` built from the given signs.
pub fn verify_inverse<K: Field>(r: i32, m: &Tricomplex<K>, signs: OutSigns, seed: u64) -> Vec<Check<K>> {
    let base = strip_free(m).residue;
    let rm = strip_free(&braid_r(r, &base)).residue;
    let mut out = Vec::new();
    let name = format!("R'{r} R{r} = id");
    out.push(match braid_rprime_with(r, &rm, signs) {
        Ok(x) => stable(name, &x, &base, seed),
        Err(e) => Check::plain(name, false, format!("out_{r} is not a morphism: {e}")),
    });
    let name = format!("R{r} R'{r} = id");
    out.push(match braid_rprime_with(r, &base, signs) {
        Ok(x) => {
            let x = braid_r(r, &strip_free(&x).residue);
            stable(name, &x, &base, seed)
        }
        Err(e) => Check::plain(name, false, format!("out_{r} is not a morphism: {e}")),
    });
    out
}

fn r_word<K: Field>(rs: &[i32], m: &Tricomplex<K>) -> Tricomplex<K> {
    rs.iter().rev().fold(strip_free(m).residue, |acc, r| strip_free(&braid_r(*r, &acc)).residue)
}

/// `R_r R_{r+1} R_r M ≅ R_{r+1} R_r R_{r+1} M` in the stable category.
pub fn verify_braid<K: Field>(r: i32, m: &Tricomplex<K>, seed: u64) -> Check<K> {
    let s = r + 1;
    let lhs = r_word(&[r, s, r], m);
    let rhs = r_word(&[s, r, s], m);
    stable(format!("R{r}R{s}R{r} = R{s}R{r}R{s}"), &lhs, &rhs, seed)
}

/// `R_r R_s M ≅ R_s R_r M` in the stable category, for `|r - s| > 1`.
pub fn verify_commute<K: Field>(r: i32, s: i32, m: &Tricomplex<K>, seed: u64) -> Check<K> {
    let lhs = r_word(&[r, s], m);
    let rhs = r_word(&[s, r], m);
    stable(format!("R{r}R{s} = R{s}R{r}"), &lhs, &rhs, seed)
}

/// `G(R_r C) ≅ R_r G(C)` in the stable category for a complex `C`.
pub fn verify_bridge<K: Field>(r: i32, c: &AComplex<K>, seed: u64) -> Check<K> {
    let name = format!("G(R{r} C) = R{r} G(C)");
    match khse_generator(r, c) {
        Ok(x) => stable(name, &functor_g(&x), &braid_r(r, &functor_g(c)), seed),
        Err(e) => Check::plain(name, false, e.to_string()),
    }
}

/// The expected dimension of `Hom(P_{r1}⟨j1⟩[k1], P_{r2}⟨j2⟩[k2])` up to
/// homotopy: one exactly when `k1 = k2` and `(r1 - r2, j1 - j2)` is one of
/// `(0,0), (1,0), (-1,1), (0,1)`.
pub fn hom_table(p1: (i32, i32, i32), p2: (i32, i32, i32)) -> usize {
    let (dr, dj, dk) = (p1.0 - p2.0, p1.1 - p2.1, p1.2 - p2.2);
    usize::from(dk == 0 && matches!((dr, dj), (0, 0) | (1, 0) | (-1, 1) | (0, 1)))
}

/// Compares `hom_homotopy` between two projectives, `stable_hom` between
/// their images under `G`, and the table.
pub fn verify_hom_entry<K: Field>(f: &K, window: Window, p1: (i32, i32, i32), p2: (i32, i32, i32)) -> Check<K> {
    let name = format!("Hom(P{}<{}>[{}], P{}<{}>[{}])", p1.0, p1.1, p1.2, p2.0, p2.1, p2.2);
    let a = AComplex::projective(f, window, p1.0, p1.1, p1.2);
    let b = AComplex::projective(f, window, p2.0, p2.1, p2.2);
    let (a, b) = match (a, b) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Check::plain(name, false, e.to_string()),
    };
    let h = hom_homotopy(&a, &b, 0, 0);
    let s = stable_hom(&functor_g(&a), &functor_g(&b), Deg::ZERO);
    let t = hom_table(p1, p2);
    Check::plain(name, h == s && s == t, format!("homotopy {h}, stable {s}, table {t}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::random::random_tricomplex;

    #[test]
    fn relations_on_q_and_a_free_module() {
        let f = PrimeField::default();
        for m in [Tricomplex::q(&f), Tricomplex::free(&f, Deg::new(0, -1, 0)), Tricomplex::simple(&f, Deg::ZERO)] {
            for (r, s) in [(0, 0), (0, 1), (0, -1), (0, 2)] {
                let c = verify_tl(r, s, &m, 1);
                assert!(c.passed, "{}: {}", c.name, c.detail);
            }
            for c in verify_inverse(0, &m, OutSigns::default(), 1) {
                assert!(c.passed, "{}: {}", c.name, c.detail);
            }
            let c = verify_braid(0, &m, 1);
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn random_inputs() {
        let f = PrimeField::default();
        for seed in 0..4 {
            let m = random_tricomplex(&f, seed, (-2, 2), 3);
            for r in -1..=1 {
                for s in [r, r + 1, r + 2] {
                    let c = verify_tl(r, s, &m, seed);
                    assert!(c.passed, "seed {seed}: {}: {}", c.name, c.detail);
                }
                for c in verify_inverse(r, &m, OutSigns::default(), seed) {
                    assert!(c.passed, "seed {seed}: {}: {}", c.name, c.detail);
                }
            }
            let c = verify_braid(0, &m, seed);
            assert!(c.passed, "seed {seed}: {}: {}", c.name, c.detail);
            let c = verify_commute(-1, 1, &m, seed);
            assert!(c.passed, "seed {seed}: {}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn a_corrupted_out_is_caught() {
        let f = PrimeField::default();
        let m = Tricomplex::free(&f, Deg::ZERO).direct_sum(&Tricomplex::q(&f));
        for (name, signs) in OutSigns::single_flips() {
            let failed = (-1..=1).any(|r| verify_inverse(r, &m, signs, 0).iter().any(|c| !c.passed));
            assert!(failed, "flipping {name} went unnoticed");
        }
    }

    #[test]
    fn hom_table_entries() {
        let f = PrimeField::default();
        let w = Window::new(-3, 3).unwrap();
        for dr in -2..=2 {
            for dj in -2..=2 {
                for dk in -2..=2 {
                    let c = verify_hom_entry(&f, w, (0, 0, 0), (dr, dj, dk));
                    assert!(c.passed, "{}: {}", c.name, c.detail);
                }
            }
        }
    }
}
