//! Randomized verification suites. Trials run in parallel and are collected
//! in trial order, so a suite's output depends only on its configuration.

use std::str::FromStr;

use rayon::prelude::*;
use tricx::random::{random_projective_complex, random_tricomplex};
use tricx::tricomplex::verify::{
    verify_braid, verify_bridge, verify_commute, verify_hom_entry, verify_inverse, verify_tl, Check,
};
use tricx::tricomplex::{functor_g, OutSigns, Tricomplex};
use tricx::zigzag::{AComplex, Window};
use tricx::{Deg, Error, Field, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Tl,
    Inverse,
    Braid,
    Bridge,
    Homtable,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Tl, Suite::Inverse, Suite::Braid, Suite::Bridge, Suite::Homtable];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tl => "tl",
            Suite::Inverse => "inverse",
            Suite::Braid => "braid",
            Suite::Bridge => "bridge",
            Suite::Homtable => "homtable",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`; expected tl, inverse, braid, bridge or homtable")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    /// Support box for random inputs, applied to every axis.
    pub window: (i32, i32),
    pub max_dim: usize,
    /// Signs of the counit; anything but the default is a deliberate
    /// corruption.
    pub signs: OutSigns,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 25,
            seed: 0,
            window: (-2, 2),
            max_dim: 3,
            signs: OutSigns::default(),
        }
    }
}

/// Seed of trial `t`, via the splitmix64 finalizer.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    let mut z = seed ^ (t as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator indices tested on random inputs.
pub const INDICES: [i32; 3] = [-1, 0, 1];

fn tagged<K: Field>(t: usize, mut c: Check<K>) -> Check<K> {
    c.name = format!("trial {t}: {}", c.name);
    c
}

fn plain<K: Field>(name: String, passed: bool, detail: String) -> Check<K> {
    Check {
        name,
        passed,
        detail,
        witness: None,
    }
}

/// The tricomplex of trial `t`.
pub fn trial_tricomplex<K: Field>(f: &K, cfg: &SuiteConfig, t: usize) -> Tricomplex<K> {
    random_tricomplex(f, trial_seed(cfg.seed, t), cfg.window, cfg.max_dim)
}

/// The complex of projectives of trial `t`, with vertices in the box and
/// one spare vertex on each side.
pub fn trial_complex<K: Field>(f: &K, cfg: &SuiteConfig, t: usize) -> Result<AComplex<K>> {
    let (lo, hi) = cfg.window;
    let w = Window::new(lo - 1, hi + 1)?;
    Ok(random_projective_complex(f, trial_seed(cfg.seed, t), w, (lo, hi)))
}

fn tl_trial<K: Field>(f: &K, cfg: &SuiteConfig, t: usize) -> Vec<Check<K>> {
    let m = trial_tricomplex(f, cfg, t);
    let seed = trial_seed(cfg.seed, t);
    let mut out = Vec::new();
    for r in INDICES {
        for s in [r, r + 1, r - 1, r + 2] {
            out.push(tagged(t, verify_tl(r, s, &m, seed)));
        }
    }
    out
}

fn inverse_trial<K: Field>(f: &K, cfg: &SuiteConfig, t: usize) -> Vec<Check<K>> {
    let m = trial_tricomplex(f, cfg, t);
    let seed = trial_seed(cfg.seed, t);
    INDICES
        .iter()
        .flat_map(|&r| verify_inverse(r, &m, cfg.signs, seed))
        .map(|c| tagged(t, c))
        .collect()
}

fn braid_trial<K: Field>(f: &K, cfg: &SuiteConfig, t: usize) -> Vec<Check<K>> {
    let m = trial_tricomplex(f, cfg, t);
    let seed = trial_seed(cfg.seed, t);
    vec![
        tagged(t, verify_braid(-1, &m, seed)),
        tagged(t, verify_braid(0, &m, seed)),
        tagged(t, verify_commute(-1, 1, &m, seed)),
    ]
}

/// `G` against the internal shift, the homological shift and the vertex
/// translation, compared as raw data.
pub fn shift_checks<K: Field>(c: &AComplex<K>) -> Vec<(String, bool)> {
    let g = functor_g(c);
    vec![
        ("G(C<1>) = G(C){1,1,0}".into(), functor_g(&c.shift_internal(1)) == g.shift(Deg::new(1, 1, 0))),
        ("G(C[1]) = G(C){0,0,-1}".into(), functor_g(&c.shift_hom(1)) == g.shift(Deg::new(0, 0, -1))),
        ("G(TC) = G(C){1,0,0}".into(), functor_g(&c.translate()) == g.shift(Deg::new(1, 0, 0))),
    ]
}

fn bridge_trial<K: Field>(f: &K, cfg: &SuiteConfig, t: usize) -> Vec<Check<K>> {
    let c = match trial_complex(f, cfg, t) {
        Ok(c) => c,
        Err(e) => return vec![plain(format!("trial {t}: complex"), false, e.to_string())],
    };
    let seed = trial_seed(cfg.seed, t);
    let mut out: Vec<Check<K>> = shift_checks(&c)
        .into_iter()
        .map(|(name, ok)| plain(format!("trial {t}: {name}"), ok, String::new()))
        .collect();
    for r in INDICES {
        out.push(tagged(t, verify_bridge(r, &c, seed)));
    }
    out
}

/// `G(P_r<j>[k]) = Q{r+j, j, -k}` on the nose, for all `|r|, |j|, |k| <= 2`.
pub fn projective_checks<K: Field>(f: &K, window: Window) -> Vec<Check<K>> {
    let mut out = Vec::new();
    for r in -2..=2 {
        for j in -2..=2 {
            for k in -2..=2 {
                let name = format!("G(P{r}<{j}>[{k}]) = Q{{{},{j},{}}}", r + j, -k);
                let check = match AComplex::projective(f, window, r, j, k) {
                    Ok(p) => {
                        let ok = functor_g(&p) == Tricomplex::q_at(f, Deg::new(r + j, j, -k));
                        plain(name, ok, String::new())
                    }
                    Err(e) => plain(name, false, e.to_string()),
                };
                out.push(check);
            }
        }
    }
    out
}

/// Every table entry with `|dr|, |dj|, |dk| <= 2` around `P_0<0>[0]`, in a
/// window of five vertices.
pub fn homtable_checks<K: Field>(f: &K) -> Result<Vec<Check<K>>> {
    let w = Window::new(-2, 2)?;
    let mut pairs = Vec::new();
    for dr in -2..=2 {
        for dj in -2..=2 {
            for dk in -2..=2 {
                pairs.push((dr, dj, dk));
            }
        }
    }
    Ok(pairs.par_iter().map(|&p| verify_hom_entry(f, w, (0, 0, 0), p)).collect())
}

/// Runs a suite and returns its checks in a fixed order.
pub fn run_suite<K: Field>(f: &K, suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Check<K>>> {
    let (lo, hi) = cfg.window;
    if lo > hi {
        return Err(Error::Invalid(format!("empty window {lo}:{hi}")));
    }
    let trial: fn(&K, &SuiteConfig, usize) -> Vec<Check<K>> = match suite {
        Suite::Tl => tl_trial,
        Suite::Inverse => inverse_trial,
        Suite::Braid => braid_trial,
        Suite::Bridge => bridge_trial,
        Suite::Homtable => return homtable_checks(f),
    };
    let mut out = Vec::new();
    if suite == Suite::Bridge {
        out.extend(projective_checks(f, Window::new(lo - 1, hi + 1)?));
    }
    let per_trial: Vec<Vec<Check<K>>> = (0..cfg.trials).into_par_iter().map(|t| trial(f, cfg, t)).collect();
    out.extend(per_trial.into_iter().flatten());
    Ok(out)
}
