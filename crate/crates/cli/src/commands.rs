//! The subcommands, independent of argument parsing.

use std::collections::BTreeMap;

use tricx::bicomplex::{decompose, spectral_page, total_cohomology, Bicomplex};
use tricx::random::{random_bicomplex, random_projective_complex, random_tricomplex};
use tricx::tricomplex::{braid_word, fingerprint, functor_g, Fingerprint, Tricomplex};
use tricx::zigzag::{braid_apply, BraidWord, Window};
use tricx::{Deg, Error, Field, Result};

use crate::format::{self, Kind, ModuleFile};
use crate::report::{digest, Report};
use crate::suites::{run_suite, Suite, SuiteConfig};

/// Which object a braid word acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Complexes of projective zigzag modules, through the braid generators.
    Complex,
    /// Tricomplexes in the stable category.
    Tricomplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    Bicomplex,
    Tricomplex,
    ZigzagComplex,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Decompose { input: String },
    Espage { input: String, page: usize },
    Tot { input: String },
    Braid { input: String, word: BraidWord, side: Side },
    Verify { suite: Suite, config: SuiteConfig },
    Random { kind: RandomKind, seed: u64, window: (i32, i32), max_dim: usize },
}

/// A report plus the file the command produces, if any.
#[derive(Clone, Debug)]
pub struct Output {
    pub report: Report,
    pub file: Option<String>,
}

pub fn execute<K: Field>(f: &K, cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Decompose { input } => cmd_decompose(f, input),
        Command::Espage { input, page } => cmd_espage(f, input, *page),
        Command::Tot { input } => cmd_tot(f, input),
        Command::Braid { input, word, side } => cmd_braid(f, input, word, *side),
        Command::Verify { suite, config } => cmd_verify(f, *suite, config),
        Command::Random {
            kind,
            seed,
            window,
            max_dim,
        } => cmd_random(f, *kind, *seed, *window, *max_dim),
    }
}

fn show(d: Deg, arity: usize) -> String {
    format!("({})", d.display(arity))
}

fn read_bicomplex<K: Field>(f: &K, input: &str) -> Result<Bicomplex<K>> {
    Ok(format::parse(f, input)?.to_bicomplex()?.to_anticommute())
}

/// Per bidegree: dimension and the ranks of `d1`, `d2` and `d1 d2`.
pub fn rank_census<K: Field>(b: &Bicomplex<K>) -> BTreeMap<Deg, [usize; 4]> {
    let d12 = b.d1().compose(b.d2());
    b.space()
        .iter()
        .map(|(d, n)| (d, [n, b.d1().block(d).rank(), b.d2().block(d).rank(), d12.block(d).rank()]))
        .collect()
}

pub fn cmd_decompose<K: Field>(f: &K, input: &str) -> Result<Output> {
    let b = read_bicomplex(f, input)?;
    let dec = decompose(&b)?;
    let mut report = Report::new("decompose", f.spec().to_string(), digest(&[b"decompose", input.as_bytes()]), None);
    let rows = dec.census().into_iter().map(|(l, n)| (l.to_string(), format!("×{n}"))).collect();
    report.table("summands", rows);
    match dec.verify(&b) {
        Ok(()) => report.check("reassembly through the change of basis", true, ""),
        Err(e) => report.check("reassembly through the change of basis", false, e.to_string()),
    }
    let want = rank_census(&b);
    let got = rank_census(&dec.reassembled(f));
    let bad: Vec<String> = want
        .keys()
        .chain(got.keys())
        .filter(|d| want.get(d) != got.get(d))
        .map(|d| show(*d, 2))
        .collect();
    report.check("dimensions and ranks of d1, d2, d1d2", bad.is_empty(), bad.join(" "));
    let basis = format::write_maps(f, 2, &[("basis".to_string(), Deg::ZERO, dec.change_of_basis.iter().map(|(d, m)| (*d, m)).collect())]);
    Ok(Output {
        report,
        file: Some(basis),
    })
}

pub fn cmd_espage<K: Field>(f: &K, input: &str, page: usize) -> Result<Output> {
    let b = read_bicomplex(f, input)?;
    let table = spectral_page(&b, page)?;
    let mut report = Report::new(
        format!("espage --page {page}"),
        f.spec().to_string(),
        digest(&[b"espage", input.as_bytes(), page.to_string().as_bytes()]),
        None,
    );
    report.table(format!("E{page}"), table.into_iter().map(|(d, n)| (show(d, 2), n.to_string())).collect());
    Ok(Output { report, file: None })
}

pub fn cmd_tot<K: Field>(f: &K, input: &str) -> Result<Output> {
    let b = read_bicomplex(f, input)?;
    let mut report = Report::new("tot", f.spec().to_string(), digest(&[b"tot", input.as_bytes()]), None);
    let rows = total_cohomology(&b).into_iter().map(|(k, n)| (k.to_string(), n.to_string())).collect();
    report.table("total cohomology", rows);
    Ok(Output { report, file: None })
}

/// Probe degrees for fingerprints: the box `[-2, 2]^3`.
pub fn default_probes() -> Vec<Deg> {
    let mut out = Vec::new();
    for i in -2..=2 {
        for j in -2..=2 {
            for k in -2..=2 {
                out.push(Deg::new(i, j, k));
            }
        }
    }
    out
}

pub fn fingerprint_digest(fp: &Fingerprint) -> String {
    let dims: Vec<String> = fp.dims.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    let probes: Vec<String> = fp.probes.iter().map(|n| n.to_string()).collect();
    digest(&[dims.join(" ").as_bytes(), probes.join(" ").as_bytes()])
}

pub fn cmd_braid<K: Field>(f: &K, input: &str, word: &BraidWord, side: Side) -> Result<Output> {
    let file = format::parse(f, input)?;
    let (result, out_file) = match side {
        Side::Complex => {
            let c = file.to_zigzag_complex()?;
            let out = braid_apply(word, &c)?;
            (functor_g(&out), ModuleFile::zigzag_complex(&out))
        }
        Side::Tricomplex => {
            let t = match file.kind {
                Kind::ZigzagComplex(_) | Kind::ZigzagModule(_) => functor_g(&file.to_zigzag_complex()?),
                _ => file.to_tricomplex()?,
            };
            let out = braid_word(word, &t);
            (out.clone(), ModuleFile::tricomplex(&out))
        }
    };
    let side_name = match side {
        Side::Complex => "complex",
        Side::Tricomplex => "tricomplex",
    };
    let probes = default_probes();
    let fp = fingerprint(&result, &probes);
    let mut report = Report::new(
        format!("braid --side {side_name} --word {word}"),
        f.spec().to_string(),
        digest(&[b"braid", input.as_bytes(), side_name.as_bytes(), word.to_string().as_bytes()]),
        None,
    );
    report.table("fingerprint", vec![("sha256".into(), fingerprint_digest(&fp))]);
    report.table("stable graded dimensions", fp.dims.iter().map(|(d, n)| (show(*d, 3), n.to_string())).collect());
    let rows = probes
        .iter()
        .zip(&fp.probes)
        .filter(|(_, n)| **n > 0)
        .map(|(p, n)| (format!("Q{{{}}}", p.display(3)), n.to_string()))
        .collect();
    report.table("nonzero probes dim Hom(Q{p}, -)", rows);
    Ok(Output {
        report,
        file: Some(format::write(&out_file)),
    })
}

pub fn cmd_verify<K: Field>(f: &K, suite: Suite, cfg: &SuiteConfig) -> Result<Output> {
    let checks = run_suite(f, suite, cfg)?;
    let params = format!(
        "{} trials={} window={}:{} max-dim={} signs={:?}",
        suite.name(),
        cfg.trials,
        cfg.window.0,
        cfg.window.1,
        cfg.max_dim,
        cfg.signs
    );
    let mut report = Report::new(
        format!("verify {}", suite.name()),
        f.spec().to_string(),
        digest(&[b"verify", params.as_bytes()]),
        Some(cfg.seed),
    );
    let mut witnesses = Vec::new();
    for c in &checks {
        report.check(c.name.clone(), c.passed, c.detail.clone());
        if let Some(w) = &c.witness {
            witnesses.push(format::named(format!("\"{}\" forward", c.name), &w.forward));
            witnesses.push(format::named(format!("\"{}\" backward", c.name), &w.backward));
        }
    }
    let file = (!witnesses.is_empty()).then(|| format::write_maps(f, 3, &witnesses));
    Ok(Output { report, file })
}

pub fn cmd_random<K: Field>(f: &K, kind: RandomKind, seed: u64, window: (i32, i32), max_dim: usize) -> Result<Output> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Invalid(format!("empty window {lo}:{hi}")));
    }
    let file = match kind {
        RandomKind::Bicomplex => ModuleFile::bicomplex(&random_bicomplex(f, seed, window, max_dim)),
        RandomKind::Tricomplex => ModuleFile::tricomplex(&random_tricomplex(f, seed, window, max_dim)),
        RandomKind::ZigzagComplex => {
            ModuleFile::zigzag_complex(&random_projective_complex(f, seed, Window::new(lo - 1, hi + 1)?, window))
        }
    };
    let text = format::write(&file);
    let mut report = Report::new("random", f.spec().to_string(), digest(&[b"random", text.as_bytes()]), Some(seed));
    let rows = file.module.space().iter().map(|(d, n)| (show(d, file.kind.arity()), n.to_string())).collect();
    report.table("dimensions", rows);
    Ok(Output {
        report,
        file: Some(text),
    })
}

/// A tricomplex written as a module file, for tests and fixtures.
pub fn tricomplex_text<K: Field>(t: &Tricomplex<K>) -> String {
    format::write(&ModuleFile::tricomplex(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tricx::bicomplex::SummandLabel;
    use tricx::zigzag::AComplex;
    use tricx::{PrimeField, Rationals};

    fn bicomplex_text(b: &Bicomplex<Rationals>) -> String {
        format::write(&ModuleFile::bicomplex(b))
    }

    #[test]
    fn decompose_a_square_and_a_dot() {
        let f = Rationals;
        let sq = bicomplex_text(&Bicomplex::standard(&f, &SummandLabel::square(0, 0)));
        let out = cmd_decompose(&f, &sq).unwrap();
        let text = out.report.render();
        assert!(text.contains("Square@(0,0)  ×1"), "{text}");
        assert!(out.report.passed());
        let dot = bicomplex_text(&Bicomplex::standard(&f, &SummandLabel::dot(2, -1)));
        let text = cmd_decompose(&f, &dot).unwrap().report.render();
        assert!(text.contains("Dot@(2,-1)  ×1"), "{text}");
    }

    #[test]
    fn espage_and_tot_tables() {
        let f = Rationals;
        let z = bicomplex_text(&Bicomplex::standard(&f, &SummandLabel::zright(0, 0, 1)));
        let e1 = cmd_espage(&f, &z, 1).unwrap().report;
        assert_eq!(e1.tables[0].rows.len(), 2);
        let e2 = cmd_espage(&f, &z, 2).unwrap().report;
        assert!(e2.tables[0].rows.is_empty());
        let tot = cmd_tot(&f, &z).unwrap().report;
        assert!(tot.tables[0].rows.is_empty());
    }

    #[test]
    fn empty_word_keeps_the_fingerprint() {
        let f = PrimeField::default();
        let w = Window::new(-3, 3).unwrap();
        let p = AComplex::projective(&f, w, 0, 0, 0).unwrap();
        let text = format::write(&ModuleFile::zigzag_complex(&p));
        let empty = BraidWord::default();
        let a = cmd_braid(&f, &text, &empty, Side::Complex).unwrap();
        let b = cmd_braid(&f, &text, &empty, Side::Tricomplex).unwrap();
        let q = cmd_braid(&f, &tricomplex_text(&Tricomplex::q(&f)), &empty, Side::Tricomplex).unwrap();
        assert_eq!(a.report.tables[0], q.report.tables[0]);
        assert_eq!(b.report.tables[0], q.report.tables[0]);
    }

    #[test]
    fn braid_relation_on_both_sides() {
        let f = PrimeField::default();
        let w = Window::new(-3, 3).unwrap();
        let p = format::write(&ModuleFile::zigzag_complex(&AComplex::projective(&f, w, 1, 0, 0).unwrap()));
        for side in [Side::Complex, Side::Tricomplex] {
            let fp = |word: &str| cmd_braid(&f, &p, &word.parse().unwrap(), side).unwrap().report.tables[0].clone();
            assert_eq!(fp("0,1,0"), fp("1,0,1"));
            assert_eq!(fp("0,2"), fp("2,0"));
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let f = PrimeField::default();
        let cfg = SuiteConfig {
            trials: 2,
            window: (-1, 1),
            max_dim: 2,
            ..SuiteConfig::default()
        };
        let a = cmd_verify(&f, Suite::Tl, &cfg).unwrap();
        let b = cmd_verify(&f, Suite::Tl, &cfg).unwrap();
        assert_eq!(a.report.render(), b.report.render());
        assert_eq!(a.file, b.file);
        assert!(a.file.unwrap().starts_with(format::MAP_HEADER));
    }

    #[test]
    fn inputs_of_the_wrong_kind_are_rejected() {
        let f = PrimeField::default();
        let t = tricomplex_text(&Tricomplex::q(&f));
        assert!(cmd_decompose(&f, &t).is_err());
        assert!(cmd_braid(&f, &t, &BraidWord::default(), Side::Complex).is_err());
        assert!(cmd_espage(&f, &t, 1).is_err());
    }
}
