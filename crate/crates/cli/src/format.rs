//! Line-oriented text format for graded modules and graded maps.
//!
//! ```text
//! tricx-module v1
//! field p:32003
//! kind tricomplex
//! dim 0,0,0 1
//! dim 1,0,0 1
//! map d1 0,0,0 1x1
//!   1
//! end
//! ```
//!
//! `kind` is one of `bicomplex`, `zigzag-module`, `zigzag-complex` and
//! `tricomplex`. Bicomplexes add a `convention anticommute|commute` line and
//! zigzag kinds a `window <lo> <hi> [truncate]` line. Each `map` names an
//! operator, a source degree and a block shape, followed by one line per
//! row. Missing blocks are zero. `#` starts a comment.

use std::fmt::Write as _;

use tricx::bicomplex::{Bicomplex, Convention};
use tricx::tricomplex::Tricomplex;
use tricx::zigzag::{AComplex, AModule, Window, COMPLEX_OFFSETS, MODULE_OFFSETS};
use tricx::{Deg, Error, Field, FieldSpec, GradedMap, GradedModule, GradedSpace, Matrix, Result};

pub const HEADER: &str = "tricx-module v1";
pub const MAP_HEADER: &str = "tricx-maps v1";

/// What a module file describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Bicomplex(Convention),
    ZigzagModule(Window),
    ZigzagComplex(Window),
    Tricomplex,
}

impl Kind {
    pub fn arity(self) -> usize {
        match self {
            Kind::Bicomplex(_) | Kind::ZigzagModule(_) => 2,
            Kind::ZigzagComplex(_) | Kind::Tricomplex => 3,
        }
    }

    pub fn op_names(self) -> &'static [&'static str] {
        match self {
            Kind::Bicomplex(_) => &["d1", "d2"],
            Kind::ZigzagModule(_) => &["R", "L"],
            Kind::ZigzagComplex(_) => &["R", "L", "d"],
            Kind::Tricomplex => &["d1", "d2", "d3"],
        }
    }

    pub fn offsets(self) -> Vec<Deg> {
        match self {
            Kind::Bicomplex(_) => tricx::bicomplex::OFFSETS.to_vec(),
            Kind::ZigzagModule(_) => MODULE_OFFSETS.to_vec(),
            Kind::ZigzagComplex(_) => COMPLEX_OFFSETS.to_vec(),
            Kind::Tricomplex => tricx::tricomplex::OFFSETS.to_vec(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::Bicomplex(_) => "bicomplex",
            Kind::ZigzagModule(_) => "zigzag-module",
            Kind::ZigzagComplex(_) => "zigzag-complex",
            Kind::Tricomplex => "tricomplex",
        }
    }
}

/// A parsed module file. The module is not yet validated against the
/// relations of its kind; see the `to_*` methods.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleFile<K: Field> {
    pub field: FieldSpec,
    pub kind: Kind,
    pub module: GradedModule<K>,
}

impl<K: Field> ModuleFile<K> {
    pub fn new(field: &K, kind: Kind, module: GradedModule<K>) -> Self {
        ModuleFile {
            field: field.spec(),
            kind,
            module,
        }
    }

    pub fn bicomplex(b: &Bicomplex<K>) -> Self {
        ModuleFile::new(b.field(), Kind::Bicomplex(b.convention()), b.module().clone())
    }

    pub fn tricomplex(t: &Tricomplex<K>) -> Self {
        ModuleFile::new(t.field(), Kind::Tricomplex, t.module().clone())
    }

    pub fn zigzag_complex(c: &AComplex<K>) -> Self {
        ModuleFile::new(c.field(), Kind::ZigzagComplex(c.window()), c.module().clone())
    }

    pub fn to_bicomplex(&self) -> Result<Bicomplex<K>> {
        match self.kind {
            Kind::Bicomplex(c) => Bicomplex::from_module(self.module.clone(), c),
            k => Err(Error::Invalid(format!("expected a bicomplex, found {}", k.name()))),
        }
    }

    pub fn to_tricomplex(&self) -> Result<Tricomplex<K>> {
        match self.kind {
            Kind::Tricomplex => Tricomplex::new(self.module.clone()),
            k => Err(Error::Invalid(format!("expected a tricomplex, found {}", k.name()))),
        }
    }

    pub fn to_zigzag_complex(&self) -> Result<AComplex<K>> {
        match self.kind {
            Kind::ZigzagComplex(w) => AComplex::new(w, self.module.clone()),
            Kind::ZigzagModule(w) => Ok(AModule::new(w, self.module.clone())?.as_complex(0)),
            k => Err(Error::Invalid(format!("expected a zigzag complex, found {}", k.name()))),
        }
    }
}

fn parse_deg(s: &str, arity: usize) -> Result<Deg> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != arity {
        return Err(Error::Parse(format!("degree `{s}` should have {arity} components")));
    }
    let mut d = [0i32; 3];
    for (slot, p) in d.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| Error::Parse(format!("bad degree `{s}`")))?;
    }
    Ok(Deg(d))
}

fn show_deg(d: Deg, arity: usize) -> String {
    d.0[..arity].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_shape(s: &str) -> Result<(usize, usize)> {
    let (r, c) = s.split_once('x').ok_or_else(|| Error::Parse(format!("bad block shape `{s}`")))?;
    let r = r.parse().map_err(|_| Error::Parse(format!("bad block shape `{s}`")))?;
    let c = c.parse().map_err(|_| Error::Parse(format!("bad block shape `{s}`")))?;
    Ok((r, c))
}

/// Lines without comments and blank lines, with their line numbers.
fn content_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(n, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then(|| (n + 1, l.split_whitespace().collect()))
        })
        .collect()
}

/// Reads the `field` line without parsing the rest.
pub fn peek_field(text: &str) -> Result<FieldSpec> {
    for (_, words) in content_lines(text) {
        if words[0] == "field" {
            return words.get(1).ok_or_else(|| Error::Parse("empty field line".into()))?.parse();
        }
    }
    Ok(FieldSpec::default())
}

/// Matrix rows following a `map` line.
fn read_block<K: Field>(field: &K, lines: &[(usize, Vec<&str>)], at: &mut usize, rows: usize, cols: usize) -> Result<Matrix<K>> {
    let mut data = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (n, words) = lines.get(*at).ok_or_else(|| Error::Parse("file ends inside a block".into()))?;
        if words.len() != cols {
            return Err(Error::Parse(format!("line {n}: expected {cols} entries, found {}", words.len())));
        }
        for w in words {
            data.push(field.parse(w).map_err(|e| Error::Parse(format!("line {n}: {e}")))?);
        }
        *at += 1;
    }
    Ok(Matrix::new(field, rows, cols, data))
}

pub fn parse<K: Field>(field: &K, text: &str) -> Result<ModuleFile<K>> {
    let lines = content_lines(text);
    let mut at = 0;
    match lines.first() {
        Some((_, w)) if w.join(" ") == HEADER => at += 1,
        _ => return Err(Error::Parse(format!("missing header `{HEADER}`"))),
    }
    let mut spec = FieldSpec::default();
    let mut kind_name = None;
    let mut window = None;
    let mut convention = Convention::Anticommute;
    let mut dims = Vec::new();
    let mut maps: Vec<(usize, String, String, Matrix<K>)> = Vec::new();
    while at < lines.len() {
        let (n, words) = &lines[at];
        at += 1;
        let arg = |i: usize| words.get(i).copied().ok_or_else(|| Error::Parse(format!("line {n}: missing argument")));
        match words[0] {
            "field" => spec = arg(1)?.parse()?,
            "kind" => kind_name = Some(arg(1)?.to_string()),
            "convention" => convention = arg(1)?.parse()?,
            "window" => {
                let lo: i32 = arg(1)?.parse().map_err(|_| Error::Parse(format!("line {n}: bad window")))?;
                let hi: i32 = arg(2)?.parse().map_err(|_| Error::Parse(format!("line {n}: bad window")))?;
                window = Some(if words.get(3) == Some(&"truncate") { Window::finite(lo, hi)? } else { Window::new(lo, hi)? });
            }
            "dim" => dims.push((*n, arg(1)?.to_string(), arg(2)?.to_string())),
            "map" => {
                let (rows, cols) = parse_shape(arg(3)?)?;
                let m = read_block(field, &lines, &mut at, rows, cols)?;
                maps.push((*n, arg(1)?.to_string(), arg(2)?.to_string(), m));
            }
            "end" => break,
            other => return Err(Error::Parse(format!("line {n}: unknown directive `{other}`"))),
        }
    }
    if spec != field.spec() {
        return Err(Error::Invalid(format!("file is over {spec}, expected {}", field.spec())));
    }
    let need_window = || window.ok_or_else(|| Error::Parse("zigzag files need a window line".into()));
    let kind = match kind_name.as_deref() {
        Some("bicomplex") => Kind::Bicomplex(convention),
        Some("zigzag-module") => Kind::ZigzagModule(need_window()?),
        Some("zigzag-complex") => Kind::ZigzagComplex(need_window()?),
        Some("tricomplex") => Kind::Tricomplex,
        Some(k) => return Err(Error::Parse(format!("unknown kind `{k}`"))),
        None => return Err(Error::Parse("missing kind line".into())),
    };
    let arity = kind.arity();
    let mut space = GradedSpace::new(arity);
    for (n, d, k) in dims {
        let d = parse_deg(&d, arity)?;
        let k: usize = k.parse().map_err(|_| Error::Parse(format!("line {n}: bad dimension")))?;
        if space.dim(d) > 0 {
            return Err(Error::Parse(format!("line {n}: degree {} listed twice", show_deg(d, arity))));
        }
        space.set_dim(d, k);
    }
    let offsets = kind.offsets();
    let mut ops: Vec<GradedMap<K>> = offsets.iter().map(|o| GradedMap::zero(field, &space, &space, *o)).collect();
    for (n, name, d, m) in maps {
        let a = kind
            .op_names()
            .iter()
            .position(|x| *x == name)
            .ok_or_else(|| Error::Parse(format!("line {n}: unknown operator `{name}`")))?;
        let d = parse_deg(&d, arity)?;
        let want = (space.dim(d + offsets[a]), space.dim(d));
        if m.shape() != want || want.0 * want.1 == 0 {
            return Err(Error::Invalid(format!(
                "line {n}: block of {name} at degree {} should be {}x{}",
                show_deg(d, arity),
                want.0,
                want.1
            )));
        }
        ops[a].set_block(d, m);
    }
    Ok(ModuleFile {
        field: spec,
        kind,
        module: GradedModule::new(field, space, ops),
    })
}

fn write_block<K: Field>(out: &mut String, field: &K, m: &Matrix<K>) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| field.format(m.get(r, c))).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
}

pub fn write<K: Field>(file: &ModuleFile<K>) -> String {
    let f = file.module.field();
    let arity = file.kind.arity();
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "field {}", file.field);
    let _ = writeln!(out, "kind {}", file.kind.name());
    match file.kind {
        Kind::Bicomplex(c) => {
            let _ = writeln!(out, "convention {c}");
        }
        Kind::ZigzagModule(w) | Kind::ZigzagComplex(w) => {
            let _ = writeln!(out, "window {} {}{}", w.lo, w.hi, if w.truncate { " truncate" } else { "" });
        }
        Kind::Tricomplex => {}
    }
    for (d, n) in file.module.space().iter() {
        let _ = writeln!(out, "dim {} {n}", show_deg(d, arity));
    }
    for (a, op) in file.module.ops().iter().enumerate() {
        for (d, m) in op.blocks() {
            if m.is_zero() {
                continue;
            }
            let _ = writeln!(out, "map {} {} {}x{}", file.kind.op_names()[a], show_deg(d, arity), m.rows(), m.cols());
            write_block(&mut out, f, m);
        }
    }
    let _ = writeln!(out, "end");
    out
}

/// One named map for [`write_maps`]: name, degree offset and blocks.
pub type NamedMap<'a, K> = (String, Deg, Vec<(Deg, &'a Matrix<K>)>);

pub fn named<K: Field>(name: impl Into<String>, g: &GradedMap<K>) -> NamedMap<'_, K> {
    (name.into(), g.offset(), g.blocks().collect())
}

/// Named graded maps (witnesses, changes of basis) in the same block syntax.
pub fn write_maps<K: Field>(field: &K, arity: usize, maps: &[NamedMap<'_, K>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAP_HEADER}");
    let _ = writeln!(out, "field {}", field.spec());
    for (name, offset, blocks) in maps {
        let _ = writeln!(out, "graded-map {name} offset {}", show_deg(*offset, arity));
        for (d, m) in blocks {
            if m.is_zero() {
                continue;
            }
            let _ = writeln!(out, "map {name} {} {}x{}", show_deg(*d, arity), m.rows(), m.cols());
            write_block(&mut out, field, m);
        }
    }
    let _ = writeln!(out, "end");
    out
}
