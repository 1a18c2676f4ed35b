//! Line-oriented text formats for every input kind, with writers.
//!
//! All formats share the same lexical rules: `#` starts a comment, blank
//! lines are skipped, and a line whose first token starts with a digit
//! belongs to the matrix (or simplex list) block opened by the keyword line
//! above it. An empty block stands for a matrix with no rows or no columns.
//!
//! Parsers return the value together with a [`SourceMap`] that remembers
//! where each entity was declared, so that invariant violations found later
//! can be reported against a line.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::cosheaf_tower::CosheafData;
use crate::error::Error;
use crate::field::Field;
use crate::graded::{AnnotatedMatrix, PersistenceModule, RawModuleMorphism};
use crate::interval::{Death, Interval};
use crate::matrix::DenseMatrix;
use crate::poset::{FinitePoset, PosetSheafInstance};
use crate::pres_pers_mod::RawComplex;
use crate::sheaf::{label, SheafInstance};
use crate::simplicial::SimplicialComplex;
use crate::tower::{Event, TowerScript};

/// A failure while reading an input file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    /// The text does not follow the format.
    #[error("line {line}: {entity}: {message}")]
    Parse { line: usize, entity: String, message: String },
    /// The text parses but the data violates an invariant.
    #[error("line {line}: {entity}: {source}")]
    Invalid { line: usize, entity: String, source: Error },
}

impl InputError {
    pub fn line(&self) -> usize {
        match self {
            InputError::Parse { line, .. } | InputError::Invalid { line, .. } => *line,
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, InputError::Parse { .. })
    }
}

fn parse_err(line: usize, entity: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Parse {
        line,
        entity: entity.into(),
        message: message.into(),
    }
}

fn invalid(line: usize, entity: impl Into<String>, source: Error) -> InputError {
    InputError::Invalid {
        line,
        entity: entity.into(),
        source,
    }
}

type Result<T> = std::result::Result<T, InputError>;

/// Where each entity of an input was declared.
#[derive(Clone, Debug, Default)]
pub struct SourceMap {
    /// Line of the header, the fallback location.
    pub header: usize,
    keys: Vec<(String, usize, Option<String>)>,
}

impl SourceMap {
    fn note(&mut self, key: impl Into<String>, line: usize) {
        self.keys.push((key.into(), line, None));
    }

    /// Like `note`, but reports the match as `entity` instead of the key.
    fn note_as(&mut self, key: impl Into<String>, entity: &str, line: usize) {
        self.keys.push((key.into(), line, Some(entity.to_string())));
    }

    fn best(&self, message: &str) -> Option<&(String, usize, Option<String>)> {
        self.keys
            .iter()
            .filter(|(k, _, _)| message.contains(k.as_str()))
            .max_by_key(|(k, _, _)| k.len())
    }

    /// The line of the longest recorded key occurring in `message`, or the
    /// header line.
    pub fn locate(&self, message: &str) -> usize {
        self.best(message).map_or(self.header, |&(_, line, _)| line)
    }

    /// Wraps a library error with the line it most likely refers to.
    pub fn attach(&self, error: Error) -> InputError {
        let message = error.to_string();
        let (entity, line) = match self.best(&message) {
            Some((_, line, Some(entity))) => (entity.clone(), *line),
            Some((key, line, None)) => (key.trim_end_matches([' ', ':']).to_string(), *line),
            None => ("input".to_string(), self.header),
        };
        invalid(line, entity, error)
    }
}

#[derive(Clone, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub source: SourceMap,
}

#[derive(Clone)]
struct Line<'a> {
    no: usize,
    tokens: Vec<&'a str>,
}

impl Line<'_> {
    fn keyword(&self) -> &str {
        self.tokens[0]
    }

    fn is_numeric(&self) -> bool {
        self.tokens[0].starts_with(|c: char| c.is_ascii_digit())
    }

    fn expect_len(&self, min: usize, max: Option<usize>, usage: &str) -> Result<()> {
        let n = self.tokens.len();
        if n < min || max.is_some_and(|m| n > m) {
            return Err(parse_err(self.no, self.keyword(), format!("expected `{usage}`")));
        }
        Ok(())
    }
}

/// A block of numeric lines following a keyword line.
#[derive(Clone, Debug, Default)]
struct Block {
    line: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Block {
    fn to_matrix(&self, k: Field, rows: usize, cols: usize, entity: &str) -> Result<DenseMatrix> {
        if self.rows.is_empty() && (rows == 0 || cols == 0) {
            return Ok(DenseMatrix::zeros(rows, cols));
        }
        if self.rows.len() != rows {
            return Err(invalid(
                self.line,
                entity,
                Error::shape(format!("rows of {entity}"), rows, self.rows.len()),
            ));
        }
        let mut data = Vec::with_capacity(rows);
        for (line, row) in &self.rows {
            if row.len() != cols {
                return Err(invalid(*line, entity, Error::shape(format!("columns of {entity}"), cols, row.len())));
            }
            let mut out = Vec::with_capacity(cols);
            for &v in row {
                out.push(k.residue(v, || entity.to_string()).map_err(|e| invalid(*line, entity, e))?);
            }
            data.push(out);
        }
        DenseMatrix::from_rows(rows, cols, data).map_err(|e| invalid(self.line, entity, e))
    }
}

struct Lexer<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("");
                let tokens: Vec<&str> = body.split_whitespace().collect();
                (!tokens.is_empty()).then_some(Line { no: i + 1, tokens })
            })
            .collect();
        Lexer { lines, pos: 0 }
    }

    fn next(&mut self) -> Option<Line<'a>> {
        let l = self.lines.get(self.pos)?.clone();
        self.pos += 1;
        Some(l)
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.no)
    }

    fn header(&mut self, keywords: &[&str], usage: &str) -> Result<(usize, Vec<&'a str>)> {
        let Some(line) = self.next() else {
            return Err(parse_err(1, "header", format!("empty input, expected `{usage}`")));
        };
        if !keywords.contains(&line.keyword()) {
            return Err(parse_err(line.no, line.keyword(), format!("expected header `{usage}`")));
        }
        Ok((line.no, line.tokens[1..].to_vec()))
    }

    /// Consumes the numeric lines that follow.
    fn block(&mut self, opened_at: usize) -> Result<Block> {
        let mut block = Block {
            line: opened_at,
            rows: Vec::new(),
        };
        while let Some(l) = self.lines.get(self.pos) {
            if !l.is_numeric() {
                break;
            }
            let mut row = Vec::with_capacity(l.tokens.len());
            for t in &l.tokens {
                row.push(number::<u64>(l.no, "matrix entry", t)?);
            }
            block.rows.push((l.no, row));
            self.pos += 1;
        }
        Ok(block)
    }

    /// Consumes the numeric lines that follow as raw token lists.
    fn raw_block(&mut self) -> Vec<(usize, Vec<&'a str>)> {
        let mut out = Vec::new();
        while let Some(l) = self.lines.get(self.pos) {
            if !l.is_numeric() {
                break;
            }
            out.push((l.no, l.tokens.clone()));
            self.pos += 1;
        }
        out
    }
}

fn number<T: std::str::FromStr>(line: usize, entity: &str, token: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, entity, format!("`{token}` is not a non-negative integer")))
}

fn field(line: usize, token: &str) -> Result<Field> {
    let p: u64 = number(line, "field", token)?;
    Field::new(p).map_err(|e| invalid(line, "field", e))
}

fn death(line: usize, token: &str) -> Result<Death> {
    token
        .parse()
        .map_err(|_| parse_err(line, "death", format!("`{token}` is neither an integer nor `inf`")))
}

/// A simplex written as `0,1,2`.
fn simplex(line: usize, token: &str) -> Result<Vec<u32>> {
    let mut s = Vec::new();
    for part in token.split(',') {
        s.push(number::<u32>(line, "simplex", part)?);
    }
    Ok(s)
}

fn dims(line: &Line<'_>, from: usize) -> Result<Vec<usize>> {
    line.tokens[from..].iter().map(|t| number(line.no, line.keyword(), t)).collect()
}

fn unknown(line: &Line<'_>) -> InputError {
    parse_err(line.no, line.keyword(), "unknown keyword")
}

/// `default` if square, zero otherwise.
fn default_map(rows: usize, cols: usize) -> DenseMatrix {
    if rows == cols {
        DenseMatrix::identity(rows)
    } else {
        DenseMatrix::zeros(rows, cols)
    }
}

fn write_matrix(out: &mut String, a: &DenseMatrix) {
    for r in 0..a.rows() {
        let row: Vec<String> = a.row(r).iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

// ---------------------------------------------------------------- ANNMAT

/// `annmat <rows> <cols> <p>`, then `r <birth> <death>` per row, `c <birth>
/// <death>` per column and the matrix.
pub fn parse_annmat(text: &str) -> Result<Parsed<AnnotatedMatrix>> {
    let mut lx = Lexer::new(text);
    let (header, args) = lx.header(&["annmat"], "annmat <rows> <cols> <p>")?;
    if args.len() != 3 {
        return Err(parse_err(header, "annmat", "expected `annmat <rows> <cols> <p>`"));
    }
    let rows: usize = number(header, "rows", args[0])?;
    let cols: usize = number(header, "cols", args[1])?;
    let k = field(header, args[2])?;
    let mut source = SourceMap { header, keys: Vec::new() };
    let mut ann = |lx: &mut Lexer<'_>, tag: &str, count: usize| -> Result<Vec<Interval>> {
        let mut out = Vec::with_capacity(count);
        for idx in 0..count {
            let at = lx.last_line();
            let Some(l) = lx.next() else {
                return Err(parse_err(at, tag, format!("expected {count} `{tag} <birth> <death>` lines, found {idx}")));
            };
            if l.keyword() != tag || l.tokens.len() != 3 {
                return Err(parse_err(l.no, l.keyword(), format!("expected `{tag} <birth> <death>`")));
            }
            let b = number(l.no, "birth", l.tokens[1])?;
            let d = death(l.no, l.tokens[2])?;
            let iv = Interval::new(b, d).map_err(|e| invalid(l.no, format!("{tag} {idx}"), e))?;
            source.note(format!("{} {idx}", if tag == "r" { "row" } else { "column" }), l.no);
            out.push(iv);
        }
        Ok(out)
    };
    let row_ann = ann(&mut lx, "r", rows)?;
    let col_ann = ann(&mut lx, "c", cols)?;
    let block = lx.block(lx.last_line())?;
    for (r, (line, _)) in block.rows.iter().enumerate() {
        source.note(format!("entry ({r},"), *line);
    }
    if let Some(l) = lx.next() {
        return Err(parse_err(l.no, l.keyword(), "unexpected line after the matrix"));
    }
    let a = block.to_matrix(k, rows, cols, "matrix")?;
    let value = AnnotatedMatrix::from_dense(k, row_ann, col_ann, &a).map_err(|e| source.attach(e))?;
    Ok(Parsed { value, source })
}

pub fn write_annmat(a: &AnnotatedMatrix) -> String {
    let mut out = format!("annmat {} {} {}\n", a.rows(), a.cols(), a.field().p());
    for iv in a.row_ann() {
        let _ = writeln!(out, "r {} {}", iv.birth, iv.death);
    }
    for iv in a.col_ann() {
        let _ = writeln!(out, "c {} {}", iv.birth, iv.death);
    }
    write_matrix(&mut out, &a.to_dense());
    out
}

// ------------------------------------------------------- RAWMOD / RAWCPLX

struct RawSections {
    k: Field,
    m: usize,
    dims: HashMap<&'static str, (usize, Vec<usize>)>,
    blocks: HashMap<(String, usize), Block>,
    source: SourceMap,
}

fn parse_raw(text: &str, head: &str, modules: &[&'static str], blocks: &[&str]) -> Result<RawSections> {
    let mut lx = Lexer::new(text);
    let usage = format!("{head} <m> <p>");
    let (header, args) = lx.header(&[head], &usage)?;
    if args.len() != 2 {
        return Err(parse_err(header, head, format!("expected `{usage}`")));
    }
    let m: usize = number(header, "m", args[0])?;
    let k = field(header, args[1])?;
    let mut out = RawSections {
        k,
        m,
        dims: HashMap::new(),
        blocks: HashMap::new(),
        source: SourceMap { header, keys: Vec::new() },
    };
    while let Some(l) = lx.next() {
        let (no, kw) = (l.no, l.keyword().to_string());
        if let Some(name) = kw.strip_prefix("dims") {
            let Some(&module) = modules.iter().find(|&&x| x == name) else {
                return Err(parse_err(no, &kw, "unknown module"));
            };
            let d = dims(&l, 1)?;
            if d.len() != m + 1 {
                return Err(invalid(no, &kw, Error::shape(kw.clone(), m + 1, d.len())));
            }
            if out.dims.insert(module, (no, d)).is_some() {
                return Err(parse_err(no, &kw, "declared twice"));
            }
        } else if blocks.contains(&kw.as_str()) {
            l.expect_len(2, Some(2), &format!("{kw} <i>"))?;
            let i: usize = number(no, &kw, l.tokens[1])?;
            let block = lx.block(no)?;
            out.source.note(format!("{kw} {i}"), no);
            if out.blocks.insert((kw.clone(), i), block).is_some() {
                return Err(parse_err(no, format!("{kw} {i}"), "declared twice"));
            }
        } else {
            return Err(unknown(&l));
        }
    }
    for module in modules {
        if !out.dims.contains_key(module) {
            return Err(parse_err(header, format!("dims{module}"), "missing"));
        }
    }
    Ok(out)
}

impl RawSections {
    fn dims(&self, module: &str) -> &[usize] {
        &self.dims[module].1
    }

    fn matrix(&mut self, tag: &str, i: usize, rows: usize, cols: usize, default: DenseMatrix) -> Result<DenseMatrix> {
        match self.blocks.remove(&(tag.to_string(), i)) {
            Some(b) => b.to_matrix(self.k, rows, cols, &format!("{tag} {i}")),
            None => Ok(default),
        }
    }

    fn module(&mut self, name: &str, tag: &str) -> Result<PersistenceModule> {
        let d = self.dims(name).to_vec();
        let maps = (0..self.m)
            .map(|i| self.matrix(tag, i, d[i + 1], d[i], default_map(d[i + 1], d[i])))
            .collect::<Result<Vec<_>>>()?;
        Ok(PersistenceModule { dims: d, maps })
    }

    fn morphism(&mut self, tag: &str, src: &str, dst: &str) -> Result<Vec<DenseMatrix>> {
        let (s, t) = (self.dims(src).to_vec(), self.dims(dst).to_vec());
        (0..=self.m)
            .map(|i| self.matrix(tag, i, t[i], s[i], DenseMatrix::zeros(t[i], s[i])))
            .collect()
    }

    fn leftovers(&self) -> Result<()> {
        match self.blocks.iter().min_by_key(|(_, b)| b.line) {
            Some(((tag, i), b)) => Err(parse_err(b.line, format!("{tag} {i}"), format!("index beyond m = {}", self.m))),
            None => Ok(()),
        }
    }
}

/// `rawmod <m> <p>`, `dimsM ...`, `dimsN ...`, then blocks `A <i>` (maps of
/// M), `B <i>` (maps of N) and `C <i>` (`M_i → N_i`). Missing structure maps
/// are the identity when square and zero otherwise; missing `C` blocks are
/// zero.
pub fn parse_rawmod(text: &str) -> Result<Parsed<RawModuleMorphism>> {
    let mut raw = parse_raw(text, "rawmod", &["M", "N"], &["A", "B", "C"])?;
    let source = raw.module("M", "A")?;
    let target = raw.module("N", "B")?;
    let maps = raw.morphism("C", "M", "N")?;
    raw.leftovers()?;
    let value = RawModuleMorphism::new(raw.k, source, target, maps).map_err(|e| raw.source.attach(e))?;
    Ok(Parsed { value, source: raw.source })
}

/// Like RAWMOD with header `rawcplx`, a third module `dimsL` with maps
/// `L <i>`, and connecting blocks `F <i>` (`L_i → M_i`) and `G <i>`
/// (`M_i → N_i`).
pub fn parse_rawcplx(text: &str) -> Result<Parsed<RawComplex>> {
    let mut raw = parse_raw(text, "rawcplx", &["L", "M", "N"], &["L", "A", "B", "F", "G"])?;
    let l = raw.module("L", "L")?;
    let m = raw.module("M", "A")?;
    let n = raw.module("N", "B")?;
    let f = raw.morphism("F", "L", "M")?;
    let g = raw.morphism("G", "M", "N")?;
    raw.leftovers()?;
    let value = RawComplex::new(raw.k, l, m, n, f, g).map_err(|e| raw.source.attach(e))?;
    Ok(Parsed { value, source: raw.source })
}

fn write_module(out: &mut String, name: &str, tag: &str, module: &PersistenceModule) {
    let d: Vec<String> = module.dims.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "dims{name} {}", d.join(" "));
    for (i, a) in module.maps.iter().enumerate() {
        let _ = writeln!(out, "{tag} {i}");
        write_matrix(out, a);
    }
}

fn write_maps(out: &mut String, tag: &str, maps: &[DenseMatrix]) {
    for (i, a) in maps.iter().enumerate() {
        let _ = writeln!(out, "{tag} {i}");
        write_matrix(out, a);
    }
}

pub fn write_rawmod(raw: &RawModuleMorphism) -> String {
    let mut out = format!("rawmod {} {}\n", raw.m(), raw.field.p());
    write_module(&mut out, "M", "A", &raw.source);
    write_module(&mut out, "N", "B", &raw.target);
    write_maps(&mut out, "C", &raw.maps);
    out
}

pub fn write_rawcplx(raw: &RawComplex) -> String {
    let mut out = format!("rawcplx {} {}\n", raw.stabilization(), raw.field.p());
    write_module(&mut out, "L", "L", &raw.l);
    write_module(&mut out, "M", "A", &raw.m);
    write_module(&mut out, "N", "B", &raw.n);
    write_maps(&mut out, "F", &raw.f);
    write_maps(&mut out, "G", &raw.g);
    out
}

// --------------------------------------------------------- TOWER / COSHEAF

fn parse_event(l: &Line<'_>) -> Result<Option<Event>> {
    match l.keyword() {
        "i" => {
            l.expect_len(3, None, "i <t> v0 v1 ...")?;
            let time = number(l.no, "i", l.tokens[1])?;
            let simplex = l.tokens[2..].iter().map(|t| number(l.no, "vertex", t)).collect::<Result<_>>()?;
            Ok(Some(Event::Include { time, simplex }))
        }
        "c" => {
            l.expect_len(4, Some(4), "c <t> <from> <to>")?;
            Ok(Some(Event::Collapse {
                time: number(l.no, "c", l.tokens[1])?,
                from: number(l.no, "from", l.tokens[2])?,
                to: number(l.no, "to", l.tokens[3])?,
            }))
        }
        _ => Ok(None),
    }
}

fn tower_from_events(k: Field, events: Vec<(usize, Event)>, source: &mut SourceMap) -> Result<TowerScript> {
    for (line, e) in &events {
        source.note(format!("at time {}:", e.time()), *line);
    }
    if events.is_empty() {
        return Err(parse_err(source.header, "tower", "no events"));
    }
    TowerScript::new(k, events.into_iter().map(|(_, e)| e).collect()).map_err(|e| source.attach(e))
}

/// `tower <p>` followed by events `i <t> v0 ... vk` and `c <t> <from> <to>`.
pub fn parse_tower(text: &str) -> Result<Parsed<TowerScript>> {
    let mut lx = Lexer::new(text);
    let (header, args) = lx.header(&["tower"], "tower <p>")?;
    if args.len() != 1 {
        return Err(parse_err(header, "tower", "expected `tower <p>`"));
    }
    let k = field(header, args[0])?;
    let mut events = Vec::new();
    while let Some(l) = lx.next() {
        match parse_event(&l)? {
            Some(e) => events.push((l.no, e)),
            None => return Err(unknown(&l)),
        }
    }
    let mut source = SourceMap { header, keys: Vec::new() };
    let value = tower_from_events(k, events, &mut source)?;
    Ok(Parsed { value, source })
}

fn write_events(out: &mut String, script: &TowerScript) {
    for e in &script.events {
        match e {
            Event::Include { time, simplex } => {
                let v: Vec<String> = simplex.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "i {time} {}", v.join(" "));
            }
            Event::Collapse { time, from, to } => {
                let _ = writeln!(out, "c {time} {from} {to}");
            }
        }
    }
}

pub fn write_tower(script: &TowerScript) -> String {
    let mut out = format!("tower {}\n", script.field.p());
    write_events(&mut out, script);
    out
}

/// A tower with cosheaf data: header `cosheaf <p>` (or `tower <p>`), the
/// tower events, `default <dim>`, `stalk <simplex> <dim>` and
/// `ext <face> <cofacet>` followed by a `stalk(face) × stalk(cofacet)`
/// matrix. Simplices are comma-separated vertex lists.
pub fn parse_cosheaf(text: &str) -> Result<Parsed<(TowerScript, CosheafData)>> {
    let mut lx = Lexer::new(text);
    let (header, args) = lx.header(&["cosheaf", "tower"], "cosheaf <p>")?;
    if args.len() != 1 {
        return Err(parse_err(header, "cosheaf", "expected `cosheaf <p>`"));
    }
    let k = field(header, args[0])?;
    let mut source = SourceMap { header, keys: Vec::new() };
    let mut events = Vec::new();
    let mut data = CosheafData::constant(1);
    let mut exts: Vec<(usize, Vec<u32>, Vec<u32>, Block)> = Vec::new();
    while let Some(l) = lx.next() {
        let no = l.no;
        if let Some(e) = parse_event(&l)? {
            events.push((no, e));
            continue;
        }
        match l.keyword() {
            "default" => {
                l.expect_len(2, Some(2), "default <dim>")?;
                data.default_stalk = number(no, "default", l.tokens[1])?;
            }
            "stalk" => {
                l.expect_len(3, Some(3), "stalk <simplex> <dim>")?;
                let s = simplex(no, l.tokens[1])?;
                source.note(format!("{} is not a simplex", label(&s)), no);
                data.set_stalk(s, number(no, "stalk", l.tokens[2])?);
            }
            "ext" => {
                l.expect_len(3, Some(3), "ext <face> <cofacet>")?;
                let (f, c) = (simplex(no, l.tokens[1])?, simplex(no, l.tokens[2])?);
                let block = lx.block(no)?;
                source.note(format!("{} <= {}", label(&f), label(&c)), no);
                exts.push((no, f, c, block));
            }
            _ => return Err(unknown(&l)),
        }
    }
    for (_, f, c, block) in exts {
        let entity = format!("ext {} {}", label(&f), label(&c));
        let a = block.to_matrix(k, data.stalk(&f), data.stalk(&c), &entity)?;
        data.set_ext(f, c, a);
    }
    let script = tower_from_events(k, events, &mut source)?;
    Ok(Parsed {
        value: (script, data),
        source,
    })
}

pub fn write_cosheaf(script: &TowerScript, data: &CosheafData) -> String {
    let mut out = format!("cosheaf {}\n", script.field.p());
    write_events(&mut out, script);
    let _ = writeln!(out, "default {}", data.default_stalk);
    for (s, d) in data.stalks() {
        let _ = writeln!(out, "stalk {} {d}", label(s));
    }
    for (f, c, a) in data.extensions() {
        let _ = writeln!(out, "ext {} {}", label(f), label(c));
        write_matrix(&mut out, a);
    }
    out
}

// ------------------------------------------------------------ SHEAF / POSET

/// Stalk, restriction and step declarations shared by SHEAF and POSET,
/// keyed by the cell names as written.
#[derive(Default)]
struct CellData<'a> {
    field: Option<(usize, Field)>,
    m: Option<(usize, usize)>,
    stalks: Vec<(usize, &'a str, Vec<usize>)>,
    res: Vec<(usize, &'a str, &'a str, usize, Block)>,
    steps: Vec<(usize, &'a str, usize, Block)>,
}

impl<'a> CellData<'a> {
    /// Handles a shared keyword; returns false if `l` is not one.
    fn take(&mut self, l: &Line<'a>, lx: &mut Lexer<'a>) -> Result<bool> {
        let no = l.no;
        match l.keyword() {
            "field" => {
                l.expect_len(2, Some(2), "field <p>")?;
                self.field = Some((no, field(no, l.tokens[1])?));
            }
            "m" => {
                l.expect_len(2, Some(2), "m <int>")?;
                self.m = Some((no, number(no, "m", l.tokens[1])?));
            }
            "stalk" => {
                l.expect_len(2, None, "stalk <cell> d_0 ... d_m")?;
                self.stalks.push((no, l.tokens[1], dims(l, 2)?));
            }
            "res" => {
                l.expect_len(4, Some(4), "res <lo> <hi> <i>")?;
                let i = number(no, "res", l.tokens[3])?;
                let block = lx.block(no)?;
                self.res.push((no, l.tokens[1], l.tokens[2], i, block));
            }
            "step" => {
                l.expect_len(3, Some(3), "step <cell> <i>")?;
                let i = number(no, "step", l.tokens[2])?;
                let block = lx.block(no)?;
                self.steps.push((no, l.tokens[1], i, block));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn field(&self, fallback: Field) -> Field {
        self.field.map_or(fallback, |(_, k)| k)
    }

    fn m(&self, header: usize) -> Result<usize> {
        self.m.map(|(_, m)| m).ok_or_else(|| parse_err(header, "m", "missing `m <int>` line"))
    }
}

/// `sheaf` header; `field <p>` (optional, else `default_field`), `m <int>`,
/// a `complex` line followed by maximal simplices one per line, then
/// `stalk <simplex> d_0 ... d_m`, `res <σ> <τ> <i>` and `step <σ> <i>`
/// each followed by a matrix. Unset data takes the [`SheafInstance`]
/// defaults.
pub fn parse_sheaf(text: &str, default_field: Field) -> Result<Parsed<SheafInstance>> {
    let mut lx = Lexer::new(text);
    let (header, _) = lx.header(&["sheaf"], "sheaf")?;
    let mut cells = CellData::default();
    let mut maximal: Option<(usize, Vec<Vec<u32>>)> = None;
    while let Some(l) = lx.next() {
        if l.keyword() == "complex" {
            let no = l.no;
            l.expect_len(1, Some(1), "complex")?;
            let mut simplices = Vec::new();
            for (line, tokens) in lx.raw_block() {
                let joined = tokens.join(",");
                simplices.push(simplex(line, &joined)?);
            }
            maximal = Some((no, simplices));
        } else if !cells.take(&l, &mut lx)? {
            return Err(unknown(&l));
        }
    }
    let Some((complex_line, maximal)) = maximal else {
        return Err(parse_err(header, "complex", "missing `complex` section"));
    };
    let k = cells.field(default_field);
    let m = cells.m(header)?;
    let complex = SimplicialComplex::from_maximal(&maximal).map_err(|e| invalid(complex_line, "complex", e))?;
    let mut source = SourceMap { header, keys: Vec::new() };
    let mut sheaf = SheafInstance::new(k, complex, m);
    for (no, cell, d) in &cells.stalks {
        let s = simplex(*no, cell)?;
        source.note(format!("stalk of {}", label(&s)), *no);
        sheaf.set_stalk(&s, d.clone()).map_err(|e| invalid(*no, format!("stalk {cell}"), e))?;
    }
    for (no, lo, hi, i, block) in &cells.res {
        let (s, t) = (simplex(*no, lo)?, simplex(*no, hi)?);
        let entity = format!("res {lo} {hi} {i}");
        let (si, ti) = match (sheaf.complex().index_of(&s), sheaf.complex().index_of(&t)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(invalid(*no, entity, Error::sheaf(format!("{lo} or {hi} is not a simplex of the complex")))),
        };
        let (rows, cols) = if *i <= m { (sheaf.stalk_dim(ti, *i), sheaf.stalk_dim(si, *i)) } else { (0, 0) };
        let a = block.to_matrix(k, rows, cols, &entity)?;
        source.note(format!("{} <= {} at index {i}", label(&s), label(&t)), *no);
        source.note(format!("{} <= {} at index", label(&s), label(&t)), *no);
        source.note_as(format!("natural for {} <= {} at index {i}", label(&s), label(&t)), &entity, *no);
        sheaf.set_restriction(&s, &t, *i, a).map_err(|e| invalid(*no, &entity, e))?;
    }
    for (no, cell, i, block) in &cells.steps {
        let s = simplex(*no, cell)?;
        let entity = format!("step {cell} {i}");
        let si = sheaf
            .complex()
            .index_of(&s)
            .ok_or_else(|| invalid(*no, &entity, Error::sheaf(format!("{cell} is not a simplex of the complex"))))?;
        let (rows, cols) = if *i < m { (sheaf.stalk_dim(si, i + 1), sheaf.stalk_dim(si, *i)) } else { (0, 0) };
        let a = block.to_matrix(k, rows, cols, &entity)?;
        source.note(format!("step of {} at index {i}", label(&s)), *no);
        sheaf.set_step(&s, *i, a).map_err(|e| invalid(*no, &entity, e))?;
    }
    Ok(Parsed { value: sheaf, source })
}

pub fn write_sheaf(sheaf: &SheafInstance) -> String {
    let c = sheaf.complex();
    let mut out = format!("sheaf\nfield {}\nm {}\ncomplex\n", sheaf.field.p(), sheaf.m());
    for s in c.simplices() {
        let _ = writeln!(out, "{}", label(s));
    }
    for (x, s) in c.simplices().iter().enumerate() {
        let d: Vec<String> = (0..=sheaf.m()).map(|i| sheaf.stalk_dim(x, i).to_string()).collect();
        let _ = writeln!(out, "stalk {} {}", label(s), d.join(" "));
    }
    for (x, s) in c.simplices().iter().enumerate() {
        for i in 0..sheaf.m() {
            let _ = writeln!(out, "step {} {i}", label(s));
            write_matrix(&mut out, &sheaf.step(x, i));
        }
    }
    for (s, t, _) in c.facet_pairs() {
        for i in 0..=sheaf.m() {
            let _ = writeln!(out, "res {} {} {i}", label(c.simplex(s)), label(c.simplex(t)));
            write_matrix(&mut out, &sheaf.restriction(s, t, i));
        }
    }
    out
}

/// `poset` header; `field <p>` (optional), `m <int>`, `elem <label> ...`,
/// `cover <lo> <hi>`, and sheaf data as in SHEAF keyed by element labels.
pub fn parse_poset(text: &str, default_field: Field) -> Result<Parsed<PosetSheafInstance>> {
    let mut lx = Lexer::new(text);
    let (header, _) = lx.header(&["poset"], "poset")?;
    let mut cells = CellData::default();
    let mut labels: Vec<(usize, String)> = Vec::new();
    let mut covers: Vec<(usize, &str, &str)> = Vec::new();
    while let Some(l) = lx.next() {
        match l.keyword() {
            "elem" => {
                l.expect_len(2, None, "elem <label> ...")?;
                labels.extend(l.tokens[1..].iter().map(|t| (l.no, t.to_string())));
            }
            "cover" => {
                l.expect_len(3, Some(3), "cover <lo> <hi>")?;
                covers.push((l.no, l.tokens[1], l.tokens[2]));
            }
            _ => {
                if !cells.take(&l, &mut lx)? {
                    return Err(unknown(&l));
                }
            }
        }
    }
    let k = cells.field(default_field);
    let m = cells.m(header)?;
    let mut source = SourceMap { header, keys: Vec::new() };
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (x, (no, name)) in labels.iter().enumerate() {
        if index.insert(name.as_str(), x).is_some() {
            return Err(parse_err(*no, format!("elem {name}"), "declared twice"));
        }
    }
    let find = |no: usize, name: &str| -> Result<usize> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| parse_err(no, name.to_string(), "undeclared element"))
    };
    let mut relations = Vec::with_capacity(covers.len());
    for &(no, lo, hi) in &covers {
        relations.push((find(no, lo)?, find(no, hi)?));
        source.note(format!("{lo} <= {hi}"), no);
        source.note(format!("from {lo} to {hi} "), no);
    }
    let header_line = header;
    let poset = FinitePoset::new(labels.iter().map(|(_, l)| l.clone()).collect(), &relations)
        .map_err(|e| invalid(covers.first().map_or(header_line, |c| c.0), "cover", e))?;
    let mut sheaf = PosetSheafInstance::new(k, poset, m);
    for (no, cell, d) in &cells.stalks {
        let x = find(*no, cell)?;
        source.note(format!("of {cell} "), *no);
        sheaf.set_stalk(x, d.clone()).map_err(|e| invalid(*no, format!("stalk {cell}"), e))?;
    }
    for (no, lo, hi, i, block) in &cells.res {
        let (x, y) = (find(*no, lo)?, find(*no, hi)?);
        let entity = format!("res {lo} {hi} {i}");
        let (rows, cols) = if *i <= m { (sheaf.stalk_dims(y)[*i], sheaf.stalk_dims(x)[*i]) } else { (0, 0) };
        let a = block.to_matrix(k, rows, cols, &entity)?;
        source.note(format!("{lo} <= {hi} at index {i}"), *no);
        source.note(format!("{lo} <= {hi} at index"), *no);
        source.note_as(format!("natural for {lo} <= {hi} at index {i}"), &entity, *no);
        sheaf.set_restriction(x, y, *i, a).map_err(|e| invalid(*no, &entity, e))?;
    }
    for (no, cell, i, block) in &cells.steps {
        let x = find(*no, cell)?;
        let entity = format!("step {cell} {i}");
        let (rows, cols) = if *i < m { (sheaf.stalk_dims(x)[i + 1], sheaf.stalk_dims(x)[*i]) } else { (0, 0) };
        let a = block.to_matrix(k, rows, cols, &entity)?;
        source.note(format!("step of {cell} at index {i}"), *no);
        sheaf.set_step(x, *i, a).map_err(|e| invalid(*no, &entity, e))?;
    }
    Ok(Parsed { value: sheaf, source })
}

pub fn write_poset(sheaf: &PosetSheafInstance) -> String {
    let p = sheaf.poset();
    let mut out = format!("poset\nfield {}\nm {}\n", sheaf.field.p(), sheaf.m());
    for x in 0..p.len() {
        let _ = writeln!(out, "elem {}", p.label(x));
    }
    for (x, y) in p.covers() {
        let _ = writeln!(out, "cover {} {}", p.label(x), p.label(y));
    }
    for x in 0..p.len() {
        let d: Vec<String> = sheaf.stalk_dims(x).iter().map(usize::to_string).collect();
        let _ = writeln!(out, "stalk {} {}", p.label(x), d.join(" "));
        for i in 0..sheaf.m() {
            let _ = writeln!(out, "step {} {i}", p.label(x));
            write_matrix(&mut out, &sheaf.step(x, i));
        }
    }
    for (x, y) in p.covers() {
        for i in 0..=sheaf.m() {
            let _ = writeln!(out, "res {} {} {i}", p.label(x), p.label(y));
            write_matrix(&mut out, &sheaf.restriction(x, y, i).expect("cover relation"));
        }
    }
    out
}
