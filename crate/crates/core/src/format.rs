//! Line-oriented text formats for representations, sequences and matrix sets.
//!
//! ```text
//! field gf 5
//! quiver kronecker
//! side left
//! dims 2 1
//! arrow a
//! 1
//! 0
//! arrow b
//! 0
//! 1
//! ```
//!
//! Arrow blocks are `dim(target) × dim(source)` in row-major order. For right
//! modules they describe right multiplication by the arrow, so source and target
//! are read in the opposite quiver. Several modules go into one file as
//! `module <name>` blocks; a sequence file holds modules `A`, `B`, `C` followed
//! by `map f` and `map g`, each with one `vertex <i>` block per vertex. Matrix
//! files hold `matrix <rows> <cols>` blocks of comma-separated path-algebra
//! elements. `#` starts a comment.

use crate::error::{Error, ParseError, Result};
use crate::field::{Field, FieldSpec};
use crate::mat::Mat;
use crate::purity::MatrixSet;
use crate::quiver::{AlgebraElement, AlgebraMatrix, Quiver};
use crate::rep::{ModuleMap, Representation, ShortExact, Side};

const KEYWORDS: [&str; 9] = ["field", "quiver", "side", "module", "dims", "arrow", "map", "vertex", "matrix"];

#[derive(Clone, Copy)]
struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> Option<(&'a str, &'a str)> {
        let (head, rest) = match self.text.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (self.text, ""),
        };
        KEYWORDS.contains(&head).then_some((head, rest))
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.no, message)
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let t = raw.split('#').next().unwrap_or("").trim();
            (!t.is_empty()).then_some(Line { no: i + 1, text: t })
        })
        .collect()
}

/// The field named by `field` lines, if any; conflicting lines are an error.
pub fn declared_field(text: &str) -> std::result::Result<Option<FieldSpec>, ParseError> {
    let mut found: Option<FieldSpec> = None;
    for line in lines(text) {
        if let Some(("field", rest)) = line.keyword() {
            let spec = FieldSpec::parse(rest).map_err(|e| e.or_line(line.no))?;
            match found {
                Some(prev) if prev != spec => {
                    return Err(line.err(format!("field {spec} conflicts with earlier field {prev}")));
                }
                _ => found = Some(spec),
            }
        }
    }
    Ok(found)
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            lines: lines(text),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<Line<'a>> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Line<'a>> {
        let l = self.peek();
        self.pos += 1;
        l
    }

    fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.no)
    }

    /// All tokens up to the next keyword line.
    fn tokens(&mut self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        while let Some(l) = self.peek() {
            if l.keyword().is_some() {
                break;
            }
            out.extend(l.text.split_whitespace().map(|t| (l.no, t)));
            self.pos += 1;
        }
        out
    }
}

fn read_matrix<F: Field>(
    cur: &mut Cursor<'_>,
    field: &F,
    rows: usize,
    cols: usize,
    header: Line<'_>,
) -> std::result::Result<Mat<F>, ParseError> {
    let toks = cur.tokens();
    if toks.len() != rows * cols {
        let at = toks.last().map_or(header.no, |t| t.0);
        return Err(ParseError::at(
            at,
            format!("block `{}` needs {rows}×{cols} = {} entries, found {}", header.text, rows * cols, toks.len()),
        ));
    }
    let mut data = Vec::with_capacity(toks.len());
    for (no, t) in toks {
        data.push(field.parse_elem(t).map_err(|e| e.or_line(no))?);
    }
    Ok(Mat::from_vec(field, rows, cols, data))
}

#[derive(Clone)]
struct Context {
    quiver: Quiver,
    side: Side,
}

fn header_line<F: Field>(line: Line<'_>, field: &F, ctx: &mut Context) -> std::result::Result<bool, ParseError> {
    match line.keyword() {
        Some(("field", rest)) => {
            let spec = FieldSpec::parse(rest).map_err(|e| e.or_line(line.no))?;
            if spec != field.spec() {
                return Err(line.err(format!("file is over {spec} but the computation runs over {}", field.spec())));
            }
            Ok(true)
        }
        Some(("quiver", rest)) => {
            ctx.quiver = Quiver::parse(rest).map_err(|e| e.or_line(line.no))?;
            Ok(true)
        }
        Some(("side", rest)) => {
            ctx.side = match rest {
                "left" => Side::Left,
                "right" => Side::Right,
                _ => return Err(line.err(format!("side must be `left` or `right`, not `{rest}`"))),
            };
            Ok(true)
        }
        _ => Ok(false),
    }
}

fn parse_usizes(line: Line<'_>, rest: &str) -> std::result::Result<Vec<usize>, ParseError> {
    rest.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| line.err(format!("expected a count, found `{t}`"))))
        .collect()
}

/// Reads one module body starting at a `dims` line.
fn read_module<F: Field>(cur: &mut Cursor<'_>, field: &F, ctx: &mut Context) -> std::result::Result<Representation<F>, ParseError> {
    // Header lines may precede `dims` inside a module block.
    let dims_line = loop {
        let line = cur
            .next()
            .ok_or_else(|| ParseError::at(cur.last_line(), "module block has no `dims` line"))?;
        if header_line(line, field, ctx)? {
            continue;
        }
        match line.keyword() {
            Some(("dims", _)) => break line,
            _ => return Err(line.err(format!("expected `dims`, found `{}`", line.text))),
        }
    };
    let dims = parse_usizes(dims_line, dims_line.keyword().map_or("", |k| k.1))?;
    let base = ctx.quiver.clone();
    if dims.len() != base.vertex_count() {
        return Err(dims_line.err(format!(
            "quiver has {} vertices but {} dimensions were given",
            base.vertex_count(),
            dims.len()
        )));
    }
    let eff = match ctx.side {
        Side::Left => base.clone(),
        Side::Right => base.opposite(),
    };
    let mut maps: Vec<Option<Mat<F>>> = vec![None; eff.arrows().len()];
    while let Some(line) = cur.peek() {
        let Some(("arrow", name)) = line.keyword() else {
            break;
        };
        cur.next();
        let i = eff
            .arrow_index(name)
            .ok_or_else(|| line.err(format!("unknown arrow `{name}`")))?;
        if maps[i].is_some() {
            return Err(line.err(format!("arrow `{name}` given twice")));
        }
        let a = &eff.arrows()[i];
        maps[i] = Some(read_matrix(cur, field, dims[a.target], dims[a.source], line)?);
    }
    let mut full = Vec::with_capacity(maps.len());
    for (i, m) in maps.into_iter().enumerate() {
        let a = &eff.arrows()[i];
        match m {
            Some(m) => full.push(m),
            None if dims[a.target] * dims[a.source] == 0 => full.push(Mat::zeros(field, dims[a.target], dims[a.source])),
            None => return Err(dims_line.err(format!("missing block for arrow `{}`", a.name))),
        }
    }
    Representation::from_base(field, &base, ctx.side, dims, full).map_err(|e| dims_line.err(e.to_string()))
}

fn default_context() -> Context {
    Context {
        quiver: Quiver::kronecker(),
        side: Side::Left,
    }
}

/// Named modules of a file, in order. A file without `module` lines holds one
/// unnamed module.
fn read_modules<F: Field>(cur: &mut Cursor<'_>, field: &F, ctx: &mut Context) -> std::result::Result<Vec<(String, Representation<F>)>, ParseError> {
    let mut out = Vec::new();
    while let Some(line) = cur.peek() {
        if header_line(line, field, ctx)? {
            cur.next();
            continue;
        }
        match line.keyword() {
            Some(("module", name)) => {
                cur.next();
                let mut local = ctx.clone();
                let m = read_module(cur, field, &mut local)?;
                out.push((name.to_string(), m));
            }
            Some(("dims", _)) => {
                let m = read_module(cur, field, ctx)?;
                out.push((String::new(), m));
            }
            Some(("map", _)) => break,
            _ => return Err(line.err(format!("unexpected `{}`", line.text))),
        }
    }
    Ok(out)
}

pub fn parse_modules<F: Field>(text: &str, field: &F) -> Result<Vec<Representation<F>>> {
    let mut cur = Cursor::new(text);
    let mut ctx = default_context();
    let mods = read_modules(&mut cur, field, &mut ctx)?;
    if let Some(line) = cur.peek() {
        return Err(line.err(format!("unexpected `{}`", line.text)).into());
    }
    Ok(mods.into_iter().map(|(_, m)| m).collect())
}

pub fn parse_representation<F: Field>(text: &str, field: &F) -> Result<Representation<F>> {
    let mut mods = parse_modules(text, field)?;
    match mods.len() {
        1 => Ok(mods.remove(0)),
        n => Err(ParseError::bare(format!("expected exactly one module, found {n}")).into()),
    }
}

fn read_map<F: Field>(
    cur: &mut Cursor<'_>,
    field: &F,
    source: &Representation<F>,
    target: &Representation<F>,
    header: Line<'_>,
) -> std::result::Result<Vec<Mat<F>>, ParseError> {
    let n = source.dims().len();
    let mut comps: Vec<Option<Mat<F>>> = vec![None; n];
    while let Some(line) = cur.peek() {
        let Some(("vertex", rest)) = line.keyword() else {
            break;
        };
        cur.next();
        let v = match rest.parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => v - 1,
            _ => return Err(line.err(format!("bad vertex `{rest}`"))),
        };
        if comps[v].is_some() {
            return Err(line.err(format!("vertex {rest} given twice")));
        }
        comps[v] = Some(read_matrix(cur, field, target.dim(v), source.dim(v), line)?);
    }
    comps
        .into_iter()
        .enumerate()
        .map(|(v, c)| match c {
            Some(c) => Ok(c),
            None if target.dim(v) * source.dim(v) == 0 => Ok(Mat::zeros(field, target.dim(v), source.dim(v))),
            None => Err(header.err(format!("missing block for vertex {}", v + 1))),
        })
        .collect()
}

pub fn parse_sequence<F: Field>(text: &str, field: &F) -> Result<ShortExact<F>> {
    let mut cur = Cursor::new(text);
    let mut ctx = default_context();
    let mods = read_modules(&mut cur, field, &mut ctx)?;
    let find = |name: &str, idx: usize| -> Result<Representation<F>> {
        mods.iter()
            .find(|(n, _)| n == name)
            .or_else(|| mods.get(idx).filter(|(n, _)| n.is_empty()))
            .map(|(_, m)| m.clone())
            .ok_or_else(|| ParseError::bare(format!("sequence file has no module `{name}`")).into())
    };
    let (a, b, c) = (find("A", 0)?, find("B", 1)?, find("C", 2)?);
    let mut f = None;
    let mut g = None;
    while let Some(line) = cur.next() {
        match line.keyword() {
            Some(("map", "f")) if f.is_none() => {
                let comps = read_map(&mut cur, field, &a, &b, line)?;
                f = Some(ModuleMap::new(a.clone(), b.clone(), comps).map_err(|e| line.err(e.to_string()))?);
            }
            Some(("map", "g")) if g.is_none() => {
                let comps = read_map(&mut cur, field, &b, &c, line)?;
                g = Some(ModuleMap::new(b.clone(), c.clone(), comps).map_err(|e| line.err(e.to_string()))?);
            }
            _ => return Err(line.err(format!("unexpected `{}`", line.text)).into()),
        }
    }
    let (Some(f), Some(g)) = (f, g) else {
        return Err(ParseError::at(cur.last_line(), "sequence file needs `map f` and `map g`").into());
    };
    ShortExact::validate(f, g).map_err(|d| Error::NotExact(d.to_string()))
}

pub fn parse_matrix_set<F: Field>(text: &str, field: &F) -> Result<MatrixSet<F>> {
    let mut cur = Cursor::new(text);
    let mut ctx = default_context();
    let mut matrices = Vec::new();
    while let Some(line) = cur.next() {
        if header_line(line, field, &mut ctx)? {
            if matches!(line.keyword(), Some(("side", _))) {
                return Err(line.err("matrix files take no `side` line").into());
            }
            continue;
        }
        let Some(("matrix", rest)) = line.keyword() else {
            return Err(line.err(format!("expected `matrix <rows> <cols>`, found `{}`", line.text)).into());
        };
        let shape = parse_usizes(line, rest)?;
        let [rows, cols] = shape[..] else {
            return Err(line.err("`matrix` takes two counts").into());
        };
        let mut entries = Vec::with_capacity(rows * cols);
        if cols > 0 {
            for _ in 0..rows {
                let row = cur
                    .next()
                    .ok_or_else(|| ParseError::at(cur.last_line(), format!("matrix needs {rows} rows")))?;
                let items: Vec<&str> = row.text.split(',').collect();
                if items.len() != cols {
                    return Err(row.err(format!("row has {} entries, expected {cols}", items.len())).into());
                }
                for it in items {
                    entries.push(AlgebraElement::parse(it, &ctx.quiver, field).map_err(|e| e.or_line(row.no))?);
                }
            }
        }
        matrices.push(AlgebraMatrix::new(&ctx.quiver, field, rows, cols, entries));
    }
    MatrixSet::new(&ctx.quiver, field, matrices)
}

fn write_mat<F: Field>(out: &mut String, m: &Mat<F>) {
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| m.field().format_elem(x)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

fn write_header<F: Field>(out: &mut String, m: &Representation<F>) {
    out.push_str(&format!("field {}\n", m.field().spec()));
    out.push_str(&format!("quiver {}\n", m.base_quiver().describe()));
    out.push_str(&format!("side {}\n", m.side()));
}

fn write_body<F: Field>(out: &mut String, m: &Representation<F>) {
    let dims: Vec<String> = m.dims().iter().map(|d| d.to_string()).collect();
    out.push_str(&format!("dims {}\n", dims.join(" ")));
    for (a, mat) in m.quiver().arrows().iter().zip(m.maps()) {
        out.push_str(&format!("arrow {}\n", a.name));
        write_mat(out, mat);
    }
}

pub fn write_representation<F: Field>(m: &Representation<F>) -> String {
    let mut out = String::new();
    write_header(&mut out, m);
    write_body(&mut out, m);
    out
}

/// Modules as `module M1`, `module M2`, ... blocks, each with its own header.
pub fn write_modules<F: Field>(ms: &[Representation<F>]) -> String {
    let mut out = String::new();
    for (i, m) in ms.iter().enumerate() {
        out.push_str(&format!("module M{}\n", i + 1));
        write_header(&mut out, m);
        write_body(&mut out, m);
    }
    out
}

pub fn write_sequence<F: Field>(s: &ShortExact<F>) -> String {
    let mut out = String::new();
    write_header(&mut out, s.a());
    for (name, m) in [("A", s.a()), ("B", s.b()), ("C", s.c())] {
        out.push_str(&format!("module {name}\n"));
        write_body(&mut out, m);
    }
    for (name, map) in [("f", s.f()), ("g", s.g())] {
        out.push_str(&format!("map {name}\n"));
        for (v, c) in map.components().iter().enumerate() {
            out.push_str(&format!("vertex {}\n", v + 1));
            write_mat(&mut out, c);
        }
    }
    out
}

pub fn write_matrix_set<F: Field>(hs: &MatrixSet<F>) -> String {
    let mut out = format!("field {}\nquiver {}\n", hs.field.spec(), hs.quiver.describe());
    for h in &hs.matrices {
        out.push_str(&format!("matrix {} {}\n", h.rows(), h.cols()));
        out.push_str(&h.format_body());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use crate::kronecker::make;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SAMPLE: &str = "field gf 5\nquiver kronecker\nside left\ndims 2 1\narrow a\n1\n0\narrow b\n0\n1\n";

    #[test]
    fn sample_parses() {
        let f = Fp::new(5);
        let m = parse_representation(SAMPLE, &f).unwrap();
        assert_eq!(m.dims(), &[2, 1]);
        assert_eq!(write_representation(&m), SAMPLE);
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = Rationals;
        for side in [Side::Left, Side::Right] {
            let q = match side {
                Side::Left => Quiver::kronecker(),
                Side::Right => Quiver::kronecker().opposite(),
            };
            let m = Representation::random(&f, &q, side, vec![2, 3], &mut rng);
            assert_eq!(parse_representation(&write_representation(&m), &f).unwrap(), m);
        }
        let g = Fp::new(3);
        let s = ShortExact::split(&make(&"P2".parse().unwrap(), &g).unwrap(), &make(&"I1".parse().unwrap(), &g).unwrap()).unwrap();
        let back = parse_sequence(&write_sequence(&s), &g).unwrap();
        assert_eq!(back.b(), s.b());
        assert_eq!(back.f().components(), s.f().components());
        let q = Quiver::kronecker();
        let hs = MatrixSet::new(
            &q,
            &g,
            vec![AlgebraMatrix::random(&q, &g, 2, 3, &mut rng, 0.7), AlgebraMatrix::zeros(&q, &g, 1, 1)],
        )
        .unwrap();
        let back = parse_matrix_set(&write_matrix_set(&hs), &g).unwrap();
        assert_eq!(back.matrices.len(), 2);
        assert_eq!(write_matrix_set(&back), write_matrix_set(&hs));
    }

    #[test]
    fn errors_carry_lines() {
        let f = Fp::new(5);
        let bad = SAMPLE.replace("arrow b\n0\n1", "arrow b\n0\n1\n2");
        let e = parse_representation(&bad, &f).unwrap_err().to_string();
        assert!(e.starts_with("line 11:"), "{e}");
        let e = parse_representation(&SAMPLE.replace("arrow b", "arrow c"), &f).unwrap_err().to_string();
        assert!(e.starts_with("line 8:"), "{e}");
        let e = parse_matrix_set("matrix 1 2\na, c\n", &f).unwrap_err().to_string();
        assert!(e.starts_with("line 2:"), "{e}");
        let e = parse_representation(SAMPLE, &Fp::new(7)).unwrap_err().to_string();
        assert!(e.starts_with("line 1:"), "{e}");
        assert_eq!(declared_field(SAMPLE).unwrap(), Some(FieldSpec::Prime(5)));
    }

    #[test]
    fn matrix_rows() {
        let f = Fp::new(5);
        let hs = parse_matrix_set("# pencils\nmatrix 1 1\na + 2*b\nmatrix 2 1\na\nb\n", &f).unwrap();
        assert_eq!(hs.matrices.len(), 2);
        assert_eq!((hs.matrices[1].rows(), hs.matrices[1].cols()), (2, 1));
        assert!(parse_matrix_set("", &f).unwrap().matrices.is_empty());
    }
}
