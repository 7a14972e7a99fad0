//! Finite acyclic quivers, their path algebras, and matrices over them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};
use crate::field::{parse_rational, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug)]
struct QuiverData {
    name: String,
    vertices: usize,
    arrows: Vec<Arrow>,
    /// Every path, sorted.
    paths: Vec<Path>,
    /// `between[s][t]` indexes into `paths`.
    between: Vec<Vec<Vec<usize>>>,
}

/// A finite acyclic quiver. Vertices are `0..n` internally and `1..=n` in text.
/// Cloning is cheap.
#[derive(Clone)]
pub struct Quiver(Arc<QuiverData>);

impl PartialEq for Quiver {
    fn eq(&self, other: &Quiver) -> bool {
        self.0.vertices == other.0.vertices && self.0.arrows == other.0.arrows
    }
}

impl Eq for Quiver {}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quiver({})", self.0.name)
    }
}

impl Quiver {
    pub fn new(name: impl Into<String>, vertices: usize, arrows: Vec<Arrow>) -> Result<Quiver> {
        let name = name.into();
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= vertices || a.target >= vertices {
                return Err(Error::InvalidQuiver(format!("arrow `{}` uses a vertex outside 1..={vertices}", a.name)));
            }
            if !is_arrow_name(&a.name) {
                return Err(Error::InvalidQuiver(format!("bad arrow name `{}`", a.name)));
            }
            if arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow name `{}`", a.name)));
            }
        }
        // Kahn's algorithm: leftover vertices lie on a cycle.
        let mut indeg = vec![0usize; vertices];
        for a in &arrows {
            indeg[a.target] += 1;
        }
        let mut queue: Vec<usize> = (0..vertices).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for a in arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    queue.push(a.target);
                }
            }
        }
        if seen < vertices {
            return Err(Error::InvalidQuiver(format!("quiver `{name}` has an oriented cycle")));
        }

        let mut paths: Vec<Path> = (0..vertices).map(Path::trivial).collect();
        let mut frontier = paths.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for (i, a) in arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut seq = vec![i];
                        seq.extend_from_slice(&p.arrows);
                        next.push(Path {
                            source: p.source,
                            target: a.target,
                            arrows: seq,
                        });
                    }
                }
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        paths.sort();
        let mut between = vec![vec![Vec::new(); vertices]; vertices];
        for (i, p) in paths.iter().enumerate() {
            between[p.source][p.target].push(i);
        }
        Ok(Quiver(Arc::new(QuiverData {
            name,
            vertices,
            arrows,
            paths,
            between,
        })))
    }

    /// Vertices 1, 2 and arrows a, b: 2 → 1.
    pub fn kronecker() -> Quiver {
        let arrow = |n: &str| Arrow {
            name: n.to_string(),
            source: 1,
            target: 0,
        };
        Quiver::new("kronecker", 2, vec![arrow("a"), arrow("b")]).expect("kronecker quiver is valid")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn vertex_count(&self) -> usize {
        self.0.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.0.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.0.arrows.iter().position(|a| a.name == name)
    }

    pub fn is_kronecker(&self) -> bool {
        *self == Quiver::kronecker()
    }

    /// Same vertices, every arrow reversed; arrow indices are preserved.
    pub fn opposite(&self) -> Quiver {
        let name = match self.0.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.0.name),
        };
        let arrows = self
            .0
            .arrows
            .iter()
            .map(|a| Arrow {
                name: a.name.clone(),
                source: a.target,
                target: a.source,
            })
            .collect();
        Quiver::new(name, self.0.vertices, arrows).expect("opposite of an acyclic quiver is acyclic")
    }

    pub fn paths(&self) -> &[Path] {
        &self.0.paths
    }

    /// Paths from `source` to `target`, in canonical order.
    pub fn paths_between(&self, source: usize, target: usize) -> impl Iterator<Item = &Path> + '_ {
        self.0.between[source][target].iter().map(move |&i| &self.0.paths[i])
    }

    /// Position of `p` within `paths_between(p.source, p.target)`.
    pub fn path_position(&self, p: &Path) -> Option<usize> {
        self.0.between[p.source][p.target]
            .iter()
            .position(|&i| self.0.paths[i] == *p)
    }

    pub fn path_count_between(&self, source: usize, target: usize) -> usize {
        self.0.between[source][target].len()
    }

    /// Dimension of the path algebra.
    pub fn algebra_dim(&self) -> usize {
        self.0.paths.len()
    }

    /// Text description: `kronecker` or `custom <n> ; a 2 1 ; ...`; opposites carry `^op`.
    pub fn describe(&self) -> String {
        if self.is_kronecker() {
            return "kronecker".into();
        }
        if self.opposite().is_kronecker() {
            return "kronecker^op".into();
        }
        let mut s = format!("custom {}", self.0.vertices);
        for a in &self.0.arrows {
            s.push_str(&format!(" ; {} {} {}", a.name, a.source + 1, a.target + 1));
        }
        s
    }

    /// Parses the output of [`Quiver::describe`].
    pub fn parse(text: &str) -> std::result::Result<Quiver, ParseError> {
        let t = text.trim();
        if let Some(base) = t.strip_suffix("^op") {
            return Ok(Quiver::parse(base)?.opposite());
        }
        if t == "kronecker" {
            return Ok(Quiver::kronecker());
        }
        let rest = t
            .strip_prefix("custom")
            .ok_or_else(|| ParseError::bare(format!("unknown quiver `{t}`")))?;
        let mut parts = rest.split(';');
        let nv: usize = parts
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| ParseError::bare("custom quiver needs a vertex count"))?;
        let mut arrows = Vec::new();
        for part in parts {
            let w: Vec<&str> = part.split_whitespace().collect();
            let [name, s, t] = w[..] else {
                return Err(ParseError::bare(format!("arrow spec `{}` should be `name source target`", part.trim())));
            };
            let v = |x: &str| -> std::result::Result<usize, ParseError> {
                match x.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(ParseError::bare(format!("bad vertex `{x}`"))),
                }
            };
            arrows.push(Arrow {
                name: name.to_string(),
                source: v(s)?,
                target: v(t)?,
            });
        }
        Quiver::new("custom", nv, arrows).map_err(|e| ParseError::bare(e.to_string()))
    }
}

fn is_arrow_name(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(c) = chars.next() else { return false };
    if !(c.is_ascii_alphabetic() || c == '_') || !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return false;
    }
    // `e<digits>` is reserved for idempotents.
    !(s.len() > 1 && s.starts_with('e') && s[1..].chars().all(|c| c.is_ascii_digit()))
}

/// A path `α₁α₂…α_k`; `arrows[k-1]` is applied first. Trivial paths have no arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self · other` (other first), or `None` when `s(self) ≠ t(other)`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.source != other.target {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: other.source,
            target: self.target,
            arrows,
        })
    }

    /// The same path read in the opposite quiver.
    pub fn op(&self) -> Path {
        Path {
            source: self.target,
            target: self.source,
            arrows: self.arrows.iter().rev().copied().collect(),
        }
    }

    pub fn format(&self, q: &Quiver) -> String {
        if self.is_trivial() {
            format!("e{}", self.source + 1)
        } else {
            self.arrows
                .iter()
                .map(|&i| q.arrows()[i].name.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Path) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then(self.source.cmp(&other.source))
            .then(self.target.cmp(&other.target))
            .then_with(|| self.arrows.cmp(&other.arrows))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Path) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of the path algebra in canonical form (no zero coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<F: Field> {
    terms: BTreeMap<Path, F::Elem>,
}

impl<F: Field> AlgebraElement<F> {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn path(f: &F, p: Path) -> Self {
        Self::term(f, f.one(), p)
    }

    pub fn term(f: &F, c: F::Elem, p: Path) -> Self {
        let mut e = Self::zero();
        e.add_term(f, p, c);
        e
    }

    /// `c · (e_1 + … + e_n)`.
    pub fn scalar(q: &Quiver, f: &F, c: F::Elem) -> Self {
        let mut e = Self::zero();
        for v in 0..q.vertex_count() {
            e.add_term(f, Path::trivial(v), c.clone());
        }
        e
    }

    pub fn one(q: &Quiver, f: &F) -> Self {
        Self::scalar(q, f, f.one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &F::Elem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, f: &F, p: Path, c: F::Elem) {
        let entry = self.terms.entry(p.clone()).or_insert_with(|| f.zero());
        *entry = f.add(entry, &c);
        if f.is_zero(entry) {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, f: &F, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(f, p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, f: &F, other: &Self) -> Self {
        self.add(f, &other.scale(f, &f.neg(&f.one())))
    }

    pub fn scale(&self, f: &F, s: &F::Elem) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            out.add_term(f, p.clone(), f.mul(c, s));
        }
        out
    }

    /// Product in the path algebra; non-composable path pairs multiply to zero.
    pub fn mul(&self, f: &F, other: &Self) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            for (r, d) in &other.terms {
                if let Some(pr) = p.compose(r) {
                    out.add_term(f, pr, f.mul(c, d));
                }
            }
        }
        out
    }

    /// `e_left · self · e_right`.
    pub fn corner(&self, left: usize, right: usize) -> Self {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.target == left && p.source == right)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// The same element read in the opposite algebra.
    pub fn op(&self) -> Self {
        AlgebraElement {
            terms: self.terms.iter().map(|(p, c)| (p.op(), c.clone())).collect(),
        }
    }

    pub fn random<R: rand::Rng + ?Sized>(q: &Quiver, f: &F, rng: &mut R, density: f64) -> Self {
        let mut out = Self::zero();
        for p in q.paths() {
            if rng.gen_bool(density) {
                out.add_term(f, p.clone(), f.random(rng));
            }
        }
        out
    }

    pub fn format(&self, q: &Quiver, f: &F) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let mut coef = f.format_elem(c);
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            if coef != "1" {
                s.push_str(&coef);
                s.push('*');
            }
            s.push_str(&p.format(q));
        }
        s
    }

    /// Parses `term (('+'|'-') term)*` with `term = [scalar '*'] path`; paths are
    /// arrow or idempotent names joined by `*`. A bare scalar means that
    /// multiple of the unit.
    pub fn parse(text: &str, q: &Quiver, f: &F) -> std::result::Result<Self, ParseError> {
        let t = text.trim();
        if t.is_empty() {
            return Err(ParseError::bare("empty algebra element"));
        }
        let mut out = Self::zero();
        let mut sign_negative = false;
        let mut sign_pending = false;
        let mut current = String::new();
        let mut terms: Vec<(bool, String)> = Vec::new();
        for ch in t.chars() {
            if ch == '+' || ch == '-' {
                if current.trim().is_empty() {
                    if sign_pending || !terms.is_empty() {
                        return Err(ParseError::bare(format!("malformed element `{t}`")));
                    }
                } else {
                    terms.push((sign_negative, std::mem::take(&mut current)));
                }
                current.clear();
                sign_negative = ch == '-';
                sign_pending = true;
            } else {
                current.push(ch);
            }
        }
        if current.trim().is_empty() {
            return Err(ParseError::bare(format!("malformed element `{t}`")));
        }
        terms.push((sign_negative, current));

        for (neg, term) in terms {
            let mut coef = f.one();
            let mut path: Option<Path> = None;
            for factor in term.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(ParseError::bare(format!("malformed term `{}`", term.trim())));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    let r = parse_rational(factor)?;
                    let c = f
                        .from_rational(&r)
                        .ok_or_else(|| ParseError::bare(format!("scalar `{factor}` is not defined in {}", f.spec())))?;
                    coef = f.mul(&coef, &c);
                    continue;
                }
                let next = if let Some(v) = factor.strip_prefix('e').and_then(|d| d.parse::<usize>().ok()) {
                    if v == 0 || v > q.vertex_count() {
                        return Err(ParseError::bare(format!("unknown vertex `{factor}`")));
                    }
                    Path::trivial(v - 1)
                } else {
                    let i = q
                        .arrow_index(factor)
                        .ok_or_else(|| ParseError::bare(format!("unknown arrow `{factor}`")))?;
                    let a = &q.arrows()[i];
                    Path {
                        source: a.source,
                        target: a.target,
                        arrows: vec![i],
                    }
                };
                path = Some(match path {
                    None => next,
                    Some(p) => p.compose(&next).ok_or_else(|| {
                        ParseError::bare(format!("non-composable path product in `{}`", term.trim()))
                    })?,
                });
            }
            if neg {
                coef = f.neg(&coef);
            }
            let piece = match path {
                Some(p) => Self::term(f, coef, p),
                None => Self::scalar(q, f, coef),
            };
            out = out.add(f, &piece);
        }
        Ok(out)
    }
}

/// An `n × m` matrix with path-algebra entries.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMatrix<F: Field> {
    quiver: Quiver,
    field: F,
    rows: usize,
    cols: usize,
    entries: Vec<AlgebraElement<F>>,
}

impl<F: Field> AlgebraMatrix<F> {
    pub fn new(quiver: &Quiver, field: &F, rows: usize, cols: usize, entries: Vec<AlgebraElement<F>>) -> Self {
        assert_eq!(entries.len(), rows * cols, "algebra matrix entry count");
        AlgebraMatrix {
            quiver: quiver.clone(),
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(quiver: &Quiver, field: &F, rows: usize, cols: usize) -> Self {
        Self::new(quiver, field, rows, cols, vec![AlgebraElement::zero(); rows * cols])
    }

    /// The 1×1 matrix `(x)`.
    pub fn single(quiver: &Quiver, field: &F, x: AlgebraElement<F>) -> Self {
        Self::new(quiver, field, 1, 1, vec![x])
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &AlgebraElement<F> {
        &self.entries[r * self.cols + c]
    }

    /// Transpose with every entry read in the opposite algebra: the matrix that
    /// expresses left multiplication by `self` on columns as right
    /// multiplication on rows over the opposite quiver.
    pub fn transpose_op(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).op());
            }
        }
        Self::new(&self.quiver.opposite(), &self.field, self.cols, self.rows, entries)
    }

    pub fn random<R: rand::Rng + ?Sized>(
        quiver: &Quiver,
        field: &F,
        rows: usize,
        cols: usize,
        rng: &mut R,
        density: f64,
    ) -> Self {
        let entries = (0..rows * cols)
            .map(|_| AlgebraElement::random(quiver, field, rng, density))
            .collect();
        Self::new(quiver, field, rows, cols, entries)
    }

    /// Rows of comma-separated element expressions.
    pub fn format_body(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.get(r, c).format(&self.quiver, &self.field))
                .collect();
            s.push_str(&row.join(", "));
            s.push('\n');
        }
        s
    }
}
