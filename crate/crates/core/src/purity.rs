//! Relative purity of explicit short exact sequences with respect to sets of
//! matrices over the path algebra, and comparison of purities.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::closure::ClassDescriptor;
use crate::construct::{construct_d, construct_l};
use crate::decomp::{decompose, is_isomorphic};
use crate::error::{Error, ParseError, Result};
use crate::field::Field;
use crate::kronecker::{classify, points, IndecompDescriptor, Point};
use crate::mat::Mat;
use crate::quiver::{AlgebraMatrix, Quiver};
use crate::rep::{free_module_over, hom_dim, matrix_action, tensor, Representation, ShortExact, Side};

/// `(m, n)`: matrices with `m` rows and `n` columns, i.e. modules with `n`
/// generators and `m` relations. `None` stands for ℵ₀.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShapeFamily {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
}

impl ShapeFamily {
    pub fn finite(rows: usize, cols: usize) -> Self {
        ShapeFamily {
            rows: Some(rows),
            cols: Some(cols),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.rows.is_some() && self.cols.is_some()
    }
}

impl fmt::Display for ShapeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: Option<usize>| x.map_or("aleph0".to_string(), |v| v.to_string());
        write!(f, "({},{})", show(self.rows), show(self.cols))
    }
}

impl FromStr for ShapeFamily {
    type Err = ParseError;
    /// `m,n` with either side optionally `aleph0` (or `aleph`, `ℵ0`); parentheses optional.
    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        let (a, b) = t
            .split_once(',')
            .ok_or_else(|| ParseError::bare(format!("shape `{text}` should look like `m,n`")))?;
        let one = |x: &str| -> std::result::Result<Option<usize>, ParseError> {
            if matches!(x, "aleph0" | "aleph" | "ℵ0" | "ℵ₀" | "inf") {
                return Ok(None);
            }
            match x.parse::<usize>() {
                Ok(v) if v > 0 => Ok(Some(v)),
                _ => Err(ParseError::bare(format!("bad shape component `{x}`"))),
            }
        };
        Ok(ShapeFamily {
            rows: one(a)?,
            cols: one(b)?,
        })
    }
}

/// A finite set of matrices sharing quiver and field.
#[derive(Clone, Debug)]
pub struct MatrixSet<F: Field> {
    pub quiver: Quiver,
    pub field: F,
    pub matrices: Vec<AlgebraMatrix<F>>,
    pub shape: Option<ShapeFamily>,
}

impl<F: Field> MatrixSet<F> {
    pub fn new(quiver: &Quiver, field: &F, matrices: Vec<AlgebraMatrix<F>>) -> Result<Self> {
        for h in &matrices {
            if h.quiver() != quiver {
                return Err(Error::QuiverMismatch(h.quiver().describe(), quiver.describe()));
            }
            if h.field() != field {
                return Err(Error::FieldMismatch(h.field().spec(), field.spec()));
            }
        }
        Ok(MatrixSet {
            quiver: quiver.clone(),
            field: field.clone(),
            matrices,
            shape: None,
        })
    }

    /// `L_H` for every `H`, with `{R}` for the empty set.
    pub fn l_modules(&self) -> Vec<Representation<F>> {
        if self.matrices.is_empty() {
            return vec![free_module_over(&self.field, &self.quiver, Side::Left, 1)];
        }
        self.matrices.iter().map(construct_l).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Hom,
    Eq2,
    Tensor,
    Eq4,
    Dual,
    DualInj,
}

impl Method {
    pub const ALL: [Method; 6] = [Method::Hom, Method::Eq2, Method::Tensor, Method::Eq4, Method::Dual, Method::DualInj];
    pub const DEFAULT: [Method; 2] = [Method::Hom, Method::Tensor];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Hom => "hom",
            Method::Eq2 => "eq2",
            Method::Tensor => "tensor",
            Method::Eq4 => "eq4",
            Method::Dual => "dual",
            Method::DualInj => "dualinj",
        }
    }

    /// `all`, `default`, or a comma-separated list of method names.
    pub fn parse_list(text: &str) -> std::result::Result<Vec<Method>, ParseError> {
        match text.trim() {
            "all" => return Ok(Method::ALL.to_vec()),
            "default" => return Ok(Method::DEFAULT.to_vec()),
            _ => {}
        }
        let mut out = Vec::new();
        for part in text.split(',') {
            let m = Method::ALL
                .into_iter()
                .find(|m| m.name() == part.trim())
                .ok_or_else(|| ParseError::bare(format!("unknown method `{}`", part.trim())))?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityReport {
    /// Verdict per method over the whole set (`true` = pure).
    pub verdicts: Vec<(Method, bool)>,
    /// Per-matrix verdicts, in input order.
    pub per_matrix: Vec<Vec<(Method, bool)>>,
    /// `None` when the methods disagree on some matrix.
    pub overall: Option<bool>,
    /// First matrix on which some method reports impurity.
    pub witness: Option<usize>,
    /// First matrix on which the methods disagree.
    pub disagreement: Option<usize>,
}

/// The test module `X_H` (whose Hom functor defines purity) and the tensor
/// partner `T_H` for a sequence on the given side.
struct Probe<F: Field> {
    x: Representation<F>,
    t: Representation<F>,
}

fn probe<F: Field>(h: &AlgebraMatrix<F>, side: Side) -> Probe<F> {
    let (l, d) = (construct_l(h), construct_d(h));
    match side {
        Side::Left => Probe { x: l, t: d },
        Side::Right => Probe { x: d, t: l },
    }
}

fn tensor_dim<F: Field>(t: &Representation<F>, m: &Representation<F>) -> Result<usize> {
    Ok(match t.side() {
        Side::Right => tensor(t, m)?.dim(),
        Side::Left => tensor(m, t)?.dim(),
    })
}

fn hom_exact<F: Field>(x: &Representation<F>, s: &ShortExact<F>) -> Result<bool> {
    Ok(hom_dim(x, s.b())? == hom_dim(x, s.a())? + hom_dim(x, s.c())?)
}

/// `f^{⊕k}` on total spaces.
fn repeat_map<F: Field>(f: &Mat<F>, k: usize) -> Mat<F> {
    Mat::block_diag(f.field(), &vec![f; k])
}

fn check_one<F: Field>(s: &ShortExact<F>, h: &AlgebraMatrix<F>, p: &Probe<F>, method: Method) -> Result<bool> {
    match method {
        Method::Hom => hom_exact(&p.x, s),
        Method::Eq2 => {
            // Solvable in B implies solvable in A.
            let act_a = matrix_action(h, s.a())?;
            let act_b = matrix_action(h, s.b())?;
            let k = if s.b().total_dim() == 0 {
                0
            } else {
                act_b.rows() / s.b().total_dim()
            };
            let fk = repeat_map(&s.f().total_matrix(), k);
            let pre = fk.preimage(&act_b.image_basis());
            Ok(act_a.column_space_contains(&pre))
        }
        Method::Eq4 => {
            // Every solution in C lifts to a solution in B.
            let act_b = matrix_action(h, s.b())?;
            let act_c = matrix_action(h, s.c())?;
            let k = if s.b().total_dim() == 0 {
                0
            } else {
                act_b.cols() / s.b().total_dim()
            };
            let gk = repeat_map(&s.g().total_matrix(), k);
            let lifted = gk.mul(&act_b.kernel_basis());
            Ok(lifted.column_space_contains(&act_c.kernel_basis()))
        }
        Method::Tensor => {
            let (a, b, c) = (tensor_dim(&p.t, s.a())?, tensor_dim(&p.t, s.b())?, tensor_dim(&p.t, s.c())?);
            Ok(a + c == b)
        }
        Method::Dual => {
            let d = s.dual();
            let other = probe(h, d.a().side());
            hom_exact(&other.x, &d)
        }
        Method::DualInj => {
            let e = p.t.dual();
            Ok(hom_dim(s.b(), &e)? == hom_dim(s.a(), &e)? + hom_dim(s.c(), &e)?)
        }
    }
}

/// Decides purity of `s` with respect to every matrix of `hs` by each method.
pub fn is_pure<F: Field>(s: &ShortExact<F>, hs: &MatrixSet<F>, methods: &[Method]) -> Result<PurityReport> {
    if let Some(shape) = hs.shape {
        if !shape.is_finite() {
            return Err(Error::Unsupported(format!(
                "shape family {shape} is infinite; compare it symbolically instead"
            )));
        }
    }
    if s.a().field() != &hs.field {
        return Err(Error::FieldMismatch(s.a().field().spec(), hs.field.spec()));
    }
    if s.a().base_quiver() != hs.quiver {
        return Err(Error::QuiverMismatch(s.a().base_quiver().describe(), hs.quiver.describe()));
    }
    let mut per_matrix = Vec::with_capacity(hs.matrices.len());
    let mut witness = None;
    let mut disagreement = None;
    for (i, h) in hs.matrices.iter().enumerate() {
        let p = probe(h, s.a().side());
        let mut row = Vec::with_capacity(methods.len());
        for &m in methods {
            row.push((m, check_one(s, h, &p, m)?));
        }
        if witness.is_none() && row.iter().any(|(_, v)| !v) {
            witness = Some(i);
        }
        if disagreement.is_none() && row.iter().any(|(_, v)| *v != row[0].1) {
            disagreement = Some(i);
        }
        per_matrix.push(row);
    }
    let verdicts: Vec<(Method, bool)> = methods
        .iter()
        .enumerate()
        .map(|(k, &m)| (m, per_matrix.iter().all(|row| row[k].1)))
        .collect();
    let overall = if disagreement.is_some() {
        None
    } else {
        Some(witness.is_none())
    };
    Ok(PurityReport {
        verdicts,
        per_matrix,
        overall,
        witness,
        disagreement,
    })
}

/// Purity with respect to an explicit list of test modules: `Hom(X, −)` keeps
/// the sequence exact for every `X`.
pub fn is_pure_for_modules<F: Field>(s: &ShortExact<F>, modules: &[Representation<F>]) -> Result<bool> {
    for x in modules {
        if !hom_exact(x, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Where a class of finitely presented modules comes from.
#[derive(Clone, Debug)]
pub enum Source<F: Field> {
    Matrices(MatrixSet<F>),
    Modules(Vec<Representation<F>>),
}

impl<F: Field> Source<F> {
    pub fn modules(&self) -> Vec<Representation<F>> {
        match self {
            Source::Matrices(m) => m.l_modules(),
            Source::Modules(v) => v.clone(),
        }
    }
}

/// Pairwise non-isomorphic indecomposable summands of the source modules.
pub fn ind_modules<F: Field>(src: &Source<F>, seed: u64) -> Result<Vec<Representation<F>>> {
    let mut out: Vec<Representation<F>> = Vec::new();
    for m in src.modules() {
        for piece in decompose(&m, seed).pieces {
            let mut known = false;
            for k in &out {
                if is_isomorphic(k, &piece.module)? {
                    known = true;
                    break;
                }
            }
            if !known {
                out.push(piece.module);
            }
        }
    }
    Ok(out)
}

/// Kronecker descriptors of `ind(S)`.
pub fn ind_set<F: Field>(src: &Source<F>, seed: u64) -> Result<BTreeSet<IndecompDescriptor>> {
    let mut out = BTreeSet::new();
    for m in src.modules() {
        for piece in decompose(&m, seed).pieces {
            out.insert(classify(&piece.module)?);
        }
    }
    Ok(out)
}

fn is_projective<F: Field>(m: &Representation<F>) -> bool {
    m.top_and_cover().syzygy.is_zero()
}

/// Whether `T`-purity implies `S`-purity: every indecomposable summand of a
/// module in `S` is a summand of a module in `T` or projective. On failure the
/// witness is an offending summand.
pub fn implies<F: Field>(t: &Source<F>, s: &Source<F>, seed: u64) -> Result<Option<Representation<F>>> {
    let ind_t = ind_modules(t, seed)?;
    for x in ind_modules(s, seed)? {
        if is_projective(&x) {
            continue;
        }
        let mut found = false;
        for y in &ind_t {
            if is_isomorphic(y, &x)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// [`implies`] over the Kronecker algebra with descriptor witnesses.
pub fn implies_kronecker<F: Field>(t: &Source<F>, s: &Source<F>, seed: u64) -> Result<Option<IndecompDescriptor>> {
    let ind_t = ind_set(t, seed)?;
    Ok(ind_set(s, seed)?
        .into_iter()
        .find(|d| !d.is_projective() && !ind_t.contains(d)))
}

/// Symbolic `ind(L_H : H of the given shape)` over the Kronecker algebra.
pub fn ind_of_shape(shape: ShapeFamily) -> Result<ClassDescriptor> {
    let Some(n) = shape.cols else {
        return Err(Error::Unsupported(format!(
            "no closed description of ind for the shape family {shape}"
        )));
    };
    let bounded = match shape.rows {
        None => true,
        Some(m) => m >= 2 * n + 1,
    };
    let mut c = ClassDescriptor::empty();
    if bounded {
        c.finite.extend((0..=n).map(IndecompDescriptor::Preprojective));
        c.finite.extend((0..n).map(IndecompDescriptor::Preinjective));
        c.regular_up_to = Some(n);
    } else if shape.rows == Some(1) && n == 1 {
        c.finite.extend([IndecompDescriptor::Preprojective(0), IndecompDescriptor::Preprojective(1)]);
        c.regular_up_to = Some(1);
    } else {
        return Err(Error::Unsupported(format!(
            "no closed description of ind for the shape family {shape}"
        )));
    }
    c.canonicalize();
    Ok(c)
}

/// Members of a class over the given points: the finite part, initial stretches
/// of length `stretch` of each cofinite family, and every regular member allowed
/// by a `R[*,<=n]` bound.
pub fn members_over(c: &ClassDescriptor, pts: &[Point], stretch: usize) -> Vec<IndecompDescriptor> {
    let mut out: Vec<IndecompDescriptor> = c.finite.iter().cloned().collect();
    if let Some(a) = c.preinj_from {
        out.extend((a..a + stretch).map(IndecompDescriptor::Preinjective));
    }
    if let Some(a) = c.preproj_from {
        out.extend((a..a + stretch).map(IndecompDescriptor::Preprojective));
    }
    for (p, a) in &c.tube_tails {
        out.extend((*a..a + stretch).map(|n| IndecompDescriptor::Regular(p.clone(), n)));
    }
    if let Some(n) = c.regular_up_to {
        for p in pts {
            for i in 1..=n / p.degree() {
                out.push(IndecompDescriptor::Regular(p.clone(), i));
            }
        }
    }
    if c.all_prufer {
        out.extend(pts.iter().map(|p| IndecompDescriptor::Prufer(p.clone())));
    }
    out
}

/// Symbolic version of [`implies`]: `None` when `S ⊆ T ∪ {P0, P1}`, otherwise a
/// member of `S` outside it. Family members are searched over the points of
/// `field` (finite fields) or small integers and infinity.
pub fn implies_classes<F: Field>(t: &ClassDescriptor, s: &ClassDescriptor, field: &F) -> Option<IndecompDescriptor> {
    let mut allowed = t.clone();
    allowed.finite.insert(IndecompDescriptor::Preprojective(0));
    allowed.finite.insert(IndecompDescriptor::Preprojective(1));
    allowed.canonicalize();
    let depth = s.regular_up_to.unwrap_or(1).max(1);
    let pts: Vec<Point> = if field.order().is_some() {
        points(field, depth)
    } else {
        let mut v: Vec<Point> = (0..=(t.finite.len() as i64 + 2)).map(Point::finite).collect();
        v.push(Point::Infinity);
        v
    };
    let stretch = allowed.finite.len() + 2;
    members_over(s, &pts, stretch)
        .into_iter()
        .find(|d| !allowed.contains(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::kronecker::make;
    use crate::quiver::AlgebraElement;
    use crate::rep::projective_sum;

    fn kq() -> Quiver {
        Quiver::kronecker()
    }

    fn set<F: Field>(f: &F, items: &[&str]) -> MatrixSet<F> {
        let q = kq();
        let ms = items
            .iter()
            .map(|t| AlgebraMatrix::single(&q, f, AlgebraElement::parse(t, &q, f).unwrap()))
            .collect();
        MatrixSet::new(&q, f, ms).unwrap()
    }

    fn radical_sequence(f: &Fp) -> ShortExact<Fp> {
        let i0 = Representation::simple(f, &kq(), Side::Left, 1);
        let c = i0.top_and_cover();
        ShortExact::validate(c.inclusion, c.cover).unwrap()
    }

    #[test]
    fn split_sequences_are_pure() {
        let f = Fp::new(3);
        let s = ShortExact::split(&make(&"R[1,1]".parse().unwrap(), &f).unwrap(), &make(&"I1".parse().unwrap(), &f).unwrap()).unwrap();
        let r = is_pure(&s, &set(&f, &["a + b", "b", "0"]), &Method::ALL).unwrap();
        assert_eq!(r.overall, Some(true));
        assert!(r.verdicts.iter().all(|(_, v)| *v));
    }

    #[test]
    fn radical_sequence_not_pure_for_i0() {
        let f = Fp::new(2);
        let s = radical_sequence(&f);
        // H = (a; b) presents I_0 plus projectives.
        let q = kq();
        let h = AlgebraMatrix::new(
            &q,
            &f,
            2,
            1,
            vec![AlgebraElement::parse("a", &q, &f).unwrap(), AlgebraElement::parse("b", &q, &f).unwrap()],
        );
        let lh = construct_l(&h);
        let pieces: Vec<IndecompDescriptor> =
            decompose(&lh, 1).pieces.iter().map(|p| classify(&p.module).unwrap()).collect();
        assert!(pieces.contains(&IndecompDescriptor::Preinjective(0)));
        let hs = MatrixSet::new(&q, &f, vec![h]).unwrap();
        let r = is_pure(&s, &hs, &Method::ALL).unwrap();
        assert_eq!(r.overall, Some(false));
        assert_eq!(r.witness, Some(0));
        let i0 = Representation::simple(&f, &q, Side::Left, 1);
        assert_eq!(hom_dim(&i0, s.b()).unwrap(), 0);
        assert_eq!(hom_dim(&i0, s.c()).unwrap(), 1);
        let zero = is_pure(&s, &set(&f, &["0"]), &Method::ALL).unwrap();
        assert_eq!(zero.overall, Some(true));
    }

    #[test]
    fn ind_set_examples() {
        let f = Fp::new(5);
        let p: BTreeSet<IndecompDescriptor> = ["P0", "P1"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(ind_set(&Source::Matrices(set(&f, &["0"])), 1).unwrap(), p);
        assert_eq!(ind_set(&Source::Matrices(set(&f, &[])), 1).unwrap(), p);
        let got = ind_set(&Source::Matrices(set(&f, &["a + 2*b"])), 1).unwrap();
        let want: BTreeSet<IndecompDescriptor> = ["R[2,1]", "P0"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn implies_examples() {
        let f = Fp::new(5);
        let p0 = projective_sum(&f, &kq(), Side::Left, &[0]);
        let anything = Source::Matrices(set(&f, &["a"]));
        assert!(implies_kronecker(&anything, &Source::Modules(vec![p0]), 1).unwrap().is_none());
        let mut pencils: Vec<String> = (0..5).map(|l| format!("a + {l}*b")).collect();
        pencils.push("b".into());
        let t = Source::Matrices(set(&f, &pencils.iter().map(|s| s.as_str()).collect::<Vec<_>>()));
        let r21 = make(&"R[2,1]".parse().unwrap(), &f).unwrap();
        assert!(implies_kronecker(&t, &Source::Modules(vec![r21]), 1).unwrap().is_none());
        let i0 = Representation::simple(&f, &kq(), Side::Left, 1);
        assert_eq!(
            implies_kronecker(&t, &Source::Modules(vec![i0.clone()]), 1).unwrap(),
            Some(IndecompDescriptor::Preinjective(0))
        );
        assert!(implies(&t, &Source::Modules(vec![i0]), 1).unwrap().is_some());
    }

    #[test]
    fn shapes() {
        let a1: ClassDescriptor = "P0 P1 I0 R[*,<=1]".parse().unwrap();
        assert_eq!(ind_of_shape("aleph0,1".parse().unwrap()).unwrap(), a1);
        assert_eq!(ind_of_shape(ShapeFamily::finite(3, 1)).unwrap(), a1);
        let a2: ClassDescriptor = "P0 P1 P2 I0 I1 R[*,<=2]".parse().unwrap();
        assert_eq!(ind_of_shape("(aleph0,2)".parse().unwrap()).unwrap(), a2);
        assert!(ind_of_shape("2,aleph0".parse().unwrap()).is_err());
        let s4 = ind_of_shape(ShapeFamily::finite(1, 1)).unwrap();
        let f = Fp::new(5);
        assert_eq!(implies_classes(&s4, &a1, &f), Some(IndecompDescriptor::Preinjective(0)));
        assert_eq!(implies_classes(&a1, &s4, &f), None);
    }

    #[test]
    fn method_lists() {
        assert_eq!(Method::parse_list("all").unwrap().len(), 6);
        assert_eq!(Method::parse_list("hom,eq4").unwrap(), vec![Method::Hom, Method::Eq4]);
        assert!(Method::parse_list("hom,foo").is_err());
    }
}
