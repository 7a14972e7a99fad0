//! Indecomposable representations of the Kronecker quiver: names, normal forms,
//! and a classifier for explicit modules.
//!
//! A left module is a pencil `(A, B)` of `dim₁ × dim₂` matrices, `A` for arrow
//! `a` and `B` for arrow `b`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, ParseError, Result};
use crate::field::{parse_rational, Field};
use crate::mat::Mat;
use crate::poly::{charpoly, Poly};
use crate::quiver::Quiver;
use crate::rep::{hom_dim, Representation, Side};

/// A point of the projective line, or a closed point of higher degree given by
/// a monic irreducible polynomial (coefficients from the constant term up).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(BigRational),
    Infinity,
    Poly(Vec<BigRational>),
}

impl Point {
    pub fn finite(v: i64) -> Point {
        Point::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn degree(&self) -> usize {
        match self {
            Point::Poly(c) => c.len() - 1,
            _ => 1,
        }
    }

    /// Reduces coordinates into the field and validates polynomial points.
    pub fn canonicalize<F: Field>(&self, field: &F) -> Result<Point> {
        match self {
            Point::Infinity => Ok(Point::Infinity),
            Point::Finite(r) => {
                let e = field
                    .from_rational(r)
                    .ok_or_else(|| Error::Parse(ParseError::bare(format!("point {r} is not in {}", field.spec()))))?;
                Ok(Point::Finite(field.to_rational(&e)))
            }
            Point::Poly(c) => {
                let mut coeffs = Vec::with_capacity(c.len());
                for r in c {
                    coeffs.push(
                        field
                            .from_rational(r)
                            .ok_or_else(|| Error::Parse(ParseError::bare(format!("coefficient {r} is not in {}", field.spec()))))?,
                    );
                }
                let p = Poly::new(field, coeffs);
                match p.degree() {
                    None | Some(0) => Err(Error::Parse(ParseError::bare("a point polynomial must have positive degree"))),
                    Some(1) => {
                        let m = p.monic();
                        Ok(Point::Finite(field.to_rational(&field.neg(&m.coeff(0)))))
                    }
                    Some(_) => {
                        if field.order().is_none() {
                            return Err(Error::Unsupported(
                                "points of degree ≥ 2 are only supported over prime fields".into(),
                            ));
                        }
                        if !field.is_one(p.lead().unwrap()) {
                            return Err(Error::Parse(ParseError::bare(format!("point polynomial {self} is not monic"))));
                        }
                        if !p.is_irreducible_finite() {
                            return Err(Error::Parse(ParseError::bare(format!("point polynomial {self} is reducible"))));
                        }
                        Ok(Point::Poly(p.coeffs().iter().map(|e| field.to_rational(e)).collect()))
                    }
                }
            }
        }
    }

    /// The monic polynomial of a finite or polynomial point.
    pub fn polynomial<F: Field>(&self, field: &F) -> Option<Poly<F>> {
        match self {
            Point::Infinity => None,
            Point::Finite(r) => Some(Poly::linear(field, &field.from_rational(r)?)),
            Point::Poly(c) => Some(Poly::new(field, c.iter().map(|r| field.from_rational(r)).collect::<Option<Vec<_>>>()?)),
        }
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.is_negative() {
        format!("-{}", r.abs())
    } else {
        r.to_string()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(r) => f.write_str(&format_rational(r)),
            Point::Infinity => f.write_str("inf"),
            Point::Poly(c) => {
                let mut s = String::new();
                for (k, r) in c.iter().enumerate().rev() {
                    if r.is_zero() {
                        continue;
                    }
                    let neg = r.is_negative();
                    let a = r.abs();
                    if s.is_empty() {
                        if neg {
                            s.push('-');
                        }
                    } else {
                        s.push(if neg { '-' } else { '+' });
                    }
                    let mono = match k {
                        0 => String::new(),
                        1 => "x".to_string(),
                        _ => format!("x^{k}"),
                    };
                    if mono.is_empty() {
                        s.push_str(&a.to_string());
                    } else {
                        if !a.is_one() {
                            s.push_str(&a.to_string());
                            s.push('*');
                        }
                        s.push_str(&mono);
                    }
                }
                f.write_str(&s)
            }
        }
    }
}

impl FromStr for Point {
    type Err = ParseError;
    fn from_str(text: &str) -> std::result::Result<Point, ParseError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "inf" || t == "∞" || t == "infinity" {
            return Ok(Point::Infinity);
        }
        if !t.contains('x') {
            return Ok(Point::Finite(parse_rational(&t)?));
        }
        parse_poly(&t).map(Point::Poly)
    }
}

fn parse_poly(t: &str) -> std::result::Result<Vec<BigRational>, ParseError> {
    let bad = || ParseError::bare(format!("malformed polynomial `{t}`"));
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in t.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            if cur.is_empty() {
                return Err(bad());
            }
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' && i == 0 {
            neg = true;
        } else if ch != '+' || i > 0 {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(bad());
    }
    terms.push((neg, cur));
    let mut coeffs: Vec<BigRational> = Vec::new();
    for (neg, term) in terms {
        let (coef, deg) = match term.find('x') {
            None => (parse_rational(&term)?, 0usize),
            Some(pos) => {
                let head = term[..pos].trim_end_matches('*');
                let coef = if head.is_empty() { BigRational::one() } else { parse_rational(head)? };
                let tail = &term[pos + 1..];
                let deg = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (coef, deg)
            }
        };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, BigRational::zero());
        }
        coeffs[deg] += if neg { -coef } else { coef };
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// Names of indecomposable Kronecker modules, finite-dimensional or not.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndecompDescriptor {
    Preprojective(usize),
    Preinjective(usize),
    Regular(Point, usize),
    Prufer(Point),
    Adic(Point),
    Generic,
}

impl IndecompDescriptor {
    pub fn is_finite_dimensional(&self) -> bool {
        matches!(
            self,
            IndecompDescriptor::Preprojective(_) | IndecompDescriptor::Preinjective(_) | IndecompDescriptor::Regular(..)
        )
    }

    pub fn is_projective(&self) -> bool {
        matches!(self, IndecompDescriptor::Preprojective(n) if *n <= 1)
    }

    pub fn is_injective(&self) -> bool {
        matches!(self, IndecompDescriptor::Preinjective(n) if *n <= 1)
    }

    /// Dimension vector `(dim₁, dim₂)` of a finite-dimensional descriptor.
    pub fn dims(&self) -> Option<(usize, usize)> {
        match self {
            IndecompDescriptor::Preprojective(n) => Some((n + 1, *n)),
            IndecompDescriptor::Preinjective(n) => Some((*n, n + 1)),
            IndecompDescriptor::Regular(p, n) => Some((n * p.degree(), n * p.degree())),
            _ => None,
        }
    }

    pub fn canonicalize<F: Field>(&self, field: &F) -> Result<IndecompDescriptor> {
        Ok(match self {
            IndecompDescriptor::Regular(p, n) => {
                if *n == 0 {
                    return Err(Error::Parse(ParseError::bare("regular modules have length at least 1")));
                }
                IndecompDescriptor::Regular(p.canonicalize(field)?, *n)
            }
            IndecompDescriptor::Prufer(p) => IndecompDescriptor::Prufer(p.canonicalize(field)?),
            IndecompDescriptor::Adic(p) => IndecompDescriptor::Adic(p.canonicalize(field)?),
            other => other.clone(),
        })
    }
}

impl fmt::Display for IndecompDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndecompDescriptor::Preprojective(n) => write!(f, "P{n}"),
            IndecompDescriptor::Preinjective(n) => write!(f, "I{n}"),
            IndecompDescriptor::Regular(p, n) => write!(f, "R[{p},{n}]"),
            IndecompDescriptor::Prufer(p) => write!(f, "prufer[{p}]"),
            IndecompDescriptor::Adic(p) => write!(f, "adic[{p}]"),
            IndecompDescriptor::Generic => write!(f, "generic"),
        }
    }
}

impl FromStr for IndecompDescriptor {
    type Err = ParseError;
    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        let t = text.trim();
        let bad = || ParseError::bare(format!("unknown descriptor `{t}`"));
        if t == "generic" {
            return Ok(IndecompDescriptor::Generic);
        }
        let bracket = |prefix: &str| -> Option<&str> { t.strip_prefix(prefix)?.strip_prefix('[')?.strip_suffix(']') };
        if let Some(inner) = bracket("prufer") {
            return Ok(IndecompDescriptor::Prufer(inner.parse()?));
        }
        if let Some(inner) = bracket("adic") {
            return Ok(IndecompDescriptor::Adic(inner.parse()?));
        }
        if let Some(inner) = bracket("R") {
            let (p, n) = inner.rsplit_once(',').ok_or_else(bad)?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(ParseError::bare(format!("`{t}`: regular modules have length at least 1")));
            }
            return Ok(IndecompDescriptor::Regular(p.parse()?, n));
        }
        if let Some(n) = t.strip_prefix('P') {
            return Ok(IndecompDescriptor::Preprojective(n.parse().map_err(|_| bad())?));
        }
        if let Some(n) = t.strip_prefix('I') {
            return Ok(IndecompDescriptor::Preinjective(n.parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

fn require_kronecker<F: Field>(m: &Representation<F>) -> Result<()> {
    if !m.base_quiver().is_kronecker() {
        return Err(Error::Unsupported(format!(
            "Kronecker-only operation on quiver `{}`",
            m.base_quiver().describe()
        )));
    }
    Ok(())
}

fn jordan<F: Field>(f: &F, n: usize, lambda: &F::Elem) -> Mat<F> {
    Mat::from_fn(f, n, n, |r, c| {
        if r == c {
            lambda.clone()
        } else if c == r + 1 {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// The standard left module for a finite-dimensional descriptor.
pub fn make<F: Field>(d: &IndecompDescriptor, field: &F) -> Result<Representation<F>> {
    let q = Quiver::kronecker();
    let (a, b, dims) = match d.canonicalize(field)? {
        IndecompDescriptor::Preprojective(n) => {
            let a = Mat::from_fn(field, n + 1, n, |r, c| if r == c { field.one() } else { field.zero() });
            let b = Mat::from_fn(field, n + 1, n, |r, c| if r == c + 1 { field.one() } else { field.zero() });
            (a, b, vec![n + 1, n])
        }
        IndecompDescriptor::Preinjective(n) => {
            let a = Mat::from_fn(field, n, n + 1, |r, c| if r == c { field.one() } else { field.zero() });
            let b = Mat::from_fn(field, n, n + 1, |r, c| if c == r + 1 { field.one() } else { field.zero() });
            (a, b, vec![n, n + 1])
        }
        IndecompDescriptor::Regular(Point::Infinity, n) => {
            (jordan(field, n, &field.zero()), Mat::identity(field, n), vec![n, n])
        }
        IndecompDescriptor::Regular(Point::Finite(r), n) => {
            let l = field.from_rational(&r).expect("canonical point");
            (Mat::identity(field, n), jordan(field, n, &l), vec![n, n])
        }
        IndecompDescriptor::Regular(p @ Point::Poly(_), n) => {
            let poly = p.polynomial(field).expect("canonical point").pow(n);
            let dim = n * p.degree();
            (Mat::identity(field, dim), poly.companion(), vec![dim, dim])
        }
        other => {
            return Err(Error::Unsupported(format!(
                "{other} is infinite-dimensional and has no explicit representation"
            )))
        }
    };
    Representation::new(field, &q, Side::Left, dims, vec![a, b])
}

/// `dim₂ − dim₁`; additive on direct sums.
pub fn defect<F: Field>(m: &Representation<F>) -> Result<i64> {
    require_kronecker(m)?;
    Ok(m.dim(1) as i64 - m.dim(0) as i64)
}

/// Names an indecomposable left Kronecker module. Fails on decomposable input.
pub fn classify<F: Field>(m: &Representation<F>) -> Result<IndecompDescriptor> {
    require_kronecker(m)?;
    if m.side() != Side::Left {
        return Err(Error::SideMismatch("the classifier expects a left module".into()));
    }
    let field = m.field();
    let (d1, d2) = (m.dim(0), m.dim(1));
    let decomposable = |why: &str| Error::Decomposable(format!("dimension vector ({d1},{d2}): {why}"));
    if d1 + d2 == 0 {
        return Err(decomposable("zero module"));
    }
    if d1 == d2 + 1 || d2 == d1 + 1 {
        // Preprojectives and preinjectives are bricks.
        if hom_dim(m, m)? != 1 {
            return Err(decomposable("endomorphism ring is not k"));
        }
        return Ok(if d1 == d2 + 1 {
            IndecompDescriptor::Preprojective(d2)
        } else {
            IndecompDescriptor::Preinjective(d1)
        });
    }
    if d1 != d2 {
        return Err(decomposable("defect is not -1, 0 or 1"));
    }
    let n = d1;
    let (a, b) = (m.arrow_map(0), m.arrow_map(1));
    if let Some(ai) = a.inverse() {
        let c = ai.mul(b);
        let cp = charpoly(&c);
        let (f, e) = single_primary(&cp, field).ok_or_else(|| decomposable("pencil has several eigenvalues"))?;
        let deg = f.degree().unwrap();
        if f.eval_mat(&c).kernel_basis().cols() != deg {
            return Err(decomposable("pencil is derogatory"));
        }
        let point = if deg == 1 {
            Point::Finite(field.to_rational(&field.neg(&f.coeff(0))))
        } else {
            Point::Poly(f.coeffs().iter().map(|x| field.to_rational(x)).collect())
        };
        return Ok(IndecompDescriptor::Regular(point, e));
    }
    if let Some(bi) = b.inverse() {
        let c = bi.mul(a);
        if !c.pow(n).is_zero() || c.rank() + 1 != n {
            return Err(decomposable("pencil at infinity is not a single block"));
        }
        return Ok(IndecompDescriptor::Regular(Point::Infinity, n));
    }
    Err(decomposable("neither arrow is invertible"))
}

/// `(f, e)` with `cp = f^e` for a monic irreducible `f`.
fn single_primary<F: Field>(cp: &Poly<F>, field: &F) -> Option<(Poly<F>, usize)> {
    if field.order().is_some() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let fac = cp.factor_finite(&mut rng);
        return match fac.as_slice() {
            [(f, e)] => Some((f.clone(), *e)),
            _ => None,
        };
    }
    let sq = cp.squarefree_decomposition();
    match sq.as_slice() {
        [(f, e)] if f.degree() == Some(1) => Some((f.clone(), *e)),
        _ => None,
    }
}

/// Every point of degree at most `max_degree` over a prime field: field
/// elements, infinity, then monic irreducibles by degree.
pub fn points<F: Field>(field: &F, max_degree: usize) -> Vec<Point> {
    let elems = field.elements().expect("points are enumerated over finite fields only");
    let mut out: Vec<Point> = elems.iter().map(|e| Point::Finite(field.to_rational(e))).collect();
    out.push(Point::Infinity);
    let q = elems.len();
    for d in 2..=max_degree {
        let count = q.pow(d as u32);
        for idx in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                coeffs.push(elems[k % q].clone());
                k /= q;
            }
            coeffs.push(field.one());
            let p = Poly::new(field, coeffs);
            if p.is_irreducible_finite() {
                out.push(Point::Poly(p.coeffs().iter().map(|e| field.to_rational(e)).collect()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};

    fn d(s: &str) -> IndecompDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn descriptor_syntax_round_trips() {
        for s in ["P3", "I0", "R[2,1]", "R[inf,4]", "R[x^2+x+1,2]", "prufer[0]", "adic[inf]", "generic", "R[-1/2,1]", "R[x^2-2,1]"] {
            assert_eq!(d(s).to_string(), s);
        }
        assert!("Q3".parse::<IndecompDescriptor>().is_err());
        assert!("R[1,0]".parse::<IndecompDescriptor>().is_err());
    }

    #[test]
    fn canonical_points() {
        let f = Fp::new(5);
        assert_eq!(d("R[7,1]").canonicalize(&f).unwrap(), d("R[2,1]"));
        assert_eq!(d("R[-1,1]").canonicalize(&f).unwrap(), d("R[4,1]"));
        assert_eq!(d("R[x+3,1]").canonicalize(&f).unwrap(), d("R[2,1]"));
        assert!(d("R[x^2+1,1]").canonicalize(&f).is_err());
        assert!(d("R[x^2+2,1]").canonicalize(&f).is_ok());
    }

    #[test]
    fn make_examples() {
        let f = Fp::new(5);
        let p0 = make(&d("P0"), &f).unwrap();
        assert_eq!(p0.dims(), &[1, 0]);
        assert_eq!(make(&d("I2"), &f).unwrap().dims(), &[2, 3]);
        let r = make(&d("R[2,1]"), &f).unwrap();
        assert_eq!(r.arrow_map(0), &Mat::from_i64(&f, &[&[1]]));
        assert_eq!(r.arrow_map(1), &Mat::from_i64(&f, &[&[2]]));
        assert!(make(&d("generic"), &f).is_err());
    }

    #[test]
    fn classify_examples() {
        let f = Fp::new(5);
        let q = Quiver::kronecker();
        let p0 = Representation::new(&f, &q, Side::Left, vec![1, 0], vec![Mat::zeros(&f, 1, 0), Mat::zeros(&f, 1, 0)]).unwrap();
        assert_eq!(classify(&p0).unwrap(), d("P0"));
        let rinf = Representation::new(&f, &q, Side::Left, vec![1, 1], vec![Mat::from_i64(&f, &[&[0]]), Mat::from_i64(&f, &[&[1]])]).unwrap();
        assert_eq!(classify(&rinf).unwrap(), d("R[inf,1]"));
        assert_eq!(classify(&make(&d("I5"), &f).unwrap()).unwrap(), d("I5"));
        let sum = make(&d("R[1,1]"), &f).unwrap().oplus(&make(&d("R[2,1]"), &f).unwrap()).unwrap();
        assert!(matches!(classify(&sum), Err(Error::Decomposable(_))));
        let sq = make(&d("R[1,1]"), &f).unwrap().power(2);
        assert!(classify(&sq).is_err());
    }

    #[test]
    fn round_trip_all_small() {
        for p in [2u64, 5, 7] {
            let f = Fp::new(p);
            for n in 0..=6 {
                for s in [IndecompDescriptor::Preprojective(n), IndecompDescriptor::Preinjective(n)] {
                    assert_eq!(classify(&make(&s, &f).unwrap()).unwrap(), s);
                }
            }
            for pt in points(&f, 1) {
                for n in 1..=6 {
                    let s = IndecompDescriptor::Regular(pt.clone(), n);
                    assert_eq!(classify(&make(&s, &f).unwrap()).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn higher_degree_points() {
        let f = Fp::new(2);
        let pts = points(&f, 3);
        // 2 elements, infinity, x^2+x+1, and two cubics.
        assert_eq!(pts.len(), 6);
        for pt in &pts[3..] {
            for n in 1..=2 {
                let s = IndecompDescriptor::Regular(pt.clone(), n);
                assert_eq!(classify(&make(&s, &f).unwrap()).unwrap(), s);
            }
        }
    }

    #[test]
    fn defect_values() {
        let f = Fp::new(3);
        for n in 0..5 {
            assert_eq!(defect(&make(&IndecompDescriptor::Preprojective(n), &f).unwrap()).unwrap(), -1);
            assert_eq!(defect(&make(&IndecompDescriptor::Preinjective(n), &f).unwrap()).unwrap(), 1);
        }
        assert_eq!(defect(&make(&d("R[1,3]"), &f).unwrap()).unwrap(), 0);
    }

    #[test]
    fn rationals_regular() {
        let q = Rationals;
        let r = make(&d("R[-1/2,2]"), &q).unwrap();
        assert_eq!(classify(&r).unwrap(), d("R[-1/2,2]"));
        assert!(matches!(d("R[x^2+1,1]").canonicalize(&q), Err(Error::Unsupported(_))));
    }
}
