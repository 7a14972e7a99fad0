//! Symbolic classes of indecomposable Kronecker modules, their full-support
//! closure, definability, and bases of relative pure-injectives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::construct::ar_translate;
use crate::decomp::decompose;
use crate::error::{Error, ParseError, Result};
use crate::field::Field;
use crate::kronecker::{classify, IndecompDescriptor, Point};
use crate::rep::Representation;

/// A possibly infinite class of indecomposables: an explicit finite part plus
/// cofinite families.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClassDescriptor {
    pub finite: BTreeSet<IndecompDescriptor>,
    /// `{I_n : n ≥ n₀}`.
    pub preinj_from: Option<usize>,
    /// `{P_n : n ≥ n₀}`.
    pub preproj_from: Option<usize>,
    /// `{R[point, n] : n ≥ n₀}` per point.
    pub tube_tails: BTreeMap<Point, usize>,
    /// `{R[point, i] : i·deg(point) ≤ n}` over every point of the projective line.
    pub regular_up_to: Option<usize>,
    /// Every Prüfer module.
    pub all_prufer: bool,
}

impl ClassDescriptor {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_finite(items: impl IntoIterator<Item = IndecompDescriptor>) -> Self {
        let mut c = Self::empty();
        c.finite.extend(items);
        c.canonicalize();
        c
    }

    pub fn contains(&self, d: &IndecompDescriptor) -> bool {
        if self.finite.contains(d) {
            return true;
        }
        match d {
            IndecompDescriptor::Preinjective(n) => self.preinj_from.is_some_and(|m| *n >= m),
            IndecompDescriptor::Preprojective(n) => self.preproj_from.is_some_and(|m| *n >= m),
            IndecompDescriptor::Regular(p, n) => {
                self.tube_tails.get(p).is_some_and(|m| n >= m)
                    || self.regular_up_to.is_some_and(|m| n * p.degree() <= m)
            }
            IndecompDescriptor::Prufer(_) => self.all_prufer,
            _ => false,
        }
    }

    /// Absorbs finite members into adjacent families and drops members that a
    /// family already covers.
    pub fn canonicalize(&mut self) {
        if let Some(mut m) = self.preinj_from {
            while m > 0 && self.finite.remove(&IndecompDescriptor::Preinjective(m - 1)) {
                m -= 1;
            }
            self.preinj_from = Some(m);
        }
        if let Some(mut m) = self.preproj_from {
            while m > 0 && self.finite.remove(&IndecompDescriptor::Preprojective(m - 1)) {
                m -= 1;
            }
            self.preproj_from = Some(m);
        }
        let points: Vec<Point> = self.tube_tails.keys().cloned().collect();
        for p in points {
            let mut m = self.tube_tails[&p];
            while m > 1 && self.finite.remove(&IndecompDescriptor::Regular(p.clone(), m - 1)) {
                m -= 1;
            }
            self.tube_tails.insert(p, m);
        }
        if self.regular_up_to == Some(0) {
            self.regular_up_to = None;
        }
        let snapshot = self.clone_families();
        self.finite.retain(|d| !snapshot.contains(d));
    }

    fn clone_families(&self) -> ClassDescriptor {
        ClassDescriptor {
            finite: BTreeSet::new(),
            ..self.clone()
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.finite.extend(other.finite.iter().cloned());
        out.preinj_from = min_opt(self.preinj_from, other.preinj_from);
        out.preproj_from = min_opt(self.preproj_from, other.preproj_from);
        for (p, n) in &other.tube_tails {
            let e = out.tube_tails.entry(p.clone()).or_insert(*n);
            *e = (*e).min(*n);
        }
        out.regular_up_to = match (self.regular_up_to, other.regular_up_to) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        out.all_prufer |= other.all_prufer;
        out.canonicalize();
        out
    }

    /// Inclusion of classes.
    pub fn is_subset(&self, other: &Self) -> bool {
        if let Some(a) = self.preinj_from {
            if other.preinj_from.is_none_or(|b| b > a) {
                return false;
            }
        }
        if let Some(a) = self.preproj_from {
            if other.preproj_from.is_none_or(|b| b > a) {
                return false;
            }
        }
        for (p, a) in &self.tube_tails {
            if other.tube_tails.get(p).is_none_or(|b| b > a) {
                return false;
            }
        }
        if let Some(a) = self.regular_up_to {
            if other.regular_up_to.is_none_or(|b| b < a) {
                return false;
            }
        }
        if self.all_prufer && !other.all_prufer {
            return false;
        }
        self.finite.iter().all(|d| other.contains(d))
    }

    pub fn has_infinite_preinjectives(&self) -> bool {
        self.preinj_from.is_some()
    }

    /// True when only finitely many preprojective and regular modules belong.
    pub fn finite_preprojective_and_regular(&self) -> bool {
        self.preproj_from.is_none() && self.tube_tails.is_empty() && self.regular_up_to.is_none()
    }

    pub fn is_finite(&self) -> bool {
        self.finite_preprojective_and_regular() && self.preinj_from.is_none() && !self.all_prufer
    }
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

impl fmt::Display for ClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (small, large): (Vec<&IndecompDescriptor>, Vec<&IndecompDescriptor>) =
            self.finite.iter().partition(|d| d.is_finite_dimensional());
        let mut parts: Vec<String> = small.iter().map(|d| d.to_string()).collect();
        if let Some(n) = self.preproj_from {
            parts.push(format!("P*>={n}"));
        }
        if let Some(n) = self.preinj_from {
            parts.push(format!("I*>={n}"));
        }
        for (p, n) in &self.tube_tails {
            parts.push(format!("tube[{p}]>={n}"));
        }
        if let Some(n) = self.regular_up_to {
            parts.push(format!("R[*,<={n}]"));
        }
        if self.all_prufer {
            parts.push("prufer[*]".into());
        }
        parts.extend(large.iter().map(|d| d.to_string()));
        if parts.is_empty() {
            f.write_str("empty")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

impl FromStr for ClassDescriptor {
    type Err = ParseError;
    /// Whitespace-separated descriptors and families (`I*>=0`, `P*>=2`,
    /// `tube[0]>=1`, `R[*,<=2]`, `prufer[*]`); `empty` denotes the empty class.
    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        let mut c = ClassDescriptor::empty();
        for tok in text.split_whitespace() {
            let bad = || ParseError::bare(format!("malformed family `{tok}`"));
            if tok == "empty" {
                continue;
            }
            if let Some(n) = tok.strip_prefix("I*>=") {
                c.preinj_from = min_opt(c.preinj_from, Some(n.parse().map_err(|_| bad())?));
            } else if let Some(n) = tok.strip_prefix("P*>=") {
                c.preproj_from = min_opt(c.preproj_from, Some(n.parse().map_err(|_| bad())?));
            } else if let Some(rest) = tok.strip_prefix("tube[") {
                let (p, n) = rest.split_once("]>=").ok_or_else(bad)?;
                let n: usize = n.parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                let p: Point = p.parse()?;
                let e = c.tube_tails.entry(p).or_insert(n);
                *e = (*e).min(n);
            } else if let Some(rest) = tok.strip_prefix("R[*,<=") {
                let n: usize = rest.strip_suffix(']').ok_or_else(bad)?.parse().map_err(|_| bad())?;
                c.regular_up_to = Some(c.regular_up_to.map_or(n, |m| m.max(n)));
            } else if tok == "prufer[*]" {
                c.all_prufer = true;
            } else {
                c.finite.insert(tok.parse()?);
            }
        }
        c.canonicalize();
        Ok(c)
    }
}

impl ClassDescriptor {
    /// Reduces every point into the field and re-canonicalizes.
    pub fn canonicalize_points<F: Field>(&self, field: &F) -> Result<Self> {
        let mut out = self.clone();
        out.finite = self
            .finite
            .iter()
            .map(|d| d.canonicalize(field))
            .collect::<Result<_>>()?;
        out.tube_tails = BTreeMap::new();
        for (p, n) in &self.tube_tails {
            let e = out.tube_tails.entry(p.canonicalize(field)?).or_insert(*n);
            *e = (*e).min(*n);
        }
        out.canonicalize();
        Ok(out)
    }
}

/// Full-support closure for the Kronecker algebra. Preprojective and regular
/// members stay; each infinite tube part contributes its adic module; infinitely
/// many preinjectives bring in every Prüfer module and the generic module; a
/// Prüfer member brings in the generic module.
pub fn fsc_closure(c: &ClassDescriptor) -> ClassDescriptor {
    let mut out = c.clone();
    for p in c.tube_tails.keys() {
        out.finite.insert(IndecompDescriptor::Adic(p.clone()));
    }
    if c.preinj_from.is_some() {
        out.all_prufer = true;
    }
    let has_prufer = out.all_prufer || out.finite.iter().any(|d| matches!(d, IndecompDescriptor::Prufer(_)));
    if has_prufer {
        out.finite.insert(IndecompDescriptor::Generic);
    }
    out.canonicalize();
    out
}

/// Definability test on the indecomposable dual class: finitely many
/// preprojective and regular members.
pub fn is_definable(c: &ClassDescriptor) -> bool {
    c.finite_preprojective_and_regular()
}

/// Whether the generic module is relatively pure-injective; only meaningful for
/// definable classes, where it holds exactly when infinitely many preinjectives
/// belong.
pub fn generic_status(c: &ClassDescriptor) -> Result<bool> {
    if !is_definable(c) {
        return Err(Error::NotDefinable(format!(
            "`{c}` has infinitely many preprojective or regular members"
        )));
    }
    Ok(c.has_infinite_preinjectives())
}

/// Indecomposable summands of `τM` for every `M` in `modules`, together with
/// both indecomposable injectives.
pub fn pinj_basis<F: Field>(modules: &[Representation<F>], seed: u64) -> Result<BTreeSet<IndecompDescriptor>> {
    let mut out: BTreeSet<IndecompDescriptor> =
        [IndecompDescriptor::Preinjective(0), IndecompDescriptor::Preinjective(1)].into_iter().collect();
    for m in modules {
        let t = ar_translate(m);
        for piece in decompose(&t, seed).pieces {
            out.insert(classify(&piece.module)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> ClassDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn syntax_round_trips() {
        for s in ["P3 I0 R[2,1]", "I*>=0", "P*>=2", "tube[0]>=1", "R[*,<=2]", "generic prufer[*]", "empty"] {
            let parsed = c(s);
            assert_eq!(c(&parsed.to_string()), parsed);
        }
        assert!("tube[0]>=0".parse::<ClassDescriptor>().is_err());
    }

    #[test]
    fn canonical_absorption() {
        let x = c("I1 I2 I*>=3 R[0,1] tube[0]>=2");
        assert_eq!(x.preinj_from, Some(1));
        assert_eq!(x.tube_tails[&Point::finite(0)], 1);
        assert!(x.finite.is_empty());
        assert!(x.contains(&"I7".parse().unwrap()));
        assert!(!x.contains(&"I0".parse().unwrap()));
    }

    #[test]
    fn closure_examples() {
        let finite = c("P3 I0 R[2,1]");
        assert_eq!(fsc_closure(&finite), finite);
        let tail = fsc_closure(&c("tube[0]>=1"));
        assert_eq!(tail, c("tube[0]>=1 adic[0]"));
        let inj = fsc_closure(&c("I*>=0"));
        assert_eq!(inj, c("I*>=0 prufer[*] generic"));
        assert_eq!(fsc_closure(&c("prufer[1]")), c("prufer[1] generic"));
    }

    #[test]
    fn definability_and_generic() {
        assert!(is_definable(&c("P3 I0")));
        assert!(is_definable(&c("I*>=0")));
        assert!(!is_definable(&c("tube[0]>=1")));
        assert!(generic_status(&c("I*>=3")).unwrap());
        assert!(!generic_status(&c("P1 R[2,1]")).unwrap());
        assert!(matches!(generic_status(&c("tube[0]>=1")), Err(Error::NotDefinable(_))));
    }

    #[test]
    fn subset_order() {
        assert!(c("I3").is_subset(&c("I*>=2")));
        assert!(c("I*>=3").is_subset(&c("I*>=2")));
        assert!(!c("I*>=1").is_subset(&c("I*>=2")));
        assert!(c("R[3,2]").is_subset(&c("R[*,<=2]")));
        assert!(!c("R[x^2+x+1,2]").is_subset(&c("R[*,<=2]")));
        assert!(c("prufer[0]").is_subset(&c("prufer[*]")));
    }
}
