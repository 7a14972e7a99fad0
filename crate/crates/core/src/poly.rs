//! Univariate polynomials over an exact field, characteristic polynomials,
//! and factorization over prime fields.

use std::cmp::Ordering;

use rand::Rng;

use crate::field::Field;
use crate::mat::Mat;

/// Coefficients from the constant term upward; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Poly<F> {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &F) -> Poly<F> {
        Poly::new(field, vec![])
    }

    pub fn constant(field: &F, c: F::Elem) -> Poly<F> {
        Poly::new(field, vec![c])
    }

    pub fn one(field: &F) -> Poly<F> {
        Poly::constant(field, field.one())
    }

    /// The monomial `x`.
    pub fn x(field: &F) -> Poly<F> {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// `x - c`.
    pub fn linear(field: &F, c: &F::Elem) -> Poly<F> {
        Poly::new(field, vec![field.neg(c), field.one()])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> Poly<F> {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero leading coefficient");
                Poly::new(&self.field, self.coeffs.iter().map(|c| self.field.mul(c, &inv)).collect())
            }
        }
    }

    pub fn add(&self, other: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn scale(&self, s: &F::Elem) -> Poly<F> {
        Poly::new(&self.field, self.coeffs.iter().map(|c| self.field.mul(c, s)).collect())
    }

    pub fn pow(&self, e: usize) -> Poly<F> {
        (0..e).fold(Poly::one(&self.field), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv(d.lead().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Poly::zero(f), self.clone());
        }
        let mut q = vec![f.zero(); n - dd];
        for i in (dd..n).rev() {
            let c = f.mul(&rem[i], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, dc));
            }
            q[i - dd] = c;
        }
        rem.truncate(dd);
        (Poly::new(f, q), Poly::new(f, rem))
    }

    pub fn rem(&self, d: &Poly<F>) -> Poly<F> {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly<F> {
        let f = &self.field;
        Poly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_mat(&self, m: &Mat<F>) -> Mat<F> {
        let f = &self.field;
        let n = m.rows();
        let mut acc = Mat::zeros(f, n, n);
        let id = Mat::identity(f, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&id.scale(c));
        }
        acc
    }

    /// `self^e mod modulus` by repeated squaring.
    pub fn pow_mod(&self, mut e: u128, modulus: &Poly<F>) -> Poly<F> {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(&self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Companion matrix of a monic polynomial (ones on the subdiagonal, negated
    /// coefficients in the last column). Its characteristic and minimal
    /// polynomials both equal `self`.
    pub fn companion(&self) -> Mat<F> {
        let f = &self.field;
        let d = self.degree().expect("companion of zero polynomial");
        let m = self.monic();
        Mat::from_fn(f, d, d, |r, c| {
            if c == d - 1 {
                f.neg(&m.coeff(r))
            } else if r == c + 1 {
                f.one()
            } else {
                f.zero()
            }
        })
    }

    /// Replaces `x^p` by `x`: the p-th root of a polynomial whose derivative
    /// vanishes over GF(p) (Frobenius is the identity on the prime field).
    fn pth_root(&self, p: usize) -> Poly<F> {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().step_by(p).cloned().collect())
    }

    /// Square-free decomposition: pairs `(g_i, i)` with `self = lc * prod g_i^i`,
    /// each `g_i` square-free, monic, pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly<F>, usize)> {
        let f = &self.field;
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let p = f.characteristic() as usize;
        let a = self.monic();
        let d = a.derivative();
        if d.is_zero() {
            // Only possible in characteristic p.
            for (g, m) in a.pth_root(p).squarefree_decomposition() {
                out.push((g, m * p));
            }
            return out;
        }
        // Yun's algorithm, then recurse on the inseparable remainder.
        let mut c = a.gcd(&d);
        let mut w = a.div_rem(&c).0;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let z = w.div_rem(&y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.div_rem(&w).0;
        }
        if c.degree().unwrap_or(0) > 0 {
            // c is a p-th power in characteristic p.
            for (g, m) in c.pth_root(p).squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        merge_factors(out)
    }

    /// The product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Poly<F> {
        self.squarefree_decomposition()
            .into_iter()
            .fold(Poly::one(&self.field), |acc, (g, _)| acc.mul(&g))
    }

    /// Rabin's irreducibility test; only meaningful over a finite field.
    pub fn is_irreducible_finite(&self) -> bool {
        let q = self.field.order().expect("finite field") as u128;
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let m = self.monic();
        let x = Poly::x(&self.field);
        let frob = |k: usize| -> Poly<F> {
            let mut t = x.clone();
            for _ in 0..k {
                t = t.pow_mod(q, &m);
            }
            t
        };
        if !frob(n).sub(&x).rem(&m).is_zero() {
            return false;
        }
        for r in prime_divisors(n) {
            let g = frob(n / r).sub(&x).gcd(&m);
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Complete factorization into monic irreducibles over a finite field:
    /// square-free split, distinct-degree, then Cantor–Zassenhaus.
    pub fn factor_finite<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<(Poly<F>, usize)> {
        let mut out = Vec::new();
        for (g, mult) in self.squarefree_decomposition() {
            for (h, d) in distinct_degree(&g) {
                for irr in equal_degree(&h, d, rng) {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| poly_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        merge_factors(out)
    }
}

/// Total order on polynomials: by degree, then coefficients from the top.
pub fn poly_cmp<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

fn merge_factors<F: Field>(mut v: Vec<(Poly<F>, usize)>) -> Vec<(Poly<F>, usize)> {
    v.sort_by(|a, b| poly_cmp(&a.0, &b.0));
    let mut out: Vec<(Poly<F>, usize)> = Vec::new();
    for (g, m) in v {
        match out.last_mut() {
            Some((h, k)) if *h == g => *k += m,
            _ => out.push((g, m)),
        }
    }
    out
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a square-free monic polynomial into products of irreducibles of equal degree.
fn distinct_degree<F: Field>(g: &Poly<F>) -> Vec<(Poly<F>, usize)> {
    let f = g.field();
    let q = f.order().expect("finite field") as u128;
    let x = Poly::x(f);
    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut h = x.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(q, &rest);
        let part = h.sub(&x).gcd(&rest);
        if part.degree().unwrap_or(0) > 0 {
            out.push((part.clone(), d));
            rest = rest.div_rem(&part).0;
            h = h.rem(&rest);
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest.monic(), deg));
        }
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting (with the trace map in characteristic 2).
fn equal_degree<F: Field, R: Rng + ?Sized>(g: &Poly<F>, d: usize, rng: &mut R) -> Vec<Poly<F>> {
    let n = g.degree().unwrap_or(0);
    if n == d {
        return vec![g.monic()];
    }
    let f = g.field();
    let q = f.order().expect("finite field") as u128;
    loop {
        let a = Poly::new(f, (0..n).map(|_| f.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if q % 2 == 1 {
            let e = (q.pow(d as u32) - 1) / 2;
            a.pow_mod(e, g).sub(&Poly::one(f))
        } else {
            // Tr(a) = a + a^2 + ... + a^(2^(kd-1)) with q = 2^k.
            let k = (q as f64).log2().round() as usize;
            let mut t = a.rem(g);
            let mut acc = t.clone();
            for _ in 1..k * d {
                t = t.mul(&t).rem(g);
                acc = acc.add(&t);
            }
            acc
        };
        let h = candidate.gcd(g);
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < n {
            let mut out = equal_degree(&h, d, rng);
            out.extend(equal_degree(&g.div_rem(&h).0, d, rng));
            return out;
        }
    }
}

/// Characteristic polynomial `det(xI - m)` via Hessenberg reduction.
pub fn charpoly<F: Field>(m: &Mat<F>) -> Poly<F> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let f = m.field().clone();
    let n = m.rows();
    let mut h = m.clone();
    // Similarity transforms to upper Hessenberg form.
    for col in 0..n.saturating_sub(2) {
        let m1 = col + 1;
        let Some(piv) = (m1..n).find(|&i| !f.is_zero(h.get(i, col))) else {
            continue;
        };
        if piv != m1 {
            for c in 0..n {
                let (a, b) = (h.get(piv, c).clone(), h.get(m1, c).clone());
                h.set(piv, c, b);
                h.set(m1, c, a);
            }
            for r in 0..n {
                let (a, b) = (h.get(r, piv).clone(), h.get(r, m1).clone());
                h.set(r, piv, b);
                h.set(r, m1, a);
            }
        }
        let inv = f.inv(h.get(m1, col)).unwrap();
        for i in (m1 + 1)..n {
            let u = f.mul(h.get(i, col), &inv);
            if f.is_zero(&u) {
                continue;
            }
            for c in 0..n {
                let v = f.sub(h.get(i, c), &f.mul(&u, h.get(m1, c)));
                h.set(i, c, v);
            }
            for r in 0..n {
                let v = f.add(h.get(r, m1), &f.mul(&u, h.get(r, i)));
                h.set(r, m1, v);
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik * (prod subdiagonal) * p_{i-1}
    let x = Poly::x(&f);
    let mut ps: Vec<Poly<F>> = vec![Poly::one(&f)];
    for k in 0..n {
        let mut pk = x.sub(&Poly::constant(&f, h.get(k, k).clone())).mul(&ps[k]);
        let mut t = f.one();
        for i in (0..k).rev() {
            t = f.mul(&t, h.get(i + 1, i));
            let coeff = f.mul(&t, h.get(i, k));
            pk = pk.sub(&ps[i].scale(&coeff));
        }
        ps.push(pk);
    }
    ps.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p<F: Field>(f: &F, c: &[i64]) -> Poly<F> {
        Poly::new(f, c.iter().map(|&x| f.from_i64(x)).collect())
    }

    /// Determinant by cofactor expansion: independent of the Hessenberg route.
    fn det_cofactor<F: Field>(f: &F, m: &[Vec<F::Elem>]) -> F::Elem {
        let n = m.len();
        if n == 0 {
            return f.one();
        }
        let mut acc = f.zero();
        for c in 0..n {
            let minor: Vec<Vec<F::Elem>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = f.mul(&m[0][c], &det_cofactor(f, &minor));
            acc = if c % 2 == 0 { f.add(&acc, &term) } else { f.sub(&acc, &term) };
        }
        acc
    }

    #[test]
    fn charpoly_matches_cofactor_determinant() {
        let f = Fp::new(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(0..6);
            let m = Mat::from_fn(&f, n, n, |_, _| f.random(&mut rng));
            let cp = charpoly(&m);
            assert_eq!(cp.degree(), Some(n));
            for x in 0..7u64 {
                let rows: Vec<Vec<u64>> = (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| {
                                let d = if r == c { x } else { 0 };
                                f.sub(&d, m.get(r, c))
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(cp.eval(&x), det_cofactor(&f, &rows));
            }
            // Cayley–Hamilton.
            assert!(cp.eval_mat(&m).is_zero());
        }
    }

    #[test]
    fn charpoly_over_rationals() {
        let q = Rationals;
        let m = Mat::from_i64(&q, &[&[2, 1], &[0, 3]]);
        assert_eq!(charpoly(&m), p(&q, &[6, -5, 1]));
    }

    #[test]
    fn squarefree_in_characteristic_p() {
        let f = Fp::new(3);
        // (x+1)^3 (x+2)^2 over GF(3): the cube has vanishing derivative.
        let g = p(&f, &[1, 1]).pow(3).mul(&p(&f, &[2, 1]).pow(2));
        let sf = g.squarefree_decomposition();
        assert_eq!(sf, vec![(p(&f, &[1, 1]), 3), (p(&f, &[2, 1]), 2)]);
        assert_eq!(g.radical(), p(&f, &[1, 1]).mul(&p(&f, &[2, 1])));
    }

    #[test]
    fn irreducibility_small_fields() {
        let f = Fp::new(2);
        assert!(p(&f, &[1, 1, 1]).is_irreducible_finite());
        assert!(!p(&f, &[1, 0, 1]).is_irreducible_finite());
        assert!(p(&f, &[1, 1, 0, 1]).is_irreducible_finite());
        let g5 = Fp::new(5);
        assert!(p(&g5, &[2, 0, 1]).is_irreducible_finite());
        assert!(!p(&g5, &[1, 0, 1]).is_irreducible_finite());
    }

    #[test]
    fn factorization_reassembles() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for q in [2u64, 3, 5, 7] {
            let f = Fp::new(q);
            for _ in 0..60 {
                let n = rng.gen_range(1..9);
                let mut c: Vec<u64> = (0..n).map(|_| f.random(&mut rng)).collect();
                c.push(1);
                let g = Poly::new(&f, c);
                let fac = g.factor_finite(&mut rng);
                let prod = fac.iter().fold(Poly::one(&f), |acc, (h, m)| acc.mul(&h.pow(*m)));
                assert_eq!(prod, g);
                for (h, _) in &fac {
                    assert!(h.is_irreducible_finite(), "{h:?}");
                }
            }
        }
    }
}
