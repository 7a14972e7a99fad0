//! Krull–Schmidt decomposition by Fitting splitting, and isomorphism tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::Field;
use crate::mat::Mat;
use crate::poly::{charpoly, Poly};
use crate::rep::{hom_basis, hom_dim, ModuleMap, Representation};

/// Random endomorphisms tried per module before it is declared indecomposable.
pub const SPLIT_ROUNDS: usize = 100;

const ISO_SEED: u64 = 0x5eed_150;
const ISO_ROUNDS: usize = 200;
const EXHAUSTIVE_LIMIT: u64 = 4096;

/// An isomorphism class of summands with its multiplicity.
#[derive(Clone, Debug)]
pub struct Piece<F: Field> {
    pub module: Representation<F>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition<F: Field> {
    /// Grouped into isomorphism classes, sorted by dimension vector.
    pub pieces: Vec<Piece<F>>,
    /// Every summand, in the order the witness uses.
    pub summands: Vec<Representation<F>>,
    /// Isomorphism `⊕ summands → M`.
    pub witness: ModuleMap<F>,
}

impl<F: Field> Decomposition<F> {
    pub fn summand_count(&self) -> usize {
        self.summands.len()
    }
}

/// Splits `m` into indecomposable summands. Deterministic for a fixed seed.
pub fn decompose<F: Field>(m: &Representation<F>, seed: u64) -> Decomposition<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<(Representation<F>, ModuleMap<F>)> = Vec::new();
    split_recursive(m, ModuleMap::identity(m), &mut rng, &mut found);
    found.sort_by(|a, b| a.0.total_dim().cmp(&b.0.total_dim()).then_with(|| a.0.dims().cmp(b.0.dims())));

    let summands: Vec<Representation<F>> = found.iter().map(|(s, _)| s.clone()).collect();
    let field = m.field();
    let nv = m.dims().len();
    let sum = Representation::direct_sum(field, m.quiver(), m.side(), &summands.iter().collect::<Vec<_>>())
        .expect("summands share the ambient structure")
        .sum;
    let comps: Vec<Mat<F>> = (0..nv)
        .map(|v| {
            let blocks: Vec<&Mat<F>> = found.iter().map(|(_, inc)| inc.component(v)).collect();
            Mat::hstack(field, m.dim(v), &blocks)
        })
        .collect();
    let witness = ModuleMap::new(sum, m.clone(), comps).expect("witness is a homomorphism");
    debug_assert!(witness.is_isomorphism());

    let mut pieces: Vec<Piece<F>> = Vec::new();
    for s in &summands {
        match pieces.iter_mut().find(|p| is_isomorphic(&p.module, s).unwrap_or(false)) {
            Some(p) => p.multiplicity += 1,
            None => pieces.push(Piece {
                module: s.clone(),
                multiplicity: 1,
            }),
        }
    }
    Decomposition {
        pieces,
        summands,
        witness,
    }
}

fn split_recursive<F: Field, R: Rng>(
    m: &Representation<F>,
    inclusion: ModuleMap<F>,
    rng: &mut R,
    out: &mut Vec<(Representation<F>, ModuleMap<F>)>,
) {
    if m.is_zero() {
        return;
    }
    match find_splitting(m, rng) {
        None => out.push((m.clone(), inclusion)),
        Some(g) => {
            let n = m.total_dim();
            let powered: Vec<Mat<F>> = g.components().iter().map(|c| c.pow(n)).collect();
            let ker: Vec<Mat<F>> = powered.iter().map(|c| c.kernel_basis()).collect();
            let img: Vec<Mat<F>> = powered.iter().map(|c| c.image_basis()).collect();
            for bases in [ker, img] {
                let (sub, inc) = m.submodule(bases).expect("Fitting pieces are submodules");
                let composed = inclusion.compose(&inc).expect("inclusions compose");
                split_recursive(&sub, composed, rng, out);
            }
        }
    }
}

/// An endomorphism whose Fitting decomposition is proper, if one is found.
fn find_splitting<F: Field, R: Rng>(m: &Representation<F>, rng: &mut R) -> Option<ModuleMap<F>> {
    let basis = hom_basis(m, m).expect("endomorphisms of a module");
    if basis.len() <= 1 {
        return None;
    }
    for f in &basis {
        if let Some(g) = splitting_from(m, f, rng) {
            return Some(g);
        }
    }
    let field = m.field();
    for _ in 0..SPLIT_ROUNDS {
        let coeffs: Vec<F::Elem> = basis.iter().map(|_| field.random(rng)).collect();
        let f = ModuleMap::combination(&basis, &coeffs, m, m);
        if let Some(g) = splitting_from(m, &f, rng) {
            return Some(g);
        }
    }
    None
}

/// True when `g^N` is neither zero nor invertible.
fn fitting_proper<F: Field>(m: &Representation<F>, g: &ModuleMap<F>) -> bool {
    let n = m.total_dim();
    let r: usize = g.components().iter().map(|c| c.pow(n).rank()).sum();
    r > 0 && r < n
}

/// `f` itself, or a polynomial in `f` that separates coprime factors of its
/// characteristic polynomial.
fn splitting_from<F: Field, R: Rng>(m: &Representation<F>, f: &ModuleMap<F>, rng: &mut R) -> Option<ModuleMap<F>> {
    if fitting_proper(m, f) {
        return Some(f.clone());
    }
    let field = m.field();
    let total = f.total_matrix();
    let cp = charpoly(&total);
    let factors: Vec<Poly<F>> = if field.order().is_some() {
        cp.factor_finite(rng).into_iter().map(|(g, _)| g).collect()
    } else {
        let mut v: Vec<Poly<F>> = cp.squarefree_decomposition().into_iter().map(|(g, _)| g).collect();
        for c in -3..=3 {
            let lin = Poly::linear(field, &field.from_i64(c));
            if cp.rem(&lin).is_zero() {
                v.push(lin);
            }
        }
        v
    };
    if factors.len() < 2 && field.order().is_some() {
        return None;
    }
    for u in factors {
        let comps: Vec<Mat<F>> = f.components().iter().map(|c| u.eval_mat(c)).collect();
        let g = ModuleMap::new(m.clone(), m.clone(), comps).expect("polynomials in an endomorphism commute");
        if fitting_proper(m, &g) {
            return Some(g);
        }
    }
    None
}

/// Whether every sampled endomorphism is nilpotent or invertible.
pub fn local_probe<F: Field>(m: &Representation<F>, rounds: usize, seed: u64) -> bool {
    let basis = hom_basis(m, m).expect("endomorphisms");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = m.total_dim();
    (0..rounds).all(|_| {
        let coeffs: Vec<F::Elem> = basis.iter().map(|_| m.field().random(&mut rng)).collect();
        let f = ModuleMap::combination(&basis, &coeffs, m, m);
        f.is_isomorphism() || f.components().iter().all(|c| c.pow(n).is_zero())
    })
}

/// Decides `M ≅ N` by searching `Hom(M, N)` for an invertible element.
pub fn is_isomorphic<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<bool> {
    m.check_compatible(n)?;
    Ok(find_isomorphism(m, n)?.is_some())
}

/// An explicit isomorphism `M → N`, if one is found.
pub fn find_isomorphism<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<Option<ModuleMap<F>>> {
    m.check_compatible(n)?;
    if m.dims() != n.dims() {
        return Ok(None);
    }
    let d = hom_dim(m, n)?;
    if d != hom_dim(n, m)? || d != hom_dim(m, m)? {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(ModuleMap::identity(m)));
    }
    let basis = hom_basis(m, n)?;
    if let Some(f) = basis.iter().find(|f| f.is_isomorphism()) {
        return Ok(Some(f.clone()));
    }
    let field = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
    for round in 0..ISO_ROUNDS {
        let coeffs: Vec<F::Elem> = match field.order() {
            Some(_) => basis.iter().map(|_| field.random(&mut rng)).collect(),
            None => {
                let bound = 2 + round as i64 / 20;
                basis.iter().map(|_| field.from_i64(rng.gen_range(-bound..=bound))).collect()
            }
        };
        let f = ModuleMap::combination(&basis, &coeffs, m, n);
        if f.is_isomorphism() {
            return Ok(Some(f));
        }
    }
    if let Some(q) = field.order() {
        let total = (q as f64).powi(basis.len() as i32);
        if total <= EXHAUSTIVE_LIMIT as f64 {
            let elems = field.elements().expect("finite field");
            let mut idx = vec![0usize; basis.len()];
            loop {
                let coeffs: Vec<F::Elem> = idx.iter().map(|&i| elems[i].clone()).collect();
                let f = ModuleMap::combination(&basis, &coeffs, m, n);
                if f.is_isomorphism() {
                    return Ok(Some(f));
                }
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        return Ok(None);
                    }
                    idx[k] += 1;
                    if idx[k] < elems.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use crate::quiver::Quiver;
    use crate::rep::{free_module, projective_sum, Side};

    fn reg<F: Field>(f: &F, lambda: i64) -> Representation<F> {
        let one = Mat::from_i64(f, &[&[1]]);
        let l = Mat::from_i64(f, &[&[lambda]]);
        Representation::new(f, &Quiver::kronecker(), Side::Left, vec![1, 1], vec![one, l]).unwrap()
    }

    #[test]
    fn free_module_splits_into_projectives() {
        let f = Fp::new(5);
        let d = decompose(&free_module(&f, &Quiver::kronecker(), Side::Left, 1), 7);
        let dims: Vec<&[usize]> = d.pieces.iter().map(|p| p.module.dims()).collect();
        assert_eq!(dims, vec![&[1usize, 0][..], &[2, 1][..]]);
        assert!(d.witness.is_isomorphism());
    }

    #[test]
    fn conjugated_sum_recovered() {
        let f = Fp::new(5);
        let q = Quiver::kronecker();
        let p0 = projective_sum(&f, &q, Side::Left, &[0]);
        let m = reg(&f, 2).oplus(&p0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = m.random_change_of_basis(&mut rng);
        let d = decompose(&m.conjugate(&g), 1);
        assert_eq!(d.pieces.len(), 2);
        assert!(d.pieces.iter().any(|p| is_isomorphic(&p.module, &reg(&f, 2)).unwrap()));
        assert!(d.pieces.iter().any(|p| is_isomorphic(&p.module, &p0).unwrap()));
    }

    #[test]
    fn multiplicities_over_small_field() {
        let f = Fp::new(2);
        let m = reg(&f, 1).power(3).oplus(&reg(&f, 0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = decompose(&m.conjugate(&m.random_change_of_basis(&mut rng)), 3);
        let mut mult: Vec<usize> = d.pieces.iter().map(|p| p.multiplicity).collect();
        mult.sort();
        assert_eq!(mult, vec![1, 3]);
        for p in &d.pieces {
            assert!(local_probe(&p.module, 50, 2));
        }
    }

    #[test]
    fn rationals_split() {
        let q = Rationals;
        let m = reg(&q, 1).oplus(&reg(&q, -2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = decompose(&m.conjugate(&m.random_change_of_basis(&mut rng)), 5);
        assert_eq!(d.summand_count(), 2);
    }

    #[test]
    fn isomorphism_examples() {
        let f = Fp::new(5);
        let m = reg(&f, 3);
        assert!(is_isomorphic(&m, &m).unwrap());
        assert!(!is_isomorphic(&reg(&f, 1), &reg(&f, 2)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = m.random_change_of_basis(&mut rng);
        assert!(is_isomorphic(&m, &m.conjugate(&g)).unwrap());
        let z = Representation::zero(&f, &Quiver::kronecker(), Side::Left);
        assert!(decompose(&z, 0).pieces.is_empty());
    }

    #[test]
    fn deterministic_for_seed() {
        let f = Fp::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = Representation::random(&f, &Quiver::kronecker(), Side::Left, vec![3, 3], &mut rng);
        let a = decompose(&m, 11);
        let b = decompose(&m, 11);
        assert_eq!(a.summands, b.summands);
    }
}
