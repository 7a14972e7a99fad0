//! Matrix-presented modules `L_H`, `D_H`, the Auslander–Bridger transpose and
//! the Auslander–Reiten translate.

use crate::field::Field;
use crate::quiver::{AlgebraElement, AlgebraMatrix, Path, Quiver};
use crate::rep::{projective_map, ModuleMap, Representation, Side};

/// The effective path-algebra matrix of `x̄ ↦ x̄H` between free modules of ranks
/// `rows` and `cols`, spelled out over indecomposable projective summands.
fn free_presentation<F: Field>(h: &AlgebraMatrix<F>) -> (Vec<usize>, Vec<usize>, AlgebraMatrix<F>) {
    let q = h.quiver();
    let nv = q.vertex_count();
    let dom: Vec<usize> = (0..h.rows()).flat_map(|_| 0..nv).collect();
    let cod: Vec<usize> = (0..h.cols()).flat_map(|_| 0..nv).collect();
    let mut entries = Vec::with_capacity(dom.len() * cod.len());
    for k in 0..dom.len() {
        for l in 0..cod.len() {
            entries.push(h.get(k / nv.max(1), l / nv.max(1)).clone());
        }
    }
    let phi = AlgebraMatrix::new(q, h.field(), dom.len(), cod.len(), entries);
    (dom, cod, phi)
}

/// `ρ_H : R^n → R^m, x̄ ↦ x̄H` for an `n × m` matrix over the effective quiver.
pub fn presentation_map<F: Field>(h: &AlgebraMatrix<F>, side: Side) -> ModuleMap<F> {
    let (dom, cod, phi) = free_presentation(h);
    projective_map(h.field(), h.quiver(), side, &dom, &cod, &phi)
}

/// `L_H = R^m / im(ρ_H)`, a left module (an empty matrix gives `R`).
pub fn construct_l<F: Field>(h: &AlgebraMatrix<F>) -> Representation<F> {
    presentation_map(h, Side::Left).cokernel().0
}

/// `D_H = R^n / im(λ_H)` with `λ_H(ȳ) = Hȳ`, a right module.
pub fn construct_d<F: Field>(h: &AlgebraMatrix<F>) -> Representation<F> {
    presentation_map(&h.transpose_op(), Side::Right).cokernel().0
}

/// A map `⊕P(p1[k]) → ⊕P(p0[l])` between projectives given by right
/// multiplication with `phi` (over the effective quiver of `side`).
#[derive(Clone, Debug)]
pub struct Presentation<F: Field> {
    pub quiver: Quiver,
    pub side: Side,
    pub p1: Vec<usize>,
    pub p0: Vec<usize>,
    pub phi: AlgebraMatrix<F>,
}

impl<F: Field> Presentation<F> {
    pub fn map(&self) -> ModuleMap<F> {
        projective_map(self.phi.field(), &self.quiver, self.side, &self.p1, &self.p0, &self.phi)
    }

    pub fn cokernel(&self) -> Representation<F> {
        self.map().cokernel().0
    }

    /// Applies `Hom(−, R)`: the presentation `P0⁺ → P1⁺` on the other side.
    pub fn dualize(&self) -> Presentation<F> {
        Presentation {
            quiver: self.quiver.opposite(),
            side: self.side.flip(),
            p1: self.p0.clone(),
            p0: self.p1.clone(),
            phi: self.phi.transpose_op(),
        }
    }
}

/// Index of the generator `e_v` of summand `k` within vertex `v` of `⊕P(vertices)`.
fn generator_slot(q: &Quiver, vertices: &[usize], k: usize) -> usize {
    let v = vertices[k];
    vertices[..k].iter().map(|&w| q.path_count_between(w, v)).sum()
}

/// Minimal projective presentation `P1 → P0 → M → 0` from the projective cover.
/// The quiver is hereditary, so the syzygy is projective and `P1 ≅ ΩM`.
pub fn minimal_presentation<F: Field>(m: &Representation<F>) -> Presentation<F> {
    let field = m.field();
    let q = m.quiver();
    let cover = m.top_and_cover();
    let omega_cover = cover.syzygy.top_and_cover();
    let psi = cover
        .inclusion
        .compose(&omega_cover.cover)
        .expect("syzygy cover composes with the inclusion");
    let p0 = cover.vertices.clone();
    let p1 = omega_cover.vertices.clone();
    let mut entries = vec![AlgebraElement::zero(); p1.len() * p0.len()];
    for (k, &j) in p1.iter().enumerate() {
        let slot = generator_slot(q, &p1, k);
        let image = psi.component(j).column(slot);
        let mut start = 0;
        for (l, &i) in p0.iter().enumerate() {
            let paths: Vec<Path> = q.paths_between(i, j).cloned().collect();
            let mut x = AlgebraElement::zero();
            for (pi, p) in paths.iter().enumerate() {
                let c = &image[start + pi];
                if !field.is_zero(c) {
                    x = x.add(field, &AlgebraElement::term(field, c.clone(), p.clone()));
                }
            }
            entries[k * p0.len() + l] = x;
            start += paths.len();
        }
    }
    Presentation {
        quiver: q.clone(),
        side: m.side(),
        p1: p1.clone(),
        p0,
        phi: AlgebraMatrix::new(q, field, p1.len(), cover.vertices.len(), entries),
    }
}

/// Auslander–Bridger transpose, computed from the minimal presentation so that
/// it is a function of `M`; zero on projectives.
pub fn transpose<F: Field>(m: &Representation<F>) -> Representation<F> {
    minimal_presentation(m).dualize().cokernel()
}

/// `τM = (Tr M)*`, on the same side as `M`.
pub fn ar_translate<F: Field>(m: &Representation<F>) -> Representation<F> {
    transpose(m).dual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use crate::mat::Mat;
    use crate::rep::{free_module, hom_basis, hom_dim, projective_sum};

    fn kq() -> Quiver {
        Quiver::kronecker()
    }

    fn single<F: Field>(f: &F, text: &str) -> AlgebraMatrix<F> {
        let q = kq();
        AlgebraMatrix::single(&q, f, AlgebraElement::parse(text, &q, f).unwrap())
    }

    fn iso<F: Field>(a: &Representation<F>, b: &Representation<F>) -> bool {
        use rand::SeedableRng;
        let basis = hom_basis(a, b).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        a.dims() == b.dims()
            && (0..50).any(|_| {
                let c: Vec<F::Elem> = basis.iter().map(|_| a.field().random(&mut rng)).collect();
                crate::rep::ModuleMap::combination(&basis, &c, a, b).is_isomorphism()
            })
    }

    #[test]
    fn construct_l_examples() {
        let f = Fp::new(5);
        assert_eq!(construct_l(&single(&f, "0")).dims(), &[3, 1]);
        assert!(construct_l(&single(&f, "1")).is_zero());
        assert_eq!(construct_l(&single(&f, "a + 2*b")).dims(), &[2, 1]);
        let empty = AlgebraMatrix::<Fp>::zeros(&kq(), &f, 0, 1);
        assert_eq!(construct_l(&empty), free_module(&f, &kq(), Side::Left, 1));
    }

    #[test]
    fn construct_d_examples() {
        let f = Fp::new(5);
        let r = construct_d(&single(&f, "0"));
        assert_eq!((r.side(), r.dims()), (Side::Right, &[1usize, 3][..]));
        assert!(construct_d(&single(&f, "1")).is_zero());
        assert_eq!(construct_d(&single(&f, "a + 2*b")).dims(), &[1, 2]);
    }

    #[test]
    fn presentation_reproduces_module() {
        let f = Rationals;
        let m = construct_l(&single(&f, "a - 3*b"));
        let pres = minimal_presentation(&m);
        assert!(iso(&pres.cokernel(), &m));
        assert!(pres.map().is_injective());
    }

    #[test]
    fn transpose_examples() {
        let f = Fp::new(5);
        let p0 = projective_sum(&f, &kq(), Side::Left, &[0]);
        assert!(transpose(&p0).is_zero());
        let i0 = Representation::simple(&f, &kq(), Side::Left, 1);
        let t = transpose(&i0);
        assert_eq!((t.side(), t.dims()), (Side::Right, &[2usize, 3][..]));
        let one = Mat::from_vec(&f, 1, 1, vec![1]);
        let two = Mat::from_vec(&f, 1, 1, vec![2]);
        let r = Representation::new(&f, &kq(), Side::Left, vec![1, 1], vec![one, two]).unwrap();
        assert!(iso(&transpose(&transpose(&r)), &r));
    }

    #[test]
    fn translate_examples() {
        let f = Fp::new(5);
        for v in 0..2 {
            assert!(ar_translate(&projective_sum(&f, &kq(), Side::Left, &[v])).is_zero());
        }
        let one = Mat::from_vec(&f, 1, 1, vec![1]);
        let two = Mat::from_vec(&f, 1, 1, vec![2]);
        let r = Representation::new(&f, &kq(), Side::Left, vec![1, 1], vec![one, two]).unwrap();
        assert!(iso(&ar_translate(&r), &r));
        let i0 = Representation::simple(&f, &kq(), Side::Left, 1);
        let t = ar_translate(&i0);
        assert_eq!((t.side(), t.dims()), (Side::Left, &[2usize, 3][..]));
        assert_eq!(hom_dim(&t, &t).unwrap(), 1);
    }
}
