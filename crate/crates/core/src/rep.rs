//! Quiver representations as modules over the path algebra.
//!
//! Every representation is stored as a left module over its *effective* quiver.
//! A right module over `kQ` is a left module over `kQ^op`, so right modules
//! keep `Q^op` as their effective quiver and carry a [`Side::Right`] tag.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::mat::{Cokernel, Mat};
use crate::quiver::{AlgebraElement, AlgebraMatrix, Path, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, PartialEq)]
pub struct Representation<F: Field> {
    field: F,
    quiver: Quiver,
    side: Side,
    dims: Vec<usize>,
    maps: Vec<Mat<F>>,
}

impl<F: Field> fmt::Debug for Representation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} module over {}, dims {:?}", self.side, self.quiver.describe(), self.dims)?;
        for (a, m) in self.quiver.arrows().iter().zip(&self.maps) {
            writeln!(f, "arrow {}:\n{:?}", a.name, m)?;
        }
        Ok(())
    }
}

impl<F: Field> Representation<F> {
    /// `quiver` is the effective quiver; each map of arrow `α` has shape
    /// `dims[t(α)] × dims[s(α)]` with respect to it.
    pub fn new(field: &F, quiver: &Quiver, side: Side, dims: Vec<usize>, maps: Vec<Mat<F>>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::Shape(format!(
                "{} dimensions given for a quiver with {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::Shape(format!(
                "{} arrow matrices given for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        for (a, m) in quiver.arrows().iter().zip(&maps) {
            if m.shape() != (dims[a.target], dims[a.source]) {
                return Err(Error::Shape(format!(
                    "arrow `{}` needs a {}×{} matrix, got {}×{}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != field {
                return Err(Error::FieldMismatch(m.field().spec(), field.spec()));
            }
        }
        Ok(Representation {
            field: field.clone(),
            quiver: quiver.clone(),
            side,
            dims,
            maps,
        })
    }

    /// Builds a module from the quiver `base` that the algebra is the path
    /// algebra of; right modules are moved to the opposite quiver. Right-module
    /// arrow matrices describe right multiplication by the arrow (target
    /// component to source component).
    pub fn from_base(field: &F, base: &Quiver, side: Side, dims: Vec<usize>, maps: Vec<Mat<F>>) -> Result<Self> {
        let eff = match side {
            Side::Left => base.clone(),
            Side::Right => base.opposite(),
        };
        Self::new(field, &eff, side, dims, maps)
    }

    pub fn zero(field: &F, quiver: &Quiver, side: Side) -> Self {
        let n = quiver.vertex_count();
        Self::with_dims_zero_maps(field, quiver, side, vec![0; n])
    }

    fn with_dims_zero_maps(field: &F, quiver: &Quiver, side: Side, dims: Vec<usize>) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| Mat::zeros(field, dims[a.target], dims[a.source]))
            .collect();
        Representation {
            field: field.clone(),
            quiver: quiver.clone(),
            side,
            dims,
            maps,
        }
    }

    /// The simple module at vertex `v`.
    pub fn simple(field: &F, quiver: &Quiver, side: Side, v: usize) -> Self {
        let mut dims = vec![0; quiver.vertex_count()];
        dims[v] = 1;
        Self::with_dims_zero_maps(field, quiver, side, dims)
    }

    pub fn random<R: Rng + ?Sized>(field: &F, quiver: &Quiver, side: Side, dims: Vec<usize>, rng: &mut R) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| Mat::from_fn(field, dims[a.target], dims[a.source], |_, _| field.random(rng)))
            .collect();
        Representation {
            field: field.clone(),
            quiver: quiver.clone(),
            side,
            dims,
            maps,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// The quiver this module is a left module over.
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// The quiver of the algebra, independent of side.
    pub fn base_quiver(&self) -> Quiver {
        match self.side {
            Side::Left => self.quiver.clone(),
            Side::Right => self.quiver.opposite(),
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn maps(&self) -> &[Mat<F>] {
        &self.maps
    }

    pub fn arrow_map(&self, i: usize) -> &Mat<F> {
        &self.maps[i]
    }

    /// Start of each vertex block in the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            out.push(acc);
            acc += d;
        }
        out
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.spec(), other.field.spec()));
        }
        if self.side != other.side {
            return Err(Error::SideMismatch(format!("{} module vs {} module", self.side, other.side)));
        }
        if self.quiver != other.quiver {
            return Err(Error::QuiverMismatch(self.quiver.describe(), other.quiver.describe()));
        }
        Ok(())
    }

    /// The action of a path (in the effective quiver): `dims[t] × dims[s]`.
    pub fn path_action(&self, p: &Path) -> Mat<F> {
        let mut m = Mat::identity(&self.field, self.dims[p.source]);
        for &a in p.arrows.iter().rev() {
            m = self.maps[a].mul(&m);
        }
        m
    }

    /// Action of an element of the effective path algebra on the total space.
    pub fn element_action(&self, x: &AlgebraElement<F>) -> Mat<F> {
        let n = self.total_dim();
        let off = self.offsets();
        let mut out = Mat::zeros(&self.field, n, n);
        for (p, c) in x.terms() {
            let block = self.path_action(p).scale(c);
            for r in 0..block.rows() {
                for col in 0..block.cols() {
                    let (rr, cc) = (off[p.target] + r, off[p.source] + col);
                    let v = self.field.add(out.get(rr, cc), block.get(r, col));
                    out.set(rr, cc, v);
                }
            }
        }
        out
    }

    /// Direct sum with the canonical inclusions and projections. Vertex `v` of
    /// the sum stacks the vertex-`v` spaces of the summands in order.
    pub fn direct_sum(field: &F, quiver: &Quiver, side: Side, parts: &[&Self]) -> Result<DirectSum<F>> {
        for p in parts {
            if p.field != *field || p.side != side || p.quiver != *quiver {
                let probe = Self::zero(field, quiver, side);
                probe.check_compatible(p)?;
            }
        }
        let nv = quiver.vertex_count();
        let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
        let maps = (0..quiver.arrows().len())
            .map(|i| Mat::block_diag(field, &parts.iter().map(|p| &p.maps[i]).collect::<Vec<_>>()))
            .collect();
        let sum = Representation {
            field: field.clone(),
            quiver: quiver.clone(),
            side,
            dims,
            maps,
        };
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        let mut starts = vec![0usize; nv];
        for p in parts {
            let inc: Vec<Mat<F>> = (0..nv)
                .map(|v| {
                    let mut m = Mat::zeros(field, sum.dims[v], p.dims[v]);
                    m.paste(starts[v], 0, &Mat::identity(field, p.dims[v]));
                    m
                })
                .collect();
            let proj: Vec<Mat<F>> = inc.iter().map(|m| m.transpose()).collect();
            inclusions.push(ModuleMap::new_unchecked((*p).clone(), sum.clone(), inc));
            projections.push(ModuleMap::new_unchecked(sum.clone(), (*p).clone(), proj));
            for v in 0..nv {
                starts[v] += p.dims[v];
            }
        }
        Ok(DirectSum {
            sum,
            inclusions,
            projections,
        })
    }

    /// Direct sum of two modules (no structure maps).
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self::direct_sum(&self.field, &self.quiver, self.side, &[self, other])?.sum)
    }

    /// `n` copies of `self`.
    pub fn power(&self, n: usize) -> Self {
        let parts: Vec<&Self> = std::iter::repeat(self).take(n).collect();
        Self::direct_sum(&self.field, &self.quiver, self.side, &parts)
            .expect("copies are compatible")
            .sum
    }

    /// Transports the structure along invertible vertex maps `g_v`: arrows become
    /// `g_t M_α g_s⁻¹`.
    pub fn conjugate(&self, g: &[Mat<F>]) -> Self {
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| {
                let inv = g[a.source].inverse().expect("conjugating maps must be invertible");
                g[a.target].mul(m).mul(&inv)
            })
            .collect();
        Representation {
            maps,
            ..self.clone()
        }
    }

    /// A random invertible matrix per vertex.
    pub fn random_change_of_basis<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Mat<F>> {
        self.dims
            .iter()
            .map(|&d| loop {
                let m = Mat::from_fn(&self.field, d, d, |_, _| self.field.random(rng));
                if m.is_invertible() {
                    break m;
                }
            })
            .collect()
    }

    /// The k-linear dual, a module on the other side.
    pub fn dual(&self) -> Self {
        Representation {
            field: self.field.clone(),
            quiver: self.quiver.opposite(),
            side: self.side.flip(),
            dims: self.dims.clone(),
            maps: self.maps.iter().map(|m| m.transpose()).collect(),
        }
    }

    /// Submodule spanned by the given column bases per vertex (assumed stable
    /// under every arrow), with its inclusion.
    pub fn submodule(&self, bases: Vec<Mat<F>>) -> Result<(Self, ModuleMap<F>)> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for (a, m) in self.quiver.arrows().iter().zip(&self.maps) {
            let image = m.mul(&bases[a.source]);
            let restricted = bases[a.target].solve_particular(&image).ok_or_else(|| {
                Error::Internal(format!("subspace family is not stable under arrow `{}`", a.name))
            })?;
            maps.push(restricted);
        }
        let sub = Representation {
            field: self.field.clone(),
            quiver: self.quiver.clone(),
            side: self.side,
            dims: bases.iter().map(|b| b.cols()).collect(),
            maps,
        };
        let inc = ModuleMap::new_unchecked(sub.clone(), self.clone(), bases);
        Ok((sub, inc))
    }

    /// Quotient by the submodule spanned by the given bases, with the projection.
    pub fn quotient(&self, bases: &[Mat<F>]) -> (Self, ModuleMap<F>) {
        let cok: Vec<Cokernel<F>> = bases.iter().map(|b| b.cokernel()).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| cok[a.target].projection.mul(m).mul(&cok[a.source].complement))
            .collect();
        let q = Representation {
            field: self.field.clone(),
            quiver: self.quiver.clone(),
            side: self.side,
            dims: cok.iter().map(|c| c.complement.cols()).collect(),
            maps,
        };
        let proj = ModuleMap::new_unchecked(self.clone(), q.clone(), cok.into_iter().map(|c| c.projection).collect());
        (q, proj)
    }

    /// Radical at each vertex: the span of the images of all arrows into it.
    pub fn radical_bases(&self) -> Vec<Mat<F>> {
        (0..self.dims.len())
            .map(|v| {
                let blocks: Vec<&Mat<F>> = self
                    .quiver
                    .arrows()
                    .iter()
                    .zip(&self.maps)
                    .filter(|(a, _)| a.target == v)
                    .map(|(_, m)| m)
                    .collect();
                Mat::hstack(&self.field, self.dims[v], &blocks).image_basis()
            })
            .collect()
    }

    /// Multiplicity of each simple in the top `M / rad M`.
    pub fn top(&self) -> Vec<usize> {
        self.radical_bases()
            .iter()
            .zip(&self.dims)
            .map(|(r, &d)| d - r.cols())
            .collect()
    }

    /// Projective cover and syzygy.
    pub fn top_and_cover(&self) -> Cover<F> {
        let rad = self.radical_bases();
        let mut generators: Vec<(usize, Vec<F::Elem>)> = Vec::new();
        let mut top = Vec::new();
        for (v, r) in rad.iter().enumerate() {
            let comp = r.cokernel().complement;
            top.push(comp.cols());
            for c in comp.columns() {
                generators.push((v, c));
            }
        }
        let vertices: Vec<usize> = generators.iter().map(|(v, _)| *v).collect();
        let projective = projective_sum(&self.field, &self.quiver, self.side, &vertices);
        let cover = map_from_generators(&projective, &vertices, self, &generators.iter().map(|(_, g)| g.clone()).collect::<Vec<_>>());
        let (syzygy, inclusion) = cover.kernel();
        debug_assert!({
            let rad_p = projective.radical_bases();
            inclusion
                .components()
                .iter()
                .zip(&rad_p)
                .all(|(k, r)| r.column_space_contains(k))
        });
        Cover {
            top,
            vertices,
            projective,
            cover,
            syzygy,
            inclusion,
        }
    }

    /// `(gen, rel, Gen, Rel)`.
    pub fn gen_rel(&self) -> GenRel {
        let cover = self.top_and_cover();
        let t = &cover.top;
        let gen = t.iter().copied().max().unwrap_or(0);
        let t_omega = cover.syzygy.top();
        let rel = t_omega
            .iter()
            .zip(t)
            .map(|(o, m)| o + gen - m)
            .max()
            .unwrap_or(0);
        GenRel {
            gen,
            rel,
            gen_total: t.iter().sum(),
            rel_total: t_omega.iter().sum(),
        }
    }
}

/// Generator and relation counts: `gen`/`rel` minimal counts over the free
/// module, `Gen`/`Rel` counted over indecomposable projectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenRel {
    pub gen: usize,
    pub rel: usize,
    pub gen_total: usize,
    pub rel_total: usize,
}

#[derive(Clone, Debug)]
pub struct DirectSum<F: Field> {
    pub sum: Representation<F>,
    pub inclusions: Vec<ModuleMap<F>>,
    pub projections: Vec<ModuleMap<F>>,
}

/// Result of [`Representation::top_and_cover`].
#[derive(Clone, Debug)]
pub struct Cover<F: Field> {
    /// Top multiplicities per vertex.
    pub top: Vec<usize>,
    /// Vertex of each indecomposable projective summand of the cover, in order.
    pub vertices: Vec<usize>,
    pub projective: Representation<F>,
    pub cover: ModuleMap<F>,
    pub syzygy: Representation<F>,
    pub inclusion: ModuleMap<F>,
}

/// `⊕_k P(vertices[k])` over the effective quiver. The basis of vertex `u` lists,
/// summand by summand, the paths from `vertices[k]` to `u`.
pub fn projective_sum<F: Field>(field: &F, quiver: &Quiver, side: Side, vertices: &[usize]) -> Representation<F> {
    let nv = quiver.vertex_count();
    let dims: Vec<usize> = (0..nv)
        .map(|u| vertices.iter().map(|&v| quiver.path_count_between(v, u)).sum())
        .collect();
    let mut maps = Vec::new();
    for (ai, a) in quiver.arrows().iter().enumerate() {
        let mut m = Mat::zeros(field, dims[a.target], dims[a.source]);
        let (mut row0, mut col0) = (0, 0);
        for &v in vertices {
            for (ci, p) in quiver.paths_between(v, a.source).enumerate() {
                let arrow_path = Path {
                    source: a.source,
                    target: a.target,
                    arrows: vec![ai],
                };
                let ap = arrow_path.compose(p).expect("composable by construction");
                let ri = quiver.path_position(&ap).expect("path exists");
                m.set(row0 + ri, col0 + ci, field.one());
            }
            row0 += quiver.path_count_between(v, a.target);
            col0 += quiver.path_count_between(v, a.source);
        }
        maps.push(m);
    }
    Representation {
        field: field.clone(),
        quiver: quiver.clone(),
        side,
        dims,
        maps,
    }
}

/// The free module of rank `r` over the path algebra of the effective quiver.
pub fn free_module<F: Field>(field: &F, quiver: &Quiver, side: Side, r: usize) -> Representation<F> {
    let vertices: Vec<usize> = (0..r).flat_map(|_| 0..quiver.vertex_count()).collect();
    projective_sum(field, quiver, side, &vertices)
}

/// The free module of rank `r` for the algebra of `base`, on the given side.
pub fn free_module_over<F: Field>(field: &F, base: &Quiver, side: Side, r: usize) -> Representation<F> {
    let eff = match side {
        Side::Left => base.clone(),
        Side::Right => base.opposite(),
    };
    free_module(field, &eff, side, r)
}

/// The homomorphism `⊕P(dom_k) → target` sending generator `e_{dom_k}` to
/// `images[k]` (a vector in the vertex-`dom_k` space of `target`).
pub fn map_from_generators<F: Field>(
    projective: &Representation<F>,
    dom: &[usize],
    target: &Representation<F>,
    images: &[Vec<F::Elem>],
) -> ModuleMap<F> {
    let field = projective.field();
    let quiver = projective.quiver();
    let nv = quiver.vertex_count();
    let mut comps: Vec<Mat<F>> = (0..nv)
        .map(|u| Mat::zeros(field, target.dims[u], projective.dims[u]))
        .collect();
    let mut starts = vec![0usize; nv];
    for (&v, g) in dom.iter().zip(images) {
        let gv = Mat::column_vector(field, g.clone());
        for (u, comp) in comps.iter_mut().enumerate() {
            for (i, p) in quiver.paths_between(v, u).enumerate() {
                let img = target.path_action(p).mul(&gv);
                for r in 0..img.rows() {
                    comp.set(r, starts[u] + i, img.get(r, 0).clone());
                }
            }
            starts[u] += quiver.path_count_between(v, u);
        }
    }
    ModuleMap::new_unchecked(projective.clone(), target.clone(), comps)
}

/// Right multiplication `x̄ ↦ x̄Φ` from `⊕P(dom_k)` to `⊕P(cod_l)`, where each
/// entry is cut down to `e_{dom_k} Φ_kl e_{cod_l}`. Φ lives in the effective
/// path algebra.
pub fn projective_map<F: Field>(
    field: &F,
    quiver: &Quiver,
    side: Side,
    dom: &[usize],
    cod: &[usize],
    phi: &AlgebraMatrix<F>,
) -> ModuleMap<F> {
    assert_eq!((phi.rows(), phi.cols()), (dom.len(), cod.len()), "presentation matrix shape");
    let source = projective_sum(field, quiver, side, dom);
    let target = projective_sum(field, quiver, side, cod);
    let nv = quiver.vertex_count();
    // Offsets of each codomain summand within each vertex.
    let mut cod_starts = vec![vec![0usize; nv]; cod.len()];
    let mut acc = vec![0usize; nv];
    for (l, &w) in cod.iter().enumerate() {
        for u in 0..nv {
            cod_starts[l][u] = acc[u];
            acc[u] += quiver.path_count_between(w, u);
        }
    }
    let images: Vec<Vec<F::Elem>> = dom
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let mut img = vec![field.zero(); target.dims[v]];
            for (l, &w) in cod.iter().enumerate() {
                for (p, c) in phi.get(k, l).corner(v, w).terms() {
                    let idx = cod_starts[l][v] + quiver.path_position(p).expect("path exists");
                    img[idx] = field.add(&img[idx], c);
                }
            }
            img
        })
        .collect();
    map_from_generators(&source, dom, &target, &images)
}

/// The linear map `x̄ ↦ Hx̄` from `M^m` to `M^n` (left modules) or
/// `w̄ ↦ w̄H` from `W^n` to `W^m` (right modules), on total spaces.
pub fn matrix_action<F: Field>(h: &AlgebraMatrix<F>, m: &Representation<F>) -> Result<Mat<F>> {
    if h.field() != m.field() {
        return Err(Error::FieldMismatch(h.field().spec(), m.field().spec()));
    }
    if *h.quiver() != m.base_quiver() {
        return Err(Error::QuiverMismatch(h.quiver().describe(), m.base_quiver().describe()));
    }
    let eff = match m.side() {
        Side::Left => h.clone(),
        Side::Right => h.transpose_op(),
    };
    let d = m.total_dim();
    let mut out = Mat::zeros(m.field(), eff.rows() * d, eff.cols() * d);
    for i in 0..eff.rows() {
        for j in 0..eff.cols() {
            out.paste(i * d, j * d, &m.element_action(eff.get(i, j)));
        }
    }
    Ok(out)
}

/// A homomorphism given by one matrix per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap<F: Field> {
    source: Representation<F>,
    target: Representation<F>,
    comps: Vec<Mat<F>>,
}

impl<F: Field> ModuleMap<F> {
    /// Checks shapes and that every arrow square commutes.
    pub fn new(source: Representation<F>, target: Representation<F>, comps: Vec<Mat<F>>) -> Result<Self> {
        source.check_compatible(&target)?;
        if comps.len() != source.dims.len() {
            return Err(Error::Shape(format!("{} vertex maps for {} vertices", comps.len(), source.dims.len())));
        }
        for (v, c) in comps.iter().enumerate() {
            if c.shape() != (target.dims[v], source.dims[v]) {
                return Err(Error::Shape(format!(
                    "vertex {} map needs shape {}×{}, got {}×{}",
                    v + 1,
                    target.dims[v],
                    source.dims[v],
                    c.rows(),
                    c.cols()
                )));
            }
        }
        for (i, a) in source.quiver.arrows().iter().enumerate() {
            let lhs = comps[a.target].mul(&source.maps[i]);
            let rhs = target.maps[i].mul(&comps[a.source]);
            if lhs != rhs {
                return Err(Error::NotHomomorphism(a.name.clone()));
            }
        }
        Ok(ModuleMap { source, target, comps })
    }

    pub(crate) fn new_unchecked(source: Representation<F>, target: Representation<F>, comps: Vec<Mat<F>>) -> Self {
        ModuleMap { source, target, comps }
    }

    pub fn identity(m: &Representation<F>) -> Self {
        let comps = m.dims.iter().map(|&d| Mat::identity(&m.field, d)).collect();
        ModuleMap::new_unchecked(m.clone(), m.clone(), comps)
    }

    pub fn zero(source: &Representation<F>, target: &Representation<F>) -> Self {
        let comps = source
            .dims
            .iter()
            .zip(&target.dims)
            .map(|(&s, &t)| Mat::zeros(&source.field, t, s))
            .collect();
        ModuleMap::new_unchecked(source.clone(), target.clone(), comps)
    }

    pub fn source(&self) -> &Representation<F> {
        &self.source
    }

    pub fn target(&self) -> &Representation<F> {
        &self.target
    }

    pub fn components(&self) -> &[Mat<F>] {
        &self.comps
    }

    pub fn component(&self, v: usize) -> &Mat<F> {
        &self.comps[v]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap<F>) -> Result<Self> {
        if other.target.dims != self.source.dims {
            return Err(Error::Shape("maps are not composable".into()));
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.mul(b)).collect();
        Ok(ModuleMap::new_unchecked(other.source.clone(), self.target.clone(), comps))
    }

    pub fn add(&self, other: &ModuleMap<F>) -> Self {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect();
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let comps = self.comps.iter().map(|a| a.scale(s)).collect();
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    /// Linear combination of maps sharing source and target.
    pub fn combination(maps: &[ModuleMap<F>], coeffs: &[F::Elem], source: &Representation<F>, target: &Representation<F>) -> Self {
        let mut out = ModuleMap::zero(source, target);
        for (m, c) in maps.iter().zip(coeffs) {
            out = out.add(&m.scale(c));
        }
        out
    }

    /// Block-diagonal matrix on total spaces.
    pub fn total_matrix(&self) -> Mat<F> {
        Mat::block_diag(&self.source.field, &self.comps.iter().collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        self.comps.iter().map(|c| c.rank()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.total_dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.total_dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dims == self.target.dims && self.comps.iter().all(|c| c.is_invertible())
    }

    /// Kernel with its inclusion.
    pub fn kernel(&self) -> (Representation<F>, ModuleMap<F>) {
        let bases = self.comps.iter().map(|c| c.kernel_basis()).collect();
        self.source.submodule(bases).expect("kernels are submodules")
    }

    /// Image with its inclusion into the target.
    pub fn image(&self) -> (Representation<F>, ModuleMap<F>) {
        let bases = self.comps.iter().map(|c| c.image_basis()).collect();
        self.target.submodule(bases).expect("images are submodules")
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (Representation<F>, ModuleMap<F>) {
        let bases: Vec<Mat<F>> = self.comps.iter().map(|c| c.image_basis()).collect();
        self.target.quotient(&bases)
    }

    /// The dual map `N* → M*`.
    pub fn dual(&self) -> ModuleMap<F> {
        ModuleMap::new_unchecked(
            self.target.dual(),
            self.source.dual(),
            self.comps.iter().map(|c| c.transpose()).collect(),
        )
    }
}

/// Which piece [`subquotient`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subquotient {
    Kernel,
    Image,
    Cokernel,
}

pub fn subquotient<F: Field>(f: &ModuleMap<F>, which: Subquotient) -> (Representation<F>, ModuleMap<F>) {
    match which {
        Subquotient::Kernel => f.kernel(),
        Subquotient::Image => f.image(),
        Subquotient::Cokernel => f.cokernel(),
    }
}

/// A basis of `Hom(M, N)`, solving the commuting-square system.
pub fn hom_basis<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<Vec<ModuleMap<F>>> {
    let kernel = hom_system(m, n)?.kernel_basis();
    Ok(kernel.columns().into_iter().map(|col| unpack_hom(m, n, &col)).collect())
}

pub fn hom_dim<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<usize> {
    let sys = hom_system(m, n)?;
    Ok(sys.cols() - sys.rank())
}

fn hom_offsets<F: Field>(m: &Representation<F>, n: &Representation<F>) -> (Vec<usize>, usize) {
    let mut offs = Vec::new();
    let mut acc = 0;
    for v in 0..m.dims.len() {
        offs.push(acc);
        acc += m.dims[v] * n.dims[v];
    }
    (offs, acc)
}

/// Unknowns are the vertex matrices `f_v` (row-major, concatenated); one block of
/// equations `N_α f_s − f_t M_α = 0` per arrow.
fn hom_system<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<Mat<F>> {
    m.check_compatible(n)?;
    let field = &m.field;
    let (offs, unknowns) = hom_offsets(m, n);
    let eqs: usize = m
        .quiver
        .arrows()
        .iter()
        .map(|a| n.dims[a.target] * m.dims[a.source])
        .sum();
    let mut sys = Mat::zeros(field, eqs, unknowns);
    let mut row0 = 0;
    for (ai, a) in m.quiver.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ma, na) = (&m.maps[ai], &n.maps[ai]);
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let row = row0 + i * m.dims[s] + j;
                // (N_α f_s)[i][j] = Σ_k N_α[i][k] f_s[k][j]
                for k in 0..n.dims[s] {
                    let c = na.get(i, k);
                    if !field.is_zero(c) {
                        let col = offs[s] + k * m.dims[s] + j;
                        let v = field.add(sys.get(row, col), c);
                        sys.set(row, col, v);
                    }
                }
                // (f_t M_α)[i][j] = Σ_k f_t[i][k] M_α[k][j]
                for k in 0..m.dims[t] {
                    let c = ma.get(k, j);
                    if !field.is_zero(c) {
                        let col = offs[t] + i * m.dims[t] + k;
                        let v = field.sub(sys.get(row, col), c);
                        sys.set(row, col, v);
                    }
                }
            }
        }
        row0 += n.dims[t] * m.dims[s];
    }
    Ok(sys)
}

fn unpack_hom<F: Field>(m: &Representation<F>, n: &Representation<F>, x: &[F::Elem]) -> ModuleMap<F> {
    let (offs, _) = hom_offsets(m, n);
    let comps = (0..m.dims.len())
        .map(|v| {
            let (r, c) = (n.dims[v], m.dims[v]);
            Mat::from_vec(&m.field, r, c, x[offs[v]..offs[v] + r * c].to_vec())
        })
        .collect();
    ModuleMap::new_unchecked(m.clone(), n.clone(), comps)
}

/// `W ⊗_R V` for a right module `W` and a left module `V`, realized as a
/// quotient of `⊕_v W_v ⊗ V_v` (Kronecker index order `w·dim V_v + v`).
#[derive(Clone, Debug)]
pub struct Tensor<F: Field> {
    /// Block offsets of `W_v ⊗ V_v` in the ambient space.
    pub offsets: Vec<usize>,
    pub ambient_dim: usize,
    pub quotient: Cokernel<F>,
}

impl<F: Field> Tensor<F> {
    pub fn dim(&self) -> usize {
        self.quotient.complement.cols()
    }
}

pub fn tensor<F: Field>(w: &Representation<F>, v: &Representation<F>) -> Result<Tensor<F>> {
    check_tensor_pair(w, v)?;
    let field = &w.field;
    let nv = v.dims.len();
    let mut offsets = Vec::with_capacity(nv);
    let mut ambient = 0;
    for u in 0..nv {
        offsets.push(ambient);
        ambient += w.dims[u] * v.dims[u];
    }
    let mut blocks = Vec::new();
    for (ai, a) in v.quiver.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        // w ∈ W_t, x ∈ V_s: (w·α) ⊗ x − w ⊗ (α x).
        let cols = w.dims[t] * v.dims[s];
        let mut rel = Mat::zeros(field, ambient, cols);
        let right = w.maps[ai].kron(&Mat::identity(field, v.dims[s]));
        let left = Mat::identity(field, w.dims[t]).kron(&v.maps[ai]).scale(&field.neg(&field.one()));
        add_block(&mut rel, offsets[s], &right);
        add_block(&mut rel, offsets[t], &left);
        blocks.push(rel);
    }
    let rels = Mat::hstack(field, ambient, &blocks.iter().collect::<Vec<_>>());
    Ok(Tensor {
        offsets,
        ambient_dim: ambient,
        quotient: rels.cokernel(),
    })
}

fn add_block<F: Field>(m: &mut Mat<F>, r0: usize, block: &Mat<F>) {
    let f = m.field().clone();
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = f.add(m.get(r0 + r, c), block.get(r, c));
            m.set(r0 + r, c, v);
        }
    }
}

fn check_tensor_pair<F: Field>(w: &Representation<F>, v: &Representation<F>) -> Result<()> {
    if w.field != v.field {
        return Err(Error::FieldMismatch(w.field.spec(), v.field.spec()));
    }
    if w.side != Side::Right || v.side != Side::Left {
        return Err(Error::SideMismatch(format!(
            "tensor needs right ⊗ left, got {} ⊗ {}",
            w.side, v.side
        )));
    }
    if w.base_quiver() != v.base_quiver() {
        return Err(Error::QuiverMismatch(w.base_quiver().describe(), v.base_quiver().describe()));
    }
    Ok(())
}

/// `1_W ⊗ g : W⊗V → W⊗V'` in the quotient coordinates of the two tensors.
pub fn tensor_map_left<F: Field>(w: &Representation<F>, g: &ModuleMap<F>, src: &Tensor<F>, dst: &Tensor<F>) -> Mat<F> {
    let field = &w.field;
    let blocks: Vec<Mat<F>> = (0..w.dims.len())
        .map(|u| Mat::identity(field, w.dims[u]).kron(&g.comps[u]))
        .collect();
    let ambient = Mat::block_diag(field, &blocks.iter().collect::<Vec<_>>());
    dst.quotient.projection.mul(&ambient).mul(&src.quotient.complement)
}

/// `h ⊗ 1_V : W⊗V → W'⊗V` in quotient coordinates.
pub fn tensor_map_right<F: Field>(h: &ModuleMap<F>, v: &Representation<F>, src: &Tensor<F>, dst: &Tensor<F>) -> Mat<F> {
    let field = &v.field;
    let blocks: Vec<Mat<F>> = (0..v.dims.len())
        .map(|u| h.comps[u].kron(&Mat::identity(field, v.dims[u])))
        .collect();
    let ambient = Mat::block_diag(field, &blocks.iter().collect::<Vec<_>>());
    dst.quotient.projection.mul(&ambient).mul(&src.quotient.complement)
}

/// Why a pair of maps fails to be a short exact sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SesDiagnostic {
    NotComposable,
    NotInjective,
    NotSurjective,
    HomologyNonzero,
}

impl fmt::Display for SesDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SesDiagnostic::NotComposable => "not-composable",
            SesDiagnostic::NotInjective => "not-injective",
            SesDiagnostic::NotSurjective => "not-surjective",
            SesDiagnostic::HomologyNonzero => "homology-nonzero",
        })
    }
}

/// A validated `0 → A → B → C → 0`.
#[derive(Clone, Debug)]
pub struct ShortExact<F: Field> {
    f: ModuleMap<F>,
    g: ModuleMap<F>,
}

impl<F: Field> ShortExact<F> {
    pub fn validate(f: ModuleMap<F>, g: ModuleMap<F>) -> std::result::Result<Self, SesDiagnostic> {
        if f.target != g.source {
            return Err(SesDiagnostic::NotComposable);
        }
        if !f.is_injective() {
            return Err(SesDiagnostic::NotInjective);
        }
        if !g.is_surjective() {
            return Err(SesDiagnostic::NotSurjective);
        }
        let gf = g.compose(&f).map_err(|_| SesDiagnostic::NotComposable)?;
        if !gf.is_zero() || f.source.total_dim() + g.target.total_dim() != f.target.total_dim() {
            return Err(SesDiagnostic::HomologyNonzero);
        }
        Ok(ShortExact { f, g })
    }

    /// `0 → A → A⊕C → C → 0`.
    pub fn split(a: &Representation<F>, c: &Representation<F>) -> Result<Self> {
        a.check_compatible(c)?;
        let ds = Representation::direct_sum(&a.field, &a.quiver, a.side, &[a, c])?;
        Ok(ShortExact {
            f: ds.inclusions[0].clone(),
            g: ds.projections[1].clone(),
        })
    }

    pub fn f(&self) -> &ModuleMap<F> {
        &self.f
    }

    pub fn g(&self) -> &ModuleMap<F> {
        &self.g
    }

    pub fn a(&self) -> &Representation<F> {
        &self.f.source
    }

    pub fn b(&self) -> &Representation<F> {
        &self.f.target
    }

    pub fn c(&self) -> &Representation<F> {
        &self.g.target
    }

    /// `0 → C* → B* → A* → 0`.
    pub fn dual(&self) -> Self {
        ShortExact {
            f: self.g.dual(),
            g: self.f.dual(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kq() -> Quiver {
        Quiver::kronecker()
    }

    fn reg(f: &Fp, lambda: u64) -> Representation<Fp> {
        let one = Mat::from_vec(f, 1, 1, vec![1]);
        let l = Mat::from_vec(f, 1, 1, vec![lambda]);
        Representation::new(f, &kq(), Side::Left, vec![1, 1], vec![one, l]).unwrap()
    }

    fn p(f: &Fp, v: usize) -> Representation<Fp> {
        projective_sum(f, &kq(), Side::Left, &[v])
    }

    #[test]
    fn free_module_dimensions() {
        let f = Fp::new(5);
        assert_eq!(free_module(&f, &kq(), Side::Left, 1).dims(), &[3, 1]);
        assert_eq!(free_module(&f, &kq(), Side::Left, 2).dims(), &[6, 2]);
        assert_eq!(free_module(&f, &kq(), Side::Left, 0).dims(), &[0, 0]);
        assert_eq!(free_module_over(&f, &kq(), Side::Right, 1).dims(), &[1, 3]);
    }

    #[test]
    fn hom_examples() {
        let f = Fp::new(5);
        assert_eq!(hom_dim(&p(&f, 0), &p(&f, 0)).unwrap(), 1);
        assert_eq!(hom_dim(&p(&f, 0), &p(&f, 1)).unwrap(), 2);
        assert_eq!(hom_dim(&reg(&f, 1), &reg(&f, 2)).unwrap(), 0);
        assert_eq!(hom_dim(&reg(&f, 2), &reg(&f, 2)).unwrap(), 1);
        for m in hom_basis(&p(&f, 0), &p(&f, 1)).unwrap() {
            ModuleMap::new(m.source().clone(), m.target().clone(), m.components().to_vec()).unwrap();
        }
    }

    #[test]
    fn matrix_action_examples() {
        let f = Fp::new(5);
        let q = kq();
        let unit = AlgebraMatrix::single(&q, &f, AlgebraElement::one(&q, &f));
        let m = reg(&f, 2);
        assert_eq!(matrix_action(&unit, &m).unwrap(), Mat::identity(&f, 2));
        let a = AlgebraMatrix::single(&q, &f, AlgebraElement::parse("a", &q, &f).unwrap());
        let act = matrix_action(&a, &m).unwrap();
        assert_eq!(act.rank(), 1);
        assert_eq!(*act.get(0, 1), 1);
        let z = AlgebraMatrix::zeros(&q, &f, 2, 1);
        assert!(matrix_action(&z, &m).unwrap().is_zero());
        assert_eq!(matrix_action(&z, &m).unwrap().shape(), (4, 2));
    }

    #[test]
    fn tensor_examples() {
        let f = Fp::new(2);
        let s1r = Representation::simple(&f, &kq().opposite(), Side::Right, 0);
        let s1l = Representation::simple(&f, &kq(), Side::Left, 0);
        let s2l = Representation::simple(&f, &kq(), Side::Left, 1);
        assert_eq!(tensor(&s1r, &s2l).unwrap().dim(), 0);
        assert_eq!(tensor(&s1r, &s1l).unwrap().dim(), 1);
        // R_R ⊗ M ≅ M.
        let rr = free_module_over(&f, &kq(), Side::Right, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = Representation::random(&f, &kq(), Side::Left, vec![2, 3], &mut rng);
        assert_eq!(tensor(&rr, &m).unwrap().dim(), 5);
        assert!(tensor(&s1l, &s1l).is_err());
    }

    #[test]
    fn dual_is_involutive() {
        let f = Fp::new(5);
        let m = reg(&f, 2);
        let d = m.dual();
        assert_eq!(d.side(), Side::Right);
        assert_eq!(d.dual(), m);
        assert_eq!(p(&f, 0).dual(), Representation::simple(&f, &kq().opposite(), Side::Right, 0));
    }

    #[test]
    fn covers_and_gen_rel() {
        let f = Fp::new(5);
        let i0 = Representation::simple(&f, &kq(), Side::Left, 1);
        let c = i0.top_and_cover();
        assert_eq!(c.top, vec![0, 1]);
        assert_eq!(c.syzygy.dims(), &[2, 0]);
        let g = i0.gen_rel();
        assert_eq!((g.gen, g.rel), (1, 3));
        let r = reg(&f, 3);
        assert_eq!(r.top_and_cover().syzygy.dims(), &[1, 0]);
        assert_eq!((r.gen_rel().gen, r.gen_rel().rel), (1, 2));
        let rr = free_module(&f, &kq(), Side::Left, 1).gen_rel();
        assert_eq!(rr, GenRel { gen: 1, rel: 0, gen_total: 2, rel_total: 0 });
        let p1 = p(&f, 1).top_and_cover();
        assert!(p1.syzygy.is_zero());
        assert!(p1.cover.is_isomorphism());
    }

    #[test]
    fn cokernel_of_syzygy_recovers_module() {
        let f = Fp::new(5);
        let r = reg(&f, 2);
        let c = r.top_and_cover();
        let (q, _) = c.inclusion.cokernel();
        assert_eq!(q.dims(), &[1, 1]);
        assert_eq!(hom_dim(&q, &r).unwrap(), 1);
        let iso = hom_basis(&q, &r).unwrap();
        assert!(iso[0].is_isomorphism());
    }

    #[test]
    fn subquotient_trivia() {
        let f = Fp::new(5);
        let r = free_module(&f, &kq(), Side::Left, 1);
        let (c, _) = subquotient(&ModuleMap::zero(&r, &r), Subquotient::Cokernel);
        assert_eq!(c, r);
        let (k, _) = subquotient(&ModuleMap::identity(&r), Subquotient::Kernel);
        assert!(k.is_zero());
    }

    #[test]
    fn short_exact_diagnostics() {
        let f = Fp::new(2);
        let p0 = p(&f, 0);
        let i0 = Representation::simple(&f, &kq(), Side::Left, 1);
        let split = ShortExact::split(&p0, &i0).unwrap();
        assert!(ShortExact::validate(split.f().clone(), split.g().clone()).is_ok());
        let bad = ShortExact::validate(ModuleMap::zero(&p0, &p0), ModuleMap::identity(&p0));
        assert_eq!(bad.unwrap_err(), SesDiagnostic::NotInjective);
        // Radical sequence of P(2).
        let p1 = p(&f, 1);
        let c = i0.top_and_cover();
        let ses = ShortExact::validate(c.inclusion.clone(), c.cover.clone()).unwrap();
        assert_eq!(ses.a().dims(), &[2, 0]);
        assert_eq!(ses.b().dims(), p1.dims());
    }

    #[test]
    fn projective_map_matches_right_multiplication() {
        // ρ_{(a)}: R → R has image spanned by a, so the cokernel has dims (2,1).
        let f = Fp::new(5);
        let q = kq();
        let h = AlgebraMatrix::single(&q, &f, AlgebraElement::parse("a", &q, &f).unwrap());
        let all = [0, 1];
        let phi = AlgebraMatrix::new(&q, &f, 2, 2, vec![
            h.get(0, 0).clone(),
            h.get(0, 0).clone(),
            h.get(0, 0).clone(),
            h.get(0, 0).clone(),
        ]);
        let m = projective_map(&f, &q, Side::Left, &all, &all, &phi);
        assert_eq!(m.rank(), 1);
        ModuleMap::new(m.source().clone(), m.target().clone(), m.components().to_vec()).unwrap();
    }
}
