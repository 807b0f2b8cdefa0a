//! Finitely generated abelian groups presented by integer relations, and morphisms between them.

mod matrix;
mod snf;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use matrix::{reduce_mod, IntegerMatrix};
pub use snf::{smith_normal_form, LatticeSolver, SmithForm};

#[derive(Debug)]
struct GroupData {
    generators: usize,
    /// One relation per row, `generators` columns.
    relations: IntegerMatrix,
    torsion: Vec<BigInt>,
    free_rank: usize,
    /// Rows map presented coordinates to canonical coordinates (torsion first, then free).
    projection: IntegerMatrix,
    /// Columns are presented lifts of the canonical generators.
    section: IntegerMatrix,
}

/// `Z^g / rowspace(relations)`, with its canonical form cached at construction.
#[derive(Clone)]
pub struct FGAbelianGroup(Arc<GroupData>);

impl FGAbelianGroup {
    /// The group on `generators` generators subject to the rows of `relations`.
    pub fn presented(generators: usize, relations: IntegerMatrix) -> Result<Self> {
        if relations.cols() != generators {
            return Err(Error::ShapeMismatch(format!(
                "relation matrix has {} columns for {generators} generators",
                relations.cols()
            )));
        }
        let s = smith_normal_form(&relations.transpose());
        let rank = s.rank();
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        let mut kept_torsion = Vec::new();
        for i in 0..generators {
            if i < rank {
                let d = s.d.get(i, i);
                if !d.is_one() {
                    kept_torsion.push(i);
                    torsion.push(d.clone());
                }
            } else {
                free.push(i);
            }
        }
        let kept: Vec<usize> = kept_torsion.iter().chain(&free).copied().collect();
        let projection = IntegerMatrix::from_rows(
            generators,
            kept.iter().map(|&i| s.u.row(i).to_vec()).collect(),
        )?;
        let section = IntegerMatrix::from_columns(
            generators,
            &kept.iter().map(|&i| s.u_inv.column(i)).collect::<Vec<_>>(),
        )?;
        Ok(FGAbelianGroup(Arc::new(GroupData {
            generators,
            relations,
            torsion,
            free_rank: free.len(),
            projection,
            section,
        })))
    }

    pub fn free(rank: usize) -> Self {
        Self::presented(rank, IntegerMatrix::zeros(0, rank)).expect("free group")
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/n`, or `Z` when `n == 0`.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        let n = n.into();
        Self::presented(1, IntegerMatrix::from_rows(1, vec![vec![n]]).expect("1x1"))
            .expect("cyclic group")
    }

    /// `Z^rank + Z/t_1 + ...` on generators ordered torsion first.
    pub fn from_invariants(rank: usize, torsion: &[BigInt]) -> Self {
        let g = torsion.len() + rank;
        let mut rel = IntegerMatrix::zeros(torsion.len(), g);
        for (i, t) in torsion.iter().enumerate() {
            rel.set(i, i, t.clone());
        }
        Self::presented(g, rel).expect("diagonal presentation")
    }

    pub fn generators(&self) -> usize {
        self.0.generators
    }

    pub fn relations(&self) -> &IntegerMatrix {
        &self.0.relations
    }

    /// Invariant factors greater than one, each dividing the next.
    pub fn torsion(&self) -> &[BigInt] {
        &self.0.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    /// Number of canonical generators.
    pub fn canonical_rank(&self) -> usize {
        self.0.torsion.len() + self.0.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.canonical_rank() == 0
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        (self.0.free_rank == 0).then(|| self.0.torsion.iter().product())
    }

    pub fn isomorphic(&self, other: &FGAbelianGroup) -> bool {
        self.0.free_rank == other.0.free_rank && self.0.torsion == other.0.torsion
    }

    /// Same generators and relations, so matrices on generators can be composed.
    pub fn same_presentation(&self, other: &FGAbelianGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.generators == other.0.generators && self.0.relations == other.0.relations)
    }

    /// Canonical coordinates of a presented element; torsion entries reduced into `[0, d)`.
    pub fn normal_form(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.0.projection.mul_vec(x);
        for (yi, d) in y.iter_mut().zip(&self.0.torsion) {
            *yi = reduce_mod(yi, d);
        }
        y
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.normal_form(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let d: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero(&d)
    }

    /// Presented coordinates of the canonical generators (as columns).
    pub fn section(&self) -> &IntegerMatrix {
        &self.0.section
    }

    /// Map from presented to canonical coordinates (before torsion reduction).
    pub fn projection(&self) -> &IntegerMatrix {
        &self.0.projection
    }

    pub fn basis_vector(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.0.generators];
        v[i] = BigInt::one();
        v
    }

    /// The same group, presented on its canonical generators.
    pub fn canonical(&self) -> FGAbelianGroup {
        Self::from_invariants(self.0.free_rank, &self.0.torsion)
    }
}

impl PartialEq for FGAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_presentation(other)
    }
}

impl Eq for FGAbelianGroup {}

impl fmt::Debug for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FGAbelianGroup")
            .field("generators", &self.0.generators)
            .field("relations", &self.0.relations.to_rows())
            .field("canonical", &self.to_string())
            .finish()
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.0.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.0.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A homomorphism given by its action on generators: column `j` is the image of generator `j`.
#[derive(Clone, Debug)]
pub struct GroupMorphism {
    source: FGAbelianGroup,
    target: FGAbelianGroup,
    matrix: IntegerMatrix,
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum IsoCheck {
    Isomorphism {
        inverse: GroupMorphism,
    },
    /// A nonzero source element sent to zero.
    NotInjective {
        kernel_element: Vec<BigInt>,
    },
    /// A target generator outside the image.
    NotSurjective {
        missed: Vec<BigInt>,
    },
}

impl IsoCheck {
    pub fn is_isomorphism(&self) -> bool {
        matches!(self, IsoCheck::Isomorphism { .. })
    }

    pub fn inverse(&self) -> Option<&GroupMorphism> {
        match self {
            IsoCheck::Isomorphism { inverse } => Some(inverse),
            _ => None,
        }
    }
}

impl GroupMorphism {
    /// Checks shape and that every source relation lands in the target relation lattice.
    pub fn new(
        source: FGAbelianGroup,
        target: FGAbelianGroup,
        matrix: IntegerMatrix,
    ) -> Result<Self> {
        if matrix.shape() != (target.generators(), source.generators()) {
            return Err(Error::ShapeMismatch(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        for i in 0..source.relations().rows() {
            let image = matrix.mul_vec(source.relations().row(i));
            if !target.is_zero(&image) {
                return Err(Error::NotAMorphism(format!(
                    "source relation {i} maps to {image:?}, nonzero in {target}"
                )));
            }
        }
        Ok(GroupMorphism {
            source,
            target,
            matrix,
        })
    }

    pub(crate) fn new_unchecked(
        source: FGAbelianGroup,
        target: FGAbelianGroup,
        matrix: IntegerMatrix,
    ) -> Self {
        debug_assert_eq!(matrix.shape(), (target.generators(), source.generators()));
        GroupMorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FGAbelianGroup) -> Self {
        GroupMorphism::new_unchecked(
            g.clone(),
            g.clone(),
            IntegerMatrix::identity(g.generators()),
        )
    }

    pub fn zero(source: &FGAbelianGroup, target: &FGAbelianGroup) -> Self {
        GroupMorphism::new_unchecked(
            source.clone(),
            target.clone(),
            IntegerMatrix::zeros(target.generators(), source.generators()),
        )
    }

    /// Multiplication by `c` on `g`.
    pub fn scalar(g: &FGAbelianGroup, c: &BigInt) -> Self {
        GroupMorphism::new_unchecked(
            g.clone(),
            g.clone(),
            IntegerMatrix::scalar(g.generators(), c),
        )
    }

    pub fn source(&self) -> &FGAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FGAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &GroupMorphism) -> Result<GroupMorphism> {
        if !first.target.same_presentation(&self.source) {
            return Err(Error::LevelMismatch(format!(
                "cannot compose: {} is not presented like {}",
                first.target, self.source
            )));
        }
        Ok(GroupMorphism::new_unchecked(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix)?,
        ))
    }

    fn check_parallel(&self, other: &GroupMorphism) -> Result<()> {
        if self.source.same_presentation(&other.source)
            && self.target.same_presentation(&other.target)
        {
            Ok(())
        } else {
            Err(Error::LevelMismatch("morphisms are not parallel".into()))
        }
    }

    pub fn add(&self, other: &GroupMorphism) -> Result<GroupMorphism> {
        self.check_parallel(other)?;
        Ok(GroupMorphism::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix)?,
        ))
    }

    pub fn sub(&self, other: &GroupMorphism) -> Result<GroupMorphism> {
        self.check_parallel(other)?;
        Ok(GroupMorphism::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(&other.matrix)?,
        ))
    }

    pub fn scale(&self, c: &BigInt) -> GroupMorphism {
        GroupMorphism::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.scale(c),
        )
    }

    /// Equal as homomorphisms: every generator image agrees modulo target relations.
    pub fn equals(&self, other: &GroupMorphism) -> bool {
        self.check_parallel(other).is_ok() && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero(&self.matrix.column(j)))
    }

    /// The matrix on canonical generators, torsion rows reduced.
    pub fn canonical_matrix(&self) -> IntegerMatrix {
        let m = self
            .target
            .projection()
            .mul(&self.matrix)
            .and_then(|m| m.mul(self.source.section()))
            .expect("shapes agree by construction");
        let mut out = m;
        for (i, d) in self.target.torsion().iter().enumerate() {
            for j in 0..out.cols() {
                let r = reduce_mod(out.get(i, j), d);
                out.set(i, j, r);
            }
        }
        out
    }

    fn preimage_solver(&self) -> LatticeSolver {
        let rel_t = self.target.relations().transpose();
        LatticeSolver::new(&self.matrix.hstack(&rel_t).expect("row counts agree"))
    }

    /// Some `x` with `f(x) = v` in the target, if one exists.
    pub fn preimage(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let g = self.source.generators();
        self.preimage_solver().solve(v).map(|c| c[..g].to_vec())
    }

    /// Generators (in presented source coordinates) of the kernel, as a subgroup of the source.
    pub fn kernel_generators(&self) -> Vec<Vec<BigInt>> {
        let g = self.source.generators();
        self.preimage_solver()
            .kernel_basis()
            .into_iter()
            .map(|c| c[..g].to_vec())
            .filter(|x| !self.source.is_zero(x))
            .collect()
    }

    /// Injectivity is checked first, so a morphism failing both reports a kernel element.
    pub fn is_isomorphism(&self) -> IsoCheck {
        if let Some(k) = self.kernel_generators().into_iter().next() {
            return IsoCheck::NotInjective { kernel_element: k };
        }
        let solver = self.preimage_solver();
        let g = self.source.generators();
        let mut cols = Vec::with_capacity(self.target.generators());
        for j in 0..self.target.generators() {
            let e = self.target.basis_vector(j);
            match solver.solve(&e) {
                Some(c) => cols.push(c[..g].to_vec()),
                None => return IsoCheck::NotSurjective { missed: e },
            }
        }
        let inv = IntegerMatrix::from_columns(g, &cols).expect("column lengths agree");
        IsoCheck::Isomorphism {
            inverse: GroupMorphism::new_unchecked(self.target.clone(), self.source.clone(), inv),
        }
    }

    pub fn is_surjective(&self) -> bool {
        let solver = self.preimage_solver();
        (0..self.target.generators()).all(|j| solver.contains(&self.target.basis_vector(j)))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_generators().is_empty()
    }
}

/// The quotient of the target by the image, with its projection.
pub fn cokernel(f: &GroupMorphism) -> (FGAbelianGroup, GroupMorphism) {
    let t = f.target();
    let rel = t
        .relations()
        .vstack(&f.matrix().transpose())
        .expect("column counts agree");
    let q = FGAbelianGroup::presented(t.generators(), rel).expect("valid presentation");
    let proj = GroupMorphism::new_unchecked(
        t.clone(),
        q.clone(),
        IntegerMatrix::identity(t.generators()),
    );
    (q, proj)
}

/// The unique `h` with `h . q_src = q_tgt . f`, for surjective `q_src`, `q_tgt`.
pub fn induced_on_quotient(
    f: &GroupMorphism,
    q_src: &GroupMorphism,
    q_tgt: &GroupMorphism,
) -> Result<GroupMorphism> {
    if !q_src.source().same_presentation(f.source())
        || !q_tgt.source().same_presentation(f.target())
    {
        return Err(Error::LevelMismatch(
            "projections do not start at the map's ends".into(),
        ));
    }
    let top = q_tgt.compose(f)?;
    for k in q_src.kernel_generators() {
        let image = top.apply(&k);
        if !q_tgt.target().is_zero(&image) {
            return Err(Error::NotWellDefined { element: k, image });
        }
    }
    let solver = q_src.preimage_solver();
    let g = q_src.source().generators();
    let mut cols = Vec::with_capacity(q_src.target().generators());
    for j in 0..q_src.target().generators() {
        let e = q_src.target().basis_vector(j);
        let c = solver
            .solve(&e)
            .ok_or_else(|| Error::NotSurjective(format!("generator {j} of {}", q_src.target())))?;
        cols.push(top.apply(&c[..g]));
    }
    let m = IntegerMatrix::from_columns(q_tgt.target().generators(), &cols)?;
    GroupMorphism::new(q_src.target().clone(), q_tgt.target().clone(), m)
}

/// Block-diagonal sum of groups.
pub fn direct_sum(groups: &[FGAbelianGroup]) -> FGAbelianGroup {
    let g: usize = groups.iter().map(|x| x.generators()).sum();
    let r: usize = groups.iter().map(|x| x.relations().rows()).sum();
    let mut rel = IntegerMatrix::zeros(r, g);
    let (mut ro, mut co) = (0, 0);
    for x in groups {
        for i in 0..x.relations().rows() {
            for j in 0..x.generators() {
                rel.set(ro + i, co + j, x.relations().get(i, j).clone());
            }
        }
        ro += x.relations().rows();
        co += x.generators();
    }
    FGAbelianGroup::presented(g, rel).expect("block presentation")
}

/// Canonical coordinates are printed with absolute values bounded by torsion; free ones may be negative.
pub fn describe_element(g: &FGAbelianGroup, x: &[BigInt]) -> String {
    let y = g.normal_form(x);
    let parts: Vec<String> = y
        .iter()
        .map(|v| {
            if v.is_negative() {
                format!("({v})")
            } else {
                v.to_string()
            }
        })
        .collect();
    format!("[{}]", parts.join(", "))
}
