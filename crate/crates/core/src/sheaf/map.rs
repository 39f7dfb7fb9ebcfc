use super::gsheaf::{GSheaf, SheafError};
use crate::complexes::{coeff_kernel, coeff_rank, span_eq};
use crate::groupoid::ObjId;
use crate::linalg::{solve, Coefficients, IntMatrix};

/// A map of sheaves over the same base: one matrix per object, commuting
/// with the arrow actions.
#[derive(Debug, Clone)]
pub struct SheafMap {
    pub source: GSheaf,
    pub target: GSheaf,
    mats: Vec<IntMatrix>,
}

impl SheafMap {
    pub fn new(source: GSheaf, target: GSheaf, mats: Vec<IntMatrix>) -> Result<Self, SheafError> {
        if !source.same_data(&target) {
            return Err(SheafError::BaseMismatch);
        }
        if source.coefficients() != target.coefficients() {
            return Err(SheafError::CoeffMismatch);
        }
        let base = source.base().clone();
        assert_eq!(mats.len(), base.n_objects());
        for x in 0..base.n_objects() {
            if mats[x].rows() != target.stalk_rank(x) || mats[x].cols() != source.stalk_rank(x) {
                return Err(SheafError::MapShape { object: x });
            }
        }
        for g in 0..base.n_arrows() {
            let (x, y) = (base.source(g), base.target(g));
            // f_x o act_A(g) = act_B(g) o f_y
            let lhs = &mats[x] * source.action(g);
            let rhs = target.action(g) * &mats[y];
            if !source.mats_equal(&lhs, &rhs) {
                return Err(SheafError::NotEquivariant { arrow: g });
            }
        }
        Ok(SheafMap {
            source,
            target,
            mats,
        })
    }

    pub fn identity(s: &GSheaf) -> Self {
        let mats = (0..s.base().n_objects())
            .map(|x| IntMatrix::identity(s.stalk_rank(x)))
            .collect();
        SheafMap {
            source: s.clone(),
            target: s.clone(),
            mats,
        }
    }

    pub fn zero(source: &GSheaf, target: &GSheaf) -> Self {
        let mats = (0..source.base().n_objects())
            .map(|x| IntMatrix::zero(target.stalk_rank(x), source.stalk_rank(x)))
            .collect();
        SheafMap {
            source: source.clone(),
            target: target.clone(),
            mats,
        }
    }

    pub fn at(&self, x: ObjId) -> &IntMatrix {
        &self.mats[x]
    }

    pub fn compose(&self, earlier: &SheafMap) -> Result<SheafMap, SheafError> {
        if !earlier.target.equal_sheaf(&self.source) {
            return Err(SheafError::BaseMismatch);
        }
        let mats = (0..self.mats.len())
            .map(|x| &self.mats[x] * earlier.at(x))
            .collect();
        SheafMap::new(earlier.source.clone(), self.target.clone(), mats)
    }

    pub fn is_zero(&self) -> bool {
        let coeff = self.source.coefficients();
        self.mats.iter().all(|m| match coeff {
            Coefficients::PrimeField(p) => m.mod_p(p).is_zero(),
            _ => m.is_zero(),
        })
    }

    /// Dimension over `F_p` of the space of equivariant maps `A -> B`,
    /// computed as the kernel of the linearized equivariance constraints.
    pub fn hom_space_dim_fp(a: &GSheaf, b: &GSheaf, p: u64) -> usize {
        assert!(a.same_data(b));
        let base = a.base().clone();
        // unknowns: entries of all per-object matrices
        let offsets: Vec<usize> = {
            let mut off = vec![0usize];
            for x in 0..base.n_objects() {
                let d = b.stalk_rank(x) * a.stalk_rank(x);
                off.push(off.last().unwrap() + d);
            }
            off
        };
        let unknowns = *offsets.last().unwrap();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for g in 0..base.n_arrows() {
            let (x, y) = (base.source(g), base.target(g));
            // f_x act_A(g) - act_B(g) f_y = 0, entry (i, j)
            for i in 0..b.stalk_rank(x) {
                for j in 0..a.stalk_rank(y) {
                    let mut row = vec![0i64; unknowns];
                    // sum_k f_x[i,k] actA[k,j]
                    for k in 0..a.stalk_rank(x) {
                        let c = i64::try_from(&a.action(g)[(k, j)]).unwrap();
                        row[offsets[x] + i * a.stalk_rank(x) + k] += c;
                    }
                    // - sum_k actB[i,k] f_y[k,j]
                    for k in 0..b.stalk_rank(y) {
                        let c = i64::try_from(&b.action(g)[(i, k)]).unwrap();
                        row[offsets[y] + k * a.stalk_rank(y) + j] -= c;
                    }
                    rows.push(row);
                }
            }
        }
        let m = IntMatrix::from_rows(&rows.iter().map(|r| r.clone()).collect::<Vec<_>>());
        if m.rows() == 0 {
            return unknowns;
        }
        unknowns - coeff_rank(&m, Coefficients::PrimeField(p))
    }
}

/// Short exact sequence of sheaves with free terms, validated stalkwise.
#[derive(Debug, Clone)]
pub struct SheafSES {
    pub inj: SheafMap,
    pub surj: SheafMap,
}

impl SheafSES {
    pub fn new(inj: SheafMap, surj: SheafMap) -> Result<Self, SheafError> {
        if !inj.target.equal_sheaf(&surj.source) {
            return Err(SheafError::BaseMismatch);
        }
        let coeff = inj.source.coefficients();
        let base = inj.source.base().clone();
        for x in 0..base.n_objects() {
            let i = inj.at(x);
            let p = surj.at(x);
            if coeff_kernel(i, coeff).cols() != 0 {
                return Err(SheafError::NotExactAtObject {
                    object: x,
                    reason: "injection has a kernel".into(),
                });
            }
            let onto = match coeff {
                Coefficients::Integers => {
                    solve::solve_matrix(p, &IntMatrix::identity(p.rows())).is_some()
                }
                _ => coeff_rank(p, coeff) == p.rows(),
            };
            if !onto {
                return Err(SheafError::NotExactAtObject {
                    object: x,
                    reason: "surjection is not onto".into(),
                });
            }
            if !span_eq(i, &coeff_kernel(p, coeff), coeff) {
                return Err(SheafError::NotExactAtObject {
                    object: x,
                    reason: "image of injection differs from kernel of surjection".into(),
                });
            }
        }
        Ok(SheafSES { inj, surj })
    }

    pub fn sub(&self) -> &GSheaf {
        &self.inj.source
    }
    pub fn mid(&self) -> &GSheaf {
        &self.inj.target
    }
    pub fn quot(&self) -> &GSheaf {
        &self.surj.target
    }
}

/// A sheaf presented as the cokernel of an equivariant map between free
/// sheaves. This is how torsion coefficients (for example the constant
/// sheaf `Z/d`) enter a free-carrier engine: homology with presented
/// coefficients is computed from the two-term complex `relations -> carrier`.
#[derive(Debug, Clone)]
pub struct PresentedGSheaf {
    pub relations: SheafMap,
}

impl PresentedGSheaf {
    pub fn new(relations: SheafMap) -> Self {
        PresentedGSheaf { relations }
    }

    pub fn carrier(&self) -> &GSheaf {
        &self.relations.target
    }

    /// A free sheaf viewed as presented (no relations).
    pub fn from_free(s: &GSheaf) -> Self {
        let zero = GSheaf::zero(s.base().clone(), s.coefficients());
        PresentedGSheaf {
            relations: SheafMap::zero(&zero, s),
        }
    }

    /// Constant `Z/d` on the base (carrier of rank 1, relation `d`).
    pub fn constant_mod(base: std::sync::Arc<crate::groupoid::FiniteGroupoid>, d: i64) -> Self {
        let coeff = Coefficients::Integers;
        let carrier = GSheaf::constant(base.clone(), coeff, 1);
        let rels = GSheaf::constant(base.clone(), coeff, 1);
        let mats = (0..base.n_objects())
            .map(|_| IntMatrix::from_rows(&[vec![d]]))
            .collect();
        PresentedGSheaf {
            relations: SheafMap::new(rels, carrier, mats).expect("scalar maps are equivariant"),
        }
    }

    pub fn structurally_equal(&self, other: &PresentedGSheaf) -> bool {
        self.carrier().equal_sheaf(other.carrier())
            && self
                .relations
                .source
                .equal_sheaf(&other.relations.source)
            && (0..self.carrier().base().n_objects())
                .all(|x| self.relations.at(x) == other.relations.at(x))
    }
}

/// Short exact sequence `0 -> A -> E -> B -> 0` whose quotient may carry a
/// presentation: `surj` maps onto the carrier of `B`, and exactness means
/// `[surj | relations]` is stalkwise onto while the preimage of the relation
/// lattice is exactly the image of `inj`.
#[derive(Debug, Clone)]
pub struct PresentedSES {
    pub inj: SheafMap,
    pub surj: SheafMap,
    pub quot: PresentedGSheaf,
}

impl PresentedSES {
    pub fn new(inj: SheafMap, surj: SheafMap, quot: PresentedGSheaf) -> Result<Self, SheafError> {
        if !inj.target.equal_sheaf(&surj.source) || !surj.target.equal_sheaf(quot.carrier()) {
            return Err(SheafError::BaseMismatch);
        }
        let coeff = inj.source.coefficients();
        let base = inj.source.base().clone();
        for x in 0..base.n_objects() {
            let i = inj.at(x);
            let p = surj.at(x);
            let rel = quot.relations.at(x);
            if coeff_kernel(i, coeff).cols() != 0 {
                return Err(SheafError::NotExactAtObject {
                    object: x,
                    reason: "injection has a kernel".into(),
                });
            }
            // [p | rel] onto the carrier
            let sys = p.hstack(rel);
            let onto = match coeff {
                Coefficients::Integers => {
                    solve::solve_matrix(&sys, &IntMatrix::identity(sys.rows())).is_some()
                }
                _ => coeff_rank(&sys, coeff) == sys.rows(),
            };
            if !onto {
                return Err(SheafError::NotExactAtObject {
                    object: x,
                    reason: "composite surjection misses the quotient".into(),
                });
            }
            // preimage of the relation lattice equals the image of inj
            let pre = preimage_of_span(p, rel, coeff);
            if !span_eq(i, &pre, coeff) {
                return Err(SheafError::NotExactAtObject {
                    object: x,
                    reason: "kernel of the quotient map differs from the subsheaf".into(),
                });
            }
        }
        Ok(PresentedSES { inj, surj, quot })
    }

    /// Plain free SES viewed as presented.
    pub fn from_free(ses: &SheafSES) -> Self {
        PresentedSES {
            inj: ses.inj.clone(),
            surj: ses.surj.clone(),
            quot: PresentedGSheaf::from_free(ses.quot()),
        }
    }
}

/// Generators of `{x : m x in span(cols of s)}`.
pub fn preimage_of_span(m: &IntMatrix, s: &IntMatrix, coeff: Coefficients) -> IntMatrix {
    let sys = m.hstack(&(-s));
    let k = coeff_kernel(&sys, coeff);
    IntMatrix::from_fn(m.cols(), k.cols(), |i, j| k[(i, j)].clone())
}

/// Yoneda extension of length `p` from `B` to `A`, stored as its splice into
/// short exact sequences `0 -> K_i -> E_i -> K_{i-1} -> 0` with `K_0 = B`
/// (possibly presented) and `K_p = A` free.
#[derive(Debug, Clone)]
pub struct ExtensionClass {
    pub segments: Vec<PresentedSES>,
}

impl ExtensionClass {
    pub fn new(segments: Vec<PresentedSES>) -> Result<Self, SheafError> {
        assert!(!segments.is_empty());
        for i in 0..segments.len() - 1 {
            // sub of segment i must be the (free) quotient of segment i+1
            let k_i = &segments[i].inj.source;
            let next_quot = &segments[i + 1].quot;
            if !next_quot.relations.source.stalk_ranks().iter().all(|&r| r == 0) {
                return Err(SheafError::MalformedExtension { position: i + 1 });
            }
            if !next_quot.carrier().equal_sheaf(k_i) {
                return Err(SheafError::MalformedExtension { position: i + 1 });
            }
        }
        Ok(ExtensionClass { segments })
    }

    pub fn length(&self) -> usize {
        self.segments.len()
    }

    /// The target sheaf `A` (sub of the last segment).
    pub fn inner(&self) -> &GSheaf {
        &self.segments.last().unwrap().inj.source
    }

    /// The source coefficients `B` (quotient of the first segment).
    pub fn outer(&self) -> &PresentedGSheaf {
        &self.segments[0].quot
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::cyclic;

    #[test]
    fn scalar_ses_on_a_group() {
        let g = cyclic(2).into_arc();
        let a = GSheaf::constant(g.clone(), Coefficients::Integers, 1);
        let e = GSheaf::constant(g.clone(), Coefficients::Integers, 1);
        let quot = PresentedGSheaf::constant_mod(g.clone(), 2);
        let inj = SheafMap::new(a.clone(), e.clone(), vec![IntMatrix::from_rows(&[vec![2]])])
            .unwrap();
        let surj = SheafMap::new(e, quot.carrier().clone(), vec![IntMatrix::identity(1)]).unwrap();
        let ses = PresentedSES::new(inj, surj, quot).unwrap();
        assert_eq!(ses.inj.source.total_rank(), 1);
    }

    #[test]
    fn hom_space_dimension_counts_invariants() {
        // maps F2 -> F2 on Z/2 with trivial actions: all scalars, dim 1
        let g = cyclic(2).into_arc();
        let a = GSheaf::constant(g.clone(), Coefficients::PrimeField(2), 1);
        assert_eq!(SheafMap::hom_space_dim_fp(&a, &a, 2), 1);
    }

    #[test]
    fn equivariance_is_enforced() {
        let g = cyclic(2).into_arc();
        // sign representation over Q
        let sign = GSheaf::new(
            g.clone(),
            Coefficients::Rationals,
            vec![1],
            vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])],
        )
        .unwrap();
        let triv = GSheaf::constant(g, Coefficients::Rationals, 1);
        let bad = SheafMap::new(sign, triv, vec![IntMatrix::identity(1)]);
        assert!(matches!(bad, Err(SheafError::NotEquivariant { .. })));
    }
}
