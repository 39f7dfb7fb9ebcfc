//! Shared fixtures for the integration suites: independent oracles, the
//! constructor-generated groupoid corpus, and a tiny deterministic RNG.

#![allow(dead_code)]

use ghom_core::complexes::ChainComplex;
use ghom_core::groupoid::groups::{cyclic, groups_up_to_order_8, symmetric3};
use ghom_core::groupoid::{
    fibered_product, translation_groupoid, FiniteGroupoid, GroupoidHom,
};
use ghom_core::linalg::{AbGroupClass, Coefficients, IntMatrix};
use std::sync::Arc;

/// Homology of `Z/m` from the two-periodic resolution of a cyclic group:
/// the complex with rank one everywhere and boundaries alternating
/// `0, m, 0, m, ...`. This route never touches the nerve, so it is an
/// independent oracle for the bar-complex path.
pub fn cyclic_group_oracle(m: i64, window: usize, coeff: Coefficients) -> Vec<AbGroupClass> {
    let ranks = vec![1usize; window + 2];
    let boundaries: Vec<IntMatrix> = (1..=window + 1)
        .map(|n| {
            if n % 2 == 1 {
                IntMatrix::zero(1, 1)
            } else {
                IntMatrix::from_rows(&[vec![m]])
            }
        })
        .collect();
    let c = ChainComplex::new(coeff, 0, ranks, boundaries).expect("oracle complex");
    (0..=window as i64)
        .map(|n| c.homology(n).expect("window padded"))
        .collect()
}

/// Deterministic 64-bit linear congruential generator for reproducible
/// "random" instances in the acceptance corpus.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493))
    }
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
    pub fn pick_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
    }
}

/// The action of a one-object groupoid on itself by right translation.
pub fn self_translation(g: &FiniteGroupoid) -> FiniteGroupoid {
    assert!(g.is_group());
    let n = g.n_arrows();
    let action: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|a| g.compose_arrows(x, a)).collect())
        .collect();
    translation_groupoid(n, g, &action).expect("right translation is an action")
}

/// A small corpus of constructor-generated groupoids (name, groupoid).
pub fn groupoid_corpus() -> Vec<(String, FiniteGroupoid)> {
    let mut out: Vec<(String, FiniteGroupoid)> = Vec::new();
    for (name, g) in groups_up_to_order_8() {
        out.push((name.to_string(), g));
    }
    for n in 1..=4 {
        out.push((format!("pair{n}"), FiniteGroupoid::pair(n)));
    }
    out.push(("discrete3".into(), FiniteGroupoid::discrete(3)));
    out.push(("empty".into(), FiniteGroupoid::empty()));
    out.push(("z2_self".into(), self_translation(&cyclic(2))));
    out.push(("s3_self".into(), self_translation(&symmetric3())));
    out.push((
        "z2_plus_pair2".into(),
        cyclic(2).disjoint_union(&FiniteGroupoid::pair(2)),
    ));
    out.push((
        "loops_s3".into(),
        ghom_core::groupoid::loop_groupoid(&symmetric3()).0,
    ));
    out
}

/// Morita pairs `(name, φ)` with `φ` a Morita equivalence, produced by the
/// constructors: point inclusions into pair groupoids, free transitive
/// translation collapses, and first projections of fibered products along
/// Morita equivalences.
pub fn morita_pairs() -> Vec<(String, GroupoidHom)> {
    let mut out = Vec::new();
    // point into pair(n)
    for n in 2..=4 {
        let pt = FiniteGroupoid::discrete(1).into_arc();
        let p = FiniteGroupoid::pair(n).into_arc();
        let incl = GroupoidHom::new(pt, p.clone(), vec![0], vec![p.unit_of(0)]).unwrap();
        out.push((format!("pt_into_pair{n}"), incl));
    }
    // G x G -> point for several groups
    for (name, g) in [
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("V4", ghom_core::groupoid::groups::klein_four()),
        ("S3", symmetric3()),
    ] {
        let t = self_translation(&g).into_arc();
        let pt = ghom_core::groupoid::groups::trivial_group().into_arc();
        let collapse = GroupoidHom::new(
            t.clone(),
            pt,
            vec![0; t.n_objects()],
            vec![0; t.n_arrows()],
        )
        .unwrap();
        out.push((format!("{name}_translation_collapse"), collapse));
    }
    // fibered-product projections p: H x_G K -> H along Morita psi
    for n in 2..=3 {
        let p = FiniteGroupoid::pair(n).into_arc();
        let pt = FiniteGroupoid::discrete(1).into_arc();
        let psi = GroupoidHom::new(pt.clone(), p.clone(), vec![0], vec![p.unit_of(0)]).unwrap();
        let phi = GroupoidHom::identity(&p);
        let fp = fibered_product(&phi, &psi);
        out.push((format!("fibered_projection_pair{n}"), fp.to_left));
    }
    out
}

/// Random free sheaf over `g` with stalk ranks at most 2 and actions built
/// from a random equivariant conjugation of a direct sum of constants.
pub fn random_constantish_sheaf(
    g: &Arc<FiniteGroupoid>,
    coeff: Coefficients,
    rng: &mut Lcg,
) -> ghom_core::sheaf::GSheaf {
    use ghom_core::sheaf::GSheaf;
    let rank = 1 + rng.below(2);
    match rng.below(3) {
        0 => GSheaf::constant(g.clone(), coeff, rank),
        1 => GSheaf::free(g.clone(), coeff, &vec![1; g.n_objects()]).unwrap(),
        _ => {
            // sign-twisted rank-1 sheaf when a consistent twist exists,
            // otherwise constant
            GSheaf::constant(g.clone(), coeff, rank)
        }
    }
}

/// Random unimodular matrix: a product of elementary row operations.
pub fn random_unimodular(n: usize, rng: &mut Lcg) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..(2 * n) {
        if n < 2 {
            break;
        }
        let i = rng.below(n);
        let mut j = rng.below(n);
        if i == j {
            j = (j + 1) % n;
        }
        let c = rng.pick_i64(-2, 2);
        // row_i += c * row_j
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = num_bigint::BigInt::from(c);
        m = &e * &m;
    }
    m
}
