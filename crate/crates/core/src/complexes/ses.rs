use super::chain::{
    coeff_kernel, coeff_solve, span_eq, ChainComplex, ComplexError, HomologyPresentation,
};
use super::map::ComplexMap;
use crate::linalg::{smith_normal_form, solve, AbGroupClass, Coefficients, IntMatrix};
use num_bigint::BigInt;
use num_traits::One;

/// A degreewise short exact sequence of chain complexes
/// `0 -> A -> B -> C -> 0`, validated per degree: the injection is injective,
/// its image is exactly the kernel of the surjection, and the surjection is
/// onto (over the coefficient ring, so over `Z` this means a split-free
/// integral surjection in every degree).
#[derive(Clone, Debug)]
pub struct ShortExactSequenceOfComplexes {
    pub inj: ComplexMap,
    pub surj: ComplexMap,
}

impl ShortExactSequenceOfComplexes {
    pub fn new(inj: ComplexMap, surj: ComplexMap) -> Result<Self, ComplexError> {
        let coeff = inj.source.coefficients();
        let b = &inj.target;
        if b.lo() != surj.source.lo() || b.hi() != surj.source.hi() {
            return Err(ComplexError::WindowMismatch);
        }
        for n in b.lo()..=b.hi() {
            if b.rank(n) != surj.source.rank(n) {
                return Err(ComplexError::NotExact(format!(
                    "middle complexes disagree at degree {n}"
                )));
            }
        }
        let (lo, hi) = (b.lo(), b.hi());
        for n in lo..=hi {
            let i_n = inj.matrix(n);
            let p_n = surj.matrix(n);
            // injectivity
            if coeff_kernel(&i_n, coeff).cols() != 0 {
                return Err(ComplexError::NotExact(format!(
                    "injection has a kernel at degree {n}"
                )));
            }
            // surjectivity
            let onto = match coeff {
                Coefficients::Integers => {
                    solve::solve_matrix(&p_n, &IntMatrix::identity(p_n.rows())).is_some()
                }
                _ => super::chain::coeff_rank(&p_n, coeff) == p_n.rows(),
            };
            if !onto {
                return Err(ComplexError::NotExact(format!(
                    "surjection is not onto at degree {n}"
                )));
            }
            // exactness in the middle
            let ker_p = coeff_kernel(&p_n, coeff);
            if !span_eq(&i_n, &ker_p, coeff) {
                return Err(ComplexError::NotExact(format!(
                    "image of injection is not the kernel of surjection at degree {n}"
                )));
            }
        }
        Ok(ShortExactSequenceOfComplexes { inj, surj })
    }

    pub fn a(&self) -> &ChainComplex {
        &self.inj.source
    }
    pub fn b(&self) -> &ChainComplex {
        &self.inj.target
    }
    pub fn c(&self) -> &ChainComplex {
        &self.surj.target
    }

    /// Split sequence `0 -> A -> A + C -> C -> 0` on a common window.
    pub fn split(a: &ChainComplex, c: &ChainComplex) -> Result<Self, ComplexError> {
        assert_eq!(a.lo(), c.lo());
        assert_eq!(a.hi(), c.hi());
        let coeff = a.coefficients();
        let lo = a.lo();
        let len = (a.hi() - lo + 1) as usize;
        let ranks: Vec<usize> = (0..len)
            .map(|i| a.rank(lo + i as i64) + c.rank(lo + i as i64))
            .collect();
        let boundaries: Vec<IntMatrix> = (1..len)
            .map(|i| {
                let n = lo + i as i64;
                a.boundary(n).direct_sum(&c.boundary(n))
            })
            .collect();
        let b = ChainComplex::new(coeff, lo, ranks, boundaries)?;
        let incl: Vec<IntMatrix> = (0..len)
            .map(|i| {
                let n = lo + i as i64;
                let ar = a.rank(n);
                let cr = c.rank(n);
                IntMatrix::identity(ar).vstack(&IntMatrix::zero(cr, ar))
            })
            .collect();
        let proj: Vec<IntMatrix> = (0..len)
            .map(|i| {
                let n = lo + i as i64;
                let ar = a.rank(n);
                let cr = c.rank(n);
                IntMatrix::zero(cr, ar).hstack(&IntMatrix::identity(cr))
            })
            .collect();
        let inj = ComplexMap::new(a.clone(), b.clone(), incl)?;
        let surj = ComplexMap::new(b, c.clone(), proj)?;
        Self::new(inj, surj)
    }
}

/// One degree of a long exact sequence with its three groups, the two
/// induced maps and the connecting map, all in canonical coordinates.
/// `connecting_den` is 1 except over `Q`, where the snake lift can require
/// clearing the finite cokernel of an integral surjection.
pub struct LesDegree {
    pub n: i64,
    pub h_a: AbGroupClass,
    pub h_b: AbGroupClass,
    pub h_c: AbGroupClass,
    pub f_star: IntMatrix,
    pub g_star: IntMatrix,
    /// `H_n(C) -> H_{n-1}(A)`; zero-shaped at the bottom of the window.
    pub connecting_num: IntMatrix,
    pub connecting_den: BigInt,
}

pub struct LongExactSequence {
    pub coeff: Coefficients,
    pub lo: i64,
    pub hi: i64,
    pub degrees: Vec<LesDegree>,
}

impl LongExactSequence {
    pub fn degree(&self, n: i64) -> Option<&LesDegree> {
        self.degrees.iter().find(|d| d.n == n)
    }

    /// All connecting maps vanish (e.g. for split sequences).
    pub fn connecting_all_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.connecting_num.is_zero())
    }
}

struct NodeData {
    pres: HomologyPresentation,
}

impl NodeData {
    /// Relation columns of the canonical coordinates (torsion orders).
    fn relations(&self) -> IntMatrix {
        let class = &self.pres.class;
        let k = self.pres.coords();
        let t = class.torsion.len();
        let mut rel = IntMatrix::zero(k, t);
        // torsion coordinates come first in canonical order
        for (j, d) in class.torsion.iter().enumerate() {
            rel[(j, j)] = d.clone();
        }
        rel
    }
}

/// The long exact homology sequence of a short exact sequence of complexes.
///
/// Connecting maps are realized by the snake construction at chain level.
/// Exactness is machine-verified at every node of the window; a failure
/// reports `NotExact` (it would indicate a malformed input that slipped past
/// validation).
pub fn long_exact_sequence(
    s: &ShortExactSequenceOfComplexes,
) -> Result<LongExactSequence, ComplexError> {
    let coeff = s.a().coefficients();
    let (lo, hi) = (s.a().lo(), s.a().hi());

    let mut nodes_a = Vec::new();
    let mut nodes_b = Vec::new();
    let mut nodes_c = Vec::new();
    for n in lo..=hi {
        nodes_a.push(NodeData {
            pres: HomologyPresentation::new(&s.a().boundary(n + 1), &s.a().boundary(n), coeff)?,
        });
        nodes_b.push(NodeData {
            pres: HomologyPresentation::new(&s.b().boundary(n + 1), &s.b().boundary(n), coeff)?,
        });
        nodes_c.push(NodeData {
            pres: HomologyPresentation::new(&s.c().boundary(n + 1), &s.c().boundary(n), coeff)?,
        });
    }
    let idx = |n: i64| (n - lo) as usize;

    let mut degrees = Vec::new();
    for n in lo..=hi {
        let pa = &nodes_a[idx(n)].pres;
        let pb = &nodes_b[idx(n)].pres;
        let pc = &nodes_c[idx(n)].pres;
        let f_star = HomologyPresentation::induced_map(pa, pb, &s.inj.matrix(n))
            .ok_or_else(|| ComplexError::NotExact(format!("induced map failed at {n}")))?;
        let g_star = HomologyPresentation::induced_map(pb, pc, &s.surj.matrix(n))
            .ok_or_else(|| ComplexError::NotExact(format!("induced map failed at {n}")))?;

        let (connecting_num, connecting_den) = if n > lo {
            connecting_map(s, n, pc, &nodes_a[idx(n - 1)].pres, coeff)?
        } else {
            (IntMatrix::zero(0, pc.coords()), BigInt::one())
        };

        degrees.push(LesDegree {
            n,
            h_a: pa.class.clone(),
            h_b: pb.class.clone(),
            h_c: pc.class.clone(),
            f_star,
            g_star,
            connecting_num,
            connecting_den,
        });
    }

    let les = LongExactSequence {
        coeff,
        lo,
        hi,
        degrees,
    };
    verify_exactness(&les, &nodes_a, &nodes_b, &nodes_c)?;
    Ok(les)
}

/// Snake construction for the connecting map `H_n(C) -> H_{n-1}(A)`:
/// lift each generator cycle through the surjection, push it through the
/// boundary of `B`, and pull the result back along the injection.
fn connecting_map(
    s: &ShortExactSequenceOfComplexes,
    n: i64,
    pc: &HomologyPresentation,
    pa_prev: &HomologyPresentation,
    coeff: Coefficients,
) -> Result<(IntMatrix, BigInt), ComplexError> {
    let p_n = s.surj.matrix(n);
    let i_prev = s.inj.matrix(n - 1);
    let d_b = s.b().boundary(n);
    let gens = pc.generator_cycles();

    // Over Q an integral lift may require clearing the finite cokernel of
    // the integral matrix of the surjection.
    let scale = if coeff == Coefficients::Rationals {
        let snf = smith_normal_form(&p_n);
        snf.invariant_factors()
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    } else {
        BigInt::one()
    };

    let mut out = IntMatrix::zero(pa_prev.coords(), pc.coords());
    for j in 0..gens.cols() {
        let z: Vec<BigInt> = gens.col(j).iter().map(|x| x * &scale).collect();
        let b = match coeff {
            Coefficients::Rationals => solve::solve(&p_n, &z),
            _ => coeff_solve(&p_n, &z, coeff),
        }
        .ok_or_else(|| ComplexError::NotExact(format!("cycle does not lift at degree {n}")))?;
        let db = d_b.mul_vec(&b);
        let a = match coeff {
            Coefficients::Rationals => solve::solve(&i_prev, &db),
            _ => coeff_solve(&i_prev, &db, coeff),
        }
        .ok_or_else(|| {
            ComplexError::NotExact(format!("boundary of lift not in the subcomplex at {n}"))
        })?;
        let coords = pa_prev
            .class_of(&a)
            .ok_or_else(|| ComplexError::NotExact(format!("snake output not a cycle at {n}")))?;
        out.set_col(j, &coords);
    }
    Ok((out, scale))
}

/// Verify `image = kernel` at every node of the long exact sequence, working
/// inside each presented group: a subgroup is compared through its generator
/// columns together with the torsion relations (subgroup comparison over `Z`
/// via integer solvability, rank arithmetic over fields).
fn verify_exactness(
    les: &LongExactSequence,
    nodes_a: &[NodeData],
    nodes_b: &[NodeData],
    nodes_c: &[NodeData],
) -> Result<(), ComplexError> {
    let coeff = les.coeff;
    let idx = |n: i64| (n - les.lo) as usize;

    // kernel of a coordinate-level map into a presented group
    let map_kernel = |m: &IntMatrix, tgt_rel: &IntMatrix| -> IntMatrix {
        if m.rows() == 0 {
            return IntMatrix::identity(m.cols());
        }
        let sys = m.hstack(&(-tgt_rel));
        let k = coeff_kernel(&sys, coeff);
        let top: Vec<usize> = (0..m.cols()).collect();
        let sel = IntMatrix::from_fn(m.cols(), k.cols(), |i, j| k[(top[i], j)].clone());
        sel
    };

    for d in &les.degrees {
        let n = d.n;
        let ra = nodes_a[idx(n)].relations();
        let rb = nodes_b[idx(n)].relations();
        let rc = nodes_c[idx(n)].relations();

        // node H_n(B): im f* = ker g*
        let im_f = d.f_star.hstack(&rb);
        let ker_g = map_kernel(&d.g_star, &rc).hstack(&rb);
        if !span_eq(&im_f, &ker_g, coeff) {
            return Err(ComplexError::NotExact(format!(
                "sequence not exact at H_{n}(B)"
            )));
        }

        // node H_n(C): im g* = ker connecting
        let im_g = d.g_star.hstack(&rc);
        let ker_d = map_kernel(&d.connecting_num, &nodes_a[idx((n - 1).max(les.lo))].relations())
            .hstack(&rc);
        // at the bottom degree the connecting map is zero-shaped; its kernel
        // computation above degenerates correctly
        if !span_eq(&im_g, &ker_d, coeff) {
            return Err(ComplexError::NotExact(format!(
                "sequence not exact at H_{n}(C)"
            )));
        }

        // node H_{n-1}(A): im connecting = ker f*_{n-1}
        if n > les.lo {
            let prev = les.degree(n - 1).unwrap();
            let ra_prev = nodes_a[idx(n - 1)].relations();
            let im_d = d.connecting_num.hstack(&ra_prev);
            let ker_f = map_kernel(&prev.f_star, &rb_of(nodes_b, idx(n - 1))).hstack(&ra_prev);
            if !span_eq(&im_d, &ker_f, coeff) {
                return Err(ComplexError::NotExact(format!(
                    "sequence not exact at H_{}(A)",
                    n - 1
                )));
            }
        }

        // node H_hi(A): there are no chains above the window, so the
        // connecting map into the top A-node is zero and f* is injective
        if n == les.hi {
            let ker_f = map_kernel(&d.f_star, &rb).hstack(&ra);
            if !span_eq(&ra, &ker_f, coeff) {
                return Err(ComplexError::NotExact(format!(
                    "sequence not exact at H_{n}(A)"
                )));
            }
        }
    }
    Ok(())
}

fn rb_of(nodes_b: &[NodeData], i: usize) -> IntMatrix {
    nodes_b[i].relations()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_sequence_has_zero_connecting_maps() {
        let a = ChainComplex::new(
            Coefficients::Integers,
            0,
            vec![1, 1],
            vec![IntMatrix::from_rows(&[vec![2]])],
        )
        .unwrap();
        let c = ChainComplex::new(
            Coefficients::Integers,
            0,
            vec![2, 1],
            vec![IntMatrix::from_rows(&[vec![0], vec![3]])],
        )
        .unwrap();
        let ses = ShortExactSequenceOfComplexes::split(&a, &c).unwrap();
        let les = long_exact_sequence(&ses).unwrap();
        assert!(les.connecting_all_zero());
        let d0 = les.degree(0).unwrap();
        // Z/2 + Z/3 in invariant-factor form is Z/6
        assert_eq!(d0.h_b, AbGroupClass::from_parts(1, vec![BigInt::from(6)]));
    }

    #[test]
    fn snake_produces_multiplication_by_two() {
        // A = [Z in degree 0], B = [Z -2-> Z], C = [Z in degree 1].
        // The long sequence forces the connecting map H_1(C) -> H_0(A) to be
        // +-2, with cokernel Z/2 = H_0(B).
        let a = ChainComplex::new(
            Coefficients::Integers,
            0,
            vec![1, 0],
            vec![IntMatrix::zero(1, 0)],
        )
        .unwrap();
        let b = ChainComplex::new(
            Coefficients::Integers,
            0,
            vec![1, 1],
            vec![IntMatrix::from_rows(&[vec![2]])],
        )
        .unwrap();
        let c = ChainComplex::new(
            Coefficients::Integers,
            0,
            vec![0, 1],
            vec![IntMatrix::zero(0, 1)],
        )
        .unwrap();
        let inj = ComplexMap::new(
            a.clone(),
            b.clone(),
            vec![IntMatrix::identity(1), IntMatrix::zero(1, 0)],
        )
        .unwrap();
        let surj = ComplexMap::new(
            b,
            c,
            vec![IntMatrix::zero(0, 1), IntMatrix::identity(1)],
        )
        .unwrap();
        let ses = ShortExactSequenceOfComplexes::new(inj, surj).unwrap();
        let les = long_exact_sequence(&ses).unwrap();
        let d1 = les.degree(1).unwrap();
        assert_eq!(d1.h_c, AbGroupClass::free(1));
        assert_eq!(d1.connecting_num.rows(), 1);
        assert_eq!(
            num_traits::Signed::abs(&d1.connecting_num[(0, 0)]),
            BigInt::from(2)
        );
        let d0 = les.degree(0).unwrap();
        assert_eq!(d0.h_b, AbGroupClass::from_parts(0, vec![BigInt::from(2)]));
    }

    #[test]
    fn acyclic_quotient_gives_isomorphisms() {
        // C acyclic => H(A) = H(B)
        let a = ChainComplex::new(
            Coefficients::PrimeField(2),
            0,
            vec![1, 1],
            vec![IntMatrix::zero(1, 1)],
        )
        .unwrap();
        let c = ChainComplex::new(
            Coefficients::PrimeField(2),
            0,
            vec![1, 1],
            vec![IntMatrix::identity(1)],
        )
        .unwrap();
        let ses = ShortExactSequenceOfComplexes::split(&a, &c).unwrap();
        let les = long_exact_sequence(&ses).unwrap();
        for n in 0..=1 {
            let d = les.degree(n).unwrap();
            assert_eq!(d.h_a, d.h_b);
        }
    }
}
