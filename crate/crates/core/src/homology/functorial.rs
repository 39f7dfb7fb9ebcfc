use super::bar::{bar_complex, BarLevel};
use super::compute::HomologyError;
use crate::complexes::HomologyPresentation;
use crate::groupoid::nerve::nerve_strings;
use crate::groupoid::{ArrId, GroupoidHom};
use crate::linalg::{Coefficients, IntMatrix};
use crate::sheaf::{pullback, GSheaf};
use num_bigint::BigInt;
use std::collections::HashMap;

/// Chain-level pushforward `B_n(K; φ*A) -> B_n(G; A)`: a basis string maps
/// to its image string, summing over fibers implicitly. Every homomorphism
/// of finite discrete groupoids is étale, so this is total.
pub fn pushforward_chain(
    phi: &GroupoidHom,
    a: &GSheaf,
    n: usize,
) -> Result<IntMatrix, HomologyError> {
    let k = &phi.dom;
    let g = &phi.cod;
    let pulled = pullback(phi, a)?;
    let src = BarLevel::new(k, &pulled, n, false);
    let tgt = BarLevel::new(g, a, n, false);
    let mut m = IntMatrix::zero(tgt.total_rank, src.total_rank);
    for (si, s) in src.strings.iter().enumerate() {
        let image: Vec<ArrId> = s.iter().map(|&arr| phi.on_arrow(arr)).collect();
        let ti = if n == 0 {
            phi.on_object(si)
        } else {
            tgt.index_of(&image).expect("image of a string is composable")
        };
        let r = pulled.stalk_rank(src.first_object[si]);
        let (ro, co) = (tgt.offsets[ti], src.offsets[si]);
        for j in 0..r {
            m[(ro + j, co + j)] = BigInt::from(1);
        }
    }
    Ok(m)
}

/// Chain-level pullback `B_n(G; A) -> B_n(K; φ*A)`: a basis string maps to
/// the sum of its preimage strings. Properness is automatic at finite
/// discrete scale.
pub fn pullback_chain(
    phi: &GroupoidHom,
    a: &GSheaf,
    n: usize,
) -> Result<IntMatrix, HomologyError> {
    let k = &phi.dom;
    let g = &phi.cod;
    let pulled = pullback(phi, a)?;
    let src = BarLevel::new(g, a, n, false);
    let tgt = BarLevel::new(k, &pulled, n, false);
    let mut m = IntMatrix::zero(tgt.total_rank, src.total_rank);
    for (ti, t) in tgt.strings.iter().enumerate() {
        let image: Vec<ArrId> = t.iter().map(|&arr| phi.on_arrow(arr)).collect();
        let si = if n == 0 {
            phi.on_object(ti)
        } else {
            src.index_of(&image).expect("image of a string is composable")
        };
        let r = pulled.stalk_rank(tgt.first_object[ti]);
        let (ro, co) = (tgt.offsets[ti], src.offsets[si]);
        for j in 0..r {
            m[(ro + j, co + j)] = BigInt::from(1);
        }
    }
    Ok(m)
}

/// The map induced on homology by the chain-level pushforward, in the
/// canonical bases of both sides.
pub fn pushforward_map(
    phi: &GroupoidHom,
    a: &GSheaf,
    n: usize,
    coeff: Coefficients,
) -> Result<IntMatrix, HomologyError> {
    let pulled = pullback(phi, a)?;
    let src_cx = bar_complex(&phi.dom, &pulled, n + 1)?;
    let tgt_cx = bar_complex(&phi.cod, a, n + 1)?;
    let ps = HomologyPresentation::new(&src_cx.boundary(n as i64 + 1), &src_cx.boundary(n as i64), coeff)?;
    let pt = HomologyPresentation::new(&tgt_cx.boundary(n as i64 + 1), &tgt_cx.boundary(n as i64), coeff)?;
    let f = pushforward_chain(phi, a, n)?;
    HomologyPresentation::induced_map(&ps, &pt, &f).ok_or(HomologyError::NotACycle)
}

/// The map induced on homology by the chain-level pullback.
pub fn pullback_map(
    phi: &GroupoidHom,
    a: &GSheaf,
    n: usize,
    coeff: Coefficients,
) -> Result<IntMatrix, HomologyError> {
    let pulled = pullback(phi, a)?;
    let src_cx = bar_complex(&phi.cod, a, n + 1)?;
    let tgt_cx = bar_complex(&phi.dom, &pulled, n + 1)?;
    let ps = HomologyPresentation::new(&src_cx.boundary(n as i64 + 1), &src_cx.boundary(n as i64), coeff)?;
    let pt = HomologyPresentation::new(&tgt_cx.boundary(n as i64 + 1), &tgt_cx.boundary(n as i64), coeff)?;
    let f = pullback_chain(phi, a, n)?;
    HomologyPresentation::induced_map(&ps, &pt, &f).ok_or(HomologyError::NotACycle)
}

/// A natural transformation `θ: ψ -> φ` between homomorphisms `K -> G`:
/// one arrow `θ(y): ψ(y) -> φ(y)` per object, natural against every arrow.
pub struct Transformation {
    pub theta: Vec<ArrId>,
}

impl Transformation {
    pub fn new(
        phi: &GroupoidHom,
        psi: &GroupoidHom,
        theta: Vec<ArrId>,
    ) -> Result<Self, HomologyError> {
        let k = &phi.dom;
        let g = &phi.cod;
        assert_eq!(theta.len(), k.n_objects());
        for (y, &t) in theta.iter().enumerate() {
            assert!(
                g.source(t) == psi.on_object(y) && g.target(t) == phi.on_object(y),
                "theta({y}) must run psi(y) -> phi(y)"
            );
        }
        for arr in 0..k.n_arrows() {
            let (sy, ty) = (k.source(arr), k.target(arr));
            // φ(k) o θ(s k) = θ(t k) o ψ(k)
            let lhs = g.compose_arrows(phi.on_arrow(arr), theta[sy]);
            let rhs = g.compose_arrows(theta[ty], psi.on_arrow(arr));
            if lhs != rhs {
                return Err(HomologyError::NotNatural { arrow: arr });
            }
        }
        Ok(Transformation { theta })
    }
}

/// Chain homotopy witnessing that a natural transformation identifies the
/// two pushforwards: `delta H + H delta = φ_* − ψ_* θ*` exactly at chain
/// level, where `θ*` moves coefficients along `θ`.
pub struct TransformationHomotopy {
    /// `H_n: B_n(K; φ*A) -> B_{n+1}(G; A)` for `n = 0 ..= n_max`
    pub h: Vec<IntMatrix>,
    pub n_max: usize,
}

pub fn transformation_homotopy(
    phi: &GroupoidHom,
    psi: &GroupoidHom,
    t: &Transformation,
    a: &GSheaf,
    n_max: usize,
) -> Result<TransformationHomotopy, HomologyError> {
    let k = &phi.dom;
    let g = &phi.cod;
    let pulled_phi = pullback(phi, a)?;
    let mut h = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let src = BarLevel::new(k, &pulled_phi, n, false);
        let tgt_strings = nerve_strings(g, n + 1);
        let tgt = BarLevel::new(g, a, n + 1, false);
        let lookup: HashMap<&[ArrId], usize> = tgt_strings
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let mut m = IntMatrix::zero(tgt.total_rank, src.total_rank);
        for (si, s) in src.strings.iter().enumerate() {
            let y0 = src.first_object[si];
            let r = pulled_phi.stalk_rank(y0);
            for i in 0..=n {
                // overall minus sign orients the identity as φ_* − ψ_* θ*
                let sign = if i % 2 == 0 { -1i64 } else { 1i64 };
                let hs = insert_theta(phi, psi, t, s, i, y0);
                let ti = lookup[hs.as_slice()];
                let (ro, co) = (tgt.offsets[ti], src.offsets[si]);
                for j in 0..r {
                    let cur = &m[(ro + j, co + j)] + BigInt::from(sign);
                    m[(ro + j, co + j)] = cur;
                }
            }
        }
        h.push(m);
    }
    Ok(TransformationHomotopy { h, n_max })
}

/// `h_i` of the homotopy: apply `φ` to the first `i` arrows, insert
/// `θ` at the seam, and `ψ` to the rest.
fn insert_theta(
    phi: &GroupoidHom,
    psi: &GroupoidHom,
    t: &Transformation,
    s: &[ArrId],
    i: usize,
    y0: usize,
) -> Vec<ArrId> {
    let k = &phi.dom;
    let n = s.len();
    let mut out = Vec::with_capacity(n + 1);
    if i == 0 {
        out.push(t.theta[y0]);
        for &arr in s {
            out.push(psi.on_arrow(arr));
        }
    } else {
        for &arr in &s[..i] {
            out.push(phi.on_arrow(arr));
        }
        out.push(t.theta[k.source(s[i - 1])]);
        for &arr in &s[i..] {
            out.push(psi.on_arrow(arr));
        }
    }
    out
}

/// The coefficient transport `θ*: B_n(K; φ*A) -> B_n(K; ψ*A)`, acting on
/// the stalk at the first object by the action of `θ` there.
pub fn theta_transport_chain(
    phi: &GroupoidHom,
    psi: &GroupoidHom,
    t: &Transformation,
    a: &GSheaf,
    n: usize,
) -> Result<IntMatrix, HomologyError> {
    let k = &phi.dom;
    let pulled_phi = pullback(phi, a)?;
    let pulled_psi = pullback(psi, a)?;
    let src = BarLevel::new(k, &pulled_phi, n, false);
    let tgt = BarLevel::new(k, &pulled_psi, n, false);
    let mut m = IntMatrix::zero(tgt.total_rank, src.total_rank);
    for (si, _) in src.strings.iter().enumerate() {
        let y0 = src.first_object[si];
        let block = a.action(t.theta[y0]); // A_{φ y0} -> A_{ψ y0}
        let (ro, co) = (tgt.offsets[si], src.offsets[si]);
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                m[(ro + i, co + j)] = block[(i, j)].clone();
            }
        }
    }
    Ok(m)
}

/// Verify `delta H + H delta = φ_* − ψ_* θ*` at chain level in degrees
/// `0 ..= n_max − 1` (the top degree needs the homotopy one level higher).
pub fn verify_homotopy_identity(
    phi: &GroupoidHom,
    psi: &GroupoidHom,
    t: &Transformation,
    a: &GSheaf,
    hth: &TransformationHomotopy,
) -> Result<bool, HomologyError> {
    let k = &phi.dom;
    let g = &phi.cod;
    let pulled_phi = pullback(phi, a)?;
    let coeff = a.coefficients();
    let src_cx = bar_complex(k, &pulled_phi, hth.n_max + 1)?;
    let tgt_cx = bar_complex(g, a, hth.n_max + 1)?;
    for n in 0..=hth.n_max.saturating_sub(1) {
        let lhs = {
            let dh = &tgt_cx.boundary(n as i64 + 1) * &hth.h[n];
            if n == 0 {
                dh
            } else {
                let hd = &hth.h[n - 1] * &src_cx.boundary(n as i64);
                &dh + &hd
            }
        };
        let push_phi = pushforward_chain(phi, a, n)?;
        let push_psi = pushforward_chain(psi, a, n)?;
        let theta_chain = theta_transport_chain(phi, psi, t, a, n)?;
        let rhs = &push_phi - &(&push_psi * &theta_chain);
        let diff = &lhs - &rhs;
        let ok = match coeff {
            Coefficients::PrimeField(p) => diff.mod_p(p).is_zero(),
            _ => diff.is_zero(),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
