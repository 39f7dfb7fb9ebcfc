use super::algebra::{CyclicError, FinDimAlgebra};
use crate::groupoid::{ArrId, FiniteGroupoid};
use crate::linalg::sparse::SparseMat;
use crate::linalg::Coefficients;
use num_traits::Zero;

/// One level of a cyclic module: faces `d_0..d_n`, degeneracies `s_0..s_n`
/// and the cyclic permutation `t_n` (sign-free; signs enter through
/// `(-1)^n t_n` in the mixed complex).
pub struct CyclicLevel {
    pub dim: usize,
    pub faces: Vec<SparseMat>,
    pub degeneracies: Vec<SparseMat>,
    pub t: SparseMat,
}

/// A cyclic module on a bounded window of levels, with the relations of
/// Connes' cyclic category machine-checked on construction.
pub struct CyclicModule {
    pub coeff: Coefficients,
    pub levels: Vec<CyclicLevel>,
}

impl CyclicModule {
    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, |l| l.dim)
    }

    /// Verify the simplicial and cyclic relations on every constructed
    /// level (degeneracy relations need the level above to exist).
    pub fn validate(&self) -> Result<(), CyclicError> {
        let p = self.coeff.characteristic();
        let err = |msg: String| Err(CyclicError::RelationViolation(msg));
        for n in 0..=self.n_max() {
            let lvl = &self.levels[n];
            assert_eq!(lvl.faces.len(), if n == 0 { 0 } else { n + 1 });
            // t_n^{n+1} = id
            let mut tk = SparseMat::identity(lvl.dim);
            for _ in 0..=n {
                tk = lvl.t.mul(&tk);
            }
            if !tk.eq_mod(&SparseMat::identity(lvl.dim), p) {
                return err(format!("t^{}+1 != id at level {n}", n));
            }
            if n >= 2 {
                let below = &self.levels[n - 1];
                // d_i d_j = d_{j-1} d_i for i < j
                for j in 1..=n {
                    for i in 0..j {
                        let a = below.faces[i].mul(&lvl.faces[j]);
                        let b = below.faces[j - 1].mul(&lvl.faces[i]);
                        if !a.eq_mod(&b, p) {
                            return err(format!("d_{i} d_{j} at level {n}"));
                        }
                    }
                }
            }
            if n >= 1 {
                // cyclic compatibilities: d_i t = t d_{i-1} (1 <= i <= n), d_0 t = d_n
                let below = &self.levels[n - 1];
                for i in 1..=n {
                    let a = lvl.faces[i].mul(&lvl.t);
                    let b = below.t.mul(&lvl.faces[i - 1]);
                    if !a.eq_mod(&b, p) {
                        return err(format!("d_{i} t at level {n}"));
                    }
                }
                let a = lvl.faces[0].mul(&lvl.t);
                if !a.eq_mod(&lvl.faces[n], p) {
                    return err(format!("d_0 t at level {n}"));
                }
            }
            if n + 1 <= self.n_max() {
                let above = &self.levels[n + 1];
                assert_eq!(lvl.degeneracies.len(), n + 1);
                // d_i s_j: s_{j-1} d_i below, identity on, s_j d_{i-1} above
                for j in 0..=n {
                    for i in 0..=n + 1 {
                        let lhs = above.faces[i].mul(&lvl.degeneracies[j]);
                        let rhs = if i + 1 <= j {
                            self.levels[n - 1].degeneracies[j - 1].mul(&lvl.faces[i])
                        } else if i == j || i == j + 1 {
                            SparseMat::identity(lvl.dim)
                        } else {
                            self.levels[n - 1].degeneracies[j].mul(&lvl.faces[i - 1])
                        };
                        if !lhs.eq_mod(&rhs, p) {
                            return err(format!("d_{i} s_{j} at level {n}"));
                        }
                    }
                }
                // s_i t = t s_{i-1} (1 <= i <= n), s_0 t = t^2 s_n
                for i in 1..=n {
                    let a = lvl.degeneracies[i].mul(&lvl.t);
                    let b = above.t.mul(&lvl.degeneracies[i - 1]);
                    if !a.eq_mod(&b, p) {
                        return err(format!("s_{i} t at level {n}"));
                    }
                }
                let a = lvl.degeneracies[0].mul(&lvl.t);
                let b = above.t.mul(&above.t).mul(&lvl.degeneracies[n]);
                if !a.eq_mod(&b, p) {
                    return err(format!("s_0 t at level {n}"));
                }
            }
        }
        Ok(())
    }
}

/// The standard cyclic module of a unital algebra: level `n` is the
/// `(n+1)`-fold tensor power on the basis-tuple basis, faces multiply
/// adjacent entries (the last wraps), degeneracies insert the unit, and the
/// cyclic operator rotates.
pub fn cyclic_module_of_algebra(a: &FinDimAlgebra, n_max: usize) -> CyclicModule {
    let d = a.dim();
    let dims: Vec<usize> = (0..=n_max).map(|n| d.pow(n as u32 + 1)).collect();
    let index = |tuple: &[usize]| -> usize {
        tuple.iter().fold(0, |acc, &i| acc * d + i)
    };
    let tuples = |n: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(dims[n]);
        let mut cur = vec![0usize; n + 1];
        loop {
            out.push(cur.clone());
            let mut k = n + 1;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < d {
                    break;
                }
                cur[k] = 0;
            }
        }
    };

    let mut levels = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let basis = tuples(n);
        let mut faces = Vec::new();
        if n >= 1 {
            for face in 0..=n {
                let mut m = SparseMat::new(dims[n - 1], dims[n]);
                for (ci, tup) in basis.iter().enumerate() {
                    // multiply slots (face, face+1), or wrap (n, 0) into slot 0
                    let (x, y, slot, rest) = if face < n {
                        let mut rest = tup.clone();
                        let y = rest.remove(face + 1);
                        let x = rest[face];
                        (x, y, face, rest)
                    } else {
                        let rest: Vec<usize> = tup[..n].to_vec();
                        (tup[n], rest[0], 0usize, rest)
                    };
                    for (k, c) in a.basis_product(x, y) {
                        let mut target = rest.clone();
                        target[slot] = *k;
                        let v = i64::try_from(c).expect("structure constant fits i64");
                        m.add_entry(index(&target), ci, v);
                    }
                }
                faces.push(m);
            }
        }
        let mut degeneracies = Vec::new();
        if n + 1 <= n_max {
            for j in 0..=n {
                let mut m = SparseMat::new(dims[n + 1], dims[n]);
                for (ci, tup) in basis.iter().enumerate() {
                    for (u, c) in a.unit().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut target = tup.clone();
                        target.insert(j + 1, u);
                        let v = i64::try_from(c).expect("unit coordinate fits i64");
                        m.add_entry(index(&target), ci, v);
                    }
                }
                degeneracies.push(m);
            }
        }
        let mut t = SparseMat::new(dims[n], dims[n]);
        for (ci, tup) in basis.iter().enumerate() {
            let mut target = Vec::with_capacity(n + 1);
            target.push(tup[n]);
            target.extend_from_slice(&tup[..n]);
            t.add_entry(index(&target), ci, 1);
        }
        levels.push(CyclicLevel {
            dim: dims[n],
            faces,
            degeneracies,
            t,
        });
    }
    CyclicModule {
        coeff: a.coefficients(),
        levels,
    }
}

/// Basis metadata of the tuple-based cyclic module of a convolution
/// algebra: cyclically composable arrow tuples graded by the conjugation
/// orbit of their composite loop.
pub struct TupleBasis {
    /// per level: the closing tuples, lexicographic
    pub tuples: Vec<Vec<Vec<ArrId>>>,
    /// per level: the loop-orbit id of each tuple's cyclic composite
    pub orbit_of: Vec<Vec<usize>>,
    /// loop-orbit representatives (smallest loop id per orbit)
    pub orbit_reps: Vec<ArrId>,
    /// whether an orbit consists of unit loops
    pub orbit_is_units: Vec<bool>,
}

/// Conjugation orbits of the loops of `g`: orbit ids ordered by smallest
/// member.
pub fn loop_orbits(g: &FiniteGroupoid) -> (Vec<ArrId>, Vec<usize>, Vec<ArrId>) {
    let loops = g.loops();
    let pos: std::collections::HashMap<ArrId, usize> =
        loops.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut parent: Vec<usize> = (0..loops.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (i, &l) in loops.iter().enumerate() {
        for arr in 0..g.n_arrows() {
            if g.target(arr) != g.target(l) {
                continue;
            }
            let conj = g.compose_arrows(g.compose_arrows(g.inverse_of(arr), l), arr);
            let j = pos[&conj];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut rep_of_root: std::collections::BTreeMap<usize, usize> = Default::default();
    for i in 0..loops.len() {
        let r = find(&mut parent, i);
        rep_of_root.entry(r).or_insert(i);
    }
    let roots: Vec<usize> = rep_of_root.keys().copied().collect();
    let orbit_id_of_loop: Vec<usize> = (0..loops.len())
        .map(|i| {
            let r = find(&mut parent, i);
            roots.iter().position(|&x| x == r).unwrap()
        })
        .collect();
    let reps: Vec<ArrId> = roots.iter().map(|&r| loops[rep_of_root[&r]]).collect();
    (loops, orbit_id_of_loop, reps)
}

/// The cyclic module of `k[G]` on the closing-tuple basis: the engine drops
/// tuples whose cyclic composite is undefined; they span a complement
/// preserved by every operator, which the localization layer verifies.
pub fn convolution_tuple_module(
    g: &FiniteGroupoid,
    coeff: Coefficients,
    n_max: usize,
) -> (CyclicModule, TupleBasis) {
    let normalized = false;
    let (loops, orbit_id_of_loop, orbit_reps) = loop_orbits(g);
    let loop_pos: std::collections::HashMap<ArrId, usize> =
        loops.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let orbit_is_units: Vec<bool> = orbit_reps.iter().map(|&l| g.is_unit(l)).collect();

    // enumerate closing tuples level by level
    let mut tuples: Vec<Vec<Vec<ArrId>>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut out = Vec::new();
        let mut cur: Vec<ArrId> = Vec::with_capacity(n + 1);
        gen_closing(g, n + 1, normalized, &mut cur, &mut out);
        out.sort_unstable();
        tuples.push(out);
    }

    let composite = |tup: &[ArrId]| -> ArrId {
        let mut acc = tup[0];
        for &x in &tup[1..] {
            acc = g.compose_arrows(acc, x);
        }
        acc
    };
    let orbit_of: Vec<Vec<usize>> = tuples
        .iter()
        .map(|lvl| {
            lvl.iter()
                .map(|t| orbit_id_of_loop[loop_pos[&composite(t)]])
                .collect()
        })
        .collect();

    let index = |lvl: &Vec<Vec<ArrId>>, t: &[ArrId]| -> Option<usize> {
        lvl.binary_search_by(|probe| probe.as_slice().cmp(t)).ok()
    };

    let mut levels = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let basis = &tuples[n];
        let dim = basis.len();
        let mut faces = Vec::new();
        if n >= 1 {
            let below = &tuples[n - 1];
            for face in 0..=n {
                let mut m = SparseMat::new(below.len(), dim);
                for (ci, tup) in basis.iter().enumerate() {
                    let target: Option<Vec<ArrId>> = if face < n {
                        g.try_compose(tup[face], tup[face + 1]).map(|prod| {
                            let mut t = Vec::with_capacity(n);
                            t.extend_from_slice(&tup[..face]);
                            t.push(prod);
                            t.extend_from_slice(&tup[face + 2..]);
                            t
                        })
                    } else {
                        g.try_compose(tup[n], tup[0]).map(|prod| {
                            let mut t = Vec::with_capacity(n);
                            t.push(prod);
                            t.extend_from_slice(&tup[1..n]);
                            t
                        })
                    };
                    if let Some(t) = target {
                        if let Some(ti) = index(below, &t) {
                            m.add_entry(ti, ci, 1);
                        }
                    }
                }
                faces.push(m);
            }
        }
        let mut degeneracies = Vec::new();
        if n + 1 <= n_max {
            let above = &tuples[n + 1];
            for j in 0..=n {
                let mut m = SparseMat::new(above.len(), dim);
                for (ci, tup) in basis.iter().enumerate() {
                    // the single closing insertion: the unit at s(g_j)
                    let u = g.unit_of(g.source(tup[j]));
                    let mut t = tup.clone();
                    t.insert(j + 1, u);
                    if let Some(ti) = index(above, &t) {
                        m.add_entry(ti, ci, 1);
                    }
                }
                degeneracies.push(m);
            }
        }
        let mut t_op = SparseMat::new(dim, dim);
        for (ci, tup) in basis.iter().enumerate() {
            let mut t = Vec::with_capacity(n + 1);
            t.push(tup[n]);
            t.extend_from_slice(&tup[..n]);
            if let Some(ti) = index(basis, &t) {
                t_op.add_entry(ti, ci, 1);
            }
        }
        levels.push(CyclicLevel {
            dim,
            faces,
            degeneracies,
            t: t_op,
        });
    }
    (
        CyclicModule { coeff, levels },
        TupleBasis {
            tuples,
            orbit_of,
            orbit_reps,
            orbit_is_units,
        },
    )
}

/// Depth-first lexicographic enumeration of cyclically composable tuples.
/// With `normalized`, tuples carrying a unit beyond position zero are
/// skipped (the degenerate directions of the closing module).
pub(crate) fn gen_closing(
    g: &FiniteGroupoid,
    len: usize,
    normalized: bool,
    cur: &mut Vec<ArrId>,
    out: &mut Vec<Vec<ArrId>>,
) {
    if cur.len() == len {
        // wrap condition
        if g.source(*cur.last().unwrap()) == g.target(cur[0]) {
            out.push(cur.clone());
        }
        return;
    }
    let candidates: Vec<ArrId> = if cur.is_empty() {
        (0..g.n_arrows()).collect()
    } else {
        g.arrows_into(g.source(*cur.last().unwrap())).to_vec()
    };
    for a in candidates {
        if normalized && !cur.is_empty() && g.is_unit(a) {
            continue;
        }
        cur.push(a);
        gen_closing(g, len, normalized, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::algebra::convolution_algebra;
    use crate::groupoid::groups::cyclic;

    #[test]
    fn algebra_module_satisfies_the_relations() {
        let a = convolution_algebra(&cyclic(2), Coefficients::Rationals).unwrap();
        let m = cyclic_module_of_algebra(&a, 3);
        m.validate().unwrap();
        assert_eq!(m.dim(2), 8);
    }

    #[test]
    fn tuple_module_satisfies_the_relations() {
        let g = cyclic(3);
        let (m, _) = convolution_tuple_module(&g, Coefficients::Rationals, 3);
        m.validate().unwrap();
        // for a group every tuple closes
        assert_eq!(m.dim(2), 27);
    }

    #[test]
    fn pair_groupoid_tuple_counts() {
        let g = FiniteGroupoid::pair(2);
        let (m, basis) = convolution_tuple_module(&g, Coefficients::Rationals, 2);
        m.validate().unwrap();
        // closing tuples of length n+1 are walks on 2 objects: 2^{n+1}
        assert_eq!(m.dim(0), 2);
        assert_eq!(m.dim(1), 4);
        assert_eq!(m.dim(2), 8);
        // a single loop orbit
        assert_eq!(basis.orbit_reps.len(), 1);
    }

    #[test]
    fn trivial_algebra_module() {
        let a = convolution_algebra(&cyclic(1), Coefficients::Rationals).unwrap();
        let m = cyclic_module_of_algebra(&a, 4);
        m.validate().unwrap();
        for n in 0..=4 {
            assert_eq!(m.dim(n), 1);
        }
    }

    use crate::groupoid::FiniteGroupoid;
}
