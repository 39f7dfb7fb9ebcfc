use super::core::{ArrId, FiniteGroupoid, ObjId};

/// Level `n` of the nerve: composable strings
/// `x_0 <-g_1- x_1 <- ... <-g_n- x_n`, enumerated lexicographically by arrow
/// ids, with face maps down to level `n-1` and the two base maps (first and
/// last object of the string).
#[derive(Debug, Clone)]
pub struct NerveLevel {
    pub n: usize,
    /// level 0 stores one empty string per object
    pub strings: Vec<Vec<ArrId>>,
    pub first_object: Vec<ObjId>,
    pub last_object: Vec<ObjId>,
    /// `faces[i][s]` = index of `d_i(strings[s])` at level `n-1`; empty at level 0
    pub faces: Vec<Vec<usize>>,
}

impl NerveLevel {
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

/// Enumerate the composable strings of length `n` in lexicographic order.
pub fn nerve_strings(g: &FiniteGroupoid, n: usize) -> Vec<Vec<ArrId>> {
    if n == 0 {
        return (0..g.n_objects()).map(|_| Vec::new()).collect();
    }
    let mut out = Vec::new();
    let mut stack: Vec<ArrId> = Vec::with_capacity(n);
    fn extend(
        g: &FiniteGroupoid,
        n: usize,
        stack: &mut Vec<ArrId>,
        out: &mut Vec<Vec<ArrId>>,
    ) {
        if stack.len() == n {
            out.push(stack.clone());
            return;
        }
        let next: Vec<ArrId> = if stack.is_empty() {
            (0..g.n_arrows()).collect()
        } else {
            g.arrows_into(g.source(*stack.last().unwrap())).to_vec()
        };
        for a in next {
            stack.push(a);
            extend(g, n, stack, out);
            stack.pop();
        }
    }
    extend(g, n, &mut stack, &mut out);
    out
}

/// Composable strings containing no unit arrow, lexicographic.
pub fn nondegenerate_strings(g: &FiniteGroupoid, n: usize) -> Vec<Vec<ArrId>> {
    if n == 0 {
        return (0..g.n_objects()).map(|_| Vec::new()).collect();
    }
    nerve_strings(g, n)
        .into_iter()
        .filter(|s| s.iter().all(|&a| !g.is_unit(a)))
        .collect()
}

/// Index of each string within the lexicographic enumeration.
pub fn string_index(strings: &[Vec<ArrId>]) -> impl Fn(&[ArrId]) -> Option<usize> + '_ {
    move |s: &[ArrId]| strings.binary_search_by(|probe| probe.as_slice().cmp(s)).ok()
}

/// Apply the `i`-th simplicial face to a string (`0 <= i <= n`): drop the
/// first arrow, compose two adjacent arrows, or drop the last arrow.
pub fn face_string(g: &FiniteGroupoid, s: &[ArrId], i: usize) -> Vec<ArrId> {
    let n = s.len();
    assert!(i <= n && n >= 1);
    if i == 0 {
        s[1..].to_vec()
    } else if i == n {
        s[..n - 1].to_vec()
    } else {
        let mut out = Vec::with_capacity(n - 1);
        out.extend_from_slice(&s[..i - 1]);
        out.push(g.compose_arrows(s[i - 1], s[i]));
        out.extend_from_slice(&s[i + 1..]);
        out
    }
}

/// First object `x_0` of a string (the object itself at level 0).
pub fn string_first_object(g: &FiniteGroupoid, s: &[ArrId], level0_object: ObjId) -> ObjId {
    match s.first() {
        Some(&a) => g.target(a),
        None => level0_object,
    }
}

/// Last object `x_n` of a string.
pub fn string_last_object(g: &FiniteGroupoid, s: &[ArrId], level0_object: ObjId) -> ObjId {
    match s.last() {
        Some(&a) => g.source(a),
        None => level0_object,
    }
}

/// The full nerve level with face maps.
pub fn nerve(g: &FiniteGroupoid, n: usize) -> NerveLevel {
    let strings = nerve_strings(g, n);
    let (first_object, last_object): (Vec<ObjId>, Vec<ObjId>) = if n == 0 {
        ((0..g.n_objects()).collect(), (0..g.n_objects()).collect())
    } else {
        strings
            .iter()
            .map(|s| (g.target(s[0]), g.source(s[n - 1])))
            .unzip()
    };
    let faces = if n == 0 {
        Vec::new()
    } else {
        let below = nerve_strings(g, n - 1);
        let lookup = string_index(&below);
        let mut faces = vec![vec![0usize; strings.len()]; n + 1];
        for (si, s) in strings.iter().enumerate() {
            for (i, face_row) in faces.iter_mut().enumerate() {
                let f = face_string(g, s, i);
                face_row[si] = if n == 1 {
                    // level 0 is indexed by objects
                    let obj = if i == 0 { g.source(s[0]) } else { g.target(s[0]) };
                    obj
                } else {
                    lookup(&f).expect("face of a composable string is composable")
                };
            }
        }
        faces
    };
    NerveLevel {
        n,
        strings,
        first_object,
        last_object,
        faces,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::groups::cyclic;

    #[test]
    fn counts_for_groups_and_pairs() {
        let z2 = cyclic(2);
        assert_eq!(nerve(&z2, 3).len(), 8);
        let p3 = FiniteGroupoid::pair(3);
        assert_eq!(nerve(&p3, 2).len(), 27);
        assert_eq!(nerve(&p3, 0).len(), 3);
    }

    #[test]
    fn simplicial_identities() {
        // d_i d_j = d_{j-1} d_i for i < j, checked on strings directly
        let g = FiniteGroupoid::pair(2).disjoint_union(&cyclic(2));
        for n in 2..=4 {
            for s in nerve_strings(&g, n) {
                for j in 1..=n {
                    for i in 0..j {
                        let a = face_string(&g, &face_string(&g, &s, j), i);
                        let b = face_string(&g, &face_string(&g, &s, i), j - 1);
                        assert_eq!(a, b, "d_{i} d_{j} on {s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn nondegenerate_counts() {
        let z2 = cyclic(2);
        assert_eq!(nondegenerate_strings(&z2, 3).len(), 1);
        let p3 = FiniteGroupoid::pair(3);
        // strings of non-identity arrows: first object free (3), then 2 each
        assert_eq!(nondegenerate_strings(&p3, 2).len(), 3 * 2 * 2);
    }
}
