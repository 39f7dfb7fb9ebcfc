use std::collections::HashMap;
use std::sync::Arc;

pub type ObjId = usize;
pub type ArrId = usize;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("arrow {arrow} has an endpoint outside the object range")]
    BadEndpoint { arrow: ArrId },
    #[error("unit of object {object} is not a two-sided identity")]
    BadUnit { object: ObjId },
    #[error("composition table disagrees with source/target on ({g}, {h})")]
    BadComposition { g: ArrId, h: ArrId },
    #[error("composition is not associative on ({g}, {h}, {k})")]
    NotAssociative { g: ArrId, h: ArrId, k: ArrId },
    #[error("arrow {arrow} has no two-sided inverse")]
    BadInverse { arrow: ArrId },
    #[error("the table is not a group: {0}")]
    NotAGroup(String),
    #[error("the table is not a right action: {0}")]
    NotAnAction(String),
}

/// A finite groupoid with dense integer object and arrow ids and a full,
/// eagerly validated composition table. All enumeration orders are by id,
/// so every matrix derived downstream is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    n_objects: usize,
    src: Vec<ObjId>,
    tgt: Vec<ObjId>,
    compose: HashMap<(u32, u32), u32>,
    unit: Vec<ArrId>,
    inverse: Vec<ArrId>,
    arrows_by_target: Vec<Vec<ArrId>>,
    arrows_by_source: Vec<Vec<ArrId>>,
}

impl FiniteGroupoid {
    /// Validate and build. `compose` must contain `(g, h)` exactly when
    /// `s(g) = t(h)`, with value `g o h`.
    pub fn new(
        n_objects: usize,
        src: Vec<ObjId>,
        tgt: Vec<ObjId>,
        compose: HashMap<(u32, u32), u32>,
        unit: Vec<ArrId>,
        inverse: Vec<ArrId>,
    ) -> Result<Self, GroupoidError> {
        let n_arrows = src.len();
        assert_eq!(tgt.len(), n_arrows);
        assert_eq!(unit.len(), n_objects);
        assert_eq!(inverse.len(), n_arrows);
        for a in 0..n_arrows {
            if src[a] >= n_objects || tgt[a] >= n_objects {
                return Err(GroupoidError::BadEndpoint { arrow: a });
            }
        }
        let mut arrows_by_target = vec![Vec::new(); n_objects];
        let mut arrows_by_source = vec![Vec::new(); n_objects];
        for a in 0..n_arrows {
            arrows_by_target[tgt[a]].push(a);
            arrows_by_source[src[a]].push(a);
        }
        let g = FiniteGroupoid {
            n_objects,
            src,
            tgt,
            compose,
            unit,
            inverse,
            arrows_by_target,
            arrows_by_source,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GroupoidError> {
        for x in 0..self.n_objects {
            let u = self.unit[x];
            if u >= self.src.len() || self.src[u] != x || self.tgt[u] != x {
                return Err(GroupoidError::BadUnit { object: x });
            }
        }
        // the table is total on composable pairs and nowhere else
        for g in 0..self.src.len() {
            for h in 0..self.src.len() {
                let composable = self.src[g] == self.tgt[h];
                match self.compose.get(&(g as u32, h as u32)) {
                    Some(&gh) => {
                        let gh = gh as usize;
                        if !composable
                            || gh >= self.src.len()
                            || self.src[gh] != self.src[h]
                            || self.tgt[gh] != self.tgt[g]
                        {
                            return Err(GroupoidError::BadComposition { g, h });
                        }
                    }
                    None => {
                        if composable {
                            return Err(GroupoidError::BadComposition { g, h });
                        }
                    }
                }
            }
        }
        // units are two-sided identities
        for g in 0..self.src.len() {
            if self.compose_arrows(self.unit[self.tgt[g]], g) != g
                || self.compose_arrows(g, self.unit[self.src[g]]) != g
            {
                return Err(GroupoidError::BadUnit {
                    object: self.tgt[g],
                });
            }
        }
        // inverses
        for g in 0..self.src.len() {
            let i = self.inverse[g];
            if i >= self.src.len()
                || self.src[i] != self.tgt[g]
                || self.tgt[i] != self.src[g]
                || self.compose_arrows(g, i) != self.unit[self.tgt[g]]
                || self.compose_arrows(i, g) != self.unit[self.src[g]]
            {
                return Err(GroupoidError::BadInverse { arrow: g });
            }
        }
        // associativity on all composable triples
        for g in 0..self.src.len() {
            for &h in &self.arrows_by_target[self.src[g]].clone() {
                for &k in &self.arrows_by_target[self.src[h]].clone() {
                    let left = self.compose_arrows(self.compose_arrows(g, h), k);
                    let right = self.compose_arrows(g, self.compose_arrows(h, k));
                    if left != right {
                        return Err(GroupoidError::NotAssociative { g, h, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_arrows(&self) -> usize {
        self.src.len()
    }

    pub fn source(&self, g: ArrId) -> ObjId {
        self.src[g]
    }

    pub fn target(&self, g: ArrId) -> ObjId {
        self.tgt[g]
    }

    /// `g o h`, defined when `s(g) = t(h)`.
    pub fn compose_arrows(&self, g: ArrId, h: ArrId) -> ArrId {
        self.compose[&(g as u32, h as u32)] as usize
    }

    pub fn try_compose(&self, g: ArrId, h: ArrId) -> Option<ArrId> {
        self.compose.get(&(g as u32, h as u32)).map(|&x| x as usize)
    }

    pub fn unit_of(&self, x: ObjId) -> ArrId {
        self.unit[x]
    }

    pub fn inverse_of(&self, g: ArrId) -> ArrId {
        self.inverse[g]
    }

    pub fn is_unit(&self, g: ArrId) -> bool {
        self.unit[self.tgt[g]] == g
    }

    pub fn arrows_into(&self, x: ObjId) -> &[ArrId] {
        &self.arrows_by_target[x]
    }

    pub fn arrows_out_of(&self, x: ObjId) -> &[ArrId] {
        &self.arrows_by_source[x]
    }

    /// Arrows `x -> y`, in id order.
    pub fn hom_set(&self, x: ObjId, y: ObjId) -> Vec<ArrId> {
        self.arrows_by_source[x]
            .iter()
            .copied()
            .filter(|&g| self.tgt[g] == y)
            .collect()
    }

    /// Loops (arrows with equal endpoints), in id order.
    pub fn loops(&self) -> Vec<ArrId> {
        (0..self.n_arrows())
            .filter(|&g| self.src[g] == self.tgt[g])
            .collect()
    }

    pub fn is_group(&self) -> bool {
        self.n_objects == 1
    }

    /// Connected components of the object set, each sorted, listed by their
    /// smallest member.
    pub fn orbits(&self) -> Vec<Vec<ObjId>> {
        let mut parent: Vec<usize> = (0..self.n_objects).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for g in 0..self.n_arrows() {
            let a = find(&mut parent, self.src[g]);
            let b = find(&mut parent, self.tgt[g]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: HashMap<usize, Vec<ObjId>> = HashMap::new();
        for x in 0..self.n_objects {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        let mut out: Vec<Vec<ObjId>> = groups.into_values().collect();
        for o in &mut out {
            o.sort_unstable();
        }
        out.sort_by_key(|o| o[0]);
        out
    }

    /// The empty groupoid.
    pub fn empty() -> Self {
        FiniteGroupoid {
            n_objects: 0,
            src: vec![],
            tgt: vec![],
            compose: HashMap::new(),
            unit: vec![],
            inverse: vec![],
            arrows_by_target: vec![],
            arrows_by_source: vec![],
        }
    }

    /// Units only: a finite set viewed as a groupoid.
    pub fn discrete(n: usize) -> Self {
        let compose = (0..n as u32).map(|i| ((i, i), i)).collect();
        FiniteGroupoid::new(
            n,
            (0..n).collect(),
            (0..n).collect(),
            compose,
            (0..n).collect(),
            (0..n).collect(),
        )
        .expect("discrete groupoid is valid")
    }

    /// Pair groupoid on `n` points: exactly one arrow between any two
    /// objects. Arrow `x*n + y` is `y -> x`.
    pub fn pair(n: usize) -> Self {
        let mut src = Vec::with_capacity(n * n);
        let mut tgt = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                tgt.push(x);
                src.push(y);
            }
        }
        let arrow = |x: usize, y: usize| x * n + y;
        let mut compose = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // (x <- y) o (y <- z) = (x <- z)
                    compose.insert((arrow(x, y) as u32, arrow(y, z) as u32), arrow(x, z) as u32);
                }
            }
        }
        let unit = (0..n).map(|x| arrow(x, x)).collect();
        let inverse = (0..n * n).map(|a| arrow(a % n, a / n)).collect();
        FiniteGroupoid::new(n, src, tgt, compose, unit, inverse).expect("pair groupoid is valid")
    }

    /// One-object groupoid from a group Cayley table `table[g][h] = g o h`.
    pub fn group_from_table(table: &[Vec<usize>]) -> Result<Self, GroupoidError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupoidError::NotAGroup("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n) {
            return Err(GroupoidError::NotAGroup("ragged table".into()));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| GroupoidError::NotAGroup("no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == e && table[h][g] == e)
                .ok_or_else(|| GroupoidError::NotAGroup(format!("{g} has no inverse")))?;
        }
        let mut compose = HashMap::new();
        for g in 0..n {
            for h in 0..n {
                compose.insert((g as u32, h as u32), table[g][h] as u32);
            }
        }
        FiniteGroupoid::new(1, vec![0; n], vec![0; n], compose, vec![e], inverse)
    }

    /// Disjoint union; objects and arrows of `self` come first.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let no = self.n_objects;
        let na = self.n_arrows();
        let src = self
            .src
            .iter()
            .copied()
            .chain(other.src.iter().map(|&x| x + no))
            .collect();
        let tgt = self
            .tgt
            .iter()
            .copied()
            .chain(other.tgt.iter().map(|&x| x + no))
            .collect();
        let mut compose = self.compose.clone();
        for (&(g, h), &gh) in &other.compose {
            compose.insert((g + na as u32, h + na as u32), gh + na as u32);
        }
        let unit = self
            .unit
            .iter()
            .copied()
            .chain(other.unit.iter().map(|&a| a + na))
            .collect();
        let inverse = self
            .inverse
            .iter()
            .copied()
            .chain(other.inverse.iter().map(|&a| a + na))
            .collect();
        FiniteGroupoid::new(no + other.n_objects, src, tgt, compose, unit, inverse)
            .expect("disjoint union of valid groupoids is valid")
    }

    pub fn into_arc(self) -> Arc<FiniteGroupoid> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_groupoid_counts() {
        let g = FiniteGroupoid::pair(3);
        assert_eq!(g.n_objects(), 3);
        assert_eq!(g.n_arrows(), 9);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(g.hom_set(x, y).len(), 1);
            }
        }
        assert_eq!(g.orbits().len(), 1);
    }

    #[test]
    fn discrete_and_empty() {
        let d = FiniteGroupoid::discrete(4);
        assert_eq!(d.n_arrows(), 4);
        assert_eq!(d.orbits().len(), 4);
        let e = FiniteGroupoid::empty();
        assert_eq!(e.n_objects(), 0);
        assert_eq!(e.orbits().len(), 0);
    }

    #[test]
    fn bad_table_is_rejected() {
        // "composition" that forgets a composable pair
        let mut compose = HashMap::new();
        compose.insert((0u32, 0u32), 0u32);
        let ok = FiniteGroupoid::new(1, vec![0, 0], vec![0, 0], compose, vec![0], vec![0, 1]);
        assert!(matches!(ok, Err(GroupoidError::BadComposition { .. })));
    }

    #[test]
    fn disjoint_union_offsets() {
        let g = FiniteGroupoid::pair(2).disjoint_union(&FiniteGroupoid::discrete(1));
        assert_eq!(g.n_objects(), 3);
        assert_eq!(g.n_arrows(), 5);
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2]]);
    }
}
