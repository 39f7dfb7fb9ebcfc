//! Stock finite groups as one-object groupoids, used throughout the test
//! corpus and the CLI fixtures.

use super::core::{FiniteGroupoid, GroupoidError};

/// Cyclic group of order `m`.
pub fn cyclic(m: usize) -> FiniteGroupoid {
    assert!(m >= 1);
    let table: Vec<Vec<usize>> = (0..m).map(|i| (0..m).map(|j| (i + j) % m).collect()).collect();
    FiniteGroupoid::group_from_table(&table).expect("cyclic table is a group")
}

pub fn trivial_group() -> FiniteGroupoid {
    cyclic(1)
}

/// Dihedral group of order `2n` (for `n = 3` this is the symmetric group on
/// three letters). Elements `0..n` are rotations, `n..2n` reflections.
pub fn dihedral(n: usize) -> FiniteGroupoid {
    assert!(n >= 1);
    let size = 2 * n;
    let mut table = vec![vec![0usize; size]; size];
    for a in 0..size {
        for b in 0..size {
            let (ra, fa) = (a % n, a >= n);
            let (rb, fb) = (b % n, b >= n);
            // r^a f^ea * r^b f^eb with f r = r^{-1} f
            let rot = if fa { (ra + n - rb % n) % n } else { (ra + rb) % n };
            let flip = fa ^ fb;
            table[a][b] = if flip { rot + n } else { rot };
        }
    }
    FiniteGroupoid::group_from_table(&table).expect("dihedral table is a group")
}

pub fn symmetric3() -> FiniteGroupoid {
    dihedral(3)
}

/// Quaternion group of order 8: elements 1, -1, i, -i, j, -j, k, -k.
pub fn quaternion8() -> FiniteGroupoid {
    // encode q = (unit, sign): 0:1, 1:-1, 2:i, 3:-i, 4:j, 5:-j, 6:k, 7:-k
    let mul = |a: usize, b: usize| -> usize {
        let (ua, sa) = (a / 2, a % 2); // unit index 0:1, 1:i, 2:j, 3:k
        let (ub, sb) = (b / 2, b % 2);
        // multiplication of units with sign: table over {1,i,j,k}
        let (u, s) = match (ua, ub) {
            (0, u) => (u, 0),
            (u, 0) => (u, 0),
            (1, 1) => (0, 1), // i*i = -1
            (2, 2) => (0, 1),
            (3, 3) => (0, 1),
            (1, 2) => (3, 0), // i*j = k
            (2, 1) => (3, 1), // j*i = -k
            (2, 3) => (1, 0), // j*k = i
            (3, 2) => (1, 1), // k*j = -i
            (3, 1) => (2, 0), // k*i = j
            (1, 3) => (2, 1), // i*k = -j
            _ => unreachable!(),
        };
        let sign = sa ^ sb ^ s;
        2 * u + sign
    };
    let table: Vec<Vec<usize>> = (0..8).map(|a| (0..8).map(|b| mul(a, b)).collect()).collect();
    FiniteGroupoid::group_from_table(&table).expect("quaternion table is a group")
}

/// Direct product of two one-object groupoids.
pub fn product_group(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    assert!(a.is_group() && b.is_group());
    let (na, nb) = (a.n_arrows(), b.n_arrows());
    let enc = |x: usize, y: usize| x * nb + y;
    let table: Vec<Vec<usize>> = (0..na * nb)
        .map(|p| {
            (0..na * nb)
                .map(|q| {
                    enc(
                        a.compose_arrows(p / nb, q / nb),
                        b.compose_arrows(p % nb, q % nb),
                    )
                })
                .collect()
        })
        .collect();
    FiniteGroupoid::group_from_table(&table).expect("product table is a group")
}

pub fn klein_four() -> FiniteGroupoid {
    product_group(&cyclic(2), &cyclic(2))
}

/// Every group of order at most 8, up to isomorphism, with a short name.
pub fn groups_up_to_order_8() -> Vec<(&'static str, FiniteGroupoid)> {
    vec![
        ("C1", cyclic(1)),
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("V4", klein_four()),
        ("C5", cyclic(5)),
        ("C6", cyclic(6)),
        ("S3", symmetric3()),
        ("C7", cyclic(7)),
        ("C8", cyclic(8)),
        ("C4xC2", product_group(&cyclic(4), &cyclic(2))),
        ("C2xC2xC2", product_group(&klein_four(), &cyclic(2))),
        ("D4", dihedral(4)),
        ("Q8", quaternion8()),
    ]
}

/// Number of conjugacy classes of a one-object groupoid.
pub fn conjugacy_class_count(g: &FiniteGroupoid) -> usize {
    assert!(g.is_group());
    let n = g.n_arrows();
    let mut seen = vec![false; n];
    let mut classes = 0;
    for a in 0..n {
        if seen[a] {
            continue;
        }
        classes += 1;
        for h in 0..n {
            let c = g.compose_arrows(g.compose_arrows(g.inverse_of(h), a), h);
            seen[c] = true;
        }
    }
    classes
}

#[allow(dead_code)]
pub(crate) fn assert_group_order(g: &FiniteGroupoid, n: usize) -> Result<(), GroupoidError> {
    if g.n_arrows() == n {
        Ok(())
    } else {
        Err(GroupoidError::NotAGroup(format!(
            "expected order {n}, got {}",
            g.n_arrows()
        )))
    }
}
