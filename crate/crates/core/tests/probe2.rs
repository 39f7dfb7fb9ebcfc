use ghom_core::groupoid::{comma_groupoid, GroupoidHom};
use ghom_core::groupoid::groups::symmetric3;
use ghom_core::homology::{bar_complex_sparse, groupoid_homology_range};
use ghom_core::linalg::sparse::sparse_homology;
use ghom_core::linalg::Coefficients;
use ghom_core::sheaf::GSheaf;
use std::time::Instant;

#[test]
#[ignore]
fn probe_comma_s3() {
    let g = symmetric3().into_arc();
    let id = GroupoidHom::identity(&g);
    let t0 = Instant::now();
    let c = comma_groupoid(&id, 0);
    println!("comma built in {:?}: {} objects {} arrows", t0.elapsed(), c.groupoid.n_objects(), c.groupoid.n_arrows());
    let a = GSheaf::constant(c.groupoid.clone(), Coefficients::Integers, 1);
    let t1 = Instant::now();
    let cx = bar_complex_sparse(&c.groupoid, &a, 4, true).unwrap();
    println!("sparse bar in {:?}: ranks {:?}, nnz {:?}", t1.elapsed(), cx.ranks, cx.boundaries.iter().map(|b| b.nnz()).collect::<Vec<_>>());
    let t2 = Instant::now();
    let h = sparse_homology(&cx, Coefficients::Integers).unwrap();
    println!("sparse homology in {:?}: {:?}", t2.elapsed(), h.iter().map(|x| x.betti).collect::<Vec<_>>());
    let t3 = Instant::now();
    let _ = groupoid_homology_range(&c.groupoid, &a, 3, Coefficients::Integers).unwrap();
    println!("full range call in {:?}", t3.elapsed());
}
