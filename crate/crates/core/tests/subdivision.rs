//! Flag-simplex subdivisions of random polytopes.

use flagfloat::flag_simplex::{barycenter_subdivision, classify_flag_simplex};
use flagfloat::generators;
use proptest::prelude::*;

#[test]
fn simplex_subdivision_has_equal_pieces() {
    for n in 2..=4 {
        let t = generators::simplex(n).unwrap();
        let sub = barycenter_subdivision(&t);
        // centroids with denominator 3 are not dyadic, so compare in floating point
        let each = t.volume() / sub.len() as f64;
        assert!(sub.iter().all(|s| (s.volume() - each).abs() <= 1e-12 * each));
        assert_eq!(sub.len() as u64, t.face_lattice().flag_count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn subdivision_tiles_the_polytope(seed in any::<u64>(), k in 5usize..14) {
        let p = generators::random_polytope(3, k, seed).unwrap();
        let sub = barycenter_subdivision(&p);
        prop_assert_eq!(sub.len() as u64, p.face_lattice().flag_count());
        let total: f64 = sub.iter().map(|s| s.volume()).sum();
        prop_assert!((total - p.volume()).abs() <= 1e-9 * p.volume());
        for s in &sub {
            let c = classify_flag_simplex(&p, &s.vertices).unwrap();
            prop_assert_eq!(&c.flag, &s.flag);
        }
    }
}
