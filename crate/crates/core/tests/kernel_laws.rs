mod common;

use common::{draw, kinds, objects, seeded, sizes};
use finmarkov::structure::{assoc, assoc_inv, copy, discard, identity, left_unitor, right_unitor, swap};
use finmarkov::{compose, is_deterministic, is_deterministic_by_copy, tensor, validate, FinObject, Kernel, Kind};
use proptest::prelude::*;

fn all_multi_kernels(dom: &FinObject, cod: &FinObject) -> Vec<Kernel> {
    let images: Vec<u32> = (1..(1u32 << cod.len())).collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; dom.len()];
    loop {
        let cols: Vec<Vec<usize>> = pick
            .iter()
            .map(|&i| (0..cod.len()).filter(|b| images[i] >> b & 1 == 1).collect())
            .collect();
        out.push(Kernel::from_images(dom.clone(), cod.clone(), &cols).unwrap());
        let mut k = 0;
        loop {
            if k == pick.len() {
                return out;
            }
            pick[k] += 1;
            if pick[k] < images.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn exhaustive_multi_category_laws() {
    let objs: Vec<FinObject> = (1..=2).map(FinObject::range).collect();
    for a in &objs {
        for b in &objs {
            for f in all_multi_kernels(a, b) {
                assert_eq!(compose(&f, &identity(Kind::Multi, a)).unwrap(), f);
                assert_eq!(compose(&identity(Kind::Multi, b), &f).unwrap(), f);
                for c in &objs {
                    for g in all_multi_kernels(b, c) {
                        let gf = compose(&g, &f).unwrap();
                        validate(&gf).unwrap();
                        for h in all_multi_kernels(c, &objs[0]) {
                            let lhs = compose(&h, &gf).unwrap();
                            let rhs = compose(&compose(&h, &g).unwrap(), &f).unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn exhaustive_structure_laws() {
    for kind in [Kind::Stoch, Kind::Signed, Kind::Multi] {
        for n in 0..=3 {
            let x = FinObject::range(n);
            let c = copy(kind, &x);
            let d = discard(kind, &x);
            let id = identity(kind, &x);
            let left = compose(&left_unitor(kind, &x), &compose(&tensor(&d, &id).unwrap(), &c).unwrap()).unwrap();
            let right = compose(&right_unitor(kind, &x), &compose(&tensor(&id, &d).unwrap(), &c).unwrap()).unwrap();
            assert_eq!(left, id);
            assert_eq!(right, id);
            assert_eq!(compose(&swap(kind, &x, &x), &c).unwrap(), c);
            let ca = compose(
                &assoc(kind, &x, &x, &x),
                &compose(&tensor(&c, &id).unwrap(), &c).unwrap(),
            )
            .unwrap();
            let cb = compose(&tensor(&id, &c).unwrap(), &c).unwrap();
            assert_eq!(ca, cb);
            for m in 0..=3 {
                let y = FinObject::range(m);
                let s = compose(&swap(kind, &y, &x), &swap(kind, &x, &y)).unwrap();
                assert_eq!(s, identity(kind, &FinObject::tensor(&x, &y)));
                for k in 0..=2 {
                    let z = FinObject::range(k);
                    let round = compose(&assoc_inv(kind, &x, &y, &z), &assoc(kind, &x, &y, &z)).unwrap();
                    assert_eq!(round, identity(kind, &FinObject::tensor(&FinObject::tensor(&x, &y), &z)));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn composition_is_associative(kind in kinds(), (s, seed) in sizes(4, 3)) {
        let o = objects(&s);
        let mut r = seeded(seed);
        let f = draw(kind, &o[0], &o[1], &mut r);
        let g = draw(kind, &o[1], &o[2], &mut r);
        let h = draw(kind, &o[2], &o[3], &mut r);
        let lhs = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let rhs = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert!(validate(&lhs).is_ok());
    }

    #[test]
    fn interchange_law(kind in kinds(), (s, seed) in sizes(6, 3)) {
        let o = objects(&s);
        let mut r = seeded(seed);
        let f1 = draw(kind, &o[0], &o[1], &mut r);
        let g1 = draw(kind, &o[1], &o[2], &mut r);
        let f2 = draw(kind, &o[3], &o[4], &mut r);
        let g2 = draw(kind, &o[4], &o[5], &mut r);
        let lhs = compose(&tensor(&g1, &g2).unwrap(), &tensor(&f1, &f2).unwrap()).unwrap();
        let rhs = tensor(&compose(&g1, &f1).unwrap(), &compose(&g2, &f2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_is_associative_up_to_assoc(kind in kinds(), (s, seed) in sizes(6, 2)) {
        let o = objects(&s);
        let mut r = seeded(seed);
        let f = draw(kind, &o[0], &o[1], &mut r);
        let g = draw(kind, &o[2], &o[3], &mut r);
        let h = draw(kind, &o[4], &o[5], &mut r);
        let left = tensor(&tensor(&f, &g).unwrap(), &h).unwrap();
        let right = tensor(&f, &tensor(&g, &h).unwrap()).unwrap();
        let moved = compose(&assoc(kind, &o[1], &o[3], &o[5]), &left).unwrap();
        prop_assert_eq!(moved, compose(&right, &assoc(kind, &o[0], &o[2], &o[4])).unwrap());
    }

    #[test]
    fn swap_is_natural(kind in kinds(), (s, seed) in sizes(4, 3)) {
        let o = objects(&s);
        let mut r = seeded(seed);
        let f = draw(kind, &o[0], &o[1], &mut r);
        let g = draw(kind, &o[2], &o[3], &mut r);
        let lhs = compose(&swap(kind, &o[1], &o[3]), &tensor(&f, &g).unwrap()).unwrap();
        let rhs = compose(&tensor(&g, &f).unwrap(), &swap(kind, &o[0], &o[2])).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn discard_is_natural(kind in kinds(), (s, seed) in sizes(2, 4)) {
        let o = objects(&s);
        let mut r = seeded(seed);
        let f = draw(kind, &o[0], &o[1], &mut r);
        prop_assert_eq!(compose(&discard(kind, &o[1]), &f).unwrap(), discard(kind, &o[0]));
    }

    #[test]
    fn copy_is_natural_exactly_for_deterministic(kind in kinds(), (s, seed) in sizes(2, 3), det in any::<bool>()) {
        let o = objects(&s);
        let mut r = seeded(seed);
        let f = if det {
            finmarkov::random::random_function(kind, &o[0], &o[1], &mut r)
        } else {
            draw(kind, &o[0], &o[1], &mut r)
        };
        prop_assert_eq!(is_deterministic(&f), is_deterministic_by_copy(&f));
        if det {
            prop_assert!(is_deterministic(&f));
        }
    }
}
