mod common;

use common::checks;
use posetdim::constructions::subset_poset;
use posetdim::gadget::{build_extensions, check_extension_structure};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn images_behave(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (p, td) = common::random_instance(&mut rng, 18, 3, 2);
        prop_assert_eq!(checks::image_properties_all(&p, &td), Ok(()));
    }

    #[test]
    fn extensions_are_bag_plus_gadgets(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (p, td) = common::random_instance(&mut rng, 18, 3, 2);
        let s = td.adhesion();
        for z in 0..td.num_bags() {
            let (w, st) = build_extensions(&p, &td, z).unwrap();
            prop_assert!(check_extension_structure(&w, s).is_ok());
            prop_assert!(check_extension_structure(&st, s).is_ok());
            prop_assert!(w.poset.height() <= p.height());
            // same-side gadget pairs form 2-chains even over an antichain
            prop_assert!(st.poset.height() <= p.height().max(2));
            let k = td.bags[z].len();
            prop_assert!(w.len() <= k + (1usize << k) * (1usize << (k + 1)));
        }
    }
}

#[test]
fn dm_images() {
    for n in 3..=5 {
        let c = subset_poset(n).unwrap();
        let td = c.decomposition.unwrap();
        assert_eq!(checks::image_properties_all(&c.poset, &td), Ok(()));
    }
}
