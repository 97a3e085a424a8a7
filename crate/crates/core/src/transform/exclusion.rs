use alloc::format;
use alloc::string::String;

use crate::name::{negative_of, residual_of, ROOT};
use crate::taxonomy::{ClassKind, ClassNode, DecisionRainforest, ExclusionStyle};

/// Gives every non-exhaustive BCT one exclusion class and marks it
/// exhaustive. `Auto` picks `no_<class>` for a single-class BCT and
/// `other_<conditioning class>` otherwise (`other_<bct id>` at the root).
pub fn insert_exclusion_classes(forest: &DecisionRainforest) -> DecisionRainforest {
    let mut out = forest.clone();
    let pending: alloc::vec::Vec<(String, String)> = forest
        .bcts()
        .iter()
        .filter(|b| !b.bct.exhaustive)
        .map(|b| (b.bct.id.clone(), String::from(b.conditioning)))
        .collect();
    for (id, conditioning) in pending {
        let taken = |name: &str| out.has_class(name);
        let bct = forest.find_bct(&id).expect("BCT exists").bct;
        let single = bct.classes.len() == 1;
        let negative = match bct.exclusion_style {
            ExclusionStyle::Auto => single,
            ExclusionStyle::Negative => true,
            ExclusionStyle::Residual => false,
        };
        let node = if negative {
            let name = if single { negative_of(&bct.classes[0].name) } else { negative_of(&bct.id) };
            ClassNode::new(name, ClassKind::ExclusionNegative)
        } else {
            let base = if conditioning == ROOT { &bct.id } else { &conditioning };
            let mut name = residual_of(base);
            if taken(&name) {
                name = format!("{name}_{}", bct.id);
            }
            ClassNode::new(name, ClassKind::ExclusionResidual)
        };
        let bct = out.bct_mut(&id).expect("BCT exists");
        bct.classes.push(node);
        bct.exhaustive = true;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::{validate_rainforest, Bct, SubsidiaryRelation, Tree, TreeRole};
    use alloc::vec;
    use alloc::vec::Vec;

    fn partial() -> DecisionRainforest {
        let ultrasound = ClassNode::regular("ultrasound")
            .with_child(Bct::of("ultrasound_site", ["echocardiogram"]).non_exhaustive(ExclusionStyle::Residual));
        let top = Bct::new(
            "image_type",
            vec![ClassNode::regular("ct"), ClassNode::regular("mri"), ultrasound, ClassNode::regular("x_ray")],
        );
        DecisionRainforest {
            trees: vec![
                Tree::new("image_type", top, TreeRole::Main),
                Tree::new(
                    "attribute_doppler",
                    Bct::of("attribute_doppler", ["doppler"]).non_exhaustive(ExclusionStyle::Auto),
                    TreeRole::Subsidiary,
                ),
            ],
            subsidiary_relations: vec![SubsidiaryRelation::new("ultrasound", "attribute_doppler")],
            ..Default::default()
        }
    }

    #[test]
    fn negative_and_residual_names() {
        let out = insert_exclusion_classes(&partial());
        let doppler: Vec<&str> = out.find_bct("attribute_doppler").unwrap().bct.class_names().collect();
        assert_eq!(doppler, vec!["doppler", "no_doppler"]);
        let site: Vec<&str> = out.find_bct("ultrasound_site").unwrap().bct.class_names().collect();
        assert_eq!(site, vec!["echocardiogram", "other_ultrasound"]);
        assert_eq!(out.class("no_doppler").unwrap().kind, ClassKind::ExclusionNegative);
        assert_eq!(out.class("other_ultrasound").unwrap().kind, ClassKind::ExclusionResidual);
        assert!(validate_rainforest(&out).is_empty());
    }

    #[test]
    fn idempotent_and_noop_on_exhaustive() {
        let once = insert_exclusion_classes(&partial());
        assert_eq!(insert_exclusion_classes(&once), once);
        let fixture = crate::fixtures::multicare();
        assert_eq!(insert_exclusion_classes(&fixture), fixture);
    }

    #[test]
    fn multi_class_styles() {
        let top = Bct::of("image_type", ["ct", "mri"]).non_exhaustive(ExclusionStyle::Auto);
        let forest =
            DecisionRainforest { trees: vec![Tree::new("image_type", top, TreeRole::Main)], ..Default::default() };
        let out = insert_exclusion_classes(&forest);
        assert!(out.has_class("other_image_type"));
        let mut forest = forest;
        forest.trees[0].top_bct.exclusion_style = ExclusionStyle::Negative;
        assert!(insert_exclusion_classes(&forest).has_class("no_image_type"));
    }
}
