//! Reference taxonomies used by the tests, the examples and the shipped
//! `.mtx.json` files.

use alloc::vec;
use alloc::vec::Vec;

use crate::taxonomy::{
    Bct, ClassKind, ClassNode, CompoundRule, DecisionRainforest, PreprocessRule, SubsidiaryRelation, Tree, TreeRole,
};

fn aux(name: &str, child: Bct) -> ClassNode {
    ClassNode::new(name, ClassKind::AuxiliarySuperclass).with_child(child)
}

fn regular(name: &str, child: Bct) -> ClassNode {
    ClassNode::regular(name).with_child(child)
}

fn binary(id: &str, class: &str, negative: &str) -> Bct {
    Bct::new(id, vec![ClassNode::regular(class), ClassNode::new(negative, ClassKind::ExclusionNegative)])
}

fn with_residual(id: &str, mut classes: Vec<ClassNode>, residual: &str) -> Bct {
    classes.push(ClassNode::new(residual, ClassKind::ExclusionResidual));
    Bct::new(id, classes)
}

/// Gastrointestinal findings: one tree, six BCTs (four binary, one with
/// three classes, one with six).
pub fn hyperkvasir() -> DecisionRainforest {
    let colitis = Bct::of(
        "ulcerative_colitis",
        [
            "ulcerative_colitis_grade_0_1",
            "ulcerative_colitis_grade_1",
            "ulcerative_colitis_grade_1_2",
            "ulcerative_colitis_grade_2",
            "ulcerative_colitis_grade_2_3",
            "ulcerative_colitis_grade_3",
        ],
    );
    let lower = Bct::new(
        "lower_gi",
        vec![ClassNode::regular("polyps"), aux("ulcerative_colitis", colitis), ClassNode::regular("hemorrhoids")],
    );
    let barrets = Bct::of("barrets_unspecific", ["barretts_short_segment", "barrets_long_segment"]);
    let esophagitis = Bct::of("esophagitis", ["esophagitis_a", "esophagitis_b_d"]);
    let upper = Bct::new("upper_gi", vec![aux("barrets_unspecific", barrets), aux("esophagitis", esophagitis)]);
    let top = Bct::new("gi_tract", vec![aux("lower_gi", lower), aux("upper_gi", upper)]);
    DecisionRainforest { trees: vec![Tree::new("gi_tract", top, TreeRole::Main)], ..Default::default() }
}

/// Medical image types: a main tree of seven BCTs' worth of classes plus a
/// subsidiary angiography tree under radiology.
pub fn multicare() -> DecisionRainforest {
    let endoscopy = Bct::of(
        "endoscopy",
        ["arthroscopy", "bronchoscopy", "colonoscopy", "cystoscopy", "egd", "gastroscopy", "laryngoscopy"],
    );
    let other_staining = Bct::of(
        "other_staining",
        [
            "acid_fast",
            "alcian_blue",
            "congo_red",
            "fish",
            "giemsa",
            "gram",
            "immunofluorescence",
            "masson_trichrome",
            "methenamine_silver",
            "methylene_blue",
            "papanicolaou",
            "pas",
            "van_gieson",
        ],
    );
    let pathology = Bct::new(
        "pathology",
        vec![
            ClassNode::regular("h_and_e"),
            ClassNode::regular("immunostaining"),
            aux("other_staining", other_staining),
        ],
    );
    let ultrasound = with_residual("ultrasound", vec![ClassNode::regular("echocardiogram")], "other_ultrasound");
    let radiology = Bct::new(
        "radiology",
        vec![
            ClassNode::regular("ct"),
            ClassNode::regular("mri"),
            regular("ultrasound", ultrasound),
            ClassNode::regular("x_ray"),
        ],
    );
    let top = Bct::new(
        "image_type",
        vec![regular("endoscopy", endoscopy), regular("pathology", pathology), aux("radiology", radiology)],
    );
    DecisionRainforest {
        trees: vec![
            Tree::new("image_type", top, TreeRole::Main),
            Tree::new(
                "attribute_angiography",
                binary("attribute_angiography", "angiography", "no_angiography"),
                TreeRole::Subsidiary,
            ),
        ],
        subsidiary_relations: vec![SubsidiaryRelation::new("radiology", "attribute_angiography")],
        ..Default::default()
    }
}

/// Four image modalities, an ultrasound site BCT and a doppler attribute in
/// a subsidiary tree.
pub fn image_modality() -> DecisionRainforest {
    let site = with_residual("ultrasound_site", vec![ClassNode::regular("echocardiogram")], "other_ultrasound");
    let top = Bct::new(
        "image_type",
        vec![
            ClassNode::regular("ct_scan"),
            ClassNode::regular("mri"),
            regular("ultrasound", site),
            ClassNode::regular("x_ray"),
        ],
    );
    DecisionRainforest {
        trees: vec![
            Tree::new("image_type", top, TreeRole::Main),
            Tree::new("attribute_doppler", binary("attribute_doppler", "doppler", "no_doppler"), TreeRole::Subsidiary),
        ],
        subsidiary_relations: vec![SubsidiaryRelation::new("ultrasound", "attribute_doppler")],
        ..Default::default()
    }
}

/// Seven flat labels adapted into a rainforest: `us` renamed, `roentgenogram`
/// and `x_ray` merged, `doppler_ultrasound` split and reintroduced as a
/// compound class.
pub fn doppler_ultrasound() -> DecisionRainforest {
    let top = Bct::of("image_type", ["ct", "mri", "ultrasound", "x_ray"]);
    DecisionRainforest {
        trees: vec![
            Tree::new("image_type", top, TreeRole::Main),
            Tree::new("attribute_doppler", binary("attribute_doppler", "doppler", "no_doppler"), TreeRole::Subsidiary),
        ],
        subsidiary_relations: vec![SubsidiaryRelation::new("ultrasound", "attribute_doppler")],
        preprocessing_rules: vec![
            PreprocessRule::new("us", ["ultrasound"]),
            PreprocessRule::new("roentgenogram", ["x_ray"]),
            PreprocessRule::new("x_ray", ["x_ray"]),
            PreprocessRule::new("doppler_ultrasound", ["doppler", "ultrasound"]),
        ],
        compound_rules: vec![CompoundRule::new("doppler_ultrasound", ["doppler", "ultrasound"])],
    }
}

/// Clinical-terminology style adaptation: disease categories and finding
/// sites in separate trees, with pneumonia concepts as compound classes.
pub fn pneumonia() -> DecisionRainforest {
    let agent = with_residual("agent", vec![ClassNode::regular("virus")], "other_agent");
    let category = with_residual("disease_category", vec![regular("infection", agent)], "other_disease");
    let top = Bct::new(
        "clinical_finding",
        vec![regular("disease", category), ClassNode::new("no_disease", ClassKind::ExclusionNegative)],
    );
    let respiratory = with_residual("respiratory_site", vec![ClassNode::regular("lung")], "other_respiratory_system");
    let site = with_residual("finding_site", vec![regular("respiratory_system", respiratory)], "other_site");
    DecisionRainforest {
        trees: vec![
            Tree::new("clinical_finding", top, TreeRole::Main),
            Tree::new("finding_site", site, TreeRole::Subsidiary),
        ],
        subsidiary_relations: vec![SubsidiaryRelation::new("disease", "finding_site")],
        compound_rules: vec![
            CompoundRule::new("viral_pneumonia", ["virus", "lung"]),
            CompoundRule::new("infective_pneumonia", ["infection", "lung"]),
            CompoundRule::new("respiratory_disease", ["respiratory_system", "disease"]),
        ],
        ..Default::default()
    }
}
