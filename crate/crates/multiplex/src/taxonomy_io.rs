//! `.mtx.json` taxonomy documents.
//!
//! A document is a JSON object with a version tag and four sections:
//! `taxonomy` (class trees), `has_subsidiary_tree` (relations),
//! `preprocessing` and `postprocessing`. Serialization is canonical, so a
//! parsed canonical document serializes back to the same bytes.

use std::collections::BTreeSet;

use multiplex_core::name::ROOT;
use multiplex_core::taxonomy::{
    validate_rainforest, Bct, ClassKind, ClassNode, CompoundRule, DecisionRainforest, ExclusionStyle, PreprocessRule,
    SubsidiaryRelation, Tree, TreeRole, ValidationError,
};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: &str = "1";
pub const EXTENSION: &str = ".mtx.json";

const SECTIONS: [&str; 5] = ["format_version", "taxonomy", "has_subsidiary_tree", "preprocessing", "postprocessing"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TaxonomyIoError {
    #[error("{line}:{column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    #[error("{line}:{column}: section `{section}` appears more than once")]
    DuplicateSection { section: String, line: usize, column: usize },
    #[error("{referrer} references undeclared `{name}`")]
    UnknownIdentifier { referrer: String, name: String },
    #[error("unsupported format_version `{0}` (expected \"1\")")]
    UnsupportedVersion(String),
    #[error("forest is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidForest(Vec<ValidationError>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format_version: String,
    taxonomy: Vec<TreeDoc>,
    #[serde(default, alias = "has_subsidary_tree")]
    has_subsidiary_tree: Vec<RelationDoc>,
    #[serde(default)]
    preprocessing: Vec<PreprocessDoc>,
    #[serde(default)]
    postprocessing: Vec<CompoundDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    tree: String,
    bct: BctDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BctDoc {
    id: String,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    exhaustive: bool,
    #[serde(default, skip_serializing_if = "is_auto")]
    exclusion_style: ExclusionStyle,
    classes: Vec<ClassDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    name: String,
    #[serde(default, skip_serializing_if = "is_regular")]
    kind: ClassKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bct: Option<BctDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    class: String,
    tree: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PreprocessDoc {
    source: String,
    targets: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompoundDoc {
    compound: String,
    components: Vec<String>,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

fn is_auto(s: &ExclusionStyle) -> bool {
    *s == ExclusionStyle::Auto
}

fn is_regular(k: &ClassKind) -> bool {
    *k == ClassKind::Regular
}

fn from_json_error(err: serde_json::Error) -> TaxonomyIoError {
    let message = err.to_string();
    let (line, column) = (err.line(), err.column());
    if let Some(rest) = message.strip_prefix("duplicate field `") {
        if let Some(section) = rest.split('`').next() {
            let section = if section == "has_subsidary_tree" { "has_subsidiary_tree" } else { section };
            if SECTIONS.contains(&section) {
                return TaxonomyIoError::DuplicateSection { section: section.to_string(), line, column };
            }
        }
    }
    let message = match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    TaxonomyIoError::SyntaxError { line, column, message }
}

fn bct_from_doc(doc: BctDoc, conditioning: Option<String>) -> Bct {
    let classes = doc
        .classes
        .into_iter()
        .map(|c| {
            let mut node = ClassNode::new(c.name, c.kind);
            if let Some(child) = c.bct {
                node.hierarchical_child = Some(Box::new(bct_from_doc(child, Some(node.name.clone()))));
            }
            node
        })
        .collect();
    let mut bct = Bct::new(doc.id, classes);
    bct.conditioning_class = conditioning;
    bct.exhaustive = doc.exhaustive;
    bct.exclusion_style = doc.exclusion_style;
    bct
}

fn bct_to_doc(bct: &Bct) -> BctDoc {
    BctDoc {
        id: bct.id.clone(),
        exhaustive: bct.exhaustive,
        exclusion_style: bct.exclusion_style,
        classes: bct
            .classes
            .iter()
            .map(|c| ClassDoc {
                name: c.name.clone(),
                kind: c.kind,
                bct: c.hierarchical_child.as_deref().map(bct_to_doc),
            })
            .collect(),
    }
}

/// Parses a document into a rainforest. Tree roles follow the relations: a
/// tree targeted by a `has_subsidiary_tree` entry is subsidiary, every other
/// tree is main. Structural problems beyond dangling references are left to
/// [`validate_rainforest`].
pub fn parse_taxonomy(text: &str) -> Result<DecisionRainforest, TaxonomyIoError> {
    let doc: Document = serde_json::from_str(text).map_err(from_json_error)?;
    if doc.format_version != FORMAT_VERSION {
        return Err(TaxonomyIoError::UnsupportedVersion(doc.format_version));
    }

    let subsidiary: BTreeSet<&str> = doc.has_subsidiary_tree.iter().map(|r| r.tree.as_str()).collect();
    let trees: Vec<Tree> = doc
        .taxonomy
        .into_iter()
        .map(|t| {
            let role = if subsidiary.contains(t.tree.as_str()) { TreeRole::Subsidiary } else { TreeRole::Main };
            Tree::new(t.tree, bct_from_doc(t.bct, None), role)
        })
        .collect();
    let forest = DecisionRainforest {
        trees,
        subsidiary_relations: doc
            .has_subsidiary_tree
            .into_iter()
            .map(|r| SubsidiaryRelation::new(r.class, r.tree))
            .collect(),
        preprocessing_rules: doc.preprocessing.into_iter().map(|r| PreprocessRule::new(r.source, r.targets)).collect(),
        compound_rules: doc.postprocessing.into_iter().map(|r| CompoundRule::new(r.compound, r.components)).collect(),
    };
    check_references(&forest)?;
    Ok(forest)
}

fn check_references(forest: &DecisionRainforest) -> Result<(), TaxonomyIoError> {
    let classes: BTreeSet<&str> = forest.classes().into_iter().map(|(c, _)| c.name.as_str()).collect();
    let trees: BTreeSet<&str> = forest.trees.iter().map(|t| t.name.as_str()).collect();
    let unknown =
        |referrer: String, name: &str| TaxonomyIoError::UnknownIdentifier { referrer, name: name.to_string() };
    for rel in &forest.subsidiary_relations {
        if rel.class != ROOT && !classes.contains(rel.class.as_str()) {
            return Err(unknown(format!("has_subsidiary_tree({}, {})", rel.class, rel.tree), &rel.class));
        }
        if !trees.contains(rel.tree.as_str()) {
            return Err(unknown(format!("has_subsidiary_tree({}, {})", rel.class, rel.tree), &rel.tree));
        }
    }
    for rule in &forest.preprocessing_rules {
        if let Some(t) = rule.targets.iter().find(|t| !classes.contains(t.as_str())) {
            return Err(unknown(format!("preprocessing of `{}`", rule.source), t));
        }
    }
    for rule in &forest.compound_rules {
        if let Some(c) = rule.components.iter().find(|c| !classes.contains(c.as_str())) {
            return Err(unknown(format!("postprocessing of `{}`", rule.compound), c));
        }
    }
    Ok(())
}

/// Canonical document text: fixed section order, declaration order inside
/// sections, two-space indentation and a trailing newline.
pub fn serialize_taxonomy(forest: &DecisionRainforest) -> Result<String, TaxonomyIoError> {
    let errors = validate_rainforest(forest);
    if !errors.is_empty() {
        return Err(TaxonomyIoError::InvalidForest(errors));
    }
    // Main tree first so that roles survive the round trip unchanged.
    let mut trees: Vec<&Tree> = forest.trees.iter().filter(|t| t.role == TreeRole::Main).collect();
    trees.extend(forest.trees.iter().filter(|t| t.role == TreeRole::Subsidiary));
    let doc = Document {
        format_version: FORMAT_VERSION.to_string(),
        taxonomy: trees.into_iter().map(|t| TreeDoc { tree: t.name.clone(), bct: bct_to_doc(&t.top_bct) }).collect(),
        has_subsidiary_tree: forest
            .subsidiary_relations
            .iter()
            .map(|r| RelationDoc { class: r.class.clone(), tree: r.tree.clone() })
            .collect(),
        preprocessing: forest
            .preprocessing_rules
            .iter()
            .map(|r| PreprocessDoc { source: r.source.clone(), targets: r.targets.clone() })
            .collect(),
        postprocessing: forest
            .compound_rules
            .iter()
            .map(|r| CompoundDoc { compound: r.compound.clone(), components: r.components.clone() })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use multiplex_core::fixtures;
    use multiplex_core::taxonomy::ValidationKind;

    #[test]
    fn doppler_document() {
        let text = serialize_taxonomy(&fixtures::doppler_ultrasound()).unwrap();
        let forest = parse_taxonomy(&text).unwrap();
        let names: Vec<&str> = forest.trees.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names, ["image_type", "attribute_doppler"]);
        assert_eq!(forest.subsidiary_relations, vec![SubsidiaryRelation::new("ultrasound", "attribute_doppler")]);
        assert_eq!(forest.preprocessing_actions().len(), 3);
        assert_eq!(forest.compound_rules.len(), 1);
        assert_eq!(forest, fixtures::doppler_ultrasound());
    }

    #[test]
    fn canonical_fixed_point() {
        for forest in [fixtures::hyperkvasir(), fixtures::multicare(), fixtures::pneumonia()] {
            let first = serialize_taxonomy(&forest).unwrap();
            let second = serialize_taxonomy(&parse_taxonomy(&first).unwrap()).unwrap();
            assert_eq!(first, second);
        }
    }

    #[test]
    fn misspelled_relation_section_is_accepted() {
        let text = serialize_taxonomy(&fixtures::image_modality())
            .unwrap()
            .replace("has_subsidiary_tree", "has_subsidary_tree");
        assert_eq!(parse_taxonomy(&text).unwrap(), fixtures::image_modality());
    }

    #[test]
    fn duplicate_section() {
        let text = r#"{"format_version": "1", "taxonomy": [], "preprocessing": [], "preprocessing": []}"#;
        assert!(matches!(
            parse_taxonomy(text),
            Err(TaxonomyIoError::DuplicateSection { ref section, line: 1, .. }) if section == "preprocessing"
        ));
        let text = r#"{"format_version": "1", "taxonomy": [], "has_subsidiary_tree": [], "has_subsidary_tree": []}"#;
        assert!(matches!(parse_taxonomy(text), Err(TaxonomyIoError::DuplicateSection { .. })));
    }

    #[test]
    fn unknown_section_and_syntax() {
        let text = "{\"format_version\": \"1\",\n \"taxonomy\": [],\n \"extra\": 1}";
        assert!(matches!(parse_taxonomy(text), Err(TaxonomyIoError::SyntaxError { line: 3, .. })));
        let err = parse_taxonomy("{\"format_version\": \"1\",\n  \"taxonomy\": [").unwrap_err();
        assert!(matches!(err, TaxonomyIoError::SyntaxError { line: 2, .. }), "{err:?}");
        assert!(matches!(
            parse_taxonomy(r#"{"format_version": "2", "taxonomy": []}"#),
            Err(TaxonomyIoError::UnsupportedVersion(_))
        ));
    }

    #[test]
    fn empty_taxonomy_parses_then_fails_validation() {
        let forest = parse_taxonomy(r#"{"format_version": "1", "taxonomy": []}"#).unwrap();
        let kinds: Vec<_> = validate_rainforest(&forest).iter().map(ValidationError::kind).collect();
        assert_eq!(kinds, [ValidationKind::EmptyClassTree]);
    }

    #[test]
    fn dangling_relation() {
        let text = r#"{"format_version": "1",
            "taxonomy": [{"tree": "t", "bct": {"id": "t", "classes": [{"name": "a"}, {"name": "b"}]}}],
            "has_subsidiary_tree": [{"class": "a", "tree": "ghost"}]}"#;
        assert_eq!(
            parse_taxonomy(text),
            Err(TaxonomyIoError::UnknownIdentifier {
                referrer: "has_subsidiary_tree(a, ghost)".into(),
                name: "ghost".into()
            })
        );
    }

    #[test]
    fn compound_rules_are_written_in_order() {
        let text = serialize_taxonomy(&fixtures::pneumonia()).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        let compounds: Vec<&str> =
            doc["postprocessing"].as_array().unwrap().iter().map(|r| r["compound"].as_str().unwrap()).collect();
        let forest = fixtures::pneumonia();
        let expected: Vec<&str> = forest.compound_rules.iter().map(|r| r.compound.as_str()).collect();
        assert_eq!(compounds, expected);
    }

    #[test]
    fn invalid_forest_is_not_serialized() {
        let mut forest = fixtures::image_modality();
        forest.bct_mut("attribute_doppler").unwrap().classes.truncate(1);
        assert!(matches!(serialize_taxonomy(&forest), Err(TaxonomyIoError::InvalidForest(_))));
    }
}
