//! Write-only export of a compiled tree as OWL 2 functional-syntax axioms.

use std::fmt::Write;

use multiplex_core::taxonomy::Dubt;

pub const EXTENSION: &str = ".ofn.txt";

const BASE: &str = "urn:multiplex:";
const PROPERTIES: [&str; 4] = ["tree_name", "class_path", "associated_compound_classes", "preprocessed_from"];

fn iri(name: &str) -> String {
    format!("<{BASE}{name}>")
}

fn literal(value: &str) -> String {
    let escaped = value.replace('\\', "\\\\").replace('"', "\\\"");
    format!("\"{escaped}\"")
}

/// Declarations for the root, every class and annotation property, one
/// `SubClassOf` per parent edge, one `DisjointUnion` per group and four
/// annotation assertions per class below the root. List-valued properties are joined with
/// `, `.
pub fn export_owl_axioms(dubt: &Dubt) -> String {
    let mut out = String::new();
    writeln!(out, "Ontology({}", iri("taxonomy")).unwrap();
    writeln!(out, "Declaration(Class({}))", iri(&dubt.root_name)).unwrap();
    for node in dubt.nodes() {
        writeln!(out, "Declaration(Class({}))", iri(&node.name)).unwrap();
    }
    for prop in PROPERTIES {
        writeln!(out, "Declaration(AnnotationProperty({}))", iri(prop)).unwrap();
    }
    for node in dubt.nodes() {
        writeln!(out, "SubClassOf({} {})", iri(&node.name), iri(&node.parent)).unwrap();
    }
    for group in dubt.groups() {
        let members: Vec<String> = group.members.iter().map(|m| iri(m)).collect();
        writeln!(out, "DisjointUnion({} {})", iri(&group.parent), members.join(" ")).unwrap();
    }
    for node in dubt.nodes() {
        let values = [
            node.tree_name.clone(),
            node.class_path.clone(),
            node.associated_compound_classes.join(", "),
            node.preprocessed_from.join(", "),
        ];
        for (prop, value) in PROPERTIES.iter().zip(values) {
            writeln!(out, "AnnotationAssertion({} {} {})", iri(prop), iri(&node.name), literal(&value)).unwrap();
        }
    }
    out.push_str(")\n");
    out
}
