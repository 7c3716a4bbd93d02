//! Pinned schema.org vocabulary: classes, properties and the subclass DAG.
//!
//! The vocabulary is read from a compact JSON file instead of the upstream RDF
//! dumps. Data types are collapsed onto a closed set of [`Primitive`] kinds.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

/// The bundled vocabulary subset (schema.org 3.4 hierarchy).
pub const BUNDLED_VOCABULARY: &str = include_str!("../data/schemaorg-subset.json");

/// Scalar kinds a property value may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Primitive {
    Text,
    Number,
    Integer,
    Float,
    Boolean,
    Date,
    DateTime,
    Time,
    #[serde(rename = "URL")]
    Url,
}

impl Primitive {
    pub const ALL: [Primitive; 9] = [
        Primitive::Text,
        Primitive::Number,
        Primitive::Integer,
        Primitive::Float,
        Primitive::Boolean,
        Primitive::Date,
        Primitive::DateTime,
        Primitive::Time,
        Primitive::Url,
    ];

    pub fn from_token(token: &str) -> Option<Primitive> {
        Some(match token {
            "Text" => Primitive::Text,
            "Number" => Primitive::Number,
            "Integer" => Primitive::Integer,
            "Float" => Primitive::Float,
            "Boolean" => Primitive::Boolean,
            "Date" => Primitive::Date,
            "DateTime" => Primitive::DateTime,
            "Time" => Primitive::Time,
            "URL" => Primitive::Url,
            _ => return None,
        })
    }

    pub fn token(self) -> &'static str {
        match self {
            Primitive::Text => "Text",
            Primitive::Number => "Number",
            Primitive::Integer => "Integer",
            Primitive::Float => "Float",
            Primitive::Boolean => "Boolean",
            Primitive::Date => "Date",
            Primitive::DateTime => "DateTime",
            Primitive::Time => "Time",
            Primitive::Url => "URL",
        }
    }

    /// True when every value of `self` is also a value of `other`
    /// (schema.org: URL is a Text, Integer and Float are Numbers).
    pub fn narrows(self, other: Primitive) -> bool {
        self == other
            || matches!(
                (self, other),
                (Primitive::Url, Primitive::Text)
                    | (Primitive::Integer, Primitive::Number)
                    | (Primitive::Float, Primitive::Number)
            )
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDef {
    pub name: String,
    #[serde(default)]
    pub parents: Vec<String>,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyDef {
    pub name: String,
    #[serde(default)]
    pub domains: Vec<String>,
    pub ranges: Vec<String>,
    #[serde(default)]
    pub description: String,
}

impl PropertyDef {
    /// Primitive kinds among the declared ranges.
    pub fn primitive_ranges(&self) -> impl Iterator<Item = Primitive> + '_ {
        self.ranges.iter().filter_map(|r| Primitive::from_token(r))
    }

    /// Class tokens among the declared ranges.
    pub fn class_ranges(&self) -> impl Iterator<Item = &str> + '_ {
        self.ranges
            .iter()
            .filter(|r| Primitive::from_token(r).is_none())
            .map(String::as_str)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabularyFile {
    version: String,
    classes: Vec<ClassDef>,
    properties: Vec<PropertyDef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFault {
    DanglingReference,
    Cycle,
    Duplicate,
    EmptyName,
    EmptyRanges,
    ShadowsPrimitive,
    ExtraRoot,
}

impl fmt::Display for GraphFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFault::DanglingReference => "dangling reference",
            GraphFault::Cycle => "subclass cycle",
            GraphFault::Duplicate => "duplicate definition",
            GraphFault::EmptyName => "empty name",
            GraphFault::EmptyRanges => "property without ranges",
            GraphFault::ShadowsPrimitive => "class shadows a primitive kind",
            GraphFault::ExtraRoot => "class without parents other than Thing",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VocabError {
    #[error("vocabulary file not found: {0}")]
    FileMissing(PathBuf),
    #[error("cannot read vocabulary file: {0}")]
    Io(#[from] std::io::Error),
    #[error("vocabulary parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("vocabulary graph error ({fault}): {token}")]
    Graph { token: String, fault: GraphFault },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown class: {0}")]
pub struct UnknownClass(pub String);

/// Immutable class/property graph. Share behind an `Arc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabularyGraph {
    version: String,
    classes: BTreeMap<String, ClassDef>,
    properties: BTreeMap<String, PropertyDef>,
    // reflexive-transitive closure over parent edges
    ancestors: BTreeMap<String, BTreeSet<String>>,
}

pub fn load_vocabulary(path: impl AsRef<Path>) -> Result<VocabularyGraph, VocabError> {
    let path = path.as_ref();
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(VocabError::FileMissing(path.to_path_buf()))
        }
        Err(e) => return Err(e.into()),
    };
    VocabularyGraph::from_json(&text)
}

impl VocabularyGraph {
    pub fn bundled() -> VocabularyGraph {
        VocabularyGraph::from_json(BUNDLED_VOCABULARY).expect("bundled vocabulary is valid")
    }

    pub fn from_json(text: &str) -> Result<VocabularyGraph, VocabError> {
        let file: VocabularyFile = serde_json::from_str(text).map_err(|e| VocabError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::build(file.version, file.classes, file.properties)
    }

    fn build(
        version: String,
        class_list: Vec<ClassDef>,
        property_list: Vec<PropertyDef>,
    ) -> Result<VocabularyGraph, VocabError> {
        let graph_err = |token: &str, fault| VocabError::Graph {
            token: token.to_string(),
            fault,
        };

        let mut classes = BTreeMap::new();
        for mut class in class_list {
            if class.name.is_empty() {
                return Err(graph_err("", GraphFault::EmptyName));
            }
            if Primitive::from_token(&class.name).is_some() {
                return Err(graph_err(&class.name, GraphFault::ShadowsPrimitive));
            }
            class.parents.sort();
            class.parents.dedup();
            if classes.contains_key(&class.name) {
                return Err(graph_err(&class.name, GraphFault::Duplicate));
            }
            classes.insert(class.name.clone(), class);
        }
        for class in classes.values() {
            if class.parents.is_empty() && class.name != "Thing" {
                return Err(graph_err(&class.name, GraphFault::ExtraRoot));
            }
            if let Some(missing) = class.parents.iter().find(|p| !classes.contains_key(*p)) {
                return Err(graph_err(missing, GraphFault::DanglingReference));
            }
        }

        let mut properties = BTreeMap::new();
        for mut prop in property_list {
            if prop.name.is_empty() {
                return Err(graph_err("", GraphFault::EmptyName));
            }
            if prop.ranges.is_empty() {
                return Err(graph_err(&prop.name, GraphFault::EmptyRanges));
            }
            let known = |t: &String| classes.contains_key(t) || Primitive::from_token(t).is_some();
            if let Some(bad) = prop.domains.iter().chain(&prop.ranges).find(|t| !known(t)) {
                return Err(graph_err(bad, GraphFault::DanglingReference));
            }
            prop.domains.sort();
            prop.domains.dedup();
            prop.ranges.sort();
            prop.ranges.dedup();
            if properties.contains_key(&prop.name) {
                return Err(graph_err(&prop.name, GraphFault::Duplicate));
            }
            properties.insert(prop.name.clone(), prop);
        }

        let ancestors = ancestor_closure(&classes).map_err(|t| graph_err(&t, GraphFault::Cycle))?;
        Ok(VocabularyGraph {
            version,
            classes,
            properties,
            ancestors,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertyDef> {
        self.properties.values()
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.get(name)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyDef> {
        self.properties.get(name)
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.classes.contains_key(name)
    }

    /// Reflexive, transitive reachability over parent edges.
    pub fn is_subclass_of(&self, child: &str, ancestor: &str) -> Result<bool, UnknownClass> {
        if !self.classes.contains_key(ancestor) {
            return Err(UnknownClass(ancestor.to_string()));
        }
        let closure = self
            .ancestors
            .get(child)
            .ok_or_else(|| UnknownClass(child.to_string()))?;
        Ok(closure.contains(ancestor))
    }

    /// Like [`is_subclass_of`](Self::is_subclass_of) but unknown tokens are simply unrelated.
    pub fn conforms_to(&self, child: &str, ancestor: &str) -> bool {
        self.is_subclass_of(child, ancestor).unwrap_or(false)
    }

    pub fn ancestors_of(&self, class: &str) -> Result<&BTreeSet<String>, UnknownClass> {
        self.ancestors
            .get(class)
            .ok_or_else(|| UnknownClass(class.to_string()))
    }

    /// All classes that have `class` among their ancestors, itself included, name-sorted.
    pub fn descendants_of(&self, class: &str) -> Result<Vec<&str>, UnknownClass> {
        if !self.classes.contains_key(class) {
            return Err(UnknownClass(class.to_string()));
        }
        Ok(self
            .ancestors
            .iter()
            .filter(|(_, up)| up.contains(class))
            .map(|(name, _)| name.as_str())
            .collect())
    }

    /// Properties applicable to `class` through its ancestor closure, sorted by name.
    pub fn properties_of(&self, class: &str) -> Result<Vec<&PropertyDef>, UnknownClass> {
        let up = self.ancestors_of(class)?;
        Ok(self
            .properties
            .values()
            .filter(|p| p.domains.iter().any(|d| up.contains(d)))
            .collect())
    }

    pub fn is_property_of(&self, property: &str, class: &str) -> bool {
        match (self.properties.get(property), self.ancestors.get(class)) {
            (Some(p), Some(up)) => p.domains.iter().any(|d| up.contains(d)),
            _ => false,
        }
    }
}

/// Computes the reflexive ancestor set of every class, or returns a class on a cycle.
fn ancestor_closure(
    classes: &BTreeMap<String, ClassDef>,
) -> Result<BTreeMap<String, BTreeSet<String>>, String> {
    // Kahn's algorithm over child -> parent edges yields a topological order
    // from roots downward; anything left over sits on a cycle.
    let mut pending: BTreeMap<&str, usize> = classes
        .values()
        .map(|c| (c.name.as_str(), c.parents.len()))
        .collect();
    let mut children: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for c in classes.values() {
        for p in &c.parents {
            children.entry(p.as_str()).or_default().push(&c.name);
        }
    }
    let mut queue: VecDeque<&str> = pending
        .iter()
        .filter(|(_, n)| **n == 0)
        .map(|(name, _)| *name)
        .collect();
    let mut closure: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    while let Some(name) = queue.pop_front() {
        let mut up = BTreeSet::from([name.to_string()]);
        for p in &classes[name].parents {
            up.extend(closure[p.as_str()].iter().cloned());
        }
        closure.insert(name.to_string(), up);
        for child in children.get(name).into_iter().flatten() {
            let n = pending.get_mut(child).expect("child registered");
            *n -= 1;
            if *n == 0 {
                queue.push_back(child);
            }
        }
    }
    if closure.len() != classes.len() {
        let stuck = classes
            .keys()
            .find(|k| !closure.contains_key(*k))
            .expect("some class is unresolved");
        return Err(stuck.clone());
    }
    Ok(closure)
}

/// A vocabulary that can be swapped at runtime. Readers get a consistent snapshot.
#[derive(Debug)]
pub struct SharedVocabulary {
    current: RwLock<Arc<VocabularyGraph>>,
}

impl SharedVocabulary {
    pub fn new(graph: VocabularyGraph) -> Self {
        Self {
            current: RwLock::new(Arc::new(graph)),
        }
    }

    pub fn snapshot(&self) -> Arc<VocabularyGraph> {
        self.current.read().clone()
    }

    pub fn replace(&self, graph: VocabularyGraph) -> Arc<VocabularyGraph> {
        std::mem::replace(&mut *self.current.write(), Arc::new(graph))
    }

    /// Loads `path` and swaps it in; on error the current graph stays active.
    pub fn reload(&self, path: impl AsRef<Path>) -> Result<Arc<VocabularyGraph>, VocabError> {
        let graph = load_vocabulary(path)?;
        self.replace(graph);
        Ok(self.snapshot())
    }
}
