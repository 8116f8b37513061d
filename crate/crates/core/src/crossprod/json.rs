//! Name-keyed JSON form of a [`DoubleCatModel`]. Lists keep model order;
//! tables are nested maps with sorted keys, so output is deterministic.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::model::{DoubleCatModel, Edge, SquareEntry, SquareShape};
use crate::error::{Error, Result};
use crate::finite::category::{FinCategory, Morphism};

type Table = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<ArrowDoc>,
    pub identities: BTreeMap<String, String>,
    pub comp: Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ShapeDoc {
    Globular { cell: String },
    Framed { up: String, frame: String, down: String },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareDoc {
    pub name: String,
    pub shape: ShapeDoc,
    pub top: String,
    pub bottom: String,
    pub left: String,
    pub right: String,
}

/// The exported model. `vcomp[second][first]`, `hcomp[left][right]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub name: String,
    pub decorated: String,
    pub horizontal: String,
    pub objects: CategoryDoc,
    pub zerocells: Vec<String>,
    pub edges: Vec<ArrowDoc>,
    pub edge_identity: BTreeMap<String, String>,
    pub edge_comp: Table,
    pub squares: Vec<SquareDoc>,
    pub square_identity: BTreeMap<String, String>,
    pub vcomp: Table,
    pub hcomp: Table,
    pub unit: BTreeMap<String, String>,
}

fn table(names: &[String], n: usize, entries: &[Option<usize>]) -> Table {
    let mut out = Table::new();
    for (i, r) in entries.iter().enumerate() {
        if let Some(r) = r {
            out.entry(names[i / n].clone())
                .or_default()
                .insert(names[i % n].clone(), names[*r].clone());
        }
    }
    out
}

pub fn export_model(m: &DoubleCatModel) -> ModelDocument {
    let obj = &m.objects.objects;
    let mor: Vec<String> = m.objects.morphisms.iter().map(|f| f.name.clone()).collect();
    let edges: Vec<String> = m.edges.iter().map(|e| e.name.clone()).collect();
    let squares: Vec<String> = m.squares.iter().map(|s| s.name.clone()).collect();
    let arrow = |name: &str, s: usize, t: usize| ArrowDoc {
        name: name.to_string(),
        source: obj[s].clone(),
        target: obj[t].clone(),
    };
    ModelDocument {
        name: m.name.clone(),
        decorated: m.decorated_name.clone(),
        horizontal: m.horizontal_name.clone(),
        objects: CategoryDoc {
            name: m.objects.name.clone(),
            objects: obj.clone(),
            morphisms: m.objects.morphisms.iter().map(|f| arrow(&f.name, f.source, f.target)).collect(),
            identities: obj.iter().cloned().zip(m.objects.identities.iter().map(|&i| mor[i].clone())).collect(),
            comp: table(&mor, mor.len(), &m.objects.comp),
        },
        zerocells: m.zerocell_order.iter().map(|&o| obj[o].clone()).collect(),
        edges: m.edges.iter().map(|e| arrow(&e.name, e.source, e.target)).collect(),
        edge_identity: obj.iter().cloned().zip(m.edge_identity.iter().map(|&e| edges[e].clone())).collect(),
        edge_comp: table(&edges, edges.len(), &m.edge_comp),
        squares: m
            .squares
            .iter()
            .map(|s| SquareDoc {
                name: s.name.clone(),
                shape: match s.shape {
                    SquareShape::Globular { cell } => ShapeDoc::Globular { cell: squares[cell].clone() },
                    SquareShape::Framed { up, frame, down } => ShapeDoc::Framed {
                        up: squares[up].clone(),
                        frame: mor[frame].clone(),
                        down: squares[down].clone(),
                    },
                    SquareShape::Other => ShapeDoc::Other,
                },
                top: edges[s.top].clone(),
                bottom: edges[s.bottom].clone(),
                left: mor[s.left].clone(),
                right: mor[s.right].clone(),
            })
            .collect(),
        square_identity: edges.iter().cloned().zip(m.square_identity.iter().map(|&s| squares[s].clone())).collect(),
        vcomp: table(&squares, squares.len(), &m.vcomp),
        hcomp: table(&squares, squares.len(), &m.hcomp),
        unit: mor.iter().cloned().zip(m.unit.iter().map(|&s| squares[s].clone())).collect(),
    }
}

struct Names {
    kind: &'static str,
    index: HashMap<String, usize>,
}

impl Names {
    fn new<'a>(kind: &'static str, names: impl Iterator<Item = &'a String>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, n) in names.enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateName(format!("{kind} {n}")));
            }
        }
        Ok(Self { kind, index })
    }

    fn get(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("unknown {} `{name}`", self.kind)))
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    /// Dense table from a nested map; absent entries stay `None`.
    fn dense(&self, t: &Table) -> Result<Vec<Option<usize>>> {
        let n = self.len();
        let mut out = vec![None; n * n];
        for (a, row) in t {
            let i = self.get(a)?;
            for (b, r) in row {
                out[i * n + self.get(b)?] = Some(self.get(r)?);
            }
        }
        Ok(out)
    }

    /// A total map from these names to `target` names, in index order.
    fn total(&self, map: &BTreeMap<String, String>, target: &Names, order: &[String]) -> Result<Vec<usize>> {
        if map.len() != order.len() {
            return Err(Error::Invalid(format!("{} map does not cover every {}", target.kind, self.kind)));
        }
        order
            .iter()
            .map(|k| {
                let v = map
                    .get(k)
                    .ok_or_else(|| Error::Invalid(format!("no entry for {} `{k}`", self.kind)))?;
                target.get(v)
            })
            .collect()
    }
}

/// Rebuilds a model from its document. Every name must resolve.
pub fn import_model(doc: &ModelDocument) -> Result<DoubleCatModel> {
    let obj = Names::new("object", doc.objects.objects.iter())?;
    let mor = Names::new("morphism", doc.objects.morphisms.iter().map(|m| &m.name))?;
    let edges = Names::new("edge", doc.edges.iter().map(|e| &e.name))?;
    let squares = Names::new("square", doc.squares.iter().map(|s| &s.name))?;
    let mor_names: Vec<String> = doc.objects.morphisms.iter().map(|m| m.name.clone()).collect();
    let edge_names: Vec<String> = doc.edges.iter().map(|e| e.name.clone()).collect();

    let objects = FinCategory {
        name: doc.objects.name.clone(),
        objects: doc.objects.objects.clone(),
        morphisms: doc
            .objects
            .morphisms
            .iter()
            .map(|m| {
                Ok(Morphism {
                    name: m.name.clone(),
                    source: obj.get(&m.source)?,
                    target: obj.get(&m.target)?,
                })
            })
            .collect::<Result<_>>()?,
        identities: obj.total(&doc.objects.identities, &mor, &doc.objects.objects)?,
        comp: mor.dense(&doc.objects.comp)?,
    };
    let squares_list = doc
        .squares
        .iter()
        .map(|s| {
            Ok(SquareEntry {
                name: s.name.clone(),
                shape: match &s.shape {
                    ShapeDoc::Globular { cell } => SquareShape::Globular { cell: squares.get(cell)? },
                    ShapeDoc::Framed { up, frame, down } => SquareShape::Framed {
                        up: squares.get(up)?,
                        frame: mor.get(frame)?,
                        down: squares.get(down)?,
                    },
                    ShapeDoc::Other => SquareShape::Other,
                },
                top: edges.get(&s.top)?,
                bottom: edges.get(&s.bottom)?,
                left: mor.get(&s.left)?,
                right: mor.get(&s.right)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(DoubleCatModel {
        name: doc.name.clone(),
        decorated_name: doc.decorated.clone(),
        horizontal_name: doc.horizontal.clone(),
        zerocell_order: doc.zerocells.iter().map(|z| obj.get(z)).collect::<Result<_>>()?,
        edges: doc
            .edges
            .iter()
            .map(|e| {
                Ok(Edge {
                    name: e.name.clone(),
                    source: obj.get(&e.source)?,
                    target: obj.get(&e.target)?,
                })
            })
            .collect::<Result<_>>()?,
        edge_identity: obj.total(&doc.edge_identity, &edges, &doc.objects.objects)?,
        edge_comp: edges.dense(&doc.edge_comp)?,
        squares: squares_list,
        square_identity: edges.total(&doc.square_identity, &squares, &edge_names)?,
        vcomp: squares.dense(&doc.vcomp)?,
        hcomp: squares.dense(&doc.hcomp)?,
        unit: mor.total(&doc.unit, &squares, &mor_names)?,
        objects,
    })
}
