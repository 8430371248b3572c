//! Versioned JSON encoding of witnesses. Structures name states by id, not
//! by child position.

use serde::{Deserialize, Serialize};

use super::{ShallowModel, State};
use crate::arith::{parse_rat, Rat};
use crate::error::{Error, Result};
use crate::logic::Logic;
use crate::logics::agency::Three;
use crate::onestep::{Extension, Structure};

const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    v: u32,
    logic: String,
    root: usize,
    states: Vec<StateDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    id: usize,
    vars: Vec<String>,
    #[serde(rename = "loop")]
    looped: bool,
    children: Vec<usize>,
    structure: StructureDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum StructureDoc {
    Kripke {
        succ: Vec<usize>,
    },
    Cond {
        entries: Vec<(Vec<usize>, Vec<usize>)>,
    },
    Agency {
        entries: Vec<(Vec<usize>, String)>,
    },
    Count {
        weights: Vec<(usize, u64)>,
        #[serde(rename = "self", default, skip_serializing_if = "Option::is_none")]
        own: Option<u64>,
    },
    Prob {
        mass: Vec<(usize, String)>,
        #[serde(rename = "self", default, skip_serializing_if = "Option::is_none")]
        own: Option<String>,
    },
}

/// Pretty-printed JSON; identical models give identical text.
pub fn to_json(m: &ShallowModel) -> String {
    let states = m
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let ids = |e: &Extension| e.iter().map(|k| s.children[k]).collect::<Vec<_>>();
            // Per-child values split into the other children and the state itself.
            fn split<T: Clone>(s: &State, i: usize, values: &[T]) -> (Vec<(usize, T)>, Option<T>) {
                let mut own = None;
                let mut rest = Vec::new();
                for (&c, v) in s.children.iter().zip(values) {
                    if c == i {
                        own = Some(v.clone());
                    } else {
                        rest.push((c, v.clone()));
                    }
                }
                (rest, own)
            }
            let structure = match &s.structure {
                Structure::Kripke { succ } => StructureDoc::Kripke { succ: ids(succ) },
                Structure::Cond { entries } => StructureDoc::Cond {
                    entries: entries.iter().map(|(p, v)| (ids(p), ids(v))).collect(),
                },
                Structure::Agency { entries } => StructureDoc::Agency {
                    entries: entries
                        .iter()
                        .map(|(p, t)| (ids(p), t.name().to_string()))
                        .collect(),
                },
                Structure::Count { weights } => {
                    let (weights, own) = split(s, i, weights);
                    StructureDoc::Count { weights, own }
                }
                Structure::Prob { mass } => {
                    let text: Vec<String> = mass.iter().map(Rat::to_string).collect();
                    let (mass, own) = split(s, i, &text);
                    StructureDoc::Prob { mass, own }
                }
            };
            StateDoc {
                id: i,
                vars: s.vars.iter().cloned().collect(),
                looped: s.looped,
                children: s.children.clone(),
                structure,
            }
        })
        .collect();
    let doc = Doc {
        v: VERSION,
        logic: m.logic.to_string(),
        root: m.root,
        states,
    };
    serde_json::to_string_pretty(&doc).expect("witness documents always serialize")
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

/// Parses and validates a witness document.
pub fn from_json(text: &str) -> Result<ShallowModel> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    if doc.v != VERSION {
        return Err(schema(format!("unsupported version {}", doc.v)));
    }
    let logic: Logic = doc.logic.parse()?;
    let mut states = Vec::with_capacity(doc.states.len());
    for (i, s) in doc.states.into_iter().enumerate() {
        if s.id != i {
            return Err(schema(format!("state {i} carries id {}", s.id)));
        }
        let children = s.children;
        let position = |id: usize| {
            children
                .iter()
                .position(|&c| c == id)
                .ok_or_else(|| schema(format!("state {i} refers to {id}, which is not a child")))
        };
        let ext = |ids: &[usize]| -> Result<Extension> {
            let mut e = Extension::empty(children.len());
            for &id in ids {
                e.insert(position(id)?);
            }
            Ok(e)
        };
        // Per-child values from the listed children and the state itself.
        let spread = |listed: &[usize], own: bool| -> Result<Vec<Option<usize>>> {
            let mut at = vec![None; children.len()];
            for (k, &id) in listed.iter().enumerate() {
                if id == i {
                    return Err(schema(format!("state {i} lists itself outside `self`")));
                }
                let p = position(id)?;
                if at[p].replace(k).is_some() {
                    return Err(schema(format!("state {i} lists child {id} twice")));
                }
            }
            if own != children.contains(&i) {
                return Err(schema(format!("state {i}: `self` disagrees with its children")));
            }
            Ok(at)
        };
        let structure = match s.structure {
            StructureDoc::Kripke { succ } => Structure::Kripke { succ: ext(&succ)? },
            StructureDoc::Cond { entries } => Structure::Cond {
                entries: entries
                    .iter()
                    .map(|(p, v)| Ok((ext(p)?, ext(v)?)))
                    .collect::<Result<_>>()?,
            },
            StructureDoc::Agency { entries } => Structure::Agency {
                entries: entries
                    .iter()
                    .map(|(p, t)| {
                        let t = Three::from_name(t)
                            .ok_or_else(|| schema(format!("unknown agency value `{t}`")))?;
                        Ok((ext(p)?, t))
                    })
                    .collect::<Result<_>>()?,
            },
            StructureDoc::Count { weights, own } => {
                let ids: Vec<usize> = weights.iter().map(|(id, _)| *id).collect();
                let at = spread(&ids, own.is_some())?;
                Structure::Count {
                    weights: children
                        .iter()
                        .zip(at)
                        .map(|(&c, k)| match k {
                            Some(k) => weights[k].1,
                            None if c == i => own.unwrap_or(0),
                            None => 0,
                        })
                        .collect(),
                }
            }
            StructureDoc::Prob { mass, own } => {
                let ids: Vec<usize> = mass.iter().map(|(id, _)| *id).collect();
                let at = spread(&ids, own.is_some())?;
                let value = |t: &str| {
                    parse_rat(t).ok_or_else(|| schema(format!("`{t}` is not a rational")))
                };
                let mut out = Vec::with_capacity(children.len());
                for (&c, k) in children.iter().zip(at) {
                    out.push(match k {
                        Some(k) => value(&mass[k].1)?,
                        None if c == i => value(own.as_deref().unwrap_or("0"))?,
                        None => Rat::from_integer(0.into()),
                    });
                }
                Structure::Prob { mass: out }
            }
        };
        states.push(State {
            vars: s.vars.into_iter().collect(),
            looped: s.looped,
            children,
            structure,
        });
    }
    let m = ShallowModel {
        logic,
        root: doc.root,
        states,
    };
    m.check_well_formed().map_err(|e| schema(e.to_string()))?;
    Ok(m)
}
