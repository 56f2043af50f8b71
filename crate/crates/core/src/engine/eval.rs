//! Interpreter for the traversal steps the transpiler emits.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::result::ResultValue;
use super::store::{ElementId, GraphStore, Properties};
use super::EngineError;
use crate::ir::{IdLit, Start, Step, Traversal};

#[derive(Debug, Clone, PartialEq)]
enum Item {
    Vertex(ElementId),
    Edge(ElementId),
    Value(ResultValue),
}

/// Outcome of running a traversal to its terminal step.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub value: ResultValue,
    /// Elements removed by `drop()`.
    pub dropped: usize,
}

enum Access<'a> {
    Read(&'a GraphStore),
    Write(&'a mut GraphStore),
}

impl Access<'_> {
    fn store(&self) -> &GraphStore {
        match self {
            Access::Read(s) => s,
            Access::Write(s) => s,
        }
    }

    fn store_mut(&mut self) -> Result<&mut GraphStore, EngineError> {
        match self {
            Access::Read(_) => Err(EngineError::ReadOnly),
            Access::Write(s) => Ok(s),
        }
    }
}

struct Interp<'a> {
    access: Access<'a>,
    dropped: usize,
}

impl GraphStore {
    /// Runs a read-only traversal.
    pub fn query(&self, t: &Traversal) -> Result<ResultValue, EngineError> {
        let mut i = Interp { access: Access::Read(self), dropped: 0 };
        i.run_root(t).map(|e| e.value)
    }

    /// Runs a traversal that may modify the store.
    pub fn execute(&mut self, t: &Traversal) -> Result<Execution, EngineError> {
        let mut i = Interp { access: Access::Write(self), dropped: 0 };
        let value = i.run_root(t)?.value;
        Ok(Execution { value, dropped: i.dropped })
    }
}

fn bad(step: &Step, why: &str) -> EngineError {
    EngineError::Invalid(format!("{why}: {step:?}"))
}

impl Interp<'_> {
    fn run_root(&mut self, t: &Traversal) -> Result<Execution, EngineError> {
        if t.start != Start::Graph {
            return Err(EngineError::Invalid("a root traversal starts at g".into()));
        }
        let Some((last, body)) = t.steps.split_last() else {
            return Err(EngineError::Invalid("empty traversal".into()));
        };
        if !last.is_terminal() {
            return Err(EngineError::Invalid("traversal lacks a terminal step".into()));
        }
        let items = self.steps(body, None)?;
        let value = match last {
            Step::ToList => ResultValue::List(items.into_iter().map(|i| self.render(i)).collect()),
            Step::Next => items.into_iter().next().map_or(ResultValue::Null, |i| self.render(i)),
            _ => ResultValue::Null,
        };
        Ok(Execution { value, dropped: self.dropped })
    }

    fn render(&self, item: Item) -> ResultValue {
        match item {
            Item::Vertex(id) | Item::Edge(id) => ResultValue::Id(id),
            Item::Value(v) => v,
        }
    }

    /// Runs an anonymous traversal with `input` as its single traverser.
    fn sub(&mut self, t: &Traversal, input: &Item) -> Result<Vec<Item>, EngineError> {
        self.steps(&t.steps, Some(input.clone()))
    }

    fn properties(&self, item: &Item) -> Option<&Properties> {
        let s = self.access.store();
        match item {
            Item::Vertex(id) => s.vertex(*id).map(|v| &v.properties),
            Item::Edge(id) => s.edge(*id).map(|e| &e.properties),
            Item::Value(_) => None,
        }
    }

    fn label(&self, item: &Item) -> Option<&str> {
        let s = self.access.store();
        match item {
            Item::Vertex(id) => s.vertex(*id).map(|v| v.label.as_str()),
            Item::Edge(id) => s.edge(*id).map(|e| e.label.as_str()),
            Item::Value(_) => None,
        }
    }

    fn source(&self, id: &Option<IdLit>, vertices: bool) -> Vec<Item> {
        let s = self.access.store();
        let wrap = |id| if vertices { Item::Vertex(id) } else { Item::Edge(id) };
        match id {
            None if vertices => s.vertices().map(|(id, _)| wrap(id)).collect(),
            None => s.edges().map(|(id, _)| wrap(id)).collect(),
            Some(IdLit::Int(n)) => {
                let exists = if vertices { s.vertex(*n).is_some() } else { s.edge(*n).is_some() };
                if exists {
                    alloc::vec![wrap(*n)]
                } else {
                    Vec::new()
                }
            }
            Some(IdLit::Str(_)) => Vec::new(),
        }
    }

    fn steps(&mut self, steps: &[Step], input: Option<Item>) -> Result<Vec<Item>, EngineError> {
        let mut items: Vec<Item> = input.into_iter().collect();
        let mut started = false;
        let mut i = 0;
        while i < steps.len() {
            let step = &steps[i];
            i += 1;
            let first = !started;
            started = true;
            items = match step {
                Step::V(id) => self.source(id, true),
                Step::E(id) => self.source(id, false),
                Step::AddV(label) => {
                    let count = if first && items.is_empty() { 1 } else { items.len() };
                    let store = self.access.store_mut()?;
                    (0..count).map(|_| Item::Vertex(store.add_vertex(label.clone(), Properties::new()))).collect()
                }
                Step::AddE(label) => {
                    let Some(Step::To(to)) = steps.get(i) else {
                        return Err(bad(step, "add_e must be followed by to"));
                    };
                    i += 1;
                    let mut pairs = Vec::with_capacity(items.len());
                    for item in &items {
                        let Item::Vertex(src) = item else { return Err(bad(step, "add_e needs a vertex")) };
                        let target = self.sub(to, item)?.into_iter().next();
                        match target {
                            Some(Item::Vertex(dst)) => pairs.push((*src, dst)),
                            _ => return Err(EngineError::NotFound("target vertex".into())),
                        }
                    }
                    let store = self.access.store_mut()?;
                    let mut out = Vec::with_capacity(pairs.len());
                    for (s, d) in pairs {
                        out.push(Item::Edge(store.add_edge(label.clone(), s, d, Properties::new())?));
                    }
                    out
                }
                Step::To(_) => return Err(bad(step, "to without add_e")),
                Step::HasLabel(l) => items.into_iter().filter(|it| self.label(it) == Some(l.as_str())).collect(),
                Step::Has(key, p) => {
                    items.into_iter().filter(|it| self.properties(it).and_then(|props| props.get(key)).is_some_and(|v| v.satisfies(p.op, &p.value))).collect()
                }
                Step::Where(t) => self.retain(items, |me, it| Ok(!me.sub(t, it)?.is_empty()))?,
                Step::And(ts) => self.retain(items, |me, it| {
                    for t in ts {
                        if me.sub(t, it)?.is_empty() {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                })?,
                Step::Or(ts) => self.retain(items, |me, it| {
                    for t in ts {
                        if !me.sub(t, it)?.is_empty() {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                })?,
                Step::OutE(l) | Step::InE(l) => {
                    let out = matches!(step, Step::OutE(_));
                    let s = self.access.store();
                    let mut next = Vec::new();
                    for it in &items {
                        let Item::Vertex(v) = it else { return Err(bad(step, "edge steps need a vertex")) };
                        let Some(vx) = s.vertex(*v) else { continue };
                        let ids: Vec<ElementId> = if out { vx.out_edges().collect() } else { vx.in_edges().collect() };
                        next.extend(ids.into_iter().filter(|e| s.edge(*e).is_some_and(|e| e.label == *l)).map(Item::Edge));
                    }
                    next
                }
                Step::InV | Step::OutV => {
                    let s = self.access.store();
                    let mut next = Vec::with_capacity(items.len());
                    for it in &items {
                        let Item::Edge(e) = it else { return Err(bad(step, "in_v/out_v need an edge")) };
                        let Some(edge) = s.edge(*e) else { continue };
                        next.push(Item::Vertex(if matches!(step, Step::InV) { edge.target } else { edge.source }));
                    }
                    next
                }
                Step::Values(key) => items
                    .iter()
                    .filter_map(|it| self.properties(it).and_then(|p| p.get(key)))
                    .filter(|v| !v.is_null())
                    .map(|v| Item::Value(ResultValue::from_scalar(v)))
                    .collect(),
                Step::Id => items
                    .into_iter()
                    .map(|it| match it {
                        Item::Vertex(id) | Item::Edge(id) => Ok(Item::Value(ResultValue::Id(id))),
                        Item::Value(_) => Err(bad(step, "id of a value")),
                    })
                    .collect::<Result<_, _>>()?,
                Step::Label => items.iter().filter_map(|it| self.label(it)).map(|l| Item::Value(ResultValue::String(l.into()))).collect(),
                Step::Constant(c) => {
                    if first && items.is_empty() {
                        alloc::vec![Item::Value(ResultValue::from_scalar(c))]
                    } else {
                        items.iter().map(|_| Item::Value(ResultValue::from_scalar(c))).collect()
                    }
                }
                Step::Coalesce(ts) => {
                    let mut next = Vec::new();
                    for it in &items {
                        for t in ts {
                            let r = self.sub(t, it)?;
                            if !r.is_empty() {
                                next.extend(r);
                                break;
                            }
                        }
                    }
                    next
                }
                Step::Project(entries) => {
                    // Project is 1:1, so pagination right after it can run first.
                    while let Some(Step::Skip(n) | Step::Limit(n)) = steps.get(i) {
                        let n = usize::try_from(*n).unwrap_or(usize::MAX);
                        items = if matches!(steps[i], Step::Skip(_)) { items.into_iter().skip(n).collect() } else { items.into_iter().take(n).collect() };
                        i += 1;
                    }
                    let mut next = Vec::with_capacity(items.len());
                    for it in &items {
                        let mut map = Vec::with_capacity(entries.len());
                        for (k, t) in entries {
                            let v = self.sub(t, it)?.into_iter().next().map_or(ResultValue::Null, |i| self.render(i));
                            map.push((k.clone(), v));
                        }
                        next.push(Item::Value(ResultValue::Map(map)));
                    }
                    next
                }
                Step::OrderBy(terms) => {
                    let mut keyed = Vec::with_capacity(items.len());
                    for it in items {
                        let mut keys = Vec::with_capacity(terms.len());
                        for (t, _) in terms {
                            match self.sub(t, &it)?.into_iter().next() {
                                Some(k) => keys.push(self.render(k)),
                                None => return Err(bad(step, "order key produced no value")),
                            }
                        }
                        keyed.push((keys, it));
                    }
                    keyed.sort_by(|(a, _), (b, _)| {
                        for ((x, y), (_, dir)) in a.iter().zip(b).zip(terms) {
                            let o = dir.apply(x.sort_cmp(y));
                            if o != Ordering::Equal {
                                return o;
                            }
                        }
                        Ordering::Equal
                    });
                    keyed.into_iter().map(|(_, it)| it).collect()
                }
                Step::Skip(n) => items.into_iter().skip(usize::try_from(*n).unwrap_or(usize::MAX)).collect(),
                Step::Limit(n) => items.into_iter().take(usize::try_from(*n).unwrap_or(usize::MAX)).collect(),
                Step::Fold => {
                    let list = items.into_iter().map(|i| self.render(i)).collect();
                    alloc::vec![Item::Value(ResultValue::List(list))]
                }
                Step::Property(key, value) => {
                    let store = self.access.store_mut()?;
                    for it in &items {
                        let props = match it {
                            Item::Vertex(id) => store.vertex_properties_mut(*id),
                            Item::Edge(id) => store.edge_properties_mut(*id),
                            Item::Value(_) => return Err(bad(step, "property on a value")),
                        };
                        if let Some(props) = props {
                            if value.is_null() {
                                props.remove(key);
                            } else {
                                props.insert(key.clone(), value.clone());
                            }
                        }
                    }
                    items
                }
                Step::Drop => {
                    let store = self.access.store_mut()?;
                    for it in &items {
                        let removed = match it {
                            Item::Vertex(id) => store.remove_vertex(*id),
                            Item::Edge(id) => store.remove_edge(*id),
                            Item::Value(_) => false,
                        };
                        self.dropped += usize::from(removed);
                    }
                    Vec::new()
                }
                Step::ToList | Step::Next | Step::Iterate => return Err(bad(step, "terminal step inside a traversal")),
            };
        }
        Ok(items)
    }

    fn retain(&mut self, items: Vec<Item>, mut keep: impl FnMut(&mut Self, &Item) -> Result<bool, EngineError>) -> Result<Vec<Item>, EngineError> {
        let mut out = Vec::with_capacity(items.len());
        for it in items {
            if keep(self, &it)? {
                out.push(it);
            }
        }
        Ok(out)
    }
}
