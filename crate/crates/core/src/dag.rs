//! The parallel reduction DAG rooted at `p(ñ)`.
//!
//! Vertices are ground atoms reachable from the root by the system's rules.
//! The root sits in the primary plane at `(0, ñ)`; a rule fan entry `P(u)`
//! ends a path at the terminal primary vertex `(j, 0)` with `j = ñ - u`.
//! Auxiliary atoms keep their own `(n, k)` coordinates.
//!
//! Reading the DAG as a direct recurrence
//! `p(ñ) = c_0 + sum_j c_j p(ñ - j)`: `c_j` is the signed number of paths from
//! the root to `(j, 0)` and `c_0` collects the constant labels weighted by their
//! signed path multiplicities.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rewrite::{Atom, RewriteSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Auxiliary,
    Primary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexRole {
    Root,
    Auxiliary,
    Terminal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DagVertex {
    pub id: usize,
    pub role: VertexRole,
    pub plane: Plane,
    /// `(n, k)` for auxiliary vertices, `(j, n)` in the primary plane.
    pub coords: (i64, i64),
    /// The atom the vertex stands for.
    pub atom: Atom,
    pub constant_label: i64,
    /// Rule whose ground instance rewrites this vertex; `None` for terminals.
    pub rule: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DagEdge {
    pub source: usize,
    pub target: usize,
    pub sign: i64,
    pub origin_rule: String,
    pub fan_index: usize,
}

/// An immutable reduction DAG for one `ñ`.
#[derive(Debug, Clone)]
pub struct ReductionDag {
    system: String,
    n_tilde: i64,
    vertices: Vec<DagVertex>,
    edges: Vec<DagEdge>,
    out: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

/// The direct recurrence read off a DAG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtractedRecurrence {
    pub n_tilde: i64,
    pub constant: BigInt,
    /// `c_j` for every `1 <= j <= ñ`.
    pub coeffs: BTreeMap<i64, BigInt>,
}

impl ExtractedRecurrence {
    pub fn coeff(&self, j: i64) -> BigInt {
        self.coeffs.get(&j).cloned().unwrap_or_default()
    }

    /// `c_0 + sum_j c_j p(ñ - j)` given `p(0..ñ)`.
    pub fn evaluate(&self, p: &[BigInt]) -> BigInt {
        let mut acc = self.constant.clone();
        for (&j, c) in &self.coeffs {
            acc += c * &p[(self.n_tilde - j) as usize];
        }
        acc
    }
}

/// One root-to-sink path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DagPath {
    pub vertices: Vec<Atom>,
    /// Fan position taken at each edge.
    pub fan_indices: Vec<usize>,
    pub sign: i64,
    /// Coefficient index when the path ends at a terminal primary vertex.
    pub j: Option<i64>,
}

/// Default bound on the number of DAG vertices.
pub fn default_vertex_budget(n_tilde: u64) -> usize {
    let n = n_tilde as usize + 1;
    (200 * n * n).max(10_000)
}

/// Default bound on the number of enumerated paths.
pub const DEFAULT_PATH_BUDGET: usize = 2_000_000;

fn budget_or(default: usize) -> usize {
    crate::budget_override().unwrap_or(default)
}

impl ReductionDag {
    pub fn system(&self) -> &str {
        &self.system
    }

    pub fn n_tilde(&self) -> i64 {
        self.n_tilde
    }

    pub fn root(&self) -> &DagVertex {
        &self.vertices[0]
    }

    pub fn vertices(&self) -> &[DagVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[DagEdge] {
        &self.edges
    }

    /// Outgoing edges of vertex `id` in fan order.
    pub fn out_edges(&self, id: usize) -> impl Iterator<Item = &DagEdge> {
        self.out[id].iter().map(move |&e| &self.edges[e])
    }

    /// Vertex ids in a topological order starting at the root.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn vertex_by_atom(&self, atom: &Atom) -> Option<&DagVertex> {
        self.vertices
            .iter()
            .find(|v| v.role != VertexRole::Terminal && v.atom == *atom)
    }

    pub fn terminal(&self, j: i64) -> Option<&DagVertex> {
        self.vertices
            .iter()
            .find(|v| v.role == VertexRole::Terminal && v.coords.0 == j)
    }

    /// Signed number of root-to-vertex paths, per vertex id.
    pub fn multiplicities(&self) -> Vec<BigInt> {
        let mut mult = vec![BigInt::zero(); self.vertices.len()];
        mult[0] = BigInt::one();
        for &v in &self.topo {
            if mult[v].is_zero() {
                continue;
            }
            let m = mult[v].clone();
            for e in self.out_edges(v) {
                mult[e.target] += &m * e.sign;
            }
        }
        mult
    }

    pub fn extract(&self) -> ExtractedRecurrence {
        let mult = self.multiplicities();
        let mut constant = BigInt::zero();
        let mut coeffs: BTreeMap<i64, BigInt> =
            (1..=self.n_tilde).map(|j| (j, BigInt::zero())).collect();
        for (v, m) in self.vertices.iter().zip(&mult) {
            constant += m * v.constant_label;
            if v.role == VertexRole::Terminal {
                *coeffs
                    .get_mut(&v.coords.0)
                    .expect("terminal index checked at build") += m;
            }
        }
        ExtractedRecurrence {
            n_tilde: self.n_tilde,
            constant,
            coeffs,
        }
    }

    /// Every root-to-sink path, depth first in fan order.
    pub fn paths(&self, budget: usize) -> Result<Vec<DagPath>> {
        let mut out = Vec::new();
        let mut vertices = vec![0usize];
        let mut fan: Vec<usize> = Vec::new();
        let mut sign = 1i64;
        // each stack entry: (vertex, next outgoing edge to try)
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        while let Some(&(v, next)) = stack.last() {
            let edges = &self.out[v];
            if next == 0 && edges.is_empty() {
                if out.len() == budget {
                    return Err(Error::BudgetExceeded {
                        what: format!("paths of the `{}` DAG at ñ={}", self.system, self.n_tilde),
                        budget,
                    });
                }
                let last = &self.vertices[v];
                out.push(DagPath {
                    vertices: vertices.iter().map(|&i| self.vertices[i].atom).collect(),
                    fan_indices: fan.clone(),
                    sign,
                    j: (last.role == VertexRole::Terminal).then_some(last.coords.0),
                });
            }
            if next < edges.len() {
                let edge = &self.edges[edges[next]];
                stack.last_mut().expect("nonempty").1 += 1;
                sign *= edge.sign;
                fan.push(edge.fan_index);
                vertices.push(edge.target);
                stack.push((edge.target, 0));
            } else {
                stack.pop();
                if let Some(&(parent, next)) = stack.last() {
                    let edge = &self.edges[self.out[parent][next - 1]];
                    sign *= edge.sign;
                    fan.pop();
                    vertices.pop();
                }
            }
        }
        Ok(out)
    }
}

/// Builds the DAG of `system` rooted at `P(ñ)`, failing once more than
/// `budget` vertices are reachable.
pub fn build_dag(system: &RewriteSystem, n_tilde: u64, budget: usize) -> Result<ReductionDag> {
    let n_tilde = n_tilde as i64;
    let root_atom = Atom::Primary(n_tilde);
    let mut vertices: Vec<DagVertex> = Vec::new();
    let mut edges: Vec<DagEdge> = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<(VertexRole, i64, i64), usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let mut intern = |role: VertexRole,
                      atom: Atom,
                      vertices: &mut Vec<DagVertex>,
                      out: &mut Vec<Vec<usize>>|
     -> Result<(usize, bool)> {
        let coords = match (role, atom) {
            (VertexRole::Root, _) => (0, n_tilde),
            (VertexRole::Terminal, Atom::Primary(u)) => (n_tilde - u, 0),
            (_, a) => a.coords(),
        };
        if let Some(&id) = index.get(&(role, coords.0, coords.1)) {
            return Ok((id, false));
        }
        if vertices.len() == budget {
            return Err(Error::BudgetExceeded {
                what: format!("vertices of the `{}` DAG at ñ={n_tilde}", system.name()),
                budget,
            });
        }
        let id = vertices.len();
        index.insert((role, coords.0, coords.1), id);
        vertices.push(DagVertex {
            id,
            role,
            plane: if atom.is_primary() {
                Plane::Primary
            } else {
                Plane::Auxiliary
            },
            coords,
            atom,
            constant_label: 0,
            rule: None,
        });
        out.push(Vec::new());
        Ok((id, true))
    };

    intern(VertexRole::Root, root_atom, &mut vertices, &mut out)?;
    queue.push_back(0);
    while let Some(v) = queue.pop_front() {
        let atom = vertices[v].atom;
        let ground = system
            .ground_rule(&atom)?
            .ok_or_else(|| Error::NoRuleApplies {
                system: system.name().to_owned(),
                atom,
            })?;
        vertices[v].constant_label = ground.constant;
        vertices[v].rule = Some(ground.rule.clone());
        let mut seen = Vec::with_capacity(ground.fan.len());
        for (fan_index, entry) in ground.fan.iter().enumerate() {
            if entry.coeff == 0 {
                continue;
            }
            if entry.coeff.abs() != 1 || seen.contains(&entry.target) {
                return Err(Error::Invariant(format!(
                    "ground rule {} at {atom} is not unitary",
                    ground.rule
                )));
            }
            seen.push(entry.target);
            let (target, fresh) = match entry.target {
                Atom::Primary(u) => {
                    let j = n_tilde - u;
                    if !(1..=n_tilde).contains(&j) {
                        return Err(Error::Invariant(format!(
                            "{atom} reaches {} outside 1..={n_tilde} of the coefficient range",
                            entry.target
                        )));
                    }
                    intern(VertexRole::Terminal, entry.target, &mut vertices, &mut out)?
                }
                aux => intern(VertexRole::Auxiliary, aux, &mut vertices, &mut out)?,
            };
            if fresh && vertices[target].role == VertexRole::Auxiliary {
                queue.push_back(target);
            }
            out[v].push(edges.len());
            edges.push(DagEdge {
                source: v,
                target,
                sign: entry.coeff,
                origin_rule: ground.rule.clone(),
                fan_index,
            });
        }
    }

    let topo = topological_sort(&vertices, &edges, &out).map_err(|v| Error::Cyclic {
        system: system.name().to_owned(),
        atom: vertices[v].atom,
    })?;
    Ok(ReductionDag {
        system: system.name().to_owned(),
        n_tilde,
        vertices,
        edges,
        out,
        topo,
    })
}

/// Kahn's algorithm; on a cycle returns some vertex on or behind it.
fn topological_sort(
    vertices: &[DagVertex],
    edges: &[DagEdge],
    out: &[Vec<usize>],
) -> std::result::Result<Vec<usize>, usize> {
    let mut indegree = vec![0usize; vertices.len()];
    for e in edges {
        indegree[e.target] += 1;
    }
    let mut ready: VecDeque<usize> = (0..vertices.len()).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(vertices.len());
    while let Some(v) = ready.pop_front() {
        order.push(v);
        for &e in &out[v] {
            let t = edges[e].target;
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.push_back(t);
            }
        }
    }
    if order.len() == vertices.len() {
        Ok(order)
    } else {
        Err((0..vertices.len())
            .find(|&v| indegree[v] > 0)
            .expect("some vertex left"))
    }
}

/// Builds the DAG with the default budget and reads off the recurrence.
pub fn extract_coefficients(system: &RewriteSystem, n_tilde: u64) -> Result<ExtractedRecurrence> {
    let dag = build_dag(system, n_tilde, budget_or(default_vertex_budget(n_tilde)))?;
    Ok(dag.extract())
}

/// All root-to-sink paths with their sign products and coefficient indices.
pub fn enumerate_terminating_paths(system: &RewriteSystem, n_tilde: u64) -> Result<Vec<DagPath>> {
    let dag = build_dag(system, n_tilde, budget_or(default_vertex_budget(n_tilde)))?;
    dag.paths(budget_or(DEFAULT_PATH_BUDGET))
}

fn coord(v: i64) -> String {
    if v < 0 {
        format!("m{}", -v)
    } else {
        v.to_string()
    }
}

fn dot_name(v: &DagVertex) -> String {
    match v.role {
        VertexRole::Root => format!("R_{}", coord(v.coords.1)),
        VertexRole::Terminal => format!("P_{}", coord(v.coords.0)),
        VertexRole::Auxiliary => format!("A_{}_{}", coord(v.coords.0), coord(v.coords.1)),
    }
}

/// Graphviz text. Vertices in construction order, edges grouped by source in
/// fan order.
pub fn emit_dot(dag: &ReductionDag) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{}_{}\" {{", dag.system, dag.n_tilde);
    let _ = writeln!(s, "  rankdir=TB;");
    for v in &dag.vertices {
        let mut label = match v.role {
            VertexRole::Terminal => format!("p({}) j={}", v.atom.coords().0, v.coords.0),
            _ => v.atom.to_string(),
        };
        if v.constant_label != 0 {
            let _ = write!(label, " {:+}", v.constant_label);
        }
        let shape = match v.role {
            VertexRole::Root => "doublecircle",
            VertexRole::Auxiliary => "circle",
            VertexRole::Terminal => "box",
        };
        let _ = writeln!(
            s,
            "  {} [label=\"{}\", shape={}];",
            dot_name(v),
            label,
            shape
        );
    }
    for e in &dag.edges {
        let sign = if e.sign > 0 { "+" } else { "-" };
        let _ = writeln!(
            s,
            "  {} -> {} [label=\"{}\", rule=\"{}\"];",
            dot_name(&dag.vertices[e.source]),
            dot_name(&dag.vertices[e.target]),
            sign,
            e.origin_rule
        );
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{euler_seq, integrated_f};
    use crate::rewrite::{bounded_system, maxpart_system, minpart_system};

    fn dag(system: &RewriteSystem, n: u64) -> ReductionDag {
        build_dag(system, n, default_vertex_budget(n)).unwrap()
    }

    #[test]
    fn minpart_two_by_hand() {
        let d = dag(&minpart_system(), 2);
        let aux: Vec<Atom> = d
            .vertices()
            .iter()
            .filter(|v| v.role == VertexRole::Auxiliary)
            .map(|v| v.atom)
            .collect();
        assert_eq!(
            aux,
            vec![
                Atom::Auxiliary(2, 1),
                Atom::Auxiliary(2, 2),
                Atom::Auxiliary(1, 1),
                Atom::Auxiliary(0, 1)
            ]
        );
        let terminals: Vec<i64> = d
            .vertices()
            .iter()
            .filter(|v| v.role == VertexRole::Terminal)
            .map(|v| v.coords.0)
            .collect();
        assert_eq!(terminals, vec![1, 2]);
        assert_eq!(d.root().coords, (0, 2));
        assert_eq!(d.terminal(1).unwrap().coords, (1, 0));

        let r = d.extract();
        assert_eq!(r.constant, BigInt::zero());
        assert_eq!(r.coeff(1), BigInt::one());
        assert_eq!(r.coeff(2), BigInt::one());

        let paths = d.paths(100).unwrap();
        assert_eq!(
            paths.iter().map(|p| p.sign).collect::<Vec<_>>(),
            vec![1, 1, -1]
        );
        let last = paths.last().unwrap();
        assert_eq!(last.j, None);
        assert_eq!(*last.vertices.last().unwrap(), Atom::Auxiliary(0, 1));
        assert_eq!(d.edges().iter().filter(|e| e.sign < 0).count(), 1);
    }

    #[test]
    fn maxpart_small_roots() {
        let max = maxpart_system(false);
        let d = dag(&max, 1);
        assert_eq!(d.vertices().len(), 1);
        assert_eq!(d.root().rule.as_deref(), Some("max.split"));
        assert_eq!(d.extract().constant, BigInt::one());

        let d = dag(&max, 0);
        assert_eq!((d.vertices().len(), d.edges().len()), (1, 0));

        let d = dag(&max, 4);
        let fan: Vec<Atom> = d
            .out_edges(0)
            .map(|e| d.vertices()[e.target].atom)
            .collect();
        assert_eq!(
            fan,
            vec![
                Atom::Auxiliary(4, 2),
                Atom::Auxiliary(4, 3),
                Atom::Auxiliary(4, 4)
            ]
        );
        for e in d.out_edges(0) {
            assert_eq!(d.vertices()[e.target].rule.as_deref(), Some("max.single"));
        }
        let paths = d.paths(100).unwrap();
        assert_eq!(paths.len(), 3);
        assert!(paths.iter().all(|p| p.vertices.len() == 3 && p.sign == 1));
        assert_eq!(
            paths.iter().map(|p| p.j.unwrap()).collect::<Vec<_>>(),
            vec![2, 3, 4]
        );
    }

    #[test]
    fn minpart_reproduces_euler() {
        let e = euler_seq(30);
        let min = minpart_system();
        for n in 1..=30u64 {
            let r = extract_coefficients(&min, n).unwrap();
            assert_eq!(r.constant, BigInt::zero(), "ñ={n}");
            for j in 1..=n as i64 {
                assert_eq!(r.coeff(j), BigInt::from(e[j as usize]), "ñ={n} j={j}");
            }
        }
    }

    #[test]
    fn maxpart_reproduces_integrated() {
        let f = integrated_f(30);
        let max = maxpart_system(false);
        let mut previous: Option<ExtractedRecurrence> = None;
        for n in 1..=30u64 {
            let r = extract_coefficients(&max, n).unwrap();
            assert_eq!(r.constant, BigInt::one(), "ñ={n}");
            assert_eq!(r.coeff(1), BigInt::zero());
            for j in 1..=n as i64 {
                assert_eq!(r.coeff(j), BigInt::from(f[j as usize]), "ñ={n} j={j}");
            }
            if let Some(prev) = previous.filter(|_| n >= 4) {
                for j in 1..prev.n_tilde {
                    assert_eq!(prev.coeff(j), r.coeff(j));
                }
            }
            previous = Some(r);
        }
    }

    #[test]
    fn substitution_reproduces_p() {
        let mut eng = crate::engines::EulerEngine::default();
        use crate::engines::Engine;
        let p: Vec<BigInt> = (0..=40)
            .map(|n| BigInt::from(eng.count(n).unwrap()))
            .collect();
        for system in [minpart_system(), maxpart_system(false)] {
            for n in 0..=40u64 {
                let r = extract_coefficients(&system, n).unwrap();
                assert_eq!(r.evaluate(&p), p[n as usize], "{} ñ={n}", system.name());
            }
        }
    }

    #[test]
    fn path_totals_match_dp() {
        for system in [minpart_system(), maxpart_system(false)] {
            for n in 0..=20u64 {
                let r = extract_coefficients(&system, n).unwrap();
                let mut grouped: BTreeMap<i64, BigInt> = BTreeMap::new();
                for p in enumerate_terminating_paths(&system, n).unwrap() {
                    if let Some(j) = p.j {
                        *grouped.entry(j).or_default() += p.sign;
                    }
                }
                for j in 1..=n as i64 {
                    assert_eq!(grouped.get(&j).cloned().unwrap_or_default(), r.coeff(j));
                }
            }
        }
    }

    #[test]
    fn bounded_is_buildable() {
        let b = bounded_system();
        for n in 0..=12u64 {
            let d = dag(&b, n);
            let mut eng = crate::engines::EulerEngine::default();
            use crate::engines::Engine;
            let p: Vec<BigInt> = (0..=n as usize)
                .map(|m| BigInt::from(eng.count(m).unwrap()))
                .collect();
            assert_eq!(d.extract().evaluate(&p), p[n as usize]);
        }
    }

    #[test]
    fn budgets_are_enforced() {
        assert!(matches!(
            build_dag(&maxpart_system(false), 20, 5),
            Err(Error::BudgetExceeded { .. })
        ));
        let d = dag(&minpart_system(), 10);
        assert!(matches!(d.paths(3), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn topological_order_respects_edges() {
        let d = dag(&maxpart_system(false), 25);
        let mut pos = vec![0; d.vertices().len()];
        for (i, &v) in d.topological_order().iter().enumerate() {
            pos[v] = i;
        }
        assert!(d.edges().iter().all(|e| pos[e.source] < pos[e.target]));
    }

    #[test]
    fn dot_round_trips() {
        use dot_parser::{ast, canonical};
        for (system, n, expect_nodes) in [
            (minpart_system(), 2u64, Some(7usize)),
            (maxpart_system(false), 0, Some(1)),
            (maxpart_system(false), 10, None),
        ] {
            let d = dag(&system, n);
            let text = emit_dot(&d);
            assert_eq!(text, emit_dot(&dag(&system, n)));
            let parsed = ast::Graph::try_from(text.as_str()).expect("DOT parses");
            let g = canonical::Graph::from(parsed);
            assert_eq!(g.nodes.set.len(), d.vertices().len());
            assert_eq!(g.edges.set.len(), d.edges().len());
            if let Some(k) = expect_nodes {
                assert_eq!(g.nodes.set.len(), k);
            }
        }
        let text = emit_dot(&dag(&minpart_system(), 2));
        assert!(text.contains("A_0_1"));
        assert!(text.contains("R_2"));
        assert_eq!(text.matches("label=\"-\"").count(), 1);
    }

    #[test]
    fn dot_names_negative_coordinates() {
        let v = DagVertex {
            id: 0,
            role: VertexRole::Auxiliary,
            plane: Plane::Auxiliary,
            coords: (-3, 2),
            atom: Atom::Auxiliary(-3, 2),
            constant_label: 0,
            rule: None,
        };
        assert_eq!(dot_name(&v), "A_m3_2");
    }
}
