use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::expr::BoolExpr;
use crate::error::{Error, Result};
use crate::gates::{self, GateKind};
use crate::units::{landauer_energy, splits_to_nats};

/// Worst-case output entropy of one entropy NAND, in splits.
pub const SPLITS_PER_GATE: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignalRef {
    Input(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NandGate {
    pub name: String,
    pub a: SignalRef,
    pub b: SignalRef,
}

/// NAND-only combinational netlist. Gates only read primary inputs or earlier
/// gates, so the gate list is already a topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NandNetlist {
    inputs: Vec<String>,
    gates: Vec<NandGate>,
    outputs: Vec<SignalRef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    /// Plain boolean NAND.
    Pure,
    /// Every gate goes through the two-observation entropy gate.
    Entropy,
}

impl NandNetlist {
    pub fn new(inputs: Vec<String>, gates: Vec<NandGate>, outputs: Vec<SignalRef>) -> Result<Self> {
        let mut names = HashSet::new();
        for name in inputs.iter().chain(gates.iter().map(|g| &g.name)) {
            if !names.insert(name.as_str()) {
                return Err(Error::Netlist(format!("signal `{name}` defined twice")));
            }
        }
        let resolves = |r: SignalRef, gates_before: usize| match r {
            SignalRef::Input(i) => i < inputs.len(),
            SignalRef::Gate(g) => g < gates_before,
        };
        for (i, g) in gates.iter().enumerate() {
            if !resolves(g.a, i) || !resolves(g.b, i) {
                return Err(Error::Netlist(format!("gate `{}` reads an undefined or later signal", g.name)));
            }
        }
        if let Some(bad) = outputs.iter().find(|r| !resolves(**r, gates.len())) {
            return Err(Error::Netlist(format!("output {bad:?} does not resolve")));
        }
        Ok(Self { inputs, gates, outputs })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn gates(&self) -> &[NandGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[SignalRef] {
        &self.outputs
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn signal_name(&self, r: SignalRef) -> &str {
        match r {
            SignalRef::Input(i) => &self.inputs[i],
            SignalRef::Gate(g) => &self.gates[g].name,
        }
    }

    /// Longest input-to-gate path, counted in gates.
    pub fn depth(&self) -> usize {
        self.gate_depths().into_iter().max().unwrap_or(0)
    }

    fn gate_depths(&self) -> Vec<usize> {
        let mut depths = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let of = |r: SignalRef| match r {
                SignalRef::Input(_) => 0,
                SignalRef::Gate(i) => depths[i],
            };
            let d = 1 + of(g.a).max(of(g.b));
            depths.push(d);
        }
        depths
    }

    /// Whether every gate reads only inputs and earlier gates. Always true
    /// for a netlist built through [`NandNetlist::new`].
    pub fn is_topologically_ordered(&self) -> bool {
        self.gates.iter().enumerate().all(|(i, g)| {
            [g.a, g.b].iter().all(|r| match *r {
                SignalRef::Input(k) => k < self.inputs.len(),
                SignalRef::Gate(k) => k < i,
            })
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph netlist {\n  rankdir=LR;\n");
        for name in &self.inputs {
            out.push_str(&format!("  \"{name}\" [shape=box];\n"));
        }
        for g in &self.gates {
            out.push_str(&format!("  \"{}\" [label=\"{} NAND\"];\n", g.name, g.name));
            for r in [g.a, g.b] {
                out.push_str(&format!("  \"{}\" -> \"{}\";\n", self.signal_name(r), g.name));
            }
        }
        for (i, r) in self.outputs.iter().enumerate() {
            out.push_str(&format!("  \"out{i}\" [shape=doublecircle];\n"));
            out.push_str(&format!("  \"{}\" -> \"out{i}\";\n", self.signal_name(*r)));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for NandNetlist {
    /// `inputs: a b`, one `gN = NAND(x, y)` line per gate, `outputs: gK`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs: {}", self.inputs.join(" "))?;
        for g in &self.gates {
            writeln!(f, "{} = NAND({}, {})", g.name, self.signal_name(g.a), self.signal_name(g.b))?;
        }
        let outs: Vec<&str> = self.outputs.iter().map(|r| self.signal_name(*r)).collect();
        writeln!(f, "outputs: {}", outs.join(" "))
    }
}

impl FromStr for NandNetlist {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut inputs: Option<Vec<String>> = None;
        let mut outputs: Option<Vec<String>> = None;
        let mut gates = Vec::new();
        let mut signals: HashMap<String, SignalRef> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Netlist(format!("line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix("inputs:") {
                if inputs.is_some() || !gates.is_empty() {
                    return Err(err("`inputs:` must come first and only once"));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
                for (i, n) in names.iter().enumerate() {
                    signals.insert(n.clone(), SignalRef::Input(i));
                }
                inputs = Some(names);
            } else if let Some(rest) = line.strip_prefix("outputs:") {
                if outputs.is_some() {
                    return Err(err("duplicate `outputs:` line"));
                }
                outputs = Some(rest.split_whitespace().map(str::to_owned).collect());
            } else {
                if inputs.is_none() {
                    return Err(err("missing `inputs:` header"));
                }
                if outputs.is_some() {
                    return Err(err("gate after `outputs:` footer"));
                }
                let (name, body) = line.split_once('=').ok_or_else(|| err("expected `name = NAND(x, y)`"))?;
                let name = name.trim();
                let args = body
                    .trim()
                    .strip_prefix("NAND(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| err("expected `NAND(x, y)`"))?;
                let (x, y) = args.split_once(',').ok_or_else(|| err("NAND takes two arguments"))?;
                let lookup = |s: &str| {
                    signals.get(s.trim()).copied().ok_or_else(|| err(&format!("undefined signal `{}`", s.trim())))
                };
                let gate = NandGate { name: name.to_owned(), a: lookup(x)?, b: lookup(y)? };
                if signals.insert(name.to_owned(), SignalRef::Gate(gates.len())).is_some() {
                    return Err(err(&format!("signal `{name}` defined twice")));
                }
                gates.push(gate);
            }
        }
        let inputs = inputs.ok_or_else(|| Error::Netlist("missing `inputs:` header".into()))?;
        let outputs = outputs
            .ok_or_else(|| Error::Netlist("missing `outputs:` footer".into()))?
            .iter()
            .map(|o| signals.get(o).copied().ok_or_else(|| Error::Netlist(format!("undefined output `{o}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(inputs, gates, outputs)
    }
}

struct Builder {
    inputs: Vec<String>,
    gates: Vec<NandGate>,
    shared: HashMap<(SignalRef, SignalRef), SignalRef>,
}

impl Builder {
    fn nand(&mut self, x: SignalRef, y: SignalRef) -> SignalRef {
        let key = (x.min(y), x.max(y));
        if let Some(&existing) = self.shared.get(&key) {
            return existing;
        }
        let r = SignalRef::Gate(self.gates.len());
        self.gates.push(NandGate { name: format!("g{}", self.gates.len()), a: x, b: y });
        self.shared.insert(key, r);
        r
    }

    fn not(&mut self, x: SignalRef) -> SignalRef {
        self.nand(x, x)
    }

    fn lower(&mut self, expr: &BoolExpr) -> SignalRef {
        match expr {
            BoolExpr::Var(v) => SignalRef::Input(self.inputs.iter().position(|n| n == v).expect("variables collected")),
            BoolExpr::Not(x) => {
                let x = self.lower(x);
                self.not(x)
            }
            BoolExpr::And(l, r) => {
                let (l, r) = (self.lower(l), self.lower(r));
                let t = self.nand(l, r);
                self.not(t)
            }
            BoolExpr::Or(l, r) => {
                let (l, r) = (self.lower(l), self.lower(r));
                let (nl, nr) = (self.not(l), self.not(r));
                self.nand(nl, nr)
            }
            BoolExpr::Xor(l, r) => {
                let (l, r) = (self.lower(l), self.lower(r));
                let n1 = self.nand(l, r);
                let left = self.nand(l, n1);
                let right = self.nand(r, n1);
                self.nand(left, right)
            }
        }
    }
}

/// Lowers `expr` with fixed rules: `!x = NAND(x, x)`, `x & y = !NAND(x, y)`,
/// `x | y = NAND(!x, !y)` and the four-gate XOR. Structurally identical
/// gates are shared; nothing else is optimized. Inputs are the expression's
/// variables in sorted order.
pub fn synthesize_nand_netlist(expr: &BoolExpr) -> NandNetlist {
    let mut b = Builder { inputs: expr.variables().into_iter().collect(), gates: Vec::new(), shared: HashMap::new() };
    let out = b.lower(expr);
    NandNetlist::new(b.inputs, b.gates, vec![out]).expect("synthesized netlist is well formed")
}

/// Evaluates the netlist in gate order.
pub fn evaluate_netlist(
    netlist: &NandNetlist,
    assignment: &BTreeMap<String, bool>,
    mode: EvalMode,
) -> Result<Vec<bool>> {
    let inputs: Vec<bool> = netlist
        .inputs
        .iter()
        .map(|n| assignment.get(n).copied().ok_or_else(|| Error::MissingAssignment(n.clone())))
        .collect::<Result<_>>()?;
    let mut values: Vec<bool> = Vec::with_capacity(netlist.gates.len());
    let read = |values: &[bool], r: SignalRef| match r {
        SignalRef::Input(i) => inputs[i],
        SignalRef::Gate(g) => values[g],
    };
    for g in &netlist.gates {
        let (x, y) = (read(&values, g.a), read(&values, g.b));
        let v = match mode {
            EvalMode::Pure => !(x && y),
            // Boolean coupling: a fresh gate network per instance.
            EvalMode::Entropy => gates::evaluate(x, y, GateKind::Nand).0,
        };
        values.push(v);
    }
    Ok(netlist.outputs.iter().map(|r| read(&values, *r)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetlistReport {
    pub gate_count: usize,
    pub depth: usize,
    /// Worst case: every gate ends at its maximum output entropy.
    pub budget_splits: u64,
    /// Same budget in nats at model temperature 1.
    pub budget_physical_nats: f64,
    pub temperature_kelvin: f64,
    /// `budget_splits * k_B T ln 2`.
    pub budget_joules: f64,
}

pub fn netlist_report(netlist: &NandNetlist, temperature_kelvin: f64) -> Result<NetlistReport> {
    let budget_splits = SPLITS_PER_GATE * netlist.gate_count() as u64;
    Ok(NetlistReport {
        gate_count: netlist.gate_count(),
        depth: netlist.depth(),
        budget_splits,
        budget_physical_nats: splits_to_nats(budget_splits, 1.0),
        temperature_kelvin,
        budget_joules: budget_splits as f64 * landauer_energy(temperature_kelvin)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::parse_expression;

    fn synth(text: &str) -> NandNetlist {
        synthesize_nand_netlist(&parse_expression(text).unwrap())
    }

    fn assign(pairs: &[(&str, bool)]) -> BTreeMap<String, bool> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn four_nand_xor_identity() {
        // Brute force over the four input pairs before trusting the construction.
        let nand = |x: bool, y: bool| !(x && y);
        for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
            let n1 = nand(x, y);
            assert_eq!(nand(nand(x, n1), nand(y, n1)), x ^ y);
        }
    }

    #[test]
    fn gate_counts() {
        assert_eq!(synth("!a").gate_count(), 1);
        assert_eq!(synth("a & b").gate_count(), 2);
        assert_eq!(synth("a ^ b").gate_count(), 4);
        assert_eq!(synth("a | b").gate_count(), 3);
        assert_eq!(synth("a").gate_count(), 0);
    }

    #[test]
    fn structural_sharing() {
        // `!a` appears twice but is built once.
        assert_eq!(synth("!a & !a").gate_count(), 3);
        assert_eq!(synth("(a & b) | (b & a)").gate_count(), 4);
    }

    #[test]
    fn evaluation_examples() {
        let xor = synth("a ^ b");
        for mode in [EvalMode::Pure, EvalMode::Entropy] {
            assert_eq!(evaluate_netlist(&xor, &assign(&[("a", true), ("b", true)]), mode).unwrap(), vec![false]);
        }
        let and = synth("a & b");
        assert_eq!(
            evaluate_netlist(&and, &assign(&[("a", true), ("b", false)]), EvalMode::Entropy).unwrap(),
            vec![false]
        );
        assert!(matches!(
            evaluate_netlist(&and, &assign(&[("a", true)]), EvalMode::Pure),
            Err(Error::MissingAssignment(n)) if n == "b"
        ));
    }

    #[test]
    fn reports() {
        let r = netlist_report(&synth("!a"), 300.0).unwrap();
        assert_eq!((r.gate_count, r.depth, r.budget_splits), (1, 1, 2));
        let r = netlist_report(&synth("a ^ b"), 300.0).unwrap();
        assert_eq!((r.gate_count, r.depth), (4, 3));
        assert_eq!(r.budget_joules, 8.0 * landauer_energy(300.0).unwrap());
        assert!(netlist_report(&synth("a"), 0.0).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let xor = synth("a ^ b");
        let text = xor.to_string();
        assert_eq!(
            text,
            "inputs: a b\ng0 = NAND(a, b)\ng1 = NAND(a, g0)\ng2 = NAND(b, g0)\ng3 = NAND(g1, g2)\noutputs: g3\n"
        );
        assert_eq!(text.parse::<NandNetlist>().unwrap(), xor);
    }

    #[test]
    fn text_format_rejects_bad_netlists() {
        let bad = [
            "g0 = NAND(a, b)\noutputs: g0\n",
            "inputs: a b\ng0 = NAND(a, g1)\ng1 = NAND(a, b)\noutputs: g1\n",
            "inputs: a\ng0 = AND(a, a)\noutputs: g0\n",
            "inputs: a\ng0 = NAND(a, a)\n",
            "inputs: a\ng0 = NAND(a, a)\noutputs: g9\n",
            "inputs: a\na = NAND(a, a)\noutputs: a\n",
        ];
        for text in bad {
            assert!(text.parse::<NandNetlist>().is_err(), "accepted {text:?}");
        }
    }

    #[test]
    fn constructor_rejects_forward_references() {
        let gates = vec![NandGate { name: "g0".into(), a: SignalRef::Gate(0), b: SignalRef::Input(0) }];
        assert!(NandNetlist::new(vec!["a".into()], gates, vec![]).is_err());
    }

    #[test]
    fn dot_lists_gates() {
        let dot = synth("a & b").to_dot();
        assert!(dot.contains("\"a\" -> \"g0\""));
        assert!(dot.contains("\"g0\" -> \"g1\""));
        assert!(dot.contains("\"g1\" -> \"out0\""));
    }
}
