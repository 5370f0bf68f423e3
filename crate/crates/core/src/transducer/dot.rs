use std::fmt::Write;

use super::HTransducer;
use crate::zseries::{Series, Word};


/// Short description of a label: `0`, or kind, degree and leading values.
pub fn summarize(s: &Series) -> String {
    if matches!(s, Series::Zero(_)) || matches!(s.is_zero(), Ok(true)) {
        return "0".into();
    }
    let words: Vec<Word> = s.alphabet().words_up_to(4).into_iter().take(5).collect();
    let values: Vec<String> = words
        .iter()
        .map(|w| s.eval(w).map(|v| v.to_string()).unwrap_or_else(|_| "?".into()))
        .collect();
    let head = match s {
        Series::Unary { qp, .. } => format!("qp deg {}", qp.degree()),
        Series::Linear(l) => format!("linrep dim {}", l.dim()),
        Series::Counting(c) => format!("count {} vars", c.vars().len()),
        Series::Zero(_) => unreachable!(),
    };
    format!("{head}: {},…", values.join(","))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl HTransducer {
    /// Deterministic Graphviz rendering; nodes are emitted in state order.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph transducer {\n  rankdir=LR;\n  node [shape=circle];\n");
        out.push_str("  init [shape=point];\n");
        for q in 0..self.num_states() {
            let name = if self.name(q).is_empty() { "ε" } else { self.name(q) };
            writeln!(out, "  s{q} [label=\"{}\\nF={}\"];", escape(name), self.final_value(q)).unwrap();
        }
        writeln!(out, "  init -> s{};", self.initial()).unwrap();
        for q in 0..self.num_states() {
            for (i, &a) in self.alphabet().letters().iter().enumerate() {
                let t = self.transitions()[q][i];
                let label = summarize(&self.lambda[q][i]);
                writeln!(out, "  s{q} -> s{t} [label=\"{} / {}\"];", escape(&a.to_string()), escape(&label)).unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::tests::{badexko_machine, left_machine, konst};
    use crate::zseries::Alphabet;

    const FIG1_LEFT_DOT: &str = r#"digraph transducer {
  rankdir=LR;
  node [shape=circle];
  init [shape=point];
  s0 [label="ε\nF=1"];
  s1 [label="a\nF=0"];
  init -> s0;
  s0 -> s1 [label="a / 0"];
  s1 -> s1 [label="a / qp deg 0: 1,1,1,1,1,…"];
}
"#;

    #[test]
    fn golden_left_machine() {
        assert_eq!(left_machine().to_dot(), FIG1_LEFT_DOT);
        assert_eq!(left_machine().to_dot(), left_machine().clone().to_dot());
    }

    #[test]
    fn single_state_and_two_cycle() {
        let single = HTransducer::new(Alphabet::unary(), vec!["".into()], 0, vec![vec![0]], vec![vec![konst(1)]], vec![0.into()]).unwrap();
        let dot = single.to_dot();
        assert_eq!(dot.matches("[label=\"ε").count(), 1);
        assert!(dot.contains("s0 -> s0"));
        let dot = badexko_machine().to_dot();
        assert!(dot.contains("s0 -> s1 [label=\"a / 0\"]"));
        assert!(dot.contains("s1 -> s0 [label=\"a / qp deg 0: 0,0,0,2,2,…\"]"));
    }
}
