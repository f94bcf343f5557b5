use serde::Serialize;

/// Outcome of one command. Serialized field order is stable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub verdict: Verdict,
    /// Full image array of the isomorphism found, if any.
    pub witness: Option<Vec<usize>>,
    pub strategy: String,
    pub timings: Timings,
    pub work: u64,
    pub span: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Verdict {
    Decision(bool),
    Tags(Vec<String>),
    Count(u128),
    Coset { size: u128, representative: Option<Vec<usize>> },
}

/// Wall-clock milliseconds per phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub decide_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Verdict, witness and counters; the parts that must not depend on the
    /// worker count.
    pub fn deterministic_part(&self) -> (&Verdict, &Option<Vec<usize>>, u64, u64) {
        (&self.verdict, &self.witness, self.work, self.span)
    }

    pub fn to_text(&self) -> String {
        let v = match &self.verdict {
            Verdict::Decision(b) => if *b { "isomorphic".to_string() } else { "not isomorphic".to_string() },
            Verdict::Tags(t) if t.is_empty() => "no class".to_string(),
            Verdict::Tags(t) => t.join(" "),
            Verdict::Count(c) => c.to_string(),
            Verdict::Coset { size: 0, .. } => "not equivalent".to_string(),
            Verdict::Coset { size, representative } => {
                format!("equivalent, coset size {size}, representative {:?}", representative.as_deref().unwrap_or(&[]))
            }
        };
        let mut s = format!("{v}\nstrategy: {}\nwork: {}  span: {}\ntime: {:.1} ms\n", self.strategy, self.work, self.span, self.timings.parse_ms + self.timings.decide_ms);
        if let Some(w) = &self.witness {
            s.push_str(&format!("witness: {w:?}\n"));
        }
        s
    }
}
