use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use autqm::norms::{Factor, NormResult, NormValue};
use autqm::quasimorphisms::format_rational;
use autqm::{Automorphism, Rational, Word};
use serde_json::{json, Map, Value};

/// Line-delimited JSON output. Keys are sorted, so equal inputs give
/// byte-identical lines.
pub struct Records {
    out: Box<dyn Write>,
}

impl Records {
    pub fn open(path: Option<&Path>) -> io::Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Records { out })
    }

    pub fn emit(&mut self, cmd: &str, body: Value) -> io::Result<()> {
        let mut record = match body {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
        };
        record.insert("cmd".into(), Value::String(cmd.into()));
        writeln!(self.out, "{}", Value::Object(record))?;
        self.out.flush()
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn word(w: &Word) -> Value {
    Value::String(w.to_string())
}

pub fn auto(a: &Automorphism) -> Value {
    json!({
        "witness": a.witness().to_string(),
        "images": a.images().iter().map(word).collect::<Vec<_>>(),
    })
}

pub fn factor(f: &Factor) -> Value {
    match f {
        Factor::Element { index, word: w } => {
            json!({"kind": "element", "index": index, "word": word(w)})
        }
        Factor::Autocommutator { auto: a, word: w } => json!({
            "kind": "autocommutator",
            "auto": a.witness().to_string(),
            "word": word(w),
        }),
        Factor::Commutator { left, right } => json!({
            "kind": "commutator",
            "left": word(left),
            "right": word(right),
        }),
    }
}

pub fn norm(r: &NormResult, rank: usize) -> Value {
    let (status, value) = match r.value {
        NormValue::Finite { value } => ("finite", json!(value)),
        NormValue::GreaterThanCutoff { cutoff } => ("greater_than_cutoff", json!(cutoff)),
        NormValue::Infinite => ("infinite", Value::Null),
        NormValue::NoWitnessWithin { cap } => ("no_witness_within", json!(cap)),
    };
    let replay = r.replay(rank).ok().flatten();
    json!({
        "status": status,
        "value": value,
        "witness": r.witness.as_ref().map(|w| w.iter().map(factor).collect::<Vec<_>>()),
        "replay": replay.as_ref().map(word),
    })
}
