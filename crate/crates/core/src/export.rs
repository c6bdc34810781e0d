//! JSON, DOT and CSV renderings. JSON goes through `serde_json::Value`, so
//! object keys come out sorted and the output is byte-stable.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::isolated::{NamedSubsemigroup, Subsemigroup};
use crate::nilpotent::{ord_of_partition, MPoint, MaximalNilpotent, OrderedAPartition, StrictOrder, Tag};
use crate::verify::VerificationReport;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Csv => "csv",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

pub trait Exportable {
    fn export(&self, format: Format) -> Result<String>;
}

fn unsupported(what: &'static str, format: Format) -> Error {
    Error::UnsupportedExport {
        what,
        format: format.as_str(),
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))?;
    serde_json::to_string_pretty(&value).map_err(|e| Error::Internal(e.to_string()))
}

impl Exportable for Subsemigroup {
    fn export(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            _ => Err(unsupported("subsemigroup", format)),
        }
    }
}

fn named_value(s: &NamedSubsemigroup) -> serde_json::Value {
    json!({
        "name": s.name.to_string(),
        "size": s.semigroup.len(),
        "members": s.semigroup.members().members(),
    })
}

impl Exportable for NamedSubsemigroup {
    fn export(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(&named_value(self)),
            _ => Err(unsupported("named subsemigroup", format)),
        }
    }
}

impl Exportable for [NamedSubsemigroup] {
    fn export(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(&self.iter().map(named_value).collect::<Vec<_>>()),
            _ => Err(unsupported("named subsemigroups", format)),
        }
    }
}

fn node_id(p: &MPoint) -> String {
    p.to_string().replace('-', "_")
}

fn order_dot(order: &StrictOrder, title: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {title} {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    for p in order.carrier().points() {
        let shape = match p.tag {
            Tag::In => "box",
            Tag::A => "ellipse",
            Tag::Out => "diamond",
        };
        writeln!(out, "  {} [label=\"{p}\", shape={shape}];", node_id(p)).unwrap();
    }
    for (a, b) in order.hasse_edges() {
        writeln!(out, "  {} -> {};", node_id(&a), node_id(&b)).unwrap();
    }
    out.push_str("}\n");
    out
}

impl Exportable for StrictOrder {
    fn export(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Dot => Ok(order_dot(self, "order")),
            Format::Csv => Err(unsupported("order", format)),
        }
    }
}

impl Exportable for OrderedAPartition {
    fn export(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Dot => Ok(order_dot(&ord_of_partition(self), "partition")),
            Format::Csv => Err(unsupported("partition", format)),
        }
    }
}

impl Exportable for [MaximalNilpotent] {
    fn export(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Dot => {
                let mut out = String::new();
                for (i, t) in self.iter().enumerate() {
                    out.push_str(&order_dot(&ord_of_partition(&t.partition), &format!("T{}", i + 1)));
                }
                Ok(out)
            }
            Format::Csv => Err(unsupported("maximal nilpotents", format)),
        }
    }
}

fn reports_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(["theorem_id", "n", "A", "status", "bound", "counterexample", "detail"])
        .map_err(io)?;
    for r in reports {
        let a = r.a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        w.write_record([
            r.theorem_id.as_str(),
            &r.n.to_string(),
            &a,
            r.status.as_str(),
            r.bound.as_deref().unwrap_or(""),
            r.counterexample.as_deref().unwrap_or(""),
            &r.detail,
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

impl Exportable for VerificationReport {
    fn export(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            _ => std::slice::from_ref(self).export(format),
        }
    }
}

impl Exportable for [VerificationReport] {
    fn export(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => reports_csv(self),
            Format::Dot => Err(unsupported("verification report", format)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilpotent::maximal_nilpotents;
    use crate::variant::SandwichContext;
    use crate::verify::{run_verify, TheoremId, VerifyOptions};

    #[test]
    fn dot_of_the_three_chain() {
        let c = SandwichContext::new(2, &[1]).unwrap();
        let ts = maximal_nilpotents(&c, 3).unwrap();
        assert_eq!(ts.len(), 1);
        let dot = ts[0].partition.export(Format::Dot).unwrap();
        assert_eq!(dot.matches("label=").count(), 3);
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.contains("IN_2 -> A_1;"));
        assert!(dot.contains("A_1 -> OUT_2;"));
    }

    #[test]
    fn json_is_stable_and_sorted() {
        let c = SandwichContext::new(2, &[1]).unwrap();
        let ts = maximal_nilpotents(&c, 3).unwrap();
        let a = ts.export(Format::Json).unwrap();
        let b = maximal_nilpotents(&c, 3).unwrap().export(Format::Json).unwrap();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v[0]["type"], json!([1, 1, 1]));
        assert_eq!(v[0]["size"], json!(5));
        assert_eq!(v[0]["degree"], json!(3));
        let keys: Vec<_> = v[0].as_object().unwrap().keys().cloned().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn semigroup_json_round_trips() {
        let c = SandwichContext::new(3, &[1, 2]).unwrap();
        let g = crate::isolated::build_g(&c, 2).unwrap();
        let text = g.export(Format::Json).unwrap();
        let back: Subsemigroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["ctx"], json!({"n": 3, "A": [1, 2], "z": 3}));
        // dropping eps_2, a square of other members, breaks closure and is refused
        let eps = serde_json::to_value(c.epsilon(2).unwrap()).unwrap();
        let mut broken = v.clone();
        broken["members"]["members"]
            .as_array_mut()
            .unwrap()
            .retain(|m| *m != eps);
        assert_eq!(broken["members"]["members"].as_array().unwrap().len(), g.len() - 1);
        assert!(serde_json::from_value::<Subsemigroup>(broken).is_err());
    }

    #[test]
    fn report_csv_and_refusals() {
        let c = SandwichContext::new(2, &[1]).unwrap();
        let r = run_verify(TheoremId::Prop1, &c, &VerifyOptions::default()).unwrap();
        let csv = r.export(Format::Csv).unwrap();
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("theorem_id,n,A,status"));
        assert!(lines.next().unwrap().starts_with("prop1,2,1,pass"));
        assert!(!r.export(Format::Json).unwrap().contains("wall"));
        assert!(matches!(r.export(Format::Dot), Err(Error::UnsupportedExport { .. })));
        let ts = maximal_nilpotents(&c, 3).unwrap();
        assert!(matches!(
            ts[0].semigroup.export(Format::Csv),
            Err(Error::UnsupportedExport { .. })
        ));
    }
}
