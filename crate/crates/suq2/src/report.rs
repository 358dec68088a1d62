//! Structured pass/fail reports for the verification commands.
//!
//! Reports serialize to a stable JSON layout: repeated runs with the same
//! configuration are byte-identical (no timestamps, sorted keys).
//!
//! Conventions recorded in every report:
//!
//! * `weight_convention` — the torus weight subspace is `H_k = {2j = +k}`,
//!   calibrated so that the vacuum lies in `H_0`, sector multiplicities
//!   match Frobenius reciprocity, left multiplication by a right-weight
//!   homogeneous element maps `H_k` into `H_{k - wt_R}`, and the twisted
//!   index at `(k,l) = (0,1)` comes out as `-[V_0]`.
//! * `eps_restriction` — line bundle classes restrict along the counit as
//!   `[E_b] -> z^b` in R(T).
//! * `comp2` — the second duality composite is a reconstruction (the source
//!   only sketches it); its convention is calibrated by `comp2(1) = z`.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: serde_json::Value,
    pub expected: String,
}

impl Check {
    /// A residual-style check: passes when `measured <= tol`.
    pub fn residual(name: &str, measured: f64, tol: f64) -> Check {
        Check {
            name: name.to_string(),
            pass: measured <= tol,
            measured: json_f64(measured),
            expected: format!("<= {tol:e}"),
        }
    }

    /// An exact equality check on displayable values.
    pub fn exact(name: &str, measured: impl ToString, expected: impl ToString) -> Check {
        let measured = measured.to_string();
        let expected = expected.to_string();
        Check {
            name: name.to_string(),
            pass: measured == expected,
            measured: serde_json::Value::String(measured),
            expected,
        }
    }

    pub fn boolean(name: &str, pass: bool) -> Check {
        Check {
            name: name.to_string(),
            pass,
            measured: serde_json::Value::Bool(pass),
            expected: "true".to_string(),
        }
    }

    pub fn sequence(name: &str, pass: bool, values: &[f64], expected: &str) -> Check {
        Check {
            name: name.to_string(),
            pass,
            measured: serde_json::Value::Array(values.iter().map(|v| json_f64(*v)).collect()),
            expected: expected.to_string(),
        }
    }
}

fn json_f64(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub conventions: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut conventions = BTreeMap::new();
        conventions.insert(
            "weight_convention".to_string(),
            "H_k = { e^(l)_ij : 2j = +k }".to_string(),
        );
        conventions.insert("eps_restriction".to_string(), "[E_b] -> z^b".to_string(),);
        conventions.insert(
            "comp2".to_string(),
            "reconstructed; calibrated by comp2(1) = z".to_string(),
        );
        Report {
            command: command.to_string(),
            params: BTreeMap::new(),
            conventions,
            checks: Vec::new(),
            pass: true,
        }
    }

    pub fn set_param(&mut self, key: &str, value: impl Serialize) {
        self.params
            .insert(key.to_string(), serde_json::to_value(value).unwrap());
    }

    pub fn add_check(&mut self, check: Check) {
        self.pass = self.pass && check.pass;
        self.checks.push(check);
    }

    /// Recompute the conjunction and return the finished report.
    pub fn finalize(mut self) -> Report {
        self.pass = self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.command));
        for check in &self.checks {
            out.push_str(&format!(
                "{} {} (measured: {}, expected: {})\n",
                if check.pass { "PASS" } else { "FAIL" },
                check.name,
                check.measured,
                check.expected
            ));
        }
        out.push_str(&format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}
