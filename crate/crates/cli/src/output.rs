use serde_json::{Map, Value};

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// One result: a JSON object plus a flat table for CSV.
#[derive(Debug, Default)]
pub struct Document {
    pub fields: Map<String, Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Document {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.insert(key.to_string(), value.into());
    }

    pub fn table(&mut self, header: &[&str], rows: Vec<Vec<Value>>) {
        self.header = header.iter().map(|s| s.to_string()).collect();
        self.rows = rows;
    }

    pub fn to_json(&self) -> String {
        let mut v = Value::Object(self.fields.clone());
        round_value(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("plain JSON values");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !self.header.is_empty() {
            w.write_record(&self.header).expect("in-memory write");
        }
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(x)) => round12(x).to_string(),
            _ => n.to_string(),
        },
        other => {
            let mut other = other.clone();
            round_value(&mut other);
            other.to_string()
        }
    }
}
