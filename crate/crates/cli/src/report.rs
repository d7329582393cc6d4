use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(i128),
    Bool(bool),
    Str(String),
    List(Vec<Value>),
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(n: $t) -> Self {
                Value::Int(n as i128)
            }
        }
    )*};
}
int_value!(i64, usize, u32, u64, u128, i128);

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(items: Vec<T>) -> Self {
        Value::List(items.into_iter().map(Into::into).collect())
    }
}

/// Ordered key/value lines printed by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    /// `key: value` per line. Lists of numbers stay on one line; other
    /// lists print their length, then one indented item per line.
    pub fn plain(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            match value {
                Value::List(items) if items.is_empty() || !items.iter().all(|v| matches!(v, Value::Int(_))) => {
                    writeln!(out, "{key}: {}", items.len()).unwrap();
                    for item in items {
                        writeln!(out, "  {}", plain_scalar(item)).unwrap();
                    }
                }
                v => writeln!(out, "{key}: {}", plain_scalar(v)).unwrap(),
            }
        }
        out
    }

    /// A brace-delimited block of `key: value,` lines with quoted strings
    /// and bracketed lists.
    pub fn json_like(&self) -> String {
        let mut out = String::from("{\n");
        for (key, value) in &self.entries {
            writeln!(out, "  {key}: {},", structured(value)).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn plain_scalar(v: &Value) -> String {
    match v {
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Str(s) => s.clone(),
        Value::List(items) => items.iter().map(plain_scalar).collect::<Vec<_>>().join(" "),
    }
}

fn structured(v: &Value) -> String {
    match v {
        Value::Int(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Str(s) => {
            let mut q = String::with_capacity(s.len() + 2);
            q.push('"');
            for c in s.chars() {
                match c {
                    '"' => q.push_str("\\\""),
                    '\\' => q.push_str("\\\\"),
                    '\n' => q.push_str("\\n"),
                    c => q.push(c),
                }
            }
            q.push('"');
            q
        }
        Value::List(items) => format!("[{}]", items.iter().map(structured).collect::<Vec<_>>().join(", ")),
    }
}
