//! The built-in corpus of exact solutions and its golden records.

use crate::metric_file::{parse_metric_file, LoadError, MetricFile};

macro_rules! corpus_entry {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../corpus/", $name, ".metric")),
            include_str!(concat!("../corpus/golden/", $name, ".json")),
        )
    };
}

/// `(name, metric file, golden record)` in name order.
const BUILTIN: [(&str, &str, &str); 7] = [
    corpus_entry!("bertotti_robinson"),
    corpus_entry!("minkowski"),
    corpus_entry!("nariai"),
    corpus_entry!("ppwave_linear"),
    corpus_entry!("ppwave_quadratic_u"),
    corpus_entry!("product2x2"),
    corpus_entry!("schwarzschild"),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(n, _, _)| *n)
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _, _)| *n == name).map(|(_, s, _)| *s)
}

pub fn golden_source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _, _)| *n == name).map(|(_, _, g)| *g)
}

pub fn load_builtin(name: &str) -> Option<Result<MetricFile, LoadError>> {
    builtin_source(name).map(|s| parse_metric_file(s, name))
}

/// Every corpus metric, panicking on a broken built-in file.
pub fn load_all() -> Vec<MetricFile> {
    builtin_names()
        .map(|n| {
            load_builtin(n)
                .expect("listed name")
                .unwrap_or_else(|e| panic!("built-in corpus file `{n}` is invalid: {e}"))
        })
        .collect()
}
