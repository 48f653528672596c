use geometry_core::TeichPoint;
use mapping_class_rep::MappingClass;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

/// The sweeps the runner knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Curvature,
    Transport,
    Unitarity,
    Multipliers,
    Egorov,
    Trace,
    Kernel,
    Tuynman,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Self::Curvature,
        Self::Transport,
        Self::Unitarity,
        Self::Multipliers,
        Self::Egorov,
        Self::Trace,
        Self::Kernel,
        Self::Tuynman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Curvature => "curvature",
            Self::Transport => "transport",
            Self::Unitarity => "unitarity",
            Self::Multipliers => "multipliers",
            Self::Egorov => "egorov",
            Self::Trace => "trace",
            Self::Kernel => "kernel",
            Self::Tuynman => "tuynman",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// One-line description of the measured quantity.
    pub fn description(self) -> &'static str {
        match self {
            Self::Curvature => "‖R‖ of the Hitchin connection from square holonomies at tau",
            Self::Transport => "|λ − 1| between U_k along the geodesic and along a detour",
            Self::Unitarity => "‖U U* − I‖ for U = U_k(h, geodesic)",
            Self::Multipliers => "|μ − 1| for U_k(h)·U_k(h) against U_k(h·h)",
            Self::Egorov => "‖U⁻¹ T_f U − T_(f∘Φ)‖ for f = cos 2πx",
            Self::Trace => "|Tr U_k − fixed-point prediction|",
            Self::Kernel => "Gaussian width of the Schwartz kernel around the graph of Φ",
            Self::Tuynman => "largest ‖Π∇_XΠ − Π M_f Π‖ over ten Fourier-mode fields",
        }
    }

    pub fn needs_mapping_class(self) -> bool {
        !matches!(self, Self::Curvature | Self::Tuynman)
    }
}

/// Named tolerances and their defaults.
pub const TOLERANCES: [(&str, f64); 3] = [("ode", 1e-10), ("frame", 1e-12), ("side", 1e-2)];

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub k_list: Vec<usize>,
    pub tau: TeichPoint,
    pub mapping_class: Option<MappingClass>,
    pub path_samples: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// The named tolerance, falling back to its default.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|&(_, v)| v)
                .expect("known tolerance")
        })
    }
}

/// A validation failure attached to a config field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

const FIELDS: [&str; 7] = [
    "experiment",
    "k_list",
    "tau",
    "mapping_class",
    "path_samples",
    "tolerances",
    "output_dir",
];

struct Collector(Vec<ConfigError>);

impl Collector {
    fn push(&mut self, field: &str, message: impl Into<String>) {
        self.0.push(ConfigError {
            field: field.into(),
            message: message.into(),
        });
    }
}

fn parse_experiment(obj: &Map<String, Value>, errs: &mut Collector) -> Option<Experiment> {
    match obj.get("experiment") {
        None => errs.push("experiment", "missing"),
        Some(Value::String(s)) => match Experiment::parse(s) {
            Some(e) => return Some(e),
            None => errs.push("experiment", format!("unknown experiment {s:?}")),
        },
        Some(_) => errs.push("experiment", "expected a string"),
    }
    None
}

fn parse_k_list(obj: &Map<String, Value>, errs: &mut Collector) -> Option<Vec<usize>> {
    let Some(v) = obj.get("k_list") else {
        errs.push("k_list", "missing");
        return None;
    };
    let Some(items) = v.as_array() else {
        errs.push("k_list", "expected an array of positive integers");
        return None;
    };
    if items.is_empty() {
        errs.push("k_list", "must be nonempty");
        return None;
    }
    let ks: Option<Vec<usize>> = items
        .iter()
        .map(|x| x.as_u64().filter(|&k| k >= 1).map(|k| k as usize))
        .collect();
    let Some(ks) = ks else {
        errs.push("k_list", "entries must be positive integers");
        return None;
    };
    if ks.windows(2).any(|w| w[1] <= w[0]) {
        errs.push("k_list", "must be strictly increasing");
        return None;
    }
    Some(ks)
}

fn parse_tau(obj: &Map<String, Value>, errs: &mut Collector) -> Option<TeichPoint> {
    let Some(v) = obj.get("tau") else {
        errs.push("tau", "missing");
        return None;
    };
    let parts: Option<Vec<f64>> = v
        .as_array()
        .map(|a| a.iter().filter_map(Value::as_f64).collect());
    match parts.as_deref() {
        Some(&[re, im]) if v.as_array().map(Vec::len) == Some(2) => {
            if !(re.is_finite() && im.is_finite()) {
                errs.push("tau", "components must be finite");
            } else if im <= 0.0 {
                errs.push("tau", format!("Im tau = {im} must be positive"));
            } else {
                return TeichPoint::from_parts(re, im).ok();
            }
        }
        _ => errs.push("tau", "expected [re, im]"),
    }
    None
}

fn parse_mapping_class(
    obj: &Map<String, Value>,
    needed: bool,
    errs: &mut Collector,
) -> Option<MappingClass> {
    let v = match obj.get("mapping_class") {
        None | Some(Value::Null) => {
            if needed {
                errs.push("mapping_class", "required for this experiment");
            }
            return None;
        }
        Some(v) => v,
    };
    let rows: Option<Vec<Vec<i64>>> = v
        .as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| {
                    r.as_array()
                        .map(|r| r.iter().filter_map(Value::as_i64).collect())
                })
                .collect()
        })
        .unwrap_or(None);
    match rows.as_deref() {
        Some([r0, r1]) if r0.len() == 2 && r1.len() == 2 => {
            match MappingClass::new([[r0[0], r0[1]], [r1[0], r1[1]]]) {
                Ok(m) => return Some(m),
                Err(e) => errs.push("mapping_class", e.to_string()),
            }
        }
        _ => errs.push("mapping_class", "expected a 2x2 integer matrix"),
    }
    None
}

fn parse_path_samples(obj: &Map<String, Value>, errs: &mut Collector) -> Option<usize> {
    match obj.get("path_samples") {
        None => Some(mapping_class_rep::DEFAULT_PATH_SAMPLES),
        Some(v) => match v.as_u64() {
            Some(n) if n >= 2 => Some(n as usize),
            _ => {
                errs.push("path_samples", "expected an integer ≥ 2");
                None
            }
        },
    }
}

fn parse_tolerances(obj: &Map<String, Value>, errs: &mut Collector) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let Some(v) = obj.get("tolerances") else {
        return out;
    };
    let Some(map) = v.as_object() else {
        errs.push("tolerances", "expected an object of named reals");
        return out;
    };
    for (name, value) in map {
        let field = format!("tolerances.{name}");
        if !TOLERANCES.iter().any(|(n, _)| n == name) {
            errs.push(&field, "unknown tolerance");
            continue;
        }
        match value.as_f64() {
            Some(x) if x.is_finite() && x > 0.0 => {
                out.insert(name.clone(), x);
            }
            _ => errs.push(&field, "expected a positive finite number"),
        }
    }
    out
}

fn parse_output_dir(obj: &Map<String, Value>, errs: &mut Collector) -> Option<PathBuf> {
    match obj.get("output_dir") {
        Some(Value::String(s)) if !s.is_empty() => Some(PathBuf::from(s)),
        Some(_) => {
            errs.push("output_dir", "expected a nonempty path string");
            None
        }
        None => {
            errs.push("output_dir", "missing");
            None
        }
    }
}

/// Parses and validates a flat JSON config, collecting every error.
pub fn validate(text: &str) -> Result<ExperimentConfig, Vec<ConfigError>> {
    let mut errs = Collector(Vec::new());
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            return Err(vec![ConfigError {
                field: "<document>".into(),
                message: e.to_string(),
            }])
        }
    };
    let Some(obj) = value.as_object() else {
        return Err(vec![ConfigError {
            field: "<document>".into(),
            message: "expected a JSON object".into(),
        }]);
    };
    for key in obj.keys() {
        if !FIELDS.contains(&key.as_str()) {
            errs.push(key, "unknown field");
        }
    }
    let experiment = parse_experiment(obj, &mut errs);
    let k_list = parse_k_list(obj, &mut errs);
    let tau = parse_tau(obj, &mut errs);
    let needed = experiment.is_some_and(Experiment::needs_mapping_class);
    let mapping_class = parse_mapping_class(obj, needed, &mut errs);
    let path_samples = parse_path_samples(obj, &mut errs);
    let tolerances = parse_tolerances(obj, &mut errs);
    let output_dir = parse_output_dir(obj, &mut errs);
    if !errs.0.is_empty() {
        return Err(errs.0);
    }
    Ok(ExperimentConfig {
        experiment: experiment.expect("validated"),
        k_list: k_list.expect("validated"),
        tau: tau.expect("validated"),
        mapping_class,
        path_samples: path_samples.expect("validated"),
        tolerances,
        output_dir: output_dir.expect("validated"),
    })
}
