//! Metric registry and the single `evaluate` entry point.
//!
//! A [`Registry`] maps canonical names and aliases to metric implementations.
//! [`Registry::evaluate`] resolves a metric, decides between binary and
//! multi-class handling and scores every class one-vs-rest:
//!
//! * overlap metrics go through the one-vs-rest [`ConfusionCounts`] of each class,
//! * the adjusted Rand index is computed once on the full contingency table
//!   (reported as [`EvaluationResult::overall`]) and additionally one-vs-rest
//!   per class,
//! * distance metrics go through the binarized pair and mark classes missing
//!   from either mask as undefined instead of failing the call.
//!
//! ```
//! use segeval::{evaluate, EvalOptions, LabelMask};
//!
//! let truth = LabelMask::new(&[2, 2], vec![1, 0, 0, 1]).unwrap();
//! let pred = LabelMask::new(&[2, 2], vec![1, 1, 0, 0]).unwrap();
//! let result = evaluate(&truth, &pred, "dice", &EvalOptions::default()).unwrap();
//! assert_eq!(result.score(1), Some(0.5));
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::distance::{self, HausdorffAlgo, Spacing};
use crate::error::{Error, Result};
use crate::mask::{
    binary_contingency, classes_of, contingency, validate_pair, BinaryMask, ConfusionCounts,
    ContingencyTable, LabelMask,
};
use crate::overlap::{self, Score, ZeroDivisionPolicy};

pub type OverlapFn = fn(&ConfusionCounts, ZeroDivisionPolicy) -> Result<Score>;
pub type ContingencyFn = fn(&ContingencyTable, ZeroDivisionPolicy) -> Result<Score>;
pub type DistanceFn = fn(&BinaryMask, &BinaryMask, &Spacing, HausdorffAlgo) -> Result<f64>;

/// User metric: receives the binarized truth/prediction pair of one class.
pub type CustomFn =
    Arc<dyn Fn(&BinaryMask, &BinaryMask, &MetricContext) -> Result<Score> + Send + Sync>;

/// Settings a custom metric may consult.
#[derive(Debug, Clone)]
pub struct MetricContext {
    pub class: u16,
    pub policy: ZeroDivisionPolicy,
    pub spacing: Spacing,
    pub hd_algo: HausdorffAlgo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Overlap,
    Contingency,
    Distance,
    Custom,
}

#[derive(Clone)]
pub enum MetricFn {
    Overlap(OverlapFn),
    Contingency(ContingencyFn),
    Distance(DistanceFn),
    Custom(CustomFn),
}

impl MetricFn {
    pub fn kind(&self) -> MetricKind {
        match self {
            Self::Overlap(_) => MetricKind::Overlap,
            Self::Contingency(_) => MetricKind::Contingency,
            Self::Distance(_) => MetricKind::Distance,
            Self::Custom(_) => MetricKind::Custom,
        }
    }

    /// Wraps a closure as a custom metric.
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(&BinaryMask, &BinaryMask, &MetricContext) -> Result<Score> + Send + Sync + 'static,
    {
        Self::Custom(Arc::new(f))
    }
}

impl fmt::Debug for MetricFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MetricFn::{:?}", self.kind())
    }
}

#[derive(Debug, Clone)]
pub struct MetricDescriptor {
    pub name: String,
    pub aliases: Vec<String>,
    pub func: MetricFn,
}

impl MetricDescriptor {
    pub fn new(name: &str, aliases: &[&str], func: MetricFn) -> Self {
        Self {
            name: name.to_ascii_lowercase(),
            aliases: aliases.iter().map(|a| a.to_ascii_lowercase()).collect(),
            func,
        }
    }

    pub fn kind(&self) -> MetricKind {
        self.func.kind()
    }
}

/// Canonical names of the built-in metrics, sorted.
pub const BUILTIN_METRICS: [&str; 13] = [
    "accuracy",
    "adjusted_rand_index",
    "auc",
    "avg_hausdorff",
    "balanced_accuracy",
    "dice",
    "hausdorff",
    "iou",
    "kappa",
    "precision",
    "sensitivity",
    "specificity",
    "volumetric_similarity",
];

fn builtin_descriptors() -> Vec<MetricDescriptor> {
    use MetricFn::*;
    vec![
        MetricDescriptor::new("dice", &["dsc", "f1"], Overlap(overlap::dice)),
        MetricDescriptor::new("iou", &["jaccard"], Overlap(overlap::iou)),
        MetricDescriptor::new(
            "sensitivity",
            &["recall", "tpr"],
            Overlap(overlap::sensitivity),
        ),
        MetricDescriptor::new("specificity", &["tnr"], Overlap(overlap::specificity)),
        MetricDescriptor::new("precision", &["ppv"], Overlap(overlap::precision)),
        MetricDescriptor::new("accuracy", &["acc", "rand"], Overlap(overlap::accuracy)),
        MetricDescriptor::new(
            "balanced_accuracy",
            &["bacc"],
            Overlap(overlap::balanced_accuracy),
        ),
        MetricDescriptor::new(
            "adjusted_rand_index",
            &["ari"],
            Contingency(overlap::adjusted_rand_index),
        ),
        MetricDescriptor::new("auc", &["auc_binary"], Overlap(overlap::auc_binary)),
        MetricDescriptor::new("kappa", &["cohen_kappa"], Overlap(overlap::kappa)),
        MetricDescriptor::new(
            "volumetric_similarity",
            &["vs"],
            Overlap(overlap::volumetric_similarity),
        ),
        MetricDescriptor::new("hausdorff", &["hd"], Distance(distance::hausdorff)),
        MetricDescriptor::new("avg_hausdorff", &["ahd"], Distance(distance::avg_hausdorff)),
    ]
}

/// Name-to-metric table. Build it, register custom metrics, then share it
/// immutably.
#[derive(Debug, Clone)]
pub struct Registry {
    metrics: Vec<MetricDescriptor>,
    lookup: HashMap<String, usize>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            metrics: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut registry = Self::empty();
        for d in builtin_descriptors() {
            registry.register(d).expect("built-in names are unique");
        }
        registry
    }

    /// Adds a metric. Fails if its name or any alias is already taken.
    pub fn register(&mut self, descriptor: MetricDescriptor) -> Result<()> {
        let mut names = vec![descriptor.name.clone()];
        names.extend(descriptor.aliases.iter().cloned());
        for (i, n) in names.iter().enumerate() {
            if self.lookup.contains_key(n) || names[..i].contains(n) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let idx = self.metrics.len();
        for n in names {
            self.lookup.insert(n, idx);
        }
        self.metrics.push(descriptor);
        Ok(())
    }

    /// Finds a metric by canonical name or alias, case-insensitively.
    pub fn resolve(&self, name: &str) -> Result<&MetricDescriptor> {
        self.lookup
            .get(&name.to_ascii_lowercase())
            .map(|&i| &self.metrics[i])
            .ok_or_else(|| Error::UnknownMetric(name.to_string()))
    }

    /// Canonical names of every registered metric, sorted.
    pub fn names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.metrics.iter().map(|d| d.name.as_str()).collect();
        names.sort_unstable();
        names
    }

    pub fn evaluate<'a>(
        &self,
        truth: &LabelMask,
        pred: &LabelMask,
        metric: impl Into<MetricSelector<'a>>,
        options: &EvalOptions,
    ) -> Result<EvaluationResult> {
        let (name, func) = match metric.into() {
            MetricSelector::Name(n) => {
                let d = self.resolve(n)?;
                (d.name.clone(), d.func.clone())
            }
            MetricSelector::Func(f) => ("custom".to_string(), f.clone()),
        };
        evaluate_with(truth, pred, name, &func, options)
    }
}

fn builtin_registry() -> &'static Registry {
    static REGISTRY: OnceLock<Registry> = OnceLock::new();
    REGISTRY.get_or_init(Registry::with_builtins)
}

/// A metric given either by name or as an implementation.
#[derive(Debug, Clone, Copy)]
pub enum MetricSelector<'a> {
    Name(&'a str),
    Func(&'a MetricFn),
}

impl<'a> From<&'a str> for MetricSelector<'a> {
    fn from(name: &'a str) -> Self {
        Self::Name(name)
    }
}

impl<'a> From<&'a String> for MetricSelector<'a> {
    fn from(name: &'a String) -> Self {
        Self::Name(name)
    }
}

impl<'a> From<&'a MetricFn> for MetricSelector<'a> {
    fn from(func: &'a MetricFn) -> Self {
        Self::Func(func)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ModeRequest {
    /// Binary when every label is 0 or 1, multi-class otherwise.
    #[default]
    Auto,
    Binary,
    MultiClass,
}

impl FromStr for ModeRequest {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "binary" => Ok(Self::Binary),
            "multiclass" => Ok(Self::MultiClass),
            other => Err(format!(
                "unknown mode `{other}` (expected auto, binary or multiclass)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Binary,
    MultiClass,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Binary => "binary",
            Self::MultiClass => "multiclass",
        }
    }
}

/// Knobs of an evaluation; the defaults score a mask pair in one call.
#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub mode: ModeRequest,
    pub policy: ZeroDivisionPolicy,
    /// Per-axis spacing in shape order; unit spacing when `None`.
    pub spacing: Option<Spacing>,
    pub hd_algo: HausdorffAlgo,
    /// Drop class 0 from multi-class results.
    pub exclude_background: bool,
}

/// Outcome for one class.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassScore {
    Scored(Score),
    Undefined(String),
}

impl ClassScore {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Scored(s) => Some(s.value),
            Self::Undefined(_) => None,
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Self::Scored(_) => None,
            Self::Undefined(r) => Some(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    Macro,
    Weighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    pub metric: String,
    pub mode: Mode,
    /// Classes actually scored, ascending.
    pub classes: Vec<u16>,
    pub per_class: BTreeMap<u16, ClassScore>,
    /// Whole-table score for partition metrics (the adjusted Rand index).
    pub overall: Option<ClassScore>,
    /// Truth pixel count of each scored class.
    pub truth_volumes: BTreeMap<u16, u64>,
    /// `None` when no per-class entry has a value.
    pub macro_avg: Option<f64>,
    /// `None` when the scored classes carry no truth pixels.
    pub weighted: Option<f64>,
}

impl EvaluationResult {
    pub fn score(&self, class: u16) -> Option<f64> {
        self.per_class.get(&class).and_then(ClassScore::value)
    }
}

/// Macro or truth-volume-weighted mean over the per-class entries that carry
/// a value. Undefined entries contribute neither score nor weight.
pub fn aggregate(result: &EvaluationResult, scheme: Aggregation) -> Result<f64> {
    aggregate_parts(&result.per_class, &result.truth_volumes, scheme)
}

fn aggregate_parts(
    per_class: &BTreeMap<u16, ClassScore>,
    volumes: &BTreeMap<u16, u64>,
    scheme: Aggregation,
) -> Result<f64> {
    let scored: Vec<(u16, f64)> = per_class
        .iter()
        .filter_map(|(&c, s)| s.value().map(|v| (c, v)))
        .collect();
    if scored.is_empty() {
        return Err(Error::NoDefinedScores);
    }
    match scheme {
        Aggregation::Macro => Ok(scored.iter().map(|(_, v)| v).sum::<f64>() / scored.len() as f64),
        Aggregation::Weighted => {
            let mut mass = 0u64;
            let mut acc = 0.0;
            for (c, v) in scored {
                let w = volumes.get(&c).copied().unwrap_or(0);
                mass += w;
                acc += w as f64 * v;
            }
            if mass == 0 {
                return Err(Error::NoDefinedScores);
            }
            Ok(acc / mass as f64)
        }
    }
}

/// Evaluates a built-in metric by name with default registry.
pub fn evaluate<'a>(
    truth: &LabelMask,
    pred: &LabelMask,
    metric: impl Into<MetricSelector<'a>>,
    options: &EvalOptions,
) -> Result<EvaluationResult> {
    builtin_registry().evaluate(truth, pred, metric, options)
}

fn absence_reason(truth_has: bool, pred_has: bool, class: u16) -> String {
    match (truth_has, pred_has) {
        (false, false) => format!("class {class} absent from truth and prediction"),
        (false, true) => format!("class {class} absent from truth"),
        _ => format!("class {class} absent from prediction"),
    }
}

fn evaluate_with(
    truth: &LabelMask,
    pred: &LabelMask,
    name: String,
    func: &MetricFn,
    options: &EvalOptions,
) -> Result<EvaluationResult> {
    validate_pair(truth, pred)?;
    let spacing = match &options.spacing {
        Some(s) => {
            if s.rank() != truth.rank() {
                return Err(Error::SpacingInvalid {
                    spacing: s.as_slice().to_vec(),
                    rank: truth.rank(),
                });
            }
            s.clone()
        }
        None => Spacing::unit(truth.rank()),
    };
    let all_classes = classes_of(truth, pred);
    let mode = match options.mode {
        ModeRequest::Binary => Mode::Binary,
        ModeRequest::MultiClass => Mode::MultiClass,
        ModeRequest::Auto => {
            if all_classes.iter().all(|&c| c <= 1) {
                Mode::Binary
            } else {
                Mode::MultiClass
            }
        }
    };
    let classes: Vec<u16> = match mode {
        Mode::Binary => vec![1],
        Mode::MultiClass => all_classes
            .iter()
            .copied()
            .filter(|&c| !(options.exclude_background && c == 0))
            .collect(),
    };

    let mut per_class = BTreeMap::new();
    let mut truth_volumes = BTreeMap::new();
    let mut overall = None;

    let table = match func {
        MetricFn::Overlap(_) | MetricFn::Contingency(_) => {
            Some(contingency(truth, pred, &all_classes)?)
        }
        _ => None,
    };
    if let (MetricFn::Contingency(f), Some(table)) = (func, &table) {
        overall = Some(ClassScore::Scored(f(table, options.policy)?));
    }

    for &class in &classes {
        let volume = truth.count(class);
        truth_volumes.insert(class, volume);
        let entry = match func {
            MetricFn::Overlap(f) => {
                let cm = table
                    .as_ref()
                    .and_then(|t| t.one_vs_rest(class))
                    .unwrap_or_else(|| ConfusionCounts::new(0, 0, truth.len() as u64, 0));
                ClassScore::Scored(f(&cm, options.policy)?)
            }
            MetricFn::Contingency(f) => {
                let t = binary_contingency(&truth.binarize(class), &pred.binarize(class))?;
                ClassScore::Scored(f(&t, options.policy)?)
            }
            MetricFn::Distance(f) => {
                let bt = truth.binarize(class);
                let bp = pred.binarize(class);
                let (th, ph) = (bt.has_foreground(), bp.has_foreground());
                if th && ph {
                    ClassScore::Scored(Score::new(f(&bt, &bp, &spacing, options.hd_algo)?))
                } else {
                    ClassScore::Undefined(absence_reason(th, ph, class))
                }
            }
            MetricFn::Custom(f) => {
                let ctx = MetricContext {
                    class,
                    policy: options.policy,
                    spacing: spacing.clone(),
                    hd_algo: options.hd_algo,
                };
                ClassScore::Scored(f(&truth.binarize(class), &pred.binarize(class), &ctx)?)
            }
        };
        per_class.insert(class, entry);
    }

    let macro_avg = aggregate_parts(&per_class, &truth_volumes, Aggregation::Macro).ok();
    let weighted = aggregate_parts(&per_class, &truth_volumes, Aggregation::Weighted).ok();
    Ok(EvaluationResult {
        metric: name,
        mode,
        classes,
        per_class,
        overall,
        truth_volumes,
        macro_avg,
        weighted,
    })
}
