//! Structure ids and parameters understood by the harness.

use std::fmt;

use super::HarnessError;
use crate::api::{OracleSet, PredecessorSet, Width};
use crate::btree::{BTree, BTreeConfig, NodeSearch};
use crate::fusion::{FusionTree16, FusionTree8, RankSearch};
use crate::sampling::{BucketKind, TopKind, USConfig, UniverseSampling};
use crate::yfast::{BucketOrder, YFastConfig, YFastTrie};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    UsArray,
    UsHash,
    YFastUl,
    YFastSl,
    Fusion,
    FusionWide,
    BTreeLs,
    BTreeBs,
    Oracle,
}

impl StructureKind {
    pub const ALL: [StructureKind; 9] = [
        StructureKind::UsArray,
        StructureKind::UsHash,
        StructureKind::YFastUl,
        StructureKind::YFastSl,
        StructureKind::Fusion,
        StructureKind::FusionWide,
        StructureKind::BTreeLs,
        StructureKind::BTreeBs,
        StructureKind::Oracle,
    ];

    pub fn id(self) -> &'static str {
        match self {
            StructureKind::UsArray => "us-array",
            StructureKind::UsHash => "us-hash",
            StructureKind::YFastUl => "yfast-ul",
            StructureKind::YFastSl => "yfast-sl",
            StructureKind::Fusion => "fusion",
            StructureKind::FusionWide => "fusion-wide",
            StructureKind::BTreeLs => "btree-ls",
            StructureKind::BTreeBs => "btree-bs",
            StructureKind::Oracle => "oracle",
        }
    }

    pub fn from_id(id: &str) -> Option<StructureKind> {
        Self::ALL.into_iter().find(|k| k.id() == id)
    }

    /// Universe sampling is not built for 64-bit keys.
    pub fn supports(self, width: Width) -> bool {
        !matches!(self, StructureKind::UsArray | StructureKind::UsHash) || width.bits() < 64
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            StructureKind::UsArray | StructureKind::UsHash => &["bucket", "b", "theta_min", "theta_max"],
            StructureKind::YFastUl | StructureKind::YFastSl => &["t", "c", "gamma"],
            StructureKind::Fusion | StructureKind::FusionWide => &["backend"],
            StructureKind::BTreeLs | StructureKind::BTreeBs => &["B"],
            StructureKind::Oracle => &[],
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A structure id with `key=value` parameters; missing parameters take
/// their defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureSpec {
    pub kind: StructureKind,
    params: Vec<(String, String)>,
}

fn bad(name: &str, value: &str, why: &str) -> HarnessError {
    HarnessError::Param(format!("{name}={value}: {why}"))
}

/// Accepts plain integers and powers written as `2^k`.
fn parse_count(name: &str, value: &str) -> Result<u64, HarnessError> {
    if let Some(exp) = value.strip_prefix("2^") {
        let e: u32 = exp.parse().map_err(|_| bad(name, value, "bad exponent"))?;
        return 1u64.checked_shl(e).filter(|_| e < 64).ok_or_else(|| bad(name, value, "too large"));
    }
    value.parse().map_err(|_| bad(name, value, "not an integer"))
}

impl StructureSpec {
    pub fn new(kind: StructureKind) -> Self {
        StructureSpec {
            kind,
            params: Vec::new(),
        }
    }

    /// Sets a parameter, replacing an earlier value.
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.retain(|(k, _)| k != key);
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    /// Parses an id and `key=value` strings.
    pub fn parse<S: AsRef<str>>(id: &str, params: &[S]) -> Result<Self, HarnessError> {
        let kind = StructureKind::from_id(id).ok_or_else(|| HarnessError::UnknownStructure(id.to_string()))?;
        let mut spec = StructureSpec::new(kind);
        for p in params {
            let p = p.as_ref();
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| HarnessError::Param(format!("{p}: expected key=value")))?;
            if !kind.keys().contains(&k) {
                return Err(HarnessError::Param(format!(
                    "{id} has no parameter {k}; known: {}",
                    kind.keys().join(", ")
                )));
            }
            spec = spec.with(k, v);
        }
        spec.resolve()?;
        Ok(spec)
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn resolve(&self) -> Result<Resolved, HarnessError> {
        Ok(match self.kind {
            StructureKind::UsArray | StructureKind::UsHash => {
                let bucket = match self.get("bucket").unwrap_or("hybrid") {
                    "bv" => BucketKind::BitVector,
                    "ul" => BucketKind::List,
                    "hybrid" => BucketKind::Hybrid,
                    other => return Err(bad("bucket", other, "expected bv, ul or hybrid")),
                };
                let top = if self.kind == StructureKind::UsArray {
                    TopKind::Array
                } else {
                    TopKind::Hash
                };
                let base = match bucket {
                    BucketKind::Hybrid => USConfig::default(),
                    _ => USConfig::pure(top, bucket),
                };
                let k_b = match self.get("b") {
                    None => base.k_b,
                    Some(v) => {
                        let b = parse_count("b", v)?;
                        if !b.is_power_of_two() || b < 2 {
                            return Err(bad("b", v, "must be a power of two of at least 2"));
                        }
                        b.trailing_zeros()
                    }
                };
                let theta = |key: &str, default: u32| -> Result<u32, HarnessError> {
                    match self.get(key) {
                        None => Ok(default),
                        Some(v) => u32::try_from(parse_count(key, v)?).map_err(|_| bad(key, v, "too large")),
                    }
                };
                Resolved::Us(USConfig {
                    k_b,
                    top,
                    bucket,
                    theta_min: theta("theta_min", base.theta_min)?,
                    theta_max: theta("theta_max", base.theta_max)?,
                })
            }
            StructureKind::YFastUl | StructureKind::YFastSl => {
                let base = YFastConfig::default();
                let t = match self.get("t") {
                    None => base.t,
                    Some(v) => parse_count("t", v)? as usize,
                };
                let c = match self.get("c") {
                    None => base.c,
                    Some(v) => parse_count("c", v)? as usize,
                };
                let gamma = match self.get("gamma") {
                    None => base.gamma,
                    Some(v) => v.parse().map_err(|_| bad("gamma", v, "not a number"))?,
                };
                let order = if self.kind == StructureKind::YFastUl {
                    BucketOrder::Unsorted
                } else {
                    BucketOrder::Sorted
                };
                Resolved::YFast(YFastConfig { t, c, gamma, order })
            }
            StructureKind::Fusion | StructureKind::FusionWide => {
                let search = match self.get("backend").unwrap_or("simd") {
                    "simd" => RankSearch::Packed,
                    "linear" => RankSearch::Linear,
                    other => return Err(bad("backend", other, "expected simd or linear")),
                };
                Resolved::Fusion(search)
            }
            StructureKind::BTreeLs | StructureKind::BTreeBs => {
                let degree = match self.get("B") {
                    None => BTreeConfig::default().degree,
                    Some(v) => parse_count("B", v)? as usize,
                };
                let search = if self.kind == StructureKind::BTreeLs {
                    NodeSearch::Linear
                } else {
                    NodeSearch::Binary
                };
                Resolved::BTree(BTreeConfig { degree, search })
            }
            StructureKind::Oracle => Resolved::Oracle,
        })
    }

    /// The universe-sampling configuration this spec builds, if it names one.
    pub fn us_config(&self) -> Option<USConfig> {
        match self.resolve() {
            Ok(Resolved::Us(c)) => Some(c),
            _ => None,
        }
    }

    /// Every parameter with defaults filled in, as `k=v` joined by `;`.
    pub fn params_string(&self) -> String {
        match self.resolve() {
            Ok(Resolved::Us(c)) => {
                let bucket = match c.bucket {
                    BucketKind::BitVector => "bv",
                    BucketKind::List => "ul",
                    BucketKind::Hybrid => "hybrid",
                };
                let mut s = format!("bucket={bucket};b={}", 1u64 << c.k_b);
                if c.bucket == BucketKind::Hybrid {
                    s += &format!(";theta_min={};theta_max={}", c.theta_min, c.theta_max);
                }
                s
            }
            Ok(Resolved::YFast(c)) => format!("t={};c={};gamma={}", c.t, c.c, c.gamma),
            Ok(Resolved::Fusion(search)) => {
                let k = if self.kind == StructureKind::Fusion { 8 } else { 16 };
                let backend = match search {
                    RankSearch::Packed => "simd",
                    RankSearch::Linear => "linear",
                };
                format!("k={k};backend={backend}")
            }
            Ok(Resolved::BTree(c)) => format!("B={}", c.degree),
            Ok(Resolved::Oracle) => String::new(),
            Err(_) => self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }

    /// Constructs an empty structure for keys of the given width.
    pub fn build(&self, width: Width) -> Result<Box<dyn PredecessorSet>, HarnessError> {
        if !self.kind.supports(width) {
            return Err(HarnessError::Unsupported {
                structure: self.kind.id(),
                width,
            });
        }
        Ok(match self.resolve()? {
            Resolved::Us(c) => Box::new(UniverseSampling::new(width, c)?),
            Resolved::YFast(c) => Box::new(YFastTrie::new(width, c)?),
            Resolved::Fusion(search) if self.kind == StructureKind::Fusion => {
                Box::new(FusionTree8::new(width, search)?)
            }
            Resolved::Fusion(search) => Box::new(FusionTree16::new(width, search)?),
            Resolved::BTree(c) => Box::new(BTree::new(width, c)?),
            Resolved::Oracle => Box::new(OracleSet::new(width)),
        })
    }
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params_string();
        if params.is_empty() {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}[{params}]", self.kind)
        }
    }
}

enum Resolved {
    Us(USConfig),
    YFast(YFastConfig),
    Fusion(RankSearch),
    BTree(BTreeConfig),
    Oracle,
}

/// Every structure configuration the library documents, sized so that a
/// differential run of about 10^5 operations stays within a few hundred
/// megabytes: pure bit-vector buckets use `b = 2^16` here rather than their
/// benchmark default of `2^24`.
pub fn standard_specs() -> Vec<StructureSpec> {
    let mut out = Vec::new();
    for kind in [StructureKind::UsArray, StructureKind::UsHash] {
        let s = StructureSpec::new(kind);
        out.push(s.clone().with("bucket", "bv").with("b", "2^16"));
        out.push(s.clone().with("bucket", "ul"));
        out.push(s.clone().with("bucket", "hybrid"));
        out.push(s.with("bucket", "hybrid").with("b", "2^8").with("theta_min", 4).with("theta_max", 16));
    }
    for kind in [StructureKind::YFastUl, StructureKind::YFastSl] {
        for t in [64, 128, 256, 512] {
            out.push(StructureSpec::new(kind).with("t", t));
        }
    }
    for kind in [StructureKind::Fusion, StructureKind::FusionWide] {
        for backend in ["simd", "linear"] {
            out.push(StructureSpec::new(kind).with("backend", backend));
        }
    }
    for kind in [StructureKind::BTreeLs, StructureKind::BTreeBs] {
        for b in [8, 16, 64, 128, 256] {
            out.push(StructureSpec::new(kind).with("B", b));
        }
    }
    out.push(StructureSpec::new(StructureKind::Oracle));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_describe() {
        let s = StructureSpec::parse("us-hash", &["bucket=ul", "b=2^12"]).unwrap();
        assert_eq!(s.params_string(), "bucket=ul;b=4096");
        let s = StructureSpec::parse("yfast-sl", &["t=256"]).unwrap();
        assert_eq!(s.params_string(), "t=256;c=2;gamma=0.25");
        assert_eq!(StructureSpec::parse::<&str>("fusion-wide", &[]).unwrap().params_string(), "k=16;backend=simd");
        assert_eq!(StructureSpec::parse::<&str>("btree-bs", &[]).unwrap().to_string(), "btree-bs[B=64]");
        assert!(StructureSpec::parse::<&str>("splay", &[]).is_err());
        assert!(StructureSpec::parse("btree-ls", &["t=4"]).is_err());
        assert!(StructureSpec::parse("us-array", &["bucket=sorted"]).is_err());
    }

    #[test]
    fn builds_every_standard_spec() {
        for spec in standard_specs() {
            for width in Width::ALL {
                let built = spec.build(width);
                assert_eq!(built.is_ok(), spec.kind.supports(width), "{spec} at {width}");
            }
        }
        assert!(StructureSpec::parse("btree-ls", &["B=7"]).unwrap().build(Width::W32).is_err());
    }
}
