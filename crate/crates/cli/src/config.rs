//! `key = value` run files and the small value parsers shared with flags.

use anyhow::{anyhow, bail, Context, Result};
use num_rational::Ratio;
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Parsed run file. Later lines win over earlier ones.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, got `{line}`", i + 1))?;
            let key = k.trim().replace('_', "-");
            if key.is_empty() {
                bail!("line {}: empty key", i + 1);
            }
            entries.insert(key, v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("config key `{key}` = `{v}`: {e}")))
            .transpose()
    }

    /// Keys not in `known`, for rejecting typos.
    pub fn unknown<'a>(&'a self, known: &[&str]) -> Vec<&'a str> {
        self.entries.keys().map(String::as_str).filter(|k| !known.contains(k)).collect()
    }
}

/// θ as given: an exact fraction like `7/32` or a decimal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Exact(Ratio<i64>),
    Decimal(f64),
}

impl Theta {
    pub fn value(&self) -> f64 {
        match *self {
            Theta::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Theta::Decimal(x) => x,
        }
    }
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Theta::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Theta::Decimal(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Theta {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.contains('/') {
            let r: Ratio<i64> = s.parse().map_err(|e| format!("bad fraction `{s}`: {e}"))?;
            Ok(Theta::Exact(r))
        } else {
            let x: f64 = s.parse().map_err(|e| format!("bad number `{s}`: {e}"))?;
            if !x.is_finite() {
                return Err(format!("theta must be finite, got `{s}`"));
            }
            Ok(Theta::Decimal(x))
        }
    }
}

/// Inclusive integer range `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
        let lo = a.trim().parse().map_err(|_| format!("bad range start in `{s}`"))?;
        let hi = b.trim().parse().map_err(|_| format!("bad range end in `{s}`"))?;
        if hi < lo {
            return Err(format!("empty range `{s}`"));
        }
        Ok(Span { lo, hi })
    }
}

/// Box `xlo:xhi,ylo:yhi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxSpec {
    pub x: Span,
    pub y: Span,
}

impl FromStr for BoxSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected xlo:xhi,ylo:yhi, got `{s}`"))?;
        Ok(BoxSpec { x: a.parse()?, y: b.parse()? })
    }
}

/// Bilinear form request: `c=101,s=1,alpha=0.25,I=1:20,beta=0.5,J=1:30`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearSpec {
    pub c: u64,
    pub s: u64,
    pub alpha: f64,
    pub beta: f64,
    pub i: Span,
    pub j: Span,
}

impl FromStr for BilinearSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut c = None;
        let mut scalar = 1;
        let (mut alpha, mut beta) = (0.0, 0.0);
        let (mut i, mut j) = (None, None);
        for part in s.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value in bilinear spec, got `{part}`"))?;
            let v = v.trim();
            let num = |what: &str| format!("bad {what} `{v}`");
            match k.trim() {
                "c" => c = Some(v.parse().map_err(|_| num("c"))?),
                "s" => scalar = v.parse().map_err(|_| num("s"))?,
                "alpha" => alpha = v.parse().map_err(|_| num("alpha"))?,
                "beta" => beta = v.parse().map_err(|_| num("beta"))?,
                "I" => i = Some(v.parse()?),
                "J" => j = Some(v.parse()?),
                other => return Err(format!("unknown bilinear spec key `{other}` (use c, s, alpha, beta, I, J)")),
            }
        }
        Ok(BilinearSpec {
            c: c.ok_or("bilinear spec needs c")?,
            s: scalar,
            alpha,
            beta,
            i: i.ok_or("bilinear spec needs I=lo:hi")?,
            j: j.ok_or("bilinear spec needs J=lo:hi")?,
        })
    }
}
