//! Surveys over the family `y^2 = f(x)(x - t)`: one record per parameter
//! `t` (or per pair of distinct parameters), with aggregate counts and the
//! sieve bound alongside.
//!
//! Config files are flat `key = value` lines, `#` starts a comment:
//!
//! ```text
//! f = 1,1,1        # coefficients low to high, monic, even degree
//! p = 7
//! e = 2
//! k = 1            # 1 or 2
//! ell_budget = 200
//! bits = 256
//! height = 50
//! seed = 0
//! jobs = 4
//! cap = 200000000
//! tuple_budget = 20000
//! timings = false
//! lattice_cache = cache/
//! out_json = survey.json
//! out_csv = survey.csv
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use frobrel_arith::{is_prime, FieldCtx, ModPoly, DEFAULT_ENUM_CAP};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve_zeta::{lpolynomial, CurveSpec};
use crate::error::{CoreError, Result};
use crate::galois::{self, class_key_string, parse_class_key, Verdict, Witness, DEFAULT_ELL_BUDGET};
use crate::relations::{independence_report_with, verdicts_string, DetectOptions, DEFAULT_BITS, DEFAULT_HEIGHT};
use crate::sieve::{exponent_gamma, sieve_bound, Method};
use crate::weil_poly::{is_q_symplectic, rh_check, QSymplecticPoly};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyConfig {
    pub f: Vec<i64>,
    pub p: u64,
    pub e: u32,
    pub k: usize,
    pub ell_budget: u64,
    pub bits: u32,
    pub height: u64,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub cap: u64,
    /// Largest number of pairs swept in full when `k = 2`; beyond it a seeded sample of this size is used.
    pub tuple_budget: usize,
    /// Record wall times. Off by default so that exports are byte-stable.
    pub timings: bool,
    pub lattice_cache: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
}

impl SurveyConfig {
    pub fn new(f: Vec<i64>, p: u64, e: u32) -> Self {
        Self {
            f,
            p,
            e,
            k: 1,
            ell_budget: DEFAULT_ELL_BUDGET,
            bits: DEFAULT_BITS,
            height: DEFAULT_HEIGHT,
            seed: 0,
            jobs: None,
            cap: DEFAULT_ENUM_CAP,
            tuple_budget: 20_000,
            timings: false,
            lattice_cache: None,
            out_json: None,
            out_csv: None,
        }
    }

    pub fn genus(&self) -> usize {
        (self.f.len().max(1) - 1) / 2
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    /// ConfigInvalid for malformed settings, CapExceeded when `q^g` is over the cap.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CoreError::ConfigInvalid(m));
        if self.p == 2 || !is_prime(self.p) {
            return bad(format!("p = {} is not an odd prime", self.p));
        }
        if self.e == 0 {
            return bad("e must be at least 1".into());
        }
        if self.f.len() < 3 || self.f.last() != Some(&1) || (self.f.len() - 1) % 2 == 1 {
            return bad("f must be monic of even positive degree".into());
        }
        if !ModPoly::from_i64(self.p, &self.f).is_squarefree() {
            return bad(format!("p = {} divides the discriminant of f", self.p));
        }
        if !(1..=2).contains(&self.k) {
            return bad(format!("k = {} is not supported (1 or 2)", self.k));
        }
        if self.bits < 64 {
            return bad("bits must be at least 64".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        let qg = (self.p as u128).checked_pow(self.e * self.genus() as u32);
        if qg.is_none_or(|v| v > self.cap as u128) {
            return Err(CoreError::CapExceeded(format!(
                "q^g = {}^{} is over the cap {}",
                self.q(),
                self.genus(),
                self.cap
            )));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = SurveyConfig::new(vec![], 0, 1);
        let (mut have_f, mut have_p) = (false, false);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CoreError::ConfigInvalid(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let err = |what: &str| CoreError::ConfigInvalid(format!("line {}: bad {what} '{value}'", lineno + 1));
            fn num<T: FromStr>(v: &str, e: CoreError) -> Result<T> {
                v.parse().map_err(|_| e)
            }
            match key {
                "f" => {
                    c.f = value.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| err("f"))?;
                    have_f = true;
                }
                "p" => {
                    c.p = num(value, err("p"))?;
                    have_p = true;
                }
                "e" => c.e = num(value, err("e"))?,
                "k" => c.k = num(value, err("k"))?,
                "ell_budget" => c.ell_budget = num(value, err("ell_budget"))?,
                "bits" => c.bits = num(value, err("bits"))?,
                "height" => c.height = num(value, err("height"))?,
                "seed" => c.seed = num(value, err("seed"))?,
                "jobs" => c.jobs = Some(num(value, err("jobs"))?),
                "cap" => c.cap = num(value, err("cap"))?,
                "tuple_budget" => c.tuple_budget = num(value, err("tuple_budget"))?,
                "timings" => c.timings = num(value, err("timings"))?,
                "lattice_cache" => c.lattice_cache = Some(value.into()),
                "out_json" => c.out_json = Some(value.into()),
                "out_csv" => c.out_csv = Some(value.into()),
                _ => return Err(CoreError::ConfigInvalid(format!("line {}: unknown key '{key}'", lineno + 1))),
            }
        }
        if !have_f || !have_p {
            return Err(CoreError::ConfigInvalid("f and p are required".into()));
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub t: Vec<u64>,
    /// L-polynomial coefficients `c_0..c_2g`, one vector per coordinate of `t`.
    pub lpolys: Vec<Vec<i64>>,
    pub cert: String,
    pub witnesses: Vec<Witness>,
    pub trace_zero: bool,
    pub rel_verdict: String,
    pub nontrivial_rank: usize,
    pub ms_count: u64,
    pub ms_cert: u64,
    pub ms_rel: u64,
}

impl SurveyRecord {
    pub fn certified(&self) -> bool {
        self.cert == Verdict::Proven.to_string()
    }

    pub fn has_relations(&self) -> bool {
        self.rel_verdict.starts_with("HasRelations")
    }

    pub fn undetermined(&self) -> bool {
        self.rel_verdict == "Undetermined"
    }

    /// The set that must be empty: certified, no vanishing trace, relation found.
    pub fn contradicts_theorem(&self) -> bool {
        self.certified() && !self.trace_zero && self.has_relations()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveComparison {
    pub method: Method,
    pub gamma: u64,
    pub bound: f64,
    /// Exceptional count divided by `bound`.
    pub ratio: f64,
    pub caveat: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub q: u64,
    pub g: usize,
    pub k: usize,
    /// Size of the full parameter set.
    pub parameters: usize,
    /// Records actually computed (smaller than `parameters` when sampled).
    pub records: usize,
    pub sampled: bool,
    pub certified: usize,
    pub trace_zero: usize,
    pub with_relations: usize,
    pub undetermined: usize,
    pub contradictions: usize,
    pub sieve: SieveComparison,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurveyOutput {
    pub records: Vec<SurveyRecord>,
    pub aggregate: Aggregate,
}

/// `U(F_q)`: the `t` with `f(t) != 0`.
pub fn parameter_set(f: &[i64], field: &FieldCtx) -> Vec<u64> {
    let fc: Vec<u64> = f.iter().map(|&c| field.from_int(c)).collect();
    field.elements().filter(|&t| field.eval(&fc, t) != 0).collect()
}

fn ms(start: Instant, on: bool) -> u64 {
    if on {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn coeffs_i64(p: &QSymplecticPoly) -> Result<Vec<i64>> {
    p.coeffs()
        .iter()
        .map(|c| c.to_i64().ok_or_else(|| CoreError::TooLarge("L-polynomial coefficient over i64".into())))
        .collect()
}

fn check_lpoly(p: &QSymplecticPoly, t: u64) -> Result<()> {
    if !is_q_symplectic(p.coeffs(), p.q())? || !rh_check(p) {
        return Err(CoreError::InvariantViolated(format!("L-polynomial at t = {t} fails the Weil checks")));
    }
    Ok(())
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CoreError::ConfigInvalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Run the survey. Records come back in parameter order whatever the worker count.
pub fn run_survey(config: &SurveyConfig) -> Result<SurveyOutput> {
    config.validate()?;
    let field = FieldCtx::with_cap(config.p, config.e, config.cap)?;
    let ts = parameter_set(&config.f, &field);
    let opts = DetectOptions { bits: config.bits, height: config.height };
    let cache = config.lattice_cache.as_deref();

    with_pool(config.jobs, || {
        let lpolys: Vec<(QSymplecticPoly, u64)> = ts
            .par_iter()
            .map(|&t| {
                let start = Instant::now();
                let spec = CurveSpec::with_cap(config.f.clone(), t, config.p, config.e, config.cap)?;
                let p = lpolynomial(&spec)?;
                check_lpoly(&p, t)?;
                Ok((p, ms(start, config.timings)))
            })
            .collect::<Result<_>>()?;

        let (tuples, parameters, sampled) = parameter_tuples(ts.len(), config);
        let records = tuples
            .par_iter()
            .map(|idx| {
                let polys: Vec<QSymplecticPoly> = idx.iter().map(|&i| lpolys[i].0.clone()).collect();
                let start = Instant::now();
                let cert = galois::tuple_certificate_cached(&polys, config.ell_budget, cache);
                let ms_cert = ms(start, config.timings);
                let start = Instant::now();
                let rep = independence_report_with(&polys, cert, opts);
                let ms_rel = ms(start, config.timings);
                Ok(SurveyRecord {
                    t: idx.iter().map(|&i| ts[i]).collect(),
                    lpolys: polys.iter().map(coeffs_i64).collect::<Result<_>>()?,
                    cert: match &rep.certificate {
                        Some(c) => c.verdict.to_string(),
                        None => "Error".into(),
                    },
                    witnesses: rep.certificate.as_ref().map_or(vec![], |c| c.witnesses.clone()),
                    trace_zero: rep.trace_zero,
                    rel_verdict: verdicts_string(&rep.verdicts),
                    nontrivial_rank: rep.nontrivial_rank(),
                    ms_count: idx.iter().map(|&i| lpolys[i].1).sum(),
                    ms_cert,
                    ms_rel,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let aggregate = aggregate(&records, config, parameters, sampled)?;
        Ok(SurveyOutput { records, aggregate })
    })?
}

/// Index tuples into the parameter list: singletons for `k = 1`, pairs `i < j` for `k = 2`.
fn parameter_tuples(n: usize, config: &SurveyConfig) -> (Vec<Vec<usize>>, usize, bool) {
    if config.k == 1 {
        return ((0..n).map(|i| vec![i]).collect(), n, false);
    }
    let total = n * n.saturating_sub(1) / 2;
    let pair = |mut r: usize| {
        let mut i = 0;
        while r >= n - 1 - i {
            r -= n - 1 - i;
            i += 1;
        }
        vec![i, i + 1 + r]
    };
    if total <= config.tuple_budget {
        return ((0..total).map(pair).collect(), total, false);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut picks = rand::seq::index::sample(&mut rng, total, config.tuple_budget).into_vec();
    picks.sort_unstable();
    (picks.into_iter().map(pair).collect(), total, true)
}

fn aggregate(records: &[SurveyRecord], config: &SurveyConfig, parameters: usize, sampled: bool) -> Result<Aggregate> {
    let g = config.genus();
    let method = if config.k == 1 { Method::Prop1 } else { Method::Th2 };
    let gamma = exponent_gamma(method, g as u64, config.k as u64)?;
    let bound = sieve_bound(config.q() as f64, config.k as u32, gamma as f64).value;
    let with_relations = records.iter().filter(|r| r.has_relations()).count();
    Ok(Aggregate {
        q: config.q(),
        g,
        k: config.k,
        parameters,
        records: records.len(),
        sampled,
        certified: records.iter().filter(|r| r.certified()).count(),
        trace_zero: records.iter().filter(|r| r.trace_zero).count(),
        with_relations,
        undetermined: records.iter().filter(|r| r.undetermined()).count(),
        contradictions: records.iter().filter(|r| r.contradicts_theorem()).count(),
        sieve: SieveComparison {
            method,
            gamma,
            bound,
            ratio: with_relations as f64 / bound,
            caveat: "bound known only up to an unspecified implied constant".into(),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CoreError::InvalidInput(format!("unknown format '{s}'"))),
        }
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn csv_header(g: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((0..=2 * g).map(|i| format!("c_{i}")));
    for s in ["cert", "trace_zero", "rel_verdict", "nontrivial_rank", "ms_count", "ms_cert", "ms_rel", "witnesses"] {
        h.push(s.into());
    }
    h
}

/// Records as JSON text (an array) or CSV text.
///
/// CSV: tuple entries and per-coordinate coefficients are joined with `;`,
/// witnesses are written `ell:class` joined with `;`.
pub fn export_string(records: &[SurveyRecord], format: Format) -> Result<String> {
    if records.is_empty() {
        return Err(CoreError::InvalidInput("no records to export".into()));
    }
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(records).expect("records serialise") + "\n"),
        Format::Csv => {
            let g = (records[0].lpolys[0].len() - 1) / 2;
            let mut w = csv::Writer::from_writer(vec![]);
            let io = |e: csv::Error| CoreError::Io(e.to_string());
            w.write_record(csv_header(g)).map_err(io)?;
            for r in records {
                let mut row = vec![join(&r.t, ";")];
                for i in 0..=2 * g {
                    row.push(join(r.lpolys.iter().map(|p| p[i]), ";"));
                }
                row.push(r.cert.clone());
                row.push(r.trace_zero.to_string());
                row.push(r.rel_verdict.clone());
                row.push(r.nontrivial_rank.to_string());
                row.push(r.ms_count.to_string());
                row.push(r.ms_cert.to_string());
                row.push(r.ms_rel.to_string());
                row.push(join(r.witnesses.iter().map(|w| format!("{}:{}", w.ell, class_key_string(&w.class))), ";"));
                w.write_record(&row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CoreError::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv is utf-8"))
        }
    }
}

pub fn export(records: &[SurveyRecord], format: Format, path: &Path) -> Result<()> {
    let text = export_string(records, format)?;
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

/// Inverse of [`export_string`].
pub fn parse_records(text: &str, format: Format) -> Result<Vec<SurveyRecord>> {
    let bad = |m: String| CoreError::InvalidInput(format!("records: {m}"));
    match format {
        Format::Json => serde_json::from_str(text).map_err(|e| bad(e.to_string())),
        Format::Csv => {
            let mut rd = csv::Reader::from_reader(text.as_bytes());
            let ncols = rd.headers().map_err(|e| bad(e.to_string()))?.len();
            if ncols < 10 || (ncols - 9) % 2 == 0 {
                return Err(bad(format!("unexpected column count {ncols}")));
            }
            let nc = ncols - 9;
            let mut out = Vec::new();
            for row in rd.records() {
                let row = row.map_err(|e| bad(e.to_string()))?;
                let ints = |s: &str| -> Result<Vec<i64>> { s.split(';').map(|x| x.parse().map_err(|_| bad(format!("integer '{x}'")))).collect() };
                let num = |s: &str| -> Result<u64> { s.parse().map_err(|_| bad(format!("integer '{s}'"))) };
                let t: Vec<u64> = row[0].split(';').map(num).collect::<Result<_>>()?;
                let cols: Vec<Vec<i64>> = (1..=nc).map(|i| ints(&row[i])).collect::<Result<_>>()?;
                let lpolys = (0..t.len()).map(|j| cols.iter().map(|c| c[j]).collect()).collect();
                let base = nc + 1;
                let witnesses = if row[base + 7].is_empty() {
                    vec![]
                } else {
                    row[base + 7]
                        .split(';')
                        .map(|w| {
                            let (ell, class) = w.split_once(':').ok_or_else(|| bad(format!("witness '{w}'")))?;
                            Ok(Witness { ell: num(ell)?, class: parse_class_key(class)? })
                        })
                        .collect::<Result<_>>()?
                };
                out.push(SurveyRecord {
                    t,
                    lpolys,
                    cert: row[base].to_string(),
                    trace_zero: row[base + 1].parse().map_err(|_| bad("trace_zero".into()))?,
                    rel_verdict: row[base + 2].to_string(),
                    nontrivial_rank: num(&row[base + 3])? as usize,
                    ms_count: num(&row[base + 4])?,
                    ms_cert: num(&row[base + 5])?,
                    ms_rel: num(&row[base + 6])?,
                    witnesses,
                });
            }
            Ok(out)
        }
    }
}

pub fn aggregate_json(a: &Aggregate) -> String {
    serde_json::to_string_pretty(a).expect("aggregate serialises") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SurveyConfig {
        let mut c = SurveyConfig::new(vec![1, 1, 1], 5, 1);
        c.bits = 128;
        c
    }

    #[test]
    fn parse_config() {
        let c = SurveyConfig::parse("# a comment\nf = 1, 1, 1\np=7\ne = 2 # inline\nk=2\njobs=3\ntimings=true\n").unwrap();
        assert_eq!((c.f.clone(), c.p, c.e, c.k, c.jobs, c.timings), (vec![1, 1, 1], 7, 2, 2, Some(3), true));
        assert!(matches!(SurveyConfig::parse("f=1,1,1\np=7\ncolour=red"), Err(CoreError::ConfigInvalid(_))));
        assert!(matches!(SurveyConfig::parse("f=1,x,1\np=7"), Err(CoreError::ConfigInvalid(_))));
        assert!(matches!(SurveyConfig::parse("p=7"), Err(CoreError::ConfigInvalid(_))));
        assert!(matches!(SurveyConfig::parse("f=1,1,1\np=7\nk"), Err(CoreError::ConfigInvalid(_))));
    }

    #[test]
    fn validation() {
        assert!(small().validate().is_ok());
        let mut c = small();
        c.f = vec![-1, 6, 1];
        assert!(matches!(c.validate(), Err(CoreError::ConfigInvalid(_))));
        let mut c = small();
        c.p = 9;
        assert!(matches!(c.validate(), Err(CoreError::ConfigInvalid(_))));
        let mut c = small();
        c.e = 20;
        assert!(matches!(c.validate(), Err(CoreError::CapExceeded(_))));
        let mut c = small();
        c.k = 3;
        assert!(matches!(c.validate(), Err(CoreError::ConfigInvalid(_))));
    }

    #[test]
    fn pairs_enumeration() {
        let mut c = small();
        c.k = 2;
        let (t, total, sampled) = parameter_tuples(5, &c);
        assert_eq!((total, sampled), (10, false));
        assert_eq!(t[0], vec![0, 1]);
        assert_eq!(t[4], vec![1, 2]);
        assert_eq!(t[9], vec![3, 4]);
        c.tuple_budget = 4;
        let (t, total, sampled) = parameter_tuples(5, &c);
        assert_eq!((t.len(), total, sampled), (4, 10, true));
        assert!(t.iter().all(|p| p[0] < p[1]));
        assert_eq!(parameter_tuples(5, &c).0, t);
    }

    #[test]
    fn run_and_round_trip() {
        let out = run_survey(&small()).unwrap();
        // x^2 + x + 1 has no roots mod 5
        assert_eq!(out.records.len(), 5);
        assert_eq!(out.aggregate.contradictions, 0);
        for fmt in [Format::Json, Format::Csv] {
            let s = export_string(&out.records, fmt).unwrap();
            assert_eq!(parse_records(&s, fmt).unwrap(), out.records);
        }
        let csv = export_string(&out.records[..3], Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("t,c_0,c_1,c_2,cert,trace_zero,rel_verdict,nontrivial_rank,ms_count,ms_cert,ms_rel,witnesses\n"));
        assert!(export_string(&[], Format::Csv).is_err());
    }

    #[test]
    fn pair_survey_round_trip() {
        let mut c = small();
        c.k = 2;
        c.tuple_budget = 6;
        let out = run_survey(&c).unwrap();
        assert_eq!(out.records.len(), 6);
        assert!(out.aggregate.sampled);
        assert_eq!(out.aggregate.parameters, 10);
        let s = export_string(&out.records, Format::Csv).unwrap();
        assert_eq!(parse_records(&s, Format::Csv).unwrap(), out.records);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut a = small();
        a.jobs = Some(1);
        let mut b = small();
        b.jobs = Some(4);
        let ra = run_survey(&a).unwrap().records;
        let rb = run_survey(&b).unwrap().records;
        assert_eq!(export_string(&ra, Format::Csv).unwrap(), export_string(&rb, Format::Csv).unwrap());
    }
}
