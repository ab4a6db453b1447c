//! CSV and text formats.
//!
//! Doubles are written in Rust's shortest round-trip form (`{:?}`), so every
//! file is byte-reproducible and parses back to the same values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use subgroup_core::capacity::AntennaConfig;
use subgroup_core::channel::{
    normalize_profile, DelayProfile, EmpiricalCorrelation, ProfileSegment,
};
use subgroup_core::grouping::{GridSpec, GroupingPlan};
use subgroup_core::linalg::CMatrix;
use subgroup_core::sim::{Algorithm1Report, ChannelMatrix, ChannelTrace, TrialReport};

use crate::error::{CliError, CliResult};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Renders a header and rows as CSV text.
pub fn csv_string<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV of ASCII fields")
}

pub const PLAN_HEADER: [&str; 5] = ["n", "k", "center_n", "center_k", "group_id"];

/// Membership CSV sorted by `(n, k)`.
pub fn plan_csv(plan: &GroupingPlan) -> String {
    let grid = plan.grid;
    csv_string(
        &PLAN_HEADER,
        (0..grid.len()).map(|idx| {
            let (n, k) = grid.point(idx);
            let (cn, ck) = plan.center_of(n, k);
            vec![
                n.to_string(),
                k.to_string(),
                cn.to_string(),
                ck.to_string(),
                plan.group_of(n, k).to_string(),
            ]
        }),
    )
}

/// `key = value` summary of a plan, followed by notes.
pub fn plan_summary(plan: &GroupingPlan) -> String {
    let mut s = String::new();
    let fields: [(&str, String); 9] = [
        ("zeta_r", fmt_f64(plan.zeta_r)),
        ("sigma_m2", fmt_f64(plan.sigma_m2_star)),
        ("beta", fmt_f64(plan.beta)),
        ("df_star_hz", fmt_f64(plan.df_star)),
        ("dt_star_s", fmt_f64(plan.dt_star)),
        ("s_f", plan.s_f.to_string()),
        ("s_t", plan.s_t.to_string()),
        ("group_size", plan.group_size.to_string()),
        ("group_count", plan.group_count().to_string()),
    ];
    for (k, v) in fields {
        writeln!(s, "{k} = {v}").unwrap();
    }
    for note in plan_notes(plan) {
        writeln!(s, "note = {note}").unwrap();
    }
    s
}

pub fn plan_notes(plan: &GroupingPlan) -> Vec<String> {
    use subgroup_core::capacity::MismatchSolution;
    let mut notes = Vec::new();
    if let MismatchSolution::Saturated { ceiling } = plan.solution {
        notes.push(format!(
            "threshold reaches the full-decorrelation loss {}; one group spans the grid",
            fmt_f64(ceiling)
        ));
    } else {
        if plan.unbounded_f {
            notes.push("unbounded coherence along frequency; groups span every subcarrier".into());
        }
        if plan.unbounded_t {
            notes.push("unbounded coherence along time; groups span every block".into());
        }
    }
    notes
}

/// Parsed row of a membership CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanRow {
    pub n: usize,
    pub k: usize,
    pub center_n: usize,
    pub center_k: usize,
    pub group_id: usize,
}

fn line_error(path: &Path, line: u64, msg: impl std::fmt::Display) -> CliError {
    CliError::input(format!("{}:{line}: {msg}", path.display()))
}

fn open_csv(path: &Path, header: &[&str]) -> CliResult<csv::Reader<fs::File>> {
    let file =
        fs::File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file);
    let found = r.headers().map_err(|e| line_error(path, 1, e))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(line_error(
            path,
            1,
            format!("expected header `{}`", header.join(",")),
        ));
    }
    Ok(r)
}

fn field<T: std::str::FromStr>(
    path: &Path,
    line: u64,
    rec: &csv::StringRecord,
    i: usize,
    name: &str,
) -> CliResult<T> {
    let raw = rec
        .get(i)
        .ok_or_else(|| line_error(path, line, format!("missing column `{name}`")))?;
    raw.trim()
        .parse()
        .map_err(|_| line_error(path, line, format!("column `{name}`: cannot parse `{raw}`")))
}

pub fn read_plan_csv(path: &Path) -> CliResult<Vec<PlanRow>> {
    let mut r = open_csv(path, &PLAN_HEADER)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(0, |p| p.line());
        let get = |i: usize| field::<usize>(path, line, &rec, i, PLAN_HEADER[i]);
        rows.push(PlanRow {
            n: get(0)?,
            k: get(1)?,
            center_n: get(2)?,
            center_k: get(3)?,
            group_id: get(4)?,
        });
    }
    Ok(rows)
}

pub const TRACE_HEADER: [&str; 6] = ["n", "k", "rx", "tx", "re", "im"];

/// One row per matrix entry, ordered by `(n, k, rx, tx)`.
pub fn trace_csv(trace: &ChannelTrace) -> String {
    let grid = trace.grid();
    let a = trace.antennas();
    let mut rows = Vec::with_capacity(grid.len() * a.n_r() * a.n_t());
    for idx in 0..grid.len() {
        let (n, k) = grid.point(idx);
        let h = trace.at(n, k).entries();
        for rx in 0..a.n_r() {
            for tx in 0..a.n_t() {
                let z = h[(rx, tx)];
                rows.push(vec![
                    n.to_string(),
                    k.to_string(),
                    rx.to_string(),
                    tx.to_string(),
                    fmt_f64(z.re),
                    fmt_f64(z.im),
                ]);
            }
        }
    }
    csv_string(&TRACE_HEADER, rows)
}

/// Reads a trace; the index set must be a complete box. Grid spacing is not
/// stored in the file, so the default spacing is attached.
pub fn read_trace(path: &Path) -> CliResult<ChannelTrace> {
    let mut r = open_csv(path, &TRACE_HEADER)?;
    let mut entries: Vec<([usize; 4], Complex64, u64)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut idx = [0usize; 4];
        for (i, slot) in idx.iter_mut().enumerate() {
            *slot = field(path, line, &rec, i, TRACE_HEADER[i])?;
        }
        let re: f64 = field(path, line, &rec, 4, "re")?;
        let im: f64 = field(path, line, &rec, 5, "im")?;
        if !re.is_finite() || !im.is_finite() {
            return Err(line_error(path, line, "non-finite channel entry"));
        }
        entries.push((idx, Complex64::new(re, im), line));
    }
    if entries.is_empty() {
        return Err(line_error(path, 1, "trace has no entries"));
    }
    let dim = |i: usize| entries.iter().map(|e| e.0[i]).max().unwrap() + 1;
    let (m, k_len, n_r, n_t) = (dim(0), dim(1), dim(2), dim(3));
    let grid = GridSpec::with_default_spacing(k_len, m)?;
    let antennas = AntennaConfig::new(n_t, n_r)?;
    let per = n_r * n_t;
    let mut data: Vec<Option<Complex64>> = vec![None; grid.len() * per];
    for ([n, k, rx, tx], z, line) in entries {
        let slot = &mut data[grid.index(n, k) * per + rx * n_t + tx];
        if slot.is_some() {
            return Err(line_error(
                path,
                line,
                format!("duplicate entry ({n}, {k}, {rx}, {tx})"),
            ));
        }
        *slot = Some(z);
    }
    let mut samples = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let chunk = &data[idx * per..(idx + 1) * per];
        let values: Option<Vec<Complex64>> = chunk.iter().copied().collect();
        let Some(values) = values else {
            let (n, k) = grid.point(idx);
            return Err(CliError::input(format!(
                "{}: trace is missing entries at block {n}, subcarrier {k}",
                path.display()
            )));
        };
        samples.push(ChannelMatrix::new(
            CMatrix::from_row_major(n_r, n_t, values),
            antennas,
        )?);
    }
    Ok(ChannelTrace::new(grid, antennas, samples)?)
}

pub const REPORT_HEADER: [&str; 7] = [
    "trials",
    "mean_capacity_center",
    "mean_capacity_bound",
    "empirical_sigma_m2",
    "std_err_center",
    "std_err_bound",
    "violations",
];

pub fn report_csv(r: &TrialReport) -> String {
    csv_string(
        &REPORT_HEADER,
        [vec![
            r.trials.to_string(),
            fmt_f64(r.mean_capacity_center),
            fmt_f64(r.mean_capacity_bound),
            fmt_f64(r.empirical_sigma_m2),
            fmt_f64(r.std_err_center),
            fmt_f64(r.std_err_bound),
            r.violations.to_string(),
        ]],
    )
}

pub fn rate_map_csv(report: &Algorithm1Report) -> String {
    csv_string(
        &["n", "k", "group_id", "gamma_e", "rate_bits"],
        report.rates.iter().map(|p| {
            vec![
                p.n.to_string(),
                p.k.to_string(),
                p.group_id.to_string(),
                fmt_f64(p.gamma_e),
                fmt_f64(p.rate_bits),
            ]
        }),
    )
}

pub fn correlation_csv(est: &EmpiricalCorrelation) -> String {
    let f = est.freq.iter().enumerate().map(|(j, r)| ("f", j, *r));
    let t = est.time.iter().enumerate().map(|(i, r)| ("t", i, *r));
    csv_string(
        &["axis", "lag", "correlation"],
        f.chain(t)
            .map(|(axis, lag, r)| vec![axis.to_string(), lag.to_string(), fmt_f64(r)]),
    )
}

/// Profile file: one segment per line,
/// `tau_start_us tau_end_us amplitude decay_per_us`; `#` starts a comment.
pub fn read_profile_file(path: &Path) -> CliResult<DelayProfile> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_profile(&text, &path.display().to_string())
}

pub fn parse_profile(text: &str, name: &str) -> CliResult<DelayProfile> {
    let mut segments = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        match nums {
            Ok(v) if v.len() == 4 => {
                segments.push(ProfileSegment::from_micros(v[0], v[1], v[2], v[3]))
            }
            _ => {
                return Err(CliError::input(format!(
                    "{name}:{}: expected `tau_start_us tau_end_us amplitude decay_per_us`",
                    i + 1
                )))
            }
        }
    }
    let profile =
        DelayProfile::new(name, segments).map_err(|e| CliError::input(format!("{name}: {e}")))?;
    Ok(normalize_profile(&profile)?)
}
