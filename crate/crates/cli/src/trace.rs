use std::fmt::Write as _;

use anyhow::{bail, Result};
use serde::Serialize;

use scc_core::delivery::{analyze_demands, transmissions, Scheme, TransmissionRecord};
use scc_core::leakage_oracle::{leak_report, LeakReport};
use scc_core::rate_analysis::delta_t;

use crate::config::{instance, Config};

#[derive(Serialize)]
pub struct SchemeTrace {
    pub scheme: Scheme,
    pub demand: Vec<usize>,
    pub leaders: String,
    pub delta_t: u64,
    pub keyed: usize,
    pub keyless: usize,
    pub saved: Vec<String>,
    pub lines: Vec<String>,
    pub transmissions: Vec<TransmissionRecord>,
    pub users: Vec<LeakReport>,
}

pub fn run(cfg: &Config) -> Result<Vec<SchemeTrace>> {
    let params = cfg.params()?;
    let Some(d) = cfg.demand(&params)? else {
        bail!("trace needs a fixed \"demand\" vector");
    };
    let (_, placement) = instance(&params, cfg.seed)?;
    let analysis = analyze_demands(&d);
    let mut out = Vec::new();
    for &scheme in &cfg.schemes {
        let tx = transmissions(scheme, &d, &placement)?;
        let users = (1..=params.n_users())
            .map(|k| leak_report(k, &tx, &placement, &analysis))
            .collect();
        out.push(SchemeTrace {
            scheme,
            demand: d.as_slice().to_vec(),
            leaders: analysis.leaders().to_string(),
            delta_t: delta_t(&analysis, params.t(), params.n_users()),
            keyed: tx.keyed_count(),
            keyless: tx.keyless_count(),
            saved: tx.saved().iter().map(|s| s.to_string()).collect(),
            lines: tx.transmissions().iter().map(|y| y.expression()).collect(),
            transmissions: tx.records(),
            users,
        });
    }
    Ok(out)
}

/// Plain-text rendering, one block per scheme.
pub fn render(traces: &[SchemeTrace], cfg: &Config) -> String {
    let mut s = String::new();
    for (i, tr) in traces.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let d: Vec<String> = tr.demand.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            s,
            "scheme {}  N={} K={} t={}  d=({})",
            tr.scheme,
            cfg.n.unwrap_or_default(),
            cfg.k.unwrap_or_default(),
            cfg.t.unwrap_or_default(),
            d.join(",")
        );
        let _ = writeln!(s, "leaders: {}", tr.leaders);
        let _ = writeln!(
            s,
            "transmissions: {} (keyed {}, keyless {}, saved {})",
            tr.keyed + tr.keyless,
            tr.keyed,
            tr.keyless,
            tr.saved.len()
        );
        if tr.scheme == Scheme::Common {
            let _ = writeln!(s, "delta_t: {}", tr.delta_t);
        }
        for line in &tr.lines {
            let _ = writeln!(s, "{line}");
        }
        if !tr.saved.is_empty() {
            let _ = writeln!(s, "saved: {}", tr.saved.join(" "));
        }
        for u in &tr.users {
            let leaked: Vec<String> = u.leaked_shares.iter().map(|l| l.to_string()).collect();
            let _ = writeln!(
                s,
                "user {}: {}, leaked shares: {}",
                u.user,
                if u.secure { "secure" } else { "insecure" },
                if leaked.is_empty() { "none".to_string() } else { leaked.join(" ") }
            );
        }
    }
    s
}
