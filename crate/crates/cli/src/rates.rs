use anyhow::Result;
use num_rational::Ratio;

use scc_core::rate_analysis::{average_rate, rate_for_demand, rate_keys, RateReport};

use crate::config::Config;

/// One row per (instance, scheme). With a fixed `demand` the row holds `R_d`
/// for that vector instead of an average.
pub fn run(cfg: &Config) -> Result<Vec<RateReport>> {
    let mut rows = Vec::new();
    for params in cfg.instances()? {
        let fixed = if cfg.grid.is_none() { cfg.demand(&params)? } else { None };
        for &scheme in &cfg.schemes {
            let row = match &fixed {
                Some(d) => {
                    let r = rate_for_demand(scheme, d, &params);
                    let exact = Ratio::new(*r.rate.numer() as u128, *r.rate.denom() as u128);
                    let value = as_f64(r.rate);
                    RateReport {
                        scheme,
                        n_files: params.n_files(),
                        n_users: params.n_users(),
                        t: params.t(),
                        cache_size: params.cache_size(),
                        r_avg: value,
                        mode: "demand",
                        samples: None,
                        seed: None,
                        transmissions: r.transmissions() as f64,
                        ratio_to_keys: value / as_f64(rate_keys(&params)),
                        r_avg_exact: Some(exact),
                        std_error: None,
                    }
                }
                None => average_rate(scheme, &params, cfg.average_mode(&params))?,
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

fn as_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
