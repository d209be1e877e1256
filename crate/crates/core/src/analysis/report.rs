use std::io::Write;

use super::bounds::BoundInputs;
use super::oracle::{dense_kernel_capped, exact_expected_hitting, exact_tv_curve};
use crate::error::Result;
use crate::walkers::WalkKernel;

/// One line of a bound report. Oracle values are absent when the graph is
/// over the oracle cap.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRecord {
    pub quantity: String,
    pub instance_id: String,
    pub value: Option<f64>,
    pub bound: Option<f64>,
    pub satisfied: Option<bool>,
}

impl BoundRecord {
    fn scalar(quantity: &str, instance_id: &str, value: f64) -> Self {
        Self {
            quantity: quantity.into(),
            instance_id: instance_id.into(),
            value: Some(value),
            bound: None,
            satisfied: None,
        }
    }

    fn check(quantity: String, instance_id: &str, value: Option<f64>, bound: f64) -> Self {
        Self {
            quantity,
            instance_id: instance_id.into(),
            value,
            bound: Some(bound),
            satisfied: value.map(|v| v <= bound),
        }
    }
}

/// θ, M, `t*_hit`, TV bounds at `tv_times`, and (under the oracle cap) the
/// exact TV distances and expected hitting times they bound.
pub fn bound_report(
    kernel: &WalkKernel<'_>,
    diameter: usize,
    instance_id: &str,
    tv_times: &[u64],
    oracle_cap: usize,
) -> Result<Vec<BoundRecord>> {
    let inp = BoundInputs::from_kernel(kernel, diameter)?;
    let t_star = inp.hitting_bound()?;
    let mut out = vec![
        BoundRecord::scalar("theta", instance_id, inp.theta()),
        BoundRecord::scalar("dominance_m", instance_id, inp.m),
        BoundRecord::scalar("t_star_hit", instance_id, t_star),
    ];

    let dense = (kernel.graph().n() <= oracle_cap).then(|| dense_kernel_capped(kernel, oracle_cap)).transpose()?;
    let t_max = tv_times.iter().copied().max().unwrap_or(0) as usize;
    let curve = dense.as_ref().map(|p| exact_tv_curve(p, &kernel.stationary(), t_max));
    for &t in tv_times {
        let exact = curve.as_ref().map(|c| c[t as usize]);
        out.push(BoundRecord::check(format!("tv_t{t}"), instance_id, exact, inp.tv_bound(t)));
    }

    let hitting = dense.as_ref().map(|p| exact_expected_hitting(p, &kernel.function().argmax_set())).transpose()?;
    out.push(BoundRecord::check("hit_uniform".into(), instance_id, hitting.as_ref().map(|h| h.uniform_mean), t_star));
    out.push(BoundRecord::check("hit_max".into(), instance_id, hitting.as_ref().map(|h| h.max_over_starts), t_star));
    Ok(out)
}

/// Write records as `quantity,instance_id,value,bound,satisfied` CSV.
pub fn write_bound_report<W: Write>(records: &[BoundRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["quantity", "instance_id", "value", "bound", "satisfied"])?;
    let num = |x: Option<f64>| x.map(|v| format!("{v:.16e}")).unwrap_or_default();
    for r in records {
        w.write_record([
            r.quantity.clone(),
            r.instance_id.clone(),
            num(r.value),
            num(r.bound),
            r.satisfied.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
