use super::run::StepRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Ser,
    PacketError,
    Cost,
}

impl Metric {
    pub fn of(self, r: &StepRecord) -> f64 {
        match self {
            Metric::Ser => r.ser,
            Metric::PacketError => f64::from(u8::from(r.packet_error)),
            Metric::Cost => r.cost,
        }
    }
}

fn by_replication(records: &[StepRecord]) -> Vec<Vec<&StepRecord>> {
    let reps = records.iter().map(|r| r.replication as usize + 1).max().unwrap_or(0);
    let mut out = vec![Vec::new(); reps];
    for r in records {
        out[r.replication as usize].push(r);
    }
    for rep in &mut out {
        rep.sort_by_key(|r| r.t);
    }
    out.retain(|r| !r.is_empty());
    out
}

/// Replication-averaged mean of `metric` over the last `window` steps.
pub fn terminal_mean(records: &[StepRecord], window: usize, metric: Metric) -> Option<f64> {
    let reps = by_replication(records);
    if reps.is_empty() || window == 0 {
        return None;
    }
    let per_rep: Vec<f64> = reps
        .iter()
        .map(|rep| {
            let tail = &rep[rep.len().saturating_sub(window)..];
            tail.iter().map(|r| metric.of(r)).sum::<f64>() / tail.len() as f64
        })
        .collect();
    Some(per_rep.iter().sum::<f64>() / per_rep.len() as f64)
}

/// Replication-averaged running mean of `metric` against step index.
pub fn running_mean(records: &[StepRecord], metric: Metric) -> Vec<f64> {
    let reps = by_replication(records);
    let len = reps.iter().map(Vec::len).min().unwrap_or(0);
    let mut curve = vec![0.0; len];
    for rep in &reps {
        let mut acc = 0.0;
        for (k, r) in rep.iter().take(len).enumerate() {
            acc += metric.of(r);
            curve[k] += acc / (k + 1) as f64 / reps.len() as f64;
        }
    }
    curve
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Scheme;

    fn rec(replication: u32, t: u32, ser: f64) -> StepRecord {
        StepRecord {
            replication,
            t,
            action: 0,
            scheme: Scheme::Bpsk,
            jnr_db: 10.0,
            rho: 1.0,
            ser,
            packet_error: ser > 0.0,
            cost: ser / 10.0,
        }
    }

    #[test]
    fn terminal_and_running_means() {
        let records = vec![rec(0, 1, 0.0), rec(0, 2, 0.2), rec(1, 1, 0.4), rec(1, 2, 0.6)];
        assert!((terminal_mean(&records, 1, Metric::Ser).unwrap() - 0.4).abs() < 1e-12);
        assert!((terminal_mean(&records, 2, Metric::PacketError).unwrap() - 0.75).abs() < 1e-12);
        let curve = running_mean(&records, Metric::Ser);
        assert!((curve[0] - 0.2).abs() < 1e-12);
        assert!((curve[1] - 0.3).abs() < 1e-12);
        assert_eq!(terminal_mean(&[], 5, Metric::Ser), None);
    }
}
