use std::collections::BTreeMap;

use super::RawBusRecord;
use crate::{Error, Result};

/// Voltages below this are treated as the 0 p.u. outliers and dropped.
pub const ZERO_VOLTAGE_THRESHOLD: f64 = 1e-6;

/// Drops zero-voltage records and merges phases of the same bus.
///
/// Output holds one record per `bus_id`, sorted by id; the position in the
/// returned vector is the bus's dense index. The merged voltage is the mean
/// over the surviving phases and the coordinates come from the first one.
pub fn preprocess(records: &[RawBusRecord]) -> Result<Vec<RawBusRecord>> {
    let mut groups: BTreeMap<&str, (f64, f64, f64, usize)> = BTreeMap::new();
    for r in records {
        if r.voltage < ZERO_VOLTAGE_THRESHOLD {
            continue;
        }
        groups
            .entry(r.bus_id.as_str())
            .and_modify(|g| {
                g.2 += r.voltage;
                g.3 += 1;
            })
            .or_insert((r.lon, r.lat, r.voltage, 1));
    }
    if groups.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(groups
        .into_iter()
        .map(|(id, (lon, lat, sum, count))| RawBusRecord {
            bus_id: id.to_owned(),
            lon,
            lat,
            voltage: if count == 1 { sum } else { sum / count as f64 },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(id: &str, v: f64) -> RawBusRecord {
        RawBusRecord::new(id, -122.2, 37.75, v)
    }

    #[test]
    fn phases_are_averaged() {
        let out = preprocess(&[rec("b1", 1.02), rec("b1", 1.04)]).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out[0].voltage - 1.03).abs() < 1e-15);
    }

    #[test]
    fn zero_voltage_is_filtered() {
        let out = preprocess(&[rec("b1", 1.02), rec("b2", 0.0)]).unwrap();
        assert_eq!(out, vec![rec("b1", 1.02)]);
    }

    #[test]
    fn grouping_by_hand() {
        let out = preprocess(&[rec("b1", 1.073), rec("b1", 1.021), rec("b2", 1.0)]).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].bus_id, "b1");
        assert!((out[0].voltage - 1.047).abs() < 1e-12);
        assert_eq!(out[1].voltage, 1.0);
    }

    #[test]
    fn zero_phase_does_not_drag_mean() {
        let out = preprocess(&[rec("b1", 1.02), rec("b1", 0.0)]).unwrap();
        assert_eq!(out[0].voltage, 1.02);
    }

    #[test]
    fn first_record_position_wins() {
        let a = RawBusRecord::new("x", 1.0, 2.0, 1.0);
        let b = RawBusRecord::new("x", 3.0, 4.0, 1.0);
        let out = preprocess(&[a, b]).unwrap();
        assert_eq!((out[0].lon, out[0].lat), (1.0, 2.0));
    }

    #[test]
    fn all_filtered_is_an_error() {
        assert!(matches!(preprocess(&[rec("b1", 0.0)]), Err(Error::EmptyDataset)));
        assert!(matches!(preprocess(&[]), Err(Error::EmptyDataset)));
    }

    fn records() -> impl Strategy<Value = Vec<RawBusRecord>> {
        prop::collection::vec(
            (0u8..12, prop_oneof![Just(0.0), 0.9f64..1.1]),
            1..40,
        )
        .prop_map(|v| {
            v.into_iter()
                .map(|(id, volt)| RawBusRecord::new(format!("b{id}"), f64::from(id), 0.0, volt))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn idempotent(recs in records()) {
            if let Ok(once) = preprocess(&recs) {
                let twice = preprocess(&once).unwrap();
                prop_assert_eq!(once, twice);
            }
        }

        #[test]
        fn count_matches_distinct_live_ids(recs in records()) {
            let live: std::collections::BTreeSet<_> = recs
                .iter()
                .filter(|r| r.voltage >= ZERO_VOLTAGE_THRESHOLD)
                .map(|r| r.bus_id.clone())
                .collect();
            match preprocess(&recs) {
                Ok(out) => prop_assert_eq!(out.len(), live.len()),
                Err(_) => prop_assert!(live.is_empty()),
            }
        }
    }
}
