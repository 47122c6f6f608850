use std::io::Write;
use std::path::Path;

use crate::bcb::BcbCurve;
use crate::equilibria::FixedPointRecord;
use crate::error::{Error, Result};
use crate::model::State;
use crate::sweep::{Path1D, Slice1D};

/// A rectangular table of text cells with a header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Shortest decimal that reads back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Ragged { row: self.rows.len() + 1, got: row.len(), want: self.header.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Comma separated, LF line endings, header first.
    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(csv_err)?;
        for (i, r) in self.rows.iter().enumerate() {
            if r.len() != self.header.len() {
                return Err(Error::Ragged { row: i + 1, got: r.len(), want: self.header.len() });
            }
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut v = Vec::new();
        self.write_to(&mut v)?;
        Ok(v)
    }
}

/// Write `table` to `path`.
pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    let bytes = table.to_bytes()?;
    std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn fixed_points_table(recs: &[FixedPointRecord]) -> Result<Table> {
    let mut t = Table::new(["family", "x1", "x2", "real", "region", "stability", "eig1", "eig2"]);
    for r in recs {
        let (class, e1, e2) = match &r.stability {
            Some(s) => (
                s.class.name().to_string(),
                s.eigen.first().map(|v| fmt_f64(*v)).unwrap_or_default(),
                s.eigen.get(1).map(|v| fmt_f64(*v)).unwrap_or_default(),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        t.push(vec![
            r.family.name().into(),
            fmt_f64(r.location.x1),
            fmt_f64(r.location.x2),
            if r.real { "real" } else { "virtual" }.into(),
            r.region.index().to_string(),
            class,
            e1,
            e2,
        ])?;
    }
    Ok(t)
}

pub fn curves_table(curves: &[BcbCurve]) -> Result<Table> {
    let mut t = Table::new(["curve", "k1", "k2"]);
    for c in curves {
        for &(a, b) in &c.points {
            t.push(vec![c.id.name().into(), fmt_f64(a), fmt_f64(b)])?;
        }
    }
    Ok(t)
}

pub fn orbit_table(orbit: &[State]) -> Result<Table> {
    let mut t = Table::new(["t", "x1", "x2"]);
    for (i, s) in orbit.iter().enumerate() {
        t.push(vec![i.to_string(), fmt_f64(s.x1), fmt_f64(s.x2)])?;
    }
    Ok(t)
}

/// One row per witness point: parameter, label, plotted coordinate.
pub fn sweep1d_table(path: &Path1D, slices: &[Slice1D]) -> Result<Table> {
    let mut t = Table::new(["param", "label", "corner_period", "value"]);
    for s in slices {
        let cp = s.corner_period.map(|n| n.to_string()).unwrap_or_default();
        for w in &s.witnesses {
            t.push(vec![fmt_f64(s.param), s.label.to_string(), cp.clone(), fmt_f64(path.observed(*w))])?;
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcb::{bcb_equilibrium_curves, BcbId};
    use crate::model::ModelParams;

    #[test]
    fn header_only_when_empty() {
        let t = curves_table(&[BcbCurve { id: BcbId::Be1, points: vec![], closed_form: true }]).unwrap();
        assert_eq!(t.to_bytes().unwrap(), b"curve,k1,k2\n");
    }

    #[test]
    fn bce1_row() {
        let p = ModelParams::canonical(1.0, 1.0);
        let [e1, _] = bcb_equilibrium_curves(&p, (0.4, 0.5), 2).unwrap();
        let s = String::from_utf8(curves_table(&[e1]).unwrap().to_bytes().unwrap()).unwrap();
        let row = s.lines().nth(1).unwrap();
        assert!(row.starts_with("BCe1,0.4,1.17333333333333"), "{row}");
        let v: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(v, 0.4 * 4.0 * (1.0 - 0.4 / 1.5));
    }

    #[test]
    fn ragged_rejected() {
        let mut t = Table::new(["a", "b"]);
        assert_eq!(t.push(vec!["1".into()]), Err(Error::Ragged { row: 1, got: 1, want: 2 }));
    }

    #[test]
    fn shortest_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1.1372983346207417, 1e-7] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.4), "0.4");
    }
}
