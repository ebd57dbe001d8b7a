use std::collections::VecDeque;
use std::io::{Read, Write};

use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::sample::HopSample;

/// First line of a silo file. Records follow as a little-endian `u32` byte
/// length and that many bytes of JSON.
pub const SILO_HEADER: &str = "HOPSILO v1";

/// Largest accepted record; guards readers against corrupt lengths.
const MAX_RECORD: usize = 64 << 20;

struct State {
    records: VecDeque<HopSample>,
    appended: u64,
    dropped: u64,
}

/// Bounded FIFO of hop samples; the oldest records are dropped on overflow.
pub struct Silo {
    capacity: usize,
    state: Mutex<State>,
}

impl Silo {
    pub fn new(capacity: usize) -> Self {
        Silo {
            capacity: capacity.max(1),
            state: Mutex::new(State { records: VecDeque::new(), appended: 0, dropped: 0 }),
        }
    }

    /// Appends all records as one atomic step.
    pub fn append(&self, records: Vec<HopSample>) -> usize {
        let n = records.len();
        let mut s = self.state.lock();
        s.appended += n as u64;
        s.records.extend(records);
        while s.records.len() > self.capacity {
            s.records.pop_front();
            s.dropped += 1;
        }
        n
    }

    pub fn len(&self) -> usize {
        self.state.lock().records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total records ever appended, including dropped ones.
    pub fn appended(&self) -> u64 {
        self.state.lock().appended
    }

    pub fn dropped(&self) -> u64 {
        self.state.lock().dropped
    }

    /// Current contents in insertion order.
    pub fn records(&self) -> Vec<HopSample> {
        self.state.lock().records.iter().cloned().collect()
    }

    /// Records with sequence number `>= from` (0 is the first ever
    /// appended) that are still held, and the next sequence number.
    pub fn read_from(&self, from: u64) -> (Vec<HopSample>, u64) {
        let s = self.state.lock();
        let skip = from.saturating_sub(s.dropped) as usize;
        (s.records.iter().skip(skip).cloned().collect(), s.appended)
    }
}

pub fn write_silo<W: Write>(mut w: W, records: &[HopSample]) -> Result<()> {
    let io = |e: std::io::Error| Error::Parse(format!("silo write: {e}"));
    writeln!(w, "{SILO_HEADER}").map_err(io)?;
    for r in records {
        let bytes = serde_json::to_vec(r).expect("samples always serialize");
        w.write_all(&(bytes.len() as u32).to_le_bytes()).map_err(io)?;
        w.write_all(&bytes).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Parses a whole silo file.
pub fn read_silo(bytes: &[u8]) -> Result<Vec<HopSample>> {
    let header = format!("{SILO_HEADER}\n");
    let mut rest = bytes
        .strip_prefix(header.as_bytes())
        .ok_or_else(|| Error::Parse(format!("silo must start with `{SILO_HEADER}`")))?;
    let mut out = Vec::new();
    while !rest.is_empty() {
        let mut len = [0u8; 4];
        rest.read_exact(&mut len).map_err(|_| Error::Parse("truncated silo record length".into()))?;
        let len = u32::from_le_bytes(len) as usize;
        if len > MAX_RECORD || len > rest.len() {
            return Err(Error::Parse(format!("silo record of {len} bytes exceeds the remaining input")));
        }
        let (record, tail) = rest.split_at(len);
        out.push(serde_json::from_slice(record).map_err(|e| Error::Parse(format!("silo record {}: {e}", out.len())))?);
        rest = tail;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;
    use std::thread;

    use super::*;
    use crate::hyperplane::hyperplane_through;
    use crate::sample::HopLabel;
    use crate::shapes;

    fn sample(tag: i64) -> HopSample {
        let p = shapes::simplex(2).map_rows(|r| r.iter().map(|x| x * crate::num::Rational::from_integer(tag.into())).collect());
        let plane = hyperplane_through(&[p.row(0), p.row(1)]).unwrap();
        HopSample { polytope: p, top: vec![], bottom: vec![], plane, deck: None, label: HopLabel::Success, defect: Some(tag as u64) }
    }

    #[test]
    fn round_trip() {
        let silo = Silo::new(10);
        silo.append(vec![sample(1), sample(2), sample(3)]);
        assert_eq!(silo.records(), vec![sample(1), sample(2), sample(3)]);
        let mut buf = Vec::new();
        write_silo(&mut buf, &silo.records()).unwrap();
        assert_eq!(read_silo(&buf).unwrap(), silo.records());
    }

    #[test]
    fn overflow_drops_oldest() {
        let silo = Silo::new(10);
        silo.append((1..=15).map(sample).collect());
        assert_eq!(silo.len(), 10);
        assert_eq!(silo.dropped(), 5);
        assert_eq!(silo.records()[0], sample(6));
        let (tail, next) = silo.read_from(13);
        assert_eq!(tail, vec![sample(14), sample(15)]);
        assert_eq!(next, 15);
    }

    #[test]
    fn rejects_corrupt_files() {
        assert!(read_silo(b"nope").is_err());
        let mut buf = Vec::new();
        write_silo(&mut buf, &[sample(1)]).unwrap();
        assert!(read_silo(&buf[..buf.len() - 1]).is_err());
        let mut huge = format!("{SILO_HEADER}\n").into_bytes();
        huge.extend_from_slice(&u32::MAX.to_le_bytes());
        assert!(read_silo(&huge).is_err());
    }

    #[test]
    fn concurrent_appends_lose_nothing() {
        let silo = Arc::new(Silo::new(100_000));
        let handles: Vec<_> = (0..8)
            .map(|w| {
                let silo = Arc::clone(&silo);
                thread::spawn(move || {
                    for i in 0..50 {
                        silo.append(vec![sample(w * 1000 + i + 1), sample(w * 1000 + i + 1)]);
                    }
                })
            })
            .collect();
        handles.into_iter().for_each(|h| h.join().unwrap());
        let recs = silo.records();
        assert_eq!(recs.len(), 800);
        let checksum: u64 = recs.iter().map(|r| r.defect.unwrap()).sum();
        let expected: u64 = (0..8).flat_map(|w| (0..50).map(move |i| 2 * (w * 1000 + i + 1))).sum();
        assert_eq!(checksum, expected);
        // each append is atomic: paired records stay adjacent
        for pair in recs.chunks(2) {
            assert_eq!(pair[0], pair[1]);
        }
    }
}
