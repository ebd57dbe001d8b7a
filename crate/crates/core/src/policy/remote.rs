use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpStream, ToSocketAddrs};
#[cfg(unix)]
use std::os::unix::net::UnixStream;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use log::{debug, warn};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use super::wire::{Message, ScoreRequest, Train, WirePlane};
use super::{Policy, ScoreInput};
use crate::error::{Error, Result};
use crate::sample::HopSample;

/// Where a scoring service listens: `unix:/path/to/socket` or
/// `tcp:host:port` (a bare `host:port` means TCP).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Endpoint {
    pub address: String,
    #[serde(with = "millis")]
    pub timeout: Duration,
    pub batch_size: usize,
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

impl Endpoint {
    pub fn new(address: impl Into<String>) -> Self {
        Endpoint { address: address.into(), timeout: Duration::from_millis(2000), batch_size: 256 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.timeout.is_zero() || self.batch_size == 0 {
            return Err(Error::Parse("endpoint needs a positive timeout and batch size".into()));
        }
        Ok(())
    }
}

struct Connection {
    reader: BufReader<Box<dyn Read + Send>>,
    writer: Box<dyn Write + Send>,
}

impl Connection {
    fn open(ep: &Endpoint) -> std::io::Result<Connection> {
        let t = Some(ep.timeout);
        if let Some(path) = ep.address.strip_prefix("unix:") {
            #[cfg(unix)]
            {
                let s = UnixStream::connect(path)?;
                s.set_read_timeout(t)?;
                s.set_write_timeout(t)?;
                let r = s.try_clone()?;
                return Ok(Connection { reader: BufReader::new(Box::new(r)), writer: Box::new(s) });
            }
            #[cfg(not(unix))]
            return Err(std::io::Error::other(format!("unix sockets unsupported: {path}")));
        }
        let addr = ep.address.strip_prefix("tcp:").unwrap_or(&ep.address);
        let sock = addr
            .to_socket_addrs()?
            .next()
            .ok_or_else(|| std::io::Error::other(format!("cannot resolve {addr}")))?;
        let s = TcpStream::connect_timeout(&sock, ep.timeout)?;
        s.set_read_timeout(t)?;
        s.set_write_timeout(t)?;
        s.set_nodelay(true)?;
        let r = s.try_clone()?;
        Ok(Connection { reader: BufReader::new(Box::new(r)), writer: Box::new(s) })
    }

    fn send(&mut self, m: &Message) -> std::io::Result<()> {
        let mut line = m.encode();
        line.push('\n');
        self.writer.write_all(line.as_bytes())?;
        self.writer.flush()
    }

    fn recv(&mut self, deadline: Instant) -> std::io::Result<Message> {
        loop {
            if Instant::now() > deadline {
                return Err(std::io::ErrorKind::TimedOut.into());
            }
            let mut line = String::new();
            if self.reader.read_line(&mut line)? == 0 {
                return Err(std::io::ErrorKind::UnexpectedEof.into());
            }
            if line.trim().is_empty() {
                continue;
            }
            return Message::decode(&line).map_err(std::io::Error::other);
        }
    }
}

/// Client for a remote scoring service. Any fault (connect failure,
/// timeout, malformed or mismatched reply) yields `None`, i.e. uniform
/// scores, and suppresses reconnection attempts for `retry_after`.
pub struct RemotePolicy {
    endpoint: Endpoint,
    retry_after: Duration,
    conn: Mutex<Option<Connection>>,
    down_until: Mutex<Option<Instant>>,
    next_id: AtomicU64,
}

impl RemotePolicy {
    pub fn new(endpoint: Endpoint) -> Self {
        RemotePolicy {
            endpoint,
            retry_after: Duration::from_secs(5),
            conn: Mutex::new(None),
            down_until: Mutex::new(None),
            next_id: AtomicU64::new(1),
        }
    }

    pub fn with_retry_after(mut self, d: Duration) -> Self {
        self.retry_after = d;
        self
    }

    pub fn endpoint(&self) -> &Endpoint {
        &self.endpoint
    }

    fn available(&self) -> bool {
        match *self.down_until.lock() {
            Some(t) => Instant::now() >= t,
            None => true,
        }
    }

    fn mark_down(&self, why: &str) {
        warn!("scoring service {} unavailable ({why}); using uniform scores", self.endpoint.address);
        *self.down_until.lock() = Some(Instant::now() + self.retry_after);
    }

    /// Runs `f` on a live connection, opening one if needed. Requests are
    /// serialized on the connection, so replies arrive in order.
    fn with_conn<T>(&self, f: impl FnOnce(&mut Connection) -> std::io::Result<T>) -> Option<T> {
        if !self.available() {
            return None;
        }
        let mut guard = self.conn.lock();
        if guard.is_none() {
            match Connection::open(&self.endpoint) {
                Ok(c) => *guard = Some(c),
                Err(e) => {
                    drop(guard);
                    self.mark_down(&e.to_string());
                    return None;
                }
            }
        }
        let result = f(guard.as_mut().expect("connection was just opened"));
        match result {
            Ok(v) => Some(v),
            Err(e) => {
                *guard = None;
                drop(guard);
                self.mark_down(&e.to_string());
                None
            }
        }
    }
}

impl Policy for RemotePolicy {
    fn likelihoods(&self, input: &ScoreInput<'_>) -> Option<Vec<f64>> {
        let (top, bottom): (Vec<Vec<f64>>, Vec<Vec<f64>>) = match input.decks {
            Some((t, b)) => (
                t.iter().map(|i| input.vertices[i].clone()).collect(),
                b.iter().map(|i| input.vertices[i].clone()).collect(),
            ),
            None => (input.vertices.to_vec(), Vec::new()),
        };
        let d = input.vertices.first().map_or(0, Vec::len);
        let deadline = Instant::now() + self.endpoint.timeout;
        self.with_conn(|conn| {
            let mut out = Vec::with_capacity(input.planes.len());
            for chunk in input.planes.chunks(self.endpoint.batch_size) {
                let id = self.next_id.fetch_add(1, Ordering::Relaxed);
                let planes = chunk
                    .iter()
                    .map(|p| WirePlane { normal: p.normal.clone(), offset: p.offset, deck: input.deck })
                    .collect();
                let req = ScoreRequest { id, d, top_vertices: top.clone(), bottom_vertices: bottom.clone(), planes };
                conn.send(&Message::ScoreReq(req))?;
                match conn.recv(deadline)? {
                    Message::ScoreResp(r) if r.id == id && r.likelihoods.len() == chunk.len() => {
                        out.extend(r.likelihoods)
                    }
                    other => {
                        return Err(std::io::Error::other(format!("unexpected reply to request {id}: {other:?}")))
                    }
                }
            }
            debug!("scored {} planes remotely", out.len());
            Ok(out)
        })
    }

    fn train(&self, samples: &[HopSample]) -> bool {
        if samples.is_empty() {
            return true;
        }
        let deadline = Instant::now() + self.endpoint.timeout;
        self.with_conn(|conn| {
            conn.send(&Message::Train(Train { samples: samples.to_vec() }))?;
            match conn.recv(deadline)? {
                Message::Ack(a) if a.count == samples.len() => Ok(()),
                other => Err(std::io::Error::other(format!("unexpected reply to TRAIN: {other:?}"))),
            }
        })
        .is_some()
    }
}
