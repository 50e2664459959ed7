//! Synchronous message-passing runtime.
//!
//! Every node runs the same [`NodeProgram`]. In round `r` a node sees the
//! messages its neighbours sent in round `r - 1` (round 0 is `init`).
//! Messages have no size limit. A node that has nothing to read and did not
//! ask to be woken is not stepped, which is equivalent to stepping it with an
//! empty inbox and having it do nothing.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Message size in bytes of a compact binary encoding (four bytes per id or
/// colour), used for trace statistics.
pub trait Payload {
    fn size_bytes(&self) -> usize;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    All,
    To(Vertex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wake {
    /// Step again next round.
    Next,
    /// Step in the given round, or earlier if mail arrives.
    At(u64),
    /// Step only when mail arrives.
    Idle,
}

#[derive(Debug)]
pub struct Action<M, O> {
    pub send: Vec<(Target, M)>,
    pub output: Option<O>,
    pub wake: Wake,
}

impl<M, O> Action<M, O> {
    pub fn idle() -> Self {
        Action {
            send: Vec::new(),
            output: None,
            wake: Wake::Idle,
        }
    }
}

pub type Inbox<M> = [(Vertex, Rc<M>)];

pub trait NodeProgram {
    type State;
    type Msg: Payload;
    type Output: Clone;

    /// Nodes know their id and their neighbours' ids before round 1.
    fn init(&self, id: Vertex, neighbours: &[Vertex]) -> std::result::Result<(Self::State, Action<Self::Msg, Self::Output>), String>;

    /// `inbox` is sorted by sender.
    fn step(
        &self,
        state: &mut Self::State,
        round: u64,
        inbox: &Inbox<Self::Msg>,
    ) -> std::result::Result<Action<Self::Msg, Self::Output>, String>;
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundStats {
    pub messages: usize,
    pub max_bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimTrace {
    pub rounds: u64,
    pub max_msg_bytes: usize,
    /// Entry `i` describes the messages read in round `i + 1`.
    pub per_round: Vec<RoundStats>,
    #[serde(skip)]
    pub output_round: Vec<u64>,
}

impl SimTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

struct Net<'g, M, O> {
    g: &'g Graph,
    outputs: Vec<Option<O>>,
    output_round: Vec<u64>,
    missing: usize,
    wake_at: Vec<Option<u64>>,
    queue: BinaryHeap<Reverse<(u64, Vertex)>>,
    mail: Vec<Vec<(Vertex, Rc<M>)>>,
    has_mail: Vec<Vertex>,
    stats: RoundStats,
}

impl<M: Payload, O> Net<'_, M, O> {
    fn post(&mut self, v: Vertex, round: u64, action: Action<M, O>) -> Result<()> {
        if let Some(o) = action.output {
            if self.outputs[v as usize].is_none() {
                self.outputs[v as usize] = Some(o);
                self.output_round[v as usize] = round;
                self.missing -= 1;
            }
        }
        let mut to_all = 0;
        let mut to_one: HashMap<Vertex, usize> = HashMap::new();
        for (target, msg) in action.send {
            let size = msg.size_bytes();
            let msg = Rc::new(msg);
            match target {
                Target::All => {
                    to_all += size;
                    for &w in self.g.neighbours(v) {
                        self.deliver(w, v, msg.clone());
                    }
                }
                Target::To(w) => {
                    if !self.g.has_edge(v, w) {
                        return Err(Error::Program {
                            node: v,
                            round,
                            message: format!("sent a message to non-neighbour {w}"),
                        });
                    }
                    *to_one.entry(w).or_default() += size;
                    self.deliver(w, v, msg);
                }
            }
        }
        let receivers = if to_all > 0 { self.g.degree(v) } else { to_one.len() };
        self.stats.messages += receivers;
        if receivers > 0 {
            let largest = to_all + to_one.values().copied().max().unwrap_or(0);
            self.stats.max_bytes = self.stats.max_bytes.max(largest);
        }
        let wake = match action.wake {
            Wake::Next => Some(round + 1),
            Wake::At(r) => Some(r.max(round + 1)),
            Wake::Idle => None,
        };
        self.wake_at[v as usize] = wake;
        if let Some(r) = wake {
            self.queue.push(Reverse((r, v)));
        }
        Ok(())
    }

    fn deliver(&mut self, to: Vertex, from: Vertex, msg: Rc<M>) {
        let slot = &mut self.mail[to as usize];
        if slot.is_empty() {
            self.has_mail.push(to);
        }
        slot.push((from, msg));
    }

    /// The next round in which something happens.
    fn next_round(&mut self, round: u64) -> Option<u64> {
        if !self.has_mail.is_empty() {
            return Some(round + 1);
        }
        while let Some(&Reverse((r, v))) = self.queue.peek() {
            if self.wake_at[v as usize] == Some(r) {
                return Some(r);
            }
            self.queue.pop();
        }
        None
    }

    fn due(&mut self, round: u64) -> Vec<Vertex> {
        let mut active = std::mem::take(&mut self.has_mail);
        while let Some(&Reverse((r, v))) = self.queue.peek() {
            if r > round {
                break;
            }
            self.queue.pop();
            if self.wake_at[v as usize] == Some(r) {
                active.push(v);
            }
        }
        active.sort_unstable();
        active.dedup();
        active
    }
}

pub fn run<P: NodeProgram>(g: &Graph, program: &P, max_rounds: u64) -> Result<(Vec<P::Output>, SimTrace)> {
    if max_rounds == 0 {
        return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
    }
    let n = g.n();
    let mut net: Net<P::Msg, P::Output> = Net {
        g,
        outputs: (0..n).map(|_| None).collect(),
        output_round: vec![0; n],
        missing: n,
        wake_at: vec![None; n],
        queue: BinaryHeap::new(),
        mail: (0..n).map(|_| Vec::new()).collect(),
        has_mail: Vec::new(),
        stats: RoundStats::default(),
    };
    let mut states = Vec::with_capacity(n);
    for v in g.vertices() {
        let (state, action) = program.init(v, g.neighbours(v)).map_err(|message| Error::Program {
            node: v,
            round: 0,
            message,
        })?;
        states.push(state);
        net.post(v, 0, action)?;
    }

    // per_round[i] counts the messages read in round i + 1
    let mut per_round = Vec::new();
    let mut round = 0;
    while net.missing > 0 {
        let Some(next) = net.next_round(round) else {
            return Err(Error::Deadlock {
                round,
                waiting: net.missing,
            });
        };
        if next > max_rounds {
            return Err(Error::RoundLimit { max_rounds });
        }
        per_round.push(std::mem::take(&mut net.stats));
        per_round.resize(next as usize, RoundStats::default());
        round = next;
        let due = net.due(round);
        let mut actions = Vec::with_capacity(due.len());
        for v in due {
            let inbox = std::mem::take(&mut net.mail[v as usize]);
            net.wake_at[v as usize] = None;
            let action = program
                .step(&mut states[v as usize], round, &inbox)
                .map_err(|message| Error::Program { node: v, round, message })?;
            actions.push((v, action));
        }
        // sends become visible only after every node of this round has stepped
        for (v, action) in actions {
            net.post(v, round, action)?;
        }
    }
    let rounds = net.output_round.iter().copied().max().unwrap_or(0);
    per_round.truncate(rounds as usize);
    let max_msg_bytes = per_round.iter().map(|s| s.max_bytes).max().unwrap_or(0);
    let outputs = net.outputs.into_iter().map(|o| o.expect("every node has output")).collect();
    Ok((
        outputs,
        SimTrace {
            rounds,
            max_msg_bytes,
            per_round,
            output_round: net.output_round,
        },
    ))
}

/// The subgraph a node has learned: sorted vertex ids and edges `(u, v)`
/// with `u < v`, in original ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalView {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl LocalView {
    fn from_records(known: &BTreeMap<Vertex, Vec<Vertex>>) -> LocalView {
        let mut edges = Vec::new();
        for (&u, nb) in known {
            for &w in nb {
                if u < w && known.contains_key(&w) {
                    edges.push((u, w));
                }
            }
        }
        edges.sort_unstable();
        LocalView {
            vertices: known.keys().copied().collect(),
            edges,
        }
    }
}

/// Every node floods `(id, neighbour ids)` records for `r` rounds and then
/// outputs the subgraph induced on its radius-`r` ball.
pub fn gather_ball_program(r: u64) -> GatherBall {
    GatherBall { r }
}

pub struct GatherBall {
    r: u64,
}

pub struct GatherState {
    known: BTreeMap<Vertex, Vec<Vertex>>,
}

pub struct Records(Vec<(Vertex, Vec<Vertex>)>);

impl Payload for Records {
    fn size_bytes(&self) -> usize {
        self.0.iter().map(|(_, nb)| 8 + 4 * nb.len()).sum()
    }
}

impl NodeProgram for GatherBall {
    type State = GatherState;
    type Msg = Records;
    type Output = LocalView;

    fn init(&self, id: Vertex, neighbours: &[Vertex]) -> std::result::Result<(GatherState, Action<Records, LocalView>), String> {
        let mut known = BTreeMap::new();
        known.insert(id, neighbours.to_vec());
        let mut action = Action::idle();
        if self.r == 0 {
            action.output = Some(LocalView::from_records(&known));
        } else {
            action.send.push((Target::All, Records(vec![(id, neighbours.to_vec())])));
            action.wake = Wake::At(self.r);
        }
        Ok((GatherState { known }, action))
    }

    fn step(
        &self,
        state: &mut GatherState,
        round: u64,
        inbox: &Inbox<Records>,
    ) -> std::result::Result<Action<Records, LocalView>, String> {
        let mut fresh = Vec::new();
        for (_, msg) in inbox {
            for (v, nb) in &msg.0 {
                if !state.known.contains_key(v) {
                    state.known.insert(*v, nb.clone());
                    fresh.push((*v, nb.clone()));
                }
            }
        }
        let mut action = Action::idle();
        if round >= self.r {
            action.output = Some(LocalView::from_records(&state.known));
        } else {
            if !fresh.is_empty() {
                action.send.push((Target::All, Records(fresh)));
            }
            action.wake = Wake::At(self.r);
        }
        Ok(action)
    }
}
