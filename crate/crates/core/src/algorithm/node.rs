//! The per-node program.
//!
//! Level `l` occupies rounds `l * block .. (l + 1) * block`. Offsets within
//! a level:
//!
//! * `0`: read which neighbours left at the end of the previous level and
//!   send the own record (id, remaining neighbours, list).
//! * `1..=gather`: records spread. Everything is forwarded while a node
//!   knows at most `k_base` records; records of low-degree vertices also
//!   travel `size_cap - 1` hops through low-degree vertices. A node that sees
//!   a closed component of at most `k_base` vertices colours it. At offset
//!   `gather` low-degree nodes search for their pocket.
//! * Seeds announce their pocket inside it for `size_cap - 1` rounds.
//! * Each exchange: pocket members tell their neighbours the latest states
//!   of their pockets, and what a member learns about a pocket's contacts
//!   spreads through the pocket for the remaining `size_cap - 1` rounds.
//! * At the end surviving pockets tell their neighbours they left.
//!
//! A removed vertex waits for the colours of the neighbours it depends on,
//! shares its pruned list inside its pocket, and once all members have done
//! so every member solves the same small instance.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use super::{
    advance, initial_state, inner_edges, level_records, solve_on, AlgoParams, ContactView, LevelRecord, Op,
    PocketState, Removal, Schedule,
};
use crate::colouring::{verify_colouring, Colour, Colouring, ListAssignment};
use crate::deletability::{find_deletable_pocket_in, Neighbourhoods};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::sim::{run, Action, Inbox, NodeProgram, Payload, SimTrace, Target, Wake};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeOutput {
    /// `None` when the level limit stopped the node or a vertex it waits for.
    pub colour: Option<Colour>,
    pub level: usize,
    /// `None` for vertices still present when the level limit was reached.
    pub removal: Option<Removal>,
}

pub struct Rec {
    id: Vertex,
    nbrs: Vec<Vertex>,
    list: Rc<Vec<Colour>>,
}

pub struct PocketInfo {
    seed: Vertex,
    members: Rc<Vec<Vertex>>,
    edges: Rc<Vec<(Vertex, Vertex)>>,
}

type Versioned = Option<(usize, PocketState)>;

#[derive(Clone, Copy)]
pub struct Item {
    pocket: Vertex,
    overlap: bool,
    state: Versioned,
}

pub enum Msg {
    Left { class: u64 },
    Gather(Vec<Rc<Rec>>),
    Announce(Vec<Rc<PocketInfo>>),
    Exchange {
        publish: Vec<(Vertex, Versioned)>,
        spread: Vec<(Vertex, Vec<Item>)>,
    },
    /// `None`: the sender will never be coloured.
    Colour(Option<Colour>),
    Ready {
        pocket: Vertex,
        lists: Vec<(Vertex, Rc<Vec<Colour>>)>,
    },
}

impl Payload for Msg {
    fn size_bytes(&self) -> usize {
        const STATE: usize = 10;
        match self {
            Msg::Left { .. } => 8,
            Msg::Gather(recs) => recs.iter().map(|r| 8 + 4 * (r.nbrs.len() + r.list.len())).sum(),
            Msg::Announce(ps) => ps.iter().map(|p| 8 + 4 * p.members.len() + 8 * p.edges.len()).sum(),
            Msg::Exchange { publish, spread } => {
                publish.len() * (4 + STATE) + spread.iter().map(|(_, items)| 8 + items.len() * (5 + STATE)).sum::<usize>()
            }
            Msg::Colour(_) => 4,
            Msg::Ready { lists, .. } => 8 + lists.iter().map(|(_, l)| 8 + 4 * l.len()).sum::<usize>(),
        }
    }
}

struct Known<'a>(&'a HashMap<Vertex, Rc<Rec>>);

impl Neighbourhoods for Known<'_> {
    fn neighbours_of(&self, v: Vertex) -> Option<&[Vertex]> {
        self.0.get(&v).map(|r| r.nbrs.as_slice())
    }
}

struct Contact {
    overlap: bool,
    state: Versioned,
}

struct Pocket {
    id: Vertex,
    members: Rc<Vec<Vertex>>,
    edges: Rc<Vec<(Vertex, Vertex)>>,
    contacts: BTreeMap<Vertex, Contact>,
    state: Option<PocketState>,
    /// Contact information not yet passed on to the other members.
    pending: BTreeMap<Vertex, Item>,
}

impl Pocket {
    fn learn(&mut self, pocket: Vertex, overlap: bool, state: Versioned) {
        if pocket == self.id {
            return;
        }
        let mut changed = false;
        let entry = self.contacts.entry(pocket).or_insert_with(|| {
            changed = true;
            Contact { overlap: false, state: None }
        });
        if overlap && !entry.overlap {
            entry.overlap = true;
            changed = true;
        }
        if let Some((version, _)) = state {
            if entry.state.map_or(true, |(old, _)| old < version) {
                entry.state = state;
                changed = true;
            }
        }
        if changed {
            self.pending.insert(
                pocket,
                Item {
                    pocket,
                    overlap: entry.overlap,
                    state: entry.state,
                },
            );
        }
    }

    fn views(&self) -> Vec<ContactView> {
        self.contacts
            .values()
            .map(|c| ContactView {
                overlap: c.overlap,
                state: c.state.expect("every contact published").1,
            })
            .collect()
    }
}

struct LevelWork {
    known: HashMap<Vertex, Rc<Rec>>,
    /// Announced pockets containing this node, with the seeds that found them.
    announced: BTreeMap<Rc<Vec<Vertex>>, (Rc<Vec<(Vertex, Vertex)>>, BTreeSet<Vertex>)>,
    pockets: Vec<Pocket>,
}

struct Extension {
    level: usize,
    class: u64,
    pocket: Vertex,
    members: Rc<Vec<Vertex>>,
    edges: Rc<Vec<(Vertex, Vertex)>>,
    deps: Option<Vec<Vertex>>,
    colours: HashMap<Vertex, Colour>,
    ready: BTreeMap<Vertex, Rc<Vec<Colour>>>,
    sent: bool,
    /// Neighbours that will never be coloured.
    stuck: BTreeSet<Vertex>,
}

enum Phase {
    Alive(Box<LevelWork>),
    Removed(Box<Extension>),
    Done,
}

pub struct NodeState {
    id: Vertex,
    list: Rc<Vec<Colour>>,
    nbrs: Vec<Vertex>,
    phase: Phase,
}

type Act = Action<Msg, NodeOutput>;

pub struct ColourProgram {
    params: AlgoParams,
    schedule: Schedule,
    lists: Vec<Rc<Vec<Colour>>>,
}

impl ColourProgram {
    pub fn new(params: AlgoParams, n: usize, lists: &ListAssignment) -> ColourProgram {
        ColourProgram {
            schedule: Schedule::new(&params, n),
            params,
            lists: lists.lists().iter().map(|l| Rc::new(l.clone())).collect(),
        }
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    fn level_start(&self, level: usize) -> u64 {
        level as u64 * self.schedule.block
    }

    fn begin_level(&self, s: &mut NodeState, level: usize, act: &mut Act) -> std::result::Result<(), String> {
        if level >= self.params.max_levels {
            act.output = Some(NodeOutput {
                colour: None,
                level,
                removal: None,
            });
            act.send.push((Target::All, Msg::Colour(None)));
            act.wake = Wake::Idle;
            s.phase = Phase::Done;
            return Ok(());
        }
        let rec = Rc::new(Rec {
            id: s.id,
            nbrs: s.nbrs.clone(),
            list: s.list.clone(),
        });
        let mut known = HashMap::new();
        known.insert(s.id, rec.clone());
        s.phase = Phase::Alive(Box::new(LevelWork {
            known,
            announced: BTreeMap::new(),
            pockets: Vec::new(),
        }));
        act.send.push((Target::All, Msg::Gather(vec![rec])));
        act.wake = Wake::At(self.level_start(level) + self.schedule.gather);
        self.try_base(s, level, act)
    }

    /// Colours the node's component if it is small and fully known.
    fn try_base(&self, s: &mut NodeState, level: usize, act: &mut Act) -> std::result::Result<(), String> {
        let Phase::Alive(work) = &s.phase else { return Ok(()) };
        let known = &work.known;
        if known.len() > self.params.k_base || !known.values().all(|r| r.nbrs.iter().all(|w| known.contains_key(w))) {
            return Ok(());
        }
        let mut comp: Vec<Vertex> = known.keys().copied().collect();
        comp.sort_unstable();
        let edges = inner_edges(|v| known[&v].nbrs.clone(), &comp);
        let lists: Vec<Vec<Colour>> = comp.iter().map(|v| known[v].list.as_ref().clone()).collect();
        let solved = solve_on(&comp, &edges, &lists).ok_or_else(|| format!("component {comp:?} has no colouring"))?;
        let colour = solved[comp.binary_search(&s.id).unwrap()];
        act.output = Some(NodeOutput {
            colour: Some(colour),
            level,
            removal: Some(Removal::Base),
        });
        act.send.push((Target::All, Msg::Colour(Some(colour))));
        act.wake = Wake::Idle;
        s.phase = Phase::Done;
        Ok(())
    }

    fn gather(&self, s: &mut NodeState, level: usize, offset: u64, inbox: &Inbox<Msg>, act: &mut Act) -> std::result::Result<(), String> {
        let p = &self.params;
        let Phase::Alive(work) = &mut s.phase else { unreachable!() };
        let mut fresh = Vec::new();
        for (_, msg) in inbox {
            if let Msg::Gather(recs) = msg.as_ref() {
                for r in recs {
                    if !work.known.contains_key(&r.id) {
                        work.known.insert(r.id, r.clone());
                        fresh.push(r.clone());
                    }
                }
            }
        }
        if offset < self.schedule.gather {
            let everything = work.known.len() <= p.k_base;
            let low = s.nbrs.len() <= p.cap && offset + 2 <= p.size_cap as u64;
            let out: Vec<Rc<Rec>> = fresh
                .into_iter()
                .filter(|r| everything || (low && r.nbrs.len() <= p.cap))
                .collect();
            if !out.is_empty() {
                act.send.push((Target::All, Msg::Gather(out)));
            }
            act.wake = Wake::At(self.level_start(level) + self.schedule.gather);
        }
        self.try_base(s, level, act)?;
        let Phase::Alive(work) = &mut s.phase else { return Ok(()) };
        if offset == self.schedule.gather {
            if s.nbrs.len() <= p.cap {
                let view = Known(&work.known);
                let found = find_deletable_pocket_in(&view, s.id, p.cap, p.c as i64, p.size_cap, p.exact_cap);
                if let Some(members) = found {
                    let edges = inner_edges(|v| work.known[&v].nbrs.clone(), &members);
                    let info = Rc::new(PocketInfo {
                        seed: s.id,
                        members: Rc::new(members),
                        edges: Rc::new(edges),
                    });
                    work.announced
                        .insert(info.members.clone(), (info.edges.clone(), BTreeSet::from([s.id])));
                    if p.size_cap > 1 {
                        act.send.push((Target::All, Msg::Announce(vec![info])));
                    }
                }
            }
            work.known = HashMap::new();
            act.wake = Wake::At(self.level_start(level) + self.schedule.first_exchange());
        }
        Ok(())
    }

    fn announce(&self, s: &mut NodeState, inbox: &Inbox<Msg>, act: &mut Act) {
        let Phase::Alive(work) = &mut s.phase else { unreachable!() };
        let mut out = Vec::new();
        for (_, msg) in inbox {
            if let Msg::Announce(infos) = msg.as_ref() {
                for info in infos {
                    if info.members.binary_search(&s.id).is_err() {
                        continue;
                    }
                    let entry = work
                        .announced
                        .entry(info.members.clone())
                        .or_insert_with(|| (info.edges.clone(), BTreeSet::new()));
                    if entry.1.insert(info.seed) {
                        out.push(info.clone());
                    }
                }
            }
        }
        if !out.is_empty() {
            act.send.push((Target::All, Msg::Announce(out)));
        }
    }

    fn read_exchange(&self, s: &mut NodeState, inbox: &Inbox<Msg>) {
        let Phase::Alive(work) = &mut s.phase else { unreachable!() };
        for (_, msg) in inbox {
            if let Msg::Exchange { publish, spread } = msg.as_ref() {
                for pocket in work.pockets.iter_mut() {
                    for &(p, state) in publish {
                        pocket.learn(p, false, state);
                    }
                }
                for (target, items) in spread {
                    if let Ok(i) = work.pockets.binary_search_by_key(target, |q| q.id) {
                        for item in items {
                            work.pockets[i].learn(item.pocket, item.overlap, item.state);
                        }
                    }
                }
            }
        }
    }

    /// Sends what this node's pockets learned since the last round.
    fn spread(s: &mut NodeState, publish: Vec<(Vertex, Versioned)>, act: &mut Act) {
        let Phase::Alive(work) = &mut s.phase else { unreachable!() };
        let spread: Vec<(Vertex, Vec<Item>)> = work
            .pockets
            .iter_mut()
            .filter(|q| !q.pending.is_empty())
            .map(|q| (q.id, std::mem::take(&mut q.pending).into_values().collect()))
            .collect();
        if !publish.is_empty() || !spread.is_empty() {
            act.send.push((Target::All, Msg::Exchange { publish, spread }));
        }
    }

    /// Turns announcements into pockets and publishes membership.
    fn open_exchanges(&self, s: &mut NodeState, level: usize, act: &mut Act) {
        let Phase::Alive(work) = &mut s.phase else { unreachable!() };
        let announced = std::mem::take(&mut work.announced);
        work.pockets = announced
            .into_iter()
            .map(|(members, (edges, seeds))| Pocket {
                id: *seeds.first().expect("announced by a seed"),
                members,
                edges,
                contacts: BTreeMap::new(),
                state: None,
                pending: BTreeMap::new(),
            })
            .collect();
        work.pockets.sort_by_key(|q| q.id);
        if work.pockets.is_empty() {
            act.wake = Wake::At(self.level_start(level + 1));
            return;
        }
        let ids: Vec<Vertex> = work.pockets.iter().map(|q| q.id).collect();
        for q in work.pockets.iter_mut() {
            for &other in &ids {
                q.learn(other, true, None);
            }
        }
        let publish = ids.iter().map(|&id| (id, None)).collect();
        Self::spread(s, publish, act);
        act.wake = Wake::At(self.level_start(level) + self.schedule.exchange(1));
    }

    /// Applies operation `j - 1` at exchange `j` and publishes the result.
    fn exchange(&self, s: &mut NodeState, level: usize, j: usize, act: &mut Act) -> std::result::Result<(), String> {
        let plan = &self.schedule.plan;
        let Phase::Alive(work) = &mut s.phase else { unreachable!() };
        let op = plan.ops[j - 1];
        let next: Vec<PocketState> = work
            .pockets
            .iter()
            .map(|q| match op {
                Op::Discover => initial_state(q.id, q.contacts.len(), &self.params),
                _ => advance(op, q.state.expect("set at discovery"), &q.views(), plan),
            })
            .collect();
        let mut publish = Vec::new();
        for (q, state) in work.pockets.iter_mut().zip(&next) {
            if q.state != Some(*state) {
                publish.push((q.id, Some((j, *state))));
            }
            q.state = Some(*state);
        }
        if j == plan.ops.len() {
            return self.finish_level(s, level, act);
        }
        for &(id, state) in &publish {
            for q in work.pockets.iter_mut() {
                q.learn(id, true, state);
            }
        }
        Self::spread(s, publish, act);
        act.wake = Wake::At(self.level_start(level) + self.schedule.exchange(j + 1));
        Ok(())
    }

    fn finish_level(&self, s: &mut NodeState, level: usize, act: &mut Act) -> std::result::Result<(), String> {
        let Phase::Alive(work) = &mut s.phase else { unreachable!() };
        let mut kept = work.pockets.iter().filter(|q| q.state.is_some_and(|st| st.survived == Some(true)));
        let Some(mine) = kept.next() else {
            act.wake = Wake::At(self.level_start(level + 1));
            return Ok(());
        };
        if let Some(other) = kept.next() {
            return Err(format!("surviving pockets {} and {} overlap", mine.id, other.id));
        }
        let class = mine.state.unwrap().colour;
        act.send.push((Target::All, Msg::Left { class }));
        s.phase = Phase::Removed(Box::new(Extension {
            level,
            class,
            pocket: mine.id,
            members: mine.members.clone(),
            edges: mine.edges.clone(),
            deps: None,
            colours: HashMap::new(),
            ready: BTreeMap::new(),
            sent: false,
            stuck: BTreeSet::new(),
        }));
        act.wake = Wake::At(self.level_start(level + 1));
        Ok(())
    }

    fn extend(&self, s: &mut NodeState, round: u64, inbox: &Inbox<Msg>, act: &mut Act) -> std::result::Result<(), String> {
        let Phase::Removed(ext) = &mut s.phase else { unreachable!() };
        let mut fresh = Vec::new();
        let mut later = BTreeSet::new();
        for (from, msg) in inbox {
            match msg.as_ref() {
                Msg::Colour(Some(c)) => {
                    ext.colours.insert(*from, *c);
                }
                Msg::Colour(None) => {
                    ext.stuck.insert(*from);
                }
                Msg::Left { class } if *class > ext.class => {
                    later.insert(*from);
                }
                Msg::Ready { pocket, lists } if *pocket == ext.pocket => {
                    for (v, l) in lists {
                        if !ext.ready.contains_key(v) {
                            ext.ready.insert(*v, l.clone());
                            fresh.push((*v, l.clone()));
                        }
                    }
                }
                _ => {}
            }
        }
        if ext.deps.is_none() {
            if round < self.level_start(ext.level + 1) {
                act.wake = Wake::At(self.level_start(ext.level + 1));
                return Ok(());
            }
            let members = &ext.members;
            ext.deps = Some(
                s.nbrs
                    .iter()
                    .copied()
                    .filter(|w| members.binary_search(w).is_err() && !later.contains(w))
                    .collect(),
            );
        }
        let removal = Some(Removal::Pocket {
            id: ext.pocket,
            class: ext.class,
        });
        let deps = ext.deps.as_ref().unwrap();
        if ext.stuck.iter().any(|w| deps.contains(w) || ext.members.binary_search(w).is_ok()) {
            act.output = Some(NodeOutput {
                colour: None,
                level: ext.level,
                removal,
            });
            act.send.push((Target::All, Msg::Colour(None)));
            s.phase = Phase::Done;
            return Ok(());
        }
        let deps = ext.deps.as_ref().unwrap();
        if !ext.sent && deps.iter().all(|w| ext.colours.contains_key(w)) {
            let taken: Vec<Colour> = deps.iter().map(|w| ext.colours[w]).collect();
            let pruned = Rc::new(s.list.iter().copied().filter(|c| !taken.contains(c)).collect::<Vec<_>>());
            ext.ready.insert(s.id, pruned.clone());
            fresh.push((s.id, pruned));
            ext.sent = true;
        }
        if !fresh.is_empty() && ext.members.len() > 1 {
            act.send.push((
                Target::All,
                Msg::Ready {
                    pocket: ext.pocket,
                    lists: fresh,
                },
            ));
        }
        if ext.ready.len() == ext.members.len() {
            let lists: Vec<Vec<Colour>> = ext.ready.values().map(|l| l.as_ref().clone()).collect();
            let solved = solve_on(&ext.members, &ext.edges, &lists)
                .ok_or_else(|| format!("pocket {:?} cannot be extended", ext.members))?;
            let colour = solved[ext.members.binary_search(&s.id).unwrap()];
            act.output = Some(NodeOutput {
                colour: Some(colour),
                level: ext.level,
                removal,
            });
            act.send.push((Target::All, Msg::Colour(Some(colour))));
            s.phase = Phase::Done;
        }
        Ok(())
    }
}

impl NodeProgram for ColourProgram {
    type State = NodeState;
    type Msg = Msg;
    type Output = NodeOutput;

    fn init(&self, id: Vertex, neighbours: &[Vertex]) -> std::result::Result<(NodeState, Act), String> {
        let mut s = NodeState {
            id,
            list: self.lists[id as usize].clone(),
            nbrs: neighbours.to_vec(),
            phase: Phase::Done,
        };
        let mut act = Action::idle();
        self.begin_level(&mut s, 0, &mut act)?;
        Ok((s, act))
    }

    fn step(&self, s: &mut NodeState, round: u64, inbox: &Inbox<Msg>) -> std::result::Result<Act, String> {
        let mut act = Action::idle();
        let level = (round / self.schedule.block) as usize;
        let offset = round % self.schedule.block;
        match &s.phase {
            Phase::Done => {}
            Phase::Removed(_) => self.extend(s, round, inbox, &mut act)?,
            Phase::Alive(_) if offset == 0 => {
                let left: BTreeSet<Vertex> = inbox
                    .iter()
                    .filter(|(_, m)| matches!(m.as_ref(), Msg::Left { .. }))
                    .map(|&(from, _)| from)
                    .collect();
                s.nbrs.retain(|w| !left.contains(w));
                self.begin_level(s, level, &mut act)?;
            }
            Phase::Alive(_) => {
                let sched = &self.schedule;
                if offset <= sched.gather {
                    self.gather(s, level, offset, inbox, &mut act)?;
                }
                if !matches!(s.phase, Phase::Alive(_)) {
                    return Ok(act);
                }
                let first = sched.first_exchange();
                if offset > sched.gather && offset <= first {
                    self.announce(s, inbox, &mut act);
                }
                if offset == first {
                    self.open_exchanges(s, level, &mut act);
                } else if offset > first {
                    self.read_exchange(s, inbox);
                    let since = offset - first;
                    if since % sched.span == 0 {
                        self.exchange(s, level, (since / sched.span) as usize, &mut act)?;
                    } else {
                        Self::spread(s, Vec::new(), &mut act);
                        act.wake = Wake::At(self.level_start(level) + first + (since / sched.span + 1) * sched.span);
                    }
                }
                if let Phase::Alive(work) = &s.phase {
                    if offset > first && work.pockets.is_empty() {
                        act.wake = Wake::At(self.level_start(level + 1));
                    } else if act.wake == Wake::Idle {
                        act.wake = Wake::At(self.level_start(level) + first);
                    }
                }
            }
        }
        Ok(act)
    }
}

/// Runs the level algorithm on the simulator. The colouring is checked
/// against `l` before it is returned.
pub fn distributed_list_colour(
    g: &Graph,
    l: &ListAssignment,
    p: &AlgoParams,
) -> Result<(Colouring, SimTrace, Vec<LevelRecord>)> {
    p.check_lists(g, l)?;
    let program = ColourProgram::new(p.clone(), g.n(), l);
    let block = program.schedule().block;
    let max_rounds = 2 * block * (p.max_levels as u64 + 1);
    let (outputs, trace) = run(g, &program, max_rounds)?;
    if outputs.iter().any(|o| o.colour.is_none()) {
        return Err(Error::LevelLimit {
            max_levels: p.max_levels,
            remaining: g.vertices().filter(|&v| outputs[v as usize].removal.is_none()).collect(),
        });
    }
    let colouring = Colouring::from_total(outputs.iter().filter_map(|o| o.colour).collect());
    let verdict = verify_colouring(g, &colouring, Some(l))?;
    if !verdict.is_ok() {
        return Err(Error::Refused(format!("the computed colouring is invalid: {verdict:?}")));
    }
    let removals: Vec<(usize, Removal)> = outputs.iter().filter_map(|o| Some((o.level, o.removal?))).collect();
    Ok((colouring, trace, level_records(&removals, block)))
}
