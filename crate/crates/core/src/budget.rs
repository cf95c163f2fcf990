use std::time::{Duration, Instant};

/// Work limit for the exact searches: a deterministic node count and an
/// optional wall-clock deadline. Either one running out stops the search.
#[derive(Clone, Debug)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
    nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { max_nodes: None, deadline: None, nodes: 0 }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes: Some(max_nodes), deadline: None, nodes: 0 }
    }

    pub fn wall_clock(limit: Duration) -> Self {
        Budget { max_nodes: None, deadline: Some(Instant::now() + limit), nodes: 0 }
    }

    pub fn used(&self) -> u64 {
        self.nodes
    }

    /// Counts one unit of work; `false` once the budget is spent.
    pub fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(max) = self.max_nodes {
            if self.nodes > max {
                return false;
            }
        }
        if let Some(deadline) = self.deadline {
            if self.nodes.is_multiple_of(1024) && Instant::now() >= deadline {
                return false;
            }
        }
        true
    }
}
