//! Vantage-point tree over point ids.
//!
//! The tree stores ids only; every query takes a distance closure, so the
//! same structure serves any of the metric kinds. Subtree distance bounds
//! come from the triangle inequality on *computed* distances, which can be
//! off by a few ulps, so every bound is slackened by a relative margin
//! before it is allowed to prune anything. Pruning therefore never changes
//! a result, only the amount of work.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const LEAF_SIZE: usize = 16;

/// Relative slack applied to triangle-inequality bounds; generous against
/// the ~1e-15 rounding of a Euclidean distance.
const BOUND_SLACK: f64 = 1e-12;

fn slacken(raw: f64, scale: f64) -> f64 {
    let b = raw - BOUND_SLACK * scale;
    if b > 0.0 {
        b
    } else {
        0.0
    }
}

#[derive(Debug)]
enum Node {
    Inner {
        point: usize,
        radius: f64,
        /// Child slots in `nodes`; `u32::MAX` marks an absent child.
        inside: u32,
        outside: u32,
    },
    Leaf {
        start: u32,
        end: u32,
    },
}

const NONE: u32 = u32::MAX;

#[derive(Debug)]
pub struct VpTree {
    nodes: Vec<Node>,
    leaf_points: Vec<usize>,
    root: u32,
}

impl VpTree {
    /// Builds a tree over ids `0..n` using the given symmetric distance.
    pub fn build(n: usize, dist: &impl Fn(usize, usize) -> f64) -> Self {
        let mut tree = VpTree {
            nodes: Vec::with_capacity(2 * n / LEAF_SIZE + 1),
            leaf_points: Vec::with_capacity(n),
            root: NONE,
        };
        let mut ids: Vec<usize> = (0..n).collect();
        tree.root = tree.split(&mut ids, dist);
        tree
    }

    fn split(&mut self, ids: &mut [usize], dist: &impl Fn(usize, usize) -> f64) -> u32 {
        if ids.is_empty() {
            return NONE;
        }
        if ids.len() <= LEAF_SIZE {
            let start = self.leaf_points.len() as u32;
            self.leaf_points.extend_from_slice(ids);
            let end = self.leaf_points.len() as u32;
            self.nodes.push(Node::Leaf { start, end });
            return (self.nodes.len() - 1) as u32;
        }
        // First id in the slice is the vantage point; deterministic and
        // adequate for randomized inputs.
        let vantage = ids[0];
        let rest = &mut ids[1..];
        let mut keyed: Vec<(f64, usize)> = rest.iter().map(|&i| (dist(vantage, i), i)).collect();
        let mid = keyed.len() / 2;
        keyed.select_nth_unstable_by(mid, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let radius = keyed[mid].0;

        let slot = self.nodes.len() as u32;
        self.nodes.push(Node::Inner {
            point: vantage,
            radius,
            inside: NONE,
            outside: NONE,
        });

        let mut inside_ids: Vec<usize> = keyed[..=mid].iter().map(|&(_, i)| i).collect();
        let mut outside_ids: Vec<usize> = keyed[mid + 1..].iter().map(|&(_, i)| i).collect();
        let inside = self.split(&mut inside_ids, dist);
        let outside = self.split(&mut outside_ids, dist);
        match &mut self.nodes[slot as usize] {
            Node::Inner {
                inside: i,
                outside: o,
                ..
            } => {
                *i = inside;
                *o = outside;
            }
            Node::Leaf { .. } => unreachable!(),
        }
        slot
    }

    /// Nearest id to the query, ties broken by smallest id. Exactly matches
    /// a linear scan over the same computed distances.
    pub fn nearest(&self, dist_to: &impl Fn(usize) -> f64) -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        self.nearest_rec(self.root, dist_to, &mut best);
        best
    }

    fn nearest_rec(&self, slot: u32, dist_to: &impl Fn(usize) -> f64, best: &mut (f64, usize)) {
        if slot == NONE {
            return;
        }
        match &self.nodes[slot as usize] {
            Node::Leaf { start, end } => {
                for &id in &self.leaf_points[*start as usize..*end as usize] {
                    let d = dist_to(id);
                    if d < best.0 || (d == best.0 && id < best.1) {
                        *best = (d, id);
                    }
                }
            }
            Node::Inner {
                point,
                radius,
                inside,
                outside,
            } => {
                let dv = dist_to(*point);
                if dv < best.0 || (dv == best.0 && *point < best.1) {
                    *best = (dv, *point);
                }
                let scale = dv + radius;
                let lb_in = slacken(dv - radius, scale);
                let lb_out = slacken(radius - dv, scale);
                // Visit the closer side first; descend only where an equal
                // or better distance might still hide.
                let (first, first_lb, second, second_lb) = if dv <= *radius {
                    (*inside, lb_in, *outside, lb_out)
                } else {
                    (*outside, lb_out, *inside, lb_in)
                };
                if first_lb <= best.0 {
                    self.nearest_rec(first, dist_to, best);
                }
                if second_lb <= best.0 {
                    self.nearest_rec(second, dist_to, best);
                }
            }
        }
    }

    /// All ids with computed distance `<= r`, in arbitrary order.
    pub fn within(&self, dist_to: &impl Fn(usize) -> f64, r: f64) -> Vec<(f64, usize)> {
        let mut out = Vec::new();
        self.within_rec(self.root, dist_to, r, &mut out);
        out
    }

    fn within_rec(
        &self,
        slot: u32,
        dist_to: &impl Fn(usize) -> f64,
        r: f64,
        out: &mut Vec<(f64, usize)>,
    ) {
        if slot == NONE {
            return;
        }
        match &self.nodes[slot as usize] {
            Node::Leaf { start, end } => {
                for &id in &self.leaf_points[*start as usize..*end as usize] {
                    let d = dist_to(id);
                    if d <= r {
                        out.push((d, id));
                    }
                }
            }
            Node::Inner {
                point,
                radius,
                inside,
                outside,
            } => {
                let dv = dist_to(*point);
                if dv <= r {
                    out.push((dv, *point));
                }
                let scale = dv + radius;
                if slacken(dv - radius, scale) <= r {
                    self.within_rec(*inside, dist_to, r, out);
                }
                if slacken(radius - dv, scale) <= r {
                    self.within_rec(*outside, dist_to, r, out);
                }
            }
        }
    }

    /// Lazy scan of all ids in nondecreasing computed-distance order.
    pub fn scan<'a, F: Fn(usize) -> f64>(&'a self, dist_to: F) -> NearestScan<'a, F> {
        let mut heap = BinaryHeap::new();
        if self.root != NONE {
            heap.push(Entry {
                key: 0.0,
                item: Item::Node(self.root),
            });
        }
        NearestScan {
            tree: self,
            dist_to,
            heap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Item {
    Point(usize),
    Node(u32),
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    key: f64,
    item: Item,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.item == other.item
    }
}
impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse for min-first. Points drain
        // before nodes at equal keys, smaller ids first, for determinism.
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| match (&self.item, &other.item) {
                (Item::Point(a), Item::Point(b)) => b.cmp(a),
                (Item::Point(_), Item::Node(_)) => Ordering::Greater,
                (Item::Node(_), Item::Point(_)) => Ordering::Less,
                (Item::Node(a), Item::Node(b)) => b.cmp(a),
            })
    }
}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Best-first traversal yielding `(distance, id)` in nondecreasing distance.
pub struct NearestScan<'a, F: Fn(usize) -> f64> {
    tree: &'a VpTree,
    dist_to: F,
    heap: BinaryHeap<Entry>,
}

impl<'a, F: Fn(usize) -> f64> Iterator for NearestScan<'a, F> {
    type Item = (f64, usize);

    fn next(&mut self) -> Option<(f64, usize)> {
        while let Some(entry) = self.heap.pop() {
            match entry.item {
                Item::Point(id) => return Some((entry.key, id)),
                Item::Node(slot) => match &self.tree.nodes[slot as usize] {
                    Node::Leaf { start, end } => {
                        for &id in &self.tree.leaf_points[*start as usize..*end as usize] {
                            let d = (self.dist_to)(id);
                            self.heap.push(Entry {
                                key: d.max(entry.key),
                                item: Item::Point(id),
                            });
                        }
                    }
                    Node::Inner {
                        point,
                        radius,
                        inside,
                        outside,
                    } => {
                        let dv = (self.dist_to)(*point);
                        self.heap.push(Entry {
                            key: dv.max(entry.key),
                            item: Item::Point(*point),
                        });
                        let scale = dv + radius;
                        if *inside != NONE {
                            self.heap.push(Entry {
                                key: slacken(dv - radius, scale).max(entry.key),
                                item: Item::Node(*inside),
                            });
                        }
                        if *outside != NONE {
                            self.heap.push(Entry {
                                key: slacken(radius - dv, scale).max(entry.key),
                                item: Item::Node(*outside),
                            });
                        }
                    }
                },
            }
        }
        None
    }
}
