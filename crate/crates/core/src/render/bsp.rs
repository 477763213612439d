use crate::fixed::Fixed;
use crate::level::{Child, LevelMap, Node};

/// Which half-plane of a partition line a point lies in.
///
/// `Front` is the left-hand side of the partition direction, including
/// points exactly on the line; it corresponds to `children[1]` of a node
/// as stored in NODES. `Back` is the right-hand side, `children[0]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Front,
    Back,
}

impl Side {
    pub fn child_slot(self) -> usize {
        match self {
            Side::Front => 1,
            Side::Back => 0,
        }
    }
}

/// Sign of `partition × (p − origin)`, computed exactly on 16.16 values.
pub fn classify_point(node: &Node, p: (Fixed, Fixed)) -> Side {
    let cross = node.dx.0 as i128 * (p.1 .0 as i128 - node.y.0 as i128)
        - node.dy.0 as i128 * (p.0 .0 as i128 - node.x.0 as i128);
    if cross >= 0 {
        Side::Front
    } else {
        Side::Back
    }
}

/// Leaf of the BSP containing `p`.
pub fn subsector_at(level: &LevelMap, p: (Fixed, Fixed)) -> usize {
    let mut child = level.root().unwrap_or(Child::Subsector(0));
    loop {
        match child {
            Child::Subsector(s) => return s,
            Child::Node(n) => {
                let node = &level.nodes[n];
                child = node.children[classify_point(node, p).child_slot()];
            }
        }
    }
}

/// Whether `p` lies within the level: inside the vertex bounds and not
/// behind any seg of the subsector that contains it.
pub fn point_in_world(level: &LevelMap, p: (Fixed, Fixed)) -> bool {
    let Some(b) = level.bounds() else {
        return false;
    };
    if p.0 < b.left || p.0 > b.right || p.1 < b.bottom || p.1 > b.top {
        return false;
    }
    let ss = subsector_at(level, p);
    level.subsector_segs(ss).iter().all(|seg| {
        let v1 = level.vertices[seg.v1];
        let v2 = level.vertices[seg.v2];
        seg_cross(v1.x, v1.y, v2.x, v2.y, p) <= 0
    })
}

/// `(v2 − v1) × (p − v1)` on raw fixed values; negative on the seg's
/// front (right-hand) side.
pub(crate) fn seg_cross(x1: Fixed, y1: Fixed, x2: Fixed, y2: Fixed, p: (Fixed, Fixed)) -> i128 {
    let dx = x2.0 as i128 - x1.0 as i128;
    let dy = y2.0 as i128 - y1.0 as i128;
    dx * (p.1 .0 as i128 - y1.0 as i128) - dy * (p.0 .0 as i128 - x1.0 as i128)
}
