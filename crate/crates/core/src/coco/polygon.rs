use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::Mask;

/// One ring per 4-connected component of `mask`, traced along pixel edges
/// with collinear vertices dropped.
///
/// Rings are flat `[x0, y0, x1, y1, ...]` lists in image coordinates (y
/// down), starting at the top-left corner of the component's first pixel
/// in raster order and running clockwise on screen. Coco unions the
/// polygons of an annotation, so a hole cannot be its own ring; instead
/// each hole boundary is spliced into the outer ring through a zero-width
/// vertical slit walked down and back up. Even-odd filling of a ring at
/// pixel centers gives back exactly the component's pixels.
pub fn trace_polygons(mask: &Mask) -> Vec<Vec<f64>> {
    let w = mask.width as i64;
    let h = mask.height as i64;
    let mut comp = vec![0u32; (w * h) as usize];
    let mut rings = Vec::new();
    let mut next = 0u32;
    let set = |x: i64, y: i64| mask.get(x + mask.x0 as i64, y + mask.y0 as i64);

    for sy in 0..h {
        for sx in 0..w {
            if !set(sx, sy) || comp[(sy * w + sx) as usize] != 0 {
                continue;
            }
            next += 1;
            let id = next;
            let mut stack = vec![(sx, sy)];
            let mut pixels = Vec::new();
            comp[(sy * w + sx) as usize] = id;
            while let Some((x, y)) = stack.pop() {
                pixels.push((x, y));
                for (nx, ny) in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                    if nx >= 0
                        && ny >= 0
                        && nx < w
                        && ny < h
                        && set(nx, ny)
                        && comp[(ny * w + nx) as usize] == 0
                    {
                        comp[(ny * w + nx) as usize] = id;
                        stack.push((nx, ny));
                    }
                }
            }
            pixels.sort_unstable_by_key(|&(x, y)| (y, x));
            let inside = |x: i64, y: i64| {
                x >= 0 && y >= 0 && x < w && y < h && comp[(y * w + x) as usize] == id
            };
            let ring = trace_component(&pixels, inside);
            rings.push(
                ring.iter()
                    .flat_map(|&(x, y)| [(x + mask.x0 as i64) as f64, (y + mask.y0 as i64) as f64])
                    .collect(),
            );
        }
    }
    rings
}

type Point = (i64, i64);

/// Directed boundary edges of pixel `(x, y)` with the pixel on their right
/// (y down), for each side whose neighbour is outside.
fn pixel_edges(x: i64, y: i64, inside: &impl Fn(i64, i64) -> bool) -> Vec<(Point, Point)> {
    [
        ((x, y - 1), (x, y), (1, 0)),
        ((x + 1, y), (x + 1, y), (0, 1)),
        ((x, y + 1), (x + 1, y + 1), (-1, 0)),
        ((x - 1, y), (x, y + 1), (0, -1)),
    ]
    .into_iter()
    .filter(|&(n, _, _)| !inside(n.0, n.1))
    .map(|(_, from, dir)| (from, dir))
    .collect()
}

/// Outer cycle with every hole cycle spliced in, as a closed vertex list
/// without its repeated first vertex.
fn trace_component(pixels: &[Point], inside: impl Fn(i64, i64) -> bool) -> Vec<Point> {
    let (sx, sy) = pixels[0];
    let mut visited = BTreeSet::new();
    let mut ring = walk((sx, sy), (1, 0), &inside, &mut visited);

    let mut holes = Vec::new();
    for &(x, y) in pixels {
        for (from, dir) in pixel_edges(x, y, &inside) {
            if !visited.contains(&(from, dir)) {
                let cycle = walk(from, dir, &inside, &mut visited);
                let top = *cycle.iter().min_by_key(|&&(x, y)| (y, x)).unwrap();
                holes.push((top, cycle));
            }
        }
    }
    // Anything directly above a hole's top vertex belongs to a cycle whose
    // top is higher, so merging top-down always finds an anchor.
    holes.sort_by_key(|&((x, y), _)| (y, x));
    for ((hx, hy), cycle) in holes {
        let anchor = ring
            .iter()
            .enumerate()
            .filter(|&(_, &(x, y))| x == hx && y < hy)
            .max_by_key(|&(i, &(_, y))| (y, core::cmp::Reverse(i)))
            .map(|(i, _)| i)
            .expect("hole enclosed by its component");
        let at = cycle.iter().position(|&p| p == (hx, hy)).unwrap();
        let mut splice = Vec::with_capacity(cycle.len() + 2);
        splice.extend_from_slice(&cycle[at..]);
        splice.extend_from_slice(&cycle[..at]);
        splice.push((hx, hy));
        splice.push(ring[anchor]);
        ring.splice(anchor + 1..anchor + 1, splice);
    }
    drop_collinear(ring)
}

/// Crack-follows one boundary cycle from edge `(start, dir)`, keeping the
/// component on the right-hand side and turning right at diagonal pinches.
/// Returns every unit-step vertex.
fn walk(
    start: Point,
    start_dir: Point,
    inside: &impl Fn(i64, i64) -> bool,
    visited: &mut BTreeSet<(Point, Point)>,
) -> Vec<Point> {
    let mut pos = start;
    let mut dir = start_dir;
    let mut out = Vec::new();
    loop {
        out.push(pos);
        visited.insert((pos, dir));
        pos = (pos.0 + dir.0, pos.1 + dir.1);
        // Right and left of `dir` with y pointing down.
        let right = (-dir.1, dir.0);
        let left = (dir.1, -dir.0);
        let ahead = |side: Point| {
            inside(
                pos.0 + (dir.0 + side.0 - 1) / 2,
                pos.1 + (dir.1 + side.1 - 1) / 2,
            )
        };
        dir = if !ahead(right) {
            right
        } else if ahead(left) {
            left
        } else {
            dir
        };
        if pos == start && dir == start_dir {
            return out;
        }
    }
}

fn drop_collinear(ring: Vec<Point>) -> Vec<Point> {
    let n = ring.len();
    let step = |a: Point, b: Point| ((b.0 - a.0).signum(), (b.1 - a.1).signum());
    (0..n)
        .filter(|&i| step(ring[(i + n - 1) % n], ring[i]) != step(ring[i], ring[(i + 1) % n]))
        .map(|i| ring[i])
        .collect()
}
