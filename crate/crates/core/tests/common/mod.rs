//! Reference implementations used only as test oracles.
#![allow(dead_code)]

use std::collections::VecDeque;

/// Plain breadth-first 4-connected flood fill over a row-major grid.
pub fn bfs_fill(cells: &[u32], w: usize, h: usize, start: (usize, usize), target: u32, repl: u32) -> Vec<u32> {
    let mut out = cells.to_vec();
    if out[start.1 * w + start.0] != target || target == repl {
        return out;
    }
    let mut seen = vec![false; w * h];
    let mut q = VecDeque::from([start]);
    seen[start.1 * w + start.0] = true;
    while let Some((x, y)) = q.pop_front() {
        out[y * w + x] = repl;
        let mut nbrs = Vec::new();
        if x > 0 {
            nbrs.push((x - 1, y));
        }
        if x + 1 < w {
            nbrs.push((x + 1, y));
        }
        if y > 0 {
            nbrs.push((x, y - 1));
        }
        if y + 1 < h {
            nbrs.push((x, y + 1));
        }
        for (nx, ny) in nbrs {
            let i = ny * w + nx;
            if !seen[i] && cells[i] == target {
                seen[i] = true;
                q.push_back((nx, ny));
            }
        }
    }
    out
}

/// Component labels by repeated min-label propagation until a fixpoint.
/// `None` marks background cells.
pub fn propagate_labels(white: &[bool], w: usize, h: usize, eight: bool) -> Vec<Option<usize>> {
    let mut label: Vec<Option<usize>> = white.iter().enumerate().map(|(i, &b)| b.then_some(i)).collect();
    loop {
        let mut changed = false;
        for y in 0..h {
            for x in 0..w {
                let Some(mut best) = label[y * w + x] else { continue };
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        if (dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0) {
                            continue;
                        }
                        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                        if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                            continue;
                        }
                        if let Some(l) = label[ny as usize * w + nx as usize] {
                            best = best.min(l);
                        }
                    }
                }
                if Some(best) != label[y * w + x] {
                    label[y * w + x] = Some(best);
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

/// (pixel_count, x0, y0, x1, y1, first_index) per component, keyed by label.
pub fn component_stats(labels: &[Option<usize>], w: usize) -> Vec<(u64, usize, usize, usize, usize, usize)> {
    let mut map = std::collections::BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if let Some(l) = l {
            let (x, y) = (i % w, i / w);
            let e = map.entry(*l).or_insert((0u64, x, y, x, y, i));
            e.0 += 1;
            e.1 = e.1.min(x);
            e.2 = e.2.min(y);
            e.3 = e.3.max(x);
            e.4 = e.4.max(y);
        }
    }
    map.into_values().collect()
}

/// Pixels of the filled ellipse, by direct evaluation of the inequality
/// in floating point over a bounding window.
pub fn raster_ellipse(cx: i64, cy: i64, a: i64, b: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for y in cy - b - 2..=cy + b + 2 {
        for x in cx - a - 2..=cx + a + 2 {
            let u = (x - cx) as f64 / a as f64;
            let v = (y - cy) as f64 / b as f64;
            if u * u + v * v <= 1.0 + 1e-12 {
                out.push((x, y));
            }
        }
    }
    out
}
