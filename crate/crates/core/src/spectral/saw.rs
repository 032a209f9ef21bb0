/// Longest walk length accepted by [`saw_count`].
pub const SAW_MAX_LENGTH: u32 = 16;

const STEPS: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Number `μ_n` of self-avoiding walks of `n` steps from the origin in `ℤ²`.
///
/// Exhaustive backtracking; walks starting East are counted and multiplied
/// by the four rotations. Returns `None` for `n > SAW_MAX_LENGTH`.
pub fn saw_count(n: u32) -> Option<u64> {
    if n > SAW_MAX_LENGTH {
        return None;
    }
    if n == 0 {
        return Some(1);
    }
    let side = 2 * n as usize + 1;
    let mut seen = alloc::vec![false; side * side];
    let c = n as i32;
    let idx = |x: i32, y: i32| (y + c) as usize * side + (x + c) as usize;
    seen[idx(0, 0)] = true;
    seen[idx(1, 0)] = true;
    Some(4 * extend(&mut seen, &idx, (1, 0), n - 1))
}

fn extend(seen: &mut [bool], idx: &impl Fn(i32, i32) -> usize, at: (i32, i32), left: u32) -> u64 {
    if left == 0 {
        return 1;
    }
    let mut total = 0;
    for (dx, dy) in STEPS {
        let next = (at.0 + dx, at.1 + dy);
        let k = idx(next.0, next.1);
        if !seen[k] {
            seen[k] = true;
            total += extend(seen, idx, next, left - 1);
            seen[k] = false;
        }
    }
    total
}
