use super::{orbits, PermError, PermGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Blocks {
    Primitive,
    /// Blocks sorted internally and ordered by least element; the first block
    /// contains point 0.
    System(Vec<Vec<usize>>),
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

/// Finest block system in which `0` and `x` share a block.
fn block_system_joining(g: &PermGroup, x: usize) -> Vec<Vec<usize>> {
    let m = g.degree();
    let mut parent: Vec<usize> = (0..m).collect();
    let mut pending = vec![(0usize, x)];
    while let Some((a, b)) = pending.pop() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        parent[ra.max(rb)] = ra.min(rb);
        for s in g.generators() {
            pending.push((s.apply(a), s.apply(b)));
        }
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); m];
    for p in 0..m {
        let r = find(&mut parent, p);
        classes[r].push(p);
    }
    let mut out: Vec<Vec<usize>> = classes.into_iter().filter(|c| !c.is_empty()).collect();
    out.sort();
    out
}

/// A minimal non-trivial block system of a transitive group. Among the minimal
/// blocks containing 0 the smallest is chosen, ties broken lexicographically.
pub fn minimal_blocks(g: &PermGroup) -> Result<Blocks, PermError> {
    let m = g.degree();
    if orbits(g).len() > 1 {
        return Err(PermError::NotTransitive);
    }
    if m <= 2 {
        return Ok(Blocks::Primitive);
    }
    let systems: Vec<Vec<Vec<usize>>> = (0..m)
        .map(|x| if x == 0 { Vec::new() } else { block_system_joining(g, x) })
        .collect();
    let mut best: Option<&Vec<Vec<usize>>> = None;
    for x in 1..m {
        let sys = &systems[x];
        let b0 = &sys[0];
        if b0.len() == m {
            continue;
        }
        let minimal = b0.iter().skip(1).all(|&y| systems[y][0] == *b0);
        if !minimal {
            continue;
        }
        let better = match best {
            None => true,
            Some(cur) => (b0.len(), b0) < (cur[0].len(), &cur[0]),
        };
        if better {
            best = Some(sys);
        }
    }
    Ok(match best {
        None => Blocks::Primitive,
        Some(s) => Blocks::System(s.clone()),
    })
}
