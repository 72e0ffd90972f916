//! Surgery on explicit views: consumes `*` edges by exchanging `s1`
//! successors.

use crate::ball::BallView;
use crate::error::{Error, Result};
use crate::word::Letter;

/// Replaces, for every `*` edge `{v, w}`, the edges `(v, v s1)` and
/// `(w, w s1)` by `(v, w s1)` and `(w, v s1)`, and drops the `*` edge.
/// Vertex numbering is kept, since the result need not be connected. The
/// consumed pairs are returned for [`inverse_surgery`].
pub fn surgery(view: &BallView) -> Result<(BallView, Vec<(u32, u32)>)> {
    let pairs: Vec<(u32, u32)> = view.stars().collect();
    for &(a, b) in &pairs {
        for v in [a, b] {
            if view.step(v, Letter::pos(0)).is_none() {
                return Err(Error::Malformed(format!(
                    "* edge at {} has no s1 edge to exchange",
                    view.label(v)
                )));
            }
        }
    }
    let mut out = view.clone();
    for &(a, b) in &pairs {
        out.swap_s1_targets(a, b);
        out.clear_star(a);
    }
    out.validate()?;
    Ok((out, pairs))
}

/// Undoes [`surgery`] given the consumed pairs: the exchange is an
/// involution.
pub fn inverse_surgery(view: &BallView, pairs: &[(u32, u32)]) -> Result<BallView> {
    let mut out = view.clone();
    for &(a, b) in pairs {
        if a as usize >= view.len() || b as usize >= view.len() || a == b {
            return Err(Error::Malformed("pair outside the view".into()));
        }
        if out.star_of(a).is_some() || out.star_of(b).is_some() {
            return Err(Error::Malformed(format!(
                "vertex {} would carry two * edges",
                view.label(a)
            )));
        }
        out.swap_s1_targets(a, b);
        out.set_star(a, b);
    }
    out.validate()?;
    Ok(out)
}
