//! Inserting steps into the middle of a tower.

use super::{Elem, ExtStep, FieldTower, StepKind};
use crate::error::Result;

impl FieldTower {
    /// A copy of the tower with `extra` inserted directly above `base`; the
    /// steps above `base` are carried over unchanged in shape. Inserted steps
    /// are checked. Carried steps are not re-checked, which is sound when they
    /// are separable and the inserted ones purely inseparable (the two stay
    /// linearly disjoint).
    pub fn insert_steps(&self, base: usize, extra: &[ExtStep]) -> Result<FieldTower> {
        let mut out = self.truncate(base);
        for st in extra {
            out = out.make_step(st.clone())?;
        }
        let r = extra.len();
        for k in base + 1..=self.top() {
            let step = &self.steps[k - 1];
            let tr = |x: &Elem| self.translate(x, k - 1, base, r, &out);
            let kind = match &step.kind {
                StepKind::ArtinSchreier(a) => StepKind::ArtinSchreier(tr(a)),
                StepKind::InsepRoot(b) => StepKind::InsepRoot(tr(b)),
                StepKind::Simple(m) => StepKind::Simple(m.iter().map(tr).collect()),
            };
            out = out.push_unchecked(ExtStep {
                name: step.name.clone(),
                kind,
            });
        }
        Ok(out)
    }

    /// Image of `x` (at `level`) in a tower built by
    /// [`insert_steps`](Self::insert_steps) with `r` steps above `base`.
    pub fn translate(
        &self,
        x: &Elem,
        level: usize,
        base: usize,
        r: usize,
        new: &FieldTower,
    ) -> Elem {
        if level <= base {
            return new.lift(x, level, base + r);
        }
        match x {
            Elem::Ext(cs) => Elem::Ext(
                cs.iter()
                    .map(|c| self.translate(c, level - 1, base, r, new))
                    .collect(),
            ),
            Elem::Base(_) => unreachable!("base element above level 0"),
        }
    }
}
