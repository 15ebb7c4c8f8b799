/// Epoch-stamped visited marks: clearing is O(1) by bumping the epoch.
pub(crate) struct Visited {
    stamp: Vec<u32>,
    epoch: u32,
    pub(crate) queue: Vec<u32>,
}

impl Visited {
    pub(crate) fn new(n: usize) -> Self {
        Visited { stamp: vec![0; n], epoch: 0, queue: Vec::new() }
    }

    pub(crate) fn reset(&mut self) {
        self.queue.clear();
        if self.epoch == u32::MAX {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    /// Marks `v`, returning true if it was not yet marked in this epoch.
    #[inline]
    pub(crate) fn mark(&mut self, v: u32) -> bool {
        let s = &mut self.stamp[v as usize];
        if *s == self.epoch {
            false
        } else {
            *s = self.epoch;
            true
        }
    }

    #[inline]
    pub(crate) fn is_marked(&self, v: u32) -> bool {
        self.stamp[v as usize] == self.epoch
    }
}
