"""Exact operation and storage accounting.

Counters are incremented with the exact number of scalar multiplies (divides
count as multiplies) that each vectorized numpy call performs, so reported
totals equal what a scalar implementation of the same loop would do. Counts
include the arithmetic spent on tolerance tests (norms, scale factors); the
documentation of each solver states this.
"""

from dataclasses import dataclass


@dataclass
class OpCounter:
    """Running count of scalar multiplications (and divisions)."""

    mults: int = 0

    def add(self, k):
        self.mults += int(k)


@dataclass
class StorageMeter:
    """Tracks live auxiliary entries and their peak.

    ``alloc``/``free`` are called with entry counts as semantic arrays come
    and go; the meter never inspects Python object overhead.
    """

    live: int = 0
    peak: int = 0

    def alloc(self, entries):
        self.live += int(entries)
        if self.live > self.peak:
            self.peak = self.live

    def free(self, entries):
        self.live -= int(entries)
