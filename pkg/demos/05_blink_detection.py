"""
Blink detection from the eye aspect ratio
=========================================

The EAR signal drops sharply when the eye closes. The detector finds the
drop, then walks outward to the peaks on either side to localize the
blink's start and end.
"""

import numpy as np

from talkeval import EarSignal, blink_stats, detect_blinks, ear

# EAR of an open vs a nearly closed eye (p1..p6, corner/upper/upper/corner/lower/lower).
open_eye = np.array([[0, 0], [1, 1], [3, 1], [4, 0], [3, -1], [1, -1]], dtype=float)
closed_eye = open_eye * [1.0, 0.08]
print(f"EAR open {ear(open_eye):.3f}, nearly closed {ear(closed_eye):.3f}")

# A 6 s signal at 25 fps with two planted blinks.
values = np.full(150, 0.30)
for apex in (40, 95):
    for i, level in enumerate(np.linspace(0.30, 0.05, 4)):
        values[apex - 3 + i] = level
        values[apex + 3 - i] = level
signal = EarSignal(values=values, fps=25.0)

events = detect_blinks(signal)
for event in events:
    print(f"blink: start {event.start}, apex {event.apex}, end {event.end}, "
          f"{event.duration_s * 1000:.0f} ms")

# Corpus statistics: rate, median duration, plot-ready histograms.
stats = blink_stats([events], [len(signal) / signal.fps])
print(f"rate {stats.blinks_per_second:.2f} blinks/s, "
      f"median duration {stats.median_duration_s:.2f} s")
print("blinks-per-video histogram:", stats.count_histogram)
print("duration histogram (bin lower edges):", stats.duration_histogram)
