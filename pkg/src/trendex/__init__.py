"""Treatment-trend mining over semantic predication records.

The pipeline: map a free-text disease query to disorder concepts, pull
"X TREATS disease" evidence from a predication store, drop non-specific
treatment names by a co-mention ratio test, rank the rest by weighted
min-max-normalized per-epoch literature frequency, and score rankings
against guideline gold standards.
"""

__version__ = "0.1.0"
