"""Publication-style figures from zetalab experiment outputs.

Reads only the public CSV/JSON file contract of the sampling pipeline; no
code is shared with the numerical package.
"""

__version__ = "0.1.0"
