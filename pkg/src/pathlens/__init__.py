"""Static detection of attribute errors in a small Python subset.

A flow-sensitive forward analysis proposes error candidates; a backward,
path-sensitive search then tries to refute each one.
"""

from .driver import AnalyzerConfig, ErrorCandidate, Report, analyze_program, run, run_paths, run_text
from .frontend import SourceProgram, SubsetSyntaxError, load_program
from .interp import interpret
from .summaries import load_summaries

__version__ = "0.1.0"

__all__ = [
    "AnalyzerConfig", "ErrorCandidate", "Report", "SourceProgram", "SubsetSyntaxError",
    "analyze_program", "interpret", "load_program", "load_summaries", "run", "run_paths", "run_text",
]
