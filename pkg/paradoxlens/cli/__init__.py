from .commands import (EXIT_IO, EXIT_NO_OVERLAP, EXIT_OK, EXIT_USAGE,
                       EXIT_VIOLATES, cmd_analyze, cmd_diagnose, cmd_plot,
                       cmd_simulate, cmd_study, run)
from .parser import build_parser

__all__ = [
    "EXIT_IO",
    "EXIT_NO_OVERLAP",
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_VIOLATES",
    "build_parser",
    "cmd_analyze",
    "cmd_diagnose",
    "cmd_plot",
    "cmd_simulate",
    "cmd_study",
    "run",
]
