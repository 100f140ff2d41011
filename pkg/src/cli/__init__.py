"""Command-line pipelines and CSV artifacts."""
from .artifacts import load_design, read_bounds, read_csv, write_csv, write_design
from .commands import cmd_bounds, cmd_design, cmd_mc, cmd_verify, design_for
from .run_config import RunConfig

__all__ = [
    'RunConfig',
    'cmd_bounds',
    'cmd_design',
    'cmd_mc',
    'cmd_verify',
    'design_for',
    'load_design',
    'read_bounds',
    'read_csv',
    'write_csv',
    'write_design',
]
