# processing package
from .pipeline import run_sweep, make_run_id, worker_count, PROGRESS
from .export import header_lines, write_csv, write_text, export_table
