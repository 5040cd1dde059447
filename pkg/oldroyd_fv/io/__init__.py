"""
Input/output module.

- config: INI run configuration (parse, validate, serialize)
- writers: snapshots, diagnostics CSV, bounds CSV and verdict JSON
"""

from .config import (
    RunConfig,
    SCHEMA,
    OUT_DIR_ENV,
    parse_config,
    serialize,
    load_config,
    validate,
)
from .writers import (
    SnapshotBlock,
    SnapshotWriter,
    snapshot_name,
    write_snapshot,
    read_snapshot,
    snapshot_to_state,
    write_diagnostics,
    read_diagnostics,
    write_bounds,
    write_verdict,
)

__all__ = [
    'RunConfig', 'SCHEMA', 'OUT_DIR_ENV', 'parse_config', 'serialize', 'load_config', 'validate',
    'SnapshotBlock', 'SnapshotWriter', 'snapshot_name', 'write_snapshot', 'read_snapshot',
    'snapshot_to_state', 'write_diagnostics', 'read_diagnostics', 'write_bounds', 'write_verdict',
]
