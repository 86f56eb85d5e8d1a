"""Fixed-schema CSV and JSON writers shared by the CLI commands."""

from __future__ import annotations

import csv
import json
import math
import os

SCHEMAS = {
    "sweep_rows": ["function_id", "kind", "input_norm", "output_norm", "ratio", "status", "failed_points"],
    "stability": ["seed", "refinement", "max_ratio", "median_ratio"],
    "weak": ["width", "input_l1", "output_weak", "ratio"],
    "localglobal": ["function_id", "input_norm", "full_norm", "local_norm", "global_norm",
                    "max_partition_error"],
    "delta_exhaustion": ["delta", "global_fraction"],
    "fitted_constants": ["name", "n", "resample", "constant"],
    "traj_ops": ["functional", "parameter", "value"],
}


def _cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("nan" if math.isnan(v) else repr(v))
    return str(v)


def write_csv(path, header, rows) -> str:
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for r in rows:
            if len(r) != len(header):
                raise ValueError(f"row of length {len(r)} does not match header {header}")
            wr.writerow([_cell(v) for v in r])
    return path


def write_table(out_dir, schema: str, rows, name: str | None = None) -> str:
    return write_csv(os.path.join(out_dir, f"{name or schema}.csv"), SCHEMAS[schema], rows)


def write_json(path, obj) -> str:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def write_jsonl(path, records) -> str:
    with open(path, "w") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(o):
    try:
        return float(o)
    except (TypeError, ValueError):
        return str(o)
