"""Python access to the hodg solver and tools."""

from ._core import (
    HodgError,
    Mesh,
    bandwidth,
    count_flops_and_bytes,
    count_sloc,
    divergence,
    dual_phase,
    export_spy,
    format_mesh,
    generate_mesh,
    load_mesh,
    min_reduce,
    pairwise_distance,
    parse_mesh,
    rcm_order,
    rdtp,
    renumber,
    resolved_config,
    roofline_attainable,
    roofline_csv,
    run,
    run_file,
    set_workers,
    workers,
    write_mesh,
)

__all__ = [
    "HodgError",
    "Mesh",
    "bandwidth",
    "count_flops_and_bytes",
    "count_sloc",
    "divergence",
    "dual_phase",
    "export_spy",
    "format_mesh",
    "generate_mesh",
    "load_mesh",
    "min_reduce",
    "pairwise_distance",
    "parse_mesh",
    "rcm_order",
    "rdtp",
    "renumber",
    "resolved_config",
    "roofline_attainable",
    "roofline_csv",
    "run",
    "run_file",
    "set_workers",
    "workers",
    "write_mesh",
]
