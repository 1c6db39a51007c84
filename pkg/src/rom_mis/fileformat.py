"""Line-oriented text format for instances.

::

    # optional comment lines; "# planted_opt <int>" is read back
    d n [K]
    lo_1 hi_1 ... lo_d hi_d                              (box rows: 2d columns)
    lo_1 hi_1 ... lo_d hi_d sigma ilo_1 ihi_1 ...        (sigma rows: 4d+1 columns)

Every number is an exact rational written as ``p`` or ``p/q``.  Writing what
was read reproduces the file byte for byte when it was produced by
:func:`format_instance`.
"""
from __future__ import annotations

import io
from pathlib import Path
from typing import TextIO

from .geometry import HyperRect, Instance, SigmaObject, coord, format_coord

HEADER_COMMENT = "# rom-mis instance v1"


def format_instance(inst: Instance) -> str:
    out = io.StringIO()
    write_instance(inst, out)
    return out.getvalue()


def write_instance(inst: Instance, fh: TextIO) -> None:
    fh.write(HEADER_COMMENT + "\n")
    if inst.planted_opt is not None:
        fh.write(f"# planted_opt {inst.planted_opt}\n")
    head = [str(inst.dim), str(inst.n)]
    if inst.declared_K is not None:
        head.append(format_coord(inst.declared_K))
    fh.write(" ".join(head) + "\n")
    for obj in inst.objects:
        if isinstance(obj, SigmaObject):
            cols = _box_cols(obj.out_box) + [format_coord(obj.sigma)] + _box_cols(obj.in_box)
        else:
            cols = _box_cols(obj)
        fh.write(" ".join(cols) + "\n")


def _box_cols(h: HyperRect) -> list:
    cols = []
    for a, b in zip(h[0], h[1]):
        cols.append(format_coord(a))
        cols.append(format_coord(b))
    return cols


def _parse_box(tokens: list) -> HyperRect:
    vals = [coord(t) for t in tokens]
    return HyperRect(vals[0::2], vals[1::2])


def parse_instance(text: str) -> Instance:
    planted = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            parts = stripped[1:].split()
            if len(parts) == 2 and parts[0] == "planted_opt":
                planted = int(parts[1])
            continue
        rows.append((lineno, stripped.split()))
    if not rows:
        raise ValueError("empty instance file")
    _, head = rows[0]
    if len(head) not in (2, 3):
        raise ValueError(f"header must be 'd n [K]', got {' '.join(head)!r}")
    d, n = int(head[0]), int(head[1])
    K = coord(head[2]) if len(head) == 3 else None
    body = rows[1:]
    if len(body) != n:
        raise ValueError(f"header announces {n} objects, file has {len(body)}")
    objects = []
    for lineno, toks in body:
        if len(toks) == 2 * d:
            objects.append(_parse_box(toks))
        elif len(toks) == 4 * d + 1:
            objects.append(SigmaObject(_parse_box(toks[:2 * d]), _parse_box(toks[2 * d + 1:]), coord(toks[2 * d])))
        else:
            raise ValueError(f"line {lineno}: expected {2 * d} or {4 * d + 1} columns, got {len(toks)}")
    kinds = {isinstance(o, SigmaObject) for o in objects}
    if len(kinds) > 1:
        raise ValueError("instance mixes boxes and sigma objects")
    return Instance(d, objects, declared_K=K, planted_opt=planted)


def read_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(format_instance(inst))
