"""Serialise analysis reports as JSON or plain text.

Both encodings are deterministic: fixed key order, no timestamps, floats in
shortest round-trip form.
"""

from __future__ import annotations

import json

from .pipeline import VERDICTS

FORMATS = ("json", "text")


def emit(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, indent=2, allow_nan=False) + "\n").encode()
    if fmt == "text":
        return _text(report).encode()
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _complex(re: float, im: float) -> str:
    # repr of a complex is the shortest round-trip form of both parts
    return repr(complex(re, im))


def _text(report: dict) -> str:
    inp, clo, summ = report["input"], report["closure"], report["summary"]
    lines = [
        f"{report['schema']}  {inp['name']}  dim={inp['dim']}  "
        f"generators={inp['generators']}  digest={inp['digest'][:16]}",
        f"closure: {clo['status']}, {clo['size']} elements, "
        f"longest word {clo['max_word_length']}",
    ]
    width = max((len(c["check"]) for c in report["checks"]), default=0)
    for c in report["checks"]:
        lines.append(f"[{c['verdict'].upper():<12}] {c['check']:<{width}}  {c['detail']}")
        if c["witness"] is not None:
            lines.append("    witness:")
            for row in c["witness"]:
                lines.append("      " + "  ".join(_complex(re, im) for re, im in row))
    counts = ", ".join(f"{summ[v]} {v}" for v in VERDICTS if summ[v])
    lines.append(f"summary: {counts or 'no checks run'}; exit {summ['exit_code']}")
    return "\n".join(lines) + "\n"
