"""Command-line front end.

    cuspcob stems    [--format text|json] [--stems-file F]
    cuspcob page     --r R [--localization integral|odd|3] [--jmax J]
    cuspcob groups   --which primfold|primcusp3|cuspcob --n N
    cuspcob verify   --appendix 1|2 [--r R] [--samples N] [--seed S]

Exit codes: 0 success, 1 a verification check failed, 2 bad input or
configuration (unreadable stems file, out-of-range degree, a page that
needs an undetermined differential).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import ss_engine, verify
from .fga import Localization
from .stems import (
    GREEK,
    STEMS_ENV,
    OutOfRange,
    StemTable,
    StemTableError,
    bundled_stems_path,
    load_stem_table,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
LOCALIZATIONS = ("integral", "odd", "3")


@dataclass
class RunConfig:
    command: str
    stems_file: str | None = None
    jmax: int = 3
    localization: str = "integral"
    format: str = "text"
    seed: int = 0
    r: int | None = None
    n: int | None = None
    which: str | None = None
    appendix: int | None = None
    samples: int = 20

    def __post_init__(self):
        if not 1 <= self.jmax <= ss_engine.JMAX_LIMIT:
            raise ValueError(f"--jmax must lie in [1, {ss_engine.JMAX_LIMIT}], got {self.jmax}")
        if self.localization not in LOCALIZATIONS:
            raise ValueError(f"unknown localization {self.localization!r}")

    def stems_path(self) -> Path:
        return Path(self.stems_file or os.environ.get(STEMS_ENV) or bundled_stems_path())

    def table(self) -> StemTable:
        path = self.stems_path()
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise StemTableError(f"cannot read stems file {path}: {exc.strerror}") from None
        return load_stem_table(data)


def _pretty(name: str) -> str:
    """``eta2`` → ``η²``, ``eta_sigma`` → ``ησ``, ``alpha1`` → ``α₁``."""
    out = []
    for part in name.split("_"):
        if part in GREEK:
            out.append(GREEK[part])
        elif part[-1:].isdigit() and part.rstrip("0123456789") in GREEK:
            base = part.rstrip("0123456789")
            out.append(GREEK[base] + part[len(base):].translate(str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")))
        else:
            out.append(part)
    return "".join(out)


def render_stems(table: StemTable) -> str:
    degrees = range(table.max_degree + 1)
    rows = [
        ["n"] + [str(n) for n in degrees],
        ["π^s(n)"] + [table.stem(n).label() for n in degrees],
        ["generators"] + [",".join(_pretty(g) for g in table.stem(n).generators) for n in degrees],
        ["(π^s(n))₃"] + [table.three_primary_label(n) for n in degrees],
    ]
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    lines = []
    for idx, r in enumerate(rows):
        lines.append(" | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if idx < len(rows) - 1:
            lines.append("-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(obj: dict | str, cfg: RunConfig) -> None:
    if isinstance(obj, dict):
        sys.stdout.write(json.dumps(obj, ensure_ascii=False, indent=1) + "\n")
    else:
        sys.stdout.write(obj + "\n")


def cmd_stems(cfg: RunConfig) -> int:
    table = cfg.table()
    _emit(table.to_json() if cfg.format == "json" else render_stems(table), cfg)
    return EXIT_OK


def cmd_page(cfg: RunConfig) -> int:
    table = cfg.table()
    loc = Localization.parse(cfg.localization)
    p = ss_engine.page(cfg.r, cfg.jmax, table, loc)
    _emit(p.to_json() if cfg.format == "json" else p.render(), cfg)
    return EXIT_OK


def cmd_groups(cfg: RunConfig) -> int:
    table = cfg.table()
    n = cfg.n
    if cfg.which == "primfold":
        rep = ss_engine.prim_fold_group(n, table)
        if cfg.format == "json":
            out = {"schema": "1", "which": "primfold", "n": n,
                   "integral": rep.integral.to_json(), "odd": rep.odd.to_json()}
        else:
            out = "\n".join([
                f"Prim Σ^{{1,0}}({n + 1})",
                "integral:", _indent(rep.integral.render()),
                "odd part:", _indent(rep.odd.render()),
            ])
    else:
        if cfg.which == "primcusp3":
            ans, title = ss_engine.prim_cusp_3primary(n, table), f"Prim Σ^{{1,1,0}}({n + 1}), 3-primary"
        else:
            ans, title = ss_engine.cusp_cob_sequence(n, table), f"Cob Σ^{{1,1,0}}({n + 1})"
        if cfg.format == "json":
            out = dict(ans.to_json(), which=cfg.which)
        else:
            out = title + "\n" + _indent(ans.render())
    _emit(out, cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.appendix == 1:
        report = verify.verify_appendix1()
    else:
        r = 4 if cfg.r is None else cfg.r
        if r < 1:
            raise ValueError("--r must be at least 1")
        report = verify.verify_appendix2(r=r, samples=cfg.samples, seed=cfg.seed)
    _emit(report.to_json() if cfg.format == "json" else report.render(), cfg)
    return EXIT_OK if report.passed else EXIT_FAIL


def _indent(text: str) -> str:
    return "\n".join("  " + line if line else line for line in text.splitlines())


COMMANDS = {"stems": cmd_stems, "page": cmd_page, "groups": cmd_groups, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--stems-file", default=None,
                        help=f"stems table JSON (default: ${STEMS_ENV} or the bundled table)")

    parser = argparse.ArgumentParser(prog="cuspcob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("stems", parents=[common], help="print the stable stems table")

    p = sub.add_parser("page", parents=[common], help="compute a page of the prim spectral sequence")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--localization", choices=LOCALIZATIONS, default="integral")
    p.add_argument("--jmax", type=int, default=3)

    g = sub.add_parser("groups", parents=[common], help="assemble a cobordism group")
    g.add_argument("--which", choices=("primfold", "primcusp3", "cuspcob"), required=True)
    g.add_argument("--n", type=int, required=True)

    v = sub.add_parser("verify", parents=[common], help="run the exact symbolic checks")
    v.add_argument("--appendix", type=int, choices=(1, 2), required=True)
    v.add_argument("--r", type=int, default=None)
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None or k == "r"})
        if cfg.samples < 0:
            raise ValueError("--samples must be nonnegative")
        return COMMANDS[cfg.command](cfg)
    except (StemTableError, OutOfRange, ss_engine.IndeterminateDifferential, ValueError) as exc:
        print(f"cuspcob: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
