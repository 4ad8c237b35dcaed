"""Sweeps of the entropy inequality over ``n = m`` and twist depth ``k``."""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

from .bounds import PASS, empirical_threshold, verify_main_inequality
from .intervals import decimal_down, decimal_up
from .spine import DomainError, f3_matrix
from .twist import LocalBlock, TwistWord, default_splice_index, local_block, splice

CSV_COLUMNS = ("n", "k", "E_k", "N_k", "lambda_lo", "lambda_hi", "log_lambda_hi",
               "bound_54", "pass", "margin")

DIGITS = 20


@dataclass
class SweepConfig:
    n_start: int = 30
    n_stop: int = 300
    n_step: int = 3
    k_list: tuple[int, ...] = (0, 1, 2, 3)
    exponent: int = 10
    H: tuple[tuple[int, ...], ...] | None = None
    tol: Fraction = Fraction(1, 10**6)
    csv: str = "sweep.csv"
    summary: str = "sweep_summary.json"
    plot: str = ""
    tsai_c: Fraction = Fraction(1)
    workers: int = 0

    def __post_init__(self):
        if self.n_step <= 0:
            raise DomainError("n_step must be positive")
        if any(k < 0 for k in self.k_list):
            raise DomainError("k must be nonnegative")
        if self.exponent < 1:
            raise DomainError("twist exponent must be positive")
        self.tol = Fraction(self.tol)
        self.tsai_c = Fraction(self.tsai_c)

    def n_values(self) -> list[int]:
        return list(range(self.n_start, self.n_stop + 1, self.n_step))

    def block_for(self, k: int) -> LocalBlock:
        if k == 0:
            return LocalBlock.identity()
        if self.H is not None:
            return LocalBlock.from_rows(self.H)
        return local_block(TwistWord.standard(k, self.exponent))

    # flat "key = value" text format

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            lines.append(f"{f.name} = {_render(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SweepConfig":
        kw = {}
        names = {f.name for f in fields(cls)}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"config line without '=': {raw!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in names:
                raise DomainError(f"unknown config key {key!r}")
            kw[key] = _parse(key, value)
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "SweepConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def _render(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return ";".join(",".join(str(x) for x in r) for r in value)
        return ",".join(str(x) for x in value)
    return str(value)


def _parse(key: str, value: str):
    if key in ("n_start", "n_stop", "n_step", "exponent", "workers"):
        return int(value)
    if key == "k_list":
        return tuple(int(x) for x in value.split(",") if x.strip())
    if key == "H":
        if not value:
            return None
        return tuple(tuple(int(x) for x in r.split(",")) for r in value.split(";"))
    if key in ("tol", "tsai_c"):
        return Fraction(value)
    return value


def _eligible(n: int) -> bool:
    if n < 7:
        return False
    j = default_splice_index(n)
    return 5 <= j <= n - 5


@dataclass
class SweepRow:
    n: int
    k: int
    E_k: int
    N_k: int
    verdict: str
    lambda_lo: Fraction | None = None
    lambda_hi: Fraction | None = None
    log_lambda_hi: Fraction | None = None
    bound: tuple[Fraction, Fraction] | None = None
    margin: Fraction | None = None
    error: str = ""

    def csv_fields(self) -> list[str]:
        def down(x):
            return "" if x is None else decimal_down(x, DIGITS)

        def up(x):
            return "" if x is None else decimal_up(x, DIGITS)

        bound = "" if self.bound is None else f"[{down(self.bound[0])},{up(self.bound[1])}]"
        return [str(self.n), str(self.k), str(self.E_k), str(self.N_k), down(self.lambda_lo),
                up(self.lambda_hi), up(self.log_lambda_hi), bound, self.verdict, down(self.margin)]


def sweep_cell(n: int, k: int, H: LocalBlock, tol: Fraction) -> SweepRow:
    try:
        cm = splice(f3_matrix(n, n), n, H)
        res = verify_main_inequality(cm, n, tol=tol)
    except Exception as exc:  # recorded per row; the sweep continues
        return SweepRow(n, k, H.E, H.N, "error", error=str(exc))
    rad = res.radius
    return SweepRow(
        n, k, H.E, H.N, res.verdict,
        lambda_lo=rad.lo if rad else None,
        lambda_hi=rad.hi if rad else None,
        log_lambda_hi=res.log_lambda_hi,
        bound=(res.bound.lo, res.bound.hi),
        margin=res.margin,
    )


def _run_cell(args):
    return sweep_cell(*args)


@dataclass
class SweepResult:
    rows: list[SweepRow]
    thresholds: dict[int, int | None] = field(default_factory=dict)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()

    def summary(self) -> dict:
        by_k: dict[int, dict] = {}
        for r in self.rows:
            d = by_k.setdefault(r.k, {"tested": 0, "passed": 0, "failed_n": []})
            d["tested"] += 1
            if r.verdict == PASS:
                d["passed"] += 1
            else:
                d["failed_n"].append(r.n)
        for k, d in by_k.items():
            d["N_emp"] = self.thresholds.get(k)
        return {"N_emp": {str(k): v for k, v in sorted(self.thresholds.items())},
                "per_k": {str(k): by_k[k] for k in sorted(by_k)}}


def run_sweep(config: SweepConfig) -> SweepResult:
    """Evaluate every eligible ``(k, n)`` cell; rows come back ordered by ``(k, n)``."""
    jobs = []
    for k in sorted(set(config.k_list)):
        H = config.block_for(k)
        for n in config.n_values():
            if _eligible(n):
                jobs.append((n, k, H, config.tol))
    workers = config.workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, jobs))
    else:
        rows = [_run_cell(j) for j in jobs]
    thresholds = {}
    for k in sorted(set(config.k_list)):
        cells = [(r.n, r.verdict) for r in rows if r.k == k]
        thresholds[k] = empirical_threshold(cells) if cells else None
    return SweepResult(rows, thresholds)


def write_outputs(result: SweepResult, config: SweepConfig, base: Path | None = None) -> dict:
    base = base or Path(".")
    written = {}
    csv_path = base / config.csv
    csv_path.write_text(result.csv_text(), encoding="utf-8")
    written["csv"] = str(csv_path)
    if config.summary:
        p = base / config.summary
        p.write_text(json.dumps(result.summary(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
        written["summary"] = str(p)
    if config.plot:
        from .plotting import plot_sweep

        p = base / config.plot
        plot_sweep(result.rows, p, tsai_c=config.tsai_c)
        written["plot"] = str(p)
    return written
