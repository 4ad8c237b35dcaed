"""Command line driver: ``pacert build|sweep|verify|ledger|words``.

Exit codes: 0 pass, 1 a checked claim failed, 2 usage or domain error,
3 inconclusive (budget exhausted or bracket too wide).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import spectral, volume, words
from .bounds import lift_bound
from .spine import DomainError, f3_matrix
from .sweep import SweepConfig, run_sweep, write_outputs
from .twist import LocalBlock, TwistWord, local_block, splice

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _emit(verdict: dict, out: str | None) -> None:
    text = json.dumps(verdict, indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def cmd_build(args) -> int:
    text = f3_matrix(args.n, args.m).to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def cmd_sweep(args) -> int:
    config = SweepConfig.load(args.config)
    if args.workers is not None:
        config.workers = args.workers
    result = run_sweep(config)
    base = Path(args.out_dir) if args.out_dir else Path(args.config).resolve().parent
    base.mkdir(parents=True, exist_ok=True)
    written = write_outputs(result, config, base)
    summary = result.summary()
    for k, n_emp in summary["N_emp"].items():
        print(f"k={k}: N_emp={n_emp}")
    print(json.dumps(written, sort_keys=True))
    errors = [r for r in result.rows if r.verdict == "error"]
    return EXIT_INCONCLUSIVE if errors else EXIT_PASS


def _verify_pf(args) -> tuple[int, dict]:
    corpus = spectral.random_corpus(args.seed, args.count)
    worst = "pass"
    records = []
    for idx, T in enumerate(corpus):
        rep = spectral.verify_pf_proposition(T, args.l_max, Fraction(args.tol))
        records.append({"index": idx, "dim": T.dim, "status": rep.status,
                        "tightest_l": rep.tightest.l})
        if rep.status == "violation":
            worst = "violation"
        elif rep.status == "inconclusive" and worst == "pass":
            worst = "inconclusive"
    code = {"pass": EXIT_PASS, "violation": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[worst]
    return code, {"suite": "pf", "status": worst, "matrices": records}


def _verify_locality(args) -> tuple[int, dict]:
    n = args.n or 52
    l = args.l if args.l is not None else n // 13
    if l < 1:
        raise DomainError("path length l must be >= 1")
    H = local_block(TwistWord.standard(args.twist_k, args.exponent))
    cm = splice(f3_matrix(n, n), n, H)
    rep = spectral.path_locality_check(cm, l)
    code = {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(rep.status, EXIT_INCONCLUSIVE)
    return code, {"suite": "locality", **rep.to_dict()}


def _verify_conjugation(args) -> tuple[int, dict]:
    if args.i is not None and args.k is not None:
        n, m = args.n or 12, args.m or args.n or 12
        res = words.verify_conjugation(n, m, args.i, args.k)
        trace_path = args.trace_out or f"conjugation_n{n}_m{m}_i{args.i}_k{args.k}.txt"
        Path(trace_path).write_text(res.trace_text(), encoding="utf-8")
        verdict = {"suite": "conjugation", "status": "pass" if res.passed else "fail",
                   "n": n, "m": m, "i": args.i, "k": args.k, "steps": res.steps,
                   "trace": trace_path}
        return (EXIT_PASS if res.passed else EXIT_FAIL), verdict
    failed = []
    total = 0
    for n in ([args.n] if args.n else [12, 20]):
        for i, k in words.legal_conjugations(n):
            total += 1
            if not words.verify_conjugation(n, args.m or n, i, k).passed:
                failed.append([n, i, k])
    return (EXIT_FAIL if failed else EXIT_PASS), {
        "suite": "conjugation", "status": "fail" if failed else "pass",
        "checked": total, "failed": failed}


def _verify_ledger(args) -> tuple[int, dict]:
    problems = []
    v8 = volume.octahedron_constant()
    if v8.width > Fraction(1, 10**12) or not volume.V8_REFERENCE.contains_interval(v8):
        problems.append("V8 enclosure")
    for k in range(1, 101):
        b, d, f = volume.block_volume(k), volume.drilled_lower_bound(k), volume.filled_lower_bound(k)
        if (b.coeff, d.coeff, f.coeff) != (4 * k, 4 * k, 3 * k) or f.coeff + k != d.coeff:
            problems.append(f"coefficients at k={k}")
        for deg in (1, 2, 7):
            if volume.lifted_lower_bound(k, deg).coeff != 3 * k * deg:
                problems.append(f"lift at k={k}, deg={deg}")
    for g in (2, 3, 4):
        for n in (100, 200):
            if not lift_bound(g, n, n).holds:
                problems.append(f"lift chain g={g}, n={n}")
    return (EXIT_FAIL if problems else EXIT_PASS), {
        "suite": "ledger", "status": "fail" if problems else "pass", "problems": problems,
        "constants": volume.constants_table()}


def cmd_verify(args) -> int:
    runner = {"pf": _verify_pf, "locality": _verify_locality,
              "conjugation": _verify_conjugation, "ledger": _verify_ledger}[args.suite]
    code, verdict = runner(args)
    verdict["exit_code"] = code
    _emit(verdict, args.out)
    return code


def cmd_ledger(args) -> int:
    text = volume.ledger_json(args.k_max, args.bits)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def cmd_words(args) -> int:
    w = words.MCGWord.parse(args.word)
    canon = words.commute_if_disjoint(w, args.n, args.m)
    perm = words.puncture_action(w, args.n, args.m)
    out = {"word": str(w), "canonical": str(canon), "action": words.cycle_string(perm),
           "fixed": words.fixed_points(perm)}
    if args.slopes:
        sa = volume.surgery_correspondence(TwistWord.parse(args.slopes))
        out["slopes"] = [str(s) for s in sa.slopes]
        out["boundaries"] = [str(b) for b in sa.boundaries]
    print(json.dumps(out, indent=1))
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pacert", allow_abbrev=False, description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write the f^3 transition matrix as JSON", allow_abbrev=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sweep", help="certified sweep over n = m and k", allow_abbrev=False)
    p.add_argument("--config", required=True, help="flat key = value config file")
    p.add_argument("--out-dir", help="directory for outputs (default: next to the config)")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run one verification suite", allow_abbrev=False)
    p.add_argument("suite", choices=["pf", "locality", "conjugation", "ledger"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--twist-k", type=int, default=2)
    p.add_argument("--exponent", type=int, default=10)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--l-max", type=int, default=6)
    p.add_argument("--tol", default="1/1000000000")
    p.add_argument("--trace-out")
    p.add_argument("--out", help="also write the JSON verdict here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ledger", help="export the volume ledger", allow_abbrev=False)
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--bits", type=int, default=volume.DEFAULT_BITS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("words", help="canonical form and puncture action of a word", allow_abbrev=False)
    p.add_argument("--word", required=True, help='e.g. "q h@5 p f^3"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--slopes", help='twist word such as "a^3 b^5" to map to filling slopes')
    p.set_defaults(func=cmd_words)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"pacert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
