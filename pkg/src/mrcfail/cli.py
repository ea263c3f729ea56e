"""Command-line entry point: ``mrcfail <command> ...``.

Every command first prints a ``#`` header line listing its resolved flags.
Exit status: 0 on success, 1 when a check or computation fails, 2 on usage
or input-format errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bgg, mrc
from . import exactfield as ef
from .betti import (BettiTable, WindowError, betti_table, betti_via_duality, rational_normal_module,
                    tor_dimension)
from .points import (GaleUndefinedError, GenerationError, PairingTensor, PointConfiguration,
                     gale_transform, is_lgp, quotient_module_presentation, random_lgp_config)


class UsageError(Exception):
    pass


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}")
    return a, b


def _strip_comments(text: str) -> str:
    return "\n".join(ln for ln in text.splitlines() if not ln.startswith("#")) + "\n"


def _read(path: str) -> str:
    try:
        return _strip_comments(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _read_points(path: str) -> PointConfiguration:
    try:
        return PointConfiguration.from_text(_read(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}")


def _read_tensor(path: str) -> PairingTensor:
    try:
        return PairingTensor.from_text(_read(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def header(args) -> str:
    skip = {"func"}
    parts = [args.command] + ([args.action] if getattr(args, "action", None) else [])
    for key, value in sorted(vars(args).items()):
        if key in skip or key in ("command", "action") or value is None or value is False:
            continue
        if isinstance(value, tuple):
            value = ",".join(map(str, value))
        parts.append(f"{key}={value}")
    return "# mrcfail " + " ".join(parts)


# ---------------------------------------------------------------------------
# commands


def cmd_points(args) -> int:
    if args.action == "gen":
        if args.r is None or args.gamma is None:
            raise UsageError("points gen needs --r and --gamma")
        config = random_lgp_config(args.r, args.gamma, args.prime, args.seed, check=args.check)
        _emit(config.to_text(), args.out)
        return 0
    if not args.file:
        raise UsageError("points check needs a points file")
    config = _read_points(args.file)
    ok = config.distinct() and is_lgp(config, args.check)
    print(f"lgp={'true' if ok else 'false'}")
    return 0 if ok else 1


def cmd_gale(args) -> int:
    config = _read_points(args.file)
    g = gale_transform(config)
    checksum = int(ef.matmul(config.coords, g.coords.T, config.p).any())
    print(f"s={g.r} gamma={g.gamma} MN_nonzero={checksum}")
    if args.verify:
        back = gale_transform(g)
        same = ef.row_space_equal(back.coords, config.coords, config.p)
        print(f"roundtrip_row_space_equal={'true' if same else 'false'}")
        if not same:
            return 1
    _emit(g.to_text(), args.out)
    return 0 if checksum == 0 else 1


def cmd_betti(args) -> int:
    if (args.entry is None) == (args.table is None):
        raise UsageError("give exactly one of --entry i,j or --table imax,jmax")
    if (args.file is None) == (args.rational_normal is None):
        raise UsageError("give a points file or --rational-normal DEGREE")
    if args.rational_normal is not None:
        if args.via == "dual":
            raise UsageError("--via dual needs a points file")
        top = (args.entry or args.table)[1] + 2
        M = rational_normal_module(args.rational_normal, 0, top, args.prime)
        r = args.rational_normal
        config = None
    else:
        config = _read_points(args.file)
        r = config.r
        top = (args.entry or args.table)[1] + 2
        M = quotient_module_presentation(config, (0, top)) if args.via == "direct" else None
    if args.entry is not None:
        i, j = args.entry
        value = tor_dimension(M, i, j) if M is not None else betti_via_duality(config, i, j)
        print(f"betti r={r}")
        print(f"{i} {j} {value} computed")
        return 0
    imax, jmax = args.table
    if M is not None:
        table = betti_table(M, imax, jmax)
    else:
        table = BettiTable(r)
        for i in range(0, min(imax, r + 1) + 1):
            for j in range(i, jmax + 1):
                table.set(i, j, betti_via_duality(config, i, j))
    sys.stdout.write(table.to_text())
    sys.stdout.write(table.diagram())
    return 0


def _generic_mode(mu: PairingTensor, mode: str | None) -> str:
    if mode:
        return mode
    q_points = (mu.p ** mu.u - 1) // (mu.p - 1)
    return "exhaustive:1" if q_points <= 10**5 else "monte-carlo:1000"


def cmd_bgg(args) -> int:
    if args.action == "example":
        makers = {
            "binary-quadrics": lambda: bgg.binary_form_tensor(2, 2, args.prime),
            "identity": lambda: bgg.identity_tensor(args.w, args.u, args.prime),
            "zero-slice": lambda: zero_slice_tensor(args.w, args.u, args.prime),
        }
        _emit(makers[args.kind]().to_text(), args.out)
        return 0
    if not args.file:
        raise UsageError(f"bgg {args.action} needs a tensor file")
    mu = _read_tensor(args.file)
    F = bgg.build_F_mu_direct(mu)
    print("F: " + " ".join(map(str, F.ranks)))
    if args.action == "fmu":
        same = F.same_as(bgg.build_F_mu_via_Q(mu))
        print(f"squares_to_zero: {str(F.squares_to_zero()).lower()}")
        print(f"matches_Q_construction: {str(same).lower()}")
        return 0 if same else 1
    if args.action == "irred":
        print(f"irredundant: {str(bgg.is_irredundant(F)).lower()}")
        if F.length >= 1:
            print(f"strand_H1_degree1: {bgg.strand_homology(F, 1, 1)}")
        mode = _generic_mode(mu, args.mode)
        print(f"one_generic: {str(bgg.is_one_generic(mu, mode, seed=args.seed)).lower()} ({mode})")
        return 0
    Fg = bgg.max_irredundant_quotient_generation(F)
    Fa = bgg.max_irredundant_quotient_annihilator(F)
    print("F': " + " ".join(map(str, Fg.ranks)))
    print(f"constructions_agree: {str(Fg.ranks == Fa.ranks).lower()}")
    print(f"last_term_preserved: {str(bgg.last_term_preserved(mu)).lower()}")
    return 0


def zero_slice_tensor(w: int, u: int, p: int) -> PairingTensor:
    """Identity pairing with the first W basis vector sent to zero."""
    e = np.eye(w * u, dtype=np.int64).reshape(w, u, w * u)
    e[0] = 0
    return PairingTensor(p, e)


def cmd_mrc(args) -> int:
    if args.action == "verify":
        if args.s is None or args.delta is None:
            raise UsageError("mrc verify needs --s and --delta")
        rep = mrc.verify_counterexample(args.s, args.delta, args.prime, args.seed,
                                        check=args.check, full_table=args.full_table)
        sys.stdout.write(rep.to_text())
        return 0 if rep.verdict == mrc.CONFIRMED else 1
    if args.action == "expected":
        if args.r is None or args.gamma is None:
            raise UsageError("mrc expected needs --r and --gamma")
        table = mrc.expected_betti(args.r, args.gamma)
        sys.stdout.write(table.to_text())
        sys.stdout.write(table.diagram())
        return 0
    if args.action == "range":
        if args.r is None:
            raise UsageError("mrc range needs --r")
        print("gamma=" + ",".join(map(str, mrc.gamma_range(args.r))))
        return 0
    rows = mrc.scan(args.smax)
    strict = 0
    for row in rows:
        if row.strict:
            strict += 1
        if row.strict or args.all:
            mark = "STRICT" if row.strict else "-"
            print(f"s={row.s} delta={row.delta} lower_bound={row.lower_bound} "
                  f"expected={row.expected} {mark}")
    mismatched = sum(row.strict != row.in_theorem for row in rows)
    print(f"rows={len(rows)} strict={strict} outside_theorem_range={mismatched}")
    return 0 if mismatched == 0 else 1


def cmd_curve(args) -> int:
    sys.stdout.write(mrc.curve_arithmetic(args.g, args.d).to_text())
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrcfail", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--prime", type=int, default=ef.DEFAULT_PRIME)
        if seed:
            p.add_argument("--seed", type=int, default=1)

    p = sub.add_parser("points", help="generate or check point configurations")
    p.add_argument("action", choices=["gen", "check"])
    p.add_argument("file", nargs="?")
    p.add_argument("--r", type=int)
    p.add_argument("--gamma", type=int)
    p.add_argument("--check", help="exhaustive or sampled:N (default: by subset count)")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("gale", help="Gale transform of a points file")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_gale)

    p = sub.add_parser("betti", help="graded Betti numbers of S/I for points")
    p.add_argument("file", nargs="?")
    p.add_argument("--rational-normal", type=int, metavar="DEGREE")
    p.add_argument("--entry", type=_pair)
    p.add_argument("--table", type=_pair)
    p.add_argument("--via", choices=["direct", "dual"], default="direct")
    common(p, seed=False)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("bgg", help="complexes F(μ) from a pairing tensor")
    p.add_argument("action", choices=["fmu", "irred", "quotient", "example"])
    p.add_argument("file", nargs="?")
    p.add_argument("--mode", help="exhaustive:e or monte-carlo:N")
    p.add_argument("--kind", choices=["binary-quadrics", "identity", "zero-slice"],
                   default="binary-quadrics")
    p.add_argument("--w", type=int, default=2)
    p.add_argument("--u", type=int, default=2)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_bgg)

    p = sub.add_parser("mrc", help="minimal resolution conjecture checks")
    p.add_argument("action", choices=["verify", "expected", "range", "scan"])
    p.add_argument("--s", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--gamma", type=int)
    p.add_argument("--smax", type=int, default=40)
    p.add_argument("--all", action="store_true", help="scan: print every row")
    p.add_argument("--check")
    p.add_argument("--full-table", action="store_true")
    common(p)
    p.set_defaults(func=cmd_mrc)

    p = sub.add_parser("curve", help="Betti bounds for general curves")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_curve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    print(header(args))
    sys.stdout.flush()
    try:
        return args.func(args)
    except (WindowError, GaleUndefinedError, GenerationError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

if __name__ == "__main__":
    sys.exit(main())
