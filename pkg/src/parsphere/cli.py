"""Command-line front end.

Exit status: 0 on success, 1 on invalid input, 2 when an algebraic check or
internal consistency test fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from parsphere import __version__, checks, epr, mobius, s7
from parsphere.errors import ConsistencyError, DomainError
from parsphere.records import CSV_FIELDS, ESTIMATORS
from parsphere.stats import LambdaDistribution

SEED_ENV = "PARSPHERE_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_angles(spec: str) -> list[float]:
    """``start:stop:step`` (stop inclusive), a comma list, or a single value, in degrees."""
    spec = spec.strip()
    try:
        if ":" in spec:
            start, stop, step = (float(x) for x in spec.split(":"))
            if step <= 0 or stop < start:
                raise DomainError(f"bad angle grid {spec!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + k * step for k in range(count)]
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"cannot parse angles {spec!r}") from None


def parse_points(spec: str) -> list[list[float]]:
    points = []
    for chunk in spec.split(";"):
        if not chunk.strip():
            continue
        try:
            v = [float(x) for x in chunk.replace(",", " ").split()]
        except ValueError:
            raise DomainError(f"cannot parse point {chunk!r}") from None
        if len(v) != 3:
            raise DomainError(f"point {chunk!r} needs 3 components")
        points.append(v)
    return points


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        env = os.environ.get(SEED_ENV)
        if env is None:
            raise DomainError(f"a seed is required (--seed or ${SEED_ENV})")
        try:
            seed = int(env)
        except ValueError:
            raise DomainError(f"${SEED_ENV} is not an integer: {env!r}") from None
    if not 0 <= seed < 2**64:
        raise DomainError("seed must be an unsigned 64-bit integer")
    return seed


def _check_n(n: int) -> int:
    if n < 1:
        raise DomainError(f"--n must be >= 1, got {n}")
    return n


def _check_domain(angles: list[float], lo: float, hi: float) -> list[float]:
    if not angles:
        raise DomainError("no angles given")
    for t in angles:
        if not lo <= t <= hi:
            raise DomainError(f"angle {t} outside [{lo}, {hi}] degrees")
    return angles


def render_table(rows: Sequence[dict], fmt: str, metadata: dict) -> str:
    if fmt == "json":
        return json.dumps({"metadata": metadata, "rows": list(rows)}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_simulate_epr(args) -> int:
    seed = _resolve_seed(args.seed)
    n = _check_n(args.n)
    angles = _check_domain(parse_angles(args.angles), 0.0, 180.0)
    dist = LambdaDistribution(args.lambda_mean)
    if dist.degenerate:
        raise DomainError("--lambda-mean must satisfy |lambda_mean| < 1")
    estimators = ESTIMATORS if args.estimator == "both" else (args.estimator,)
    a = np.array([1.0, 0.0, 0.0])
    rows, discrepancy = [], False
    for k, theta in enumerate(angles):
        res = epr.run_epr(
            a, epr.direction_in_plane(theta), n=n, seed=seed, dist=dist, theta_deg=theta, stream=k, workers=args.workers
        )
        if abs(res.coincidence.estimate - res.standard_score.estimate) > 5.0 * res.coincidence.stderr:
            discrepancy = True
        rows.extend(res.record(e).as_row() for e in estimators)
    metadata = {
        "command": "simulate-epr",
        "version": __version__,
        "seed": seed,
        "n": n,
        "lambda_mean": dist.mean_lambda,
        "estimators": list(estimators),
        "estimator_discrepancy": discrepancy,
        "estimator_discrepancy_note": epr.RAW_SCORE_DISCREPANCY,
    }
    _emit(render_table(rows, args.format, metadata), args.output)
    return 0


def cmd_simulate_mobius(args) -> int:
    seed = _resolve_seed(args.seed)
    n = _check_n(args.n)
    angles = _check_domain(parse_angles(args.angles), 0.0, 180.0)
    rows = []
    for k, eta_deg in enumerate(angles):
        rec = mobius.simulate_mobius(math.radians(eta_deg), n, seed, stream=k, workers=args.workers)
        row = rec.as_row()
        row["theta_deg"] = eta_deg
        rows.append(row)
    metadata = {"command": "simulate-mobius", "version": __version__, "seed": seed, "n": n}
    _emit(render_table(rows, args.format, metadata), args.output)
    return 0


def cmd_chsh(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.restarts < 1:
        raise DomainError("--restarts must be >= 1")
    quad, value = epr.chsh_maximize(args.restarts, seed)
    bound = epr.chsh_bound(quad)
    result = {
        "a": list(quad.a),
        "a_prime": list(quad.a_prime),
        "b": list(quad.b),
        "b_prime": list(quad.b_prime),
        "value": value,
        "bound": bound,
        "tsirelson_gap": abs(value - epr.TSIRELSON),
        "restarts": args.restarts,
        "seed": seed,
    }
    if args.format == "json":
        text = json.dumps(result, indent=2) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in result.items())
    _emit(text, args.output)
    return 0


def cmd_s7_decompose(args) -> int:
    if args.points_file:
        spec = Path(args.points_file).read_text(encoding="utf-8").replace("\n", ";")
    elif args.points:
        spec = args.points
    else:
        raise DomainError("give --points or --points-file")
    directions = parse_points(spec)
    scheme = s7.load_embedding_table(args.embedding_table) if args.embedding_table else args.scheme
    points = [s7.standard_score_7(a, args.lam, scheme) for a in directions]
    dec = s7.product_decompose(points, args.association)
    result = {
        "f": dec.f,
        "g": dec.g,
        "axis": list(dec.axis) if dec.axis is not None else None,
        "norm_residual": dec.norm_residual,
        "association": dec.association,
        "lambda": args.lam,
    }
    if args.expectation:
        seed = _resolve_seed(args.seed)
        dist = LambdaDistribution(args.lambda_mean, len(directions))
        lr = s7.expectation_LR(
            directions, dist, _check_n(args.n), seed, scheme=scheme, association=args.association, workers=args.workers
        )
        result.update(
            E=lr.E,
            first_term=lr.first_term,
            second_term_magnitude=lr.second_term_magnitude,
            rho_integral=lr.rho_integral,
            n=lr.n,
            seed=seed,
        )
    if args.format == "json":
        text = json.dumps(result, indent=2) + "\n"
    else:
        text = "".join(f"{k}: {v}\n" for k, v in result.items())
    _emit(text, args.output)
    return 0


def cmd_check_algebra(args) -> int:
    results = checks.run_all()
    width = max(len(r.name) for r in results)
    lines = [f"{r.name:<{width}}  max_residual={r.residual:.3e}  tol={r.tol:.0e}  {'PASS' if r.passed else 'FAIL'}" for r in results]
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="parsphere", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, table=True):
        sp.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV})")
        sp.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
        sp.add_argument("--workers", type=int, default=1, help="threads for the Monte Carlo blocks")
        sp.add_argument("--format", choices=("csv", "json") if table else ("text", "json"), default="csv" if table else "text")

    sp = sub.add_parser("check-algebra", help="run the exact algebraic identity checks")
    sp.add_argument("--output", "-o", default=None)
    sp.set_defaults(func=cmd_check_algebra)

    sp = sub.add_parser("simulate-epr", help="3-sphere correlation table")
    sp.add_argument("--angles", default="0:180:10")
    sp.add_argument("--n", type=int, default=100_000)
    sp.add_argument("--estimator", choices=("both",) + ESTIMATORS, default="both")
    sp.add_argument("--lambda-mean", type=float, default=0.0)
    common(sp)
    sp.set_defaults(func=cmd_simulate_epr)

    sp = sub.add_parser("simulate-mobius", help="Moebius-strip correlation table (angles are eta)")
    sp.add_argument("--angles", default="0:180:10")
    sp.add_argument("--n", type=int, default=100_000)
    common(sp)
    sp.set_defaults(func=cmd_simulate_mobius)

    sp = sub.add_parser("chsh", help="maximize the CHSH string")
    sp.add_argument("--restarts", type=int, default=20)
    common(sp, table=False)
    sp.set_defaults(func=cmd_chsh)

    sp = sub.add_parser("s7-decompose", help="product of 7-sphere standard scores")
    sp.add_argument("--points", help="directions as 'x,y,z;x,y,z;...'")
    sp.add_argument("--points-file", help="file with one 'x y z' direction per line")
    sp.add_argument("--scheme", default="fiber(1)", help="axis or fiber(k), k = 1..7")
    sp.add_argument("--embedding-table", help="custom 'a_x a_y a_z : N_1 ... N_7' table")
    sp.add_argument("--lambda", dest="lam", type=int, choices=(-1, 1), default=1)
    sp.add_argument("--association", choices=(s7.LEFT, s7.RIGHT), default=s7.LEFT)
    sp.add_argument("--expectation", action="store_true", help="also run the Monte Carlo expectation over lambda")
    sp.add_argument("--n", type=int, default=100_000)
    sp.add_argument("--lambda-mean", type=float, default=0.0)
    common(sp, table=False)
    sp.set_defaults(func=cmd_s7_decompose)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
