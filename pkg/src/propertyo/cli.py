"""Command-line front end.

Subcommands::

    propertyo ball <group> <n>                      growth table / listing
    propertyo kernel <group> <kernel> <x> <y> --n N exact kernel value
    propertyo defect <group> <strategy> <g> --n a..b  Følner defect curve
    propertyo verify <group> <kernel> --E ... --eps p/q   certificate + exit code

Groups are descriptor strings (``free:2``, ``abelian:1``, ``heisenberg``,
``cyclic:7``, ``product:...``), kernels are ``tree`` or ``folner:<strategy>``.
All values print as exact ``p/q`` strings.  ``verify`` exits 0 on PASS, 1 on
FAIL, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from .folner import FolnerProvider
from .groups import (
    DEFAULT_ELEMENT_BUDGET,
    BudgetExceededError,
    GroupModel,
    ModelMismatchError,
    parse_group,
    _split_top_level,
)
from .verify import SampleSpec, make_kernel, rational_str, verify_property_o


@dataclass
class RunConfig:
    """One verification run; mirrors the ``verify`` flags one-to-one."""

    group: str
    kernel: str = "tree"
    E: str = "ball:1"
    eps: str = "1/10"
    nmax: int = 50
    sample_radius: int = 2
    random: int = 0
    seed: int = 0
    budget: int = DEFAULT_ELEMENT_BUDGET
    out: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "group" not in data:
            raise ValueError("config requires a 'group' entry")
        return cls(**data)


def parse_element_list(model: GroupModel, text: str):
    """Elements from ``ball:r`` (identity removed) or ``list:e1,e2,...``."""
    if text.startswith("ball:"):
        radius = int(text.split(":", 1)[1])
        ball = model.ball(radius)
        return tuple(
            sorted((x for x in ball if x != model.identity), key=model.sort_key)
        )
    if text.startswith("list:"):
        parts = _split_top_level(text.split(":", 1)[1], ",")
        return tuple(model.parse_element(p) for p in parts if p.strip())
    raise ValueError(f"bad element set {text!r}; use ball:<r> or list:<e1,e2,...>")


def _parse_range(text: str) -> range:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    n = int(text)
    return range(n, n + 1)


def _emit_table(rows: list[dict], header: list[str], fmt: str, payload: dict) -> None:
    if fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[h] for h in header])
    else:
        print(json.dumps({**payload, "rows": rows}, indent=2))


def cmd_ball(args) -> int:
    model = parse_group(args.group, args.budget)
    rows = []
    for n in range(args.n + 1):
        row = {"n": n, "size": len(model.ball(n))}
        if args.elements:
            row["elements"] = " ".join(
                str(x) for x in sorted(model.ball(n), key=model.sort_key)
            )
        rows.append(row)
    header = ["n", "size"] + (["elements"] if args.elements else [])
    _emit_table(rows, header, args.format, {"group": model.descriptor})
    return 0


def cmd_kernel(args) -> int:
    model = parse_group(args.group, args.budget)
    kernel = make_kernel(model, args.kernel)
    x = model.parse_element(args.x)
    y = model.parse_element(args.y)
    value = kernel.value(x, y, args.n)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "group": model.descriptor,
                    "kernel": kernel.tag,
                    "x": str(x),
                    "y": str(y),
                    "n": args.n,
                    "value": rational_str(value),
                },
                indent=2,
            )
        )
    else:
        print(rational_str(value))
    return 0


def cmd_defect(args) -> int:
    model = parse_group(args.group, args.budget)
    provider = FolnerProvider(model, args.strategy)
    g = model.parse_element(args.g)
    rows = []
    for n in _parse_range(args.n):
        gn = provider.folner_set(n)
        diff = len(provider.translate(g, n) ^ gn)
        rows.append({"n": n, "defect": f"{diff}/{len(gn)}"})
    _emit_table(
        rows,
        ["n", "defect"],
        args.format,
        {"group": model.descriptor, "strategy": args.strategy, "g": str(g)},
    )
    return 0


def cmd_verify(args) -> int:
    overrides = {
        name: getattr(args, name)
        for name in ("kernel", "E", "eps", "nmax", "sample_radius",
                     "random", "seed", "budget", "out")
        if getattr(args, name) is not None
    }
    if args.group is not None:
        overrides["group"] = args.group
    base = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    merged = {**base, **overrides}
    config = RunConfig.from_dict(merged)

    model = parse_group(config.group, config.budget)
    kernel = make_kernel(model, config.kernel)
    elements = parse_element_list(model, config.E)
    epsilon = Fraction(config.eps)
    spec = SampleSpec(
        ball_radius=config.sample_radius,
        random_count=config.random,
        seed=config.seed,
    )
    certificate = verify_property_o(
        model, kernel, elements, epsilon, sample_spec=spec, n_max=config.nmax
    )
    text = certificate.to_json()
    print(text)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if certificate.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="propertyo",
        description="Ozawa kernels and exact Property O certificates "
        "on computable groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ball = sub.add_parser("ball", help="growth table of Cayley balls")
    p_ball.add_argument("group")
    p_ball.add_argument("n", type=int)
    p_ball.add_argument("--elements", action="store_true")
    p_ball.add_argument("--budget", type=int, default=DEFAULT_ELEMENT_BUDGET)
    p_ball.add_argument("--format", choices=("csv", "json"), default="csv")
    p_ball.set_defaults(func=cmd_ball)

    p_kernel = sub.add_parser("kernel", help="evaluate a kernel exactly")
    p_kernel.add_argument("group")
    p_kernel.add_argument("kernel")
    p_kernel.add_argument("x")
    p_kernel.add_argument("y")
    p_kernel.add_argument("--n", type=int, required=True)
    p_kernel.add_argument("--budget", type=int, default=DEFAULT_ELEMENT_BUDGET)
    p_kernel.add_argument("--format", choices=("plain", "json"), default="plain")
    p_kernel.set_defaults(func=cmd_kernel)

    p_defect = sub.add_parser("defect", help="Følner defect curve")
    p_defect.add_argument("group")
    p_defect.add_argument("strategy", choices=("box", "ball", "whole"))
    p_defect.add_argument("g")
    p_defect.add_argument("--n", required=True, help="level or range a..b")
    p_defect.add_argument("--budget", type=int, default=DEFAULT_ELEMENT_BUDGET)
    p_defect.add_argument("--format", choices=("csv", "json"), default="csv")
    p_defect.set_defaults(func=cmd_defect)

    p_verify = sub.add_parser(
        "verify", help="check the three Property O conditions, emit a certificate"
    )
    p_verify.add_argument("group", nargs="?")
    p_verify.add_argument("kernel", nargs="?")
    p_verify.add_argument("--config", help="JSON config mirroring these flags")
    p_verify.add_argument("--E", dest="E", help="ball:<r> or list:<e1,e2,...>")
    p_verify.add_argument("--eps", help="positive rational p/q")
    p_verify.add_argument("--nmax", type=int)
    p_verify.add_argument("--sample-radius", dest="sample_radius", type=int)
    p_verify.add_argument("--random", type=int)
    p_verify.add_argument("--seed", type=int)
    p_verify.add_argument("--budget", type=int)
    p_verify.add_argument("--out", help="also write the certificate to a file")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ModelMismatchError, BudgetExceededError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
