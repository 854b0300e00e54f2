"""Command-line front end: ``bhcv {compile,count,verify,convergence}``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import circuit as ir
from .convergence import commutator_scaling, trotter_infidelities, trotter_scaling
from .counting import compare, format_histogram
from .decompose import TrotterPlan, build_full_circuit, build_trotter_step, make_plan
from .focksim import CheckResult, ResourceLimitError, verify_identities
from .lattice import LatticeSpec, parse_lattice


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    lattice: LatticeSpec | None
    J: float = 1.0
    U: float = 1.0
    V_dip: float = 0.0
    t: float = 1.0
    K: int | None = None
    epsilon: float | None = None
    C: float = 1.0
    cutoff: int = 12
    out: Path | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("J", "U", "V_dip", "t", "C"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"--{name} must be finite")
        if self.K is not None and self.epsilon is not None:
            raise ConfigError("give only one of --steps and --epsilon")

    def plan(self) -> TrotterPlan:
        if self.lattice is None:
            raise ConfigError("--lattice is required")
        K, eps = self.K, self.epsilon
        if K is None and eps is None:
            K = 1
        try:
            return make_plan(self.lattice, self.J, self.U, self.V_dip, self.t, K, eps, self.C)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_compile(cfg: RunConfig) -> int:
    if cfg.out is None:
        raise ConfigError("compile needs --out")
    plan = cfg.plan()
    if cfg.epsilon is not None:
        print(f"K = {plan.K} (from epsilon = {cfg.epsilon}, C = {cfg.C})")
    full = build_full_circuit(plan)
    cfg.out.write_bytes(ir.serialize(full))
    step = ir.count_gates(build_trotter_step(plan))
    print(f"{plan.lattice.describe()}: {len(full)} gates over K={plan.K} step(s) -> {cfg.out}")
    print(f"per step: {format_histogram(step)}")
    return 0


def cmd_count(cfg: RunConfig, as_json: bool = False) -> int:
    plan = cfg.plan()
    report = compare(plan)
    if as_json:
        sys.stdout.write(_dump(report.to_document()))
    else:
        print(report.render_table())
    if cfg.out is not None:
        cfg.out.write_text(_dump(report.to_document()))
    return 0 if report.passed else 1


def cmd_verify(cfg: RunConfig, identity_cutoff: int = 24) -> int:
    checks = list(verify_identities(identity_cutoff).checks)
    if cfg.lattice is not None:
        plan = cfg.plan()
        p = plan.params
        Ks = [p.K] if p.K == 1 else [p.K, p.K // 2]
        infs = trotter_infidelities(plan.lattice, p.J, p.U, p.V_dip, p.t, Ks, cfg.cutoff, cfg.seed)
        if p.t == 0:
            tol, note = 1e-12, "zero evolution time"
        elif p.K == 1:
            tol, note = 1.0, "K=1 has no halved-K baseline"
        else:
            tol, note = infs[1], f"tolerance is the infidelity at K={Ks[1]}"
        checks.append(CheckResult(f"trotter_infidelity_{plan.lattice.describe()}_K{p.K}",
                                  cfg.cutoff, infs[0], tol, note))
    ok = all(c.passed for c in checks)
    doc = {"format_version": "1", "kind": "verify_report", "seed": cfg.seed,
           "checks": [c.to_document() for c in checks], "pass": ok}
    _emit(_dump(doc), cfg.out)
    return 0 if ok else 1


def cmd_convergence(cfg: RunConfig, Ks=(1, 2, 4, 8, 16), commutator: bool = False,
                    taus=(0.2, 0.1, 0.05, 0.025)) -> int:
    if commutator:
        report = commutator_scaling(taus, cfg.cutoff)
    else:
        plan = cfg.plan()
        p = plan.params
        report = trotter_scaling(plan.lattice, p.J, p.U, p.V_dip, p.t, Ks, cfg.cutoff, cfg.seed)
    doc = {"format_version": "1", "kind": "convergence_report", "seed": cfg.seed,
           **report.to_document()}
    _emit(_dump(doc), cfg.out)
    return 0 if report.passed else 1


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _ints(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bhcv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, lattice_default=None):
        p.add_argument("--lattice", default=lattice_default, help="chain:N or grid:n")
        p.add_argument("--J", type=float, default=1.0)
        p.add_argument("--U", type=float, default=1.0)
        p.add_argument("--Vdip", type=float, default=0.0)
        p.add_argument("--time", type=float, default=1.0)
        p.add_argument("--steps", type=int, default=None, help="Trotter steps K")
        p.add_argument("--epsilon", type=float, default=None, help="target error; K chosen automatically")
        p.add_argument("--C", type=float, default=1.0, help="safety constant for --epsilon")
        p.add_argument("--cutoff", type=int, default=None,
                       help="Fock cutoff per mode (12; 24 for --commutator)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=Path, default=None)

    common(sub.add_parser("compile", help="write the K-step circuit document"))
    p = sub.add_parser("count", help="gate counts against closed forms")
    common(p)
    p.add_argument("--json", action="store_true", help="print the JSON report instead of a table")
    p = sub.add_parser("verify", help="operator identities and a Trotter check")
    common(p)
    p.add_argument("--identity-cutoff", type=int, default=24)
    p = sub.add_parser("convergence", help="error-scaling fits")
    common(p, lattice_default="chain:2")
    p.add_argument("--Ks", type=_ints, default=(1, 2, 4, 8, 16))
    p.add_argument("--commutator", action="store_true", help="sweep the commutator-block strength instead")
    p.add_argument("--taus", type=_floats, default=(0.2, 0.1, 0.05, 0.025))
    return parser


def _config(args) -> RunConfig:
    lattice = parse_lattice(args.lattice) if args.lattice else None
    cutoff = args.cutoff
    if cutoff is None:
        cutoff = 24 if getattr(args, "commutator", False) else 12
    return RunConfig(lattice, args.J, args.U, args.Vdip, args.time, args.steps, args.epsilon,
                     args.C, cutoff, args.out, args.seed)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "compile":
            return cmd_compile(cfg)
        if args.command == "count":
            return cmd_count(cfg, args.json)
        if args.command == "verify":
            return cmd_verify(cfg, args.identity_cutoff)
        return cmd_convergence(cfg, args.Ks, args.commutator, args.taus)
    except (ConfigError, ValueError, ResourceLimitError, OSError) as exc:
        print(f"bhcv {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
