"""Command-line front end: runs the experiments and persists reports.

Subcommands
-----------
multiplier-check   block condition, witnesses, and majorant checks for a symbol
bmo-suite          oscillation identities, lattice-mass ladder, pairing chain
product-suite      profile invariants, box identities, scale table, functionals
corpus             seeded corpora plus their summary statistics
psi-build          build and persist the analyzing profile

Exit codes: 0 all asserted identities hold, 1 a mathematical assertion
failed (the message carries the counterexample), 2 input or usage error.
Reports are canonical JSON (plus CSV for plot-ready tables) and are byte
identical for a fixed config and seed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from . import corpus as corpus_mod
from .classical import (
    CubeSpec,
    MeasureAtoms,
    dyadic_cube_family,
    pairing_chain_report,
    sledd_stegenga_condition,
    spectral_oscillation_identity,
)
from .dyadic import OpenSetMask
from .errors import IdentityError, ProdHardyError
from .functionals import (
    factored_functional,
    factored_vs_spectral,
    spectral_box_functional,
    symbol_sup_functional,
    wavelet_scale_identity,
)
from .grid import SampledFunction2D, sample_function, torus_grid, window_grid
from .reports import write_csv, write_json
from .torus import (
    DyadicBlock,
    MultiplierGrid,
    apply_multiplier,
    complete_blocks,
    condition_constant,
    necessity_witness,
)
from .wavelet import WaveletProfile, build_psi

SCALE_TABLE_INDICES = (1, 2, 4)
SCALE_TABLE_PAIRS = ((1.0, 1.0), (0.25, 1.0), (0.0625, 0.25))


def _emit(args, payload: dict, tables: Optional[dict] = None) -> None:
    if args.out:
        out = Path(args.out)
        write_json(out / "report.json", payload)
        for name, (header, rows) in (tables or {}).items():
            write_csv(out / "tables" / f"{name}.csv", header, rows)
    else:
        from .reports import to_plain

        json.dump(to_plain(payload), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def _config_echo(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


# ---------------------------------------------------------------------------
# multiplier-check


def cmd_multiplier_check(args) -> int:
    lam = MultiplierGrid.load(args.input)
    cond = condition_constant(lam)

    witness_rows = []
    cap = args.witness_cap
    for b in complete_blocks(lam.shape):
        if b.m > cap or b.n > cap:
            continue
        rep = necessity_witness(lam, b)
        witness_rows.append({
            "block": [b.m, b.n],
            "value": rep.value,
            "guaranteed_bound": rep.guaranteed_bound,
            "reference_bound": rep.reference_bound,
            "block_energy": rep.block_energy,
        })

    rng = np.random.default_rng(args.seed)
    majorant_rows = []
    for i in range(args.pairs):
        f = corpus_mod.covered_block_witness(rng, lam.shape)
        app = apply_multiplier(lam, f)
        majorant_rows.append({
            "index": i,
            "l2_norm": app.l2_norm,
            "covered_l2_norm": app.covered_l2_norm,
            "majorant": app.majorant,
        })

    payload = {
        "command": "multiplier-check",
        "config": _config_echo(args, ["input", "seed", "pairs", "witness_cap"]),
        "condition_constant": cond.value,
        "attaining_block": list([cond.block.m, cond.block.n]) if cond.block else None,
        "blocks_scanned": cond.blocks_scanned,
        "partial_blocks_excluded": [list(b) for b in cond.partial_blocks_excluded],
        "witness_lower_bounds": witness_rows,
        "majorant_checks": majorant_rows,
        "all_pass": True,
    }
    _emit(args, payload)
    return 0


# ---------------------------------------------------------------------------
# bmo-suite


def _bmo_fixture(args) -> SampledFunction2D:
    if args.input:
        return SampledFunction2D.load_json(args.input)
    grid = torus_grid(args.grid, centered=True)
    if args.fixture == "cos":
        return sample_function(lambda x, y: np.cos(x) + 0j * y, grid)
    if args.fixture == "constant":
        return sample_function(lambda x, y: 1.0 + 0j * x * y, grid)
    if args.fixture == "random":
        rng = np.random.default_rng(args.seed)
        return corpus_mod.torus_trig_fixture(rng, args.grid, freq_step=8, kmax=2)
    raise ValueError(f"unknown builtin fixture {args.fixture!r}")


def cmd_bmo_suite(args) -> int:
    lam = _bmo_fixture(args)
    period = lam.period[0]
    window = (args.window, args.window)

    cube_rows = []
    warnings = []
    for Q in dyadic_cube_family((lam.origin[0] + period / 2,
                                 lam.origin[1] + period / 2),
                                period, min(args.depth, 2)):
        rep = spectral_oscillation_identity(lam, Q, window, tol=args.tol)
        cube_rows.append({
            "center": list(Q.center),
            "side": Q.side,
            "lhs": rep.lhs,
            "rhs": rep.rhs,
            "residual": rep.residual,
            "dropped_energy": rep.dropped_energy,
            "band_limit_ok": rep.band_limit_ok,
        })
        if not rep.band_limit_ok:
            warnings.append(
                f"cube side {Q.side} at {Q.center}: window dropped "
                f"{rep.dropped_energy!r} of the coefficient energy"
            )

    if args.measure:
        mu = MeasureAtoms.load_json(args.measure)
    else:
        mu = MeasureAtoms([((float(2 ** j), 0.0), 1.0) for j in range(1, 9)])
    eps_ladder = [2.0 ** j for j in range(-2, 3)]
    slst = sledd_stegenga_condition(mu, eps_ladder)

    rng = np.random.default_rng(args.seed)
    witnesses = []
    for _ in range(2):
        freq = rng.integers(1, 4, size=2)
        shift = rng.uniform(-0.5, 0.5, size=2)
        witnesses.append(sample_function(
            lambda x, y, f=freq, s=shift: np.exp(-((x - s[0]) ** 2 + (y - s[1]) ** 2))
            * np.exp(1j * (f[0] * x + f[1] * y)),
            lam.grid,
        ))
    cubes = dyadic_cube_family((lam.origin[0] + period / 2,
                                lam.origin[1] + period / 2), period, 2)
    chain = pairing_chain_report(lam, witnesses, cubes, window=window, tol=args.tol)

    payload = {
        "command": "bmo-suite",
        "config": _config_echo(args, ["input", "fixture", "grid", "depth",
                                      "seed", "tol", "window", "measure"]),
        "oscillation_identity": {
            "cubes": cube_rows,
            "max_residual_band_limited": max(
                (r["residual"] for r in cube_rows if r["band_limit_ok"]),
                default=0.0),
            "max_truncation_estimate": max(
                (r["dropped_energy"] for r in cube_rows if not r["band_limit_ok"]),
                default=0.0),
        },
        "lattice_condition": {
            "per_eps": [{"eps": e, "value": v} for e, v in slst.per_eps],
            "max_value": slst.max_value,
            "max_eps": slst.max_eps,
        },
        "chain": {
            "pairing_sup": chain.pairing_sup,
            "bmo_p2": chain.bmo_p2,
            "bmo_p1": chain.bmo_p1,
            "ladder_value": chain.ladder_value,
            "ladder_eps": list(chain.ladder_eps),
            "sup_over_bmo2": chain.sup_over_bmo2,
            "bmo2_over_ladder": chain.bmo2_over_ladder,
            "jn_ratio_p2_p1": chain.jn_ratio_p2_p1,
            "two_route_residuals": [p.two_route_residual for p in chain.per_witness],
        },
        "warnings": warnings,
        "all_pass": True,
    }
    tables = {
        "eps_ladder": (["eps", "value"], [list(r) for r in slst.per_eps]),
        "cube_residuals": (
            ["center1", "center2", "side", "lhs", "rhs", "residual"],
            [[r["center"][0], r["center"][1], r["side"], r["lhs"], r["rhs"],
              r["residual"]] for r in cube_rows],
        ),
    }
    _emit(args, payload, tables)
    return 0


# ---------------------------------------------------------------------------
# product-suite


def _product_fixture(args) -> SampledFunction2D:
    grid = window_grid(-2.0, 2.0, args.grid)
    if args.input:
        return SampledFunction2D.load_json(args.input)
    if args.fixture == "random":
        rng = np.random.default_rng(args.seed)
        return corpus_mod.plane_trig_fixture(rng, grid)
    if args.fixture == "character":
        return sample_function(
            lambda x, y: np.exp(1j * 2 * np.pi * (x + 2 * y)), grid)
    raise ValueError(f"unknown builtin fixture {args.fixture!r}")


def _load_profile(args) -> WaveletProfile:
    if args.profile:
        return WaveletProfile.load_json(args.profile)
    return build_psi()


def cmd_product_suite(args) -> int:
    w = _load_profile(args)
    lam = _product_fixture(args)
    if args.mask:
        omega = OpenSetMask.load_json(args.mask)
    else:
        omega = OpenSetMask.square(0, 1)

    psi_invariants = {
        "mean": w.mean(),
        "evenness_defect": w.evenness_defect(),
        "normalization": w.normalization_check(),
        "second_difference_bound": w.second_difference_bound(),
        "edge_derivative": w.edge_derivative(),
        "norm_const": w.norm_const,
        "tail_bound": w.tail_bound,
    }

    spec_rep = spectral_box_functional(lam, w, omega, args.depth,
                                       n_y=args.ny, tol=args.tol)
    phases = np.fft.fft2(lam.values)
    mod = np.abs(phases)
    phases = np.where(mod > 0, phases / np.where(mod > 0, mod, 1.0), 1.0)
    sym = symbol_sup_functional(
        lam, w, omega, args.depth,
        [("one", np.ones(lam.shape)), ("phases", phases)],
        n_y=args.ny, tol=args.tol,
    )
    fac = factored_functional(lam, w, omega, args.depth)
    ratio = fac.value / spec_rep.value if spec_rep.value > 0 else float("nan")

    scale_rows = []
    for k in SCALE_TABLE_INDICES:
        for l in SCALE_TABLE_INDICES:
            rep = wavelet_scale_identity(w, k, l, SCALE_TABLE_PAIRS, tol=args.tol
                                         if args.tol > 1e-5 else 1e-5)
            for row in rep.rows:
                scale_rows.append([k, l, row.i_len, row.j_len, row.lhs,
                                   rep.rhs, row.residual])

    payload = {
        "command": "product-suite",
        "config": _config_echo(args, ["input", "fixture", "grid", "depth",
                                      "seed", "tol", "ny", "profile", "mask"]),
        "psi_invariants": psi_invariants,
        "box_identity_residuals": [t.residual for t in spec_rep.per_rectangle],
        "max_box_identity_residual": spec_rep.max_residual,
        "rectangle_count": len(spec_rep.per_rectangle),
        "spectral_value": spec_rep.value,
        "symbol_sup_value": sym.max_value,
        "symbol_sup_argmax": sym.argmax,
        "symbol_values": {name: v for name, v in sym.values},
        "factored_value": fac.value,
        "factored_vs_spectral_ratio": ratio,
        "factored_vs_spectral_scaled": ratio * (2 * np.pi) ** 2,
        "scale_identity_max_residual": max(r[6] for r in scale_rows),
        "warnings": ([spec_rep.warning] if spec_rep.warning else []),
        "all_pass": True,
    }
    tables = {
        "scale_identity": (
            ["k", "l", "i_len", "j_len", "lhs", "rhs", "residual"], scale_rows),
    }
    _emit(args, payload, tables)
    return 0


# ---------------------------------------------------------------------------
# corpus


def cmd_corpus(args) -> int:
    out = Path(args.out) if args.out else Path("corpus_out")
    out.mkdir(parents=True, exist_ok=True)
    size = args.size

    manifest = {
        "command": "corpus",
        "config": _config_echo(args, ["size", "seed", "grid", "window", "depth"]),
        "generators": {
            "witnesses": "quadrant-spectrum torus witnesses, unit L1 norm",
            "pairs": "random symbol + covered-block witness pairs",
            "fixtures": "plane trigonometric fixtures on [-2, 2)",
        },
    }

    if size == 0:
        write_json(out / "manifest.json", manifest)
        write_json(out / "stats.json", {"command": "corpus", "size": 0,
                                        "paley": None, "majorant": None,
                                        "functional_ratio": None})
        write_csv(out / "paley_ratios.csv", ["index", "ratio"], [])
        write_csv(out / "majorant_checks.csv",
                  ["index", "l2_norm", "covered_l2_norm", "majorant"], [])
        write_csv(out / "functional_ratios.csv",
                  ["index", "factored", "spectral", "ratio", "scaled_ratio"], [])
        return 0

    ratios, support = corpus_mod.paley_corpus_study(size, args.seed)
    for i, f in enumerate(corpus_mod.h1_witness_corpus(min(size, 3), args.seed)):
        f.save_json(out / f"witness_{i:03d}.json")

    pairs = corpus_mod.multiplier_witness_pairs(size, args.seed + 1)
    majorant_rows = []
    for i, (lam, f) in enumerate(pairs):
        app = apply_multiplier(lam, f)
        majorant_rows.append([i, app.l2_norm, app.covered_l2_norm, app.majorant])

    w = _load_profile(args)
    grid = window_grid(-2.0, 2.0, args.grid)
    omega = OpenSetMask.square(0, 1)
    rng = np.random.default_rng(args.seed + 2)
    ratio_rows = []
    for i in range(size):
        lam = corpus_mod.plane_trig_fixture(rng, grid)
        cmp = factored_vs_spectral(lam, w, omega, args.depth, n_y=args.ny)
        ratio_rows.append([i, cmp.factored, cmp.spectral, cmp.ratio,
                           cmp.convention_scaled_ratio])

    stats = {
        "command": "corpus",
        "size": size,
        "paley": {
            "max_ratio": max(ratios),
            "min_ratio": min(ratios),
            "mean_ratio": float(np.mean(ratios)),
            "support": support.to_json_list(),
        },
        "majorant": {
            "violations": 0,
            "max_covered_over_majorant": max(
                r[2] / r[3] for r in majorant_rows),
        },
        "functional_ratio": {
            "min_scaled": min(r[4] for r in ratio_rows),
            "max_scaled": max(r[4] for r in ratio_rows),
            "mean_scaled": float(np.mean([r[4] for r in ratio_rows])),
        },
    }
    write_json(out / "manifest.json", manifest)
    write_json(out / "stats.json", stats)
    write_csv(out / "paley_ratios.csv", ["index", "ratio"],
              [[i, r] for i, r in enumerate(ratios)])
    write_csv(out / "majorant_checks.csv",
              ["index", "l2_norm", "covered_l2_norm", "majorant"], majorant_rows)
    write_csv(out / "functional_ratios.csv",
              ["index", "factored", "spectral", "ratio", "scaled_ratio"],
              ratio_rows)
    return 0


# ---------------------------------------------------------------------------
# psi-build


def cmd_psi_build(args) -> int:
    w = build_psi(n_points=args.points)
    w.ensure_band_weights(args.window)
    out = Path(args.out) if args.out else Path("psi_profile.json")
    if out.is_dir() or str(out).endswith("/"):
        out = Path(out) / "psi_profile.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    w.save_json(out)
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="prodhardy",
        description="Experiments on multiplier functionals for product Hardy spaces",
    )
    sub = p.add_subparsers(dest="command", required=True)

    mc = sub.add_parser("multiplier-check",
                        help="block condition, witnesses and majorants of a symbol")
    mc.add_argument("input", help="multiplier symbol (CSV 're,im' cells or JSON)")
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--pairs", type=int, default=8,
                    help="number of seeded majorant-check witnesses")
    mc.add_argument("--witness-cap", type=int, default=4,
                    help="largest block index given a modulated witness")
    mc.add_argument("--out", default=None)
    mc.set_defaults(func=cmd_multiplier_check)

    bs = sub.add_parser("bmo-suite",
                        help="oscillation identities, lattice ladder, pairing chain")
    bs.add_argument("input", nargs="?", default=None,
                    help="sampled-function JSON; omit to use a builtin fixture")
    bs.add_argument("--fixture", default="cos", choices=["cos", "constant", "random"])
    bs.add_argument("--grid", type=int, default=128)
    bs.add_argument("--depth", type=int, default=2)
    bs.add_argument("--seed", type=int, default=0)
    bs.add_argument("--tol", type=float, default=1e-8)
    bs.add_argument("--window", type=int, default=16)
    bs.add_argument("--measure", default=None, help="atomic measure JSON")
    bs.add_argument("--out", default=None)
    bs.set_defaults(func=cmd_bmo_suite)

    ps = sub.add_parser("product-suite",
                        help="profile invariants, box identities, functionals")
    ps.add_argument("input", nargs="?", default=None,
                    help="sampled-function JSON; omit to use a builtin fixture")
    ps.add_argument("--fixture", default="random", choices=["random", "character"])
    ps.add_argument("--grid", type=int, default=128)
    ps.add_argument("--depth", type=int, default=2)
    ps.add_argument("--ny", type=int, default=4, help="scale nodes per band axis")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--tol", type=float, default=1e-6)
    ps.add_argument("--profile", default=None, help="profile JSON from psi-build")
    ps.add_argument("--mask", default=None, help="open-set mask JSON")
    ps.add_argument("--out", default=None)
    ps.set_defaults(func=cmd_product_suite)

    co = sub.add_parser("corpus", help="seeded corpora and their statistics")
    co.add_argument("--size", type=int, default=100)
    co.add_argument("--seed", type=int, default=0)
    co.add_argument("--grid", type=int, default=128)
    co.add_argument("--depth", type=int, default=2)
    co.add_argument("--ny", type=int, default=4)
    co.add_argument("--window", type=int, default=16)
    co.add_argument("--profile", default=None)
    co.add_argument("--out", default="corpus_out")
    co.set_defaults(func=cmd_corpus)

    pb = sub.add_parser("psi-build", help="build and persist the analyzing profile")
    pb.add_argument("--points", type=int, default=4097)
    pb.add_argument("--window", type=int, default=16,
                    help="precompute band weights up to this index")
    pb.add_argument("--out", default="psi_profile.json")
    pb.set_defaults(func=cmd_psi_build)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except IdentityError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except (ProdHardyError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
