"""Command-line entry point: ``crossdm synthesize | evaluate | demo``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import evaluation, serialize
from .config import ConfigError, RunConfig, example_config_doc, load_config
from .modulation import SymbolIndex
from .synthesis import SynthesisError, WeightSet, assemble_matrices, synthesize_bank

log = logging.getLogger("crossdm")

RESIDUAL_LIMIT = 1e-8
DEMO_SYMBOLS = ("00,00", "00,01", "00,11", "00,10")


def _report_bank(bank: WeightSet, out=None) -> None:
    out = out or sys.stdout
    order = bank.spec.modulation_order
    print("symbol  label   objective          constraint_residual", file=out)
    for m in range(len(bank)):
        label = SymbolIndex(m, order).label
        print(f"{m:6d}  {label:6s}  {bank.objective_values[m]:.12f}  "
              f"{bank.constraint_residuals[m]:.3e}", file=out)
    print(f"max constraint residual: {bank.max_constraint_residual:.3e}", file=out)


def cmd_synthesize(config_path, out_path, seed=None) -> int:
    cfg = load_config(config_path)
    design = cfg.design if seed is None else cfg.design.with_seed(seed)
    bank = synthesize_bank(design)
    serialize.save_bank(bank, out_path)
    _report_bank(bank)
    if not bank.max_constraint_residual < RESIDUAL_LIMIT:
        log.error("constraint residual %.3e exceeds %.0e",
                  bank.max_constraint_residual, RESIDUAL_LIMIT)
        return 1
    return 0


def _check_dimensions(bank: WeightSet, cfg: RunConfig) -> None:
    design = cfg.design
    if bank.weights.shape != (design.num_symbols, 2 * design.num_elements):
        raise ValueError(
            f"bank holds {bank.weights.shape[0]} weights of length "
            f"{bank.weights.shape[1]}, config expects {design.num_symbols} of length "
            f"{2 * design.num_elements}")


def cmd_evaluate(bank_path, config_path, step, out_path, symbols=None) -> int:
    cfg = load_config(config_path)
    bank = serialize.load_bank(bank_path)
    _check_dimensions(bank, cfg)
    design = cfg.design
    if step is None:
        step = cfg.sweep_step
    selected = None
    if symbols:
        selected = evaluation.symbol_indices(symbols, design.modulation_order)
    text = evaluation.pattern_csv(bank, design, step, selected)
    Path(out_path).write_text(text)
    return 0


def cmd_demo(out_dir) -> int:
    """Synthesize the built-in example and write its bank, four pattern CSVs and a summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = example_config_doc()
    cfg = RunConfig.from_dict(doc)
    (out / "config.json").write_text(cfg.dumps())
    design = cfg.design

    bank = synthesize_bank(design)
    serialize.save_bank(bank, out / "bank.json")

    patterns = {}
    for label in DEMO_SYMBOLS:
        m = SymbolIndex.parse(label, design.modulation_order).m
        name = f"pattern_{label.replace(',', '_')}.csv"
        (out / name).write_text(evaluation.pattern_csv(bank, design, cfg.sweep_step, [m]))
        patterns[label] = name

    mats = assemble_matrices(design)
    ml_dir = design.mainlobe_dirs[0]
    points = evaluation.constellation_at(bank, design, ml_dir)
    summary = {
        "seed": design.seed,
        "num_elements": design.num_elements,
        "num_symbols": len(bank),
        "S_SL_shape": list(mats.sidelobe.shape),
        "S_ML_shape": list(mats.mainlobe.shape),
        "max_constraint_residual": bank.max_constraint_residual,
        "objective_values": [float(v) for v in bank.objective_values],
        "mainlobe": {
            "theta_deg": ml_dir.theta,
            "phi_deg": ml_dir.phi,
            "composite_db": [float(evaluation.to_db(np.hypot(*np.abs(p)))) for p in points],
            "phases_deg": [[float(v) for v in evaluation.wrap_phase(np.degrees(np.angle(p)))]
                           for p in points],
        },
        "patterns": patterns,
        "bank": "bank.json",
    }
    (out / "summary.json").write_text(serialize.dumps(summary, indent=2) + "\n")

    _report_bank(bank)
    print(f"S_SL {mats.sidelobe.shape[0]}x{mats.sidelobe.shape[1]}, "
          f"S_ML {mats.mainlobe.shape[0]}x{mats.mainlobe.shape[1]}")
    print(f"wrote {out}")
    return 0 if bank.max_constraint_residual < RESIDUAL_LIMIT else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="crossdm",
        description="Directional-modulation weight synthesis for crossed-dipole arrays")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synthesize", help="solve the weight bank for a configuration")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=None, help="override the configured seed")

    e = sub.add_parser("evaluate", help="write pattern CSV for a weight bank")
    e.add_argument("--bank", required=True)
    e.add_argument("--config", required=True)
    e.add_argument("--step", type=float, default=None, help="sweep step in degrees")
    e.add_argument("--out", required=True)
    e.add_argument("--symbols", nargs="+", default=None,
                   help="composite indices (6) or label pairs (00,11); default all")

    d = sub.add_parser("demo", help="reproduce the 19-element example")
    d.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synthesize":
            if args.seed is not None and args.seed < 0:
                raise ValueError("--seed must be nonnegative")
            return cmd_synthesize(args.config, args.out, args.seed)
        if args.command == "evaluate":
            return cmd_evaluate(args.bank, args.config, args.step, args.out, args.symbols)
        return cmd_demo(args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SynthesisError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
