"""Config-driven command line front end with reproducible artifacts.

This module is the single schema authority for run configs.  A config is a
YAML mapping (plain JSON is valid YAML and works too); unknown keys are
rejected anywhere in the document, and every default lives in
``CONFIG_DEFAULTS`` below.

Schema::

    potential:                # required mapping
      kind:              power_law | exponential | finite_table | zero
      beta:              float >= 0                 (required)
      q:                 float > 1                  (power_law only)
      rate:              float > 0                  (exponential only)
      amplitude:         float > 0, default 1.0     (power_law, exponential)
      values:            [float, ...]               (finite_table only)
      truncation_range:  int >= 0 or null, default null
    experiments:         subset of [criteria, gfun, bounds, sample, couple],
                         or [all]; default [all]
    n_max:               int in [1, 2^20], default 64    (bounds rows)
    seed:                int in [0, 2^64), default 20260814
    rel_width:           float in (0, 1), default 1e-10  (enclosure target)
    sample_length:       int in [1, 2^24], default 65536
    couple_length:       int in [1, 2^24], default 65536
    empirical_window:    int in [0, 12], default 10 (0 disables the column)
    alpha:               float in (0, 1] or null, default null
    budget:              float > 0 or null, default null (requires alpha)
    block_lambda:        float > 1, default 2.0
    alpha_grid:          [float in (0, 1], ...] or null, default null
    out:                 str, default "runs"

Artifacts land in the output directory: ``report.json`` (verdicts and
experiment summaries), one CSV per series-producing experiment, and
``manifest.json``.  Identical configs produce byte-identical reports and
CSVs; the manifest alone carries the timestamp.  Every float is emitted
with 17 significant digits, and JSON objects are written with sorted keys.
Non-finite floats (possible only in diagnostic fields) appear as the JSON
strings "inf", "-inf", "nan".

Exit codes: 0 on success, 1 when a requested experiment trips a kernel
guard (the message names the guard), 2 on config or usage errors.  A
criterion reporting Fails is a result, not an error, and still exits 0.
The ``report`` subcommand records per-experiment guard messages in the
report instead of aborting, so one infeasible experiment cannot sink a
sweep.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import yaml

from . import __version__
from .criteria import (
    INCONCLUSIVE,
    UNIQUE_GIBBS_BERNOULLI,
    UNIQUE_TINV_GIBBS,
    CriteriaReport,
    Verdict,
    check_jop_blocksum,
    check_product_blocksum,
    check_scaled_limsup,
    evaluate_all,
)
from .dynamics import couple_two_pasts, sample_chain, write_chain_csv, write_coupling_csv
from .fseq import FSequence, Word
from .kernel import ENUMERATION_MAX_WINDOW, empirical_g_variation_profile, g_exact_markov
from .potential import (
    DEFAULT_REL_WIDTH,
    CouplingLaw,
    PairPotential,
    VariationProfile,
    tail_variation,
)
from .ratiobound import LogRProfile

EXPERIMENTS = ("criteria", "gfun", "bounds", "sample", "couple")

CONFIG_DEFAULTS = {
    "experiments": ["all"],
    "n_max": 64,
    "seed": 20260814,
    "rel_width": DEFAULT_REL_WIDTH,
    "sample_length": 65536,
    "couple_length": 65536,
    "empirical_window": 10,
    "alpha": None,
    "budget": None,
    "block_lambda": 2.0,
    "alpha_grid": None,
    "out": "runs",
}

_POTENTIAL_KEYS = {"kind", "beta", "q", "rate", "amplitude", "values", "truncation_range"}
_KIND_REQUIRED = {
    "power_law": {"q"},
    "exponential": {"rate"},
    "finite_table": {"values"},
    "zero": set(),
}
_KIND_OPTIONAL = {
    "power_law": {"amplitude"},
    "exponential": {"amplitude"},
    "finite_table": set(),
    "zero": set(),
}


class ConfigError(ValueError):
    """A config document violates the schema above."""


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _as_number(doc: dict, key: str, where: str) -> float:
    v = doc[key]
    _expect(isinstance(v, (int, float)) and not isinstance(v, bool), f"{where}.{key} must be a number")
    return float(v)


def _as_int(doc: dict, key: str, where: str) -> int:
    v = doc[key]
    _expect(isinstance(v, int) and not isinstance(v, bool), f"{where}.{key} must be an integer")
    return v


@dataclass(frozen=True)
class RunConfig:
    """A validated run description; ``parse_config`` is the only constructor
    that should be trusted with user input."""

    kind: str
    beta: float
    q: Optional[float]
    rate: Optional[float]
    amplitude: float
    values: tuple
    truncation_range: Optional[int]
    experiments: tuple
    n_max: int
    seed: int
    rel_width: float
    sample_length: int
    couple_length: int
    empirical_window: int
    alpha: Optional[float]
    budget: Optional[float]
    block_lambda: float
    alpha_grid: Optional[tuple]
    out: str

    def build_potential(self) -> PairPotential:
        if self.kind == "power_law":
            law = CouplingLaw.power_law(self.q, self.amplitude)
        elif self.kind == "exponential":
            law = CouplingLaw.exponential(self.rate, self.amplitude)
        elif self.kind == "finite_table":
            law = CouplingLaw.finite_table(self.values)
        else:
            law = CouplingLaw.zero()
        try:
            return PairPotential(
                beta=self.beta, coupling=law, truncation_range=self.truncation_range
            )
        except ValueError as exc:
            raise ConfigError(f"potential: {exc}") from exc

    def as_doc(self) -> dict:
        """The schema document this config round-trips through."""
        pot: dict = {"kind": self.kind, "beta": self.beta, "truncation_range": self.truncation_range}
        if self.kind == "power_law":
            pot["q"] = self.q
            pot["amplitude"] = self.amplitude
        elif self.kind == "exponential":
            pot["rate"] = self.rate
            pot["amplitude"] = self.amplitude
        elif self.kind == "finite_table":
            pot["values"] = list(self.values)
        return {
            "potential": pot,
            "experiments": list(self.experiments),
            "n_max": self.n_max,
            "seed": self.seed,
            "rel_width": self.rel_width,
            "sample_length": self.sample_length,
            "couple_length": self.couple_length,
            "empirical_window": self.empirical_window,
            "alpha": self.alpha,
            "budget": self.budget,
            "block_lambda": self.block_lambda,
            "alpha_grid": None if self.alpha_grid is None else list(self.alpha_grid),
            "out": self.out,
        }


def parse_config(doc: dict) -> RunConfig:
    _expect(isinstance(doc, dict), "config must be a mapping")
    allowed = set(CONFIG_DEFAULTS) | {"potential"}
    unknown = set(doc) - allowed
    _expect(not unknown, f"unknown config keys: {sorted(unknown)}")
    _expect("potential" in doc, "config needs a 'potential' section")

    pot = doc["potential"]
    _expect(isinstance(pot, dict), "potential must be a mapping")
    unknown = set(pot) - _POTENTIAL_KEYS
    _expect(not unknown, f"unknown potential keys: {sorted(unknown)}")
    _expect("kind" in pot, "potential needs a 'kind'")
    kind = pot["kind"]
    _expect(kind in _KIND_REQUIRED, f"potential.kind must be one of {sorted(_KIND_REQUIRED)}")
    _expect("beta" in pot, "potential needs a 'beta'")
    beta = _as_number(pot, "beta", "potential")
    _expect(beta >= 0.0 and math.isfinite(beta), "potential.beta must be finite and >= 0")

    given = set(pot) - {"kind", "beta", "truncation_range"}
    required = _KIND_REQUIRED[kind]
    legal = required | _KIND_OPTIONAL[kind]
    _expect(required <= given, f"potential.kind={kind} requires {sorted(required - given)}")
    _expect(given <= legal, f"potential.kind={kind} does not take {sorted(given - legal)}")

    q = rate = None
    amplitude = 1.0
    values: tuple = ()
    if kind == "power_law":
        q = _as_number(pot, "q", "potential")
        _expect(q > 1.0, "potential.q must exceed 1")
    if kind == "exponential":
        rate = _as_number(pot, "rate", "potential")
        _expect(rate > 0.0, "potential.rate must be positive")
    if "amplitude" in pot:
        amplitude = _as_number(pot, "amplitude", "potential")
        _expect(amplitude > 0.0 and math.isfinite(amplitude), "potential.amplitude must be positive")
    if kind == "finite_table":
        raw = pot["values"]
        _expect(
            isinstance(raw, list)
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw),
            "potential.values must be a list of numbers",
        )
        values = tuple(float(v) for v in raw)

    truncation_range = pot.get("truncation_range")
    if truncation_range is not None:
        truncation_range = _as_int(pot, "truncation_range", "potential")
        _expect(truncation_range >= 0, "potential.truncation_range must be >= 0")

    merged = dict(CONFIG_DEFAULTS)
    merged.update({k: v for k, v in doc.items() if k != "potential"})

    exps = merged["experiments"]
    _expect(
        isinstance(exps, list) and exps and all(isinstance(e, str) for e in exps),
        "experiments must be a nonempty list of names",
    )
    bad = [e for e in exps if e not in EXPERIMENTS + ("all",)]
    _expect(not bad, f"unknown experiments: {bad}")
    experiments = EXPERIMENTS if "all" in exps else tuple(dict.fromkeys(exps))

    n_max = _as_int(merged, "n_max", "config")
    _expect(1 <= n_max <= 1 << 20, "n_max must lie in [1, 2^20]")
    seed = _as_int(merged, "seed", "config")
    _expect(0 <= seed < 1 << 64, "seed must fit in 64 bits")
    rel_width = _as_number(merged, "rel_width", "config")
    _expect(0.0 < rel_width < 1.0, "rel_width must lie in (0, 1)")
    sample_length = _as_int(merged, "sample_length", "config")
    _expect(1 <= sample_length <= 1 << 24, "sample_length must lie in [1, 2^24]")
    couple_length = _as_int(merged, "couple_length", "config")
    _expect(1 <= couple_length <= 1 << 24, "couple_length must lie in [1, 2^24]")
    empirical_window = _as_int(merged, "empirical_window", "config")
    _expect(
        0 <= empirical_window <= ENUMERATION_MAX_WINDOW,
        f"empirical_window must lie in [0, {ENUMERATION_MAX_WINDOW}]",
    )

    alpha = merged["alpha"]
    if alpha is not None:
        alpha = _as_number(merged, "alpha", "config")
        _expect(0.0 < alpha <= 1.0, "alpha must lie in (0, 1]")
    budget = merged["budget"]
    if budget is not None:
        budget = _as_number(merged, "budget", "config")
        _expect(budget > 0.0 and math.isfinite(budget), "budget must be positive and finite")
        _expect(alpha is not None, "budget requires alpha")
    block_lambda = _as_number(merged, "block_lambda", "config")
    _expect(block_lambda > 1.0, "block_lambda must exceed 1")
    grid = merged["alpha_grid"]
    if grid is not None:
        _expect(
            isinstance(grid, list)
            and grid
            and all(
                isinstance(a, (int, float)) and not isinstance(a, bool) and 0.0 < a <= 1.0
                for a in grid
            ),
            "alpha_grid must be a nonempty list of numbers in (0, 1]",
        )
        grid = tuple(float(a) for a in grid)
    out = merged["out"]
    _expect(isinstance(out, str) and out, "out must be a nonempty string")

    return RunConfig(
        kind=kind,
        beta=beta,
        q=q,
        rate=rate,
        amplitude=amplitude,
        values=values,
        truncation_range=truncation_range,
        experiments=experiments,
        n_max=n_max,
        seed=seed,
        rel_width=rel_width,
        sample_length=sample_length,
        couple_length=couple_length,
        empirical_window=empirical_window,
        alpha=alpha,
        budget=budget,
        block_lambda=block_lambda,
        alpha_grid=grid,
        out=out,
    )


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    return parse_config(doc)


# --- deterministic emission ---


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _json_text(value, indent: int = 0) -> str:
    pad = "  " * indent
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        body = ",\n".join(pad + "  " + _json_text(v, indent + 1) for v in value)
        return "[\n" + body + "\n" + pad + "]"
    if isinstance(value, dict):
        if not value:
            return "{}"
        body = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_json_text(v, indent + 1)}"
            for k, v in sorted(value.items())
        )
        return "{\n" + body + "\n" + pad + "}"
    raise TypeError(f"cannot emit {type(value).__name__} deterministically")


def write_json(path, value) -> None:
    Path(path).write_text(_json_text(value) + "\n")


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


# --- experiment runners ---


def _verdict_doc(v: Verdict) -> dict:
    return {
        "criterion": v.criterion,
        "outcome": v.outcome,
        "margin": None if v.margin is None else {"lo": v.margin.lo, "hi": v.margin.hi},
        "certificate": v.certificate,
        "conclusion_strength": v.conclusion_strength,
    }


def _override(name: str, strength: str, thunk) -> Verdict:
    try:
        return thunk()
    except ValueError as exc:
        return Verdict(name, INCONCLUSIVE, None, f"not evaluated: {exc}", strength)


def _run_criteria(cfg: RunConfig, p: PairPotential) -> dict:
    report = evaluate_all(p, cfg.rel_width)
    verdicts = {v.criterion: v for v in report.verdicts}
    knobs: dict = {}
    if cfg.alpha is not None or cfg.alpha_grid is not None or cfg.block_lambda != 2.0:
        F = FSequence.from_potential(p, cfg.rel_width)
        if cfg.alpha is not None:
            knobs["alpha"] = cfg.alpha
            verdicts["product_blocksum"] = _override(
                "product_blocksum",
                UNIQUE_GIBBS_BERNOULLI,
                lambda: check_product_blocksum(F, cfg.alpha),
            )
            verdicts["scaled_limsup"] = _override(
                "scaled_limsup",
                UNIQUE_TINV_GIBBS,
                lambda: check_scaled_limsup(F, cfg.alpha, cfg.budget, cfg.rel_width),
            )
            if cfg.budget is not None:
                knobs["budget"] = cfg.budget
        elif cfg.alpha_grid is not None:
            knobs["alpha_grid"] = list(cfg.alpha_grid)
            rank = {"Holds": 2, "Inconclusive": 1, "Fails": 0}
            best = None
            for a in cfg.alpha_grid:
                cand = _override(
                    "product_blocksum",
                    UNIQUE_GIBBS_BERNOULLI,
                    lambda a=a: check_product_blocksum(F, a),
                )
                if best is None or rank[cand.outcome] > rank[best.outcome]:
                    best = cand
            verdicts["product_blocksum"] = best
        if cfg.block_lambda != 2.0:
            knobs["block_lambda"] = cfg.block_lambda
            logr = LogRProfile.from_fsequence(F, cfg.rel_width)
            verdicts["jop_blocksum"] = _override(
                "jop_blocksum",
                UNIQUE_TINV_GIBBS,
                lambda: check_jop_blocksum(logr, cfg.block_lambda),
            )
    ordered = tuple(verdicts[v.criterion] for v in report.verdicts)
    return {
        "strongest_conclusion": CriteriaReport(ordered).strongest,
        "knobs": knobs,
        "verdicts": [_verdict_doc(v) for v in ordered],
    }


def _past_string(letters) -> str:
    return "".join("+" if s > 0 else "-" for s in letters)


def _run_gfun(cfg: RunConfig, p: PairPotential, out: Path) -> dict:
    g = g_exact_markov(p)
    tm = g.transfer
    path = out / "gfun.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["past", "prob_minus", "prob_plus"])
        if tm is None:
            w.writerow(["", _cell(0.5), _cell(0.5)])
        else:
            for state in tm.states:
                w.writerow(
                    [_past_string(state), _cell(g.prob(state, -1)), _cell(g.prob(state, +1))]
                )
    law = g.state_law()
    if tm is None:
        prob_plus = 0.5
    else:
        prob_plus = float(
            sum(law[i] * g.prob(state, +1) for i, state in enumerate(tm.states))
        )
    return {
        "csv": path.name,
        "dependency_depth": g.dependency_depth,
        "states": 1 if tm is None else len(tm.states),
        "eigenvalue": None if tm is None else tm.eigenvalue,
        "perron_residual": None if tm is None else tm.residual,
        "stationary_prob_plus": prob_plus,
    }


def _run_bounds(cfg: RunConfig, p: PairPotential, out: Path) -> dict:
    F = FSequence.from_potential(p, cfg.rel_width)
    logr = LogRProfile.from_fsequence(F, cfg.rel_width)
    profile = VariationProfile.from_potential(p, cfg.rel_width)

    empirical: dict = {}
    empirical_note = None
    if cfg.empirical_window > 0:
        depths = list(range(1, min(cfg.n_max, cfg.empirical_window) + 1))
        try:
            vals = empirical_g_variation_profile(p, depths, cfg.empirical_window)
            empirical = dict(zip(depths, vals))
        except ValueError as exc:
            empirical_note = str(exc)
    else:
        empirical_note = "disabled (empirical_window = 0)"

    path = out / "bounds.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            [
                "n",
                "tail_variation_lo",
                "tail_variation_hi",
                "log_r_bound_lo",
                "log_r_bound_hi",
                "empirical_log_r",
            ]
        )
        for n in range(1, cfg.n_max + 1):
            tv = tail_variation(p, n, cfg.rel_width)
            rb = logr.at(n)
            w.writerow(
                [n, _cell(tv.lo), _cell(tv.hi), _cell(rb.lo), _cell(rb.hi), _cell(empirical.get(n))]
            )
    doc = {
        "csv": path.name,
        "rows": cfg.n_max,
        "slope": None if profile.slope is None else {"lo": profile.slope.lo, "hi": profile.slope.hi},
        "zero_beyond": logr.zero_beyond,
        "envelope": None
        if logr.envelope is None
        else {
            "coefficient": logr.envelope.coefficient,
            "exponent": logr.envelope.exponent,
            "start": logr.envelope.start,
        },
        "empirical_window": cfg.empirical_window,
    }
    if empirical_note is not None:
        doc["empirical_note"] = empirical_note
    return doc


def _run_sample(cfg: RunConfig, p: PairPotential, out: Path) -> dict:
    g = g_exact_markov(p)
    depth = max(g.dependency_depth, 1)
    past = Word.constant(-depth, depth, 1)
    run = sample_chain(g, past, cfg.sample_length, cfg.seed)
    path = out / "sample.csv"
    write_chain_csv(run, path)
    return {
        "csv": path.name,
        "sites": cfg.sample_length,
        "seed": cfg.seed,
        "past": _past_string(past.letters),
        "g_source": run.g_source,
        "frequency_plus": run.frequency(1),
        "frequency_minus": run.frequency(-1),
    }


def _run_couple(cfg: RunConfig, p: PairPotential, out: Path) -> dict:
    g = g_exact_markov(p)
    depth = max(g.dependency_depth, 1)
    past_a = Word.constant(-depth, depth, 1)
    past_b = Word.constant(-depth, depth, -1)
    run = couple_two_pasts(g, past_a, past_b, cfg.couple_length, cfg.seed)
    path = out / "couple.csv"
    write_coupling_csv(run, path)
    first = run.first_coalescence()
    return {
        "csv": path.name,
        "sites": cfg.couple_length,
        "seed": cfg.seed,
        "past_a": _past_string(past_a.letters),
        "past_b": _past_string(past_b.letters),
        "decile_disagreement": [float(x) for x in run.disagreement_density(10)],
        "total_disagreement": float(run.disagree.mean()),
        "first_coalescence": first,
    }


_RUNNERS = {
    "criteria": lambda cfg, p, out: _run_criteria(cfg, p),
    "gfun": _run_gfun,
    "bounds": _run_bounds,
    "sample": _run_sample,
    "couple": _run_couple,
}


def _potential_doc(p: PairPotential, cfg: RunConfig) -> dict:
    return {
        "kind": cfg.kind,
        "beta": cfg.beta,
        "finite_range": p.finite_range,
        "truncation_range": cfg.truncation_range,
    }


def run(cfg: RunConfig, out_dir, command: str = "report", config_digest: Optional[str] = None):
    """Run the configured experiments and write report, CSVs, and manifest.

    Returns ``(report_doc, errors)`` where ``errors`` maps experiment names
    to guard messages.  The report itself is deterministic; the manifest
    carries the wall-clock stamp.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    p = cfg.build_potential()
    results: dict = {}
    errors: dict = {}
    for name in cfg.experiments:
        try:
            results[name] = _RUNNERS[name](cfg, p, out)
        except (ValueError, ArithmeticError) as exc:
            results[name] = {"error": str(exc)}
            errors[name] = str(exc)
    report = {
        "config": cfg.as_doc(),
        "potential": _potential_doc(p, cfg),
        "results": results,
    }
    write_json(out / "report.json", report)
    written = ["report.json"] + [doc["csv"] for doc in results.values() if "csv" in doc]
    manifest = {
        "command": command,
        "config_sha256": config_digest,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "experiments": list(cfg.experiments),
        "n_max": cfg.n_max,
        "outputs": sorted(written),
        "rel_width": cfg.rel_width,
        "seed": cfg.seed,
        "version": __version__,
    }
    write_json(out / "manifest.json", manifest)
    return report, errors


def _print_criteria(doc: dict) -> None:
    for v in doc["verdicts"]:
        margin = v["margin"]
        shown = "" if margin is None else f"  margin [{margin['lo']:.6g}, {margin['hi']:.6g}]"
        print(f"{v['criterion']:<18} {v['outcome']:<13} {v['conclusion_strength']}{shown}")
    strongest = doc["strongest_conclusion"]
    print(f"strongest conclusion: {strongest if strongest else 'Inconclusive'}")


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="YAML run config")
    common.add_argument("--out", metavar="DIR", help="output directory (default: config 'out')")
    common.add_argument("--seed", type=int, metavar="N", help="override config seed")
    common.add_argument(
        "--cutoff-rel-width",
        type=float,
        metavar="W",
        dest="rel_width",
        help="override enclosure relative-width target",
    )
    common.add_argument("--n-max", type=int, metavar="N", dest="n_max", help="override bounds rows")

    parser = argparse.ArgumentParser(
        prog="gibbs1d",
        description="Uniqueness criteria, rigorous ratio bounds, and coupling "
        "experiments for one-dimensional lattice Gibbs states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="run every uniqueness criterion")
    sub.add_parser("gfun", parents=[common], help="tabulate the exact conditional law")
    sub.add_parser("bounds", parents=[common], help="tail-variation and log-ratio bound series")
    sub.add_parser("sample", parents=[common], help="sample one chain from the exact law")
    sub.add_parser("couple", parents=[common], help="maximal coupling from opposite pasts")
    sub.add_parser("report", parents=[common], help="run the config's experiment list")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        digest = hashlib.sha256(Path(args.config).read_bytes()).hexdigest()
        updates: dict = {}
        if args.seed is not None:
            _expect(0 <= args.seed < 1 << 64, "seed must fit in 64 bits")
            updates["seed"] = args.seed
        if args.rel_width is not None:
            _expect(0.0 < args.rel_width < 1.0, "rel_width must lie in (0, 1)")
            updates["rel_width"] = args.rel_width
        if args.n_max is not None:
            _expect(1 <= args.n_max <= 1 << 20, "n_max must lie in [1, 2^20]")
            updates["n_max"] = args.n_max
        if args.command != "report":
            updates["experiments"] = (args.command if args.command != "check" else "criteria",)
        if updates:
            cfg = dataclasses.replace(cfg, **updates)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out_dir = args.out if args.out is not None else cfg.out
    report, errors = run(cfg, out_dir, command=args.command, config_digest=digest)

    if args.command == "check":
        _print_criteria(report["results"]["criteria"])
    for name in cfg.experiments:
        doc = report["results"][name]
        if "csv" in doc:
            print(f"{name}: wrote {Path(out_dir) / doc['csv']}")
    print(f"report: {Path(out_dir) / 'report.json'}")

    if errors and args.command != "report":
        for name, msg in errors.items():
            print(f"{name} failed: {msg}", file=sys.stderr)
        return 1
    if errors:
        for name, msg in errors.items():
            print(f"note: {name} not evaluated: {msg}")
    return 0
