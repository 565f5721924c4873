"""Experiment harness: subcommands over the codec, adversary, and storage
modules, emitting CSV for curves and JSON for structured logs.

Every randomized mode takes a mandatory --seed; identical config + seed gives
byte-identical output.  A --config JSON file overrides command-line flags.
"""

from __future__ import annotations

import json
import math
import random
import sys
from fractions import Fraction

import click

from . import dss_sim
from .adversary import (scale_witness, search_worst_attack,
                        undecodable_witness, verify_witness)
from .errors import PolycodeError
from .genmatrix import build_v_matrix, rotate_generator
from .source_packets import pack_source, symbol_budget, unpack_block
from .vpec import (ERASURE, LayeredReceived, make_params, max_uncertified,
                   erasure_distortion, rd_tables, vpec_decode, vpec_encode)


def _jsonify(obj):
    """Fractions as exact 'p/q' strings, infinities as 'inf', sets sorted."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonify(v) for v in obj)
    return obj


def _fixed(x, places: int = 6) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return f"{float(x):.{places}f}"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _write_json(payload, output: str | None) -> None:
    _emit(json.dumps(_jsonify(payload), indent=2, sort_keys=True) + "\n", output)


def _load_config(config, kwargs: dict) -> dict:
    """Config-file keys override flag values (dashes/underscores both fine)."""
    if not config:
        return kwargs
    with open(config) as fh:
        overrides = json.load(fh)
    merged = dict(kwargs)
    for key, value in overrides.items():
        key = key.replace("-", "_")
        if key == "mode":
            continue
        if key not in merged and key + "_" in merged:
            key += "_"  # options shadowing python keywords
        if key not in merged:
            raise click.UsageError(f"unknown config key {key!r}")
        merged[key] = value
    return merged


def _config_option(fn):
    return click.option("--config", type=click.Path(exists=True), default=None,
                        help="JSON file whose keys override flags.")(fn)


def _parse_symbols(text: str) -> list:
    return [int(v) for v in text.replace(",", " ").split()]


def _random_symbols(params, seed: int) -> list:
    rng = random.Random(f"{seed}|source")
    return [rng.randrange(params.k) for _ in range(params.source_symbols)]


@click.group()
def main():
    """Polytope codes: adversarial-channel codecs and storage simulation."""


# --- matrices and packing ---------------------------------------------------


@main.command()
@click.option("--n", type=int, required=True, help="Number of packets.")
@click.option("--t", type=int, required=True, help="Adversary budget.")
@click.option("--rotation", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(), default=None)
@_config_option
def genmatrix(config, **kwargs):
    """Emit the (N, N-T) generator with nonsingular row submatrices as JSON."""
    opts = _load_config(config, kwargs)
    a = build_v_matrix(opts["n"], opts["t"])
    if opts["rotation"]:
        a = rotate_generator(a, opts["rotation"])
    _write_json(a.to_json(), opts["output"])


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--k", type=int, required=True, help="Alphabet size.")
@click.option("--k0", type=int, required=True, help="Symbols per entry.")
@click.option("--n0", type=int, required=True, help="Entries per row.")
@click.option("--symbols", type=str, required=True,
              help="Comma/space separated K-ary symbols.")
@click.option("--output", "-o", type=click.Path(), default=None)
@_config_option
def pack(config, **kwargs):
    """Pack a symbol string into an (N-T) x N0 integer block."""
    opts = _load_config(config, kwargs)
    block = pack_source(_parse_symbols(opts["symbols"]), opts["k"],
                        opts["k0"], opts["n0"], opts["n"], opts["t"])
    _write_json({"rows": block.rows, "k": block.k, "k0": block.k0,
                 "n0": block.n0}, opts["output"])


@main.command()
@click.option("--k", type=int, required=True)
@click.option("--k0", type=int, required=True)
@click.option("--values", type=str, required=True,
              help="Comma/space separated packed entries.")
@click.option("--output", "-o", type=click.Path(), default=None)
@_config_option
def unpack(config, **kwargs):
    """Invert packed entries back to K-ary symbol groups."""
    opts = _load_config(config, kwargs)
    symbols = []
    for v in _parse_symbols(opts["values"]):
        symbols.extend(unpack_block(v, opts["k"], opts["k0"]))
    _write_json({"symbols": symbols}, opts["output"])


# --- layered codec ----------------------------------------------------------


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--k0", type=int, required=True)
@click.option("--n0", type=int, required=True)
@click.option("--symbols", type=str, default=None,
              help="Source symbols; omit to draw them from --seed.")
@click.option("--seed", type=int, default=None)
@click.option("--output", "-o", type=click.Path(), default=None)
@_config_option
def encode(config, **kwargs):
    """Layered encode: N packets per layer plus per-layer Gram tables."""
    opts = _load_config(config, kwargs)
    params = make_params(opts["n"], opts["t"], opts["k"], opts["k0"], opts["n0"])
    if opts["symbols"] is not None:
        symbols = _parse_symbols(opts["symbols"])
    elif opts["seed"] is not None:
        symbols = _random_symbols(params, opts["seed"])
    else:
        raise click.UsageError("provide --symbols or --seed")
    bundle = vpec_encode(symbols, params)
    budget = symbol_budget(opts["n"], opts["t"], opts["k"], opts["k0"],
                           opts["n0"], max(params.base.alphas))
    _write_json({
        "n": opts["n"], "t": opts["t"], "k": opts["k"],
        "k0": opts["k0"], "n0": opts["n0"],
        "symbols": symbols,
        "layers": bundle.layer_codewords,
        "grams": bundle.layer_grams,
        "rate": budget.rate,
    }, opts["output"])


@main.command()
@click.option("--input", "-i", "input_", type=click.Path(exists=True),
              required=True, help="JSON bundle from `encode` (possibly altered).")
@click.option("--output", "-o", type=click.Path(), default=None)
@_config_option
def decode(config, **kwargs):
    """Syndrome-graph decode of a (possibly attacked) layered bundle."""
    opts = _load_config(config, kwargs)
    with open(opts["input_"]) as fh:
        obj = json.load(fh)
    params = make_params(obj["n"], obj["t"], obj["k"], obj["k0"], obj["n0"])
    layers = tuple(tuple(tuple(cw) for cw in layer) for layer in obj["layers"])
    if "gram_copies" in obj:
        copies = tuple(tuple(tuple(tuple(r) for r in g) for g in per_packet)
                       for per_packet in obj["gram_copies"])
    else:
        grams = tuple(tuple(tuple(r) for r in g) for g in obj["grams"])
        copies = tuple(grams for _ in range(obj["n"]))
    out = vpec_decode(LayeredReceived(layer_codewords=layers,
                                      gram_copies=copies), params)
    payload = {"reconstruction": [None if v is ERASURE else v for v in out]}
    if "symbols" in obj:
        payload["distortion"] = erasure_distortion(obj["symbols"], out)
    _write_json(payload, opts["output"])


@main.command("rd-curve")
@click.option("--n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--points", type=int, default=21, show_default=True)
@click.option("--output", "-o", type=click.Path(), default=None)
@click.option("--plot", type=click.Path(), default=None,
              help="Also render the curve to this image file.")
@_config_option
def rd_curve(config, **kwargs):
    """CSV of the achievable rate-distortion segment and the MDS line."""
    opts = _load_config(config, kwargs)
    n, t, points = opts["n"], opts["t"], opts["points"]
    lo, hi = Fraction(1, n - t), Fraction(1, n - 2 * t)
    rates = [lo + (hi - lo) * i / (points - 1) for i in range(points)] \
        if points > 1 else [lo]
    rows = rd_tables(n, t, rates)
    flat = [{"rate": r["rate"], "feasible": r["feasible"],
             "polytope": r["polytope"].distortion,
             "mds": r["mds"].distortion,
             "mds_raw": r["mds_raw"].distortion} for r in rows]
    lines = ["rate,rate_exact,feasible,polytope,polytope_exact,mds,mds_exact,mds_raw_exact"]
    for r in flat:
        lines.append(",".join([
            _fixed(r["rate"]), str(r["rate"]), str(int(r["feasible"])),
            _fixed(r["polytope"]), str(r["polytope"]),
            _fixed(r["mds"]), str(r["mds"]), str(r["mds_raw"])]))
    _emit("\n".join(lines) + "\n", opts["output"])
    if opts["plot"]:
        from .plotting import plot_rd_curve
        plot_rd_curve(flat, n, t, opts["plot"])


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--k0", type=int, default=2, show_default=True)
@click.option("--n0", type=int, default=2, show_default=True)
@click.option("--attacks", type=int, default=1000, show_default=True)
@click.option("--box", type=int, default=2, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--output", "-o", type=click.Path(), default=None)
@_config_option
def simulate(config, **kwargs):
    """Search seeded random (and small exhaustive) attacks for the worst
    decode distortion."""
    opts = _load_config(config, kwargs)
    params = make_params(opts["n"], opts["t"], opts["k"], opts["k0"], opts["n0"])
    symbols = _random_symbols(params, opts["seed"])
    plan, worst = search_worst_attack(params, symbols, opts["box"],
                                      opts["attacks"], opts["seed"])
    guarantee = Fraction(max_uncertified(opts["t"]), opts["n"])
    _write_json({
        "n": opts["n"], "t": opts["t"], "seed": opts["seed"],
        "attacks": opts["attacks"], "box": opts["box"],
        "worst_distortion": worst,
        "distortion_guarantee": guarantee,
        "within_guarantee": not (worst is math.inf) and worst <= guarantee,
        "worst_plan_alters": sorted(plan.altered),
    }, opts["output"])


@main.command()
@click.option("--t", type=int, required=True)
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--m1", type=int, default=1, show_default=True,
              help="Block-diagonal replication factor.")
@click.option("--m2", type=int, default=1, show_default=True,
              help="Entry repetition factor.")
@click.option("--output", "-o", type=click.Path(), default=None)
@_config_option
def witness(config, **kwargs):
    """Construct and verify a totally-undecodable received family at N=F(T)."""
    opts = _load_config(config, kwargs)
    w = undecodable_witness(opts["t"], k=opts["k"])
    if opts["m1"] != 1 or opts["m2"] != 1:
        w = scale_witness(w, opts["m1"], opts["m2"])
    report = verify_witness(w)
    _write_json({
        "t": w.t, "n": w.n, "n0": w.n0,
        "source": w.source, "codewords": w.codewords,
        "received": w.received, "gram": w.gram,
        "report": report,
    }, opts["output"])
    click.echo("PASS" if report["ok"] else "FAIL", err=True)
    if not report["ok"]:
        sys.exit(1)


# --- distributed storage ----------------------------------------------------


def _dss_params_from(obj: dict) -> dss_sim.DssParams:
    allowed = {"alpha", "beta", "n_initial", "k", "d", "t", "node_cap", "q",
               "r", "k_alphabet", "k0", "n0", "corruption_box"}
    unknown = set(obj) - allowed
    if unknown:
        raise click.UsageError(f"unknown DSS parameters: {sorted(unknown)}")
    return dss_sim.DssParams(**obj)


@main.command("dss-sim")
@click.option("--scenario", type=click.Path(exists=True), required=True,
              help="JSON: {params, events | roaming_repairs, [file]}.")
@click.option("--seed", type=int, required=True)
@click.option("--output", "-o", type=click.Path(), default=None)
@_config_option
def dss_sim_cmd(config, **kwargs):
    """Run a scripted storage scenario and emit the JSON run log."""
    opts = _load_config(config, kwargs)
    with open(opts["scenario"]) as fh:
        scenario = json.load(fh)
    params = _dss_params_from(scenario["params"])
    seed = opts["seed"]
    if "file" in scenario:
        file_rows = scenario["file"]
    else:
        rng = random.Random(f"{seed}|file")
        top = params.k_alphabet ** params.k0
        file_rows = [[rng.randint(1, top) for _ in range(params.n0)]
                     for _ in range(params.r)]
    if "events" in scenario:
        events = scenario["events"]
    else:
        events = dss_sim.roaming_adversary_scenario(
            params, scenario.get("roaming_repairs", 1), seed)
    log = dss_sim.run_scenario(file_rows, params, events, seed)
    _write_json(log, opts["output"])
    if not log["ok"]:
        sys.exit(1)


@main.command("dss-bounds")
@click.option("--k", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--beta-min", type=str, default=None,
              help="Exact fraction, e.g. 1/15; default: feasibility onset.")
@click.option("--beta-max", type=str, default=None)
@click.option("--points", type=int, default=25, show_default=True)
@click.option("--output", "-o", type=click.Path(), default=None)
@click.option("--plot", type=click.Path(), default=None)
@_config_option
def dss_bounds(config, **kwargs):
    """CSV of the storage/bandwidth tradeoff at unit capacity: cut-set outer
    bound vs the syndrome-decoding achievable curve, plus MSR/MBR points."""
    opts = _load_config(config, kwargs)
    k, d, t, points = opts["k"], opts["d"], opts["t"], opts["points"]
    m = k - 2 * t
    if m < 1:
        raise click.UsageError("need k > 2T")
    mbr_coef = m * (d - 2 * t) - m * (m - 1) // 2
    lo = Fraction(opts["beta_min"]) if opts["beta_min"] \
        else Fraction(1, mbr_coef)
    hi = Fraction(opts["beta_max"]) if opts["beta_max"] \
        else Fraction(2, m * (d - k + 1))
    betas = [lo + (hi - lo) * i / (points - 1) for i in range(points)] \
        if points > 1 else [lo]
    rows = []
    for beta in betas:
        rows.append({
            "beta": beta,
            "alpha_outer": dss_sim.min_alpha_for_unit_capacity(
                beta, k, d, t, achievable=False),
            "alpha_achievable": dss_sim.min_alpha_for_unit_capacity(
                beta, k, d, t, achievable=True),
        })
    lines = ["beta,beta_exact,alpha_outer,alpha_outer_exact,"
             "alpha_achievable,alpha_achievable_exact"]
    for r in rows:
        lines.append(",".join([
            _fixed(r["beta"]), str(r["beta"]),
            _fixed(r["alpha_outer"]),
            "" if r["alpha_outer"] is None else str(r["alpha_outer"]),
            _fixed(r["alpha_achievable"]),
            "" if r["alpha_achievable"] is None else str(r["alpha_achievable"])]))
    _emit("\n".join(lines) + "\n", opts["output"])
    if opts["plot"]:
        from .plotting import plot_dss_bounds
        plot_dss_bounds(rows, k, d, t, opts["plot"])


# --- programmatic dispatch ---------------------------------------------------

_MODES = {
    "genmatrix": genmatrix, "pack": pack, "unpack": unpack,
    "encode": encode, "decode": decode, "rd-curve": rd_curve,
    "simulate": simulate, "witness": witness,
    "dss-sim": dss_sim_cmd, "dss-bounds": dss_bounds,
}


def run_experiment(config: dict) -> int:
    """Dispatch a {'mode': ..., **flags} config; returns the exit status."""
    config = dict(config)
    try:
        mode = config.pop("mode")
        command = _MODES[mode]
    except KeyError as exc:
        click.echo(f"unknown or missing mode: {exc}", err=True)
        return 2
    args = []
    for key, value in config.items():
        args += [f"--{key.replace('_', '-')}", str(value)]
    try:
        command.main(args=args, standalone_mode=False)
    except (PolycodeError, click.UsageError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    main()
