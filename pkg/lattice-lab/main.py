import argparse
import logging
import os
import sys

from latticedex.analysis import diversity_and_product_distance, min_distance, overall_gain, side_info_gain
from latticedex.channel import SimConfig, diversity_slope, run_sim
from latticedex.codec import build_index_code, load_code, save_code, verify_isomorphism, write_points_csv
from latticedex.constants import DEFAULTS, EXIT_CODES, Channel
from latticedex.errors import (InfeasibleDesignError, InsufficientDataError, InvalidArgumentError, InvalidDesignError,
                               LatticedexError, TooLargeError)
from latticedex.util import canonical_json, format_side_info, get_nested_field, print_status
from utils.experiment import ChannelSweep, load_config, load_experiment, resolve_primes
from utils.presets import PRESETS, get_preset, preset_names
from utils.reporting import gain_table, gap_summary, write_sweep

CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.yaml")


def parse_side_info(text):
    """'1,2' -> (1, 2); '' or '{}' -> ()."""
    text = text.strip().strip("{}")
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InvalidArgumentError(f"Side information set '{text}' is not a comma-separated list of indices")


def parse_snr(text):
    """'0:30:2' (inclusive) or '0,5,10' -> list of dB values."""
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if step <= 0:
                raise InvalidArgumentError("SNR step must be positive")
            count = int(round((stop - start) / step)) + 1
            return [round(start + i * step, 10) for i in range(count)]
        return [float(v) for v in text.split(",")]
    except ValueError as e:
        raise InvalidArgumentError(f"Invalid SNR grid '{text}': {e}")


def _experiment(args):
    if args.preset:
        return get_preset(args.preset)
    if args.spec:
        return load_experiment(args.spec)
    raise InvalidArgumentError("Either --spec or --preset is required")


def _output_directory(args, spec, config):
    return (getattr(args, "out", None)
            or (spec.output.directory if spec is not None else None)
            or get_nested_field(config, "output", "directory")
            or "results")


def design_code(spec, config, radius_factor=None):
    field = spec.field.build()
    primes = resolve_primes(field, spec.primes)
    factor = radius_factor
    if factor is None:
        configured = get_nested_field(config, "design", "energy_radius_factor")
        use_config = "energy_radius_factor" not in spec.model_fields_set and configured is not None
        factor = configured if use_config else spec.energy_radius_factor
    cap = get_nested_field(config, "design", "enumeration_cap") or DEFAULTS["ENUMERATION_CAP"]
    return build_index_code(field, primes, factor, cap)


def cmd_design(args, config):
    spec = _experiment(args)
    code = design_code(spec, config, args.radius_factor)
    directory = _output_directory(args, spec, config)
    os.makedirs(directory, exist_ok=True)
    code_path = save_code(code, os.path.join(directory, f"{spec.name}.code.json"))
    points_path = write_points_csv(code, os.path.join(directory, f"{spec.name}.points.csv"))

    print_status("Field", f"{code.field} {code.field.signature} discriminant {code.field.discriminant}")
    print_status("Prime ideals", ", ".join(f"{p.label} N={p.norm}" for p in code.primes))
    print_status("Code", f"{code.size} points, gamma={code.gamma:.6f}")
    print_status("Written", f"{code_path}, {points_path}")
    return EXIT_CODES["OK"]


def cmd_analyze(args, config):
    spec = _experiment(args) if (args.spec or args.preset) else None
    if args.code_file:
        code = load_code(args.code_file)
    elif spec is not None:
        code = design_code(spec, config)
    else:
        raise InvalidArgumentError("Either a code file, --spec or --preset is required")
    max_k = get_nested_field(config, "analysis", "max_k") or DEFAULTS["MAX_K"]
    spot_checks = args.spot_checks
    if spot_checks is None:
        spot_checks = get_nested_field(config, "analysis", "spot_checks")
    if spot_checks is None:
        spot_checks = DEFAULTS["SPOT_CHECKS"]

    check = verify_isomorphism(code, max_k=max_k)
    print_status("CRT isomorphism", "passed" if check.passed else "FAILED")

    if args.sets:
        sets = [parse_side_info(text) for text in args.sets]
    else:
        sets = [tuple(S) for S in spec.analyze_sets] if spec is not None else []
    if sets:
        d0_sq = min_distance(code, ())
        reports = [side_info_gain(code, S, d0_sq, spot_checks) for S in sets]
        overall = None
    else:
        overall, reports = overall_gain(code, max_k, spot_checks)

    fading = {report.S: diversity_and_product_distance(code, report.S) for report in reports}
    base = diversity_and_product_distance(code, ())
    print(gain_table(reports, fading))
    print_status("S={}", f"d0^2={reports[0].d0_sq} diversity={base.diversity} d_p,min={base.product_distance}")
    if overall is not None:
        print_status("Overall gain", f"{overall:.4f} dB/bit/dim over {len(reports)} sets")
    if any(report.distance_source == "lattice" for report in reports):
        print("* distance of the sublattice the one-point subcode is carved from")

    violations = [report for report in reports if not report.within_bounds]
    for report in violations:
        label = format_side_info(report.S)
        if not report.gain_within_bounds:
            logging.error(f"S={label}: gain {report.gamma_db:.6f} dB outside "
                          f"[{report.lower_bound_db:.6f}, {report.upper_bound_db:.6f}]")
        if not report.distance_within_bounds:
            logging.error(f"S={label}: dS^2={report.dS_sq} outside [{report.ds_lower_sq}, {report.ds_upper_sq}]")
    if violations or not check.passed:
        return EXIT_CODES["VIOLATION"]
    return EXIT_CODES["OK"]


def _sweep_overrides(args):
    overrides = {}
    if args.channel:
        overrides["channel"] = args.channel
    if args.snr:
        overrides["snr_db"] = parse_snr(args.snr)
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.min_errors is not None:
        overrides["min_errors"] = args.min_errors
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.sets:
        overrides["side_info_sets"] = [list(parse_side_info(text)) for text in args.sets]
    if args.fade_per_complex:
        overrides["fade_per_complex"] = True
    if args.gap_at is not None:
        overrides["gap_at"] = args.gap_at
    return overrides


def cmd_simulate(args, config):
    spec = _experiment(args)
    base = spec.sweep.model_dump() if spec.sweep is not None else {}
    sweep = ChannelSweep.model_validate({**base, **_sweep_overrides(args)})
    code = load_code(args.code) if args.code else design_code(spec, config)

    workers = sweep.workers or get_nested_field(config, "simulation", "workers") or 1
    chunk_size = get_nested_field(config, "simulation", "chunk_size") or DEFAULTS["CHUNK_SIZE"]
    sim_config = SimConfig(code=code, channel=sweep.channel, snr_db=sweep.snr_db,
                           side_info_sets=[tuple(S) for S in sweep.side_info_sets], trials=sweep.trials,
                           min_errors=sweep.min_errors, seed=sweep.seed, workers=workers, chunk_size=chunk_size,
                           fade_per_complex=sweep.fade_per_complex)
    print_status("Simulating", f"{code.size}-point code, {sweep.channel.value}, {len(sweep.snr_db)} SNR points")
    result = run_sim(sim_config)

    directory = _output_directory(args, spec, config)
    paths = write_sweep(result, directory, spec.name)
    meta_path = os.path.join(directory, f"{spec.name}.{sweep.channel.value}.meta.json")
    with open(meta_path, "w", encoding="utf-8") as file:
        file.write(canonical_json({"seed": result.seed, "code_digest": result.code_digest,
                                   "config_digest": result.config_digest,
                                   "files": sorted(os.path.basename(path) for path in paths)}))
        file.write("\n")
    print_status("Written", f"{len(paths)} curve file(s) to {directory}")

    if sweep.channel is Channel.RAYLEIGH:
        for S in result.side_info_sets():
            try:
                slope = diversity_slope(result.curve(S))
                print_status(f"Diversity S={format_side_info(S)}", f"{slope:.3f}")
            except InsufficientDataError as e:
                logging.warning(f"No diversity estimate for S={format_side_info(S)}: {e}")

    if sweep.gap_at is not None:
        for S, gap in gap_summary(result, sweep.gap_at).items():
            value = "not bracketed" if gap is None else f"{gap:.2f} dB"
            print_status(f"Gain S={format_side_info(S)}", f"{value} at SER {sweep.gap_at:g}")
    return EXIT_CODES["OK"]


def cmd_presets(args, config):
    if args.name:
        print(get_preset(args.name).to_json())
        return EXIT_CODES["OK"]
    for name in preset_names():
        field = PRESETS[name]["field"]
        print_status(name, f"{field['family']}({field['parameter']})")
    return EXIT_CODES["OK"]


def build_parser():
    parser = argparse.ArgumentParser(description="Design, analyze and simulate lattice index codes over number fields.")
    parser.add_argument("--config", default=CONFIG_PATH, help=f"Tool configuration YAML (default: {CONFIG_PATH})")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    design = subparsers.add_parser("design", help="Build a code and write its JSON and point list")
    design.add_argument("--spec", help="Experiment document (JSON or YAML)")
    design.add_argument("--preset", choices=preset_names())
    design.add_argument("--out", help="Output directory")
    design.add_argument("--radius-factor", type=float, help="Initial search radius over the Minkowski bound")
    design.set_defaults(handler=cmd_design)

    analyze = subparsers.add_parser("analyze", help="Gains, bounds and fading metrics of a code file")
    analyze.add_argument("code_file", nargs="?", help="Code file written by `design`")
    analyze.add_argument("--spec", help="Experiment document; its analyze_sets apply when --sets is not given")
    analyze.add_argument("--preset", choices=preset_names())
    analyze.add_argument("--sets", nargs="*", default=[], help="Side information sets, e.g. 1 1,2 (default: all)")
    analyze.add_argument("--spot-checks", type=int, help="Random nonzero w_S values compared per set")
    analyze.set_defaults(handler=cmd_analyze)

    simulate = subparsers.add_parser("simulate", help="Monte-Carlo SER sweep")
    simulate.add_argument("--spec", help="Experiment document (JSON or YAML)")
    simulate.add_argument("--preset", choices=preset_names())
    simulate.add_argument("--code", help="Use this code file instead of designing from the experiment")
    simulate.add_argument("--channel", choices=[c.value for c in Channel])
    simulate.add_argument("--snr", help="SNR grid in dB, 'start:stop:step' or 'a,b,c'")
    simulate.add_argument("--trials", type=int, help="Maximum trials per point")
    simulate.add_argument("--min-errors", type=int, help="Stop a point after this many errors")
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--workers", type=int)
    simulate.add_argument("--sets", nargs="*", help="Side information sets; '' for none")
    simulate.add_argument("--fade-per-complex", action="store_true",
                          help="One fade per complex embedding instead of per real coordinate")
    simulate.add_argument("--gap-at", type=float, help="Print side information gains at this SER")
    simulate.add_argument("--out", help="Output directory")
    simulate.set_defaults(handler=cmd_simulate)

    presets = subparsers.add_parser("presets", help="List presets or print one as an experiment document")
    presets.add_argument("name", nargs="?", choices=preset_names())
    presets.set_defaults(handler=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CODES["OK"] if e.code == 0 else EXIT_CODES["USAGE"]

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s - %(levelname)s - %(message)s')
    try:
        config = load_config(args.config)
        return args.handler(args, config)
    except (InfeasibleDesignError, InvalidDesignError, TooLargeError) as e:
        logging.error(f"Infeasible design: {e}")
        return EXIT_CODES["INFEASIBLE"]
    except (LatticedexError, ValueError, OSError) as e:
        logging.error(str(e))
        return EXIT_CODES["USAGE"]


if __name__ == "__main__":
    sys.exit(main())
