import logging
import os

from latticedex.channel import si_gain_from_curves, write_curve_csv
from latticedex.errors import NotBracketedError
from latticedex.util import format_side_info


def format_table(headers, rows):
    """Left-aligned text table with a dashed rule under the header."""
    cells = [[str(h) for h in headers]] + [["-" if v is None else str(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = ["  ".join(value.ljust(width) for value, width in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)


def _db(value):
    return None if value is None else f"{value:.4f}"


def _sq(value):
    return None if value is None else f"{value:.4g}"


def gain_table(reports, fading):
    """One row per side information set: rate, distances, gain, bounds, diversity and product distance."""
    headers = ["S", "R_S", "d0^2", "dS^2", "dS^2_lo", "dS^2_hi", "gain_db", "lower_db", "upper_db", "ok", "D",
               "d_p,min"]
    rows = []
    for report in reports:
        fade = fading.get(report.S)
        product = None if fade is None or fade.product_distance is None else f"{fade.product_distance:.6g}"
        rows.append([
            format_side_info(report.S),
            f"{report.rate:.4f}",
            report.d0_sq,
            f"{report.dS_sq}" + ("*" if report.distance_source == "lattice" else ""),
            _sq(report.ds_lower_sq),
            _sq(report.ds_upper_sq),
            _db(report.gamma_db),
            _db(report.lower_bound_db),
            _db(report.upper_bound_db),
            "yes" if report.within_bounds else "NO",
            None if fade is None else fade.diversity,
            product,
        ])
    return format_table(headers, rows)


def sweep_filename(name, channel, S):
    label = "-".join(str(k) for k in S) if S else "none"
    return f"{name}.{channel.value}.S-{label}.csv"


def write_sweep(result, directory, name):
    """One CSV per side information set of the sweep."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for S in result.side_info_sets():
        paths.append(write_curve_csv(result, os.path.join(directory, sweep_filename(name, result.channel, S)), S))
    return paths


def gap_summary(result, target_ser):
    """Side information gain of every nonempty set against the S = {} curve, None when not bracketed."""
    base = result.curve(())
    gaps = {}
    for S in result.side_info_sets():
        if not S:
            continue
        try:
            gaps[S] = si_gain_from_curves(base, result.curve(S), target_ser)
        except NotBracketedError as e:
            logging.warning(f"No gap for S={format_side_info(S)} at SER {target_ser:g}: {e}")
            gaps[S] = None
    return gaps
