"""Command line interface: fit signals, map Phi surfaces and reproduce the
reference numbers for the sign function."""
import csv
import json
import logging
import math

import click

from . import log as package_log
from .common import _format_float, _parse_range
from .exceptions import ExpoApproxException, InvalidArgumentsError, MalformedSignalError
from .objective import (
    DEFAULT_CLUSTER_TOL, FrequencySet, phi, phi_map, phi_sign_cluster_axis,
    phi_sign_one_freq
)
from .optimizer import OptimizeConfig, explore_conjecture, minimize_phi, solve_v0
from .signals import SampledSignal, SignFunction
from .version import __version__

# Module-level logger
log = logging.getLogger(__name__)

V0_TARGET = 0.742019
PHI_MIN_TARGET = 0.4749383
CLUSTER_LIMIT_TARGET = 0.25


class FitReport(object):
    """Everything ``fit`` writes about an optimization run."""

    def __init__(self, result, signal, config):
        self.lambdas = list(result.best_freqs.lambdas)
        self.basis = list(result.fit.basis)
        self.coefficients = list(result.fit.coefficients)
        self.f_min = result.fit.f_min
        self.rms_deflection = result.fit.rms_deflection
        self.n = config.n
        self.starts = config.starts
        self.starts_converged = result.starts_converged
        self.evaluations = result.evaluations
        self.seed = config.seed
        self.signal = signal.descriptor

    def to_dict(self):
        return {
            "signal": self.signal,
            "n": self.n,
            "seed": self.seed,
            "starts": self.starts,
            "starts_converged": self.starts_converged,
            "evaluations": self.evaluations,
            "lambdas": [{"u": lam.real, "v": lam.imag} for lam in self.lambdas],
            "basis": [
                {"degree": term.degree, "u": term.lam.real, "v": term.lam.imag}
                for term in self.basis
            ],
            "coefficients": [{"re": a.real, "im": a.imag} for a in self.coefficients],
            "f_min": self.f_min,
            "rms_deflection": self.rms_deflection,
        }

    def dumps(self):
        # json emits repr() floats: shortest round-trip text, locale independent
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _load_signal(text):
    if text == "sign":
        return SignFunction()
    if text.startswith("csv:"):
        try:
            return SampledSignal.read_csv(text[len("csv:"):])
        except MalformedSignalError as e:
            raise click.BadParameter(str(e), param_hint="'--signal'") from e
    msg = "expected 'sign' or 'csv:PATH', got '{}'"
    raise click.BadParameter(msg.format(text), param_hint="'--signal'")


def _range_option(ctx, param, value):
    if value is None:
        return None
    try:
        return _parse_range(value)
    except InvalidArgumentsError as e:
        raise click.BadParameter(str(e)) from e


@click.group()
@click.option("-v", "--verbose", count=True, help="Log progress (-v) or details (-vv).")
@click.version_option(__version__)
def main(verbose):
    """Root mean square approximation by sums of exponentials."""
    if verbose >= 2:
        package_log.setLevel(logging.DEBUG)
    elif verbose == 1:
        package_log.setLevel(logging.INFO)
    else:
        package_log.setLevel(logging.WARNING)


@main.command()
@click.option("--starts", type=click.IntRange(min=1), default=32, show_default=True,
              help="Simplex starts for the two-frequency search.")
@click.option("--seed", type=click.IntRange(min=0), default=7, show_default=True)
@click.option("--perturb", type=float, default=0.0, hidden=True)
@click.pass_context
def reproduce(ctx, starts, seed, perturb):
    """Reproduce v0, the one-frequency minimum and the cluster limit."""
    sign = SignFunction()
    v0 = solve_v0() + perturb
    phi_plus = phi(FrequencySet([1j * v0]), sign)
    phi_minus = phi(FrequencySet([-1j * v0]), sign)
    closed_form = phi_sign_one_freq(0.0, v0)
    cluster_limit = phi_sign_cluster_axis(0.0)
    two = minimize_phi(sign, OptimizeConfig(n=2, starts=starts, seed=seed))

    checks = [
        ("v0", v0, V0_TARGET, 1e-5),
        ("phi_min(n=1)", phi_plus, PHI_MIN_TARGET, 1e-5),
        ("cluster limit", cluster_limit, CLUSTER_LIMIT_TARGET, 1e-6),
    ]
    rows = [
        ("v0", _format_float(v0)),
        ("spectrum point +i*v0", "phi = " + _format_float(phi_plus)),
        ("spectrum point -i*v0", "phi = " + _format_float(phi_minus)),
        ("phi_min(n=1) closed form", _format_float(closed_form)),
        ("cos^2(pi*v0)", _format_float(math.cos(math.pi * v0) ** 2)),
        ("cluster limit v->0", _format_float(cluster_limit)),
        ("best phi(n=2)", _format_float(two.best_phi)),
        ("best spectrum(n=2)", ", ".join(
            "{}{:+.6f}i".format(_format_float(lam.real), lam.imag)
            for lam in two.best_freqs.lambdas)),
    ]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        click.echo("{}  {}".format(name.ljust(width), value))

    failed = False
    for name, value, target, tol in checks:
        ok = abs(value - target) < tol
        failed = failed or not ok
        click.echo("{}: {} (target {!r} +- {:g})".format(
            name, "ok" if ok else "MISS", target, tol))
    if failed:
        ctx.exit(1)


@main.command()
@click.option("--signal", "signal_text", required=True, help="'sign' or 'csv:PATH'.")
@click.option("--n", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--starts", type=click.IntRange(min=1), default=32, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the fit report (JSON) here.")
def fit(signal_text, n, starts, seed, cluster_tol, workers, out):
    """Find the best n-frequency approximation of a signal."""
    signal = _load_signal(signal_text)
    try:
        config = OptimizeConfig(n=n, starts=starts, seed=seed, cluster_tol=cluster_tol,
                                workers=workers)
    except InvalidArgumentsError as e:
        raise click.UsageError(str(e)) from e
    try:
        result = minimize_phi(signal, config)
    except ExpoApproxException as e:
        raise click.ClickException(str(e)) from e
    report = FitReport(result, signal, config)
    if out:
        with open(out, "w") as f:
            f.write(report.dumps())
        log.info("Wrote fit report to %s", out)
    click.echo(_format_float(report.f_min))


@main.command("phi-map")
@click.option("--signal", "signal_text", default="sign", show_default=True,
              help="'sign' or 'csv:PATH'.")
@click.option("--n", "mode", type=click.Choice(["1", "2cluster"]), default="1", show_default=True)
@click.option("--u", "u_range", required=True, callback=_range_option, help="MIN:MAX:STEPS")
@click.option("--v", "v_range", required=True, callback=_range_option, help="MIN:MAX:STEPS")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), required=True)
def phi_map_command(signal_text, mode, u_range, v_range, workers, out):
    """Write Phi on a (u, v) grid as CSV rows u,v,phi."""
    signal = _load_signal(signal_text)
    try:
        points = phi_map(u_range, v_range, signal=signal, mode=mode, workers=workers)
    except ExpoApproxException as e:
        raise click.ClickException(str(e)) from e
    with open(out, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["u", "v", "phi"])
        for u, v, value in points:
            writer.writerow([_format_float(u), _format_float(v), _format_float(value)])
    log.info("Wrote %d grid points to %s", len(points), out)


@main.command()
@click.option("--u", "u_range", default="-1:1:21", show_default=True, callback=_range_option)
@click.option("--v", "v_range", default="-2:2:21", show_default=True, callback=_range_option)
def explore(u_range, v_range):
    """Explore the two-frequency infimum of Phi for the sign function."""
    report = explore_conjecture(u_range, v_range)
    for eps, value in report.shrinking:
        click.echo("phi(i*{0}, -i*{0}) = {1}".format(_format_float(eps), _format_float(value)))
    click.echo("grid pairs evaluated: {}".format(report.pairs_evaluated))
    if report.grid_argmin is not None:
        lam_1, lam_2 = report.grid_argmin
        click.echo("grid minimum: {} at ({!r}, {!r})".format(
            _format_float(report.grid_min), lam_1, lam_2))
    if report.conjecture_violated:
        click.echo("FINDING: phi < 1/4 for non-cluster pairs ({} grid pairs below)".format(
            report.below_quarter))
    else:
        click.echo("no pair below 1/4 found")


if __name__ == "__main__":
    main()
