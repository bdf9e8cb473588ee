"""
Command line entry point. Every subcommand builds a RunConfig from its flags
and the optional config file, runs one interactor and writes the artifact.

Exit codes: 0 success, 2 usage error (including invalid simulation settings),
3 numeric failure, 4 I/O failure.
"""
import logging
from pathlib import Path
from typing import Any, Optional

import click
import confuse  # type: ignore
from pydantic import ValidationError

import hvi.domain as d
import hvi.interactors as i
from hvi import __version__
from hvi.config import load_settings
from hvi.dto import Command, RunConfig
from hvi.log import command_context, setup_logging
from hvi.output import write_artifact

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

INTERACTORS: dict[Command, type[i.BaseInteractor]] = {
    Command.AA: i.ActionAngle,
    Command.Basis: i.Basis,
    Command.Portrait: i.Portrait,
    Command.LPT: i.LimitingPhaseTrajectory,
    Command.Stationary: i.StationaryPoints,
    Command.Locus: i.StationaryLocus,
    Command.Boundary: i.TransitionBoundary,
    Command.Jump: i.EnergyJump,
    Command.FreqResp: i.FrequencyResponse,
    Command.EnergyMap: i.EnergyMap,
    Command.Simulate: i.Simulate,
    Command.Sweep: i.Sweep,
}


def build_run_config(
    command: Command, flags: dict[str, Any], settings: confuse.Configuration
) -> RunConfig:
    """
    Flags win over the config file, the config file over the defaults.
    """
    values: dict[str, Any] = {}
    for name in RunConfig.model_fields:
        if name == "command":
            continue
        flag = flags.get(name)
        if flag is not None:
            values[name] = flag
        elif settings[name].exists():
            values[name] = settings[name].get()
    return RunConfig(command=command, **values)


def run_command(
    command: Command, flags: dict[str, Any], config_path: Optional[Path] = None
) -> int:
    try:
        settings = load_settings(
            config_path, {"eps": flags.get("eps"), "jobs": flags.get("jobs")}
        )
        setup_logging(settings)
        dto = build_run_config(command, flags, settings)
    except (ValidationError, confuse.ConfigError) as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_USAGE

    interactor = INTERACTORS[command](settings)
    with command_context(command.value):
        try:
            artifact = interactor(dto)
            write_artifact(
                artifact,
                command.value,
                dto.provenance(),
                dto.output_path,
                digits=interactor.digits,
                stream=click.get_text_stream("stdout"),
            )
        except (i.InteractorException, d.InvalidSimConfigError) as e:
            click.echo(f"Error: {e!r}", err=True)
            return EXIT_USAGE
        except d.HVIException as e:
            logger.error("%r", e)
            click.echo(f"Error: {e!r}", err=True)
            return EXIT_NUMERIC
        except OSError as e:
            logger.error("%s", e)
            click.echo(f"Error: {e}", err=True)
            return EXIT_IO
    return 0


COMMON_OPTIONS = [
    click.option("--eps", type=float, default=None, help="Small parameter."),
    click.option("--jobs", type=int, default=None, help="Worker processes."),
    click.option(
        "--out",
        "output_path",
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help="CSV file to write, stdout if omitted.",
    ),
    click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None,
        help="YAML or flat 'key = value' config file.",
    ),
]


def common_options(func):
    for option in reversed(COMMON_OPTIONS):
        func = option(func)
    return func


def _run(command: Command, config_path: Optional[Path], **flags) -> None:
    code = run_command(command, flags, config_path)
    if code:
        raise SystemExit(code)


sigma_option = click.option("--sigma", default=None, help="Detuning, lo:hi:count.")
f_option = click.option("--f", "f", default=None, help="Forcing, lo:hi:count.")
xi_crit_option = click.option(
    "--xi-crit", type=float, default=None, help="Threshold energy."
)
horizon_option = click.option("--horizon", type=float, default=None)
estimator_option = click.option(
    "--estimator", type=click.Choice(["instantaneous", "windowed"]), default=None
)
nu_samples_option = click.option("--nu-samples", type=int, default=None)
xi_max_option = click.option("--xi-max", type=float, default=None)


@click.group()
@click.version_option(__version__, prog_name="hvi")
def main():
    """Hybrid vibro-impact oscillator analysis."""


@main.command()
@common_options
@click.option("--xi", default=None, help="Averaged energy, lo:hi:count.")
def aa(config_path, **flags):
    """Action-angle quantities."""
    _run(Command.AA, config_path, **flags)


@main.command()
@common_options
@click.option("--beta", type=float, default=None)
@click.option("--tau", default=None, help="Fast time, lo:hi:count.")
@click.option("--harmonics", type=int, default=None, help="Fourier table size.")
def basis(config_path, **flags):
    """Nonsmooth basis function or its Fourier coefficients."""
    _run(Command.Basis, config_path, **flags)


@main.command()
@common_options
@sigma_option
@f_option
@click.option("--xi", default=None, help="Energy axis, lo:hi:count.")
@nu_samples_option
@xi_max_option
def portrait(config_path, **flags):
    """Conservation law on a grid plus the limiting phase trajectory."""
    _run(Command.Portrait, config_path, **flags)


@main.command()
@common_options
@sigma_option
@f_option
@nu_samples_option
@xi_max_option
def lpt(config_path, **flags):
    """Limiting phase trajectory."""
    _run(Command.LPT, config_path, **flags)


@main.command()
@common_options
@sigma_option
@f_option
@click.option("--xi-window", type=float, default=None)
def stationary(config_path, **flags):
    """Stationary points of the resonance manifold."""
    _run(Command.Stationary, config_path, **flags)


@main.command()
@common_options
@click.option("--xi", default=None, help="Stationary energies, lo:hi:count.")
def locus(config_path, **flags):
    """Detuning and forcing of saddle connections on nu = pi."""
    _run(Command.Locus, config_path, **flags)


@main.command()
@common_options
@xi_crit_option
@sigma_option
def boundary(config_path, **flags):
    """Transition boundary f_crit(sigma)."""
    _run(Command.Boundary, config_path, **flags)


@main.command()
@common_options
@sigma_option
def jump(config_path, **flags):
    """Energy reached after crossing the type-I boundary."""
    _run(Command.Jump, config_path, **flags)


@main.command()
@common_options
@f_option
@sigma_option
def freqresp(config_path, **flags):
    """Frequency response curves."""
    _run(Command.FreqResp, config_path, **flags)


@main.command("energy-map")
@common_options
@sigma_option
@f_option
@click.option("--verify", is_flag=True, default=None, help="Check against the LPT.")
@nu_samples_option
@xi_max_option
def energy_map(config_path, **flags):
    """Maximal transient energy over the forcing plane."""
    _run(Command.EnergyMap, config_path, **flags)


@main.command()
@common_options
@sigma_option
@f_option
@horizon_option
@click.option("--q0", type=float, default=None)
@click.option("--p0", type=float, default=None)
@xi_crit_option
@estimator_option
def simulate(config_path, **flags):
    """Time-domain run from a given initial state."""
    _run(Command.Simulate, config_path, **flags)


@main.command()
@common_options
@xi_crit_option
@sigma_option
@horizon_option
@estimator_option
def sweep(config_path, **flags):
    """Numeric against analytic transition boundary."""
    _run(Command.Sweep, config_path, **flags)
