"""Declarative experiment configuration.

A run is described by one TOML file with up to nine tables:

    [kernel]        family ("zero" | "rescaled" | "rheological") + parameters
    [spectrum]      n, optional collocation grid size
    [nonlinearity]  name + parameters (default "zero")
    [forcing]       modal = [g_1, ..] (default none)
    [grids]         dt, output_every, n_age, s_min, tail_tol
    [init]          a = [..], b = [..] modal data, padded with zeros
    [run]           tau, t_end
    [scenario]      kind + sweep values, for the experiment command
    [output]        directory, prefix

Time profiles (the rescaled family's eps, the rheological family's k0)
are inline tables naming a registered profile, e.g.
``eps = {name = "constant", value = 1.0}``.  Unknown tables, keys, or
registry names raise ConfigError citing the offending key, so a typo
cannot silently fall back to a default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

import numpy as np

from .kernels import (BASE_SHAPES, TIME_PROFILES, ConfigError, RescaledKernel,
                      RheologicalKernel, ZeroKernel)
from .spectral import Nonlinearity, Spectrum, make_nonlinearity


def _take(block, key, default=None, required=False, where=""):
    if required and key not in block:
        raise ConfigError("missing required key %s.%s" % (where, key))
    return block.pop(key, default)


def _done(block, where):
    if block:
        raise ConfigError("unknown key %s.%s" % (where, sorted(block)[0]))


def build_profile(block, where):
    if not isinstance(block, dict):
        raise ConfigError("%s must be a table naming a time profile" % where)
    block = dict(block)
    name = _take(block, "name", required=True, where=where)
    try:
        factory = TIME_PROFILES[name]
    except KeyError:
        raise ConfigError("%s.name: unknown time profile %r (have: %s)"
                          % (where, name, ", ".join(sorted(TIME_PROFILES))))
    try:
        return factory(**block)
    except TypeError as exc:
        raise ConfigError("%s: bad parameters for profile %r: %s"
                          % (where, name, exc))


def build_kernel(block):
    block = dict(block)
    family = _take(block, "family", required=True, where="kernel")
    if family == "zero":
        _done(block, "kernel")
        return ZeroKernel()
    if family == "rescaled":
        shape_name = _take(block, "shape", default="exponential", where="kernel")
        if shape_name not in BASE_SHAPES:
            raise ConfigError("kernel.shape: unknown shape %r (have: %s)"
                              % (shape_name, ", ".join(sorted(BASE_SHAPES))))
        eps = build_profile(_take(block, "eps", required=True, where="kernel"),
                            "kernel.eps")
        _done(block, "kernel")
        return RescaledKernel(shape=BASE_SHAPES[shape_name], eps=eps)
    if family == "rheological":
        k0 = build_profile(_take(block, "k0", required=True, where="kernel"),
                           "kernel.k0")
        gamma = float(_take(block, "gamma", default=1.0, where="kernel"))
        rho = float(_take(block, "rho", default=1.0, where="kernel"))
        _done(block, "kernel")
        kernel = RheologicalKernel(K0=k0, gamma=gamma, rho=rho)
        if k0.antideriv is None:
            kernel = kernel.with_cached_antiderivative(-50.0, 50.0)
        return kernel
    raise ConfigError("kernel.family: unknown family %r" % family)


def build_spectrum(block):
    block = dict(block)
    n = int(_take(block, "n", required=True, where="spectrum"))
    collocation = _take(block, "collocation", where="spectrum")
    _done(block, "spectrum")
    return Spectrum.interval(n, collocation=None if collocation is None
                             else int(collocation))


def build_nonlinearity(block):
    block = dict(block)
    name = _take(block, "name", default="zero", where="nonlinearity")
    try:
        return make_nonlinearity(name, **block)
    except TypeError as exc:
        raise ConfigError("nonlinearity: bad parameters for %r: %s" % (name, exc))


@dataclass(frozen=True)
class GridConfig:
    dt: float
    output_every: int = 10
    n_age: int = 256
    s_min: float = 1e-4
    tail_tol: float = 1e-10

    def __post_init__(self):
        if self.dt <= 0 or self.n_age < 2 or self.s_min <= 0 or self.tail_tol <= 0:
            raise ConfigError("grids: dt, n_age, s_min, tail_tol must be positive")
        if self.output_every < 1:
            raise ConfigError("grids.output_every must be at least 1")


@dataclass(frozen=True)
class RunWindow:
    tau: float
    t_end: float

    def __post_init__(self):
        if self.t_end <= self.tau:
            raise ConfigError("run: t_end must exceed tau")


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    prefix: str = "run"


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed configuration; blocks absent from the file are None."""

    path: str
    kernel_block: Optional[dict] = None
    spectrum_block: Optional[dict] = None
    nonlinearity_block: dict = field(default_factory=dict)
    forcing_modal: Optional[list] = None
    grids: Optional[GridConfig] = None
    init_a: Optional[list] = None
    init_b: Optional[list] = None
    run: Optional[RunWindow] = None
    scenario: Optional[dict] = None
    output: OutputConfig = OutputConfig()

    def kernel(self):
        if self.kernel_block is None:
            raise ConfigError("%s: missing [kernel] table" % self.path)
        return build_kernel(self.kernel_block)

    def spectrum(self):
        if self.spectrum_block is None:
            raise ConfigError("%s: missing [spectrum] table" % self.path)
        return build_spectrum(self.spectrum_block)

    def nonlinearity(self):
        return build_nonlinearity(self.nonlinearity_block)

    def forcing(self, n_modes):
        if self.forcing_modal is None:
            return None
        g = np.asarray([float(x) for x in self.forcing_modal])
        if g.size > n_modes:
            raise ConfigError("forcing.modal has more entries than modes")
        return np.pad(g, (0, n_modes - g.size))

    def initial_state(self, n_modes):
        def modal(values, label):
            if values is None:
                return np.zeros(n_modes)
            arr = np.asarray([float(x) for x in values])
            if arr.size > n_modes:
                raise ConfigError("init.%s has more entries than modes" % label)
            return np.pad(arr, (0, n_modes - arr.size))
        return modal(self.init_a, "a"), modal(self.init_b, "b")

    def need_grids(self):
        if self.grids is None:
            raise ConfigError("%s: missing [grids] table" % self.path)
        return self.grids

    def need_run(self):
        if self.run is None:
            raise ConfigError("%s: missing [run] table" % self.path)
        return self.run

    def need_scenario(self):
        if self.scenario is None:
            raise ConfigError("%s: missing [scenario] table" % self.path)
        return dict(self.scenario)


def load_config(path):
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError("config file not found: %s" % path)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("%s: %s" % (path, exc))

    kernel_block = raw.pop("kernel", None)
    spectrum_block = raw.pop("spectrum", None)
    nonlinearity_block = raw.pop("nonlinearity", {})

    forcing_modal = None
    if "forcing" in raw:
        fb = dict(raw.pop("forcing"))
        forcing_modal = _take(fb, "modal", required=True, where="forcing")
        _done(fb, "forcing")

    grids = None
    if "grids" in raw:
        gb = dict(raw.pop("grids"))
        grids = GridConfig(
            dt=float(_take(gb, "dt", required=True, where="grids")),
            output_every=int(_take(gb, "output_every", default=10, where="grids")),
            n_age=int(_take(gb, "n_age", default=256, where="grids")),
            s_min=float(_take(gb, "s_min", default=1e-4, where="grids")),
            tail_tol=float(_take(gb, "tail_tol", default=1e-10, where="grids")))
        _done(gb, "grids")

    init_a = init_b = None
    if "init" in raw:
        ib = dict(raw.pop("init"))
        init_a = _take(ib, "a", where="init")
        init_b = _take(ib, "b", where="init")
        _done(ib, "init")

    run = None
    if "run" in raw:
        rb = dict(raw.pop("run"))
        run = RunWindow(tau=float(_take(rb, "tau", default=0.0, where="run")),
                        t_end=float(_take(rb, "t_end", required=True, where="run")))
        _done(rb, "run")

    scenario = raw.pop("scenario", None)

    output = OutputConfig()
    if "output" in raw:
        ob = dict(raw.pop("output"))
        output = OutputConfig(
            directory=str(_take(ob, "directory", default="out", where="output")),
            prefix=str(_take(ob, "prefix", default="run", where="output")))
        _done(ob, "output")

    if raw:
        raise ConfigError("%s: unknown table [%s]" % (path, sorted(raw)[0]))

    return ExperimentConfig(
        path=str(path), kernel_block=kernel_block, spectrum_block=spectrum_block,
        nonlinearity_block=nonlinearity_block, forcing_modal=forcing_modal,
        grids=grids, init_a=init_a, init_b=init_b, run=run,
        scenario=scenario, output=output)
