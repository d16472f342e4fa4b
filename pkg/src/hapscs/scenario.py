"""Network topology, base-station profiles, traffic generation and config loading."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s
EARTH_RADIUS_M = 6_371_000.0

SBS_CLASSES = ("rrh", "micro", "pico", "femto")
BS_CLASSES = ("haps", "macro") + SBS_CLASSES


class ConfigError(ValueError):
    """Raised for malformed or invalid scenario files."""


@dataclass(frozen=True)
class BsProfile:
    class_name: str
    eta: float
    p_transmit: float  # W
    p_operational: float  # W
    p_sleep: float  # W
    capacity: float
    antenna_gain_dbi: float = 0.0
    height_m: float = 10.0

    def __post_init__(self):
        if self.class_name not in BS_CLASSES:
            raise ConfigError(f"profile.class_name: unknown class {self.class_name!r}")
        if self.eta <= 0:
            raise ConfigError(f"profile[{self.class_name}].eta must be > 0")
        if self.capacity <= 0:
            raise ConfigError(f"profile[{self.class_name}].capacity must be > 0")
        for name in ("p_transmit", "p_operational", "p_sleep"):
            if getattr(self, name) < 0:
                raise ConfigError(f"profile[{self.class_name}].{name} must be >= 0")
        if self.p_sleep > self.p_operational:
            raise ConfigError(f"profile[{self.class_name}].p_sleep exceeds p_operational")


# Power rows: (eta, P_T [W], P_O [W], P_S [W]); capacities and gains from the setup table.
TABLE_PROFILES = {
    "haps": BsProfile("haps", 4.7, 20.0, 130.0, 75.0, 40.0, 43.2, 20_000.0),
    "macro": BsProfile("macro", 4.7, 20.0, 130.0, 75.0, 20.0, 8.0, 25.0),
    "rrh": BsProfile("rrh", 2.8, 20.0, 84.0, 56.0, 5.0),
    "micro": BsProfile("micro", 2.6, 6.3, 56.0, 39.0, 5.0),
    "pico": BsProfile("pico", 4.0, 0.13, 6.8, 4.3, 5.0),
    "femto": BsProfile("femto", 8.0, 0.05, 4.8, 2.9, 5.0),
}


@dataclass(frozen=True)
class NetworkLayout:
    area_m: tuple[float, float]
    sbs_positions: tuple[tuple[float, float], ...]
    sbs_classes: tuple[str, ...]
    cell_radius_m: float
    mbs_position: tuple[float, float]
    haps_ground_position: tuple[float, float] = (0.0, 0.0)
    haps_altitude_m: float = 20_000.0
    earth_radius_m: float = EARTH_RADIUS_M
    carrier_freq_ghz: float = 2.5
    ue_height_m: float = 1.5
    env_height_m: float = 1.0

    def __post_init__(self):
        if self.haps_altitude_m <= 0:
            raise ConfigError("haps_altitude_m must be > 0")
        if len(self.sbs_positions) != len(self.sbs_classes):
            raise ConfigError("sbs_positions and sbs_classes differ in length")
        w, h = self.area_m
        for x, y in self.sbs_positions:
            if not (0 <= x <= w and 0 <= y <= h):
                raise ConfigError(f"SBS position ({x}, {y}) lies outside the area")
        if len(set(self.sbs_positions)) != len(self.sbs_positions):
            raise ConfigError("SBS positions must be distinct")

    @property
    def num_sbs(self) -> int:
        return len(self.sbs_positions)


@dataclass(frozen=True)
class TrafficComponent:
    mean: tuple[float, float]
    stddev_m: float
    weight: float = 1.0


@dataclass(frozen=True)
class TrafficModel:
    kind: str  # gaussian | gaussian_mixture_2 | uniform
    alpha: float
    components: tuple[TrafficComponent, ...] = ()
    # optional per-step (mean, stddev) replacing the single Gaussian component
    time_trace: Optional[tuple[tuple[tuple[float, float], float], ...]] = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"traffic.alpha out of range: {self.alpha}")
        if self.kind not in ("gaussian", "gaussian_mixture_2", "uniform"):
            raise ConfigError(f"traffic.kind: unknown kind {self.kind!r}")
        if self.kind == "gaussian" and len(self.components) != 1:
            raise ConfigError("traffic.components: gaussian needs exactly one component")
        if self.kind == "gaussian_mixture_2" and len(self.components) != 2:
            raise ConfigError("traffic.components: gaussian_mixture_2 needs two components")
        for c in self.components:
            if c.stddev_m <= 0:
                raise ConfigError("traffic.stddev_m must be > 0")
        if self.components and not math.isclose(sum(c.weight for c in self.components), 1.0, abs_tol=1e-9):
            raise ConfigError("traffic.components: weights must sum to 1")
        if self.time_trace is not None:
            if self.kind != "gaussian":
                raise ConfigError("traffic.time_trace is only supported for the gaussian kind")
            if any(sd <= 0 for _, sd in self.time_trace):
                raise ConfigError("traffic.time_trace: stddev must be > 0")


@dataclass(frozen=True)
class ScenarioConfig:
    layout: NetworkLayout
    profiles: tuple[BsProfile, ...]
    traffic: TrafficModel
    p_min_dbm: float = -70.0
    sigma_los_db: float = 4.0
    sigma_nlos_db: float = 6.0
    u_max_mbs: int = 20
    u_max_haps: int = 40
    lambda_m0: float = 0.0
    lambda_h0: float = 0.0
    num_steps: int = 1
    rng_seed: int = 0
    case_study: str = "custom"
    redraw_shadowing: bool = True

    def __post_init__(self):
        for name in ("lambda_m0", "lambda_h0"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} out of range: {v}")
        if self.u_max_mbs < 1 or self.u_max_haps < 1:
            raise ConfigError("u_max_mbs and u_max_haps must be >= 1")
        if self.num_steps < 1:
            raise ConfigError("num_steps must be >= 1")
        if self.sigma_los_db < 0 or self.sigma_nlos_db < 0:
            raise ConfigError("shadowing stddev must be >= 0")
        if self.case_study not in ("A", "B", "custom"):
            raise ConfigError(f"case_study: unknown value {self.case_study!r}")
        names = {p.class_name for p in self.profiles}
        missing = ({"macro", "haps"} | set(self.layout.sbs_classes)) - names
        if missing:
            raise ConfigError(f"profiles: missing classes {sorted(missing)}")
        if self.traffic.time_trace is not None and len(self.traffic.time_trace) < self.num_steps:
            raise ConfigError("traffic.time_trace shorter than num_steps")

    def profile(self, class_name: str) -> BsProfile:
        for p in self.profiles:
            if p.class_name == class_name:
                return p
        raise KeyError(class_name)

    @property
    def sbs_profiles(self) -> list[BsProfile]:
        return [self.profile(c) for c in self.layout.sbs_classes]

    def to_dict(self) -> dict:
        return asdict(self)


def grid_positions(area_m: Sequence[float], num_sbs: int) -> list[tuple[float, float]]:
    """SBS sites at the cell centres of a uniform k-by-k grid (row-major)."""
    k = math.isqrt(num_sbs)
    if k * k != num_sbs:
        raise ConfigError(f"num_sbs must be a perfect square for grid layout, got {num_sbs}")
    w, h = area_m
    return [((i + 0.5) * w / k, (j + 0.5) * h / k) for j in range(k) for i in range(k)]


def case_b_classes(num_sbs: int) -> list[str]:
    # Interleaved micro/rrh/pico/femto; 49 sites -> 13 micro and 12 of each other type.
    order = ("micro", "rrh", "pico", "femto")
    return [order[i % 4] for i in range(num_sbs)]


DEFAULT_STDDEV_M = 700.0


def case_study_preset(which: str, num_sbs: int = 49) -> ScenarioConfig:
    if which not in ("A", "B"):
        raise ConfigError(f"unknown case study {which!r}")
    area = (2000.0, 2000.0)
    centre = (area[0] / 2, area[1] / 2)
    positions = grid_positions(area, num_sbs)
    if which == "A":
        classes = ["micro"] * num_sbs
        profiles = [replace(TABLE_PROFILES["micro"], p_sleep=0.0)]
    else:
        classes = case_b_classes(num_sbs)
        profiles = [TABLE_PROFILES[c] for c in SBS_CLASSES]
    profiles = [TABLE_PROFILES["haps"], TABLE_PROFILES["macro"], *profiles]
    layout = NetworkLayout(
        area_m=area,
        sbs_positions=tuple(positions),
        sbs_classes=tuple(classes),
        cell_radius_m=50.0,
        mbs_position=centre,
        haps_ground_position=(0.0, 0.0),
        haps_altitude_m=20_000.0,
        carrier_freq_ghz=2.5,
    )
    traffic = TrafficModel("gaussian", 0.5, (TrafficComponent(centre, DEFAULT_STDDEV_M),))
    return ScenarioConfig(layout=layout, profiles=tuple(profiles), traffic=traffic, case_study=which)


# ---------------------------------------------------------------------------
# traffic


def _components_at(traffic: TrafficModel, step: int) -> tuple[TrafficComponent, ...]:
    if traffic.time_trace is None:
        return traffic.components
    mean, sd = traffic.time_trace[step]
    return (TrafficComponent(tuple(mean), sd, 1.0),)


def _density(points: np.ndarray, comps: Sequence[TrafficComponent]) -> np.ndarray:
    out = np.zeros(len(points))
    for c in comps:
        d2 = np.sum((points - np.asarray(c.mean)) ** 2, axis=1)
        out += c.weight / (2 * math.pi * c.stddev_m**2) * np.exp(-0.5 * d2 / c.stddev_m**2)
    return out


def _mode_density(comps: Sequence[TrafficComponent]) -> float:
    if len(comps) == 1:
        return _density(np.asarray([comps[0].mean], dtype=float), comps)[0]
    from scipy.optimize import minimize

    best = 0.0
    for c in comps:
        res = minimize(lambda p: -_density(p[None, :], comps)[0], np.asarray(c.mean, dtype=float),
                       method="Nelder-Mead", options={"xatol": 1e-6, "fatol": 1e-18})
        best = max(best, -res.fun, _density(np.asarray([c.mean], dtype=float), comps)[0])
    return best


def generate_loads(config: ScenarioConfig, step: int = 0, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Per-SBS load factors for one time step.

    Loads follow the spatial traffic density evaluated at each SBS site and are
    scaled so that a site at the density mode carries exactly ``alpha``.  The
    density model is deterministic, so ``rng`` is accepted for interface
    symmetry but not consumed.
    """
    if not 0 <= step < config.num_steps:
        raise IndexError(f"step {step} outside [0, {config.num_steps})")
    traffic = config.traffic
    n = config.layout.num_sbs
    if traffic.kind == "uniform":
        return np.full(n, traffic.alpha)
    comps = _components_at(traffic, step)
    pts = np.asarray(config.layout.sbs_positions, dtype=float)
    loads = traffic.alpha * _density(pts, comps) / _mode_density(comps)
    # quantised so that mirror-symmetric sites get bit-identical loads
    return np.clip(np.round(loads, 12), 0.0, 1.0)


# ---------------------------------------------------------------------------
# config files

TOP_KEYS = {
    "case_study", "area_m", "num_sbs", "cell_radius_m", "carrier_freq_ghz", "haps_altitude_m",
    "p_min_dbm", "traffic", "u_max_mbs", "u_max_haps", "lambda_m0", "lambda_h0", "num_steps",
    "rng_seed", "profiles", "sigma_los_db", "sigma_nlos_db", "redraw_shadowing",
}
TRAFFIC_KEYS = {"kind", "mean", "stddev_m", "alpha", "components", "time_trace"}
COMPONENT_KEYS = {"mean", "stddev_m", "weight"}
PROFILE_KEYS = {"class_name", "eta", "p_transmit", "p_operational", "p_sleep", "capacity",
                "antenna_gain_dbi", "height_m"}


def _reject_unknown(obj: dict, allowed: set, where: str):
    extra = set(obj) - allowed
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {sorted(extra)}")


def _point(v, where: str) -> tuple[float, float]:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigError(f"{where}: expected a 2-element [x, y] list")
    return (float(v[0]), float(v[1]))


def config_from_dict(raw: dict) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError("scenario file must contain a JSON object")
    _reject_unknown(raw, TOP_KEYS, "scenario")
    case = raw.get("case_study", "A")
    num_sbs = int(raw.get("num_sbs", 49))
    base = case_study_preset("A" if case == "custom" else case, num_sbs) if case in ("A", "B", "custom") else None
    if base is None:
        raise ConfigError(f"case_study: unknown value {case!r}")

    area = _point(raw["area_m"], "area_m") if "area_m" in raw else base.layout.area_m
    positions = grid_positions(area, num_sbs)
    layout = replace(
        base.layout,
        area_m=area,
        sbs_positions=tuple(positions),
        mbs_position=(area[0] / 2, area[1] / 2),
        cell_radius_m=float(raw.get("cell_radius_m", base.layout.cell_radius_m)),
        carrier_freq_ghz=float(raw.get("carrier_freq_ghz", base.layout.carrier_freq_ghz)),
        haps_altitude_m=float(raw.get("haps_altitude_m", base.layout.haps_altitude_m)),
    )

    profiles = {p.class_name: p for p in base.profiles}
    for i, praw in enumerate(raw.get("profiles", [])):
        _reject_unknown(praw, PROFILE_KEYS, f"profiles[{i}]")
        name = praw.get("class_name")
        start = profiles.get(name) or TABLE_PROFILES.get(name)
        if start is None:
            raise ConfigError(f"profiles[{i}].class_name: unknown class {name!r}")
        fields = {k: (v if k == "class_name" else float(v)) for k, v in praw.items()}
        profiles[name] = replace(start, **fields)

    traffic = base.traffic
    if "traffic" in raw:
        t = raw["traffic"]
        _reject_unknown(t, TRAFFIC_KEYS, "traffic")
        kind = t.get("kind", "gaussian")
        alpha = float(t.get("alpha", traffic.alpha))
        centre = (area[0] / 2, area[1] / 2)
        if kind == "gaussian":
            comps = (TrafficComponent(_point(t.get("mean", centre), "traffic.mean"),
                                      float(t.get("stddev_m", DEFAULT_STDDEV_M))),)
        elif kind == "gaussian_mixture_2":
            comps = []
            for i, c in enumerate(t.get("components", [])):
                _reject_unknown(c, COMPONENT_KEYS, f"traffic.components[{i}]")
                comps.append(TrafficComponent(_point(c["mean"], f"traffic.components[{i}].mean"),
                                              float(c["stddev_m"]), float(c.get("weight", 0.5))))
            comps = tuple(comps)
        else:
            comps = ()
        trace = None
        if "time_trace" in t:
            trace = tuple((_point(m, "traffic.time_trace"), float(sd)) for m, sd in t["time_trace"])
        traffic = TrafficModel(kind, alpha, comps, trace)

    # mutable scalars go straight through; validation happens in ScenarioConfig
    kwargs = {}
    for key, cast in (("p_min_dbm", float), ("sigma_los_db", float), ("sigma_nlos_db", float),
                      ("u_max_mbs", int), ("u_max_haps", int), ("lambda_m0", float),
                      ("lambda_h0", float), ("num_steps", int), ("rng_seed", int),
                      ("redraw_shadowing", bool)):
        if key in raw:
            kwargs[key] = cast(raw[key])
    return replace(base, layout=layout, profiles=tuple(profiles.values()), traffic=traffic,
                   case_study=case, **kwargs)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno - 1 < len(text.splitlines()) else ""
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}: {line.strip()!r}") from None
    try:
        return config_from_dict(raw)
    except KeyError as exc:
        raise ConfigError(f"missing required key {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def with_overrides(config: ScenarioConfig, *, alpha: Optional[float] = None, p_min_dbm: Optional[float] = None,
                   rng_seed: Optional[int] = None, num_sbs: Optional[int] = None,
                   traffic_kind: Optional[str] = None) -> ScenarioConfig:
    """Copy of ``config`` with sweep-axis fields replaced."""
    cfg = config
    if num_sbs is not None and num_sbs != cfg.layout.num_sbs:
        classes = (["micro"] * num_sbs if set(cfg.layout.sbs_classes) == {"micro"}
                   else case_b_classes(num_sbs))
        layout = replace(cfg.layout, sbs_positions=tuple(grid_positions(cfg.layout.area_m, num_sbs)),
                         sbs_classes=tuple(classes))
        cfg = replace(cfg, layout=layout)
    if traffic_kind is not None and traffic_kind != cfg.traffic.kind:
        cfg = replace(cfg, traffic=default_traffic(traffic_kind, cfg))
    if alpha is not None:
        cfg = replace(cfg, traffic=replace(cfg.traffic, alpha=alpha))
    if p_min_dbm is not None:
        cfg = replace(cfg, p_min_dbm=p_min_dbm)
    if rng_seed is not None:
        cfg = replace(cfg, rng_seed=rng_seed)
    return cfg


def default_traffic(kind: str, config: ScenarioConfig) -> TrafficModel:
    w, h = config.layout.area_m
    alpha = config.traffic.alpha
    sd = config.traffic.components[0].stddev_m if config.traffic.components else DEFAULT_STDDEV_M
    if kind == "gaussian":
        return TrafficModel(kind, alpha, (TrafficComponent((w / 2, h / 2), sd),))
    if kind == "gaussian_mixture_2":
        return TrafficModel(kind, alpha, (
            TrafficComponent((0.3 * w, 0.35 * h), 0.7 * sd, 0.5),
            TrafficComponent((0.7 * w, 0.65 * h), 0.7 * sd, 0.5),
        ))
    if kind == "uniform":
        return TrafficModel(kind, alpha)
    raise ConfigError(f"traffic.kind: unknown kind {kind!r}")
