"""System parameters, unit conversions, path loss and Rayleigh channel sampling.

All internal quantities are SI (watts, hertz, meters). Config files use the
engineering units the hardware is usually quoted in (dBm, MHz, m) and are
converted here at load time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

SPEED_OF_LIGHT = 3e8  # m/s

TS = "ts"
PS = "ps"


def dbm_to_watts(p_dbm: float) -> float:
    """Convert a power in dBm to watts."""
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def watts_to_dbm(p_watts: float) -> float:
    """Convert a power in watts to dBm."""
    if p_watts <= 0:
        raise ValueError("power must be positive to express in dBm")
    return 10.0 * math.log10(p_watts) + 30.0


def path_loss(d: float, m: float, fc: float) -> float:
    """Distance-power path loss gain: (c / (4 pi fc))^2 * d^(-m).

    Args:
        d: link distance in meters, > 0.
        m: path-loss exponent, >= 0.
        fc: carrier frequency in hertz, > 0.
    """
    if d <= 0:
        raise ValueError(f"distance must be positive, got {d}")
    if fc <= 0:
        raise ValueError(f"carrier frequency must be positive, got {fc}")
    nu = (SPEED_OF_LIGHT / (4.0 * math.pi * fc)) ** 2
    return nu * d ** (-m)


@dataclass(frozen=True)
class SystemParams:
    """All physical constants of the relay link.

    Attributes:
        Pa: source transmit power, W.
        fc: carrier frequency, Hz.
        m: path-loss exponent.
        d_ar: source-to-relay distance, m.
        d_rb: relay-to-destination distance, m.
        lambda_ar: mean of |h_ar|^2 (exponential fading parameter).
        lambda_rb: mean of |h_rb|^2.
        sigma2_ra: relay antenna noise variance, W.
        sigma2_rc: relay RF-to-baseband conversion noise variance, W.
        sigma2_ba: destination antenna noise variance, W.
        sigma2_bc: destination conversion noise variance, W.
        sigma2_a: source receiver noise variance, W.
        eta0: baseline energy-conversion efficiency, in (0, 1).
        eta_u: hardware upper bound on conversion efficiency, in (0, 1).
        epsilon: covertness parameter in [0, 1].
        T_block: block duration, s (normalized to 1; all per-phase energies
            are expressed as powers times phase fractions, so T cancels).
    """

    Pa: float
    fc: float
    m: float
    d_ar: float
    d_rb: float
    lambda_ar: float
    lambda_rb: float
    sigma2_ra: float
    sigma2_rc: float
    sigma2_ba: float
    sigma2_bc: float
    sigma2_a: float
    eta0: float
    eta_u: float
    epsilon: float
    T_block: float = 1.0

    def __post_init__(self):
        positive = [
            ("Pa", self.Pa), ("fc", self.fc), ("d_ar", self.d_ar),
            ("d_rb", self.d_rb), ("lambda_ar", self.lambda_ar),
            ("lambda_rb", self.lambda_rb), ("sigma2_ra", self.sigma2_ra),
            ("sigma2_rc", self.sigma2_rc), ("sigma2_ba", self.sigma2_ba),
            ("sigma2_bc", self.sigma2_bc), ("sigma2_a", self.sigma2_a),
            ("T_block", self.T_block),
        ]
        for name, value in positive:
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")
        if self.m < 0:
            raise ValueError(f"path-loss exponent must be >= 0, got {self.m}")
        if not (0 < self.eta0 <= self.eta_u < 1):
            raise ValueError(
                f"need 0 < eta0 <= eta_u < 1, got eta0={self.eta0}, eta_u={self.eta_u}"
            )
        if not (0 <= self.epsilon <= 1):
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")

    @property
    def L_ar(self) -> float:
        """Path-loss gain of the source-to-relay link (reciprocal link equal)."""
        return path_loss(self.d_ar, self.m, self.fc)

    @property
    def L_rb(self) -> float:
        """Path-loss gain of the relay-to-destination link."""
        return path_loss(self.d_rb, self.m, self.fc)

    @property
    def sigma2_b(self) -> float:
        """Total noise power at the destination (antenna + conversion)."""
        return self.sigma2_ba + self.sigma2_bc

    def with_updates(self, **kwargs) -> "SystemParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class SchemeConfig:
    """Energy-harvesting scheme: variant 'ts' or 'ps' plus its fraction.

    For 'ts' the fraction is the share of the block spent harvesting; for
    'ps' it is the received-power share routed to the harvester.
    """

    variant: str
    fraction: float

    def __post_init__(self):
        if self.variant not in (TS, PS):
            raise ValueError(f"variant must be '{TS}' or '{PS}', got {self.variant!r}")
        if not (0 < self.fraction < 1):
            raise ValueError(f"fraction must lie in (0, 1), got {self.fraction}")

    @classmethod
    def ts(cls, phi: float) -> "SchemeConfig":
        return cls(TS, phi)

    @classmethod
    def ps(cls, rho: float) -> "SchemeConfig":
        return cls(PS, rho)


@dataclass(frozen=True)
class ChannelDraw:
    """One fading-block realization of the squared channel gains.

    Fields may be scalars or equally-shaped numpy arrays (vectorized blocks).
    """

    g_ar: float | np.ndarray
    g_rb: float | np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.g_ar) < 0) or np.any(np.asarray(self.g_rb) < 0):
            raise ValueError("channel gains must be non-negative")


def relay_noise_power(scheme: SchemeConfig, sigma2_ra: float, sigma2_rc: float) -> float:
    """Effective noise power entering the relay's information branch.

    Under power splitting only the (1 - rho) share of the antenna noise
    reaches the information receiver; conversion noise is added after the
    split in both schemes.
    """
    if scheme.variant == TS:
        return sigma2_ra + sigma2_rc
    return (1.0 - scheme.fraction) * sigma2_ra + sigma2_rc


def sample_channel(rng: np.random.Generator, lam: float, size=None):
    """Draw squared Rayleigh channel gains |h|^2 ~ Exponential(mean lam)."""
    if lam <= 0:
        raise ValueError(f"fading mean must be positive, got {lam}")
    return rng.exponential(lam, size=size)


def sample_draw(rng: np.random.Generator, params: SystemParams, size=None) -> ChannelDraw:
    """Draw a ChannelDraw (both hops) from the fading distributions."""
    return ChannelDraw(
        g_ar=sample_channel(rng, params.lambda_ar, size),
        g_rb=sample_channel(rng, params.lambda_rb, size),
    )


# ---------------------------------------------------------------------------
# Parameter files: flat "key = value" text, '#' comments, engineering units.
# ---------------------------------------------------------------------------

# (key, unit, converter to SI, description)
_CONFIG_FIELDS = [
    ("Pa", "dBm", dbm_to_watts, "source transmit power"),
    ("fc", "MHz", lambda v: v * 1e6, "carrier frequency"),
    ("m", "-", float, "path-loss exponent"),
    ("d_ar", "m", float, "source-to-relay distance"),
    ("d_rb", "m", float, "relay-to-destination distance"),
    ("lambda_ar", "-", float, "mean of |h_ar|^2"),
    ("lambda_rb", "-", float, "mean of |h_rb|^2"),
    ("sigma2_ra", "dBm", dbm_to_watts, "relay antenna noise variance"),
    ("sigma2_rc", "dBm", dbm_to_watts, "relay conversion noise variance"),
    ("sigma2_ba", "dBm", dbm_to_watts, "destination antenna noise variance"),
    ("sigma2_bc", "dBm", dbm_to_watts, "destination conversion noise variance"),
    ("sigma2_a", "dBm", dbm_to_watts, "source receiver noise variance"),
    ("eta0", "-", float, "baseline conversion efficiency"),
    ("eta_u", "-", float, "conversion efficiency upper bound"),
    ("epsilon", "-", float, "covertness parameter"),
    ("T_block", "s", float, "block duration"),
]

DEFAULT_CONFIG_VALUES = {
    "Pa": 20.0,
    "fc": 900.0,
    "m": 2.0,
    "d_ar": 10.0,
    "d_rb": 10.0,
    "lambda_ar": 1.0,
    "lambda_rb": 1.0,
    "sigma2_ra": -80.0,
    "sigma2_rc": -80.0,
    "sigma2_ba": -80.0,
    "sigma2_bc": -80.0,
    "sigma2_a": -80.0,
    "eta0": 0.4,
    "eta_u": 0.8,
    "epsilon": 0.1,
    "T_block": 1.0,
}


class ConfigError(ValueError):
    """Raised on malformed parameter files; carries the offending line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


def default_params(**overrides) -> SystemParams:
    """SystemParams built from the default engineering-unit values."""
    values = {}
    for key, _unit, conv, _desc in _CONFIG_FIELDS:
        values[key] = conv(DEFAULT_CONFIG_VALUES[key])
    values.update(overrides)
    return SystemParams(**values)


def config_template() -> str:
    """Text of a parameter file populated with the default values."""
    lines = [
        "# covertrelay parameter file",
        "# One 'key = value' per line; '#' starts a comment.",
        "# Units are fixed per key and shown in brackets.",
        "",
    ]
    for key, unit, _conv, desc in _CONFIG_FIELDS:
        lines.append(f"{key} = {DEFAULT_CONFIG_VALUES[key]:g}  # [{unit}] {desc}")
    lines += [
        "",
        "scheme = ts  # [ts|ps] energy-harvesting scheme",
        "fraction = auto  # [-] harvesting fraction in (0,1), or 'auto' to",
        "                 # optimize it for the no-covert-transmission rate",
        "",
    ]
    return "\n".join(lines)


def parse_config(text: str) -> tuple[SystemParams, str, float | str]:
    """Parse parameter-file text.

    Returns:
        (params, scheme_variant, fraction) where fraction is a float or the
        literal string 'auto'.

    Raises:
        ConfigError: on unknown keys, bad values or missing assignments,
            with the 1-based line number.
    """
    known = {key: conv for key, _u, conv, _d in _CONFIG_FIELDS}
    raw: dict[str, float] = {}
    scheme = "ts"
    fraction: float | str = "auto"

    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", line_no)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key == "scheme":
            if value not in (TS, PS):
                raise ConfigError(f"scheme must be 'ts' or 'ps', got {value!r}", line_no)
            scheme = value
            continue
        if key == "fraction":
            if value == "auto":
                fraction = "auto"
            else:
                try:
                    fraction = float(value)
                except ValueError:
                    raise ConfigError(f"fraction must be a number or 'auto', got {value!r}", line_no) from None
                if not (0 < fraction < 1):
                    raise ConfigError(f"fraction must lie in (0, 1), got {fraction}", line_no)
            continue
        if key not in known:
            raise ConfigError(f"unknown key {key!r}", line_no)
        try:
            raw[key] = float(value)
        except ValueError:
            raise ConfigError(f"value for {key!r} is not a number: {value!r}", line_no) from None

    values = dict(DEFAULT_CONFIG_VALUES)
    values.update(raw)
    si = {key: conv(values[key]) for key, _u, conv, _d in _CONFIG_FIELDS}
    try:
        params = SystemParams(**si)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return params, scheme, fraction


def load_config(path) -> tuple[SystemParams, str, float | str]:
    """Read and parse a parameter file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
