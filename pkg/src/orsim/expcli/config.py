"""Flat ``key=value`` experiment configuration.

Lists use ``a,b,c``. ``#`` starts a comment. Unknown keys are rejected.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from ..graphmodel import LinkProbModel
from ..simcore.routing import Policy
from ..simcore.scenario import ScenarioConfig


class ConfigError(ValueError):
    def __init__(self, key: str | None, message: str):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key
        self.message = message


@dataclass(frozen=True)
class ExperimentConfig:
    area: tuple[float, ...] = (2000.0, 2000.0)
    node_counts: tuple[int, ...] = (100, 150, 200, 250, 300)
    range: float = 250.0
    cbr_connections: tuple[int, ...] = (20, 40, 60, 80, 100)
    density_cbr: int = 60
    load_nodes: int = 200
    cbr_rate: float = 4.0
    duration: float = 10.0
    packet_size: int = 512
    ttl: int = 32
    queue_len: int = 50
    slot_T: float = 0.045
    max_retries: int = 7
    link_model: str = "distance"
    link_p: float = 0.8
    link_beta: float = 2.0
    utility: str = "progress"
    ack_prob: float | None = None
    policies: tuple[str, ...] = ("dda", "exor", "soar")
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    max_degree: int = 8
    max_count: int = 4096
    descending_head: int | None = None

    def link(self) -> LinkProbModel:
        if self.link_model == "constant":
            return LinkProbModel.constant(self.link_p)
        return LinkProbModel.distance_decay(self.link_beta)

    def scenario(self, policy: str, nodes: int, cbr: int) -> ScenarioConfig:
        return ScenarioConfig(
            policy=policy, nodes=nodes, area=(self.area[0], self.area[1]), radius=self.range,
            cbr=cbr, cbr_rate=self.cbr_rate, duration=self.duration, packet_size=self.packet_size,
            ttl=self.ttl, queue_len=self.queue_len, slot_T=self.slot_T, max_retries=self.max_retries,
            link_model=self.link(), utility=self.utility, ack_prob=self.ack_prob,
            max_degree=self.max_degree, max_count=self.max_count, descending_head=self.descending_head,
        )


PROFILES = {
    "paper": {},
    "desk": {
        "area": (1000.0, 1000.0),
        "node_counts": (50, 75, 100),
        "cbr_connections": (5, 10, 15, 20),
        "density_cbr": 10,
        "load_nodes": 75,
        "seeds": (0, 1, 2, 3, 4),
    },
}

_KINDS = {
    "area": (float, True), "node_counts": (int, True), "range": (float, False),
    "cbr_connections": (int, True), "density_cbr": (int, False), "load_nodes": (int, False),
    "cbr_rate": (float, False), "duration": (float, False), "packet_size": (int, False),
    "ttl": (int, False), "queue_len": (int, False), "slot_T": (float, False),
    "max_retries": (int, False), "link_model": (str, False), "link_p": (float, False),
    "link_beta": (float, False), "utility": (str, False), "ack_prob": (float, False),
    "policies": (str, True), "seeds": (int, True), "max_degree": (int, False),
    "max_count": (int, False), "descending_head": (int, False),
}
_OPTIONAL = {"ack_prob", "descending_head"}
assert set(_KINDS) == {f.name for f in fields(ExperimentConfig)}


def _convert(key: str, raw: str):
    if key not in _KINDS:
        raise ConfigError(key, "unknown key")
    typ, is_list = _KINDS[key]
    raw = raw.strip()
    if key in _OPTIONAL and raw in ("", "none"):
        return None
    parts = [p.strip() for p in raw.split(",")] if is_list else [raw]
    if any(p == "" for p in parts):
        raise ConfigError(key, f"empty value in {raw!r}")
    try:
        vals = tuple(typ(p) for p in parts)
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw!r} as {typ.__name__}") from None
    return vals if is_list else vals[0]


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    def need(ok, key, msg):
        if not ok:
            raise ConfigError(key, msg)

    need(len(cfg.area) == 2 and all(a > 0 for a in cfg.area), "area", "expected two positive sides")
    need(cfg.node_counts and all(n >= 2 for n in cfg.node_counts), "node_counts", "every count must be >= 2")
    need(cfg.range > 0, "range", "must be positive")
    need(cfg.cbr_connections and all(c >= 1 for c in cfg.cbr_connections), "cbr_connections", "every count must be >= 1")
    need(cfg.density_cbr >= 1, "density_cbr", "must be >= 1")
    need(cfg.load_nodes >= 2, "load_nodes", "must be >= 2")
    need(cfg.cbr_rate > 0, "cbr_rate", "must be positive")
    need(cfg.duration > 0, "duration", "must be positive")
    need(cfg.packet_size > 0, "packet_size", "must be positive")
    need(cfg.ttl >= 1, "ttl", "must be >= 1")
    need(cfg.queue_len >= 1, "queue_len", "must be >= 1")
    need(cfg.slot_T > 0, "slot_T", "must be positive")
    need(cfg.max_retries >= 0, "max_retries", "must be >= 0")
    need(cfg.link_model in ("distance", "constant"), "link_model", "expected 'distance' or 'constant'")
    need(0 < cfg.link_p <= 1, "link_p", "must be in (0, 1]")
    need(cfg.link_beta > 0, "link_beta", "must be positive")
    need(cfg.utility in ("progress", "energy"), "utility", "expected 'progress' or 'energy'")
    need(cfg.ack_prob is None or 0 <= cfg.ack_prob <= 1, "ack_prob", "must be in [0, 1]")
    need(cfg.policies and len(set(cfg.policies)) == len(cfg.policies), "policies", "must be nonempty and distinct")
    for p in cfg.policies:
        try:
            Policy.parse(p)
        except ValueError:
            raise ConfigError("policies", f"unknown policy {p!r}") from None
    need(cfg.seeds and len(set(cfg.seeds)) == len(cfg.seeds), "seeds", "must be nonempty and distinct")
    need(cfg.max_degree >= 2, "max_degree", "must be >= 2")
    need(cfg.max_count >= 1, "max_count", "must be >= 1")
    need(cfg.descending_head is None or cfg.descending_head >= 2, "descending_head", "must be >= 2")
    return cfg


def parse_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(None, f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise ConfigError(key, f"line {lineno}: duplicate key")
        values[key] = _convert(key, val)
    return validate(replace(base or ExperimentConfig(), **values))


def parse_config(path=None, profile: str = "paper", overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Profile defaults, then the file, then ``overrides`` (raw strings)."""
    if profile not in PROFILES:
        raise ConfigError("profile", f"unknown profile {profile!r}")
    cfg = replace(ExperimentConfig(), **PROFILES[profile])
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(None, f"cannot read {path}: {exc.strerror}") from None
        cfg = parse_text(text, cfg)
    if overrides:
        cfg = replace(cfg, **{k: _convert(k, v) for k, v in overrides.items()})
    return validate(cfg)


def serialize(cfg: ExperimentConfig) -> str:
    lines = []
    for key, val in sorted(asdict(cfg).items()):
        if val is None:
            text = "none"
        elif isinstance(val, (tuple, list)):
            text = ",".join(repr(v) if isinstance(v, float) else str(v) for v in val)
        else:
            text = repr(val) if isinstance(val, float) else str(val)
        lines.append(f"{key}={text}")
    return "\n".join(lines) + "\n"
