"""Runtime configuration: flag > environment variable > default.

Offline-first: the default providers are the replay fixture bundled with the
package and the deterministic stub, so every command works with no
credentials and no network. Live providers are opt-in and each requires its
credential, checked here so misconfiguration fails at startup, not mid-poll.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from typing import Mapping

ENV_PREFIX = "IDEIA_"

DEFAULT_POLL_INTERVAL_SECS = 600  # one provider refresh every ten minutes
DEFAULT_BIND_ADDRESS = "127.0.0.1:8080"
DEFAULT_HALF_LIFE_MINUTES = 120.0
DEFAULT_SNAPSHOT_RETENTION = 24
DEFAULT_STORE_PATH = "ideia.sqlite3"


class ConfigError(ValueError):
    def __init__(self, key: str, reason: str):
        super().__init__(f"{key}: {reason}")
        self.key = key
        self.reason = reason


def bundled_fixture_path() -> str:
    """The trend fixture shipped inside the package (the replay default)."""
    return str(importlib.resources.files("ideia").joinpath("data/trends_br.jsonl"))


@dataclass(frozen=True)
class RuntimeConfig:
    poll_interval_seconds: int = DEFAULT_POLL_INTERVAL_SECS
    trends_provider: str = "replay"  # "live" | "replay"
    replay_fixture_path: str | None = None
    trends_credentials_path: str | None = None
    generative_provider: str = "stub"  # "live" | "stub"
    gen_api_key: str | None = None
    store_path: str = DEFAULT_STORE_PATH
    bind_address: str = DEFAULT_BIND_ADDRESS
    auth_token: str = ""
    half_life_minutes: float = DEFAULT_HALF_LIFE_MINUTES
    snapshot_retention: int = DEFAULT_SNAPSHOT_RETENTION

    def host_port(self) -> tuple[str, int]:
        host, _, port_text = self.bind_address.rpartition(":")
        if not host or not port_text.isdigit():
            raise ConfigError("bind_address", f"expected host:port, got {self.bind_address!r}")
        return host, int(port_text)


_ENV_KEYS = {
    "poll_interval_seconds": "IDEIA_POLL_INTERVAL_SECS",
    "trends_provider": "IDEIA_TRENDS_PROVIDER",
    "replay_fixture_path": "IDEIA_REPLAY_FIXTURE",
    "generative_provider": "IDEIA_GEN_PROVIDER",
    "gen_api_key": "IDEIA_GEN_API_KEY",
    "store_path": "IDEIA_STORE",
    "bind_address": "IDEIA_BIND_ADDR",
    "auth_token": "IDEIA_AUTH_TOKEN",
    "half_life_minutes": "IDEIA_HALF_LIFE_MIN",
    "snapshot_retention": "IDEIA_SNAPSHOT_KEEP",
}


def _pick(field: str, flags: Mapping[str, object], env: Mapping[str, str]) -> object | None:
    flag_value = flags.get(field)
    if flag_value is not None:
        return flag_value
    env_key = _ENV_KEYS.get(field)
    if env_key and env_key in env and env[env_key] != "":
        return env[env_key]
    return None


def _as_int(value: object, key: str, minimum: int) -> int:
    try:
        number = int(str(value))
    except ValueError:
        raise ConfigError(key, f"not an integer: {value!r}")
    if number < minimum:
        raise ConfigError(key, f"must be >= {minimum}")
    return number


def _as_float(value: object, key: str, minimum_exclusive: float) -> float:
    try:
        number = float(str(value))
    except ValueError:
        raise ConfigError(key, f"not a number: {value!r}")
    if number <= minimum_exclusive:
        raise ConfigError(key, f"must be > {minimum_exclusive}")
    return number


def load_config(flags: Mapping[str, object] | None = None, env: Mapping[str, str] | None = None) -> RuntimeConfig:
    """Resolve the runtime configuration.

    ``flags`` holds already-parsed command-line values (None = not given);
    ``env`` defaults to os.environ. Raises ConfigError on the first invalid
    or inconsistent setting.
    """
    import os

    flags = flags or {}
    env = env if env is not None else os.environ

    def pick(field: str) -> object | None:
        return _pick(field, flags, env)

    poll = pick("poll_interval_seconds")
    poll_interval = (
        _as_int(poll, "poll_interval_seconds", 1) if poll is not None else DEFAULT_POLL_INTERVAL_SECS
    )

    trends_provider = str(pick("trends_provider") or "replay")
    if trends_provider not in ("live", "replay"):
        raise ConfigError("trends_provider", f"must be live or replay, got {trends_provider!r}")

    replay_fixture = pick("replay_fixture_path")
    replay_fixture_path = str(replay_fixture) if replay_fixture is not None else None
    if trends_provider == "replay" and replay_fixture_path is None:
        replay_fixture_path = bundled_fixture_path()

    trends_credentials = flags.get("trends_credentials_path")
    if trends_provider == "live" and not trends_credentials:
        raise ConfigError(
            "trends_provider",
            "live trends provider requires a credentials file (--trends-credentials)",
        )

    generative_provider = str(pick("generative_provider") or "stub")
    if generative_provider not in ("live", "stub"):
        raise ConfigError("generative_provider", f"must be live or stub, got {generative_provider!r}")

    gen_api_key = pick("gen_api_key")
    if generative_provider == "live" and not gen_api_key:
        raise ConfigError("generative_provider", "live generative provider requires IDEIA_GEN_API_KEY")

    half_life = pick("half_life_minutes")
    half_life_minutes = (
        _as_float(half_life, "half_life_minutes", 0.0) if half_life is not None else DEFAULT_HALF_LIFE_MINUTES
    )

    retention = pick("snapshot_retention")
    snapshot_retention = (
        _as_int(retention, "snapshot_retention", 1) if retention is not None else DEFAULT_SNAPSHOT_RETENTION
    )

    return RuntimeConfig(
        poll_interval_seconds=poll_interval,
        trends_provider=trends_provider,
        replay_fixture_path=replay_fixture_path,
        trends_credentials_path=str(trends_credentials) if trends_credentials else None,
        generative_provider=generative_provider,
        gen_api_key=str(gen_api_key) if gen_api_key is not None else None,
        store_path=str(pick("store_path") or DEFAULT_STORE_PATH),
        bind_address=str(pick("bind_address") or DEFAULT_BIND_ADDRESS),
        auth_token=str(pick("auth_token") or ""),
        half_life_minutes=half_life_minutes,
        snapshot_retention=snapshot_retention,
    )
