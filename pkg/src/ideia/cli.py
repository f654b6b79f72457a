"""Process entry point: serve, fetch-once, suggest.

serve       wires store + poll loop + HTTP API into one process
fetch-once  one fetch/merge/record cycle, ranked table on stdout
suggest     offline generation: context in flags, suggestion JSON on stdout

Exit codes: 0 success; 1 config errors, invalid input, or trend provider
failure; 2 generative provider unavailable.
"""

from __future__ import annotations

import argparse
import json
import logging
import signal
import socket
import sys
import threading

from .api.app import ApiConfig, create_app
from .clock import SystemClock
from .config import ConfigError, RuntimeConfig, load_config
from .store.base import EditorialStore
from .store.memory import MemoryStore
from .store.sqlite import SqliteStore
from .suggest.engine import ProviderUnavailable, SuggestionEngine, run_generation
from .suggest.models import IdeationContext, InvalidContext, RetryPolicy, validate_context
from .suggest.prompt import build_prompt
from .suggest.providers import GenerativeProvider, LiveGenerativeClient, StubGenerativeProvider
from .trends.models import RankingConfig
from .trends.poller import PollScheduler
from .trends.providers import LiveTrendsClient, ProviderFailure, TrendProvider, load_replay_fixture
from .trends.ranking import rank_trends

logger = logging.getLogger("ideia")

DEFAULT_REGION = "BR"
DEFAULT_FETCH_LIMIT = 20


def open_store(config: RuntimeConfig, clock=None) -> EditorialStore:
    if config.store_path == ":memory:":
        return MemoryStore(clock)
    return SqliteStore(config.store_path, clock)


def build_trend_provider(config: RuntimeConfig) -> TrendProvider:
    if config.trends_provider == "replay":
        assert config.replay_fixture_path is not None
        return load_replay_fixture(config.replay_fixture_path)
    assert config.trends_credentials_path is not None
    with open(config.trends_credentials_path, encoding="utf-8") as fh:
        credentials = json.load(fh)
    return LiveTrendsClient(
        base_url=credentials["base_url"],
        api_key=credentials.get("api_key"),
        supports_regions=tuple(credentials.get("regions", [DEFAULT_REGION])),
    )


def build_generative_provider(config: RuntimeConfig) -> GenerativeProvider:
    if config.generative_provider == "stub":
        return StubGenerativeProvider()
    assert config.gen_api_key is not None
    return LiveGenerativeClient(api_key=config.gen_api_key)


def _setup_logging() -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )


def cmd_serve(config: RuntimeConfig, region: str) -> int:
    import uvicorn

    _setup_logging()
    try:
        api_config = ApiConfig(auth_token=config.auth_token)
    except ValueError:
        raise ConfigError("auth_token", "must be set (IDEIA_AUTH_TOKEN) in serve mode")

    host, port = config.host_port()
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
        sock.listen(128)
    except OSError as e:
        sock.close()
        raise ConfigError("bind_address", f"cannot bind {config.bind_address}: {e}")

    clock = SystemClock()
    store = open_store(config, clock)
    provider = build_trend_provider(config)
    scheduler = PollScheduler(
        provider,
        region,
        store,
        clock,
        limit=DEFAULT_FETCH_LIMIT,
        interval_seconds=config.poll_interval_seconds,
    )
    engine = SuggestionEngine(store, build_generative_provider(config), clock=clock)
    ranking = RankingConfig(half_life_minutes=config.half_life_minutes)
    app = create_app(store, engine, api_config, clock=clock, ranking=ranking)

    # gen_api_key deliberately absent from this line (and every other log)
    logger.info(
        "serving bind=%s store=%s trends=%s gen=%s poll_interval=%ss retention=%d",
        config.bind_address,
        config.store_path,
        config.trends_provider,
        config.generative_provider,
        config.poll_interval_seconds,
        config.snapshot_retention,
    )

    stop = threading.Event()

    def poll_loop() -> None:
        while not stop.wait(config.poll_interval_seconds):
            scheduler.tick()
            store.prune_snapshots(config.snapshot_retention)

    poll_thread = threading.Thread(target=poll_loop, name="ideia-poll", daemon=True)
    poll_thread.start()

    server = uvicorn.Server(
        uvicorn.Config(app=app, log_config=None, access_log=False)
    )
    # uvicorn re-raises a captured SIGINT/SIGTERM after graceful shutdown;
    # absorb it so an interrupted serve still exits 0 with the store flushed
    if threading.current_thread() is threading.main_thread():
        signal.signal(signal.SIGINT, lambda signum, frame: None)
        signal.signal(signal.SIGTERM, lambda signum, frame: None)
    try:
        server.run(sockets=[sock])
    except KeyboardInterrupt:
        pass
    finally:
        stop.set()
        poll_thread.join(timeout=5)
        store.close()
        sock.close()
        logger.info("shutdown complete; store flushed")
    return 0


def cmd_fetch_once(config: RuntimeConfig, region: str, limit: int) -> int:
    clock = SystemClock()
    store = open_store(config, clock)
    try:
        provider = build_trend_provider(config)
        scheduler = PollScheduler(
            provider, region, store, clock, limit=limit,
            interval_seconds=config.poll_interval_seconds,
        )
        event = scheduler.tick()
        if not event.ok:
            print(f"fetch failed: {event.error}", file=sys.stderr)
            return 1
        assert scheduler.current is not None
        now = clock.now()
        ranking = RankingConfig(half_life_minutes=config.half_life_minutes)
        ranked = rank_trends(list(scheduler.current.terms), now, ranking)
        _print_trend_table(ranked, now)
        return 0
    except (ProviderFailure, OSError) as e:
        print(f"fetch failed: {e}", file=sys.stderr)
        return 1
    finally:
        store.close()


def _print_trend_table(ranked, now) -> None:
    headers = ("term", "volume", "score", "age_min")
    rows = [
        (
            term.raw_term,
            str(term.search_volume),
            f"{score:.4f}",
            f"{(now - term.captured_at).total_seconds() / 60:.1f}",
        )
        for term, score in ranked
    ]
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in rows)) if rows else len(headers[i])
        for i in range(4)
    ]
    print(
        headers[0].ljust(widths[0]),
        headers[1].rjust(widths[1]),
        headers[2].rjust(widths[2]),
        headers[3].rjust(widths[3]),
    )
    for row in rows:
        print(
            row[0].ljust(widths[0]),
            row[1].rjust(widths[1]),
            row[2].rjust(widths[2]),
            row[3].rjust(widths[3]),
        )


def cmd_suggest(config: RuntimeConfig, args: argparse.Namespace) -> int:
    keywords = tuple(k.strip() for k in (args.keywords or "").split(",") if k.strip())
    context = IdeationContext(
        topic=args.topic or "",
        keywords=keywords,
        editorial_section=args.section or "",
        tone=args.tone or "neutral",
        audience=args.audience,
        language=args.language or "pt-BR",
        extra_notes=args.notes,
    )
    try:
        context = validate_context(context)
    except InvalidContext as e:
        print(f"invalid context: {e}", file=sys.stderr)
        return 1
    provider = build_generative_provider(config)
    prompt = build_prompt(context, args.n)
    try:
        outcome = run_generation(prompt, args.n, provider, RetryPolicy())
    except ProviderUnavailable as e:
        print(f"provider unavailable: {e}", file=sys.stderr)
        return 2
    document = {
        "titles": list(outcome.titles),
        "summary": outcome.summary,
        "prompt_fingerprint": outcome.prompt_fingerprint,
        "provider_id": provider.descriptor.provider_id,
    }
    print(json.dumps(document, ensure_ascii=False, indent=2))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ideia", description="editorial ideation engine")
    parser.add_argument("--poll-interval", dest="poll_interval_seconds")
    parser.add_argument("--trends-provider", dest="trends_provider", choices=["live", "replay"])
    parser.add_argument("--replay-fixture", dest="replay_fixture_path")
    parser.add_argument("--trends-credentials", dest="trends_credentials_path")
    parser.add_argument("--gen-provider", dest="generative_provider", choices=["live", "stub"])
    parser.add_argument("--gen-api-key", dest="gen_api_key")
    parser.add_argument("--store", dest="store_path")
    parser.add_argument("--bind", dest="bind_address")
    parser.add_argument("--auth-token", dest="auth_token")
    parser.add_argument("--half-life-minutes", dest="half_life_minutes")
    parser.add_argument("--snapshot-keep", dest="snapshot_retention")

    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the API server and poll loop")
    serve.add_argument("--region", default=DEFAULT_REGION)

    fetch = sub.add_parser("fetch-once", help="one poll cycle, print the ranked table")
    fetch.add_argument("--region", default=DEFAULT_REGION)
    fetch.add_argument("--limit", type=int, default=DEFAULT_FETCH_LIMIT)

    suggest = sub.add_parser("suggest", help="generate titles and a summary offline")
    suggest.add_argument("--topic", required=False, default="")
    suggest.add_argument("--keywords", default="")
    suggest.add_argument("--tone", default="neutral")
    suggest.add_argument("--n", type=int, default=3)
    suggest.add_argument("--section", default="")
    suggest.add_argument("--audience", default=None)
    suggest.add_argument("--notes", default=None)
    suggest.add_argument("--language", default=None)

    return parser


_CONFIG_FLAGS = (
    "poll_interval_seconds",
    "trends_provider",
    "replay_fixture_path",
    "trends_credentials_path",
    "generative_provider",
    "gen_api_key",
    "store_path",
    "bind_address",
    "auth_token",
    "half_life_minutes",
    "snapshot_retention",
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    flags = {name: getattr(args, name, None) for name in _CONFIG_FLAGS}
    try:
        config = load_config(flags)
        if args.command == "serve":
            return cmd_serve(config, args.region)
        if args.command == "fetch-once":
            return cmd_fetch_once(config, args.region, args.limit)
        if args.command == "suggest":
            return cmd_suggest(config, args)
        parser.error(f"unknown command {args.command!r}")
        return 1
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
