"""Command-line surface: pack, fuzz, serve, bench.

Sequence files hold one decimal height per line (up to 12 fractional
digits; scientific notation is rejected so logs stay unambiguous) or a
single JSON array of numbers. ``pack`` echoes placement records as JSON
lines and exits 0 on success, 1 on the first rejection or audit
violation, 2 on input errors. ``serve`` exposes the session protocol
over HTTP (POST /place, GET /state, POST /reset) or newline-delimited
JSON on stdio. ``fuzz`` runs seeded campaigns; ``bench`` compares the
kernel backends.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .bench import format_rows, run_bench
from .fuzz import run_campaign
from .generators import DISTRIBUTIONS
from .packer import Packer
from .svg import write_svg
from .verifier import audit_all

_HEIGHT_RE = re.compile(r"[+]?(?:\d+(?:\.\d{0,12})?|\.\d{1,12})")


def parse_height_token(token: str) -> float:
    """Parse one decimal height literal; raises ValueError when invalid."""
    token = token.strip()
    if not _HEIGHT_RE.fullmatch(token):
        raise ValueError(f"invalid height literal {token!r}")
    value = float(token)
    if not 0.0 < value <= 1.0:
        raise ValueError(f"height {value} outside (0, 1]")
    return value


def read_heights(path: str) -> list[float]:
    """Read a sequence file: one height per line, or a JSON array."""
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("["):
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("JSON input must be an array of numbers")
        heights = []
        for v in data:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError(f"non-numeric height {v!r}")
            if not 0.0 < float(v) <= 1.0:
                raise ValueError(f"height {v} outside (0, 1]")
            heights.append(float(v))
        return heights
    heights = []
    for line_no, line in enumerate(text.splitlines(), 1):
        token = line.strip()
        if not token or token.startswith("#"):
            continue
        try:
            heights.append(parse_height_token(token))
        except ValueError as exc:
            raise ValueError(f"line {line_no}: {exc}") from None
    return heights


# ----------------------------------------------------------------------
# pack


def cmd_pack(args: argparse.Namespace) -> int:
    try:
        heights = read_heights(args.input)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2

    log_fh = sys.stdout
    close_log = False
    if args.log:
        try:
            log_fh = open(args.log, "w", encoding="utf-8")
        except OSError as exc:
            print(f"log error: {exc}", file=sys.stderr)
            return 2
        close_log = True

    packer = Packer(budget=args.budget, enforce_budget=args.enforce_budget)
    code = 0
    try:
        for h in heights:
            outcome = packer.place(h)
            if outcome.placed:
                log_fh.write(json.dumps(outcome.square.to_dict()))
                log_fh.write("\n")
            else:
                record = {
                    "id": len(packer.placements),
                    "height": h,
                    "status": "rejected",
                    "reason": outcome.reason,
                    "detail": outcome.detail,
                }
                log_fh.write(json.dumps(record))
                log_fh.write("\n")
                code = 1
                break
        if args.svg:
            write_svg(args.svg, packer.snapshot())
        if args.verify:
            report = audit_all(packer.snapshot())
            if not report.ok:
                for line in report.lines():
                    print(line, file=sys.stderr)
                code = 1
    finally:
        if close_log:
            log_fh.close()
    return code


# ----------------------------------------------------------------------
# fuzz


def cmd_fuzz(args: argparse.Namespace) -> int:
    dists = list(DISTRIBUTIONS[:-1]) if args.dist == "all" else [args.dist]
    ok = True
    for dist in dists:
        result = run_campaign(
            args.runs,
            distribution=dist,
            base_seed=args.seed,
            budget=args.budget,
            audit=args.audit_all,
            workers=args.workers,
        )
        print(result.summary())
        for f in result.failures[:5]:
            print(
                f"  seed {f['seed']} square {f['index']} h={f['height']:.12g}: "
                f"{f['reason']} ({f['detail']})"
            )
        for v in result.violations[:5]:
            print(f"  seed {v['seed']}: {v['rule']}: {v['detail']}")
        ok = ok and result.ok
    if ok or args.allow_failures:
        return 0
    return 1


# ----------------------------------------------------------------------
# serve


class Session:
    """One interactive packing session behind the wire protocol."""

    def __init__(self, budget: float = 0.375, enforce_budget: bool = False) -> None:
        self.budget = budget
        self.enforce_budget = enforce_budget
        self.packer = Packer(budget=budget, enforce_budget=enforce_budget)
        self.seq = 0

    def _finish(self, payload: dict) -> dict:
        self.seq += 1
        payload["seq"] = self.seq
        payload["cumulative_area"] = self.packer.cumulative_area
        payload["budget_remaining"] = self.packer.budget - self.packer.cumulative_area
        return payload

    def malformed(self, detail: str = "malformed request") -> dict:
        return self._finish(
            {"status": "rejected", "reason": "parse_error", "detail": detail}
        )

    def _height_of(self, value) -> float | None:
        if isinstance(value, bool):
            return None
        if isinstance(value, (int, float)):
            h = float(value)
        elif isinstance(value, str):
            try:
                h = parse_height_token(value)
            except ValueError:
                return None
        else:
            return None
        if not 0.0 < h <= 1.0:
            return None
        return h

    def handle(self, request) -> dict:
        if not isinstance(request, dict) or not isinstance(request.get("op"), str):
            return self.malformed()
        op = request["op"]
        if op == "place":
            height = self._height_of(request.get("height"))
            if height is None:
                return self._finish(
                    {
                        "status": "rejected",
                        "reason": "invalid_height",
                        "detail": f"height {request.get('height')!r} "
                        "is not a decimal in (0, 1]",
                    }
                )
            outcome = self.packer.place(height)
            return self._finish(outcome.to_dict())
        if op == "state":
            return self._finish(
                {"status": "ok", "snapshot": self.packer.snapshot()}
            )
        if op == "reset":
            self.packer = Packer(
                budget=self.budget, enforce_budget=self.enforce_budget
            )
            return self._finish({"status": "ok"})
        if op == "undo":
            return self._finish(
                {
                    "status": "rejected",
                    "reason": "undo_unsupported",
                    "detail": "placed squares never move; reset and replay",
                }
            )
        return self.malformed(f"unknown op {op!r}")


def _make_handler(session: Session):
    # Browsers and node clients hold several keep-alive connections at
    # once, so the server must accept them concurrently; the lock keeps
    # the single shared session strictly ordered underneath.
    lock = threading.Lock()

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def _dispatch(self, request: dict) -> dict:
            with lock:
                return session.handle(request)

        def _malformed(self, detail: str) -> dict:
            with lock:
                return session.malformed(detail)

        def _send(self, code: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header(
                "Access-Control-Allow-Methods", "GET, POST, OPTIONS"
            )
            self.end_headers()
            self.wfile.write(body)

        def do_OPTIONS(self) -> None:  # noqa: N802 (http.server API)
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header(
                "Access-Control-Allow-Methods", "GET, POST, OPTIONS"
            )
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self) -> None:  # noqa: N802
            if self.path == "/state":
                self._send(200, self._dispatch({"op": "state"}))
            else:
                self._send(404, self._malformed(f"no route {self.path}"))

        def do_POST(self) -> None:  # noqa: N802
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if self.path == "/reset":
                self._send(200, self._dispatch({"op": "reset"}))
                return
            if self.path != "/place":
                self._send(404, self._malformed(f"no route {self.path}"))
                return
            try:
                data = json.loads(raw.decode("utf-8")) if raw else {}
            except (ValueError, UnicodeDecodeError):
                self._send(200, self._malformed("body is not valid JSON"))
                return
            if not isinstance(data, dict):
                self._send(200, self._malformed("body must be a JSON object"))
                return
            self._send(
                200, self._dispatch({"op": "place", "height": data.get("height")})
            )

        def log_message(self, fmt, *log_args):  # quiet
            del fmt, log_args

    return Handler


def cmd_serve(args: argparse.Namespace) -> int:
    session = Session(budget=args.budget, enforce_budget=args.enforce_budget)
    if args.stdio:
        for line in sys.stdin:
            line = line.strip()
            if not line:
                continue
            try:
                request = json.loads(line)
            except ValueError:
                response = session.malformed("line is not valid JSON")
            else:
                response = session.handle(request)
            sys.stdout.write(json.dumps(response))
            sys.stdout.write("\n")
            sys.stdout.flush()
        return 0
    server = ThreadingHTTPServer((args.host, args.port), _make_handler(session))
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# ----------------------------------------------------------------------
# bench


def cmd_bench(args: argparse.Namespace) -> int:
    rows = run_bench(squares=args.squares, repeat=args.repeat)
    print(format_rows(rows))
    return 0


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqpack",
        description="Online square-into-square packing engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pack", help="pack a sequence file")
    p.add_argument("input", help="sequence file, or - for stdin")
    p.add_argument("--verify", action="store_true",
                   help="run all audits on the final state")
    p.add_argument("--svg", metavar="PATH", help="write a final-state rendering")
    p.add_argument("--budget", type=float, default=0.375)
    p.add_argument("--enforce-budget", action="store_true",
                   help="reject squares that would exceed the budget")
    p.add_argument("--log", metavar="PATH",
                   help="write placement records here instead of stdout")
    p.set_defaults(fn=cmd_pack)

    f = sub.add_parser("fuzz", help="run seeded fuzz campaigns")
    f.add_argument("--runs", type=int, default=1000)
    f.add_argument("--seed", type=int, default=1, help="base seed")
    f.add_argument("--dist", default="uniform",
                   choices=[*DISTRIBUTIONS[:-1], "all"])
    f.add_argument("--budget", type=float, default=0.375)
    f.add_argument("--audit-all", action="store_true",
                   help="audit every final snapshot")
    f.add_argument("--allow-failures", action="store_true",
                   help="exit 0 even when runs fail (e.g. beyond-budget probes)")
    f.add_argument("--workers", type=int, default=0,
                   help="shard runs across this many processes")
    f.set_defaults(fn=cmd_fuzz)

    s = sub.add_parser("serve", help="serve the interactive session protocol")
    s.add_argument("--port", type=int, default=8373)
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--stdio", action="store_true",
                   help="speak newline-delimited JSON on stdio instead of HTTP")
    s.add_argument("--budget", type=float, default=0.375)
    s.add_argument("--enforce-budget", action="store_true")
    s.set_defaults(fn=cmd_serve)

    b = sub.add_parser("bench", help="compare kernel backends")
    b.add_argument("--squares", type=int, default=300)
    b.add_argument("--repeat", type=int, default=5)
    b.set_defaults(fn=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
