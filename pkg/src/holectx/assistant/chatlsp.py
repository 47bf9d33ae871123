"""ChatLSP: JSON-RPC 2.0 over stdio with LSP Content-Length framing.

Every chatlsp/ method answers {"text": ...}. Requests name a program by
manifest path and a hole by id, or by a 1-based cursor position.
"""

from __future__ import annotations

import json
import sys
from typing import BinaryIO, Optional

from ..contextualizer import contextualize
from ..prompt import ai_tutorial, serialize_headers, serialize_types
from ..statics import check_repo
from ..syntax.parser import ParseError
from ..syntax.printer import print_type
from ..syntax.repo import HoleNotFound, ManifestError, generative_hole, hole_at, load_manifest, parse_manifest
from .loop import error_report

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
DOMAIN_ERROR = -32000

CHATLSP_METHODS = (
    "chatlsp/aiTutorial",
    "chatlsp/expectedType",
    "chatlsp/retrieveRelevantTypes",
    "chatlsp/retrieveRelevantHeaders",
    "chatlsp/errorReport",
)


class RpcError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _error(id_, code, message) -> dict:
    return {"jsonrpc": "2.0", "id": id_, "error": {"code": code, "message": message}}


def _result(id_, result) -> dict:
    return {"jsonrpc": "2.0", "id": id_, "result": result}


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class Server:
    def __init__(self):
        self.shutdown_requested = False
        self.exited = False

    # -- dispatch

    def handle(self, msg) -> Optional[dict]:
        """Answer one decoded JSON-RPC message; None for notifications."""
        if not isinstance(msg, dict):
            return _error(None, INVALID_REQUEST, "request must be a JSON object")
        id_ = msg.get("id")
        if "id" in msg and not (id_ is None or isinstance(id_, str) or _is_int(id_)):
            return _error(None, INVALID_REQUEST, "id must be a string, an integer, or null")
        if msg.get("jsonrpc") != "2.0" or not isinstance(msg.get("method"), str):
            return _error(id_, INVALID_REQUEST, "expected a JSON-RPC 2.0 request with a method name")
        is_notification = "id" not in msg
        try:
            result = self.dispatch(msg["method"], msg.get("params"))
        except RpcError as e:
            return None if is_notification else _error(id_, e.code, e.message)
        except Exception as e:  # noqa: BLE001 - the server must never crash on input
            return None if is_notification else _error(id_, DOMAIN_ERROR, f"{type(e).__name__}: {e}")
        return None if is_notification else _result(id_, result)

    def dispatch(self, method: str, params):
        match method:
            case "initialize":
                return {
                    "capabilities": {"experimental": {"chatlsp": list(CHATLSP_METHODS)}},
                    "serverInfo": {"name": "holectx"},
                }
            case "initialized":
                return None
            case "shutdown":
                self.shutdown_requested = True
                return None
            case "exit":
                self.exited = True
                return None
            case "chatlsp/aiTutorial":
                return {"text": ai_tutorial()}
            case "chatlsp/errorReport":
                manifest = self.manifest(params)
                try:
                    sources = manifest.sources()
                except OSError as e:
                    raise RpcError(DOMAIN_ERROR, str(e)) from None
                return {"text": error_report(sources)}
            case "chatlsp/expectedType" | "chatlsp/retrieveRelevantTypes" | "chatlsp/retrieveRelevantHeaders":
                typed, hole_id = self.locate(params)
                try:
                    r = contextualize(typed, hole_id)
                except HoleNotFound as e:
                    raise RpcError(DOMAIN_ERROR, str(e)) from None
                if method == "chatlsp/expectedType":
                    return {"text": print_type(r.expected)}
                if method == "chatlsp/retrieveRelevantTypes":
                    return {"text": serialize_types(r.types)}
                return {"text": serialize_headers(r.headers)}
        raise RpcError(METHOD_NOT_FOUND, f"method not found: {method}")

    # -- parameters

    def manifest(self, params):
        if not isinstance(params, dict):
            raise RpcError(INVALID_PARAMS, "params must be an object with a manifestPath")
        path = params.get("manifestPath")
        if not isinstance(path, str) or not path:
            raise RpcError(INVALID_PARAMS, "manifestPath must be a non-empty string")
        try:
            return load_manifest(path)
        except (OSError, ManifestError, ValueError) as e:
            raise RpcError(DOMAIN_ERROR, str(e)) from None

    def locate(self, params):
        manifest = self.manifest(params)
        hole_id = params.get("holeId")
        line, char = params.get("line"), params.get("character")
        if hole_id is not None and not _is_int(hole_id):
            raise RpcError(INVALID_PARAMS, "holeId must be an integer")
        if (line is None) != (char is None) or (line is not None and not (_is_int(line) and _is_int(char))):
            raise RpcError(INVALID_PARAMS, "line and character must be given together as integers")
        file = params.get("file", manifest.sketch)
        if not isinstance(file, str):
            raise RpcError(INVALID_PARAMS, "file must be a string")
        try:
            repo = parse_manifest(manifest)
        except (OSError, ParseError) as e:
            raise RpcError(DOMAIN_ERROR, str(e)) from None
        try:
            if hole_id is None and line is not None:
                hole_id = hole_at(repo, file, line, char)
            elif hole_id is None:
                gen = generative_hole(repo)
                if gen is None:
                    raise HoleNotFound("??")
                hole_id = gen.id
        except HoleNotFound as e:
            raise RpcError(DOMAIN_ERROR, str(e)) from None
        typed, _ = check_repo(repo)
        return typed, hole_id


# ------------------------------------------------------------------ framing


def read_message(stream: BinaryIO) -> Optional[bytes]:
    """Read one framed body; None at end of input. Raises ValueError on a
    malformed header block."""
    length = None
    saw_header = False
    while True:
        line = stream.readline()
        if not line:
            if saw_header:
                raise EOFError("input ended inside a header block")
            return None
        line = line.rstrip(b"\r\n")
        if not line:
            if not saw_header:
                continue
            break
        saw_header = True
        name, sep, value = line.partition(b":")
        if not sep:
            raise ValueError(f"malformed header line: {line[:80]!r}")
        if name.strip().lower() == b"content-length":
            try:
                length = int(value.strip())
            except ValueError:
                raise ValueError("Content-Length is not an integer") from None
    if length is None or length < 0:
        raise ValueError("missing Content-Length header")
    body = stream.read(length)
    if len(body) < length:
        raise EOFError("input ended inside a message body")
    return body


def write_message(stream: BinaryIO, payload: dict) -> None:
    body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
    stream.write(b"Content-Length: %d\r\n\r\n" % len(body))
    stream.write(body)
    stream.flush()


def handle_body(server: Server, body: bytes) -> Optional[dict]:
    try:
        msg = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        return _error(None, PARSE_ERROR, f"parse error: {e}")
    if isinstance(msg, list):
        return _error(None, INVALID_REQUEST, "batch requests are not supported")
    return server.handle(msg)


def serve(instream: Optional[BinaryIO] = None, outstream: Optional[BinaryIO] = None) -> int:
    """Serve requests sequentially until input closes or `exit` arrives."""
    instream = instream or sys.stdin.buffer
    outstream = outstream or sys.stdout.buffer
    server = Server()
    while not server.exited:
        try:
            body = read_message(instream)
        except EOFError:
            break
        except ValueError as e:
            write_message(outstream, _error(None, PARSE_ERROR, str(e)))
            continue
        if body is None:
            break
        response = handle_body(server, body)
        if response is not None:
            write_message(outstream, response)
    return 0
