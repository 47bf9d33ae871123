"""The completion trialogue and the ChatLSP service."""

from ..prompt import ai_tutorial
from .chatlsp import Server, serve
from .clients import ClientError, HttpClient, LLMClient, ReplayClient, ScriptedClient, make_client
from .loop import CompletionResult, EmptyReply, complete, error_report, extract_fragment

__all__ = [
    "ClientError", "CompletionResult", "EmptyReply", "HttpClient", "LLMClient", "ReplayClient",
    "ScriptedClient", "Server", "ai_tutorial", "complete", "error_report", "extract_fragment",
    "make_client", "serve",
]
