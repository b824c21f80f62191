"""Chat-completion gateway, backends, and deterministic mocks."""
from .gateway import (
    ChatBackend,
    ChatRequest,
    ChatResponse,
    HttpChatBackend,
    LlmGateway,
    cache_key,
)
from .interview_mock import InterviewMockBackend
from .mock import MockChatBackend
from .structured import complete_with_repair, extract_json_object

__all__ = [
    "ChatBackend",
    "ChatRequest",
    "ChatResponse",
    "HttpChatBackend",
    "InterviewMockBackend",
    "LlmGateway",
    "MockChatBackend",
    "cache_key",
    "complete_with_repair",
    "extract_json_object",
]
