"""Speech-to-text and text-to-speech boundaries.

Real models run as sidecar HTTP services; this module ships the wire
contract plus deterministic mocks. The mock TTS hides its input text in the
low byte of the tone samples, and the mock STT reads it back, so
transcribe(synthesize(text)) == text — the round-trip the voice-pipeline
tests lean on, with silence decoding to empty text.
"""
from __future__ import annotations

import io
import json
import wave
from dataclasses import dataclass
from typing import Protocol, Sequence

import httpx
import numpy as np

from .errors import (
    InvalidParams,
    ProviderUnavailable,
    UnsupportedFormat,
    UnsupportedLanguage,
    UnsupportedSampleRate,
)

SUPPORTED_SAMPLE_RATES = (16000, 24000, 48000)
KNOWN_LANGUAGES = ("en", "ja", "other")

_MOCK_MAGIC = b"IVKM"


@dataclass(frozen=True)
class AudioSegment:
    """Mono 16-bit PCM audio."""

    samples: np.ndarray
    sample_rate: int
    language_hint: str | None = None

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.int16)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidParams("audio needs a non-empty 1-D sample array")
        if self.sample_rate not in SUPPORTED_SAMPLE_RATES:
            raise UnsupportedSampleRate(
                f"sample rate {self.sample_rate} not in {SUPPORTED_SAMPLE_RATES}"
            )
        object.__setattr__(self, "samples", arr)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class Transcript:
    text: str
    detected_language: str
    segment_timestamps: tuple[tuple[float, float], ...] = ()


class SttProvider(Protocol):
    def transcribe(self, audio: AudioSegment) -> Transcript: ...


class TtsProvider(Protocol):
    def synthesize(self, text: str, language: str, voice_id: str) -> AudioSegment: ...


# -- WAV plumbing -------------------------------------------------------------

def audio_to_wav_bytes(segment: AudioSegment) -> bytes:
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(segment.sample_rate)
        wav.writeframes(segment.samples.astype("<i2").tobytes())
    return buf.getvalue()


def wav_bytes_to_audio(data: bytes, language_hint: str | None = None) -> AudioSegment:
    try:
        with wave.open(io.BytesIO(data), "rb") as wav:
            channels = wav.getnchannels()
            width = wav.getsampwidth()
            rate = wav.getframerate()
            frames = wav.readframes(wav.getnframes())
    except (wave.Error, EOFError) as exc:
        raise UnsupportedFormat(f"payload is not a readable WAV file: {exc}") from exc
    if channels != 1 or width != 2:
        raise UnsupportedFormat(
            f"expected mono 16-bit PCM, got {channels} channel(s) at {8 * width} bits"
        )
    samples = np.frombuffer(frames, dtype="<i2").astype(np.int16)
    return AudioSegment(samples=samples, sample_rate=rate, language_hint=language_hint)


# -- operations ----------------------------------------------------------------

def _normalize_language(lang: str | None, fallback: str | None) -> str:
    if fallback:
        return fallback
    if lang in KNOWN_LANGUAGES:
        return lang
    return "other"


def transcribe(audio: AudioSegment, stt: SttProvider) -> Transcript:
    """Run STT; the declared hint wins over provider detection."""
    result = stt.transcribe(audio)
    language = _normalize_language(result.detected_language, audio.language_hint)
    return Transcript(
        text=result.text,
        detected_language=language,
        segment_timestamps=result.segment_timestamps,
    )


def synthesize(
    text: str, language: str, voice_id: str, tts: TtsProvider
) -> AudioSegment:
    """Run TTS on non-empty text."""
    if not text:
        raise InvalidParams("cannot synthesize empty text")
    return tts.synthesize(text, language, voice_id)


# -- HTTP providers --------------------------------------------------------------

class HttpSttProvider:
    """POST WAV bytes → JSON {text, language, segments}."""

    def __init__(self, url: str, client: httpx.Client | None = None, timeout: float = 60.0):
        self.url = url
        self.timeout = timeout
        self._client = client or httpx.Client()

    def transcribe(self, audio: AudioSegment) -> Transcript:
        headers = {"Content-Type": "audio/wav"}
        if audio.language_hint:
            headers["X-Language-Hint"] = audio.language_hint
        try:
            resp = self._client.post(
                self.url,
                content=audio_to_wav_bytes(audio),
                headers=headers,
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"STT unreachable: {type(exc).__name__}") from exc
        if resp.status_code != 200:
            raise ProviderUnavailable(f"STT returned HTTP {resp.status_code}")
        try:
            data = resp.json()
            segments = tuple(
                (float(s[0]), float(s[1])) for s in data.get("segments", [])
            )
            return Transcript(
                text=str(data["text"]),
                detected_language=str(data.get("language", "")),
                segment_timestamps=segments,
            )
        except (ValueError, LookupError, TypeError) as exc:
            raise ProviderUnavailable("STT returned a malformed body") from exc


class HttpTtsProvider:
    """POST {text, language, voice} → WAV bytes."""

    def __init__(self, url: str, client: httpx.Client | None = None, timeout: float = 60.0):
        self.url = url
        self.timeout = timeout
        self._client = client or httpx.Client()

    def synthesize(self, text: str, language: str, voice_id: str) -> AudioSegment:
        try:
            resp = self._client.post(
                self.url,
                json={"text": text, "language": language, "voice": voice_id},
                timeout=self.timeout,
            )
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"TTS unreachable: {type(exc).__name__}") from exc
        if resp.status_code != 200:
            raise ProviderUnavailable(f"TTS returned HTTP {resp.status_code}")
        return wav_bytes_to_audio(resp.content)


# -- deterministic mocks -----------------------------------------------------------

def _encode_payload(samples: np.ndarray, payload: bytes) -> None:
    if len(payload) > samples.size:
        raise InvalidParams("mock audio too short to carry its payload")
    view = samples.view(np.uint16)
    carried = np.frombuffer(payload, dtype=np.uint8).astype(np.uint16)
    view[: len(payload)] = (view[: len(payload)] & 0xFF00) | carried


def _decode_payload(samples: np.ndarray) -> bytes | None:
    low = (samples.view(np.uint16) & 0x00FF).astype(np.uint8).tobytes()
    if not low.startswith(_MOCK_MAGIC):
        return None
    if len(low) < len(_MOCK_MAGIC) + 4:
        return None
    (length,) = np.frombuffer(
        low[len(_MOCK_MAGIC) : len(_MOCK_MAGIC) + 4], dtype="<u4"
    )
    start = len(_MOCK_MAGIC) + 4
    if start + int(length) > len(low):
        return None
    return low[start : start + int(length)]


class MockTtsProvider:
    """Fixed 440 Hz tone; 10 ms of audio per character; text hidden in the
    sample low bytes so the mock STT can invert it."""

    def __init__(self, sample_rate: int = 16000, languages: Sequence[str] = ("en", "ja")):
        if sample_rate not in SUPPORTED_SAMPLE_RATES:
            raise UnsupportedSampleRate(f"sample rate {sample_rate} unsupported")
        self.sample_rate = sample_rate
        self.languages = tuple(languages)

    def synthesize(self, text: str, language: str, voice_id: str) -> AudioSegment:
        if language not in self.languages:
            raise UnsupportedLanguage(
                f"mock TTS speaks {self.languages}, not {language!r}"
            )
        payload = json.dumps(
            {"text": text, "language": language, "voice": voice_id},
            ensure_ascii=False,
        ).encode("utf-8")
        n = max(
            int(self.sample_rate * 0.01 * max(1, len(text))),
            len(payload) + len(_MOCK_MAGIC) + 4,
        )
        t = np.arange(n, dtype=np.float64) / self.sample_rate
        tone = (np.sin(2.0 * np.pi * 440.0 * t) * 8000.0).astype(np.int16)
        framed = _MOCK_MAGIC + np.uint32(len(payload)).tobytes() + payload
        _encode_payload(tone, framed)
        return AudioSegment(
            samples=tone, sample_rate=self.sample_rate, language_hint=language
        )


class MockSttProvider:
    """Inverts MockTtsProvider; anything without the hidden payload is
    treated as silence."""

    def transcribe(self, audio: AudioSegment) -> Transcript:
        payload = _decode_payload(audio.samples)
        if payload is None:
            return Transcript(
                text="",
                detected_language=audio.language_hint or "other",
                segment_timestamps=(),
            )
        try:
            data = json.loads(payload.decode("utf-8"))
            text = str(data["text"])
            language = str(data.get("language", "")) or "other"
        except (ValueError, KeyError) as exc:
            raise ProviderUnavailable("mock payload is malformed") from exc
        return Transcript(
            text=text,
            detected_language=language,
            segment_timestamps=((0.0, audio.duration),) if text else (),
        )
