"""Audio boundary tests: WAV plumbing, mock STT/TTS inversion, HTTP providers."""
import io
import wave

import httpx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interviewkit.errors import (
    InvalidParams,
    ProviderUnavailable,
    UnsupportedFormat,
    UnsupportedLanguage,
    UnsupportedSampleRate,
)
from interviewkit.media import (
    KNOWN_LANGUAGES,
    SUPPORTED_SAMPLE_RATES,
    AudioSegment,
    HttpSttProvider,
    HttpTtsProvider,
    MockSttProvider,
    MockTtsProvider,
    Transcript,
    audio_to_wav_bytes,
    synthesize,
    transcribe,
    wav_bytes_to_audio,
)


def _tone(n: int = 1600, rate: int = 16000) -> AudioSegment:
    samples = (np.sin(np.linspace(0, 40, n)) * 1000).astype(np.int16)
    return AudioSegment(samples=samples, sample_rate=rate)


# ---------------------------------------------------------------- segments


def test_segment_validates_inputs():
    with pytest.raises(InvalidParams):
        AudioSegment(samples=np.array([], dtype=np.int16), sample_rate=16000)
    with pytest.raises(UnsupportedSampleRate):
        AudioSegment(samples=np.ones(10, dtype=np.int16), sample_rate=8000)


def test_segment_duration():
    seg = _tone(n=1600, rate=16000)
    assert seg.duration == pytest.approx(0.1, abs=1e-12)


@pytest.mark.parametrize("rate", SUPPORTED_SAMPLE_RATES)
def test_all_supported_rates_accepted(rate):
    assert AudioSegment(samples=np.ones(4, dtype=np.int16), sample_rate=rate).sample_rate == rate


# ---------------------------------------------------------------- wav round trip


def test_wav_round_trip_preserves_samples():
    seg = _tone()
    restored = wav_bytes_to_audio(audio_to_wav_bytes(seg))
    assert restored.sample_rate == seg.sample_rate
    assert np.array_equal(restored.samples, seg.samples)


@given(
    n=st.integers(min_value=1, max_value=4000),
    rate=st.sampled_from(SUPPORTED_SAMPLE_RATES),
    seed=st.integers(min_value=0, max_value=2**16),
)
@settings(max_examples=40, deadline=None)
def test_wav_round_trip_property(n, rate, seed):
    rng = np.random.default_rng(seed)
    samples = rng.integers(-32768, 32767, size=n, dtype=np.int16)
    seg = AudioSegment(samples=samples, sample_rate=rate)
    restored = wav_bytes_to_audio(audio_to_wav_bytes(seg))
    assert restored.sample_rate == rate
    assert np.array_equal(restored.samples, samples)


def test_wav_rejects_garbage():
    with pytest.raises(UnsupportedFormat):
        wav_bytes_to_audio(b"definitely not RIFF data")


def test_wav_rejects_stereo():
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wav:
        wav.setnchannels(2)
        wav.setsampwidth(2)
        wav.setframerate(16000)
        wav.writeframes(b"\x00\x00" * 64)
    with pytest.raises(UnsupportedFormat):
        wav_bytes_to_audio(buf.getvalue())


def test_wav_rejects_8_bit():
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(1)
        wav.setframerate(16000)
        wav.writeframes(b"\x00" * 64)
    with pytest.raises(UnsupportedFormat):
        wav_bytes_to_audio(buf.getvalue())


# ---------------------------------------------------------------- mock providers


def test_mock_tts_then_stt_is_identity():
    tts, stt = MockTtsProvider(), MockSttProvider()
    audio = synthesize("hello world", "en", "narrator", tts)
    result = transcribe(audio, stt)
    assert result.text == "hello world"
    assert result.detected_language == "en"
    assert result.segment_timestamps == ((0.0, audio.duration),)


def test_mock_identity_survives_wav_round_trip():
    tts, stt = MockTtsProvider(), MockSttProvider()
    audio = synthesize("面接の練習を続けます", "ja", "narrator", tts)
    restored = wav_bytes_to_audio(audio_to_wav_bytes(audio), language_hint="ja")
    result = transcribe(restored, stt)
    assert result.text == "面接の練習を続けます"
    assert result.detected_language == "ja"


@given(st.text(min_size=1, max_size=300))
@settings(max_examples=60, deadline=None)
def test_mock_round_trip_identity_property(text):
    tts, stt = MockTtsProvider(), MockSttProvider()
    audio = synthesize(text, "en", "v", tts)
    assert transcribe(audio, stt).text == text


def test_mock_tts_duration_tracks_text_length():
    tts = MockTtsProvider()
    audio = tts.synthesize("hello world", "en", "v")
    assert audio.duration == pytest.approx(0.11, abs=1e-9)
    assert audio.sample_rate == 16000


def test_mock_tts_rejects_unknown_language():
    with pytest.raises(UnsupportedLanguage):
        MockTtsProvider().synthesize("bonjour", "fr", "v")


def test_mock_tts_rejects_unsupported_rate():
    with pytest.raises(UnsupportedSampleRate):
        MockTtsProvider(sample_rate=8000)


@pytest.mark.parametrize("rate", SUPPORTED_SAMPLE_RATES)
def test_mock_round_trip_at_all_rates(rate):
    tts, stt = MockTtsProvider(sample_rate=rate), MockSttProvider()
    audio = tts.synthesize("rate check", "en", "v")
    assert audio.sample_rate == rate
    assert stt.transcribe(audio).text == "rate check"


def test_plain_audio_reads_as_silence():
    result = MockSttProvider().transcribe(_tone())
    assert result == Transcript(text="", detected_language="other", segment_timestamps=())


def test_silence_keeps_language_hint():
    seg = AudioSegment(samples=np.ones(64, dtype=np.int16), sample_rate=16000, language_hint="ja")
    assert MockSttProvider().transcribe(seg).detected_language == "ja"


def test_synthesize_rejects_empty_text():
    with pytest.raises(InvalidParams):
        synthesize("", "en", "v", MockTtsProvider())


def test_transcribe_hint_wins_over_detection():
    tts = MockTtsProvider()
    audio = tts.synthesize("hello", "en", "v")
    hinted = AudioSegment(samples=audio.samples, sample_rate=audio.sample_rate, language_hint="ja")
    assert transcribe(hinted, MockSttProvider()).detected_language == "ja"


def test_transcribe_unknown_detection_maps_to_other():
    class OddStt:
        def transcribe(self, audio):
            return Transcript(text="x", detected_language="xx", segment_timestamps=())

    assert transcribe(_tone(), OddStt()).detected_language == "other"
    assert "other" in KNOWN_LANGUAGES


# ---------------------------------------------------------------- http providers


def test_http_stt_round_trip():
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        seen["content_type"] = request.headers["Content-Type"]
        seen["hint"] = request.headers.get("X-Language-Hint")
        seen["wav"] = request.content
        return httpx.Response(
            200,
            json={"text": "spoken words", "language": "en", "segments": [[0.0, 1.5]]},
        )

    provider = HttpSttProvider(
        "http://stt.test/transcribe",
        client=httpx.Client(transport=httpx.MockTransport(handler)),
    )
    seg = AudioSegment(samples=np.ones(16, dtype=np.int16), sample_rate=16000, language_hint="en")
    result = provider.transcribe(seg)
    assert result.text == "spoken words"
    assert result.segment_timestamps == ((0.0, 1.5),)
    assert seen["content_type"] == "audio/wav"
    assert seen["hint"] == "en"
    assert np.array_equal(wav_bytes_to_audio(seen["wav"]).samples, seg.samples)


def test_http_stt_maps_failures():
    failing = HttpSttProvider(
        "http://stt.test", client=httpx.Client(transport=httpx.MockTransport(
            lambda request: httpx.Response(500)
        ))
    )
    with pytest.raises(ProviderUnavailable):
        failing.transcribe(_tone())

    malformed = HttpSttProvider(
        "http://stt.test", client=httpx.Client(transport=httpx.MockTransport(
            lambda request: httpx.Response(200, json={"nope": 1})
        ))
    )
    with pytest.raises(ProviderUnavailable):
        malformed.transcribe(_tone())

    def boom(request):
        raise httpx.ConnectError("no route")

    unreachable = HttpSttProvider(
        "http://stt.test", client=httpx.Client(transport=httpx.MockTransport(boom))
    )
    with pytest.raises(ProviderUnavailable):
        unreachable.transcribe(_tone())


def test_http_tts_round_trip():
    seen = {}

    def handler(request: httpx.Request) -> httpx.Response:
        import json

        seen["body"] = json.loads(request.content)
        wav = audio_to_wav_bytes(_tone(n=320))
        return httpx.Response(200, content=wav)

    provider = HttpTtsProvider(
        "http://tts.test/speak",
        client=httpx.Client(transport=httpx.MockTransport(handler)),
    )
    audio = provider.synthesize("say this", "en", "narrator")
    assert audio.samples.size == 320
    assert seen["body"] == {"text": "say this", "language": "en", "voice": "narrator"}


def test_http_tts_maps_failures():
    failing = HttpTtsProvider(
        "http://tts.test", client=httpx.Client(transport=httpx.MockTransport(
            lambda request: httpx.Response(503)
        ))
    )
    with pytest.raises(ProviderUnavailable):
        failing.synthesize("x", "en", "v")

    bad_wav = HttpTtsProvider(
        "http://tts.test", client=httpx.Client(transport=httpx.MockTransport(
            lambda request: httpx.Response(200, content=b"not audio")
        ))
    )
    with pytest.raises(UnsupportedFormat):
        bad_wav.synthesize("x", "en", "v")
