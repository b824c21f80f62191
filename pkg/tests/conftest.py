import pytest
from fastapi.testclient import TestClient

from interviewkit.config import BackendConfig, ServiceConfig
from interviewkit.llm.gateway import LlmGateway
from interviewkit.llm.interview_mock import InterviewMockBackend
from interviewkit.service.app import create_app

RESUME_TEXT = """\
Jordan Alvarez
Senior platform engineer with nine years building distributed systems.

Led a team of five migrating payment services to Kubernetes, cutting deploy \
time by 70 percent.

Designed observability tooling in Python and Go adopted across four product \
teams.

Skills: Python, Go, Kubernetes, Terraform, PostgreSQL, incident response.

Education: BS Computer Science, University of Washington, 2015.
"""

JD_TEXT = """\
Staff Infrastructure Engineer

We build the internal compute platform serving 300 engineers.

You will own the Kubernetes fleet, lead incident response practices, and \
mentor senior engineers.

Requirements: 7+ years infrastructure experience, deep Kubernetes and \
Terraform knowledge, strong Python, experience running postmortems.

Benefits: remote-first, learning budget, on-call rotation with comp time.
"""


class StepClock:
    """Deterministic clock: each call advances by a fixed step."""

    def __init__(self, start: float = 1_000_000.0, step: float = 1.0):
        self.value = start
        self.step = step

    def __call__(self) -> float:
        self.value += self.step
        return self.value


def make_mock_gateway(**kwargs) -> LlmGateway:
    gateway = LlmGateway(**kwargs)
    gateway.register_backend(
        BackendConfig(backend_id="mock"), transport=InterviewMockBackend()
    )
    return gateway


def upload(client: TestClient, name: str, data: bytes, kind: str, language: str = "en"):
    return client.post(
        "/documents",
        files={"file": (name, data)},
        data={"kind": kind, "language": language},
    )


@pytest.fixture
def step_clock() -> StepClock:
    return StepClock()


@pytest.fixture
def mock_gateway() -> LlmGateway:
    return make_mock_gateway()


@pytest.fixture
def service_client(tmp_path):
    """Factory for a TestClient over a fully mocked service."""

    def factory(config: ServiceConfig | None = None, clock=None) -> TestClient:
        cfg = config or ServiceConfig(data_dir=str(tmp_path / "data"))
        app = create_app(cfg, use_mock=True, clock=clock or StepClock())
        return TestClient(app)

    return factory
