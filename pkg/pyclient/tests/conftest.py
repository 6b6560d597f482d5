"""Fixtures that run the real service as a subprocess.

Every test exercises the SDK against live HTTP; nothing here imports the
service's internals.
"""

from __future__ import annotations

import socket
import subprocess
import sys
import time
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any

import httpx
import pytest

CLI = (sys.executable, "-m", "memengine.interface.cli")
BASE_TS = datetime(2025, 1, 1, tzinfo=timezone.utc)
READY_TIMEOUT_S = 30.0


def event_doc(index: int, text: str, *, conversation_id: str = "conv-0",
              speaker: str = "Avery", modality: str = "text",
              **extra: Any) -> dict[str, Any]:
    """A wire-format event; timestamps advance one minute per index."""
    stamp = (BASE_TS + timedelta(minutes=index)).strftime("%Y-%m-%dT%H:%M:%SZ")
    return {
        "conversation_id": conversation_id,
        "speaker": speaker,
        "timestamp": stamp,
        "modality": modality,
        "text": text,
        **extra,
    }


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def run_cli(*args: str) -> str:
    proc = subprocess.run([*CLI, *args], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


@dataclass
class Service:
    base_url: str
    store: Path
    proc: subprocess.Popen


@pytest.fixture
def service_factory(tmp_path):
    """Start service processes on per-test stores; stop them at teardown."""
    procs: list[subprocess.Popen] = []

    def start(subdir: str = "store", *, init: bool = True) -> Service:
        store = tmp_path / subdir
        if init and not (store / "config.json").exists():
            run_cli("init", "--store", str(store))
        port = free_port()
        proc = subprocess.Popen(
            [*CLI, "serve", "--store", str(store),
             "--addr", f"127.0.0.1:{port}"],
            stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
        procs.append(proc)
        base_url = f"http://127.0.0.1:{port}"
        deadline = time.monotonic() + READY_TIMEOUT_S
        while time.monotonic() < deadline:
            if proc.poll() is not None:
                raise RuntimeError(f"service exited with {proc.returncode}")
            try:
                if httpx.get(base_url + "/healthz", timeout=1.0).status_code == 200:
                    return Service(base_url=base_url, store=store, proc=proc)
            except httpx.TransportError:
                time.sleep(0.05)
        raise RuntimeError("service never became ready")

    yield start
    for proc in procs:
        proc.terminate()
    for proc in procs:
        try:
            proc.wait(timeout=10)
        except subprocess.TimeoutExpired:
            proc.kill()
