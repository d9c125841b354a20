"""Thin HTTP client for the service; the CLI is built on top of it.

Without a server URL the client drives the ASGI app in-process, so requests
still travel through the full HTTP layer (routing, validation,
serialization) but no running server is needed.
"""

from __future__ import annotations

from typing import Any, Mapping

import httpx

from .errors import HopecheckError


class ServiceError(HopecheckError):
    """A non-2xx service response, with the structured detail if present."""

    def __init__(self, status_code: int, detail):
        self.status_code = status_code
        self.detail = detail
        if isinstance(detail, Mapping) and "message" in detail:
            message = detail["message"]
        else:
            message = str(detail)
        super().__init__(message)


class ServiceClient:
    """Synchronous client; in-process by default, remote with ``server_url``."""

    def __init__(self, server_url: str | None = None):
        if server_url is None:
            from fastapi.testclient import TestClient

            from .service.app import create_app

            self._http = TestClient(create_app())
        else:
            self._http = httpx.Client(base_url=server_url, timeout=300.0)

    def close(self):
        self._http.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def _request(self, method: str, path: str, payload: dict | None = None) -> Any:
        response = self._http.request(method, path, json=payload)
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ServiceError(response.status_code, detail)
        return response.json()

    def health(self) -> dict:
        return self._request("GET", "/health")

    def check(self, model_doc: dict, formula: str, world: str | None = None) -> dict:
        payload = {"model": model_doc, "formula": formula}
        if world is not None:
            payload["world"] = world
        return self._request("POST", "/check", payload)

    def validate_model(self, model_doc: dict) -> dict:
        return self._request("POST", "/validate", {"model": model_doc})

    def validity(
        self,
        formula: str,
        agents: list[str],
        max_worlds: int = 3,
        max_models: int | None = None,
    ) -> dict:
        payload = {"formula": formula, "agents": agents, "maxWorlds": max_worlds}
        if max_models is not None:
            payload["maxModels"] = max_models
        return self._request("POST", "/validity", payload)

    def sat(
        self,
        formula: str,
        agents: list[str],
        max_worlds: int = 3,
        max_models: int | None = None,
    ) -> dict:
        payload = {"formula": formula, "agents": agents, "maxWorlds": max_worlds}
        if max_models is not None:
            payload["maxModels"] = max_models
        return self._request("POST", "/sat", payload)

    def axioms(
        self,
        model_doc: dict | None = None,
        samples: list[str] | None = None,
        bounds: dict | None = None,
    ) -> dict:
        payload: dict = {}
        if model_doc is not None:
            payload["model"] = model_doc
        if samples is not None:
            payload["samples"] = samples
        if bounds is not None:
            payload["bounds"] = bounds
        return self._request("POST", "/axioms", payload)

    def compile_runs(self, system_doc: dict) -> dict:
        return self._request("POST", "/compile-runs", {"system": system_doc})

    def puzzle(self, puzzle_doc: dict) -> dict:
        return self._request("POST", "/puzzle", puzzle_doc)

    def demo(self, name: str) -> dict:
        return self._request("POST", f"/demo/{name}")
