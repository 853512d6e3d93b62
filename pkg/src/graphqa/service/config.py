"""Service configuration.

One YAML file describes the graph inputs, entity and preprocessing
resources, backend selection, and server settings. Relative paths are
resolved against the config file's directory, and every referenced file
must exist at load time so a bad deployment fails at startup, not on the
first request. Credentials never live in the file; the config names an
environment variable instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml


class ConfigError(ValueError):
    pass


_FORBIDDEN_BACKEND_KEYS = ("api_key", "token", "secret", "password")

BACKEND_KINDS = ("scripted", "live")


@dataclass
class ServiceConfig:
    nodes_file: Path
    edges_file: Path
    relation_descriptions_file: Path | None = None
    parent_child_file: Path | None = None
    preferred_terms_file: Path | None = None
    vocabulary_file: Path | None = None
    synonyms_file: Path | None = None
    deprecation_rules_file: Path | None = None
    template_dir: Path | None = None
    dataset_file: Path | None = None
    backend_kind: str = "scripted"
    backend_script_file: Path | None = None
    endpoint: str | None = None
    model: str | None = None
    api_key_env: str = "GRAPHQA_API_KEY"
    host: str = "127.0.0.1"
    port: int = 8000
    parallelism: int = 4
    cors_origins: list[str] = field(default_factory=lambda: ["*"])
    frontend_dir: Path | None = None


def _resolve(base: Path, value, key: str, must_exist: bool = True) -> Path:
    path = Path(value)
    if not path.is_absolute():
        path = base / path
    if must_exist and not path.exists():
        raise ConfigError(f"{key}: file not found: {path}")
    return path


def _section(data: dict, name: str) -> dict:
    section = data.get(name) or {}
    if not isinstance(section, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    return section


def load_config(path: str | Path) -> ServiceConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    base = path.parent
    data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")

    graph = _section(data, "graph")
    for key in ("nodes", "edges"):
        if not graph.get(key):
            raise ConfigError(f"graph.{key} is required")

    entities = _section(data, "entities")
    preprocess = _section(data, "preprocess")
    backend = _section(data, "backend")
    server = _section(data, "server")
    prompts = _section(data, "prompts")
    evaluation = _section(data, "eval")

    for key in _FORBIDDEN_BACKEND_KEYS:
        if key in backend:
            raise ConfigError(
                f"backend.{key} must not be stored in the config file; set "
                "backend.api_key_env to the name of an environment variable"
            )

    backend_kind = backend.get("kind", "scripted")
    if backend_kind not in BACKEND_KINDS:
        raise ConfigError(f"backend.kind must be one of {BACKEND_KINDS}")
    if backend_kind == "live":
        for key in ("endpoint", "model"):
            if not backend.get(key):
                raise ConfigError(f"backend.{key} is required when backend.kind is live")

    def optional(section: dict, key: str, label: str, must_exist: bool = True) -> Path | None:
        value = section.get(key)
        return _resolve(base, value, label, must_exist) if value else None

    config = ServiceConfig(
        nodes_file=_resolve(base, graph["nodes"], "graph.nodes"),
        edges_file=_resolve(base, graph["edges"], "graph.edges"),
        relation_descriptions_file=optional(
            graph, "relation_descriptions", "graph.relation_descriptions"
        ),
        parent_child_file=optional(graph, "parent_child", "graph.parent_child"),
        preferred_terms_file=optional(graph, "preferred_terms", "graph.preferred_terms"),
        vocabulary_file=optional(entities, "vocabulary", "entities.vocabulary"),
        synonyms_file=optional(preprocess, "synonyms", "preprocess.synonyms"),
        deprecation_rules_file=optional(
            preprocess, "deprecation_rules", "preprocess.deprecation_rules"
        ),
        template_dir=optional(prompts, "template_dir", "prompts.template_dir"),
        dataset_file=optional(evaluation, "dataset", "eval.dataset"),
        backend_kind=backend_kind,
        backend_script_file=optional(backend, "script", "backend.script"),
        endpoint=backend.get("endpoint"),
        model=backend.get("model"),
        api_key_env=backend.get("api_key_env", "GRAPHQA_API_KEY"),
        host=server.get("host", "127.0.0.1"),
        port=int(server.get("port", 8000)),
        parallelism=int(server.get("parallelism", 4)),
        cors_origins=list(server.get("cors_origins", ["*"])),
        frontend_dir=optional(server, "frontend_dir", "server.frontend_dir"),
    )
    if config.backend_kind == "scripted" and config.backend_script_file is None:
        raise ConfigError("backend.script is required when backend.kind is scripted")
    if config.template_dir is not None and not config.template_dir.is_dir():
        raise ConfigError(f"prompts.template_dir is not a directory: {config.template_dir}")
    if config.frontend_dir is not None and not config.frontend_dir.is_dir():
        raise ConfigError(f"server.frontend_dir is not a directory: {config.frontend_dir}")
    if config.parallelism < 1:
        raise ConfigError("server.parallelism must be at least 1")
    return config
