from __future__ import annotations

import os
from pathlib import Path

def load_repo_dotenv() -> None:
    """
    Load .env from repo root if present. No-op if missing.
    """
    try:
        from dotenv import load_dotenv
    except Exception:
        return

    repo_root = Path(__file__).resolve().parents[2]  # scripts/helper -> scripts -> repo
    env_path = repo_root / ".env"
    if env_path.exists():
        load_dotenv(env_path)


def env_bool(name: str, default: str = "0") -> bool:
    return os.getenv(name, default).strip() == "1"


def env_int(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, str(default)).strip())
    except Exception:
        return default


def env_float(name: str, default: float) -> float:
    """Float env var; falls back to default when unset, unparsable or non-positive."""
    try:
        value = float(os.getenv(name, str(default)).strip())
    except Exception:
        return default
    return value if value > 0 else default


def user_path(raw: str) -> Path:
    """Resolve relative paths against USER_PWD (set by the bin/ wrappers), else cwd."""
    path = Path(raw).expanduser()
    if not path.is_absolute():
        path = Path(os.environ.get("USER_PWD", os.getcwd())) / path
    return path


def env_path(name: str, default: str) -> Path:
    return user_path(os.getenv(name, default).strip() or default)
