# tests/unit/helper/test_utils.py
"""Unit tests for helper/utils.py and helper/env.py."""

from scripts.helper.env import env_bool, env_float, env_int, user_path
from scripts.helper.utils import atomic_write_text, csv_text


class TestCsvText:
    def test_header_and_rows(self):
        text = csv_text(("t", "W"), [(0.0, 1.5), (0.01, 2.0)])
        assert text.splitlines() == [
            "t,W",
            "0.000000000000000e+00,1.500000000000000e+00",
            "1.000000000000000e-02,2.000000000000000e+00",
        ]
        assert text.endswith("\n")
        assert "\r" not in text

    def test_strings_pass_through(self):
        assert csv_text(("p", "v"), [("lambda", 0.8)]).splitlines()[1] == "lambda,8.000000000000000e-01"


class TestAtomicWriteText:
    def test_creates_parents(self, tmp_path):
        path = tmp_path / "a" / "b" / "out.csv"
        atomic_write_text(path, "x\n")
        assert path.read_bytes() == b"x\n"
        assert not (path.parent / "out.csv.tmp").exists()

    def test_overwrites(self, tmp_path):
        path = tmp_path / "out.csv"
        atomic_write_text(path, "old")
        atomic_write_text(path, "new")
        assert path.read_text() == "new"


class TestEnv:
    def test_env_bool(self, monkeypatch):
        monkeypatch.setenv("QBSIM_VERBOSE", "1")
        assert env_bool("QBSIM_VERBOSE") is True
        monkeypatch.setenv("QBSIM_VERBOSE", "yes")
        assert env_bool("QBSIM_VERBOSE") is False

    def test_env_int_fallback(self, monkeypatch):
        monkeypatch.setenv("QBSIM_WORKERS", "many")
        assert env_int("QBSIM_WORKERS", 4) == 4

    def test_env_float_rejects_non_positive(self, monkeypatch):
        monkeypatch.setenv("QBSIM_H", "-0.01")
        assert env_float("QBSIM_H", 0.01) == 0.01
        monkeypatch.setenv("QBSIM_H", "0.005")
        assert env_float("QBSIM_H", 0.01) == 0.005

    def test_user_path(self, monkeypatch, tmp_path):
        monkeypatch.setenv("USER_PWD", str(tmp_path))
        assert user_path("runs") == tmp_path / "runs"
        assert user_path(str(tmp_path / "abs")) == tmp_path / "abs"
