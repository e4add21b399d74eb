# scripts/helper/utils.py
import csv
import io
from pathlib import Path
from typing import Iterable, Sequence


def atomic_write_text(path: Path, text: str) -> None:
    """
    Writes text to a file atomically by writing to a .tmp file first and then renaming.
    Example: path="foo.csv" -> writes "foo.csv.tmp" -> renames to "foo.csv".
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="")
    tmp.replace(path)


def fmt_num(x: float) -> str:
    # 16 significant digits, fixed width exponent; byte-stable across reruns
    return f"{float(x):.15e}"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """CSV with '\\n' line endings; floats via fmt_num, everything else via str."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_num(v) if isinstance(v, float) else str(v) for v in row])
    return buf.getvalue()
