#!/usr/bin/env python3
"""Place the MovieLens 100k files (u.data, u.item, u.user, u.occupation, u.genre)
in data/ml-100k.

Downloads the official archive when grouplens.org is reachable. Otherwise
rebuilds the same files from the parquet copy bundled in the pytorch-widedeep
wheel (fetched with pip, needs pandas and pyarrow).
"""

import argparse
import io
import math
import pathlib
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

URL = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"
FILES = ["u.data", "u.item", "u.user", "u.occupation", "u.genre"]
WHEEL = "pytorch-widedeep==1.7.0"
PREFIX = "pytorch_widedeep/datasets/data/MovieLens100k_"
GENRES = [
    "unknown", "Action", "Adventure", "Animation", "Children's", "Comedy", "Crime",
    "Documentary", "Drama", "Fantasy", "Film-Noir", "Horror", "Musical", "Mystery",
    "Romance", "Sci-Fi", "Thriller", "War", "Western",
]


def from_grouplens(out: pathlib.Path) -> bool:
    try:
        raw = urllib.request.urlopen(URL, timeout=20).read()
    except OSError as e:
        print(f"grouplens unreachable: {e}", file=sys.stderr)
        return False
    with zipfile.ZipFile(io.BytesIO(raw)) as z:
        for name in FILES:
            (out / name).write_bytes(z.read(f"ml-100k/{name}"))
    return True


def text(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return str(v)


def from_wheel(out: pathlib.Path) -> None:
    import pandas as pd

    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "-d", tmp, WHEEL],
            check=True,
        )
        wheel = next(pathlib.Path(tmp).glob("*.whl"))
        with zipfile.ZipFile(wheel) as z:
            frame = {k: pd.read_parquet(io.BytesIO(z.read(f"{PREFIX}{k}.parquet.brotli"))) for k in ("data", "items", "users")}

    data = frame["data"]
    with open(out / "u.data", "w", encoding="latin-1", newline="\n") as f:
        for r in data.itertuples(index=False):
            f.write(f"{r.user_id}\t{r.movie_id}\t{r.rating}\t{r.timestamp}\n")

    items = frame["items"]
    with open(out / "u.item", "w", encoding="latin-1", newline="\n") as f:
        for r in items.itertuples(index=False):
            row = [str(r[0]), text(r[1]), text(r[2]), text(r[3]), text(r[4])]
            row += [str(int(x)) for x in r[5:]]
            f.write("|".join(row) + "\n")

    users = frame["users"]
    with open(out / "u.user", "w", encoding="latin-1", newline="\n") as f:
        for r in users.itertuples(index=False):
            f.write(f"{r.user_id}|{r.age}|{r.gender}|{r.occupation}|{r.zip_code}\n")

    (out / "u.occupation").write_text("".join(f"{o}\n" for o in sorted(set(users["occupation"]))))
    (out / "u.genre").write_text("".join(f"{g}|{i}\n" for i, g in enumerate(GENRES)) + "\n")
    assert list(items.columns[5:]) == GENRES, items.columns


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data" / "ml-100k", type=pathlib.Path)
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    if not from_grouplens(args.out):
        from_wheel(args.out)
    for name in FILES:
        lines = (args.out / name).read_bytes().count(b"\n")
        print(f"{name}: {lines} lines")


if __name__ == "__main__":
    main()
