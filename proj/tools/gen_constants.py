"""Regenerate data/constants/*.txt and their .sha256 sidecars with mpmath.

File layout: first line is the integer part, second line the fractional digits.
"""
import hashlib
import pathlib
import sys

import mpmath

DIGITS = 12000
OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "constants"


def write(name, value):
    s = mpmath.nstr(value, DIGITS + 20, strip_zeros=False)
    ip, frac = s.split(".")
    body = f"{ip}\n{frac[:DIGITS]}\n"
    path = OUT / f"{name}.txt"
    path.write_text(body)
    digest = hashlib.sha256(body.encode()).hexdigest()
    (OUT / f"{name}.txt.sha256").write_text(f"{digest}  {name}.txt\n")
    print(name, digest)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    mpmath.mp.dps = DIGITS + 40
    write("pi", mpmath.pi)
    write("e", mpmath.e)
    write("zeta3", mpmath.zeta(3))
    write("catalan", mpmath.catalan)


if __name__ == "__main__":
    sys.exit(main())
