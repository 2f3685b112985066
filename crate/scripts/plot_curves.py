#!/usr/bin/env python3
"""Plot fidelity curves produced by `cpulse curve` (two panels: identity and ideal θ)."""
import subprocess
import sys
from io import StringIO

import matplotlib.pyplot as plt
import numpy as np

CPULSE = sys.argv[1] if len(sys.argv) > 1 else "target/release/cpulse"
OUT = sys.argv[2] if len(sys.argv) > 2 else "curves.png"


def curve(family, ideal, gmin, gmax):
    csv = subprocess.run(
        [CPULSE, "curve", "--family", family, "--theta", "90", "--ideal", str(ideal),
         "--gmin", str(gmin), "--gmax", str(gmax), "--samples", "801"],
        check=True, capture_output=True, text=True,
    ).stdout
    data = np.loadtxt(StringIO(csv), delimiter=",", skiprows=1)
    return data[:, 0], data[:, 1]


fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
for family, style in [("simple", "k--"), ("nb1", "g:"), ("pb1", "r-")]:
    left.plot(*curve(family, 0, -2, 0), style, label=family)
for family, style in [("simple", "k--"), ("bb1", "b:"), ("pb1", "r-")]:
    right.plot(*curve(family, 90, -1, 1), style, label=family)
left.set_title("against the identity")
right.set_title("against a 90° rotation")
for ax in (left, right):
    ax.set_xlabel("g")
    ax.set_ylabel("F")
    ax.legend()
fig.tight_layout()
fig.savefig(OUT, dpi=120)
print(f"wrote {OUT}")
