"""Regenerate the packaged Sobol direction-number table.

The table follows the plain-text layout ``d s a m_1 ... m_s`` of the
Joe-Kuo ``new-joe-kuo-6`` files, one row per dimension starting at
dimension 2. Values are read from the copy of those numbers that
ships with SciPy, so no network access is needed.

Usage::

    python3 scripts/make_direction_table.py [DIMENSIONS] [OUTFILE]
"""

import os
import sys

import numpy as np
import scipy.stats


def main(argv):
    dims = int(argv[1]) if len(argv) > 1 else 1111
    out = argv[2] if len(argv) > 2 else os.path.join(
        os.path.dirname(__file__), "..", "src", "pce_sde", "data", "joe_kuo_1111.txt"
    )
    npz = np.load(os.path.join(os.path.dirname(scipy.stats.__file__),
                               "_sobol_direction_numbers.npz"))
    poly, vinit = npz["poly"], npz["vinit"]
    lines = ["d s a m_i"]
    for d in range(2, dims + 1):
        p = int(poly[d - 1])
        s = p.bit_length() - 1
        a = (p >> 1) & ((1 << (s - 1)) - 1)
        m = [int(v) for v in vinit[d - 1, :s]]
        lines.append(" ".join(str(v) for v in (d, s, a, *m)))
    with open(out, "w") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv)
