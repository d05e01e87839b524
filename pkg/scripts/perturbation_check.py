"""Exact half-gaps against the fifth-order prediction, and the zero-tuning scan.

For equal couplings g the printed deviation should shrink roughly like g^2.
The second table fixes g_R and scans g_CR / g_R through the predicted zero at 2.

    python scripts/perturbation_check.py
"""

import numpy as np

from magnon_qrm import perturbation as pt
from magnon_qrm.model import ModelParams
from magnon_qrm.spectrum import extract_geff


def main():
    print(" g      numeric     fifth order  deviation  omega0*     predicted")
    for g in (0.04, 0.06, 0.08, 0.10, 0.12):
        num, w = extract_geff(ModelParams.identical(3.0, g, g))
        ref = pt.geff_total_resonance(g, g, 1.0)
        print(f" {g:.2f}  {num:.4e}  {ref:.4e}   {100 * (num / ref - 1):+6.2f}%    "
              f"{w:.6f}  {pt.crossing_shift(g, g, 1.0):.6f}")

    g_r = 0.05
    print(f"\n g_CR/g_R   |g_eff| numeric   g_eff fifth order   (g_R = {g_r})")
    for ratio in np.linspace(1.0, 3.0, 9):
        num, _ = extract_geff(ModelParams.identical(3.0, g_r, ratio * g_r))
        print(f" {ratio:8.2f}   {num:.4e}        {pt.geff_total_resonance(g_r, ratio * g_r, 1.0):+.4e}")


if __name__ == "__main__":
    main()
