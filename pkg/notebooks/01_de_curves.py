# Asymptotic error probability of the 7-level offset min-sum decoder on the
# (3,5) ensemble, noiseless and with sign-preserving hardware noise.
#
#   python notebooks/01_de_curves.py > de_curves.csv

import numpy as np

from faidlab import NoiseParams, make_decoder, published_lut, sample_pe_curve
from faidlab.de import de_trajectory

dec = make_decoder(published_lut("offset-ms"), 5)

# a few trajectories first: below the threshold pe falls to 0, above it stalls
for alpha in (0.05, 0.09, 0.1):
    traj = de_trajectory(alpha, dec, NoiseParams.noiseless(), 30)
    print(f"# alpha={alpha}: pe after 1, 10, 30 iterations =", [f"{traj[i]:.2e}" for i in (0, 9, 29)])

noises = {
    "noiseless": NoiseParams.noiseless(),
    "sp pv=1e-3": NoiseParams.sp(1e-3),
    "sp pv=1e-2": NoiseParams.sp(1e-2, 1e-3, 1e-3),
    "sp pv=5e-2": NoiseParams.sp(5e-2, 1e-3, 1e-3),
}
curves = {name: sample_pe_curve(dec, nz, 0.0, 0.15, 2.5e-3) for name, nz in noises.items()}

print("alpha," + ",".join(curves))
grid = next(iter(curves.values())).grid
for i, a in enumerate(grid):
    print(f"{a:.4f}," + ",".join(f"{c.pe[i]:.6e}" for c in curves.values()))

# the largest one-step jump marks the discontinuity; it vanishes for large p_v
for name, c in curves.items():
    jumps = np.diff(c.pe)
    k = int(np.nanargmax(jumps))
    print(f"# {name}: largest jump {jumps[k]:.3f} between {grid[k]:.4f} and {grid[k + 1]:.4f}")
